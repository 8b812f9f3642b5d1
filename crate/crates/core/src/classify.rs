//! Classification of permutative endomorphisms of O_2: branching laws as
//! invariants, conjugacy, equality after restriction to the UHF core,
//! relative commutants, and the recomputation of the stored tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{alg_eq, words_of_length, CuntzPoly};
use crate::error::{ClassifyError, RepsError};
use crate::fermions::{car_generator, fermion_branch, FermionFingerprint, FermionRep};
use crate::linalg::{Echelon, SparseRow};
use crate::morphisms::{ad_unitary, named_automorphism, nakanishi, Morphism, PermEndo};
use crate::parse::{parse_car, parse_poly};
use crate::reps::{branch, gp_branch, uhf_branch, Fingerprint, PermRep};
use crate::scalar::Scalar;
use crate::words::Word;

const TABLE1: &str = include_str!("../data/table1.txt");
const TABLE2: &str = include_str!("../data/table2.txt");
const TABLE3: &str = include_str!("../data/table3.txt");
const TABLE4: &str = include_str!("../data/table4.txt");
const TABLE6: &str = include_str!("../data/table6.txt");
const TABLE7: &str = include_str!("../data/table7.txt");
const TABLE8: &str = include_str!("../data/table8.txt");
const THEOREM14: &str = include_str!("../data/theorem14.txt");
const NAKANISHI: &str = include_str!("../data/nakanishi.txt");
const ERRATA: &str = include_str!("../data/errata.txt");

const NOT_DERIVABLE: &str = "---";

fn data_rows(text: &str) -> Vec<Vec<&str>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('|').map(str::trim).collect())
        .collect()
}

/// Corrected value for a printed cell that is wrong as printed.
pub fn erratum(table: Table, row: &str, column: &str) -> Option<&'static str> {
    data_rows(ERRATA)
        .into_iter()
        .find(|r| r[0] == table.name() && r[1] == row && r[2] == column)
        .map(|r| r[3])
}

fn psi(sigma: &str) -> PermEndo {
    PermEndo::parse(2, 2, sigma).expect("table labels are permutations of four points")
}

/// `u = s_1 s_2^* + s_2 s_1^*`.
pub fn flip_unitary() -> CuntzPoly {
    parse_poly(2, "s1 s2' + s2 s1'").expect("literal")
}

/// Certification depths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Levels {
    pub restriction: usize,
    pub commutant: usize,
}

impl Default for Levels {
    fn default() -> Self {
        Levels {
            restriction: 5,
            commutant: 3,
        }
    }
}

fn unit(n: u8, j: &Word, k: &Word) -> CuntzPoly {
    CuntzPoly::term(n, j.clone(), k.clone(), Scalar::one())
}

fn units(n: u8, level: usize) -> Vec<(Word, Word)> {
    let ws = words_of_length(n, level);
    ws.iter()
        .flat_map(|j| ws.iter().map(move |k| (j.clone(), k.clone())))
        .collect()
}

fn depth(x: &CuntzPoly) -> usize {
    x.terms().map(|(j, k, _)| j.len().max(k.len())).max().unwrap_or(0)
}

fn unit_name(j: &Word, k: &Word) -> String {
    format!("E[{},{}]", j.digits(), k.digits())
}

/// `Ad u ∘ m1 = m2` on generators.
pub fn verify_conjugate(m1: &Morphism, m2: &Morphism, u: &CuntzPoly) -> Result<bool, ClassifyError> {
    Ok(ad_unitary(u, m1)?.same_as(m2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RestrictionVerdict {
    EqualToLevel { level: usize, certified: bool },
    DifferAtLevel { level: usize, unit: String },
}

impl RestrictionVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, RestrictionVerdict::EqualToLevel { .. })
    }
}

impl fmt::Display for RestrictionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RestrictionVerdict::EqualToLevel { level, certified: true } => {
                write!(f, "equal to level {level} (certified; asserted exact)")
            }
            RestrictionVerdict::EqualToLevel { level, certified: false } => {
                write!(f, "equal to level {level}")
            }
            RestrictionVerdict::DifferAtLevel { level, unit } => {
                write!(f, "differ at level {level} ({unit})")
            }
        }
    }
}

/// First matrix unit of level ≤ `level` on which `m1` and `m2` differ.
fn first_difference(m1: &Morphism, m2: &Morphism, level: usize) -> Option<(usize, Word, Word)> {
    let n = m1.alphabet();
    for lev in 1..=level {
        let us = units(n, lev);
        let hit = us.par_iter().find_first(|(j, k)| {
            let e = unit(n, j, k);
            !alg_eq(&m1.apply(&e), &m2.apply(&e))
        });
        if let Some((j, k)) = hit {
            return Some((lev, j.clone(), k.clone()));
        }
    }
    None
}

/// Equality of `m1` and `m2` on the UHF core up to `level`.
///
/// Besides the direct comparison, with `v = u_2^* u_1` the certificate
/// checks `[v, s_j m_1(E) s_k^*] = 0` for every unit `E` of level `n − 1`,
/// which gives equality at level `n` from equality at level `n − 1`.
pub fn uhf_restriction_equal(
    m1: &PermEndo,
    m2: &PermEndo,
    level: usize,
) -> Result<RestrictionVerdict, ClassifyError> {
    if m1.alphabet() != m2.alphabet() || m1.order() != m2.order() {
        return Err(ClassifyError::Mismatch);
    }
    if let Some((lev, j, k)) = first_difference(m1.morphism(), m2.morphism(), level) {
        return Ok(RestrictionVerdict::DifferAtLevel {
            level: lev,
            unit: unit_name(&j, &k),
        });
    }
    let n = m1.alphabet();
    let v = &m2.unitary().adjoint() * &m1.unitary();
    let gens: Vec<CuntzPoly> = (1..=n).map(|i| CuntzPoly::generator(n, i)).collect();
    let certified = (1..=level).all(|lev| {
        units(n, lev - 1).par_iter().all(|(j, k)| {
            let y = m1.morphism().apply(&unit(n, j, k));
            gens.iter().all(|sj| {
                gens.iter().all(|sk| {
                    let w = &(sj * &y) * &sk.adjoint();
                    alg_eq(&(&v * &w), &(&w * &v))
                })
            })
        })
    });
    Ok(RestrictionVerdict::EqualToLevel { level, certified })
}

/// Images of the level-`level` units `E_{1^L,K}` and `E_{K,1^L}`. These
/// generate the level-`level` matrix algebra, so equal keys mean equal
/// restrictions up to that level.
fn restriction_key(m: &Morphism, level: usize) -> Vec<Vec<(Word, Word, Scalar)>> {
    let n = m.alphabet();
    let base = Word::new(vec![1; level]);
    let mut out = Vec::new();
    for k in words_of_length(n, level) {
        for e in [unit(n, &base, &k), unit(n, &k, &base)] {
            let y = m.apply(&e);
            // every term is padded to a common depth bound
            out.push(y.expand_to_level(2 * level + 2));
        }
    }
    out
}

/// Basis of `{x in span of level-L units : [x, y] = 0 for y in targets}`.
fn commutant_basis(n: u8, level: usize, targets: &[CuntzPoly]) -> Vec<CuntzPoly> {
    let basis = units(n, level);
    let ncols = basis.len();
    let mut ech = Echelon::new(ncols);
    for chunk in targets.chunks(16) {
        let row_sets: Vec<Vec<SparseRow>> = chunk
            .par_iter()
            .map(|y| {
                let lev = (level + 1).max(depth(y));
                let mut rows: BTreeMap<(Word, Word), SparseRow> = BTreeMap::new();
                for (c, (j, k)) in basis.iter().enumerate() {
                    let b = unit(n, j, k);
                    let comm = &(&b * y) - &(y * &b);
                    for (p, q, coef) in comm.expand_to_level(lev) {
                        rows.entry((p, q)).or_default().insert(c, coef);
                    }
                }
                rows.into_values().collect()
            })
            .collect();
        for rows in row_sets {
            for r in rows {
                ech.insert(r);
            }
        }
        // the identity always survives
        if ech.rank() + 1 >= ncols {
            break;
        }
    }
    ech.nullspace()
        .into_iter()
        .map(|v| {
            CuntzPoly::from_terms(
                n,
                basis
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((j, k), c)| (j.clone(), k.clone(), c)),
            )
        })
        .collect()
}

fn is_scalar(x: &CuntzPoly) -> bool {
    let n = x.alphabet();
    let c = x
        .expand_to_level(depth(x))
        .first()
        .map(|t| t.2.clone())
        .unwrap_or_else(Scalar::zero);
    alg_eq(x, &CuntzPoly::scalar(n, c))
}

fn witness_from(basis: Vec<CuntzPoly>, targets: &[CuntzPoly]) -> Option<CuntzPoly> {
    let x = basis.into_iter().find(|x| !is_scalar(x))?;
    let commutes = targets.iter().all(|y| alg_eq(&(&x * y), &(y * &x)));
    commutes.then_some(x)
}

/// A non-scalar element of level `level` commuting with the image of every
/// matrix unit of level ≤ `level`.
pub fn commutant_witness(m: &Morphism, level: usize) -> Result<Option<CuntzPoly>, ClassifyError> {
    if !m.is_grade_preserving() {
        return Err(ClassifyError::NotGradePreserving);
    }
    let n = m.alphabet();
    let targets: Vec<CuntzPoly> = units(n, level)
        .par_iter()
        .map(|(j, k)| m.apply(&unit(n, j, k)))
        .collect();
    Ok(witness_from(commutant_basis(n, level, &targets), &targets))
}

/// As [`commutant_witness`], also commuting with `m(s_i)` and `m(s_i)^*`,
/// i.e. an element of `m(O_N)' ∩ O_N`.
pub fn cuntz_commutant_witness(m: &Morphism, level: usize) -> Result<Option<CuntzPoly>, ClassifyError> {
    if !m.is_grade_preserving() {
        return Err(ClassifyError::NotGradePreserving);
    }
    let n = m.alphabet();
    let mut targets: Vec<CuntzPoly> = units(n, level)
        .par_iter()
        .map(|(j, k)| m.apply(&unit(n, j, k)))
        .collect();
    for x in m.images() {
        targets.push(x.clone());
        targets.push(x.adjoint());
    }
    Ok(witness_from(commutant_basis(n, level, &targets), &targets))
}

/// Where a test representation lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Context {
    Cuntz,
    Uhf,
}

/// The four test representations of one context, in column order.
pub fn test_labels(ctx: Context) -> [&'static str; 4] {
    match ctx {
        Context::Cuntz => ["P(1)", "P(2)", "P(12)", "GP(+)"],
        Context::Uhf => ["P[1]", "P[2]", "P[12]", "GP[+]"],
    }
}

/// `π ∘ m` for a test label; `None` when the GP rules do not apply.
pub fn test_branch(label: &str, m: &Morphism) -> Result<Option<Fingerprint>, ClassifyError> {
    let gp = |plus: bool| match gp_branch(plus, m) {
        Ok(fp) => Ok(Some(fp)),
        Err(RepsError::NotDerivable(_)) => Ok(None),
        Err(e) => Err(ClassifyError::from(e)),
    };
    match label {
        "GP(+)" => gp(true),
        "GP(-)" => gp(false),
        "GP[+]" => Ok(gp(true)?.map(|f| f.to_uhf_gp())),
        "GP[-]" => Ok(gp(false)?.map(|f| f.to_uhf_gp())),
        l if l.starts_with("P[") => {
            let body = &l[2..l.len() - 1];
            let w = Word::parse(body).map_err(RepsError::from)?;
            Ok(Some(uhf_branch(&w, m)?))
        }
        l => {
            let rep = PermRep::parse(m.alphabet(), l)?;
            Ok(Some(branch(&rep, m)?.fingerprint()))
        }
    }
}

/// `fingerprint` over several test representations.
pub fn fingerprint(m: &Morphism, tests: &[&str]) -> Result<Vec<Option<Fingerprint>>, ClassifyError> {
    tests.par_iter().map(|t| test_branch(t, m)).collect()
}

fn show(fp: &Option<Fingerprint>) -> String {
    fp.as_ref().map_or_else(|| NOT_DERIVABLE.to_string(), |f| f.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    InnerAut { conjugator: String },
    OuterAut,
    IrrEnd { evidence: String },
    RedEnd { witness: String, level: usize },
    Undetermined { level: usize },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::InnerAut { .. } => "inn.aut",
            Verdict::OuterAut => "out.aut",
            Verdict::IrrEnd { .. } => "irr.end",
            Verdict::RedEnd { .. } => "red.end",
            Verdict::Undetermined { .. } => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::InnerAut { conjugator } => write!(f, "inn.aut (Ad {conjugator})"),
            Verdict::OuterAut => write!(f, "out.aut (imported)"),
            Verdict::IrrEnd { evidence } => write!(f, "irr.end ({evidence})"),
            Verdict::RedEnd { witness, level } => {
                write!(f, "red.end (commutant witness {witness} at level {level})")
            }
            Verdict::Undetermined { level } => write!(f, "undetermined (no witness to level {level})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoRecord {
    pub sigma: String,
    pub context: Context,
    pub fingerprints: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// Evidence that the map is not surjective, when it is not invertible.
    pub proper: Option<String>,
}

fn is_irreducible(fp: &Fingerprint) -> bool {
    fp.irreducible().total() == 1
}

fn properness(labels: &[&str], fps: &[Option<Fingerprint>]) -> Option<String> {
    for (l, f) in labels.iter().zip(fps) {
        if let Some(f) = f {
            if !is_irreducible(f) {
                return Some(format!("{l}∘ψ = {f} is reducible"));
            }
        }
    }
    for i in 0..fps.len() {
        for j in i + 1..fps.len() {
            if let (Some(a), Some(b)) = (&fps[i], &fps[j]) {
                if a == b {
                    return Some(format!("{}∘ψ = {}∘ψ = {a}", labels[i], labels[j]));
                }
            }
        }
    }
    None
}

fn criterion(labels: &[&str], fps: &[Option<Fingerprint>]) -> Option<String> {
    labels.iter().zip(fps).find_map(|(l, f)| {
        f.as_ref()
            .filter(|f| is_irreducible(f))
            .map(|f| format!("{l}∘ψ = {f} irreducible"))
    })
}

/// Equality on the UHF core up to `level`, compared by generating units.
fn uhf_equal(m1: &Morphism, m2: &Morphism, level: usize) -> bool {
    let n = m1.alphabet();
    let base = Word::new(vec![1; level]);
    words_of_length(n, level).par_iter().all(|k| {
        [unit(n, &base, k), unit(n, k, &base)]
            .iter()
            .all(|e| alg_eq(&m1.apply(e), &m2.apply(e)))
    })
}

fn conjugators(n: u8, l: usize) -> Vec<(String, CuntzPoly)> {
    let mut out = vec![("I".to_string(), CuntzPoly::identity(n))];
    for order in 1..=l {
        for p in PermEndo::all(n, order) {
            if p.cycle_notation() != "id" {
                out.push((format!("u[{};{}]", order, p.cycle_notation()), p.unitary()));
            }
        }
    }
    out
}

/// `Ad w` for a unitary `w` of permutation form equal to `m` (on
/// generators, or on the UHF core up to `level`).
fn inner_conjugator(m: &Morphism, ctx: Context, level: usize) -> Option<String> {
    let n = m.alphabet();
    let id = Morphism::identity(n);
    conjugators(n, 2).into_iter().find_map(|(name, w)| {
        let ad = ad_unitary(&w, &id).ok()?;
        let ok = match ctx {
            Context::Cuntz => ad.same_as(m),
            Context::Uhf => uhf_equal(&ad, m, level),
        };
        ok.then_some(name)
    })
}

fn inverse_in_family(p: &PermEndo, ctx: Context, level: usize) -> Option<PermEndo> {
    let n = p.alphabet();
    let id = Morphism::identity(n);
    PermEndo::all(n, p.order()).into_iter().find(|q| {
        let c = q.morphism().compose(p.morphism());
        match ctx {
            Context::Cuntz => c.same_as(&id),
            Context::Uhf => uhf_equal(&c, &id, 1) && uhf_equal(&c, &id, level),
        }
    })
}

/// Automorphisms `g` of O_2 restricting to automorphisms of the UHF core,
/// with their inverses.
fn transfer_automorphisms() -> Vec<(String, Morphism, Morphism)> {
    let gens = [
        ("alpha", "alpha"),
        ("phi", "phi"),
        ("phi_prime", "phi_prime_inverse"),
    ];
    let mut out: Vec<(String, Morphism, Morphism)> = Vec::new();
    let base: Vec<(String, Morphism, Morphism)> = gens
        .iter()
        .map(|(a, b)| {
            (
                a.to_string(),
                named_automorphism(a).expect("named"),
                named_automorphism(b).expect("named"),
            )
        })
        .collect();
    let mut frontier = base.clone();
    out.extend(base.clone());
    for _ in 1..3 {
        let mut next = Vec::new();
        for (name, g, gi) in &frontier {
            for (bn, b, bi) in &base {
                next.push((format!("{name}.{bn}"), g.compose(b), bi.compose(gi)));
            }
        }
        out.extend(next.clone());
        frontier = next;
    }
    out
}

/// Irreducibility of `m` on the UHF core carried over from an irreducible
/// `ψ_τ` through `m = Ad g (ψ_τ)`.
fn transfer_irreducibility(m: &Morphism, sources: &[(String, Morphism)], level: usize) -> Option<String> {
    let gs = transfer_automorphisms();
    let hit = gs.par_iter().find_map_first(|(gname, g, gi)| {
        sources.iter().find_map(|(sname, s)| {
            let conj = g.compose(s).compose(gi);
            (uhf_equal(&conj, m, 1) && uhf_equal(&conj, m, level))
                .then(|| format!("ψ = Ad({gname})(ψ_{sname}) on UHF to level {level}, ψ_{sname} irreducible"))
        })
    });
    hit
}

fn uhf_fingerprints(m: &Morphism) -> Result<Vec<Option<Fingerprint>>, ClassifyError> {
    fingerprint(m, &test_labels(Context::Uhf))
}

/// Permutative endomorphisms of O_2 of order 2 whose UHF restriction is
/// irreducible by the branching criterion.
fn criterion_irreducibles() -> Result<Vec<(String, Morphism)>, ClassifyError> {
    let labels = test_labels(Context::Uhf);
    let all = PermEndo::all(2, 2);
    let found: Result<Vec<Option<(String, Morphism)>>, ClassifyError> = all
        .par_iter()
        .map(|p| {
            let fps = uhf_fingerprints(p.morphism())?;
            let proper = properness(&labels, &fps).is_some();
            Ok((proper && criterion(&labels, &fps).is_some())
                .then(|| (p.cycle_notation(), p.morphism().clone())))
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

/// The property record of `ψ_σ` on O_2 or on the UHF core.
pub fn endo_record(p: &PermEndo, ctx: Context, levels: Levels) -> Result<EndoRecord, ClassifyError> {
    let m = p.morphism();
    let labels = test_labels(ctx);
    let fps = fingerprint(m, &labels)?;
    let fingerprints = labels
        .iter()
        .zip(&fps)
        .map(|(l, f)| (l.to_string(), show(f)))
        .collect();
    let mut proper = None;
    let verdict = if inverse_in_family(p, ctx, levels.restriction).is_some() {
        match inner_conjugator(m, ctx, levels.restriction) {
            Some(conjugator) => Verdict::InnerAut { conjugator },
            None => Verdict::OuterAut,
        }
    } else {
        proper = Some(properness(&labels, &fps).unwrap_or_else(|| "imported".to_string()));
        if let Some(evidence) = criterion(&labels, &fps) {
            Verdict::IrrEnd { evidence }
        } else {
            let mut found = None;
            for l in 1..=levels.commutant {
                let w = match ctx {
                    Context::Cuntz => cuntz_commutant_witness(m, l)?,
                    Context::Uhf => commutant_witness(m, l)?,
                };
                if let Some(w) = w {
                    found = Some(Verdict::RedEnd {
                        witness: w.to_string(),
                        level: l,
                    });
                    break;
                }
            }
            match (found, ctx) {
                (Some(v), _) => v,
                (None, Context::Uhf) => {
                    let sources = criterion_irreducibles()?;
                    match transfer_irreducibility(m, &sources, levels.restriction) {
                        Some(evidence) => Verdict::IrrEnd { evidence },
                        None => Verdict::Undetermined {
                            level: levels.commutant,
                        },
                    }
                }
                (None, Context::Cuntz) => Verdict::Undetermined {
                    level: levels.commutant,
                },
            }
        }
    };
    Ok(EndoRecord {
        sigma: p.cycle_notation(),
        context: ctx,
        fingerprints,
        verdict,
        proper,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Table1,
    Table2,
    Table3,
    Table4,
    Table6,
    Table7,
    Table8,
    Theorem14,
    Nakanishi,
}

impl Table {
    pub const ALL: [Table; 9] = [
        Table::Table1,
        Table::Table2,
        Table::Table3,
        Table::Table4,
        Table::Table6,
        Table::Table7,
        Table::Table8,
        Table::Theorem14,
        Table::Nakanishi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Table::Table1 => "table1",
            Table::Table2 => "table2",
            Table::Table3 => "table3",
            Table::Table4 => "table4",
            Table::Table6 => "table6",
            Table::Table7 => "table7",
            Table::Table8 => "table8",
            Table::Theorem14 => "theorem14",
            Table::Nakanishi => "nakanishi",
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Table {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        let t = s.trim().to_ascii_lowercase();
        let t = if t == "theorem14_counts" { "theorem14".to_string() } else { t };
        Table::ALL
            .into_iter()
            .find(|x| x.name() == t)
            .ok_or_else(|| ClassifyError::UnknownTable(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub row: String,
    pub column: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
    /// Set when the printed value is replaced by a documented correction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected: Option<String>,
}

impl Cell {
    fn new(row: impl Into<String>, column: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>, ok: bool) -> Self {
        Cell {
            row: row.into(),
            column: column.into(),
            expected: expected.into(),
            computed: computed.into(),
            ok,
            corrected: None,
        }
    }

    /// Judges `computed` against the printed value, or against its erratum.
    fn judged(
        table: Table,
        row: &str,
        column: &str,
        printed: &str,
        computed: String,
        test: impl Fn(&str) -> Result<bool, ClassifyError>,
    ) -> Result<Self, ClassifyError> {
        let corrected = erratum(table, row, column);
        let ok = test(corrected.unwrap_or(printed))?;
        let mut c = Cell::new(row, column, printed, computed, ok);
        c.corrected = corrected.map(str::to_string);
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub table: Table,
    pub cells: Vec<Cell>,
    pub notes: Vec<String>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        !self.cells.is_empty() && self.cells.iter().all(|c| c.ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.ok)
    }

    /// Cells whose printed value was replaced by a documented correction.
    pub fn errata(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.corrected.is_some())
    }
}

/// Recomputes a stored table and diffs it cell by cell.
pub fn classify_table(which: Table, levels: Levels) -> Result<TableReport, ClassifyError> {
    let (cells, notes) = match which {
        Table::Table1 => table1(levels)?,
        Table::Table2 => (table2()?, Vec::new()),
        Table::Table3 => table3(levels)?,
        Table::Table4 => table4()?,
        Table::Table6 => table6()?,
        Table::Table7 => (table7()?, Vec::new()),
        Table::Table8 => (table8()?, Vec::new()),
        Table::Theorem14 => theorem14(levels)?,
        Table::Nakanishi => (nakanishi_table()?, Vec::new()),
    };
    Ok(TableReport {
        table: which,
        cells,
        notes,
    })
}

type Rows = (Vec<Cell>, Vec<String>);

fn table1(levels: Levels) -> Result<Rows, ClassifyError> {
    let u = flip_unitary();
    let rows = data_rows(TABLE1);
    let per_row: Result<Vec<Vec<Cell>>, ClassifyError> = rows
        .par_iter()
        .map(|r| {
            let p = psi(r[0]);
            let mut cells = Vec::new();
            for (i, col) in ["s1", "s2"].iter().enumerate() {
                let expected = parse_poly(2, r[1 + i]).expect("stored polynomial");
                let got = p.morphism().image(i as u8 + 1);
                cells.push(Cell::new(r[0], format!("ψ({col})"), r[1 + i], got.to_string(), alg_eq(got, &expected)));
            }
            let rec = endo_record(&p, Context::Cuntz, levels)?;
            cells.push(Cell::new(r[0], "property", r[3], rec.verdict.to_string(), rec.verdict.tag() == r[3]));
            let target = psi(r[4]);
            let ok = verify_conjugate(p.morphism(), target.morphism(), &u)?;
            let computed = PermEndo::all(2, 2)
                .into_iter()
                .find(|q| verify_conjugate(p.morphism(), q.morphism(), &u).unwrap_or(false))
                .map_or_else(|| "none".to_string(), |q| q.cycle_notation());
            cells.push(Cell::new(r[0], "Ad u ∘ ψ", r[4], computed, ok));
            Ok(cells)
        })
        .collect();
    let notes = vec!["outerness of the two outer automorphisms is imported, not verified".to_string()];
    Ok((per_row?.into_iter().flatten().collect(), notes))
}

fn fingerprint_cell(table: Table, row: &str, column: &str, expected: &str, computed: &Option<Fingerprint>) -> Result<Cell, ClassifyError> {
    Cell::judged(table, row, column, expected, show(computed), |e| {
        Ok(match (e, computed) {
            (NOT_DERIVABLE, None) => true,
            (NOT_DERIVABLE, Some(_)) | (_, None) => false,
            (e, Some(fp)) => &e.parse::<Fingerprint>()? == fp,
        })
    })
}

fn fingerprint_rows(table: Table, text: &str, ctx: Context) -> Result<Vec<Cell>, ClassifyError> {
    let labels = test_labels(ctx);
    let rows = data_rows(text);
    let per_row: Result<Vec<Vec<Cell>>, ClassifyError> = rows
        .par_iter()
        .map(|r| {
            let p = psi(r[0]);
            let fps = fingerprint(p.morphism(), &labels)?;
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| fingerprint_cell(table, r[0], &format!("{l}∘ψ"), r[1 + i], &fps[i]))
                .collect()
        })
        .collect();
    Ok(per_row?.into_iter().flatten().collect())
}

fn table2() -> Result<Vec<Cell>, ClassifyError> {
    fingerprint_rows(Table::Table2, TABLE2, Context::Cuntz)
}

fn table3(levels: Levels) -> Result<Rows, ClassifyError> {
    let mut cells = fingerprint_rows(Table::Table3, TABLE3, Context::Uhf)?;
    let rows = data_rows(TABLE3);
    let props: Result<Vec<Cell>, ClassifyError> = rows
        .par_iter()
        .map(|r| {
            let rec = endo_record(&psi(r[0]), Context::Uhf, levels)?;
            Ok(Cell::new(r[0], "property", r[5], rec.verdict.to_string(), rec.verdict.tag() == r[5]))
        })
        .collect();
    cells.extend(props?);
    Ok((cells, vec!["outerness of ψ_(12)(34) on UHF is imported, not verified".to_string()]))
}

fn table4() -> Result<Rows, ClassifyError> {
    let rows = data_rows(TABLE4);
    let p11 = parse_poly(2, "s1 s1'").expect("literal");
    let listed: Vec<String> = rows
        .iter()
        .flat_map(|r| r[1].split(',').map(|s| s.trim().to_string()))
        .collect();
    let images: Vec<(String, CuntzPoly)> = listed
        .par_iter()
        .map(|s| (s.clone(), psi(s).morphism().apply(&p11)))
        .collect();
    // partition of the listed σ by image
    let mut groups: Vec<(CuntzPoly, BTreeSet<String>)> = Vec::new();
    for (s, img) in &images {
        match groups.iter_mut().find(|(g, _)| alg_eq(g, img)) {
            Some((_, set)) => {
                set.insert(s.clone());
            }
            None => groups.push((img.clone(), [s.clone()].into_iter().collect())),
        }
    }
    let mut cells = Vec::new();
    for r in &rows {
        let expected_img = parse_poly(2, r[0]).expect("stored polynomial");
        let expected: BTreeSet<String> = r[1].split(',').map(|s| s.trim().to_string()).collect();
        let got = groups
            .iter()
            .find(|(g, _)| alg_eq(g, &expected_img))
            .map(|(_, s)| s.clone())
            .unwrap_or_default();
        let show = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
        cells.push(Cell::new(r[0], "ψ_σ", show(&expected), show(&got), got == expected));
    }
    cells.push(Cell::new(
        "all",
        "number of image classes",
        rows.len().to_string(),
        groups.len().to_string(),
        groups.len() == rows.len(),
    ));
    let mut notes = Vec::new();
    for q in PermEndo::all(2, 2) {
        let name = q.cycle_notation();
        let name = if name.starts_with('(') || name == "id" { name } else { name.to_string() };
        if !listed.contains(&name) {
            notes.push(format!("ψ_{name}(s1 s1') = {} (not listed)", q.morphism().apply(&p11)));
        }
    }
    Ok((cells, notes))
}

/// Evaluates `n`, `k`, `n+1`, `2k`, `2k+1`, `n-1`, `k-1`.
fn eval_index(expr: &str, n: i64, k: i64) -> i64 {
    let e = expr.trim();
    let split = e.find(['n', 'k']).expect("index variable");
    let coef: i64 = if split == 0 { 1 } else { e[..split].parse().expect("coefficient") };
    let var = if &e[split..=split] == "n" { n } else { k };
    let rest = e[split + 1..].trim();
    let off: i64 = if rest.is_empty() {
        0
    } else {
        rest.replace(' ', "").parse().expect("offset")
    };
    coef * var + off
}

fn instantiate(template: &str, n: i64, k: i64) -> String {
    let mut out = String::new();
    let mut rest = template;
    while let Some(i) = rest.find('{') {
        let j = rest[i..].find('}').expect("closed placeholder") + i;
        let value = eval_index(&rest[i + 1..j], n, k);
        let head = &rest[..i];
        if let Some(h) = head.strip_suffix("(-1)^") {
            out.push_str(h);
            out.push_str(if value.rem_euclid(2) == 0 { "(1)" } else { "(-1)" });
        } else {
            out.push_str(head);
            out.push_str(&value.to_string());
        }
        rest = &rest[j + 1..];
    }
    out.push_str(rest);
    out
}

fn case_applies(case: &str, n: i64) -> Option<i64> {
    match case {
        "all" => Some(0),
        "n=1" => (n == 1).then_some(0),
        "n>=2" => (n >= 2).then_some(0),
        "n=2k-1" => (n % 2 == 1).then_some((n + 1) / 2),
        "n=2k" => (n % 2 == 0).then_some(n / 2),
        _ => None,
    }
}

/// Range of `n` on which the templates of the CAR table are checked.
pub const TEMPLATE_RANGE: i64 = 6;

fn table6() -> Result<Rows, ClassifyError> {
    let rows = data_rows(TABLE6);
    let mut jobs = Vec::new();
    for r in &rows {
        if r[1] == NOT_DERIVABLE {
            continue;
        }
        for n in 1..=TEMPLATE_RANGE {
            if let Some(k) = case_applies(r[1], n) {
                let corrected = erratum(Table::Table6, r[0], "formula").map(|t| instantiate(t, n, k));
                jobs.push((r[0], n, instantiate(r[2], n, k), corrected));
            }
        }
    }
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|(s, n, text, corrected)| {
            let expected = parse_car(corrected.as_ref().unwrap_or(text)).expect("stored formula").to_cuntz();
            let got = psi(s).morphism().apply(&car_generator(*n as u32).expect("n ≥ 1"));
            let mut c = Cell::new(*s, format!("ψ(a{n})"), text.clone(), got.to_string(), alg_eq(&got, &expected));
            c.corrected = corrected.clone();
            c
        })
        .collect();
    let notes = rows
        .iter()
        .filter(|r| r[1] == NOT_DERIVABLE)
        .map(|r| format!("ψ_{}: no closed formula printed", r[0]))
        .collect();
    Ok((cells, notes))
}

fn table7() -> Result<Vec<Cell>, ClassifyError> {
    let rows = data_rows(TABLE7);
    rows
        .par_iter()
        .map(|r| {
            let n: u32 = r[1].parse().expect("mode index");
            let got = psi(r[0]).morphism().apply(&car_generator(n).expect("n ≥ 1"));
            Cell::judged(Table::Table7, r[0], &format!("ψ(a{n})"), r[2], got.to_string(), |f| {
                Ok(alg_eq(&got, &parse_car(f).expect("stored formula").to_cuntz()))
            })
        })
        .collect::<Result<_, _>>()
}

fn table8() -> Result<Vec<Cell>, ClassifyError> {
    let rows = data_rows(TABLE8);
    let reps = [FermionRep::Fock, FermionRep::FockDual, FermionRep::Iw];
    let per_row: Result<Vec<Vec<Cell>>, ClassifyError> = rows
        .par_iter()
        .map(|r| {
            let m = psi(r[0]);
            reps.iter()
                .enumerate()
                .map(|(i, rep)| {
                    let got = fermion_branch(*rep, m.morphism()).map_err(|e| match e {
                        crate::error::FermionError::Reps(e) => ClassifyError::Reps(e),
                        _ => ClassifyError::NotGradePreserving,
                    })?;
                    Cell::judged(Table::Table8, r[0], &format!("{}∘ψ", rep.name()), r[1 + i], got.to_string(), |e| {
                        let expected: FermionFingerprint = e.parse().map_err(|_| ClassifyError::UnknownTable(e.to_string()))?;
                        Ok(got == expected)
                    })
                })
                .collect()
        })
        .collect();
    Ok(per_row?.into_iter().flatten().collect())
}

fn nakanishi_table() -> Result<Vec<Cell>, ClassifyError> {
    let rho = nakanishi();
    let rows = data_rows(NAKANISHI);
    rows.par_iter()
        .map(|r| {
            let got = test_branch(r[0], rho.morphism())?;
            fingerprint_cell(Table::Nakanishi, r[0], "∘ρ", r[1], &got)
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.0.len() {
            let r = self.find(i);
            out.entry(r).or_default().push(i);
        }
        out
    }
}

/// Counts on `{ψ_σ|UHF : σ ∈ S_{2,2}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UhfCensus {
    pub level: usize,
    /// σ grouped by equal restriction.
    pub restrictions: Vec<Vec<String>>,
    /// Unitary equivalence classes of restrictions.
    pub classes: Vec<Vec<String>>,
    pub automorphisms: Vec<String>,
    pub klein: bool,
    pub records: BTreeMap<String, EndoRecord>,
    pub separated: bool,
}

pub fn uhf_census(levels: Levels) -> Result<UhfCensus, ClassifyError> {
    let all = PermEndo::all(2, 2);
    let names: Vec<String> = all.iter().map(|p| p.cycle_notation()).collect();
    let keys: Vec<_> = all
        .par_iter()
        .map(|p| restriction_key(p.morphism(), levels.restriction))
        .collect();
    let mut uf = UnionFind::new(all.len());
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if keys[i] == keys[j] {
                uf.union(i, j);
            }
        }
    }
    let restrictions: Vec<Vec<String>> = uf
        .classes()
        .values()
        .map(|v| v.iter().map(|&i| names[i].clone()).collect())
        .collect();

    let u = flip_unitary();
    for i in 0..all.len() {
        let conj = ad_unitary(&u, all[i].morphism())?;
        if let Some(j) = all.iter().position(|q| q.morphism().same_as(&conj)) {
            uf.union(i, j);
        }
    }
    let class_idx = uf.classes();
    let classes: Vec<Vec<String>> = class_idx
        .values()
        .map(|v| v.iter().map(|&i| names[i].clone()).collect())
        .collect();

    let id_key = restriction_key(&Morphism::identity(2), levels.restriction);
    let inverse_of = |i: usize| -> Option<usize> {
        (0..all.len()).find(|&j| {
            restriction_key(&all[j].morphism().compose(all[i].morphism()), levels.restriction) == id_key
        })
    };
    let auts: Vec<usize> = (0..all.len())
        .into_par_iter()
        .filter(|&i| inverse_of(i).is_some())
        .collect();
    let key_of = |m: &Morphism| restriction_key(m, levels.restriction);
    let aut_keys: Vec<_> = auts.iter().map(|&i| keys[i].clone()).collect();
    let klein = auts.len() == 4
        && auts.iter().all(|&a| {
            key_of(&all[a].morphism().compose(all[a].morphism())) == id_key
                && auts.iter().all(|&b| {
                    let ab = key_of(&all[a].morphism().compose(all[b].morphism()));
                    let ba = key_of(&all[b].morphism().compose(all[a].morphism()));
                    ab == ba && aut_keys.contains(&ab)
                })
        });

    let reps: Vec<usize> = class_idx.keys().copied().collect();
    let recs: Result<Vec<EndoRecord>, ClassifyError> = reps
        .par_iter()
        .map(|&i| endo_record(&all[i], Context::Uhf, levels))
        .collect();
    let records: BTreeMap<String, EndoRecord> = recs?.into_iter().map(|r| (r.sigma.clone(), r)).collect();
    let prints: BTreeSet<&BTreeMap<String, String>> = records.values().map(|r| &r.fingerprints).collect();
    let separated = prints.len() == records.len();

    Ok(UhfCensus {
        level: levels.restriction,
        restrictions,
        classes,
        automorphisms: auts.iter().map(|&i| names[i].clone()).collect(),
        klein,
        records,
        separated,
    })
}

fn theorem14(levels: Levels) -> Result<Rows, ClassifyError> {
    let census = uhf_census(levels)?;
    let count = |tag: &str| {
        census
            .records
            .values()
            .filter(|r| r.verdict.tag() == tag)
            .count()
    };
    let aut_classes = count("inn.aut") + count("out.aut");
    let mut cells = Vec::new();
    let mut notes = Vec::new();
    for r in data_rows(THEOREM14) {
        let (computed, ok) = match r[0] {
            "distinct restrictions" => {
                let c = census.restrictions.len().to_string();
                let ok = c == r[1];
                (c, ok)
            }
            "classes" => {
                let c = census.classes.len();
                (c.to_string(), c.to_string() == r[1] && census.separated)
            }
            "automorphisms" => {
                let c = census.automorphisms.len();
                (
                    format!("{c} ({})", if census.klein { "Klein four-group" } else { "not Klein" }),
                    c.to_string() == r[1] && census.klein && aut_classes == 2,
                )
            }
            "irreducible proper classes" => {
                let c = count("irr.end").to_string();
                let ok = c == r[1];
                (c, ok)
            }
            "reducible classes" => {
                let c = count("red.end").to_string();
                let ok = c == r[1];
                (c, ok)
            }
            "equal on UHF" => {
                let (a, b) = r[1].split_once('=').expect("pair");
                let v = uhf_restriction_equal(&psi(a.trim()), &psi(b.trim()), levels.restriction)?;
                let ok = matches!(v, RestrictionVerdict::EqualToLevel { certified: true, .. });
                (v.to_string(), ok)
            }
            "representatives" => {
                let want: Vec<String> = r[1].split(',').map(|s| s.trim().to_string()).collect();
                let hits: Vec<usize> = census
                    .classes
                    .iter()
                    .map(|c| c.iter().filter(|s| want.contains(s)).count())
                    .collect();
                let ok = hits.iter().all(|&h| h == 1) && want.len() == census.classes.len();
                let shown: Vec<String> = census.classes.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
                (shown.join(" "), ok)
            }
            other => (format!("unknown quantity {other}"), false),
        };
        cells.push(Cell::new(r[0], "value", r[1], computed, ok));
    }
    for rec in census.records.values() {
        notes.push(format!(
            "ψ_{}: {}{}",
            rec.sigma,
            rec.verdict,
            rec.proper.as_ref().map(|p| format!("; proper: {p}")).unwrap_or_default()
        ));
    }
    notes.push(format!(
        "fingerprints of the {} class representatives are pairwise {}",
        census.records.len(),
        if census.separated { "distinct" } else { "NOT distinct" }
    ));
    Ok((cells, notes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugacy_examples() {
        let u = flip_unitary();
        let t = |a: &str, b: &str| verify_conjugate(psi(a).morphism(), psi(b).morphism(), &u).unwrap();
        assert!(t("12", "1324"));
        assert!(t("14", "14"));
        assert!(!t("12", "13"));
        let not_unitary = parse_poly(2, "s1 s1'").unwrap();
        assert!(verify_conjugate(psi("12").morphism(), psi("12").morphism(), &not_unitary).is_err());
    }

    #[test]
    fn restriction_equalities() {
        let v = uhf_restriction_equal(&psi("14"), &psi("1243"), 4).unwrap();
        assert_eq!(v, RestrictionVerdict::EqualToLevel { level: 4, certified: true });
        let v = uhf_restriction_equal(&psi("132"), &psi("234"), 4).unwrap();
        assert!(v.is_equal());
        let v = uhf_restriction_equal(&psi("14"), &psi("23"), 1).unwrap();
        assert_eq!(
            v,
            RestrictionVerdict::DifferAtLevel {
                level: 1,
                unit: "E[1,1]".into()
            }
        );
        // equal on the core yet different maps of O_2
        assert!(!psi("14").morphism().same_as(psi("1243").morphism()));
    }

    #[test]
    fn commutant_examples() {
        let w = commutant_witness(psi("142").morphism(), 1).unwrap().expect("reducible");
        assert!(w.terms().all(|(j, k, _)| j == k && j.len() == 1));
        assert!(commutant_witness(psi("13").morphism(), 3).unwrap().is_none());
        assert!(commutant_witness(&Morphism::identity(2), 2).unwrap().is_none());
        // irreducible on O_2
        assert!(cuntz_commutant_witness(psi("142").morphism(), 2).unwrap().is_none());
        let phi = named_automorphism("phi").unwrap();
        assert!(commutant_witness(&phi, 2).unwrap().is_none());
    }

    #[test]
    fn templates() {
        assert_eq!(instantiate("(-1)^{k-1} a{2k+1}'", 4, 2), "(-1) a5'");
        assert_eq!(instantiate("(-1)^{n} a{n}'", 4, 0), "(1) a4'");
        assert_eq!(eval_index("n+1", 3, 0), 4);
        assert_eq!(case_applies("n=2k-1", 5), Some(3));
        assert_eq!(case_applies("n=2k", 5), None);
    }

    #[test]
    fn table_names() {
        for t in Table::ALL {
            assert_eq!(t.name().parse::<Table>().unwrap(), t);
        }
        assert_eq!("theorem14_counts".parse::<Table>().unwrap(), Table::Theorem14);
        assert!("table5".parse::<Table>().is_err());
    }

    #[test]
    fn records() {
        let lv = Levels::default();
        let r = endo_record(&psi("23"), Context::Cuntz, lv).unwrap();
        assert_eq!(r.fingerprints["P(1)"], "P(1)⊕P(1)");
        assert_eq!(r.fingerprints["GP(+)"], "GP(+)⊕GP(+)");
        let r = endo_record(&psi("34"), Context::Uhf, lv).unwrap();
        assert_eq!(r.fingerprints["P[2]"], "P[12]⊕P[21]");
        let r = endo_record(&psi("id"), Context::Uhf, lv).unwrap();
        assert_eq!(r.verdict.tag(), "inn.aut");
    }
}
