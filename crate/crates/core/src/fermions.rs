//! Fermions inside O_2: the recursive fermion system, formal CAR
//! expressions, the mixture `b_k` and the four vacuum representations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{words_of_length, CuntzPoly};
use crate::error::FermionError;
use crate::morphisms::{named_automorphism, zeta, Morphism};
use crate::reps::{act, uhf_branch, Component, Fingerprint, Label, PermRep, Vector};
use crate::scalar::Scalar;
use crate::words::{Phase, Word};

/// `a_n` by the recursion `a_1 = s_1 s_2^*`, `a_n = ζ(a_{n−1})`.
pub fn car_generator(n: u32) -> Result<CuntzPoly, FermionError> {
    if n == 0 {
        return Err(FermionError::BadIndex(0));
    }
    let mut a = CuntzPoly::term(2, Word::letter(1), Word::letter(2), Scalar::one());
    for _ in 1..n {
        a = zeta(&a).expect("N = 2");
    }
    Ok(a)
}

/// `a_n = Σ_J s_J s_1 s_2^* β_2(s_J)^*`, summed directly.
pub fn car_closed_form(n: u32) -> Result<CuntzPoly, FermionError> {
    if n == 0 {
        return Err(FermionError::BadIndex(0));
    }
    let beta2 = named_automorphism("beta2").expect("named map");
    let core = CuntzPoly::term(2, Word::letter(1), Word::letter(2), Scalar::one());
    let mut out = CuntzPoly::zero(2);
    for j in words_of_length(2, n as usize - 1) {
        let sj = CuntzPoly::isometry(2, j);
        let right = beta2.apply(&sj).adjoint();
        out = &out + &(&(&sj * &core) * &right);
    }
    Ok(out)
}

/// `Ψ(a_n) = Σ_J (−1)^{n_2(J)} E_{J∪(1), J∪(2)}` as matrix units.
pub fn psi_generator(n: u32) -> Result<CuntzPoly, FermionError> {
    if n == 0 {
        return Err(FermionError::BadIndex(0));
    }
    let mut out = CuntzPoly::zero(2);
    for j in words_of_length(2, n as usize - 1) {
        let twos = j.letters().iter().filter(|&&x| x == 2).count() as i64;
        let mut left = j.clone();
        left.push(1);
        let mut right = j;
        right.push(2);
        let e = CuntzPoly::matrix_unit(2, left, right).expect("equal lengths");
        out = &out + &e.scale(&Scalar::sign(twos));
    }
    Ok(out)
}

/// `a_n` or `a_n^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CarLetter {
    pub index: u32,
    pub dagger: bool,
}

impl fmt::Display for CarLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}{}", self.index, if self.dagger { "'" } else { "" })
    }
}

/// A formal *-polynomial in `a_n, a_n^*`. No relations are imposed;
/// equality questions go through the Cuntz image.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CarExpr {
    terms: BTreeMap<Vec<CarLetter>, Scalar>,
}

impl CarExpr {
    pub fn zero() -> Self {
        CarExpr::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut e = CarExpr::zero();
        e.add_term(Vec::new(), c);
        e
    }

    pub fn one() -> Self {
        CarExpr::scalar(Scalar::one())
    }

    pub fn a(n: u32) -> Result<Self, FermionError> {
        if n == 0 {
            return Err(FermionError::BadIndex(0));
        }
        let mut e = CarExpr::zero();
        e.add_term(
            vec![CarLetter {
                index: n,
                dagger: false,
            }],
            Scalar::one(),
        );
        Ok(e)
    }

    pub fn a_dagger(n: u32) -> Result<Self, FermionError> {
        Ok(CarExpr::a(n)?.adjoint())
    }

    fn add_term(&mut self, word: Vec<CarLetter>, c: Scalar) {
        let entry = self.terms.entry(word.clone()).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[CarLetter], &Scalar)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &CarExpr) -> CarExpr {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CarExpr) -> CarExpr {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> CarExpr {
        let mut out = CarExpr::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &CarExpr) -> CarExpr {
        let mut out = CarExpr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    pub fn adjoint(&self) -> CarExpr {
        let mut out = CarExpr::zero();
        for (w, c) in &self.terms {
            let rev = w
                .iter()
                .rev()
                .map(|l| CarLetter {
                    index: l.index,
                    dagger: !l.dagger,
                })
                .collect();
            out.add_term(rev, c.clone());
        }
        out
    }

    /// The letterwise substitution `a_n ↦ f(n)`, extended multiplicatively
    /// with `a_n^* ↦ f(n)^*`.
    pub fn substitute(&self, f: impl Fn(u32) -> CarExpr) -> CarExpr {
        let mut out = CarExpr::zero();
        for (w, c) in &self.terms {
            let mut acc = CarExpr::scalar(c.clone());
            for l in w {
                let img = f(l.index);
                acc = acc.mul(&if l.dagger { img.adjoint() } else { img });
            }
            out = out.add(&acc);
        }
        out
    }

    /// `Φ_UHF ∘ Ψ`: the multiplicative extension of `a_n ↦ Ψ(a_n)`.
    pub fn to_cuntz(&self) -> CuntzPoly {
        let mut cache: HashMap<u32, CuntzPoly> = HashMap::new();
        let mut out = CuntzPoly::zero(2);
        for (w, c) in &self.terms {
            let mut acc = CuntzPoly::scalar(2, c.clone());
            for l in w {
                let img = cache
                    .entry(l.index)
                    .or_insert_with(|| psi_generator(l.index).expect("index >= 1"));
                acc = if l.dagger {
                    &acc * &img.adjoint()
                } else {
                    &acc * &*img
                };
            }
            out = &out + &acc;
        }
        out
    }

    pub fn max_index(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|w| w.iter().map(|l| l.index))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for CarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let negative = c.is_rational() && c.rat_part().is_negative();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let body: Vec<String> = w.iter().map(|l| l.to_string()).collect();
            let body = body.join(" ");
            if body.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{body}")?;
            } else if magnitude.is_rational() {
                write!(f, "{magnitude} {body}")?;
            } else {
                write!(f, "({magnitude}) {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CarExpr({self})")
    }
}

/// `φ(a_n) = (−1)^{n−1} a_n^*`, extended multiplicatively.
pub fn dual_automorphism(x: &CarExpr) -> CarExpr {
    x.substitute(|n| {
        CarExpr::a_dagger(n)
            .expect("index >= 1")
            .scale(&Scalar::sign(n as i64 - 1))
    })
}

fn half_integer(k: Rational64) -> Result<i64, FermionError> {
    let twice = k * Rational64::from_integer(2);
    if !twice.is_integer() || twice.to_integer().is_even() {
        return Err(FermionError::NotHalfInteger(k.to_string()));
    }
    Ok(twice.to_integer())
}

/// The mixture `b_k`, `k ∈ Z + 1/2`:
/// `b_k = (−1)^{k−1/2}(a_1a_1^*a_{2k+2}^* + a_1^*a_1a_{2k+2})` and
/// `b_{−k} = (−1)^{k−1/2}(a_1a_1^*a_{2k+1} − a_1^*a_1a_{2k+1}^*)` for `k > 0`.
pub fn mixture(k: Rational64) -> Result<CarExpr, FermionError> {
    let twice = half_integer(k)?;
    let a = |n: i64| CarExpr::a(n as u32).expect("index >= 1");
    let occupied = a(1).mul(&a(1).adjoint());
    let empty = a(1).adjoint().mul(&a(1));
    let kk = twice.abs();
    // (−1)^{k−1/2} with k = kk/2
    let sign = Scalar::sign((kk - 1) / 2);
    let expr = if twice > 0 {
        let m = kk + 2;
        occupied
            .mul(&a(m).adjoint())
            .add(&empty.mul(&a(m)))
    } else {
        let m = kk + 1;
        occupied.mul(&a(m)).sub(&empty.mul(&a(m).adjoint()))
    };
    Ok(expr.scale(&sign))
}

/// Parses `1/2`, `-3/2`.
pub fn parse_half(text: &str) -> Result<Rational64, FermionError> {
    let bad = || FermionError::NotHalfInteger(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    let k = Rational64::new(num, den);
    half_integer(k)?;
    Ok(k)
}

/// The four physical representations of the CAR algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FermionRep {
    Fock,
    FockDual,
    Iw,
    IwDual,
}

impl FermionRep {
    pub const ALL: [FermionRep; 4] = [
        FermionRep::Fock,
        FermionRep::FockDual,
        FermionRep::Iw,
        FermionRep::IwDual,
    ];

    /// The UHF word `J` with this representation equal to `P[J]`.
    pub fn uhf_word(self) -> Word {
        match self {
            FermionRep::Fock => Word::from([1]),
            FermionRep::FockDual => Word::from([2]),
            FermionRep::Iw => Word::from([1, 2]),
            FermionRep::IwDual => Word::from([2, 1]),
        }
    }

    /// A cycle of O_2 whose restriction contains this representation, and
    /// the vacuum inside it.
    pub fn realization(self) -> (PermRep, Label) {
        let cycle = |w: &[u8]| PermRep::cycle(2, Word::from(w), Phase::zero()).expect("primitive");
        match self {
            FermionRep::Fock => (cycle(&[1]), Label::new(Word::empty(), 1)),
            FermionRep::FockDual => (cycle(&[2]), Label::new(Word::empty(), 1)),
            FermionRep::Iw => (cycle(&[1, 2]), Label::new(Word::empty(), 1)),
            FermionRep::IwDual => (cycle(&[1, 2]), Label::new(Word::empty(), 2)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FermionRep::Fock => "Fock",
            FermionRep::FockDual => "Fock*",
            FermionRep::Iw => "IW",
            FermionRep::IwDual => "IW*",
        }
    }

    /// The annihilators of the vacuum for mode `n`.
    pub fn annihilators(self, n: u32) -> Vec<CarExpr> {
        let a = |m: u32| CarExpr::a(m).expect("index >= 1");
        let ad = |m: u32| CarExpr::a_dagger(m).expect("index >= 1");
        match self {
            FermionRep::Fock => vec![a(n)],
            FermionRep::FockDual => vec![ad(n)],
            FermionRep::Iw => vec![a(2 * n - 1), ad(2 * n)],
            FermionRep::IwDual => vec![ad(2 * n - 1), a(2 * n)],
        }
    }

    /// The corresponding creators.
    pub fn creators(self, n: u32) -> Vec<CarExpr> {
        self.annihilators(n).iter().map(CarExpr::adjoint).collect()
    }
}

impl fmt::Display for FermionRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for FermionRep {
    type Err = FermionError;

    fn from_str(s: &str) -> Result<Self, FermionError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fock" => Ok(FermionRep::Fock),
            "fock*" => Ok(FermionRep::FockDual),
            "iw" => Ok(FermionRep::Iw),
            "iw*" => Ok(FermionRep::IwDual),
            _ => Err(FermionError::UnknownRep(s.to_string())),
        }
    }
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VacuumReport {
    pub rep: FermionRep,
    pub checks: Vec<Check>,
    /// Printed variants that were refuted; kept apart from `checks`.
    pub errata: Vec<Check>,
}

impl VacuumReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn apply_car(x: &CarExpr, v: &Vector, rep: &PermRep) -> Vector {
    act(&x.to_cuntz(), v, rep).expect("N = 2")
}

/// The half-integers `1/2, 3/2, …` up to `cutoff`.
fn positive_modes(cutoff: Rational64) -> Vec<Rational64> {
    let mut out = Vec::new();
    let mut k = Rational64::new(1, 2);
    while k <= cutoff {
        out.push(k);
        k += Rational64::one();
    }
    out
}

/// Vacuum identities on the labeled basis: the annihilators of the table
/// of creations and annihilations for modes `n ≤ modes`, and for the Fock
/// space the mixture identities for `0 < k ≤ cutoff` on `Ω` and on
/// `Ω^* = a_1^*Ω`.
pub fn vacuum_check(rep: FermionRep, modes: u32, cutoff: Rational64) -> VacuumReport {
    let (base, vac) = rep.realization();
    let omega = Vector::basis(vac);
    let mut checks: Vec<Check> = (1..=modes)
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut local = Vec::new();
            for (x, y) in rep.annihilators(n).iter().zip(rep.creators(n)) {
                local.push(Check {
                    statement: format!("({x}) Ω = 0"),
                    holds: apply_car(x, &omega, &base).is_zero(),
                });
                local.push(Check {
                    statement: format!("({y}) Ω ≠ 0"),
                    holds: !apply_car(&y, &omega, &base).is_zero(),
                });
            }
            local
        })
        .collect();
    let mut errata = Vec::new();
    if rep == FermionRep::Fock {
        checks.extend(mixture_vacuum_checks(&base, &omega, cutoff));
        errata = printed_dual_sign(&base, &omega, cutoff);
    }
    VacuumReport {
        rep,
        checks,
        errata,
    }
}

fn mixture_vacuum_checks(base: &PermRep, omega: &Vector, cutoff: Rational64) -> Vec<Check> {
    let a_star = |m: i64| CarExpr::a_dagger(m as u32).expect("index >= 1");
    let omega_star = apply_car(&a_star(1), omega, base);
    let modes = positive_modes(cutoff);
    let mut checks: Vec<Check> = modes
        .par_iter()
        .flat_map_iter(|&k| {
            let twice = (k * Rational64::from_integer(2)).to_integer();
            let sign = Scalar::sign((twice - 1) / 2);
            let bk = mixture(k).expect("half-integer");
            let bmk = mixture(-k).expect("half-integer");
            let m_even = twice + 2;
            let m_odd = twice + 1;
            let act = |x: &CarExpr, v: &Vector| apply_car(x, v, base);
            let eq = |lhs: Vector, rhs: Vector| lhs.sub(&rhs).is_zero();
            vec![
                Check {
                    statement: format!("b[{k}] Ω = (-1)^(k-1/2) a{m_even}' Ω"),
                    holds: eq(act(&bk, omega), act(&a_star(m_even), omega).scale(&sign)),
                },
                Check {
                    statement: format!("b[-{k}]' Ω = (-1)^(k-1/2) a{m_odd}' Ω"),
                    holds: eq(
                        act(&bmk.adjoint(), omega),
                        act(&a_star(m_odd), omega).scale(&sign),
                    ),
                },
                Check {
                    statement: format!("b[{k}]' Ω = 0"),
                    holds: act(&bk.adjoint(), omega).is_zero(),
                },
                Check {
                    statement: format!("b[-{k}] Ω = 0"),
                    holds: act(&bmk, omega).is_zero(),
                },
                Check {
                    statement: format!("b[-{k}] Ω* = -(-1)^(k-1/2) a{m_odd}' Ω*"),
                    holds: eq(
                        act(&bmk, &omega_star),
                        act(&a_star(m_odd), &omega_star).scale(&-sign.clone()),
                    ),
                },
                Check {
                    statement: format!("b[{k}]' Ω* = (-1)^(k-1/2) a{m_even}' Ω*"),
                    holds: eq(
                        act(&bk.adjoint(), &omega_star),
                        act(&a_star(m_even), &omega_star).scale(&sign),
                    ),
                },
                Check {
                    statement: format!("b[{k}] Ω* = 0"),
                    holds: act(&bk, &omega_star).is_zero(),
                },
                Check {
                    statement: format!("b[-{k}]' Ω* = 0"),
                    holds: act(&bmk.adjoint(), &omega_star).is_zero(),
                },
            ]
        })
        .collect();
    // excitations of the two vacua by at most two mixture creators are
    // orthonormal basis vectors
    let creators_dirac: Vec<CarExpr> = modes
        .iter()
        .flat_map(|&k| [mixture(k).unwrap(), mixture(-k).unwrap().adjoint()])
        .collect();
    let creators_dual: Vec<CarExpr> = modes
        .iter()
        .flat_map(|&k| [mixture(-k).unwrap(), mixture(k).unwrap().adjoint()])
        .collect();
    checks.push(excitation_check("Ω", &creators_dirac, omega, base));
    checks.push(excitation_check("Ω*", &creators_dual, &omega_star, base));
    checks
}

/// The printed form `b_{−k}Ω^* = (−1)^{k−1/2} a_{2k+1}^*Ω^*`. CAR alone
/// gives the opposite sign, so each instance is expected to fail.
fn printed_dual_sign(base: &PermRep, omega: &Vector, cutoff: Rational64) -> Vec<Check> {
    let omega_star = apply_car(&CarExpr::a_dagger(1).unwrap(), omega, base);
    positive_modes(cutoff)
        .into_iter()
        .map(|k| {
            let twice = (k * Rational64::from_integer(2)).to_integer();
            let sign = Scalar::sign((twice - 1) / 2);
            let m = (twice + 1) as u32;
            let lhs = apply_car(&mixture(-k).unwrap(), &omega_star, base);
            let rhs = apply_car(&CarExpr::a_dagger(m).unwrap(), &omega_star, base).scale(&sign);
            Check {
                statement: format!("b[-{k}] Ω* = (-1)^(k-1/2) a{m}' Ω* (printed sign)"),
                holds: lhs.sub(&rhs).is_zero(),
            }
        })
        .collect()
}

fn excitation_check(vac: &str, creators: &[CarExpr], v: &Vector, base: &PermRep) -> Check {
    let images: Vec<CuntzPoly> = creators.iter().map(CarExpr::to_cuntz).collect();
    let mut vectors = vec![v.clone()];
    for i in 0..images.len() {
        vectors.push(act(&images[i], v, base).expect("N = 2"));
        for j in (i + 1)..images.len() {
            let inner = act(&images[j], v, base).expect("N = 2");
            vectors.push(act(&images[i], &inner, base).expect("N = 2"));
        }
    }
    let mut labels = BTreeSet::new();
    let mut holds = true;
    for w in &vectors {
        let terms: Vec<_> = w.terms().collect();
        let unit = terms.len() == 1
            && terms[0].1.is_zero()
            && (terms[0].2.is_one() || (-terms[0].2.clone()).is_one());
        holds &= unit && labels.insert(terms[0].0.clone());
    }
    Check {
        statement: format!(
            "{} products of at most two creators on {vac} are distinct unit basis vectors",
            vectors.len()
        ),
        holds,
    }
}

/// CAR relations among `x_1, …, x_m` in the Cuntz image:
/// `{x_i, x_j^*} = δ_ij` and `{x_i, x_j} = 0` for `i ≤ j`.
pub fn verify_car_family(names: &[String], images: &[CuntzPoly]) -> Vec<Check> {
    let one = CuntzPoly::identity(2);
    let zero = CuntzPoly::zero(2);
    let pairs: Vec<(usize, usize)> = (0..images.len())
        .flat_map(|i| (i..images.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let x = &images[i];
            let y = &images[j];
            let yd = y.adjoint();
            let mixed = &(x * &yd) + &(&yd * x);
            let same = &(x * y) + &(y * x);
            let target = if i == j { &one } else { &zero };
            let mut out = vec![
                Check {
                    statement: format!("{{{}, {}'}} = {}", names[i], names[j], if i == j { 1 } else { 0 }),
                    holds: mixed.equals(target).expect("same alphabet"),
                },
                Check {
                    statement: format!("{{{}, {}}} = 0", names[i], names[j]),
                    holds: same.equals(&zero).expect("same alphabet"),
                },
            ];
            if i != j {
                let xd = x.adjoint();
                let other = &(y * &xd) + &(&xd * y);
                out.push(Check {
                    statement: format!("{{{}, {}'}} = 0", names[j], names[i]),
                    holds: other.equals(&zero).expect("same alphabet"),
                });
            }
            out
        })
        .collect()
}

/// The relations of the canonical anticommutation relations for
/// `n, m ≤ l`.
pub fn verify_car(l: u32) -> Vec<Check> {
    let names: Vec<String> = (1..=l).map(|n| format!("a{n}")).collect();
    let images: Vec<CuntzPoly> = (1..=l).map(|n| car_generator(n).unwrap()).collect();
    verify_car_family(&names, &images)
}

/// The same relations for the mixture `b_k`, `|k| ≤ cutoff`.
pub fn verify_mixture_car(cutoff: Rational64) -> Vec<Check> {
    let mut ks: Vec<Rational64> = positive_modes(cutoff).into_iter().map(|k| -k).collect();
    ks.reverse();
    ks.extend(positive_modes(cutoff));
    let names: Vec<String> = ks.iter().map(|k| format!("b[{k}]")).collect();
    let images: Vec<CuntzPoly> = ks
        .par_iter()
        .map(|&k| mixture(k).unwrap().to_cuntz())
        .collect();
    verify_car_family(&names, &images)
}

/// A branching law with `P[1], P[2], P[12], P[21]` renamed to the
/// physical representations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FermionFingerprint {
    items: BTreeMap<String, usize>,
}

fn fermion_name(c: &Component) -> String {
    match c {
        Component::Uhf { word } => match word.letters() {
            [1] => "Fock".into(),
            [2] => "Fock*".into(),
            [1, 2] => "IW".into(),
            [2, 1] => "IW*".into(),
            _ => c.to_string(),
        },
        other => other.to_string(),
    }
}

impl FermionFingerprint {
    pub fn from_fingerprint(fp: &Fingerprint) -> Self {
        let mut items = BTreeMap::new();
        for (c, m) in fp.items() {
            *items.entry(fermion_name(c)).or_insert(0) += m;
        }
        FermionFingerprint { items }
    }

    pub fn items(&self) -> impl Iterator<Item = (&str, usize)> {
        self.items.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl fmt::Display for FermionFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .items
            .iter()
            .flat_map(|(k, m)| std::iter::repeat_n(k.as_str(), *m))
            .collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

impl FromStr for FermionFingerprint {
    type Err = FermionError;

    fn from_str(s: &str) -> Result<Self, FermionError> {
        let mut items = BTreeMap::new();
        for part in s.split('⊕') {
            let p = part.trim();
            let name = match p.parse::<FermionRep>() {
                Ok(r) => r.name().to_string(),
                Err(_) => fermion_name(&p.parse::<Component>()?),
            };
            *items.entry(name).or_insert(0) += 1;
        }
        Ok(FermionFingerprint { items })
    }
}

/// `rep ∘ m` on the CAR algebra, for a grade-preserving monomial `m`.
pub fn fermion_branch(rep: FermionRep, m: &Morphism) -> Result<FermionFingerprint, FermionError> {
    if !m.is_grade_preserving() {
        return Err(FermionError::NotGradePreserving);
    }
    let fp = uhf_branch(&rep.uhf_word(), m)?;
    Ok(FermionFingerprint::from_fingerprint(&fp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::PermEndo;

    fn a(n: u32) -> CarExpr {
        CarExpr::a(n).unwrap()
    }

    #[test]
    fn generator_forms_agree() {
        for n in 1..=6 {
            let r = car_generator(n).unwrap();
            assert_eq!(r.num_terms(), 1 << (n - 1));
            assert!(r.equals(&car_closed_form(n).unwrap()).unwrap());
            assert!(r.equals(&psi_generator(n).unwrap()).unwrap());
            assert_eq!(r.gauge_grade(), [0].into_iter().collect());
        }
        let a3: Vec<Scalar> = car_generator(3).unwrap().terms().map(|t| t.2.clone()).collect();
        let signs: Vec<i64> = a3.iter().map(|c| if c.is_one() { 1 } else { -1 }).collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
    }

    #[test]
    fn car_relations_small() {
        let checks = verify_car(3);
        assert!(checks.iter().all(|c| c.holds));
        // 3 + 3·(3−1)/2·… : pairs i ≤ j give 2 identities, i < j one more
        assert_eq!(checks.len(), 6 * 2 + 3);
    }

    #[test]
    fn dual_map() {
        assert_eq!(dual_automorphism(&a(1)), a(1).adjoint());
        assert_eq!(dual_automorphism(&a(2)), a(2).adjoint().scale(&Scalar::from_int(-1)));
        assert_eq!(
            dual_automorphism(&a(1).mul(&a(2))),
            a(1).adjoint().mul(&a(2).adjoint()).scale(&Scalar::from_int(-1))
        );
        let twice = dual_automorphism(&dual_automorphism(&a(4)));
        assert_eq!(twice, a(4));
    }

    #[test]
    fn mixture_matches_psi142() {
        let rho = PermEndo::parse(2, 2, "142").unwrap();
        for n in 1..=3u32 {
            let lhs = mixture(Rational64::new(-(2 * n as i64 - 1), 2)).unwrap().to_cuntz();
            let rhs = rho.morphism().apply(&car_generator(2 * n - 1).unwrap());
            assert!(lhs.equals(&rhs).unwrap(), "n={n}");
            let lhs = mixture(Rational64::new(2 * n as i64 - 1, 2)).unwrap().to_cuntz();
            let rhs = rho.morphism().apply(&car_generator(2 * n).unwrap());
            assert!(lhs.equals(&rhs).unwrap(), "n={n}");
        }
        assert!(mixture(Rational64::from_integer(1)).is_err());
        assert_eq!(
            mixture(Rational64::new(1, 2)).unwrap().to_string(),
            "a1 a1' a3' + a1' a1 a3"
        );
    }

    #[test]
    fn vacua() {
        for rep in FermionRep::ALL {
            let r = vacuum_check(rep, 4, Rational64::new(3, 2));
            for c in &r.checks {
                assert!(c.holds, "{rep}: {}", c.statement);
            }
            assert!(r.errata.iter().all(|c| !c.holds));
        }
    }

    #[test]
    fn renamed_branching() {
        let psi = |c: &str| PermEndo::parse(2, 2, c).unwrap().morphism().clone();
        let f = |s: &str| s.parse::<FermionFingerprint>().unwrap();
        assert_eq!(fermion_branch(FermionRep::Fock, &psi("142")).unwrap(), f("IW⊕IW*"));
        assert_eq!(fermion_branch(FermionRep::Iw, &psi("13")).unwrap(), f("Fock"));
        assert_eq!(fermion_branch(FermionRep::Fock, &psi("id")).unwrap(), f("Fock"));
        assert_eq!(
            fermion_branch(FermionRep::Iw, &psi("12")).unwrap(),
            f("P[1122]⊕P[2211]")
        );
        let phi = named_automorphism("phi").unwrap();
        assert!(fermion_branch(FermionRep::Fock, &phi).is_err());
    }
}
