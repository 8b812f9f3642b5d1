//! Permutative representations on labeled bases and their branching laws.
//!
//! A cycle `P(J; q)` has basis vectors `s_w e_p`, `p = 1..k`, with
//! `e_1 = Ω`, `e_p = s_{j_p} ⋯ s_{j_k} Ω` and `s_J Ω = e^{2πiq} Ω`. A chain
//! `P(K)` has basis vectors `s_w e_n`, `n ≥ 0`, with `e_0 = Ω` and
//! `s_{k_n} e_n = e_{n−1}`. A label `(w, anchor)` is kept reduced, so each
//! basis vector has exactly one label.
//!
//! The composed representation `π ∘ m` for a monomial `m` permutes labels
//! up to phases. Every label has exactly one predecessor, and the
//! components of `π ∘ m` are the cycles and drifting orbits of the
//! predecessor map.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{words_of_length, CuntzPoly};
use crate::error::RepsError;
use crate::morphisms::{named_automorphism, split_direct_sum, Morphism, PermEndo, SignedSwap};
use crate::scalar::Scalar;
use crate::words::{EvWord, Phase, Word};

/// Base representation of a labeled basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PermRep {
    Cycle { n: u8, word: Word, phase: Phase },
    Chain { n: u8, tail: EvWord },
}

/// A basis vector `s_w e_anchor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Label {
    pub word: Word,
    pub anchor: i64,
}

impl Label {
    pub fn new(word: Word, anchor: i64) -> Self {
        Label { word, anchor }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "e{}", self.anchor)
        } else {
            write!(f, "s{} e{}", self.word, self.anchor)
        }
    }
}

impl PermRep {
    /// `P(J; q)` for a primitive `J`.
    pub fn cycle(n: u8, word: Word, phase: Phase) -> Result<Self, RepsError> {
        word.check_alphabet(n)?;
        if word.is_empty() {
            return Err(crate::error::WordError::Empty.into());
        }
        if !word.is_primitive() {
            return Err(crate::error::WordError::Periodic(word.to_string()).into());
        }
        Ok(PermRep::Cycle { n, word, phase })
    }

    pub fn chain(n: u8, tail: EvWord) -> Result<Self, RepsError> {
        tail.prefix().check_alphabet(n)?;
        tail.period().check_alphabet(n)?;
        Ok(PermRep::Chain { n, tail })
    }

    /// Parses `P(12)`, `P(1;1/2)` or `P(2(12)^inf)`.
    pub fn parse(n: u8, text: &str) -> Result<Self, RepsError> {
        let t = text.trim();
        let bad = || RepsError::Word(crate::error::WordError::Syntax(text.to_string()));
        let body = t
            .strip_prefix("P(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        if body.ends_with("^inf") {
            return PermRep::chain(n, EvWord::parse(body)?);
        }
        let (w, q) = match body.split_once(';') {
            Some((w, q)) => (w, Phase::parse(q).ok_or_else(bad)?),
            None => (body, Phase::zero()),
        };
        PermRep::cycle(n, Word::parse(w)?, q)
    }

    pub fn alphabet(&self) -> u8 {
        match self {
            PermRep::Cycle { n, .. } | PermRep::Chain { n, .. } => *n,
        }
    }

    /// The GP vector `Ω`.
    pub fn ground(&self) -> Label {
        match self {
            PermRep::Cycle { .. } => Label::new(Word::empty(), 1),
            PermRep::Chain { .. } => Label::new(Word::empty(), 0),
        }
    }

    fn k(&self) -> i64 {
        match self {
            PermRep::Cycle { word, .. } => word.len() as i64,
            PermRep::Chain { .. } => 0,
        }
    }

    fn cycle_letter(word: &Word, p: i64) -> u8 {
        word.letters()[(p - 1) as usize]
    }

    fn prev(&self, p: i64) -> i64 {
        let k = self.k();
        if p == 1 {
            k
        } else {
            p - 1
        }
    }

    fn next(&self, p: i64) -> i64 {
        if p == self.k() {
            1
        } else {
            p + 1
        }
    }

    /// Whether a label is in reduced form.
    pub fn is_reduced(&self, l: &Label) -> bool {
        let Some(last) = l.word.last() else {
            return true;
        };
        match self {
            PermRep::Cycle { word, .. } => {
                l.anchor >= 1
                    && l.anchor <= self.k()
                    && last != PermRep::cycle_letter(word, self.prev(l.anchor))
            }
            PermRep::Chain { tail, .. } => {
                l.anchor >= 0 && (l.anchor == 0 || last != tail.letter(l.anchor as usize))
            }
        }
    }

    /// `s_i` on a label.
    pub fn raise(&self, i: u8, l: &Label) -> (Label, Phase) {
        if l.word.is_empty() {
            match self {
                PermRep::Cycle { word, phase, .. } => {
                    let p = self.prev(l.anchor);
                    if i == PermRep::cycle_letter(word, p) {
                        let tag = if p == 1 { *phase } else { Phase::zero() };
                        return (Label::new(Word::empty(), p), tag);
                    }
                }
                PermRep::Chain { tail, .. } => {
                    if l.anchor >= 1 && i == tail.letter(l.anchor as usize) {
                        return (Label::new(Word::empty(), l.anchor - 1), Phase::zero());
                    }
                }
            }
        }
        let mut w = vec![i];
        w.extend_from_slice(l.word.letters());
        (Label::new(Word::new(w), l.anchor), Phase::zero())
    }

    /// `s_i^*` on a label; `None` when the result vanishes.
    pub fn lower(&self, i: u8, l: &Label) -> Option<(Label, Phase)> {
        if let Some(first) = l.word.first() {
            return (first == i).then(|| {
                (
                    Label::new(Word::from(&l.word.letters()[1..]), l.anchor),
                    Phase::zero(),
                )
            });
        }
        match self {
            PermRep::Cycle { word, phase, .. } => {
                (i == PermRep::cycle_letter(word, l.anchor)).then(|| {
                    let tag = if l.anchor == 1 {
                        -*phase
                    } else {
                        Phase::zero()
                    };
                    (Label::new(Word::empty(), self.next(l.anchor)), tag)
                })
            }
            PermRep::Chain { tail, .. } => (i == tail.letter(l.anchor as usize + 1))
                .then(|| (Label::new(Word::empty(), l.anchor + 1), Phase::zero())),
        }
    }

    /// `s_w` on a label.
    pub fn raise_word(&self, w: &Word, l: &Label) -> (Label, Phase) {
        let mut cur = l.clone();
        let mut tag = Phase::zero();
        for &i in w.letters().iter().rev() {
            let (next, t) = self.raise(i, &cur);
            cur = next;
            tag = tag + t;
        }
        (cur, tag)
    }

    /// `s_w^*` on a label.
    pub fn lower_word(&self, w: &Word, l: &Label) -> Option<(Label, Phase)> {
        let mut cur = l.clone();
        let mut tag = Phase::zero();
        for &i in w.letters() {
            let (next, t) = self.lower(i, &cur)?;
            cur = next;
            tag = tag + t;
        }
        Some((cur, tag))
    }

    /// The first `len` letters of the infinite address of a label: the free
    /// word followed by the letters unrolled from the anchor.
    pub fn address(&self, l: &Label, len: usize) -> Vec<u8> {
        let mut out: Vec<u8> = l.word.letters().iter().copied().take(len).collect();
        let mut anchor = l.anchor;
        while out.len() < len {
            match self {
                PermRep::Cycle { word, .. } => {
                    out.push(PermRep::cycle_letter(word, anchor));
                    anchor = self.next(anchor);
                }
                PermRep::Chain { tail, .. } => {
                    out.push(tail.letter(anchor as usize + 1));
                    anchor += 1;
                }
            }
        }
        out
    }

    /// Reduced labels with free word length at most `bound`; chain anchors
    /// run over `0..=max_anchor`.
    pub fn labels_up_to(&self, bound: usize, max_anchor: i64) -> Vec<Label> {
        let anchors: Vec<i64> = match self {
            PermRep::Cycle { .. } => (1..=self.k()).collect(),
            PermRep::Chain { .. } => (0..=max_anchor).collect(),
        };
        let mut out = Vec::new();
        for len in 0..=bound {
            for w in words_of_length(self.alphabet(), len) {
                for &a in &anchors {
                    let l = Label::new(w.clone(), a);
                    if self.is_reduced(&l) {
                        out.push(l);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PermRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermRep::Cycle { word, phase, .. } if phase.is_zero() => write!(f, "P({word})"),
            PermRep::Cycle { word, phase, .. } => write!(f, "P({word};{phase})"),
            PermRep::Chain { tail, .. } => write!(f, "P({tail})"),
        }
    }
}

/// A finite linear combination of basis vectors with root-of-unity phases.
/// Phases at or beyond one half are folded back by a sign.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vector {
    terms: BTreeMap<(Label, Phase), Scalar>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector::default()
    }

    pub fn basis(l: Label) -> Self {
        let mut v = Vector::zero();
        v.add_term(l, Phase::zero(), &Scalar::one());
        v
    }

    pub fn add_term(&mut self, l: Label, phase: Phase, c: &Scalar) {
        let (phase, c) = if phase.value() >= Rational64::new(1, 2) {
            (phase + Phase::half(), -c.clone())
        } else {
            (phase, c.clone())
        };
        let key = (l, phase);
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Label, &Phase, &Scalar)> {
        self.terms.iter().map(|((l, p), c)| (l, p, c))
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        let mut out = Vector::zero();
        for (l, p, x) in self.terms() {
            out.add_term(l.clone(), *p, &(x * c));
        }
        out
    }

    pub fn add(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        for (l, p, x) in other.terms() {
            out.add_term(l.clone(), *p, x);
        }
        out
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add(&other.scale(&-Scalar::one()))
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(l, p, c)| {
                if p.is_zero() {
                    format!("({c}) {l}")
                } else {
                    format!("({c}) e^(2pi i {p}) {l}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact action of a polynomial on a vector.
pub fn act(x: &CuntzPoly, v: &Vector, rep: &PermRep) -> Result<Vector, RepsError> {
    if x.alphabet() != rep.alphabet() {
        return Err(RepsError::AlphabetMismatch(rep.alphabet(), x.alphabet()));
    }
    let mut out = Vector::zero();
    for (j, k, c) in x.terms() {
        for (l, p, a) in v.terms() {
            if let Some((mid, t1)) = rep.lower_word(k, l) {
                let (end, t2) = rep.raise_word(j, &mid);
                out.add_term(end, *p + t1 + t2, &(a * c));
            }
        }
    }
    Ok(out)
}

/// One term `ε s_A s_B^*` of the image of a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoTerm {
    pub letter: u8,
    pub range: Word,
    pub source: Word,
    pub sign: bool,
}

/// Images `t_i = Σ ε s_A s_B^*` with `|A| = |B| + 1`, the `A`s forming a
/// complete prefix code and the `B`s of each `t_i` as well.
#[derive(Clone, Debug)]
pub struct MonomialSystem {
    n: u8,
    terms: Vec<MonoTerm>,
    max_range: usize,
}

fn complete_prefix_code(n: u8, words: &[&Word]) -> bool {
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if i != j && a.is_prefix_of(b) {
                return false;
            }
        }
    }
    let mut kraft = BigRational::zero();
    for w in words {
        kraft += BigRational::new(
            1.into(),
            num_bigint::BigInt::from(n).pow(w.len() as u32),
        );
    }
    kraft.is_one()
}

impl MonomialSystem {
    pub fn from_morphism(m: &Morphism) -> Result<Self, RepsError> {
        let n = m.alphabet();
        let one = Scalar::one();
        let minus = -Scalar::one();
        let mut terms = Vec::new();
        for i in 1..=n {
            for (a, b, c) in m.image(i).terms() {
                let sign = if *c == one {
                    true
                } else if *c == minus {
                    false
                } else {
                    return Err(RepsError::NotMonomial(format!("coefficient {c} in t{i}")));
                };
                if a.len() != b.len() + 1 {
                    return Err(RepsError::NotMonomial(format!("term s[{a},{b}] in t{i}")));
                }
                terms.push(MonoTerm {
                    letter: i,
                    range: a.clone(),
                    source: b.clone(),
                    sign,
                });
            }
        }
        let ranges: Vec<&Word> = terms.iter().map(|t| &t.range).collect();
        if !complete_prefix_code(n, &ranges) {
            return Err(RepsError::NotMonomial("ranges do not partition".into()));
        }
        for i in 1..=n {
            let sources: Vec<&Word> = terms
                .iter()
                .filter(|t| t.letter == i)
                .map(|t| &t.source)
                .collect();
            if !complete_prefix_code(n, &sources) {
                return Err(RepsError::NotMonomial(format!("sources of t{i} do not partition")));
            }
        }
        let max_range = terms.iter().map(|t| t.range.len()).max().unwrap_or(1);
        Ok(MonomialSystem {
            n,
            terms,
            max_range,
        })
    }

    pub fn alphabet(&self) -> u8 {
        self.n
    }

    /// The longest range word, the order `l` for a permutative map.
    pub fn order(&self) -> usize {
        self.max_range
    }

    pub fn terms(&self) -> &[MonoTerm] {
        &self.terms
    }

    /// The unique `(i, y, c)` with `t_i y = e^{2πic} v`.
    pub fn predecessor(&self, rep: &PermRep, v: &Label) -> (u8, Label, Phase) {
        let addr = Word::new(rep.address(v, self.max_range));
        let term = self
            .terms
            .iter()
            .find(|t| t.range.is_prefix_of(&addr))
            .expect("ranges form a complete prefix code");
        let (mid, t1) = rep
            .lower_word(&term.range, v)
            .expect("range word prefixes the address");
        let (y, t2) = rep.raise_word(&term.source, &mid);
        let eps = if term.sign { Phase::zero() } else { Phase::half() };
        (term.letter, y, eps + -t1 + -t2)
    }

    /// `t_i y = e^{2πic} v`, as `(v, c)`.
    pub fn forward(&self, rep: &PermRep, i: u8, y: &Label) -> (Label, Phase) {
        let len = self
            .terms
            .iter()
            .filter(|t| t.letter == i)
            .map(|t| t.source.len())
            .max()
            .unwrap_or(0);
        let addr = Word::new(rep.address(y, len));
        let term = self
            .terms
            .iter()
            .find(|t| t.letter == i && t.source.is_prefix_of(&addr))
            .expect("sources form a complete prefix code");
        let (mid, t1) = rep
            .lower_word(&term.source, y)
            .expect("source word prefixes the address");
        let (v, t2) = rep.raise_word(&term.range, &mid);
        let eps = if term.sign { Phase::zero() } else { Phase::half() };
        (v, eps + t1 + t2)
    }
}

/// `π ∘ m` on the labeled basis of `π`.
#[derive(Clone, Debug)]
pub struct BranchSystem {
    pub base: PermRep,
    pub maps: MonomialSystem,
}

pub fn compose_with_endo(rep: &PermRep, m: &Morphism) -> Result<BranchSystem, RepsError> {
    if rep.alphabet() != m.alphabet() {
        return Err(RepsError::AlphabetMismatch(rep.alphabet(), m.alphabet()));
    }
    Ok(BranchSystem {
        base: rep.clone(),
        maps: MonomialSystem::from_morphism(m)?,
    })
}

/// A cycle of the predecessor map: `t_W v = e^{2πi·phase} v` for the first
/// label `v`, with `W` read off along predecessors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleComponent {
    pub word: Word,
    pub phase: Phase,
    pub labels: Vec<Label>,
}

impl CycleComponent {
    /// The letters read starting at the `i`-th label of the cycle.
    pub fn word_from(&self, i: usize) -> Word {
        self.word.rotate(i)
    }
}

/// A drifting orbit of the predecessor map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComponent {
    pub tail: EvWord,
    pub start: Label,
}

/// Machine-checkable statements attached to a branching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// `t_W v = e^{2πi·phase} v` re-checked with the forward maps.
    FixedPoint {
        word: Word,
        phase: Phase,
        vector: Label,
        holds: bool,
    },
    /// GP vectors of distinct components are distinct basis vectors.
    Orthogonal { components: usize, holds: bool },
    /// Every seed orbit ended in a recorded component.
    Complete { seeds: usize, holds: bool },
}

impl Certificate {
    pub fn holds(&self) -> bool {
        match self {
            Certificate::FixedPoint { holds, .. }
            | Certificate::Orthogonal { holds, .. }
            | Certificate::Complete { holds, .. } => *holds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchResult {
    pub cycles: Vec<CycleComponent>,
    pub chains: Vec<ChainComponent>,
    pub seed_bound: usize,
    pub certificates: Vec<Certificate>,
}

impl BranchResult {
    pub fn fingerprint(&self) -> Fingerprint {
        let mut fp = Fingerprint::empty();
        for c in &self.cycles {
            fp.insert(Component::cycle(&c.word, c.phase));
        }
        for c in &self.chains {
            fp.insert(Component::Chain {
                class: c.tail.shift_class(),
            });
        }
        fp
    }

    pub fn certified(&self) -> bool {
        self.certificates.iter().all(Certificate::holds)
    }
}

enum Walk {
    Cycle(CycleComponent),
    Chain(ChainComponent, (i64, Label)),
}

impl BranchSystem {
    /// The default seed bound: the longest range word of the images.
    pub fn default_seed_bound(&self) -> usize {
        self.maps.order()
    }

    fn step_cap(&self) -> usize {
        let n = self.maps.alphabet() as usize;
        let k = match &self.base {
            PermRep::Cycle { word, .. } => word.len(),
            PermRep::Chain { tail, .. } => tail.prefix().len() + tail.period().len(),
        };
        10 * n.pow(self.maps.order() as u32) * k.max(1)
    }

    pub fn branch(&self) -> Result<BranchResult, RepsError> {
        self.branch_with_bound(self.default_seed_bound())
    }

    /// Orbit search from every reduced label with free word length at most
    /// `bound`.
    pub fn branch_with_bound(&self, bound: usize) -> Result<BranchResult, RepsError> {
        let max_anchor = match &self.base {
            PermRep::Cycle { .. } => 0,
            PermRep::Chain { tail, .. } => {
                (tail.prefix().len() + (self.maps.order() + 1) * tail.period().len()) as i64
            }
        };
        let seeds = self.base.labels_up_to(bound, max_anchor);
        let walks: Vec<Result<Walk, RepsError>> =
            seeds.par_iter().map(|s| self.walk(s)).collect();
        let mut cycles: BTreeMap<Label, CycleComponent> = BTreeMap::new();
        let mut chains: BTreeMap<(i64, Label), ChainComponent> = BTreeMap::new();
        for w in walks {
            match w? {
                Walk::Cycle(c) => {
                    cycles.entry(c.labels[0].clone()).or_insert(c);
                }
                Walk::Chain(c, key) => {
                    chains
                        .entry(key)
                        .and_modify(|old| {
                            if c.start < old.start {
                                *old = c.clone();
                            }
                        })
                        .or_insert(c);
                }
            }
        }
        let cycles: Vec<CycleComponent> = cycles.into_values().collect();
        let chains: Vec<ChainComponent> = chains.into_values().collect();
        let mut certificates = Vec::new();
        for c in &cycles {
            let (v, phase) = c.word.letters().iter().rev().fold(
                (c.labels[0].clone(), Phase::zero()),
                |(y, acc), &i| {
                    let (v, t) = self.maps.forward(&self.base, i, &y);
                    (v, acc + t)
                },
            );
            certificates.push(Certificate::FixedPoint {
                word: c.word.clone(),
                phase: c.phase,
                vector: c.labels[0].clone(),
                holds: v == c.labels[0] && phase == c.phase,
            });
        }
        let mut all: BTreeSet<&Label> = BTreeSet::new();
        let mut total = 0;
        for c in &cycles {
            for l in &c.labels {
                all.insert(l);
                total += 1;
            }
        }
        certificates.push(Certificate::Orthogonal {
            components: cycles.len() + chains.len(),
            holds: all.len() == total,
        });
        certificates.push(Certificate::Complete {
            seeds: seeds.len(),
            holds: true,
        });
        Ok(BranchResult {
            cycles,
            chains,
            seed_bound: bound,
            certificates,
        })
    }

    /// Follows predecessors from one seed until a label repeats (a cycle)
    /// or a chain state repeats up to an anchor shift.
    fn walk(&self, seed: &Label) -> Result<Walk, RepsError> {
        let cap = self.step_cap();
        let mut seen: HashMap<Label, usize> = HashMap::new();
        let mut states: HashMap<(Word, i64), usize> = HashMap::new();
        let mut path: Vec<(Label, u8, Phase)> = Vec::new();
        let mut cur = seed.clone();
        for _ in 0..cap {
            if let Some(&start) = seen.get(&cur) {
                return Ok(Walk::Cycle(self.close_cycle(&path[start..])));
            }
            if let PermRep::Chain { tail, .. } = &self.base {
                let pre = tail.prefix().len() as i64;
                let per = tail.period().len() as i64;
                if cur.anchor >= pre {
                    let key = (cur.word.clone(), (cur.anchor - pre) % per);
                    if let Some(&start) = states.get(&key) {
                        return Ok(self.close_chain(&path[start..]));
                    }
                    states.insert(key, path.len());
                }
            }
            seen.insert(cur.clone(), path.len());
            let (i, y, c) = self.maps.predecessor(&self.base, &cur);
            path.push((cur, i, c));
            cur = y;
        }
        Err(RepsError::IterationCap {
            cap,
            seed: seed.to_string(),
        })
    }

    fn close_cycle(&self, path: &[(Label, u8, Phase)]) -> CycleComponent {
        let start = path
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .0.cmp(&b.1 .0))
            .map(|(i, _)| i)
            .expect("cycle is nonempty");
        let m = path.len();
        let order: Vec<&(Label, u8, Phase)> = (0..m).map(|j| &path[(start + j) % m]).collect();
        CycleComponent {
            word: Word::new(order.iter().map(|x| x.1).collect()),
            phase: order.iter().fold(Phase::zero(), |acc, x| acc + x.2),
            labels: order.iter().map(|x| x.0.clone()).collect(),
        }
    }

    fn close_chain(&self, path: &[(Label, u8, Phase)]) -> Walk {
        let shift = path.last().map(|x| x.0.anchor).unwrap_or(0) - path[0].0.anchor;
        let d = shift.abs().max(1);
        let letters: Vec<u8> = path.iter().map(|x| x.1).collect();
        let tail = EvWord::periodic(Word::new(letters)).expect("nonempty period");
        let key = path
            .iter()
            .map(|x| Label::new(x.0.word.clone(), x.0.anchor.rem_euclid(d)))
            .min()
            .expect("nonempty");
        let start = path
            .iter()
            .map(|x| x.0.clone())
            .min()
            .expect("nonempty");
        Walk::Chain(ChainComponent { tail, start }, (d, key))
    }
}

/// Labels of irreducible (or, for cycle words kept whole, cyclic) pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// `P(W; q)`, `W` in minimal rotation, possibly a proper power.
    Cycle { word: Word, phase: Phase },
    /// `P(K)` for an eventually periodic chain, by the shift class of `K`.
    Chain { class: Word },
    /// `P[J]` on the UHF core, `J` primitive and positional.
    Uhf { word: Word },
    /// `GP(±)` optionally composed with `θ`.
    Gp { plus: bool, theta: bool },
    /// `GP[±]`.
    GpUhf { plus: bool },
}

impl Component {
    pub fn cycle(word: &Word, phase: Phase) -> Self {
        Component::Cycle {
            word: word.min_rotation(),
            phase,
        }
    }

    /// `P[J]` with `J` replaced by its primitive root.
    pub fn uhf(word: &Word) -> Self {
        let (root, _) = word.primitive_split().expect("nonempty word");
        Component::Uhf { word: root }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Component::Cycle { .. } => "cycle",
            Component::Chain { .. } => "chain",
            Component::Uhf { .. } => "uhf",
            Component::Gp { .. } => "gp",
            Component::GpUhf { .. } => "gp-uhf",
        }
    }

    pub fn word_string(&self) -> String {
        match self {
            Component::Cycle { word, .. } | Component::Uhf { word } => word.to_string(),
            Component::Chain { class } => format!("({class})^inf"),
            Component::Gp { plus, theta } => {
                format!("{}{}", if *plus { "+" } else { "-" }, if *theta { "θ" } else { "" })
            }
            Component::GpUhf { plus } => (if *plus { "+" } else { "-" }).to_string(),
        }
    }

    pub fn phase(&self) -> Phase {
        match self {
            Component::Cycle { phase, .. } => *phase,
            _ => Phase::zero(),
        }
    }

    /// Splits `P(W_0^m; q)` into `P(W_0; (q+n)/m)`.
    pub fn irreducible(&self) -> Vec<Component> {
        match self {
            Component::Cycle { word, phase } => {
                let (root, m) = word.primitive_split().expect("nonempty word");
                phase
                    .roots(m)
                    .into_iter()
                    .map(|q| Component::cycle(&root, q))
                    .collect()
            }
            other => vec![other.clone()],
        }
    }

    /// The UHF restriction, by rotations of the cycle word.
    pub fn restrict(&self) -> Vec<Component> {
        match self {
            Component::Cycle { word, .. } => word.rotations().iter().map(Component::uhf).collect(),
            Component::Gp { plus, .. } => vec![Component::GpUhf { plus: *plus }],
            other => vec![other.clone()],
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Cycle { word, phase } if phase.is_zero() => write!(f, "P({word})"),
            Component::Cycle { word, phase } => write!(f, "P({word};{phase})"),
            Component::Chain { class } => write!(f, "P(({class})^inf)"),
            Component::Uhf { word } => write!(f, "P[{word}]"),
            Component::Gp { plus, theta } => write!(
                f,
                "GP({}){}",
                if *plus { "+" } else { "-" },
                if *theta { "∘θ" } else { "" }
            ),
            Component::GpUhf { plus } => write!(f, "GP[{}]", if *plus { "+" } else { "-" }),
        }
    }
}

impl FromStr for Component {
    type Err = RepsError;

    fn from_str(s: &str) -> Result<Self, RepsError> {
        let t = s.trim();
        let bad = || RepsError::Word(crate::error::WordError::Syntax(s.to_string()));
        if let Some(rest) = t.strip_prefix("GP(") {
            let (sign, tail) = rest.split_once(')').ok_or_else(bad)?;
            let plus = match sign {
                "+" => true,
                "-" => false,
                _ => return Err(bad()),
            };
            let theta = match tail.trim() {
                "" => false,
                "∘θ" | ".theta" => true,
                _ => return Err(bad()),
            };
            return Ok(Component::Gp { plus, theta });
        }
        if let Some(rest) = t.strip_prefix("GP[") {
            return match rest {
                "+]" => Ok(Component::GpUhf { plus: true }),
                "-]" => Ok(Component::GpUhf { plus: false }),
                _ => Err(bad()),
            };
        }
        if let Some(body) = t.strip_prefix("P[").and_then(|r| r.strip_suffix(']')) {
            return Ok(Component::uhf(&Word::parse(body)?));
        }
        if let Some(body) = t.strip_prefix("P(").and_then(|r| r.strip_suffix(')')) {
            if body.ends_with("^inf") {
                let ev = EvWord::parse(body)?;
                return Ok(Component::Chain {
                    class: ev.shift_class(),
                });
            }
            let (w, q) = match body.split_once(';') {
                Some((w, q)) => (w, Phase::parse(q).ok_or_else(bad)?),
                None => (body, Phase::zero()),
            };
            let w = Word::parse(w)?;
            if w.is_empty() {
                return Err(bad());
            }
            return Ok(Component::cycle(&w, q));
        }
        Err(bad())
    }
}

/// A multiset of components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fingerprint {
    items: BTreeMap<Component, usize>,
}

impl Fingerprint {
    pub fn empty() -> Self {
        Fingerprint::default()
    }

    pub fn from_components(cs: impl IntoIterator<Item = Component>) -> Self {
        let mut fp = Fingerprint::empty();
        for c in cs {
            fp.insert(c);
        }
        fp
    }

    pub fn insert(&mut self, c: Component) {
        *self.items.entry(c).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &Fingerprint) {
        for (c, m) in &other.items {
            *self.items.entry(c.clone()).or_insert(0) += m;
        }
    }

    pub fn items(&self) -> impl Iterator<Item = (&Component, usize)> {
        self.items.iter().map(|(c, m)| (c, *m))
    }

    /// Number of components counted with multiplicity.
    pub fn total(&self) -> usize {
        self.items.values().sum()
    }

    pub fn irreducible(&self) -> Fingerprint {
        Fingerprint::from_components(
            self.items
                .iter()
                .flat_map(|(c, m)| std::iter::repeat_n(c, *m))
                .flat_map(Component::irreducible),
        )
    }

    pub fn restrict(&self) -> Fingerprint {
        Fingerprint::from_components(
            self.items
                .iter()
                .flat_map(|(c, m)| std::iter::repeat_n(c, *m))
                .flat_map(Component::restrict),
        )
    }

    /// Drops the `∘θ` marks and moves `GP` labels to the UHF core.
    pub fn to_uhf_gp(&self) -> Fingerprint {
        Fingerprint::from_components(
            self.items
                .iter()
                .flat_map(|(c, m)| std::iter::repeat_n(c, *m))
                .map(|c| match c {
                    Component::Gp { plus, .. } => Component::GpUhf { plus: *plus },
                    other => other.clone(),
                }),
        )
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .items
            .iter()
            .flat_map(|(c, m)| std::iter::repeat_n(c.to_string(), *m))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("⊕"))
        }
    }
}

impl FromStr for Fingerprint {
    type Err = RepsError;

    /// Parses `P(1)⊕P(2)`; `+` between components is accepted for `⊕`
    /// outside brackets.
    fn from_str(s: &str) -> Result<Self, RepsError> {
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        for ch in s.chars() {
            match ch {
                '(' | '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' | ']' => {
                    depth -= 1;
                    cur.push(ch);
                }
                '⊕' if depth == 0 => parts.push(std::mem::take(&mut cur)),
                _ => cur.push(ch),
            }
        }
        parts.push(cur);
        let cs: Result<Vec<Component>, RepsError> =
            parts.iter().map(|p| p.parse::<Component>()).collect();
        Ok(Fingerprint::from_components(cs?))
    }
}

/// `P(J^l) = ⊕_n P(J; (n−1)/l)`.
pub fn decompose_power(j: &Word, l: usize) -> Result<Fingerprint, RepsError> {
    if j.is_empty() {
        return Err(crate::error::WordError::Empty.into());
    }
    if !j.is_primitive() {
        return Err(crate::error::WordError::Periodic(j.to_string()).into());
    }
    Ok(Fingerprint::from_components(
        Phase::zero()
            .roots(l)
            .into_iter()
            .map(|q| Component::cycle(j, q)),
    ))
}

/// The `Z`-indexed family `P[ηK]` of a chain restricted to the UHF core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftFamily {
    pub base: EvWord,
}

impl ShiftFamily {
    pub fn member(&self, eta: i64) -> EvWord {
        self.base.shift(eta)
    }

    /// The distinct classes, each of infinite multiplicity.
    pub fn classes(&self) -> Vec<Component> {
        let p = self.base.period().len() as i64;
        let set: BTreeSet<Component> = (0..p)
            .map(|eta| Component::Uhf {
                word: self.member(eta).positional_key(),
            })
            .collect();
        set.into_iter().collect()
    }
}

/// Result of restricting a permutative representation to the UHF core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UhfRestriction {
    Finite(Fingerprint),
    Family(ShiftFamily),
}

pub fn restrict_to_uhf(rep: &PermRep) -> UhfRestriction {
    match rep {
        PermRep::Cycle { word, .. } => UhfRestriction::Finite(Fingerprint::from_components(
            word.rotations().iter().map(Component::uhf),
        )),
        PermRep::Chain { tail, .. } => UhfRestriction::Family(ShiftFamily { base: tail.clone() }),
    }
}

/// The GP vector `e_η` of the `η`-th summand of a chain restricted to the
/// UHF core: `s_{K_(η)}^* Ω` for `η ≥ 0` and `s_1^{|η|} Ω` otherwise.
pub fn chain_summand_vector(eta: i64) -> Label {
    if eta >= 0 {
        Label::new(Word::empty(), eta)
    } else {
        Label::new(Word::new(vec![1; eta.unsigned_abs() as usize]), 0)
    }
}

/// `P[T] ∘ m` for a primitive word `T` and a monomial grade-preserving `m`.
///
/// `P(T)` splits over the UHF core as `⊕_p V_p` with `V_p` generated by
/// `e_p`, and `s_w e_q ∈ V_p` iff `p ≡ q − |w| (mod |T|)`. Each vector of a
/// cycle of `P(T) ∘ m` is the GP vector of one UHF summand, named by the
/// word read from it. The summands inside `V_1 = P[T]` are kept.
pub fn uhf_branch(t: &Word, m: &Morphism) -> Result<Fingerprint, RepsError> {
    let rep = PermRep::cycle(m.alphabet(), t.clone(), Phase::zero())?;
    let sys = compose_with_endo(&rep, m)?;
    let res = sys.branch()?;
    let k = t.len() as i64;
    let mut fp = Fingerprint::empty();
    for c in &res.cycles {
        for (i, l) in c.labels.iter().enumerate() {
            if (l.anchor - 1 - l.word.len() as i64).rem_euclid(k) == 0 {
                fp.insert(Component::uhf(&c.word_from(i)));
            }
        }
    }
    Ok(fp)
}

/// `P(J) ∘ m` by orbit search.
pub fn branch(rep: &PermRep, m: &Morphism) -> Result<BranchResult, RepsError> {
    compose_with_endo(rep, m)?.branch()
}

fn gp_label(g: SignedSwap) -> Component {
    match g.signs {
        [true, true] => Component::Gp {
            plus: true,
            theta: false,
        },
        [true, false] => Component::Gp {
            plus: false,
            theta: false,
        },
        [false, true] => Component::Gp {
            plus: false,
            theta: true,
        },
        [false, false] => Component::Gp {
            plus: true,
            theta: true,
        },
    }
}

/// `GP(±)∘θ^e` written as `GP(+) ∘ h`.
fn gp_as_automorphism(c: &Component) -> SignedSwap {
    match c {
        Component::Gp { plus, theta } => SignedSwap {
            swap: false,
            signs: [!theta, *plus != *theta],
        },
        _ => unreachable!("only GP labels"),
    }
}

/// `GP(±) ∘ m` by the rule calculus: direct sums over the frames `ξ, ξ′`
/// split additively, and the eight signed swaps act through
/// `GP(+)∘α = GP(+)`, `GP(+)∘β_2 = GP(−)`. The flip `ψ_(12)(34)` is reduced
/// directly. Anything else is not derivable.
pub fn gp_branch(plus: bool, m: &Morphism) -> Result<Fingerprint, RepsError> {
    if m.alphabet() != 2 {
        return Err(RepsError::NotDerivable("GP needs N = 2".into()));
    }
    let start = Component::Gp { plus, theta: false };
    let mut fp = Fingerprint::empty();
    gp_rec(&start, m, &mut fp, 0)?;
    Ok(fp)
}

fn gp_rec(label: &Component, m: &Morphism, out: &mut Fingerprint, depth: usize) -> Result<(), RepsError> {
    if let Some(g) = SignedSwap::recognise(m) {
        let h = gp_as_automorphism(label).morphism();
        let hg = SignedSwap::recognise(&h.compose(&g.morphism())).expect("closed under composition");
        out.insert(gp_label(hg));
        return Ok(());
    }
    if depth < 4 {
        if let Some((m1, m2, _)) = split_direct_sum(m) {
            gp_rec(label, &m1, out, depth + 1)?;
            gp_rec(label, &m2, out, depth + 1)?;
            return Ok(());
        }
    }
    let flip = PermEndo::parse(2, 2, "(12)(34)")?;
    if m.same_as(flip.morphism()) {
        if let Some(fp) = gp_by_conjugation_from(label, m)? {
            out.merge(&fp);
            return Ok(());
        }
    }
    Err(RepsError::NotDerivable(
        m.name().unwrap_or("morphism").to_string(),
    ))
}

/// `GP(+) = P(1)∘φ`, `GP(−) = P(2)∘φ`, so `GP(±)∘m = P(c)∘(φmφ)∘φ`. When
/// `φmφ` is monomial its branching is computed on the labeled basis and
/// each summand `P(c; q)∘φ` renamed; summands outside `P(1|2; 0|1/2)` make
/// the result underivable (`None`).
pub fn gp_by_conjugation(plus: bool, m: &Morphism) -> Result<Option<Fingerprint>, RepsError> {
    gp_by_conjugation_from(&Component::Gp { plus, theta: false }, m)
}

fn gp_by_conjugation_from(label: &Component, m: &Morphism) -> Result<Option<Fingerprint>, RepsError> {
    if m.alphabet() != 2 {
        return Ok(None);
    }
    let phi = named_automorphism("phi")?;
    let conj = phi.compose(m).compose(&phi);
    let Component::Gp { plus, theta } = label else {
        return Ok(None);
    };
    let c = if *plus { 1 } else { 2 };
    let q = if *theta { Phase::half() } else { Phase::zero() };
    let rep = PermRep::cycle(2, Word::letter(c), q)?;
    let sys = match compose_with_endo(&rep, &conj) {
        Ok(s) => s,
        Err(RepsError::NotMonomial(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let res = sys.branch()?;
    let mut fp = Fingerprint::empty();
    for comp in res.fingerprint().irreducible().items() {
        let named = match comp.0 {
            Component::Cycle { word, phase } if word.len() == 1 => {
                let half = *phase == Phase::half();
                if !phase.is_zero() && !half {
                    return Ok(None);
                }
                Component::Gp {
                    plus: word.letters()[0] == 1,
                    theta: half,
                }
            }
            _ => return Ok(None),
        };
        for _ in 0..comp.1 {
            fp.insert(named.clone());
        }
    }
    Ok(Some(fp))
}
