//! The dense *-subalgebra of the Cuntz algebra O_N.
//!
//! Every element is a finite sum `Σ c_{J,K} s_J s_K^*`. Products are
//! resolved with `s_i^* s_j = δ_ij I`; the unit relation `Σ s_i s_i^* = I`
//! is used to contract full sibling blocks. Contraction alone is not a
//! normal form across mixed levels, so equality pads every grade class to a
//! common level and compares coefficients there.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::scalar::Scalar;
use crate::words::Word;

/// `Σ c_{J,K} s_J s_K^*` with no zero coefficients and no contractible
/// sibling block.
#[derive(Clone, PartialEq, Eq)]
pub struct CuntzPoly {
    n: u8,
    terms: BTreeMap<(Word, Word), Scalar>,
}

/// One entry of the JSON term dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDump {
    pub range: Word,
    pub source: Word,
    pub coefficient: Scalar,
}

impl CuntzPoly {
    pub fn zero(n: u8) -> Self {
        CuntzPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: u8) -> Self {
        CuntzPoly::term(n, Word::empty(), Word::empty(), Scalar::one())
    }

    pub fn scalar(n: u8, c: Scalar) -> Self {
        CuntzPoly::term(n, Word::empty(), Word::empty(), c)
    }

    /// `c · s_J s_K^*`.
    pub fn term(n: u8, j: Word, k: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((j, k), c);
        }
        let mut p = CuntzPoly { n, terms };
        p.reduce();
        p
    }

    /// `s_i`.
    pub fn generator(n: u8, i: u8) -> Self {
        CuntzPoly::term(n, Word::letter(i), Word::empty(), Scalar::one())
    }

    /// `s_i^*`.
    pub fn generator_adjoint(n: u8, i: u8) -> Self {
        CuntzPoly::term(n, Word::empty(), Word::letter(i), Scalar::one())
    }

    /// `s_J` for a word `J`.
    pub fn isometry(n: u8, j: Word) -> Self {
        CuntzPoly::term(n, j, Word::empty(), Scalar::one())
    }

    /// The matrix unit `E_{J,K} = s_J s_K^*` with `|J| = |K| ≥ 1`.
    pub fn matrix_unit(n: u8, j: Word, k: Word) -> Result<Self, AlgebraError> {
        if j.len() != k.len() || j.is_empty() {
            return Err(AlgebraError::MatrixUnitShape(j.len(), k.len()));
        }
        j.check_alphabet(n)?;
        k.check_alphabet(n)?;
        Ok(CuntzPoly::term(n, j, k, Scalar::one()))
    }

    /// Builds a polynomial from raw terms, summing duplicates.
    pub fn from_terms(n: u8, terms: impl IntoIterator<Item = (Word, Word, Scalar)>) -> Self {
        let mut map: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
        for (j, k, c) in terms {
            accumulate(&mut map, (j, k), &c);
        }
        let mut p = CuntzPoly { n, terms: map };
        p.reduce();
        p
    }

    pub fn alphabet(&self) -> u8 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.padded_is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|((j, k), c)| (j, k, c))
    }

    /// Sorted term list `(J, K, c)`.
    pub fn dump(&self) -> Vec<TermDump> {
        self.terms()
            .map(|(j, k, c)| TermDump {
                range: j.clone(),
                source: k.clone(),
                coefficient: c.clone(),
            })
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n != other.n {
            Err(AlgebraError::AlphabetMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (key, c) in &other.terms {
            accumulate(&mut terms, key.clone(), c);
        }
        let mut p = CuntzPoly { n: self.n, terms };
        p.reduce();
        Ok(p)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&-other)
    }

    /// Product resolved by the overlap rule for `s_K^* s_L`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut terms: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
        for ((j, k), a) in &self.terms {
            for ((l, m), b) in &other.terms {
                if let Some(key) = multiply_terms(j, k, l, m) {
                    accumulate(&mut terms, key, &(a * b));
                }
            }
        }
        let mut p = CuntzPoly { n: self.n, terms };
        p.reduce();
        Ok(p)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return CuntzPoly::zero(self.n);
        }
        CuntzPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// The *-involution. Coefficients are real, so only the words swap.
    pub fn adjoint(&self) -> Self {
        let mut p = CuntzPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|((j, k), c)| ((k.clone(), j.clone()), c.clone()))
                .collect(),
        };
        p.reduce();
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = CuntzPoly::identity(self.n);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Grades `|J| − |K|` present in the reduced support.
    pub fn gauge_grade(&self) -> BTreeSet<i64> {
        self.terms
            .keys()
            .map(|(j, k)| j.len() as i64 - k.len() as i64)
            .collect()
    }

    /// Decides `self == other` in the algebra.
    pub fn equals(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.try_sub(other)?.padded_is_zero())
    }

    /// Pads every term of each grade to a common level and reports whether
    /// all coefficients vanish.
    fn padded_is_zero(&self) -> bool {
        self.padded_form().values().all(|m| m.values().all(Scalar::is_zero))
    }

    /// Per grade, the coefficients at the common level `max |K|`.
    fn padded_form(&self) -> BTreeMap<i64, BTreeMap<(Word, Word), Scalar>> {
        let mut depth: BTreeMap<i64, usize> = BTreeMap::new();
        for (j, k) in self.terms.keys() {
            let d = j.len() as i64 - k.len() as i64;
            let e = depth.entry(d).or_insert(0);
            *e = (*e).max(k.len().max(j.len()));
        }
        let mut out: BTreeMap<i64, BTreeMap<(Word, Word), Scalar>> = BTreeMap::new();
        for ((j, k), c) in &self.terms {
            let d = j.len() as i64 - k.len() as i64;
            let level = depth[&d];
            let pad = level - j.len().max(k.len());
            let bucket = out.entry(d).or_default();
            for w in words_of_length(self.n, pad) {
                accumulate(bucket, (j.concat(&w), k.concat(&w)), c);
            }
        }
        out
    }

    /// Expands every term to the common level `level` (a term of grade d
    /// is padded until `max(|J|, |K|) = level`). Terms already deeper are
    /// kept.
    pub fn expand_to_level(&self, level: usize) -> Vec<(Word, Word, Scalar)> {
        let mut out = BTreeMap::new();
        for ((j, k), c) in &self.terms {
            let have = j.len().max(k.len());
            let pad = level.saturating_sub(have);
            for w in words_of_length(self.n, pad) {
                accumulate(&mut out, (j.concat(&w), k.concat(&w)), c);
            }
        }
        out.into_iter().map(|((j, k), c)| (j, k, c)).collect()
    }

    /// Greedy bottom-up contraction of full sibling blocks
    /// `Σ_i c s_{J i} s_{K i}^*` into `c s_J s_K^*`.
    fn reduce(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        let n = self.n;
        loop {
            let mut parents: BTreeSet<(Word, Word)> = BTreeSet::new();
            for (j, k) in self.terms.keys() {
                if let (Some(a), Some(b)) = (j.last(), k.last()) {
                    if a == b && a == 1 {
                        let pj = Word::from(&j.letters()[..j.len() - 1]);
                        let pk = Word::from(&k.letters()[..k.len() - 1]);
                        parents.insert((pj, pk));
                    }
                }
            }
            let mut changed = false;
            // deepest parents first
            let mut ordered: Vec<_> = parents.into_iter().collect();
            ordered.sort_by_key(|(j, k)| std::cmp::Reverse(j.len() + k.len()));
            for (pj, pk) in ordered {
                let first = (pj.concat(&Word::letter(1)), pk.concat(&Word::letter(1)));
                let Some(c) = self.terms.get(&first).cloned() else {
                    continue;
                };
                let full = (1..=n).all(|i| {
                    let key = (pj.concat(&Word::letter(i)), pk.concat(&Word::letter(i)));
                    self.terms.get(&key) == Some(&c)
                });
                if !full {
                    continue;
                }
                for i in 1..=n {
                    self.terms
                        .remove(&(pj.concat(&Word::letter(i)), pk.concat(&Word::letter(i))));
                }
                accumulate(&mut self.terms, (pj, pk), &c);
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }
}

/// `(s_J s_K^*)(s_L s_M^*)`.
fn multiply_terms(j: &Word, k: &Word, l: &Word, m: &Word) -> Option<(Word, Word)> {
    if k.is_prefix_of(l) {
        let rest = Word::from(&l.letters()[k.len()..]);
        Some((j.concat(&rest), m.clone()))
    } else if l.is_prefix_of(k) {
        let rest = Word::from(&k.letters()[l.len()..]);
        Some((j.clone(), m.concat(&rest)))
    } else {
        None
    }
}

fn accumulate(map: &mut BTreeMap<(Word, Word), Scalar>, key: (Word, Word), c: &Scalar) {
    match map.get_mut(&key) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            if !c.is_zero() {
                map.insert(key, c.clone());
            }
        }
    }
}

/// All words of the given length over {1..n}, in lexicographic order.
pub fn words_of_length(n: u8, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n as usize);
        for w in &out {
            for i in 1..=n {
                let mut x = w.clone();
                x.push(i);
                next.push(x);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for CuntzPoly {
    /// Renders as a sum of `c s[J,K]` terms; `s_J` alone prints as `sJ`,
    /// `s_K^*` as `sK'` and the unit as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((j, k), c) in &self.terms {
            let negative = c.is_rational() && c.rat_part() < &num_rational::BigRational::default();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let short = j.max_letter() <= 9 && k.max_letter() <= 9;
            let body = match (j.is_empty(), k.is_empty()) {
                (true, true) => None,
                (false, true) if short => Some(format!("s{j}")),
                (true, false) if short => Some(format!("s{k}'")),
                _ => Some(format!(
                    "s[{},{}]",
                    if j.is_empty() { String::new() } else { j.to_string() },
                    if k.is_empty() { String::new() } else { k.to_string() }
                )),
            };
            match body {
                None => write!(f, "{magnitude}")?,
                Some(b) if magnitude.is_one() => write!(f, "{b}")?,
                Some(b) if magnitude.is_rational() => write!(f, "{magnitude} {b}")?,
                Some(b) => write!(f, "({magnitude}) {b}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CuntzPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CuntzPoly[N={}]({self})", self.n)
    }
}

impl Add for &CuntzPoly {
    type Output = CuntzPoly;
    fn add(self, rhs: &CuntzPoly) -> CuntzPoly {
        self.try_add(rhs).expect("alphabet mismatch")
    }
}

impl Sub for &CuntzPoly {
    type Output = CuntzPoly;
    fn sub(self, rhs: &CuntzPoly) -> CuntzPoly {
        self.try_sub(rhs).expect("alphabet mismatch")
    }
}

impl Mul for &CuntzPoly {
    type Output = CuntzPoly;
    fn mul(self, rhs: &CuntzPoly) -> CuntzPoly {
        self.try_mul(rhs).expect("alphabet mismatch")
    }
}

impl Neg for &CuntzPoly {
    type Output = CuntzPoly;
    fn neg(self) -> CuntzPoly {
        self.scale(&-Scalar::one())
    }
}

impl Add for CuntzPoly {
    type Output = CuntzPoly;
    fn add(self, rhs: CuntzPoly) -> CuntzPoly {
        &self + &rhs
    }
}

impl Sub for CuntzPoly {
    type Output = CuntzPoly;
    fn sub(self, rhs: CuntzPoly) -> CuntzPoly {
        &self - &rhs
    }
}

impl Mul for CuntzPoly {
    type Output = CuntzPoly;
    fn mul(self, rhs: CuntzPoly) -> CuntzPoly {
        &self * &rhs
    }
}

impl Neg for CuntzPoly {
    type Output = CuntzPoly;
    fn neg(self) -> CuntzPoly {
        -&self
    }
}

/// Shorthand used throughout tests: equality in the algebra, panicking on
/// an alphabet mismatch.
pub fn alg_eq(a: &CuntzPoly, b: &CuntzPoly) -> bool {
    a.equals(b).expect("alphabet mismatch")
}
