//! Unital *-endomorphisms of O_N given by generator images.
//!
//! The permutative family `ψ_σ(s_i) = u_σ s_i` is addressed by cycle
//! notation over the flattened index set of words of length `l`, with
//! point `p` standing for the `p`-th word in lexicographic order (for
//! N = 2, l = 2: 1 = 11, 2 = 12, 3 = 21, 4 = 22).

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{alg_eq, words_of_length, CuntzPoly};
use crate::error::{MorphismError, WordError};
use crate::scalar::Scalar;
use crate::words::Word;

#[derive(Clone)]
pub struct Morphism {
    n: u8,
    images: Vec<CuntzPoly>,
    name: Option<String>,
}

impl Morphism {
    /// Checks the Cuntz relations on the images.
    pub fn new(n: u8, images: Vec<CuntzPoly>) -> Result<Self, MorphismError> {
        if images.len() != n as usize {
            return Err(MorphismError::ImageCount {
                expected: n as usize,
                got: images.len(),
            });
        }
        for img in &images {
            if img.alphabet() != n {
                return Err(crate::error::AlgebraError::AlphabetMismatch(n, img.alphabet()).into());
            }
        }
        let id = CuntzPoly::identity(n);
        let zero = CuntzPoly::zero(n);
        let mut sum = CuntzPoly::zero(n);
        for (i, a) in images.iter().enumerate() {
            sum = &sum + &(a * &a.adjoint());
            for (j, b) in images.iter().enumerate() {
                let expect = if i == j { &id } else { &zero };
                if !alg_eq(&(&a.adjoint() * b), expect) {
                    return Err(MorphismError::NotCuntzFamily(format!(
                        "t{}* t{} != {}",
                        i + 1,
                        j + 1,
                        if i == j { "I" } else { "0" }
                    )));
                }
            }
        }
        if !alg_eq(&sum, &id) {
            return Err(MorphismError::NotCuntzFamily("sum of range projections != I".into()));
        }
        Ok(Morphism {
            n,
            images,
            name: None,
        })
    }

    pub fn identity(n: u8) -> Self {
        Morphism {
            n,
            images: (1..=n).map(|i| CuntzPoly::generator(n, i)).collect(),
            name: Some("id".into()),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn alphabet(&self) -> u8 {
        self.n
    }

    pub fn images(&self) -> &[CuntzPoly] {
        &self.images
    }

    /// Image of `s_i` (1-based).
    pub fn image(&self, i: u8) -> &CuntzPoly {
        &self.images[i as usize - 1]
    }

    fn word_image(&self, w: &Word, cache: &mut HashMap<Word, CuntzPoly>) -> CuntzPoly {
        if let Some(p) = cache.get(w) {
            return p.clone();
        }
        let p = match w.len() {
            0 => CuntzPoly::identity(self.n),
            _ => {
                let head = Word::from(&w.letters()[..w.len() - 1]);
                let h = self.word_image(&head, cache);
                &h * self.image(w.last().expect("nonempty"))
            }
        };
        cache.insert(w.clone(), p.clone());
        p
    }

    /// The multiplicative *-extension to all polynomials.
    pub fn apply(&self, x: &CuntzPoly) -> CuntzPoly {
        assert_eq!(x.alphabet(), self.n, "alphabet mismatch");
        let mut cache = HashMap::new();
        let mut out = CuntzPoly::zero(self.n);
        for (j, k, c) in x.terms() {
            let a = self.word_image(j, &mut cache);
            let b = self.word_image(k, &mut cache).adjoint();
            out = &out + &(&a * &b).scale(c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        assert_eq!(self.n, other.n, "alphabet mismatch");
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a} . {b}")),
            _ => None,
        };
        Morphism {
            n: self.n,
            images: other.images.iter().map(|x| self.apply(x)).collect(),
            name,
        }
    }

    /// Equality of generator images.
    pub fn same_as(&self, other: &Morphism) -> bool {
        self.n == other.n
            && self
                .images
                .iter()
                .zip(&other.images)
                .all(|(a, b)| alg_eq(a, b))
    }

    /// Whether the map sends every `s_i` to an element of grade 1, so that
    /// it restricts to the UHF core.
    pub fn is_grade_preserving(&self) -> bool {
        self.images
            .iter()
            .all(|x| x.is_zero() || x.gauge_grade().into_iter().all(|d| d == 1))
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism[{}](", self.name.as_deref().unwrap_or("?"))?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "s{} -> {x}", i + 1)?;
        }
        write!(f, ")")
    }
}

pub fn is_unitary(u: &CuntzPoly) -> bool {
    let id = CuntzPoly::identity(u.alphabet());
    alg_eq(&(u * &u.adjoint()), &id) && alg_eq(&(&u.adjoint() * u), &id)
}

/// `Ad u ∘ m`: `s_i ↦ u m(s_i) u^*`.
pub fn ad_unitary(u: &CuntzPoly, m: &Morphism) -> Result<Morphism, MorphismError> {
    if !is_unitary(u) {
        return Err(MorphismError::NotUnitary(u.to_string()));
    }
    let ua = u.adjoint();
    Ok(Morphism {
        n: m.n,
        images: m.images.iter().map(|x| &(u * x) * &ua).collect(),
        name: m.name.as_ref().map(|s| format!("Ad u . {s}")),
    })
}

/// `Ad g (m) = g ∘ m ∘ g^{-1}` for an automorphism `g`.
pub fn ad_automorphism(g: &Morphism, g_inv: &Morphism, m: &Morphism) -> Morphism {
    g.compose(m).compose(g_inv)
}

/// The linear map `ζ(x) = s_1 x s_1^* − s_2 x s_2^*` on O_2.
pub fn zeta(x: &CuntzPoly) -> Result<CuntzPoly, MorphismError> {
    if x.alphabet() != 2 {
        return Err(MorphismError::RequiresTwoGenerators);
    }
    let s1 = CuntzPoly::generator(2, 1);
    let s2 = CuntzPoly::generator(2, 2);
    Ok(&(&(&s1 * x) * &s1.adjoint()) - &(&(&s2 * x) * &s2.adjoint()))
}

/// `λ(x) = Σ_i s_i x s_i^*`.
pub fn canonical_shift(x: &CuntzPoly) -> CuntzPoly {
    let n = x.alphabet();
    let mut out = CuntzPoly::zero(n);
    for i in 1..=n {
        let s = CuntzPoly::generator(n, i);
        out = &out + &(&(&s * x) * &s.adjoint());
    }
    out
}

/// Named automorphisms of O_2.
pub fn named_automorphism(tag: &str) -> Result<Morphism, MorphismError> {
    let s = |i| CuntzPoly::generator(2, i);
    let h = Scalar::inv_sqrt2();
    let images = match tag {
        "id" | "iota" => vec![s(1), s(2)],
        "alpha" => vec![s(2), s(1)],
        "beta1" => vec![-s(1), s(2)],
        "beta2" => vec![s(1), -s(2)],
        "theta" => vec![-s(1), -s(2)],
        "phi" | "phi_inverse" => vec![
            (&s(1) + &s(2)).scale(&h),
            (&s(1) - &s(2)).scale(&h),
        ],
        // the variant with s_2 ↦ (−s_1 + s_2)/√2
        "phi_prime" => vec![
            (&s(1) + &s(2)).scale(&h),
            (&s(2) - &s(1)).scale(&h),
        ],
        "phi_prime_inverse" => vec![
            (&s(1) - &s(2)).scale(&h),
            (&s(1) + &s(2)).scale(&h),
        ],
        _ => return Err(MorphismError::UnknownName(tag.to_string())),
    };
    Ok(Morphism::new(2, images)?.with_name(tag))
}

/// A permutation of the words of length `l`, stored as images of their
/// lexicographic indices.
#[derive(Clone)]
pub struct PermEndo {
    n: u8,
    l: usize,
    sigma: Vec<usize>,
    morphism: Morphism,
}

impl PermEndo {
    /// `sigma[p]` is the index of `σ(λ(p))`, 0-based.
    pub fn new(n: u8, l: usize, sigma: Vec<usize>) -> Result<Self, MorphismError> {
        let size = (n as usize).pow(l as u32);
        let mut seen = vec![false; size];
        if sigma.len() != size {
            return Err(MorphismError::NotBijective(l));
        }
        for &p in &sigma {
            if p >= size || seen[p] {
                return Err(MorphismError::NotBijective(l));
            }
            seen[p] = true;
        }
        let words = words_of_length(n, l);
        let images = (1..=n)
            .map(|i| {
                let terms = words
                    .iter()
                    .enumerate()
                    .filter(|(_, j)| j.first() == Some(i))
                    .map(|(idx, j)| {
                        (
                            words[sigma[idx]].clone(),
                            Word::from(&j.letters()[1..]),
                            Scalar::one(),
                        )
                    });
                CuntzPoly::from_terms(n, terms)
            })
            .collect();
        let morphism = Morphism::new(n, images)?;
        let mut pe = PermEndo {
            n,
            l,
            sigma,
            morphism,
        };
        let name = format!("psi:{}", pe.cycle_notation());
        pe.morphism = pe.morphism.with_name(name);
        Ok(pe)
    }

    /// Builds σ from disjoint cycles over the 1-based points.
    pub fn from_cycles(n: u8, l: usize, cycles: &[Vec<usize>]) -> Result<Self, MorphismError> {
        let size = (n as usize).pow(l as u32);
        let mut sigma: Vec<usize> = (0..size).collect();
        let mut touched = vec![false; size];
        for cyc in cycles {
            for (i, &p) in cyc.iter().enumerate() {
                if p == 0 || p > size || touched[p - 1] {
                    return Err(MorphismError::BadPermutation(format!("{cycles:?}")));
                }
                touched[p - 1] = true;
                let q = cyc[(i + 1) % cyc.len()];
                sigma[p - 1] = q - 1;
            }
        }
        PermEndo::new(n, l, sigma)
    }

    /// Parses cycle notation such as `12`, `1324`, `(12)(34)`, `(1,10)`
    /// or `id`.
    pub fn parse(n: u8, l: usize, text: &str) -> Result<Self, MorphismError> {
        let cycles = parse_cycles(text)?;
        PermEndo::from_cycles(n, l, &cycles)
    }

    /// Builds ψ from the images of each length-`l` word.
    pub fn from_word_map(n: u8, l: usize, map: &[(Word, Word)]) -> Result<Self, MorphismError> {
        let words = words_of_length(n, l);
        let index = |w: &Word| words.iter().position(|x| x == w);
        let mut sigma = vec![usize::MAX; words.len()];
        for (a, b) in map {
            let (Some(i), Some(j)) = (index(a), index(b)) else {
                return Err(MorphismError::BadPermutation(format!("{a} -> {b}")));
            };
            sigma[i] = j;
        }
        PermEndo::new(n, l, sigma)
    }

    /// All `(N^l)!` permutative endomorphisms, in lexicographic order of σ.
    pub fn all(n: u8, l: usize) -> Vec<PermEndo> {
        let size = (n as usize).pow(l as u32);
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..size).collect();
        loop {
            out.push(PermEndo::new(n, l, perm.clone()).expect("permutations are bijective"));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    }

    pub fn alphabet(&self) -> u8 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.l
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    /// σ on words of length `l`.
    pub fn map_word(&self, w: &Word) -> Word {
        let words = words_of_length(self.n, self.l);
        let idx = words.iter().position(|x| x == w).expect("word of length l");
        words[self.sigma[idx]].clone()
    }

    /// `u_σ = Σ_J s_{σ(J)} s_J^*`.
    pub fn unitary(&self) -> CuntzPoly {
        let words = words_of_length(self.n, self.l);
        CuntzPoly::from_terms(
            self.n,
            words
                .iter()
                .enumerate()
                .map(|(i, j)| (words[self.sigma[i]].clone(), j.clone(), Scalar::one())),
        )
    }

    /// Canonical cycle notation: each cycle starts at its least point,
    /// cycles ordered by that point, fixed points dropped. A single cycle
    /// is written without parentheses.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        let wide = self.sigma.len() > 9;
        let fmt_cycle = |c: &Vec<usize>| {
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            if wide {
                parts.join(",")
            } else {
                parts.concat()
            }
        };
        match cycles.len() {
            0 => "id".into(),
            1 if !wide => fmt_cycle(&cycles[0]),
            _ => cycles.iter().map(|c| format!("({})", fmt_cycle(c))).collect(),
        }
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        let size = self.sigma.len();
        let mut seen = vec![false; size];
        let mut out = Vec::new();
        for start in 0..size {
            if seen[start] || self.sigma[start] == start {
                seen[start] = true;
                continue;
            }
            let mut c = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                c.push(p + 1);
                p = self.sigma[p];
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Debug for PermEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi:{}", self.cycle_notation())
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, MorphismError> {
    let t = text.trim();
    let bad = || MorphismError::BadPermutation(text.to_string());
    if t == "id" || t.is_empty() {
        return Ok(Vec::new());
    }
    let point_list = |s: &str| -> Result<Vec<usize>, MorphismError> {
        if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
                .collect()
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect()
        }
    };
    if !t.starts_with('(') {
        return Ok(vec![point_list(t)?]);
    }
    let mut out = Vec::new();
    let mut rest = t;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let cyc = point_list(&body[..close])?;
        if cyc.is_empty() {
            return Err(bad());
        }
        out.push(cyc);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

/// The endomorphism of O_3 with
/// `ρ(s_1) = s_23 s_1^* + s_31 s_2^* + s_12 s_3^*`,
/// `ρ(s_2) = s_32 s_1^* + s_13 s_2^* + s_21 s_3^*`,
/// `ρ(s_3) = s_11 s_1^* + s_22 s_2^* + s_33 s_3^*`.
pub fn nakanishi() -> PermEndo {
    let w = |s: &str| Word::parse(s).expect("literal");
    let map: Vec<(Word, Word)> = [
        ("11", "23"),
        ("12", "31"),
        ("13", "12"),
        ("21", "32"),
        ("22", "13"),
        ("23", "21"),
        ("31", "11"),
        ("32", "22"),
        ("33", "33"),
    ]
    .iter()
    .map(|(a, b)| (w(a), w(b)))
    .collect();
    let mut pe = PermEndo::from_word_map(3, 2, &map).expect("bijective");
    pe.morphism = pe.morphism.with_name("nakanishi");
    pe
}

/// Resolves a morphism name: `psi:<cycles>` or bare cycle notation (order
/// 2 permutations over the given alphabet), the named automorphisms,
/// `nakanishi`, and compositions joined by `.`.
pub fn resolve(n: u8, text: &str) -> Result<Morphism, MorphismError> {
    let parts: Vec<&str> = text.split(" . ").flat_map(|p| p.split('.')).collect();
    let mut acc: Option<Morphism> = None;
    for part in parts {
        let p = part.trim();
        let m = if let Some(c) = p.strip_prefix("psi:") {
            PermEndo::parse(n, 2, c)?.morphism().clone()
        } else if p == "nakanishi" {
            if n != 3 {
                return Err(MorphismError::RequiresThreeGenerators(p.to_string()));
            }
            nakanishi().morphism().clone()
        } else if p == "id" || p.starts_with(|c: char| c.is_ascii_digit() || c == '(') {
            PermEndo::parse(n, 2, p)?.morphism().clone()
        } else {
            if n != 2 {
                return Err(MorphismError::RequiresTwoGenerators);
            }
            named_automorphism(p)?
        };
        acc = Some(match acc {
            None => m,
            Some(a) => a.compose(&m),
        });
    }
    acc.ok_or_else(|| MorphismError::UnknownName(text.to_string()))
}

/// The two frames of isometries used for direct sums on O_2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    /// `(s_1, s_2)`
    Xi,
    /// `((s_1 + s_2)/√2, (s_1 − s_2)/√2)`
    XiPrime,
}

impl Frame {
    pub fn isometries(self) -> [CuntzPoly; 2] {
        let s1 = CuntzPoly::generator(2, 1);
        let s2 = CuntzPoly::generator(2, 2);
        match self {
            Frame::Xi => [s1, s2],
            Frame::XiPrime => {
                let h = Scalar::inv_sqrt2();
                [(&s1 + &s2).scale(&h), (&s1 - &s2).scale(&h)]
            }
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frame::Xi => write!(f, "xi"),
            Frame::XiPrime => write!(f, "xi'"),
        }
    }
}

/// Finds `m = φ_1 +_ζ φ_2`, i.e. `m(x) = ζ_1 φ_1(x) ζ_1^* + ζ_2 φ_2(x) ζ_2^*`.
pub fn split_direct_sum(m: &Morphism) -> Option<(Morphism, Morphism, Frame)> {
    if m.alphabet() != 2 {
        return None;
    }
    for frame in [Frame::Xi, Frame::XiPrime] {
        let [z1, z2] = frame.isometries();
        let part = |z: &CuntzPoly| -> Option<Morphism> {
            let za = z.adjoint();
            let imgs = m.images().iter().map(|x| &(&za * x) * z).collect();
            Morphism::new(2, imgs).ok()
        };
        let (Some(p1), Some(p2)) = (part(&z1), part(&z2)) else {
            continue;
        };
        let rebuilt = m.images().iter().enumerate().all(|(i, x)| {
            let a = &(&z1 * &p1.images()[i]) * &z1.adjoint();
            let b = &(&z2 * &p2.images()[i]) * &z2.adjoint();
            alg_eq(&(&a + &b), x)
        });
        if rebuilt {
            return Some((p1, p2, frame));
        }
    }
    None
}

/// A signed permutation `s_i ↦ ε_i s_{π(i)}` of the generators of O_2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedSwap {
    pub swap: bool,
    pub signs: [bool; 2],
}

impl SignedSwap {
    /// Recognises the eight automorphisms `ι, α, β_1, β_2, θ, αβ_1, αβ_2, αθ`.
    pub fn recognise(m: &Morphism) -> Option<SignedSwap> {
        if m.alphabet() != 2 {
            return None;
        }
        for swap in [false, true] {
            for s1 in [true, false] {
                for s2 in [true, false] {
                    let g = SignedSwap {
                        swap,
                        signs: [s1, s2],
                    };
                    if g.morphism().same_as(m) {
                        return Some(g);
                    }
                }
            }
        }
        None
    }

    pub fn morphism(self) -> Morphism {
        let img = |i: usize| {
            let target = if self.swap { 3 - i as u8 } else { i as u8 };
            let g = CuntzPoly::generator(2, target);
            if self.signs[i - 1] {
                g
            } else {
                -g
            }
        };
        Morphism::new(2, vec![img(1), img(2)])
            .expect("signed swaps are automorphisms")
            .with_name(self.name())
    }

    pub fn name(self) -> &'static str {
        match (self.swap, self.signs) {
            (false, [true, true]) => "iota",
            (false, [false, true]) => "beta1",
            (false, [true, false]) => "beta2",
            (false, [false, false]) => "theta",
            (true, [true, true]) => "alpha",
            (true, [false, true]) => "alpha.beta1",
            (true, [true, false]) => "alpha.beta2",
            (true, [false, false]) => "alpha.theta",
        }
    }
}

impl From<WordError> for MorphismError {
    fn from(e: WordError) -> Self {
        MorphismError::Algebra(e.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn t(j: &str, k: &str) -> CuntzPoly {
        CuntzPoly::term(2, w(j), w(k), Scalar::one())
    }

    fn psi(c: &str) -> PermEndo {
        PermEndo::parse(2, 2, c).unwrap()
    }

    #[test]
    fn psi13_images() {
        let p = psi("13");
        assert!(alg_eq(p.morphism().image(1), &(&t("21", "1") + &t("12", "2"))));
        assert!(alg_eq(p.morphism().image(2), &(&t("11", "1") + &t("22", "2"))));
        assert_eq!(p.cycle_notation(), "13");
    }

    #[test]
    fn identity_permutation() {
        let p = psi("id");
        assert!(p.morphism().same_as(&Morphism::identity(2)));
        let x = &t("12", "2") + &t("1", "21");
        assert!(alg_eq(&p.morphism().apply(&x), &x));
    }

    #[test]
    fn nakanishi_third_generator() {
        let r = nakanishi();
        let n3 = |j: &str, k: &str| CuntzPoly::term(3, w(j), w(k), Scalar::one());
        let expect = &(&n3("11", "1") + &n3("22", "2")) + &n3("33", "3");
        assert!(alg_eq(r.morphism().image(3), &expect));
        let expect1 = &(&n3("23", "1") + &n3("31", "2")) + &n3("12", "3");
        assert!(alg_eq(r.morphism().image(1), &expect1));
    }

    #[test]
    fn cycle_notation_round_trip() {
        for pe in PermEndo::all(2, 2) {
            let again = PermEndo::parse(2, 2, &pe.cycle_notation()).unwrap();
            assert_eq!(again.sigma(), pe.sigma());
        }
        assert_eq!(psi("(12)(34)").cycle_notation(), "(12)(34)");
        assert_eq!(psi("(34)(12)").cycle_notation(), "(12)(34)");
        assert_eq!(psi("243").cycle_notation(), "243");
        assert_eq!(psi("432").cycle_notation(), "243");
        assert!(PermEndo::parse(2, 2, "15").is_err());
        assert!(PermEndo::parse(2, 2, "(12)(13)").is_err());
        assert!(PermEndo::new(2, 2, vec![0, 0, 1, 2]).is_err());
    }

    #[test]
    fn all_permutations_count() {
        assert_eq!(PermEndo::all(2, 2).len(), 24);
        assert_eq!(PermEndo::all(2, 1).len(), 2);
    }

    #[test]
    fn named_automorphisms() {
        let theta = named_automorphism("theta").unwrap();
        let b1 = named_automorphism("beta1").unwrap();
        let b2 = named_automorphism("beta2").unwrap();
        let alpha = named_automorphism("alpha").unwrap();
        let phi = named_automorphism("phi").unwrap();
        let phi_inv = named_automorphism("phi_inverse").unwrap();
        let id = Morphism::identity(2);
        assert!(b1.compose(&b2).same_as(&theta));
        assert!(b2.compose(&b1).same_as(&theta));
        assert!(alpha.compose(&alpha).same_as(&id));
        assert!(b1.compose(&b1).same_as(&id));
        assert!(phi.compose(&phi_inv).same_as(&id));
        let pp = named_automorphism("phi_prime").unwrap();
        let ppi = named_automorphism("phi_prime_inverse").unwrap();
        assert!(pp.compose(&ppi).same_as(&id));
        assert!(named_automorphism("gamma").is_err());
        // α(a_1) = a_1^*
        let a1 = t("1", "2");
        assert!(alg_eq(&alpha.apply(&a1), &a1.adjoint()));
    }

    #[test]
    fn conjugation_examples() {
        let u = &t("1", "2") + &t("2", "1");
        let conj = ad_unitary(&u, psi("12").morphism()).unwrap();
        assert!(conj.same_as(psi("1324").morphism()));
        let conj14 = ad_unitary(&u, psi("14").morphism()).unwrap();
        assert!(conj14.same_as(psi("14").morphism()));
        let conj_wrong = ad_unitary(&u, psi("12").morphism()).unwrap();
        assert!(!conj_wrong.same_as(psi("13").morphism()));
        let id = CuntzPoly::identity(2);
        assert!(ad_unitary(&id, psi("142").morphism())
            .unwrap()
            .same_as(psi("142").morphism()));
        assert!(ad_unitary(&t("1", "1"), psi("12").morphism()).is_err());
        let alpha = named_automorphism("alpha").unwrap();
        assert!(psi("13").morphism().compose(&alpha).same_as(psi("24").morphism()));
    }

    #[test]
    fn zeta_examples() {
        let a1 = t("1", "2");
        let a2 = zeta(&a1).unwrap();
        assert!(alg_eq(&a2, &(&t("11", "12") - &t("21", "22"))));
        let one = CuntzPoly::identity(2);
        assert!(alg_eq(&zeta(&one).unwrap(), &(&t("1", "1") - &t("2", "2"))));
        assert!(zeta(&CuntzPoly::zero(2)).unwrap().is_zero());
        assert!(zeta(&CuntzPoly::identity(3)).is_err());
    }

    #[test]
    fn direct_sums() {
        let (p1, p2, f) = split_direct_sum(psi("23").morphism()).unwrap();
        assert_eq!(f, Frame::Xi);
        assert_eq!(SignedSwap::recognise(&p1).unwrap().name(), "iota");
        assert_eq!(SignedSwap::recognise(&p2).unwrap().name(), "iota");
        let (p1, p2, f) = split_direct_sum(psi("14").morphism()).unwrap();
        assert_eq!(f, Frame::XiPrime);
        assert_eq!(SignedSwap::recognise(&p1).unwrap().name(), "alpha");
        assert_eq!(SignedSwap::recognise(&p2).unwrap().name(), "alpha.theta");
        assert!(split_direct_sum(psi("13").morphism()).is_none());
    }

    #[test]
    fn apply_is_multiplicative() {
        let m = psi("142");
        let x = &t("12", "2") + &t("1", "21");
        let y = &t("2", "12") - &t("21", "1");
        let mm = m.morphism();
        assert!(alg_eq(&mm.apply(&(&x * &y)), &(&mm.apply(&x) * &mm.apply(&y))));
        assert!(alg_eq(&mm.apply(&x.adjoint()), &mm.apply(&x).adjoint()));
    }

    #[test]
    fn resolve_names() {
        let m = resolve(2, "psi:13 . alpha").unwrap();
        assert!(m.same_as(psi("24").morphism()));
        assert!(resolve(3, "nakanishi").is_ok());
        assert!(resolve(2, "nakanishi").is_err());
        assert!(resolve(2, "psi:(12)(34)").is_ok());
        assert!(resolve(2, "13 . alpha").unwrap().same_as(psi("24").morphism()));
        assert!(resolve(2, "alpha . (12)(34) . alpha").unwrap().same_as(psi("(12)(34)").morphism()));
        assert!(resolve(2, "bogus").is_err());
    }
}
