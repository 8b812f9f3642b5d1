//! Dense floating point model of the UHF core: level-`L` elements are
//! `2^L × 2^L` matrices, fermions are Jordan–Wigner strings and `ψ_σ`
//! acts by conjugation with a product of permutation matrices.

use cuntz_core::algebra::words_of_length;
use cuntz_core::parse::Target;
use cuntz_core::words::Word;
use cuntz_core::Scalar;
use num_rational::Rational64;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub level: u32,
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(level: u32) -> Mat {
        let dim = 1usize << level;
        Mat {
            level,
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(level: u32) -> Mat {
        let mut m = Mat::zeros(level);
        for i in 0..m.dim {
            m.data[i * m.dim + i] = 1.0;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.level + other.level);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a == 0.0 {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.set(i * other.dim + k, j * other.dim + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.level, other.level);
        let n = self.dim;
        let mut out = Mat::zeros(self.level);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.level, other.level);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { data, ..self.clone() }
    }

    pub fn scale(&self, c: f64) -> Mat {
        Mat {
            data: self.data.iter().map(|a| a * c).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.level);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Pads with identity factors on the right up to `level`.
    pub fn pad(&self, level: u32) -> Mat {
        assert!(level >= self.level);
        self.kron(&Mat::identity(level - self.level))
    }

    pub fn close(&self, other: &Mat) -> bool {
        self.level == other.level && self.data.iter().zip(&other.data).all(|(a, b)| (a - b).abs() < 1e-9)
    }
}

/// The 2×2 unit `E_{ij}`.
pub fn unit(i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(1);
    m.set(i - 1, j - 1, 1.0);
    m
}

/// Row index of a word: first letter most significant.
pub fn index(word: &[u8]) -> usize {
    word.iter().fold(0, |acc, &x| acc * 2 + (x as usize - 1))
}

/// `E_{J,K}` for `|J| = |K|`, as a matrix of level `|J|`.
pub fn matrix_unit(j: &[u8], k: &[u8]) -> Mat {
    assert_eq!(j.len(), k.len());
    let mut m = Mat::zeros(j.len() as u32);
    m.set(index(j), index(k), 1.0);
    m
}

/// `a_n = Z ⊗ ⋯ ⊗ Z ⊗ E_{12}` at `level ≥ n`.
pub fn fermion(n: u32, level: u32) -> Mat {
    assert!(n >= 1 && n <= level);
    let mut z = Mat::zeros(1);
    z.set(0, 0, 1.0);
    z.set(1, 1, -1.0);
    let mut m = Mat::identity(0);
    for _ in 1..n {
        m = m.kron(&z);
    }
    m.kron(&unit(1, 2)).pad(level)
}

/// A permutation of the four words of length 2, from cycle notation over
/// the points `1 = 11, 2 = 12, 3 = 21, 4 = 22`.
pub fn perm_from_cycles(text: &str) -> [usize; 4] {
    let mut map = [0, 1, 2, 3];
    if text == "id" {
        return map;
    }
    let groups: Vec<String> = if text.starts_with('(') {
        text.trim_matches(|c| c == '(' || c == ')')
            .split(")(")
            .map(str::to_string)
            .collect()
    } else {
        vec![text.to_string()]
    };
    for g in groups {
        let pts: Vec<usize> = g.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect();
        for i in 0..pts.len() {
            map[pts[i]] = pts[(i + 1) % pts.len()];
        }
    }
    map
}

/// `u_σ = Σ_w s_{σ(w)} s_w^*` as a 4×4 permutation matrix.
pub fn perm_matrix(map: &[usize; 4]) -> Mat {
    let mut m = Mat::zeros(2);
    for (w, &img) in map.iter().enumerate() {
        m.set(img, w, 1.0);
    }
    m
}

/// `ψ_σ(x)` for `x` of level `L`, at level `L + 1`:
/// `U (x ⊗ 1) U^T` with `U = u λ(u) ⋯ λ^{L−1}(u)` and `λ^k(u) = 1^{⊗k} ⊗ u`.
pub fn psi(map: &[usize; 4], x: &Mat) -> Mat {
    let l = x.level;
    let p = perm_matrix(map);
    let mut u = Mat::identity(l + 1);
    for k in 0..l {
        let factor = Mat::identity(k).kron(&p).pad(l + 1);
        u = u.mul(&factor);
    }
    u.mul(&x.pad(l + 1)).mul(&u.transpose())
}

/// Value of the vector state of `P[J]` on `x`: the diagonal entry at the
/// first `level` letters of `J^∞`.
pub fn gp_state(j: &[u8], x: &Mat) -> f64 {
    let w: Vec<u8> = j.iter().copied().cycle().take(x.level as usize).collect();
    let i = index(&w);
    x.get(i, i)
}

/// Evaluation target for the expression grammar at a fixed level.
#[derive(Clone, Debug)]
pub struct Eval(pub Mat);

impl Target for Eval {
    fn scalar(&self, c: Scalar) -> Self {
        Eval(Mat::identity(self.0.level).scale(c.to_f64()))
    }
    fn add(&self, other: &Self) -> Self {
        Eval(self.0.add(&other.0))
    }
    fn mul(&self, other: &Self) -> Self {
        Eval(self.0.mul(&other.0))
    }
    fn neg(&self) -> Self {
        Eval(self.0.scale(-1.0))
    }
    fn adjoint(&self) -> Self {
        Eval(self.0.transpose())
    }
    fn isometry_pair(&self, j: Word, k: Word) -> Result<Self, String> {
        self.matrix_unit(j, k)
    }
    fn matrix_unit(&self, j: Word, k: Word) -> Result<Self, String> {
        if j.len() != k.len() || j.len() as u32 > self.0.level {
            return Err("outside the modelled level".into());
        }
        Ok(Eval(matrix_unit(j.letters(), k.letters()).pad(self.0.level)))
    }
    fn fermion(&self, n: u32) -> Result<Self, String> {
        if n == 0 || n > self.0.level {
            return Err("outside the modelled level".into());
        }
        Ok(Eval(fermion(n, self.0.level)))
    }
    fn mode(&self, _: Rational64) -> Result<Self, String> {
        Err("mixtures are not modelled".into())
    }
}

/// Evaluates an expression at `level`.
pub fn eval(text: &str, level: u32) -> Mat {
    cuntz_core::parse::parse_with(Eval(Mat::zeros(level)), text)
        .unwrap_or_else(|e| panic!("{text}: {e}"))
        .0
}

/// `ψ(a_n)` in the matrix model, against a formula given as text.
pub fn formula_holds(sigma: &str, n: u32, text: &str) -> bool {
    let map = perm_from_cycles(sigma);
    let image = psi(&map, &fermion(n, n));
    image.close(&eval(text, n + 1))
}

/// Letters read by the GP vector of `P[j]` under `ψ_σ`: at each length the
/// unique `K` with `ω(ψ(E_{KK})) = 1`.
pub fn reading(sigma: &str, j: &[u8], len: usize) -> Vec<u8> {
    let map = perm_from_cycles(sigma);
    let words = words_of_length(2, len);
    let hits: Vec<Vec<u8>> = words
        .iter()
        .filter(|k| {
            let x = psi(&map, &matrix_unit(k.letters(), k.letters()));
            (gp_state(j, &x) - 1.0).abs() < 1e-9
        })
        .map(|k| k.letters().to_vec())
        .collect();
    assert_eq!(hits.len(), 1, "ψ_{sigma} on P[{j:?}]");
    hits[0].clone()
}

pub fn component_words(text: &str) -> Vec<Vec<u8>> {
    text.split('⊕')
        .map(|c| {
            let c = c.trim();
            let inner = match c {
                "Fock" => "1",
                "Fock*" => "2",
                "IW" => "12",
                "IW*" => "21",
                _ => c.trim_start_matches("P[").trim_end_matches(']'),
            };
            inner.bytes().map(|b| b - b'0').collect()
        })
        .collect()
}

/// Whether some component `P[W]` agrees with the reading from position
/// `TAIL` on; `P[J]` only depends on the tail of `J`.
pub const TAIL: usize = 2;

pub fn contains_reading(cell: &str, read: &[u8]) -> bool {
    component_words(cell).iter().any(|w| {
        w.iter()
            .copied()
            .cycle()
            .take(read.len())
            .skip(TAIL)
            .eq(read.iter().copied().skip(TAIL))
    })
}

