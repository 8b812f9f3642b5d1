//! Exact sparse row reduction over Q(√2).

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Rows kept in reduced row echelon form as they are inserted.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    // pivot column -> row with a 1 at the pivot and zeros at other pivots
    rows: BTreeMap<usize, SparseRow>,
}

fn axpy(target: &mut SparseRow, c: &Scalar, row: &SparseRow) {
    for (j, v) in row {
        let delta = c * v;
        match target.get_mut(j) {
            Some(t) => {
                *t += &delta;
                if t.is_zero() {
                    target.remove(j);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(*j, delta);
                }
            }
        }
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row. Returns true when the rank grows.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, c| !c.is_zero());
        let pivots: Vec<usize> = row.keys().filter(|j| self.rows.contains_key(j)).copied().collect();
        for p in pivots {
            let Some(c) = row.get(&p).cloned() else {
                continue;
            };
            axpy(&mut row, &(-c), &self.rows[&p]);
        }
        let Some((&lead, c)) = row.iter().next() else {
            return false;
        };
        let inv = c.inverse().expect("nonzero pivot");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&lead).cloned() {
                axpy(other, &(-c), &row);
            }
        }
        self.rows.insert(lead, row);
        true
    }

    /// A basis of the nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if self.rows.contains_key(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = Scalar::one();
            for (p, row) in &self.rows {
                if let Some(c) = row.get(&free) {
                    v[*p] = -c;
                }
            }
            out.push(v);
        }
        out
    }
}
