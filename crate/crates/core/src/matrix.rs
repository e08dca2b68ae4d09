//! Square matrices over the non-negative integers.
//!
//! NIM-rep matrices are small (dimension bounded by the module size), so a
//! dense row-major `Vec<u64>` is all that is needed.

use serde::{Deserialize, Serialize};

use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct IntMatrix {
    dim: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix[{}]", self.dim)?;
        for r in 0..self.dim {
            writeln!(f, "  {:?}", &self.data[r * self.dim..(r + 1) * self.dim])?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix { dim, data: vec![0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = IntMatrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, 1);
        }
        m
    }

    /// Permutation matrix of `p`: column `c` has its 1 in row `p(c)`, so the
    /// matrix sends the basis vector `e_c` to `e_{p(c)}`.
    pub fn from_perm(p: &Perm) -> Self {
        let mut m = IntMatrix::zero(p.len());
        for c in 0..p.len() {
            m.set(p.apply(c), c, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self, String> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(format!("expected {dim} columns, found {}", row.len()));
            }
            data.extend_from_slice(row);
        }
        Ok(IntMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zero(n);
        for r in 0..n {
            for t in 0..n {
                let a = self.data[r * n + t];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[t * n + c];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim;
        let mut out = IntMatrix::zero(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c];
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &IntMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &IntMatrix, k: u64) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += k * b;
        }
    }

    pub fn scale(&self, k: u64) -> IntMatrix {
        IntMatrix { dim: self.dim, data: self.data.iter().map(|&v| v * k).collect() }
    }

    /// The permutation `c -> r` realized by this matrix, if it is a
    /// permutation matrix (exactly one 1 per row and per column, zero elsewhere).
    pub fn as_perm(&self) -> Option<Perm> {
        let n = self.dim;
        let mut map = vec![usize::MAX; n];
        let mut row_used = vec![false; n];
        for c in 0..n {
            for r in 0..n {
                let v = self.get(r, c);
                if v == 0 {
                    continue;
                }
                if v != 1 || map[c] != usize::MAX || row_used[r] {
                    return None;
                }
                map[c] = r;
                row_used[r] = true;
            }
            if map[c] == usize::MAX {
                return None;
            }
        }
        Perm::from_map(map)
    }

    pub fn is_permutation(&self) -> bool {
        self.as_perm().is_some()
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// Block-diagonal stacking; the result has `self` in the top-left corner.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.dim + other.dim;
        let mut out = IntMatrix::zero(n);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.dim {
            for c in 0..other.dim {
                out.set(self.dim + r, self.dim + c, other.get(r, c));
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.dim).map(|r| self.row(r).to_vec()).collect()
    }
}

impl TryFrom<Vec<Vec<u64>>> for IntMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<u64>>) -> Result<Self, String> {
        IntMatrix::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<u64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}
