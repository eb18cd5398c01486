//! Dense matrices of scalar indices with Gaussian elimination over a
//! [`Field`](crate::gf::Field). Internal to the crate; the geometry
//! modules expose domain types instead.

use crate::gf::Field;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>, cols: usize) -> Mat {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            data.extend_from_slice(&r);
        }
        Mat {
            rows: n,
            cols,
            data,
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form. Zero rows are dropped and the
    /// pivot columns are returned in increasing order.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            self.swap_rows(rank, pr);
            let inv = f.inv_idx(self.at(rank, col));
            if inv != 1 {
                for c in col..self.cols {
                    let v = self.at(rank, c);
                    self.set(rank, c, f.mul_idx(v, inv));
                }
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.at(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub_idx(self.at(r, c), f.mul_idx(factor, self.at(rank, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        self.data.truncate(rank * self.cols);
        self.rows = rank;
        pivots
    }

    /// Basis of the right kernel {x : self · x = 0}, one vector per row.
    pub fn kernel(&self, f: &Field) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg_idx(m.at(i, fc)));
            }
        }
        out
    }

    /// Determinant of a square matrix.
    pub fn det(&self, f: &Field) -> u8 {
        debug_assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = 1u8;
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| m.at(r, col) != 0) else {
                return 0;
            };
            if pr != col {
                m.swap_rows(col, pr);
                det = f.neg_idx(det);
            }
            let pivot = m.at(col, col);
            det = f.mul_idx(det, pivot);
            let inv = f.inv_idx(pivot);
            for r in col + 1..n {
                let factor = f.mul_idx(m.at(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let v = f.sub_idx(m.at(r, c), f.mul_idx(factor, m.at(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Reduces `v` against the rows of an RREF matrix, eliminating the
    /// pivot coordinates. The result is zero iff `v` is in the row space.
    pub fn reduce_vector(&self, f: &Field, v: &[u8], pivots: &[usize]) -> Vec<u8> {
        debug_assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for (i, &pc) in pivots.iter().enumerate() {
            let factor = v[pc];
            if factor == 0 {
                continue;
            }
            for c in 0..self.cols {
                v[c] = f.sub_idx(v[c], f.mul_idx(factor, self.at(i, c)));
            }
        }
        v
    }
}

/// All strictly increasing k-tuples over {0..n1-1} in lexicographic order.
pub(crate) fn combinations(n1: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k > n1 {
        return out;
    }
    let mut cur: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(cur.clone());
        // advance to next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n1 - k + i) as u8 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k.min(n - k) {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Canonical representatives of the projective points of F_q^k: every
/// nonzero vector with its first nonzero coordinate scaled to 1, ordered
/// by leading position and then by counting the free coordinates.
pub(crate) fn projective_reps(q: u8, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for lead in 0..k {
        let free = k - lead - 1;
        let total = (q as u64).pow(free as u32);
        for idx in 0..total {
            let mut v = vec![0u8; k];
            v[lead] = 1;
            let mut rem = idx;
            for qpos in (lead + 1..k).rev() {
                v[qpos] = (rem % q as u64) as u8;
                rem /= q as u64;
            }
            out.push(v);
        }
    }
    out
}
