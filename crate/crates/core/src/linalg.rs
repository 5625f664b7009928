//! Dense linear algebra over Z_p.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::PrimeModulus;

/// Row-major dense matrix with entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGFp {
    modulus: PrimeModulus,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row-echelon form: nonzero rows only, with their pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixGFp,
    pub pivots: Vec<usize>,
}

/// `dst += f * src` entrywise.
#[inline]
pub(crate) fn axpy(p: PrimeModulus, dst: &mut [u32], src: &[u32], f: u32) {
    let m = p.get();
    if m < (1 << 16) {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = (*d + f * s) % m;
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = ((*d as u64 + f as u64 * s as u64) % m as u64) as u32;
        }
    }
}

#[inline]
pub(crate) fn scale_row(p: PrimeModulus, row: &mut [u32], f: u32) {
    for v in row.iter_mut() {
        *v = p.mul(*v, f);
    }
}

/// Number of nonzero entries.
pub fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

impl MatrixGFp {
    pub fn zeros(modulus: PrimeModulus, rows: usize, cols: usize) -> Self {
        Self {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from signed rows; all rows must have length `cols`.
    pub fn from_rows(modulus: PrimeModulus, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(modulus, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, modulus.reduce(v));
            }
        }
        Ok(m)
    }

    pub(crate) fn from_flat(modulus: PrimeModulus, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            modulus,
            rows,
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.modulus.get();
    }

    /// Adds `v` to entry `(r, c)` mod p.
    pub fn accumulate(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.modulus.add(self.data[i], v % self.modulus.get());
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.get(), other.modulus.get()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.modulus, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a != 0 {
                    axpy(self.modulus, dst, other.row(k), a);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.modulus;
        Ok(self
            .row_iter()
            .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b))))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m.data, m.rows, m.cols, m.modulus, 0..m.cols);
        m.rows = pivots.len();
        m.data.truncate(m.rows * m.cols);
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, each with leading entry 1.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let Rref { matrix, pivots } = self.rref();
        let p = self.modulus;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = p.neg(matrix.get(r, free));
                }
                // first nonzero entry scaled to 1
                let lead = v.iter().copied().find(|&x| x != 0).expect("free entry is 1");
                scale_row(p, &mut v, p.inv(lead).expect("nonzero"));
                v
            })
            .collect()
    }

    /// One row per line, entries separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in self.row_iter() {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for MatrixGFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Gauss-Jordan elimination of a row-major block, visiting columns in the
/// given order. Returns the pivot columns; pivot rows end up first.
pub(crate) fn rref_in_place(
    data: &mut [u32],
    rows: usize,
    cols: usize,
    p: PrimeModulus,
    col_order: impl IntoIterator<Item = usize>,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in col_order {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for k in 0..cols {
                data.swap(piv * cols + k, r * cols + k);
            }
        }
        let inv = p.inv(data[r * cols + c]).expect("nonzero pivot");
        scale_row(p, &mut data[r * cols..(r + 1) * cols], inv);
        let (head, tail) = data.split_at_mut(r * cols);
        let (pivot_row, rest) = tail.split_at_mut(cols);
        for i in 0..rows {
            let row = if i < r {
                &mut head[i * cols..(i + 1) * cols]
            } else if i > r {
                &mut rest[(i - r - 1) * cols..(i - r) * cols]
            } else {
                continue;
            };
            let f = row[c];
            if f != 0 {
                axpy(p, row, pivot_row, p.neg(f));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_gfp(m: &MatrixGFp) -> usize {
    m.rank()
}

pub fn nullspace_gfp(m: &MatrixGFp) -> Vec<Vec<u32>> {
    m.nullspace()
}

/// Whether `v` lies in the row space of the reduced matrix.
pub fn in_rowspace(v: &[u32], rref: &Rref) -> Result<bool> {
    let m = &rref.matrix;
    if v.len() != m.cols {
        return Err(Error::DimensionMismatch {
            expected: m.cols,
            found: v.len(),
        });
    }
    let p = m.modulus;
    let mut w: Vec<u32> = v.iter().map(|&x| x % p.get()).collect();
    for (r, &c) in rref.pivots.iter().enumerate() {
        let f = w[c];
        if f != 0 {
            axpy(p, &mut w, m.row(r), p.neg(f));
        }
    }
    Ok(w.iter().all(|&x| x == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(MatrixGFp::identity(pm(5), 4).rank(), 4);
        assert_eq!(MatrixGFp::zeros(pm(5), 3, 4).rank(), 0);
        let m = MatrixGFp::from_rows(pm(3), 3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]).unwrap();
        // second row is twice the first mod 3
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_examples() {
        let m = MatrixGFp::from_rows(pm(3), 2, &[vec![1, 1]]).unwrap();
        assert_eq!(m.nullspace(), vec![vec![1, 2]]);
        assert!(MatrixGFp::identity(pm(7), 3).nullspace().is_empty());
    }

    #[test]
    fn rowspace_membership() {
        let m = MatrixGFp::from_rows(pm(5), 3, &[vec![1, 2, 3], vec![0, 1, 4]]).unwrap();
        let r = m.rref();
        assert!(in_rowspace(m.row(0), &r).unwrap());
        assert!(in_rowspace(&[0, 0, 0], &r).unwrap());
        // row0 - 2 row1 = (1, 0, 0) mod 5
        assert!(in_rowspace(&[2, 0, 0], &r).unwrap());
        assert!(!in_rowspace(&[0, 0, 1], &r).unwrap());
        assert!(matches!(in_rowspace(&[1], &r), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn large_prime_elimination() {
        let p = pm(2_147_483_647);
        let m = MatrixGFp::from_rows(p, 2, &[vec![2_147_483_646, 5], vec![1, -5]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn text_export() {
        let m = MatrixGFp::from_rows(pm(3), 3, &[vec![1, -1, 0], vec![0, 0, 4]]).unwrap();
        assert_eq!(m.to_text(), "1 2 0\n0 0 1\n");
    }

    fn arb_matrix() -> impl Strategy<Value = MatrixGFp> {
        (prop::sample::select(vec![2u64, 3, 5, 7, 11]), 1usize..7, 1usize..7).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0i64..p as i64, r * c).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
                MatrixGFp::from_rows(pm(p), c, &rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), m.cols());
            for v in &ns {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rref_rows_span_the_original(m in arb_matrix()) {
            let r = m.rref();
            for row in m.row_iter() {
                prop_assert!(in_rowspace(row, &r).unwrap());
            }
            for (i, &c) in r.pivots.iter().enumerate() {
                for k in 0..r.matrix.rows() {
                    prop_assert_eq!(r.matrix.get(k, c), u32::from(k == i));
                }
            }
        }
    }
}
