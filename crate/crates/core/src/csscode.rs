//! Parity-check matrices of the code defined by `(f, g)` on a twisted torus.
//!
//! Row `s` of `H_X` is the translate of `(f, g)` to base cell `s`: each term
//! `c x^u y^v` of `f` puts `c` on the first qudit of cell `s + (u, v)`, and
//! `g` does the same on the second qudit. `H_Z` uses `(-antipode(g), antipode(f))`.

use crate::error::{Error, Result};
use crate::laurent::{antipode, Exponent, LaurentPoly};
use crate::lattice::{EdgeType, TorusSpec};
use crate::linalg::MatrixGFp;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeInstance {
    pub f: LaurentPoly,
    pub g: LaurentPoly,
    pub torus: TorusSpec,
}

impl CodeInstance {
    pub fn new(f: LaurentPoly, g: LaurentPoly, torus: TorusSpec) -> Result<Self> {
        if f.is_zero() || g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        for m in [f.modulus(), g.modulus()] {
            if m != torus.p {
                return Err(Error::ModulusMismatch(m.get(), torus.p.get()));
            }
        }
        Ok(Self { f, g, torus })
    }

    pub fn n(&self) -> usize {
        self.torus.n()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityChecks {
    pub h_x: MatrixGFp,
    pub h_z: MatrixGFp,
}

fn place(m: &mut MatrixGFp, t: &TorusSpec, poly: &LaurentPoly, et: EdgeType) {
    for cell in 0..t.cells() {
        let s = t.site(cell);
        let base = Exponent::new(s.i as i64, s.j as i64);
        for (e, c) in poly.terms() {
            let col = t.qudit_index(t.canonicalize(base + e), et);
            m.accumulate(cell, col, c);
        }
    }
}

pub fn build_checks(c: &CodeInstance) -> ParityChecks {
    let t = &c.torus;
    let (rows, n) = (t.cells(), t.n());
    let mut h_x = MatrixGFp::zeros(t.p, rows, n);
    place(&mut h_x, t, &c.f, EdgeType::Horizontal);
    place(&mut h_x, t, &c.g, EdgeType::Vertical);
    let mut h_z = MatrixGFp::zeros(t.p, rows, n);
    let neg_g_bar = antipode(&c.g).scale(t.p.neg(1));
    place(&mut h_z, t, &neg_g_bar, EdgeType::Horizontal);
    place(&mut h_z, t, &antipode(&c.f), EdgeType::Vertical);
    ParityChecks { h_x, h_z }
}

/// `k = n - rank H_X - rank H_Z`.
pub fn k_linalg(c: &CodeInstance) -> usize {
    let ParityChecks { h_x, h_z } = build_checks(c);
    c.n() - h_x.rank() - h_z.rank()
}

impl ParityChecks {
    pub fn n(&self) -> usize {
        self.h_x.cols()
    }

    pub fn k(&self) -> usize {
        self.n() - self.h_x.rank() - self.h_z.rank()
    }

    /// Largest number of nonzero entries in any check row.
    pub fn max_row_weight(&self) -> usize {
        self.h_x
            .row_iter()
            .chain(self.h_z.row_iter())
            .map(crate::linalg::weight)
            .max()
            .unwrap_or(0)
    }
}
