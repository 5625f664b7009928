//! Twisted-torus geometry.
//!
//! Sites `v` and `v + a1`, `v + a2` are identified, with `a1 = (0, alpha)`
//! and `a2 = (beta, gamma)`. Each unit cell carries two qudits, so a torus
//! holds `n = 2 * alpha * beta` qudits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::laurent::Exponent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusSpec {
    pub p: PrimeModulus,
    pub alpha: usize,
    pub beta: usize,
    /// Always in `[0, alpha)`.
    pub gamma: usize,
}

/// Canonical representative of a site modulo the boundary lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteIndex {
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeType {
    /// First qudit of a cell.
    Horizontal = 1,
    /// Second qudit of a cell.
    Vertical = 2,
}

/// Builds a torus with `gamma_raw` reduced mod `alpha`; `(beta, gamma + k alpha)`
/// spans the same lattice as `(beta, gamma)` together with `(0, alpha)`.
pub fn canonicalize_gamma(p: PrimeModulus, alpha: usize, beta: usize, gamma_raw: i64) -> Result<TorusSpec> {
    if alpha == 0 || beta == 0 {
        return Err(Error::InvalidTorus(format!(
            "alpha and beta must be positive (got {alpha}, {beta})"
        )));
    }
    Ok(TorusSpec {
        p,
        alpha,
        beta,
        gamma: gamma_raw.rem_euclid(alpha as i64) as usize,
    })
}

impl TorusSpec {
    pub fn new(p: PrimeModulus, alpha: usize, beta: usize, gamma_raw: i64) -> Result<Self> {
        canonicalize_gamma(p, alpha, beta, gamma_raw)
    }

    pub fn n(&self) -> usize {
        2 * self.cells()
    }

    pub fn cells(&self) -> usize {
        self.alpha * self.beta
    }

    pub fn a1(&self) -> Exponent {
        Exponent::new(0, self.alpha as i64)
    }

    pub fn a2(&self) -> Exponent {
        Exponent::new(self.beta as i64, self.gamma as i64)
    }

    pub fn canonicalize(&self, e: Exponent) -> SiteIndex {
        let (alpha, beta, gamma) = (self.alpha as i64, self.beta as i64, self.gamma as i64);
        let i = e.i.rem_euclid(beta);
        let q = (e.i - i) / beta;
        let j = (e.j - q * gamma).rem_euclid(alpha);
        SiteIndex {
            i: i as usize,
            j: j as usize,
        }
    }

    /// Whether `e` lies in the identification lattice.
    pub fn contains(&self, e: Exponent) -> bool {
        self.canonicalize(e) == SiteIndex { i: 0, j: 0 }
    }

    pub fn cell_index(&self, s: SiteIndex) -> usize {
        s.i * self.alpha + s.j
    }

    pub fn site(&self, cell: usize) -> SiteIndex {
        SiteIndex {
            i: cell / self.alpha,
            j: cell % self.alpha,
        }
    }

    /// Column of a qudit in the parity-check matrices (cell-major, edge-minor).
    pub fn qudit_index(&self, s: SiteIndex, et: EdgeType) -> usize {
        2 * self.cell_index(s) + (et as usize - 1)
    }

    /// Lagrange-reduced basis of the identification lattice.
    pub fn reduced_basis(&self) -> (Exponent, Exponent) {
        let norm = |e: Exponent| e.i * e.i + e.j * e.j;
        let dot = |a: Exponent, b: Exponent| a.i * b.i + a.j * b.j;
        let (mut u, mut v) = (self.a1(), self.a2());
        if norm(u) > norm(v) {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            let nu = norm(u);
            // nearest integer to dot(u, v) / |u|^2
            let m = (2 * dot(u, v) + nu).div_euclid(2 * nu);
            v = Exponent::new(v.i - m * u.i, v.j - m * u.j);
            if norm(v) >= nu {
                return (u, v);
            }
            std::mem::swap(&mut u, &mut v);
        }
    }

    /// Shortest member of the coset of `e` (ties broken by exponent order).
    pub fn short_representative(&self, e: Exponent) -> Exponent {
        let (u, v) = self.reduced_basis();
        let s = self.canonicalize(e);
        let base = Exponent::new(s.i as i64, s.j as i64);
        // Real coordinates of base in the (u, v) basis, rounded.
        let det = (u.i * v.j - u.j * v.i) as f64;
        let cu = ((base.i * v.j - base.j * v.i) as f64 / det).round() as i64;
        let cv = ((u.i * base.j - u.j * base.i) as f64 / det).round() as i64;
        let mut best: Option<(i64, Exponent)> = None;
        for a in -2..=2 {
            for b in -2..=2 {
                let m = cu + a;
                let l = cv + b;
                let cand = Exponent::new(base.i - m * u.i - l * v.i, base.j - m * u.j - l * v.j);
                let key = (cand.i * cand.i + cand.j * cand.j, cand);
                if best.map_or(true, |(bn, be)| (key.0, key.1) < (bn, be)) {
                    best = Some(key);
                }
            }
        }
        best.expect("nonempty window").1
    }

    /// The `alpha * beta` coset representatives chosen by [`Self::short_representative`],
    /// in cell order.
    pub fn short_representatives(&self) -> Vec<Exponent> {
        (0..self.cells())
            .map(|c| {
                let s = self.site(c);
                self.short_representative(Exponent::new(s.i as i64, s.j as i64))
            })
            .collect()
    }
}
