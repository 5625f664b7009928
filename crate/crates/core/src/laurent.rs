//! Sparse bivariate Laurent polynomials over Z_p.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

pub use parse::parse_poly;

/// Exponent pair `(i, j)` of the monomial `x^i y^j`; ordered lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exponent {
    pub i: i64,
    pub j: i64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { i: 0, j: 0 };

    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }

    pub fn neg(self) -> Self {
        Self::new(-self.i, -self.j)
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent::new(self.i + o.i, self.j + o.j)
    }
}

impl std::ops::Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        Exponent::new(self.i - o.i, self.j - o.j)
    }
}

/// An element of Z_p[x^{±1}, y^{±1}]. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    modulus: PrimeModulus,
    terms: BTreeMap<Exponent, u32>,
}

impl LaurentPoly {
    pub fn zero(modulus: PrimeModulus) -> Self {
        Self {
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        Self::monomial(modulus, 1, Exponent::ZERO)
    }

    pub fn monomial(modulus: PrimeModulus, coeff: i64, e: Exponent) -> Self {
        Self::from_terms(modulus, [(e, coeff)])
    }

    /// Builds a polynomial from signed coefficients; repeated exponents accumulate.
    pub fn from_terms<I>(modulus: PrimeModulus, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, i64)>,
    {
        let mut out = Self::zero(modulus);
        for (e, c) in terms {
            out.add_term(e, modulus.reduce(c));
        }
        out
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, u32)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn exponents(&self) -> impl Iterator<Item = Exponent> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, e: Exponent) -> u32 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: u32) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        let slot = self.terms.entry(e).or_insert(0);
        *slot = m.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.modulus.get(), other.modulus.get()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.modulus.neg(1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        poly_mul(self, other)
    }

    pub fn scale(&self, c: u32) -> Self {
        let m = self.modulus;
        let c = c % m.get();
        let mut out = Self::zero(m);
        if c != 0 {
            out.terms = self.terms.iter().map(|(&e, &v)| (e, m.mul(v, c))).collect();
        }
        out
    }

    /// Multiplication by the monomial `x^s.i y^s.j`.
    pub fn shift(&self, s: Exponent) -> Self {
        Self {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(&e, &c)| (e + s, c)).collect(),
        }
    }

    /// Componentwise minimum exponent, `None` for the zero polynomial.
    pub fn min_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |acc, e| Exponent::new(acc.i.min(e.i), acc.j.min(e.j))))
    }

    pub fn max_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |acc, e| Exponent::new(acc.i.max(e.i), acc.j.max(e.j))))
    }
}

pub fn poly_mul(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    a.check(b)?;
    let m = a.modulus;
    let mut out = LaurentPoly::zero(m);
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            out.add_term(ea + eb, m.mul(ca, cb));
        }
    }
    Ok(out)
}

/// The ring involution `x^i y^j -> x^{-i} y^{-j}`.
pub fn antipode(a: &LaurentPoly) -> LaurentPoly {
    LaurentPoly {
        modulus: a.modulus,
        terms: a.terms.iter().map(|(&e, &c)| (e.neg(), c)).collect(),
    }
}

/// Shifts `a` so both minimum exponents are zero. Returns the shifted
/// polynomial and the original minimum, so that `a = x^shift.i y^shift.j * shifted`.
pub fn normalize_to_polynomial(a: &LaurentPoly) -> Result<(LaurentPoly, Exponent)> {
    let shift = a.min_exponent().ok_or(Error::ZeroPolynomial)?;
    Ok((a.shift(shift.neg()), shift))
}

/// Representative of the class of `a` under multiplication by units `c x^i y^j`.
pub fn canonical_unit_form(a: &LaurentPoly) -> Result<LaurentPoly> {
    let (shifted, _) = normalize_to_polynomial(a)?;
    let (_, lead) = shifted.terms().next().ok_or(Error::ZeroPolynomial)?;
    let inv = shifted.modulus.inv(lead)?;
    Ok(shifted.scale(inv))
}

/// The weight-3 pair `f = 1 + r1 x + r2 x^a y^b`, `g = 1 + r3 y + r4 x^c y^d`.
pub fn make_generalized_pair(
    p: PrimeModulus,
    r: [FieldElement; 4],
    (a, b): (i64, i64),
    (c, d): (i64, i64),
) -> Result<(LaurentPoly, LaurentPoly)> {
    for (idx, ri) in r.iter().enumerate() {
        if ri.modulus() != p {
            return Err(Error::ModulusMismatch(p.get(), ri.modulus().get()));
        }
        if ri.is_zero() {
            return Err(Error::ZeroCoefficient(idx + 1));
        }
    }
    let v = |k: usize| r[k].value() as i64;
    let f = LaurentPoly::from_terms(
        p,
        [
            (Exponent::ZERO, 1),
            (Exponent::new(1, 0), v(0)),
            (Exponent::new(a, b), v(1)),
        ],
    );
    let g = LaurentPoly::from_terms(
        p,
        [
            (Exponent::ZERO, 1),
            (Exponent::new(0, 1), v(2)),
            (Exponent::new(c, d), v(3)),
        ],
    );
    Ok((f, g))
}

fn write_var(out: &mut fmt::Formatter<'_>, var: char, e: i64) -> fmt::Result {
    match e {
        1 => write!(out, "{var}"),
        _ => write!(out, "{var}^{e}"),
    }
}

/// Strict rendering: `c*x^i*y^j` terms joined by `+`, exponents in lexicographic order.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(out, "+")?;
            }
            let mut need_star = false;
            if c != 1 || e == Exponent::ZERO {
                write!(out, "{c}")?;
                need_star = true;
            }
            if e.i != 0 {
                if need_star {
                    write!(out, "*")?;
                }
                write_var(out, 'x', e.i)?;
                need_star = true;
            }
            if e.j != 0 {
                if need_star {
                    write!(out, "*")?;
                }
                write_var(out, 'y', e.j)?;
            }
        }
        Ok(())
    }
}
