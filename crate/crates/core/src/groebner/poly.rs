//! Polynomials in two or three variables with nonnegative exponents.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::laurent::{normalize_to_polynomial, Exponent, LaurentPoly};

/// Exponent vector; variables beyond the ring's count stay zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn var(index: usize) -> Self {
        let mut e = [0; 3];
        e[index] = 1;
        Monomial(e)
    }

    pub fn degree(self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(self, other: Monomial) -> Monomial {
        Monomial([other.0[0] - self.0[0], other.0[1] - self.0[1], other.0[2] - self.0[2]])
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        Monomial([
            self.0[0].max(other.0[0]),
            self.0[1].max(other.0[1]),
            self.0[2].max(other.0[2]),
        ])
    }

    pub fn coprime(self, other: Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    /// `Some(v)` when this is a positive power of variable `v` alone, or any
    /// variable for the constant monomial.
    fn pure_power_of(self, v: usize) -> Option<u32> {
        let others_zero = (0..3).filter(|&w| w != v).all(|w| self.0[w] == 0);
        others_zero.then_some(self.0[v])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A global monomial order on `nvars` (2 or 3) variables `x > y > t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub nvars: usize,
}

impl MonomialOrder {
    pub fn grevlex(nvars: usize) -> Self {
        assert!((1..=3).contains(&nvars));
        Self {
            kind: OrderKind::Grevlex,
            nvars,
        }
    }

    pub fn lex(nvars: usize) -> Self {
        assert!((1..=3).contains(&nvars));
        Self {
            kind: OrderKind::Lex,
            nvars,
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => a.0[..self.nvars].cmp(&b.0[..self.nvars]),
            OrderKind::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for v in (0..self.nvars).rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Element of F_p[x, y] or F_p[x, y, t]; terms sorted by decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    modulus: PrimeModulus,
    order: MonomialOrder,
    terms: Vec<(Monomial, u32)>,
}

impl MPoly {
    pub fn zero(modulus: PrimeModulus, order: MonomialOrder) -> Self {
        Self {
            modulus,
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(modulus: PrimeModulus, order: MonomialOrder, c: i64) -> Self {
        Self::from_terms(modulus, order, [(Monomial::ONE, c)])
    }

    pub fn monomial(modulus: PrimeModulus, order: MonomialOrder, m: Monomial) -> Self {
        Self::from_terms(modulus, order, [(m, 1)])
    }

    pub fn from_terms<I>(modulus: PrimeModulus, order: MonomialOrder, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut raw: Vec<(Monomial, u32)> = terms
            .into_iter()
            .map(|(m, c)| {
                debug_assert!(m.0[order.nvars..].iter().all(|&e| e == 0));
                (m, modulus.reduce(c))
            })
            .collect();
        raw.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match out.last_mut() {
                Some((last, acc)) if *last == m => *acc = modulus.add(*acc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Self {
            modulus,
            order,
            terms: out,
        }
    }

    /// Clears denominators of a Laurent polynomial (shift to nonnegative
    /// exponents) and embeds it in the first two variables.
    pub fn from_laurent(a: &LaurentPoly, order: MonomialOrder) -> Result<Self> {
        let (shifted, _) = normalize_to_polynomial(a)?;
        Ok(Self::from_terms(
            a.modulus(),
            order,
            shifted
                .terms()
                .map(|(e, c)| (Monomial([e.i as u32, e.j as u32, 0]), c as i64)),
        ))
    }

    /// Embeds a Laurent polynomial with nonnegative exponents unchanged.
    pub fn from_polynomial(a: &LaurentPoly, order: MonomialOrder) -> Result<Self> {
        if a.terms().any(|(e, _)| e.i < 0 || e.j < 0) {
            return Err(Error::DegenerateInput(format!("negative exponent in {a}")));
        }
        Ok(Self::from_terms(
            a.modulus(),
            order,
            a.terms().map(|(e, c)| (Monomial([e.i as u32, e.j as u32, 0]), c as i64)),
        ))
    }

    /// The polynomial as a Laurent polynomial in `x, y` (third variable must be absent).
    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.modulus,
            self.terms.iter().map(|&(m, c)| {
                debug_assert_eq!(m.0[2], 0);
                (Exponent::new(m.0[0] as i64, m.0[1] as i64), c as i64)
            }),
        )
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
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

    pub fn leading(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn scale(&self, c: u32) -> Self {
        let m = self.modulus;
        if c % m.get() == 0 {
            return Self::zero(m, self.order);
        }
        Self {
            modulus: m,
            order: self.order,
            terms: self.terms.iter().map(|&(mono, v)| (mono, m.mul(v, c))).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, 1)) | None => self.clone(),
            Some((_, lc)) => self.scale(self.modulus.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(1, Monomial::ONE, other, 0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let neg_one = self.modulus.neg(1);
        self.combine(neg_one, Monomial::ONE, other, 0)
    }

    /// `self + c * shift * other`, merging the sorted term lists.
    pub(crate) fn combine(&self, c: u32, shift: Monomial, other: &Self, start: usize) -> Self {
        Self {
            modulus: self.modulus,
            order: self.order,
            terms: merge_scaled(self.modulus, self.order, &self.terms[start..], c, shift, &other.terms),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.modulus;
        let mut acc = Self::zero(m, self.order);
        // accumulate the shorter operand's shifts of the longer one
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        for &(mono, c) in &small.terms {
            acc = acc.combine(c, mono, large, 0);
        }
        acc
    }

    /// Total degree of the leading monomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }
}

/// Merges `a + c * shift * b` for descending term lists.
fn merge_scaled(
    modulus: PrimeModulus,
    order: MonomialOrder,
    a: &[(Monomial, u32)],
    c: u32,
    shift: Monomial,
    b: &[(Monomial, u32)],
) -> Vec<(Monomial, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    if c == 0 {
        out.extend_from_slice(a);
        return out;
    }
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let bm = b[j].0.mul(shift);
        match order.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, modulus.mul(c, b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let v = modulus.add(a[i].1, modulus.mul(c, b[j].1));
                if v != 0 {
                    out.push((bm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|&(m, v)| (m.mul(shift), modulus.mul(c, v))));
    out
}

impl MonomialOrder {
    /// `Some(exponent)` of the smallest pure power of variable `v` among `monomials`.
    pub(crate) fn pure_power_bound(&self, monomials: &[Monomial], v: usize) -> Option<u32> {
        monomials.iter().filter_map(|m| m.pure_power_of(v)).min()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        const NAMES: [char; 3] = ['x', 'y', 't'];
        for (n, &(m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(out, "+")?;
            }
            let mut parts = Vec::new();
            if c != 1 || m == Monomial::ONE {
                parts.push(c.to_string());
            }
            for v in 0..self.order.nvars {
                match m.0[v] {
                    0 => {}
                    1 => parts.push(NAMES[v].to_string()),
                    e => parts.push(format!("{}^{e}", NAMES[v])),
                }
            }
            write!(out, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
