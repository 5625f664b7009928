//! Buchberger's algorithm over F_p and the quotient-ring dimensions that give
//! the logical dimension of a code.
//!
//! On a twisted torus the code has `k = 2 dim R / <f, g, y^alpha - 1, x^beta y^gamma - 1>`
//! with `R` the Laurent ring. The boundary relations are reduced modulo a
//! basis of `<f, g>` by square-and-multiply, so the work does not grow with
//! `alpha` and `beta` beyond `O(log)` multiplications of normal forms.

mod poly;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::TorusSpec;
use crate::laurent::LaurentPoly;

pub use poly::{MPoly, Monomial, MonomialOrder, OrderKind};

/// A reduced Gröbner basis: monic, inter-reduced, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    gens: Vec<MPoly>,
    order: MonomialOrder,
}

/// Dimension of a quotient ring as a vector space over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dimension::Finite(d) => Some(d),
            Dimension::Infinite => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite => write!(f, "infinite"),
        }
    }
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[MPoly] {
        &self.gens
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gens.iter().filter_map(MPoly::leading_monomial).collect()
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        (0..self.gens.len()).all(|i| {
            (i + 1..self.gens.len()).all(|j| reduce(&s_polynomial(&self.gens[i], &self.gens[j]), &self.gens).is_zero())
        })
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|g| {
                if self.order.nvars <= 2 {
                    g.to_laurent().to_string()
                } else {
                    g.to_string()
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn s_polynomial(a: &MPoly, b: &MPoly) -> MPoly {
    let (la, ca) = a.leading().expect("nonzero");
    let (lb, cb) = b.leading().expect("nonzero");
    let lcm = la.lcm(lb);
    let m = a.modulus();
    // cb * (lcm/la) * a - ca * (lcm/lb) * b
    let left = MPoly::zero(m, a.order()).combine(cb, la.quotient_of(lcm), a, 0);
    left.combine(m.neg(ca), lb.quotient_of(lcm), b, 0)
}

/// Full reduction of `a` by monic `gens`.
fn reduce(a: &MPoly, gens: &[MPoly]) -> MPoly {
    let m = a.modulus();
    let mut rem: Vec<(Monomial, i64)> = Vec::new();
    let mut cur = a.clone();
    let mut start = 0;
    while let Some(&(lm, lc)) = cur.terms().get(start) {
        match gens.iter().find(|g| g.leading_monomial().is_some_and(|gl| gl.divides(lm))) {
            Some(g) => {
                let gl = g.leading_monomial().expect("nonzero generator");
                debug_assert_eq!(g.leading().map(|t| t.1), Some(1));
                cur = cur.combine(m.neg(lc), gl.quotient_of(lm), g, start);
                start = 0;
            }
            None => {
                rem.push((lm, lc as i64));
                start += 1;
            }
        }
    }
    MPoly::from_terms(m, a.order(), rem)
}

fn with_order(a: &MPoly, order: MonomialOrder) -> MPoly {
    if a.order() == order {
        a.clone()
    } else {
        MPoly::from_terms(a.modulus(), order, a.terms().iter().map(|&(m, c)| (m, c as i64)))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are processed by increasing degree of their lcm; the product and
/// chain criteria discard pairs that are known to reduce to zero.
pub fn buchberger(gens: &[MPoly], order: MonomialOrder) -> Result<GroebnerBasis> {
    let first = gens.first().ok_or(Error::EmptyIdeal)?;
    let modulus = first.modulus();
    for g in gens {
        if g.modulus() != modulus {
            return Err(Error::ModulusMismatch(modulus.get(), g.modulus().get()));
        }
        if g.order().nvars > order.nvars {
            return Err(Error::DimensionMismatch {
                expected: order.nvars,
                found: g.order().nvars,
            });
        }
    }
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        let g = with_order(g, order);
        let r = reduce(&g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    if basis.is_empty() {
        return Err(Error::EmptyIdeal);
    }

    let mut heap = BinaryHeap::new();
    let mut pending = HashSet::new();
    let push_pair = |heap: &mut BinaryHeap<_>, pending: &mut HashSet<_>, basis: &[MPoly], i: usize, j: usize| {
        let lcm = basis[i]
            .leading_monomial()
            .expect("nonzero")
            .lcm(basis[j].leading_monomial().expect("nonzero"));
        heap.push(Reverse((lcm.degree(), j, i)));
        pending.insert((i, j));
    };
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(&mut heap, &mut pending, &basis, i, j);
        }
    }

    while let Some(Reverse((_, j, i))) = heap.pop() {
        pending.remove(&(i, j));
        let li = basis[i].leading_monomial().expect("nonzero");
        let lj = basis[j].leading_monomial().expect("nonzero");
        if li.coprime(lj) {
            continue;
        }
        let lcm = li.lcm(lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().is_some_and(|lk| lk.divides(lcm))
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let h = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if h.is_zero() {
            continue;
        }
        basis.push(h.monic());
        let new = basis.len() - 1;
        for k in 0..new {
            push_pair(&mut heap, &mut pending, &basis, k, new);
        }
    }

    Ok(GroebnerBasis {
        gens: reduce_basis(basis, order),
        order,
    })
}

/// Minimalizes and inter-reduces a Gröbner basis.
fn reduce_basis(basis: Vec<MPoly>, order: MonomialOrder) -> Vec<MPoly> {
    let lms: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial().expect("nonzero")).collect();
    let mut keep: Vec<MPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = lms.iter().enumerate().any(|(k, lk)| {
            k != i && lk.divides(lms[i]) && (*lk != lms[i] || k < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out: Vec<MPoly> = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<MPoly> = keep.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect();
        out.push(reduce(&keep[i], &others).monic());
    }
    out.sort_by(|a, b| {
        order.cmp(
            &a.leading_monomial().expect("nonzero"),
            &b.leading_monomial().expect("nonzero"),
        )
    });
    out
}

/// Remainder of `a` modulo the basis; idempotent and zero exactly on the ideal.
pub fn normal_form(a: &MPoly, g: &GroebnerBasis) -> MPoly {
    reduce(&with_order(a, g.order), &g.gens)
}

/// `normal_form(base^e, g)` by square-and-multiply.
pub fn power_mod(base: Monomial, mut e: u64, g: &GroebnerBasis) -> MPoly {
    let modulus = g.gens.first().map(MPoly::modulus).expect("nonempty basis");
    let order = g.order;
    let mut acc = normal_form(&MPoly::constant(modulus, order, 1), g);
    let mut sq = normal_form(&MPoly::monomial(modulus, order, base), g);
    while e > 0 {
        if e & 1 == 1 {
            acc = normal_form(&acc.mul(&sq), g);
        }
        e >>= 1;
        if e > 0 {
            sq = normal_form(&sq.mul(&sq), g);
        }
    }
    acc
}

/// Number of standard monomials, i.e. `dim F_p[vars] / <g>`.
pub fn quotient_dimension(g: &GroebnerBasis) -> Dimension {
    let lms = g.leading_monomials();
    let nvars = g.order.nvars;
    let mut bounds = [1u32; 3];
    for (v, bound) in bounds.iter_mut().enumerate().take(nvars) {
        match g.order.pure_power_bound(&lms, v) {
            Some(e) => *bound = e,
            None => return Dimension::Infinite,
        }
    }
    let mut count = 0;
    for a in 0..bounds[0] {
        for b in 0..bounds[1] {
            for c in 0..bounds[2] {
                let m = Monomial([a, b, c]);
                if !lms.iter().any(|l| l.divides(m)) {
                    count += 1;
                }
            }
        }
    }
    Dimension::Finite(count)
}

fn check_moduli(f: &LaurentPoly, g: &LaurentPoly) -> Result<()> {
    if f.modulus() != g.modulus() {
        return Err(Error::ModulusMismatch(f.modulus().get(), g.modulus().get()));
    }
    Ok(())
}

/// Logical dimension on a twisted torus from the boundary ideal.
pub fn k_twisted(f: &LaurentPoly, g: &LaurentPoly, torus: &TorusSpec) -> Result<usize> {
    k_twisted_with_order(f, g, torus, MonomialOrder::grevlex(2))
}

pub fn k_twisted_with_order(
    f: &LaurentPoly,
    g: &LaurentPoly,
    torus: &TorusSpec,
    order: MonomialOrder,
) -> Result<usize> {
    check_moduli(f, g)?;
    if f.modulus() != torus.p {
        return Err(Error::ModulusMismatch(f.modulus().get(), torus.p.get()));
    }
    let modulus = torus.p;
    let base = buchberger(&[MPoly::from_laurent(f, order)?, MPoly::from_laurent(g, order)?], order)?;
    let one = MPoly::constant(modulus, order, 1);
    let y_cycle = power_mod(Monomial::var(1), torus.alpha as u64, &base).sub(&one);
    let x_part = power_mod(Monomial::var(0), torus.beta as u64, &base);
    let y_part = power_mod(Monomial::var(1), torus.gamma as u64, &base);
    let twisted_cycle = normal_form(&x_part.mul(&y_part), &base).sub(&one);

    let mut gens = base.gens.clone();
    gens.push(y_cycle);
    gens.push(twisted_cycle);
    let full = buchberger(&gens, order)?;
    match quotient_dimension(&full) {
        Dimension::Finite(d) => Ok(2 * d),
        Dimension::Infinite => Err(Error::NotFiniteQuotient),
    }
}

/// `2 dim R / <f, g>` over the Laurent ring, computed in F_p[x, y, t] with `x y t = 1`.
pub fn k_max(f: &LaurentPoly, g: &LaurentPoly) -> Result<Dimension> {
    k_max_with_order(f, g, MonomialOrder::grevlex(3))
}

pub fn k_max_with_order(f: &LaurentPoly, g: &LaurentPoly, order: MonomialOrder) -> Result<Dimension> {
    check_moduli(f, g)?;
    let modulus = f.modulus();
    let inverse = MPoly::from_terms(modulus, order, [(Monomial([1, 1, 1]), 1), (Monomial::ONE, -1)]);
    let gb = buchberger(
        &[MPoly::from_laurent(f, order)?, MPoly::from_laurent(g, order)?, inverse],
        order,
    )?;
    Ok(match quotient_dimension(&gb) {
        Dimension::Finite(d) => Dimension::Finite(2 * d),
        Dimension::Infinite => Dimension::Infinite,
    })
}

/// Whether `f` and `g` generate an ideal of finite codimension in the Laurent ring.
pub fn check_topological_order(f: &LaurentPoly, g: &LaurentPoly) -> Result<bool> {
    Ok(k_max(f, g)? != Dimension::Infinite)
}
