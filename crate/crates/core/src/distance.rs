//! Code distance: an exhaustive oracle for small codes and a randomized
//! information-set estimator.
//!
//! Z-type logicals are vectors in `ker H_X` outside the row space of `H_Z`;
//! X-type logicals swap the roles. Row-space membership is decided with `k`
//! dual vectors `L_i` spanning `ker H_Z` modulo the row space of `H_X`: a
//! kernel vector is a stabilizer iff it is orthogonal to every `L_i`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::csscode::{build_checks, CodeInstance, ParityChecks};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::linalg::{axpy, in_rowspace, rref_in_place, weight, MatrixGFp};

/// Which logical operators are searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Kernel of `H_X` modulo the row space of `H_Z`.
    Z,
    /// Kernel of `H_Z` modulo the row space of `H_X`.
    X,
}

impl Side {
    fn index(self) -> u64 {
        match self {
            Side::Z => 0,
            Side::X => 1,
        }
    }
}

/// Decides whether a kernel vector is a nontrivial logical.
#[derive(Clone, Debug)]
pub struct LogicalTest {
    modulus: PrimeModulus,
    dual: Vec<Vec<u32>>,
}

impl LogicalTest {
    pub fn new(checks: &ParityChecks, side: Side) -> Self {
        let (kernel_of, stabilizers) = match side {
            Side::Z => (&checks.h_z, &checks.h_x),
            Side::X => (&checks.h_x, &checks.h_z),
        };
        let p = stabilizers.modulus();
        let n = stabilizers.cols();
        let mut span: Vec<u32> = stabilizers.row_iter().flatten().copied().collect();
        let mut rows = stabilizers.rows();
        let mut reduced = MatrixGFp::from_flat(p, rows, n, span.clone()).rref();
        let mut dual = Vec::new();
        for w in kernel_of.nullspace() {
            if !in_rowspace(&w, &reduced).expect("matching length") {
                span.extend_from_slice(&w);
                rows += 1;
                reduced = MatrixGFp::from_flat(p, rows, n, span.clone()).rref();
                dual.push(w);
            }
        }
        Self { modulus: p, dual }
    }

    /// Number of logical qudits.
    pub fn k(&self) -> usize {
        self.dual.len()
    }

    /// Assumes `v` lies in the relevant kernel.
    pub fn is_logical(&self, v: &[u32]) -> bool {
        let p = self.modulus;
        self.dual
            .iter()
            .any(|l| l.iter().zip(v).fold(0u32, |acc, (&a, &b)| p.add(acc, p.mul(a, b))) != 0)
    }
}

/// Result of the exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactDistance {
    Value(usize),
    /// No logical of weight at most this bound.
    Exceeds(usize),
}

impl ExactDistance {
    pub fn value(self) -> Option<usize> {
        match self {
            ExactDistance::Value(d) => Some(d),
            ExactDistance::Exceeds(_) => None,
        }
    }
}

/// Smallest logical weight on one side, searching supports of size `1..=w_max`.
///
/// For each support `S` of size `w`, the vectors of the kernel supported inside
/// `S` form a subspace; it holds a logical iff one of its basis vectors does,
/// because stabilizers are closed under linear combination. Supports are
/// visited by increasing size, so the first hit has weight exactly `w` and no
/// coefficient enumeration is needed.
pub fn exact_distance_side(checks: &ParityChecks, side: Side, w_max: usize) -> (ExactDistance, Option<Vec<u32>>) {
    let test = LogicalTest::new(checks, side);
    if test.k() == 0 {
        return (ExactDistance::Exceeds(w_max), None);
    }
    let h = match side {
        Side::Z => &checks.h_x,
        Side::X => &checks.h_z,
    };
    let p = h.modulus();
    let n = h.cols();
    let columns: Vec<Vec<u32>> = (0..n).map(|c| (0..h.rows()).map(|r| h.get(r, c)).collect()).collect();
    for w in 1..=w_max.min(n) {
        let mut support: Vec<usize> = (0..w).collect();
        loop {
            // restricted matrix, rows x w, stored row-major
            let rows = h.rows();
            let mut sub = vec![0u32; rows * w];
            for (k, &c) in support.iter().enumerate() {
                for r in 0..rows {
                    sub[r * w + k] = columns[c][r];
                }
            }
            let m = MatrixGFp::from_flat(p, rows, w, sub);
            for local in m.nullspace() {
                let mut v = vec![0u32; n];
                for (k, &c) in support.iter().enumerate() {
                    v[c] = local[k];
                }
                if test.is_logical(&v) {
                    return (ExactDistance::Value(weight(&v)), Some(v));
                }
            }
            if !next_combination(&mut support, n) {
                break;
            }
        }
    }
    (ExactDistance::Exceeds(w_max), None)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let w = c.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if c[i] < n - w + i {
            c[i] += 1;
            for k in i + 1..w {
                c[k] = c[k - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact distance `min(d_X, d_Z)`, or `Exceeds(w_max)`.
pub fn exact_distance(c: &CodeInstance, w_max: usize) -> ExactDistance {
    let checks = build_checks(c);
    let (z, _) = exact_distance_side(&checks, Side::Z, w_max);
    // the X side only matters below the Z value
    let bound = z.value().map_or(w_max, |d| d - 1);
    match exact_distance_side(&checks, Side::X, bound).0 {
        ExactDistance::Value(d) => ExactDistance::Value(d),
        ExactDistance::Exceeds(_) => z,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateOptions {
    /// Information sets per repeat.
    pub sets: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Stop a side once a logical of at most this weight is found.
    pub target: Option<usize>,
}

impl EstimateOptions {
    pub fn new(sets: usize, repeats: usize, seed: u64) -> Self {
        Self {
            sets,
            repeats,
            seed,
            target: None,
        }
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.target = Some(target);
        self
    }
}

/// Upper bound on the distance from randomized information sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub d_upper: usize,
    pub d_x_upper: usize,
    pub d_z_upper: usize,
    /// Information sets per repeat.
    pub information_sets: usize,
    /// Repeats actually run on the side that ran longest.
    pub repeats: usize,
    pub seed: u64,
    /// No improvement over the final tenth of the repeats, or the target was met.
    pub converged: bool,
    /// A logical of weight `d_upper`.
    #[serde(skip)]
    pub witness: Vec<u32>,
    pub witness_side: Side,
}

struct SideRun {
    best: usize,
    witness: Vec<u32>,
    repeats: usize,
    converged: bool,
}

/// Kernel generator and logical test for one side.
struct SideSearch {
    modulus: PrimeModulus,
    n: usize,
    generator: Vec<u32>,
    dim: usize,
    test: LogicalTest,
}

impl SideSearch {
    fn new(checks: &ParityChecks, side: Side) -> Self {
        let h = match side {
            Side::Z => &checks.h_x,
            Side::X => &checks.h_z,
        };
        let basis = h.nullspace();
        Self {
            modulus: h.modulus(),
            n: h.cols(),
            dim: basis.len(),
            generator: basis.concat(),
            test: LogicalTest::new(checks, side),
        }
    }

    /// One information set; returns the lightest logical lighter than `below`.
    fn trial(&self, rng: &mut ChaCha8Rng, below: usize) -> Option<(usize, Vec<u32>)> {
        let (p, n, dim) = (self.modulus, self.n, self.dim);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut g = self.generator.clone();
        rref_in_place(&mut g, dim, n, p, order);
        let mut best: Option<(usize, Vec<u32>)> = None;
        let mut limit = below;
        let mut consider = |v: &[u32], best: &mut Option<(usize, Vec<u32>)>| {
            let w = weight(v);
            if w > 0 && w < limit && self.test.is_logical(v) {
                limit = w;
                *best = Some((w, v.to_vec()));
            }
        };
        for r in 0..dim {
            consider(&g[r * n..(r + 1) * n], &mut best);
        }
        if dim >= 2 {
            let mut buf = vec![0u32; n];
            let scalar = |rng: &mut ChaCha8Rng| rng.gen_range(1..p.get());
            for _ in 0..dim {
                let i = rng.gen_range(0..dim);
                let j = (i + rng.gen_range(1..dim)) % dim;
                buf.copy_from_slice(&g[i * n..(i + 1) * n]);
                axpy(p, &mut buf, &g[j * n..(j + 1) * n], scalar(rng));
                consider(&buf, &mut best);
            }
            if dim >= 3 {
                for _ in 0..dim {
                    let i = rng.gen_range(0..dim);
                    let j = (i + rng.gen_range(1..dim)) % dim;
                    let mut k = rng.gen_range(0..dim);
                    while k == i || k == j {
                        k = rng.gen_range(0..dim);
                    }
                    buf.copy_from_slice(&g[i * n..(i + 1) * n]);
                    axpy(p, &mut buf, &g[j * n..(j + 1) * n], scalar(rng));
                    axpy(p, &mut buf, &g[k * n..(k + 1) * n], scalar(rng));
                    consider(&buf, &mut best);
                }
            }
        }
        best
    }

    fn run(&self, side: Side, opts: &EstimateOptions) -> SideRun {
        let mut best = self.n + 1;
        let mut witness = Vec::new();
        let mut last_improvement = 0;
        let mut repeats = 0;
        for rep in 0..opts.repeats {
            repeats = rep + 1;
            let run_one = |s: usize| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream((side.index() << 63) | ((rep as u64) << 32) | s as u64);
                self.trial(&mut rng, best).map(|(w, v)| (w, s, v))
            };
            #[cfg(feature = "parallel")]
            let found = {
                use rayon::prelude::*;
                (0..opts.sets).into_par_iter().filter_map(run_one).min_by_key(|(w, s, _)| (*w, *s))
            };
            #[cfg(not(feature = "parallel"))]
            let found = (0..opts.sets).filter_map(run_one).min_by_key(|(w, s, _)| (*w, *s));
            if let Some((w, _, v)) = found {
                best = w;
                witness = v;
                last_improvement = rep;
            }
            if opts.target.is_some_and(|t| best <= t) {
                return SideRun {
                    best,
                    witness,
                    repeats,
                    converged: true,
                };
            }
        }
        let tail = repeats.div_ceil(10);
        SideRun {
            best,
            witness,
            repeats,
            converged: repeats > 0 && last_improvement < repeats - tail,
        }
    }
}

pub fn estimate_distance(c: &CodeInstance, sets: usize, repeats: usize, seed: u64) -> Result<DistanceEstimate> {
    estimate_distance_with(&build_checks(c), &EstimateOptions::new(sets, repeats, seed))
}

/// Runs both sides with equal budgets and reports the smaller bound.
pub fn estimate_distance_with(checks: &ParityChecks, opts: &EstimateOptions) -> Result<DistanceEstimate> {
    let z = SideSearch::new(checks, Side::Z);
    if z.test.k() == 0 {
        return Err(Error::NoLogicals);
    }
    let x = SideSearch::new(checks, Side::X);
    let rz = z.run(Side::Z, opts);
    let rx = x.run(Side::X, opts);
    if rx.best != rz.best && opts.target.is_none() {
        log::info!("X and Z bounds differ: {} vs {}", rx.best, rz.best);
    }
    let (d_upper, witness, witness_side) = if rx.best < rz.best {
        (rx.best, rx.witness, Side::X)
    } else {
        (rz.best, rz.witness, Side::Z)
    };
    Ok(DistanceEstimate {
        d_upper,
        d_x_upper: rx.best,
        d_z_upper: rz.best,
        information_sets: opts.sets,
        repeats: rz.repeats.max(rx.repeats),
        seed: opts.seed,
        converged: rz.converged && rx.converged,
        witness,
        witness_side,
    })
}
