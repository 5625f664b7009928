//! Exhaustive search of the weight-6 family
//! `f = 1 + r1 x + r2 x^a y^b`, `g = 1 + r3 y + r4 x^c y^d` over twisted tori.
//!
//! Stage one computes `k` for every candidate and a cheap distance bound for
//! those with `k > 0`. Stage two visits survivors of each `(n, k)` from the
//! most promising down, confirming with the full budget and dropping any whose
//! cheap bound cannot beat the best confirmed figure, so every `(n, k)` that
//! occurs keeps its best code. Both stages draw trial
//! randomness from the candidate itself, so the output does not depend on
//! scheduling.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analysis::stabilizer_range;
use crate::csscode::{build_checks, k_linalg, CodeInstance};
use crate::distance::{estimate_distance_with, EstimateOptions};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::groebner::{k_max, k_twisted, Dimension};
use crate::laurent::{make_generalized_pair, Exponent};
use crate::lattice::TorusSpec;
use crate::records::CodeRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientPolicy {
    /// Every `(r1, r2, r3, r4)` in `(Z_p \ {0})^4`.
    Full,
    Fixed(Vec<[u32; 4]>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub sets: usize,
    pub repeats: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub p: PrimeModulus,
    pub n_min: usize,
    pub n_max: usize,
    pub coefficients: CoefficientPolicy,
    pub prune: Budget,
    pub full: Budget,
    pub seed: u64,
}

impl SearchSpace {
    pub fn new(p: PrimeModulus, n_min: usize, n_max: usize) -> Result<Self> {
        for n in [n_min, n_max] {
            if n < 2 || n % 2 == 1 {
                return Err(Error::OddN(n));
            }
        }
        if n_min > n_max {
            return Err(Error::DegenerateInput(format!("n_min {n_min} exceeds n_max {n_max}")));
        }
        Ok(Self {
            p,
            n_min,
            n_max,
            coefficients: CoefficientPolicy::Full,
            prune: Budget { sets: 100, repeats: 1 },
            full: Budget { sets: 1000, repeats: 10 },
            seed: 0,
        })
    }

    fn coefficient_tuples(&self) -> Vec<[u32; 4]> {
        match &self.coefficients {
            CoefficientPolicy::Fixed(v) => v.clone(),
            CoefficientPolicy::Full => coefficient_tuples(self.p),
        }
    }
}

fn coefficient_tuples(p: PrimeModulus) -> Vec<[u32; 4]> {
    let q = p.get();
    let mut out = Vec::new();
    for a in 1..q {
        for b in 1..q {
            for c in 1..q {
                for d in 1..q {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// All twisted tori with `n = 2 alpha beta`, by decreasing `alpha`, then `gamma`.
pub fn enumerate_tori(p: PrimeModulus, n: usize) -> Result<Vec<TorusSpec>> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    let cells = n / 2;
    let mut out = Vec::new();
    for alpha in (1..=cells).rev().filter(|a| cells % a == 0) {
        for gamma in 0..alpha {
            out.push(TorusSpec::new(p, alpha, cells / alpha, gamma as i64)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Candidate {
    pub torus: TorusSpec,
    pub r: [u32; 4],
    pub ab: Exponent,
    pub cd: Exponent,
}

impl Candidate {
    pub fn instance(&self) -> CodeInstance {
        let p = self.torus.p;
        let r = self.r.map(|v| p.element(v as i64));
        let (f, g) = make_generalized_pair(p, r, (self.ab.i, self.ab.j), (self.cd.i, self.cd.j))
            .expect("nonzero coefficients");
        CodeInstance::new(f, g, self.torus).expect("matching moduli")
    }

    /// Seed for this candidate's distance trials (FNV-1a over its fields).
    pub fn seed(&self, base: u64) -> u64 {
        let t = self.torus;
        let fields = [
            base,
            t.p.get() as u64,
            t.alpha as u64,
            t.beta as u64,
            t.gamma as u64,
            self.r[0] as u64,
            self.r[1] as u64,
            self.r[2] as u64,
            self.r[3] as u64,
            self.ab.i as u64,
            self.ab.j as u64,
            self.cd.i as u64,
            self.cd.j as u64,
        ];
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in fields {
            for byte in v.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyEnumeration {
    pub candidates: Vec<Candidate>,
    /// Every `(exponents, coefficients)` combination considered.
    pub visited: usize,
    /// Terms of `f` or `g` landing in the same coset.
    pub degenerate: usize,
    /// Equivalent to an earlier candidate under `f -> u f`, `g -> v g`.
    pub duplicates: usize,
}

type UnitKey = [(usize, usize, u32); 3];

/// Smallest normalization of three torus terms over the choice of the term sent to 1.
fn unit_key(t: &TorusSpec, terms: [(Exponent, u32); 3]) -> UnitKey {
    let p = t.p;
    (0..3)
        .map(|pivot| {
            let (e0, c0) = terms[pivot];
            let inv = p.inv(c0).expect("nonzero coefficient");
            let mut key = terms.map(|(e, c)| {
                let s = t.canonicalize(e - e0);
                (s.i, s.j, p.mul(c, inv))
            });
            key.sort_unstable();
            key
        })
        .min()
        .expect("three pivots")
}

fn distinct_cosets(t: &TorusSpec, es: [Exponent; 3]) -> bool {
    let s = es.map(|e| t.canonicalize(e));
    s[0] != s[1] && s[0] != s[2] && s[1] != s[2]
}

/// Weight-6 candidates on one torus, exponents drawn from the shortest
/// representative of each lattice coset.
pub fn enumerate_polys(t: &TorusSpec, coefficients: &[[u32; 4]]) -> PolyEnumeration {
    let reps = t.short_representatives();
    let x = Exponent::new(1, 0);
    let y = Exponent::new(0, 1);
    let mut seen: HashSet<(UnitKey, UnitKey)> = HashSet::new();
    let mut out = PolyEnumeration {
        candidates: Vec::new(),
        visited: 0,
        degenerate: 0,
        duplicates: 0,
    };
    for &ab in &reps {
        for &cd in &reps {
            let ok = distinct_cosets(t, [Exponent::ZERO, x, ab]) && distinct_cosets(t, [Exponent::ZERO, y, cd]);
            for &r in coefficients {
                out.visited += 1;
                if !ok {
                    out.degenerate += 1;
                    continue;
                }
                let kf = unit_key(t, [(Exponent::ZERO, 1), (x, r[0]), (ab, r[1])]);
                let kg = unit_key(t, [(Exponent::ZERO, 1), (y, r[2]), (cd, r[3])]);
                if !seen.insert((kf, kg)) {
                    out.duplicates += 1;
                    continue;
                }
                out.candidates.push(Candidate { torus: *t, r, ab, cd });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub tori: usize,
    pub visited: usize,
    pub degenerate: usize,
    pub duplicates: usize,
    pub zero_k: usize,
    pub not_topological: usize,
    /// Candidates with `k > 0` that received a cheap distance bound.
    pub screened: usize,
    pub pruned: usize,
    pub confirmed: usize,
    /// Oracle disagreements or estimator errors; logged and skipped.
    pub failures: usize,
}

impl SearchStats {
    fn absorb(&mut self, o: &SearchStats) {
        self.tori += o.tori;
        self.visited += o.visited;
        self.degenerate += o.degenerate;
        self.duplicates += o.duplicates;
        self.zero_k += o.zero_k;
        self.not_topological += o.not_topological;
        self.screened += o.screened;
        self.pruned += o.pruned;
        self.confirmed += o.confirmed;
        self.failures += o.failures;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Provisional {
    candidate: Candidate,
    k: usize,
    d: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Chunk {
    index: usize,
    torus: TorusSpec,
    stats: SearchStats,
    survivors: Vec<Provisional>,
}

/// Interruption and checkpoint settings for [`run_search_with`].
#[derive(Clone, Debug, Default)]
pub struct SearchControl {
    /// Completed chunks are stored here and reused on the next run.
    pub resume_dir: Option<PathBuf>,
    pub interrupt: Option<Arc<AtomicBool>>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub records: Vec<CodeRecord>,
    pub stats: SearchStats,
}

enum Screen {
    ZeroK,
    NotTopological,
    Failed,
    Survivor(Provisional),
}

fn screen(c: &Candidate, space: &SearchSpace) -> Screen {
    let inst = c.instance();
    let k = match k_twisted(&inst.f, &inst.g, &inst.torus) {
        Ok(0) => return Screen::ZeroK,
        Ok(k) => k,
        Err(e) => {
            log::warn!("k failed for {c:?}: {e}");
            return Screen::Failed;
        }
    };
    match k_max(&inst.f, &inst.g) {
        Ok(Dimension::Infinite) => return Screen::NotTopological,
        Ok(Dimension::Finite(_)) => {}
        Err(e) => {
            log::warn!("k_max failed for {c:?}: {e}");
            return Screen::Failed;
        }
    }
    let opts = EstimateOptions::new(space.prune.sets, space.prune.repeats, c.seed(space.seed));
    match estimate_distance_with(&build_checks(&inst), &opts) {
        Ok(est) => Screen::Survivor(Provisional {
            candidate: *c,
            k,
            d: est.d_upper,
        }),
        Err(e) => {
            log::warn!("distance failed for {c:?}: {e}");
            Screen::Failed
        }
    }
}

fn run_chunk(index: usize, t: &TorusSpec, space: &SearchSpace, coefficients: &[[u32; 4]]) -> Chunk {
    let en = enumerate_polys(t, coefficients);
    #[cfg(feature = "parallel")]
    let screened: Vec<Screen> = {
        use rayon::prelude::*;
        en.candidates.par_iter().map(|c| screen(c, space)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let screened: Vec<Screen> = en.candidates.iter().map(|c| screen(c, space)).collect();
    let mut stats = SearchStats {
        tori: 1,
        visited: en.visited,
        degenerate: en.degenerate,
        duplicates: en.duplicates,
        ..SearchStats::default()
    };
    let mut survivors = Vec::new();
    for s in screened {
        match s {
            Screen::ZeroK => stats.zero_k += 1,
            Screen::NotTopological => stats.not_topological += 1,
            Screen::Failed => stats.failures += 1,
            Screen::Survivor(p) => {
                stats.screened += 1;
                survivors.push(p);
            }
        }
    }
    Chunk {
        index,
        torus: *t,
        stats,
        survivors,
    }
}

fn chunk_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("chunk-{index:06}.json"))
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn prepare_resume_dir(dir: &Path, space: &SearchSpace) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err)?;
    let path = dir.join("space.json");
    let text = serde_json::to_string_pretty(space).map_err(io_err)?;
    match fs::read_to_string(&path) {
        Ok(existing) if existing != text => Err(Error::Format(format!(
            "{} belongs to a different search space",
            dir.display()
        ))),
        Ok(_) => Ok(()),
        Err(_) => fs::write(&path, text).map_err(io_err),
    }
}

/// Tie-break: smaller stabilizer range first, then the polynomial text.
fn tiebreak_key(c: &CodeInstance) -> (u64, String, String, usize, usize, usize) {
    let t = c.torus;
    (
        stabilizer_range(c).to_bits(),
        c.f.to_string(),
        c.g.to_string(),
        t.alpha,
        t.beta,
        t.gamma,
    )
}

pub fn run_search(space: &SearchSpace) -> Result<SearchOutcome> {
    run_search_with(space, &SearchControl::default())
}

pub fn run_search_with(space: &SearchSpace, control: &SearchControl) -> Result<SearchOutcome> {
    if space.prune.sets > space.full.sets || space.prune.repeats > space.full.repeats {
        return Err(Error::DegenerateInput("prune budget exceeds the full budget".into()));
    }
    let coefficients = space.coefficient_tuples();
    let mut tori = Vec::new();
    for n in (space.n_min..=space.n_max).step_by(2) {
        tori.extend(enumerate_tori(space.p, n)?);
    }
    if let Some(dir) = &control.resume_dir {
        prepare_resume_dir(dir, space)?;
    }
    let interrupted = || control.interrupt.as_ref().is_some_and(|f| f.load(AtomicOrdering::SeqCst));

    let mut stats = SearchStats::default();
    let mut by_class: BTreeMap<(usize, usize), Vec<Provisional>> = BTreeMap::new();
    for (index, t) in tori.iter().enumerate() {
        if interrupted() {
            return Err(Error::Interrupted);
        }
        let stored = control.resume_dir.as_ref().map(|d| chunk_path(d, index));
        let cached = stored
            .as_ref()
            .and_then(|p| fs::read_to_string(p).ok())
            .and_then(|s| serde_json::from_str::<Chunk>(&s).ok())
            .filter(|c| c.index == index && c.torus == *t);
        let chunk = match cached {
            Some(c) => c,
            None => {
                let c = run_chunk(index, t, space, &coefficients);
                if let Some(path) = &stored {
                    let tmp = path.with_extension("tmp");
                    fs::write(&tmp, serde_json::to_string(&c).map_err(io_err)?).map_err(io_err)?;
                    fs::rename(&tmp, path).map_err(io_err)?;
                }
                c
            }
        };
        log::info!(
            "torus {}/{} (alpha={}, beta={}, gamma={}): visited {}, k>0 {}",
            index + 1,
            tori.len(),
            t.alpha,
            t.beta,
            t.gamma,
            chunk.stats.visited,
            chunk.stats.screened
        );
        stats.absorb(&chunk.stats);
        for s in chunk.survivors {
            by_class.entry((t.n(), s.k)).or_default().push(s);
        }
    }

    let mut records = Vec::new();
    for ((n, k), mut survivors) in by_class {
        let keyed: Vec<(u128, (u64, String, String, usize, usize, usize), Provisional)> = survivors
            .drain(..)
            .map(|s| {
                let key = tiebreak_key(&s.candidate.instance());
                (s.k as u128 * (s.d as u128).pow(2), key, s)
            })
            .collect();
        let mut keyed = keyed;
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut best: u128 = 0;
        for (provisional, _, s) in keyed {
            if interrupted() {
                return Err(Error::Interrupted);
            }
            // confirmed bounds never exceed the cheap bound, so ties cannot win
            if provisional <= best {
                stats.pruned += 1;
                continue;
            }
            match confirm(&s, space) {
                Some(rec) => {
                    stats.confirmed += 1;
                    best = best.max(rec.kd2());
                    records.push(rec);
                }
                None => stats.failures += 1,
            }
        }
        log::info!("n={n}, k={k}: best k d^2 = {best}");
    }
    sort_records(&mut records);
    log::info!(
        "search done: {} candidates, {} with k>0, {} pruned, {} confirmed",
        stats.visited,
        stats.screened,
        stats.pruned,
        stats.confirmed
    );
    Ok(SearchOutcome { records, stats })
}

/// Full-budget estimate, with `k` rechecked by rank-nullity and `d` by a second seed.
fn confirm(s: &Provisional, space: &SearchSpace) -> Option<CodeRecord> {
    let inst = s.candidate.instance();
    let kl = k_linalg(&inst);
    if kl != s.k {
        log::error!("oracle disagreement on {:?}: groebner {} vs rank {}", s.candidate, s.k, kl);
        return None;
    }
    let checks = build_checks(&inst);
    let seed = s.candidate.seed(space.seed);
    let opts = EstimateOptions::new(space.full.sets, space.full.repeats, seed);
    let est = estimate_distance_with(&checks, &opts).ok()?;
    let recheck = estimate_distance_with(&checks, &EstimateOptions::new(space.full.sets, space.full.repeats, !seed)).ok()?;
    let mut rec = CodeRecord::new(&inst, s.k, &est);
    if recheck.d_upper < est.d_upper {
        log::warn!(
            "second seed lowered d from {} to {} for {} / {}",
            est.d_upper,
            recheck.d_upper,
            rec.f,
            rec.g
        );
        rec = CodeRecord::new(&inst, s.k, &recheck);
    }
    Some(rec)
}

/// Orders by `n`, then decreasing `k d^2 / n`, then the locality tie-break.
pub fn sort_records(records: &mut [CodeRecord]) {
    let key = |r: &CodeRecord| {
        let range = r.instance().map(|c| stabilizer_range(&c)).unwrap_or(f64::INFINITY);
        (range.to_bits(), r.f.clone(), r.g.clone(), r.alpha, r.beta, r.gamma)
    };
    records.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then_with(|| b.cmp_merit(a))
            .then_with(|| key(a).cmp(&key(b)))
    });
}

/// Keeps a record iff its `k d^2 / n` strictly exceeds that of every kept
/// record with smaller `n`. Input must be sorted by `n`.
pub fn pareto_front(records: &[CodeRecord]) -> Vec<CodeRecord> {
    let mut kept: Vec<CodeRecord> = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let n = records[i].n;
        let group_end = records[i..].iter().position(|r| r.n != n).map_or(records.len(), |o| i + o);
        let threshold = kept.iter().max_by(|a, b| a.cmp_merit(b)).cloned();
        for r in &records[i..group_end] {
            if threshold.as_ref().map_or(true, |t| r.cmp_merit(t).is_gt()) {
                kept.push(r.clone());
            }
        }
        i = group_end;
    }
    kept
}
