//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the verdict lines reach stdout. The
//! full-budget flagship estimate takes hours and only runs when
//! `ZPTORIC_FULL_BUDGET=1` is set.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zptoric::groebner::{k_max_with_order, k_twisted_with_order};
use zptoric::{
    build_checks, bundled_tables, canonical_unit_form, check_topological_order, enumerate_polys, enumerate_tori,
    estimate_distance_with, exact_distance, global_fit, k_twisted, make_generalized_pair, per_p_slopes,
    published_records, run_search, verify_k, CodeInstance, DistanceEstimate, EstimateOptions,
    ExactDistance, Exponent, InstanceFile, LaurentPoly, MatrixGFp, MonomialOrder, PrimeModulus, SearchSpace,
    TorusSpec,
};

const SEED: u64 = 20240601;

/// Independent reference implementations used to check the library.
mod oracle {
    use super::*;

    pub fn cell(alpha: usize, beta: usize, gamma: usize, i: i64, j: i64) -> usize {
        let (a, b, g) = (alpha as i64, beta as i64, gamma as i64);
        let i2 = i.rem_euclid(b);
        let q = (i - i2) / b;
        let j2 = (j - q * g).rem_euclid(a);
        (i2 * a + j2) as usize
    }

    #[derive(Clone, Debug)]
    pub struct Code {
        pub p: u64,
        pub n: usize,
        pub hx: Vec<Vec<u64>>,
        pub hz: Vec<Vec<u64>>,
    }

    fn terms(a: &LaurentPoly) -> Vec<(i64, i64, u64)> {
        a.terms().map(|(e, c)| (e.i, e.j, c as u64)).collect()
    }

    /// Checks laid out as cell-major qudit pairs, `X` rows from `(f, g)` and
    /// `Z` rows from `(-g(x^-1, y^-1), f(x^-1, y^-1))`.
    pub fn build(c: &CodeInstance) -> Code {
        let t = c.torus;
        let p = t.p.get() as u64;
        let cells = t.alpha * t.beta;
        let (f, g) = (terms(&c.f), terms(&c.g));
        let mut hx = vec![vec![0u64; 2 * cells]; cells];
        let mut hz = vec![vec![0u64; 2 * cells]; cells];
        for i in 0..t.beta as i64 {
            for j in 0..t.alpha as i64 {
                let s = cell(t.alpha, t.beta, t.gamma, i, j);
                for &(a, b, v) in &f {
                    let q = 2 * cell(t.alpha, t.beta, t.gamma, i + a, j + b);
                    hx[s][q] = (hx[s][q] + v) % p;
                    let q = 2 * cell(t.alpha, t.beta, t.gamma, i - a, j - b) + 1;
                    hz[s][q] = (hz[s][q] + v) % p;
                }
                for &(a, b, v) in &g {
                    let q = 2 * cell(t.alpha, t.beta, t.gamma, i + a, j + b) + 1;
                    hx[s][q] = (hx[s][q] + v) % p;
                    let q = 2 * cell(t.alpha, t.beta, t.gamma, i - a, j - b);
                    hz[s][q] = (hz[s][q] + p - v) % p;
                }
            }
        }
        Code { p, n: 2 * cells, hx, hz }
    }

    fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
        let mut m: Vec<Vec<u64>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, piv);
            let inv = pow(m[r][c], p - 2, p);
            for x in m[r].iter_mut() {
                *x = *x * inv % p;
            }
            let pivot = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
            }
            r += 1;
        }
        r
    }

    pub fn k(code: &Code) -> usize {
        code.n - rank(&code.hx, code.p) - rank(&code.hz, code.p)
    }

    pub fn product_is_zero(a: &MatrixGFp, b: &MatrixGFp) -> bool {
        let p = a.modulus().get() as u64;
        (0..a.rows()).all(|i| {
            (0..b.rows()).all(|j| (0..a.cols()).map(|c| a.get(i, c) as u64 * b.get(j, c) as u64).sum::<u64>() % p == 0)
        })
    }

    fn apply(h: &[Vec<u64>], v: &[u64], p: u64) -> bool {
        h.iter().all(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % p == 0)
    }

    /// `v` commutes with `commute` and is not generated by `stabilizers`.
    pub fn is_logical(commute: &[Vec<u64>], stabilizers: &[Vec<u64>], v: &[u64], p: u64) -> bool {
        if !apply(commute, v, p) || v.iter().all(|&x| x == 0) {
            return false;
        }
        let mut ext = stabilizers.to_vec();
        ext.push(v.to_vec());
        rank(&ext, p) > rank(stabilizers, p)
    }

    /// Either kind of logical.
    pub fn is_any_logical(code: &Code, v: &[u64]) -> bool {
        is_logical(&code.hz, &code.hx, v, code.p) || is_logical(&code.hx, &code.hz, v, code.p)
    }

    /// Smallest weight of a logical of one kind, trying weights up to `w_max`
    /// by direct enumeration of vectors. Translations and scalar multiples map
    /// logicals to logicals, so one support point is taken in cell 0 with
    /// coefficient 1.
    pub fn min_logical_weight(commute: &[Vec<u64>], stabilizers: &[Vec<u64>], p: u64, w_max: usize) -> Option<usize> {
        let n = commute[0].len();
        let columns: Vec<Vec<(usize, u64)>> = (0..n)
            .map(|q| commute.iter().enumerate().filter(|(_, r)| r[q] != 0).map(|(i, r)| (i, r[q])).collect())
            .collect();
        struct Dfs<'a> {
            p: u64,
            free: Vec<usize>,
            columns: &'a [Vec<(usize, u64)>],
            commute: &'a [Vec<u64>],
            stabilizers: &'a [Vec<u64>],
            syndrome: Vec<u64>,
            nonzero: usize,
            v: Vec<u64>,
        }
        impl Dfs<'_> {
            fn add(&mut self, q: usize, c: u64) {
                let p = self.p;
                for &(r, h) in &self.columns[q] {
                    let before = self.syndrome[r];
                    let after = (before + c * h) % p;
                    self.syndrome[r] = after;
                    match (before == 0, after == 0) {
                        (true, false) => self.nonzero += 1,
                        (false, true) => self.nonzero -= 1,
                        _ => {}
                    }
                }
                self.v[q] = (self.v[q] + c) % p;
            }

            fn search(&mut self, start: usize, left: usize) -> bool {
                if left == 0 {
                    return self.nonzero == 0 && is_logical(self.commute, self.stabilizers, &self.v, self.p);
                }
                for idx in start..self.free.len() + 1 - left {
                    let q = self.free[idx];
                    for c in 1..self.p {
                        self.add(q, c);
                        let hit = self.search(idx + 1, left - 1);
                        self.add(q, self.p - c);
                        if hit {
                            return true;
                        }
                    }
                }
                false
            }
        }
        let mut dfs = Dfs {
            p,
            free: Vec::new(),
            columns: &columns,
            commute,
            stabilizers,
            syndrome: vec![0; commute.len()],
            nonzero: 0,
            v: vec![0; n],
        };
        for w in 1..=w_max {
            for first in 0..2 {
                dfs.free = (0..n).filter(|&q| q != first).collect();
                dfs.add(first, 1);
                let hit = dfs.search(0, w - 1);
                dfs.add(first, p - 1);
                if hit {
                    return Some(w);
                }
            }
        }
        None
    }

    pub fn ols(points: &[(f64, f64)]) -> (f64, f64, f64) {
        let n = points.len() as f64;
        let (sx, sy) = points.iter().fold((0.0, 0.0), |a, &(x, y)| (a.0 + x, a.1 + y));
        let (sxx, sxy) = points.iter().fold((0.0, 0.0), |a, &(x, y)| (a.0 + x * x, a.1 + x * y));
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        let mean = sy / n;
        let tot: f64 = points.iter().map(|&(_, y)| (y - mean).powi(2)).sum();
        let res: f64 = points.iter().map(|&(x, y)| (y - slope * x - intercept).powi(2)).sum();
        (slope, intercept, 1.0 - res / tot)
    }
}

fn witness_ok(c: &CodeInstance, est: &DistanceEstimate) -> bool {
    let code = oracle::build(c);
    let v: Vec<u64> = est.witness.iter().map(|&x| x as u64).collect();
    v.iter().filter(|&&x| x != 0).count() == est.d_upper && oracle::is_any_logical(&code, &v)
}

fn rows() -> Vec<InstanceFile> {
    bundled_tables()
}

fn find(p: u64, n: usize) -> InstanceFile {
    rows()
        .into_iter()
        .find(|r| r.p == p && r.published.unwrap().n == n)
        .unwrap_or_else(|| panic!("no table row for p={p}, n={n}"))
}

type Verdict = Result<String, String>;

fn c1_k_reproduction() -> Verdict {
    let start = Instant::now();
    let rows = rows();
    let mut bad = Vec::new();
    for r in &rows {
        let check = verify_k(r).map_err(|e| e.to_string())?;
        let independent = oracle::k(&oracle::build(&r.instance().unwrap()));
        if !check.ok || independent != check.k_groebner {
            bad.push(format!("{} (groebner {}, rank {}, reference {independent})", check.label, check.k_groebner, check.k_linalg));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("{}/{} rows match n and k by both oracles in {secs:.1} s", rows.len() - bad.len(), rows.len());
    if bad.is_empty() && rows.len() == 80 && secs < 60.0 {
        Ok(msg)
    } else {
        Err(format!("{msg}; mismatches: {bad:?}"))
    }
}

fn c2_exact_distance() -> Verdict {
    let targets = [(3, 16), (5, 16), (5, 20), (7, 12), (7, 14), (11, 16), (11, 20), (2, 18)];
    let mut notes = Vec::new();
    let mut bad = Vec::new();
    for (p, n) in targets {
        let r = find(p, n);
        let d = r.published.unwrap().d;
        let c = r.instance().unwrap();
        let lib = exact_distance(&c, d + 1);
        let code = oracle::build(&c);
        let dx = oracle::min_logical_weight(&code.hz, &code.hx, code.p, d);
        let dz = oracle::min_logical_weight(&code.hx, &code.hz, code.p, d);
        let reference = dx.into_iter().chain(dz).min();
        notes.push(format!("{}={:?}", r.label(), lib.value()));
        if lib != ExactDistance::Value(d) || reference != Some(d) {
            bad.push(format!("{}: library {lib:?}, reference {reference:?}", r.label()));
        }
    }
    if bad.is_empty() {
        Ok(format!("8/8 exact distances equal the published d, confirmed by direct enumeration ({})", notes.join(", ")))
    } else {
        Err(bad.join("; "))
    }
}

fn c3_estimated_distance() -> Verdict {
    let start = Instant::now();
    let mut matched = 0;
    let mut improved = Vec::new();
    let mut bad = Vec::new();
    let mid: Vec<InstanceFile> = rows().into_iter().filter(|r| r.published.unwrap().n <= 60).collect();
    for r in &mid {
        let d = r.published.unwrap().d;
        let c = r.instance().unwrap();
        // trials nest, so stopping at the published value cannot change the verdict
        let opts = EstimateOptions::new(10_000, 100, SEED).with_target(d);
        let est = estimate_distance_with(&build_checks(&c), &opts).map_err(|e| e.to_string())?;
        if !witness_ok(&c, &est) {
            bad.push(format!("{}: witness rejected", r.label()));
        } else if est.d_upper == d {
            matched += 1;
        } else if est.d_upper < d {
            improved.push(format!("{} -> d <= {}", r.label(), est.d_upper));
        } else {
            bad.push(format!("{}: estimate {}", r.label(), est.d_upper));
        }
    }
    let msg = format!(
        "{matched}/{} rows with n <= 60 match, {} improved {improved:?}, {:.0} s",
        mid.len(),
        improved.len(),
        start.elapsed().as_secs_f64()
    );
    if bad.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; failures: {bad:?}"))
    }
}

fn flagship(p: u64, n: usize, sets: usize, repeats: usize, slack: usize) -> Result<String, String> {
    let r = find(p, n);
    let pb = r.published.unwrap();
    let c = r.instance().unwrap();
    let k = k_twisted(&c.f, &c.g, &c.torus).map_err(|e| e.to_string())?;
    let checks = build_checks(&c);
    let reference = oracle::k(&oracle::build(&c));
    if k != pb.k || checks.k() != pb.k || reference != pb.k {
        return Err(format!("{}: k groebner {k}, rank {}, reference {reference}", r.label(), checks.k()));
    }
    let est = estimate_distance_with(&checks, &EstimateOptions::new(sets, repeats, SEED)).map_err(|e| e.to_string())?;
    let merit = (k * est.d_upper * est.d_upper) as f64 / n as f64;
    let msg = format!("{}: k={k}, d_upper={} (k d^2/n = {merit:.2})", r.label(), est.d_upper);
    if !witness_ok(&c, &est) {
        return Err(format!("{msg}, witness rejected"));
    }
    if est.d_upper <= pb.d + slack {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c4_flagship_smoke() -> Verdict {
    let start = Instant::now();
    let a = flagship(3, 242, 1000, 10, 2)?;
    let b = flagship(11, 120, 1000, 10, 2)?;
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("smoke budget 1000 x 10: {a}; {b}; {secs:.0} s");
    if secs < 300.0 {
        Ok(msg)
    } else {
        Err(format!("{msg} exceeds 300 s"))
    }
}

fn c4_flagship_full() -> Verdict {
    let a = flagship(3, 242, 10_000, 1000, 0)?;
    let b = flagship(11, 120, 10_000, 1000, 0)?;
    Ok(format!("full budget 10000 x 1000: {a}; {b}"))
}

fn c5_search() -> Verdict {
    let start = Instant::now();
    let mut found = Vec::new();
    let mut extra = Vec::new();
    for (p, lo, hi) in [(3u64, 16usize, 16usize), (7, 12, 14)] {
        let mut space = SearchSpace::new(PrimeModulus::new(p).unwrap(), lo, hi).map_err(|e| e.to_string())?;
        space.seed = SEED;
        let out = run_search(&space).map_err(|e| e.to_string())?;
        for rec in &out.records {
            let reference = oracle::k(&oracle::build(&rec.instance().unwrap()));
            if reference != rec.k {
                return Err(format!("record {rec:?} has reference k {reference}"));
            }
        }
        for n in (lo..=hi).step_by(2) {
            let Some(row) = rows().into_iter().find(|r| r.p == p && r.published.unwrap().n == n) else { continue };
            let pb = row.published.unwrap();
            let hit = out.records.iter().find(|r| r.n == n && r.k == pb.k);
            match hit {
                Some(rec) if rec.d == pb.d => found.push(format!("({},{},{})_{p}", rec.n, rec.k, rec.d)),
                Some(rec) if rec.d < pb.d => found.push(format!("({},{},{})_{p} improves d", rec.n, rec.k, rec.d)),
                Some(rec) => return Err(format!("{}: search found d={}", row.label(), rec.d)),
                None => return Err(format!("{}: no record with n={n}, k={}", row.label(), pb.k)),
            }
            for rec in out.records.iter().filter(|r| r.n == n && r.kd2() * pb.n as u128 > (pb.k * pb.d * pb.d) as u128 * r.n as u128) {
                extra.push(format!("[[{},{},{}]]_{p} ({} / {})", rec.n, rec.k, rec.d, rec.f, rec.g));
            }
        }
    }
    let mut msg = format!("rediscovered {}; {:.0} s", found.join(", "), start.elapsed().as_secs_f64());
    if !extra.is_empty() {
        msg += &format!("; higher k d^2/n than the table row: {}", extra.join(", "));
    }
    Ok(msg)
}

fn c6_fits() -> Verdict {
    let records = published_records(&rows());
    let fit = global_fit(&records).map_err(|e| e.to_string())?;
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64 * (r.p as f64).ln(), r.kd2_over_n)).collect();
    let (s, i, r2) = oracle::ols(&pts);
    if (s - fit.slope).abs() > 1e-9 || (i - fit.intercept).abs() > 1e-9 || (r2 - fit.r_squared).abs() > 1e-9 {
        return Err(format!("library fit {fit:?} differs from reference ({s}, {i}, {r2})"));
    }
    let report = per_p_slopes(&records);
    let second = report.slope_vs_ln_p.ok_or("no second-level fit")?;
    let per_p: Vec<String> = report.per_p.iter().map(|(p, f)| format!("p={p}: R^2={:.3}", f.r_squared)).collect();
    let msg = format!(
        "slope {:.4}, intercept {:.3}, R^2 {:.3}; {}; slope vs ln p {:.4}",
        fit.slope,
        fit.intercept,
        fit.r_squared,
        per_p.join(", "),
        second.slope
    );
    let ok = (fit.slope - 0.0541).abs() <= 0.15 * 0.0541
        && (fit.intercept - 3.84).abs() <= 0.15 * 3.84
        && fit.r_squared >= 0.9
        && report.per_p.len() == 5
        && report.per_p.iter().all(|(_, f)| f.r_squared >= 0.9)
        && second.slope > 0.0;
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn random_torus(rng: &mut ChaCha8Rng, p: PrimeModulus, max_cells: usize) -> TorusSpec {
    loop {
        let alpha = rng.gen_range(1..=12);
        let beta = rng.gen_range(1..=12);
        if alpha * beta <= max_cells {
            return TorusSpec::new(p, alpha, beta, rng.gen_range(-12..12)).unwrap();
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, p: PrimeModulus) -> LaurentPoly {
    loop {
        let terms: Vec<(Exponent, i64)> = (0..rng.gen_range(1..=4))
            .map(|_| (Exponent::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3)), rng.gen_range(1..p.get() as i64 + 1)))
            .collect();
        let a = LaurentPoly::from_terms(p, terms);
        if !a.is_zero() {
            return a;
        }
    }
}

fn random_family(rng: &mut ChaCha8Rng, p: PrimeModulus) -> (LaurentPoly, LaurentPoly) {
    let r = [0; 4].map(|_| p.element(rng.gen_range(1..p.get() as i64)));
    let mut e = || (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
    make_generalized_pair(p, r, e(), e()).unwrap()
}

fn c7a_css_identity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..500 {
        let p = PrimeModulus::new(PRIMES[t % 5]).unwrap();
        let c = CodeInstance::new(random_poly(&mut rng, p), random_poly(&mut rng, p), random_torus(&mut rng, p, 40)).unwrap();
        let checks = build_checks(&c);
        let code = oracle::build(&c);
        let same = (0..code.hx.len()).all(|r| {
            (0..code.n).all(|q| checks.h_x.get(r, q) as u64 == code.hx[r][q] && checks.h_z.get(r, q) as u64 == code.hz[r][q])
        });
        if !same {
            return Err(format!("checks differ from the reference construction for {c:?}"));
        }
        if !oracle::product_is_zero(&checks.h_x, &checks.h_z) {
            return Err(format!("H_X H_Z^T != 0 for {c:?}"));
        }
    }
    Ok("(a) 500 instances".into())
}

fn c7b_k_agreement() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let (mut done, mut positive) = (0, 0);
    while done < 200 {
        let p = PrimeModulus::new(PRIMES[done % 5]).unwrap();
        let (f, g) = random_family(&mut rng, p);
        if !check_topological_order(&f, &g).map_err(|e| e.to_string())? {
            continue;
        }
        let c = CodeInstance::new(f, g, random_torus(&mut rng, p, 36)).unwrap();
        let kg = k_twisted(&c.f, &c.g, &c.torus).map_err(|e| e.to_string())?;
        // k = 0 is the common case; cap it so most comparisons are nontrivial
        if kg == 0 && done - positive >= 50 {
            continue;
        }
        let kl = build_checks(&c).k();
        let reference = oracle::k(&oracle::build(&c));
        if kg != kl || kg != reference {
            return Err(format!("k groebner {kg}, rank {kl}, reference {reference} for {c:?}"));
        }
        positive += usize::from(kg > 0);
        done += 1;
    }
    Ok(format!("(b) 200 instances, {positive} with k > 0"))
}

fn c7c_unit_invariance() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for t in 0..100 {
        let p = PrimeModulus::new(PRIMES[t % 5]).unwrap();
        let (f, g) = random_family(&mut rng, p);
        let torus = random_torus(&mut rng, p, 30);
        let mut unit = || {
            let e = Exponent::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
            (e, rng.gen_range(1..p.get()))
        };
        let ((ef, cf), (eg, cg)) = (unit(), unit());
        let (f2, g2) = (f.shift(ef).scale(cf), g.shift(eg).scale(cg));
        let k1 = k_twisted(&f, &g, &torus).map_err(|e| e.to_string())?;
        let k2 = k_twisted(&f2, &g2, &torus).map_err(|e| e.to_string())?;
        let c2 = CodeInstance::new(f2.clone(), g2.clone(), torus).unwrap();
        let reference = oracle::k(&oracle::build(&c2));
        if k1 != k2 || k2 != reference {
            return Err(format!("k {k1} vs {k2} (reference {reference}) under units on {f} / {g}"));
        }
        let same_form = canonical_unit_form(&f).unwrap() == canonical_unit_form(&f2).unwrap()
            && canonical_unit_form(&g).unwrap() == canonical_unit_form(&g2).unwrap();
        if !same_form {
            return Err(format!("canonical form changed under units on {f} / {g}"));
        }
    }
    Ok("(c) 100 instances".into())
}

fn c7d_order_independence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    for t in 0..100 {
        let p = PrimeModulus::new(PRIMES[t % 5]).unwrap();
        let (f, g) = random_family(&mut rng, p);
        let torus = random_torus(&mut rng, p, 30);
        let a = k_twisted_with_order(&f, &g, &torus, MonomialOrder::grevlex(2)).map_err(|e| e.to_string())?;
        let b = k_twisted_with_order(&f, &g, &torus, MonomialOrder::lex(2)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("k grevlex {a} vs lex {b} for {f} / {g}"));
        }
        if t < 40 {
            let a = k_max_with_order(&f, &g, MonomialOrder::grevlex(3)).map_err(|e| e.to_string())?;
            let b = k_max_with_order(&f, &g, MonomialOrder::lex(3)).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("k_max grevlex {a} vs lex {b} for {f} / {g}"));
            }
        }
    }
    Ok("(d) 100 tori, 40 k_max".into())
}

fn c7e_thread_determinism() -> Result<String, String> {
    let c = find(5, 40).instance().unwrap();
    let checks = build_checks(&c);
    let opts = EstimateOptions::new(200, 12, SEED);
    let mut runs = Vec::new();
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        runs.push(pool.install(|| estimate_distance_with(&checks, &opts)).map_err(|e| e.to_string())?);
    }
    if runs.windows(2).all(|w| w[0] == w[1]) {
        Ok(format!("(e) identical estimate (d={}) on 1, 2, 4 threads", runs[0].d_upper))
    } else {
        Err(format!("estimates differ across thread counts: {:?}", runs.iter().map(|r| r.d_upper).collect::<Vec<_>>()))
    }
}

/// Every exponent choice over a rectangular fundamental domain, deduplicated
/// by translating each polynomial's support to all of its points.
fn reference_candidates(alpha: usize, beta: usize, gamma: usize) -> (usize, usize, BTreeSet<(Vec<usize>, Vec<usize>)>) {
    let cell = |i: i64, j: i64| oracle::cell(alpha, beta, gamma, i, j);
    let key = |pts: [(i64, i64); 3]| -> Option<Vec<usize>> {
        let cells: HashSet<usize> = pts.iter().map(|&(i, j)| cell(i, j)).collect();
        if cells.len() < 3 {
            return None;
        }
        pts.iter()
            .map(|&(oi, oj)| {
                let mut v: Vec<usize> = pts.iter().map(|&(i, j)| cell(i - oi, j - oj)).collect();
                v.sort_unstable();
                v
            })
            .min()
    };
    let (mut visited, mut degenerate) = (0, 0);
    let mut keys = BTreeSet::new();
    let domain: Vec<(i64, i64)> =
        (0..beta as i64).flat_map(|i| (0..alpha as i64).map(move |j| (i, j))).collect();
    for &(a, b) in &domain {
        for &(c, d) in &domain {
            visited += 1;
            match (key([(0, 0), (1, 0), (a, b)]), key([(0, 0), (0, 1), (c, d)])) {
                (Some(kf), Some(kg)) => {
                    keys.insert((kf, kg));
                }
                _ => degenerate += 1,
            }
        }
    }
    (visited, degenerate, keys)
}

fn c7f_candidate_completeness() -> Result<String, String> {
    let p = PrimeModulus::new(2).unwrap();
    let mut total = 0;
    for n in (2..=18).step_by(2) {
        let tori = enumerate_tori(p, n).map_err(|e| e.to_string())?;
        let expected: usize = (1..=n / 2).filter(|a| (n / 2) % a == 0).sum();
        if tori.len() != expected {
            return Err(format!("n={n}: {} tori, expected {expected}", tori.len()));
        }
        for t in tori {
            let lib = enumerate_polys(&t, &[[1, 1, 1, 1]]);
            let (visited, degenerate, keys) = reference_candidates(t.alpha, t.beta, t.gamma);
            let lib_keys: BTreeSet<_> = lib
                .candidates
                .iter()
                .map(|c| {
                    let inst = c.instance();
                    let pts = |a: &LaurentPoly| -> [(i64, i64); 3] {
                        let v: Vec<(i64, i64)> = a.exponents().map(|e| (e.i, e.j)).collect();
                        [v[0], v[1], v[2]]
                    };
                    let cell = |i: i64, j: i64| oracle::cell(t.alpha, t.beta, t.gamma, i, j);
                    let key = |pts: [(i64, i64); 3]| {
                        pts.iter()
                            .map(|&(oi, oj)| {
                                let mut v: Vec<usize> = pts.iter().map(|&(i, j)| cell(i - oi, j - oj)).collect();
                                v.sort_unstable();
                                v
                            })
                            .min()
                            .unwrap()
                    };
                    (key(pts(&inst.f)), key(pts(&inst.g)))
                })
                .collect();
            let counts = (lib.visited, lib.degenerate, lib.candidates.len());
            if counts != (visited, degenerate, keys.len()) || lib_keys != keys {
                return Err(format!(
                    "torus {t:?}: library (visited, degenerate, candidates) {counts:?}, reference ({visited}, {degenerate}, {})",
                    keys.len()
                ));
            }
            total += keys.len();
        }
    }
    Ok(format!("(f) {total} binary candidates for n <= 18 match direct enumeration"))
}

fn c7_properties() -> Verdict {
    let start = Instant::now();
    let parts = [
        c7a_css_identity()?,
        c7b_k_agreement()?,
        c7c_unit_invariance()?,
        c7d_order_independence()?,
        c7e_thread_determinism()?,
        c7f_candidate_completeness()?,
    ];
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("{}; {secs:.0} s", parts.join(", "));
    if secs < 600.0 {
        Ok(msg)
    } else {
        Err(format!("{msg} exceeds 600 s"))
    }
}

fn main() -> ExitCode {
    // only the verdict lines below belong on stdout
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let full = std::env::var("ZPTORIC_FULL_BUDGET").is_ok_and(|v| v == "1");
    let criteria: Vec<(&str, Option<fn() -> Verdict>)> = vec![
        ("criterion 1 (k reproduction, all tables)", Some(c1_k_reproduction)),
        ("criterion 2 (exact distance, small n)", Some(c2_exact_distance)),
        ("criterion 3 (estimated distance, n <= 60)", Some(c3_estimated_distance)),
        ("criterion 4 (flagship instances, smoke budget)", Some(c4_flagship_smoke)),
        ("criterion 4 (flagship instances, full budget)", full.then_some(c4_flagship_full as fn() -> Verdict)),
        ("criterion 5 (search rediscovery)", Some(c5_search)),
        ("criterion 6 (global and per-p fits)", Some(c6_fits)),
        ("criterion 7 (property suites)", Some(c7_properties)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let Some(run) = run else {
            println!("SKIP {name}: set ZPTORIC_FULL_BUDGET=1 to run (hours)");
            continue;
        };
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let text = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", text.unwrap_or_default()))
        });
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
