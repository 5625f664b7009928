//! Result records and their CSV / JSON files.

use std::cmp::Ordering;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::csscode::CodeInstance;
use crate::distance::DistanceEstimate;
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::laurent::parse_poly;
use crate::lattice::TorusSpec;

/// One code instance with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub p: u32,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub f: String,
    pub g: String,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: i64,
    pub kd2_over_n: f64,
    pub sets: usize,
    pub repeats: usize,
    pub seed: u64,
    pub converged: bool,
}

pub const CSV_HEADER: [&str; 14] = [
    "p", "n", "k", "d", "f", "g", "alpha", "beta", "gamma", "kd2_over_n", "sets", "repeats", "seed", "converged",
];

impl CodeRecord {
    pub fn new(c: &CodeInstance, k: usize, est: &DistanceEstimate) -> Self {
        let t = c.torus;
        let n = t.n();
        Self {
            p: t.p.get(),
            n,
            k,
            d: est.d_upper,
            f: c.f.to_string(),
            g: c.g.to_string(),
            alpha: t.alpha,
            beta: t.beta,
            gamma: t.gamma as i64,
            kd2_over_n: figure_of_merit(k, est.d_upper, n),
            sets: est.information_sets,
            repeats: est.repeats,
            seed: est.seed,
            converged: est.converged,
        }
    }

    pub fn instance(&self) -> Result<CodeInstance> {
        let p = PrimeModulus::new(self.p as u64)?;
        CodeInstance::new(
            parse_poly(&self.f, p)?,
            parse_poly(&self.g, p)?,
            TorusSpec::new(p, self.alpha, self.beta, self.gamma)?,
        )
    }

    /// `k d^2` as an exact integer.
    pub fn kd2(&self) -> u128 {
        self.k as u128 * (self.d as u128).pow(2)
    }

    /// Exact comparison of `k d^2 / n`.
    pub fn cmp_merit(&self, other: &Self) -> Ordering {
        (self.kd2() * other.n as u128).cmp(&(other.kd2() * self.n as u128))
    }
}

pub fn figure_of_merit(k: usize, d: usize, n: usize) -> f64 {
    (k * d * d) as f64 / n as f64
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_csv<W: Write>(records: &[CodeRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.p.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.d.to_string(),
            r.f.clone(),
            r.g.clone(),
            r.alpha.to_string(),
            r.beta.to_string(),
            r.gamma.to_string(),
            format!("{:.4}", r.kd2_over_n),
            r.sets.to_string(),
            r.repeats.to_string(),
            r.seed.to_string(),
            r.converged.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CodeRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Format(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    rd.deserialize().map(|row| row.map_err(csv_error)).collect()
}

pub fn write_json<W: Write>(records: &[CodeRecord], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, records).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<CodeRecord>> {
    serde_json::from_reader(input).map_err(|e| Error::Format(e.to_string()))
}
