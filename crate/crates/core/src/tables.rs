//! Published code tables and their verification.

use serde::{Deserialize, Serialize};

use crate::csscode::{build_checks, CodeInstance};
use crate::distance::{estimate_distance_with, EstimateOptions};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::groebner::k_twisted;
use crate::laurent::parse_poly;
use crate::lattice::TorusSpec;
use crate::records::{figure_of_merit, CodeRecord};

const BUNDLE: &str = include_str!("../data/tables.json");

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Published {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

/// One code given by its polynomials and torus, optionally with published parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub p: u64,
    pub f: String,
    pub g: String,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published: Option<Published>,
}

impl InstanceFile {
    pub fn instance(&self) -> Result<CodeInstance> {
        let p = PrimeModulus::new(self.p)?;
        CodeInstance::new(
            parse_poly(&self.f, p)?,
            parse_poly(&self.g, p)?,
            TorusSpec::new(p, self.alpha, self.beta, self.gamma)?,
        )
    }

    pub fn label(&self) -> String {
        match self.published {
            Some(pb) => format!("[[{},{},{}]]_{}", pb.n, pb.k, pb.d, self.p),
            None => format!("({}, {}) on ({}, {}, {}) mod {}", self.f, self.g, self.alpha, self.beta, self.gamma, self.p),
        }
    }
}

/// Every row of the bundled tables (Z_3, Z_5, Z_7, Z_11 and Z_2).
pub fn bundled_tables() -> Vec<InstanceFile> {
    serde_json::from_str(BUNDLE).expect("bundled tables parse")
}

pub fn parse_bundle(text: &str) -> Result<Vec<InstanceFile>> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Published rows as records, for fitting.
pub fn published_records(rows: &[InstanceFile]) -> Vec<CodeRecord> {
    rows.iter()
        .filter_map(|r| {
            let pb = r.published?;
            Some(CodeRecord {
                p: r.p as u32,
                n: pb.n,
                k: pb.k,
                d: pb.d,
                f: r.f.clone(),
                g: r.g.clone(),
                alpha: r.alpha,
                beta: r.beta,
                gamma: r.gamma,
                kd2_over_n: figure_of_merit(pb.k, pb.d, pb.n),
                sets: 0,
                repeats: 0,
                seed: 0,
                converged: false,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KCheck {
    pub label: String,
    pub n: usize,
    pub k_groebner: usize,
    pub k_linalg: usize,
    pub published: Option<Published>,
    pub ok: bool,
}

pub fn verify_k(row: &InstanceFile) -> Result<KCheck> {
    let c = row.instance()?;
    let n = c.n();
    let kg = k_twisted(&c.f, &c.g, &c.torus)?;
    let kl = build_checks(&c).k();
    let ok = kg == kl && row.published.map_or(true, |pb| pb.n == n && pb.k == kg);
    Ok(KCheck {
        label: row.label(),
        n,
        k_groebner: kg,
        k_linalg: kl,
        published: row.published,
        ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DVerdict {
    Match,
    /// The estimate is smaller than the published bound.
    Below,
    Above,
    Unpublished,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DCheck {
    pub label: String,
    pub d_upper: usize,
    pub published: Option<usize>,
    pub verdict: DVerdict,
}

pub fn verify_d(row: &InstanceFile, opts: &EstimateOptions) -> Result<DCheck> {
    let c = row.instance()?;
    let est = estimate_distance_with(&build_checks(&c), opts)?;
    let published = row.published.map(|pb| pb.d);
    let verdict = match published {
        None => DVerdict::Unpublished,
        Some(d) if est.d_upper == d => DVerdict::Match,
        Some(d) if est.d_upper < d => DVerdict::Below,
        Some(_) => DVerdict::Above,
    };
    Ok(DCheck {
        label: row.label(),
        d_upper: est.d_upper,
        published,
        verdict,
    })
}
