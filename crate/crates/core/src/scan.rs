//! Seeded ensemble scans: sample maps or generators, evaluate inequality
//! checks, and emit CSV rows plus a JSON summary. Identical configurations
//! produce byte-identical CSV output, whether evaluated serially or in
//! parallel: every sample derives its own sub-seed and rows are keyed by
//! sample index.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{MapError, Result};
use crate::generators;
use crate::positivity::{self, EnsembleConfig, EnsembleId};
use crate::report::{BoundReport, InequalityId};
use crate::rng::{sub_seed, SplitMix64};
use crate::spectral;
use crate::transition::{self, OrthonormalBasis};

/// One evaluated inequality on one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub sample_id: u64,
    pub d: usize,
    pub inequality_id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    /// Sub-seed of the sample, sufficient to replay it alone.
    pub seed: u64,
}

impl ScanRow {
    fn from_report(sample_id: u64, d: usize, seed: u64, report: &BoundReport) -> Self {
        Self {
            sample_id,
            d,
            inequality_id: report.inequality_id,
            lhs: report.lhs,
            rhs: report.rhs,
            slack: report.slack,
            satisfied: report.satisfied,
            seed,
        }
    }
}

/// Aggregate over all rows of one inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalitySummary {
    pub inequality_id: InequalityId,
    pub count: usize,
    pub violations: usize,
    pub min_slack: f64,
}

/// Full scan output. The summary is recomputable from the rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    pub ensemble: EnsembleId,
    pub d: usize,
    pub count: usize,
    pub base_seed: u64,
    pub rng_algorithm: String,
    pub rows: Vec<ScanRow>,
    pub summaries: Vec<InequalitySummary>,
    pub wall_time_ms: u128,
}

impl ScanResult {
    /// CSV with a fixed header; floats printed shortest-round-trip, so the
    /// bytes are a pure function of the row values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample_id,d,inequality_id,lhs,rhs,slack,satisfied,seed\n");
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                row.sample_id,
                row.d,
                row.inequality_id,
                row.lhs,
                row.rhs,
                row.slack,
                row.satisfied,
                row.seed
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    /// JSON summary carrying the replay information.
    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&serde_json::json!({
            "ensemble": self.ensemble,
            "d": self.d,
            "count": self.count,
            "seed": self.base_seed,
            "rng_algorithm": self.rng_algorithm,
            "rows": self.rows.len(),
            "wall_time_ms": self.wall_time_ms,
            "summaries": self.summaries,
        }))
        .expect("summary serialization cannot fail")
    }

    /// Recomputes the per-inequality summaries from the rows.
    pub fn recompute_summaries(rows: &[ScanRow]) -> Vec<InequalitySummary> {
        let mut out: Vec<InequalitySummary> = Vec::new();
        for id in InequalityId::ALL {
            let selected: Vec<&ScanRow> = rows.iter().filter(|r| r.inequality_id == id).collect();
            if selected.is_empty() {
                continue;
            }
            out.push(InequalitySummary {
                inequality_id: id,
                count: selected.len(),
                violations: selected.iter().filter(|r| !r.satisfied).count(),
                min_slack: selected
                    .iter()
                    .map(|r| r.slack)
                    .fold(f64::INFINITY, f64::min),
            });
        }
        out
    }

    pub fn summary_for(&self, id: InequalityId) -> Option<&InequalitySummary> {
        self.summaries.iter().find(|s| s.inequality_id == id)
    }
}

/// Inequalities evaluable on map ensembles vs. generator ensembles.
fn compatible(ensemble: EnsembleId, id: InequalityId) -> bool {
    match ensemble {
        EnsembleId::Gksl => matches!(id, InequalityId::GenBound | InequalityId::RelaxRate),
        EnsembleId::CpGinibre => {
            matches!(id, InequalityId::TrivialBound | InequalityId::Conjecture)
        }
        _ => matches!(
            id,
            InequalityId::MapBound
                | InequalityId::TrivialBound
                | InequalityId::LemmaTg
                | InequalityId::Conjecture
        ),
    }
}

/// Default inequality set per ensemble.
pub fn default_inequalities(ensemble: EnsembleId) -> Vec<InequalityId> {
    match ensemble {
        EnsembleId::Gksl => vec![InequalityId::GenBound, InequalityId::RelaxRate],
        EnsembleId::CpGinibre => vec![InequalityId::Conjecture],
        _ => vec![
            InequalityId::MapBound,
            InequalityId::TrivialBound,
            InequalityId::LemmaTg,
        ],
    }
}

fn evaluate_sample(
    config: &EnsembleConfig,
    inequalities: &[InequalityId],
    index: u64,
    tol: &Tolerances,
) -> Result<Vec<ScanRow>> {
    let seed = sub_seed(config.seed, index);
    let mut rows = Vec::with_capacity(inequalities.len());
    match config.ensemble {
        EnsembleId::Gksl => {
            let gen = generators::sample_gksl(config.dim, config.rank, seed)?;
            for &id in inequalities {
                let report = match id {
                    InequalityId::GenBound => generators::check_generator_bound(&gen, tol)?,
                    InequalityId::RelaxRate => generators::relaxation_bound(&gen, tol)?,
                    other => {
                        return Err(MapError::InvalidParameter(format!(
                            "inequality {other} is not defined on generator ensembles"
                        )))
                    }
                };
                rows.push(ScanRow::from_report(index, config.dim, seed, &report));
            }
        }
        _ => {
            let map = positivity::sample(config, index, tol)?;
            for &id in inequalities {
                let report = match id {
                    InequalityId::MapBound => spectral::check_map_bound(&map, tol)?,
                    InequalityId::TrivialBound => spectral::check_trivial_bound(&map, tol)?,
                    InequalityId::Conjecture => spectral::check_conjecture(&map, tol)?,
                    InequalityId::LemmaTg => {
                        // one seeded random basis per sample
                        let mut rng = SplitMix64::new(sub_seed(seed, 0xBA515));
                        let basis = OrthonormalBasis::haar(config.dim, &mut rng);
                        transition::check_lemma_tg(&map, &basis, tol)?
                    }
                    other => {
                        return Err(MapError::InvalidParameter(format!(
                            "inequality {other} is not defined on map ensembles"
                        )))
                    }
                };
                rows.push(ScanRow::from_report(index, config.dim, seed, &report));
            }
        }
    }
    Ok(rows)
}

/// Runs a scan. Samples are evaluated in parallel (or serially when
/// `parallel` is false; the rows are identical either way) and ordered by
/// sample index.
pub fn run_scan_with_mode(
    config: &EnsembleConfig,
    inequalities: &[InequalityId],
    tol: &Tolerances,
    parallel: bool,
) -> Result<ScanResult> {
    config.validate()?;
    if inequalities.is_empty() {
        return Err(MapError::InvalidParameter(
            "no inequalities requested".into(),
        ));
    }
    for &id in inequalities {
        if !compatible(config.ensemble, id) {
            return Err(MapError::InvalidParameter(format!(
                "inequality {id} cannot be evaluated on ensemble {}",
                config.ensemble.as_str()
            )));
        }
    }
    let start = Instant::now();
    let indices: Vec<u64> = (0..config.count as u64).collect();
    let nested: Result<Vec<Vec<ScanRow>>> = if parallel {
        indices
            .par_iter()
            .map(|&i| evaluate_sample(config, inequalities, i, tol))
            .collect()
    } else {
        indices
            .iter()
            .map(|&i| evaluate_sample(config, inequalities, i, tol))
            .collect()
    };
    let mut rows: Vec<ScanRow> = nested?.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.sample_id, r.inequality_id.as_str()));
    let summaries = ScanResult::recompute_summaries(&rows);
    Ok(ScanResult {
        ensemble: config.ensemble,
        d: config.dim,
        count: config.count,
        base_seed: config.seed,
        rng_algorithm: crate::rng::RNG_ALGORITHM.to_string(),
        rows,
        summaries,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

pub fn run_scan(
    config: &EnsembleConfig,
    inequalities: &[InequalityId],
    tol: &Tolerances,
) -> Result<ScanResult> {
    run_scan_with_mode(config, inequalities, tol, true)
}
