//! Experiment execution.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use convlab_core::convergence::{success_curve, CurvePoint, SuccessCurve};
use convlab_core::model::{loss_of, outputs_along, validate_problem, InferenceMethod, ValidationReport, World};
use convlab_core::{check_mode, rational, EmpiricalProblem, Mode, ModeParams, SuccessCriterion, Verdict};
use serde::{Deserialize, Serialize};

use crate::catalog::{build_method, build_problem};
use crate::config::LoadedConfig;
use crate::error::{CliError, CliResult};
use crate::output::{curve_csv, write_file};

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub horizon: Option<u64>,
    pub trials: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut LoadedConfig) {
        let e = &mut cfg.experiment;
        if let Some(s) = self.seed {
            e.seed = s;
        }
        if let Some(h) = self.horizon {
            e.mode.horizon = h;
        }
        if let Some(t) = self.trials {
            e.engine.trials = t;
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_digest: String,
    pub seed: u64,
    pub version: String,
    pub verdicts: Vec<serde_json::Value>,
    pub curves: Vec<PathBuf>,
    pub duration_ms: u64,
    pub timestamp: String,
}

/// A resolved experiment, ready to evaluate.
pub struct Experiment {
    pub problem: EmpiricalProblem,
    pub method: Arc<dyn InferenceMethod>,
    pub params: ModeParams,
}

impl Experiment {
    pub fn from_config(cfg: &LoadedConfig) -> CliResult<Self> {
        let problem = build_problem(cfg)?;
        let method = build_method(cfg, &problem)?;
        let m = &cfg.experiment.mode;
        let to_rational = |x: Option<f64>, key: &str| {
            x.map(rational::from_f64)
                .transpose()
                .map_err(|e| cfg.error_at(key, e.to_string()))
        };
        let params = ModeParams {
            mode: m.mode,
            delta: to_rational(m.delta, "delta")?,
            epsilon: to_rational(m.epsilon, "epsilon")?,
            horizon: m.horizon,
            worlds: m.worlds.clone(),
            stages: m.stages.clone(),
            budget: cfg.experiment.engine.budget(),
            seed: cfg.experiment.seed,
        };
        params.validate().map_err(|e| cfg.error_at("mode", e.to_string()))?;
        if cfg.experiment.engine.trials == 0 {
            return Err(cfg.error_at("trials", "trials must be at least 1"));
        }
        if let Some(ids) = &params.worlds {
            for id in ids {
                if problem.world(id).is_err() {
                    return Err(cfg.error_at(id, format!("unknown world {id:?} in {}", problem.name())));
                }
            }
        }
        Ok(Self { problem, method, params })
    }

    fn worlds(&self) -> Vec<&World> {
        match &self.params.worlds {
            Some(ids) => ids.iter().filter_map(|id| self.problem.world(id).ok()).collect(),
            None => self.problem.worlds().worlds().iter().collect(),
        }
    }

    /// Mode I has no probabilities; its curve records the success
    /// indicator along each world's branch.
    fn indicator_curve(&self) -> CliResult<SuccessCurve> {
        let stages = self.params.stages.stages(self.params.horizon);
        let mut points = Vec::new();
        for w in self.worlds() {
            let outputs = outputs_along(self.method.as_ref(), w, self.params.horizon as usize)?;
            for &n in &stages {
                let hit = SuccessCriterion::Exact.met(&loss_of(&self.problem, &outputs[n as usize], w)?);
                let v = i64::from(hit);
                points.push(CurvePoint {
                    world_id: w.id().to_string(),
                    n,
                    estimate: v as f64,
                    stderr: 0.0,
                    exact: true,
                    exact_value: Some(rational::int(v)),
                    bound: None,
                });
            }
        }
        Ok(SuccessCurve {
            problem: self.problem.name().to_string(),
            method: self.method.name().to_string(),
            criterion: SuccessCriterion::Exact.to_string(),
            points,
        })
    }

    pub fn curve(&self) -> CliResult<SuccessCurve> {
        if self.params.mode == Mode::I {
            return self.indicator_curve();
        }
        let stages = self.params.stages.stages(self.params.horizon);
        Ok(success_curve(
            &self.problem,
            self.method.as_ref(),
            &self.worlds(),
            &self.params.criterion(),
            &stages,
            &self.params.budget,
            self.params.seed,
        )?)
    }

    pub fn verdict(&self) -> CliResult<(Verdict, SuccessCurve)> {
        let mut verdict = check_mode(&self.problem, self.method.as_ref(), &self.params)?;
        let curve = match verdict.curve.take() {
            Some(c) => c,
            None => self.indicator_curve()?,
        };
        Ok((verdict, curve))
    }

    pub fn validate(&self) -> ValidationReport {
        let worlds: Vec<World> = self.worlds().into_iter().cloned().collect();
        validate_problem(&self.problem, &worlds)
    }
}

fn default_path(cfg: &LoadedConfig, suffix: &str) -> PathBuf {
    let stem = cfg.path.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
    let dir = cfg.path.parent().unwrap_or(Path::new("."));
    dir.join(format!("{stem}.{suffix}"))
}

/// Where `run` writes its curve and record.
pub fn output_paths(cfg: &LoadedConfig, out: Option<&Path>) -> (PathBuf, PathBuf) {
    if let Some(dir) = out {
        return (dir.join("curve.csv"), dir.join("record.json"));
    }
    let o = &cfg.experiment.output;
    (
        o.curve.clone().unwrap_or_else(|| default_path(cfg, "curve.csv")),
        o.record.clone().unwrap_or_else(|| default_path(cfg, "record.json")),
    )
}

/// Executes the experiment, writes the curve CSV and the run record, and
/// returns the record.
pub fn run(cfg: &LoadedConfig, out: Option<&Path>) -> CliResult<RunRecord> {
    let started = Instant::now();
    let exp = Experiment::from_config(cfg)?;
    let (verdict, curve) = exp.verdict()?;
    let (curve_path, record_path) = output_paths(cfg, out);
    write_file(&curve_path, &curve_csv(&curve))?;
    let record = RunRecord {
        config_digest: cfg.digest(),
        seed: cfg.experiment.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        verdicts: vec![serde_json::to_value(&verdict).map_err(|e| CliError::Runtime(e.to_string()))?],
        curves: vec![curve_path],
        duration_ms: started.elapsed().as_millis() as u64,
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    let json = serde_json::to_string_pretty(&record).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(&record_path, &(json + "\n"))?;
    Ok(record)
}

/// Result of checking a run record against its config.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub digest_matches: bool,
    pub verdicts_match: bool,
    /// `None` when the recorded curve file is missing.
    pub curve_matches: Option<bool>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.digest_matches && self.verdicts_match && self.curve_matches != Some(false)
    }
}

/// Re-hashes the config, re-runs the experiment, and compares the result
/// with `record`.
pub fn verify_record(cfg: &LoadedConfig, record: &RunRecord) -> CliResult<Verification> {
    let exp = Experiment::from_config(cfg)?;
    let (verdict, curve) = exp.verdict()?;
    let fresh = serde_json::to_value(&verdict).map_err(|e| CliError::Runtime(e.to_string()))?;
    let curve_matches = record
        .curves
        .first()
        .and_then(|p| std::fs::read_to_string(p).ok())
        .map(|old| old == curve_csv(&curve));
    Ok(Verification {
        digest_matches: record.config_digest == cfg.digest(),
        verdicts_match: record.verdicts.first() == Some(&fresh),
        curve_matches,
    })
}
