use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::config::{parse_config, ExperimentConfig};
use super::output::{emit_convergence_csv, write_atomic};
use crate::consistency::{
    build_convergence_curves, pvalue_limit, stream_base_for, verdict, ConvergenceCurve,
    TolerancePolicy, Verdict,
};
use crate::measures::{Calibration, MeasureId};
use crate::sampler::with_workers;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "EVIDENCE_LAB_SEED";
pub const DEFAULT_OUT_DIR: &str = "evidence-lab-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Validation(_) => EXIT_VALIDATION,
        _ => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub strict: bool,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    Flag,
    Config,
    Env,
    Default,
}

/// Flag, then config, then the environment, then 0.
pub fn resolve_seed(
    flag: Option<u64>,
    config: Option<u64>,
    env: Option<&str>,
) -> Result<(u64, SeedSource)> {
    if let Some(s) = flag {
        return Ok((s, SeedSource::Flag));
    }
    if let Some(s) = config {
        return Ok((s, SeedSource::Config));
    }
    if let Some(raw) = env {
        return raw
            .trim()
            .parse()
            .map(|s| (s, SeedSource::Env))
            .map_err(|_| {
                Error::Validation(vec![format!(
                    "{SEED_ENV}: `{raw}` is not an unsigned 64-bit seed"
                )])
            });
    }
    Ok((0, SeedSource::Default))
}

/// The value `Pr(H1 | S)` should approach: the p-value limit for p-values,
/// 0 for the measures expected to be consistent.
pub fn limit_for(
    measure: MeasureId,
    calibration: &Calibration,
    w: f64,
) -> Result<(f64, &'static str)> {
    Ok(match measure {
        MeasureId::PValue => (
            pvalue_limit(calibration.alpha_s, w)?,
            "alpha_S w / (1 - w (1 - alpha_S))",
        ),
        _ => (0.0, "0"),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureVerdict {
    pub measure: MeasureId,
    pub limit: f64,
    pub limit_formula: &'static str,
    pub verdict: Verdict,
    pub n: usize,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResult {
    pub w: f64,
    pub csv: String,
    #[serde(skip)]
    pub curves: Vec<ConvergenceCurve>,
    pub verdicts: Vec<MeasureVerdict>,
}

impl ScenarioResult {
    pub fn any_inconclusive(&self) -> bool {
        self.verdicts
            .iter()
            .any(|v| v.verdict == Verdict::Inconclusive)
    }
}

fn csv_name(config: &ExperimentConfig, w: f64) -> String {
    if config.w.len() == 1 {
        "convergence.csv".into()
    } else {
        format!("convergence-w{w}.csv")
    }
}

/// Runs every scenario without touching the file system.
pub fn execute(
    config: &ExperimentConfig,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<ScenarioResult>> {
    let policy = TolerancePolicy::default();
    let run = || -> Result<Vec<ScenarioResult>> {
        config
            .setups()?
            .into_iter()
            .map(|(w, setup)| {
                let curves =
                    build_convergence_curves(&setup, &config.n_grid, config.replications, seed)?;
                let verdicts = curves
                    .iter()
                    .map(|c| {
                        let (limit, limit_formula) = limit_for(c.measure, &config.calibration, w)?;
                        let last = c.last();
                        Ok(MeasureVerdict {
                            measure: c.measure,
                            limit,
                            limit_formula,
                            verdict: verdict(c, limit, policy),
                            n: last.estimate.n,
                            estimate: last.estimate.estimate,
                            std_error: last.estimate.std_error,
                            oracle: last.oracle,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ScenarioResult {
                    w,
                    csv: csv_name(config, w),
                    curves,
                    verdicts,
                })
            })
            .collect()
    };
    match workers {
        Some(w) => with_workers(w, run),
        None => run(),
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub scenarios: Vec<ScenarioResult>,
    pub exit_code: i32,
}

/// Reads a config document, or the document embedded in a run manifest.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    if text.trim_start().starts_with('{') {
        let manifest: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
            Error::Validation(vec![format!("{}: not a run manifest: {e}", path.display())])
        })?;
        let doc = manifest["config_document"].as_str().ok_or_else(|| {
            Error::Validation(vec![format!(
                "{}: manifest has no config_document",
                path.display()
            )])
        })?;
        return parse_config(doc);
    }
    parse_config(&text)
}

fn oracle_formulas(
    config: &ExperimentConfig,
    scenarios: &[ScenarioResult],
) -> Vec<serde_json::Value> {
    let mut out = Vec::new();
    for &m in &config.measures {
        let used = scenarios
            .iter()
            .flat_map(|s| &s.curves)
            .filter(|c| c.measure == m)
            .any(|c| c.rows.iter().any(|r| r.oracle.is_some()));
        if !used {
            continue;
        }
        let (p1, p2) = match m {
            MeasureId::PValue => ("alpha_S", "1 - Phi(z_{1-alpha_S} - sqrt(n) delta / sigma)"),
            _ => (
                "1 - Phi(log k / (d sqrt(n)) + sqrt(n) d / 2), d = delta / sigma",
                "1 - Phi(log k / (d sqrt(n)) - sqrt(n) d / 2), d = delta / sigma",
            ),
        };
        let k = match m {
            MeasureId::PValue => "-",
            MeasureId::Rl | MeasureId::Erl => "k_S",
            MeasureId::Bf => "bf_threshold",
            MeasureId::PosteriorOdds => "odds_threshold * q(Theta_1) / q(Theta_2)",
        };
        out.push(json!({
            "measure": m,
            "strong_prob_h1": p1,
            "strong_prob_h2": p2,
            "threshold": k,
            "conditional": "w p1 / (w p1 + (1 - w) p2)",
        }));
    }
    out
}

fn verdict_json(
    status: &str,
    error: Option<&Error>,
    exit_code: i32,
    seed: Option<u64>,
    scenarios: &[ScenarioResult],
) -> String {
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "status": status,
        "exit_code": exit_code,
        "error": error.map(|e| e.to_string()),
        "seed": seed,
        "tolerance": "|estimate - limit| <= 3 SE at the largest n, no growing drift away from the limit",
        "scenarios": scenarios,
    });
    serde_json::to_string_pretty(&value).expect("serializable") + "\n"
}

/// Runs the experiment and writes the convergence CSV(s), `manifest.json`
/// and `verdict.json` into the output directory. Failures after the output
/// directory is known are also recorded in `verdict.json`.
pub fn run_experiment(
    config: &ExperimentConfig,
    opts: &RunOptions,
    env_seed: Option<&str>,
) -> Result<RunReport> {
    let out_dir = opts
        .out_dir
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    fs::create_dir_all(&out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let verdict_path = out_dir.join("verdict.json");
    let fail = |err: Error, seed: Option<u64>| -> Error {
        let _ = write_atomic(
            &verdict_path,
            &verdict_json("error", Some(&err), exit_code_for(&err), seed, &[]),
        );
        err
    };

    let (seed, seed_source) =
        resolve_seed(opts.seed, config.seed, env_seed).map_err(|e| fail(e, None))?;
    let started = Instant::now();
    let scenarios = execute(config, seed, opts.workers).map_err(|e| fail(e, Some(seed)))?;
    let wall_clock = started.elapsed().as_secs_f64();

    for s in &scenarios {
        emit_convergence_csv(&s.curves, &out_dir.join(&s.csv)).map_err(|e| fail(e, Some(seed)))?;
    }

    let reproduce = ExperimentConfig {
        seed: Some(seed),
        ..config.clone()
    };
    let stream_ranges: Vec<_> = config
        .n_grid
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let base = stream_base_for(i);
            json!({ "n": n, "first_stream": base, "last_stream": base + config.replications - 1 })
        })
        .collect();
    let fast_path = config
        .setups()?
        .first()
        .is_some_and(|(_, s)| s.uses_fast_path());
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "artifact": env!("CARGO_PKG_NAME"),
        "artifact_version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "seed_source": seed_source,
        "rng": "ChaCha8, seeded from the master seed, stream id as the 64-bit stream selector",
        "config": reproduce.resolved(),
        "config_document": reproduce.to_document(),
        "stream_ranges": stream_ranges,
        "scenarios_share_streams": true,
        "fast_path": fast_path,
        "workers": opts.workers,
        "wall_clock_seconds": wall_clock,
        "tolerance_policy": {
            "se_multiplier": TolerancePolicy::default().se_multiplier,
            "std_error": "sqrt(p (1 - p) / count_S)",
        },
        "outputs": scenarios.iter().map(|s| json!({ "w": s.w, "csv": s.csv })).collect::<Vec<_>>(),
        "oracle_formulas": oracle_formulas(config, &scenarios),
    });
    write_atomic(
        &out_dir.join("manifest.json"),
        &(serde_json::to_string_pretty(&manifest).expect("serializable") + "\n"),
    )
    .map_err(|e| fail(e, Some(seed)))?;

    let inconclusive = scenarios.iter().any(ScenarioResult::any_inconclusive);
    let exit_code = if opts.strict && inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    write_atomic(
        &verdict_path,
        &verdict_json("ok", None, exit_code, Some(seed), &scenarios),
    )?;
    Ok(RunReport {
        out_dir,
        seed,
        scenarios,
        exit_code,
    })
}
