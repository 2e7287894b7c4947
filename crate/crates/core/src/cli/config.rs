//! Flat `key = value` experiment documents.
//!
//! One assignment per line, `#` starts a comment, lists are comma separated.
//! See the README for the full key table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::measures::{
    Calibration, EvidenceEvaluator, MeasureId, PriorWithinRegions, WithinRegion,
};
use crate::model::{GaussianMeanModel, HypothesisPair, ParameterRegion};
use crate::sampler::{ReplicationSetup, TwoLevelPrior};
use crate::{Error, Result};

const KNOWN_KEYS: &[&str] = &[
    "model.variance",
    "hypotheses.kind",
    "hypotheses.theta1",
    "hypotheses.delta",
    "hypotheses.theta1_region",
    "hypotheses.theta2_region",
    "prior.w",
    "prior.within1",
    "prior.within2",
    "bayes.q_theta1",
    "bayes.within1",
    "bayes.within2",
    "measures",
    "calibration.alpha_s",
    "calibration.k_s",
    "calibration.bf_threshold",
    "calibration.odds_threshold",
    "run.n_grid",
    "run.replications",
    "run.seed",
    "run.fast_path",
    "output.dir",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypothesesSpec {
    Point {
        theta1: f64,
        delta: f64,
    },
    Interval {
        theta1: ParameterRegion,
        theta2: ParameterRegion,
    },
}

/// Distribution of `theta` within one hypothesis region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WithinSpec {
    /// At the point hypothesis itself.
    Point,
    PointAt(f64),
    TruncatedNormal {
        mean: f64,
        sd: f64,
    },
    Uniform,
}

impl WithinSpec {
    fn parse(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "point" {
            return Ok(Self::Point);
        }
        if s == "uniform" {
            return Ok(Self::Uniform);
        }
        let args = |prefix: &str| -> Option<std::result::Result<Vec<f64>, String>> {
            let inner = s
                .strip_prefix(prefix)?
                .trim()
                .strip_prefix('(')?
                .strip_suffix(')')?;
            Some(parse_float_list(inner))
        };
        if let Some(v) = args("point") {
            return match v?.as_slice() {
                &[x] => Ok(Self::PointAt(x)),
                _ => Err("point(x) takes one argument".into()),
            };
        }
        if let Some(v) = args("truncated_normal") {
            return match v?.as_slice() {
                &[mean, sd] => Ok(Self::TruncatedNormal { mean, sd }),
                _ => Err("truncated_normal(mean, sd) takes two arguments".into()),
            };
        }
        Err(format!(
            "`{s}` is not one of point, point(x), truncated_normal(mean, sd), uniform"
        ))
    }

    fn build(&self, region: ParameterRegion) -> Result<WithinRegion> {
        match *self {
            Self::Point => match region {
                ParameterRegion::Point(p) => WithinRegion::point_mass(p),
                _ => Err(Error::domain(format!(
                    "`point` needs a point region, got {region}"
                ))),
            },
            Self::PointAt(x) => {
                if region.contains(x) {
                    WithinRegion::point_mass(x)
                } else {
                    Err(Error::domain(format!("point({x}) lies outside {region}")))
                }
            }
            Self::TruncatedNormal { mean, sd } => WithinRegion::truncated_normal(mean, sd, region),
            Self::Uniform => WithinRegion::uniform(region),
        }
    }
}

impl std::fmt::Display for WithinSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Point => write!(f, "point"),
            Self::PointAt(x) => write!(f, "point({x})"),
            Self::TruncatedNormal { mean, sd } => write!(f, "truncated_normal({mean}, {sd})"),
            Self::Uniform => write!(f, "uniform"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesSpec {
    pub q_theta1: f64,
    pub within1: WithinSpec,
    pub within2: WithinSpec,
}

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub variance: f64,
    pub hypotheses: HypothesesSpec,
    /// One scenario per weight.
    pub w: Vec<f64>,
    pub within1: WithinSpec,
    pub within2: WithinSpec,
    pub bayes: BayesSpec,
    pub measures: Vec<MeasureId>,
    pub calibration: Calibration,
    pub n_grid: Vec<usize>,
    pub replications: u64,
    pub seed: Option<u64>,
    pub fast_path: bool,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn hypothesis_pair(&self) -> Result<HypothesisPair> {
        match self.hypotheses {
            HypothesesSpec::Point { theta1, delta } => HypothesisPair::points(theta1, delta),
            HypothesesSpec::Interval { theta1, theta2 } => HypothesisPair::new(theta1, theta2),
        }
    }

    fn uses_bayes(&self) -> bool {
        self.measures
            .iter()
            .any(|m| matches!(m, MeasureId::Bf | MeasureId::PosteriorOdds))
    }

    /// One replication setup per configured weight, in `w` order.
    pub fn setups(&self) -> Result<Vec<(f64, ReplicationSetup)>> {
        let model = GaussianMeanModel::new(self.variance)?;
        let h = self.hypothesis_pair()?;
        let q1 = self.within1.build(*h.theta1())?;
        let q2 = self.within2.build(*h.theta2())?;
        let bayes = if self.uses_bayes() {
            Some(PriorWithinRegions::new(
                self.bayes.within1.build(*h.theta1())?,
                self.bayes.within2.build(*h.theta2())?,
                self.bayes.q_theta1,
            )?)
        } else {
            None
        };
        let evaluator = EvidenceEvaluator::new(&self.measures, self.calibration, bayes)?;
        self.w
            .iter()
            .map(|&w| {
                let prior = TwoLevelPrior::new(w, q1, q2)?;
                let setup = ReplicationSetup::new(model, prior, h, evaluator.clone())?
                    .with_fast_path(self.fast_path);
                Ok((w, setup))
            })
            .collect()
    }

    /// The resolved configuration as `key -> value`, every key present.
    pub fn resolved(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("model.variance", self.variance.to_string());
        match self.hypotheses {
            HypothesesSpec::Point { theta1, delta } => {
                m.insert("hypotheses.kind", "point".into());
                m.insert("hypotheses.theta1", theta1.to_string());
                m.insert("hypotheses.delta", delta.to_string());
            }
            HypothesesSpec::Interval { theta1, theta2 } => {
                m.insert("hypotheses.kind", "interval".into());
                m.insert("hypotheses.theta1_region", theta1.to_string());
                m.insert("hypotheses.theta2_region", theta2.to_string());
            }
        }
        m.insert("prior.w", join(&self.w));
        m.insert("prior.within1", self.within1.to_string());
        m.insert("prior.within2", self.within2.to_string());
        m.insert("bayes.q_theta1", self.bayes.q_theta1.to_string());
        m.insert("bayes.within1", self.bayes.within1.to_string());
        m.insert("bayes.within2", self.bayes.within2.to_string());
        m.insert(
            "measures",
            self.measures
                .iter()
                .map(|x| x.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        );
        m.insert("calibration.alpha_s", self.calibration.alpha_s.to_string());
        m.insert("calibration.k_s", self.calibration.k_s.to_string());
        m.insert(
            "calibration.bf_threshold",
            self.calibration.bf_threshold.to_string(),
        );
        m.insert(
            "calibration.odds_threshold",
            self.calibration.odds_threshold.to_string(),
        );
        m.insert("run.n_grid", join(&self.n_grid));
        m.insert("run.replications", self.replications.to_string());
        if let Some(seed) = self.seed {
            m.insert("run.seed", seed.to_string());
        }
        m.insert("run.fast_path", self.fast_path.to_string());
        if let Some(dir) = &self.output_dir {
            m.insert("output.dir", dir.display().to_string());
        }
        m
    }

    /// A document that parses back to `self`.
    pub fn to_document(&self) -> String {
        let resolved = self.resolved();
        let mut out = String::new();
        for key in KNOWN_KEYS {
            if let Some(v) = resolved.get(key) {
                let _ = writeln!(out, "{key} = {v}");
            }
        }
        out
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let v = match t {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => t
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))?,
    };
    if v.is_nan() {
        return Err("NaN is not allowed".into());
    }
    Ok(v)
}

fn parse_float_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(parse_f64).collect()
}

/// Collects raw assignments and every problem found, so the user sees all
/// of them at once.
struct Reader {
    values: BTreeMap<String, (usize, String)>,
    errors: Vec<String>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.values.remove(key)
    }

    fn get<T>(
        &mut self,
        key: &str,
        parse: impl FnOnce(&str) -> std::result::Result<T, String>,
    ) -> Option<T> {
        let (line, raw) = self.take(key)?;
        match parse(&raw) {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(format!("line {line}: {key}: {e}"));
                None
            }
        }
    }

    fn require<T>(
        &mut self,
        key: &str,
        parse: impl FnOnce(&str) -> std::result::Result<T, String>,
    ) -> Option<T> {
        if !self.values.contains_key(key) {
            self.errors.push(format!("missing required key `{key}`"));
            return None;
        }
        self.get(key, parse)
    }

    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.errors.push(msg.into());
        }
    }
}

/// Parses and validates a document, reporting every error found.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut r = Reader {
        values: BTreeMap::new(),
        errors: Vec::new(),
    };
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            r.errors.push(format!(
                "line {line_no}: expected `key = value`, got `{line}`"
            ));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            r.errors
                .push(format!("line {line_no}: unknown key `{key}`"));
        } else if r.values.contains_key(key) {
            r.errors
                .push(format!("line {line_no}: duplicate key `{key}`"));
        } else {
            r.values
                .insert(key.to_string(), (line_no, value.to_string()));
        }
    }

    let variance = r.get("model.variance", parse_f64).unwrap_or(1.0);
    r.check(
        variance > 0.0 && variance.is_finite(),
        "model.variance: variance > 0",
    );

    let kind = r.get("hypotheses.kind", |s| match s {
        "point" | "interval" => Ok(s.to_string()),
        _ => Err(format!("`{s}` is not one of point, interval")),
    });
    let kind = kind.as_deref().unwrap_or("point").to_string();
    let hypotheses = if kind == "point" {
        for key in ["hypotheses.theta1_region", "hypotheses.theta2_region"] {
            if r.take(key).is_some() {
                r.errors
                    .push(format!("{key}: only valid with hypotheses.kind = interval"));
            }
        }
        let theta1 = r.get("hypotheses.theta1", parse_f64).unwrap_or(0.0);
        let delta = r.get("hypotheses.delta", parse_f64).unwrap_or(1.0);
        r.check(theta1.is_finite(), "hypotheses.theta1: theta1 finite");
        r.check(
            delta > 0.0 && delta.is_finite(),
            "hypotheses.delta: delta > 0",
        );
        Some(HypothesesSpec::Point { theta1, delta })
    } else {
        for key in ["hypotheses.theta1", "hypotheses.delta"] {
            if r.take(key).is_some() {
                r.errors
                    .push(format!("{key}: only valid with hypotheses.kind = point"));
            }
        }
        let region = |s: &str| s.parse::<ParameterRegion>().map_err(|e| e.to_string());
        let t1 = r.require("hypotheses.theta1_region", region);
        let t2 = r.require("hypotheses.theta2_region", region);
        match (t1, t2) {
            (Some(theta1), Some(theta2)) => {
                if let Err(e) = HypothesisPair::new(theta1, theta2) {
                    r.errors.push(format!("hypotheses: {e}"));
                }
                Some(HypothesesSpec::Interval { theta1, theta2 })
            }
            _ => None,
        }
    };

    let w = r
        .get("prior.w", parse_float_list)
        .unwrap_or_else(|| vec![0.5]);
    for &x in &w {
        r.check(x > 0.0 && x < 1.0, format!("prior.w: w ∈ (0,1), got {x}"));
    }
    let default_within = if kind == "point" {
        WithinSpec::Point
    } else {
        WithinSpec::TruncatedNormal { mean: 0.0, sd: 1.0 }
    };
    let within1 = r
        .get("prior.within1", WithinSpec::parse)
        .unwrap_or(default_within);
    let within2 = r
        .get("prior.within2", WithinSpec::parse)
        .unwrap_or(default_within);
    let q_theta1 = r.get("bayes.q_theta1", parse_f64).unwrap_or(0.5);
    r.check(
        q_theta1 > 0.0 && q_theta1 < 1.0,
        format!("bayes.q_theta1: q(Theta_1) ∈ (0,1), got {q_theta1}"),
    );
    let bayes = BayesSpec {
        q_theta1,
        within1: r.get("bayes.within1", WithinSpec::parse).unwrap_or(within1),
        within2: r.get("bayes.within2", WithinSpec::parse).unwrap_or(within2),
    };

    let measures = r
        .require("measures", |s| {
            s.split(',')
                .map(|m| m.trim().parse::<MeasureId>().map_err(|e| e.to_string()))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .unwrap_or_default();
    let defaults = Calibration::default();
    let calibration = Calibration {
        alpha_s: r
            .get("calibration.alpha_s", parse_f64)
            .unwrap_or(defaults.alpha_s),
        k_s: r.get("calibration.k_s", parse_f64).unwrap_or(defaults.k_s),
        bf_threshold: r
            .get("calibration.bf_threshold", parse_f64)
            .unwrap_or(defaults.bf_threshold),
        odds_threshold: r
            .get("calibration.odds_threshold", parse_f64)
            .unwrap_or(defaults.odds_threshold),
    };
    let alpha = calibration.alpha_s;
    r.check(
        alpha > 0.0 && alpha < 1.0,
        format!("calibration.alpha_s: alpha_S ∈ (0,1), got {alpha}"),
    );
    let k = calibration.k_s;
    r.check(
        k > 1.0 && k.is_finite(),
        format!("calibration.k_s: k_S > 1, got {k}"),
    );
    let b = calibration.bf_threshold;
    r.check(
        b > 1.0 && b.is_finite(),
        format!("calibration.bf_threshold: threshold > 1, got {b}"),
    );
    let o = calibration.odds_threshold;
    r.check(
        o > 1.0 && o.is_finite(),
        format!("calibration.odds_threshold: threshold > 1, got {o}"),
    );

    let n_grid = r
        .require("run.n_grid", |s| {
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| format!("`{}` is not a sample size", x.trim()))
                })
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .unwrap_or_default();
    r.check(n_grid.iter().all(|&n| n >= 1), "run.n_grid: every n ≥ 1");
    r.check(
        n_grid.windows(2).all(|p| p[0] < p[1]),
        "run.n_grid: n_grid strictly increasing",
    );
    let replications = r.require("run.replications", |s| {
        s.parse::<u64>()
            .map_err(|_| format!("`{s}` is not a replication count"))
    });
    if let Some(m) = replications {
        r.check(m >= 1, "run.replications: M ≥ 1");
        r.check(m < 1 << 40, "run.replications: M < 2^40");
    }
    let seed = r.get("run.seed", |s| {
        s.parse::<u64>()
            .map_err(|_| format!("`{s}` is not an unsigned 64-bit seed"))
    });
    let fast_path = r
        .get("run.fast_path", |s| match s {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(format!("`{s}` is not true or false")),
        })
        .unwrap_or(true);
    let output_dir = r.get("output.dir", |s| Ok::<_, String>(PathBuf::from(s)));

    if !r.errors.is_empty() {
        return Err(Error::Validation(r.errors));
    }
    let config = ExperimentConfig {
        variance,
        hypotheses: hypotheses.expect("no errors implies parsed"),
        w,
        within1,
        within2,
        bayes,
        measures,
        calibration,
        n_grid,
        replications: replications.expect("no errors implies parsed"),
        seed,
        fast_path,
        output_dir,
    };
    // cross-field checks: priors against regions, measures against hypotheses
    config
        .setups()
        .map_err(|e| Error::Validation(vec![e.to_string()]))?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "measures = pvalue, rl\nrun.n_grid = 16\nrun.replications = 10\n";

    fn errors(text: &str) -> Vec<String> {
        match parse_config(text) {
            Err(Error::Validation(e)) => e,
            other => panic!("expected validation errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document_uses_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.calibration.alpha_s, 0.01);
        assert_eq!(c.calibration.k_s, 30.0);
        assert_eq!(c.w, vec![0.5]);
        assert_eq!(
            c.hypotheses,
            HypothesesSpec::Point {
                theta1: 0.0,
                delta: 1.0
            }
        );
        assert!(c.fast_path);
        assert_eq!(c.seed, None);
    }

    #[test]
    fn w_out_of_range_is_quoted() {
        let e = errors(&format!("{MINIMAL}prior.w = 1.2\n"));
        assert!(e.iter().any(|m| m.contains("w ∈ (0,1)")), "{e:?}");
    }

    #[test]
    fn all_errors_are_reported() {
        let e = errors(
            "measures = pvalue\nrun.n_grid = 64, 16\nrun.replications = 0\nprior.w = 0\ncalibration.k_s = 1\nbogus.key = 3\n",
        );
        for needle in [
            "strictly increasing",
            "M ≥ 1",
            "w ∈ (0,1)",
            "k_S > 1",
            "unknown key `bogus.key`",
        ] {
            assert!(
                e.iter().any(|m| m.contains(needle)),
                "missing {needle}: {e:?}"
            );
        }
    }

    #[test]
    fn missing_and_duplicate_keys() {
        let e = errors("measures = rl\nmeasures = rl\n");
        assert!(e.iter().any(|m| m.contains("duplicate key `measures`")));
        assert!(e
            .iter()
            .any(|m| m.contains("missing required key `run.n_grid`")));
        assert!(e
            .iter()
            .any(|m| m.contains("missing required key `run.replications`")));
    }

    #[test]
    fn unsupported_measure_is_a_validation_error() {
        let doc = "hypotheses.kind = interval\nhypotheses.theta1_region = (0, 1]\nhypotheses.theta2_region = (1, inf)\nmeasures = rl\nrun.n_grid = 4\nrun.replications = 1\n";
        assert!(matches!(parse_config(doc), Err(Error::Validation(_))));
    }

    #[test]
    fn document_round_trip() {
        let doc = "\
# composite experiment
hypotheses.kind = interval
hypotheses.theta1_region = (-inf, 0]
hypotheses.theta2_region = (0, inf)
prior.w = 0.5, 0.25
prior.within1 = truncated_normal(0, 1)
prior.within2 = truncated_normal(0.1, 0.7)
measures = erl, bf, posterior_odds
bayes.q_theta1 = 0.3
run.n_grid = 16, 64
run.replications = 1000
run.seed = 42
run.fast_path = false
output.dir = out/composite
";
        let c = parse_config(doc).unwrap();
        let again = parse_config(&c.to_document()).unwrap();
        assert_eq!(c, again);
        assert_eq!(again.to_document(), c.to_document());
    }

    #[test]
    fn within_spec_grammar() {
        assert_eq!(WithinSpec::parse("point").unwrap(), WithinSpec::Point);
        assert_eq!(
            WithinSpec::parse("point(0.25)").unwrap(),
            WithinSpec::PointAt(0.25)
        );
        assert_eq!(
            WithinSpec::parse("truncated_normal(1, 2)").unwrap(),
            WithinSpec::TruncatedNormal { mean: 1.0, sd: 2.0 }
        );
        assert!(WithinSpec::parse("normal(0, 1)").is_err());
        assert!(WithinSpec::parse("truncated_normal(1)").is_err());
    }
}
