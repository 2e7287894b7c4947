use crate::{Error, Result};

/// Cached summary of a sample: size, mean and centred sum of squares.
///
/// `centered_ss` is `None` for summaries produced by the fast path, where only
/// the mean is simulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientStats {
    pub n: usize,
    pub mean: f64,
    pub centered_ss: Option<f64>,
}

impl SufficientStats {
    pub fn from_mean(n: usize, mean: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        Ok(Self {
            n,
            mean,
            centered_ss: None,
        })
    }

    /// Sum of squares `sum x_i^2`, when the spread is known.
    pub fn sum_of_squares(&self) -> Option<f64> {
        self.centered_ss
            .map(|ss| ss + self.n as f64 * self.mean * self.mean)
    }
}

/// An observed sample `x_1, ..., x_n` with its summary computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    observations: Vec<f64>,
    stats: SufficientStats,
}

impl Sample {
    pub fn new(observations: Vec<f64>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::domain("a sample needs at least one observation"));
        }
        // Welford
        let mut mean = 0.0;
        let mut ss = 0.0;
        for (i, &x) in observations.iter().enumerate() {
            let delta = x - mean;
            mean += delta / (i + 1) as f64;
            ss += delta * (x - mean);
        }
        let stats = SufficientStats {
            n: observations.len(),
            mean,
            centered_ss: Some(ss),
        };
        Ok(Self {
            observations,
            stats,
        })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn stats(&self) -> &SufficientStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.stats.mean
    }
}

impl AsRef<SufficientStats> for Sample {
    fn as_ref(&self) -> &SufficientStats {
        &self.stats
    }
}
