use serde::Serialize;

use crate::measures::MeasureId;
use crate::sampler::{Region, ReplicationRecord};
use crate::{Error, Result};

/// Monte Carlo estimate of `Pr(H1 | evidence in S)` at one sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyEstimate {
    pub measure: MeasureId,
    pub n: usize,
    pub replications: u64,
    pub count_s: u64,
    pub count_s_and_h1: u64,
    /// `None` when no replication landed in `S`.
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
}

impl ConsistencyEstimate {
    pub fn from_counts(
        measure: MeasureId,
        n: usize,
        replications: u64,
        count_s: u64,
        count_s_and_h1: u64,
    ) -> Self {
        debug_assert!(count_s_and_h1 <= count_s && count_s <= replications);
        let (estimate, std_error) = if count_s == 0 {
            (None, None)
        } else {
            let p = count_s_and_h1 as f64 / count_s as f64;
            (Some(p), Some((p * (1.0 - p) / count_s as f64).sqrt()))
        };
        Self {
            measure,
            n,
            replications,
            count_s,
            count_s_and_h1,
            estimate,
            std_error,
        }
    }

    pub fn defined(&self) -> bool {
        self.estimate.is_some()
    }
}

/// Streaming counts for several measures; merging is associative so rayon
/// can fold chunks in any grouping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub replications: u64,
    pub count_s: Vec<u64>,
    pub count_s_and_h1: Vec<u64>,
}

impl Tally {
    pub fn new(measures: usize) -> Self {
        Self {
            replications: 0,
            count_s: vec![0; measures],
            count_s_and_h1: vec![0; measures],
        }
    }

    /// Counts one record; evidence must be in the tally's measure order.
    pub fn observe(&mut self, record: &ReplicationRecord) {
        self.replications += 1;
        let in_h1 = record.true_region == Region::Theta1;
        for (j, ev) in record.evidence.iter().enumerate() {
            if ev.in_strong_region {
                self.count_s[j] += 1;
                if in_h1 {
                    self.count_s_and_h1[j] += 1;
                }
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.replications += other.replications;
        for (a, b) in self.count_s.iter_mut().zip(other.count_s) {
            *a += b;
        }
        for (a, b) in self.count_s_and_h1.iter_mut().zip(other.count_s_and_h1) {
            *a += b;
        }
        self
    }

    pub fn estimate(&self, j: usize, measure: MeasureId, n: usize) -> ConsistencyEstimate {
        ConsistencyEstimate::from_counts(
            measure,
            n,
            self.replications,
            self.count_s[j],
            self.count_s_and_h1[j],
        )
    }
}

/// `#{S and H1} / #{S}` over records sharing one sample size.
pub fn estimate_conditional_prob(
    records: &[ReplicationRecord],
    measure: MeasureId,
) -> Result<ConsistencyEstimate> {
    let first = records
        .first()
        .ok_or_else(|| Error::domain("no replication records"))?;
    let n = first.n;
    let (mut count_s, mut count_s_and_h1) = (0u64, 0u64);
    for r in records {
        if r.n != n {
            return Err(Error::domain(format!(
                "records mix sample sizes {n} and {}",
                r.n
            )));
        }
        let ev = r
            .evidence
            .iter()
            .find(|e| e.measure == measure)
            .ok_or_else(|| {
                Error::domain(format!(
                    "record {} has no {measure} value",
                    r.replication_id
                ))
            })?;
        if ev.in_strong_region {
            count_s += 1;
            if r.true_region == Region::Theta1 {
                count_s_and_h1 += 1;
            }
        }
    }
    Ok(ConsistencyEstimate::from_counts(
        measure,
        n,
        records.len() as u64,
        count_s,
        count_s_and_h1,
    ))
}
