//! Maximal-run decomposition and boxing dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setcore::FinSet;

/// Maximal runs of consecutive integers, left to right.
///
/// Serializes as a JSON array of `[lo, hi]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RunProfile {
    pub runs: Vec<(i64, i64)>,
}

impl RunProfile {
    /// Number of runs, i.e. the boxing dimension of the source set.
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Flattened endpoints `lo0, hi0, lo1, hi1, ...`.
    pub fn endpoints(&self) -> Vec<i64> {
        self.runs.iter().flat_map(|&(lo, hi)| [lo, hi]).collect()
    }

    /// Checks ordering, `lo <= hi`, and the gap of at least one missing
    /// integer between consecutive runs.
    pub fn validate(&self) -> Result<()> {
        if self.runs.is_empty() {
            return Err(Error::EmptySet);
        }
        for &(lo, hi) in &self.runs {
            if lo > hi {
                return Err(Error::InvalidRuns(format!("run ({lo},{hi}) has lo > hi")));
            }
        }
        for w in self.runs.windows(2) {
            let ((_, prev_hi), (next_lo, _)) = (w[0], w[1]);
            if (next_lo as i128) < prev_hi as i128 + 2 {
                return Err(Error::InvalidRuns(format!(
                    "runs ending at {prev_hi} and starting at {next_lo} overlap or touch"
                )));
            }
        }
        Ok(())
    }
}

pub fn runs(x: &FinSet) -> RunProfile {
    let mut out = Vec::new();
    let mut it = x.iter().copied();
    let first = it.next().expect("FinSet is nonempty");
    let (mut lo, mut hi) = (first, first);
    for e in it {
        if e == hi + 1 {
            hi = e;
        } else {
            out.push((lo, hi));
            lo = e;
            hi = e;
        }
    }
    out.push((lo, hi));
    RunProfile { runs: out }
}

/// Boxing dimension: the least number of discrete intervals covering `x`.
pub fn bdim(x: &FinSet) -> usize {
    1 + x.as_slice().windows(2).filter(|w| w[1] != w[0] + 1).count()
}

pub fn from_runs(profile: &RunProfile) -> Result<FinSet> {
    profile.validate()?;
    let total: u128 = profile
        .runs
        .iter()
        .map(|&(lo, hi)| (hi as i128 - lo as i128 + 1) as u128)
        .sum();
    if total > crate::setcore::MAX_INTERVAL_LEN as u128 {
        return Err(Error::TooLarge {
            size: total,
            limit: crate::setcore::MAX_INTERVAL_LEN as u128,
        });
    }
    let elems = profile.runs.iter().flat_map(|&(lo, hi)| lo..=hi).collect();
    Ok(FinSet::from_sorted_unchecked(elems))
}
