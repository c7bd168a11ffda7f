//! Brute-force search over symmetric threshold vectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use std::sync::atomic::{AtomicU64, Ordering};

use super::blahut::{blahut_arimoto_pruned, BaOptions};
use super::channel::{channel_matrix, effective_thresholds_to_outputs};
use super::{CapacityResult, ChannelSpec, InputGrid};
use crate::error::{Error, Result};
use crate::polynomial::RootList;

/// How `gamma` outputs are produced from thresholds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdForm {
    /// `gamma - 1` thresholds, one output per interval.
    #[default]
    Separate,
    /// `gamma` thresholds, the two unbounded intervals share an output.
    MergedEnds,
}

impl ThresholdForm {
    pub fn threshold_count(self, gamma: usize) -> usize {
        match self {
            ThresholdForm::Separate => gamma - 1,
            ThresholdForm::MergedEnds => gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    /// Spacing of the positive threshold grid.
    pub step: f64,
    /// Largest positive threshold.
    pub range: f64,
    pub form: ThresholdForm,
    pub ba: BaOptions,
}

impl ThresholdSearch {
    /// Grid scaled to the received amplitude `|h| sqrt(P)`.
    pub fn for_channel(spec: &ChannelSpec, step_factor: f64, range_factor: f64) -> Self {
        let a = spec.h.abs() * spec.amplitude();
        Self {
            step: step_factor * a,
            range: range_factor * a,
            form: ThresholdForm::Separate,
            ba: BaOptions::default(),
        }
    }
}

/// All strictly increasing vectors of length `len` equal to their own
/// negation, with positive entries drawn from `step, 2 step, ..., <= range`.
/// Odd lengths include zero. Vectors are produced in lexicographic order of
/// their positive halves.
pub fn symmetric_threshold_vectors(len: usize, step: f64, range: f64) -> Vec<RootList> {
    let k = len / 2;
    let with_zero = len % 2 == 1;
    let n = (range / step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (1..=n).map(|i| i as f64 * step).collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        let pos: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();
        let mut t: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
        if with_zero {
            t.push(0.0);
        }
        t.extend_from_slice(&pos);
        out.push(RootList::new(t));
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Margin below the running best at which candidates are abandoned.
const PRUNE_SLACK_BITS: f64 = 1e-9;

/// Best rate over symmetric threshold vectors for `gamma` outputs. Ties go to
/// the lexicographically first vector, independent of evaluation order.
pub fn optimize_thresholds(
    spec: &ChannelSpec,
    gamma: usize,
    grid: &InputGrid,
    search: &ThresholdSearch,
) -> Result<CapacityResult> {
    if gamma < 2 {
        return Err(Error::InvalidConfig(format!("gamma must be >= 2, got {gamma}")));
    }
    let candidates =
        symmetric_threshold_vectors(search.form.threshold_count(gamma), search.step, search.range);
    if candidates.is_empty() {
        return Err(Error::EmptySearchSpace);
    }
    // Best rate so far, as f64 bits (non-negative, so integer order agrees).
    // A candidate is dropped once its capacity upper bound falls below it;
    // such a candidate cannot win, so the argmax does not depend on the
    // order in which candidates finish.
    let floor = AtomicU64::new(0f64.to_bits());
    let results: Vec<Result<Option<CapacityResult>>> = candidates
        .into_par_iter()
        .map(|t| {
            let labeling = effective_thresholds_to_outputs(&t, gamma)?;
            let w = channel_matrix(spec, &grid.points, &t, &labeling)?;
            let below = f64::from_bits(floor.load(Ordering::Relaxed)) - PRUNE_SLACK_BITS;
            let r = blahut_arimoto_pruned(&w, &grid.points, spec.power, &search.ba, below)?;
            Ok(r.map(|mut r| {
                floor.fetch_max(r.rate_bits.to_bits(), Ordering::Relaxed);
                r.thresholds = t;
                r
            }))
        })
        .collect();
    let mut best: Option<CapacityResult> = None;
    for r in results {
        if let Some(r) = r? {
            if best.as_ref().is_none_or(|b| r.rate_bits > b.rate_bits) {
                best = Some(r);
            }
        }
    }
    best.ok_or(Error::EmptySearchSpace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_symmetric_vectors() {
        let v = symmetric_threshold_vectors(1, 0.5, 1.0);
        assert_eq!(v, vec![RootList::new(vec![0.0])]);
        let v = symmetric_threshold_vectors(2, 0.5, 1.0);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].as_slice(), &[-0.5, 0.5]);
        let v = symmetric_threshold_vectors(5, 1.0, 4.0);
        assert_eq!(v.len(), 6); // C(4, 2)
        assert_eq!(v[0].as_slice(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        for t in &v {
            assert!(t.is_strictly_increasing());
            let s = t.as_slice();
            for (a, b) in s.iter().zip(s.iter().rev()) {
                assert_eq!(*a, -*b);
            }
        }
        assert!(symmetric_threshold_vectors(4, 1.0, 1.0).is_empty());
    }

    #[test]
    fn gamma_two_uses_a_single_zero_threshold() {
        let spec = ChannelSpec::new(1.0, 1.0);
        let grid = InputGrid::for_channel(&spec, 0.1, 4.0);
        let search = ThresholdSearch::for_channel(&spec, 0.1, 3.0);
        let r = optimize_thresholds(&spec, 2, &grid, &search).unwrap();
        assert_eq!(r.thresholds.as_slice(), &[0.0]);
        assert!(r.average_power() <= spec.power + 1e-9);
    }

    #[test]
    fn empty_and_invalid() {
        let spec = ChannelSpec::new(1.0, 1.0);
        let grid = InputGrid::for_channel(&spec, 0.1, 4.0);
        let mut search = ThresholdSearch::for_channel(&spec, 0.1, 3.0);
        search.range = 0.05;
        assert!(matches!(
            optimize_thresholds(&spec, 4, &grid, &search),
            Err(Error::EmptySearchSpace)
        ));
        assert!(optimize_thresholds(&spec, 1, &grid, &search).is_err());
    }
}
