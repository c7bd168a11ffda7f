//! Output labelling of threshold intervals and the transition matrix.

use serde::{Deserialize, Serialize};

use super::gaussian::normal_interval;
use super::ChannelSpec;
use crate::error::{Error, Result};
use crate::polynomial::RootList;

/// Output label of each of the `len(t) + 1` intervals cut by sorted
/// thresholds `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputLabeling {
    pub labels: Vec<usize>,
    pub n_outputs: usize,
}

impl OutputLabeling {
    /// Every interval gets its own label.
    pub fn separate(n_intervals: usize) -> Self {
        Self {
            labels: (0..n_intervals).collect(),
            n_outputs: n_intervals,
        }
    }

    /// The two unbounded intervals share label 0.
    pub fn merged_ends(n_intervals: usize) -> Self {
        let mut labels: Vec<usize> = (0..n_intervals).collect();
        if n_intervals > 1 {
            labels[n_intervals - 1] = 0;
        }
        Self {
            labels,
            n_outputs: n_intervals.saturating_sub(1).max(1),
        }
    }
}

/// Labelling for `gamma` outputs. With `gamma - 1` thresholds every interval
/// is its own output; with `gamma` thresholds the two unbounded intervals
/// merge into output 0.
pub fn effective_thresholds_to_outputs(t: &RootList, gamma: usize) -> Result<OutputLabeling> {
    if !t.is_strictly_increasing() {
        return Err(Error::UnsortedThresholds);
    }
    let n = t.len();
    if gamma >= 1 && n + 1 == gamma {
        Ok(OutputLabeling::separate(n + 1))
    } else if gamma >= 2 && n == gamma {
        Ok(OutputLabeling::merged_ends(n + 1))
    } else {
        Err(Error::LengthMismatch {
            expected: gamma.saturating_sub(1),
            got: n,
        })
    }
}

/// Row-stochastic transition matrix from input points to output labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelMatrix {
    n_inputs: usize,
    n_outputs: usize,
    probs: Vec<f64>,
}

impl ChannelMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_inputs = rows.len();
        let n_outputs = rows.first().map_or(0, Vec::len);
        if n_inputs == 0 || n_outputs == 0 {
            return Err(Error::NonStochasticMatrix("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n_outputs) {
            return Err(Error::NonStochasticMatrix("ragged rows".into()));
        }
        Ok(Self {
            n_inputs,
            n_outputs,
            probs: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.probs[i * self.n_outputs..(i + 1) * self.n_outputs]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.n_outputs)
    }

    pub fn get(&self, i: usize, m: usize) -> f64 {
        self.probs[i * self.n_outputs + m]
    }

    /// Largest deviation of a row sum from one.
    pub fn max_row_error(&self) -> f64 {
        self.rows()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn check_stochastic(&self, tol: f64) -> Result<()> {
        if let Some(bad) = self.probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::NonStochasticMatrix(format!("entry {bad} outside [0, 1]")));
        }
        let err = self.max_row_error();
        if err > tol {
            return Err(Error::NonStochasticMatrix(format!("row sum off by {err:e}")));
        }
        Ok(())
    }

    /// Copy without the columns that are zero for every input.
    pub fn without_dead_outputs(&self) -> ChannelMatrix {
        let live: Vec<usize> = (0..self.n_outputs)
            .filter(|&m| (0..self.n_inputs).any(|i| self.get(i, m) > 0.0))
            .collect();
        if live.len() == self.n_outputs {
            return self.clone();
        }
        let probs = (0..self.n_inputs)
            .flat_map(|i| live.iter().map(move |&m| (i, m)))
            .map(|(i, m)| self.get(i, m))
            .collect();
        ChannelMatrix {
            n_inputs: self.n_inputs,
            n_outputs: live.len(),
            probs,
        }
    }
}

/// Entry `(i, m)` is `P(Q(h x_i + N) = m)`: the Gaussian mass of every
/// interval labelled `m`, shifted by `h x_i`.
pub fn channel_matrix(
    spec: &ChannelSpec,
    inputs: &[f64],
    t: &RootList,
    labeling: &OutputLabeling,
) -> Result<ChannelMatrix> {
    let n_int = t.len() + 1;
    if labeling.labels.len() != n_int {
        return Err(Error::LengthMismatch {
            expected: n_int,
            got: labeling.labels.len(),
        });
    }
    if inputs.is_empty() {
        return Err(Error::NonStochasticMatrix("no inputs".into()));
    }
    let mut edges = Vec::with_capacity(n_int + 1);
    edges.push(f64::NEG_INFINITY);
    edges.extend_from_slice(t.as_slice());
    edges.push(f64::INFINITY);

    let n_out = labeling.n_outputs;
    let mut probs = vec![0.0; inputs.len() * n_out];
    for (i, &x) in inputs.iter().enumerate() {
        let mu = spec.h * x;
        let row = &mut probs[i * n_out..(i + 1) * n_out];
        for (k, w) in edges.windows(2).enumerate() {
            row[labeling.labels[k]] += normal_interval(w[0] - mu, w[1] - mu);
        }
    }
    Ok(ChannelMatrix {
        n_inputs: inputs.len(),
        n_outputs: n_out,
        probs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[f64]) -> RootList {
        RootList::new(v.to_vec())
    }

    #[test]
    fn labelling_forms() {
        let l = effective_thresholds_to_outputs(&t(&[-1.0, 0.0, 1.0, 2.0]), 4).unwrap();
        assert_eq!(l.labels, vec![0, 1, 2, 3, 0]);
        assert_eq!(l.n_outputs, 4);
        let l = effective_thresholds_to_outputs(&t(&[0.0]), 2).unwrap();
        assert_eq!(l.labels, vec![0, 1]);
        let l = effective_thresholds_to_outputs(&t(&[-1.0, 0.0, 1.0]), 4).unwrap();
        assert_eq!(l.n_outputs, 4);
        assert_eq!(l.labels, vec![0, 1, 2, 3]);
    }

    #[test]
    fn labelling_errors() {
        assert!(matches!(
            effective_thresholds_to_outputs(&RootList::from(vec![0.0, 0.0]), 3),
            Err(Error::UnsortedThresholds)
        ));
        assert!(matches!(
            effective_thresholds_to_outputs(&t(&[0.0]), 5),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn one_bit_rows() {
        let spec = ChannelSpec::new(1.0, 1.0);
        let lab = OutputLabeling::separate(2);
        let m = channel_matrix(&spec, &[0.0, 1.0], &t(&[0.0]), &lab).unwrap();
        assert!((m.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((m.get(1, 0) - 0.158_655_253_931_457).abs() < 1e-12);
        assert!((m.get(1, 1) - 0.841_344_746_068_543).abs() < 1e-12);
    }

    #[test]
    fn merged_ends_add_both_tails() {
        let spec = ChannelSpec::new(1.0, 1.0);
        let lab = OutputLabeling::merged_ends(3);
        let m = channel_matrix(&spec, &[0.0], &t(&[-1.0, 1.0]), &lab).unwrap();
        assert!((m.get(0, 0) - 0.317_310_507_862_914).abs() < 1e-12);
        assert!(m.max_row_error() < 1e-12);
    }

    #[test]
    fn dead_columns_are_dropped() {
        let m = ChannelMatrix::from_rows(vec![vec![0.5, 0.0, 0.5], vec![1.0, 0.0, 0.0]]).unwrap();
        let d = m.without_dead_outputs();
        assert_eq!(d.n_outputs(), 2);
        assert_eq!(d.row(1), &[1.0, 0.0]);
    }
}
