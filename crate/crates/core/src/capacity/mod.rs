//! Numerical capacity of the quantized AWGN channel `Y = hX + N`, `N ~ N(0,1)`,
//! under an average power budget `E[X^2] <= P`.
//!
//! The pipeline discretises the input on a symmetric grid, maps sorted
//! thresholds to output labels, builds the transition matrix with the
//! Gaussian CDF, maximises mutual information with a power-constrained
//! Blahut-Arimoto iteration, and searches symmetric threshold vectors.

mod bounds;
mod blahut;
mod channel;
mod curve;
pub mod gaussian;
mod thresholds;

pub use blahut::{
    blahut_arimoto_constrained, blahut_arimoto_fixed, blahut_arimoto_traced, mutual_information_bits, BaOptions,
    FixedMultiplierRun,
};
pub use bounds::{gamma_bounds, high_snr_capacity, rate_gammas, HighSnrCapacity};
pub use channel::{channel_matrix, effective_thresholds_to_outputs, ChannelMatrix, OutputLabeling};
pub use curve::{rate_curve, write_rate_csv, RateCurveParams, RateRow};
pub use thresholds::{optimize_thresholds, symmetric_threshold_vectors, ThresholdForm, ThresholdSearch};

use serde::{Deserialize, Serialize};

use crate::polynomial::RootList;

/// Channel gain and power budget; the noise variance is fixed at one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub h: f64,
    pub power: f64,
}

impl ChannelSpec {
    pub fn new(h: f64, power: f64) -> Self {
        Self { h, power }
    }

    /// Budget that yields `snr_db` at gain `h`.
    pub fn from_snr_db(h: f64, snr_db: f64) -> Self {
        Self {
            h,
            power: 10f64.powf(snr_db / 10.0) / (h * h),
        }
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * (self.h * self.h * self.power).log10()
    }

    /// Standard deviation scale of the transmitted signal, `sqrt(P)`.
    pub fn amplitude(&self) -> f64 {
        self.power.sqrt()
    }
}

/// Symmetric, evenly spaced candidate input locations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputGrid {
    pub points: Vec<f64>,
    pub step: f64,
}

impl InputGrid {
    /// Points `k * step` for `|k * step| <= half_range`.
    pub fn symmetric(step: f64, half_range: f64) -> Self {
        assert!(step > 0.0 && half_range >= 0.0);
        let k = (half_range / step + 1e-9).floor() as i64;
        let points = (-k..=k).map(|i| i as f64 * step).collect();
        Self { points, step }
    }

    /// Grid scaled to the power budget: step `step_factor * sqrt(P)` over
    /// `[-range_factor * sqrt(P), range_factor * sqrt(P)]`.
    pub fn for_channel(spec: &ChannelSpec, step_factor: f64, range_factor: f64) -> Self {
        let a = spec.amplitude();
        Self::symmetric(step_factor * a, range_factor * a)
    }
}

/// Outcome of a capacity computation. Rates are in bits per channel use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub rate_bits: f64,
    pub input_points: Vec<f64>,
    pub input_distribution: Vec<f64>,
    pub thresholds: RootList,
    /// Lagrange multiplier of the power constraint (nats per unit power).
    pub multiplier: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Duality gap of the final iterate, in bits.
    pub gap_bits: f64,
}

impl CapacityResult {
    pub fn average_power(&self) -> f64 {
        self.input_points
            .iter()
            .zip(&self.input_distribution)
            .map(|(x, p)| p * x * x)
            .sum()
    }
}
