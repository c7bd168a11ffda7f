//! Achievable rate versus SNR.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::blahut::BaOptions;
use super::bounds::rate_gammas;
use super::thresholds::{optimize_thresholds, ThresholdForm, ThresholdSearch};
use super::{CapacityResult, ChannelSpec, InputGrid};
use crate::error::{Error, Result};
use crate::polynomial::RootList;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurveParams {
    pub n_q: usize,
    pub ell: usize,
    pub delta: usize,
    pub h: f64,
    pub snr_db: Vec<f64>,
    /// Input grid step as a multiple of `sqrt(P)`.
    pub input_step: f64,
    /// Input grid half-width as a multiple of `sqrt(P)`.
    pub input_range: f64,
    /// Threshold grid step as a multiple of `|h| sqrt(P)`.
    pub threshold_step: f64,
    /// Largest threshold as a multiple of `|h| sqrt(P)`.
    pub threshold_range: f64,
    pub form: ThresholdForm,
    pub ba: BaOptions,
}

impl RateCurveParams {
    pub fn new(n_q: usize, ell: usize, delta: usize, snr_db: Vec<f64>) -> Self {
        Self {
            n_q,
            ell,
            delta,
            h: 1.0,
            snr_db,
            input_step: 0.1,
            input_range: 4.0,
            threshold_step: 0.1,
            threshold_range: 3.0,
            form: ThresholdForm::Separate,
            ba: BaOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n_q == 0 || self.delta == 0 {
            return bad("n_q and delta must be >= 1");
        }
        if self.ell < 2 {
            return bad("ell must be >= 2");
        }
        if self.snr_db.is_empty() {
            return bad("snr list is empty");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("snr values must be finite");
        }
        if self.h == 0.0 || !self.h.is_finite() {
            return bad("h must be finite and non-zero");
        }
        for (name, v) in [
            ("input_step", self.input_step),
            ("input_range", self.input_range),
            ("threshold_step", self.threshold_step),
            ("threshold_range", self.threshold_range),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(&format!("{name} must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub snr_db: f64,
    pub gamma_lower: u64,
    pub gamma_upper: u64,
    pub lower: CapacityResult,
    pub upper: CapacityResult,
}

fn rate_for_gamma(
    spec: &ChannelSpec,
    gamma: u64,
    params: &RateCurveParams,
) -> Result<CapacityResult> {
    let grid = InputGrid::for_channel(spec, params.input_step, params.input_range);
    if gamma < 2 {
        // a single output carries no information
        let mut dist = vec![0.0; grid.points.len()];
        dist[grid.points.len() / 2] = 1.0;
        return Ok(CapacityResult {
            rate_bits: 0.0,
            input_points: grid.points,
            input_distribution: dist,
            thresholds: RootList::empty(),
            multiplier: 0.0,
            iterations: 0,
            converged: true,
            gap_bits: 0.0,
        });
    }
    let mut search = ThresholdSearch::for_channel(spec, params.threshold_step, params.threshold_range);
    search.form = params.form;
    search.ba = params.ba;
    optimize_thresholds(spec, gamma as usize, &grid, &search)
}

/// One row per SNR point, sorted by SNR.
pub fn rate_curve(params: &RateCurveParams) -> Result<Vec<RateRow>> {
    params.validate()?;
    let (g_lo, g_hi) = rate_gammas(params.n_q, params.ell, params.delta);
    let mut snrs = params.snr_db.clone();
    snrs.sort_by(f64::total_cmp);
    snrs
        .par_iter()
        .map(|&snr| {
            let spec = ChannelSpec::from_snr_db(params.h, snr);
            let upper = rate_for_gamma(&spec, g_hi, params)?;
            let lower = if g_lo == g_hi {
                upper.clone()
            } else {
                rate_for_gamma(&spec, g_lo, params)?
            };
            Ok(RateRow {
                snr_db: snr,
                gamma_lower: g_lo,
                gamma_upper: g_hi,
                lower,
                upper,
            })
        })
        .collect()
}

/// CSV with header `snr_db,rate_bits_lower,rate_bits_upper,gamma,thresholds_json`.
/// `gamma` and `thresholds_json` describe the upper curve.
pub fn write_rate_csv<W: Write>(rows: &[RateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["snr_db", "rate_bits_lower", "rate_bits_upper", "gamma", "thresholds_json"])?;
    for r in rows {
        w.write_record([
            r.snr_db.to_string(),
            r.lower.rate_bits.to_string(),
            r.upper.rate_bits.to_string(),
            r.gamma_upper.to_string(),
            serde_json::to_string(&r.upper.thresholds)?,
        ])?;
    }
    w.flush()?;
    Ok(())
}
