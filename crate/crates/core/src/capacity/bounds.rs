//! Closed-form output counts and high-SNR capacities.

use serde::Serialize;

use crate::code::{search_max_code, MAX_SEARCH_TRANSITIONS};

fn pow_sat(base: usize, exp: usize) -> u64 {
    (base as u64).checked_pow(exp as u32).unwrap_or(u64::MAX)
}

/// Bounds on the number of distinct quantizer outputs.
///
/// With `m = (ell-1) * delta * n_q`, even `delta` gives
/// `lower = upper = min(ell^n_q, m)`; odd `delta` gives
/// `lower = min(ell^n_q, m)` and `upper = min(ell^n_q, m + 1)`.
pub fn gamma_bounds(n_q: usize, ell: usize, delta: usize) -> (u64, u64) {
    let space = pow_sat(ell, n_q);
    let m = ((ell - 1) * delta * n_q) as u64;
    let lower = space.min(m);
    let upper = if delta.is_multiple_of(2) { lower } else { space.min(m + 1) };
    (lower, upper)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HighSnrCapacity {
    Exact { gamma: u64, bits: f64 },
    Bounds { lower: u64, upper: u64, lower_bits: f64, upper_bits: f64 },
}

impl HighSnrCapacity {
    pub fn exact_bits(&self) -> Option<f64> {
        match self {
            HighSnrCapacity::Exact { bits, .. } => Some(*bits),
            HighSnrCapacity::Bounds { .. } => None,
        }
    }
}

/// `log2(Gamma)`: exact for one-bit ADCs with even degree, otherwise from the
/// exhaustive code search when it is small enough, otherwise the bound pair.
pub fn high_snr_capacity(n_q: usize, ell: usize, delta: usize) -> HighSnrCapacity {
    let (lower, upper) = gamma_bounds(n_q, ell, delta);
    if ell == 2 && delta.is_multiple_of(2) {
        return HighSnrCapacity::Exact {
            gamma: lower,
            bits: (lower as f64).log2(),
        };
    }
    if (ell - 1) * delta * n_q <= MAX_SEARCH_TRANSITIONS {
        if let Ok(r) = search_max_code(n_q, ell, delta) {
            return HighSnrCapacity::Exact {
                gamma: r.gamma as u64,
                bits: (r.gamma as f64).log2(),
            };
        }
    }
    HighSnrCapacity::Bounds {
        lower,
        upper,
        lower_bits: (lower as f64).log2(),
        upper_bits: (upper as f64).log2(),
    }
}

/// Output counts `(lower, upper)` used for rate curves. One-bit ADCs use the
/// closed-form bounds; multi-level ADCs use the exact search value when it
/// is small enough and the closed-form cap otherwise.
pub fn rate_gammas(n_q: usize, ell: usize, delta: usize) -> (u64, u64) {
    if ell > 2 && (ell - 1) * delta * n_q <= MAX_SEARCH_TRANSITIONS {
        if let Ok(r) = search_max_code(n_q, ell, delta) {
            return (r.gamma as u64, r.gamma as u64);
        }
    }
    gamma_bounds(n_q, ell, delta)
}
