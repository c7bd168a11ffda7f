//! Standard normal probabilities.

use libm::erfc;
use std::f64::consts::SQRT_2;

/// `P(N <= z)` for standard normal `N`.
pub fn normal_cdf(z: f64) -> f64 {
    if z == f64::INFINITY {
        1.0
    } else if z == f64::NEG_INFINITY {
        0.0
    } else {
        0.5 * erfc(-z / SQRT_2)
    }
}

/// `P(N > z)`.
pub fn normal_sf(z: f64) -> f64 {
    normal_cdf(-z)
}

/// `P(a < N <= b)`, evaluated on whichever tail keeps precision.
pub fn normal_interval(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if a > 0.0 {
        (normal_sf(a) - normal_sf(b)).max(0.0)
    } else {
        (normal_cdf(b) - normal_cdf(a)).max(0.0)
    }
}
