//! Real univariate polynomials used as analog operators.
//!
//! Coefficients are stored low-to-high (`coeffs[i]` multiplies `y^i`), so the
//! degree is `len - 1` once trailing zeros are trimmed. Real roots come from
//! the eigenvalues of the companion matrix followed by a few Newton steps.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`RealPolynomial::real_roots`].
pub const MAX_DEGREE: usize = 8;

/// Default residual tolerance for root extraction.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Two roots closer than this are reported as one repeated root.
pub const REPEATED_ROOT_TOL: f64 = 1e-7;

const IMAG_TOL: f64 = 1e-9;
// Double roots perturb into conjugate pairs of size ~sqrt(eps).
const NEAR_DOUBLE_IMAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Builds a polynomial from low-to-high coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * y + a)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * i as f64)
                .collect(),
        )
    }

    /// `self - c`, i.e. the polynomial whose roots are the level-`c` crossings.
    pub fn shifted(&self, c: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        coeffs[0] -= c;
        Self::new(coeffs)
    }

    /// Magnitude reference for residual checks at `y`: `sum |a_i| max(1,|y|)^i`.
    pub fn scale_at(&self, y: f64) -> f64 {
        let m = y.abs().max(1.0);
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &a| acc * m + a.abs())
    }

    /// Builds `leading * prod_k (y - r_k)`.
    pub fn from_roots(roots: &RootList, leading: f64) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots.as_slice() {
            // multiply by (y - r)
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= r * a;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    /// All real roots (with multiplicity), sorted non-decreasing.
    ///
    /// Each reported root `r` satisfies `|p(r)| <= tol * scale_at(r)`.
    pub fn real_roots(&self, tol: f64) -> Result<RootList> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = self.degree();
        if d > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(d));
        }
        let mut roots = match d {
            0 => Vec::new(),
            1 => vec![-self.coeffs[0] / self.coeffs[1]],
            _ => self.companion_real_roots(tol),
        };
        for r in roots.iter_mut() {
            *r = self.polish(*r);
        }
        roots.retain(|&r| self.eval(r).abs() <= tol * self.scale_at(r));
        Ok(RootList::new(roots))
    }

    fn companion_real_roots(&self, tol: f64) -> Vec<f64> {
        let d = self.degree();
        let lead = self.leading();
        let mut m = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            m[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        let eig = m.complex_eigenvalues();
        eig.iter()
            .filter_map(|z| {
                let bound = 1.0 + z.re.abs();
                // a near-double root may split into a conjugate pair
                let real = z.im.abs() <= IMAG_TOL * bound
                    || (z.im.abs() <= NEAR_DOUBLE_IMAG_TOL * bound
                        && self.eval(z.re).abs() <= tol * self.scale_at(z.re));
                real.then_some(z.re)
            })
            .collect()
    }

    fn polish(&self, mut x: f64) -> f64 {
        let dp = self.derivative();
        let mut best = self.eval(x).abs();
        for _ in 0..32 {
            let slope = dp.eval(x);
            if slope == 0.0 || best == 0.0 {
                break;
            }
            let cand = x - self.eval(x) / slope;
            let res = self.eval(cand).abs();
            if !cand.is_finite() || res >= best {
                break;
            }
            x = cand;
            best = res;
        }
        x
    }
}

impl From<Vec<f64>> for RealPolynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<RealPolynomial> for Vec<f64> {
    fn from(p: RealPolynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Display for RealPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.coeffs.iter().enumerate().rev() {
            if a == 0.0 {
                continue;
            }
            let sign = if a < 0.0 { "-" } else { "+" };
            if first {
                if a < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = a.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1.0 {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "y")?;
                    } else {
                        write!(f, "y^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sorted (non-decreasing) list of real numbers; multiplicity by repetition.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct RootList(Vec<f64>);

impl RootList {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self(values)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    /// Index of the first root that lies within `tol` of its predecessor.
    pub fn first_repeat(&self, tol: f64) -> Option<usize> {
        self.0.windows(2).position(|w| w[1] - w[0] <= tol).map(|i| i + 1)
    }

    pub fn merge(&self, other: &RootList) -> RootList {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        RootList::new(v)
    }
}

impl From<Vec<f64>> for RootList {
    fn from(v: Vec<f64>) -> Self {
        Self::new(v)
    }
}

impl From<RootList> for Vec<f64> {
    fn from(r: RootList) -> Self {
        r.0
    }
}
