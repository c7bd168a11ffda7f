//! Analog front-end plus ADC bank.
//!
//! A [`Quantizer`] applies `n_q` polynomials to a received sample and feeds
//! each result to an `ell`-level threshold ADC. Component `j` of the output is
//! the number of thresholds in row `j` that the polynomial value meets or
//! exceeds, which matches the interval definition whenever the row is sorted
//! and still behaves sensibly when it is not.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{Code, Codeword};
use crate::error::{Error, Result};
use crate::polynomial::{RealPolynomial, RootList, DEFAULT_ROOT_TOL, REPEATED_ROOT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuantizerRepr", into = "QuantizerRepr")]
pub struct Quantizer {
    ell: usize,
    delta: usize,
    polys: Vec<RealPolynomial>,
    thresholds: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct QuantizerRepr {
    n_q: usize,
    ell: usize,
    delta: usize,
    polys: Vec<RealPolynomial>,
    thresholds: Vec<Vec<f64>>,
}

impl TryFrom<QuantizerRepr> for Quantizer {
    type Error = Error;

    fn try_from(r: QuantizerRepr) -> Result<Self> {
        if r.polys.len() != r.n_q {
            return Err(Error::InvalidQuantizer(format!(
                "n_q = {} but {} polynomials given",
                r.n_q,
                r.polys.len()
            )));
        }
        Quantizer::new(r.ell, r.delta, r.polys, r.thresholds)
    }
}

impl From<Quantizer> for QuantizerRepr {
    fn from(q: Quantizer) -> Self {
        QuantizerRepr {
            n_q: q.polys.len(),
            ell: q.ell,
            delta: q.delta,
            polys: q.polys,
            thresholds: q.thresholds,
        }
    }
}

impl Quantizer {
    pub fn new(
        ell: usize,
        delta: usize,
        polys: Vec<RealPolynomial>,
        thresholds: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidQuantizer(format!("ell must be >= 2, got {ell}")));
        }
        if polys.is_empty() {
            return Err(Error::InvalidQuantizer("at least one ADC is required".into()));
        }
        if ell > 10 {
            // codeword digits are rendered one character per position
            return Err(Error::InvalidQuantizer(format!("ell must be <= 10, got {ell}")));
        }
        if thresholds.len() != polys.len() {
            return Err(Error::InvalidQuantizer(format!(
                "{} threshold rows for {} polynomials",
                thresholds.len(),
                polys.len()
            )));
        }
        for (j, row) in thresholds.iter().enumerate() {
            if row.len() != ell - 1 {
                return Err(Error::InvalidQuantizer(format!(
                    "threshold row {j} has {} entries, expected {}",
                    row.len(),
                    ell - 1
                )));
            }
            if row.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidQuantizer(format!("threshold row {j} is not finite")));
            }
        }
        for (j, p) in polys.iter().enumerate() {
            if p.degree() > delta {
                return Err(Error::InvalidQuantizer(format!(
                    "polynomial {j} has degree {} > delta = {delta}",
                    p.degree()
                )));
            }
        }
        Ok(Self {
            ell,
            delta,
            polys,
            thresholds,
        })
    }

    /// One-bit quantizer with every threshold at zero.
    pub fn zero_threshold(delta: usize, polys: Vec<RealPolynomial>) -> Result<Self> {
        let rows = vec![vec![0.0]; polys.len()];
        Self::new(2, delta, polys, rows)
    }

    pub fn n_q(&self) -> usize {
        self.polys.len()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn polys(&self) -> &[RealPolynomial] {
        &self.polys
    }

    pub fn thresholds(&self) -> &[Vec<f64>] {
        &self.thresholds
    }

    pub fn quantize(&self, y: f64) -> Codeword {
        self.polys
            .iter()
            .zip(&self.thresholds)
            .map(|(p, row)| {
                let w = p.eval(y);
                row.iter().filter(|&&t| w >= t).count() as u8
            })
            .collect()
    }

    /// Sorted union of the real roots of `f_j - t(j,k)` over all `j, k`.
    pub fn transition_points(&self, tol: f64) -> Result<TransitionPoints> {
        let mut all = Vec::new();
        for (p, row) in self.polys.iter().zip(&self.thresholds) {
            for &t in row {
                let shifted = p.shifted(t);
                if shifted.is_zero() {
                    // f_j == t everywhere: the ADC output never changes.
                    continue;
                }
                all.extend(shifted.real_roots(DEFAULT_ROOT_TOL)?.into_vec());
            }
        }
        let roots = RootList::new(all);
        let repeated = roots.first_repeat(tol).is_some();
        Ok(TransitionPoints { roots, repeated })
    }

    pub fn associated_code(&self) -> Result<AssociatedCode> {
        let tp = self.transition_points(REPEATED_ROOT_TOL)?;
        let samples = sample_points(tp.roots.as_slice());
        let codewords = samples.iter().map(|&y| self.quantize(y)).collect();
        Ok(AssociatedCode {
            code: Code::new(codewords),
            boundaries: tp.roots,
            repeated_roots: tp.repeated,
        })
    }

    pub fn partition(&self) -> Result<Partition> {
        let ac = self.associated_code()?;
        let b = ac.boundaries.as_slice();
        let mut edges = Vec::with_capacity(b.len() + 2);
        edges.push(f64::NEG_INFINITY);
        edges.extend_from_slice(b);
        edges.push(f64::INFINITY);
        let intervals = edges
            .windows(2)
            .map(|w| Interval { lo: w[0], hi: w[1] })
            .collect();
        Ok(Partition {
            intervals,
            labels: ac.code.into_codewords(),
        })
    }
}

/// Interior sample points for the `m + 1` intervals cut by `m` sorted roots.
fn sample_points(roots: &[f64]) -> Vec<f64> {
    match (roots.first(), roots.last()) {
        (Some(&lo), Some(&hi)) => {
            let mut pts = Vec::with_capacity(roots.len() + 1);
            pts.push(lo - 1.0);
            pts.extend(roots.windows(2).map(|w| 0.5 * (w[0] + w[1])));
            pts.push(hi + 1.0);
            pts
        }
        _ => vec![0.0],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionPoints {
    pub roots: RootList,
    /// Two roots coincide within the requested tolerance.
    pub repeated: bool,
}

/// Quantizer outputs across the intervals cut by the transition points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociatedCode {
    pub code: Code,
    /// Transition points; `boundaries.len() == code.len() - 1`.
    pub boundaries: RootList,
    /// Set when transition points coincide, in which case consecutive
    /// codewords may repeat or differ in several positions.
    pub repeated_roots: bool,
}

impl AssociatedCode {
    pub fn code_size(&self) -> usize {
        self.code.code_size()
    }

    pub fn transition_counts(&self) -> Vec<usize> {
        self.code.transition_counts()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, y: f64) -> bool {
        y > self.lo && y < self.hi
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let end = |v: f64| if v.is_finite() { Some(v) } else { None };
        (end(self.lo), end(self.hi)).serialize(s)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: f64| {
            if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else if v == f64::INFINITY {
                "inf".to_string()
            } else {
                format!("{}", (v * 1e9).round() / 1e9)
            }
        };
        write!(f, "({}, {})", show(self.lo), show(self.hi))
    }
}

/// Ordered intervals covering the real line, each labelled with its output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub intervals: Vec<Interval>,
    pub labels: Vec<Codeword>,
}

impl Partition {
    /// Number of distinct outputs, i.e. the number of partition cells.
    pub fn size(&self) -> usize {
        Code::new(self.labels.clone()).code_size()
    }

    pub fn label_of(&self, y: f64) -> Option<&Codeword> {
        self.intervals
            .iter()
            .position(|iv| iv.contains(y))
            .map(|i| &self.labels[i])
    }
}
