//! Experiment front-end: configuration, reports and the work behind each
//! `quantcap` subcommand. Every function here returns data; printing and
//! exit codes are left to the binary.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::capacity::{
    gamma_bounds, high_snr_capacity, rate_curve, write_rate_csv, BaOptions, HighSnrCapacity,
    RateCurveParams, RateRow, ThresholdForm,
};
use crate::code::{search_max_code, synthesize_quantizer, validate_properties, Code, PropertyReport};
use crate::error::{Error, Result};
use crate::polynomial::RootList;
use crate::quantizer::{Partition, Quantizer};

fn default_h() -> f64 {
    1.0
}
fn default_input_step() -> f64 {
    0.1
}
fn default_input_range() -> f64 {
    4.0
}
fn default_threshold_step() -> f64 {
    0.1
}
fn default_threshold_range() -> f64 {
    3.0
}

/// A rate-curve experiment, stored as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_q: usize,
    pub ell: usize,
    pub delta: usize,
    #[serde(alias = "snr_db_list")]
    pub snr_db: Vec<f64>,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_input_step")]
    pub input_step: f64,
    #[serde(default = "default_input_range")]
    pub input_range: f64,
    #[serde(default = "default_threshold_step")]
    pub threshold_step: f64,
    #[serde(default = "default_threshold_range")]
    pub threshold_range: f64,
    #[serde(default)]
    pub form: ThresholdForm,
    #[serde(default)]
    pub ba: BaOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(n_q: usize, ell: usize, delta: usize, snr_db: Vec<f64>) -> Self {
        Self {
            n_q,
            ell,
            delta,
            snr_db,
            h: default_h(),
            input_step: default_input_step(),
            input_range: default_input_range(),
            threshold_step: default_threshold_step(),
            threshold_range: default_threshold_range(),
            form: ThresholdForm::default(),
            ba: BaOptions::default(),
            out: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn params(&self) -> RateCurveParams {
        RateCurveParams {
            n_q: self.n_q,
            ell: self.ell,
            delta: self.delta,
            h: self.h,
            snr_db: self.snr_db.clone(),
            input_step: self.input_step,
            input_range: self.input_range,
            threshold_step: self.threshold_step,
            threshold_range: self.threshold_range,
            form: self.form,
            ba: self.ba,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()
    }
}

/// Inclusive SNR range `start, start + step, ..., <= stop`.
pub fn snr_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(Error::InvalidConfig(format!("bad snr range {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

// ---------------------------------------------------------------- example

pub const GOLDEN_ROOTS: [f64; 8] = [-6.0, -5.0, -3.0, -2.0, 0.0, 1.0, 2.0, 3.0];
pub const GOLDEN_CODE: &str = "22,21,20,10,00,10,20,21,22";
pub const GOLDEN_SIZE: usize = 5;
const GOLDEN_ROOT_TOL: f64 = 1e-8;

/// Two quadratics `y^2 + 2y` and `y^2 + 3y` behind ternary ADCs with
/// thresholds `{3, 0}` and `{10, 18}`.
pub fn golden_quantizer() -> Quantizer {
    use crate::polynomial::RealPolynomial;
    Quantizer::new(
        3,
        2,
        vec![
            RealPolynomial::new(vec![0.0, 2.0, 1.0]),
            RealPolynomial::new(vec![0.0, 3.0, 1.0]),
        ],
        vec![vec![3.0, 0.0], vec![10.0, 18.0]],
    )
    .expect("golden quantizer is well formed")
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub roots: RootList,
    pub partition: Partition,
    pub code: Code,
    pub code_size: usize,
    pub high_snr_bits: f64,
    pub mismatches: Vec<String>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// `Err(GoldenMismatch)` listing every mismatch.
    pub fn check(&self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::GoldenMismatch(self.mismatches.join("; ")))
        }
    }
}

/// Runs a quantizer through root finding, partitioning and code extraction,
/// comparing against the golden constants.
pub fn example_report_for(q: &Quantizer) -> Result<ExampleReport> {
    let ac = q.associated_code()?;
    let partition = q.partition()?;
    let code_size = ac.code_size();
    let mut mismatches = Vec::new();

    let roots = ac.boundaries.as_slice();
    let roots_ok = roots.len() == GOLDEN_ROOTS.len()
        && roots
            .iter()
            .zip(GOLDEN_ROOTS)
            .all(|(a, b)| (a - b).abs() <= GOLDEN_ROOT_TOL);
    if !roots_ok {
        mismatches.push(format!("roots {roots:?} != {GOLDEN_ROOTS:?}"));
    }
    let golden = Code::parse_list(GOLDEN_CODE).expect("golden code parses");
    if ac.code != golden {
        mismatches.push(format!("code {} != {GOLDEN_CODE}", ac.code));
    }
    if code_size != GOLDEN_SIZE || partition.size() != GOLDEN_SIZE {
        mismatches.push(format!(
            "|C| = {code_size}, |P| = {}, expected {GOLDEN_SIZE}",
            partition.size()
        ));
    }
    Ok(ExampleReport {
        roots: ac.boundaries,
        partition,
        code: ac.code,
        code_size,
        high_snr_bits: (code_size as f64).log2(),
        mismatches,
    })
}

pub fn example_report() -> Result<ExampleReport> {
    example_report_for(&golden_quantizer())
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roots: Vec<String> = self.roots.as_slice().iter().map(|r| format!("{r:.6}")).collect();
        writeln!(f, "roots      {}", roots.join(" "))?;
        writeln!(f, "partition")?;
        for (iv, lab) in self.partition.intervals.iter().zip(&self.partition.labels) {
            writeln!(f, "  {iv:<16} {lab}")?;
        }
        writeln!(f, "code       {}", self.code)?;
        writeln!(f, "|C|        {}", self.code_size)?;
        writeln!(f, "high-SNR   {:.4} bits", self.high_snr_bits)?;
        if self.passed() {
            write!(f, "golden     ok")
        } else {
            write!(f, "golden     MISMATCH: {}", self.mismatches.join("; "))
        }
    }
}

// ------------------------------------------------------------ code-search

#[derive(Debug, Clone, Serialize)]
pub struct CodeSearchReport {
    pub n_q: usize,
    pub ell: usize,
    pub delta: usize,
    pub gamma: usize,
    pub witness: Code,
    pub bound_lower: u64,
    pub bound_upper: u64,
    pub high_snr: HighSnrCapacity,
    pub nodes: u64,
    pub properties: PropertyReport,
}

/// Exhaustive search for the largest admissible code, plus the closed-form
/// bounds. Fails if the witness is not admissible.
pub fn code_search_report(n_q: usize, ell: usize, delta: usize) -> Result<CodeSearchReport> {
    let r = search_max_code(n_q, ell, delta)?;
    let properties = validate_properties(&r.witness, ell, delta, n_q);
    if !properties.all_pass() {
        return Err(Error::InvalidQuantizer(format!(
            "search witness {} fails validation",
            r.witness
        )));
    }
    let (bound_lower, bound_upper) = gamma_bounds(n_q, ell, delta);
    Ok(CodeSearchReport {
        n_q,
        ell,
        delta,
        gamma: r.gamma,
        witness: r.witness,
        bound_lower,
        bound_upper,
        high_snr: high_snr_capacity(n_q, ell, delta),
        nodes: r.nodes,
        properties,
    })
}

impl fmt::Display for CodeSearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(n_q, ell, delta) = ({}, {}, {})", self.n_q, self.ell, self.delta)?;
        writeln!(f, "gamma      {}", self.gamma)?;
        writeln!(f, "bounds     [{}, {}]", self.bound_lower, self.bound_upper)?;
        writeln!(f, "witness    {}", self.witness)?;
        write!(f, "nodes      {}", self.nodes)
    }
}

// ------------------------------------------------------------- rate-curve

/// Computes the curve and writes CSV to `out`.
pub fn run_rate_curve<W: Write>(config: &ExperimentConfig, out: W) -> Result<Vec<RateRow>> {
    config.validate()?;
    let rows = rate_curve(&config.params())?;
    write_rate_csv(&rows, out)?;
    Ok(rows)
}

// --------------------------------------------------------------- validate

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub n_q: usize,
    pub ell: usize,
    pub delta: usize,
    pub code: Code,
    pub boundaries: RootList,
    pub transition_counts: Vec<usize>,
    pub code_size: usize,
    pub properties: PropertyReport,
    pub warnings: Vec<String>,
}

impl ValidateReport {
    pub fn passed(&self) -> bool {
        self.properties.all_pass()
    }
}

pub fn validate_quantizer(q: &Quantizer) -> Result<ValidateReport> {
    let ac = q.associated_code()?;
    let properties = validate_properties(&ac.code, q.ell(), q.delta(), q.n_q());
    let mut warnings = Vec::new();
    if ac.repeated_roots {
        warnings.push("RepeatedRoots: two transition points coincide".to_string());
    }
    Ok(ValidateReport {
        n_q: q.n_q(),
        ell: q.ell(),
        delta: q.delta(),
        transition_counts: ac.transition_counts(),
        code_size: ac.code_size(),
        code: ac.code,
        boundaries: ac.boundaries,
        properties,
        warnings,
    })
}

pub fn validate_file(path: &Path) -> Result<ValidateReport> {
    let text = fs::read_to_string(path)?;
    let q: Quantizer = serde_json::from_str(&text)?;
    validate_quantizer(&q)
}

impl fmt::Display for ValidateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(n_q, ell, delta) = ({}, {}, {})", self.n_q, self.ell, self.delta)?;
        writeln!(f, "code       {}", self.code)?;
        writeln!(f, "|C|        {}", self.code_size)?;
        writeln!(f, "kappa      {:?}", self.transition_counts)?;
        for (i, item) in self.properties.items().iter().enumerate() {
            let status = if item.pass { "pass" } else { "FAIL" };
            match item.counterexample {
                Some(at) => writeln!(f, "item {}     {status} (at {at})", i + 1)?,
                None => writeln!(f, "item {}     {status}", i + 1)?,
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning    {w}")?;
        }
        Ok(())
    }
}

// ------------------------------------------------------------------ synth

/// Parses a comma-separated code and comma-separated roots, then builds the
/// quantizer with that code.
pub fn synth_from_strings(code: &str, roots: &str) -> Result<Quantizer> {
    let code = Code::parse_list(code).map_err(Error::Parse)?;
    let roots: Vec<f64> = roots
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("root {s:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    if roots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedInput);
    }
    synthesize_quantizer(&code, &RootList::new(roots))
}
