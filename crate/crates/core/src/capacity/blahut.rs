//! Blahut-Arimoto with an average input cost.
//!
//! For a fixed multiplier `s >= 0` the iteration
//! `p_i <- p_i exp(D_i - s c_i) / Z`, with `D_i` the divergence of row `i`
//! from the output marginal, increases `I(p) - s E_p[c]` monotonically. The
//! duality gap `max_i (D_i - s c_i) - sum_i p_i (D_i - s c_i)` bounds the
//! distance to the optimum.
//!
//! The constrained solver re-solves the multiplier at every step so that
//! each iterate meets the cost budget, or sets it to zero when the budget is
//! slack.

use std::f64::consts::LN_2;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::channel::ChannelMatrix;
use super::CapacityResult;
use crate::error::{Error, Result};
use crate::polynomial::RootList;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaOptions {
    /// Stop when the duality gap falls below this many bits.
    pub tol_bits: f64,
    pub max_iter: usize,
    /// Upper end of the initial multiplier bracket, doubled while infeasible.
    pub s_max: f64,
    /// Relative bracket width at which the multiplier solve stops.
    pub s_tol: f64,
}

impl Default for BaOptions {
    fn default() -> Self {
        Self {
            tol_bits: 1e-7,
            max_iter: 10_000,
            s_max: 64.0,
            s_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedMultiplierRun {
    pub distribution: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub gap_bits: f64,
    /// `I(p) - s E_p[c]` in bits at the returned distribution.
    pub objective_bits: f64,
}

/// Mutual information in bits of input distribution `p` over channel `w`.
pub fn mutual_information_bits(w: &ChannelMatrix, p: &[f64]) -> f64 {
    let q = output_marginal(w, p);
    let mut d = vec![0.0; w.n_inputs()];
    divergences(w, &q, &mut d);
    p.iter().zip(&d).map(|(pi, di)| pi * di).sum::<f64>() / LN_2
}

fn output_marginal(w: &ChannelMatrix, p: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; w.n_outputs()];
    for (pi, row) in p.iter().zip(w.rows()) {
        if *pi == 0.0 {
            continue;
        }
        for (qm, wm) in q.iter_mut().zip(row) {
            *qm += pi * wm;
        }
    }
    q
}

/// `D_i = sum_m W_im ln(W_im / q_m)` in nats, with `0 ln 0 = 0`.
fn divergences(w: &ChannelMatrix, q: &[f64], out: &mut [f64]) {
    for (di, row) in out.iter_mut().zip(w.rows()) {
        *di = row
            .iter()
            .zip(q)
            .filter(|(wm, _)| **wm > 0.0)
            .map(|(wm, qm)| wm * (wm / qm).ln())
            .sum();
    }
}

/// `sum_m W_im ln W_im` for every row.
fn row_neg_entropies(w: &ChannelMatrix) -> Vec<f64> {
    w.rows()
        .map(|row| row.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum())
        .collect()
}

/// Same as [`divergences`] with the row terms precomputed.
fn divergences_with(w: &ChannelMatrix, neg_h: &[f64], q: &[f64], out: &mut [f64]) {
    let ln_q: Vec<f64> = q.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    for ((di, row), h) in out.iter_mut().zip(w.rows()).zip(neg_h) {
        *di = h - row.iter().zip(&ln_q).map(|(wm, l)| wm * l).sum::<f64>();
    }
}

/// Runs the iteration at a fixed multiplier `s`, starting from `init` (or the
/// uniform distribution). When `trace` is given the objective in bits is
/// appended after every iteration.
pub fn blahut_arimoto_fixed(
    w: &ChannelMatrix,
    costs: &[f64],
    s: f64,
    init: Option<&[f64]>,
    opts: &BaOptions,
    mut trace: Option<&mut Vec<f64>>,
) -> FixedMultiplierRun {
    let n = w.n_inputs();
    let mut p: Vec<f64> = match init {
        Some(p0) => p0.to_vec(),
        None => vec![1.0 / n as f64; n],
    };
    let mut d = vec![0.0; n];
    let mut a = vec![0.0; n];
    let mut iterations = 0;
    loop {
        let q = output_marginal(w, &p);
        divergences(w, &q, &mut d);
        for i in 0..n {
            a[i] = d[i] - s * costs[i];
        }
        let upper = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let objective: f64 = p.iter().zip(&a).map(|(pi, ai)| pi * ai).sum();
        if let Some(t) = trace.as_deref_mut() {
            t.push(objective / LN_2);
        }
        let gap_bits = (upper - objective) / LN_2;
        if gap_bits < opts.tol_bits || iterations >= opts.max_iter {
            return FixedMultiplierRun {
                distribution: p,
                iterations,
                converged: gap_bits < opts.tol_bits,
                gap_bits,
                objective_bits: objective / LN_2,
            };
        }
        let mut z = 0.0;
        for i in 0..n {
            p[i] *= (a[i] - upper).exp();
            z += p[i];
        }
        for pi in p.iter_mut() {
            *pi /= z;
        }
        iterations += 1;
    }
}

/// Writes `p_i ∝ exp(logits_i - s c_i)` into `p` and returns the mean cost.
fn tilt_at(logits: &[f64], costs: &[f64], s: f64, p: &mut [f64]) -> (f64, f64) {
    let top = logits
        .iter()
        .zip(costs)
        .map(|(l, c)| l - s * c)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    for ((pi, l), c) in p.iter_mut().zip(logits).zip(costs) {
        *pi = (l - s * c - top).exp();
        z += *pi;
    }
    let mut mean = 0.0;
    let mut second = 0.0;
    for (pi, c) in p.iter_mut().zip(costs) {
        *pi /= z;
        mean += *pi * c;
        second += *pi * c * c;
    }
    (mean, (second - mean * mean).max(0.0))
}

/// Multiplier `s >= 0` whose tilt meets the budget, written into `p`.
/// Safeguarded Newton from `guess`; the returned tilt is always feasible.
fn solve_tilt(
    logits: &[f64],
    costs: &[f64],
    power: f64,
    guess: f64,
    opts: &BaOptions,
    p: &mut [f64],
) -> f64 {
    // lo: largest multiplier known to be infeasible, hi: smallest feasible
    let mut lo = f64::NAN;
    let mut hi = f64::INFINITY;
    let mut s = guess.max(0.0);
    for _ in 0..200 {
        let (m, var) = tilt_at(logits, costs, s, p);
        let f = m - power;
        if f <= 0.0 {
            if s == 0.0 || f >= -1e-13 * power {
                return s;
            }
            hi = s;
        } else {
            lo = s;
        }
        if hi - lo <= opts.s_tol * (1.0 + lo) {
            break;
        }
        let newton = s + f / var;
        s = if lo.is_nan() && (newton.is_nan() || newton <= 0.0) {
            0.0
        } else if newton > lo.max(0.0) && newton < hi {
            newton
        } else if hi.is_finite() {
            0.5 * (lo.max(0.0) + hi)
        } else {
            (2.0 * s).max(opts.s_max)
        };
    }
    if hi.is_finite() {
        tilt_at(logits, costs, hi, p);
        hi
    } else {
        s
    }
}

/// Capacity of `w` over inputs `inputs` subject to `E[X^2] <= power`.
pub fn blahut_arimoto_constrained(
    w: &ChannelMatrix,
    inputs: &[f64],
    power: f64,
    opts: &BaOptions,
) -> Result<CapacityResult> {
    constrained(w, inputs, power, opts, None, f64::NEG_INFINITY).map(|r| r.expect("never pruned"))
}

/// As [`blahut_arimoto_constrained`], also returning the mutual information
/// in bits after every iteration.
pub fn blahut_arimoto_traced(
    w: &ChannelMatrix,
    inputs: &[f64],
    power: f64,
    opts: &BaOptions,
) -> Result<(CapacityResult, Vec<f64>)> {
    let mut trace = Vec::new();
    let r = constrained(w, inputs, power, opts, Some(&mut trace), f64::NEG_INFINITY)?;
    Ok((r.expect("never pruned"), trace))
}

/// Runs until converged, or returns `None` as soon as the capacity upper
/// bound drops below `prune_below` bits.
pub(crate) fn blahut_arimoto_pruned(
    w: &ChannelMatrix,
    inputs: &[f64],
    power: f64,
    opts: &BaOptions,
    prune_below: f64,
) -> Result<Option<CapacityResult>> {
    constrained(w, inputs, power, opts, None, prune_below)
}

/// Largest extrapolation factor tried by the constrained solver.
const MAX_EXTRAPOLATION: f64 = 1e6;

struct Iterate {
    p: Vec<f64>,
    d: Vec<f64>,
    /// mutual information in nats
    info: f64,
}

impl Iterate {
    fn new(w: &ChannelMatrix, neg_h: &[f64], mut p: Vec<f64>) -> Self {
        // A mass of exactly zero could never grow back.
        for pi in p.iter_mut() {
            *pi = pi.max(MASS_FLOOR);
        }
        let q = output_marginal(w, &p);
        let mut d = vec![0.0; p.len()];
        divergences_with(w, neg_h, &q, &mut d);
        let info = p.iter().zip(&d).map(|(pi, di)| pi * di).sum();
        Self { p, d, info }
    }

    /// `max_i (D_i - s c_i) + s P` in nats, an upper bound on capacity.
    fn dual_bound(&self, costs: &[f64], power: f64, s: f64) -> f64 {
        self.d
            .iter()
            .zip(costs)
            .map(|(di, c)| di - s * c)
            .fold(f64::NEG_INFINITY, f64::max)
            + s * power
    }

    /// The dual bound minimized over `s >= 0`. It is convex and piecewise
    /// linear in `s` with slope `P - c_k` on the piece where line `k` is on
    /// top, so bisection on the sign of that slope finds the minimum.
    fn tight_dual_bound(&self, costs: &[f64], power: f64, s_hint: f64) -> f64 {
        let slope = |s: f64| {
            let mut best = f64::NEG_INFINITY;
            let mut cost = 0.0;
            for (di, c) in self.d.iter().zip(costs) {
                let v = di - s * c;
                if v > best || (v == best && *c < cost) {
                    best = v;
                    cost = *c;
                }
            }
            power - cost
        };
        if slope(0.0) >= 0.0 {
            return self.dual_bound(costs, power, 0.0);
        }
        let mut lo = 0.0;
        let mut hi = s_hint.max(1e-12);
        while slope(hi) < 0.0 && hi < 1e12 {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.dual_bound(costs, power, lo)
            .min(self.dual_bound(costs, power, hi))
    }

    /// Feasible `p_i ∝ p_i exp(D_i - s c_i)`; returns it with `s`.
    fn step(&self, costs: &[f64], power: f64, s_guess: f64, opts: &BaOptions) -> (Vec<f64>, f64) {
        let logits: Vec<f64> = self
            .p
            .iter()
            .zip(&self.d)
            .map(|(pi, di)| if *pi > 0.0 { pi.ln() + di } else { f64::NEG_INFINITY })
            .collect();
        let mut next = vec![0.0; logits.len()];
        let s = solve_tilt(&logits, costs, power, s_guess, opts, &mut next);
        (next, s)
    }
}

/// Smallest mass kept on any input point.
const MASS_FLOOR: f64 = 1e-200;

/// Support threshold for the second-order polish.
const POLISH_SUPPORT: f64 = 1e-12;
/// Newton steps per polish.
const POLISH_ROUNDS: usize = 64;
/// Plain steps between two polishes.
const POLISH_EVERY: usize = 25;

/// `sum_m W_im W_jm / q_m` over the given rows, the negated Hessian of `I`.
fn sub_hessian(w: &ChannelMatrix, q: &[f64], rows: &[usize]) -> DMatrix<f64> {
    let k = rows.len();
    let mut hess = DMatrix::<f64>::zeros(k, k);
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in rows.iter().enumerate().skip(a) {
            let v: f64 = w
                .row(i)
                .iter()
                .zip(w.row(j))
                .zip(q)
                .filter(|(_, qm)| **qm > 0.0)
                .map(|((x, y), qm)| x * y / qm)
                .sum();
            hess[(a, b)] = v;
            hess[(b, a)] = v;
        }
    }
    hess
}

/// Regularized Newton steps on the current support, keeping the simplex and
/// (when active) the cost constraint as equalities. `I(p) = sum_i p_i h_i +
/// H(W^T p)` has Hessian `-W D_q^{-1} W^T`, of rank at most the number of
/// outputs, so the regularization also picks the shortest step along the
/// flat directions. Every accepted step strictly increases `I`.
fn newton_polish(
    w: &ChannelMatrix,
    neg_h: &[f64],
    mut cur: Iterate,
    costs: &[f64],
    power: f64,
    s: f64,
    rounds: usize,
) -> Iterate {
    let mut lambda = 1e-9;
    for _ in 0..rounds {
        // Supported points, plus those whose reduced gradient says they
        // should enter the support.
        let value = |i: usize| cur.d[i] - s * costs[i];
        let level: f64 = (0..cur.p.len()).map(|i| cur.p[i] * value(i)).sum();
        let top = (0..cur.p.len()).map(value).fold(f64::NEG_INFINITY, f64::max);
        let entry = level + 0.5 * (top - level);
        let mut support: Vec<usize> = (0..cur.p.len())
            .filter(|&i| cur.p[i] > POLISH_SUPPORT || (top > level && value(i) >= entry))
            .collect();
        let mut k = support.len();
        if k < 2 {
            break;
        }
        let mean_cost: f64 = cur.p.iter().zip(costs).map(|(a, c)| a * c).sum();
        let cost_active = mean_cost >= power * (1.0 - 1e-12);
        let mut use_cost = cost_active;
        if k <= 2 {
            break;
        }
        let q = output_marginal(w, &cur.p);
        let mut hess = sub_hessian(w, &q, &support);
        let scale = (0..k).map(|a| hess[(a, a)]).fold(0.0, f64::max).max(1e-300);
        let mut improved = false;
        for _ in 0..30 {
            let m = if use_cost { 2 } else { 1 };
            let mut kkt = DMatrix::<f64>::zeros(k + m, k + m);
            let mut rhs = DVector::<f64>::zeros(k + m);
            for a in 0..k {
                for b in 0..k {
                    kkt[(a, b)] = hess[(a, b)];
                }
                kkt[(a, a)] += lambda * scale;
                kkt[(a, k)] = 1.0;
                kkt[(k, a)] = 1.0;
                if use_cost {
                    kkt[(a, k + 1)] = costs[support[a]];
                    kkt[(k + 1, a)] = costs[support[a]];
                }
                rhs[a] = cur.d[support[a]];
            }
            let Some(sol) = kkt.lu().solve(&rhs) else {
                lambda *= 16.0;
                continue;
            };
            // a negative multiplier means the budget is not binding
            if use_cost && sol[k + 1] < 0.0 {
                use_cost = false;
                continue;
            }
            // entering points the step would push down leave the active set
            let leaving: Vec<usize> = (0..k)
                .filter(|&a| cur.p[support[a]] <= POLISH_SUPPORT && sol[a] < 0.0)
                .collect();
            if !leaving.is_empty() {
                let mut a = 0;
                support.retain(|_| {
                    a += 1;
                    !leaving.contains(&(a - 1))
                });
                k = support.len();
                if k <= 2 {
                    break;
                }
                hess = sub_hessian(w, &q, &support);
                continue;
            }
            // Longest step keeping masses non-negative and the mean cost in
            // budget. A mass that hits zero leaves the support next round.
            let mut alpha: f64 = 1.0;
            let mut blocker = None;
            let mut cost_rate = 0.0;
            for (a, &i) in support.iter().enumerate() {
                if sol[a] < 0.0 && -cur.p[i] / sol[a] < alpha {
                    alpha = -cur.p[i] / sol[a];
                    blocker = Some(i);
                }
                cost_rate += sol[a] * costs[i];
            }
            if !use_cost && cost_rate > 0.0 {
                alpha = alpha.min(((power - mean_cost) / cost_rate).max(0.0));
            }
            let mut p = cur.p.clone();
            for (a, &i) in support.iter().enumerate() {
                p[i] = (p[i] + alpha * sol[a]).max(0.0);
            }
            if let Some(i) = blocker {
                if alpha == -cur.p[i] / sol[support.iter().position(|&j| j == i).unwrap()] {
                    p[i] = 0.0;
                }
            }
            let new_cost: f64 = p.iter().zip(costs).map(|(a, c)| a * c).sum();
            if new_cost > power {
                lambda *= 16.0;
                continue;
            }
            let cand = Iterate::new(w, neg_h, p);
            if cand.info > cur.info {
                cur = cand;
                lambda = (lambda * 0.25).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 16.0;
        }
        if !improved {
            break;
        }
    }
    cur
}

// The plain step maximizes `sum_i p_i D_i - KL(p || p_old)` over the feasible
// set, an exponential tilt of the unconstrained update, and never decreases
// the mutual information. An extrapolation along the log-space displacement
// is kept when it does at least as well, and a periodic Newton polish handles
// the nearly flat directions. The stopping rule uses the dual bound.
fn constrained(
    w: &ChannelMatrix,
    inputs: &[f64],
    power: f64,
    opts: &BaOptions,
    mut trace: Option<&mut Vec<f64>>,
    prune_below: f64,
) -> Result<Option<CapacityResult>> {
    if inputs.len() != w.n_inputs() {
        return Err(Error::LengthMismatch {
            expected: w.n_inputs(),
            got: inputs.len(),
        });
    }
    w.check_stochastic(1e-9)?;
    let costs: Vec<f64> = inputs.iter().map(|x| x * x).collect();
    let min_cost = costs.iter().copied().fold(f64::INFINITY, f64::min);
    if min_cost > power {
        return Err(Error::NoFeasibleInput);
    }
    let w = w.without_dead_outputs();
    let neg_h = row_neg_entropies(&w);
    let n = w.n_inputs();

    // uniform start, tilted into the budget
    let mut p0 = vec![0.0; n];
    let mut s = solve_tilt(&vec![0.0; n], &costs, power, 0.0, opts, &mut p0);
    let mut cur = Iterate::new(&w, &neg_h, p0);
    let mut beta = 1.0;
    let mut iterations = 0;
    loop {
        if let Some(t) = trace.as_deref_mut() {
            t.push(cur.info / LN_2);
        }
        let (p1, s1) = cur.step(&costs, power, s, opts);
        let bound = cur.tight_dual_bound(&costs, power, s1);
        if bound / LN_2 < prune_below {
            return Ok(None);
        }
        let gap_bits = ((bound - cur.info) / LN_2).max(0.0);
        if gap_bits < opts.tol_bits || iterations >= opts.max_iter {
            return Ok(Some(CapacityResult {
                rate_bits: (cur.info / LN_2).max(0.0),
                input_points: inputs.to_vec(),
                input_distribution: cur.p,
                thresholds: RootList::empty(),
                multiplier: s1,
                iterations,
                converged: gap_bits < opts.tol_bits,
                gap_bits,
            }));
        }
        // Plain step, then an extrapolation along its log-space displacement.
        let base = Iterate::new(&w, &neg_h, p1);
        let logits: Vec<f64> = base
            .p
            .iter()
            .zip(&cur.p)
            .map(|(a, b)| match (*a > 0.0, *b > 0.0) {
                (false, _) => f64::NEG_INFINITY,
                (true, false) => a.ln(),
                (true, true) => a.ln() + beta * (a / b).ln(),
            })
            .collect();
        let mut pe = vec![0.0; n];
        let se = solve_tilt(&logits, &costs, power, s1, opts, &mut pe);
        let cand = Iterate::new(&w, &neg_h, pe);
        let (next, s_next) = if cand.info >= base.info {
            beta = (2.0 * beta).min(MAX_EXTRAPOLATION);
            (cand, se)
        } else {
            beta = (0.25 * beta).max(1.0);
            (base, s1)
        };
        cur = next;
        s = s_next;
        iterations += 1;
        if iterations % POLISH_EVERY == 0 {
            cur = newton_polish(&w, &neg_h, cur, &costs, power, s, POLISH_ROUNDS);
        }
    }
}
