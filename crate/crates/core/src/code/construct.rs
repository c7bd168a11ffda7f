//! Binary codes with prescribed per-position transition counts.
//!
//! Given even counts `kappa_j` whose spread is at most two, [`construct_code`]
//! returns a closed code starting at the all-zero word, with unit steps and
//! exactly `kappa_j` changes at position `j`, whose number of distinct
//! codewords is `min(2^n, sum kappa_j)`.
//!
//! Positions are first sorted by count. When the total reaches `2^n` a
//! balanced Gray code is used as a subcode and the surplus transitions are
//! spent as back-and-forth flips at the end. Otherwise the two least-used
//! positions act as a two-bit prefix layered over a code on the remaining
//! positions:
//!
//! * if the remaining positions need at most `2^(n-2)` transitions, a code
//!   for them is built recursively and the prefix walks forward around the
//!   square `00 -> 01 -> 11 -> 10` while that code is traversed;
//! * if they need at most `2^(n-1)`, a recursively built residual code is
//!   traversed under prefix `00` and a balanced Gray code under prefixes
//!   `01, 11, 10`.
//!
//! Remaining totals fall back to an exact cycle search on the hypercube.

use serde::{Deserialize, Serialize};

use super::gray::{balanced_counts, balanced_gray, find_cycle, walk_to_code};
use super::{Code, Codeword};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionSpec {
    pub n_q: usize,
    pub kappas: Vec<usize>,
    pub ell: usize,
}

impl TransitionSpec {
    pub fn binary(kappas: Vec<usize>) -> Self {
        Self {
            n_q: kappas.len(),
            kappas,
            ell: 2,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.ell != 2 {
            return Err(Error::InfeasibleSpec(format!(
                "only binary codes can be constructed, got ell = {}",
                self.ell
            )));
        }
        if self.n_q == 0 || self.kappas.len() != self.n_q {
            return Err(Error::InfeasibleSpec(format!(
                "{} counts for n_q = {}",
                self.kappas.len(),
                self.n_q
            )));
        }
        if self.n_q > 20 {
            return Err(Error::InfeasibleSpec(format!("n_q = {} exceeds 20", self.n_q)));
        }
        if let Some(j) = self.kappas.iter().position(|k| k % 2 == 1) {
            return Err(Error::InfeasibleSpec(format!(
                "kappa[{j}] = {} is odd",
                self.kappas[j]
            )));
        }
        let lo = self.kappas.iter().min().unwrap();
        let hi = self.kappas.iter().max().unwrap();
        if hi - lo > 2 {
            return Err(Error::InfeasibleSpec(format!(
                "counts spread {lo}..{hi} exceeds 2"
            )));
        }
        let total: usize = self.kappas.iter().sum();
        if total >= 1 << self.n_q && self.n_q > 10 {
            return Err(Error::TooLarge(format!(
                "balanced Gray subcode on {} bits",
                self.n_q
            )));
        }
        Ok(())
    }
}

pub fn construct_code(spec: &TransitionSpec) -> Result<Code> {
    spec.check()?;
    build(&spec.kappas).map(|(code, _)| code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Route {
    Trivial,
    BalancedSubcode,
    PrefixOverCode,
    PrefixOverGray,
    CycleSearch,
}

/// Builds for arbitrary position order by sorting, then restoring positions.
pub(crate) fn build(kappas: &[usize]) -> Result<(Code, Route)> {
    let n = kappas.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by_key(|&j| (kappas[j], j));
    let sorted: Vec<usize> = perm.iter().map(|&j| kappas[j]).collect();
    let (code, route) = build_sorted(&sorted)?;
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    Ok((code.permute_positions(&inv), route))
}

fn build_sorted(ks: &[usize]) -> Result<(Code, Route)> {
    let n = ks.len();
    let total: usize = ks.iter().sum();
    if total == 0 {
        return Ok((Code::new(vec![Codeword::zeros(n)]), Route::Trivial));
    }
    if total >= 1 << n {
        return balanced_subcode(ks).map(|c| (c, Route::BalancedSubcode));
    }
    if n >= 3 {
        let rest: usize = ks[2..].iter().sum();
        let attempt = if rest <= 1 << (n - 2) {
            prefix_over_code(ks)?.map(|c| (c, Route::PrefixOverCode))
        } else if rest <= 1 << (n - 1) {
            prefix_over_gray(ks)?.map(|c| (c, Route::PrefixOverGray))
        } else {
            None
        };
        if let Some((code, route)) = attempt {
            if is_simple_cycle(&code, ks) {
                return Ok((code, route));
            }
        }
    }
    find_cycle(n, ks)
        .map(|dirs| (walk_to_code(n, &dirs), Route::CycleSearch))
        .ok_or_else(|| Error::InfeasibleSpec(format!("no code found for counts {ks:?}")))
}

fn balanced_subcode(ks: &[usize]) -> Result<Code> {
    let n = ks.len();
    let base = balanced_counts(n);
    if ks.iter().zip(&base).any(|(k, b)| k < b) {
        return Err(Error::InfeasibleSpec(format!(
            "counts {ks:?} cannot host a balanced Gray code with counts {base:?}"
        )));
    }
    let mut words = balanced_gray(n).into_codewords();
    let origin = words[0].clone();
    for (j, (&k, &b)) in ks.iter().zip(&base).enumerate() {
        for _ in 0..(k - b) / 2 {
            let mut w = origin.clone();
            w.0[j] ^= 1;
            words.push(w);
            words.push(origin.clone());
        }
    }
    Ok(Code::new(words))
}

fn with_prefix(p: u8, suffix: &Codeword) -> Codeword {
    let mut v = Vec::with_capacity(suffix.len() + 2);
    v.push(p >> 1);
    v.push(p & 1);
    v.extend_from_slice(suffix.as_slice());
    Codeword(v)
}

// Prefix states are encoded as two bits `(pos0 << 1) | pos1`.
const P00: u8 = 0b00;
const P01: u8 = 0b01;
const P10: u8 = 0b10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    /// flip prefix position 0
    First,
    /// flip prefix position 1
    Second,
    /// the next move must happen at a later suffix codeword
    Break,
}

fn apply(state: u8, m: Move) -> u8 {
    match m {
        Move::First => state ^ 0b10,
        Move::Second => state ^ 0b01,
        Move::Break => state,
    }
}

/// Prefix walks forward around the square while a simple cycle on the other
/// positions is traversed; at most three prefix moves per suffix codeword.
fn prefix_over_code(ks: &[usize]) -> Result<Option<Code>> {
    let (k1, k2) = (ks[0], ks[1]);
    let (inner, _) = build_sorted(&ks[2..])?;
    let inner = inner.into_codewords();
    let m = inner.len() - 1;

    let mut moves = Vec::new();
    for t in 0..2 * k1 {
        moves.push(if t % 2 == 0 { Move::Second } else { Move::First });
    }
    if k2 == k1 + 2 {
        moves.extend([Move::Second, Move::Break, Move::Second]);
    }

    let mut words = Vec::new();
    let mut state = P00;
    let mut it = moves.into_iter().peekable();
    for suffix in &inner[..m] {
        words.push(with_prefix(state, suffix));
        let mut used = 0;
        while used < 3 {
            match it.peek() {
                Some(Move::Break) => {
                    it.next();
                    break;
                }
                Some(&mv) => {
                    it.next();
                    state = apply(state, mv);
                    words.push(with_prefix(state, suffix));
                    used += 1;
                }
                None => break,
            }
        }
    }
    if it.next().is_some() || state != P00 {
        return Ok(None);
    }
    words.push(with_prefix(P00, &inner[0]));
    Ok(Some(Code::new(words)))
}

/// Residual code under prefix `00`, then a balanced Gray code on the other
/// positions with the prefix confined to the path `01 - 11 - 10`.
fn prefix_over_gray(ks: &[usize]) -> Result<Option<Code>> {
    let n = ks.len();
    let (k1, k2) = (ks[0], ks[1]);
    if k1 < 2 {
        return Ok(None);
    }
    let profile = balanced_counts(n - 2);
    if ks[2..].iter().zip(&profile).any(|(k, b)| k < b) {
        return Ok(None);
    }
    let residual: Vec<usize> = ks[2..].iter().zip(&profile).map(|(k, b)| k - b).collect();
    let (res_code, _) = build(&residual)?;
    let res = res_code.into_codewords();
    let gray = balanced_gray(n - 2).into_codewords();
    let zero = Codeword::zeros(n - 2);

    let mut words: Vec<Codeword> = Vec::new();
    let res_open = if res.len() > 1 { &res[..res.len() - 1] } else { &res[..] };
    for suffix in res_open {
        words.push(with_prefix(P00, suffix));
    }
    let last = res_open.last().unwrap().clone();
    words.push(with_prefix(P01, &last));
    if last != zero {
        words.push(with_prefix(P01, &zero));
    }

    // Prefix moves on the path 01 -(First)- 11 -(Second)- 10.
    let mut moves = vec![Move::First, Move::Second];
    for _ in 0..(k1 - 2) / 2 {
        moves.extend([Move::Second, Move::First, Move::First, Move::Second]);
    }
    if k2 == k1 + 2 {
        moves.extend([Move::Second, Move::Second]);
    }
    let mut chunks: Vec<Vec<Move>> = Vec::new();
    for mv in moves {
        match chunks.last_mut() {
            Some(c) if *c.last().unwrap() != mv => c.push(mv),
            _ => chunks.push(vec![mv]),
        }
    }

    let visits = &gray[..gray.len() - 1];
    let forbidden = |k: usize, state: u8| -> bool {
        (k == 0 && state == P10) || (visits[k] == last && last != zero && state == P01)
    };
    let mut plan = vec![false; visits.len()];
    if !schedule(visits.len(), &chunks, &forbidden, 0, 0, P01, &mut plan) {
        return Ok(None);
    }

    let mut state = P01;
    let mut next = 0;
    for (k, suffix) in visits.iter().enumerate() {
        if k > 0 {
            words.push(with_prefix(state, suffix));
        }
        if plan[k] {
            for &mv in &chunks[next] {
                state = apply(state, mv);
                words.push(with_prefix(state, suffix));
            }
            next += 1;
        }
    }
    if state != P10 {
        return Ok(None);
    }
    words.push(with_prefix(P10, &zero));
    words.push(with_prefix(P00, &zero));
    Ok(Some(Code::new(words)))
}

/// Chooses which suffix visits host the next prefix chunk so that no
/// forbidden `(visit, state)` pair occurs and all chunks are placed.
fn schedule(
    visits: usize,
    chunks: &[Vec<Move>],
    forbidden: &dyn Fn(usize, u8) -> bool,
    k: usize,
    next: usize,
    state: u8,
    plan: &mut [bool],
) -> bool {
    if next == chunks.len() {
        return state == P10 && (k..visits).all(|i| !forbidden(i, state));
    }
    if k == visits || chunks.len() - next > visits - k {
        return false;
    }
    if forbidden(k, state) {
        return false;
    }
    let mut s = state;
    let mut ok = true;
    for &mv in &chunks[next] {
        s = apply(s, mv);
        if forbidden(k, s) {
            ok = false;
            break;
        }
    }
    if ok {
        plan[k] = true;
        if schedule(visits, chunks, forbidden, k + 1, next + 1, s, plan) {
            return true;
        }
        plan[k] = false;
    }
    schedule(visits, chunks, forbidden, k + 1, next, state, plan)
}

/// Closed, unit-step, exact counts, and every codeword distinct except the
/// repeated origin at the end.
fn is_simple_cycle(code: &Code, ks: &[usize]) -> bool {
    let words = code.codewords();
    let total: usize = ks.iter().sum();
    words.len() == total + 1
        && code.is_closed()
        && code.transition_counts() == ks
        && words.windows(2).all(|w| w[0].l1_distance(&w[1]) == 1)
        && code.code_size() == total
}
