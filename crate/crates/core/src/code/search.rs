//! Exhaustive search for the largest admissible code.
//!
//! An admissible code is fixed by its first codeword and the order in which
//! positions change: each position sweeps saw-tooth between `0` and `ell-1`,
//! so the value after every step is determined. The search therefore runs
//! over multiset permutations of positions, each position appearing
//! `(ell-1)*delta` times. It starts at the all-zero word and only lets a
//! position move for the first time after every lower position has moved,
//! which removes the relabelling symmetry of the positions.

use super::{Code, Codeword};
use crate::error::{Error, Result};

/// Largest `(ell-1) * delta * n_q` accepted by [`search_max_code`].
pub const MAX_SEARCH_TRANSITIONS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSearch {
    /// Maximum number of distinct codewords.
    pub gamma: usize,
    pub witness: Code,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

pub fn search_max_code(n_q: usize, ell: usize, delta: usize) -> Result<CodeSearch> {
    if n_q == 0 || delta == 0 || ell < 2 {
        return Err(Error::InvalidConfig(format!(
            "search needs n_q, delta >= 1 and ell >= 2 (got {n_q}, {ell}, {delta})"
        )));
    }
    if ell > 10 {
        return Err(Error::TooLarge(format!("ell = {ell}")));
    }
    let per_position = (ell - 1) * delta;
    let steps = per_position * n_q;
    if steps > MAX_SEARCH_TRANSITIONS {
        return Err(Error::TooLarge(format!(
            "(ell-1)*delta*n_q = {steps} exceeds {MAX_SEARCH_TRANSITIONS}"
        )));
    }
    let space = (ell as u64).pow(n_q as u32) as usize;
    let target = space.min(steps + delta % 2);

    let mut s = Search {
        n_q,
        ell,
        top: (ell - 1) as u8,
        per_position,
        target,
        values: vec![0; n_q],
        rising: vec![true; n_q],
        used: vec![0; n_q],
        seen: vec![0u32; space],
        distinct: 1,
        path: Vec::with_capacity(steps),
        best: 0,
        best_path: Vec::new(),
        nodes: 0,
    };
    s.seen[0] = 1;
    s.dfs(steps);

    let witness = replay(n_q, ell, &s.best_path);
    Ok(CodeSearch {
        gamma: s.best,
        witness,
        nodes: s.nodes,
    })
}

struct Search {
    n_q: usize,
    ell: usize,
    top: u8,
    per_position: usize,
    target: usize,
    values: Vec<u8>,
    rising: Vec<bool>,
    used: Vec<usize>,
    seen: Vec<u32>,
    distinct: usize,
    path: Vec<usize>,
    best: usize,
    best_path: Vec<usize>,
    nodes: u64,
}

impl Search {
    fn index(&self) -> usize {
        self.values.iter().fold(0, |acc, &v| acc * self.ell + v as usize)
    }

    fn dfs(&mut self, left: usize) {
        self.nodes += 1;
        if left == 0 {
            if self.distinct > self.best {
                self.best = self.distinct;
                self.best_path = self.path.clone();
            }
            return;
        }
        if self.distinct + left <= self.best || self.best >= self.target {
            return;
        }
        for j in 0..self.n_q {
            if self.used[j] == self.per_position {
                continue;
            }
            if self.used[j] == 0 && j > 0 && self.used[j - 1] == 0 {
                // positions enter in increasing order
                break;
            }
            let (old_v, old_r) = (self.values[j], self.rising[j]);
            let v = if old_r { old_v + 1 } else { old_v - 1 };
            self.values[j] = v;
            if v == self.top {
                self.rising[j] = false;
            } else if v == 0 {
                self.rising[j] = true;
            }
            self.used[j] += 1;
            let idx = self.index();
            self.seen[idx] += 1;
            if self.seen[idx] == 1 {
                self.distinct += 1;
            }
            self.path.push(j);

            self.dfs(left - 1);

            self.path.pop();
            if self.seen[idx] == 1 {
                self.distinct -= 1;
            }
            self.seen[idx] -= 1;
            self.used[j] -= 1;
            self.values[j] = old_v;
            self.rising[j] = old_r;
            if self.best >= self.target {
                return;
            }
        }
    }
}

fn replay(n_q: usize, ell: usize, path: &[usize]) -> Code {
    let top = (ell - 1) as u8;
    let mut cur = Codeword::zeros(n_q);
    let mut rising = vec![true; n_q];
    let mut words = vec![cur.clone()];
    for &j in path {
        let v = cur.0[j];
        let nv = if rising[j] { v + 1 } else { v - 1 };
        cur.0[j] = nv;
        if nv == top {
            rising[j] = false;
        } else if nv == 0 {
            rising[j] = true;
        }
        words.push(cur.clone());
    }
    Code::new(words)
}
