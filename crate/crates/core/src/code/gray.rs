//! Binary Gray codes and a cycle finder on the hypercube with prescribed
//! per-direction edge counts.

use super::{Code, Codeword};

/// Reflected binary Gray code on `n` bits, closed by repeating the first
/// codeword at the end (`2^n + 1` entries).
pub fn reflected_gray(n: usize) -> Code {
    assert!((1..=20).contains(&n), "reflected_gray supports 1..=20 bits");
    let mut words: Vec<Codeword> = (0..1usize << n)
        .map(|i| {
            let g = i ^ (i >> 1);
            (0..n).map(|j| ((g >> (n - 1 - j)) & 1) as u8).collect()
        })
        .collect();
    words.push(words[0].clone());
    Code::new(words)
}

/// Per-position transition counts of a balanced Gray code on `n` bits,
/// sorted ascending: every entry is `2*floor(2^n/2n)` or `2*ceil(2^n/2n)`.
pub(crate) fn balanced_counts(n: usize) -> Vec<usize> {
    let total = 1usize << n;
    let base = 2 * (total / (2 * n));
    let extra = (total - n * base) / 2;
    (0..n)
        .map(|j| if j >= n - extra { base + 2 } else { base })
        .collect()
}

/// Cyclic binary Gray code through all `2^n` words whose per-position
/// transition counts differ by at most two. Position `j` receives the `j`-th
/// entry of the ascending balanced count profile. Closed like
/// [`reflected_gray`].
pub fn balanced_gray(n: usize) -> Code {
    assert!((1..=10).contains(&n), "balanced_gray supports 1..=10 bits");
    let dirs = balanced_cycle(n);
    walk_to_code(n, &dirs)
}

/// Direction sequence of a balanced Gray cycle from the origin.
///
/// Works on a cover of the `n`-cube by disjoint cycles, starting from the
/// reflected cycle. A square exchange on `a, a^i, a^i^j, a^j` swaps two
/// parallel `i`-edges of the cover for the two `j`-edges, moving two
/// transitions from direction `i` to `j`. Exchanges shift load from busy to
/// idle directions; when one splits the cycle, an exchange across two cycles
/// joins them again.
fn balanced_cycle(n: usize) -> Vec<usize> {
    let size = 1usize << n;
    let mut nb: Vec<[usize; 2]> = (0..size).map(|v| [v, v]).collect();
    for k in 0..size {
        let gray = |k: usize| k ^ (k >> 1);
        let (u, v) = (gray(k), gray((k + 1) % size));
        link(&mut nb, u, v);
    }
    if n == 1 {
        return vec![0, 0];
    }
    for _ in 0..64 * size {
        let (comp, n_comp) = components(&nb);
        let mut counts = vec![0usize; n];
        for (v, e) in nb.iter().enumerate() {
            for &u in e {
                counts[(u ^ v).trailing_zeros() as usize] += 1;
            }
        }
        counts.iter_mut().for_each(|c| *c /= 2);
        let (lo, hi) = (*counts.iter().min().unwrap(), *counts.iter().max().unwrap());
        if n_comp == 1 && hi <= lo + 2 {
            break;
        }
        let order = (n_comp == 1).then(|| cycle_order(&nb));
        let mut best: Option<(i64, usize, usize, usize)> = None;
        for a in 0..size {
            for i in 0..n {
                let ai = a ^ 1 << i;
                if a & 1 << i != 0 || !nb[a].contains(&ai) {
                    continue;
                }
                for j in 0..n {
                    let (aj, aij) = (a ^ 1 << j, ai ^ 1 << j);
                    if j == i || !nb[aj].contains(&aij) || nb[a].contains(&aj) || nb[ai].contains(&aij) {
                        continue;
                    }
                    let gain = counts[i] as i64 - counts[j] as i64;
                    let score = match &order {
                        // two cycles joined: always wanted
                        None if comp[a] != comp[aj] => 1000 + gain,
                        None => continue,
                        Some(pos) => {
                            let fwd = |x: usize, y: usize| pos[y] == (pos[x] + 1) % size;
                            let keeps = fwd(a, ai) == fwd(aj, aij);
                            match (keeps, gain >= 4) {
                                (true, true) => 1000 + gain,
                                (false, true) => gain,
                                _ => continue,
                            }
                        }
                    };
                    if best.is_none_or(|b| score > b.0) {
                        best = Some((score, a, i, j));
                    }
                }
            }
        }
        let (_, a, i, j) = best.expect("square exchange available");
        let (ai, aj) = (a ^ 1 << i, a ^ 1 << j);
        unlink(&mut nb, a, ai);
        unlink(&mut nb, aj, aj ^ 1 << i);
        link(&mut nb, a, aj);
        link(&mut nb, ai, ai ^ 1 << j);
    }
    let cyc = cycle_order_list(&nb);
    let raw: Vec<usize> = (0..size)
        .map(|k| (cyc[k] ^ cyc[(k + 1) % size]).trailing_zeros() as usize)
        .collect();
    // relabel so counts ascend with the position index
    let mut counts = vec![0usize; n];
    for &d in &raw {
        counts[d] += 1;
    }
    let mut by_count: Vec<usize> = (0..n).collect();
    by_count.sort_by_key(|&d| (counts[d], d));
    let mut label = vec![0; n];
    for (new, &old) in by_count.iter().enumerate() {
        label[old] = new;
    }
    raw.iter().map(|&d| label[d]).collect()
}

fn link(nb: &mut [[usize; 2]], u: usize, v: usize) {
    for (x, y) in [(u, v), (v, u)] {
        // an unused slot holds the vertex itself
        let slot = if nb[x][0] == x { 0 } else { 1 };
        nb[x][slot] = y;
    }
}

fn unlink(nb: &mut [[usize; 2]], u: usize, v: usize) {
    for (x, y) in [(u, v), (v, u)] {
        let slot = if nb[x][0] == y { 0 } else { 1 };
        nb[x][slot] = x;
    }
}

fn components(nb: &[[usize; 2]]) -> (Vec<usize>, usize) {
    let mut comp = vec![usize::MAX; nb.len()];
    let mut c = 0;
    for s in 0..nb.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            if comp[v] == usize::MAX {
                comp[v] = c;
                stack.extend(nb[v]);
            }
        }
        c += 1;
    }
    (comp, c)
}

/// Vertices of a single covering cycle, starting at the origin.
fn cycle_order_list(nb: &[[usize; 2]]) -> Vec<usize> {
    let mut out = vec![0];
    let (mut prev, mut cur) = (0, nb[0][0]);
    while cur != 0 {
        out.push(cur);
        let next = if nb[cur][0] == prev { nb[cur][1] } else { nb[cur][0] };
        prev = cur;
        cur = next;
    }
    out
}

fn cycle_order(nb: &[[usize; 2]]) -> Vec<usize> {
    let mut pos = vec![0; nb.len()];
    for (k, v) in cycle_order_list(nb).into_iter().enumerate() {
        pos[v] = k;
    }
    pos
}

/// Expands a direction sequence starting at the all-zero word.
pub(crate) fn walk_to_code(n: usize, dirs: &[usize]) -> Code {
    let mut cur = Codeword::zeros(n);
    let mut words = Vec::with_capacity(dirs.len() + 1);
    words.push(cur.clone());
    for &d in dirs {
        cur.0[d] ^= 1;
        words.push(cur.clone());
    }
    Code::new(words)
}

const NODE_BUDGET: u64 = 2_000_000;
const RESTARTS: usize = 64;

/// Closed walk from the origin of the `n`-cube that flips position `j`
/// exactly `counts[j]` times and visits no vertex twice (apart from
/// returning to the origin at the end).
///
/// Depth-first search with a remaining-count heuristic; restarts rotate the
/// tie-break order. Returns `None` if no cycle was found within the budget.
pub(crate) fn find_cycle(n: usize, counts: &[usize]) -> Option<Vec<usize>> {
    assert_eq!(counts.len(), n);
    assert!(n <= 24);
    if counts.iter().any(|c| c % 2 == 1) {
        return None;
    }
    let len: usize = counts.iter().sum();
    if len == 0 {
        return Some(Vec::new());
    }
    if len > 1 << n {
        return None;
    }
    for attempt in 0..RESTARTS {
        let mut s = CycleSearch {
            n,
            remaining: counts.to_vec(),
            visited: vec![false; 1 << n],
            path: Vec::with_capacity(len),
            nodes: 0,
            rotation: attempt,
        };
        s.visited[0] = true;
        match s.dfs(0, len) {
            Some(true) => return Some(s.path),
            Some(false) => return None, // exhausted: provably no cycle
            None => continue,
        }
    }
    None
}

struct CycleSearch {
    n: usize,
    remaining: Vec<usize>,
    visited: Vec<bool>,
    path: Vec<usize>,
    nodes: u64,
    rotation: usize,
}

impl CycleSearch {
    /// `Some(true)` found, `Some(false)` subtree exhausted, `None` out of budget.
    fn dfs(&mut self, v: usize, left: usize) -> Option<bool> {
        if left == 0 {
            return Some(v == 0);
        }
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return None;
        }
        let mut order: Vec<usize> = (0..self.n).filter(|&j| self.remaining[j] > 0).collect();
        let rot = self.rotation;
        let n = self.n;
        order.sort_by_key(|&j| (std::cmp::Reverse(self.remaining[j]), (j + rot) % n));
        for j in order {
            let u = v ^ (1 << j);
            let last = left == 1;
            if last {
                if u != 0 {
                    continue;
                }
            } else if self.visited[u] {
                continue;
            }
            self.remaining[j] -= 1;
            if self.feasible(u, left - 1) {
                self.visited[u] = true;
                self.path.push(j);
                match self.dfs(u, left - 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                self.path.pop();
                if u != 0 {
                    self.visited[u] = false;
                }
            }
            self.remaining[j] += 1;
        }
        Some(false)
    }

    fn feasible(&self, u: usize, left: usize) -> bool {
        if (u.count_ones() as usize) > left {
            return false;
        }
        (0..self.n).all(|j| (u >> j) & 1 == 0 || self.remaining[j] > 0)
    }
}
