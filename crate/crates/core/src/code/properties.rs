//! Structural checks on associated codes.

use serde::Serialize;

use super::Code;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ItemResult {
    pub pass: bool,
    /// First codeword (or position, for per-position items) that fails.
    pub counterexample: Option<usize>,
}

impl ItemResult {
    fn from_failure(first_bad: Option<usize>) -> Self {
        Self {
            pass: first_bad.is_none(),
            counterexample: first_bad,
        }
    }
}

/// Outcome of the six structural properties of a quantizer's code.
///
/// 1. the code has `(ell-1) * delta * n_q + 1` codewords;
/// 2. every entry of the first codeword is `0` or `ell-1`;
/// 3. consecutive codewords are at L1 distance one;
/// 4. every position changes exactly `(ell-1) * delta` times;
/// 5. every position sweeps saw-tooth between `0` and `ell-1` in unit steps;
/// 6. the number of distinct codewords respects the degree-parity bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub item1: ItemResult,
    pub item2: ItemResult,
    pub item3: ItemResult,
    pub item4: ItemResult,
    pub item5: ItemResult,
    pub item6: ItemResult,
}

impl PropertyReport {
    pub fn items(&self) -> [ItemResult; 6] {
        [self.item1, self.item2, self.item3, self.item4, self.item5, self.item6]
    }

    pub fn all_pass(&self) -> bool {
        self.items().iter().all(|i| i.pass)
    }

    /// Items 1 through 5, the ones that define an admissible code.
    pub fn admissible(&self) -> bool {
        self.items()[..5].iter().all(|i| i.pass)
    }
}

pub fn validate_properties(code: &Code, ell: usize, delta: usize, n_q: usize) -> PropertyReport {
    let words = code.codewords();
    let top = (ell - 1) as u8;
    let gamma = (ell - 1) * delta * n_q;

    let item1 = ItemResult::from_failure(if words.len() == gamma + 1 {
        None
    } else {
        Some(words.len().min(gamma + 1))
    });

    let item2 = ItemResult::from_failure(match words.first() {
        Some(c0) if c0.len() == n_q => c0.as_slice().iter().position(|&v| v != 0 && v != top),
        _ => Some(0),
    });

    let item3 = ItemResult::from_failure(
        words
            .windows(2)
            .position(|w| w[0].len() != n_q || w[1].len() != n_q || w[0].l1_distance(&w[1]) != 1)
            .map(|i| i + 1),
    );

    let counts = code.transition_counts();
    let item4 = ItemResult::from_failure(if counts.len() != n_q {
        Some(0)
    } else {
        counts.iter().position(|&k| k != (ell - 1) * delta)
    });

    let item5 = ItemResult::from_failure(
        (0..n_q).find(|&j| !is_sawtooth(words.iter().map(|w| w.as_slice().get(j).copied()), top)),
    );

    let bound = (ell as u128)
        .checked_pow(n_q as u32)
        .unwrap_or(u128::MAX)
        .min((gamma + delta % 2) as u128);
    let item6 = ItemResult::from_failure(if code.code_size() as u128 <= bound {
        None
    } else {
        Some(code.code_size())
    });

    PropertyReport {
        item1,
        item2,
        item3,
        item4,
        item5,
        item6,
    }
}

/// Values (after collapsing repeats) start at an end, move in unit steps and
/// only turn around at `0` or `top`.
fn is_sawtooth(values: impl Iterator<Item = Option<u8>>, top: u8) -> bool {
    let mut runs: Vec<u8> = Vec::new();
    for v in values {
        let Some(v) = v else { return false };
        if runs.last() != Some(&v) {
            runs.push(v);
        }
    }
    let Some(&first) = runs.first() else { return true };
    if first != 0 && first != top {
        return false;
    }
    let mut up = first == 0;
    for w in runs.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.abs_diff(b) != 1 {
            return false;
        }
        if (b > a) != up {
            return false;
        }
        if b == top {
            up = false;
        } else if b == 0 {
            up = true;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> Code {
        Code::parse_list(s).unwrap()
    }

    #[test]
    fn example_one_code_passes() {
        let r = validate_properties(&code("22,21,20,10,00,10,20,21,22"), 3, 2, 2);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn l1_distance_two_fails_item3() {
        let r = validate_properties(&code("00,11"), 2, 1, 2);
        assert!(!r.item3.pass);
        assert_eq!(r.item3.counterexample, Some(1));
    }

    #[test]
    fn prop1_code_passes() {
        let r = validate_properties(&code("000,001,011,111,110,100,000"), 2, 2, 3);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn sawtooth_detects_early_turnaround() {
        // position 0 goes 0,1,0 with ell = 3: turns at 1
        let r = validate_properties(&code("0,1,0,1,2"), 3, 1, 1);
        assert!(!r.item5.pass);
        assert!(is_sawtooth([0, 1, 2, 1, 0, 1].into_iter().map(Some), 2));
        assert!(!is_sawtooth([1, 2].into_iter().map(Some), 2));
    }

    #[test]
    fn report_json_keys() {
        let r = validate_properties(&code("0,1"), 2, 1, 1);
        let v = serde_json::to_value(r).unwrap();
        for k in ["item1", "item2", "item3", "item4", "item5", "item6"] {
            assert_eq!(v[k]["pass"], true, "{k}");
        }
    }
}
