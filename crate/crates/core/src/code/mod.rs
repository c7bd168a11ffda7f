//! Codeword sequences and the combinatorics built on them.
//!
//! A [`Code`] is the ordered list of ADC output vectors a quantizer produces
//! as its input sweeps the real line. This module builds such sequences
//! (reflected and balanced Gray codes, codes with prescribed per-position
//! transition counts), turns them back into quantizers, checks their
//! structural properties, and searches for the largest admissible code.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

mod construct;
mod gray;
mod properties;
mod search;
mod synth;

pub use construct::{construct_code, TransitionSpec};
pub use gray::{balanced_gray, reflected_gray};
pub use properties::{validate_properties, ItemResult, PropertyReport};
pub use search::{search_max_code, CodeSearch, MAX_SEARCH_TRANSITIONS};
pub use synth::{synthesize_quantizer, synthesize_quantizer_theorem1};

/// One ADC output vector, entries in `0..ell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword(pub Vec<u8>);

impl Codeword {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn l1_distance(&self, other: &Codeword) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.abs_diff(b) as usize)
            .sum()
    }

    /// Mixed-radix index in `0..ell^n`.
    pub fn index(&self, ell: usize) -> usize {
        self.0.iter().fold(0, |acc, &v| acc * ell + v as usize)
    }
}

impl FromIterator<u8> for Codeword {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Codeword {
    type Err = String;

    /// Parses a digit string such as `"021"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| format!("invalid codeword digit {c:?} in {s:?}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Codeword)
    }
}

/// Ordered sequence of codewords. Repeats are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Code(Vec<Codeword>);

impl Code {
    pub fn new(codewords: Vec<Codeword>) -> Self {
        Self(codewords)
    }

    /// Parses a comma separated list like `"00,01,11"`.
    pub fn parse_list(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<Vec<_>, _>>()
            .map(Code)
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.0
    }

    pub fn into_codewords(self) -> Vec<Codeword> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn n_q(&self) -> usize {
        self.0.first().map_or(0, Codeword::len)
    }

    /// Number of distinct codewords.
    pub fn code_size(&self) -> usize {
        self.0.iter().collect::<HashSet<_>>().len()
    }

    /// Per-position number of value changes between consecutive codewords.
    pub fn transition_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_q()];
        for w in self.0.windows(2) {
            for (j, (a, b)) in w[0].0.iter().zip(&w[1].0).enumerate() {
                if a != b {
                    counts[j] += 1;
                }
            }
        }
        counts
    }

    /// Position that changes at each step, or `None` if the step does not
    /// change exactly one position.
    pub fn transition_sequence(&self) -> Vec<Option<usize>> {
        self.0
            .windows(2)
            .map(|w| {
                let mut diff = w[0].0.iter().zip(&w[1].0).enumerate().filter(|(_, (a, b))| a != b);
                match (diff.next(), diff.next()) {
                    (Some((j, _)), None) => Some(j),
                    _ => None,
                }
            })
            .collect()
    }

    /// Reorders coordinates: position `j` of the result is position `perm[j]`
    /// of the input.
    pub fn permute_positions(&self, perm: &[usize]) -> Code {
        Code(
            self.0
                .iter()
                .map(|c| perm.iter().map(|&p| c.0[p]).collect())
                .collect(),
        )
    }

    pub fn is_closed(&self) -> bool {
        self.0.len() > 1 && self.0.first() == self.0.last()
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_sizes() {
        let c = Code::parse_list("22,21,20,10,00,10,20,21,22").unwrap();
        assert_eq!(c.code_size(), 5);
        assert_eq!(c.transition_counts(), vec![4, 4]);
        assert_eq!(Code::parse_list("0,1").unwrap().code_size(), 2);
        assert_eq!(Code::parse_list("0,1").unwrap().transition_counts(), vec![1]);
    }

    #[test]
    fn transition_sequence_flags_multi_position_steps() {
        let c = Code::parse_list("00,01,10").unwrap();
        assert_eq!(c.transition_sequence(), vec![Some(1), None]);
    }

    #[test]
    fn json_is_nested_arrays() {
        let c = Code::parse_list("01,11").unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[[0,1],[1,1]]");
        let back: Code = serde_json::from_str("[[0,1],[1,1]]").unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn display_and_permute() {
        let c = Code::parse_list("001,011").unwrap();
        assert_eq!(c.to_string(), "001,011");
        assert_eq!(c.permute_positions(&[2, 1, 0]).to_string(), "100,110");
    }
}
