//! Quantizers realising a given binary code.

use super::Code;
use crate::error::{Error, Result};
use crate::polynomial::{RealPolynomial, RootList};
use crate::quantizer::Quantizer;

/// Zero-threshold one-bit quantizer whose associated code is `code` and whose
/// transition points are `roots`.
///
/// Position `j` gets `f_j(y) = s_j * prod_{k: step k flips j} (y - r_k)` where
/// the sign `s_j` is negative when the first codeword has a zero at `j`.
pub fn synthesize_quantizer(code: &Code, roots: &RootList) -> Result<Quantizer> {
    let words = code.codewords();
    if words.is_empty() {
        return Err(Error::InvalidQuantizer("empty code".into()));
    }
    if words.iter().flat_map(|w| w.as_slice()).any(|&v| v > 1) {
        return Err(Error::InvalidQuantizer("only binary codes can be synthesized".into()));
    }
    let steps = words.len() - 1;
    if roots.len() != steps {
        return Err(Error::LengthMismatch {
            expected: steps,
            got: roots.len(),
        });
    }
    if !roots.is_strictly_increasing() {
        return Err(Error::UnsortedInput);
    }
    let seq = code.transition_sequence();
    let n = code.n_q();
    let mut per_position: Vec<Vec<f64>> = vec![Vec::new(); n];
    for (k, pos) in seq.iter().enumerate() {
        match pos {
            Some(j) => per_position[*j].push(roots.as_slice()[k]),
            None => {
                return Err(Error::InvalidQuantizer(format!(
                    "codewords {k} and {} do not differ in exactly one position",
                    k + 1
                )))
            }
        }
    }
    let first = &words[0];
    let mut polys = Vec::with_capacity(n);
    for (j, rs) in per_position.into_iter().enumerate() {
        if rs.len() % 2 == 1 {
            return Err(Error::OddTransitionCount {
                position: j,
                count: rs.len(),
            });
        }
        let sign = if first.as_slice()[j] == 0 { -1.0 } else { 1.0 };
        polys.push(RealPolynomial::from_roots(&RootList::new(rs), sign));
    }
    let delta = polys.iter().map(RealPolynomial::degree).max().unwrap_or(0);
    Quantizer::zero_threshold(delta, polys)
}

/// Quadratic construction `f_j(y) = -(y - r_j)(y - r_{n+j})` for `2n` sorted
/// thresholds: the quantizer separates all `2n + 1` intervals except the two
/// unbounded ones, which share the all-zero output.
pub fn synthesize_quantizer_theorem1(sorted: &RootList) -> Result<Quantizer> {
    let r = sorted.as_slice();
    if r.is_empty() || r.len() % 2 == 1 {
        return Err(Error::LengthMismatch {
            expected: 2 * (r.len() / 2).max(1),
            got: r.len(),
        });
    }
    if !sorted.is_strictly_increasing() {
        return Err(Error::UnsortedInput);
    }
    let n = r.len() / 2;
    let polys = (0..n)
        .map(|j| RealPolynomial::from_roots(&RootList::new(vec![r[j], r[n + j]]), -1.0))
        .collect();
    Quantizer::zero_threshold(2, polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{construct_code, TransitionSpec};

    fn roots(v: &[f64]) -> RootList {
        RootList::new(v.to_vec())
    }

    #[test]
    fn prop1_sequence() {
        let code = Code::parse_list("000,001,011,111,110,100,000").unwrap();
        let q = synthesize_quantizer(&code, &roots(&[-3.0, -2.0, -1.0, 1.0, 2.0, 3.0])).unwrap();
        let ac = q.associated_code().unwrap();
        assert_eq!(ac.code, code);
        // the leftmost digit is driven by the last quadratic: -(y+1)(y-3)
        let expect = |j: usize| {
            let jj = (3 - j) as f64;
            RealPolynomial::from_roots(&roots(&[-(4.0 - jj), jj]), -1.0)
        };
        for j in 0..3 {
            assert_eq!(q.polys()[j], expect(j));
        }
    }

    #[test]
    fn single_pulse() {
        let code = Code::parse_list("0,1,0").unwrap();
        let q = synthesize_quantizer(&code, &roots(&[-1.0, 1.0])).unwrap();
        assert_eq!(q.polys()[0].coeffs(), &[1.0, 0.0, -1.0]);
    }

    #[test]
    fn roundtrip_on_constructed_code() {
        let code = construct_code(&TransitionSpec::binary(vec![4, 4, 4])).unwrap();
        let r: Vec<f64> = (1..code.len()).map(|i| i as f64).collect();
        let q = synthesize_quantizer(&code, &roots(&r)).unwrap();
        let ac = q.associated_code().unwrap();
        assert_eq!(ac.code, code);
        for (a, b) in ac.boundaries.as_slice().iter().zip(&r) {
            assert!((a - b).abs() < 1e-9 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn synthesis_errors() {
        let code = Code::parse_list("0,1,0").unwrap();
        assert!(matches!(
            synthesize_quantizer(&code, &roots(&[1.0])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            synthesize_quantizer(&code, &roots(&[1.0, 1.0])),
            Err(Error::UnsortedInput)
        ));
        let odd = Code::parse_list("00,01,11,10").unwrap();
        assert!(matches!(
            synthesize_quantizer(&odd, &roots(&[1.0, 2.0, 3.0])),
            Err(Error::OddTransitionCount { .. })
        ));
    }

    #[test]
    fn theorem1_construction() {
        let q = synthesize_quantizer_theorem1(&roots(&[-1.0, 1.0])).unwrap();
        assert_eq!(q.polys()[0].coeffs(), &[1.0, 0.0, -1.0]);
        assert_eq!(q.associated_code().unwrap().code.to_string(), "0,1,0");

        let q = synthesize_quantizer_theorem1(&roots(&[-2.0, -1.0, 1.0, 2.0])).unwrap();
        let p = q.partition().unwrap();
        assert_eq!(p.intervals.len(), 5);
        assert_eq!(p.size(), 4);
        assert_eq!(p.labels[0], p.labels[4]);

        let q = synthesize_quantizer_theorem1(&roots(&[-3.0, -2.0, -1.0, 1.0, 2.0, 3.0])).unwrap();
        assert_eq!(q.associated_code().unwrap().code_size(), 6);

        assert!(matches!(
            synthesize_quantizer_theorem1(&roots(&[1.0, 1.0])),
            Err(Error::UnsortedInput)
        ));
    }
}
