//! Exact signed prefix sums `Σ ε_k x_k` by pairwise (binary-splitting)
//! accumulation, which keeps intermediate denominators balanced.

use num_traits::Zero;

use crate::exactnum::Rational;
use crate::moments::{exact_terms, SequenceSpec};

const CHUNK: usize = 2048;

/// Exact `Σ_{k ≤ signs.len()} ε_k x_k` as `(coeff, inv_sqrt_pi)`, or `None`
/// when the sequence has no exact form over the range.
pub(crate) fn signed_exact_sum(spec: &SequenceSpec, signs: &[bool]) -> Option<(Rational, bool)> {
    // stack of (level, partial sum); equal levels merge
    let mut stack: Vec<(u32, Rational)> = Vec::new();
    let mut inv_sqrt_pi = spec.has_inv_sqrt_pi_factor();
    for (c, chunk) in signs.chunks(CHUNK).enumerate() {
        let from = (c * CHUNK) as u64 + 1;
        let terms = exact_terms(spec, from, chunk.len())?;
        for (t, &plus) in terms.into_iter().zip(chunk) {
            inv_sqrt_pi = t.inv_sqrt_pi;
            let mut item = (0u32, if plus { t.coeff } else { -t.coeff });
            while let Some(top) = stack.last() {
                if top.0 != item.0 {
                    break;
                }
                let (level, q) = stack.pop().expect("non-empty");
                item = (level + 1, q + item.1);
            }
            stack.push(item);
        }
    }
    let total = stack
        .into_iter()
        .rev()
        .fold(Rational::zero(), |acc, (_, q)| acc + q);
    Some((total, inv_sqrt_pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;

    #[test]
    fn matches_naive_sum() {
        let signs: Vec<bool> = (0..5000).map(|k| (k * 7 + k / 3) % 5 < 2).collect();
        let (fast, isp) = signed_exact_sum(&SequenceSpec::Harmonic, &signs).unwrap();
        assert!(!isp);
        let mut naive = Rational::zero();
        for (k, &s) in signs.iter().enumerate() {
            let t = rational(1, k as i64 + 1);
            if s {
                naive += t;
            } else {
                naive -= t;
            }
        }
        assert_eq!(fast, naive);
        assert_eq!(signed_exact_sum(&SequenceSpec::Harmonic, &[]).unwrap().0, Rational::zero());
    }

    #[test]
    fn gamma_ratio_keeps_factor_and_cantor_limits() {
        assert!(signed_exact_sum(&SequenceSpec::GammaRatio, &[true, false]).unwrap().1);
        assert!(signed_exact_sum(&SequenceSpec::Cantor, &[true; 100]).is_none());
    }
}
