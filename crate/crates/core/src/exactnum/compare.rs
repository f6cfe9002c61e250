use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::consts::log_fixed;
use super::interval::PrecisionInterval;
use super::target::{eval_target, TargetExpr};
use super::Rational;
use crate::error::{Error, Result};

pub const DEFAULT_INITIAL_BITS: u32 = 256;
pub const DEFAULT_CAP_BITS: u32 = 1 << 20;

/// Start precision and hard cap for escalating comparisons. Precision
/// doubles on every undecided comparison; passing the cap is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: DEFAULT_INITIAL_BITS,
            cap_bits: DEFAULT_CAP_BITS,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(initial_bits: u32, cap_bits: u32) -> Result<Self> {
        if initial_bits < 2 || cap_bits < initial_bits {
            return Err(Error::InvalidArgument(format!(
                "precision policy needs 2 ≤ initial ({initial_bits}) ≤ cap ({cap_bits})"
            )));
        }
        Ok(PrecisionPolicy {
            initial_bits,
            cap_bits,
        })
    }

    /// The escalation ladder `initial, 2·initial, …` up to the cap.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits;
        std::iter::successors(Some(self.initial_bits), move |&b| {
            b.checked_mul(2).filter(|&n| n <= cap)
        })
    }
}

/// Exact ordering of `a` against the value of `t`, using the default policy.
pub fn cmp_rational_vs_target(a: &Rational, t: &TargetExpr) -> Result<Ordering> {
    cmp_rational_vs_target_with(a, t, &PrecisionPolicy::default())
}

/// `a` vs `lo·2^-s`, exactly.
fn cmp_scaled(a: &Rational, v: &BigInt, s: u32) -> Ordering {
    (a.numer() << s).cmp(&(v * a.denom()))
}

pub fn cmp_rational_vs_target_with(
    a: &Rational,
    t: &TargetExpr,
    policy: &PrecisionPolicy,
) -> Result<Ordering> {
    t.check_domain()?;
    if let Some(q) = t.rational_value() {
        return Ok(a.cmp(&q));
    }
    match t {
        TargetExpr::SqrtOf(r) => {
            if a.is_negative() {
                return Ok(Ordering::Less);
            }
            Ok((a * a).cmp(r))
        }
        TargetExpr::LogOf(r) => {
            for bits in policy.ladder() {
                let enc = log_fixed(r, bits)?;
                if cmp_scaled(a, &enc.lo, bits) == Ordering::Less {
                    return Ok(Ordering::Less);
                }
                if cmp_scaled(a, &enc.hi, bits) == Ordering::Greater {
                    return Ok(Ordering::Greater);
                }
            }
            Err(Error::UndecidableAtBudget {
                bits: policy.cap_bits as u64,
            })
        }
        _ => unreachable!("rational-valued targets handled above"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalCmp {
    Less,
    Greater,
    /// The enclosures still overlap at the budget. `equality_candidate` is
    /// set when both sides collapsed to the same exact point.
    Undecided { equality_candidate: bool },
}

/// Compare an enclosure against a target, refining the target up to
/// `budget` bits. Only disjoint enclosures produce `Less`/`Greater`.
pub fn cmp_interval_vs_target(
    a: &PrecisionInterval,
    t: &TargetExpr,
    budget: u32,
) -> Result<IntervalCmp> {
    t.check_domain()?;
    let mut bits = budget.clamp(2, 64);
    loop {
        let enc = eval_target(t, bits)?;
        if a.hi() < enc.lo() {
            return Ok(IntervalCmp::Less);
        }
        if a.lo() > enc.hi() {
            return Ok(IntervalCmp::Greater);
        }
        if enc.is_point() || bits >= budget {
            let equality_candidate = enc.is_point() && a.is_point() && a.lo() == enc.lo();
            return Ok(IntervalCmp::Undecided { equality_candidate });
        }
        bits = bits.saturating_mul(2).min(budget);
        debug_assert!(!a.width().is_zero() || !enc.width().is_zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;
    use proptest::prelude::*;

    #[test]
    fn sqrt_comparisons_by_squaring() {
        let two = TargetExpr::SqrtOf(rational(2, 1));
        assert_eq!(cmp_rational_vs_target(&rational(7, 5), &two).unwrap(), Ordering::Less);
        assert_eq!(cmp_rational_vs_target(&rational(17, 12), &two).unwrap(), Ordering::Greater);
        assert_eq!(cmp_rational_vs_target(&rational(-2, 1), &two).unwrap(), Ordering::Less);
        let four = TargetExpr::SqrtOf(rational(4, 1));
        assert_eq!(cmp_rational_vs_target(&rational(2, 1), &four).unwrap(), Ordering::Equal);
    }

    #[test]
    fn log_comparison_escalates() {
        // log 2 = 0.693147...; 5/6 = 0.8333
        let l2 = TargetExpr::LogOf(rational(2, 1));
        assert_eq!(cmp_rational_vs_target(&rational(5, 6), &l2).unwrap(), Ordering::Greater);
        assert_eq!(cmp_rational_vs_target(&rational(1, 2), &l2).unwrap(), Ordering::Less);
        // 0.69314718055994530941723212145817656807 ± 1e-38
        let close = Rational::new(
            "69314718055994530941723212145817656807".parse().unwrap(),
            BigInt::from(10u32).pow(38),
        );
        assert_eq!(cmp_rational_vs_target(&close, &l2).unwrap(), Ordering::Less);
        assert_eq!(
            cmp_rational_vs_target(&rational(0, 1), &TargetExpr::LogOf(rational(1, 1))).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn log_comparison_hits_cap() {
        let policy = PrecisionPolicy::new(8, 16).unwrap();
        let close = Rational::new(
            "69314718055994530941723212145817656807".parse().unwrap(),
            BigInt::from(10u32).pow(38),
        );
        let err = cmp_rational_vs_target_with(&close, &TargetExpr::LogOf(rational(2, 1)), &policy);
        assert_eq!(err, Err(Error::UndecidableAtBudget { bits: 16 }));
    }

    #[test]
    fn interval_comparisons() {
        let two = TargetExpr::SqrtOf(rational(2, 1));
        let a = PrecisionInterval::new(rational(1, 1), rational(11, 10), 64).unwrap();
        assert_eq!(cmp_interval_vs_target(&a, &two, 256).unwrap(), IntervalCmp::Less);
        let b = PrecisionInterval::new(rational(141, 100), rational(142, 100), 64).unwrap();
        assert_eq!(
            cmp_interval_vs_target(&b, &two, 4).unwrap(),
            IntervalCmp::Undecided { equality_candidate: false }
        );
        let p = PrecisionInterval::point(rational(4, 5), 64);
        let dec: TargetExpr = "0.8".parse().unwrap();
        for budget in [2, 64, 4096] {
            assert_eq!(
                cmp_interval_vs_target(&p, &dec, budget).unwrap(),
                IntervalCmp::Undecided { equality_candidate: true }
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn sqrt_matches_squaring_oracle(
            an in -5000i64..5000, ad in 1i64..5000,
            rn in 0i64..5000, rd in 1i64..5000,
        ) {
            let a = rational(an, ad);
            let r = rational(rn, rd);
            let got = cmp_rational_vs_target(&a, &TargetExpr::SqrtOf(r.clone())).unwrap();
            // oracle: sign first, then compare a^2 with r in integers
            let expected = if an < 0 {
                Ordering::Less
            } else {
                let lhs = BigInt::from(an) * BigInt::from(an) * BigInt::from(rd);
                let rhs = BigInt::from(rn) * BigInt::from(ad) * BigInt::from(ad);
                lhs.cmp(&rhs)
            };
            prop_assert_eq!(got, expected);
        }
    }
}
