//! Executable checks of the window condition `x_j ≤ x_{j+1} + … + x_{j+ℓ}`,
//! the bookkeeping inequality `1/N^k ≤ (1/5) Σ_{m=1}^{10} 1/(N+m)^(k+1)`,
//! and certified enclosures of convergent sums.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{
    inv_sqrt_pi_fixed, sqrt_fixed, FixedInterval, PrecisionInterval, PrecisionPolicy, Rational,
};
use crate::moments::{band_start_with_cap, exact_terms, SequenceSpec, TermStream};
use crate::scalar::{powi, Scalar};

/// `x_j ≤ x_{j+1} + … + x_{j+ℓ}` for terms given as a slice `x_1, x_2, …`.
pub fn window_holds<S: Scalar>(terms: &[S], j: usize, ell: usize) -> bool {
    let tail = terms[j..j + ell].iter().cloned().fold(S::zero(), |a, b| a + b);
    terms[j - 1] <= tail
}

/// Exact coefficients of `x_from..` when the window comparison can be made
/// on them (a common `1/√π` factor does not change the comparison).
fn exact_coeffs(spec: &SequenceSpec, from: u64, count: usize) -> Option<Vec<Rational>> {
    exact_terms(spec, from, count).map(|v| v.into_iter().map(|t| t.coeff).collect())
}

/// Certified `Σ tail − x_j` sign from fixed-point enclosures, escalating.
fn window_by_enclosure(spec: &SequenceSpec, j: u64, ell: u64, policy: &PrecisionPolicy) -> Result<bool> {
    for bits in policy.ladder() {
        let mut s = TermStream::starting_at(spec, bits, j);
        let head = s.next_term();
        let mut diff = head.neg();
        for _ in 0..ell {
            diff.add_signed_assign(&s.next_term(), true);
        }
        if !diff.lo.is_negative() {
            return Ok(true);
        }
        if diff.hi.is_negative() {
            return Ok(false);
        }
        if bits > crate::moments::CANTOR_SCALE + 64 && !spec.has_inv_sqrt_pi_factor() {
            // table-limited enclosures do not sharpen further
            break;
        }
    }
    Err(Error::UndecidableAtBudget {
        bits: policy.cap_bits as u64,
    })
}

pub fn diamond_window(spec: &SequenceSpec, j: u64, ell: u64) -> Result<bool> {
    if j < 1 || ell < 1 {
        return Err(Error::InvalidArgument("need j ≥ 1 and ℓ ≥ 1".into()));
    }
    match exact_coeffs(spec, j, ell as usize + 1) {
        Some(c) => Ok(window_holds(&c, 1, ell as usize)),
        None => window_by_enclosure(spec, j, ell, &PrecisionPolicy::default()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondReport {
    pub spec: SequenceSpec,
    pub ell: u64,
    pub j_range: (u64, u64),
    pub first_failure: Option<u64>,
    pub last_failure: Option<u64>,
    pub failures: u64,
}

impl DiamondReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Scan `j = 1..=j_max`.
pub fn diamond_uniform(spec: &SequenceSpec, j_max: u64, ell: u64) -> Result<DiamondReport> {
    if j_max < 1 || ell < 1 {
        return Err(Error::InvalidArgument("need j_max ≥ 1 and ℓ ≥ 1".into()));
    }
    let mut failed = Vec::new();
    match exact_coeffs(spec, 1, (j_max + ell) as usize) {
        Some(c) => {
            // sliding window sum of x_{j+1..j+ℓ}
            let mut tail: Rational = c[1..=ell as usize].iter().sum();
            for j in 1..=j_max as usize {
                if c[j - 1] > tail {
                    failed.push(j as u64);
                }
                if j < j_max as usize {
                    tail -= &c[j];
                    tail += &c[j + ell as usize];
                }
            }
        }
        None => {
            for j in 1..=j_max {
                if !diamond_window(spec, j, ell)? {
                    failed.push(j);
                }
            }
        }
    }
    Ok(DiamondReport {
        spec: spec.clone(),
        ell,
        j_range: (1, j_max),
        first_failure: failed.first().copied(),
        last_failure: failed.last().copied(),
        failures: failed.len() as u64,
    })
}

/// Both sides of `1/N^k ≤ (1/5) Σ_{m=1}^{10} 1/(N+m)^(k+1)` and the verdict.
///
/// As written this never holds for `N, k ≥ 1`: each summand is below
/// `1/N^(k+1)`, so the right side is below `2/N^(k+1) ≤ 1/N^k` once `N ≥ 2`,
/// and below `1/5` at `N = 1`. It is kept verbatim as a diagnostic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section33<S> {
    pub lhs: S,
    pub rhs: S,
    pub holds: bool,
}

/// The inequality in any scalar type; exact for `Rational`.
pub fn section33_in<S: Scalar>(n: u64, k: u32) -> Result<Section33<S>> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidArgument("need N ≥ 1 and k ≥ 1".into()));
    }
    let lhs = S::one() / powi(&S::from_u64(n), k);
    let sum = (1..=10u64).fold(S::zero(), |acc, m| acc + S::one() / powi(&S::from_u64(n + m), k + 1));
    let rhs = sum / S::from_u64(5);
    let holds = lhs <= rhs;
    Ok(Section33 { lhs, rhs, holds })
}

pub fn section33_inequality(n: u64, k: u32) -> Result<Section33<Rational>> {
    section33_in(n, k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReachableSum {
    Divergent,
    Enclosure(PrecisionInterval),
}

pub const DEFAULT_PARTIAL_TERMS: u64 = 1 << 21;

pub fn reachable_sum(spec: &SequenceSpec, bits: u32) -> Result<ReachableSum> {
    reachable_sum_with(spec, bits, DEFAULT_PARTIAL_TERMS)
}

/// Sum of all terms: divergent when `α ≤ 1`; otherwise the partial sum of
/// `m` terms plus a tail enclosed by integrating the factor-2 band
/// `(c/2) n^-α ≤ x_n ≤ 2c n^-α`, which must hold from `m` on.
pub fn reachable_sum_with(spec: &SequenceSpec, bits: u32, m: u64) -> Result<ReachableSum> {
    let alpha = spec
        .known_alpha()
        .ok_or_else(|| Error::Unsupported(format!("sum of {spec} without a known exponent")))?;
    let one = Rational::one();
    match alpha.as_rational() {
        Some(a) if *a <= one => return Ok(ReachableSum::Divergent),
        None if alpha.to_f64() <= 1.0 => return Ok(ReachableSum::Divergent),
        _ => {}
    }
    let a = alpha
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("tail bound for {spec}")))?;
    let c = spec
        .known_c()
        .ok_or_else(|| Error::Unsupported(format!("tail bound for {spec} without a known constant")))?;
    if bits < 2 || m < 1 {
        return Err(Error::InvalidArgument("need bits ≥ 2 and m ≥ 1".into()));
    }
    let band = band_start_with_cap(spec, 0, m.min(crate::moments::DEFAULT_BAND_CAP))?;
    if band > m {
        return Err(Error::BandNotFound { cap: m });
    }
    let scale = bits + 64 - m.leading_zeros() + 16;
    let mut stream = TermStream::new(spec, scale);
    let mut sum = FixedInterval::zero(scale);
    for _ in 0..m {
        sum.add_signed_assign(&stream.next_term(), true);
    }
    // ∫_{M+1}^∞ t^-α dt = (M+1)^(1−α)/(α−1) and ∫_M^∞ similarly
    let e = &a - &one;
    let lower = power_neg(m + 1, &e, scale)?.mul_ratio(&BigInt::one(), &BigInt::from(2));
    let upper = power_neg(m, &e, scale)?.scale_by(&BigInt::from(2));
    let mut cf = FixedInterval::from_rational(&(c.coeff / &e), scale);
    if c.inv_sqrt_pi {
        cf = cf.mul(&inv_sqrt_pi_fixed(scale));
    }
    let tail_lo = lower.mul(&cf);
    let tail_hi = upper.mul(&cf);
    let total = FixedInterval {
        lo: &sum.lo + &tail_lo.lo,
        hi: &sum.hi + &tail_hi.hi,
        scale,
    };
    Ok(ReachableSum::Enclosure(PrecisionInterval::from_fixed(&total, bits)))
}

/// Enclosure of `n^-e` for `e` a positive integer or half-integer.
fn power_neg(n: u64, e: &Rational, scale: u32) -> Result<FixedInterval> {
    let twice = e * Rational::from_integer(BigInt::from(2));
    if !twice.is_integer() || !twice.is_positive() {
        return Err(Error::Unsupported(format!("tail exponent {e}")));
    }
    let t = twice.to_integer();
    let int_part = (&t / 2u32).try_into().map_err(|_| Error::Unsupported("exponent too large".into()))?;
    let unit = BigInt::one() << scale;
    let mut v = FixedInterval::reciprocal(&BigInt::from(n).pow(int_part), &unit, scale);
    if (&t % 2u32).is_one() {
        let r = sqrt_fixed(&Rational::new(BigInt::one(), BigInt::from(n)), scale)?;
        v = v.mul(&r);
    }
    Ok(v)
}
