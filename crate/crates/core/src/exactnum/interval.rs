use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::fixed::FixedInterval;
use super::{log2_abs, Rational};
use crate::error::{Error, Result};

/// A certified enclosure `[lo, hi]` of a real value.
///
/// Endpoints produced by rounding are dyadic; exact rational points (such as
/// the value of a decimal literal) are kept as they are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionInterval {
    lo: Rational,
    hi: Rational,
    bits: u32,
}

fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << k as u64)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-k) as u64)
    }
}

/// `floor(log2 |q|)` for nonzero `q`.
pub(crate) fn floor_log2_abs(q: &Rational) -> i64 {
    let n = q.numer().abs();
    let d = q.denom();
    let e = n.bits() as i64 - d.bits() as i64;
    // 2^e ≤ |q| < 2^(e+1) after at most one correction
    let lhs_ge = if e >= 0 {
        n >= (d << e as u64)
    } else {
        (&n << (-e) as u64) >= *d
    };
    if lhs_ge {
        e
    } else {
        e - 1
    }
}

/// Round `q` to a multiple of `2^k`, downward or upward.
pub(crate) fn round_to_grid(q: &Rational, k: i64, up: bool) -> Rational {
    let scaled = q / pow2(k);
    let n = scaled.numer();
    let d = scaled.denom();
    let m = if up {
        -((-n).div_floor(d))
    } else {
        n.div_floor(d)
    };
    Rational::from_integer(m) * pow2(k)
}

/// Round `q` to `bits` significant bits in the given direction.
pub(crate) fn round_relative(q: &Rational, bits: u32, up: bool) -> Rational {
    if q.is_zero() {
        return q.clone();
    }
    let e = floor_log2_abs(q);
    round_to_grid(q, e - bits as i64 + 1, up)
}

impl PrecisionInterval {
    pub fn new(lo: Rational, hi: Rational, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(PrecisionInterval { lo, hi, bits })
    }

    pub fn point(value: Rational, bits: u32) -> Self {
        PrecisionInterval {
            lo: value.clone(),
            hi: value,
            bits,
        }
    }

    pub fn zero(bits: u32) -> Self {
        Self::point(Rational::zero(), bits)
    }

    /// Build the result of an evaluation at `bits`: the fixed-point
    /// enclosure is rounded outward onto a grid fine enough that
    /// `hi − lo ≤ 2^(1−bits)·max(1, |hi|)`.
    pub(crate) fn from_fixed(f: &FixedInterval, bits: u32) -> Self {
        let lo = f.lo_rational();
        if f.is_point() {
            return Self::point(lo, bits);
        }
        let hi = f.hi_rational();
        let mag = std::cmp::max(Rational::one(), hi.abs());
        let k = floor_log2_abs(&mag) - bits as i64 - 1;
        PrecisionInterval {
            lo: round_to_grid(&lo, k, false),
            hi: round_to_grid(&hi, k, true),
            bits,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certified ordering of two enclosures; `None` when they overlap.
    pub fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Round both endpoints outward to `bits` significant bits.
    pub fn round_outward(&self, bits: u32) -> Self {
        PrecisionInterval {
            lo: round_relative(&self.lo, bits, false),
            hi: round_relative(&self.hi, bits, true),
            bits,
        }
    }

    fn combine_bits(&self, other: &Self) -> u32 {
        self.bits.min(other.bits)
    }

    pub fn add(&self, other: &Self) -> Self {
        PrecisionInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            bits: 0,
        }
        .round_outward(self.combine_bits(other))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PrecisionInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        PrecisionInterval { lo, hi, bits: 0 }.round_outward(self.combine_bits(other))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.lo <= Rational::zero() && other.hi >= Rational::zero() {
            return Err(Error::Domain("division by an interval containing zero".into()));
        }
        let inv = PrecisionInterval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
            bits: other.bits,
        };
        Ok(self.mul(&inv))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            PrecisionInterval {
                lo: Rational::zero(),
                hi: std::cmp::max(-&self.lo, self.hi.clone()),
                bits: self.bits,
            }
        }
    }

    /// `(log10 lo, log10 hi)`; `-inf` for a zero endpoint. Only meaningful
    /// for nonnegative intervals.
    pub fn log10_bounds(&self) -> (f64, f64) {
        let f = |q: &Rational| {
            if q.is_zero() {
                f64::NEG_INFINITY
            } else {
                log2_abs(q) * std::f64::consts::LOG10_2
            }
        };
        (f(&self.lo), f(&self.hi))
    }

    pub fn mid_f64(&self) -> f64 {
        super::rational_to_f64(&self.midpoint())
    }
}

impl fmt::Display for PrecisionInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.17e}, {:.17e}]",
            super::rational_to_f64(&self.lo),
            super::rational_to_f64(&self.hi)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn floor_log2_cases() {
        assert_eq!(floor_log2_abs(&rat(1, 1)), 0);
        assert_eq!(floor_log2_abs(&rat(3, 1)), 1);
        assert_eq!(floor_log2_abs(&rat(4, 1)), 2);
        assert_eq!(floor_log2_abs(&rat(1, 3)), -2);
        assert_eq!(floor_log2_abs(&rat(-1, 4)), -2);
        assert_eq!(floor_log2_abs(&rat(5, 4)), 0);
    }

    #[test]
    fn rounding_keeps_requested_bits() {
        let q = rat(1, 3);
        let lo = round_relative(&q, 10, false);
        let hi = round_relative(&q, 10, true);
        assert!(lo < q && q < hi);
        assert!(&hi - &lo <= rat(1, 3) * pow2(-9));
    }

    #[test]
    fn from_fixed_width_bound() {
        let f = FixedInterval::from_rational(&rat(-7, 3), 80);
        let iv = PrecisionInterval::from_fixed(&f, 64);
        let bound = pow2(1 - 64) * std::cmp::max(Rational::one(), iv.hi().abs());
        assert!(iv.width() <= bound);
        assert!(iv.contains(&rat(-7, 3)));
    }

    #[test]
    fn division_by_zero_interval_rejected() {
        let a = PrecisionInterval::point(rat(1, 1), 32);
        let z = PrecisionInterval::new(rat(-1, 2), rat(1, 2), 32).unwrap();
        assert!(a.div(&z).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn outward_rounding_contains_exact(p in small_rational(), q in small_rational(), bits in 2u32..80) {
            let a = PrecisionInterval::point(p.clone(), bits);
            let b = PrecisionInterval::point(q.clone(), bits);
            prop_assert!(a.add(&b).contains(&(&p + &q)));
            prop_assert!(a.sub(&b).contains(&(&p - &q)));
            prop_assert!(a.mul(&b).contains(&(&p * &q)));
            if !q.is_zero() {
                prop_assert!(a.div(&b).unwrap().contains(&(&p / &q)));
            }
        }
    }
}
