//! Fixed-point enclosures `[lo, hi] · 2^-scale` over arbitrary-size integers.
//!
//! This is the workhorse representation for long runs: additions are exact,
//! and every operation that has to round does so outward, so the enclosure
//! property is preserved by construction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub scale: u32,
}

pub(crate) fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// `floor(a / 2^k)`.
pub(crate) fn shr_floor(a: &BigInt, k: u32) -> BigInt {
    if a.is_negative() {
        -shr_ceil(&-a, k)
    } else {
        a >> k
    }
}

/// `ceil(a / 2^k)`.
pub(crate) fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    if a.is_negative() {
        -shr_floor(&-a, k)
    } else {
        let q: BigInt = a >> k;
        if (&q << k) == *a {
            q
        } else {
            q + 1
        }
    }
}

impl FixedInterval {
    pub fn zero(scale: u32) -> Self {
        FixedInterval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            scale,
        }
    }

    pub fn point(value: BigInt, scale: u32) -> Self {
        FixedInterval {
            lo: value.clone(),
            hi: value,
            scale,
        }
    }

    pub fn from_rational(q: &Rational, scale: u32) -> Self {
        let num = q.numer() << scale;
        FixedInterval {
            lo: div_floor(&num, q.denom()),
            hi: div_ceil(&num, q.denom()),
            scale,
        }
    }

    /// Enclosure of `1/d` for a positive integer `d`.
    pub fn reciprocal(d: &BigInt, unit: &BigInt, scale: u32) -> Self {
        let (q, r) = unit.div_rem(d);
        let hi = if r.is_zero() { q.clone() } else { &q + 1u32 };
        FixedInterval { lo: q, hi, scale }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width_units(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn lo_rational(&self) -> Rational {
        Rational::new(self.lo.clone(), BigInt::one() << self.scale)
    }

    pub fn hi_rational(&self) -> Rational {
        Rational::new(self.hi.clone(), BigInt::one() << self.scale)
    }

    pub fn neg(&self) -> Self {
        FixedInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            scale: self.scale,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.scale, other.scale);
        FixedInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            scale: self.scale,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `self += other` when `positive`, else `self -= other`.
    pub fn add_signed_assign(&mut self, other: &Self, positive: bool) {
        debug_assert_eq!(self.scale, other.scale);
        if positive {
            self.lo += &other.lo;
            self.hi += &other.hi;
        } else {
            self.lo -= &other.hi;
            self.hi -= &other.lo;
        }
    }

    pub fn scale_by(&self, k: &BigInt) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            FixedInterval { lo: b, hi: a, scale: self.scale }
        } else {
            FixedInterval { lo: a, hi: b, scale: self.scale }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.scale, other.scale);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().cloned().unwrap_or_default();
        let max = products.iter().max().cloned().unwrap_or_default();
        FixedInterval {
            lo: shr_floor(&min, self.scale),
            hi: shr_ceil(&max, self.scale),
            scale: self.scale,
        }
    }

    /// Multiply by the positive rational `num/den` with outward rounding.
    pub fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Self {
        FixedInterval {
            lo: div_floor(&(&self.lo * num), den),
            hi: div_ceil(&(&self.hi * num), den),
            scale: self.scale,
        }
    }

    /// Re-express at another scale, rounding outward when precision drops.
    pub fn rescale(&self, scale: u32) -> Self {
        if scale >= self.scale {
            let k = scale - self.scale;
            FixedInterval {
                lo: &self.lo << k,
                hi: &self.hi << k,
                scale,
            }
        } else {
            let k = self.scale - scale;
            FixedInterval {
                lo: shr_floor(&self.lo, k),
                hi: shr_ceil(&self.hi, k),
                scale,
            }
        }
    }

    /// Enclosure of `|v|` for `v` in `self`.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let top = std::cmp::max(-&self.lo, self.hi.clone());
            FixedInterval {
                lo: BigInt::zero(),
                hi: top,
                scale: self.scale,
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Midpoint as f64, for diagnostics only.
    pub fn mid_f64(&self) -> f64 {
        let sum = &self.lo + &self.hi;
        crate::exactnum::bigint_to_f64_scaled(&sum, self.scale as i64 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_round_in_the_requested_direction() {
        let a = BigInt::from(-5);
        assert_eq!(shr_floor(&a, 1), BigInt::from(-3));
        assert_eq!(shr_ceil(&a, 1), BigInt::from(-2));
        let b = BigInt::from(5);
        assert_eq!(shr_floor(&b, 1), BigInt::from(2));
        assert_eq!(shr_ceil(&b, 1), BigInt::from(3));
        assert_eq!(shr_ceil(&BigInt::from(8), 2), BigInt::from(2));
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let q = Rational::new(BigInt::from(1), BigInt::from(3));
        let f = FixedInterval::from_rational(&q, 10);
        assert_eq!(f.hi.clone() - f.lo.clone(), BigInt::one());
        assert!(f.lo_rational() <= q && q <= f.hi_rational());
        let neg = FixedInterval::from_rational(&-q.clone(), 10);
        assert!(neg.lo_rational() <= -q.clone() && -q <= neg.hi_rational());
    }

    #[test]
    fn rescale_keeps_enclosure() {
        let q = Rational::new(BigInt::from(-7), BigInt::from(11));
        let f = FixedInterval::from_rational(&q, 40).rescale(12);
        assert!(f.lo_rational() <= q && q <= f.hi_rational());
    }

    #[test]
    fn abs_of_straddling_interval() {
        let f = FixedInterval {
            lo: BigInt::from(-3),
            hi: BigInt::from(2),
            scale: 0,
        };
        let a = f.abs();
        assert_eq!(a.lo, BigInt::zero());
        assert_eq!(a.hi, BigInt::from(3));
    }
}
