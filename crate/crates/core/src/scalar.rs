//! Scalar abstraction shared by the code paths that are indifferent to the
//! number type: exact window checks, the power-law fit and the vector walk.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::{rational_to_f64, Rational};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether `+ − × ÷` are exact in this type.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_u64(n: u64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q) as f32
    }

    fn from_u64(n: u64) -> Self {
        n as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Sum of a slice in the scalar's own arithmetic.
pub fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().cloned().fold(S::zero(), |acc, x| acc + x)
}

/// `n^k` in the scalar's arithmetic.
pub fn powi<S: Scalar>(base: &S, k: u32) -> S {
    (0..k).fold(S::one(), |acc, _| acc * base.clone())
}


/// Fixed-point real `m · 2^-BITS` with truncating multiplication and
/// division. Deterministic, not certified.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HpFloat<const BITS: u32> {
    pub(crate) m: BigInt,
}

/// The default working precision of the vector walk.
pub type Hp128 = HpFloat<128>;

impl<const BITS: u32> HpFloat<BITS> {
    pub fn from_fixed(m: BigInt, scale: u32) -> Self {
        let m = if scale >= BITS {
            crate::exactnum::shr_floor(&m, scale - BITS)
        } else {
            m << (BITS - scale)
        };
        HpFloat { m }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }
}

impl<const BITS: u32> Add for HpFloat<BITS> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        HpFloat { m: self.m + o.m }
    }
}

impl<const BITS: u32> Sub for HpFloat<BITS> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        HpFloat { m: self.m - o.m }
    }
}

impl<const BITS: u32> Mul for HpFloat<BITS> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        HpFloat {
            m: crate::exactnum::shr_floor(&(self.m * o.m), BITS),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<const BITS: u32> Div for HpFloat<BITS> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        HpFloat {
            m: crate::exactnum::div_floor(&(self.m << BITS), &o.m),
        }
    }
}

impl<const BITS: u32> Neg for HpFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        HpFloat { m: -self.m }
    }
}

impl<const BITS: u32> Zero for HpFloat<BITS> {
    fn zero() -> Self {
        HpFloat { m: BigInt::zero() }
    }
    fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
}

impl<const BITS: u32> One for HpFloat<BITS> {
    fn one() -> Self {
        HpFloat {
            m: BigInt::one() << BITS,
        }
    }
}

impl<const BITS: u32> Scalar for HpFloat<BITS> {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        HpFloat {
            m: crate::exactnum::div_floor(&(q.numer() << BITS), q.denom()),
        }
    }

    fn to_f64(&self) -> f64 {
        crate::exactnum::bigint_to_f64_scaled(&self.m, BITS as i64)
    }
}
