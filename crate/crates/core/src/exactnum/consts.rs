//! Certified enclosures of the irrational quantities the experiments need:
//! square roots of rationals, logarithms of rationals and `π`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::fixed::{div_ceil, div_floor, FixedInterval};
use super::Rational;
use crate::error::{Error, Result};

/// Enclosure of `√q` at `2^-scale`.
pub fn sqrt_fixed(q: &Rational, scale: u32) -> Result<FixedInterval> {
    if q.is_negative() {
        return Err(Error::Domain(format!("sqrt of negative number {q}")));
    }
    let shifted = q.numer() << (2 * scale);
    let radicand = div_floor(&shifted, q.denom());
    let root = radicand.sqrt();
    // root^2 * den == num * 4^scale iff the enclosure is exact
    let exact = &root * &root * q.denom() == shifted;
    let hi = if exact { root.clone() } else { &root + 1u32 };
    Ok(FixedInterval {
        lo: root,
        hi,
        scale,
    })
}

fn guard_bits(scale: u32) -> u32 {
    32 + (32 - scale.leading_zeros())
}

/// `atanh(z) = Σ z^(2k+1)/(2k+1)` for rational `|z| ≤ 1/3`.
fn atanh_fixed(z: &Rational, scale: u32) -> FixedInterval {
    if z.is_zero() {
        return FixedInterval::zero(scale);
    }
    let negative = z.is_negative();
    let a = z.numer().abs();
    let b = z.denom().clone();
    debug_assert!(&a * 3u32 <= b);
    let w = scale + guard_bits(scale);
    let a2 = &a * &a;
    let b2 = &b * &b;
    let shifted = &a << w;
    let mut p_lo = div_floor(&shifted, &b);
    let mut p_hi = div_ceil(&shifted, &b);
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        sum_lo += div_floor(&p_lo, &d);
        sum_hi += div_ceil(&p_hi, &d);
        p_lo = div_floor(&(&p_lo * &a2), &b2);
        p_hi = div_ceil(&(&p_hi * &a2), &b2);
        k += 1;
        if p_hi <= BigInt::one() {
            // remaining tail ≤ |z|^(2k+1) / (1 - z^2) ≤ (9/8) p_hi
            sum_hi += div_ceil(&(&p_hi * 9u32), &BigInt::from(8u32)) + 1u32;
            break;
        }
    }
    let out = FixedInterval {
        lo: sum_lo,
        hi: sum_hi,
        scale: w,
    }
    .rescale(scale);
    if negative {
        out.neg()
    } else {
        out
    }
}

static LN2_CACHE: Mutex<Option<FixedInterval>> = Mutex::new(None);
static PI_CACHE: Mutex<Option<FixedInterval>> = Mutex::new(None);

fn cached(
    cache: &Mutex<Option<FixedInterval>>,
    scale: u32,
    compute: impl FnOnce(u32) -> FixedInterval,
) -> FixedInterval {
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = guard.as_ref() {
        if c.scale >= scale {
            return c.rescale(scale);
        }
    }
    let fresh = compute(scale);
    *guard = Some(fresh.clone());
    fresh
}

pub fn ln2_fixed(scale: u32) -> FixedInterval {
    cached(&LN2_CACHE, scale, |s| {
        let third = Rational::new(BigInt::one(), BigInt::from(3));
        let w = s + 2;
        atanh_fixed(&third, w)
            .scale_by(&BigInt::from(2))
            .rescale(s)
    })
}

/// Enclosure of `log(q)` for `q > 0`.
pub fn log_fixed(q: &Rational, scale: u32) -> Result<FixedInterval> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("log of non-positive number {q}")));
    }
    if q.is_one() {
        return Ok(FixedInterval::zero(scale));
    }
    let two_thirds = Rational::new(BigInt::from(2), BigInt::from(3));
    let four_thirds = Rational::new(BigInt::from(4), BigInt::from(3));
    let mut e: i64 = q.numer().bits() as i64 - q.denom().bits() as i64;
    let reduced = |e: i64| -> Rational {
        if e >= 0 {
            q / Rational::from_integer(BigInt::one() << e as u64)
        } else {
            q * Rational::from_integer(BigInt::one() << (-e) as u64)
        }
    };
    let mut m = reduced(e);
    while m >= four_thirds {
        e += 1;
        m = reduced(e);
    }
    while m < two_thirds {
        e -= 1;
        m = reduced(e);
    }
    let one = Rational::one();
    let z = (&m - &one) / (&m + &one);
    let extra = 64 - e.unsigned_abs().leading_zeros();
    let w = scale + 4 + extra;
    let series = atanh_fixed(&z, w).scale_by(&BigInt::from(2));
    let out = if e == 0 {
        series
    } else {
        ln2_fixed(w).scale_by(&BigInt::from(e)).add(&series)
    };
    Ok(out.rescale(scale))
}

/// `atan(1/x)` for an integer `x ≥ 2`, alternating series with outward bounds.
fn atan_inv_fixed(x: u32, scale: u32) -> FixedInterval {
    let w = scale + guard_bits(scale);
    let xb = BigInt::from(x);
    let x2 = BigInt::from(x as u64 * x as u64);
    let unit = BigInt::one() << w;
    let mut p_lo = div_floor(&unit, &xb);
    let mut p_hi = div_ceil(&unit, &xb);
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        let t_lo = div_floor(&p_lo, &d);
        let t_hi = div_ceil(&p_hi, &d);
        if k.is_multiple_of(2) {
            sum_lo += t_lo;
            sum_hi += t_hi;
        } else {
            sum_lo -= t_hi;
            sum_hi -= t_lo;
        }
        p_lo = div_floor(&p_lo, &x2);
        p_hi = div_ceil(&p_hi, &x2);
        k += 1;
        if p_hi <= BigInt::one() {
            sum_lo -= 1u32;
            sum_hi += 1u32;
            break;
        }
    }
    FixedInterval {
        lo: sum_lo,
        hi: sum_hi,
        scale: w,
    }
    .rescale(scale)
}

/// Machin: `π = 16 atan(1/5) − 4 atan(1/239)`.
pub fn pi_fixed(scale: u32) -> FixedInterval {
    cached(&PI_CACHE, scale, |s| {
        let w = s + 8;
        let a = atan_inv_fixed(5, w).scale_by(&BigInt::from(16));
        let b = atan_inv_fixed(239, w).scale_by(&BigInt::from(4));
        a.sub(&b).rescale(s)
    })
}

/// Enclosure of `1/√π`.
pub fn inv_sqrt_pi_fixed(scale: u32) -> FixedInterval {
    let w = scale + 16;
    let pi = pi_fixed(w);
    // √(v·2^-w)·2^w = √(v·2^w)
    let root_lo = (&pi.lo << w).sqrt();
    let hi_rad = &pi.hi << w;
    let r = hi_rad.sqrt();
    let root_hi = if &r * &r == hi_rad { r } else { r + 1u32 };
    let unit2 = BigInt::one() << (2 * w);
    FixedInterval {
        lo: div_floor(&unit2, &root_hi),
        hi: div_ceil(&unit2, &root_lo),
        scale: w,
    }
    .rescale(scale)
}
