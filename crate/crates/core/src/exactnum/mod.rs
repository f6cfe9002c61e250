//! Certified numeric kernel: exact rationals, interval enclosures, target
//! expressions, and comparisons that never silently guess.

mod compare;
mod consts;
mod fixed;
mod interval;
mod target;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub use compare::{
    cmp_interval_vs_target, cmp_rational_vs_target, cmp_rational_vs_target_with, IntervalCmp,
    PrecisionPolicy, DEFAULT_CAP_BITS, DEFAULT_INITIAL_BITS,
};
pub use consts::{inv_sqrt_pi_fixed, ln2_fixed, log_fixed, pi_fixed, sqrt_fixed};
pub use fixed::FixedInterval;
pub use interval::PrecisionInterval;
pub use target::{eval_target, TargetExpr};

pub(crate) use fixed::{div_floor, shr_floor};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `log2 |a|` for nonzero `a`, accurate to about 1e-15 relative.
pub(crate) fn bigint_log2(a: &BigInt) -> f64 {
    let a = a.abs();
    let b = a.bits();
    let sh = b.saturating_sub(64);
    let top = (&a >> sh).to_f64().unwrap_or(f64::MAX);
    top.log2() + sh as f64
}

/// `log2 |q|` for nonzero `q`.
pub(crate) fn log2_abs(q: &Rational) -> f64 {
    bigint_log2(q.numer()) - bigint_log2(q.denom())
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// `a · 2^-s` as f64 (saturating to 0 / ±inf at the extremes).
pub(crate) fn bigint_to_f64_scaled(a: &BigInt, s: i64) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let sh = a.bits().saturating_sub(64);
    let top = (a >> sh).to_f64().unwrap_or(0.0);
    ldexp(top, sh as i64 - s)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    // 64 significant bits of the quotient, then an exact power-of-two scale
    let k = 64 + q.denom().bits() as i64 - q.numer().bits() as i64;
    let scaled = if k >= 0 {
        (q.numer() << k as u64) / q.denom()
    } else {
        q.numer() / (q.denom() << (-k) as u64)
    };
    bigint_to_f64_scaled(&scaled, k)
}

/// Parse `p`, `p/q` or a plain decimal `d.ddd` into an exact rational.
/// Returns the value and whether the text was a decimal literal.
pub(crate) fn parse_rational_literal(text: &str) -> Option<(Rational, bool)> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((n, d)) = body.split_once('/') {
        if !is_digits(n) || !is_digits(d) {
            return None;
        }
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        (Rational::new(n.parse().ok()?, d), false)
    } else if let Some((int, frac)) = body.split_once('.') {
        if (int.is_empty() && frac.is_empty())
            || !(int.is_empty() || is_digits(int))
            || !(frac.is_empty() || is_digits(frac))
        {
            return None;
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        (Rational::new(num, den), true)
    } else {
        if !is_digits(body) {
            return None;
        }
        (Rational::from_integer(body.parse().ok()?), false)
    };
    Some(if neg { (-value.0, value.1) } else { value })
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(parse_rational_literal("0.8"), Some((rational(4, 5), true)));
        assert_eq!(parse_rational_literal("-3/6"), Some((rational(-1, 2), false)));
        assert_eq!(parse_rational_literal(".5"), Some((rational(1, 2), true)));
        assert_eq!(parse_rational_literal("7"), Some((rational(7, 1), false)));
        assert_eq!(parse_rational_literal("1/0"), None);
        assert_eq!(parse_rational_literal("1.2.3"), None);
        assert_eq!(parse_rational_literal("abc"), None);
        assert_eq!(parse_rational_literal("."), None);
    }

    #[test]
    fn float_conversion() {
        assert!((rational_to_f64(&rational(-1, 3)) + 1.0 / 3.0).abs() < 1e-15);
        let big = BigInt::from(1u32) << 2000u32;
        assert_eq!(bigint_to_f64_scaled(&big, 2000), 1.0);
    }
}
