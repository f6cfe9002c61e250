//! Start of the factor-2 asymptotic band
//! `(c_j/2)/n^(α+j) ≤ Δ^j x_n ≤ 2c_j/n^(α+j)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{SequenceSpec, TermStream};
use crate::error::{Error, Result};
use crate::exactnum::{inv_sqrt_pi_fixed, sqrt_fixed, FixedInterval, Rational};

pub const DEFAULT_BAND_CAP: u64 = 10_000;

const SCALE: u32 = 320;

struct Level {
    stream: TermStream,
    /// Integer part of `α + j`.
    int_pow: u32,
    half: bool,
    /// Enclosures of `c_j/2` and `2c_j`.
    low: FixedInterval,
    high: FixedInterval,
}

fn split_exponent(a: &Rational) -> Option<(u32, bool)> {
    let twice = a * Rational::from_integer(BigInt::from(2));
    if !twice.is_integer() || !twice.is_positive() {
        return None;
    }
    let t = twice.to_integer().to_u32()?;
    Some((t / 2, t % 2 == 1))
}

impl Level {
    fn new(spec: &SequenceSpec) -> Result<Self> {
        let unsupported = || {
            Error::Unsupported(format!(
                "band search needs a known constant and an integer or half-integer exponent for {spec}"
            ))
        };
        let c = spec.known_c().ok_or_else(unsupported)?;
        let alpha = spec.known_alpha().ok_or_else(unsupported)?;
        let (int_pow, half) = alpha.as_rational().and_then(split_exponent).ok_or_else(unsupported)?;
        let mut cf = FixedInterval::from_rational(&c.coeff, SCALE);
        if c.inv_sqrt_pi {
            cf = cf.mul(&inv_sqrt_pi_fixed(SCALE));
        }
        Ok(Level {
            stream: TermStream::new(spec, SCALE),
            int_pow,
            half,
            low: cf.mul_ratio(&BigInt::one(), &BigInt::from(2)),
            high: cf.scale_by(&BigInt::from(2)),
        })
    }

    /// Certified `c/2 ≤ x_n n^α ≤ 2c` for the next term; `false` when the
    /// enclosures cannot decide.
    fn next_ok(&mut self, n: u64) -> bool {
        let x = self.stream.next_term();
        let mut y = x.scale_by(&BigInt::from(n).pow(self.int_pow));
        if self.half {
            let root = sqrt_fixed(&Rational::from_integer(BigInt::from(n)), SCALE)
                .expect("square root of a positive integer");
            y = y.mul(&root);
        }
        y.lo >= self.low.hi && y.hi <= self.high.lo
    }
}

/// Smallest `N ≤ DEFAULT_BAND_CAP` such that every `n ∈ [N, 4N]` lies in the
/// band for each difference order `j ≤ k`.
pub fn band_start(spec: &SequenceSpec, k: u32) -> Result<u64> {
    band_start_with_cap(spec, k, DEFAULT_BAND_CAP)
}

pub fn band_start_with_cap(spec: &SequenceSpec, k: u32, cap: u64) -> Result<u64> {
    if cap == 0 {
        return Err(Error::InvalidArgument("band cap must be ≥ 1".into()));
    }
    let mut levels = vec![Level::new(spec)?];
    for j in 1..=k {
        levels.push(Level::new(&spec.diff(j)?)?);
    }
    let horizon = 4 * cap;
    let mut ok = vec![false; horizon as usize + 1];
    for n in 1..=horizon {
        let mut all = true;
        for level in levels.iter_mut() {
            all &= level.next_ok(n);
        }
        ok[n as usize] = all;
    }
    // next_bad[n]: smallest failing index ≥ n
    let mut next_bad = vec![u64::MAX; horizon as usize + 2];
    for n in (1..=horizon).rev() {
        next_bad[n as usize] = if ok[n as usize] { next_bad[n as usize + 1] } else { n };
    }
    (1..=cap)
        .find(|&n| next_bad[n as usize] > 4 * n)
        .ok_or(Error::BandNotFound { cap })
}
