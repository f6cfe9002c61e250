//! Moments of the middle-third Cantor measure.
//!
//! Self-similarity `μ = ½(μ∘S₀⁻¹ + μ∘S₁⁻¹)` with `S₀(t) = t/3`,
//! `S₁(t) = t/3 + 2/3` gives, for `n ≥ 1`,
//!
//! ```text
//! m_n = Σ_{k<n} C(n,k) (1/3)^k (2/3)^(n−k) m_k / (2 (1 − 3^−n))
//! ```
//!
//! Exact rationals are cheap only for small `n` (denominators grow
//! quadratically), so larger indices come from a fixed-point evaluation of
//! the same recurrence at `2^-126` with outward rounding.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::{FixedInterval, Rational};

/// Largest index served as an exact rational.
pub const CANTOR_EXACT_MAX: u64 = 64;

/// Fractional bits of the fixed-point table.
pub const CANTOR_SCALE: u32 = 126;

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    for k in 0..=n {
        row.push(c.clone());
        c = c * (n - k) / (k + 1);
    }
    row
}

fn compute_exact(count: usize) -> Vec<Rational> {
    let mut m: Vec<Rational> = Vec::with_capacity(count);
    if count == 0 {
        return m;
    }
    m.push(Rational::one());
    for n in 1..count as u64 {
        let row = binomial_row(n);
        let three_n = BigInt::from(3u32).pow(n as u32);
        // Σ_{k<n} C(n,k) 2^(n−k) m_k, all over 3^n
        let mut acc = Rational::zero();
        for (k, mk) in m.iter().enumerate() {
            let weight = &row[k] * (BigInt::one() << (n - k as u64));
            acc += mk * Rational::from_integer(weight);
        }
        // divide by 3^n · 2(1 − 3^−n) = 2(3^n − 1)
        let denom = (three_n - 1u32) * 2u32;
        m.push(acc / Rational::from_integer(denom));
    }
    m
}

fn exact_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| compute_exact(CANTOR_EXACT_MAX as usize + 1))
}

/// `m_0, …, m_{count−1}` as exact rationals.
pub fn cantor_moments(count: usize) -> Vec<Rational> {
    if count <= exact_table().len() {
        exact_table()[..count].to_vec()
    } else {
        compute_exact(count)
    }
}

pub(crate) fn cantor_exact(n: u64) -> Option<Rational> {
    exact_table().get(n as usize).cloned()
}

const UNIT: u128 = 1 << CANTOR_SCALE;
const FRAC_MASK: u128 = UNIT - 1;

/// Full 256-bit product as `(high, low)`.
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & mask);
    let (b1, b0) = (b >> 64, b & mask);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let low = (p00 & mask) | (mid << 64);
    let high = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (high, low)
}

/// `floor(a·b / 2^126)` and `ceil(a·b / 2^126)` for `a, b ≤ 2^126`.
fn mul_fixed(a: u128, b: u128) -> (u128, u128) {
    let (high, low) = mul_wide(a, b);
    let floor = (high << (128 - CANTOR_SCALE)) | (low >> CANTOR_SCALE);
    let ceil = floor + u128::from(low & FRAC_MASK != 0);
    (floor, ceil)
}

/// Row `r` of the Binomial(r, 1/3) weights and the moment enclosures, all
/// in units of `2^-126`.
struct FixedTable {
    weight_lo: Vec<u128>,
    weight_hi: Vec<u128>,
    m_lo: Vec<u128>,
    m_hi: Vec<u128>,
}

impl FixedTable {
    fn new() -> Self {
        FixedTable {
            weight_lo: vec![UNIT],
            weight_hi: vec![UNIT],
            m_lo: vec![UNIT],
            m_hi: vec![UNIT],
        }
    }

    fn advance_weights(&mut self) {
        // w_r[k] = (2 w_{r−1}[k] + w_{r−1}[k−1]) / 3, updated from the top down
        self.weight_lo.push(0);
        self.weight_hi.push(0);
        for k in (0..self.weight_lo.len()).rev() {
            let (prev_lo, prev_hi) = if k == 0 {
                (0, 0)
            } else {
                (self.weight_lo[k - 1], self.weight_hi[k - 1])
            };
            let lo = 2 * self.weight_lo[k] + prev_lo;
            let hi = 2 * self.weight_hi[k] + prev_hi;
            self.weight_lo[k] = lo / 3;
            self.weight_hi[k] = hi.div_ceil(3);
        }
    }

    fn extend_to(&mut self, n_max: usize) {
        while self.m_lo.len() <= n_max {
            let n = self.m_lo.len();
            self.advance_weights();
            let (mut s_lo, mut s_hi) = (0u128, 0u128);
            for k in 0..n {
                s_lo += mul_fixed(self.weight_lo[k], self.m_lo[k]).0;
                s_hi += mul_fixed(self.weight_hi[k], self.m_hi[k]).1;
            }
            // m_n = S/2 + S/(2(3^n − 1))
            let (extra_lo, extra_hi) = if n <= 80 {
                let d = 2 * (3u128.pow(n as u32) - 1);
                (s_lo / d, s_hi.div_ceil(d))
            } else {
                (0, u128::from(s_hi > 0))
            };
            self.m_lo.push(s_lo / 2 + extra_lo);
            self.m_hi.push(s_hi.div_ceil(2) + extra_hi);
        }
    }
}

static FIXED: Mutex<Option<FixedTable>> = Mutex::new(None);

/// Enclosures of `m_from, …, m_{from+count−1}` at `2^-126`.
pub(crate) fn cantor_fixed_range(from: u64, count: usize) -> Vec<FixedInterval> {
    let end = from as usize + count;
    let mut guard = FIXED.lock().unwrap_or_else(|e| e.into_inner());
    let table = guard.get_or_insert_with(FixedTable::new);
    if end > table.m_lo.len() {
        // grow geometrically so streams do not pay quadratic cost repeatedly
        let want = (end - 1).max(table.m_lo.len() + table.m_lo.len() / 4);
        table.extend_to(want);
    }
    (from as usize..end)
        .map(|i| FixedInterval {
            lo: BigInt::from(table.m_lo[i]),
            hi: BigInt::from(table.m_hi[i]),
            scale: CANTOR_SCALE,
        })
        .collect()
}
