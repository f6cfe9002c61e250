//! Index-wise classification of `|x − a_n|` with on-demand refinement.

use num_bigint::BigInt;

use crate::error::Result;
use crate::exactnum::FixedInterval;
use crate::greedy::{GreedyTrace, Replay};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Class {
    Yes,
    No,
    /// The enclosure is too wide; retry at more bits.
    Refine,
    /// Cannot be separated by more precision (threshold-limited).
    Ambiguous,
}

#[derive(Debug, Default)]
pub(crate) struct Scan {
    pub yes: Vec<u64>,
    pub ambiguous: Vec<u64>,
}

/// Starting precision for replays of a trace.
pub(crate) fn base_bits(trace: &GreedyTrace) -> u32 {
    trace.final_bits().max(trace.policy().initial_bits)
}

/// Classify every index in `from..=to`. `f` sees `n` and the enclosure of
/// `|x − a_n|` at the replay scale. Indices that keep asking for
/// refinement past the trace's precision cap end up ambiguous.
pub(crate) fn classify_range<F>(trace: &GreedyTrace, from: u64, to: u64, mut f: F) -> Result<Scan>
where
    F: FnMut(u64, &FixedInterval) -> Class,
{
    let mut scan = Scan::default();
    if from > to {
        return Ok(scan);
    }
    let mut bits = base_bits(trace);
    let mut pending: Vec<u64> = Vec::new();
    let mut r = Replay::new(trace, bits)?;
    r.advance_to(from)?;
    loop {
        let err = r.signed_error().abs();
        match f(r.index(), &err) {
            Class::Yes => scan.yes.push(r.index()),
            Class::No => {}
            Class::Refine => pending.push(r.index()),
            Class::Ambiguous => scan.ambiguous.push(r.index()),
        }
        if r.index() >= to {
            break;
        }
        r.advance();
    }
    while !pending.is_empty() {
        match bits.checked_mul(2).filter(|&b| b <= trace.policy().cap_bits) {
            Some(b) => bits = b,
            None => {
                scan.ambiguous.append(&mut pending);
                break;
            }
        }
        let mut r = Replay::new(trace, bits)?;
        let mut still = Vec::new();
        for &n in &pending {
            r.advance_to(n)?;
            match f(n, &r.signed_error().abs()) {
                Class::Yes => scan.yes.push(n),
                Class::No => {}
                Class::Refine => still.push(n),
                Class::Ambiguous => scan.ambiguous.push(n),
            }
        }
        pending = still;
    }
    scan.yes.sort_unstable();
    scan.ambiguous.sort_unstable();
    Ok(scan)
}

/// `log2` of the fixed-point value `v · 2^-scale`; `-inf` for zero.
pub(crate) fn log2_fixed(v: &BigInt, scale: u32) -> f64 {
    if v.sign() == num_bigint::Sign::NoSign {
        return f64::NEG_INFINITY;
    }
    crate::exactnum::bigint_log2(v) - scale as f64
}
