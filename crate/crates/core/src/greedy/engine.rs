use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::exactsum::signed_exact_sum;
use super::trace::{Checkpoint, GreedyTrace, Side};
use super::{ArithMode, GreedyRun};
use crate::error::{Error, Result};
use crate::exactnum::{
    cmp_rational_vs_target_with, eval_target, inv_sqrt_pi_fixed, FixedInterval, PrecisionInterval,
    Rational,
};
use crate::moments::{exact_terms, TermStream};

/// Partial sum and target at one fixed-point scale.
struct FixedState {
    bits: u32,
    stream: TermStream,
    sum: FixedInterval,
    target: FixedInterval,
}

fn guard_bits(steps: u64) -> u32 {
    64 - steps.leading_zeros() + 8
}

impl FixedState {
    /// State with `a_m` built from the first `m = signs.len()` signs.
    fn replayed(cfg: &GreedyRun, bits: u32, signs: &[bool]) -> Result<Self> {
        let scale = bits + guard_bits(cfg.max_steps);
        let mut stream = TermStream::new(&cfg.spec, scale);
        let mut sum = FixedInterval::zero(scale);
        for &s in signs {
            sum.add_signed_assign(&stream.next_term(), s);
        }
        Ok(FixedState {
            bits,
            stream,
            sum,
            target: cfg.target.enclose_fixed(scale)?,
        })
    }

    fn side(&self) -> Option<Side> {
        if self.sum.hi < self.target.lo {
            Some(Side::Below)
        } else if self.sum.lo > self.target.hi {
            Some(Side::Above)
        } else {
            None
        }
    }

    fn width(&self) -> Rational {
        let w = self.sum.width_units() + self.target.width_units();
        Rational::new(w, BigInt::from(1) << self.sum.scale)
    }

    fn error(&self) -> PrecisionInterval {
        PrecisionInterval::from_fixed(&self.target.sub(&self.sum).abs(), self.bits)
    }
}

fn side_of(ord: Ordering) -> Side {
    match ord {
        Ordering::Less => Side::Below,
        Ordering::Equal => Side::Equal,
        Ordering::Greater => Side::Above,
    }
}

/// Exact side of a sum `coeff·(1/√π)^[isp]`; `None` if the comparison is
/// not decidable exactly (irrational multiple against a nonzero target).
fn exact_side(cfg: &GreedyRun, coeff: &Rational, isp: bool) -> Option<Result<Side>> {
    if isp {
        let r = cfg.target.rational_value()?;
        if !r.is_zero() {
            return None;
        }
        return Some(Ok(side_of(coeff.cmp(&Rational::zero()))));
    }
    Some(cmp_rational_vs_target_with(coeff, &cfg.target, &cfg.precision).map(side_of))
}

/// Whether an undecided interval comparison should be settled by an exact
/// prefix sum rather than by more bits: only rational targets can tie.
fn exact_fallback_possible(cfg: &GreedyRun) -> bool {
    match cfg.target.rational_value() {
        Some(r) => !cfg.spec.has_inv_sqrt_pi_factor() || r.is_zero(),
        None => false,
    }
}

fn is_checkpoint(cfg: &GreedyRun, n: u64) -> bool {
    n >= 1 && (n.is_multiple_of(cfg.checkpoint_stride) || n == cfg.max_steps)
}

pub(super) fn run_interval(cfg: &GreedyRun) -> Result<GreedyTrace> {
    let n_max = cfg.max_steps;
    let cap = cfg.precision.cap_bits;
    let mut state = FixedState::replayed(cfg, cfg.precision.initial_bits, &[])?;
    let mut signs: Vec<bool> = Vec::with_capacity(n_max as usize);
    let mut ties = Vec::new();
    let mut checkpoints = Vec::new();
    let fallback = exact_fallback_possible(cfg);

    for m in 0..=n_max {
        // decide the side of a_m; it fixes ε_{m+1}
        let side = match state.side() {
            Some(s) => s,
            None => {
                let exact = if fallback {
                    signed_exact_sum(&cfg.spec, &signs).and_then(|(q, isp)| exact_side(cfg, &q, isp))
                } else {
                    None
                };
                match exact {
                    Some(side) => side.map_err(|_| Error::PrecisionCap {
                        index: m + 1,
                        cap: cap as u64,
                    })?,
                    None => loop {
                        let next = state.bits.saturating_mul(2);
                        if next > cap {
                            return Err(Error::PrecisionCap {
                                index: m + 1,
                                cap: cap as u64,
                            });
                        }
                        let old_width = state.width();
                        state = FixedState::replayed(cfg, next, &signs)?;
                        if let Some(s) = state.side() {
                            break s;
                        }
                        // term enclosures that cannot sharpen (fixed tables)
                        if state.width() * Rational::from_integer(2.into()) > old_width {
                            return Err(Error::PrecisionCap {
                                index: m + 1,
                                cap: next as u64,
                            });
                        }
                    },
                }
            }
        };
        if side == Side::Equal {
            ties.push(m);
        }
        if is_checkpoint(cfg, m) {
            let error = if side == Side::Equal {
                PrecisionInterval::zero(state.bits)
            } else {
                state.error()
            };
            checkpoints.push(Checkpoint { n: m, error });
        }
        let plus = side != Side::Above;
        if m == n_max {
            return GreedyTrace::assemble(
                cfg.target.clone(),
                cfg.spec.clone(),
                cfg.checkpoint_stride,
                cfg.precision,
                signs,
                plus,
                ties,
                checkpoints,
                state.bits,
                false,
            );
        }
        let t = state.stream.next_term();
        state.sum.add_signed_assign(&t, plus);
        signs.push(plus);
    }
    unreachable!("loop returns at m = max_steps")
}

const EXACT_CHUNK: usize = 1024;

fn exact_error(cfg: &GreedyRun, a: &Rational, isp: bool, bits: u32) -> Result<PrecisionInterval> {
    if isp {
        // target is 0 here: |a| = |coeff|/√π
        let scale = bits + 8;
        let f = FixedInterval::from_rational(&a.abs(), scale).mul(&inv_sqrt_pi_fixed(scale));
        return Ok(PrecisionInterval::from_fixed(&f, bits));
    }
    if let Some(r) = cfg.target.rational_value() {
        return Ok(PrecisionInterval::point((r - a).abs(), bits));
    }
    let t = eval_target(&cfg.target, bits)?;
    Ok(t.sub(&PrecisionInterval::point(a.clone(), bits)).abs())
}

pub(super) fn run_exact(cfg: &GreedyRun) -> Result<GreedyTrace> {
    let unsupported = || Error::Unsupported(format!("exact arithmetic for {} against {}", cfg.spec, cfg.target));
    if cfg.spec.has_inv_sqrt_pi_factor() && cfg.target.rational_value() != Some(Rational::zero()) {
        return Err(unsupported());
    }
    let n_max = cfg.max_steps;
    let bits = cfg.precision.initial_bits;
    let isp = cfg.spec.has_inv_sqrt_pi_factor();
    let mut a = Rational::zero();
    let mut signs: Vec<bool> = Vec::with_capacity(n_max as usize);
    let mut ties = Vec::new();
    let mut checkpoints = Vec::new();
    let mut buffer = Vec::new().into_iter();
    for m in 0..=n_max {
        let side = exact_side(cfg, &a, isp)
            .ok_or_else(unsupported)?
            .map_err(|_| Error::PrecisionCap {
                index: m + 1,
                cap: cfg.precision.cap_bits as u64,
            })?;
        if side == Side::Equal {
            ties.push(m);
        }
        if is_checkpoint(cfg, m) {
            checkpoints.push(Checkpoint {
                n: m,
                error: exact_error(cfg, &a, isp, bits)?,
            });
        }
        let plus = side != Side::Above;
        if m == n_max {
            return GreedyTrace::assemble(
                cfg.target.clone(),
                cfg.spec.clone(),
                cfg.checkpoint_stride,
                cfg.precision,
                signs,
                plus,
                ties,
                checkpoints,
                bits,
                true,
            );
        }
        let t = match buffer.next() {
            Some(t) => t,
            None => {
                let count = EXACT_CHUNK.min((n_max - m) as usize);
                let chunk: Vec<_> = exact_terms(&cfg.spec, m + 1, count).ok_or_else(unsupported)?;
                buffer = chunk.into_iter();
                buffer.next().expect("non-empty chunk")
            }
        };
        if plus {
            a += t.coeff;
        } else {
            a -= t.coeff;
        }
        signs.push(plus);
    }
    unreachable!("loop returns at m = max_steps")
}

pub(super) fn dispatch(cfg: &GreedyRun) -> Result<GreedyTrace> {
    match cfg.mode {
        ArithMode::Interval => run_interval(cfg),
        ArithMode::Exact => run_exact(cfg),
    }
}
