//! Recomputation of partial sums from a trace's sign bits.

use num_traits::Signed;

use super::trace::GreedyTrace;
use crate::error::{Error, Result};
use crate::exactnum::{FixedInterval, PrecisionInterval};
use crate::moments::TermStream;

/// Walks `a_1, a_2, …` of a trace at a chosen precision.
pub struct Replay<'a> {
    trace: &'a GreedyTrace,
    bits: u32,
    stream: TermStream,
    sum: FixedInterval,
    target: FixedInterval,
    last_term: FixedInterval,
    n: u64,
}

impl<'a> Replay<'a> {
    pub fn new(trace: &'a GreedyTrace, bits: u32) -> Result<Self> {
        if bits < 2 {
            return Err(Error::InvalidArgument("precision must be ≥ 2 bits".into()));
        }
        let scale = bits + 64 - trace.len().leading_zeros() + 8;
        Ok(Replay {
            trace,
            bits,
            stream: TermStream::new(trace.spec(), scale),
            sum: FixedInterval::zero(scale),
            target: trace.target().enclose_fixed(scale)?,
            last_term: FixedInterval::zero(scale),
            n: 0,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Current index `n` (0 before the first step).
    pub fn index(&self) -> u64 {
        self.n
    }

    /// Step to `a_{n+1}`; `None` at the end of the trace.
    pub fn advance(&mut self) -> Option<u64> {
        if self.n >= self.trace.len() {
            return None;
        }
        self.last_term = self.stream.next_term();
        let plus = self.trace.signs()[self.n as usize];
        self.sum.add_signed_assign(&self.last_term, plus);
        self.n += 1;
        Some(self.n)
    }

    pub fn advance_to(&mut self, n: u64) -> Result<()> {
        if n < self.n || n > self.trace.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot move replay from {} to {n} (trace length {})",
                self.n,
                self.trace.len()
            )));
        }
        while self.n < n {
            self.advance();
        }
        Ok(())
    }

    /// Enclosure of `a_n` at the working scale.
    pub fn partial_sum(&self) -> &FixedInterval {
        &self.sum
    }

    /// Enclosure of `x_n`, the most recently added term.
    pub fn last_term(&self) -> &FixedInterval {
        &self.last_term
    }

    /// Enclosure of `x − a_n` at the working scale.
    pub fn signed_error(&self) -> FixedInterval {
        if self.trace.is_tie(self.n) {
            return FixedInterval::zero(self.sum.scale);
        }
        self.target.sub(&self.sum)
    }

    /// Enclosure of `|x − a_n|`; exact zero at recorded ties.
    pub fn error(&self) -> PrecisionInterval {
        if self.trace.is_tie(self.n) {
            return PrecisionInterval::zero(self.bits);
        }
        PrecisionInterval::from_fixed(&self.target.sub(&self.sum).abs(), self.bits)
    }

    /// `log2` of the working-scale unit, for callers that compare raw fixed values.
    pub fn scale(&self) -> u32 {
        self.sum.scale
    }
}

/// Certified `|x − a_n|` recomputed from the sign prefix at `bits`.
pub fn error_at(trace: &GreedyTrace, n: u64, bits: u32) -> Result<PrecisionInterval> {
    if n > trace.len() {
        return Err(Error::InvalidArgument(format!(
            "index {n} beyond trace length {}",
            trace.len()
        )));
    }
    let mut r = Replay::new(trace, bits)?;
    r.advance_to(n)?;
    Ok(r.error())
}

/// Outcome of the trace invariant checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct InvariantReport {
    /// Indices past the first crossing checked for `|x − a_n| ≤ x_n`.
    pub closeness_checked: u64,
    pub closeness_violations: Vec<u64>,
    /// Occurrences of `(−,+,+)` or `(+,−,−)` past the first crossing.
    pub patterns_checked: u64,
    pub pattern_violations: Vec<u64>,
    /// Checks that stayed undecided at the precision cap.
    pub undecided: Vec<u64>,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.closeness_violations.is_empty()
            && self.pattern_violations.is_empty()
            && self.undecided.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Holds,
    Fails,
    Unknown,
}

/// `v ≥ 0` certified, refuted or unknown.
fn nonneg(v: &FixedInterval) -> Verdict {
    if !v.lo.is_negative() {
        Verdict::Holds
    } else if v.hi.is_negative() {
        Verdict::Fails
    } else {
        Verdict::Unknown
    }
}

/// `v > 0` certified, refuted or unknown.
fn positive(v: &FixedInterval) -> Verdict {
    if v.lo.is_positive() {
        Verdict::Holds
    } else if !v.hi.is_positive() {
        Verdict::Fails
    } else {
        Verdict::Unknown
    }
}

fn both(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
        (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
        _ => Verdict::Unknown,
    }
}

/// Replay state at `a_m` plus the two following terms.
struct Window {
    /// `x − a_m` and terms `x_m, x_{m+1}, x_{m+2}`.
    err: FixedInterval,
    x0: FixedInterval,
    x1: FixedInterval,
    x2: FixedInterval,
}

fn closeness(w: &Window) -> Verdict {
    // |x − a_m| ≤ x_m  ⇔  x_m − (x − a_m) ≥ 0 and x_m + (x − a_m) ≥ 0
    both(nonneg(&w.x0.sub(&w.err)), nonneg(&w.x0.add(&w.err)))
}

fn pattern(w: &Window, first: bool) -> Verdict {
    let gap = w.x1.sub(&w.x2);
    if first {
        // (+,−,−): a_m ≤ x < a_m + (x_{m+1} − x_{m+2})
        both(nonneg(&w.err), positive(&gap.sub(&w.err)))
    } else {
        // (−,+,+): a_m − (x_{m+1} − x_{m+2}) ≤ x < a_m
        both(nonneg(&w.err.add(&gap)), positive(&w.err.neg()))
    }
}

/// Closeness persistence and the three-sign pattern implication, checked at
/// every index past the first crossing. Undecided checks are retried at
/// doubled precision up to the trace's cap.
pub fn check_invariants(trace: &GreedyTrace) -> Result<InvariantReport> {
    let mut report = InvariantReport::default();
    let Some(start) = trace.first_crossing() else {
        return Ok(report);
    };
    let n_max = trace.len();
    let signs = trace.signs();
    let is_pattern = |m: u64| -> Option<bool> {
        // signs ε_{m+1}, ε_{m+2}, ε_{m+3} live at 0-based m, m+1, m+2
        let i = m as usize;
        if i + 2 >= signs.len() {
            return None;
        }
        let (a, b, c) = (signs[i], signs[i + 1], signs[i + 2]);
        (b == c && a != b).then_some(a)
    };
    // (index, is_pattern_check, pattern_first_sign)
    let mut pending: Vec<(u64, bool, bool)> = Vec::new();
    for m in start + 1..=n_max {
        pending.push((m, false, false));
        report.closeness_checked += 1;
        if let Some(first) = is_pattern(m) {
            pending.push((m, true, first));
            report.patterns_checked += 1;
        }
    }
    let mut bits = trace.final_bits().max(trace.policy().initial_bits);
    while !pending.is_empty() {
        let mut r = Replay::new(trace, bits)?;
        let mut ahead = TermStream::new(trace.spec(), r.scale());
        let mut next_terms = [ahead.next_term(), ahead.next_term()];
        let mut unknown = Vec::new();
        let mut i = 0;
        while i < pending.len() {
            let m = pending[i].0;
            while r.index() < m {
                r.advance();
                next_terms = [next_terms[1].clone(), ahead.next_term()];
            }
            let w = Window {
                err: r.signed_error(),
                x0: r.last_term().clone(),
                x1: next_terms[0].clone(),
                x2: next_terms[1].clone(),
            };
            while i < pending.len() && pending[i].0 == m {
                let (_, is_pat, first) = pending[i];
                let v = if is_pat { pattern(&w, first) } else { closeness(&w) };
                match v {
                    Verdict::Holds => {}
                    Verdict::Fails if is_pat => report.pattern_violations.push(m),
                    Verdict::Fails => report.closeness_violations.push(m),
                    Verdict::Unknown => unknown.push(pending[i]),
                }
                i += 1;
            }
        }
        pending = unknown;
        if pending.is_empty() {
            break;
        }
        match bits.checked_mul(2).filter(|&b| b <= trace.policy().cap_bits) {
            Some(b) => bits = b,
            None => {
                report.undecided = pending.iter().map(|p| p.0).collect();
                break;
            }
        }
    }
    Ok(report)
}
