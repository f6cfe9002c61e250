//! Sequential fixed-point enclosures of `x_1, x_2, …`.
//!
//! The greedy engine and the scans only ever walk forward, so every kind
//! gets a cheap incremental form: reciprocals for the rational kinds, ratio
//! recursions for Wigner and the Gamma ratio, a cached table for Cantor.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::One;

use super::cantor::cantor_fixed_range;
use super::exact::binomial;
use super::primes::prime_range;
use super::SequenceSpec;
use crate::exactnum::{inv_sqrt_pi_fixed, FixedInterval};

/// Guard bits for the ratio recursions; their error grows by one unit per step.
const GUARD: u32 = 32;
const CHUNK: usize = 4096;

enum State {
    Harmonic,
    InverseSquare,
    Primes(VecDeque<u64>),
    /// Current term at `scale + GUARD`.
    Wigner(FixedInterval),
    GammaRatio(FixedInterval),
    Cantor(VecDeque<FixedInterval>),
    Diff {
        inner: Box<TermStream>,
        window: VecDeque<FixedInterval>,
        weights: Vec<BigInt>,
    },
}

/// Forward iterator over term enclosures at a fixed binary scale.
pub struct TermStream {
    state: State,
    scale: u32,
    unit: BigInt,
    /// Index of the next term to be returned.
    next: u64,
}

impl TermStream {
    /// Stream starting at `x_1`, enclosures at `2^-scale`.
    pub fn new(spec: &SequenceSpec, scale: u32) -> Self {
        let w = scale + GUARD;
        let state = match spec {
            SequenceSpec::Harmonic => State::Harmonic,
            SequenceSpec::InverseSquare => State::InverseSquare,
            SequenceSpec::PrimeReciprocal => State::Primes(VecDeque::new()),
            // x_1 = 3/8
            SequenceSpec::Wigner => State::Wigner(FixedInterval::point(BigInt::from(3) << (w - 3), w)),
            // x_1 = 4 / (3√π)
            SequenceSpec::GammaRatio => {
                State::GammaRatio(inv_sqrt_pi_fixed(w).mul_ratio(&BigInt::from(4), &BigInt::from(3)))
            }
            SequenceSpec::Cantor => State::Cantor(VecDeque::new()),
            SequenceSpec::Diff { inner, order } => {
                let mut inner = TermStream::new(inner, scale);
                let j = *order as u64;
                let window = (0..j).map(|_| inner.next_term()).collect();
                State::Diff {
                    inner: Box::new(inner),
                    window,
                    weights: (0..=j).map(|i| binomial(j, i)).collect(),
                }
            }
        };
        TermStream {
            state,
            scale,
            unit: BigInt::one() << scale,
            next: 1,
        }
    }

    /// Stream positioned so that the next term returned is `x_from`.
    pub fn starting_at(spec: &SequenceSpec, scale: u32, from: u64) -> Self {
        assert!(from >= 1, "terms are indexed from 1");
        let mut s = TermStream::new(spec, scale);
        s.skip_to(from);
        s
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Index of the term the next call returns.
    pub fn position(&self) -> u64 {
        self.next
    }

    fn skip_to(&mut self, from: u64) {
        match &mut self.state {
            State::Harmonic | State::InverseSquare => self.next = from,
            State::Primes(buf) => {
                buf.clear();
                self.next = from;
            }
            State::Cantor(buf) => {
                buf.clear();
                self.next = from;
            }
            _ => {
                while self.next < from {
                    self.next_term();
                }
            }
        }
    }

    /// Enclosure of the next term at `2^-scale`.
    pub fn next_term(&mut self) -> FixedInterval {
        let n = self.next;
        self.next += 1;
        let scale = self.scale;
        match &mut self.state {
            State::Harmonic => FixedInterval::reciprocal(&BigInt::from(n), &self.unit, scale),
            State::InverseSquare => {
                FixedInterval::reciprocal(&(BigInt::from(n) * n), &self.unit, scale)
            }
            State::Primes(buf) => {
                if buf.is_empty() {
                    buf.extend(prime_range(n, CHUNK));
                }
                let p = buf.pop_front().expect("prime buffer refilled");
                FixedInterval::reciprocal(&BigInt::from(p), &self.unit, scale)
            }
            State::Wigner(cur) => {
                let out = cur.rescale(scale);
                // x_{n+1} / x_n = (2n+3) / (2n+4)
                *cur = cur.mul_ratio(&BigInt::from(2 * n + 3), &BigInt::from(2 * n + 4));
                out
            }
            State::GammaRatio(cur) => {
                let out = cur.rescale(scale);
                // x_{n+1} / x_n = (2n+2) / (2n+3)
                *cur = cur.mul_ratio(&BigInt::from(2 * n + 2), &BigInt::from(2 * n + 3));
                out
            }
            State::Cantor(buf) => {
                if buf.is_empty() {
                    buf.extend(cantor_fixed_range(n, CHUNK));
                }
                buf.pop_front().expect("cantor buffer refilled").rescale(scale)
            }
            State::Diff {
                inner,
                window,
                weights,
            } => {
                window.push_back(inner.next_term());
                let mut acc = FixedInterval::zero(scale);
                for (i, (t, w)) in window.iter().zip(weights.iter()).enumerate() {
                    acc.add_signed_assign(&t.scale_by(w), i % 2 == 0);
                }
                window.pop_front();
                acc
            }
        }
    }
}

impl Iterator for TermStream {
    type Item = FixedInterval;

    fn next(&mut self) -> Option<FixedInterval> {
        Some(self.next_term())
    }
}
