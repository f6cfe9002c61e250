//! Catalog of summand sequences: moment sequences, the prime-reciprocal
//! control, forward differences, and asymptotics.

mod asymptotics;
mod band;
mod cantor;
mod exact;
mod primes;
mod spec;
mod stream;

use crate::error::{Error, Result};
use crate::exactnum::{inv_sqrt_pi_fixed, FixedInterval, PrecisionInterval, Rational};

pub use asymptotics::{estimate_asymptotics, fit_power_law};
pub use band::{band_start, band_start_with_cap, DEFAULT_BAND_CAP};
pub use cantor::{cantor_moments, CANTOR_EXACT_MAX, CANTOR_SCALE};
pub use exact::{exact_term, exact_terms, ExactTerm};
pub use primes::{nth_prime, prime_range};
pub use spec::{AsymptoticConstant, DecayExponent, SequenceSpec};
pub use stream::TermStream;

/// A single term: exact when the kind allows it, otherwise an enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Exact(Rational),
    Enclosure(PrecisionInterval),
}

impl Term {
    pub fn to_interval(&self, bits: u32) -> PrecisionInterval {
        match self {
            Term::Exact(q) => PrecisionInterval::point(q.clone(), bits),
            Term::Enclosure(iv) => iv.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Term::Exact(q) => Some(q),
            Term::Enclosure(_) => None,
        }
    }
}

/// The term `x_n`, exact for rational kinds and enclosed at `bits` for the
/// Gamma ratio. Cantor moments past the exact table come from the
/// fixed-point table, so their enclosures are never finer than `2^-126`.
pub fn term(spec: &SequenceSpec, n: u64, bits: u32) -> Result<Term> {
    if n == 0 {
        return Err(Error::InvalidArgument("term index must be ≥ 1".into()));
    }
    if bits < 2 {
        return Err(Error::InvalidArgument("precision must be ≥ 2 bits".into()));
    }
    let work = bits + 16;
    match exact_term(spec, n) {
        Some(ExactTerm {
            coeff,
            inv_sqrt_pi: false,
        }) => Ok(Term::Exact(coeff)),
        Some(ExactTerm { coeff, .. }) => {
            let f = FixedInterval::from_rational(&coeff, work).mul(&inv_sqrt_pi_fixed(work));
            Ok(Term::Enclosure(PrecisionInterval::from_fixed(&f, bits)))
        }
        None => {
            let f = TermStream::starting_at(spec, work, n).next_term();
            Ok(Term::Enclosure(PrecisionInterval::from_fixed(&f, bits)))
        }
    }
}
