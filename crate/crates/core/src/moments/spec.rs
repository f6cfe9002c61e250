use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rational_to_f64, Rational};

/// Generator of the summands `x_n`, `n ≥ 1`.
///
/// Index conventions: `Harmonic` is `1/n` (the Lebesgue moments shifted by
/// one), every other kind uses its closed form at `n` directly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SequenceSpec {
    Harmonic,
    InverseSquare,
    /// `Γ(n+1)/Γ(n+3/2)`, a rational multiple of `1/√π`.
    GammaRatio,
    /// `C(2n+1, n+1) / 2^(2n+1)`.
    Wigner,
    /// Moments of the middle-third Cantor measure.
    Cantor,
    /// `1/p_n`. Not a moment sequence; used as a negative control.
    PrimeReciprocal,
    /// `Σ_{i=0}^{j} (−1)^i C(j,i) x_{n+i}`.
    Diff { inner: Box<SequenceSpec>, order: u32 },
}

/// The constant `c` in `x_n · n^α → c`, written `coeff · (1/√π)^[inv_sqrt_pi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AsymptoticConstant {
    pub coeff: Rational,
    pub inv_sqrt_pi: bool,
}

impl AsymptoticConstant {
    pub fn to_f64(&self) -> f64 {
        let base = rational_to_f64(&self.coeff);
        if self.inv_sqrt_pi {
            base / std::f64::consts::PI.sqrt()
        } else {
            base
        }
    }
}

/// The decay exponent `α`, written `rational + [log 2 / log 3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecayExponent {
    pub rational: Rational,
    pub plus_cantor_dimension: bool,
}

impl DecayExponent {
    fn of(q: Rational) -> Self {
        DecayExponent {
            rational: q,
            plus_cantor_dimension: false,
        }
    }

    /// The exact value when `α` is rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        (!self.plus_cantor_dimension).then_some(&self.rational)
    }

    pub fn to_f64(&self) -> f64 {
        let extra = if self.plus_cantor_dimension {
            std::f64::consts::LN_2 / 3f64.ln()
        } else {
            0.0
        };
        rational_to_f64(&self.rational) + extra
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl SequenceSpec {
    pub fn diff(&self, order: u32) -> Result<SequenceSpec> {
        if order == 0 {
            return Err(Error::InvalidArgument("difference order must be ≥ 1".into()));
        }
        Ok(SequenceSpec::Diff {
            inner: Box::new(self.clone()),
            order,
        })
    }

    /// The moment kinds of the built-in catalog.
    pub fn moment_catalog() -> Vec<SequenceSpec> {
        vec![
            SequenceSpec::Harmonic,
            SequenceSpec::InverseSquare,
            SequenceSpec::GammaRatio,
            SequenceSpec::Wigner,
            SequenceSpec::Cantor,
        ]
    }

    pub fn is_moment(&self) -> bool {
        match self {
            SequenceSpec::PrimeReciprocal => false,
            SequenceSpec::Diff { inner, .. } => inner.is_moment(),
            _ => true,
        }
    }

    /// Terms are rational multiples of `1/√π` rather than rationals.
    pub fn has_inv_sqrt_pi_factor(&self) -> bool {
        match self {
            SequenceSpec::GammaRatio => true,
            SequenceSpec::Diff { inner, .. } => inner.has_inv_sqrt_pi_factor(),
            _ => false,
        }
    }

    pub fn known_alpha(&self) -> Option<DecayExponent> {
        match self {
            SequenceSpec::Harmonic => Some(DecayExponent::of(int(1))),
            SequenceSpec::InverseSquare => Some(DecayExponent::of(int(2))),
            SequenceSpec::GammaRatio | SequenceSpec::Wigner => {
                Some(DecayExponent::of(Rational::new(BigInt::one(), BigInt::from(2))))
            }
            SequenceSpec::Cantor => Some(DecayExponent {
                rational: Rational::zero(),
                plus_cantor_dimension: true,
            }),
            SequenceSpec::PrimeReciprocal => None,
            SequenceSpec::Diff { inner, order } => {
                let a = inner.known_alpha()?;
                Some(DecayExponent {
                    rational: a.rational + int(*order as i64),
                    plus_cantor_dimension: a.plus_cantor_dimension,
                })
            }
        }
    }

    /// `c` with `x_n · n^α → c`; differences pick up `α(α+1)⋯(α+j−1)`.
    pub fn known_c(&self) -> Option<AsymptoticConstant> {
        let one = |inv_sqrt_pi| {
            Some(AsymptoticConstant {
                coeff: int(1),
                inv_sqrt_pi,
            })
        };
        match self {
            SequenceSpec::Harmonic | SequenceSpec::InverseSquare | SequenceSpec::GammaRatio => {
                one(false)
            }
            SequenceSpec::Wigner => one(true),
            SequenceSpec::Cantor | SequenceSpec::PrimeReciprocal => None,
            SequenceSpec::Diff { inner, order } => {
                let c = inner.known_c()?;
                let alpha = inner.known_alpha()?;
                let alpha = alpha.as_rational()?;
                let rising = (0..*order).fold(int(1), |acc, i| acc * (alpha + int(i as i64)));
                Some(AsymptoticConstant {
                    coeff: c.coeff * rising,
                    inv_sqrt_pi: c.inv_sqrt_pi,
                })
            }
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Harmonic => f.write_str("harmonic"),
            SequenceSpec::InverseSquare => f.write_str("invsq"),
            SequenceSpec::GammaRatio => f.write_str("gammaratio"),
            SequenceSpec::Wigner => f.write_str("wigner"),
            SequenceSpec::Cantor => f.write_str("cantor"),
            SequenceSpec::PrimeReciprocal => f.write_str("primes"),
            SequenceSpec::Diff { inner, order } => write!(f, "diff({inner},{order})"),
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |reason: &str| Error::parse("sequence", input, reason);
        Ok(match s.as_str() {
            "harmonic" => SequenceSpec::Harmonic,
            "invsq" => SequenceSpec::InverseSquare,
            "gammaratio" => SequenceSpec::GammaRatio,
            "wigner" => SequenceSpec::Wigner,
            "cantor" => SequenceSpec::Cantor,
            "primes" => SequenceSpec::PrimeReciprocal,
            _ => {
                let body = s
                    .strip_prefix("diff(")
                    .and_then(|b| b.strip_suffix(')'))
                    .ok_or_else(|| bad("unknown sequence"))?;
                let (inner, order) = body.rsplit_once(',').ok_or_else(|| bad("expected diff(<spec>,<j>)"))?;
                let order: u32 = order.parse().map_err(|_| bad("difference order must be an integer"))?;
                inner.parse::<SequenceSpec>()?.diff(order)?
            }
        })
    }
}

impl From<SequenceSpec> for String {
    fn from(s: SequenceSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SequenceSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
