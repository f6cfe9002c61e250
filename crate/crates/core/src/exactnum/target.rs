use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::consts::{log_fixed, sqrt_fixed};
use super::fixed::FixedInterval;
use super::interval::PrecisionInterval;
use super::{parse_rational_literal, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// A real number the greedy walk tries to approximate. Every variant admits
/// enclosures at any precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TargetExpr {
    ExactRational(Rational),
    SqrtOf(Rational),
    LogOf(Rational),
    DecimalLiteral { text: String, value: Rational },
}

fn perfect_square_root(a: &BigInt) -> Option<BigInt> {
    if a.is_negative() {
        return None;
    }
    let r = a.sqrt();
    (&r * &r == *a).then_some(r)
}

impl TargetExpr {
    pub fn rational(q: Rational) -> Self {
        TargetExpr::ExactRational(q)
    }

    pub fn decimal(text: &str) -> Result<Self> {
        match parse_rational_literal(text) {
            Some((value, true)) => Ok(TargetExpr::DecimalLiteral {
                text: text.to_string(),
                value,
            }),
            _ => Err(Error::parse("decimal literal", text, "expected d.ddd")),
        }
    }

    pub fn check_domain(&self) -> Result<()> {
        match self {
            TargetExpr::SqrtOf(r) if r.is_negative() => {
                Err(Error::Domain(format!("sqrt({r}) of a negative number")))
            }
            TargetExpr::LogOf(r) if !r.is_positive() => {
                Err(Error::Domain(format!("log({r}) of a non-positive number")))
            }
            _ => Ok(()),
        }
    }

    /// The exact value when it is rational: rational and decimal literals,
    /// square roots of rational squares, and `log(1)`.
    pub fn rational_value(&self) -> Option<Rational> {
        match self {
            TargetExpr::ExactRational(q) => Some(q.clone()),
            TargetExpr::DecimalLiteral { value, .. } => Some(value.clone()),
            TargetExpr::SqrtOf(r) => {
                let n = perfect_square_root(r.numer())?;
                let d = perfect_square_root(r.denom())?;
                Some(Rational::new(n, d))
            }
            TargetExpr::LogOf(r) if r.is_one() => Some(Rational::zero()),
            TargetExpr::LogOf(_) => None,
        }
    }

    /// Fixed-point enclosure of the value at `2^-scale`.
    pub fn enclose_fixed(&self, scale: u32) -> Result<FixedInterval> {
        self.check_domain()?;
        if let Some(q) = self.rational_value() {
            return Ok(FixedInterval::from_rational(&q, scale));
        }
        match self {
            TargetExpr::SqrtOf(r) => sqrt_fixed(r, scale),
            TargetExpr::LogOf(r) => log_fixed(r, scale),
            _ => unreachable!("rational variants handled above"),
        }
    }

    pub fn approx_f64(&self) -> f64 {
        match self {
            TargetExpr::ExactRational(q) | TargetExpr::DecimalLiteral { value: q, .. } => {
                rational_to_f64(q)
            }
            TargetExpr::SqrtOf(r) => rational_to_f64(r).sqrt(),
            TargetExpr::LogOf(r) => rational_to_f64(r).ln(),
        }
    }
}

/// Certified enclosure of `t` with `hi − lo ≤ 2^(1−bits)·max(1, |hi|)`.
/// Rational targets evaluate to an exact point.
pub fn eval_target(t: &TargetExpr, bits: u32) -> Result<PrecisionInterval> {
    if bits < 2 {
        return Err(Error::InvalidArgument(format!(
            "precision must be at least 2 bits, got {bits}"
        )));
    }
    t.check_domain()?;
    if let Some(q) = t.rational_value() {
        return Ok(PrecisionInterval::point(q, bits));
    }
    let fixed = t.enclose_fixed(bits + 4)?;
    Ok(PrecisionInterval::from_fixed(&fixed, bits))
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for TargetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetExpr::ExactRational(q) => write!(f, "{}", fmt_rational(q)),
            TargetExpr::SqrtOf(r) => write!(f, "sqrt({})", fmt_rational(r)),
            TargetExpr::LogOf(r) => write!(f, "log({})", fmt_rational(r)),
            TargetExpr::DecimalLiteral { text, .. } => f.write_str(text),
        }
    }
}

impl FromStr for TargetExpr {
    type Err = Error;

    /// Grammar (whitespace ignored): `p`, `p/q`, decimal `d.ddd`,
    /// `sqrt(<lit>)`, `log(<lit>)`, and the shorthands `sqrtN`, `logN`.
    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let literal = |body: &str| -> Result<Rational> {
            parse_rational_literal(body)
                .map(|(q, _)| q)
                .ok_or_else(|| Error::parse("target", input, format!("bad number {body:?}")))
        };
        let call = |name: &str| -> Option<&str> {
            let rest = s.strip_prefix(name)?;
            if let Some(inner) = rest.strip_prefix('(') {
                inner.strip_suffix(')')
            } else if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                Some(rest)
            } else {
                None
            }
        };
        let expr = if let Some(arg) = call("sqrt") {
            TargetExpr::SqrtOf(literal(arg)?)
        } else if let Some(arg) = call("log") {
            TargetExpr::LogOf(literal(arg)?)
        } else {
            match parse_rational_literal(&s) {
                Some((value, true)) => TargetExpr::DecimalLiteral { text: s.clone(), value },
                Some((value, false)) => TargetExpr::ExactRational(value),
                None => {
                    return Err(Error::parse(
                        "target",
                        input,
                        "expected p/q, a decimal, sqrt(p/q) or log(p/q)",
                    ))
                }
            }
        };
        expr.check_domain()?;
        Ok(expr)
    }
}

impl From<TargetExpr> for String {
    fn from(t: TargetExpr) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for TargetExpr {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
