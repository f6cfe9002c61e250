use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cantor::{cantor_exact, CANTOR_EXACT_MAX};
use super::primes::prime_range;
use super::SequenceSpec;
use crate::exactnum::Rational;

/// An exact term `coeff · (1/√π)^[inv_sqrt_pi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTerm {
    pub coeff: Rational,
    pub inv_sqrt_pi: bool,
}

fn rational_terms(coeffs: Vec<Rational>) -> Vec<ExactTerm> {
    coeffs
        .into_iter()
        .map(|coeff| ExactTerm {
            coeff,
            inv_sqrt_pi: false,
        })
        .collect()
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn double_factorial_odd(n: u64) -> BigInt {
    // (2n+1)!!
    (1..=n).fold(BigInt::one(), |acc, k| acc * (2 * k + 1))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Wigner term `C(2n+1, n+1) / 2^(2n+1)`.
fn wigner(n: u64) -> Rational {
    Rational::new(binomial(2 * n + 1, n + 1), BigInt::one() << (2 * n + 1))
}

/// Rational part of `Γ(n+1)/Γ(n+3/2) = n! 2^(n+1) / ((2n+1)!! √π)`.
fn gamma_ratio_coeff(n: u64) -> Rational {
    Rational::new(factorial(n) << (n + 1), double_factorial_odd(n))
}

/// Exact terms `x_from, …, x_{from+count−1}`, or `None` when the kind has
/// no cheap exact form in that range (Cantor beyond its exact table).
pub fn exact_terms(spec: &SequenceSpec, from: u64, count: usize) -> Option<Vec<ExactTerm>> {
    assert!(from >= 1, "terms are indexed from 1");
    let idx = from..from + count as u64;
    let out = match spec {
        SequenceSpec::Harmonic => rational_terms(
            idx.map(|n| Rational::new(BigInt::one(), BigInt::from(n)))
                .collect(),
        ),
        SequenceSpec::InverseSquare => rational_terms(
            idx.map(|n| Rational::new(BigInt::one(), BigInt::from(n) * n))
                .collect(),
        ),
        SequenceSpec::PrimeReciprocal => rational_terms(
            prime_range(from, count)
                .into_iter()
                .map(|p| Rational::new(BigInt::one(), BigInt::from(p)))
                .collect(),
        ),
        SequenceSpec::Wigner => {
            let mut cur = wigner(from);
            let mut v = Vec::with_capacity(count);
            for n in idx {
                if n > from {
                    // x_n / x_{n−1} = (2n+1) / (2n+2)
                    cur *= Rational::new(BigInt::from(2 * n + 1), BigInt::from(2 * n + 2));
                }
                v.push(cur.clone());
            }
            rational_terms(v)
        }
        SequenceSpec::GammaRatio => {
            let mut cur = gamma_ratio_coeff(from);
            let mut v = Vec::with_capacity(count);
            for n in idx {
                if n > from {
                    // x_n / x_{n−1} = 2n / (2n+1)
                    cur *= Rational::new(BigInt::from(2 * n), BigInt::from(2 * n + 1));
                }
                v.push(ExactTerm {
                    coeff: cur.clone(),
                    inv_sqrt_pi: true,
                });
            }
            v
        }
        SequenceSpec::Cantor => {
            if count > 0 && from + count as u64 - 1 > CANTOR_EXACT_MAX {
                return None;
            }
            rational_terms(idx.map(|n| cantor_exact(n).unwrap_or_default()).collect())
        }
        SequenceSpec::Diff { inner, order } => {
            let j = *order as usize;
            let base = exact_terms(inner, from, count + j)?;
            let weights: Vec<BigInt> = (0..=j as u64).map(|i| binomial(j as u64, i)).collect();
            (0..count)
                .map(|n| {
                    let mut acc = Rational::zero();
                    for (i, w) in weights.iter().enumerate() {
                        let t = &base[n + i].coeff * Rational::from_integer(w.clone());
                        if i % 2 == 0 {
                            acc += t;
                        } else {
                            acc -= t;
                        }
                    }
                    ExactTerm {
                        coeff: acc,
                        inv_sqrt_pi: base[0].inv_sqrt_pi,
                    }
                })
                .collect()
        }
    };
    Some(out)
}

pub fn exact_term(spec: &SequenceSpec, n: u64) -> Option<ExactTerm> {
    exact_terms(spec, n, 1)?.pop()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;

    fn coeff(spec: &SequenceSpec, n: u64) -> Rational {
        exact_term(spec, n).unwrap().coeff
    }

    #[test]
    fn closed_forms() {
        assert_eq!(coeff(&SequenceSpec::Harmonic, 5), rational(1, 5));
        assert_eq!(coeff(&SequenceSpec::InverseSquare, 3), rational(1, 9));
        assert_eq!(coeff(&SequenceSpec::Wigner, 1), rational(3, 8));
        assert_eq!(coeff(&SequenceSpec::Wigner, 2), rational(10, 32));
        assert_eq!(coeff(&SequenceSpec::PrimeReciprocal, 4), rational(1, 7));
        // Γ(2)/Γ(5/2) = 4/(3√π)
        let g = exact_term(&SequenceSpec::GammaRatio, 1).unwrap();
        assert!(g.inv_sqrt_pi);
        assert_eq!(g.coeff, rational(4, 3));
        assert_eq!(coeff(&SequenceSpec::Cantor, 4), rational(87, 320));
        assert!(exact_term(&SequenceSpec::Cantor, CANTOR_EXACT_MAX + 1).is_none());
    }

    #[test]
    fn recursions_match_direct_formulas() {
        let w = exact_terms(&SequenceSpec::Wigner, 3, 20).unwrap();
        for (i, t) in w.iter().enumerate() {
            assert_eq!(t.coeff, wigner(3 + i as u64));
        }
        let g = exact_terms(&SequenceSpec::GammaRatio, 2, 20).unwrap();
        for (i, t) in g.iter().enumerate() {
            assert_eq!(t.coeff, gamma_ratio_coeff(2 + i as u64));
        }
    }

    #[test]
    fn harmonic_differences() {
        let d1 = SequenceSpec::Harmonic.diff(1).unwrap();
        for n in 1..30u64 {
            assert_eq!(coeff(&d1, n), rational(1, (n * (n + 1)) as i64));
        }
        let d2 = SequenceSpec::Harmonic.diff(2).unwrap();
        assert_eq!(coeff(&d2, 1), rational(1, 3));
    }
}
