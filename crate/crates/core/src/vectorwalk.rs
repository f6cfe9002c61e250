//! Greedy signed walk in the plane: `x_n = x_{n−1} ± v_n`, choosing the
//! sign that lands closer to the origin (`+` when `⟨x_{n−1}, v_n⟩ ≤ 0`).

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{pi_fixed, shr_floor, Rational, TargetExpr};
use crate::scalar::{Hp128, HpFloat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarVector<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> PlanarVector<S> {
    pub fn origin() -> Self {
        PlanarVector {
            x: S::zero(),
            y: S::zero(),
        }
    }

    pub fn dot(&self, o: &Self) -> S {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    fn shifted(&self, v: &Self, plus: bool) -> Self {
        if plus {
            PlanarVector {
                x: self.x.clone() + v.x.clone(),
                y: self.y.clone() + v.y.clone(),
            }
        } else {
            PlanarVector {
                x: self.x.clone() - v.x.clone(),
                y: self.y.clone() - v.y.clone(),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `v_n = (cos 2πnα, sin 2πnα)`.
    Rotation(TargetExpr),
    /// `v_n = (cos 2π‖βn‖, sin 2π‖βn‖)`, `‖t‖` the distance to the nearest integer.
    NearestIntPhase(TargetExpr),
    Explicit(Vec<(Rational, Rational)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSpec {
    pub generator: Generator,
    pub steps: u64,
}

/// Positions `x_1, …, x_N`; `x_0` is the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTrace<S> {
    pub points: Vec<PlanarVector<S>>,
}

pub type Walk64 = WalkTrace<f64>;
pub type WalkHp = WalkTrace<Hp128>;

/// Scalars that can evaluate `(cos 2πt, sin 2πt)` for a dyadic turn `t`.
pub trait WalkScalar: Scalar {
    /// Fractional bits wanted for the turn.
    const TURN_BITS: u32;

    /// `t = turn · 2^-TURN_BITS`.
    fn cos_sin_turn(turn: &BigInt) -> (Self, Self);
}

impl WalkScalar for f64 {
    const TURN_BITS: u32 = 64;

    fn cos_sin_turn(turn: &BigInt) -> (f64, f64) {
        let t = crate::exactnum::bigint_to_f64_scaled(turn, Self::TURN_BITS as i64);
        let (s, c) = (std::f64::consts::TAU * t).sin_cos();
        (c, s)
    }
}

impl<const BITS: u32> WalkScalar for HpFloat<BITS> {
    const TURN_BITS: u32 = BITS + 32;

    fn cos_sin_turn(turn: &BigInt) -> (Self, Self) {
        let w = Self::TURN_BITS;
        let unit = BigInt::one() << w;
        let half = BigInt::one() << (w - 1);
        // t − round(t) ∈ [−1/2, 1/2], so |θ| ≤ π
        let mut s = turn.mod_floor(&unit);
        if s > half {
            s -= &unit;
        }
        let pi = pi_fixed(w).lo;
        let theta = shr_floor(&(&s * &pi), w - 1);
        let (c, sn) = taylor_cos_sin(&theta, w);
        (HpFloat::from_fixed(c, w), HpFloat::from_fixed(sn, w))
    }
}

/// `(cos θ, sin θ)` at scale `w` by the Taylor series, `|θ| ≤ π`.
fn taylor_cos_sin(theta: &BigInt, w: u32) -> (BigInt, BigInt) {
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term = BigInt::one() << w;
    let mut k: u32 = 0;
    while !term.is_zero() {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
        term = shr_floor(&(&term * theta), w) / k;
    }
    (cos, sin)
}

/// Turns `frac(n·c)` (or their nearest-integer distance) at `bits`.
struct PhaseSource {
    value: BigInt,
    scale: u32,
    bits: u32,
    nearest: bool,
}

impl PhaseSource {
    fn new(t: &TargetExpr, bits: u32, nearest: bool) -> Result<Self> {
        // 64 extra bits cover n < 2^64, 16 more keep the last bit honest
        let scale = bits + 80;
        Ok(PhaseSource {
            value: t.enclose_fixed(scale)?.lo,
            scale,
            bits,
            nearest,
        })
    }

    fn turn(&self, n: u64) -> BigInt {
        let unit = BigInt::one() << self.scale;
        let mut f = (&self.value * n).mod_floor(&unit);
        if self.nearest && f > (&unit >> 1u32) {
            f = &unit - f;
        }
        shr_floor(&f, self.scale - self.bits)
    }
}

pub fn walk<S: WalkScalar>(spec: &WalkSpec) -> Result<WalkTrace<S>> {
    if spec.steps < 1 {
        return Err(Error::InvalidArgument("walk needs at least one step".into()));
    }
    let mut x = PlanarVector::<S>::origin();
    let mut points = Vec::with_capacity(spec.steps as usize);
    let mut step = |v: PlanarVector<S>| {
        let plus = x.dot(&v) <= S::zero();
        x = x.shifted(&v, plus);
        points.push(x.clone());
    };
    match &spec.generator {
        Generator::Rotation(t) | Generator::NearestIntPhase(t) => {
            let nearest = matches!(spec.generator, Generator::NearestIntPhase(_));
            let src = PhaseSource::new(t, S::TURN_BITS, nearest)?;
            for n in 1..=spec.steps {
                let (c, s) = S::cos_sin_turn(&src.turn(n));
                step(PlanarVector { x: c, y: s });
            }
        }
        Generator::Explicit(list) => {
            if spec.steps > list.len() as u64 {
                return Err(Error::InvalidArgument(format!(
                    "{} steps requested but only {} vectors given",
                    spec.steps,
                    list.len()
                )));
            }
            for (a, b) in &list[..spec.steps as usize] {
                step(PlanarVector {
                    x: S::from_rational(a),
                    y: S::from_rational(b),
                });
            }
        }
    }
    Ok(WalkTrace { points })
}

impl<S: Scalar> WalkTrace<S> {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,x,y")?;
        for (i, p) in self.points.iter().enumerate() {
            writeln!(out, "{},{},{}", i + 1, p.x.to_f64(), p.y.to_f64())?;
        }
        Ok(())
    }

    /// Largest `‖x_n‖` along the walk, as `f64`.
    pub fn max_norm(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.norm_sq().to_f64().sqrt())
            .fold(0.0, f64::max)
    }
}

/// Vectors of an explicit walk from CSV lines `x,y` (optional header).
pub fn parse_vectors(text: &str) -> Result<Vec<(Rational, Rational)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.chars().any(|c| c.is_ascii_alphabetic())) {
            continue;
        }
        let bad = |reason: &str| Error::parse("vector", line, reason);
        let (a, b) = line.split_once(',').ok_or_else(|| bad("expected x,y"))?;
        let parse = |s: &str| -> Result<Rational> {
            match s.trim().parse::<TargetExpr>()?.rational_value() {
                Some(q) => Ok(q),
                None => Err(bad("components must be rational")),
            }
        };
        out.push((parse(a)?, parse(b)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;

    fn rotation(alpha: &str, steps: u64) -> WalkSpec {
        WalkSpec {
            generator: Generator::Rotation(alpha.parse().unwrap()),
            steps,
        }
    }

    #[test]
    fn forced_oscillation() {
        let w: WalkHp = walk(&rotation("0", 3)).unwrap();
        let pts: Vec<(f64, f64)> = w.points.iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect();
        assert_eq!(pts, [(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let w: Walk64 = walk(&rotation("0", 3)).unwrap();
        assert_eq!(w.points[1], PlanarVector { x: 0.0, y: 0.0 });
    }

    #[test]
    fn explicit_walk() {
        let spec = WalkSpec {
            generator: Generator::Explicit(vec![(rational(0, 1), rational(1, 1)); 2]),
            steps: 2,
        };
        let w: WalkHp = walk(&spec).unwrap();
        assert_eq!(w.points[0].y.to_f64(), 1.0);
        assert!(w.points[1].norm_sq().is_zero());
        let too_many = WalkSpec { steps: 3, ..spec };
        assert!(walk::<f64>(&too_many).is_err());
        assert_eq!(parse_vectors("x,y\n0,1\n1/2, -0.5\n").unwrap().len(), 2);
        assert!(parse_vectors("0;1").is_err());
    }

    #[test]
    fn trig_accuracy() {
        let w = Hp128::TURN_BITS;
        for k in 0..16u32 {
            let turn = BigInt::from(k) << (w - 4);
            let (c, s) = Hp128::cos_sin_turn(&turn);
            let th = std::f64::consts::TAU * k as f64 / 16.0;
            assert!((c.to_f64() - th.cos()).abs() < 1e-15 && (s.to_f64() - th.sin()).abs() < 1e-15);
        }
        // cos² + sin² = 1 to working precision
        let (c, s) = Hp128::cos_sin_turn(&(BigInt::from(123_456_789u64) << (w - 30)));
        let err = (c.clone() * c + s.clone() * s - Hp128::one()).mantissa().clone();
        assert!(err.magnitude().bits() < 8);
    }

    #[test]
    fn nearest_int_phase_uses_exact_distance() {
        let src = PhaseSource::new(&"sqrt(3)".parse().unwrap(), 64, true).unwrap();
        for n in [1u64, 7, 1000, 99_999] {
            let t = crate::exactnum::bigint_to_f64_scaled(&src.turn(n), 64);
            let v = 3f64.sqrt() * n as f64;
            let d = (v - v.round()).abs();
            assert!((t - d).abs() < 1e-9 * n as f64, "n = {n}");
            assert!(t <= 0.5);
        }
    }

    #[test]
    fn greedy_optimal_and_bounded() {
        let spec = WalkSpec {
            generator: Generator::NearestIntPhase("sqrt(3)".parse().unwrap()),
            steps: 2000,
        };
        let w: WalkHp = walk(&spec).unwrap();
        let again: WalkHp = walk(&spec).unwrap();
        assert_eq!(w, again);
        let mut prev = PlanarVector::<Hp128>::origin();
        for p in &w.points {
            let v_sq = Hp128::one();
            // ‖x_n‖² ≤ ‖x_{n−1}‖² + ‖v_n‖² up to rounding of the unit vector
            let slack = Hp128::from_rational(&rational(1, 1 << 40));
            assert!(p.norm_sq() <= prev.norm_sq() + v_sq + slack);
            prev = p.clone();
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        w.write_csv(&mut a).unwrap();
        again.write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("n,x,y\n1,"));
    }
}
