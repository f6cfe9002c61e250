use num_traits::Float;

use super::{SequenceSpec, TermStream};
use crate::error::{Error, Result};

/// Least-squares fit of `log y = log c − α log n`; returns `(c, α)`.
pub fn fit_power_law<F: Float>(points: &[(F, F)]) -> Option<(F, F)> {
    if points.len() < 2 {
        return None;
    }
    let count = F::from(points.len())?;
    let (mut sx, mut sy) = (F::zero(), F::zero());
    for &(n, y) in points {
        sx = sx + n.ln();
        sy = sy + y.ln();
    }
    let (mx, my) = (sx / count, sy / count);
    let (mut sxx, mut sxy) = (F::zero(), F::zero());
    for &(n, y) in points {
        let dx = n.ln() - mx;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * (y.ln() - my);
    }
    if sxx == F::zero() {
        return None;
    }
    let slope = sxy / sxx;
    Some(((my - slope * mx).exp(), -slope))
}

/// Fitted `(ĉ, α̂)` over every index in `[n_lo, n_hi]`.
pub fn estimate_asymptotics(spec: &SequenceSpec, n_lo: u64, n_hi: u64) -> Result<(f64, f64)> {
    if n_lo < 1 || n_hi < 2 * n_lo {
        return Err(Error::InvalidArgument(format!(
            "need n_hi ≥ 2·n_lo ≥ 2, got [{n_lo}, {n_hi}]"
        )));
    }
    let mut stream = TermStream::starting_at(spec, 256, n_lo);
    let mut points = Vec::with_capacity((n_hi - n_lo + 1) as usize);
    for n in n_lo..=n_hi {
        let t = stream.next_term();
        if t.lo.sign() != num_bigint::Sign::Plus {
            return Err(Error::NonPositiveTerm { index: n });
        }
        points.push((n as f64, t.mid_f64()));
    }
    fit_power_law(&points).ok_or_else(|| Error::InvalidArgument("degenerate fit range".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..50).map(|n| (n as f64, 3.0 * (n as f64).powf(-1.5))).collect();
        let (c, a) = fit_power_law(&pts).unwrap();
        assert!((c - 3.0).abs() < 1e-9 && (a - 1.5).abs() < 1e-12);
        let pts32: Vec<(f32, f32)> = (1..50).map(|n| (n as f32, 2.0 / n as f32)).collect();
        let (_, a32) = fit_power_law(&pts32).unwrap();
        assert!((a32 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn catalog_exponents() {
        let (_, a) = estimate_asymptotics(&SequenceSpec::Harmonic, 1000, 10000).unwrap();
        assert!((0.99..=1.01).contains(&a));
        let (c, a) = estimate_asymptotics(&SequenceSpec::GammaRatio, 1000, 10000).unwrap();
        assert!((0.49..=0.51).contains(&a));
        assert!((c - 1.0).abs() < 0.01);
        let (_, a) = estimate_asymptotics(&SequenceSpec::Cantor, 100, 1000).unwrap();
        assert!((0.60..=0.66).contains(&a), "{a}");
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(estimate_asymptotics(&SequenceSpec::Harmonic, 10, 15).is_err());
        assert!(estimate_asymptotics(&SequenceSpec::Harmonic, 0, 15).is_err());
    }
}
