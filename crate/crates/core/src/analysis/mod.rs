//! Statistics over greedy traces: certified hits, level densities, the
//! liminf statistic, Thue–Morse windows and alternating tails.

mod scan;

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{FixedInterval, PrecisionInterval, Rational};
use crate::greedy::{error_at, GreedyTrace, Replay};
use crate::moments::{SequenceSpec, TermStream};
use scan::{base_bits, classify_range, log2_fixed, Class};

/// Indices with certified `|x − a_n| ≤ n^-k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HitRecord {
    pub k: u32,
    pub n_min: u64,
    pub indices: Vec<u64>,
    /// Enclosures that still straddled `n^-k` at the precision cap.
    pub ambiguous: Vec<u64>,
}

/// Certified hits at level `k` among `n_min ≤ n ≤ N`. Every index is
/// scanned, not just the checkpoints.
pub fn hits(trace: &GreedyTrace, k: u32, n_min: u64) -> Result<HitRecord> {
    if k < 1 {
        return Err(Error::InvalidArgument("hit level k must be ≥ 1".into()));
    }
    let from = n_min.max(1);
    let scan = classify_range(trace, from, trace.len(), |n, err| {
        // |x − a_n| ≤ n^-k  ⇔  err · n^k ≤ 2^scale
        let unit = BigInt::one() << err.scale;
        let nk = BigInt::from(n).pow(k);
        if &err.hi * &nk <= unit {
            Class::Yes
        } else if &err.lo * &nk > unit {
            Class::No
        } else {
            Class::Refine
        }
    })?;
    Ok(HitRecord {
        k,
        n_min: from,
        indices: scan.yes,
        ambiguous: scan.ambiguous,
    })
}

/// Fraction of `n ≤ horizon` with certified `|x − a_n| ≤ C·n^-β`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub beta: f64,
    pub c: f64,
    pub horizon: u64,
    pub hits: u64,
    pub ambiguous: u64,
    pub fraction: f64,
}

/// Slack in the `log2` comparison against the threshold, covering the
/// rounding of `log2` itself.
const LOG_MARGIN: f64 = 1e-9;

pub fn level_density(trace: &GreedyTrace, beta: f64, c: f64, horizon: u64) -> Result<DensityReport> {
    if horizon == 0 || horizon > trace.len() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} outside 1..={}",
            trace.len()
        )));
    }
    if !beta.is_finite() || !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidArgument("need finite β and C > 0".into()));
    }
    let log2_c = c.log2();
    let scan = classify_range(trace, 1, horizon, |n, err| {
        let threshold = log2_c - beta * (n as f64).log2();
        let margin = LOG_MARGIN * (1.0 + threshold.abs());
        let hi = log2_fixed(&err.hi, err.scale);
        let lo = log2_fixed(&err.lo, err.scale);
        if hi < threshold - margin {
            Class::Yes
        } else if lo > threshold + margin {
            Class::No
        } else if (&err.hi - &err.lo) * (BigInt::one() << 50u32) <= err.hi {
            // enclosure is already tight; the threshold itself is the problem
            Class::Ambiguous
        } else {
            Class::Refine
        }
    })?;
    let hits = scan.yes.len() as u64;
    Ok(DensityReport {
        beta,
        c,
        horizon,
        hits,
        ambiguous: scan.ambiguous.len() as u64,
        fraction: hits as f64 / horizon as f64,
    })
}

/// First index of the liminf statistic.
pub const LIMINF_START: u64 = 3;

/// Running minimum of `log|x − a_n| / (log n)²` over `3 ≤ n`, from the
/// certified upper bound of each error. Enclosures are refined until their
/// relative width is below 10%. One value per checkpoint with `n ≥ 3`.
pub fn liminf_stat(trace: &GreedyTrace) -> Result<Vec<(u64, f64)>> {
    let n_max = trace.len();
    if n_max < LIMINF_START {
        return Ok(Vec::new());
    }
    let bits = base_bits(trace);
    let mut values = vec![f64::NAN; (n_max - LIMINF_START + 1) as usize];
    let mut wide = Vec::new();
    let mut r = Replay::new(trace, bits)?;
    r.advance_to(LIMINF_START)?;
    let value = |n: u64, err: &FixedInterval| -> Option<f64> {
        // relative width (hi − lo)/hi < 1/10
        if err.hi.is_positive() && (&err.hi - &err.lo) * 10u32 >= err.hi {
            return None;
        }
        let ln = (n as f64).ln();
        Some(log2_fixed(&err.hi, err.scale) * std::f64::consts::LN_2 / (ln * ln))
    };
    loop {
        let n = r.index();
        match value(n, &r.signed_error().abs()) {
            Some(v) => values[(n - LIMINF_START) as usize] = v,
            None => wide.push(n),
        }
        if n == n_max {
            break;
        }
        r.advance();
    }
    let mut b = bits;
    while !wide.is_empty() {
        let next = b.checked_mul(2).filter(|&x| x <= trace.policy().cap_bits);
        let mut r = Replay::new(trace, next.unwrap_or(b))?;
        let mut still = Vec::new();
        for &n in &wide {
            r.advance_to(n)?;
            let err = r.signed_error().abs();
            match (value(n, &err), next) {
                (Some(v), _) => values[(n - LIMINF_START) as usize] = v,
                (None, Some(_)) => still.push(n),
                // out of precision: keep the certified upper bound anyway
                (None, None) => {
                    let ln = (n as f64).ln();
                    values[(n - LIMINF_START) as usize] =
                        log2_fixed(&err.hi, err.scale) * std::f64::consts::LN_2 / (ln * ln);
                }
            }
        }
        if next.is_none() {
            break;
        }
        b = next.unwrap_or(b);
        wide = still;
    }
    let mut out = Vec::new();
    let mut running = f64::INFINITY;
    let mut cps = trace.checkpoints().iter().map(|c| c.n).filter(|&n| n >= LIMINF_START).peekable();
    for (i, v) in values.iter().enumerate() {
        let n = LIMINF_START + i as u64;
        running = running.min(*v);
        if cps.peek() == Some(&n) {
            out.push((n, running));
            cps.next();
        }
    }
    Ok(out)
}

/// `t_0 … t_{L−1}`, `t_n` the parity of the binary digit sum of `n`.
pub fn thue_morse_prefix(len: usize) -> Vec<u8> {
    (0..len).map(|n| (n.count_ones() % 2) as u8).collect()
}

/// Length of the longest Thue–Morse prefix matched by `ε_{start+1}, …`
/// under `− ↦ 0, + ↦ 1`, complemented when `ε_{start+1} = +`.
pub fn tm_match(trace: &GreedyTrace, start: u64) -> u64 {
    let signs = trace.signs();
    if start >= trace.len() {
        return 0;
    }
    let window = &signs[start as usize..];
    let flip = window[0];
    window
        .iter()
        .enumerate()
        .take_while(|(i, &s)| (s ^ flip) == ((i.count_ones() % 2) == 1))
        .count() as u64
}

/// The sign window as a `+`/`−` string.
pub fn sign_string(trace: &GreedyTrace, start: u64, len: u64) -> String {
    let end = (start + len).min(trace.len());
    (start..end)
        .map(|i| if trace.signs()[i as usize] { "+" } else { "-" })
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TmWindow {
    pub start: u64,
    pub length: u64,
}

/// All starts whose Thue–Morse match has length at least `min_len`.
pub fn tm_scan(trace: &GreedyTrace, min_len: u64) -> Vec<TmWindow> {
    (0..trace.len())
        .filter_map(|start| {
            let length = tm_match(trace, start);
            (length >= min_len).then_some(TmWindow { start, length })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternationReport {
    /// The final `window` signs strictly alternate.
    pub alternating: bool,
    /// First index `s` with `ε_s, …, ε_N` strictly alternating.
    pub tail_start: u64,
    pub note: Option<String>,
}

pub fn alternation_tail(trace: &GreedyTrace, window: u64) -> Result<AlternationReport> {
    if window < 2 {
        return Err(Error::InvalidArgument("alternation window must be ≥ 2".into()));
    }
    let signs = trace.signs();
    let mut s = signs.len();
    while s >= 2 && signs[s - 2] != signs[s - 1] {
        s -= 1;
    }
    // s is the 1-based start of the alternating tail
    let tail_start = s as u64;
    let tail_len = trace.len() - tail_start + 1;
    if trace.len() < window {
        return Ok(AlternationReport {
            alternating: false,
            tail_start,
            note: Some(format!("insufficient data: {} steps < window {window}", trace.len())),
        });
    }
    Ok(AlternationReport {
        alternating: tail_len >= window,
        tail_start,
        note: None,
    })
}

/// Bracket of `x = a_m + x_{m+1} − x_{m+2} + …` from the first `terms`
/// summands: the two last partial sums of the alternating series, so the
/// width is `x_{m+terms}`.
pub fn reconstruct_from_alternation(
    spec: &SequenceSpec,
    m: u64,
    a_m: &Rational,
    terms: u64,
    bits: u32,
) -> Result<PrecisionInterval> {
    if terms < 2 {
        return Err(Error::InvalidArgument("need at least 2 terms".into()));
    }
    if bits < 2 {
        return Err(Error::InvalidArgument("precision must be ≥ 2 bits".into()));
    }
    let scale = bits + 64 - terms.leading_zeros() + 8;
    let mut stream = TermStream::starting_at(spec, scale, m + 1);
    let mut sum = FixedInterval::from_rational(a_m, scale);
    let mut prev = sum.clone();
    for i in 0..terms {
        prev = sum.clone();
        sum.add_signed_assign(&stream.next_term(), i % 2 == 0);
    }
    // after an odd count the last sum is an upper bound, after an even one a lower bound
    let (lower, upper) = if terms.is_multiple_of(2) { (sum, prev) } else { (prev, sum) };
    let enclosure = FixedInterval {
        lo: lower.lo,
        hi: upper.hi,
        scale,
    };
    Ok(PrecisionInterval::from_fixed(&enclosure, bits))
}

/// `⌈2^(1+1/α) · n⌉`, the predicted wait until the next level.
pub fn predict_level_wait(n: u64, alpha: f64) -> Result<u64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidArgument(format!("α must be positive, got {alpha}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be ≥ 1".into()));
    }
    let v = (1.0 + 1.0 / alpha).exp2() * n as f64;
    Ok(v.ceil() as u64)
}

/// Liminf value recomputed at one index, for spot checks.
pub fn liminf_value_at(trace: &GreedyTrace, n: u64, bits: u32) -> Result<f64> {
    let e = error_at(trace, n, bits)?;
    let ln = (n as f64).ln();
    Ok(e.log10_bounds().1 * std::f64::consts::LN_10 / (ln * ln))
}

/// JSON report keyed by target, sequence and length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub target: String,
    pub spec: String,
    pub steps: u64,
    pub first_crossing: Option<u64>,
    pub hits: Vec<HitRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub liminf: Option<LiminfSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thue_morse: Option<Vec<TmWindow>>,
    pub alternation: AlternationReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiminfSummary {
    pub final_n: u64,
    pub final_value: f64,
    pub reference: f64,
    pub distance_to_reference: f64,
}

/// `−1/log 4`, the limit value for generic targets of the harmonic walk.
pub const LIMINF_REFERENCE: f64 = -0.721_347_520_444_481_7;

impl LiminfSummary {
    pub fn from_series(series: &[(u64, f64)]) -> Option<Self> {
        let &(n, v) = series.last()?;
        Some(LiminfSummary {
            final_n: n,
            final_value: v,
            reference: LIMINF_REFERENCE,
            distance_to_reference: (v - LIMINF_REFERENCE).abs(),
        })
    }
}

impl AnalysisReport {
    pub fn new(trace: &GreedyTrace, alternation_window: u64) -> Result<Self> {
        Ok(AnalysisReport {
            target: trace.target().to_string(),
            spec: trace.spec().to_string(),
            steps: trace.len(),
            first_crossing: trace.first_crossing(),
            hits: Vec::new(),
            density: None,
            liminf: None,
            thue_morse: None,
            alternation: alternation_tail(trace, alternation_window)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn write_hits_csv<W: Write>(records: &[HitRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "k,n,status")?;
    for r in records {
        for n in &r.indices {
            writeln!(out, "{},{},hit", r.k, n)?;
        }
        for n in &r.ambiguous {
            writeln!(out, "{},{},ambiguous", r.k, n)?;
        }
    }
    Ok(())
}

pub fn write_liminf_csv<W: Write>(series: &[(u64, f64)], mut out: W) -> std::io::Result<()> {
    writeln!(out, "n,running_min")?;
    for (n, v) in series {
        writeln!(out, "{n},{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
