//! The greedy sign-selection engine: `a_0 = 0`, `ε_n = +1` iff
//! `a_{n−1} ≤ x`, `a_n = a_{n−1} + ε_n x_n`.
//!
//! Partial sums are tracked as fixed-point enclosures. An undecided
//! comparison is settled exactly when the target is rational (ties are
//! possible only then), otherwise by doubling the precision and replaying
//! the already certified sign prefix.

mod engine;
mod exactsum;
mod io;
mod replay;
mod trace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{PrecisionPolicy, TargetExpr};
use crate::moments::SequenceSpec;
use crate::scalar::Scalar;

pub use io::{TRACE_FORMAT, TRACE_VERSION};
pub use replay::{check_invariants, error_at, InvariantReport, Replay};
pub use trace::{first_crossing, Checkpoint, GreedyTrace, Side};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithMode {
    /// Fixed-point enclosures with certified decisions.
    #[default]
    Interval,
    /// Exact rational partial sums throughout.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyRun {
    pub target: TargetExpr,
    pub spec: SequenceSpec,
    pub max_steps: u64,
    pub checkpoint_stride: u64,
    pub precision: PrecisionPolicy,
    pub mode: ArithMode,
}

impl GreedyRun {
    /// Run with stride 1, default precision and interval arithmetic.
    pub fn new(target: TargetExpr, spec: SequenceSpec, max_steps: u64) -> Self {
        GreedyRun {
            target,
            spec,
            max_steps,
            checkpoint_stride: 1,
            precision: PrecisionPolicy::default(),
            mode: ArithMode::Interval,
        }
    }

    pub fn stride(mut self, stride: u64) -> Self {
        self.checkpoint_stride = stride;
        self
    }

    pub fn precision(mut self, policy: PrecisionPolicy) -> Self {
        self.precision = policy;
        self
    }

    pub fn mode(mut self, mode: ArithMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be ≥ 1".into()));
        }
        if self.checkpoint_stride == 0 {
            return Err(Error::InvalidArgument("checkpoint stride must be ≥ 1".into()));
        }
        PrecisionPolicy::new(self.precision.initial_bits, self.precision.cap_bits)?;
        self.target.check_domain()
    }
}

pub fn run(cfg: &GreedyRun) -> Result<GreedyTrace> {
    cfg.validate()?;
    engine::dispatch(cfg)
}

/// The plain recursion in any scalar type, without certification: signs
/// and partial sums `a_1..a_N` for the given terms. Exact for `Rational`.
pub fn greedy_sums<S: Scalar>(target: &S, terms: &[S]) -> (Vec<bool>, Vec<S>) {
    let mut a = S::zero();
    let mut signs = Vec::with_capacity(terms.len());
    let mut sums = Vec::with_capacity(terms.len());
    for t in terms {
        let plus = a <= *target;
        a = if plus { a + t.clone() } else { a - t.clone() };
        signs.push(plus);
        sums.push(a.clone());
    }
    (signs, sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rational, Rational};
    use crate::moments::exact_terms;

    fn t(s: &str) -> TargetExpr {
        s.parse().unwrap()
    }

    fn harmonic(target: &str, n: u64) -> GreedyTrace {
        run(&GreedyRun::new(t(target), SequenceSpec::Harmonic, n)).unwrap()
    }

    fn exact_sums(trace: &GreedyTrace) -> Vec<Rational> {
        let terms: Vec<Rational> = exact_terms(trace.spec(), 1, trace.len() as usize)
            .unwrap()
            .into_iter()
            .map(|e| e.coeff)
            .collect();
        let mut a = Rational::from_integer(0.into());
        trace
            .signs()
            .iter()
            .zip(terms)
            .map(|(&s, x)| {
                a = if s { &a + x } else { &a - x };
                a.clone()
            })
            .collect()
    }

    #[test]
    fn log2_alternates() {
        let tr = harmonic("log(2)", 200);
        let a = exact_sums(&tr);
        assert_eq!(a[..3], [rational(1, 1), rational(1, 2), rational(5, 6)]);
        assert!(tr.signs().windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn zero_target() {
        let tr = harmonic("0", 6);
        let a = exact_sums(&tr);
        assert_eq!(
            a[..5],
            [rational(1, 1), rational(1, 2), rational(1, 6), rational(-1, 12), rational(-1, 12) + rational(1, 5)]
        );
        assert_eq!(tr.ties(), &[0]);
        assert_eq!(tr.first_crossing(), Some(0));
    }

    #[test]
    fn sqrt2_start_and_crossing() {
        let tr = harmonic("sqrt(2)", 50);
        let a = exact_sums(&tr);
        assert_eq!(a[..3], [rational(1, 1), rational(3, 2), rational(7, 6)]);
        assert_eq!(first_crossing(&tr), Some(1));
    }

    #[test]
    fn first_crossing_examples() {
        let sq = |target: &str, n| run(&GreedyRun::new(t(target), SequenceSpec::InverseSquare, n)).unwrap();
        assert_eq!(sq("0.2", 50).first_crossing(), Some(0));
        assert_eq!(sq("10", 2000).first_crossing(), None);
    }

    #[test]
    fn ties_take_plus_and_record_zero_error() {
        // a_1 = 1 = x, then a_2 = 3/2
        let tr = harmonic("1", 4);
        assert_eq!(tr.ties(), &[1]);
        assert_eq!(tr.sign(2), 1);
        assert!(tr.checkpoints()[0].error.is_point());
        assert_eq!(error_at(&tr, 1, 64).unwrap(), crate::exactnum::PrecisionInterval::zero(64));
        // dyadic ties are exact points in fixed point too
        let tr = harmonic("1/2", 4);
        assert!(tr.is_tie(2));
    }

    #[test]
    fn exact_mode_agrees_with_interval_mode() {
        for target in ["sqrt(2)", "log(2)", "0.8", "0", "-3/7"] {
            let a = run(&GreedyRun::new(t(target), SequenceSpec::Harmonic, 300)).unwrap();
            let b = run(&GreedyRun::new(t(target), SequenceSpec::Harmonic, 300).mode(ArithMode::Exact)).unwrap();
            assert_eq!(a.signs(), b.signs(), "{target}");
            assert_eq!(a.ties(), b.ties());
            assert!(b.exact_mode() && !a.exact_mode());
            for (ca, cb) in a.checkpoints().iter().zip(b.checkpoints()) {
                assert!(ca.error.overlaps(&cb.error));
            }
        }
        let g = GreedyRun::new(t("1/2"), SequenceSpec::GammaRatio, 10).mode(ArithMode::Exact);
        assert!(matches!(run(&g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn scalar_recursion_matches_engine() {
        let terms: Vec<f64> = (1..=500).map(|n| 1.0 / n as f64).collect();
        let (signs, _) = greedy_sums(&0.3f64, &terms);
        let tr = harmonic("0.3", 500);
        // floating point agrees until errors reach rounding level
        assert_eq!(signs[..100], tr.signs()[..100]);
        let qterms: Vec<Rational> = (1..=60).map(|n| rational(1, n)).collect();
        let (qsigns, _) = greedy_sums(&rational(3, 10), &qterms);
        assert_eq!(qsigns[..], tr.signs()[..60]);
    }

    #[test]
    fn precision_stability_and_determinism() {
        for target in ["sqrt(2)", "log(3)", "0.8"] {
            let base = GreedyRun::new(t(target), SequenceSpec::Harmonic, 2000);
            let a = run(&base).unwrap();
            let b = run(&base).unwrap();
            let c = run(&base.clone().precision(PrecisionPolicy::new(512, 1 << 20).unwrap())).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.signs(), c.signs());
        }
    }

    #[test]
    fn escalation_hits_cap() {
        // a low cap with a target that needs deep comparisons
        let cfg = GreedyRun::new(t("sqrt(2)"), SequenceSpec::Harmonic, 4000)
            .precision(PrecisionPolicy::new(16, 32).unwrap());
        match run(&cfg) {
            Err(Error::PrecisionCap { index, cap }) => {
                assert!(index >= 1 && cap == 32);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn escalation_replays_prefix() {
        let lo = GreedyRun::new(t("sqrt(2)"), SequenceSpec::Harmonic, 3000)
            .precision(PrecisionPolicy::new(8, 1 << 12).unwrap());
        let a = run(&lo).unwrap();
        assert!(a.final_bits() > 8);
        let b = run(&GreedyRun::new(t("sqrt(2)"), SequenceSpec::Harmonic, 3000)).unwrap();
        assert_eq!(a.signs(), b.signs());
    }

    #[test]
    fn gamma_ratio_and_cantor_runs() {
        let g = run(&GreedyRun::new(t("1/2"), SequenceSpec::GammaRatio, 500)).unwrap();
        assert_eq!(g.first_crossing(), Some(0));
        let g0 = run(&GreedyRun::new(t("0"), SequenceSpec::GammaRatio, 50)).unwrap();
        assert_eq!(g0.ties(), &[0]);
        let c = run(&GreedyRun::new(t("0.3"), SequenceSpec::Cantor, 500)).unwrap();
        assert!(check_invariants(&c).unwrap().is_clean());
    }

    #[test]
    fn invariants_hold_on_small_runs() {
        for target in ["sqrt(2)", "0.8", "log(2)", "0"] {
            let tr = harmonic(target, 3000);
            let rep = check_invariants(&tr).unwrap();
            assert!(rep.is_clean(), "{target}: {rep:?}");
            assert!(rep.closeness_checked > 2000);
        }
    }

    #[test]
    fn json_round_trip() {
        let tr = run(&GreedyRun::new(t("0.8"), SequenceSpec::Harmonic, 1000).stride(7)).unwrap();
        let text = tr.to_json();
        let back = GreedyTrace::from_json(&text).unwrap();
        assert_eq!(back, tr);
        assert_eq!(back.to_json(), text);
        assert!(GreedyTrace::from_json(&text.replace("signwalk-trace", "other")).is_err());
        assert!(GreedyTrace::from_json("{}").is_err());
        let mut csv = Vec::new();
        tr.write_checkpoint_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("n,sign,log10_error_lo,log10_error_hi\n7,"));
        assert_eq!(csv.lines().count(), 1 + 142 + 1);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run(&GreedyRun::new(t("1"), SequenceSpec::Harmonic, 0)).is_err());
        assert!(run(&GreedyRun::new(t("1"), SequenceSpec::Harmonic, 5).stride(0)).is_err());
        assert!(run(&GreedyRun::new(TargetExpr::LogOf(rational(-1, 1)), SequenceSpec::Harmonic, 5)).is_err());
    }
}
