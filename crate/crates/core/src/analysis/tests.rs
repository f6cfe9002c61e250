use proptest::prelude::*;

use super::*;
use crate::exactnum::{pi_fixed, rational, TargetExpr};
use crate::greedy::{run, GreedyRun};

fn trace(target: &str, spec: SequenceSpec, n: u64) -> GreedyTrace {
    let t: TargetExpr = target.parse().unwrap();
    run(&GreedyRun::new(t, spec, n)).unwrap()
}

#[test]
fn thue_morse_examples() {
    let s: String = thue_morse_prefix(16).iter().map(|b| b.to_string()).collect();
    assert_eq!(s, "0110100110010110");
    assert_eq!(thue_morse_prefix(1), vec![0]);
    assert_eq!(thue_morse_prefix(4), vec![0, 1, 1, 0]);
}

proptest! {
    #[test]
    fn thue_morse_self_similar(len in 1usize..2000) {
        let t = thue_morse_prefix(len);
        let t2 = thue_morse_prefix(2 * len);
        for i in 0..len {
            prop_assert_eq!(t2[2 * i], t[i]);
            prop_assert_eq!(t2[2 * i + 1], 1 - t[i]);
        }
    }

    #[test]
    fn level_wait_formula(n in 1u64..100_000, a in 1u32..8) {
        let w = predict_level_wait(n, a as f64).unwrap();
        let exact = (2.0f64).powf(1.0 + 1.0 / a as f64) * n as f64;
        prop_assert!((w as f64) >= exact && (w as f64) < exact + 1.0);
    }
}

#[test]
fn thue_morse_window_at_four_fifths() {
    let tr = trace("0.8", SequenceSpec::Harmonic, 200);
    assert!(tm_match(&tr, 55) >= 12);
    assert_eq!(sign_string(&tr, 55, 12), "-,+,+,-,+,-,-,+,+,-,-,+");
}

#[test]
fn tm_match_edge_cases() {
    let alt = trace("log(2)", SequenceSpec::Harmonic, 100);
    for start in 0..50 {
        assert!(tm_match(&alt, start) <= 3);
    }
    assert_eq!(tm_match(&alt, alt.len()), 0);
    assert_eq!(tm_match(&alt, alt.len() + 5), 0);
    assert!(tm_scan(&alt, 4).is_empty());
}

#[test]
fn hit_examples() {
    let sqrt2 = trace("sqrt(2)", SequenceSpec::Harmonic, 10_000);
    let h = hits(&sqrt2, 4, 10).unwrap();
    assert!(!h.indices.is_empty());
    assert!(h.ambiguous.is_empty());
    for &n in &h.indices {
        let e = error_at(&sqrt2, n, 512).unwrap();
        assert!(e.hi() * Rational::from_integer(BigInt::from(n).pow(4)) <= Rational::one());
    }
    let log2 = trace("log(2)", SequenceSpec::Harmonic, 10_000);
    assert!(hits(&log2, 2, 10).unwrap().indices.is_empty());
    // n = 2 is a trivial level-2 hit: |log 2 − 1/2| < 1/4
    assert_eq!(hits(&log2, 2, 1).unwrap().indices, vec![1, 2]);
    let primes = trace("sqrt(2)", SequenceSpec::PrimeReciprocal, 10_000);
    assert!(hits(&primes, 4, 12).unwrap().indices.is_empty());
    assert!(hits(&primes, 0, 1).is_err());
}

#[test]
fn density_examples() {
    let tr = trace("sqrt(2)", SequenceSpec::Harmonic, 1000);
    assert_eq!(level_density(&tr, 0.0, 1e9, 1000).unwrap().fraction, 1.0);
    // n = 1 always qualifies since C·1^-β = C
    let deep = level_density(&tr, 50.0, 1.0, 1000).unwrap();
    assert_eq!((deep.hits, deep.ambiguous), (1, 0));
    let mut last = 1.0;
    for beta in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        let f = level_density(&tr, beta, 1.0, 1000).unwrap().fraction;
        assert!(f <= last);
        last = f;
    }
    assert!(level_density(&tr, 1.0, 1.0, 1001).is_err());
    assert!(level_density(&tr, 1.0, 0.0, 10).is_err());
}

#[test]
fn liminf_examples() {
    let tr = trace("sqrt(2)", SequenceSpec::Harmonic, 3);
    assert_eq!(liminf_stat(&tr).unwrap().len(), 1);
    let tr = trace("sqrt(2)", SequenceSpec::Harmonic, 20_000);
    let s = liminf_stat(&tr).unwrap();
    assert_eq!(s.len(), 20_000 - 2);
    assert!(s.windows(2).all(|w| w[1].1 <= w[0].1));
    // n = 4: |17/12 − √2| = 0.00245…, log / (log 4)² = −3.127…
    assert!((s[1].1 - -3.1275).abs() < 1e-3, "{}", s[1].1);
    let log2 = trace("log(2)", SequenceSpec::Harmonic, 10_000);
    let v = liminf_value_at(&log2, 10_000, 256).unwrap();
    let expect = (1.0f64 / 20_000.0).ln() / (10_000f64.ln().powi(2));
    assert!((v - expect).abs() < 1e-3);
}

#[test]
fn alternation_examples() {
    let log2 = trace("log(2)", SequenceSpec::Harmonic, 10_000);
    let a = alternation_tail(&log2, 10_000).unwrap();
    assert!(a.alternating);
    assert_eq!(a.tail_start, 1);
    let sqrt2 = trace("sqrt(2)", SequenceSpec::Harmonic, 10_000);
    assert!(!alternation_tail(&sqrt2, 10_000).unwrap().alternating);
    let short = trace("log(2)", SequenceSpec::Harmonic, 100);
    let r = alternation_tail(&short, 1000).unwrap();
    assert!(!r.alternating && r.note.is_some());
    assert!(alternation_tail(&short, 1).is_err());
}

#[test]
fn reconstruction_examples() {
    let zero = Rational::from_integer(0.into());
    let two = reconstruct_from_alternation(&SequenceSpec::Harmonic, 0, &zero, 2, 64).unwrap();
    assert_eq!((two.lo(), two.hi()), (&rational(1, 2), &rational(1, 1)));
    let log2 = crate::exactnum::eval_target(&"log(2)".parse().unwrap(), 128).unwrap();
    for t in [2u64, 3, 10, 11, 1000, 10_000] {
        let b = reconstruct_from_alternation(&SequenceSpec::Harmonic, 0, &zero, t, 128).unwrap();
        assert!(log2.is_subset_of(&b), "T = {t}");
        let w = crate::exactnum::rational_to_f64(&b.width());
        assert!((w * t as f64 - 1.0).abs() < 1e-6);
    }
    // Σ (−1)^(n+1)/n² = π²/12
    let p = pi_fixed(200);
    let lo = p.lo_rational() * p.lo_rational() / rational(12, 1);
    let hi = p.hi_rational() * p.hi_rational() / rational(12, 1);
    let b = reconstruct_from_alternation(&SequenceSpec::InverseSquare, 0, &zero, 5001, 128).unwrap();
    assert!(*b.lo() <= lo && hi <= *b.hi());
    assert!(reconstruct_from_alternation(&SequenceSpec::Harmonic, 0, &zero, 1, 64).is_err());
}

#[test]
fn level_wait_examples() {
    assert_eq!(predict_level_wait(100, 1.0).unwrap(), 400);
    assert_eq!(predict_level_wait(10, 0.5).unwrap(), 80);
    assert_eq!(predict_level_wait(1, 1.0).unwrap(), 4);
    assert!(predict_level_wait(1, 0.0).is_err());
    assert!(predict_level_wait(1, -1.0).is_err());
}

#[test]
fn report_and_csv() {
    let tr = trace("0.8", SequenceSpec::Harmonic, 500);
    let mut rep = AnalysisReport::new(&tr, 100).unwrap();
    rep.hits.push(hits(&tr, 2, 10).unwrap());
    rep.thue_morse = Some(tm_scan(&tr, 12));
    let json = rep.to_json();
    assert!(json.contains("\"target\": \"0.8\""));
    let mut csv = Vec::new();
    write_hits_csv(&rep.hits, &mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().starts_with("k,n,status\n"));
}
