use std::f64::consts::{PI, TAU};

use hamming_qubit::automaton::{run_classical_counter, true_remainder, QubitAutomaton};
use hamming_qubit::correction::{tmr_failure_prob, GhzMachine};
use hamming_qubit::energy::{ledger_report, LedgerParams, SchemeKind};
use hamming_qubit::montecarlo::{estimate_error_rate, generate_conditioned, wilson_interval};
use hamming_qubit::rng::substream;
use hamming_qubit::{BitString, Noise, PlanarQubit, ProblemSpec, Register, Scheme, TrialConfig};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use proptest::prelude::*;

fn normalized(raw: Vec<(f64, f64)>) -> Register {
    let norm = raw
        .iter()
        .map(|(re, im)| re * re + im * im)
        .sum::<f64>()
        .sqrt();
    let amps = raw
        .iter()
        .map(|&(re, im)| Complex::new(re / norm, im / norm))
        .collect();
    Register::from_amplitudes(amps).unwrap()
}

fn state(n_q: usize) -> impl Strategy<Value = Register> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n_q)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(normalized)
}

fn max_deviation(a: &Register, b: &Register) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn pulses_and_flips_preserve_norm(
        psi in (1usize..=5).prop_flat_map(state),
        phases in prop::collection::vec(-10.0..10.0f64, 1..20),
        target in 0usize..5,
    ) {
        let t = target % psi.num_qubits();
        let mut s = psi;
        for p in phases {
            s = s.phase_pulse(p, t).unwrap().bit_flip(t).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encoder_round_trip(psi in (1usize..=6).prop_flat_map(state)) {
        let back = psi.clone().ghz_encode_unitary(false).ghz_encode_unitary(true);
        prop_assert!(max_deviation(&psi, &back) < 1e-12);
        let forth = psi.clone().ghz_encode_unitary(true).ghz_encode_unitary(false);
        prop_assert!(max_deviation(&psi, &forth) < 1e-12);
    }

    #[test]
    fn planar_angle_is_two_pi_periodic(theta in -50.0..50.0f64, turns in -5i32..5) {
        let a = PlanarQubit::from_angle(theta).unwrap();
        let b = PlanarQubit::from_angle(theta + TAU * f64::from(turns)).unwrap();
        prop_assert!((a.prob_outcome_one() - b.prob_outcome_one()).abs() < 1e-9);
        prop_assert!((0.0..TAU).contains(&a.theta()));
        let p = a.prob_outcome_one();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn noiseless_qubit_tracks_weight(n in 2u64..40, ones in 0usize..300, zeros in 0usize..50) {
        let bits = BitString::with_weight(ones, zeros);
        let spec = ProblemSpec::new(n, (ones + zeros).max(1) as u64).unwrap();
        let mut m = QubitAutomaton::<f64>::new(&spec);
        let mut rng = substream(0, 0);
        for b in bits.iter() {
            m.feed(b, &Noise::noiseless(), &mut rng);
        }
        let k = ones as u64 % (2 * n);
        let expected = (1.0 + (PI * k as f64 / n as f64).cos()) / 2.0;
        prop_assert!((m.state().prob_outcome_one() - expected).abs() < 1e-9);
        if k == n {
            prop_assert_eq!(m.state().prob_outcome_one(), 0.0);
        }
    }

    #[test]
    fn counter_matches_oracle(n in 2u64..100, bits in prop::collection::vec(any::<bool>(), 1..2000)) {
        let oracle = bits.iter().filter(|&&b| b).count() as u64 % (2 * n);
        let bits = BitString::new(bits);
        let spec = ProblemSpec::new(n, bits.len() as u64).unwrap();
        prop_assert_eq!(run_classical_counter(&bits, &spec).remainder, oracle);
        prop_assert_eq!(true_remainder(&bits, &spec), oracle);
    }

    #[test]
    fn ghz_readout_matches_planar_qubit(n in 2u64..12, k in 0u64..60, n_q in prop::sample::select(vec![1usize, 3, 5])) {
        let spec = ProblemSpec::new(n, 100).unwrap();
        let mut ghz = GhzMachine::<f64>::new(&spec, n_q).unwrap();
        let mut planar = QubitAutomaton::<f64>::new(&spec);
        let mut rng = substream(1, 1);
        for _ in 0..k {
            ghz.feed(true, &Noise::noiseless(), &mut rng);
            planar.feed(true, &Noise::noiseless(), &mut rng);
        }
        let decoded = ghz.register().clone().ghz_encode_unitary(true);
        let p0 = decoded.probability(0);
        let p1 = decoded.probability((1 << n_q) - 1);
        prop_assert!((p0 - planar.state().prob_outcome_one()).abs() < 1e-9);
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tmr_improves_small_error(p in 0.0..0.5f64) {
        let f = tmr_failure_prob(p).unwrap();
        prop_assert!(f <= p + 1e-15);
        prop_assert!((f + tmr_failure_prob(1.0 - p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_interval_brackets_estimate(trials in 1u64..100_000, frac in 0.0..=1.0f64) {
        let wrong = (frac * trials as f64).floor() as u64;
        let (lo, hi) = wilson_interval(wrong, trials).unwrap();
        let p = wrong as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn conditioned_strings_have_exact_weight(len in 1u64..500, frac in 0.0..=1.0f64, seed in any::<u64>()) {
        let w = (frac * len as f64).floor() as u64;
        let bits = generate_conditioned(len, w, &mut substream(seed, 0));
        prop_assert_eq!(bits.len() as u64, len);
        prop_assert_eq!(bits.hamming_weight(), w);
    }

    #[test]
    fn exact_ledger_speedup(n in 1u64..500, len in 1u64..10_000, tau_num in 1i64..1000, tau_den in 1i64..1000) {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let rows = ledger_report(&LedgerParams::new(n, len, q(tau_num, tau_den), q(1, 1), q(1, 2))).unwrap();
        let single = rows.iter().find(|r| r.scheme == SchemeKind::SingleQubit).unwrap();
        prop_assert_eq!(single.ratio_vs_classical.clone(), BigRational::from_integer(BigInt::from(n)));
    }
}

/// The 95% Wilson interval should cover the true rate in roughly 95 of 100
/// independent experiments; at least 90 is required.
#[test]
fn wilson_coverage() {
    let spec = ProblemSpec::new(2, 200).unwrap();
    let phi0 = 0.03;
    let mut covered = 0;
    let mut truth = None;
    for seed in 0..100 {
        let cfg = TrialConfig::new(
            spec,
            Noise::angle(phi0).unwrap(),
            Scheme::SingleQubit,
            2_000,
            seed,
        )
        .with_weight(100);
        let s = estimate_error_rate(&cfg).unwrap();
        let p = s.predicted.unwrap();
        truth = Some(p);
        covered += usize::from(s.ci_low <= p && p <= s.ci_high);
    }
    assert!(covered >= 90, "coverage {covered}/100 at p={truth:?}");
}
