//! Expected values computed independently of the library code paths.

use fehd_core::cost::{self, encoder_cost, fit_switch_time, gate_delay, ANCHOR_POINTS};
use fehd_core::encoder::{ItemMemory, SequenceEncoder};
use fehd_core::gates::{self, GateKind, MAJORITY_TABLE, XOR_TABLE};
use fehd_core::hv::bundle;
use fehd_core::{EncoderConfig, EncoderCostParams, Hypervector, HvRng, SwitchTimeFit};

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Probability a majority of `k` (odd) fair bits disagrees with one of them.
fn majority_disagreement(k: u64) -> f64 {
    0.5 - binom(k - 1, (k - 1) / 2) / 2f64.powi(k as i32)
}

#[test]
fn pair_bundle_distance_by_enumeration() {
    // (a, b, tiebreak) over 8 equiprobable patterns; the output disagrees
    // with a in exactly two of them.
    let mut disagree = 0;
    for p in 0u8..8 {
        let (a, b, r) = (p & 1, (p >> 1) & 1, (p >> 2) & 1);
        let out = u8::from(a + b + r >= 2);
        disagree += u8::from(out != a);
    }
    let expected = f64::from(disagree) / 8.0;
    assert_eq!(expected, 0.25);

    let d = 10_000;
    let sigma = (expected * (1.0 - expected) / d as f64).sqrt();
    let mut rng = HvRng::new(42);
    for trial in 0..20 {
        let a = Hypervector::random(d, &mut rng).unwrap();
        let b = Hypervector::random(d, &mut rng).unwrap();
        let s = bundle([&a, &b], &mut HvRng::new(trial)).unwrap();
        let got = s.normalized_hamming(&a).unwrap();
        assert!((got - expected).abs() < 5.0 * sigma, "trial {trial}: {got}");
    }
}

#[test]
fn odd_bundle_distance_matches_binomial() {
    let d = 10_000;
    let mut rng = HvRng::new(7);
    for k in [3u64, 5, 9, 21] {
        let p = majority_disagreement(k);
        let sigma = (p * (1.0 - p) / d as f64).sqrt();
        let xs: Vec<_> = (0..k).map(|_| Hypervector::random(d, &mut rng).unwrap()).collect();
        let s = bundle(&xs, &mut HvRng::new(0)).unwrap();
        for x in &xs {
            let got = s.normalized_hamming(x).unwrap();
            assert!((got - p).abs() < 5.0 * sigma, "k={k}: {got} vs {p}");
        }
    }
}

#[test]
fn random_vectors_are_quasi_orthogonal() {
    let d = 10_000;
    let sigma = (0.25 / d as f64).sqrt();
    let mut rng = HvRng::new(3);
    let xs: Vec<_> = (0..30).map(|_| Hypervector::random(d, &mut rng).unwrap()).collect();
    for i in 0..xs.len() {
        let ones = xs[i].count_ones() as f64 / d as f64;
        assert!((ones - 0.5).abs() < 5.0 * sigma);
        for j in i + 1..xs.len() {
            let h = xs[i].normalized_hamming(&xs[j]).unwrap();
            assert!((h - 0.5).abs() < 5.0 * sigma);
        }
    }
}

#[test]
fn item_memory_symbols_are_quasi_orthogonal() {
    let im = ItemMemory::with_default_alphabet(10_000, 11).unwrap();
    let vs: Vec<_> = (0..im.slots()).map(|s| im.vector_at(s)).collect();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let h = vs[i].normalized_hamming(vs[j]).unwrap();
            assert!((0.47..=0.53).contains(&h), "{i},{j}: {h}");
        }
    }
}

#[test]
fn shared_ngrams_pull_messages_together() {
    let enc = SequenceEncoder::from_config(&EncoderConfig::default()).unwrap();
    let e = |t: &str| enc.encode(t, &mut HvRng::new(0)).unwrap().0;
    let a = e("call now to claim your free prize");
    let b = e("call now to claim your free ringtone");
    let c = e("see you at the station after work");
    assert!(a.hamming(&b).unwrap() < a.hamming(&c).unwrap());
    assert!(a.normalized_hamming(&c).unwrap() > 0.4);
}

/// Independent solve: pick v0 so the activation constants implied by the
/// two adjacent anchor pairs agree, using a dense scan and secant polish.
fn oracle_fit(points: &[(f64, f64); 3]) -> (f64, f64, f64) {
    let a_pair = |v0: f64, (va, ta): (f64, f64), (vb, tb): (f64, f64)| {
        (ta.ln() - tb.ln()) / ((va - v0).powi(-2) - (vb - v0).powi(-2))
    };
    let h = |v0: f64| a_pair(v0, points[0], points[1]) - a_pair(v0, points[1], points[2]);
    let mut prev = (-50.0, h(-50.0));
    let mut bracket = None;
    let steps = 200_000;
    for i in 1..=steps {
        let v0 = -50.0 + i as f64 * (51.999 / steps as f64);
        let hv = h(v0);
        if prev.1.signum() != hv.signum() {
            bracket = Some((prev.0, v0));
            break;
        }
        prev = (v0, hv);
    }
    let (mut x0, mut x1) = bracket.expect("sign change");
    for _ in 0..100 {
        let (f0, f1) = (h(x0), h(x1));
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        x1 = x2;
    }
    let v0 = x1;
    let a = a_pair(v0, points[0], points[1]);
    let t0 = points[0].1 / (a * (points[0].0 - v0).powi(-2)).exp();
    (t0, a, v0)
}

#[test]
fn switch_fit_matches_independent_solver() {
    let fit = fit_switch_time(&ANCHOR_POINTS).unwrap();
    let (t0, a, v0) = oracle_fit(&ANCHOR_POINTS);
    assert!((fit.v0 - v0).abs() < 1e-6, "{} vs {v0}", fit.v0);
    assert!(((fit.a_over_kt - a) / a).abs() < 1e-6);
    assert!(((fit.t0 - t0) / t0).abs() < 1e-4);
    for (v, t) in ANCHOR_POINTS {
        let back = t0 * (a / (v - v0).powi(2)).exp();
        assert!(((back - t) / t).abs() < 1e-6);
    }
}

#[test]
fn gate_delay_decomposition() {
    let fit = SwitchTimeFit::reference();
    let sw = |v| fit.switch_time(v).unwrap();
    let xor = gate_delay(GateKind::Xor2, &fit, 10e-9).unwrap();
    let maj = gate_delay(GateKind::Majority3, &fit, 10e-9).unwrap();
    assert!((xor - (sw(3.0) + 3.0 * sw(4.0) + 10e-9)).abs() < 1e-18);
    assert!((maj - (2.0 * sw(3.0) + 10e-9)).abs() < 1e-18);
    assert!((xor - 31.2e-9).abs() < 1e-15);
    assert!((maj - 50e-9).abs() < 1e-15);
}

#[test]
fn switch_time_at_four_and_a_half_volts() {
    let t = SwitchTimeFit::reference().switch_time(4.5).unwrap();
    assert!(t < 400e-12);
    assert!(t > cost::ANCHOR_POINTS[2].1 / 10.0);
}

#[test]
fn encoder_cost_is_linear_in_d_and_z() {
    let fit = SwitchTimeFit::reference();
    let base = EncoderCostParams::new(40, 3, 100, 500);
    let r0 = encoder_cost(&base, &fit).unwrap();
    let rd = encoder_cost(&EncoderCostParams { d: 501, ..base.clone() }, &fit).unwrap();
    let rz = encoder_cost(&EncoderCostParams { z: 101, ..base.clone() }, &fit).unwrap();
    let windows = 40 - 3 + 1;
    assert_eq!(rd.xor_count - r0.xor_count, windows);
    assert_eq!(rd.maj_count - r0.maj_count, windows + 100);
    assert_eq!(rz.xor_count, r0.xor_count);
    assert_eq!(rz.maj_count - r0.maj_count, 500);
    let de = rz.total_energy - r0.total_energy;
    assert!((de - 500.0 * 0.65e-15).abs() < 1e-24);
}

#[test]
fn reference_workload_arithmetic() {
    let r = encoder_cost(&EncoderCostParams::default(), &SwitchTimeFit::reference()).unwrap();
    let xor = 10_000u64 * (60 - 4 + 1);
    let maj = xor + 10_000 * 2000;
    assert_eq!((r.xor_count, r.maj_count), (xor, maj));
    let energy = xor as f64 * 0.41e-15 + maj as f64 * 0.65e-15;
    assert_eq!(r.total_energy, energy);
    let area_mm2 = (xor + maj) as f64 * 0.007 * 1e-6;
    assert!((r.total_area * 1e6 - area_mm2).abs() < 1e-12);
}

#[test]
fn thresholds_are_geometric_means() {
    let xor = (29.1e-9f64 * 0.23e-6).sqrt();
    let maj = (15.8e-9f64 * 85.9e-9).sqrt();
    assert!((gates::decision_threshold(GateKind::Xor2) - xor).abs() < 1e-15);
    assert!((gates::decision_threshold(GateKind::Majority3) - maj).abs() < 1e-15);
}

#[test]
fn tables_encode_the_boolean_functions() {
    for r in XOR_TABLE {
        assert_eq!(r.output, r.inputs[0] != r.inputs[1]);
    }
    for r in MAJORITY_TABLE {
        let ones = r.inputs.iter().filter(|&&b| b).count();
        assert_eq!(r.output, ones >= 2);
    }
}

#[test]
fn subthreshold_scaling_is_one_decade_per_slope() {
    let high = gates::majority_gate(false, false, false, 0.0).current;
    let shifted = gates::majority_gate(false, false, false, -0.080).current;
    assert!((shifted / high - 10.0).abs() < 1e-9);
    let low = gates::xor_gate(true, false, 0.0).current;
    let shifted = gates::xor_gate(true, false, 0.25).current;
    assert!((shifted / low - 0.5).abs() < 1e-12);
}
