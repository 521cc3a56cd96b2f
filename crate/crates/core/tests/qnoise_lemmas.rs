use noisyrev::circuit::BitString;
use noisyrev::qnoise::{
    quantum_decay_curve, result_outcome_information, verify_gadget, NoiseOrder, QuantumCircuit,
    ReplacementChannelParams,
};
use noisyrev::quantum::random::random_unitary;
use noisyrev::quantum::{quantum_information, DensityMatrix, MeasurementGate, QuantumGate, UnitaryGate};
use noisyrev::suite::{run_suite, Lemma, SuiteConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn decay_average_and_gate_lemmas() {
    let cfg = SuiteConfig {
        lemmas: vec![Lemma::Qdec, Lemma::Average, Lemma::Qgate],
        seed: 31,
        ..SuiteConfig::default()
    };
    let report = run_suite(&cfg).unwrap();
    let bad: Vec<_> = report.failures().collect();
    assert!(bad.is_empty(), "{bad:#?}");
    assert_eq!(report.summary(Lemma::Qdec).unwrap().instances, 500);
    assert_eq!(report.summary(Lemma::Average).unwrap().instances, 500);
}

#[test]
fn gadget_meets_its_claim_below_threshold() {
    for t in [1, 2] {
        for p in [0.01, 0.05] {
            let r = verify_gadget(t, p).unwrap();
            assert!(r.threshold_holds);
            assert!(r.meets_claim, "t={t} p={p}: {}", r.prob_zero);
        }
    }
}

/// Random circuits of up to 5 qubits mixing unitaries and measurements: each
/// noise step shrinks information by at least `1-p`.
#[test]
fn every_noise_step_contracts() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let n = rng.random_range(1..=5);
        let mut c = QuantumCircuit::new(n).unwrap();
        for _ in 0..4 {
            let k = rng.random_range(1..=n.min(2));
            let targets: Vec<usize> = (0..k).collect();
            let g: QuantumGate = if rng.random_bool(0.7) {
                UnitaryGate::new(random_unitary(1 << k, &mut rng), targets).unwrap().into()
            } else {
                MeasurementGate::computational(targets).unwrap().into()
            };
            c.push_layer(vec![g]).unwrap();
        }
        let p = rng.random_range(0.0..1.0);
        let params = ReplacementChannelParams::new(p).unwrap();
        let init = DensityMatrix::from_basis_state(&BitString::zeros(n));
        let (curve, last) = quantum_decay_curve(&c, &params, NoiseOrder::GatesFirst, &init, 4).unwrap();
        assert!(curve.holds(1e-8));
        for w in curve.records.windows(2) {
            assert!(w[1].information <= (1.0 - p) * w[0].information + 1e-8);
        }
        assert!(result_outcome_information(&last, 0).unwrap() <= quantum_information(&last).unwrap() + 1e-8);
    }
}
