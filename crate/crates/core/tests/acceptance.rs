//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use noisyrev::circuit::random::random_circuit;
use noisyrev::circuit::{BitString, BooleanCircuit, ReversibleCircuit};
use noisyrev::classical::{
    good_bit_error_rates, propagate_exact, simulate_monte_carlo, worthless_exact, worthless_test, NoiseModel,
};
use noisyrev::compile::{encode_fault_tolerant, threshold_holds, to_reversible, EncodingParams};
use noisyrev::info::{binary_entropy, binary_information_k, decay_curve, entropy_of};
use noisyrev::qnoise::{
    quantum_decay_curve, random_unitary_circuit, result_outcome_information, verify_gadget, verify_qdec, NoiseOrder,
    ReplacementChannelParams,
};
use noisyrev::quantum::{quantum_information, DensityMatrix};
use noisyrev::suite::{run_suite, Lemma, Relation, SuiteConfig, SuiteReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(lemmas: Vec<Lemma>) -> Result<SuiteReport, String> {
    run_suite(&SuiteConfig {
        seed: SEED,
        lemmas,
        ..SuiteConfig::default()
    })
    .map_err(|e| e.to_string())
}

fn all_pass(report: &SuiteReport, min_instances: usize) -> Result<String, String> {
    let mut parts = Vec::new();
    for s in &report.summaries {
        ensure(s.instances >= min_instances, format!("{}: only {} instances", s.lemma, s.instances))?;
        ensure(s.passed == s.instances, format!("{}: {}/{} passed", s.lemma, s.passed, s.instances))?;
        parts.push(format!(
            "{} {}/{} worst margin {:.3e}",
            s.lemma,
            s.passed,
            s.instances,
            s.worst_margin.unwrap_or(0.0)
        ));
    }
    Ok(parts.join("; "))
}

fn c1_exp() -> Check {
    let start = Instant::now();
    let report = suite(vec![Lemma::Exp])?;
    let elapsed = start.elapsed();
    let detail = all_pass(&report, 1000)?;
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!("{detail} in {elapsed:.2?}"))
}

fn c2_k_series() -> Check {
    let report = suite(vec![Lemma::KSeries])?;
    let detail = all_pass(&report, 100)?;
    let k = binary_information_k(0.8).map_err(|e| e.to_string())?;
    let want = 1.0 - binary_entropy(0.9);
    ensure((k - want).abs() <= 1e-10, format!("K(0.8) = {k}, 1 - H(0.9) = {want}"))?;
    Ok(format!("{detail}; K(0.8) = {k:.12}"))
}

fn c3_classical_decay() -> Check {
    let p = 0.1;
    let noise = NoiseModel::new(p).map_err(|e| e.to_string())?;
    let id = ReversibleCircuit::identity(8, 10);
    let curve = decay_curve(&id, &noise, &BitString::zeros(8), 10).map_err(|e| e.to_string())?;
    ensure(curve.records.len() == 11, "expected records for m = 0..=10")?;
    for r in &curve.records {
        let bound = (1.0 - 2.0 * p).powi(2 * r.step as i32) * 8.0;
        ensure(r.information <= bound + 1e-9, format!("m={}: I={} > {bound}", r.step, r.information))?;
    }
    ensure(curve.max_gate_delta() <= 1e-12, "identity layers changed I")?;

    // Non-trivial layers must also leave I unchanged.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rc = random_circuit(8, 10, &mut rng);
    let input = BitString::from_index(rng.random_range(0..256), 8);
    let rand_curve = decay_curve(&rc, &noise, &input, 10).map_err(|e| e.to_string())?;
    ensure(rand_curve.holds(1e-9), "random circuit curve above bound")?;
    ensure(
        rand_curve.max_gate_delta() <= 1e-12,
        format!("gate layer changed I by {:e}", rand_curve.max_gate_delta()),
    )?;
    Ok(format!(
        "I_10 = {:.4e} <= {:.4e}; max |ΔI| across gates {:.1e}",
        curve.records[10].information,
        curve.records[10].bound,
        rand_curve.max_gate_delta()
    ))
}

fn c4_encoding() -> Check {
    let start = Instant::now();
    let (d, k, p) = (2, 3, 0.005);
    let trials = 100_000;
    let th = threshold_holds(p, k);
    ensure(th.holds, format!("threshold bound {} > p", th.bound))?;
    let rc = to_reversible(&BooleanCircuit::and2()).map_err(|e| e.to_string())?;
    let enc = encode_fault_tolerant(&rc, EncodingParams::new(d, k, p).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let noise = NoiseModel::new(p).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for x in 0..4 {
        let logical = BitString::from_index(x, 2).padded(rc.width()).map_err(|e| e.to_string())?;
        let seed = SEED + x as u64;
        let plain = simulate_monte_carlo(&rc, &noise, &logical, trials, seed).map_err(|e| e.to_string())?;
        let encoded_input = enc.encode_input(&logical).map_err(|e| e.to_string())?;
        let coded =
            simulate_monte_carlo(&enc.circuit, &noise, &encoded_input, trials, seed).map_err(|e| e.to_string())?;
        ensure(
            coded.result_error < plain.result_error,
            format!("input {x}: encoded error {} >= unencoded {}", coded.result_error, plain.result_error),
        )?;
        let levels = good_bit_error_rates(&enc, &noise, &logical, trials, seed).map_err(|e| e.to_string())?;
        for l in &levels {
            let limit = p + 4.0 * l.sigma_at(p);
            ensure(l.rate <= limit, format!("input {x} level {}: rate {} > {limit}", l.level, l.rate))?;
        }
        parts.push(format!(
            "x={x:02b}: {:.5} < {:.5}, level rates {:?}",
            coded.result_error,
            plain.result_error,
            levels.iter().map(|l| format!("{:.1e}", l.rate)).collect::<Vec<_>>()
        ));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.2?}", parts.join("; ")))
}

fn c5_mc_vs_exact() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let trials = 100_000u64;
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for i in 0..50 {
        let width = rng.random_range(1..=10);
        let depth = rng.random_range(1..=6);
        let p = [0.01, 0.1, 0.3][i % 3];
        let c = random_circuit(width, depth, &mut rng);
        let input = BitString::from_index(rng.random_range(0..1usize << width), width);
        let noise = NoiseModel::new(p).map_err(|e| e.to_string())?;
        let exact = propagate_exact(&c, &noise, &input).map_err(|e| e.to_string())?.marginals();
        let mc = simulate_monte_carlo(&c, &noise, &input, trials, SEED + i as u64).map_err(|e| e.to_string())?;
        for (w, (&q, &e)) in mc.marginals.iter().zip(&exact).enumerate() {
            let sigma = (e * (1.0 - e) / trials as f64).sqrt();
            let z = (q - e).abs() / sigma;
            worst = worst.max(z);
            compared += 1;
            ensure(z <= 4.0, format!("circuit {i} wire {w}: mc {q} exact {e} ({z:.2}σ)"))?;
        }
    }
    Ok(format!("{compared} marginals over 50 circuits, worst deviation {worst:.2}σ"))
}

fn c6_entropy_lemmas() -> Check {
    let report = suite(vec![Lemma::Ent3, Lemma::Ent4, Lemma::Ent5, Lemma::Ent7, Lemma::Ent8])?;
    ensure(report.config.max_qubits <= 5, "instances above 5 qubits")?;
    all_pass(&report, 200)
}

fn c7_qdec() -> Check {
    let report = suite(vec![Lemma::Qdec])?;
    let detail = all_pass(&report, 500)?;
    let zero = DensityMatrix::from_basis_state(&BitString::zeros(1));
    let c = verify_qdec(&zero, &ReplacementChannelParams::new(0.2).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure((c.after - 0.53101).abs() <= 1e-5 && c.bound == 0.8, "closed form mismatch")?;
    ensure((c.after - (1.0 - binary_entropy(0.9))).abs() <= 1e-6, "closed form mismatch")?;
    Ok(format!("{detail}; |0⟩, p=0.2: I = {:.6} <= {}", c.after, c.bound))
}

fn c8_average() -> Check {
    let report = suite(vec![Lemma::Average])?;
    let detail = all_pass(&report, 500)?;
    let products = report.records.iter().filter(|r| r.relation == Relation::Eq).count();
    ensure(products > 0, "no product-state instances")?;
    Ok(format!("{detail}; {products} product instances at equality"))
}

fn c9_gadget() -> Check {
    let r1 = verify_gadget(1, 0.05).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r2 = verify_gadget(2, 0.05).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for r in [&r1, &r2] {
        ensure(r.threshold_holds, format!("t={}: threshold fails", r.t))?;
        ensure(r.prob_zero >= 0.95, format!("t={}: Pr[0] = {}", r.t, r.prob_zero))?;
    }
    ensure(elapsed < Duration::from_secs(300), format!("t=2 took {elapsed:?}"))?;
    Ok(format!(
        "Pr[0] = {:.6} (t=1), {:.6} (t=2, {} qubits, {elapsed:.2?})",
        r1.prob_zero, r2.prob_zero, r2.qubits
    ))
}

fn c10_quantum_decay() -> Check {
    let n = 3;
    let c = random_unitary_circuit(n, 8, SEED ^ 10).map_err(|e| e.to_string())?;
    let params = ReplacementChannelParams::new(0.1).map_err(|e| e.to_string())?;
    let init = DensityMatrix::from_basis_state(&BitString::zeros(n));
    let (curve, last) =
        quantum_decay_curve(&c, &params, NoiseOrder::NoiseFirst, &init, 8).map_err(|e| e.to_string())?;
    let i0 = curve.records[0].information;
    for r in &curve.records {
        let bound = 0.9f64.powi(r.step as i32) * i0;
        ensure(r.information <= bound + 1e-8, format!("t={}: I={} > {bound}", r.step, r.information))?;
    }
    let info = quantum_information(&last).map_err(|e| e.to_string())?;
    let result_info = result_outcome_information(&last, c.result_qubit()).map_err(|e| e.to_string())?;
    let register_info = n as f64 - entropy_of(&last.diagonal_probs());
    ensure(result_info <= info + 1e-8, format!("result outcome info {result_info} > {info}"))?;
    ensure(register_info <= info + 1e-8, format!("register outcome info {register_info} > {info}"))?;
    Ok(format!(
        "I_8 = {:.4e} <= {:.4e}; outcome info {result_info:.3e} (result), {register_info:.3e} (register) <= {info:.3e}",
        curve.records[8].information, curve.records[8].bound
    ))
}

fn c11_worthless() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let deep = random_circuit(4, 30, &mut rng);
    let noise = NoiseModel::new(0.1).map_err(|e| e.to_string())?;
    let inputs: Vec<BitString> = (0..16).map(|x| BitString::from_index(x, 4)).collect();
    let v = worthless_exact(&deep, &noise, &inputs).map_err(|e| e.to_string())?;
    let worst = v.inputs.iter().map(|i| (i.prob_one - 0.5).abs()).fold(0.0, f64::max);
    ensure(worst <= 0.01, format!("result marginal {worst} from 1/2"))?;
    ensure(v.worthless, "deep circuit not worthless")?;

    let p = 0.005;
    let rc = to_reversible(&BooleanCircuit::and2()).map_err(|e| e.to_string())?;
    let enc = encode_fault_tolerant(&rc, EncodingParams::new(2, 3, p).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let coded_inputs = (0..4)
        .map(|x| {
            let logical = BitString::from_index(x, 2).padded(rc.width())?;
            enc.encode_input(&logical)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let noise = NoiseModel::new(p).map_err(|e| e.to_string())?;
    let ev = worthless_test(&enc.circuit, &noise, &coded_inputs, 100_000, SEED).map_err(|e| e.to_string())?;
    for (x, i) in ev.inputs.iter().enumerate() {
        ensure(!i.worthless_consistent, format!("encoded AND looks worthless on input {x}"))?;
    }
    Ok(format!(
        "depth-30 max |Pr[1] - 1/2| = {worst:.2e}; encoded AND min Pr[majority] = {:.4}",
        ev.inputs.iter().map(|i| i.prob_zero.max(i.prob_one)).fold(1.0, f64::min)
    ))
}

fn main() -> ExitCode {
    let checks: [Criterion; 11] = [
        ("flip-channel information contraction, 1000 distributions", c1_exp),
        ("K(δ) closed form against its series", c2_k_series),
        ("classical decay curve, 8 wires, depth 10, p = 0.1", c3_classical_decay),
        ("3^d encoded AND beats unencoded, good-bit rates <= p + 4σ", c4_encoding),
        ("Monte Carlo against exact marginals, 50 circuits", c5_mc_vs_exact),
        ("quantum entropy lemmas ent3, ent4, ent5, ent7, ent8", c6_entropy_lemmas),
        ("replacement channel contraction, 500 states", c7_qdec),
        ("average information of reductions, 500 states", c8_average),
        ("majority-tree gadget, t = 1 and 2 at p = 0.05", c9_gadget),
        ("quantum decay curve, 3 qubits, p = 0.1, 8 steps", c10_quantum_decay),
        ("worthlessness of deep unencoded circuits", c11_worthless),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
