//! Randomized batch verification of the classical and quantum information
//! inequalities, with a JSON report of every instance.
//!
//! Each instance draws its inputs from its own seed, derived from the suite
//! seed, the lemma and the instance index, so single instances can be
//! replayed and results do not depend on thread scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::seed::derive_seed;
use crate::classical::BitDistribution;
use crate::info::{binary_information_k, k_series, k_series_terms, verify_decay_lemma};
use crate::qnoise::{verify_average_lemma, verify_qdec, verify_qgate_monotonicity, ReplacementChannelParams};
use crate::quantum::random::{random_density_matrix_with, random_hermitian, random_product_state, random_unitary};
use crate::quantum::{
    cross_entropy_with_reduction, outcome_distribution, relative_entropy, von_neumann_entropy, DensityMatrix,
    MeasurementGate, QuantumGate, UnitaryGate,
};
use crate::{Error, Result, CLASSICAL_TOL, QUANTUM_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    /// Bit-flip channel contraction `I(Y) ≤ (1-2p)² I(X)`.
    Exp,
    /// Closed form of `K(δ)` against its power series.
    KSeries,
    /// Measurement entropy `H(f) ≥ S(ρ)`.
    Ent3,
    /// Concavity of von Neumann entropy.
    Ent4,
    /// Additivity on tensor products.
    Ent5,
    /// Non-negativity of relative entropy.
    Ent7,
    /// `-tr(ρ log(ρ_A ⊗ I)) = S(ρ_A)`.
    Ent8,
    /// Gates never increase information.
    Qgate,
    /// Average information of `k`-qubit reductions.
    Average,
    /// Replacement channel contraction `I(σ) ≤ (1-p) I(ρ)`.
    Qdec,
}

impl Lemma {
    pub const ALL: [Lemma; 10] = [
        Lemma::Exp,
        Lemma::KSeries,
        Lemma::Ent3,
        Lemma::Ent4,
        Lemma::Ent5,
        Lemma::Ent7,
        Lemma::Ent8,
        Lemma::Qgate,
        Lemma::Average,
        Lemma::Qdec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Exp => "exp",
            Lemma::KSeries => "k_series",
            Lemma::Ent3 => "ent3",
            Lemma::Ent4 => "ent4",
            Lemma::Ent5 => "ent5",
            Lemma::Ent7 => "ent7",
            Lemma::Ent8 => "ent8",
            Lemma::Qgate => "qgate",
            Lemma::Average => "average",
            Lemma::Qdec => "qdec",
        }
    }

    /// Instance count used when none is configured.
    pub fn default_instances(self) -> usize {
        match self {
            Lemma::Exp => 1000,
            Lemma::KSeries => 100,
            Lemma::Ent7 | Lemma::Average | Lemma::Qdec => 500,
            _ => 200,
        }
    }

    fn is_quantum(self) -> bool {
        !matches!(self, Lemma::Exp | Lemma::KSeries)
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown lemma '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Lemmas to run; empty means all.
    pub lemmas: Vec<Lemma>,
    /// Instance count for every lemma, overriding the per-lemma defaults.
    pub instances: Option<usize>,
    pub classical_tol: f64,
    pub quantum_tol: f64,
    /// Tolerance for the `K(δ)` series comparison.
    pub series_tol: f64,
    /// Largest qubit count of random quantum instances.
    pub max_qubits: usize,
    /// Largest bit count of random classical distributions.
    pub max_bits: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            lemmas: Vec::new(),
            instances: None,
            classical_tol: CLASSICAL_TOL,
            quantum_tol: QUANTUM_TOL,
            series_tol: 1e-10,
            max_qubits: 5,
            max_bits: 8,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [
            ("classical_tol", self.classical_tol),
            ("quantum_tol", self.quantum_tol),
            ("series_tol", self.series_tol),
        ] {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(Error::invalid(format!("{name} must be a finite non-negative number, got {tol}")));
            }
        }
        if !(2..=crate::quantum::DEFAULT_QUBIT_CAP).contains(&self.max_qubits) {
            return Err(Error::invalid(format!(
                "max_qubits must be between 2 and {}",
                crate::quantum::DEFAULT_QUBIT_CAP
            )));
        }
        if !(1..=crate::classical::DEFAULT_EXACT_CAP).contains(&self.max_bits) {
            return Err(Error::invalid(format!(
                "max_bits must be between 1 and {}",
                crate::classical::DEFAULT_EXACT_CAP
            )));
        }
        Ok(())
    }

    pub fn selected(&self) -> Vec<Lemma> {
        if self.lemmas.is_empty() {
            Lemma::ALL.to_vec()
        } else {
            let mut l = self.lemmas.clone();
            l.sort();
            l.dedup();
            l
        }
    }

    pub fn instances_for(&self, lemma: Lemma) -> usize {
        self.instances.unwrap_or_else(|| lemma.default_instances())
    }

    fn tol(&self, lemma: Lemma) -> f64 {
        match lemma {
            Lemma::KSeries => self.series_tol,
            l if l.is_quantum() => self.quantum_tol,
            _ => self.classical_tol,
        }
    }
}

/// How `lhs` is compared with `rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs + tol`; margin `rhs - lhs`.
    Le,
    /// `|lhs - rhs| ≤ tol`; margin `-|lhs - rhs|`.
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub lemma: Lemma,
    pub instance: usize,
    pub seed: u64,
    /// Free-form description of the instance, e.g. `n=3 rank=2`.
    pub params: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub lemma: Lemma,
    pub instances: usize,
    pub passed: usize,
    /// Smallest margin seen; `null` for an empty run.
    pub worst_margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub config: SuiteConfig,
    pub summaries: Vec<LemmaSummary>,
    pub records: Vec<LemmaRecord>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn summary(&self, lemma: Lemma) -> Option<&LemmaSummary> {
        self.summaries.iter().find(|s| s.lemma == lemma)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Outcome {
    params: String,
    relation: Relation,
    lhs: f64,
    rhs: f64,
}

impl Outcome {
    fn le(params: String, lhs: f64, rhs: f64) -> Self {
        Outcome {
            params,
            relation: Relation::Le,
            lhs,
            rhs,
        }
    }

    fn eq(params: String, lhs: f64, rhs: f64) -> Self {
        Outcome {
            params,
            relation: Relation::Eq,
            lhs,
            rhs,
        }
    }
}

/// Seed of instance `i` of `lemma`.
pub fn instance_seed(seed: u64, lemma: Lemma, instance: usize) -> u64 {
    derive_seed(derive_seed(seed, lemma as u64 + 1), instance as u64)
}

/// Runs every selected lemma. Instances run in parallel; records come back
/// ordered by lemma, then instance.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for lemma in config.selected() {
        let count = config.instances_for(lemma);
        let tol = config.tol(lemma);
        let batch = (0..count)
            .into_par_iter()
            .map(|i| {
                let seed = instance_seed(config.seed, lemma, i);
                let out = run_instance(lemma, i, count, seed, config)?;
                let (margin, pass) = match out.relation {
                    Relation::Le => (out.rhs - out.lhs, out.lhs <= out.rhs + tol),
                    Relation::Eq => {
                        let gap = (out.lhs - out.rhs).abs();
                        (-gap, gap <= tol)
                    }
                };
                Ok(LemmaRecord {
                    lemma,
                    instance: i,
                    seed,
                    params: out.params,
                    relation: out.relation,
                    lhs: out.lhs,
                    rhs: out.rhs,
                    margin,
                    pass,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        summaries.push(LemmaSummary {
            lemma,
            instances: batch.len(),
            passed: batch.iter().filter(|r| r.pass).count(),
            worst_margin: batch.iter().map(|r| r.margin).reduce(f64::min),
        });
        records.extend(batch);
    }
    Ok(SuiteReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        pass: records.iter().all(|r| r.pass),
        summaries,
        records,
    })
}

/// Pass counts per lemma name, for compact display.
pub fn pass_rates(report: &SuiteReport) -> BTreeMap<String, (usize, usize)> {
    report
        .summaries
        .iter()
        .map(|s| (s.lemma.name().to_string(), (s.passed, s.instances)))
        .collect()
}

/// A distribution on `n` bits: mostly uniform draws from the simplex, with
/// point masses and two-point supports mixed in.
pub fn random_distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitDistribution {
    let dim = 1usize << n;
    let mut probs = vec![0.0; dim];
    match rng.random_range(0..10) {
        0 => probs[rng.random_range(0..dim)] = 1.0,
        1 => {
            let a = rng.random_range(0..dim);
            let b = rng.random_range(0..dim);
            let w: f64 = rng.random();
            probs[a] += w;
            probs[b] += 1.0 - w;
        }
        _ => {
            for q in probs.iter_mut() {
                *q = rng.sample(Exp1);
            }
            let total: f64 = probs.iter().sum();
            for q in probs.iter_mut() {
                *q /= total;
            }
        }
    }
    BitDistribution::new(n, probs).expect("normalized draw")
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Result<(DensityMatrix, usize)> {
    let rank = rng.random_range(1..=1usize << n);
    Ok((random_density_matrix_with(n, rank, rng)?, rank))
}

fn full_rank_state(n: usize, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    random_density_matrix_with(n, 1 << n, rng)
}

fn random_targets(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

fn run_instance(lemma: Lemma, i: usize, count: usize, seed: u64, cfg: &SuiteConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    let qmax = cfg.max_qubits;
    Ok(match lemma {
        Lemma::Exp => {
            let n = rng.random_range(1..=cfg.max_bits);
            let dist = random_distribution(n, rng);
            let p = loop {
                let p = rng.random_range(0.0..0.5);
                if p > 0.0 {
                    break p;
                }
            };
            let c = verify_decay_lemma(&dist, p)?;
            Outcome::le(format!("n={n} p={p}"), c.after, c.bound)
        }
        Lemma::KSeries => {
            let delta = if count > 1 { 0.99 * i as f64 / (count - 1) as f64 } else { 0.0 };
            let terms = k_series_terms(delta, cfg.series_tol * 1e-3);
            Outcome::eq(
                format!("delta={delta} terms={terms}"),
                k_series(delta, terms)?,
                binary_information_k(delta)?,
            )
        }
        Lemma::Ent3 => {
            // A non-degenerate observable on the whole register.
            let n = rng.random_range(1..=qmax);
            let (rho, rank) = random_state(n, rng)?;
            let gate = MeasurementGate::new(random_hermitian(1 << n, rng), (0..n).collect())?;
            let probs: Vec<f64> = outcome_distribution(&rho, &gate)?.iter().map(|o| o.probability).collect();
            Outcome::le(
                format!("n={n} rank={rank}"),
                von_neumann_entropy(&rho)?,
                crate::info::entropy_of(&probs),
            )
        }
        Lemma::Ent4 => {
            let n = rng.random_range(1..=qmax);
            let m = rng.random_range(2..=5);
            let states = (0..m).map(|_| random_state(n, rng).map(|s| s.0)).collect::<Result<Vec<_>>>()?;
            let raw: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let mix = DensityMatrix::mixture(&weights, &states)?;
            let mean = weights
                .iter()
                .zip(&states)
                .map(|(w, s)| von_neumann_entropy(s).map(|e| w * e))
                .sum::<Result<f64>>()?;
            Outcome::le(format!("n={n} m={m}"), mean, von_neumann_entropy(&mix)?)
        }
        Lemma::Ent5 => {
            let n1 = rng.random_range(1..qmax);
            let n2 = rng.random_range(1..=qmax - n1);
            let (a, _) = random_state(n1, rng)?;
            let (b, _) = random_state(n2, rng)?;
            Outcome::eq(
                format!("n1={n1} n2={n2}"),
                von_neumann_entropy(&a.tensor(&b))?,
                von_neumann_entropy(&a)? + von_neumann_entropy(&b)?,
            )
        }
        Lemma::Ent7 => {
            let n = rng.random_range(1..=qmax);
            let a = full_rank_state(n, rng)?;
            let b = full_rank_state(n, rng)?;
            Outcome::le(format!("n={n}"), 0.0, relative_entropy(&a, &b)?)
        }
        Lemma::Ent8 => {
            let n = rng.random_range(2..=qmax);
            let m = rng.random_range(1..n);
            let rho = full_rank_state(n, rng)?;
            let reduced = rho.partial_trace(&(0..m).collect::<Vec<_>>())?;
            Outcome::eq(
                format!("n={n} m={m}"),
                cross_entropy_with_reduction(&rho, m)?,
                von_neumann_entropy(&reduced)?,
            )
        }
        Lemma::Qgate => {
            let n = rng.random_range(1..=qmax);
            let (rho, rank) = random_state(n, rng)?;
            let k = rng.random_range(1..=n.min(3));
            let targets = random_targets(n, k, rng);
            let (kind, gate): (&str, QuantumGate) = match rng.random_range(0..3) {
                0 => ("unitary", UnitaryGate::new(random_unitary(1 << k, rng), targets)?.into()),
                1 => ("observable", MeasurementGate::new(random_hermitian(1 << k, rng), targets)?.into()),
                _ => ("basis", MeasurementGate::computational(targets)?.into()),
            };
            let c = verify_qgate_monotonicity(&rho, &gate)?;
            let params = format!("n={n} rank={rank} k={k} gate={kind}");
            if c.unitary {
                Outcome::eq(params, c.after, c.before)
            } else {
                Outcome::le(params, c.after, c.before)
            }
        }
        Lemma::Average => {
            // Every fifth instance is a product state, where the average is
            // exact.
            let n = rng.random_range(2..=qmax);
            let product = i.is_multiple_of(5);
            let (rho, desc) = if product {
                (random_product_state(n, rng)?, "product".to_string())
            } else {
                let (rho, rank) = random_state(n, rng)?;
                (rho, format!("rank={rank}"))
            };
            let checks = (1..n).map(|k| verify_average_lemma(&rho, k)).collect::<Result<Vec<_>>>()?;
            let params = |k: usize| format!("n={n} {desc} k={k}");
            if product {
                let worst = checks
                    .iter()
                    .max_by(|a, b| (a.lhs - a.rhs).abs().total_cmp(&(b.lhs - b.rhs).abs()))
                    .expect("n ≥ 2");
                Outcome::eq(params(worst.k), worst.lhs, worst.rhs)
            } else {
                let worst = checks
                    .iter()
                    .max_by(|a, b| (a.lhs - a.rhs).total_cmp(&(b.lhs - b.rhs)))
                    .expect("n ≥ 2");
                Outcome::le(params(worst.k), worst.lhs, worst.rhs)
            }
        }
        Lemma::Qdec => {
            let n = rng.random_range(1..=qmax);
            let (rho, rank) = random_state(n, rng)?;
            let p: f64 = rng.random();
            let c = verify_qdec(&rho, &ReplacementChannelParams::new(p)?)?;
            Outcome::le(format!("n={n} rank={rank} p={p}"), c.after, c.bound)
        }
    })
}
