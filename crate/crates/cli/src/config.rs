//! Command options, the TOML config file and their merge.
//!
//! Every option struct doubles as a clap argument group and a config file
//! table. Values given on the command line win over the file; anything left
//! unset falls back to the defaults in the `resolve` methods.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use noisyrev::qnoise::NoiseOrder;
use noisyrev::suite::Lemma;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact when the width is within the exact cap, Monte Carlo otherwise.
    #[default]
    Auto,
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    #[default]
    NoiseFirst,
    GatesFirst,
}

impl From<Order> for NoiseOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::NoiseFirst => NoiseOrder::NoiseFirst,
            Order::GatesFirst => NoiseOrder::GatesFirst,
        }
    }
}

fn parse_lemma(s: &str) -> Result<Lemma, String> {
    s.parse().map_err(|e: noisyrev::Error| e.to_string())
}

macro_rules! merge {
    ($cli:expr, $file:expr, [$($f:ident),*]) => {
        $( if $cli.$f.is_none() { $cli.$f = $file.$f.clone(); } )*
    };
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompileOpts {
    /// Boolean circuit file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Replication exponent of the encoding.
    #[arg(long)]
    pub d: Option<usize>,
    /// Fan-in used in the threshold check.
    #[arg(long)]
    pub k: Option<usize>,
    /// Flip probability used in the threshold check.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Compile {
    pub input: PathBuf,
    pub d: usize,
    pub k: usize,
    pub p: f64,
}

impl CompileOpts {
    pub fn resolve(mut self, file: &CompileOpts) -> Result<Compile, CliError> {
        merge!(self, file, [input, d, k, p]);
        Ok(Compile {
            input: self.input.ok_or_else(|| CliError::Config("compile needs --input".into()))?,
            d: self.d.unwrap_or(1),
            k: self.k.unwrap_or(3),
            p: self.p.unwrap_or(0.005),
        })
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateOpts {
    /// Reversible circuit file.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Input bit string; padded with zeros to the circuit width.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Shorthand for `--method exact`.
    #[arg(long, conflicts_with_all = ["method", "mc"])]
    #[serde(skip)]
    pub exact: bool,
    /// Shorthand for `--method mc`.
    #[arg(long, conflicts_with = "method")]
    #[serde(skip)]
    pub mc: bool,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Apply a noise step after the last layer.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub final_noise: Option<bool>,
    /// Largest width simulated exactly.
    #[arg(long)]
    pub exact_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Simulate {
    pub circuit: PathBuf,
    pub input: Option<String>,
    pub p: f64,
    pub method: Method,
    pub trials: u64,
    pub final_noise: bool,
    pub exact_cap: usize,
}

impl SimulateOpts {
    pub fn resolve(mut self, file: &SimulateOpts) -> Result<Simulate, CliError> {
        if self.exact {
            self.method = Some(Method::Exact);
        } else if self.mc {
            self.method = Some(Method::Mc);
        }
        merge!(self, file, [circuit, input, p, method, trials, final_noise, exact_cap]);
        let trials = self.trials.unwrap_or(100_000);
        if trials == 0 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        Ok(Simulate {
            circuit: self.circuit.ok_or_else(|| CliError::Config("simulate needs --circuit".into()))?,
            input: self.input,
            p: self.p.unwrap_or(0.01),
            method: self.method.unwrap_or_default(),
            trials,
            final_noise: self.final_noise.unwrap_or(true),
            exact_cap: self.exact_cap.unwrap_or(noisyrev::classical::DEFAULT_EXACT_CAP),
        })
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayOpts {
    /// Run the quantum experiment instead of the classical one.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub quantum: Option<bool>,
    /// Reversible circuit file; an identity circuit of `--width` wires if
    /// absent.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long)]
    pub width: Option<usize>,
    /// Classical input bit string, zeros by default.
    #[arg(long)]
    pub input: Option<String>,
    /// Qubit count of the random-unitary quantum circuit.
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub noise_order: Option<Order>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decay {
    pub quantum: bool,
    pub circuit: Option<PathBuf>,
    pub width: usize,
    pub input: Option<String>,
    pub qubits: usize,
    pub p: f64,
    pub steps: usize,
    pub noise_order: Order,
}

impl DecayOpts {
    pub fn resolve(mut self, file: &DecayOpts) -> Decay {
        merge!(self, file, [quantum, circuit, width, input, qubits, p, steps, noise_order]);
        let quantum = self.quantum.unwrap_or(false);
        Decay {
            quantum,
            circuit: self.circuit,
            width: self.width.unwrap_or(8),
            input: self.input,
            qubits: self.qubits.unwrap_or(3),
            p: self.p.unwrap_or(0.1),
            steps: self.steps.unwrap_or(if quantum { 8 } else { 10 }),
            noise_order: self.noise_order.unwrap_or_default(),
        }
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyOpts {
    /// Instances per lemma, overriding each lemma's default count.
    #[arg(long)]
    pub instances: Option<usize>,
    /// Lemma to run (repeatable); all when absent.
    #[arg(long = "lemma", value_parser = parse_lemma)]
    pub lemmas: Option<Vec<Lemma>>,
    #[arg(long, allow_negative_numbers = true)]
    pub classical_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub quantum_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub series_tol: Option<f64>,
    #[arg(long)]
    pub max_qubits: Option<usize>,
}

impl VerifyOpts {
    pub fn resolve(mut self, file: &VerifyOpts, seed: u64) -> noisyrev::suite::SuiteConfig {
        merge!(self, file, [instances, lemmas, classical_tol, quantum_tol, series_tol, max_qubits]);
        let d = noisyrev::suite::SuiteConfig::default();
        noisyrev::suite::SuiteConfig {
            seed,
            lemmas: self.lemmas.unwrap_or_default(),
            instances: self.instances,
            classical_tol: self.classical_tol.unwrap_or(d.classical_tol),
            quantum_tol: self.quantum_tol.unwrap_or(d.quantum_tol),
            series_tol: self.series_tol.unwrap_or(d.series_tol),
            max_qubits: self.max_qubits.unwrap_or(d.max_qubits),
            max_bits: d.max_bits,
        }
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GadgetOpts {
    /// Depth of the majority tree; it has `3^t` qubits.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gadget {
    pub t: usize,
    pub p: f64,
}

impl GadgetOpts {
    pub fn resolve(mut self, file: &GadgetOpts) -> Gadget {
        merge!(self, file, [t, p]);
        Gadget {
            t: self.t.unwrap_or(1),
            p: self.p.unwrap_or(0.05),
        }
    }
}

/// The config file: global keys plus one table per command.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub compile: CompileOpts,
    pub simulate: SimulateOpts,
    pub decay: DecayOpts,
    pub verify: VerifyOpts,
    pub gadget: GadgetOpts,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}
