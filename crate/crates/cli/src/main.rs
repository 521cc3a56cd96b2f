use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use noisyrev::circuit::{boolean, text, BitString, ReversibleCircuit};
use noisyrev::classical::{exact_report, simulate_monte_carlo, NoiseModel};
use noisyrev::compile::{encode_fault_tolerant, threshold_holds, to_reversible, Accounting, EncodingParams};
use noisyrev::info::{decay_curve_capped, entropy_of, DecayCurve};
use noisyrev::qnoise::{
    quantum_decay_curve, random_unitary_circuit, result_outcome_information, verify_gadget,
    ReplacementChannelParams,
};
use noisyrev::quantum::{quantum_information, DensityMatrix};
use noisyrev::suite::run_suite;

mod config;

use config::{CompileOpts, DecayOpts, FileConfig, Format, GadgetOpts, Method, SimulateOpts, VerifyOpts};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] noisyrev::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(noisyrev::Error::ResourceLimit { .. }) => 3,
            CliError::Core(noisyrev::Error::InvalidArgument(_)) | CliError::Config(_) => 2,
            CliError::Core(_) | CliError::Io { .. } | CliError::Input(_) => 1,
            CliError::Verification(_) => 4,
        }
    }
}

/// Noisy reversible and quantum circuit experiments.
///
/// Exit status: 0 on success, 1 for I/O and parse errors, 2 for usage and
/// config errors, 3 when a size cap is exceeded, 4 when a verification fails.
#[derive(Parser, Debug)]
#[command(name = "noisyrev", version)]
struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files (created if missing).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a boolean circuit to a reversible one and encode it.
    Compile(CompileOpts),
    /// Simulate a reversible circuit under bit-flip noise.
    Simulate(SimulateOpts),
    /// Record information decay under noise, classical or quantum.
    Decay(DecayOpts),
    /// Run the randomized lemma verification suites.
    Verify(VerifyOpts),
    /// Simulate the majority-tree initialization gadget.
    Gadget(GadgetOpts),
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    config: &'a C,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<&'a R>,
}

struct Output {
    dir: PathBuf,
    format: Format,
    seed: u64,
}

impl Output {
    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Writes `<name>.json` with config and result embedded, or `<name>.csv`
    /// plus a `<name>.meta.json` holding the config.
    fn report<C: Serialize, R: Serialize>(
        &self,
        name: &str,
        config: &C,
        result: &R,
        csv: impl FnOnce() -> Result<String, CliError>,
    ) -> Result<PathBuf, CliError> {
        let mut env = Envelope {
            tool: "noisyrev",
            version: VERSION,
            command: name,
            seed: self.seed,
            config,
            result: Some(result),
        };
        match self.format {
            Format::Json => self.write(&format!("{name}.json"), &(to_json(&env) + "\n")),
            Format::Csv => {
                env.result = None;
                self.write(&format!("{name}.meta.json"), &(to_json(&env) + "\n"))?;
                self.write(&format!("{name}.csv"), &csv()?)
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn csv_table<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> Result<String, CliError> {
    let err = |e: csv::Error| CliError::Core(noisyrev::Error::InvalidState(e.to_string()));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row.iter().map(AsRef::as_ref)).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_circuit(path: &Path) -> Result<ReversibleCircuit, CliError> {
    let c = text::parse(&read(path)?).map_err(|e| in_file(path, e))?;
    let violations = c.validate();
    if let Some(v) = violations.first() {
        return Err(CliError::Input(format!("{}: invalid circuit: {v}", path.display())));
    }
    Ok(c)
}

fn in_file(path: &Path, e: noisyrev::Error) -> CliError {
    match e {
        noisyrev::Error::Parse { line, message } => CliError::Core(noisyrev::Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        }),
        e => e.into(),
    }
}

fn input_bits(spec: Option<&str>, width: usize) -> Result<BitString, CliError> {
    match spec {
        None => Ok(BitString::zeros(width)),
        Some(s) => {
            let bits: BitString = s.parse().map_err(CliError::Core)?;
            Ok(bits.padded(width)?)
        }
    }
}

fn cmd_compile(opts: CompileOpts, file: &FileConfig, out: &Output) -> Result<(), CliError> {
    let cfg = opts.resolve(&file.compile)?;
    let bc = boolean::parse(&read(&cfg.input)?).map_err(|e| in_file(&cfg.input, e))?;
    let rc = to_reversible(&bc)?;
    let enc = encode_fault_tolerant(&rc, EncodingParams::new(cfg.d, cfg.k, cfg.p)?)?;
    let acc = Accounting::new(&bc, &rc, &enc);
    let threshold = threshold_holds(cfg.p, cfg.k);
    out.write("reversible.txt", &text::serialize(&rc))?;
    out.write("encoded.txt", &text::serialize(&enc.circuit))?;

    #[derive(Serialize)]
    struct CompileResult {
        accounting: Accounting,
        threshold: noisyrev::compile::ThresholdCheck,
        result_wire: usize,
    }
    let result = CompileResult {
        accounting: acc.clone(),
        threshold,
        result_wire: enc.result_wire(),
    };
    let path = out.report("compile", &cfg, &result, || {
        let rows = [
            ("source_depth", acc.source_depth.to_string()),
            ("source_size", acc.source_size.to_string()),
            ("reversible_width", acc.reversible_width.to_string()),
            ("reversible_depth", acc.reversible_depth.to_string()),
            ("reversible_size", acc.reversible_size.to_string()),
            ("encoded_width", acc.encoded_width.to_string()),
            ("encoded_depth", acc.encoded_depth.to_string()),
            ("encoded_size", acc.encoded_size.to_string()),
            ("result_wire", enc.result_wire().to_string()),
            ("threshold_bound", threshold.bound.to_string()),
            ("threshold_holds", threshold.holds.to_string()),
        ];
        csv_table(&["quantity", "value"], rows.into_iter().map(|(k, v)| vec![k.to_string(), v]))
    })?;
    println!(
        "reversible: width {} depth {} size {}",
        acc.reversible_width, acc.reversible_depth, acc.reversible_size
    );
    println!(
        "encoded (d = {}): width {} depth {} size {}",
        cfg.d, acc.encoded_width, acc.encoded_depth, acc.encoded_size
    );
    println!(
        "threshold at p = {}, k = {}: bound {:.6} {}",
        cfg.p,
        cfg.k,
        threshold.bound,
        if threshold.holds { "holds" } else { "fails" }
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_simulate(opts: SimulateOpts, file: &FileConfig, out: &Output) -> Result<(), CliError> {
    let cfg = opts.resolve(&file.simulate)?;
    let circuit = load_circuit(&cfg.circuit)?;
    let input = input_bits(cfg.input.as_deref(), circuit.width())?;
    let noise = NoiseModel::new(cfg.p)?.with_final_noise(cfg.final_noise);
    let exact = match cfg.method {
        Method::Exact => true,
        Method::Mc => false,
        Method::Auto => circuit.width() <= cfg.exact_cap,
    };
    let report = if exact {
        if circuit.width() > cfg.exact_cap {
            return Err(noisyrev::Error::ResourceLimit {
                what: "circuit width",
                requested: circuit.width(),
                cap: cfg.exact_cap,
            }
            .into());
        }
        exact_report(&circuit, &noise, &input)?
    } else {
        simulate_monte_carlo(&circuit, &noise, &input, cfg.trials, out.seed)?
    };
    let path = out.report("simulate", &cfg, &report, || Ok(report.to_csv()))?;
    println!(
        "{} simulation: Pr[result = 1] = {:.6} ± {:.2e}, error rate {:.6}",
        if exact { "exact" } else { "Monte Carlo" },
        report.result_distribution[1],
        report.result_half_width,
        report.result_error
    );
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct DecayResult<'a> {
    kind: &'static str,
    holds: bool,
    worst_margin: f64,
    max_gate_delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_information: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_outcome_information: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_register_outcome_information: Option<f64>,
    curve: &'a DecayCurve,
}

fn cmd_decay(opts: DecayOpts, file: &FileConfig, out: &Output) -> Result<(), CliError> {
    let cfg = opts.resolve(&file.decay);
    let (curve, tol, finals) = if cfg.quantum {
        let params = ReplacementChannelParams::new(cfg.p)?;
        let circuit = random_unitary_circuit(cfg.qubits, cfg.steps, out.seed)?;
        let init = DensityMatrix::from_basis_state(&BitString::zeros(cfg.qubits));
        let (curve, last) = quantum_decay_curve(&circuit, &params, cfg.noise_order.into(), &init, cfg.steps)?;
        let info = quantum_information(&last)?;
        let outcome = result_outcome_information(&last, circuit.result_qubit())?;
        let register = cfg.qubits as f64 - entropy_of(&last.diagonal_probs());
        (curve, noisyrev::QUANTUM_TOL, Some((info, outcome, register)))
    } else {
        let circuit = match &cfg.circuit {
            Some(path) => load_circuit(path)?,
            None => ReversibleCircuit::identity(cfg.width, cfg.steps),
        };
        let input = input_bits(cfg.input.as_deref(), circuit.width())?;
        let noise = NoiseModel::new(cfg.p)?;
        let curve = decay_curve_capped(&circuit, &noise, &input, cfg.steps, noisyrev::classical::DEFAULT_EXACT_CAP)?;
        (curve, noisyrev::CLASSICAL_TOL, None)
    };
    let ent3_holds = finals.is_none_or(|(i, o, r)| o <= i + tol && r <= i + tol);
    let result = DecayResult {
        kind: if cfg.quantum { "quantum" } else { "classical" },
        holds: curve.holds(tol) && ent3_holds,
        worst_margin: curve.worst_margin(),
        max_gate_delta: curve.max_gate_delta(),
        final_information: finals.map(|f| f.0),
        final_outcome_information: finals.map(|f| f.1),
        final_register_outcome_information: finals.map(|f| f.2),
        curve: &curve,
    };
    let path = out.report("decay", &cfg, &result, || Ok(curve.to_csv()))?;
    println!(
        "{} decay over {} steps: worst I - bound = {:.3e}",
        result.kind, cfg.steps, result.worst_margin
    );
    println!("wrote {}", path.display());
    if !result.holds {
        return Err(CliError::Verification("information exceeded its decay bound".into()));
    }
    Ok(())
}

fn cmd_verify(opts: VerifyOpts, file: &FileConfig, out: &Output) -> Result<(), CliError> {
    let cfg = opts.resolve(&file.verify, out.seed);
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let report = run_suite(&cfg)?;
    let path = out.report("verify", &cfg, &report, || {
        csv_table(
            &["lemma", "instance", "seed", "params", "relation", "lhs", "rhs", "margin", "pass"],
            report.records.iter().map(|r| {
                vec![
                    r.lemma.to_string(),
                    r.instance.to_string(),
                    r.seed.to_string(),
                    r.params.clone(),
                    serde_json::to_value(r.relation).expect("relation").as_str().unwrap_or("").to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.margin.to_string(),
                    r.pass.to_string(),
                ]
            }),
        )
    })?;
    for s in &report.summaries {
        println!(
            "{:<8} {:>5}/{:<5} worst margin {}",
            s.lemma.name(),
            s.passed,
            s.instances,
            s.worst_margin.map_or("-".to_string(), |m| format!("{m:.3e}"))
        );
    }
    println!("wrote {}", path.display());
    if !report.pass {
        let n = report.failures().count();
        return Err(CliError::Verification(format!("{n} instance(s) failed")));
    }
    Ok(())
}

fn cmd_gadget(opts: GadgetOpts, file: &FileConfig, out: &Output) -> Result<(), CliError> {
    let cfg = opts.resolve(&file.gadget);
    let r = verify_gadget(cfg.t, cfg.p)?;
    let path = out.report("gadget", &cfg, &r, || {
        let rows = [
            ("t", r.t.to_string()),
            ("p", r.p.to_string()),
            ("qubits", r.qubits.to_string()),
            ("prob_zero", r.prob_zero.to_string()),
            ("threshold_bound", r.threshold_bound.to_string()),
            ("threshold_holds", r.threshold_holds.to_string()),
            ("meets_claim", r.meets_claim.to_string()),
        ];
        csv_table(&["quantity", "value"], rows.into_iter().map(|(k, v)| vec![k.to_string(), v]))
    })?;
    println!(
        "t = {}, p = {}: Pr[result = 0] = {:.6} (claim {:.6}); threshold {:.6} {}",
        r.t,
        r.p,
        r.prob_zero,
        1.0 - r.p,
        r.threshold_bound,
        if r.threshold_holds { "holds" } else { "fails" }
    );
    println!("wrote {}", path.display());
    if r.threshold_holds && !r.meets_claim {
        return Err(CliError::Verification("gadget below 1 - p".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out = Output {
        dir: cli.out_dir.or_else(|| file.out_dir.clone()).unwrap_or_else(|| PathBuf::from(".")),
        format: cli.format.or(file.format).unwrap_or_default(),
        seed: cli.seed.or(file.seed).unwrap_or(0),
    };
    match cli.command {
        Command::Compile(o) => cmd_compile(o, &file, &out),
        Command::Simulate(o) => cmd_simulate(o, &file, &out),
        Command::Decay(o) => cmd_decay(o, &file, &out),
        Command::Verify(o) => cmd_verify(o, &file, &out),
        Command::Gadget(o) => cmd_gadget(o, &file, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
