use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmarginal::analysis::{verify_qmarginal_with, VerifyOptions, NONZERO_TOL};
use qmarginal::marginal::{build_qmarginal, emit_reversible};
use qmarginal::qmci::{
    classical_mc_estimate, convergence_study_with, mlae_estimate, EstimationRecord, OutcomePredicate,
    StudyConfig,
};
use qmarginal::reversible::{compile, stats};
use qmarginal::sampler::{make_builtin, parse_netlist, Builtin, GateNetwork, DEFAULT_ENUMERATION_CAP};
use qmarginal::statevector::{Statevector, DEFAULT_QUBIT_CAP};
use qmarginal::Error;

#[derive(Parser)]
#[command(name = "qmarginal", version, about = "Prepare Q-marginal states from classical sampling circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Netlist file
    net: Option<PathBuf>,
    /// Built-in network instead of a file: identity:M, constant:M,N,C or popcount:M
    #[arg(long, conflicts_with = "net")]
    builtin: Option<Builtin>,
    /// Largest input count accepted for exhaustive enumeration
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    enum_cap: usize,
    /// Largest statevector width
    #[arg(long, default_value_t = DEFAULT_QUBIT_CAP)]
    qubit_cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a network into a reversible X/CNOT/CCNOT circuit
    Compile {
        #[command(flatten)]
        source: Source,
        /// Write the serialized circuit here instead of stdout
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Print resource counts
        #[arg(long)]
        stats: bool,
    },
    /// Simulate the Q-marginal circuit from |0...0>
    Simulate {
        #[command(flatten)]
        source: Source,
        /// Print the output-register distribution (default when no flag is given)
        #[arg(long)]
        marginal: bool,
        /// Print nonzero amplitudes as `index re im`
        #[arg(long)]
        dump_state: bool,
    },
    /// Check the simulated marginal against brute-force enumeration
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// One amplitude-estimation run plus a classical run at the same query count
    Qmci {
        #[command(flatten)]
        source: Source,
        /// set:0,1 | ge:K | le:K
        #[arg(long)]
        pred: OutcomePredicate,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,4,8")]
        schedule: Vec<usize>,
        #[arg(long, default_value_t = 64)]
        shots: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Query-vs-error convergence study of both estimators
    Bench {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        pred: OutcomePredicate,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "64,128,256,512,1024,2048,4096,8192,16384"
        )]
        budgets: Vec<u64>,
        #[arg(long, default_value_t = 50)]
        repeats: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Minimum shots per Grover power when fitting a schedule to a budget
        #[arg(long, default_value_t = StudyConfig::default().min_shots)]
        min_shots: u64,
        /// Write the CSV table here; the JSON summary then goes to stdout
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the JSON summary here
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Source {
    fn load(&self) -> Result<GateNetwork, Failure> {
        match (&self.net, self.builtin) {
            (_, Some(b)) => Ok(make_builtin(b)?),
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                parse_netlist(&text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
            }
            (None, None) => Err(Failure::Usage("give a netlist path or --builtin".into())),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compile {
            source,
            emit,
            stats: show_stats,
        } => {
            let circuit = compile(&source.load()?);
            let text = emit_reversible(&circuit);
            match emit {
                Some(path) => write_file(&path, &text)?,
                None if !show_stats => print!("{text}"),
                None => {}
            }
            if show_stats {
                let s = stats(&circuit);
                println!("width {}", s.width);
                println!("gate_count {}", s.gate_count);
                println!("ancilla_count {}", s.ancilla_count);
                println!("X {}", s.x);
                println!("CNOT {}", s.cnot);
                println!("CCNOT {}", s.ccnot);
            }
        }
        Command::Simulate {
            source,
            marginal,
            dump_state,
        } => {
            let u = compile(&source.load()?);
            let circuit = build_qmarginal(&u);
            let mut state = Statevector::zero_with_cap(circuit.width(), source.qubit_cap)?;
            state.apply_circuit(&circuit)?;
            if dump_state {
                print!("{}", state.dump(NONZERO_TOL));
            }
            if marginal || !dump_state {
                let dist = state.marginal_distribution(u.layout().output_range())?;
                for (outcome, p) in dist.probabilities.iter().enumerate() {
                    println!("{outcome} {p}");
                }
            }
        }
        Command::Verify { source, tol, json } => {
            let options = VerifyOptions {
                tol,
                enumeration_cap: source.enum_cap,
                qubit_cap: source.qubit_cap,
            };
            let report = verify_qmarginal_with(&source.load()?, &options)?;
            if json {
                println!("{}", to_json(&report));
            } else {
                print!("{}", report.render_text());
            }
            if !report.passed {
                return Err(Failure::Verification);
            }
        }
        Command::Qmci {
            source,
            pred,
            schedule,
            shots,
            seed,
        } => {
            let network = source.load()?;
            let circuit = build_qmarginal(&compile(&network));
            if circuit.width() > source.qubit_cap {
                return Err(Error::QubitCap {
                    width: circuit.width(),
                    cap: source.qubit_cap,
                }
                .into());
            }
            let quantum = mlae_estimate(&circuit, &pred, &schedule, shots, seed)?;
            let classical = classical_mc_estimate(&network, &pred, quantum.queries, seed)?;
            println!("{}", EstimationRecord::CSV_HEADER);
            println!("{}", quantum.csv_row());
            println!("{}", classical.csv_row());
        }
        Command::Bench {
            source,
            pred,
            budgets,
            repeats,
            seed,
            min_shots,
            csv,
            json,
        } => {
            let config = StudyConfig {
                min_shots,
                enumeration_cap: source.enum_cap,
                qubit_cap: source.qubit_cap,
                ..StudyConfig::default()
            };
            let study = convergence_study_with(&source.load()?, &pred, &budgets, repeats, seed, &config)?;
            let table = study.to_csv();
            let summary = to_json(&study.summary());
            match &csv {
                Some(path) => write_file(path, &table)?,
                None => print!("{table}"),
            }
            match (&json, &csv) {
                (Some(path), _) => write_file(path, &format!("{summary}\n"))?,
                (None, Some(_)) => println!("{summary}"),
                (None, None) => eprintln!("{summary}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 3 } else { 2 })
        }
    }
}
