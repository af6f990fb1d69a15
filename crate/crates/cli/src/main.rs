use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qtrans_cli::bench::load_suite;
use qtrans_cli::{compile_task, parse_strategy, run_bench, write_report, CliError, CompileTask};
use qtrans_core::resource::{load_or_empty, register_chip, MiningConfig};
use qtrans_core::selector::Preference;
use qtrans_core::transpiler::{PassFlow, ReportFormat};

#[derive(Parser)]
#[command(name = "qtrans", version, about = "Resource-aware quantum circuit compiler")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Register or refresh a chip and rebuild its virtual devices.
    UpdateChip {
        #[arg(long)]
        name: String,
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        db: PathBuf,
    },
    /// Compile an OpenQASM 2.0 program for a registered chip.
    Compile {
        #[arg(long)]
        qasm: PathBuf,
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        qpu: Option<String>,
        /// Comma-separated physical qubits to run on.
        #[arg(long, value_delimiter = ',')]
        qubits: Option<Vec<usize>>,
        #[arg(long, default_value_t = 2)]
        level: u8,
        #[arg(long)]
        passflow: Option<PathBuf>,
        #[arg(long, default_value = "fidelity")]
        prefer: Preference,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "text")]
        report: ReportFormat,
        /// Only check the program against the chip constraints.
        #[arg(long)]
        no_transpile: bool,
    },
    /// Compile a directory of circuits under several strategies.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        chip: PathBuf,
        #[arg(long, value_delimiter = ',')]
        strategies: Vec<String>,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::User(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::UpdateChip { name, file, db } => {
            let text = read(&file)?;
            let rec = register_chip(&db, &name, &text, &MiningConfig::default()).map_err(|e| match e {
                qtrans_core::resource::DbError::Chip(_) | qtrans_core::resource::DbError::Mining(_) => CliError::User(e.to_string()),
                _ => CliError::Internal(e.to_string()),
            })?;
            println!("chip {name}: {} active qubits", rec.qpu.active_qubits().len());
            for (n, list) in &rec.vqpus.library {
                println!("  size {n:>3}: {} vqpus", list.len());
            }
        }
        Command::Compile { qasm, db, qpu, qubits, level, passflow, prefer, seed, report, no_transpile } => {
            let database = load_or_empty(&db).map_err(|e| CliError::User(e.to_string()))?;
            let mut task = CompileTask::new(&read(&qasm)?);
            task.transpile = !no_transpile;
            task.qpu_name = qpu;
            task.qubits_list = qubits;
            task.optimization_level = level;
            task.vqpu_preferred = prefer;
            task.seed = seed;
            if let Some(p) = passflow {
                task.passflow = Some(PassFlow::from_json(&read(&p)?).map_err(|e| CliError::User(e.to_string()))?);
            }
            let result = compile_task(&database, &task)?;
            match report {
                ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&result).expect("result serializes")),
                ReportFormat::Text => {
                    let info = &result.compiled_info;
                    print!("{}", result.physical_qasm);
                    println!("// chip {} qubits {:?}", info.chip, info.vqpu_qubits);
                    print!("{}", info.report.render(ReportFormat::Text));
                    println!("qubits to clbits: {:?}", result.qubits_to_cbits);
                    let m = &info.metrics;
                    println!("depth {} gates {} two-qubit {}", m.depth, m.gate_count, m.two_qubit_gates);
                    if let Some(c) = m.circuit_cost {
                        println!("circuit cost {c:.6}");
                    }
                }
            }
        }
        Command::Bench { suite, chip, strategies, seeds, out } => {
            let circuits = load_suite(&suite)?;
            let chip_json = read(&chip)?;
            let name = chip.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "chip".into());
            let strategies = strategies.iter().map(|s| parse_strategy(s)).collect::<Result<Vec<_>, _>>().map_err(CliError::User)?;
            let rows = run_bench(&circuits, &name, &chip_json, &strategies, seeds)?;
            write_report(&rows, &out).map_err(|e| CliError::User(format!("{}: {e}", out.display())))?;
            println!("{} rows written to {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
