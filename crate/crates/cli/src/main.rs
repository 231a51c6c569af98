use clap::{Parser, Subcommand};

use mol_cli::commands::{
    basis_cap, cmd_casale, cmd_config_export, cmd_depth, cmd_germ, cmd_gv, cmd_selftest,
    DEFAULT_GERM_BUDGET, DEFAULT_GERM_EPS_ORDER, DEFAULT_GERM_Z_ORDER, DEFAULT_GV_MAX,
};
use mol_cli::render::render;
use mol_cli::report::{CliError, RunReport, EXIT_SELFTEST_FAILURE};

/// Monodromy-orbit invariants, parabolic germ calculus and Godbillon-Vey
/// sequences for polynomial deformations dF + eps*omega = 0.
#[derive(Parser)]
#[command(name = "mol", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit depth, nilpotence class and derived length of a configuration.
    Depth {
        /// Built-in name (generic4 | trapezoid | parallelogram) or a JSON file path.
        #[arg(long)]
        config: String,
        /// Truncation class c >= 2.
        #[arg(long, default_value_t = mol_core::lie::DEFAULT_CLASS)]
        class: usize,
        /// Write the JSON report to a path, or `-` for stdout.
        #[arg(long)]
        json: Option<String>,
    },
    /// Godbillon-Vey sequence for eta0 = dF + eps*phi dx.
    Gv {
        /// The deformation function phi(x, F), e.g. "F/(x-1) + F^2/(x+1)".
        #[arg(long)]
        phi: String,
        /// Cap on the number of stored forms.
        #[arg(long, default_value_t = DEFAULT_GV_MAX)]
        max: usize,
        #[arg(long)]
        json: Option<String>,
    },
    /// Abelian / non-solvable dichotomy for a set of parabolic germs.
    Germ {
        /// Germ file (JSON); defaults to the shipped vanishing-cycle
        /// assignment on d1..d5.
        #[arg(long)]
        gens: Option<String>,
        /// Number of nested commutators in a non-solvability witness chain.
        #[arg(long, default_value_t = DEFAULT_GERM_BUDGET)]
        budget: usize,
        /// Truncation order N in z.
        #[arg(long, default_value_t = DEFAULT_GERM_Z_ORDER)]
        order: usize,
        /// Truncation order M in eps.
        #[arg(long = "eps-order", default_value_t = DEFAULT_GERM_EPS_ORDER)]
        eps_order: u32,
        /// Evaluate a word through the Poincaré representation.
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        json: Option<String>,
    },
    /// First-integral identities for the shipped Liouvillian deformations.
    Casale {
        /// liouville1 | liouville2 | both
        #[arg(long, default_value = "both")]
        case: String,
        #[arg(long)]
        json: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Only run criteria whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: Option<String>,
    },
    /// Built-in configuration management.
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Dump an embedded configuration (generic4 | trapezoid | parallelogram).
    Export {
        name: String,
        /// Output path, or `-` for stdout (default).
        #[arg(long, default_value = "-")]
        out: String,
    },
}

fn emit(report: &RunReport, json: Option<&str>) -> Result<(), CliError> {
    match json {
        Some("-") => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report.to_json()).expect("serializable report")
            );
        }
        Some(path) => {
            std::fs::write(
                path,
                serde_json::to_string_pretty(&report.to_json()).expect("serializable report"),
            )
            .map_err(|e| mol_cli::report::input_error(format!("{path}: {e}")))?;
            println!("{}", render(report));
            eprintln!("JSON report written to {path}");
        }
        None => println!("{}", render(report)),
    }
    Ok(())
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Depth {
            config,
            class,
            json,
        } => {
            let report = cmd_depth(&config, class, basis_cap()?)?;
            emit(&report, json.as_deref())?;
            Ok(0)
        }
        Command::Gv { phi, max, json } => {
            let report = cmd_gv(&phi, max)?;
            emit(&report, json.as_deref())?;
            Ok(0)
        }
        Command::Germ {
            gens,
            budget,
            order,
            eps_order,
            word,
            json,
        } => {
            let report = cmd_germ(gens.as_deref(), budget, order, eps_order, word.as_deref())?;
            emit(&report, json.as_deref())?;
            Ok(0)
        }
        Command::Casale { case, json } => {
            let report = cmd_casale(&case)?;
            emit(&report, json.as_deref())?;
            Ok(0)
        }
        Command::Selftest { filter, json } => {
            let (report, all_passed) = cmd_selftest(filter.as_deref());
            emit(&report, json.as_deref())?;
            Ok(if all_passed { 0 } else { EXIT_SELFTEST_FAILURE })
        }
        Command::Config { action } => match action {
            ConfigAction::Export { name, out } => {
                let report = cmd_config_export(&name)?;
                match out.as_str() {
                    "-" => println!("{}", render(&report)),
                    path => {
                        let text = serde_json::to_string_pretty(&report.outputs["config"])
                            .expect("serializable config");
                        std::fs::write(path, text)
                            .map_err(|e| mol_cli::report::input_error(format!("{path}: {e}")))?;
                        eprintln!("configuration written to {path}");
                    }
                }
                Ok(0)
            }
        },
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code);
        }
    }
}
