//! `greenfix` command-line tool.
//!
//! Exit status: 0 ok, 1 output failure, 2 unreadable or unparsable input
//! (including bad arguments), 3 invalid scenario, 4 oracle disagreement.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use greenfix::classify_equilibrium;
use greenfix::model::{validate_scenario, Scenario, ScenarioSpec};
use greenfix::report::{
    render_statics, run_statics, run_sweep, verify_claim, Claim, CompareReport, Format, SolveReport, SweepOutput,
    SweepParam, SweepSpec, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "greenfix",
    version,
    about = "Equilibria and policy comparison for green collusion exemptions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario's belief rho.
    #[arg(long)]
    rho: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the equilibrium and print every threshold.
    Solve(Common),
    /// Compare commitment to always investigate with discretion.
    Compare(Common),
    /// Re-solve the scenario over a grid of one parameter (CSV).
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Column groups: regime, eta, thresholds, welfares, policy_preference.
        #[arg(long, value_delimiter = ',')]
        outputs: Vec<SweepOutput>,
    },
    /// Finite-difference check of every comparative-statics sign.
    Statics {
        #[command(flatten)]
        common: Common,
        /// Violation probability at which rho*(eta) is differentiated.
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
    },
    /// Check the equilibrium against grid search and Monte-Carlo sampling.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        grid_n: usize,
        /// Deviation tolerance; derived from the grid spacing by default.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, env = "GREENFIX_SEED", default_value_t = 42)]
        seed: u64,
        /// Verify this claimed equilibrium instead of the computed one.
        #[arg(long)]
        claim: Option<PathBuf>,
    },
}

enum Failure {
    Output(String),
    Parse(String),
    Invalid(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Output(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Invalid(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Output(m) | Failure::Parse(m) | Failure::Invalid(m) | Failure::Mismatch(m) => m,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("cannot parse {}: {e}", path.display())))
}

fn load(common: &Common) -> Result<Scenario, Failure> {
    let mut spec: ScenarioSpec = read_json(&common.scenario)?;
    if let Some(rho) = common.rho {
        spec.rho = rho;
    }
    validate_scenario(spec)
        .map_err(|errs| Failure::Invalid(format!("invalid scenario {}: {errs}", common.scenario.display())))
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(common) => {
            let s = load(&common)?;
            emit(&common, &SolveReport::new(&s).render(common.format))
        }
        Command::Compare(common) => {
            let s = load(&common)?;
            let report = CompareReport::new(&s);
            emit(&common, &report.render(common.format))?;
            eprintln!("{}", report.verdict());
            Ok(())
        }
        Command::Sweep {
            common,
            param,
            from,
            to,
            steps,
            outputs,
        } => {
            let s = load(&common)?;
            let spec = SweepSpec::new(param, from, to, steps)
                .map_err(|e| Failure::Parse(e.to_string()))?
                .with_outputs(outputs);
            emit(&common, &run_sweep(&s, &spec))
        }
        Command::Statics { common, eta } => {
            let s = load(&common)?;
            let (rows, skipped) = run_statics(&s, eta);
            for (pair, err) in skipped {
                eprintln!("skipped {pair}: {err}");
            }
            emit(&common, &render_statics(&rows, common.format))
        }
        Command::Verify {
            common,
            grid_n,
            epsilon,
            samples,
            seed,
            claim,
        } => {
            let s = load(&common)?;
            let computed = classify_equilibrium(&s);
            let claimed = match &claim {
                Some(path) => read_json::<Claim>(path)?.apply(&computed),
                None => computed,
            };
            let opts = VerifyOptions {
                grid_n,
                epsilon,
                n_samples: samples,
                seed,
            };
            let report = verify_claim(&s, &claimed, &opts).map_err(|e| Failure::Parse(e.to_string()))?;
            emit(&common, &report.render())?;
            if report.passes {
                eprintln!("verify: ok ({})", report.claimed_regime);
                Ok(())
            } else {
                Err(Failure::Mismatch(format!(
                    "verify: oracle disagrees with closed form\n{}",
                    report.diff()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
