//! `realsim`: JSON in, JSON report out.
//!
//! Exit status: 0 when every assertion passes, 1 when any fails, 2 on
//! unreadable or invalid input.

mod commands;
mod report;
mod schema;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use realsim::dynamics::Sign;
use report::{digest, Report};
use schema::{read_input, Input};

#[derive(Debug, Parser)]
#[command(
    name = "realsim",
    version,
    about = "Simulate complex quantum systems with real amplitudes"
)]
struct Cli {
    #[command(flatten)]
    options: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Tolerance for complex-versus-real agreement assertions.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for stochastic commands (required by `bell`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `paper` evolves by exp(+iHt), `physics` by exp(−iHt).
    #[arg(long, global = true, value_enum, default_value_t = SignArg::Paper)]
    pub sign: SignArg,
    /// Logical-ancilla qubits, one per party. Without it a single ancilla
    /// qubit is used; `stabilizer` defaults to 2.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Time points of an `evolve` trajectory.
    #[arg(long, global = true, default_value_t = 64)]
    pub steps: usize,
    /// End time of an `evolve` trajectory.
    #[arg(
        long = "t-max",
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub t_max: f64,
    /// Which side(s) of a Bell run to report.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    /// Optimizer restarts for `bell`.
    #[arg(long, global = true, default_value_t = 20)]
    pub restarts: usize,
    /// Print a summary table to standard error.
    #[arg(long, global = true)]
    pub verbose: bool,
}

impl Options {
    fn echo(&self) -> Vec<(&'static str, String)> {
        vec![
            ("tol", format!("{:e}", self.tol)),
            ("seed", format!("{:?}", self.seed)),
            ("sign", self.sign.name().into()),
            ("k", format!("{:?}", self.k)),
            ("steps", self.steps.to_string()),
            ("t_max", format!("{:e}", self.t_max)),
            ("mode", self.mode.name().into()),
            ("restarts", self.restarts.to_string()),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Paper,
    Physics,
}

impl SignArg {
    pub fn name(self) -> &'static str {
        match self {
            SignArg::Paper => "paper",
            SignArg::Physics => "physics",
        }
    }
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Paper => Sign::Paper,
            SignArg::Physics => Sign::Physics,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Complex,
    #[value(name = "real_encoded")]
    RealEncoded,
    Both,
}

impl ModeArg {
    pub fn name(self) -> &'static str {
        match self {
            ModeArg::Complex => "complex",
            ModeArg::RealEncoded => "real_encoded",
            ModeArg::Both => "both",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a state file and check the decode round trip.
    Encode { state: PathBuf },
    /// Evolve a state under a Hamiltonian on both sides.
    Evolve {
        hamiltonian: PathBuf,
        state: PathBuf,
    },
    /// Compare POVM statistics of a state (optionally after a unitary).
    Measure {
        state: PathBuf,
        povm: PathBuf,
        #[arg(long)]
        unitary: Option<PathBuf>,
    },
    /// Optimize a Bell expression: `chsh`, `mermin3` or a scenario file.
    Bell {
        #[arg(long, default_value = "chsh")]
        scenario: String,
    },
    /// Run the self-test counterexample for a one-qubit gate (default diag(1, i)).
    Selftest {
        #[arg(long)]
        gate: Option<PathBuf>,
    },
    /// Check the logical-ancilla stabilizer for `--k` parties.
    Stabilizer,
}

/// Bad input: unreadable, malformed, or violating an invariant.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<realsim::Error> for InputError {
    fn from(e: realsim::Error) -> Self {
        InputError(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let opts = &cli.options;
    if !(opts.tol >= 0.0) {
        return Err(InputError("--tol must be a non-negative number".into()));
    }
    let read = |p: &PathBuf| read_input(p);
    let mut extra: Vec<(&str, String)> = Vec::new();
    let (name, inputs, outcome): (&str, Vec<Input>, _) = match &cli.command {
        Command::Encode { state } => {
            let s = read(state)?;
            let out = commands::encode(&s, opts)?;
            ("encode", vec![s], out)
        }
        Command::Evolve { hamiltonian, state } => {
            let (h, s) = (read(hamiltonian)?, read(state)?);
            let out = commands::evolve(&h, &s, opts)?;
            ("evolve", vec![h, s], out)
        }
        Command::Measure {
            state,
            povm,
            unitary,
        } => {
            let (s, p) = (read(state)?, read(povm)?);
            let u = unitary.as_ref().map(read).transpose()?;
            let out = commands::measure(&s, &p, u.as_ref(), opts)?;
            let mut inputs = vec![s, p];
            inputs.extend(u);
            ("measure", inputs, out)
        }
        Command::Bell { scenario } => {
            let builtin = matches!(scenario.as_str(), "chsh" | "mermin3");
            let file = if builtin {
                None
            } else {
                Some(read(&PathBuf::from(scenario))?)
            };
            let s = commands::load_scenario(scenario, file.as_ref())?;
            if builtin {
                extra.push(("scenario", scenario.clone()));
            }
            let out = commands::bell(&s, opts)?;
            ("bell", file.into_iter().collect(), out)
        }
        Command::Selftest { gate } => {
            let g = gate.as_ref().map(read).transpose()?;
            let out = commands::selftest(g.as_ref(), opts)?;
            ("selftest", g.into_iter().collect(), out)
        }
        Command::Stabilizer => ("stabilizer", vec![], commands::stabilizer(opts)?),
    };
    let mut options = opts.echo();
    options.extend(extra);
    let bytes: Vec<&[u8]> = inputs.iter().map(|i| i.bytes.as_slice()).collect();
    Ok(Report {
        command: name.into(),
        inputs_digest: digest(name, &options, &bytes),
        results: outcome.results,
        assertions: outcome.assertions,
        version: format!("realsim {}", env!("CARGO_PKG_VERSION")),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.to_json());
            if cli.options.verbose {
                eprint!("{}", report.table());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
