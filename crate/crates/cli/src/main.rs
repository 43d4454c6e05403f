//! `dvs`: decide flatness, build symmetries and check cosymplectic data for
//! polynomial multisymplectic forms with exact rational arithmetic.
//!
//! Exit codes: 0 affirmative verdict, 1 negative verdict, 2 input error,
//! 3 internal error.

mod catalogue;
mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{AnalyzeOptions, FlattenOptions, Source};
use report::{CliError, Report};

#[derive(Parser)]
#[command(name = "dvs", version, about = "Flatness, symmetries and cosymplectic checks for polynomial multisymplectic forms")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Sampling {
    /// Number of seeded random sample points in [−1/4, 1/4]^n.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Closedness, pointwise type, frame search and involutivity.
    Analyze {
        file: PathBuf,
        /// Extra sample point, e.g. `1/2,0,-1`. Repeatable.
        #[arg(long = "point")]
        points: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
        /// Largest coefficient degree tried in the frame search.
        #[arg(long)]
        frame_degree: Option<u32>,
    },
    /// Check a frame against F(ω) and test dα_i∧α_1∧…∧α_k = 0.
    Involutive {
        file: PathBuf,
        #[arg(long)]
        frame: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the Moser flow to the model form and verify it on a grid.
    Flatten {
        file: PathBuf,
        /// Centre of the box, e.g. `0,0,0`. Defaults to the origin.
        #[arg(long)]
        center: Option<String>,
        /// Half-width of the box as a rational.
        #[arg(long = "box")]
        half_width: Option<String>,
        /// Grid points per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// RK4 steps on [0, 1].
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Infinitesimal symmetries of the model form.
    #[command(subcommand)]
    Symmetry(SymmetryCommand),
    /// Cosymplectic pairs (α, β) and their symmetries.
    #[command(subcommand)]
    Cosymplectic(CosymplecticCommand),
    /// Kernel of ∧ω̄ on Λ^l(R^{2m}).
    Lepage {
        /// Values of m: `3`, `2,4` or `1..4`.
        #[arg(long)]
        m: String,
        /// Values of l; defaults to every l with l + 2 ≤ 2m.
        #[arg(long)]
        l: Option<String>,
    },
    /// Bundled worked examples.
    #[command(subcommand)]
    Catalogue(CatalogueCommand),
}

#[derive(Subcommand)]
enum SymmetryCommand {
    /// V = X_H − div_y(Y)ℰ + Y from a generator file with `h` and `field`.
    Build {
        file: PathBuf,
        /// Write the field to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test L_Vω = 0 for a field file.
    Verify {
        file: PathBuf,
        /// Form to test against; defaults to the model on the field's split.
        #[arg(long)]
        form: Option<PathBuf>,
    },
    /// Recover (H, Y) from a symmetry of the model.
    Decompose {
        file: PathBuf,
        /// Write the generator to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Hamiltonian-form candidate for a generator and its residual.
    Hamform { file: PathBuf },
}

#[derive(Subcommand)]
enum CosymplecticCommand {
    /// dα = 0, dβ = 0 and α∧β^n ≠ 0.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// The induced form β∧α and its dvs checks.
    Induce {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Cosymplectic, weakly co-Hamiltonian or co-Hamiltonian.
    Classify {
        file: PathBuf,
        #[arg(long)]
        field: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogueCommand {
    List,
    Run { name: String },
    RunAll,
}

fn read(p: &Path) -> Result<Source, CliError> {
    Source::read(p)
}

fn dispatch(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Analyze { file, points, sampling, frame_degree } => commands::analyze(
            &read(&file)?,
            &AnalyzeOptions { points, samples: sampling.samples, seed: sampling.seed, frame_degree },
        ),
        Command::Involutive { file, frame, sampling } => {
            commands::involutive(&read(&file)?, &read(&frame)?, sampling.samples, sampling.seed)
        }
        Command::Flatten { file, center, half_width, grid, steps, tol } => {
            commands::flatten_cmd(&read(&file)?, &FlattenOptions { center, half_width, grid, steps, tol })
        }
        Command::Symmetry(s) => match s {
            SymmetryCommand::Build { file, out } => commands::symmetry_build(&read(&file)?, out.as_deref()),
            SymmetryCommand::Verify { file, form } => {
                let form = form.map(|f| read(&f)).transpose()?;
                commands::symmetry_verify(&read(&file)?, form.as_ref())
            }
            SymmetryCommand::Decompose { file, out } => commands::symmetry_decompose(&read(&file)?, out.as_deref()),
            SymmetryCommand::Hamform { file } => commands::symmetry_hamform(&read(&file)?),
        },
        Command::Cosymplectic(c) => match c {
            CosymplecticCommand::Validate { file, sampling } => {
                commands::cosymplectic_validate(&read(&file)?, sampling.samples, sampling.seed)
            }
            CosymplecticCommand::Induce { file, sampling } => {
                commands::cosymplectic_induce(&read(&file)?, sampling.samples, sampling.seed)
            }
            CosymplecticCommand::Classify { file, field } => commands::cosymplectic_classify(&read(&file)?, &read(&field)?),
        },
        Command::Lepage { m, l } => {
            let ms = commands::parse_range(&m)?;
            let ls = l.map(|l| commands::parse_range(&l)).transpose()?;
            commands::lepage(&ms, ls.as_deref())
        }
        Command::Catalogue(c) => match c {
            CatalogueCommand::List => Ok(catalogue::list()),
            CatalogueCommand::Run { name } => catalogue::run(&name),
            CatalogueCommand::RunAll => catalogue::run_all(),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match dispatch(cli.command) {
        Ok(mut report) => {
            report.timing("total_seconds", started.elapsed().as_secs_f64());
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({"error": e.to_string(), "exit_code": e.exit_code()}));
            }
            eprintln!("dvs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
