//! `dqg`: build, verify and decompose finite-dimensional discrete quantum groups.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dqg_core::builders::{build_function_algebra, build_group_algebra, build_left_trivial, build_right_trivial};
use dqg_core::linalg::{DEFAULT_RANK_TOL, DEFAULT_TOL};
use dqg_core::magma::extract_operation;
use dqg_core::pipeline::{self, DEFAULT_SEED};
use dqg_core::{Certificate, Error, FiniteMagma, QuantumGroupFile, Tolerances, VerifyOptions};

#[derive(Parser)]
#[command(name = "dqg", version, about = "Verifier for finite-dimensional discrete quantum groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the full structure of a quantum group and certify every identity.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        numeric: Numeric,
        /// Write the certificate as JSON to this path ("-" for standard output).
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Record wall-clock time per phase in the certificate.
        #[arg(long)]
        timings: bool,
    },
    /// Write a quantum group file from a builder.
    Build {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        numeric: Numeric,
        /// Output path; standard output if absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write the reduced dual, decomposed into matrix blocks, as a quantum group file.
    Dual {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Analyze a magma table (or the operation of a quantum group file on points).
    Reconstruct {
        /// Table file, or a quantum group file with 1 x 1 blocks (`.json`).
        input: PathBuf,
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Print a stored certificate as a table.
    Report { certificate: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builder {
    /// Functions on a group.
    FnAlg,
    /// Group algebra, decomposed into matrix blocks.
    GrpAlg,
    /// `Delta(a) = a (x) 1`.
    #[value(name = "delta-a-tensor-1")]
    DeltaATensor1,
    /// `Delta(a) = 1 (x) a`.
    #[value(name = "delta-1-tensor-a")]
    Delta1TensorA,
}

#[derive(Args)]
struct Source {
    /// Quantum group file.
    input: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "input")]
    builder: Option<Builder>,
    /// Group table for `fn-alg` and `grp-alg`.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Number of 1 x 1 blocks for the degenerate builders.
    #[arg(long, conflicts_with = "blocks")]
    dim: Option<usize>,
    /// Comma-separated block sizes for the degenerate builders.
    #[arg(long, value_delimiter = ',')]
    blocks: Option<Vec<usize>>,
}

#[derive(Args)]
struct Numeric {
    /// Relative residual tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Relative singular value threshold for rank decisions.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Refuse algebras of larger dimension.
    #[arg(long)]
    max_dim: Option<usize>,
}

impl Numeric {
    fn options(&self, timings: bool) -> VerifyOptions {
        VerifyOptions {
            tolerances: Tolerances {
                residual: self.tol,
                rank: self.rank_tol,
            },
            seed: self.seed,
            timings,
            max_dim: self.max_dim,
        }
    }
}

impl Source {
    fn describe(&self) -> String {
        if let Some(path) = &self.input {
            return path.display().to_string();
        }
        let name = self
            .builder
            .and_then(|b| b.to_possible_value())
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        let mut out = format!("builder {name}");
        if let Some(g) = &self.group {
            out.push_str(&format!(" group {}", g.display()));
        }
        if let Some(d) = self.dim {
            out.push_str(&format!(" dim {d}"));
        }
        if let Some(b) = &self.blocks {
            out.push_str(&format!(" blocks {b:?}"));
        }
        out
    }

    fn blocks(&self) -> Vec<usize> {
        match (&self.blocks, self.dim) {
            (Some(b), _) => b.clone(),
            (None, Some(d)) => vec![1; d],
            (None, None) => vec![1, 1],
        }
    }

    fn load(&self, opts: &VerifyOptions) -> Result<QuantumGroupFile, Error> {
        if let Some(path) = &self.input {
            return QuantumGroupFile::load(path);
        }
        let group = || {
            self.group
                .as_deref()
                .ok_or_else(|| Error::InvalidTable("--group is required for this builder".into()))
                .and_then(FiniteMagma::load)
        };
        match self.builder {
            Some(Builder::FnAlg) => build_function_algebra(&group()?),
            Some(Builder::GrpAlg) => build_group_algebra(&group()?, &opts.tolerances, opts.seed),
            Some(Builder::DeltaATensor1) => build_left_trivial(&self.blocks()),
            Some(Builder::Delta1TensorA) => build_right_trivial(&self.blocks()),
            None => Err(Error::Io("give an input file or --builder".into())),
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(cert: &Certificate, json_out: Option<&Path>) -> ExitCode {
    match json_out {
        Some(p) if p == Path::new("-") => print!("{}", cert.to_json()),
        Some(p) => {
            print!("{}", cert.to_table());
            if let Err(e) = write_output(Some(p), &cert.to_json()) {
                eprintln!("error: {e}");
                return exit(e.exit_code());
            }
        }
        None => print!("{}", cert.to_table()),
    }
    exit(cert.exit_code())
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    exit(err.exit_code())
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Verify {
            source,
            numeric,
            json_out,
            timings,
        } => {
            let opts = numeric.options(timings);
            let name = source.describe();
            let cert = match source.load(&opts) {
                Ok(file) => pipeline::verify(&file, &name, &opts),
                Err(e) => pipeline::failed_input(&name, &opts, &e),
            };
            emit(&cert, json_out.as_deref())
        }
        Command::Build { source, numeric, out } => {
            let opts = numeric.options(false);
            let built = source.load(&opts).and_then(|file| {
                let n = file.algebra()?.dim();
                match opts.max_dim {
                    Some(max) if n > max => Err(Error::ShapeMismatch(format!("dim A = {n} exceeds the limit {max}"))),
                    _ => Ok(file),
                }
            });
            match built.and_then(|file| write_output(out.as_deref(), &file.to_json())) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&e),
            }
        }
        Command::Dual { source, numeric, out } => {
            let opts = numeric.options(false);
            let dual = source.load(&opts).and_then(|file| pipeline::dual_file(&file, &opts));
            match dual {
                Ok(file) => {
                    eprintln!("dual blocks: {:?}", file.block_dims);
                    match write_output(out.as_deref(), &file.to_json()) {
                        Ok(()) => ExitCode::SUCCESS,
                        Err(e) => fail(&e),
                    }
                }
                Err(e) => fail(&e),
            }
        }
        Command::Reconstruct {
            input,
            numeric,
            json_out,
        } => {
            let opts = numeric.options(false);
            let name = input.display().to_string();
            let magma = if input.extension().is_some_and(|e| e == "json") {
                QuantumGroupFile::load(&input)
                    .and_then(|f| f.comultiplication())
                    .and_then(|d| extract_operation(&d, None, &opts.tolerances))
            } else {
                FiniteMagma::load(&input)
            };
            let cert = match magma {
                Ok(m) => pipeline::reconstruct(&m, &name, &opts),
                Err(e) => pipeline::failed_input(&name, &opts, &e),
            };
            emit(&cert, json_out.as_deref())
        }
        Command::Report { certificate } => {
            let cert = std::fs::read_to_string(&certificate)
                .map_err(|e| Error::Io(format!("{}: {e}", certificate.display())))
                .and_then(|text| Certificate::from_json(&text));
            match cert {
                Ok(c) => {
                    print!("{}", c.to_table());
                    exit(c.exit_code())
                }
                Err(e) => fail(&e),
            }
        }
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            // usage errors share the exit code of malformed input
            if e.use_stderr() {
                exit(3)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
