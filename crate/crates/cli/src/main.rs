use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mopsym_cli::{run, Command, JobSpec, Options, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "mopsym", version, about = "Exact multiple orthogonal polynomial toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate P_0..P_M (or S_0..S_M) from a recurrence
    Gen(Flags),
    /// Symmetrize a (d+2)-term recurrence
    Symmetrize(Flags),
    /// Recover the Darboux families from a symmetric recurrence
    Desymmetrize(Flags),
    /// LU factorization of the Jacobi section
    Lu(Flags),
    /// Darboux factors, cyclic products and families
    Darboux(Flags),
    /// Moments of the vector functional
    Moments(Flags),
    /// Block Hankel matrix of a moment table
    Hankel(Flags),
    /// Weyl or Stieltjes series coefficients
    Weyl(Flags),
    /// Matrix four-term recurrence of a d = 2 system
    MatrixMop(Flags),
    /// Favard blocks, moments and block orthogonality
    Favard(Flags),
    /// Check a document, or run the built-in suite when no input is given
    Verify(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the result here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Expected d; rejected if it disagrees with the input
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long = "free-params")]
    free_params: Option<PathBuf>,
    #[arg(long)]
    v00: Option<PathBuf>,
    /// Evaluation point as re,im
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: Option<[f64; 2]>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Seed for the built-in suite
    #[arg(long)]
    seed: Option<u64>,
    /// Run a single criterion of the built-in suite
    #[arg(long)]
    criterion: Option<u8>,
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s.split_once(',').ok_or("expected re,im")?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let z = [p(re)?, p(im)?];
    if z.iter().all(|v| v.is_finite()) {
        Ok(z)
    } else {
        Err("components must be finite".into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let (command, f) = match cli.command {
        Cmd::Gen(f) => (Command::Gen, f),
        Cmd::Symmetrize(f) => (Command::Symmetrize, f),
        Cmd::Desymmetrize(f) => (Command::Desymmetrize, f),
        Cmd::Lu(f) => (Command::Lu, f),
        Cmd::Darboux(f) => (Command::Darboux, f),
        Cmd::Moments(f) => (Command::Moments, f),
        Cmd::Hankel(f) => (Command::Hankel, f),
        Cmd::Weyl(f) => (Command::Weyl, f),
        Cmd::MatrixMop(f) => (Command::MatrixMop, f),
        Cmd::Favard(f) => (Command::Favard, f),
        Cmd::Verify(f) => (Command::Verify, f),
    };
    let job = JobSpec {
        command,
        input: f.input,
        output: f.output.clone(),
        options: Options {
            d: f.d,
            m: f.m,
            n: f.n,
            k: f.k,
            free_params: f.free_params,
            v00: f.v00,
            z: f.z,
            horizon: f.horizon,
            seed: f.seed,
            criterion: f.criterion,
        },
    };
    let outcome = run(&job);
    if let Some(doc) = &outcome.document {
        let text = doc.emit();
        match &job.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_INVALID as u8);
                }
            }
            None => print!("{text}"),
        }
    }
    if let Some(err) = &outcome.error {
        eprint!("{}", err.emit());
    }
    ExitCode::from(outcome.code as u8)
}
