use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use connexa::cli::fixtures::{fixture_path, write_fixtures};
use connexa::cli::{
    cmd_birkhoff_iso, cmd_classify, cmd_euler_nf, cmd_euler_realizable, cmd_formal_iso, cmd_formal_nf, cmd_malgrange,
    cmd_prenormal, cmd_selftest, cmd_verify, parse_scalar, MalgrangeParams, Options, Report,
};
use connexa::connmat::CMat;
use connexa::{Error, Result, Scalar};

/// Exact normal forms and classification of rank-2 (TE)-structures over N2.
///
/// Structure arguments are document paths; `@name` refers to `<fixtures>/name.json`.
/// Exit codes: 0 success, 2 parse error, 3 precondition violation, 4 inconsistency flag raised.
#[derive(Parser, Debug)]
#[command(name = "connexa", version)]
struct Cli {
    /// Truncation order in z for constructed structures.
    #[arg(long, global = true, default_value_t = 8)]
    order_z: usize,
    /// Truncation order in t2 for constructed structures and series parameters.
    #[arg(long, global = true, default_value_t = 8)]
    order_t: usize,
    /// Search bound for the Birkhoff resonance index n.
    #[arg(long, global = true, default_value_t = 64)]
    nmax: u64,
    /// Search bound for the eigen-section index in the irreducibility check.
    #[arg(long, global = true, default_value_t = 16)]
    kmax: i64,
    /// Fixture directory.
    #[arg(long, global = true, env = "CONNEXA_FIXTURES", default_value = "fixtures")]
    fixtures: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Flatness residuals of a structure.
    Verify { path: String },
    /// Pre-normal reduction.
    Prenormal { path: String },
    /// Formal normal form with its transformation log.
    FormalNf { path: String },
    /// Formal isomorphism decision between two structures.
    FormalIso { a: String, b: String },
    /// Holomorphic classification.
    Classify { path: String },
    /// Isomorphism of Birkhoff data given as "c,alpha,c0,c1" tuples.
    BirkhoffIso {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Malgrange universal deformation as a structure document.
    Malgrange {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        c0: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c1: String,
        /// B_inf as "C1,C2,D,E" coordinates, replacing the normalized alpha C1 + c1 C2 - D/4 + c0 E.
        #[arg(long, allow_hyphen_values = true)]
        binf: Option<String>,
        /// Write the document here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Normal form of the Euler field (t1 + c) d1 + g(t2) d2.
    EulerNf {
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Realizability of an Euler field by (TE)- and Frobenius structures.
    EulerRealizable {
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Runs the acceptance criteria.
    Selftest,
    /// Writes the shipped fixtures into the fixture directory.
    Fixtures,
}

fn resolve(arg: &str, fixtures: &Path) -> PathBuf {
    match arg.strip_prefix('@') {
        Some(name) => fixture_path(fixtures, name),
        None => PathBuf::from(arg),
    }
}

fn scalar(name: &str, text: &str) -> Result<Scalar> {
    parse_scalar(text).map_err(|_| Error::Parse { location: name.to_string(), message: format!("invalid scalar {text:?}") })
}

enum Output {
    Report(Report),
    Text(String),
}

fn run(cli: &Cli) -> Result<Output> {
    let opts = Options {
        order_z: cli.order_z,
        order_t: cli.order_t,
        n_max: cli.nmax,
        k_max: cli.kmax,
        fixtures: Some(cli.fixtures.clone()),
    };
    let p = |a: &str| resolve(a, &cli.fixtures);
    let report = match &cli.command {
        Command::Verify { path } => cmd_verify(&p(path))?,
        Command::Prenormal { path } => cmd_prenormal(&p(path))?,
        Command::FormalNf { path } => cmd_formal_nf(&p(path))?,
        Command::FormalIso { a, b } => cmd_formal_iso(&p(a), &p(b))?,
        Command::Classify { path } => cmd_classify(&p(path), &opts)?,
        Command::BirkhoffIso { a, b } => cmd_birkhoff_iso(a, b, &opts)?,
        Command::Malgrange { c, alpha, c0, c1, binf, out } => {
            let mut params = MalgrangeParams::normalized(scalar("c", c)?, scalar("alpha", alpha)?, scalar("c0", c0)?, scalar("c1", c1)?);
            if let Some(text) = binf {
                let parts: Vec<&str> = text.split(',').collect();
                if parts.len() != 4 {
                    return Err(Error::Parse { location: "binf".into(), message: "expected C1,C2,D,E".into() });
                }
                let k = |i: usize| scalar(&format!("binf[{i}]"), parts[i]);
                params.binf = CMat::new(k(0)?, k(1)?, k(2)?, k(3)?);
            }
            let text = cmd_malgrange(&params, &opts)?.to_text();
            return match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    Ok(Output::Text(String::new()))
                }
                None => Ok(Output::Text(text)),
            };
        }
        Command::EulerNf { c, g } => cmd_euler_nf(c, g, &opts)?,
        Command::EulerRealizable { c, g } => cmd_euler_realizable(c, g, &opts)?,
        Command::Selftest => cmd_selftest(&opts)?,
        Command::Fixtures => {
            let written = write_fixtures(&cli.fixtures)?;
            let lines: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            return Ok(Output::Text(lines.join("\n") + "\n"));
        }
    };
    Ok(Output::Report(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Report(r)) => {
            print!("{}", r.to_json());
            let failed = r.command == "selftest" && r.verdicts.values().any(|v| !v);
            ExitCode::from(if failed { 1 } else { r.exit_code() as u8 })
        }
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() });
            eprintln!("{msg}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
