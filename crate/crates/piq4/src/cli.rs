//! Command-line front end.
//!
//! Three subcommands: `build` emits a codebook, `verify` runs the exact
//! distance-two checks (optionally with the dense oracle), `nonexistence`
//! sweeps the short-block-length infeasibility certificates. Exit code 0
//! means every verification passed, 1 a mathematical failure with the
//! witness in the payload, 2 a usage error.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cert::{
    nonexistence_entry, Certificate, CodebookJson, KLJson, NonexistenceJson, OracleJson,
    ParamsJson, PauliJson, PayloadJson, SeparationJson, VerificationJson,
};
use crate::codebook::build;
use crate::lp::{check_feasibility, macwilliams_system, Feasibility};
use crate::oracle::oracle_kl_check;
use crate::sym::RootScaling;
use crate::verify::{
    check_support_separation, kl_check_of, transversal_pauli_check, PauliVerdict, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "piq4",
    version,
    about = "Exact construction and verification of minimal distance-two permutation-invariant qudit codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the codebook for a local dimension.
    Build {
        /// Local dimension (a single integer >= 2).
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Output path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify support separation, the Knill-Laflamme conditions, and the
    /// transversal Pauli action, exactly.
    Verify {
        /// Local dimension, `<int>` or an inclusive range `<a>..<b>`.
        #[arg(long)]
        q: String,
        /// Also run the dense tensor-space oracle (guarded to small q).
        #[arg(long)]
        with_oracle: bool,
        /// Weight the root action by the support pattern alone instead of
        /// the ladder constant.
        #[arg(long)]
        pattern_only: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Infeasibility certificates for block lengths below four.
    Nonexistence {
        /// Comma-separated block lengths from {1, 2, 3}.
        #[arg(long)]
        n: String,
        /// Local dimension, `<int>` or an inclusive range `<a>..<b>`.
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_q_range(text: &str) -> Result<(u32, u32), String> {
    let parse_one = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("invalid q value '{s}'"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let v = parse_one(text)?;
            (v, v)
        }
    };
    if lo < 2 {
        return Err(format!("q = {lo} is below the minimum of 2"));
    }
    if lo > hi {
        return Err(format!("empty q range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_n_set(text: &str) -> Result<Vec<usize>, String> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid n value '{part}'"))?;
        if !(1..=3).contains(&v) {
            return Err(format!(
                "n = {v} is unsupported; only 1, 2, 3 have transforms"
            ));
        }
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values.sort_unstable();
    if values.is_empty() {
        return Err("empty n set".into());
    }
    Ok(values)
}

fn emit(cert: &Certificate, format: Format, out: Option<&PathBuf>) -> Result<(), String> {
    let text = match format {
        Format::Json => cert.to_json(),
        Format::Text => crate::cert::render_text(cert),
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {path:?}: {e}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

const EXIT_PASS: i32 = 0;
const EXIT_MATH_FAILURE: i32 = 1;
const EXIT_USAGE: i32 = 2;

fn usage_error(message: String) -> i32 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn cmd_build(q_text: &str, format: Format, out: Option<&PathBuf>) -> i32 {
    let (lo, hi) = match parse_q_range(q_text) {
        Ok(range) => range,
        Err(e) => return usage_error(e),
    };
    if lo != hi {
        return usage_error("build takes a single q value".into());
    }
    let cb = match build(lo) {
        Ok(cb) => cb,
        Err(e) => return usage_error(e.to_string()),
    };
    let cert = Certificate::new(
        "build",
        ParamsJson {
            q: Some(q_text.into()),
            n: None,
            with_oracle: None,
            pattern_only: None,
        },
        Verdict::Pass,
        PayloadJson::Codebook(CodebookJson::from(&cb)),
    );
    match emit(&cert, format, out) {
        Ok(()) => EXIT_PASS,
        Err(e) => usage_error(e),
    }
}

fn cmd_verify(
    q_text: &str,
    with_oracle: bool,
    pattern_only: bool,
    format: Format,
    out: Option<&PathBuf>,
) -> i32 {
    let (lo, hi) = match parse_q_range(q_text) {
        Ok(range) => range,
        Err(e) => return usage_error(e),
    };
    let scaling = if pattern_only {
        RootScaling::Pattern
    } else {
        RootScaling::Ladder
    };

    let mut entries = Vec::new();
    let mut all_pass = true;
    for q in lo..=hi {
        let cb = match build(q) {
            Ok(cb) => cb,
            Err(e) => return usage_error(e.to_string()),
        };
        let separation = check_support_separation(&cb);
        let kl = kl_check_of(cb.codewords(), scaling);
        let pauli = transversal_pauli_check(&cb);
        let oracle = if with_oracle {
            match oracle_kl_check(&cb) {
                Ok(report) => Some(report),
                Err(e) => return usage_error(e.to_string()),
            }
        } else {
            None
        };

        let q_pass = separation.passes()
            && kl.passes()
            && pauli.verdict != PauliVerdict::Fail
            && oracle.as_ref().is_none_or(|o| o.passes());
        all_pass &= q_pass;

        entries.push(VerificationJson {
            q,
            n: cb.n(),
            root_scaling: if pattern_only {
                "pattern".into()
            } else {
                "ladder".into()
            },
            separation: SeparationJson::from(&separation),
            kl: KLJson::from(&kl),
            pauli: PauliJson::from(&pauli),
            oracle: oracle.as_ref().map(OracleJson::from),
            verdict: if q_pass { "pass".into() } else { "fail".into() },
        });
    }

    let cert = Certificate::new(
        "verify",
        ParamsJson {
            q: Some(q_text.into()),
            n: None,
            with_oracle: Some(with_oracle),
            pattern_only: Some(pattern_only),
        },
        if all_pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        PayloadJson::Verification(entries),
    );
    if let Err(e) = emit(&cert, format, out) {
        return usage_error(e);
    }
    if all_pass {
        EXIT_PASS
    } else {
        EXIT_MATH_FAILURE
    }
}

fn cmd_nonexistence(n_text: &str, q_text: &str, format: Format, out: Option<&PathBuf>) -> i32 {
    let n_set = match parse_n_set(n_text) {
        Ok(set) => set,
        Err(e) => return usage_error(e),
    };
    let (lo, hi) = match parse_q_range(q_text) {
        Ok(range) => range,
        Err(e) => return usage_error(e),
    };

    let mut entries = Vec::new();
    let mut all_infeasible = true;
    for q in u64::from(lo)..=u64::from(hi) {
        for &n in &n_set {
            match check_feasibility(n, q, q) {
                Ok(Feasibility::Infeasible(cert)) => {
                    let system = macwilliams_system(n, q, q, true).expect("n <= 3");
                    let verified = cert.verify(&system);
                    all_infeasible &= verified;
                    entries.push(nonexistence_entry(&cert, verified));
                }
                Ok(Feasibility::Feasible(_)) => {
                    all_infeasible = false;
                    entries.push(crate::cert::NonexistenceEntryJson {
                        n,
                        q,
                        k: q,
                        infeasible: false,
                        contradiction: String::new(),
                        values: Vec::new(),
                        trail: vec!["a witness satisfies the constraint set".into()],
                        elimination_steps: Vec::new(),
                        resubstitution_verified: false,
                    });
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_MATH_FAILURE;
                }
            }
        }
    }

    let cert = Certificate::new(
        "nonexistence",
        ParamsJson {
            q: Some(q_text.into()),
            n: Some(n_text.into()),
            with_oracle: None,
            pattern_only: None,
        },
        if all_infeasible {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        PayloadJson::Nonexistence(NonexistenceJson {
            entries,
            all_infeasible,
        }),
    );
    if let Err(e) = emit(&cert, format, out) {
        return usage_error(e);
    }
    if all_infeasible {
        EXIT_PASS
    } else {
        EXIT_MATH_FAILURE
    }
}

/// Parses arguments and runs one command, returning the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Build { q, format, out } => cmd_build(&q, format, out.as_ref()),
        Command::Verify {
            q,
            with_oracle,
            pattern_only,
            format,
            out,
        } => cmd_verify(&q, with_oracle, pattern_only, format, out.as_ref()),
        Command::Nonexistence { n, q, format, out } => {
            cmd_nonexistence(&n, &q, format, out.as_ref())
        }
    }
}

/// [`run_from`] on the process arguments.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_range_parsing() {
        assert_eq!(parse_q_range("3"), Ok((3, 3)));
        assert_eq!(parse_q_range("2..50"), Ok((2, 50)));
        assert!(parse_q_range("1").is_err());
        assert!(parse_q_range("5..3").is_err());
        assert!(parse_q_range("x").is_err());
    }

    #[test]
    fn n_set_parsing() {
        assert_eq!(parse_n_set("1,2,3"), Ok(vec![1, 2, 3]));
        assert_eq!(parse_n_set("2"), Ok(vec![2]));
        assert!(parse_n_set("4").is_err());
        assert!(parse_n_set("").is_err());
    }
}
