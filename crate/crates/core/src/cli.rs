//! Command-line front end: coefficient tables, formula-versus-census
//! comparisons, scheme validation and products, and Hey factors.
//!
//! Exit codes: 0 on success or full agreement, 1 on a formula/census
//! mismatch, 2 on usage errors and violated preconditions.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Number, Value};

use crate::arith;
use crate::catalog::Construction;
use crate::local::{hey_local, HeyComponent, PadicRing};
use crate::oracle::count_left_ideals;
use crate::schemes::AssociationScheme;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "orderzeta", version, about = "Exact zeta functions of integral scheme rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a construction's zeta function to N coefficients.
    Expand {
        /// cp <p> | kn <n> | cp-x-kn <p> <n> | km-x-kn <m> <n> | zc6 | rank2-over <n> <field>
        #[arg(required = true, num_args = 1..)]
        construction: Vec<String>,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the expansion with a census of left ideals.
    Compare {
        #[arg(required = true, num_args = 1..)]
        construction: Vec<String>,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Largest index counted by the census (defaults to N).
        #[arg(long = "oracle-N", value_parser = clap::value_parser!(u64).range(1..))]
        oracle_n: Option<u64>,
        /// Count only at prime-power indices.
        #[arg(long)]
        prime_powers_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the association scheme axioms for a JSON scheme file.
    Validate { file: PathBuf },
    /// Write the direct product of two scheme files.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local factor of a maximal order in M_r(D), D of index m, k copies, center (p, e, f).
    Hey {
        r: u64,
        m: u64,
        k: u64,
        p: u64,
        e: u64,
        f: u64,
        /// Number of coefficients after the constant term.
        #[arg(long = "K", default_value_t = 8)]
        k_terms: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Expand {
            construction,
            n,
            format,
            out,
        } => {
            let c = Construction::parse(&construction).map_err(Failure::usage)?;
            let z = c.zeta().map_err(Failure::usage)?;
            let coeffs = z.expand(n as usize).map_err(Failure::usage)?;
            let rows: Vec<(usize, BigInt)> = coeffs
                .values()
                .iter()
                .enumerate()
                .map(|(i, a)| (i + 1, a.clone()))
                .collect();
            let text = match format {
                Format::Csv => {
                    let mut s = String::from("n,a_n\n");
                    for (n, a) in &rows {
                        s.push_str(&format!("{n},{a}\n"));
                    }
                    s
                }
                Format::Json => {
                    let coefficients: Vec<Value> = rows
                        .iter()
                        .map(|(n, a)| json!({ "n": n, "a_n": big_json(a) }))
                        .collect();
                    let doc = json!({
                        "construction": c.name(),
                        "zeta": z.to_string(),
                        "coefficients": coefficients,
                    });
                    pretty(&doc)
                }
            };
            emit(&text, out.as_deref(), stdout)
        }
        Command::Compare {
            construction,
            n,
            oracle_n,
            prime_powers_only,
            format,
            out,
        } => {
            let c = Construction::parse(&construction).map_err(Failure::usage)?;
            let z = c.zeta().map_err(Failure::usage)?;
            let order = c.order().map_err(Failure::usage)?;
            let coeffs = z.expand(n as usize).map_err(Failure::usage)?;
            let limit = oracle_n.unwrap_or(n).min(n);
            let indices: Vec<u64> = (1..=limit)
                .filter(|&k| !prime_powers_only || k == 1 || arith::prime_power(k).is_some())
                .collect();
            let census: Vec<(u64, u64)> = indices
                .par_iter()
                .map(|&k| (k, count_left_ideals(&order, k)))
                .collect();
            let mut oracle: Vec<Option<BigInt>> = vec![None; n as usize];
            for (k, count) in census {
                oracle[k as usize - 1] = Some(BigInt::from(count));
            }
            let rows: Vec<(usize, &BigInt, Option<&BigInt>)> = coeffs
                .values()
                .iter()
                .zip(&oracle)
                .enumerate()
                .map(|(i, (a, o))| (i + 1, a, o.as_ref()))
                .collect();
            let first_mismatch = rows
                .iter()
                .find(|(_, a, o)| o.is_some_and(|o| o != *a))
                .map(|(k, a, o)| (*k, (*a).clone(), o.cloned().expect("compared")));
            let notes = c.notes();
            let text = match format {
                Format::Csv => {
                    let mut s = String::from("n,a_n,oracle_a_n,match\n");
                    for (k, a, o) in &rows {
                        match o {
                            Some(o) => s.push_str(&format!("{k},{a},{o},{}\n", o == a)),
                            None => s.push_str(&format!("{k},{a},,\n")),
                        }
                    }
                    s
                }
                Format::Json => {
                    let entries: Vec<Value> = rows
                        .iter()
                        .map(|(k, a, o)| {
                            json!({
                                "n": k,
                                "a_n": big_json(a),
                                "oracle_a_n": o.map(big_json),
                                "match": o.map(|o| o == *a),
                            })
                        })
                        .collect();
                    let doc = json!({
                        "construction": c.name(),
                        "zeta": z.to_string(),
                        "rows": entries,
                        "all_match": first_mismatch.is_none(),
                        "first_mismatch": first_mismatch.as_ref().map(|(k, _, _)| k),
                        "notes": notes,
                    });
                    pretty(&doc)
                }
            };
            emit(&text, out.as_deref(), stdout)?;
            for note in &notes {
                let _ = writeln!(stderr, "note: {note}");
            }
            match first_mismatch {
                None => Ok(()),
                Some((k, a, o)) => Err(Failure {
                    code: EXIT_MISMATCH,
                    message: format!(
                        "first mismatch at n = {k}: formula gives {a}, census counts {o}"
                    ),
                }),
            }
        }
        Command::Validate { file } => {
            let scheme = AssociationScheme::load(&file)
                .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let _ = write_summary(&scheme, stdout);
            Ok(())
        }
        Command::Product { a, b, out } => {
            let load = |path: &Path| {
                AssociationScheme::load(path)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
            };
            let product = load(&a)?.direct_product(&load(&b)?);
            let mut text = product.to_json();
            text.push('\n');
            emit(&text, out.as_deref(), stdout)
        }
        Command::Hey {
            r,
            m,
            k,
            p,
            e,
            f,
            k_terms,
        } => {
            let center = PadicRing::new(p, e, f).map_err(Failure::usage)?;
            let component = HeyComponent::new(r, m, k, center).map_err(Failure::usage)?;
            let factor = hey_local(&component);
            let coeffs: Vec<String> = factor
                .expand(k_terms)
                .iter()
                .map(BigInt::to_string)
                .collect();
            let text = format!(
                "factor: {factor}\ncoefficients: {}\n",
                coeffs.join(", ")
            );
            emit(&text, None, stdout)
        }
    }
}

fn write_summary(scheme: &AssociationScheme, w: &mut dyn Write) -> io::Result<()> {
    let rank = scheme.rank();
    writeln!(w, "valid association scheme")?;
    writeln!(w, "order: {}", scheme.size())?;
    writeln!(w, "rank: {rank}")?;
    let valencies: Vec<String> = (0..rank).map(|s| scheme.valency(s).to_string()).collect();
    writeln!(w, "valencies: {}", valencies.join(", "))?;
    writeln!(
        w,
        "commutative: {}",
        if scheme.is_commutative() { "yes" } else { "no" }
    )?;
    writeln!(w, "structure constants (s, t: p^u_st for u = 0..{}):", rank - 1)?;
    for s in 0..rank {
        for t in 0..rank {
            let row: Vec<String> = (0..rank)
                .map(|u| scheme.structure_constant(s, t, u).to_string())
                .collect();
            writeln!(w, "  {s}, {t}: {}", row.join(" "))?;
        }
    }
    Ok(())
}

fn big_json(a: &BigInt) -> Value {
    Value::Number(Number::from_str(&a.to_string()).expect("integer literal"))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}
