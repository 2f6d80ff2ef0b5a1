//! `gnp`: predict generic Newton polygons for the two-term family
//! x^d + a x^s and verify them against the exact point-counting oracle.
//!
//! Exit codes: 0 success, 2 hypothesis violation, 3 budget exceeded,
//! 4 internal consistency failure.

mod report;
mod svg;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gnp_core::dwork::tame_minor;
use gnp_core::frobenius::pij_data;
use gnp_core::genpoly::generating_polynomial;
use gnp_core::gnpredict::{hodge_polygon, predict_gnp};
use gnp_core::oracle::{exhaustive_gnp, newton_polygon, zeta_numerator};
use gnp_core::rational::{is_prime, ord_p, Int, Rational, Valuation};
use gnp_core::Error;

const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Parser)]
#[command(name = "gnp", version, about = "Generic Newton polygons of two-term exponential sums")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct OutArgs {
    /// Write the artifact to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nonzero generating-polynomial terms per index n, as JSON.
    Hr {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
        /// Highest degree scanned per n (default: minimal degree + d(d+2)).
        #[arg(long = "k-cap")]
        k_cap: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimal Frobenius solutions for v = p*i - j, as a CSV table.
    Frobenius {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Predicted generic Newton polygon for one prime.
    Predict {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        p: u64,
        #[arg(long = "k-cap")]
        k_cap: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Per-n tame determinant term tables (A-degree, gamma exponent,
    /// coefficient, term valuation) as CSV.
    Dwork {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        p: u64,
        /// Solution-index truncation per matrix entry.
        #[arg(long = "ell-cap", default_value_t = 2)]
        ell_cap: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact point-counting oracle.
    Oracle {
        #[command(subcommand)]
        sub: OracleCmd,
    },
    /// Cross-check predictions against the oracle over a prime range.
    Verify {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        /// Single family parameter; omit to sweep all a in F_p^*.
        #[arg(long)]
        a: Option<u64>,
        #[arg(long = "k-cap")]
        k_cap: Option<u64>,
        /// Cap on p^{d-1} point-counting work per prime.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Predictions only, over a prime range.
    Sweep {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        /// Restrict to one residue class; omit for all residues.
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        #[arg(long = "k-cap")]
        k_cap: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Newton polygon of the L-function for one (s, d, a, p).
    Np {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive generic polygon over all a in F_p^*.
    Gnp {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Integer zeta-numerator coefficients of the Artin-Schreier cover.
    Zeta {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 3,
        Error::Inconsistency(_) | Error::InsufficientPrecision(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn emit(out: &OutArgs, artifact: &str) -> Result<(), Error> {
    match &out.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(artifact.as_bytes())?;
            if !artifact.ends_with('\n') {
                f.write_all(b"\n")?;
            }
            Ok(())
        }
        None => {
            println!("{artifact}");
            Ok(())
        }
    }
}

fn check_budget(p: u64, d: u64, budget: u128) -> Result<(), Error> {
    let work = (p as u128).saturating_pow(d.saturating_sub(1) as u32);
    if work > budget {
        return Err(Error::BudgetExceeded(format!(
            "p^(d-1) = {work} exceeds budget {budget}"
        )));
    }
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Hr { s, d, r, k_cap, out } => {
            let gp = generating_polynomial(s, d, r, k_cap)?;
            let terms: BTreeMap<String, Vec<[String; 2]>> = gp
                .terms
                .iter()
                .map(|(n, list)| {
                    (
                        n.to_string(),
                        list.iter()
                            .map(|(k, h)| [k.to_string(), h.to_string()])
                            .collect(),
                    )
                })
                .collect();
            let doc = serde_json::json!({
                "s": s,
                "d": d,
                "r": r,
                "terms": terms,
                "k_cap": gp.k_cap,
                "incomplete": gp.incomplete,
            });
            emit(&out, &to_json(&doc))
        }
        Cmd::Frobenius { s, d, p, out } => {
            let mut csv = String::from("i,j,m_ij,n_ij,beta\n");
            for i in 1..d {
                for j in 1..d {
                    let x = pij_data(s, d, p, i, j)?;
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        x.i, x.j, x.m_ij, x.n_ij, x.beta
                    ));
                }
            }
            emit(&out, csv.trim_end())
        }
        Cmd::Predict {
            s,
            d,
            r,
            p,
            k_cap,
            format,
            out,
        } => {
            let lowest = if r == 1 {
                vec![]
            } else {
                gnp_core::genpoly::lowest_terms(s, d, r, k_cap)?
            };
            let pred = predict_gnp(s, d, r, p, &lowest)?;
            let hp = hodge_polygon(d);
            match format {
                Format::Json => {
                    let doc = serde_json::json!({
                        "prediction": pred,
                        "hodge": hp,
                    });
                    emit(&out, &to_json(&doc))
                }
                Format::Svg => emit(
                    &out,
                    &svg::polygons(&[("GNP", &pred.polygon), ("HP", &hp)]),
                ),
                Format::Csv => Err(Error::Hypothesis(
                    "predict emits json or svg, not csv".into(),
                )),
            }
        }
        Cmd::Dwork {
            s,
            d,
            r,
            p,
            ell_cap,
            out,
        } => {
            let pm1 = Rational::from_integer(Int::from(p - 1));
            let mut csv = String::from("n,a_degree,gamma_exponent,coefficient,term_valuation\n");
            for n in 1..d {
                let minor = tame_minor(s, d, r, p, n, ell_cap)?;
                for ((k, e), c) in minor.terms() {
                    let val = match ord_p(c, p)? {
                        Valuation::Finite(v) => v + e / &pm1,
                        Valuation::Infinity => unreachable!("zero terms are not stored"),
                    };
                    csv.push_str(&format!("{n},{k},{e},{c},{val}\n"));
                }
            }
            emit(&out, csv.trim_end())
        }
        Cmd::Oracle { sub } => match sub {
            OracleCmd::Np {
                s,
                d,
                a,
                p,
                budget,
                out,
            } => {
                check_budget(p, d, budget)?;
                let np = newton_polygon(s, d, a, p)?;
                emit(&out, &to_json(&np))
            }
            OracleCmd::Gnp {
                s,
                d,
                p,
                budget,
                out,
            } => {
                check_budget(p, d, budget)?;
                let g = exhaustive_gnp(s, d, p)?;
                emit(&out, &to_json(&g.polygon))
            }
            OracleCmd::Zeta {
                s,
                d,
                a,
                p,
                budget,
                out,
            } => {
                check_budget(p, d, budget)?;
                let z = zeta_numerator(s, d, a, p)?;
                let coeffs: Vec<String> = z.iter().map(|c| c.to_string()).collect();
                emit(&out, &to_json(&coeffs))
            }
        },
        Cmd::Verify {
            s,
            d,
            pmin,
            pmax,
            a,
            k_cap,
            budget,
            format,
            out,
        } => {
            let rep = report::run_verify(&report::VerifyConfig {
                s,
                d,
                pmin,
                pmax,
                a,
                k_cap,
                budget,
            })?;
            match format {
                Format::Json => emit(&out, &to_json(&rep)),
                Format::Csv => emit(&out, &report::verify_csv(&rep, d)?),
                Format::Svg => {
                    if rep.records.len() != 1 {
                        return Err(Error::Hypothesis(
                            "svg output needs exactly one (p, a) record; \
                             use --pmin == --pmax and --a"
                                .into(),
                        ));
                    }
                    let rec = &rep.records[0];
                    let hp = hodge_polygon(d);
                    emit(
                        &out,
                        &svg::polygons(&[
                            ("NP", &rec.oracle),
                            ("GNP", &rec.predicted),
                            ("HP", &hp),
                        ]),
                    )
                }
            }
        }
        Cmd::Sweep {
            s,
            d,
            r,
            pmin,
            pmax,
            k_cap,
            format,
            out,
        } => {
            let preds = report::run_predict(s, d, r, pmin, pmax, k_cap)?;
            match format {
                Format::Json => emit(&out, &to_json(&preds)),
                Format::Csv => emit(&out, &report::sweep_csv(&preds)?),
                Format::Svg => Err(Error::Hypothesis(
                    "sweep emits json or csv, not svg".into(),
                )),
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("in-memory serialization cannot fail")
}

/// Primes in [lo, hi] by deterministic primality testing.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&p| is_prime(p)).collect()
}
