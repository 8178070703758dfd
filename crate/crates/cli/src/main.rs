use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use orbmom::assign::{self, DEFAULT_VISIT_BUDGET};
use orbmom::exactnum::{format_rational, int, root_2k, Rational};
use orbmom::spherepoly::{self, DEFAULT_DELTA, DEFAULT_TERM_BUDGET};
use orbmom::{hypergraph, io, theory, Error};

/// Certified sup-norm estimates from exact orbit moments.
#[derive(Parser)]
#[command(name = "orbmom", version)]
struct Cli {
    /// Enumeration limit: monomials for polynomial commands, index-sequence
    /// visits for assignment commands.
    #[arg(long, global = true, env = "ORBMOM_BUDGET")]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact 2k-th moment of a polynomial over the unit sphere.
    PolyNorm {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Two-sided bounds on max |p| over the sphere, at a given k or accuracy.
    #[command(group(ArgGroup::new("level").required(true).args(["k", "eps"])))]
    PolyBounds {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: Option<u32>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Certify that a polynomial system has no real solution, or report that it may.
    SystemTest {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
    },
    /// Bounds on max |<B, gA>| over permutations, with optional extraction.
    Assign {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long)]
        greedy: bool,
        #[arg(long)]
        brute: bool,
    },
    /// Align two hypergraphs on the same vertex count.
    HyperAlign {
        #[arg(long)]
        h1: PathBuf,
        #[arg(long)]
        h2: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Check the moment sandwich exhaustively over S_n.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Validation(String),
    Budget(String, Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::TermBudget { k, terms, budget } => {
                Failure::Budget(message, json!({"k": k, "terms": terms.to_string(), "budget": budget}))
            }
            Error::VisitBudget { visits, budget } => {
                Failure::Budget(message, json!({"visits": visits.to_string(), "budget": budget}))
            }
            _ => Failure::Validation(message),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    let term_budget = cli.budget.unwrap_or(DEFAULT_TERM_BUDGET);
    let visit_budget = cli.budget.unwrap_or(DEFAULT_VISIT_BUDGET);
    match cli.command {
        Command::PolyNorm { poly, k } => {
            let p = io::parse_poly(&read(&poly)?)?;
            let moment = spherepoly::moment_2k_budgeted(&p, k, term_budget)?;
            Ok(json!({
                "moment_2k": format_rational(&moment),
                "norm_2k": root_2k(&moment, k)?,
            }))
        }
        Command::PolyBounds { poly, k, eps } => {
            let p = io::parse_poly(&read(&poly)?)?;
            let iv = match (k, eps) {
                (Some(k), _) => spherepoly::sup_bounds_budgeted(&p, k, term_budget)?,
                (None, Some(eps)) => spherepoly::fewnomial_sup_budgeted(&p, eps, term_budget)?,
                (None, None) => unreachable!("clap requires one of --k, --eps"),
            };
            Ok(io::interval_to_json(&iv))
        }
        Command::SystemTest { system, k, delta } => {
            let polys = io::parse_system(&read(&system)?)?;
            let report = spherepoly::system_reduce(&polys, k, delta, term_budget)?;
            Ok(io::system_report_to_json(&report))
        }
        Command::Assign { a, b, k, greedy, brute } => {
            let a = io::parse_tensor(&read(&a)?)?;
            let b = io::parse_tensor(&read(&b)?)?;
            // exhaustive search is refused before any moment work starts
            let brute = brute.then(|| assign::brute_max(&a, &b)).transpose()?;
            let bounds = assign::sup_bounds_budgeted(&a, &b, k, visit_budget)?;
            let mut out = json!({ "bounds": io::interval_to_json(&bounds) });
            if greedy {
                let r = assign::greedy_extract_budgeted(&a, &b, k, visit_budget)?;
                out["greedy"] = io::greedy_to_json(&r);
            }
            if let Some(r) = brute {
                out["brute"] = io::brute_to_json(&r);
            }
            Ok(out)
        }
        Command::HyperAlign { h1, h2, k } => {
            let h1 = io::parse_hypergraph(&read(&h1)?)?;
            let h2 = io::parse_hypergraph(&read(&h2)?)?;
            let r = hypergraph::align_budgeted(&h1, &h2, k, visit_budget)?;
            Ok(io::alignment_to_json(&r))
        }
        Command::Verify { n, k, trials, seed } => {
            let n = usize::try_from(n).map_err(|_| Failure::Validation(format!("n = {n} is too large")))?;
            if n > theory::DEFAULT_ORBIT_CAP {
                return Err(Error::Cap {
                    n,
                    cap: theory::DEFAULT_ORBIT_CAP,
                }
                .into());
            }
            let unit: Vec<Rational> = (0..n).map(|i| int(i64::from(i == 0))).collect();
            let ones = vec![int(1); n];
            let mut cases = vec![("delta", unit.clone(), unit), ("constant", ones.clone(), ones)];
            cases.extend(
                theory::random_pairs(n, trials, seed)
                    .into_iter()
                    .map(|(v, l)| ("random", v, l)),
            );

            let mut all_hold = true;
            let mut out = Vec::with_capacity(cases.len());
            for (label, v, ell) in cases {
                let report = theory::verify_sandwich(&v, &ell, k)?;
                all_hold &= report.all_hold();
                out.push(json!({
                    "case": label,
                    "v": io::vector_to_json(&v),
                    "ell": io::vector_to_json(&ell),
                    "report": io::sandwich_to_json(&report),
                }));
            }
            Ok(json!({"n": n, "k": k, "seed": seed, "trials": trials, "all_hold": all_hold, "cases": out}))
        }
    }
}

/// Writes the one JSON document; a closed pipe is not worth a panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(value) => {
            emit(&serde_json::to_string_pretty(&value).expect("values serialize"));
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(message)) => {
            eprintln!("orbmom: {message}");
            emit(&json!({"error": {"kind": "validation", "message": message}}).to_string());
            ExitCode::from(2)
        }
        Err(Failure::Budget(message, detail)) => {
            eprintln!("orbmom: {message}");
            emit(&json!({"error": {"kind": "budget", "message": message, "detail": detail}}).to_string());
            ExitCode::from(3)
        }
    }
}
