//! Command-line front-end. Exit codes: 0 success/true, 1 false/rejected,
//! 2 input error, 3 infeasible or cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use pedal::bounds::{solve_bounds, BoundsError, BoundsLimits, BoundsResult};
use pedal::decision::{decide_satisfiable, DecisionError, DecisionLimits};
use pedal::demo::run_demo;
use pedal::files::{
    bounds_to_json, load_model, load_pedal, load_proof, load_query, model_to_json, pedal_to_json,
};
use pedal::proofcheck::{check_proof, Verdict};
use pedal::rational::format_rational;
use pedal::syntax::{parse_formula, parse_formula_raw, Signature};

#[derive(Parser)]
#[command(
    name = "pedal",
    version,
    about = "Dynamic-logic model checking, exact credences, validity decision, credence bounds and proof checking on finite models"
)]
struct Cli {
    /// Render results as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// JSON config file with caps and defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Largest k checked for the bounded infinitary rule.
    #[arg(long, global = true, value_name = "K")]
    r3_bound: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state of a model file.
    Eval {
        model: PathBuf,
        state: usize,
        formula: String,
    },
    /// Exact credence of a formula at a state of a measured-model file.
    Mu {
        model: PathBuf,
        state: usize,
        formula: String,
    },
    /// Tight min/max credence bounds for a query file.
    Bounds {
        query: PathBuf,
        /// Write the minimizing model here.
        #[arg(long, value_name = "FILE")]
        witness_min: Option<PathBuf>,
        /// Write the maximizing model here.
        #[arg(long, value_name = "FILE")]
        witness_max: Option<PathBuf>,
    },
    /// Decide validity (default) or satisfiability of a formula.
    Decide {
        formula: String,
        /// Decide satisfiability instead of validity.
        #[arg(long)]
        satisfiable: bool,
        /// Write the witness (or counter-) model here when one exists.
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
    },
    /// Check a proof file.
    Check { proof: PathBuf },
    /// Run the packaged two-state demonstration.
    DemoAnne,
}

/// Caps and defaults, overridable from a JSON file.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", default)]
struct Config {
    fl_closure_cap: usize,
    valuation_cap: u128,
    section_cap: u128,
    r3_bound: u32,
    output_format: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            fl_closure_cap: 64,
            valuation_cap: 1 << 20,
            section_cap: 1_000_000,
            r3_bound: 100,
            output_format: "text".to_string(),
        }
    }
}

impl Config {
    fn decision_limits(&self) -> DecisionLimits {
        DecisionLimits {
            closure_cap: self.fl_closure_cap,
            section_cap: self.section_cap,
            ..DecisionLimits::default()
        }
    }

    fn bounds_limits(&self) -> BoundsLimits {
        BoundsLimits {
            valuation_cap: self.valuation_cap,
            ..BoundsLimits::default()
        }
    }
}

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

fn fail_input(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_INPUT
}

fn fail_cap(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_INFEASIBLE
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| fail_input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), u8> {
    std::fs::write(path, contents).map_err(|e| fail_input(format!("{}: {e}", path.display())))
}

fn decision_exit(e: &DecisionError) -> u8 {
    match e {
        DecisionError::ClosureCapExceeded { .. }
        | DecisionError::CandidateCapExceeded { .. }
        | DecisionError::SectionCapExceeded { .. } => fail_cap(e),
        DecisionError::NoConsistentAtoms => fail_input(e),
    }
}

fn run(cli: Cli) -> u8 {
    let mut config = match &cli.config {
        None => Config::default(),
        Some(path) => {
            let text = match read(path) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match serde_json::from_str(&text) {
                Ok(c) => c,
                Err(e) => return fail_input(format!("{}: {e}", path.display())),
            }
        }
    };
    if let Some(k) = cli.r3_bound {
        config.r3_bound = k;
    }
    let json = cli.json || config.output_format == "json";

    match cli.command {
        Command::Eval {
            model,
            state,
            formula,
        } => {
            let text = match read(&model) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let m = match load_model(&text) {
                Ok(m) => m,
                Err(e) => return fail_input(e),
            };
            if state >= m.frame.n_states {
                return fail_input(format!(
                    "state {state} out of range (model has {} states)",
                    m.frame.n_states
                ));
            }
            let f = match parse_formula(&formula, &m.signature()) {
                Ok(f) => f,
                Err(e) => return fail_input(e),
            };
            let value = m.satisfies(state, &f);
            if json {
                println!("{}", serde_json::json!({ "value": value }));
            } else {
                println!("{value}");
            }
            if value {
                EXIT_TRUE
            } else {
                EXIT_FALSE
            }
        }

        Command::Mu {
            model,
            state,
            formula,
        } => {
            let text = match read(&model) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let pm = match load_pedal(&text) {
                Ok(pm) => pm,
                Err(e) => return fail_input(e),
            };
            if state >= pm.frame.n_states {
                return fail_input(format!(
                    "state {state} out of range (model has {} states)",
                    pm.frame.n_states
                ));
            }
            let sig = Signature::new(
                pm.frame.vf.keys().cloned().collect::<Vec<_>>(),
                pm.program_atoms(),
            );
            let f = match parse_formula(&formula, &sig) {
                Ok(f) => f,
                Err(e) => return fail_input(e),
            };
            let value = pm.mu(state, &f);
            if json {
                println!("{}", serde_json::json!({ "mu": format_rational(&value) }));
            } else {
                println!("{}", format_rational(&value));
            }
            EXIT_TRUE
        }

        Command::Bounds {
            query,
            witness_min,
            witness_max,
        } => {
            let text = match read(&query) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let q = match load_query(&text) {
                Ok(q) => q,
                Err(e) => return fail_input(e),
            };
            let result = match solve_bounds(&q, &config.bounds_limits()) {
                Ok(r) => r,
                Err(e @ BoundsError::InvalidFrame(_)) => return fail_input(e),
                Err(e) => return fail_cap(e),
            };
            if json {
                println!("{}", bounds_to_json(&result));
            }
            match &result {
                BoundsResult::Infeasible => {
                    if !json {
                        println!("infeasible");
                    }
                    EXIT_INFEASIBLE
                }
                BoundsResult::Bounded(b) => {
                    if !json {
                        println!(
                            "min = {} ({})",
                            format_rational(&b.minimum),
                            if b.min_attained { "attained" } else { "infimum only" }
                        );
                        println!(
                            "max = {} ({})",
                            format_rational(&b.maximum),
                            if b.max_attained { "attained" } else { "supremum only" }
                        );
                    }
                    if let (Some(path), Some(w)) = (&witness_min, &b.witness_min) {
                        if let Err(code) = write_file(path, &pedal_to_json(w)) {
                            return code;
                        }
                    }
                    if let (Some(path), Some(w)) = (&witness_max, &b.witness_max) {
                        if let Err(code) = write_file(path, &pedal_to_json(w)) {
                            return code;
                        }
                    }
                    EXIT_TRUE
                }
            }
        }

        Command::Decide {
            formula,
            satisfiable,
            witness,
        } => {
            let f = match parse_formula_raw(&formula) {
                Ok(f) => f,
                Err(e) => return fail_input(e),
            };
            let limits = config.decision_limits();
            if satisfiable {
                let (sat, model) = match decide_satisfiable(&f, &limits) {
                    Ok(r) => r,
                    Err(e) => return decision_exit(&e),
                };
                if json {
                    println!("{}", serde_json::json!({ "satisfiable": sat }));
                } else {
                    println!("{}", if sat { "satisfiable" } else { "unsatisfiable" });
                }
                if let (Some(path), Some(m)) = (&witness, &model) {
                    if let Err(code) = write_file(path, &model_to_json(m)) {
                        return code;
                    }
                }
                if sat {
                    EXIT_TRUE
                } else {
                    EXIT_FALSE
                }
            } else {
                // validity; a countermodel witnesses failure
                let (sat_negation, counter) = match decide_satisfiable(&f.clone().not(), &limits) {
                    Ok(r) => r,
                    Err(e) => return decision_exit(&e),
                };
                let valid = !sat_negation;
                if json {
                    println!("{}", serde_json::json!({ "valid": valid }));
                } else {
                    println!("{}", if valid { "valid" } else { "not valid" });
                }
                if let (Some(path), Some(m)) = (&witness, &counter) {
                    if let Err(code) = write_file(path, &model_to_json(m)) {
                        return code;
                    }
                }
                if valid {
                    EXIT_TRUE
                } else {
                    EXIT_FALSE
                }
            }
        }

        Command::Check { proof } => {
            let text = match read(&proof) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let script = match load_proof(&text) {
                Ok(s) => s,
                Err(e) => return fail_input(e),
            };
            let verdict = check_proof(&script, config.r3_bound, &config.decision_limits());
            if json {
                let value = match &verdict {
                    Verdict::Accepted => serde_json::json!({ "verdict": "accepted" }),
                    Verdict::AcceptedApproximate(bound) => {
                        serde_json::json!({ "verdict": "acceptedApproximate", "bound": bound })
                    }
                    Verdict::Rejected { line, reason } => {
                        serde_json::json!({ "verdict": "rejected", "line": line, "reason": reason })
                    }
                };
                println!("{value}");
            } else {
                match &verdict {
                    Verdict::Accepted => println!("accepted"),
                    Verdict::AcceptedApproximate(bound) => {
                        println!("accepted (R3 checked up to k = {bound})")
                    }
                    Verdict::Rejected { line, reason } => {
                        println!("rejected at line {line}: {reason}")
                    }
                }
            }
            if verdict.is_accepted() {
                EXIT_TRUE
            } else {
                EXIT_FALSE
            }
        }

        Command::DemoAnne => {
            let report = run_demo();
            if json {
                println!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            if report.ok {
                EXIT_TRUE
            } else {
                EXIT_FALSE
            }
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
