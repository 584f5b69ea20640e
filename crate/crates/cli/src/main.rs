//! `tcale`: reproducible, JSON-emitting front end for `tcale-core`.
//!
//! Exit codes: 0 success, 1 a result violated its expected invariant,
//! 2 bad arguments.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use tcale_core::election::{real_amplitudes, run_trials};
use tcale_core::majorana::{self, DEFAULT_POINT_TOL};
use tcale_core::slocc::{self, IloSearchConfig};
use tcale_core::statekit::{self, PureState, StateFile};

#[derive(Debug, Parser)]
#[command(name = "tcale", version, about = "W̃ states, Majorana/SLOCC checks and anonymous leader election")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a named state as `{"n", "amps"}`.
    State {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = StateKind::Wtilde)]
        source: StateKind,
        #[arg(long, default_value_t = 0.5)]
        alpha2: f64,
    },
    /// Check the closed-form overlaps of the Φ_n permutation sum.
    Lemma1 {
        #[command(flatten)]
        common: Common,
    },
    /// Extract Majorana points and their degeneracy configuration.
    Degeneracy {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = StateKind::Wtilde)]
        source: StateKind,
        #[arg(long, default_value_t = 0.5)]
        alpha2: f64,
        #[arg(long, default_value_t = DEFAULT_POINT_TOL)]
        tol: f64,
        /// Read the state from a `{"n", "amps"}` file instead of `--source`.
        #[arg(long)]
        state_file: Option<PathBuf>,
    },
    /// Compare degeneracy configurations of two states.
    SloccVerdict {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = StateKind::W)]
        source: StateKind,
        #[arg(long, value_enum, default_value_t = StateKind::Wtilde)]
        target: StateKind,
        #[arg(long, default_value_t = 0.5)]
        alpha2: f64,
        #[arg(long, default_value_t = DEFAULT_POINT_TOL)]
        tol: f64,
    },
    /// Apply the built-in M_3 / M_4 to GHZ_n and compare with W̃_n.
    IloVerify {
        #[command(flatten)]
        common: Common,
    },
    /// Randomized search for a symmetric invertible local operator.
    IloSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = StateKind::Ghz)]
        source: StateKind,
        #[arg(long, value_enum, default_value_t = StateKind::Wtilde)]
        target: StateKind,
        #[arg(long, default_value_t = 0.5)]
        alpha2: f64,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 4000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Search one operator per party instead of a shared one.
        #[arg(long)]
        per_party: bool,
    },
    /// Run seeded leader-election trials.
    Elect {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        alpha2: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    n: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StateKind {
    Ghz,
    W,
    Wbar,
    Wtilde,
}

impl StateKind {
    fn build(self, n: usize, alpha2: f64) -> tcale_core::Result<PureState> {
        match self {
            StateKind::Ghz => statekit::ghz_state(n),
            StateKind::W => statekit::w_state(n),
            StateKind::Wbar => statekit::wbar_state(n),
            StateKind::Wtilde => {
                let (a, b) = real_amplitudes(alpha2);
                statekit::wtilde_state(n, a, b)
            }
        }
    }

    fn min_qubits(self) -> usize {
        if self == StateKind::Ghz {
            2
        } else {
            3
        }
    }
}

enum Failure {
    Usage(String),
    Invariant(String),
    Io(anyhow::Error),
}

impl From<tcale_core::Error> for Failure {
    fn from(e: tcale_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_n(n: usize, min: usize, max: usize) -> Outcome {
    if n < min || n > max {
        return Err(usage(format!("--n {n} outside {min}..={max}")));
    }
    Ok(())
}

fn check_alpha2(alpha2: f64) -> Outcome {
    if !(0.0..=1.0).contains(&alpha2) {
        return Err(usage(format!("--alpha2 {alpha2} outside [0, 1]")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Outcome {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(usage(format!("--tol {tol} outside (0, 1)")));
    }
    Ok(())
}

/// Serialize `body` and prepend the invocation parameters.
fn with_params(command: &str, params: Value, body: impl Serialize) -> anyhow::Result<Value> {
    let mut out = Map::new();
    out.insert("command".into(), Value::from(command));
    out.insert("params".into(), params);
    match serde_json::to_value(body)? {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("result".into(), other);
        }
    }
    Ok(Value::Object(out))
}

fn emit(doc: &Value, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::State { common, source, alpha2 } => {
            check_n(common.n, source.min_qubits(), statekit::MAX_QUBITS)?;
            check_alpha2(alpha2)?;
            let state = source.build(common.n, alpha2)?;
            let doc = with_params(
                "state",
                json!({"n": common.n, "source": source, "alpha2": alpha2}),
                state.to_file(),
            )?;
            emit(&doc, common.out.as_ref())?;
            eprintln!("{:?} state on {} qubits", source, common.n);
            Ok(())
        }
        Command::Lemma1 { common } => {
            check_n(common.n, 3, majorana::MAX_PERMUTATION_SUM)?;
            let report = majorana::verify_lemma1(common.n)?;
            let ok = report.holds(1e-9 * report.per_weight[1].closed_form.norm().max(1.0), 1e-10);
            emit(&with_params("lemma1", json!({"n": common.n}), &report)?, common.out.as_ref())?;
            eprintln!(
                "n={}: max overlap error {:.3e}, fidelity to W~ {:.15}",
                report.n, report.max_abs_err_all_basis, report.fidelity_to_wtilde
            );
            if ok {
                Ok(())
            } else {
                Err(Failure::Invariant("closed form does not match the permutation sum".into()))
            }
        }
        Command::Degeneracy { common, source, alpha2, tol, state_file } => {
            check_alpha2(alpha2)?;
            check_tol(tol)?;
            let state = match &state_file {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let file: StateFile =
                        serde_json::from_str(&text).map_err(|e| usage(format!("bad state file: {e}")))?;
                    let state = file.into_state()?;
                    if state.n_qubits() != common.n {
                        return Err(usage(format!("state file has {} qubits, --n is {}", state.n_qubits(), common.n)));
                    }
                    state
                }
                None => source.build(common.n, alpha2)?,
            };
            check_n(state.n_qubits(), 3, majorana::MAX_EXTRACT)?;
            let points = majorana::majorana_extract(&state, tol)?;
            let config = majorana::degeneracy_config(&points, tol);
            let reconstruction_fidelity = statekit::fidelity(&majorana::majorana_state(&points)?, &state)?;
            let params = json!({
                "n": common.n,
                "source": if state_file.is_some() { Value::from("file") } else { json!(source) },
                "alpha2": alpha2,
                "tol": tol,
            });
            let body = json!({
                "config": config,
                "points": points,
                "reconstruction_fidelity": reconstruction_fidelity,
            });
            emit(&with_params("degeneracy", params, body)?, common.out.as_ref())?;
            eprintln!("degeneracy configuration {config}");
            Ok(())
        }
        Command::SloccVerdict { common, source, target, alpha2, tol } => {
            check_n(common.n, 3, majorana::MAX_EXTRACT)?;
            check_alpha2(alpha2)?;
            check_tol(tol)?;
            let a = source.build(common.n, alpha2)?;
            let b = target.build(common.n, alpha2)?;
            let verdict = slocc::degeneracy_verdict(&a, &b, tol)?;
            let params = json!({"n": common.n, "source": source, "target": target, "alpha2": alpha2, "tol": tol});
            emit(&with_params("slocc-verdict", params, &verdict)?, common.out.as_ref())?;
            eprintln!(
                "{} vs {}: {}",
                verdict.config_a,
                verdict.config_b,
                if verdict.inequivalent_proven { "SLOCC inequivalent" } else { "inconclusive" }
            );
            Ok(())
        }
        Command::IloVerify { common } => {
            let Some(op) = slocc::builtin_for(common.n) else {
                return Err(usage(format!("no built-in operator for --n {} (only 3 and 4)", common.n)));
            };
            let image = slocc::apply_symmetric_ilo(&op, &statekit::ghz_state(common.n)?)?;
            let fidelity = statekit::fidelity(&image, &statekit::wtilde_equal(common.n)?)?;
            let unitarity_error = op.unitarity_error();
            let ok = fidelity >= 1.0 - 1e-9 && (common.n != 4 || unitarity_error <= 1e-12);
            let body = json!({
                "operator": op,
                "determinant_abs": op.det().norm(),
                "unitarity_error": unitarity_error,
                "fidelity": fidelity,
                "holds": ok,
            });
            emit(&with_params("ilo-verify", json!({"n": common.n}), body)?, common.out.as_ref())?;
            eprintln!("M_{} GHZ -> W~ fidelity {fidelity:.15}", common.n);
            if ok {
                Ok(())
            } else {
                Err(Failure::Invariant("built-in operator does not reach W~".into()))
            }
        }
        Command::IloSearch { common, source, target, alpha2, restarts, iters, seed, per_party } => {
            check_n(common.n, 3, majorana::MAX_PERMUTATION_SUM)?;
            check_alpha2(alpha2)?;
            if restarts == 0 {
                return Err(usage("--restarts must be at least 1"));
            }
            let a = source.build(common.n, alpha2)?;
            let b = target.build(common.n, alpha2)?;
            let config = IloSearchConfig { restarts, iters, seed, ..Default::default() };
            let params = json!({
                "n": common.n, "source": source, "target": target, "alpha2": alpha2,
                "restarts": restarts, "iters": iters, "seed": seed, "per_party": per_party,
                "success_threshold": config.success_threshold,
            });
            let (doc, found, best) = if per_party {
                let r = slocc::search_per_party_ilo(&a, &b, &config)?;
                (with_params("ilo-search", params, &r)?, r.found, r.best_infidelity)
            } else {
                let r = slocc::search_symmetric_ilo(&a, &b, &config)?;
                (with_params("ilo-search", params, &r)?, r.found, r.best_infidelity)
            };
            emit(&doc, common.out.as_ref())?;
            if found {
                eprintln!("found an ILO: infidelity {best:.3e}");
            } else {
                eprintln!("no ILO found within budget: best infidelity {best:.3e}");
            }
            Ok(())
        }
        Command::Elect { common, alpha2, trials, seed } => {
            check_n(common.n, 3, statekit::MAX_QUBITS)?;
            check_alpha2(alpha2)?;
            if trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            let (a, b) = real_amplitudes(alpha2);
            let stats = run_trials(common.n, a, b, trials, seed)?;
            let chi = stats.chi_square_uniformity();
            let mut doc = with_params(
                "elect",
                json!({"n": common.n, "alpha2": alpha2, "trials": trials, "seed": seed}),
                &stats,
            )?;
            doc["chi_square"] = serde_json::to_value(chi).context("chi-square")?;
            emit(&doc, common.out.as_ref())?;
            eprintln!(
                "{} trials, {} failures, leader measured 1 in {:.4} of trials, chi2 p={:.4}",
                stats.trials, stats.failures, stats.leader_bit_one_frac, chi.p_value
            );
            if stats.failures == 0 {
                Ok(())
            } else {
                Err(Failure::Invariant(format!("{} trials without a unique leader", stats.failures)))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

