//! Command-line surface. Every subcommand reads one JSON document, validates
//! it, and writes JSON to standard output.
//!
//! Exit codes: 0 success, 2 invalid input, 3 inconclusive or budget
//! exceeded, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::capacity;
use crate::channels::Channel;
use crate::doc::{self, Document, Kind, Payload};
use crate::error::{Error, Result};
use crate::linalg::{tol, PureState};
use crate::reductions::{self, Budgets, ReductionKind, SourceInstance, Verdict, VerifyRequest};
use crate::zero_error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "qcap", version, about = "Zero-error and Holevo capacity laboratory")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Input document.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Independence number of a graph (exact up to the cap).
    GraphAlpha {
        #[command(flatten)]
        input: Input,
        /// Greedy lower bound instead of the exact solver.
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = zero_error::EXACT_CAP)]
        cap: usize,
    },
    /// alpha(G^t)^(1/t) for t = 1..=max-power.
    GraphCapacity {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        max_power: usize,
    },
    /// Confusability graph of a classical channel (emits a graph document).
    Confusability {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
    },
    /// Search for k pure inputs with orthogonal outputs.
    AlphaQuantum {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual at or below which the certificate passes.
        #[arg(long, default_value_t = tol::SPECTRAL)]
        tol: f64,
    },
    /// Clique score of a witness, or the best score found by search.
    CliqueScore {
        #[command(flatten)]
        input: Input,
        /// JSON array of pure states, one per slot.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimum output entropy.
    MinEntropy {
        #[command(flatten)]
        input: Input,
        /// Use the sampling oracle instead of multistart descent.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = capacity::ORACLE_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = capacity::ASCENT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Holevo quantity lower bound.
    Holevo {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        oracle: bool,
        /// Ensemble size; 0 means dim^2.
        #[arg(long, default_value_t = 0)]
        ensemble_size: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Classical capacity of a classical channel.
    ArimotoBlahut {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
    },
    /// Build the target instance of a reduction.
    Reduce {
        #[command(subcommand)]
        which: Reduce,
    },
    /// Run source oracle and target estimator and classify the instance.
    Verify(VerifyArgs),
    /// CPTP check through the Choi matrix.
    ValidateChannel {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand, Debug)]
enum Reduce {
    /// Local Hamiltonian to clique instance.
    Ham2clique {
        #[command(flatten)]
        input: Input,
    },
    /// Quantum 4-SAT to clique instance.
    Qsat2clique {
        #[command(flatten)]
        input: Input,
    },
    /// 2-out-of-4-SAT to a channel whose minimum entropy is 2 iff satisfiable.
    Sat24entropy {
        #[command(flatten)]
        input: Input,
        /// Use the entanglement-breaking trace part with this noise parameter.
        #[arg(long)]
        eb_epsilon: Option<f64>,
    },
    /// Covariant lift and the Holevo identity check.
    LiftHolevo {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, required_unless_present = "replay")]
    reduction: Option<ReductionArg>,
    #[arg(long = "in", required_unless_present = "replay")]
    input: Option<PathBuf>,
    #[arg(long, required_unless_present = "replay")]
    seed: Option<u64>,
    #[arg(long, default_value_t = capacity::ORACLE_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Re-run a saved report with its embedded instance, seed and budgets.
    #[arg(long, conflicts_with_all = ["reduction", "input", "seed"])]
    replay: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum ReductionArg {
    Ham2clique,
    Qsat2clique,
    Sat24entropy,
    LiftHolevo,
}

impl From<ReductionArg> for ReductionKind {
    fn from(r: ReductionArg) -> Self {
        match r {
            ReductionArg::Ham2clique => ReductionKind::Ham2clique,
            ReductionArg::Qsat2clique => ReductionKind::Qsat2clique,
            ReductionArg::Sat24entropy => ReductionKind::Sat24entropy,
            ReductionArg::LiftHolevo => ReductionKind::LiftHolevo,
        }
    }
}

/// Result of one invocation before it is written out.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn json<T: Serialize + ?Sized>(x: &T) -> Result<Self> {
        Ok(Output { text: doc::canonical_json(x)?, code: EXIT_OK })
    }

    fn doc(payload: Payload) -> Result<Self> {
        Ok(Output { text: Document::new(payload)?.to_canonical_string()?, code: EXIT_OK })
    }

    fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }
}

fn wrong_kind<T>(expected: &[Kind], got: Kind) -> Result<T> {
    let names: Vec<&str> = expected.iter().map(|k| k.name()).collect();
    Err(Error::Schema { path: "kind".into(), message: format!("expected {}, got {}", names.join(" or "), got.name()) })
}

fn load_graph(input: &Input) -> Result<zero_error::Graph> {
    match doc::load(&input.input)?.payload {
        Payload::Graph(g) => Ok(g),
        other => wrong_kind(&[Kind::Graph], other.kind()),
    }
}

fn load_classical(input: &Input) -> Result<zero_error::ClassicalChannel> {
    match doc::load(&input.input)?.payload {
        Payload::ClassicalChannel(c) => Ok(c),
        other => wrong_kind(&[Kind::ClassicalChannel], other.kind()),
    }
}

fn load_channel(input: &Input) -> Result<Channel> {
    match doc::load(&input.input)?.payload {
        Payload::Channel(c) => Ok(c),
        other => wrong_kind(&[Kind::Channel], other.kind()),
    }
}

fn load_source(path: &PathBuf, reduction: ReductionKind) -> Result<SourceInstance> {
    let payload = doc::load(path)?.payload;
    match (reduction, payload) {
        (ReductionKind::Ham2clique, Payload::Localham(x)) => Ok(SourceInstance::Localham(x)),
        (ReductionKind::Qsat2clique, Payload::Qsat(x)) => Ok(SourceInstance::Qsat(x)),
        (ReductionKind::Sat24entropy, Payload::Sat24(x)) => Ok(SourceInstance::Sat24(x)),
        (ReductionKind::LiftHolevo, Payload::Channel(x)) => Ok(SourceInstance::Channel(x)),
        (r, other) => {
            let expected = match r {
                ReductionKind::Ham2clique => Kind::Localham,
                ReductionKind::Qsat2clique => Kind::Qsat,
                ReductionKind::Sat24entropy => Kind::Sat24,
                ReductionKind::LiftHolevo => Kind::Channel,
            };
            wrong_kind(&[expected], other.kind())
        }
    }
}

fn converged_code(converged: bool) -> i32 {
    if converged {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::GraphAlpha { input, heuristic, cap } => {
            let g = load_graph(&input)?;
            let ind = if heuristic {
                zero_error::independence_number_heuristic(&g)
            } else {
                zero_error::independence_number_capped(&g, cap)?
            };
            Output::json(&ind)
        }
        Command::GraphCapacity { input, max_power } => {
            let g = load_graph(&input)?;
            Output::json(&zero_error::shannon_capacity_lower_bound(&g, max_power)?)
        }
        Command::Confusability { input, threshold } => {
            let ch = load_classical(&input)?;
            Output::doc(Payload::Graph(zero_error::confusability_graph(&ch, threshold)))
        }
        Command::AlphaQuantum { input, k, restarts, seed, tol } => {
            let ch = load_channel(&input)?;
            let cert = zero_error::alpha_search(&ch, k, restarts, seed)?;
            let check = zero_error::alpha_certificate_check(&ch.to_kraus(), &cert, tol)?;
            let code = if check.pass { EXIT_OK } else { EXIT_INCONCLUSIVE };
            Ok(Output::json(&json!({ "certificate": cert, "check": check, "k": k, "seed": seed }))?.with_code(code))
        }
        Command::CliqueScore { input, witness, restarts, seed } => {
            let inst = match doc::load(&input.input)?.payload {
                Payload::Clique(c) => c,
                other => return wrong_kind(&[Kind::Clique], other.kind()),
            };
            let (score, states, source) = match witness {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let states: Vec<PureState> = serde_json::from_str(&text)
                        .map_err(|e| Error::Schema { path: "witness".into(), message: e.to_string() })?;
                    if states.len() != inst.k {
                        return Err(Error::Schema {
                            path: "witness".into(),
                            message: format!("{} states for k = {}", states.len(), inst.k),
                        });
                    }
                    let rhos: Vec<_> = states.iter().map(PureState::projector).collect();
                    (zero_error::clique_score(&inst.channel, &rhos)?, states, "witness")
                }
                None => {
                    let cert = zero_error::alpha_search(&inst.channel, inst.k, restarts, seed)?;
                    let rhos: Vec<_> = cert.states.iter().map(PureState::projector).collect();
                    (zero_error::clique_score(&inst.channel, &rhos)?, cert.states, "search")
                }
            };
            Output::json(&json!({
                "score": score,
                "a": inst.a,
                "b": inst.b,
                "k": inst.k,
                "at_most_a": score <= inst.a,
                "at_least_b": score >= inst.b,
                "source": source,
                "states": states,
            }))
        }
        Command::MinEntropy { input, oracle, samples, restarts, seed, tol } => {
            let ch = load_channel(&input)?;
            let res = if oracle {
                capacity::min_entropy_oracle(&ch, samples, seed)?
            } else {
                capacity::min_entropy_ascent(&ch, restarts, seed, tol)?
            };
            Ok(Output::json(&res)?.with_code(converged_code(res.converged)))
        }
        Command::Holevo { input, oracle, ensemble_size, samples, restarts, seed, tol } => {
            let ch = load_channel(&input)?;
            let res = if oracle {
                capacity::holevo_oracle(&ch, samples, seed)?
            } else {
                capacity::holevo_ascent(&ch, ensemble_size, restarts, seed, tol)?
            };
            Ok(Output::json(&res)?.with_code(converged_code(res.converged)))
        }
        Command::ArimotoBlahut { input, tol, max_iters } => {
            let ch = load_classical(&input)?;
            let res = capacity::arimoto_blahut(&ch, tol, max_iters)?;
            Ok(Output::json(&res)?.with_code(converged_code(res.converged)))
        }
        Command::Reduce { which } => reduce(which),
        Command::Verify(args) => verify(args),
        Command::ValidateChannel { input } => {
            let ch = load_channel(&input)?;
            let report = ch.validate_cptp()?;
            let code = if report.pass { EXIT_OK } else { EXIT_INVALID };
            Ok(Output::json(&report)?.with_code(code))
        }
    }
}

fn reduce(which: Reduce) -> Result<Output> {
    match which {
        Reduce::Ham2clique { input } => match doc::load(&input.input)?.payload {
            Payload::Localham(inst) => Output::doc(Payload::Clique(reductions::ham_to_clique(&inst)?)),
            other => wrong_kind(&[Kind::Localham], other.kind()),
        },
        Reduce::Qsat2clique { input } => match doc::load(&input.input)?.payload {
            Payload::Qsat(inst) => Output::doc(Payload::Clique(reductions::qsat_to_clique(&inst)?)),
            other => wrong_kind(&[Kind::Qsat], other.kind()),
        },
        Reduce::Sat24entropy { input, eb_epsilon } => match doc::load(&input.input)?.payload {
            Payload::Sat24(inst) => {
                let ch = match eb_epsilon {
                    Some(eps) => reductions::sat24_to_minentropy_eb(&inst, eps)?,
                    None => reductions::sat24_to_minentropy(&inst)?,
                };
                Output::doc(Payload::Channel(ch))
            }
            other => wrong_kind(&[Kind::Sat24], other.kind()),
        },
        Reduce::LiftHolevo { input, samples, seed } => {
            let ch = load_channel(&input)?;
            let cmp = reductions::minentropy_to_holevo(&ch, samples, seed)?;
            let code = if cmp.pass { EXIT_OK } else { EXIT_INCONCLUSIVE };
            Ok(Output::json(&cmp)?.with_code(code))
        }
    }
}

fn verify(args: VerifyArgs) -> Result<Output> {
    let (report, replayed_from) = match &args.replay {
        Some(path) => {
            let Payload::Report(old) = doc::load(path)?.payload else {
                return Err(Error::Schema { path: "kind".into(), message: "expected a report document".into() });
            };
            (reductions::replay(&old)?, Some(old))
        }
        None => {
            let reduction: ReductionKind = args.reduction.expect("required by clap").into();
            let instance = load_source(args.input.as_ref().expect("required by clap"), reduction)?;
            let req = VerifyRequest {
                reduction,
                instance,
                seed: args.seed.expect("required by clap"),
                budgets: Budgets { samples: args.samples, restarts: args.restarts },
            };
            (reductions::verify_gap(&req)?, None)
        }
    };
    let mut code = match report.verdict {
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    };
    if let Some(old) = replayed_from {
        if *old != report {
            code = EXIT_INCONCLUSIVE;
        }
    }
    Ok(Output::doc(Payload::Report(Box::new(report)))?.with_code(code))
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Capacity { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_INVALID,
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// JSON to `stdout` and diagnostics to `stderr`. Returns the exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => stdout.write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INVALID;
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
