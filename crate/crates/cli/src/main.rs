//! `rva`: saturation checks for weak deterministic Büchi automata.
//!
//! Exit codes: 0 when the property holds, 1 when it fails, 2 on usage or
//! format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rva_core::alphabet::EncodingKind;
use rva_core::automaton::Automaton;
use rva_core::check::{check, CheckMode};
use rva_core::encoding::Lasso;
use rva_core::format::{parse_automaton, serialize_automaton};
use rva_core::generate::{gen_known_rva, gen_random_weak, Family};
use rva_core::minimize::minimize_weak;
use rva_core::oracle::{
    expand_witness, sample_counterexample, saturation_oracle, value_of, verify_counterexample,
    Counterexample, OracleOutcome, Reading,
};
use rva_core::shape::{is_d_parallel, is_d_sequential};
use rva_core::word::{parse_lasso, to_indices};

#[derive(Parser)]
#[command(name = "rva", version, about = "Decide whether a weak deterministic Büchi automaton over digit alphabets recognizes a saturated set of real vectors")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Send missing transitions of input files to a fresh rejecting sink.
    #[arg(long, global = true)]
    complete_with_sink: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Parallel,
    Sequential,
    Dim1,
    Complement,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> CheckMode {
        match m {
            Mode::Parallel => CheckMode::Parallel,
            Mode::Sequential => CheckMode::Sequential,
            Mode::Dim1 => CheckMode::Dim1,
            Mode::Complement => CheckMode::Complement,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    Parallel,
    Sequential,
}

impl From<Encoding> for EncodingKind {
    fn from(e: Encoding) -> EncodingKind {
        match e {
            Encoding::Parallel => EncodingKind::Parallel,
            Encoding::Sequential => EncodingKind::Sequential,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report weakness, SCCs and the encoding shape.
    Classify { file: PathBuf },
    /// Decide saturation.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Minimize and print the classes of the original states.
    Minimize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the automaton on a lasso word `prefix / period`.
    Eval {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Read the word in b-complement when printing its value.
        #[arg(long)]
        complement: bool,
    },
    /// Generate a known saturated automaton, or a random weak one.
    Gen {
        /// A family name, or `random`.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        base: u32,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        encoding: Encoding,
        /// State count for `random`.
        #[arg(long, default_value_t = 6)]
        states: usize,
        /// Seed for `random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for counterexamples to saturation independently of the checks.
    Oracle {
        file: PathBuf,
        /// Longest counterexample (prefix plus period) considered; unbounded
        /// when absent.
        #[arg(long)]
        bound: Option<usize>,
        /// Also sample this seed's random encodings.
        #[arg(long)]
        seed: Option<u64>,
        /// Read encodings in b-complement.
        #[arg(long)]
        complement: bool,
    },
}

/// Property outcome of a command.
enum Outcome {
    Holds,
    Fails,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Holds) => ExitCode::from(0),
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, complete: bool) -> Result<Automaton> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_automaton(&text, complete).with_context(|| format!("{}", path.display()))
}

fn emit(json_mode: bool, value: Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn outcome(holds: bool) -> Outcome {
    if holds {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn counterexample_json(aut: &Automaton, cx: &Counterexample, reading: Reading) -> Value {
    let alphabet = aut.alphabet();
    let word = |w: &Lasso<usize>| {
        let letters = rva_core::word::lasso_from_indices(&w.prefix, &w.period, alphabet);
        let value = value_of(w, alphabet, reading).ok().map(|v| v.to_string());
        json!({"word": rva_core::word::format_lasso(&letters), "value": value})
    };
    match cx {
        Counterexample::BadShape { word: w } => json!({"kind": "bad-shape", "accepted": word(w)}),
        Counterexample::Pair { accepted, rejected } => {
            json!({"kind": "pair", "accepted": word(accepted), "rejected": word(rejected)})
        }
    }
}

fn counterexample_text(aut: &Automaton, cx: &Counterexample, reading: Reading) -> String {
    let mut s = cx.describe(aut.alphabet());
    if let Counterexample::Pair { accepted, .. } = cx {
        if let Ok(v) = value_of(accepted, aut.alphabet(), reading) {
            s.push_str(&format!("; both encode {v}"));
        }
    }
    s
}

fn run(cli: &Cli) -> Result<Outcome> {
    let complete = cli.complete_with_sink;
    match &cli.command {
        Command::Classify { file } => {
            let aut = load(file, complete)?;
            let sccs = aut.sccs();
            let weak = aut.is_weak();
            let shape = match aut.alphabet().encoding() {
                EncodingKind::Parallel => is_d_parallel(&aut),
                EncodingKind::Sequential => is_d_sequential(&aut),
            };
            let reason = shape.violation.as_ref().map(|v| serde_json::to_value(&v.reason).expect("serializable"));
            let alphabet = aut.alphabet();
            emit(
                cli.json,
                json!({
                    "states": aut.state_count(),
                    "letters": aut.letter_count(),
                    "base": alphabet.base(),
                    "dim": alphabet.dim(),
                    "encoding": alphabet.encoding(),
                    "sccs": sccs.component_count(),
                    "weak": weak,
                    "shape": shape.holds(),
                    "shape_violation": reason,
                }),
                || {
                    let mut s = format!(
                        "states: {}\nalphabet: base {}, dim {}, {} ({} letters)\nsccs: {}\nweak: {}\n{}-shaped: {}",
                        aut.state_count(),
                        alphabet.base(),
                        alphabet.dim(),
                        alphabet.encoding(),
                        aut.letter_count(),
                        sccs.component_count(),
                        if weak { "yes" } else { "no" },
                        alphabet.encoding(),
                        if shape.holds() { "yes" } else { "no" },
                    );
                    if let Some(v) = &shape.violation {
                        s.push_str(&format!(" (state {}: {:?})", v.state, v.reason));
                    }
                    s
                },
            );
            Ok(outcome(weak && shape.holds()))
        }
        Command::Check { file, mode } => {
            let aut = load(file, complete)?;
            let mode = CheckMode::from(*mode);
            let start = Instant::now();
            let verdict = check(&aut, mode)?;
            let time_ms = start.elapsed().as_secs_f64() * 1000.0;
            let reading = Reading::of_mode(mode);
            let cx = verdict.witness().and_then(|w| expand_witness(&aut, w));
            if let Some(cx) = &cx {
                if let Err(e) = verify_counterexample(&aut, reading, cx) {
                    bail!("internal error: witness did not re-verify: {e}");
                }
            }
            emit(
                cli.json,
                json!({
                    "answer": verdict.answer(),
                    "witness": verdict.witness(),
                    "counterexample": cx.as_ref().map(|c| counterexample_json(&aut, c, reading)),
                    "stats": {"states": aut.state_count(), "time_ms": time_ms},
                }),
                || match verdict.witness() {
                    None => "yes".to_string(),
                    Some(w) => {
                        let mut s = format!("no: {}", w.describe(aut.alphabet()));
                        if let Some(cx) = &cx {
                            s.push_str(&format!("\ncounterexample: {}", counterexample_text(&aut, cx, reading)));
                        }
                        s
                    }
                },
            );
            Ok(outcome(verdict.answer()))
        }
        Command::Minimize { file, output } => {
            let aut = load(file, complete)?;
            let morphism = minimize_weak(&aut)?;
            let classes = morphism.classes();
            if let Some(out) = output {
                fs::write(out, serialize_automaton(&morphism.target))
                    .with_context(|| format!("writing {}", out.display()))?;
            }
            emit(
                cli.json,
                json!({"states": morphism.target.state_count(), "classes": classes}),
                || {
                    let mut s = format!("states: {}", morphism.target.state_count());
                    for (i, class) in classes.iter().enumerate() {
                        let names: Vec<String> = class.iter().map(|q| format!("q{q}")).collect();
                        s.push_str(&format!("\n{i}: {{{}}}", names.join(", ")));
                    }
                    if output.is_none() {
                        s.push('\n');
                        s.push_str(serialize_automaton(&morphism.target).trim_end());
                    }
                    s
                },
            );
            Ok(Outcome::Holds)
        }
        Command::Eval { file, word, complement } => {
            let aut = load(file, complete)?;
            let lasso = parse_lasso(word)?;
            if lasso.period.is_empty() {
                bail!("the word needs a period: write `prefix / period`");
            }
            let alphabet = aut.alphabet();
            let indices = Lasso::new(to_indices(&lasso.prefix, alphabet)?, to_indices(&lasso.period, alphabet)?);
            let accepted = aut.accepts_lasso(&indices.prefix, &indices.period);
            let reading = if *complement { Reading::Complement } else { Reading::Unsigned };
            let value = value_of(&indices, alphabet, reading);
            emit(
                cli.json,
                json!({
                    "accepted": accepted,
                    "value": value.as_ref().ok().map(|v| v.to_string()),
                    "encoding_error": value.as_ref().err().map(|e| e.to_string()),
                }),
                || {
                    let v = match &value {
                        Ok(v) => v.to_string(),
                        Err(e) => format!("not an encoding ({e})"),
                    };
                    format!("{}\nvalue: {v}", if accepted { "accepted" } else { "rejected" })
                },
            );
            Ok(outcome(accepted))
        }
        Command::Gen {
            kind,
            base,
            dim,
            encoding,
            states,
            seed,
            output,
        } => {
            let encoding = EncodingKind::from(*encoding);
            let aut = if kind == "random" {
                if *states == 0 {
                    bail!("--states must be positive");
                }
                gen_random_weak(*states, *base, *dim, encoding, *seed)?
            } else {
                let family: Family = kind.parse().map_err(anyhow::Error::msg)?;
                gen_known_rva(family, *base, *dim, encoding)?
            };
            let text = serialize_automaton(&aut);
            match output {
                Some(out) => {
                    fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
                    emit(cli.json, json!({"states": aut.state_count(), "path": out}), || {
                        format!("wrote {} states to {}", aut.state_count(), out.display())
                    });
                }
                None if cli.json => emit(true, json!({"states": aut.state_count(), "automaton": text}), String::new),
                None => print!("{text}"),
            }
            Ok(Outcome::Holds)
        }
        Command::Oracle {
            file,
            bound,
            seed,
            complement,
        } => {
            let aut = load(file, complete)?;
            let reading = if *complement { Reading::Complement } else { Reading::Unsigned };
            let start = Instant::now();
            let mut result = saturation_oracle(&aut, reading, *bound)?;
            if let (Some(seed), OracleOutcome::NoneFound { .. }, Reading::Unsigned) = (seed, &result, reading) {
                let max_len = bound.unwrap_or(aut.state_count() + 2);
                if let Some(cx) = sample_counterexample(&aut, 2000, max_len, *seed) {
                    result = OracleOutcome::Counterexample { counterexample: cx };
                }
            }
            let time_ms = start.elapsed().as_secs_f64() * 1000.0;
            if let Some(cx) = result.counterexample() {
                if let Err(e) = verify_counterexample(&aut, reading, cx) {
                    bail!("internal error: counterexample did not re-verify: {e}");
                }
            }
            let answer = result.saturated();
            let exhaustive = matches!(result, OracleOutcome::NoneFound { exhaustive: true });
            emit(
                cli.json,
                json!({
                    "answer": answer,
                    "exhaustive": exhaustive,
                    "weak": !matches!(result, OracleOutcome::NotWeak),
                    "counterexample": result.counterexample().map(|c| counterexample_json(&aut, c, reading)),
                    "stats": {"states": aut.state_count(), "time_ms": time_ms},
                }),
                || match &result {
                    OracleOutcome::NotWeak => "no: the automaton is not weak".to_string(),
                    OracleOutcome::NoneFound { exhaustive: true } => "yes".to_string(),
                    OracleOutcome::NoneFound { exhaustive: false } => "yes (bounded)".to_string(),
                    OracleOutcome::Counterexample { counterexample } => {
                        format!("no: {}", counterexample_text(&aut, counterexample, reading))
                    }
                },
            );
            Ok(outcome(answer))
        }
    }
}
