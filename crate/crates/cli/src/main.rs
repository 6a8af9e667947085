//! `contmodel`: parse, evaluate and classify formulas, build products and
//! threshold structures, and run the preservation harness.
//!
//! Exit status is 0 on success, 1 when a violation or counterexample is
//! found, and 2 on any usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use contmodel::classes::{classify_cont, classify_horn, fo_to_cont};
use contmodel::downup::{structure_down, structure_up, Grid};
use contmodel::harness::{
    check_preservation, evaluate_instance, run_suite, search_counterexample, vocabulary_of,
    InstanceSpec, SuiteOptions, Verdict, SUITES,
};
use contmodel::logic::{parse_cont_inferring, parse_fo_inferring};
use contmodel::products::{
    fo_reduced_product, pre_reduced_product, reduced_product, FilterSpec, IndexedFamily,
    DEFAULT_MAX_PRODUCT_SIZE,
};
use contmodel::structures::{eval_fo, read_structure, write_structure};
use contmodel::{
    eval_formula, parse_cont_formula, parse_fo_formula, Assignment, ContFormula, FOFormula,
    Structure, Value, Vocabulary,
};

#[derive(Parser)]
#[command(
    name = "contmodel",
    version,
    about = "Exact continuous model theory over finite structures"
)]
struct Cli {
    /// Master seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial count; each suite has its own default.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Grid exponent k: thresholds and generated values lie on j/2^k.
    #[arg(long, global = true)]
    grid: Option<u32>,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PRODUCT_SIZE)]
    max_product_size: usize,
    /// Output file: the structure for `down`, `up` and `product`, the JSON
    /// report otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Logic {
    Cont,
    Fo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Pre,
    Reduced,
    Fo,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it back with its normal form.
    Parse {
        /// Formula text, or a file holding it.
        formula: String,
        #[arg(long, value_enum, default_value_t = Logic::Cont)]
        logic: Logic,
        /// Declarations such as "predicate P 1; function F 1; constant c".
        /// Inferred from the formula when omitted.
        #[arg(long)]
        vocab: Option<String>,
    },
    /// Evaluate a formula in a structure.
    Eval {
        formula: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Logic::Cont)]
        logic: Logic,
        /// Free variable values, as x=0,y=2.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Report the syntactic classes a formula belongs to.
    Classify {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Logic::Cont)]
        logic: Logic,
        #[arg(long)]
        vocab: Option<String>,
    },
    /// Translate a first-order formula to its continuous counterpart.
    Translate {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        vocab: Option<String>,
    },
    /// Threshold structure of a reduced general structure.
    Down {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// General structure of an increasing threshold structure.
    Up {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Product of the given factors modulo a filter on their indices.
    Product {
        /// `full`, `kernel=0,2` or `subbasis={0,1};{1,2}`, indices from 0.
        #[arg(long, default_value = "full")]
        filter: String,
        #[arg(long, value_enum, default_value_t = Kind::Reduced)]
        kind: Kind,
        /// Factor files, in index order.
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
    },
    /// Check preservation for one family, filter and sentence.
    Check {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "full")]
        filter: String,
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// A single threshold; all grid points and factor values when omitted.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Search seeded families for a preservation counterexample.
    Search {
        #[arg(long)]
        formula: String,
        /// Inclusive universe size bounds, as 1..3.
        #[arg(long, default_value = "1..3")]
        universe: String,
        /// Inclusive index set size bounds.
        #[arg(long, default_value = "1..3")]
        index_set: String,
        /// A fixed filter; random per trial when omitted.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Run a named property suite, or `all`.
    Suite { name: String },
}

/// A command's result: its report and whether a violation was found.
struct Outcome {
    text: String,
    json: Json,
    violation: bool,
}

impl Outcome {
    fn ok(text: String, json: Json) -> Self {
        Outcome {
            text,
            json,
            violation: false,
        }
    }
}

fn read_text(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
    } else {
        Ok(arg.to_string())
    }
}

/// `predicate P 1; function F 1; constant c`, also accepting newlines.
fn parse_vocab(spec: &str) -> Result<Vocabulary> {
    let mut v = Vocabulary::new();
    for decl in spec
        .split([';', '\n'])
        .map(str::trim)
        .filter(|d| !d.is_empty())
    {
        let words: Vec<&str> = decl.split_whitespace().collect();
        let r = match words.as_slice() {
            ["predicate", name, arity] => {
                v.add_predicate(name, arity.parse().context("bad arity")?)
            }
            ["function", name, arity] => v.add_function(name, arity.parse().context("bad arity")?),
            ["constant", name] => v.add_constant(name),
            _ => bail!("bad declaration `{decl}`"),
        };
        r.map_err(|e| anyhow!("{e}"))?;
    }
    Ok(v)
}

fn cont_formula(text: &str, vocab: Option<&str>) -> Result<ContFormula> {
    let text = read_text(text)?;
    Ok(match vocab {
        Some(v) => parse_cont_formula(&text, &parse_vocab(v)?)?,
        None => parse_cont_inferring(&text)?.0,
    })
}

fn fo_formula(text: &str, vocab: Option<&str>) -> Result<FOFormula> {
    let text = read_text(text)?;
    Ok(match vocab {
        Some(v) => parse_fo_formula(&text, &parse_vocab(v)?)?,
        None => parse_fo_inferring(&text)?.0,
    })
}

fn parse_assignment(s: &str) -> Result<Assignment> {
    let mut a = Assignment::new();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, e) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("expected x=n, got `{pair}`"))?;
        a.insert(
            x.trim(),
            e.trim()
                .parse()
                .with_context(|| format!("bad element in `{pair}`"))?,
        );
    }
    Ok(a)
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (
            lo.trim().parse()?,
            hi.trim_start_matches('=').trim().parse()?,
        ),
        None => {
            let n = s.trim().parse()?;
            (n, n)
        }
    };
    Ok((lo, hi))
}

fn grid(cli: &Cli) -> Result<Grid> {
    Ok(Grid::new(cli.grid.unwrap_or(Grid::DEFAULT_BITS))?)
}

fn read_general(p: &Path) -> Result<Structure<Value>> {
    Ok(read_structure::<Value>(p)?)
}

fn read_fo(p: &Path) -> Result<Structure<bool>> {
    Ok(read_structure::<bool>(p)?)
}

fn filter_spec(s: &str) -> Result<FilterSpec> {
    s.parse::<FilterSpec>().map_err(|e| anyhow!("{e}"))
}

/// Writes a structure to `--out` or returns it as the text output.
fn emit_structure(cli: &Cli, text: String, extra: Json) -> Result<Outcome> {
    if let Some(path) = &cli.out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut json = extra;
    json["structure"] = Json::String(text.clone());
    Ok(Outcome::ok(text, json))
}

fn values(vs: &[Value]) -> Vec<String> {
    vs.iter().map(Value::to_string).collect()
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Parse {
            formula,
            logic,
            vocab,
        } => {
            let (shown, normal, free) = match logic {
                Logic::Cont => {
                    let f = cont_formula(formula, vocab.as_deref())?;
                    (f.to_string(), f.normalize().to_string(), f.free_vars())
                }
                Logic::Fo => {
                    let f = fo_formula(formula, vocab.as_deref())?;
                    (f.to_string(), f.normalize().to_string(), f.free_vars())
                }
            };
            let text = format!("{shown}\nnormal form: {normal}\nfree variables: {free:?}");
            Ok(Outcome::ok(
                text,
                json!({ "formula": shown, "normal_form": normal, "free_variables": free }),
            ))
        }
        Command::Eval {
            formula,
            input,
            logic,
            assign,
        } => {
            let a = parse_assignment(assign)?;
            let value = match logic {
                Logic::Cont => {
                    let m = read_general(input)?;
                    let f = parse_cont_formula(&read_text(formula)?, m.vocabulary())?;
                    eval_formula(&m, &f, &a)?.to_string()
                }
                Logic::Fo => {
                    let k = read_fo(input)?;
                    let f = parse_fo_formula(&read_text(formula)?, k.vocabulary())?;
                    eval_fo(&k, &f, &a)?.to_string()
                }
            };
            Ok(Outcome::ok(value.clone(), json!({ "value": value })))
        }
        Command::Classify {
            formula,
            logic,
            vocab,
        } => {
            let report = match logic {
                Logic::Cont => classify_cont(&cont_formula(formula, vocab.as_deref())?),
                Logic::Fo => classify_horn(&fo_formula(formula, vocab.as_deref())?),
            };
            let json = serde_json::to_value(&report)?;
            let text = report.holding().join("\n");
            Ok(Outcome::ok(
                if text.is_empty() {
                    "(no classes)".into()
                } else {
                    text
                },
                json,
            ))
        }
        Command::Translate { formula, vocab } => {
            let f = fo_formula(formula, vocab.as_deref())?;
            let c = fo_to_cont(&f)?;
            let conditional = classify_cont(&c).is("conditional");
            Ok(Outcome::ok(
                c.to_string(),
                json!({ "formula": c.to_string(), "conditional": conditional }),
            ))
        }
        Command::Down { input } => {
            let g = grid(cli)?;
            let k = structure_down(&read_general(input)?, g)?;
            emit_structure(cli, write_structure(&k), json!({ "grid": g.bits() }))
        }
        Command::Up { input } => {
            let g = grid(cli)?;
            let m = structure_up(&read_fo(input)?, g)?;
            emit_structure(cli, write_structure(&m), json!({ "grid": g.bits() }))
        }
        Command::Product {
            filter,
            kind,
            inputs,
        } => {
            let f = filter_spec(filter)?.resolve(inputs.len())?;
            let cap = cli.max_product_size;
            let (text, classes) = match kind {
                Kind::Fo => {
                    let fam = IndexedFamily::new(
                        inputs.iter().map(|p| read_fo(p)).collect::<Result<_>>()?,
                    )?;
                    let (k, q) = fo_reduced_product(&fam, &f, cap)?;
                    (write_structure(&k), Some(q.map().to_vec()))
                }
                Kind::Pre | Kind::Reduced => {
                    let fam = IndexedFamily::new(
                        inputs
                            .iter()
                            .map(|p| read_general(p))
                            .collect::<Result<_>>()?,
                    )?;
                    if *kind == Kind::Pre {
                        (write_structure(&pre_reduced_product(&fam, &f, cap)?), None)
                    } else {
                        let (m, q) = reduced_product(&fam, &f, cap)?;
                        (write_structure(&m), Some(q.map().to_vec()))
                    }
                }
            };
            emit_structure(
                cli,
                text,
                json!({ "kernel": f.kernel(), "class_of": classes }),
            )
        }
        Command::Check {
            formula,
            filter,
            inputs,
            epsilon,
        } => {
            let fam = IndexedFamily::new(
                inputs
                    .iter()
                    .map(|p| read_general(p))
                    .collect::<Result<_>>()?,
            )?;
            let phi = parse_cont_formula(&read_text(formula)?, fam.vocabulary())?;
            let f = filter_spec(filter)?.resolve(fam.len())?;
            let cap = cli.max_product_size;
            let (verdict, eps, factor_values, product) = match epsilon {
                Some(e) => {
                    let e: Value = e
                        .parse()
                        .map_err(|err| anyhow!("bad epsilon `{e}`: {err}"))?;
                    let rec = check_preservation(&fam, &f, &phi, e, cap)?;
                    (rec.verdict, Some(e), rec.factor_values, rec.product_value)
                }
                None => {
                    let ev = evaluate_instance(&fam, &f, &phi, cap)?;
                    let (verdict, eps) = ev.judge(&ev.epsilons(&grid(cli)?.values()));
                    (verdict, eps, ev.factor_values, ev.product_value)
                }
            };
            let eps_s = eps.map(|e| e.to_string());
            let text = format!(
                "factor values: {}\nproduct value: {product}\nkernel: {:?}\nverdict: {}{}",
                values(&factor_values).join(", "),
                f.kernel(),
                verdict_name(verdict),
                eps_s
                    .as_deref()
                    .map(|e| format!(" at epsilon {e}"))
                    .unwrap_or_default()
            );
            Ok(Outcome {
                text,
                json: json!({
                    "factor_values": values(&factor_values),
                    "product_value": product.to_string(),
                    "kernel": f.kernel(),
                    "epsilon": eps_s,
                    "verdict": verdict,
                }),
                violation: verdict == Verdict::Violated,
            })
        }
        Command::Search {
            formula,
            universe,
            index_set,
            filter,
        } => {
            let phi = cont_formula(formula, None)?;
            let budget = InstanceSpec {
                predicate_arities: vocabulary_of(&phi)?
                    .predicates()
                    .iter()
                    .map(|s| s.arity)
                    .collect(),
                universe: parse_range(universe)?,
                index_set: parse_range(index_set)?,
                filter: filter.as_deref().map(filter_spec).transpose()?,
                grid_bits: cli.grid.unwrap_or(Grid::DEFAULT_BITS),
                seed: cli.seed,
                trials: cli.trials.unwrap_or(1000),
                max_product_size: cli.max_product_size,
                ..Default::default()
            };
            let witness = search_counterexample(&phi, &budget)?;
            let text = match &witness {
                Some(w) => format!(
                    "counterexample at trial {} (seed {}): kernel {:?}, epsilon {}, factor values {}, product value {}\n{}",
                    w.trial,
                    w.seed,
                    w.kernel,
                    w.epsilon,
                    values(&w.factor_values).join(", "),
                    w.product_value,
                    w.factors.iter().enumerate().map(|(i, s)| format!("# factor {i}\n{s}")).collect::<String>()
                ),
                None => format!("no counterexample in {} trials", budget.trials),
            };
            Ok(Outcome {
                text,
                json: json!({ "trials": budget.trials, "seed": budget.seed, "witness": witness }),
                violation: witness.is_some(),
            })
        }
        Command::Suite { name } => {
            let opts = SuiteOptions {
                seed: cli.seed,
                trials: cli.trials,
                grid_bits: cli.grid,
                max_product_size: cli.max_product_size,
            };
            let names: Vec<&str> = if name == "all" {
                SUITES.to_vec()
            } else {
                vec![name.as_str()]
            };
            let mut reports = Vec::new();
            let mut lines = Vec::new();
            for n in names {
                let r = run_suite(n, &opts)?;
                lines.push(format!(
                    "{:<26} {}  {} checks, {} failures",
                    r.suite,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.checks,
                    r.failures.len()
                ));
                for f in r.failures.iter().take(5) {
                    lines.push(format!("  trial {} seed {}: {}", f.trial, f.seed, f.detail));
                }
                reports.push(r);
            }
            let violation = reports.iter().any(|r| !r.passed());
            let json = if reports.len() == 1 {
                serde_json::to_value(&reports[0])?
            } else {
                serde_json::to_value(&reports)?
            };
            Ok(Outcome {
                text: lines.join("\n"),
                json,
                violation,
            })
        }
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Preserved => "preserved",
        Verdict::Vacuous => "vacuous",
        Verdict::Violated => "violated",
    }
}

fn writes_structure(c: &Command) -> bool {
    matches!(
        c,
        Command::Down { .. } | Command::Up { .. } | Command::Product { .. }
    )
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let json_text = serde_json::to_string_pretty(&outcome.json).expect("reports serialize");
    if let Some(path) = cli.out.as_ref().filter(|_| !writes_structure(&cli.command)) {
        if let Err(e) = std::fs::write(path, format!("{json_text}\n")) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match cli.format {
        Format::Json => println!("{json_text}"),
        Format::Text if writes_structure(&cli.command) && cli.out.is_some() => {}
        Format::Text => println!("{}", outcome.text.trim_end()),
    }
    ExitCode::from(u8::from(outcome.violation))
}
