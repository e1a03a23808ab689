mod params;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xcsp::fastpath::{classify, dispatch};
use xcsp::model::{build_template, Sentence, Structure};
use xcsp::oracle::{node_budget_from_env, Game, OracleError};
use xcsp::reduce::{verify_reduction, ReduceError, VerifyOptions};
use xcsp::textio::{
    parse_family_spec, parse_fragment_spec, parse_sentence, parse_structure, render_sentence,
    render_strategy, render_structure,
};

const YES: u8 = 0;
const NO: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

/// A failed command: the exit code and the message for stderr.
struct Failure(u8, String);

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Failure(USAGE, msg.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => Failure(BUDGET, e.to_string()),
            _ => Failure::usage(e),
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        Failure::usage(e)
    }
}

type CmdResult = Result<u8, Failure>;

#[derive(Parser)]
#[command(name = "xcsp", version, about = "Solver, classifier and reduction compiler for CSPs with counting quantifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Oracle,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sentence on a template. Exit 0 for yes, 1 for no.
    Solve {
        template: PathBuf,
        sentence: PathBuf,
        #[arg(long, value_enum, default_value = "oracle")]
        engine: Engine,
        /// Write a winning Prover strategy here when the answer is yes.
        #[arg(long)]
        strategy_out: Option<PathBuf>,
        /// Oracle node budget; defaults to CQ_NODE_BUDGET or 10^7.
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Print the complexity class of a fragment over a template family.
    Classify {
        /// e.g. `clique:5`, `cycle:6`, `hairy:6`.
        family: String,
        /// e.g. `X=1,2` or `prefix=2^3 1*`.
        #[arg(required = true, num_args = 1..)]
        fragment: Vec<String>,
    },
    /// Compile source sentences with a reduction rule.
    Reduce {
        /// Rule name, then `key=value` parameters, then sentence files.
        rule: String,
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Check a reduction rule against the oracle on random sources.
    ///
    /// Parameters: the rule's own, plus trials=N (default 50), seed=S
    /// (default 0), vars=V (default 3) and atoms=A (default 3).
    Verify {
        rule: String,
        args: Vec<String>,
        #[arg(long)]
        node_budget: Option<u64>,
        /// Break every compiled target, to check the checker.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Write a template in the structure format.
    Gen {
        family: String,
        /// Output file; stdout when omitted.
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { YES });
        }
    };
    let result = match cli.command {
        Command::Solve {
            template,
            sentence,
            engine,
            strategy_out,
            node_budget,
        } => solve(&template, &sentence, engine, strategy_out.as_deref(), node_budget),
        Command::Classify { family, fragment } => classify_cmd(&family, &fragment.join(" ")),
        Command::Reduce { rule, args, out_dir } => reduce(&rule, &args, &out_dir),
        Command::Verify {
            rule,
            args,
            node_budget,
            inject_fault,
        } => verify(&rule, &args, node_budget, inject_fault),
        Command::Gen { family, out } => gen(&family, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<Structure, Failure> {
    parse_structure(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_sentence(path: &Path) -> Result<Sentence, Failure> {
    parse_sentence(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn verdict(yes: bool) -> u8 {
    if yes {
        YES
    } else {
        NO
    }
}

fn solve(
    template: &Path,
    sentence: &Path,
    engine: Engine,
    strategy_out: Option<&Path>,
    node_budget: Option<u64>,
) -> CmdResult {
    let b = load_structure(template)?;
    let s = load_sentence(sentence)?;
    let budget = node_budget.unwrap_or_else(node_budget_from_env);
    let mut game = Game::new(&b, &s, budget)?;

    let fast = match engine {
        // Anything a decider cannot settle falls back to the oracle.
        Engine::Auto => dispatch(&b, &s).ok().flatten(),
        Engine::Oracle => None,
    };
    let (answer, engine_line) = match fast {
        Some(d) => (d.verdict, d.decider.to_string()),
        None => (game.evaluate()?, "oracle".to_string()),
    };
    println!("{}", if answer { "yes" } else { "no" });
    println!("engine: {engine_line}");

    if let Some(path) = strategy_out {
        if answer {
            let w = game.extract()?.ok_or_else(|| {
                Failure(BUDGET, "oracle found no strategy for a yes-instance".into())
            })?;
            write(path, &render_strategy(&w))?;
        } else {
            eprintln!("note: no strategy written for a no-instance");
        }
    }
    Ok(verdict(answer))
}

fn classify_cmd(family: &str, fragment: &str) -> CmdResult {
    let family = parse_family_spec(family).map_err(Failure::usage)?;
    let fragment = parse_fragment_spec(fragment).map_err(Failure::usage)?;
    let v = classify(&family, &fragment).map_err(Failure::usage)?;
    println!("{v}");
    Ok(YES)
}

fn reduce(rule: &str, args: &[String], out_dir: &Path) -> CmdResult {
    let (mut params, files) = params::split_params(args).map_err(Failure::usage)?;
    let rule = params::parse_rule(rule, &mut params).map_err(Failure::usage)?;
    params::no_leftovers(&params).map_err(Failure::usage)?;
    if files.is_empty() {
        return Err(Failure::usage("no source sentence files given"));
    }
    let compiled = files
        .iter()
        .map(|f| {
            let path = Path::new(f);
            let s = load_sentence(path)?;
            let t = rule
                .compile(&s)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok((path, t))
        })
        .collect::<Result<Vec<_>, Failure>>()?;

    fs::create_dir_all(out_dir).map_err(|e| Failure::usage(format!("{}: {e}", out_dir.display())))?;
    write(&out_dir.join("template.txt"), &render_structure(&rule.target_template()?))?;
    for (path, t) in compiled {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("sentence");
        let out = out_dir.join(format!("{stem}.reduced.txt"));
        write(&out, &render_sentence(&t))?;
        println!("{}", out.display());
    }
    Ok(YES)
}

fn verify(rule: &str, args: &[String], node_budget: Option<u64>, inject_fault: bool) -> CmdResult {
    let (mut params, rest) = params::split_params(args).map_err(Failure::usage)?;
    if let Some(extra) = rest.first() {
        return Err(Failure::usage(format!("unexpected argument `{extra}`")));
    }
    let mut num = |key: &str, default: u64| {
        params::take_number(&mut params, key).map(|v| v.unwrap_or(default))
    };
    let trials = num("trials", 50).map_err(Failure::usage)?;
    let seed = num("seed", 0).map_err(Failure::usage)?;
    let vars = num("vars", 3).map_err(Failure::usage)? as usize;
    let atoms = num("atoms", 3).map_err(Failure::usage)? as usize;
    let rule = params::parse_rule(rule, &mut params).map_err(Failure::usage)?;
    params::no_leftovers(&params).map_err(Failure::usage)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sources: Vec<Sentence> = (0..trials)
        .map(|_| rule.random_source(&mut rng, vars, atoms))
        .collect();
    let opts = VerifyOptions {
        node_budget: node_budget.unwrap_or_else(node_budget_from_env),
        inject_fault,
    };
    let report = verify_reduction(&rule, &sources, opts)?;
    print!("{report}");
    Ok(if report.disagreements() > 0 {
        NO
    } else if report.errors() > 0 {
        USAGE
    } else if report.skipped() > 0 {
        BUDGET
    } else {
        YES
    })
}

fn gen(family: &str, out: Option<&Path>) -> CmdResult {
    let family = parse_family_spec(family).map_err(Failure::usage)?;
    let b = build_template(&family).map_err(Failure::usage)?;
    let text = render_structure(&b);
    match out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(YES)
}
