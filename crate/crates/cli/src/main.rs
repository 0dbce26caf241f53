//! `bourbaki`: command-line front end for the tower engine.
//!
//! Exit status is 0 on success, 1 for domain errors (axiom violations,
//! non-progressive maps, failed checks) and 2 for usage or schema errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bourbaki_tower::dataflow::{fixtures as cfg_fixtures, reaching_definitions};
use bourbaki_tower::format::{export_dot, parse_map_doc, parse_poset_doc, FormatError};
use bourbaki_tower::map::{OrdinalSuccessor, TableMap};
use bourbaki_tower::maximality::{find_maximal, ChoiceSelector};
use bourbaki_tower::oracle::{verify_corpus, CorpusOptions};
use bourbaki_tower::ordinal::Ordinal;
use bourbaki_tower::poset::FinitePoset;
use bourbaki_tower::provider::{make_finite_adapter, make_ordinal_interval};
use bourbaki_tower::tower::{
    build_tower_finite, build_tower_transfinite, check_tower, enumerate_towers, Budget, StageKind,
    TowerCheck, TowerTrace, TransfiniteOutcome,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bourbaki", version, about = "Largest towers, fixed points and maximal elements of progressive maps")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Poset documents.
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Build, check and enumerate towers on a finite poset.
    #[command(subcommand)]
    Tower(TowerCommand),
    /// Find a maximal element by ascending along a choice selector.
    Maximal {
        #[arg(long)]
        poset: PathBuf,
        /// Start element; defaults to the first declared element.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_enum, default_value_t = Strategy::LeastId)]
        strategy: Strategy,
        /// Seed for `--strategy random`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exhaustive and seeded verification runs.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Towers on ordinal intervals.
    #[command(subcommand)]
    Ordinal(OrdinalCommand),
    /// Applications of the engine.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Subcommand)]
enum PosetCommand {
    /// Check a poset document and report its size.
    Validate { file: PathBuf },
    /// Print the Hasse diagram in DOT syntax.
    Dot { file: PathBuf },
}

#[derive(Args)]
struct Instance {
    #[arg(long)]
    poset: PathBuf,
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    base: String,
}

#[derive(Subcommand)]
enum TowerCommand {
    /// Build the largest tower and its fixed-point certificate.
    Build(Instance),
    /// Check whether a chain of labels is a tower.
    Check {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_delimiter = ',')]
        candidate: Vec<String>,
    },
    /// List every tower based at the base element.
    Enumerate(Instance),
}

#[derive(Subcommand)]
enum OracleCommand {
    Run {
        #[arg(long)]
        max_n: usize,
        /// Also check random posets of this size.
        #[arg(long, requires = "seeds")]
        random_n: Option<usize>,
        /// Number of random seeds, 0..seeds.
        #[arg(long, requires = "random_n")]
        seeds: Option<u64>,
    },
}

#[derive(Subcommand)]
enum OrdinalCommand {
    /// Largest tower of the clamped successor on [0, alpha].
    Tower {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        base: String,
        /// Successor steps recorded before each jump to a limit.
        #[arg(long, default_value_t = 8)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Reaching definitions on a shipped control-flow graph.
    Dataflow {
        /// One of `single`, `chain2`, `diamond`; all three if omitted.
        #[arg(long)]
        cfg: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    LeastId,
    Random,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl Failure {
    fn domain(e: impl Display) -> Self {
        Failure::Domain(e.to_string())
    }

    fn usage(e: impl Display) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Schema { .. } => Failure::usage(e),
            _ => Failure::domain(e),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<FinitePoset, Failure> {
    Ok(parse_poset_doc(&read(path)?)?)
}

fn load_instance(args: &Instance) -> Result<(FinitePoset, TableMap, usize), Failure> {
    let p = load_poset(&args.poset)?;
    let f = parse_map_doc(&read(&args.map)?, &p)?;
    let base = p.index_of(&args.base).map_err(Failure::usage)?;
    Ok((p, f, base))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn kind(k: StageKind) -> &'static str {
    match k {
        StageKind::Base => "base",
        StageKind::Successor => "successor",
        StageKind::Limit => "limit",
    }
}

/// One line per stage, except that runs of more than `keep` successor
/// stages are shortened to their first and last few.
fn print_trace<E>(trace: &TowerTrace<E>, show: impl Fn(&E) -> String, keep: usize) {
    let stages = &trace.stages;
    let mut i = 0;
    while i < stages.len() {
        let run = stages[i..].iter().take_while(|s| s.kind == StageKind::Successor).count();
        if run > 2 * keep + 1 {
            for s in &stages[i..i + keep] {
                println!("  {:>8}  {:<9}  {}", s.index.to_string(), kind(s.kind), show(&s.element));
            }
            println!("  {:>8}  ... {} successor stages", "", run - 2 * keep);
            i += run - keep;
            continue;
        }
        let s = &stages[i];
        println!("  {:>8}  {:<9}  {}", s.index.to_string(), kind(s.kind), show(&s.element));
        i += 1;
    }
}

fn poset(cmd: PosetCommand, json: bool) -> Outcome {
    match cmd {
        PosetCommand::Validate { file } => {
            let p = load_poset(&file)?;
            if json {
                print_json(&serde_json::json!({
                    "valid": true,
                    "name": p.name(),
                    "elements": p.len(),
                    "strict_pairs": p.strict_pairs_ix().len(),
                    "cover_pairs": p.cover_pairs_ix().len(),
                }));
            } else {
                println!(
                    "valid poset {:?}: {} elements, {} strict pairs, {} cover pairs",
                    p.name(),
                    p.len(),
                    p.strict_pairs_ix().len(),
                    p.cover_pairs_ix().len()
                );
            }
        }
        PosetCommand::Dot { file } => print!("{}", export_dot(&load_poset(&file)?)),
    }
    Ok(())
}

fn tower(cmd: TowerCommand, json: bool) -> Outcome {
    match cmd {
        TowerCommand::Build(args) => {
            let (p, f, base) = load_instance(&args)?;
            let cert = build_tower_finite(&p, &f, base).map_err(Failure::domain)?;
            let cert = cert.map(|&i| p.label(i).clone());
            if json {
                print_json(&cert);
            } else {
                println!("tower based at {} ({} stages):", args.base, cert.tower.len());
                print_trace(&cert.tower, ToString::to_string, usize::MAX / 4);
                println!("omega = {}", cert.omega);
                println!("  omega in tower:  {}", cert.checks.omega_in_tower);
                println!("  f(omega) = omega: {}", cert.checks.fixed_point);
                println!("  omega = lub:     {}", cert.checks.omega_is_lub);
            }
            if !cert.is_valid() {
                return Err(Failure::Domain("certificate check failed".into()));
            }
        }
        TowerCommand::Check { instance, candidate } => {
            let (p, f, base) = load_instance(&instance)?;
            let ids = candidate
                .iter()
                .map(|l| p.index_of(l.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::usage)?;
            let verdict = check_tower(&make_finite_adapter(&p), &f, &base, &ids).map_err(Failure::domain)?;
            if json {
                print_json(&verdict);
            } else {
                match &verdict {
                    TowerCheck::Valid => println!("valid tower"),
                    TowerCheck::Violation { condition, position, witness } => {
                        println!("not a tower: {condition:?} condition fails at position {position} ({witness})")
                    }
                }
            }
            if verdict != TowerCheck::Valid {
                return Err(Failure::Domain("candidate is not a tower".into()));
            }
        }
        TowerCommand::Enumerate(args) => {
            let (p, f, base) = load_instance(&args)?;
            let towers = enumerate_towers(&p, &f, base).map_err(Failure::domain)?;
            let named: Vec<Vec<String>> = towers
                .iter()
                .map(|t| t.elements().iter().map(|&i| p.label(i).to_string()).collect())
                .collect();
            if json {
                print_json(&named);
            } else {
                println!("{} towers based at {}:", named.len(), args.base);
                for t in named {
                    println!("  {{{}}}", t.join(", "));
                }
            }
        }
    }
    Ok(())
}

fn maximal(poset: &Path, base: Option<&str>, strategy: Strategy, seed: Option<u64>, json: bool) -> Outcome {
    let p = load_poset(poset)?;
    let sel = match (strategy, seed) {
        (Strategy::LeastId, None) => ChoiceSelector::least_id(&p),
        (Strategy::Random, Some(s)) => ChoiceSelector::seeded(&p, s),
        (Strategy::LeastId, Some(_)) => return Err(Failure::usage("--seed only applies to --strategy random")),
        (Strategy::Random, None) => return Err(Failure::usage("--strategy random needs --seed")),
    };
    let x0 = match base {
        Some(b) => p.index_of(b).map_err(Failure::usage)?,
        None => 0,
    };
    let out = find_maximal(&sel, x0).map_err(Failure::domain)?;
    if json {
        print_json(&out);
    } else {
        let path: Vec<String> = out.trace.elements().iter().map(ToString::to_string).collect();
        println!("maximal element: {}", out.maximal);
        println!("ascent: {}", path.join(" -> "));
        println!("strict upper cone empty: {}", out.cone_is_empty);
    }
    Ok(())
}

fn oracle(cmd: OracleCommand, json: bool) -> Outcome {
    let OracleCommand::Run { max_n, random_n, seeds } = cmd;
    let mut options = CorpusOptions::exhaustive();
    if let (Some(n), Some(k)) = (random_n, seeds) {
        options = options.with_random(n, 0..k);
    }
    let report = verify_corpus(max_n, &options).map_err(Failure::usage)?;
    if json {
        print_json(&report);
    } else {
        println!("{:>3}  {:>6}  {:>7}  {:>6}  {:>9}  {:>7}  {:>7}", "n", "mode", "posets", "maps", "instances", "towers", "pairs");
        for c in &report.per_n {
            let mode = if c.random { "random" } else { "all" };
            println!(
                "{:>3}  {:>6}  {:>7}  {:>6}  {:>9}  {:>7}  {:>7}",
                c.n, mode, c.posets, c.progressive_maps, c.instances, c.towers_enumerated, c.tower_pairs_compared
            );
        }
        println!("failures: {} ({} ms)", report.failures.len(), report.elapsed_ms);
        for f in &report.failures {
            println!("  {:?} n={} base={:?} seed={:?}: {}", f.check, f.n, f.base, f.seed, f.detail);
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Domain(format!("{} checks failed", report.failures.len())))
    }
}

fn ordinal(cmd: OrdinalCommand, json: bool) -> Outcome {
    let OrdinalCommand::Tower { alpha, base, budget } = cmd;
    let top: Ordinal = alpha.parse().map_err(|e| Failure::Usage(format!("--alpha: {e}")))?;
    let x0: Ordinal = base.parse().map_err(|e| Failure::Usage(format!("--base: {e}")))?;
    if x0 > top {
        return Err(Failure::Usage(format!("base {x0} is above alpha {top}")));
    }
    let host = make_ordinal_interval(top.clone());
    let f = OrdinalSuccessor::clamped(top);
    let budget = Budget { successor_steps_per_block: budget, ..Budget::default() };
    let outcome = build_tower_transfinite(&host, &f, x0, budget).map_err(|e| match e {
        bourbaki_tower::tower::TowerError::ZeroBudget => Failure::usage(e),
        _ => Failure::domain(e),
    })?;
    if json {
        print_json(&outcome);
    }
    match outcome {
        TransfiniteOutcome::Fixed(cert) => {
            if !json {
                let limits = cert.tower.limit_stages().count();
                println!("tower based at {base} ({} stages, {limits} limits):", cert.tower.len());
                print_trace(&cert.tower, ToString::to_string, 2);
                println!("omega = {} (fixed: {}, lub: {})", cert.omega, cert.checks.fixed_point, cert.checks.omega_is_lub);
            }
            Ok(())
        }
        TransfiniteOutcome::BudgetExhausted { trace } => {
            let limits = trace.limit_stages().count();
            let last = trace.stages.last().expect("traces are nonempty");
            Err(Failure::Domain(format!(
                "no fixed point after {} stages ({limits} limit stages); last stage {} at index {}",
                trace.len(),
                last.element,
                last.index
            )))
        }
    }
}

fn demo(cmd: DemoCommand, json: bool) -> Outcome {
    let DemoCommand::Dataflow { cfg } = cmd;
    let names: Vec<&str> = match &cfg {
        Some(name) => vec![name.as_str()],
        None => cfg_fixtures::NAMES.to_vec(),
    };
    let mut results = serde_json::Map::new();
    for name in names {
        let graph = cfg_fixtures::by_name(name).ok_or_else(|| {
            Failure::Usage(format!("unknown cfg `{name}`; expected one of {}", cfg_fixtures::NAMES.join(", ")))
        })?;
        let result = reaching_definitions(&graph).map_err(Failure::domain)?;
        if json {
            let table: Vec<_> = (0..graph.nodes.len())
                .map(|k| {
                    serde_json::json!({
                        "node": graph.nodes[k],
                        "in": result.state.in_of(&graph, k),
                        "out": result.state.out_of(&graph, k),
                    })
                })
                .collect();
            results.insert(name.into(), serde_json::json!({ "nodes": table, "trace_length": result.trace.len() }));
        } else {
            println!("cfg {name}:");
            print!("{}", result.state.table(&graph));
            println!("tower trace length: {}\n", result.trace.len());
        }
    }
    if json {
        print_json(&results);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = match cli.command {
        Command::Poset(c) => poset(c, json),
        Command::Tower(c) => tower(c, json),
        Command::Maximal { poset, base, strategy, seed } => maximal(&poset, base.as_deref(), strategy, seed, json),
        Command::Oracle(c) => oracle(c, json),
        Command::Ordinal(c) => ordinal(c, json),
        Command::Demo(c) => demo(c, json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
