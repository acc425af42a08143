use anyhow::{anyhow, bail, Context, Result};
use cayley_cops::cover::{
    cover_placement, greedy_translate_cover, meyniel_hypotheses, weak_meyniel_report,
};
use cayley_cops::game::{
    run, AdversarialRobber, AdversaryAnalysis, GameError, GameRules, GreedyMaxDistance, RobberMove,
    RobberPolicy, ScriptedRobber, Step, UniformRandom,
};
use cayley_cops::instance::{Instance, InstanceError};
use cayley_cops::oracle::{self, CopNumber, OracleConfig, OracleError};
use cayley_cops::strategy::{
    capture_bound, check_hypotheses, LabelledCops, Mutation, StrategyError,
};
use cayley_cops::suite::{self, SuiteConfig};
use cayley_cops::{ExportFormat, Family, Graph};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SOUNDNESS: u8 = 3;
const EXIT_TOO_LARGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cayley-cops",
    version,
    about = "Cops and robbers on Cayley-type graphs of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses of the cop-number theorem matching the family.
    Check { instance: PathBuf },
    /// Play the labelled-cop strategy against a robber and write the trace.
    Simulate(SimulateArgs),
    /// Exact cop number by retrograde analysis.
    Copnumber(CopnumberArgs),
    /// Greedy translate cover `TS = G` and the cop placement built from it.
    Cover { instance: PathBuf },
    /// Weak Meyniel report: branch, thresholds and certified cop count.
    Meyniel {
        instance: PathBuf,
        /// Skip the exact cop number.
        #[arg(long)]
        no_oracle: bool,
        #[arg(long, default_value_t = oracle::DEFAULT_STATE_CAP)]
        state_cap: u64,
    },
    /// Run the acceptance corpus.
    Suite(SuiteArgs),
    /// Write the graph as an edge list, adjacency JSON or DOT.
    Export {
        instance: PathBuf,
        #[arg(long, default_value = "edge-list")]
        format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RobberKind {
    UniformRandom,
    GreedyMaxDistance,
    Adversarial,
    Scripted,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    None,
    FlipCase2,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Self {
        match m {
            MutationArg::None => Mutation::None,
            MutationArg::FlipCase2 => Mutation::FlipCase2,
        }
    }
}

#[derive(clap::Args)]
struct SimulateArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "uniform-random")]
    robber: RobberKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to the instance's `rules.max_rounds`, else the capture bound
    /// plus one.
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Robber start (scripted and adversarial robbers).
    #[arg(long)]
    start: Option<usize>,
    /// Comma-separated robber targets for the scripted robber.
    #[arg(long, value_delimiter = ',')]
    moves: Vec<usize>,
    /// Trace file; `.json` gives JSON, anything else the line format.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    mutation: MutationArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum RulesArg {
    /// Robber first, robber may stay put.
    Standard,
    /// Robber first, every robber move follows an edge.
    ForcedMove,
    /// Cops first, robber may stay put.
    Classical,
}

#[derive(clap::Args)]
struct CopnumberArgs {
    /// Instance file, or an edge list with `--edges`.
    input: Option<PathBuf>,
    #[arg(long)]
    edges: bool,
    /// Built-in graph: `path:N`, `cycle:N`, `complete:N` or `petersen`.
    #[arg(long, conflicts_with = "input")]
    graph: Option<String>,
    #[arg(long, value_enum, default_value = "standard")]
    rules: RulesArg,
    /// Also compare with `|S|`.
    #[arg(long)]
    bound_check: bool,
    #[arg(long, default_value_t = oracle::DEFAULT_STATE_CAP)]
    state_cap: u64,
    #[arg(long)]
    max_k: Option<usize>,
}

#[derive(clap::Args)]
struct SuiteArgs {
    /// TOML corpus configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON report destination.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Skip the second run behind the determinism criterion.
    #[arg(long)]
    no_determinism: bool,
    #[arg(long, value_enum)]
    mutation: Option<MutationArg>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { instance } => cmd_check(&instance),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Copnumber(args) => cmd_copnumber(&args),
        Command::Cover { instance } => cmd_cover(&instance),
        Command::Meyniel {
            instance,
            no_oracle,
            state_cap,
        } => cmd_meyniel(&instance, no_oracle, state_cap),
        Command::Suite(args) => cmd_suite(&args),
        Command::Export {
            instance,
            format,
            output,
        } => cmd_export(&instance, &format, output.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn load(path: &Path) -> Result<Instance> {
    Instance::load(path).map_err(|e| match e {
        InstanceError::Parse { line, msg } => anyhow!("{}:{line}: {msg}", path.display()),
        other => anyhow!("{}: {other}", path.display()),
    })
}

fn cmd_check(path: &Path) -> Result<u8> {
    let inst = load(path)?;
    let graph = &inst.graph;
    let undirected = graph.check_undirected_criterion();
    println!("instance: {} ({})", path.display(), &inst.spec.hash()[..16]);
    println!(
        "group: {} (order {})",
        inst.spec.group,
        graph.group().order()
    );
    println!("S: {:?}", graph.genset().members());
    println!(
        "undirected criterion: predicted {}, observed {}{}",
        undirected.predicted,
        undirected.observed,
        if undirected.agree { "" } else { " (DISAGREE)" }
    );
    let holds = if graph.family() == Family::Cayley {
        let closed = graph.genset().is_conjugation_closed();
        let connected = graph.is_connected().unwrap_or(false);
        println!("family: cayley");
        println!("S symmetric: {}", graph.genset().is_symmetric());
        println!("S closed under conjugation: {closed}");
        println!("connected: {connected}");
        let holds = meyniel_hypotheses(graph);
        println!("hypotheses: {}", if holds { "hold" } else { "fail" });
        holds
    } else {
        let report = check_hypotheses(graph);
        println!("{report}");
        report.holds()
    };
    Ok(if holds { 0 } else { EXIT_FAIL })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8> {
    let inst = load(&args.instance)?;
    let graph = inst.graph.clone();
    let strategy = match LabelledCops::with_mutation(graph.clone(), args.mutation.into()) {
        Ok(s) => s,
        Err(StrategyError::Hypotheses(report)) => {
            println!("{report}");
            eprintln!("error: the strategy's hypotheses fail on this instance");
            return Ok(EXIT_FAIL);
        }
        Err(e) => bail!(e),
    };
    let k = strategy.cop_count();
    let lengths = graph.genset().word_lengths()?;
    let n = graph.group().order();
    let worst_bound = (lengths.iter().copied().max().unwrap_or(0) + n) * k;
    let mut rules = inst.spec.rules();
    rules.max_rounds = args
        .max_rounds
        .or(inst.spec.rules.max_rounds)
        .unwrap_or(worst_bound + 1)
        .max(1);
    let check_start = |r: usize| -> Result<usize> {
        if r >= n {
            bail!("start {r} is not a vertex (order {n})");
        }
        Ok(r)
    };
    let mut robber: Box<dyn RobberPolicy> = match args.robber {
        RobberKind::UniformRandom => Box::new(UniformRandom::new(args.seed)),
        RobberKind::GreedyMaxDistance => Box::new(GreedyMaxDistance),
        RobberKind::Scripted => {
            let start = check_start(args.start.unwrap_or(0))?;
            let moves = args
                .moves
                .iter()
                .map(|&to| {
                    RobberMove::Step(Step {
                        to,
                        generator: None,
                    })
                })
                .collect();
            Box::new(ScriptedRobber::new(start, moves))
        }
        RobberKind::Adversarial => {
            let analysis = AdversaryAnalysis::solve(
                graph.as_ref(),
                strategy.clone(),
                k,
                rules,
                cayley_cops::game::DEFAULT_STATE_CAP,
            );
            let analysis = match analysis {
                Ok(a) => Arc::new(a),
                Err(e) => return game_error(e),
            };
            match args.start {
                Some(s) => Box::new(AdversarialRobber::starting_at(analysis, check_start(s)?)),
                None => Box::new(AdversarialRobber::new(analysis)),
            }
        }
    };
    let trace = match run(
        graph.as_ref(),
        k,
        rules,
        robber.as_mut(),
        &mut strategy.clone(),
    ) {
        Ok(t) => t,
        Err(e) => return game_error(e),
    };
    if let Some(path) = &args.trace {
        let text = if path.extension().is_some_and(|e| e == "json") {
            trace.to_json()
        } else {
            trace.to_lines()
        };
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let bound = capture_bound(&graph, trace.initial_robber)?;
    let captured = trace.capture_round();
    match captured {
        Some(r) => println!(
            "captured in round {r}; bound (m+|G|)|S| = {bound} (m = {}, robber start {})",
            lengths[trace.initial_robber], trace.initial_robber
        ),
        None => println!(
            "not captured after {} rounds; bound (m+|G|)|S| = {bound} (robber start {})",
            trace.rounds.len(),
            trace.initial_robber
        ),
    }
    Ok(if captured.is_some_and(|r| r <= bound) {
        0
    } else {
        EXIT_FAIL
    })
}

fn game_error(e: GameError) -> Result<u8> {
    match e {
        GameError::Soundness { round, detail } => {
            eprintln!("soundness violation in round {round}: {detail}");
            Ok(EXIT_SOUNDNESS)
        }
        other => Err(anyhow!(other)),
    }
}

fn builtin_graph(spec: &str) -> Result<Graph> {
    if spec == "petersen" {
        return Ok(Graph::petersen());
    }
    let (kind, n) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("expected path:N, cycle:N, complete:N or petersen, got {spec:?}"))?;
    let n: usize = n.parse().with_context(|| format!("bad size in {spec:?}"))?;
    match kind {
        "path" => Ok(Graph::path(n)),
        "cycle" => Ok(Graph::cycle(n)),
        "complete" => Ok(Graph::complete(n)),
        other => bail!("unknown built-in graph {other:?}"),
    }
}

fn cmd_copnumber(args: &CopnumberArgs) -> Result<u8> {
    let mut rules = match args.rules {
        RulesArg::Standard => GameRules::standard(),
        RulesArg::ForcedMove => GameRules::forced_move(),
        RulesArg::Classical => GameRules::classical(),
    };
    let mut s_size = None;
    let graph = match (&args.graph, &args.input) {
        (Some(spec), _) => builtin_graph(spec)?,
        (None, Some(path)) if args.edges => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Graph::parse_edge_list(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
        }
        (None, Some(path)) => {
            let inst = load(path)?;
            rules = inst.spec.rules.apply(rules);
            s_size = Some(inst.graph.genset().len());
            inst.graph.graph().clone()
        }
        (None, None) => bail!("give an instance file, --edges FILE or --graph"),
    };
    let config = OracleConfig {
        state_cap: args.state_cap,
        ..OracleConfig::default()
    };
    let result = match oracle::cop_number(&graph, rules, &config, args.max_k) {
        Ok(r) => r,
        Err(OracleError::Directed) => {
            bail!("the graph is directed; the oracle needs an undirected graph")
        }
        Err(e) => bail!(e),
    };
    match result.value {
        CopNumber::Exact(c) => {
            println!("cop number: {c}");
            if let Some(t) = result.capture_time {
                println!("optimal capture time: {t} rounds");
            }
            if args.bound_check {
                let Some(s) = s_size else {
                    bail!("--bound-check needs an instance file");
                };
                let ok = c <= s;
                println!(
                    "|S| = {s}; cop number <= |S|: {}",
                    if ok { "pass" } else { "fail" }
                );
                if !ok {
                    return Ok(EXIT_FAIL);
                }
            }
            Ok(0)
        }
        CopNumber::AtLeast(k) => {
            println!("cop number: >= {k} (state cap {} reached)", args.state_cap);
            Ok(EXIT_TOO_LARGE)
        }
    }
}

fn cmd_cover(path: &Path) -> Result<u8> {
    let inst = load(path)?;
    let cover = greedy_translate_cover(inst.graph.genset());
    let placement = cover_placement(&inst.graph, &cover.translates);
    let doc = serde_json::json!({ "cover": cover, "placement": placement });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if cover.covers && placement.dominates {
        0
    } else {
        EXIT_FAIL
    })
}

fn cmd_meyniel(path: &Path, no_oracle: bool, state_cap: u64) -> Result<u8> {
    let inst = load(path)?;
    let oracle_value = if no_oracle {
        None
    } else {
        let config = OracleConfig {
            state_cap,
            ..OracleConfig::default()
        };
        oracle::cop_number(inst.graph.graph(), GameRules::standard(), &config, None)
            .ok()
            .map(|r| r.value)
    };
    let report = weak_meyniel_report(&inst.graph, oracle_value);
    let doc = serde_json::json!({
        "instance": &inst.spec.hash()[..16],
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    let ok = report.certified.is_some()
        && report.within_bound_ln != Some(false)
        && report.oracle_consistent != Some(false);
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn cmd_suite(args: &SuiteArgs) -> Result<u8> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            SuiteConfig::from_toml(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(m) = args.mutation {
        cfg.mutation = m.into();
    }
    let report = if args.no_determinism {
        suite::run_suite(&cfg)
    } else {
        suite::run_full(&cfg)
    }
    .map_err(|e| anyhow!(e))?;
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{}", report.summary());
    if report.passed() {
        Ok(0)
    } else {
        let failed: Vec<String> = report.failed_ids().iter().map(u32::to_string).collect();
        eprintln!("failed criteria: {}", failed.join(", "));
        Ok(EXIT_FAIL)
    }
}

fn cmd_export(path: &Path, format: &str, output: Option<&Path>) -> Result<u8> {
    let inst = load(path)?;
    let format: ExportFormat = format.parse()?;
    let text = inst.graph.export(format);
    match output {
        Some(out) => {
            std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?
        }
        None => print!("{text}"),
    }
    Ok(0)
}
