//! `chipgame`: play, verify, solve and emit chip games from the command line.
//!
//! Results go to stdout (or `--out`), diagnostics to stderr. Exit codes:
//! 0 success or positive verdict, 1 negative verdict, 2 usage error,
//! 3 resource budget exceeded.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use chipgame::game::{BoardState, GameConfig, GameVariant, MoveSet, PathId, RemovalAction, RemovalRule};
use chipgame::play::{play_match, replay_with, MatchError, Round, Side, Transcript};
use chipgame::reductions::{
    colorer_from_remover, play_online, presenter_from_pusher, verify_two_coloring, Colorer, Hypergraph,
    OnlineWinner, RandomColorer, ReductionError,
};
use chipgame::solver::{threshold, SolveError, Solver, SolverOptions, Threshold, DEFAULT_BUDGET};
use chipgame::strategies::{make_pusher, make_remover, RemoverStrategy, StrategyError, StrategyId};
use chipgame::verify::{
    run_trials, verify_pusher_exhaustive, verify_remover_exhaustive, Counterexample, VerifyError, VerifyOptions,
    DEFAULT_VERIFY_BUDGET,
};

const BUDGET_ENV: &str = "CHIPGAME_BUDGET";

#[derive(Parser)]
#[command(name = "chipgame", version, about = "Two-path chip games between Pusher and Remover")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and write its transcript.
    Play(PlayArgs),
    /// Check a strategy against every opponent line, or against seeded random opponents.
    Verify(VerifyArgs),
    /// Exact outcome of one instance.
    Solve(SolveArgs),
    /// Smallest chip count for which Pusher wins.
    Threshold(ThresholdArgs),
    /// Play a Pusher as hypergraph Presenter and write the hypergraph.
    Emit(EmitArgs),
    /// Check a transcript or hypergraph file.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    General,
    Restricted,
    Mmb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Pusher,
    Remover,
}

#[derive(Args)]
struct VariantFlags {
    #[arg(long, value_enum, default_value = "general")]
    variant: VariantArg,
    /// Move cap of the restricted variant (default 1).
    #[arg(long)]
    c: Option<u32>,
}

#[derive(Args)]
struct GameFlags {
    /// Path length.
    #[arg(long)]
    k: usize,
    /// Chips per path.
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    variant: VariantFlags,
}

#[derive(Args, Clone)]
struct OutputFlags {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResourceFlags {
    /// Memo or node budget; overrides CHIPGAME_BUDGET.
    #[arg(long)]
    budget: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    game: GameFlags,
    #[arg(long, default_value = "all")]
    pusher: String,
    #[arg(long, default_value = "greedy")]
    remover: String,
    /// Prompt on the terminal for this side's choices.
    #[arg(long, value_enum)]
    human: Option<SideArg>,
    #[arg(long)]
    max_rounds: Option<u64>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    game: GameFlags,
    #[arg(long, value_enum)]
    side: SideArg,
    #[arg(long)]
    strategy: String,
    /// Play this many seeded games instead of the exhaustive search.
    #[arg(long)]
    trials: Option<u64>,
    /// First seed of the trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Opponent in trials; seeded random by default.
    #[arg(long)]
    opponent: Option<String>,
    /// Also allow Remover to clear a path on which nothing moved.
    #[arg(long)]
    allow_dominated: bool,
    #[command(flatten)]
    resources: ResourceFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    game: GameFlags,
    #[arg(long)]
    allow_dominated: bool,
    #[command(flatten)]
    resources: ResourceFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    variant: VariantFlags,
    /// Largest chip count to try.
    #[arg(long)]
    max_n: Option<u32>,
    #[command(flatten)]
    resources: ResourceFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct EmitArgs {
    #[command(flatten)]
    game: GameFlags,
    #[arg(long)]
    pusher: String,
    /// `random[:seed=N]` colors at random; any Remover id is played on the 2N-chip game.
    #[arg(long, default_value = "random")]
    colorer: String,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct ReplayArgs {
    /// Transcript or hypergraph JSON.
    file: PathBuf,
    /// Accept removals of a path on which nothing moved.
    #[arg(long)]
    allow_dominated: bool,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Negative(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Negative(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            SolveError::TooLarge(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Solver(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Result plus verdict: `false` maps to exit code 1.
struct Report {
    json: Value,
    text: String,
    positive: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (output, result) = match cli.command {
        Command::Play(a) => (a.output.clone(), play(a)),
        Command::Verify(a) => (a.output.clone(), verify(a)),
        Command::Solve(a) => (a.output.clone(), solve(a)),
        Command::Threshold(a) => (a.output.clone(), run_threshold(a)),
        Command::Emit(a) => (a.output.clone(), emit(a)),
        Command::Replay(a) => (a.output.clone(), run_replay(a)),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code());
        }
    };
    if let Err(e) = write_output(&output, &report) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(if report.positive { 0 } else { 1 })
}

fn write_output(flags: &OutputFlags, report: &Report) -> io::Result<()> {
    let mut body = match flags.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("json value serializes"),
        Format::Text => report.text.clone(),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &flags.out {
        Some(path) => std::fs::write(path, body),
        None => io::stdout().write_all(body.as_bytes()),
    }
}

fn variant_of(flags: &VariantFlags) -> Result<GameVariant, CliError> {
    match (flags.variant, flags.c) {
        (VariantArg::General, Some(_)) => Err(CliError::Usage("--c only applies to --variant restricted".into())),
        (VariantArg::General, None) => Ok(GameVariant::General),
        (VariantArg::Restricted, c) => {
            GameVariant::from_name("restricted", c).map_err(|e| CliError::Usage(e.to_string()))
        }
        (VariantArg::Mmb, c) => GameVariant::from_name("mmb", c).map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn config_of(flags: &GameFlags) -> Result<GameConfig, CliError> {
    GameConfig::new(flags.k, flags.n, variant_of(&flags.variant)?).map_err(|e| CliError::Usage(e.to_string()))
}

fn config_json(config: &GameConfig) -> Value {
    let mut obj = json!({ "k": config.k, "N": config.n, "variant": config.variant.name() });
    if let GameVariant::Restricted { c } = config.variant {
        obj["c"] = c.into();
    }
    obj
}

fn budget(flag: Option<usize>, default: usize) -> Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v} is not a count"))),
        Err(_) => Ok(default),
    }
}

fn configure_jobs(jobs: Option<usize>) -> Result<(), CliError> {
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn removal_rule(allow_dominated: bool) -> RemovalRule {
    if allow_dominated {
        RemovalRule::AllowDominated
    } else {
        RemovalRule::NonDominated
    }
}

fn move_text(mv: &MoveSet) -> String {
    format!("first {:?} second {:?}", mv.path(PathId::First), mv.path(PathId::Second))
}

fn rounds_json(rounds: &[Round]) -> Value {
    rounds
        .iter()
        .map(|r| {
            json!({
                "advance": [mv_path(&r.mv, PathId::First), mv_path(&r.mv, PathId::Second)],
                "removal": r.removal.to_string(),
            })
        })
        .collect()
}

fn mv_path(mv: &MoveSet, p: PathId) -> Vec<u32> {
    mv.path(p).to_vec()
}

fn play(args: PlayArgs) -> Result<Report, CliError> {
    let config = config_of(&args.game)?;
    let mut pusher = make_pusher(&args.pusher, &config)?;
    let mut remover: Box<dyn RemoverStrategy> = match args.human {
        Some(SideArg::Remover) => Box::new(HumanRemover { config }),
        Some(SideArg::Pusher) => return Err(CliError::Usage("only --human remover is supported".into())),
        None => make_remover(&args.remover, &config)?,
    };
    let limit = args.max_rounds.unwrap_or(config.round_bound() + 1);
    let transcript = match play_match(pusher.as_mut(), remover.as_mut(), &config, limit) {
        Ok(t) => t,
        Err(e @ MatchError::RoundLimit { .. }) => return Err(CliError::Budget(e.to_string())),
        Err(e) => return Err(CliError::Negative(e.to_string())),
    };
    let json: Value = serde_json::from_str(&transcript.to_json()).expect("transcript json parses");
    Ok(Report { json, text: transcript_text(&transcript), positive: true })
}

fn transcript_text(t: &Transcript) -> String {
    let mut out = String::new();
    for (i, r) in t.rounds.iter().enumerate() {
        out.push_str(&format!("{:>4}  {}  {}\n", i + 1, move_text(&r.mv), r.removal));
    }
    out.push_str(&format!("{} after {} rounds\n", t.outcome, t.round_count()));
    out
}

fn counterexample_json(c: &Counterexample) -> Value {
    json!({
        "rounds": rounds_json(&c.rounds),
        "finalState": [c.final_state.path(PathId::First), c.final_state.path(PathId::Second)],
        "refutation": c.refutation,
    })
}

fn verify(args: VerifyArgs) -> Result<Report, CliError> {
    let config = config_of(&args.game)?;
    configure_jobs(args.resources.jobs)?;
    let side = match args.side {
        SideArg::Pusher => Side::Pusher,
        SideArg::Remover => Side::Remover,
    };
    match side {
        Side::Pusher => make_pusher(&args.strategy, &config).map(drop)?,
        Side::Remover => make_remover(&args.strategy, &config).map(drop)?,
    }
    let mut json = json!({
        "side": side.to_string(),
        "strategy": args.strategy,
        "config": config_json(&config),
    });
    if let Some(games) = args.trials {
        let opponent = |seed: u64| args.opponent.clone().unwrap_or_else(|| StrategyId::Random { seed }.to_string());
        if let Some(id) = &args.opponent {
            match side {
                Side::Pusher => make_remover(id, &config).map(drop)?,
                Side::Remover => make_pusher(id, &config).map(drop)?,
            }
        }
        let summary = match side {
            Side::Pusher => run_trials(
                &config,
                games,
                args.seed,
                |_| make_pusher(&args.strategy, &config).expect("checked above"),
                |seed| make_remover(&opponent(seed), &config).expect("checked above"),
            ),
            Side::Remover => run_trials(
                &config,
                games,
                args.seed,
                |seed| make_pusher(&opponent(seed), &config).expect("checked above"),
                |_| make_remover(&args.strategy, &config).expect("checked above"),
            ),
        };
        let holds = summary.all_won_by(side);
        json["mode"] = "trials".into();
        json["holds"] = holds.into();
        json["summary"] = serde_json::to_value(&summary).expect("summary serializes");
        let text = format!(
            "{}: {} of {} games won by {side}, {} errors\n",
            if holds { "holds" } else { "refuted" },
            match side {
                Side::Pusher => summary.pusher_wins,
                Side::Remover => summary.remover_wins,
            },
            summary.games,
            summary.errors.len()
        );
        return Ok(Report { json, text, positive: holds });
    }
    let options = VerifyOptions {
        budget: budget(args.resources.budget, DEFAULT_VERIFY_BUDGET)?,
        removal_rule: removal_rule(args.allow_dominated),
    };
    let report = match side {
        Side::Pusher => verify_pusher_exhaustive(make_pusher(&args.strategy, &config)?.as_ref(), &config, options),
        Side::Remover => {
            verify_remover_exhaustive(make_remover(&args.strategy, &config)?.as_ref(), &config, options)
        }
    }
    .map_err(|e| match e {
        VerifyError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        VerifyError::Rules(_) => CliError::Usage(e.to_string()),
    })?;
    eprintln!("explored {} nodes", report.nodes);
    json["mode"] = "exhaustive".into();
    json["holds"] = report.holds().into();
    json["counterexample"] = report.counterexample.as_ref().map_or(Value::Null, counterexample_json);
    let text = match &report.counterexample {
        None => "holds\n".to_string(),
        Some(c) => {
            let mut t = format!("refuted: {:?}\n", c.refutation);
            for (i, r) in c.rounds.iter().enumerate() {
                t.push_str(&format!("{:>4}  {}  {}\n", i + 1, move_text(&r.mv), r.removal));
            }
            t.push_str(&format!("final {}\n", c.final_state));
            t
        }
    };
    Ok(Report { json, text, positive: report.holds() })
}

fn solve(args: SolveArgs) -> Result<Report, CliError> {
    let config = config_of(&args.game)?;
    let options = SolverOptions {
        budget: budget(args.resources.budget, DEFAULT_BUDGET)?,
        removal_rule: removal_rule(args.allow_dominated),
    };
    let solver = Solver::for_config(&config, options)?;
    let (result, parallel) = match args.resources.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) if j > 1 => (solver.solve_parallel(&config, j)?, true),
        _ => (solver.solve(&config)?, false),
    };
    eprintln!("explored {} positions", result.states_explored);
    let mut json = config_json(&config);
    json["outcome"] = result.outcome.to_string().into();
    // the parallel count depends on thread timing
    if !parallel {
        json["statesExplored"] = result.states_explored.into();
    }
    Ok(Report { json, text: result.outcome.to_string(), positive: true })
}

fn run_threshold(args: ThresholdArgs) -> Result<Report, CliError> {
    let variant = variant_of(&args.variant)?;
    GameConfig::new(args.k, 0, variant).map_err(|e| CliError::Usage(e.to_string()))?;
    let options = SolverOptions::with_budget(budget(args.resources.budget, DEFAULT_BUDGET)?);
    let report = threshold(args.k, variant, options, args.max_n)?;
    eprintln!("explored {} positions", report.states_explored);
    if let Some(reason) = &report.stopped {
        eprintln!("stopped early: {reason}");
    }
    let text = match report.threshold {
        Threshold::Exact(t) => t.to_string(),
        Threshold::Bracket { lo, hi } => match hi {
            Some(hi) => format!("[{lo}, {hi}]"),
            None => format!("[{lo}, unknown]"),
        },
    };
    let json = report.to_json();
    match (&report.threshold, &report.stopped) {
        (Threshold::Bracket { .. }, Some(reason @ SolveError::BudgetExceeded { .. })) => {
            write_output(&args.output, &Report { json, text, positive: false })?;
            Err(CliError::Budget(reason.to_string()))
        }
        (Threshold::Bracket { .. }, _) => Ok(Report { json, text, positive: false }),
        _ => Ok(Report { json, text, positive: true }),
    }
}

fn colorer_for(id: &str, config: &GameConfig) -> Result<Box<dyn Colorer>, CliError> {
    if let Some(StrategyId::Random { seed }) = StrategyId::parse(id) {
        return Ok(Box::new(RandomColorer::new(seed)));
    }
    let wide = GameConfig { n: 2 * config.n, ..*config };
    let remover = make_remover(id, &wide)?;
    Ok(Box::new(colorer_from_remover(remover, &wide).map_err(reduction_error)?))
}

fn reduction_error(e: ReductionError) -> CliError {
    match e {
        ReductionError::Variant(_) | ReductionError::Strategy(StrategyError::Incompatible(_)) => {
            CliError::Usage(e.to_string())
        }
        ReductionError::StepLimit(_) => CliError::Budget(e.to_string()),
        other => CliError::Negative(other.to_string()),
    }
}

fn emit(args: EmitArgs) -> Result<Report, CliError> {
    let config = config_of(&args.game)?;
    let pusher = make_pusher(&args.pusher, &config)?;
    let mut presenter = presenter_from_pusher(pusher, &config).map_err(reduction_error)?;
    let mut colorer = colorer_for(&args.colorer, &config)?;
    let game = play_online(&mut presenter, colorer.as_mut(), config.k, args.max_steps).map_err(reduction_error)?;
    eprintln!(
        "{} vertices, {} edges, winner {:?}, monochromatic edges {:?}",
        game.hypergraph.presentation.len(),
        game.hypergraph.edges.len(),
        game.winner,
        game.monochromatic
    );
    let json: Value = serde_json::from_str(&game.hypergraph.to_json()).expect("hypergraph json parses");
    Ok(Report { json, text: game.hypergraph.to_edge_list(), positive: game.winner == OnlineWinner::Presenter })
}

fn run_replay(args: ReplayArgs) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.file.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Negative(format!("not JSON: {e}")))?;
    if value.get("edges").is_some() {
        let h = Hypergraph::from_json(&text).map_err(|e| CliError::Negative(e.to_string()))?;
        let mono = verify_two_coloring(&h).map_err(|e| CliError::Negative(e.to_string()))?;
        let json = json!({
            "kind": "hypergraph",
            "valid": true,
            "k": h.k,
            "edges": h.edges.len(),
            "vertices": h.presentation.len(),
            "monochromatic": mono,
        });
        let text = format!("valid hypergraph, monochromatic edges {mono:?}");
        return Ok(Report { json, text, positive: true });
    }
    let transcript = Transcript::from_json(&text).map_err(|e| CliError::Negative(e.to_string()))?;
    let states = replay_with(&transcript, removal_rule(args.allow_dominated))
        .map_err(|e| CliError::Negative(e.to_string()))?;
    let last: &BoardState = states.last().expect("replay yields the initial state");
    let json = json!({
        "kind": "transcript",
        "valid": true,
        "config": config_json(&transcript.config),
        "rounds": transcript.round_count(),
        "outcome": transcript.outcome.to_string(),
    });
    let text = format!("valid transcript: {} after {} rounds, final {last}", transcript.outcome, transcript.round_count());
    Ok(Report { json, text, positive: true })
}

/// Remover choosing on the terminal.
#[derive(Clone)]
struct HumanRemover {
    config: GameConfig,
}

impl HumanRemover {
    fn parse(&self, line: &str) -> Option<RemovalAction> {
        let line = line.trim();
        let path = |s: &str| match s {
            "1" => Some(PathId::First),
            "2" => Some(PathId::Second),
            _ => None,
        };
        if self.config.variant.removes_single_chip() {
            let (p, pos) = line.split_once('@')?;
            Some(RemovalAction::ChipChoice { path: path(p.trim())?, position: pos.trim().parse().ok()? })
        } else {
            Some(RemovalAction::PathChoice(path(line)?))
        }
    }
}

impl RemoverStrategy for HumanRemover {
    fn name(&self) -> String {
        "human".into()
    }

    fn choose(&mut self, state: &BoardState, mv: &MoveSet) -> Result<RemovalAction, StrategyError> {
        let prompt = if self.config.variant.removes_single_chip() {
            "delete which chip (path@vertex, e.g. 1@0)? "
        } else {
            "clear which path (1 or 2)? "
        };
        let stdin = io::stdin();
        loop {
            eprintln!("board {state}");
            eprintln!("move  {}", move_text(mv));
            eprint!("{prompt}");
            let mut line = String::new();
            if stdin.lock().read_line(&mut line).map_err(|e| StrategyError::Failure(e.to_string()))? == 0 {
                return Err(StrategyError::Failure("input closed".into()));
            }
            match self.parse(&line) {
                Some(r) => return Ok(r),
                None => eprintln!("could not read `{}`", line.trim()),
            }
        }
    }

    fn state_digest(&self) -> Vec<u8> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn RemoverStrategy> {
        Box::new(self.clone())
    }
}
