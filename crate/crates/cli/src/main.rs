//! `pgfatal`: solve parity games with fatal-attractor partial solvers,
//! generate benchmark families, run timed sweeps, compare solvers and
//! verify solutions.

mod bench;
mod families;
mod jsonio;
mod solver_choice;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pgfatal_core::ctl::Ctl;
use pgfatal_core::reference::{complete_ctl, verify_solution, zielonka_ctl};
use pgfatal_core::{parse_pgsolver, serialize_pgsolver, Game, GameView, Player};

use bench::{run_bench, write_records, BenchConfig, BenchJob};
use families::parse_family_spec;
use solver_choice::SolverChoice;

#[derive(Parser)]
#[command(name = "pgfatal", version, about = "Parity-game partial solvers based on fatal attractors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one game file with a named solver.
    Solve(SolveArgs),
    /// Generate a game family instance in PGSolver format.
    Gen(GenArgs),
    /// Run solvers over families or game files, recording one line per run.
    Bench(BenchArgs),
    /// Complete two solvers on the same games and report divergences.
    Compare(CompareArgs),
    /// Check a solution file against a game.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Game in PGSolver format.
    file: PathBuf,
    /// psol, psolB, psolQ, lift-<partial>, zielonka or complete:<rho>.
    solver: SolverChoice,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Include strategies in the output.
    #[arg(long)]
    strategies: bool,
    /// Abort the run after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct GenArgs {
    /// Family name: clique, ladder, random, buchi, det or weak.
    family: String,
    /// Parameters, e.g. `64` for clique/ladder or `n=500,l=1,u=5,c=5`.
    params: String,
    /// Seed override for the random families.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Family specs (`clique:8,64`, `random:n=500,l=1,u=5,c=5,count=10`)
    /// or paths to .gm files / directories.
    specs: Vec<String>,
    /// Comma-separated solver list.
    #[arg(long, value_delimiter = ',', required = true)]
    solvers: Vec<SolverChoice>,
    /// Per-run wall-clock timeout in seconds (1200 gives a 20-minute budget).
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Repetitions per (game, solver); the mean time is reported.
    #[arg(long, default_value_t = 1)]
    reps: u32,
    /// After a partial solver, run zielonka on its residual within the
    /// same deadline and include the time.
    #[arg(long)]
    complete: bool,
    /// Emit JSON lines instead of CSV.
    #[arg(long)]
    jsonl: bool,
    /// Write records to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    /// Game files.
    files: Vec<PathBuf>,
    /// First solver.
    #[arg(long)]
    a: SolverChoice,
    /// Second solver.
    #[arg(long)]
    b: SolverChoice,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Game in PGSolver format.
    file: PathBuf,
    /// Solution JSON: {"regions": {"0": [..], "1": [..]},
    /// "strategy": {"0": {..}, "1": {..}}}.
    solution: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn load_game(path: &Path) -> Result<Game> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pgsolver(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn warn_uncertified(solver: &SolverChoice) {
    if let Some(kind) = solver.uncertified_lift() {
        eprintln!(
            "warning: lift soundness is proven for psolB only; lift-{} output may be unsound",
            kind.name()
        );
    }
}

fn node_list(game: &Game, nodes: &pgfatal_core::NodeSet) -> String {
    let items: Vec<String> = nodes
        .iter()
        .map(|v| match game.name(v) {
            Some(name) => name.to_string(),
            None => game.external_id(v).to_string(),
        })
        .collect();
    format!("{{{}}}", items.join(", "))
}

/// Solver work runs on a dedicated thread with a deep stack; zielonka
/// recursion scales with the node count.
fn with_solver_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(256 * 1024 * 1024)
            .spawn_scoped(scope, f)
            .expect("spawn solver thread")
            .join()
            .expect("solver thread panicked")
    })
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    warn_uncertified(&args.solver);
    let game = load_game(&args.file)?;
    let view = GameView::full(&game);
    let ctl = match args.timeout {
        Some(secs) => Ctl::with_timeout(Duration::from_secs_f64(secs)),
        None => Ctl::unbounded(),
    };

    match args.solver {
        SolverChoice::Zielonka | SolverChoice::Complete(_) => {
            let outcome = with_solver_stack(|| match args.solver {
                SolverChoice::Zielonka => zielonka_ctl(&view, &ctl),
                SolverChoice::Complete(rho) => {
                    complete_ctl(rho, &view, &ctl).map(|(full, _)| full)
                }
                SolverChoice::Partial(_) => unreachable!(),
            });
            let Ok(solution) = outcome else { bail!("aborted: timeout") };
            if args.json {
                let json = jsonio::solution_to_json(&game, &solution);
                println!("{}", serde_json::to_string_pretty(&json)?);
            } else {
                println!("W0 = {}", node_list(&game, &solution.regions[Player::Even]));
                println!("W1 = {}", node_list(&game, &solution.regions[Player::Odd]));
                println!("residual = {{}}");
                if args.strategies {
                    for p in Player::both() {
                        let moves: Vec<String> = solution.strategy[p]
                            .iter()
                            .map(|(v, w)| {
                                format!("{}->{}", game.external_id(v), game.external_id(w))
                            })
                            .collect();
                        println!("strategy {p}: {}", moves.join(" "));
                    }
                }
            }
            Ok(0)
        }
        SolverChoice::Partial(rho) => {
            let outcome = with_solver_stack(|| rho.run(&view, &ctl));
            let Ok(result) = outcome else { bail!("aborted: timeout") };
            if args.json {
                let json = jsonio::partial_to_json(&game, rho.name(), &result, args.strategies);
                println!("{}", serde_json::to_string_pretty(&json)?);
            } else {
                println!("won[0] = {}", node_list(&game, &result.won[Player::Even]));
                println!("won[1] = {}", node_list(&game, &result.won[Player::Odd]));
                println!("residual = {}", node_list(&game, result.residual.alive()));
                let stats = &result.stats;
                println!(
                    "stats: fatal_attractors={} edges_removed={} recursive_calls={} elapsed={:?}",
                    stats.fatal_attractors,
                    stats.edges_removed,
                    stats.recursive_calls,
                    stats.elapsed
                );
                if args.strategies {
                    for p in Player::both() {
                        let moves: Vec<String> = result.strategy[p]
                            .iter()
                            .map(|(v, w)| {
                                format!("{}->{}", game.external_id(v), game.external_id(w))
                            })
                            .collect();
                        println!("strategy {p}: {}", moves.join(" "));
                    }
                }
            }
            Ok(if result.solved_completely() { 0 } else { 2 })
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let mut params = args.params.clone();
    if let Some(seed) = args.seed {
        if matches!(args.family.as_str(), "clique" | "ladder") {
            bail!("family '{}' is deterministic; --seed does not apply", args.family);
        }
        params = params
            .split(',')
            .filter(|kv| !kv.starts_with("seed="))
            .collect::<Vec<_>>()
            .join(",");
        params = format!("{params},seed={seed}");
    }
    let spec = format!("{}:{}", args.family, params);
    let Some(mut instances) = parse_family_spec(&spec)? else {
        bail!("unknown family '{}'", args.family);
    };
    if instances.len() != 1 {
        bail!("gen produces a single instance; use bench for sweeps");
    }
    let game = instances.pop().expect("checked length").build()?;
    let text = serialize_pgsolver(&game);
    match args.out {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn gather_jobs(specs: &[String]) -> Result<Vec<BenchJob>> {
    let mut jobs = Vec::new();
    for spec in specs {
        if let Some(instances) = parse_family_spec(spec)? {
            let width = instances.len().to_string().len();
            for (i, family) in instances.iter().enumerate() {
                let game = family.build()?;
                jobs.push(BenchJob {
                    game_id: format!("{}:{}#{:0width$}", family.name(), family.params(), i),
                    family: family.name().to_string(),
                    params: family.params(),
                    game,
                });
            }
            continue;
        }
        let path = Path::new(spec);
        let mut files: Vec<PathBuf> = Vec::new();
        if path.is_dir() {
            for entry in fs::read_dir(path).with_context(|| format!("reading {spec}"))? {
                let p = entry?.path();
                if p.extension().is_some_and(|e| e == "gm") {
                    files.push(p);
                }
            }
            files.sort();
        } else {
            files.push(path.to_path_buf());
        }
        for file in files {
            match load_game(&file) {
                Ok(game) => jobs.push(BenchJob {
                    game_id: file.display().to_string(),
                    family: "file".to_string(),
                    params: String::new(),
                    game,
                }),
                Err(err) => eprintln!("skipping unreadable input: {err:#}"),
            }
        }
    }
    Ok(jobs)
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    if args.specs.is_empty() {
        bail!("no inputs given");
    }
    for solver in &args.solvers {
        warn_uncertified(solver);
    }
    let jobs = gather_jobs(&args.specs)?;
    if jobs.is_empty() {
        bail!("no readable games in the given inputs");
    }
    let solvers = if args.complete {
        args.solvers
            .iter()
            .map(|s| match s {
                SolverChoice::Partial(rho) => SolverChoice::Complete(*rho),
                other => *other,
            })
            .collect()
    } else {
        args.solvers.clone()
    };
    let config = BenchConfig {
        solvers,
        timeout: Duration::from_secs_f64(args.timeout),
        repetitions: args.reps,
        jobs: args.jobs.unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        }),
    };
    let records = run_bench(&jobs, &config);

    match args.out {
        Some(path) => {
            let mut file =
                fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_records(&mut file, &records, args.jsonl)?;
        }
        None => {
            let stdout = std::io::stdout();
            write_records(&mut stdout.lock(), &records, args.jsonl)?;
        }
    }
    Ok(0)
}

fn cmd_compare(args: CompareArgs) -> Result<i32> {
    if args.files.is_empty() {
        bail!("no game files given");
    }
    for solver in [&args.a, &args.b] {
        warn_uncertified(solver);
    }

    #[derive(serde::Serialize)]
    struct Row {
        game: String,
        regions_match: bool,
        residual_a: Option<u64>,
        residual_b: Option<u64>,
    }

    let ctl = Ctl::unbounded();
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for file in &args.files {
        let game = load_game(file)?;
        let view = GameView::full(&game);

        let solve = |choice: SolverChoice| -> (pgfatal_core::FullSolution, Option<u64>) {
            with_solver_stack(|| match choice {
                SolverChoice::Zielonka => (zielonka_ctl(&view, &ctl).expect("unbounded"), None),
                SolverChoice::Partial(rho) | SolverChoice::Complete(rho) => {
                    let (full, partial) = complete_ctl(rho, &view, &ctl).expect("unbounded");
                    (full, Some(partial.residual.alive_count() as u64))
                }
            })
        };
        let (full_a, residual_a) = solve(args.a);
        let (full_b, residual_b) = solve(args.b);
        let regions_match =
            Player::both().iter().all(|&p| full_a.regions[p] == full_b.regions[p]);
        if !regions_match {
            mismatches += 1;
        }
        rows.push(Row {
            game: file.display().to_string(),
            regions_match,
            residual_a,
            residual_b,
        });
    }

    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        for row in &rows {
            let fmt_res = |r: Option<u64>| match r {
                Some(k) => format!("residual {k}"),
                None => "full".to_string(),
            };
            println!(
                "{}: regions {} ({} = {}, {} = {})",
                row.game,
                if row.regions_match { "consistent" } else { "MISMATCH" },
                args.a,
                fmt_res(row.residual_a),
                args.b,
                fmt_res(row.residual_b),
            );
        }
    }
    Ok(if mismatches == 0 { 0 } else { 2 })
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let game = load_game(&args.file)?;
    let text = fs::read_to_string(&args.solution)
        .with_context(|| format!("reading {}", args.solution.display()))?;
    let json: jsonio::SolutionJson = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.solution.display()))?;
    let solution = jsonio::solution_from_json(&game, &json)?;
    match verify_solution(&GameView::full(&game), &solution) {
        Ok(()) => {
            println!("verified: regions and strategies are consistent");
            Ok(0)
        }
        Err(err) => {
            println!("verification failed: {err}");
            Ok(2)
        }
    }
}
