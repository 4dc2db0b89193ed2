use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tie::bench::{self, BenchFamily};
use tie::cover::DEFAULT_NODE_BUDGET;
use tie::engine::{self, Method, Verification};
use tie::env::{self, SetCoverSpec};
use tie::model::{DemonstrationSet, ModelError, TeachingInstance};
use tie::Error;

/// Exit codes: 0 success or VALID verdict, 1 counterexample or runtime
/// failure, 2 unusable input (unreadable, malformed, or unrealizable),
/// 3 node budget exhausted (the incumbent result is still written).
#[derive(Parser)]
#[command(name = "tie", version, about = "Minimum teaching sets for linear learners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
    /// Compute a teaching set for an instance
    Solve {
        /// Instance JSON produced by `gen` or hand-written
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        /// Node ceiling for the exact search
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        #[command(flatten)]
        sink: Sink,
    },
    /// Check a teaching set; prints VALID or a counterexample
    Verify {
        instance: PathBuf,
        /// Either a solver result or a bare JSON array of state ids
        teaching: PathBuf,
        /// Worker threads for the state scan
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Time the pipeline across a family of instance sizes
    Bench {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Sizes: comma-separated values and inclusive a..b spans, e.g. 2,4..8
        #[arg(long)]
        range: String,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Output CSV path
        #[arg(long)]
        csv: PathBuf,
        /// Optional two-column gnuplot data file
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run the exact solver at every size, not just small ones
        #[arg(long)]
        exact_all: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Shorthand for `gen reduce`
    Reduce {
        /// Set-cover JSON: {"universe": m, "subsets": [[..], ..]}
        #[arg(long)]
        cover: PathBuf,
        #[command(flatten)]
        sink: Sink,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Pick-the-diamond boards with n slots
    Diamond {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        sink: Sink,
    },
    /// Polygon tower with floors 2..n
    Tower {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        sink: Sink,
    },
    /// Seeded random realizable instance
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        states: usize,
        #[arg(long)]
        actions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        sink: Sink,
    },
    /// Embed a set-cover instance as a teaching problem
    Reduce {
        #[arg(long)]
        cover: PathBuf,
        #[command(flatten)]
        sink: Sink,
    },
}

/// Where a JSON payload goes. With `--json` the payload owns stdout and the
/// human summary moves to stderr.
#[derive(Args)]
struct Sink {
    /// Write the payload to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the payload to stdout instead
    #[arg(long)]
    json: bool,
}

impl Sink {
    fn deliver(&self, payload: &str, summary: &str) -> Result<(), Failure> {
        if let Some(path) = &self.out {
            std::fs::write(path, payload)
                .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))?;
        }
        if self.json {
            println!("{payload}");
            eprintln!("{summary}");
        } else {
            if self.out.is_none() {
                return Err(Failure::input("specify --out FILE or --json".into()));
            }
            println!("{summary}");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Greedy,
    Exact,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Greedy => Method::Greedy,
            MethodArg::Exact => Method::Exact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Diamond,
    Tower,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: String) -> Self {
        Failure { code: 2, message }
    }

    fn runtime(message: String) -> Self {
        Failure { code: 1, message }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Gen { family } => gen(family),
        Command::Solve { instance, method, node_budget, sink } => {
            solve(&instance, method.into(), node_budget, &sink)
        }
        Command::Verify { instance, teaching, threads } => verify(&instance, &teaching, threads),
        Command::Bench { family, range, trials, csv, plot, seed, exact_all, node_budget } => {
            run_bench(family, &range, trials, &csv, plot.as_deref(), seed, exact_all, node_budget)
        }
        Command::Reduce { cover, sink } => gen(GenCommand::Reduce { cover, sink }),
    }
}

fn gen(command: GenCommand) -> Result<u8, Failure> {
    let (instance, sink) = match command {
        GenCommand::Diamond { n, sink } => (env::gen_diamond(n), sink),
        GenCommand::Tower { n, sink } => (env::gen_polygon_tower(n), sink),
        GenCommand::Random { dim, states, actions, seed, sink } => {
            (env::gen_random_realizable(dim, states, actions, seed), sink)
        }
        GenCommand::Reduce { cover, sink } => {
            let spec = SetCoverSpec::load(&cover).map_err(|e| Failure::input(e.to_string()))?;
            (env::reduce_set_cover(&spec), sink)
        }
    };
    let instance = instance.map_err(|e| Failure::input(e.to_string()))?;
    let summary = format!(
        "instance: {} states, {} actions, dimension {}",
        instance.num_states(),
        instance.num_actions(),
        instance.dim()
    );
    sink.deliver(&instance.to_json_string(), &summary)?;
    Ok(0)
}

fn read_instance(path: &Path) -> Result<TeachingInstance, Failure> {
    TeachingInstance::load(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn solve(path: &Path, method: Method, node_budget: u64, sink: &Sink) -> Result<u8, Failure> {
    let instance = read_instance(path)?;
    let result = engine::optimal_teach_with_budget(&instance, method, node_budget)
        .map_err(|e| match e {
            Error::Model(ModelError::NotRealizable) => Failure::input(e.to_string()),
            other => Failure::runtime(other.to_string()),
        })?;
    let summary = format!(
        "teaching set ({}, {}): [{}]\nextreme rays: {} of {} deduped ({} raw vectors)",
        result.method.as_str(),
        if result.optimal {
            "optimal"
        } else if result.budget_exhausted {
            "budget exhausted, best found"
        } else {
            "no optimality claim"
        },
        result.teaching_set.ids(&instance).join(", "),
        result.stats.num_extreme_rays,
        result.stats.num_dedup_rays,
        result.stats.num_diff_vectors,
    );
    sink.deliver(&result.to_json_string(&instance), &summary)?;
    Ok(if result.budget_exhausted { 3 } else { 0 })
}

/// Accepts either `{"teaching_states": [..]}` or a bare array of state ids.
fn read_teaching_ids(path: &Path) -> Result<Vec<String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let list = value
        .get("teaching_states")
        .or(if value.is_array() { Some(&value) } else { None })
        .and_then(|v| v.as_array())
        .ok_or_else(|| {
            Failure::input(format!(
                "{}: expected a teaching_states key or a JSON array of state ids",
                path.display()
            ))
        })?;
    list.iter()
        .map(|v| {
            v.as_str().map(str::to_string).ok_or_else(|| {
                Failure::input(format!("{}: state ids must be strings", path.display()))
            })
        })
        .collect()
}

fn verify(instance_path: &Path, teaching_path: &Path, threads: usize) -> Result<u8, Failure> {
    let instance = read_instance(instance_path)?;
    let ids = read_teaching_ids(teaching_path)?;
    let subset = DemonstrationSet::from_ids(&instance, &ids)
        .map_err(|e| Failure::input(e.to_string()))?;
    let verdict = engine::verify_teaching_set_threaded(&instance, &subset, threads)
        .map_err(|e| Failure::input(e.to_string()))?;
    match verdict {
        Verification::Valid => {
            println!("VALID");
            Ok(0)
        }
        Verification::Counterexample { state, alt_action, witness } => {
            let payload = serde_json::json!({
                "state": instance.state_id(state),
                "alt_action": instance.action_id(alt_action),
                "witness": witness,
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializes"));
            Ok(1)
        }
    }
}

/// Parses "2,4..8,10" into sorted sizes without duplicates removed; order
/// and repeats are the caller's choice.
fn parse_range(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = |why: &str| Failure::input(format!("invalid --range {text:?}: {why}"));
    let mut ns = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(bad("empty segment"));
        }
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad("bad span start"))?;
                let hi: usize = hi.trim().parse().map_err(|_| bad("bad span end"))?;
                if lo > hi {
                    return Err(bad("span start exceeds end"));
                }
                ns.extend(lo..=hi);
            }
            None => ns.push(part.parse().map_err(|_| bad("not an integer"))?),
        }
    }
    Ok(ns)
}

#[allow(clippy::too_many_arguments)]
fn run_bench(
    family: FamilyArg,
    range: &str,
    trials: usize,
    csv: &Path,
    plot: Option<&Path>,
    seed: u64,
    exact_all: bool,
    node_budget: u64,
) -> Result<u8, Failure> {
    let ns = parse_range(range)?;
    let family = match family {
        FamilyArg::Diamond => BenchFamily::Diamond,
        FamilyArg::Tower => BenchFamily::Tower,
    };
    let records = bench::run_bench(family, &ns, trials, seed, exact_all, node_budget);
    for record in &records {
        match &record.error {
            Some(e) => println!("{} n={}: failed: {e}", record.instance_label, record.n),
            None => println!(
                "{} n={}: states={} rays={}/{} td_greedy={}{} total={:.2}ms",
                record.instance_label,
                record.n,
                record.num_states,
                record.num_extreme_rays,
                record.num_dedup_rays,
                record.td_greedy,
                match record.td_exact {
                    Some(k) => format!(" td_exact={k}"),
                    None => String::new(),
                },
                record.runtime_ms_total,
            ),
        }
    }
    bench::write_csv(&records, csv)
        .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", csv.display())))?;
    if let Some(path) = plot {
        bench::write_plot(&records, path)
            .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(0)
}
