//! Command-line front end: build, export, and check maximum-size and
//! perfect single-deletion-correcting codes of length 4, together with the
//! quadruple systems, grouped designs, bounds, and searches behind them.
//!
//! Exit codes: 0 success, 2 validation failure, 3 unsupported parameters or
//! unreadable/ill-formed files, 4 budget exhaustion.

mod files;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use delcode::{
    build_gdd_with_budget, build_sqs_step_traced, deletion_ball, expected_gdd_blocks,
    find_ball_collision, has_step_property, is_gdd, is_perfect, is_sqs, levenshtein_bound,
    max_code_search, min_distance, optimal_code_with_budget, perfect_code_with_budget, profile,
    theorem2_bound, Budget, Code, Error, Word, WordClass,
};
use files::{read_code_file, render_code_file};

const DEFAULT_BUDGET_SECS: u64 = 600;

#[derive(Parser)]
#[command(
    name = "delcode",
    about = "Builds and checks single-deletion-correcting codes of length 4 over even alphabets",
    version
)]
struct Cli {
    /// Output format; only "text" is available.
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Accepted for interface stability: every run is already seedless and
    /// deterministic.
    #[arg(long, global = true)]
    seedless_deterministic: bool,

    /// Wall-clock budget in seconds for completion and search steps.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for validation; affects speed only, never output.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the maximum-size code for an even alphabet of size q.
    Construct {
        #[arg(long)]
        q: usize,
        /// Write the code file here; without it the file text goes to
        /// standard output with the summary appended as comments.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the perfect variant whose balls tile all of B_q^3.
    Perfect {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a code file: ball disjointness, size against the sharp bound,
    /// and coverage.
    Verify { file: PathBuf },
    /// Build a Steiner quadruple system with the step property.
    Sqs {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the grouped design on m groups of six points.
    Gdd {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print general/sharp bound rows for a single q or an inclusive range
    /// like 4..10 (even q only).
    Bound {
        #[arg(long)]
        q: String,
    },
    /// Exhaustive branch-and-bound search for the maximum code size.
    Search {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the word-class census and coverage of a code file.
    Profile { file: PathBuf },
}

/// A failed command, carrying the exit code contract.
enum Failure {
    /// A constructed or supplied object failed validation (exit 2).
    Validation(String),
    /// Parameters or input files outside the supported domain (exit 3).
    Unsupported(String),
    /// A budget ran out before the work finished (exit 4).
    Budget(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Unsupported(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidArgument(m) | Error::UnsupportedParameter(m) => Failure::Unsupported(m),
            Error::Construction(m) => Failure::Validation(m),
            Error::BudgetExhausted(m) => Failure::Budget(m),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes early (e.g. `| head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.format != "text" {
        return Err(Failure::Unsupported(format!(
            "unsupported format {:?}; only \"text\" is available",
            cli.format
        )));
    }
    if let Some(jobs) = cli.jobs {
        // Pool size is a speed knob only; a failure to resize (the pool can
        // be built once per process) never changes results.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let budget = Budget::with_duration(Duration::from_secs(
        cli.budget.unwrap_or(DEFAULT_BUDGET_SECS),
    ));

    match cli.command {
        Command::Construct { q, out } => run_construct(q, out.as_deref(), &budget),
        Command::Perfect { q, out } => run_perfect(q, out.as_deref(), &budget),
        Command::Verify { file } => run_verify(&file),
        Command::Sqs { q, out } => run_sqs(q, out.as_deref()),
        Command::Gdd { m, out } => run_gdd(m, out.as_deref(), &budget),
        Command::Bound { q } => run_bound(&q),
        Command::Search { n, q, out } => run_search(n, q, out.as_deref(), &budget),
        Command::Profile { file } => run_profile(&file),
    }
}

/// Union size and multiplicity-counted size of all radius-1 balls.
fn coverage(code: &Code) -> (usize, usize) {
    let mut union: BTreeSet<Word> = BTreeSet::new();
    let mut total = 0usize;
    for w in code.words() {
        let ball = deletion_ball(w, 1).expect("length-4 words always have radius-1 balls");
        total += ball.len();
        union.extend(ball);
    }
    (total, union.len())
}

/// Writes `text` to `out` with the summary on standard output, or — without
/// `out` — streams the file text itself to standard output followed by the
/// summary as `#` comments, so the stream is still a readable code file.
fn emit(text: &str, out: Option<&Path>, summary: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| {
                Failure::Unsupported(format!("cannot write {}: {e}", path.display()))
            })?;
            println!("{summary}");
            println!("file: {}", path.display());
        }
        None => {
            print!("{text}");
            for line in summary.lines() {
                println!("# {line}");
            }
        }
    }
    Ok(())
}

fn run_construct(q: usize, out: Option<&Path>, budget: &Budget) -> Result<(), Failure> {
    let (code, trace) = optimal_code_with_budget(q, budget)?;
    let bound = theorem2_bound(q)?;
    let met = if code.len() as u64 == bound { "yes" } else { "no" };
    let mut summary = String::new();
    writeln!(summary, "q: {q}").unwrap();
    writeln!(summary, "route: {}", trace.route_string()).unwrap();
    writeln!(summary, "optimal: {}/{bound}", code.len()).unwrap();
    write!(summary, "bound met: {met}").unwrap();
    emit(&render_code_file(&code, "optimal"), out, &summary)?;
    if code.len() as u64 != bound {
        return Err(Failure::Validation(format!(
            "constructed {} words where the bound allows {bound}",
            code.len()
        )));
    }
    Ok(())
}

fn run_perfect(q: usize, out: Option<&Path>, budget: &Budget) -> Result<(), Failure> {
    let code = perfect_code_with_budget(q, budget)?;
    let bound = theorem2_bound(q)?;
    let (_, covered) = coverage(&code);
    let cube = q * q * q;
    let mut summary = String::new();
    writeln!(summary, "q: {q}").unwrap();
    writeln!(summary, "perfect: {}/{bound}", code.len()).unwrap();
    write!(summary, "coverage: {covered}/{cube}").unwrap();
    emit(&render_code_file(&code, "perfect"), out, &summary)?;
    if covered != cube {
        return Err(Failure::Validation(format!(
            "coverage {covered} misses {} short words",
            cube - covered
        )));
    }
    Ok(())
}

fn run_verify(path: &Path) -> Result<(), Failure> {
    let parsed = read_code_file(path).map_err(Failure::Unsupported)?;
    let code = parsed.code;
    let q = code.q() as usize;
    println!("file: {}", path.display());
    println!("words: {}", code.len());
    println!("q: {q}");

    if let Some((x, y, shared)) = find_ball_collision(&code, 1) {
        println!("collision: words [{x}] and [{y}] share deleted word [{shared}]");
        return Err(Failure::Validation(
            "deletion balls overlap; the code cannot correct one deletion".into(),
        ));
    }
    if code.len() >= 2 {
        // Independent route: the pairwise distance must exceed 2 exactly
        // when the balls are disjoint.
        let dist = min_distance(&code).map_err(Failure::from)?;
        if dist <= 2 {
            return Err(Failure::Validation(format!(
                "distance check disagrees with the ball check: min distance {dist}"
            )));
        }
        println!("min distance: {dist}");
    }
    println!("single-deletion-correcting: yes");

    match theorem2_bound(q) {
        Ok(bound) => println!("size vs bound: {}/{bound}", code.len()),
        Err(_) => println!("size vs bound: {}/-", code.len()),
    }

    let (_, covered) = coverage(&code);
    let cube = q * q * q;
    let perfect = is_perfect(&code, 1).map_err(Failure::from)?;
    println!(
        "perfect: {} (covers {covered}/{cube})",
        if perfect { "yes" } else { "no" }
    );
    if parsed.kind.as_deref() == Some("perfect") && !perfect {
        return Err(Failure::Validation(
            "file declares a perfect code but its coverage is incomplete".into(),
        ));
    }
    Ok(())
}

fn run_sqs(q: usize, out: Option<&Path>) -> Result<(), Failure> {
    let (system, trace) = build_sqs_step_traced(q)?;
    let expected = q * (q - 1) * (q - 2) / 24;
    let valid = is_sqs(system.quads(), q);
    let step = has_step_property(&system);
    let cases: Vec<String> = trace
        .iter()
        .map(|u| match u.case {
            Some(c) => format!("{c}({})", u.q),
            None => format!("base({})", u.q),
        })
        .collect();

    let mut summary = String::new();
    writeln!(summary, "q: {q}").unwrap();
    writeln!(summary, "quads: {}/{expected}", system.len()).unwrap();
    writeln!(summary, "cases: {}", cases.join(" ")).unwrap();
    writeln!(summary, "quadruple system: {}", if valid { "yes" } else { "no" }).unwrap();
    write!(summary, "step property: {}", if step { "yes" } else { "no" }).unwrap();

    let mut text = String::new();
    writeln!(text, "# sqs q={q} size={}", system.len()).unwrap();
    for quad in system.quads() {
        writeln!(text, "{quad}").unwrap();
    }
    emit(&text, out, &summary)?;

    if !valid || !step {
        return Err(Failure::Validation(format!(
            "quadruple system for q={q} failed validation"
        )));
    }
    Ok(())
}

fn run_gdd(m: usize, out: Option<&Path>, budget: &Budget) -> Result<(), Failure> {
    let design = build_gdd_with_budget(m, budget)?;
    let valid = is_gdd(&design);
    let mut summary = String::new();
    writeln!(summary, "m: {m}").unwrap();
    writeln!(summary, "points: {}", 6 * m).unwrap();
    writeln!(
        summary,
        "blocks: {}/{}",
        design.blocks().len(),
        expected_gdd_blocks(m)
    )
    .unwrap();
    writeln!(summary, "marked: {}", design.marked_a1().len()).unwrap();
    write!(summary, "grouped design: {}", if valid { "yes" } else { "no" }).unwrap();

    let mut text = String::new();
    writeln!(text, "# gdd m={m}").unwrap();
    for block in design.blocks() {
        writeln!(text, "{block}").unwrap();
    }
    emit(&text, out, &summary)?;

    if !valid {
        return Err(Failure::Validation(format!(
            "grouped design on {m} groups failed validation"
        )));
    }
    Ok(())
}

fn parse_q_range(spec: &str) -> Result<(usize, usize), Failure> {
    let bad = || {
        Failure::Unsupported(format!(
            "cannot parse {spec:?}: expected a number or an inclusive range like 4..10"
        ))
    };
    let s = spec.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, s),
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Failure::Unsupported(format!(
            "empty range {spec:?}: {lo} exceeds {hi}"
        )));
    }
    Ok((lo, hi))
}

fn run_bound(range: &str) -> Result<(), Failure> {
    let (lo, hi) = parse_q_range(range)?;
    for q in lo..=hi {
        if q < 2 || q % 2 != 0 {
            continue;
        }
        let general = levenshtein_bound(4, q).map_err(Failure::from)?;
        let sharp = theorem2_bound(q).map_err(Failure::from)?;
        println!("{q}: {general}/{sharp}");
    }
    Ok(())
}

fn run_search(n: usize, q: usize, out: Option<&Path>, budget: &Budget) -> Result<(), Failure> {
    let outcome = max_code_search(n, q, budget).map_err(Failure::from)?;
    println!("n: {n}");
    println!("q: {q}");
    if !outcome.exact {
        println!(
            "best size found: {} (budget exhausted; lower bound only)",
            outcome.size
        );
        return Err(Failure::Budget(
            "search budget exhausted before the space was explored".into(),
        ));
    }
    println!("maximum code size: {} (exact)", outcome.size);
    if n == 4 {
        if let Ok(bound) = theorem2_bound(q) {
            let matches = outcome.size as u64 == bound;
            println!("matches sharp bound: {}", if matches { "yes" } else { "no" });
        }
    }
    emit(
        &render_code_file(&outcome.witness, "optimal"),
        out,
        &format!("witness: {} words", outcome.size),
    )
}

fn run_profile(path: &Path) -> Result<(), Failure> {
    let parsed = read_code_file(path).map_err(Failure::Unsupported)?;
    let code = parsed.code;
    let prof = profile(&code);
    println!("file: {}", path.display());
    println!("words: {}", code.len());
    println!("q: {}", code.q());
    for class in WordClass::ALL {
        println!("{class}: {}", prof.count(class));
    }
    let (total, union) = coverage(&code);
    let cube = (code.q() as usize).pow(3);
    println!("coverage: {union}/{cube}");
    if total != union {
        println!("note: balls overlap ({total} covered counting multiplicity)");
    }
    Ok(())
}
