//! `symrank`: classes, tables, point counts, fiber censuses, Tate
//! decompositions and the verification suite from the command line.
//!
//! Exit status: 0 success, 1 verification failure or count mismatch,
//! 2 usage error, 3 enumeration budget refused.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;
use symrank::ffield::{self, FieldError, PrimeField, DEFAULT_BUDGET};
use symrank::motivic::{self, MotivicClass, MotivicError, RankCondition, Route, VarietyDescriptor};
use symrank::verify::{self, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "symrank", version, about = "Classes of rank-stratified symmetric matrix varieties")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Maximum number of matrices a brute-force enumeration may visit.
    #[arg(long, global = true, env = "SYMRANK_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Recursion,
    ClosedForm,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct RankArgs {
    /// Exact rank k.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<i64>,
    /// Rank at most K.
    #[arg(long, value_name = "K", allow_negative_numbers = true)]
    at_most: Option<i64>,
    /// Rank between K and L inclusive.
    #[arg(long, num_args = 2, value_names = ["K", "L"], allow_negative_numbers = true)]
    range: Option<Vec<i64>>,
    /// Full rank up to nonzero scalars.
    #[arg(long)]
    projective: bool,
}

impl RankArgs {
    fn condition(&self) -> RankCondition {
        if let Some(k) = self.k {
            RankCondition::Exact(k)
        } else if let Some(k) = self.at_most {
            RankCondition::AtMost(k)
        } else if let Some(r) = &self.range {
            RankCondition::Range(r[0], r[1])
        } else {
            RankCondition::ProjectiveFullRank
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the class of one variety.
    Class {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        rank: RankArgs,
        /// Derivation used for the exact-rank pieces.
        #[arg(long, value_enum, default_value_t = RouteArg::Recursion)]
        route: RouteArg,
    },
    /// Tabulate [Sym^{n,k}] for all k <= n <= max-n.
    Table {
        #[arg(long)]
        max_n: u32,
    },
    /// Evaluate a class at L = q, optionally against brute force.
    Count {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        q: u64,
        /// Also enumerate all matrices over F_q (q must be an odd prime).
        #[arg(long)]
        brute_force: bool,
    },
    /// Census of (minor rank, full rank) against the completion counts.
    Fibers {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
    },
    /// Candidate Tate decomposition of [Sym^{n,k}].
    Decompose {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: i64,
    },
    /// Run the verification suite.
    Verify {
        /// Largest n for the symbolic checks; also caps the counting checks.
        #[arg(long, default_value_t = 12)]
        max_n: u32,
        #[arg(long, default_value_t = 5)]
        count_max_n: u32,
        #[arg(long, default_value_t = 4)]
        fiber_max_n: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        primes: Vec<u64>,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<std::path::PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Budget(String),
}

impl From<MotivicError> for CliError {
    fn from(e: MotivicError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            FieldError::OddPrimeRequired(p) => CliError::Usage(format!(
                "OddPrimeRequired: enumeration needs an odd prime modulus, got {p} \
                 (prime powers are accepted for formula evaluation only)"
            )),
            other => CliError::Usage(other.to_string()),
        }
    }
}

struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failed: false }
    }
}

fn require_format(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--format {format:?} is not supported by `{command}`").to_lowercase()))
    }
}

fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json");
    s.push('\n');
    s
}

fn class_command(format: Format, n: u32, rank: RankCondition, route: RouteArg) -> Result<Output, CliError> {
    require_format(format, &[Format::Text, Format::Json, Format::Latex], "class")?;
    let descriptor = VarietyDescriptor::new(n, rank)?;
    let route = match route {
        RouteArg::Recursion => Route::Recursion,
        RouteArg::ClosedForm => Route::ClosedForm,
    };
    let class = motivic::class_for(descriptor, route)?;
    Ok(Output::ok(match format {
        Format::Json => json_text(&serde_json::to_value(&class).expect("json")),
        Format::Latex => format!("{}\n", class.value.to_latex()),
        _ => format!("{}\n", class.value),
    }))
}

fn table_command(format: Format, max_n: u32) -> Result<Output, CliError> {
    let rows: Vec<MotivicClass> = (0..=max_n)
        .flat_map(|n| (0..=i64::from(n)).map(move |k| motivic::class_exact(n, k)))
        .collect();
    let mut out = String::new();
    match format {
        Format::Text => {
            for c in &rows {
                let RankCondition::Exact(k) = c.descriptor.rank else { unreachable!() };
                writeln!(out, "{:>3} {:>3}  {}", c.descriptor.n, k, c.value).unwrap();
            }
        }
        Format::Csv => {
            out.push_str("n,k,class\n");
            for c in &rows {
                let RankCondition::Exact(k) = c.descriptor.rank else { unreachable!() };
                writeln!(out, "{},{},{}", c.descriptor.n, k, c.value).unwrap();
            }
        }
        Format::Json => out = json_text(&serde_json::to_value(&rows).expect("json")),
        Format::Latex => {
            out.push_str("\\begin{tabular}{rrl}\n$n$ & $k$ & $[\\mathrm{Sym}^{n,k}]$ \\\\\n\\hline\n");
            for c in &rows {
                let RankCondition::Exact(k) = c.descriptor.rank else { unreachable!() };
                writeln!(out, "{} & {} & ${}$ \\\\", c.descriptor.n, k, c.value.to_latex()).unwrap();
            }
            out.push_str("\\end{tabular}\n");
        }
    }
    Ok(Output::ok(out))
}

fn brute_force_count(n: u32, rank: RankCondition, field: &PrimeField, budget: u64) -> Result<u64, CliError> {
    if rank == RankCondition::ProjectiveFullRank {
        return Ok(ffield::projective_count(n as usize, field, budget)?);
    }
    let hist = ffield::enumerate_rank_counts(n as usize, field, budget)?;
    let (lo, hi) = match rank {
        RankCondition::Exact(k) => (k, k),
        RankCondition::AtMost(k) => (0, k),
        RankCondition::Range(k, l) => (k, l),
        RankCondition::ProjectiveFullRank => unreachable!(),
    };
    Ok((lo.max(0)..=hi.min(i64::from(n))).map(|k| hist.counts[k as usize]).sum())
}

fn count_command(
    format: Format,
    budget: u64,
    n: u32,
    rank: RankCondition,
    q: u64,
    brute_force: bool,
) -> Result<Output, CliError> {
    require_format(format, &[Format::Text, Format::Json, Format::Csv], "count")?;
    let descriptor = VarietyDescriptor::new(n, rank)?;
    let class = motivic::class_for(descriptor, Route::Recursion)?;
    let formula = class.point_count(&BigInt::from(q))?;
    let brute = if brute_force {
        let field = PrimeField::new(q)?;
        Some(brute_force_count(n, rank, &field, budget)?)
    } else {
        None
    };
    let verdict = brute.map(|b| if BigInt::from(b) == formula { "MATCH" } else { "MISMATCH" });
    let failed = verdict == Some("MISMATCH");
    let text = match format {
        Format::Json => json_text(&json!({
            "class": class,
            "q": q,
            "formula": formula.to_string(),
            "brute_force": brute.map(|b| b.to_string()),
            "verdict": verdict,
        })),
        Format::Csv => {
            let mut s = String::from("n,q,formula,brute_force,verdict\n");
            let b = brute.map(|b| b.to_string()).unwrap_or_default();
            writeln!(s, "{n},{q},{formula},{b},{}", verdict.unwrap_or("")).unwrap();
            s
        }
        _ => match (brute, verdict) {
            (Some(b), Some(v)) => format!("formula {formula}\nbrute force {b}\n{v}\n"),
            _ => format!("{formula}\n"),
        },
    };
    Ok(Output { text, failed })
}

fn fibers_command(format: Format, budget: u64, n: usize, p: u64) -> Result<Output, CliError> {
    require_format(format, &[Format::Text, Format::Json, Format::Csv], "fibers")?;
    let field = PrimeField::new(p)?;
    let census = ffield::fiber_census(n, &field, budget)?;
    let minors = ffield::enumerate_rank_counts(n - 1, &field, budget)?;

    let mut keys: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (r..=(r + 2).min(n)).map(move |s| (r, s)))
        .collect();
    keys.extend(census.table.keys().filter(|k| !keys.contains(k)).copied().collect::<Vec<_>>());
    keys.sort_unstable();

    let rows: Vec<(usize, usize, u64, u64, bool)> = keys
        .iter()
        .map(|&(r, s)| {
            let count = census.count(r, s);
            let expected = ffield::expected_completions(p, n, r, s) * minors.counts.get(r).copied().unwrap_or(0);
            (r, s, count, expected, count == expected)
        })
        .collect();
    let failed = rows.iter().any(|row| !row.4);
    let verdict = |ok: bool| if ok { "MATCH" } else { "MISMATCH" };

    let text = match format {
        Format::Json => json_text(&json!({
            "n": n,
            "p": p,
            "rows": rows.iter().map(|&(r, s, count, expected, ok)| json!({
                "minor_rank": r,
                "full_rank": s,
                "count": count,
                "expected": expected,
                "verdict": verdict(ok),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("n,p,minor_rank,full_rank,count,expected,verdict\n");
            for &(r, sr, count, expected, ok) in &rows {
                writeln!(s, "{n},{p},{r},{sr},{count},{expected},{}", verdict(ok)).unwrap();
            }
            s
        }
        _ => {
            let mut s = format!("{:>10} {:>9} {:>12} {:>12}  verdict\n", "minor_rank", "full_rank", "count", "expected");
            for &(r, sr, count, expected, ok) in &rows {
                writeln!(s, "{r:>10} {sr:>9} {count:>12} {expected:>12}  {}", verdict(ok)).unwrap();
            }
            s
        }
    };
    Ok(Output { text, failed })
}

fn decompose_command(format: Format, n: u32, k: i64) -> Result<Output, CliError> {
    require_format(format, &[Format::Text, Format::Json], "decompose")?;
    if k < 0 || k > i64::from(n) {
        return Err(CliError::Usage(format!("rank k = {k} must lie in 0..={n}")));
    }
    let class = motivic::class_exact(n, k);
    let summands = class.tate_decomposition()?;
    let status = if n <= 1 || k == 0 { "exact" } else { "candidate" };
    let text = match format {
        Format::Json => json_text(&json!({
            "n": n,
            "k": k,
            "class": class.value,
            "status": status,
            "convention": "minimal-shift",
            "summands": summands,
        })),
        _ => {
            let mut s = String::new();
            if status == "candidate" {
                s.push_str("# candidate decomposition (minimal-shift convention)\n");
            }
            for t in &summands {
                writeln!(s, "{t}").unwrap();
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn verify_command(
    format: Format,
    budget: u64,
    max_n: u32,
    count_max_n: u32,
    fiber_max_n: u32,
    primes: Vec<u64>,
    report_path: Option<std::path::PathBuf>,
) -> Result<Output, CliError> {
    require_format(format, &[Format::Text, Format::Json], "verify")?;
    let config = SuiteConfig {
        symbolic_max_n: max_n,
        count_max_n: count_max_n.min(max_n),
        fiber_max_n: fiber_max_n.min(max_n),
        projective_max_n: max_n,
        primes,
        budget,
    };
    let report = verify::run_suite(&config)?;
    let json = json_text(&serde_json::to_value(&report).expect("json"));
    if let Some(path) = report_path {
        std::fs::write(&path, &json)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = match format {
        Format::Json => json,
        _ => report.render_table(),
    };
    Ok(Output { text, failed: report.has_failures() })
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let format = cli.format;
    let budget = cli.budget;
    match cli.command {
        Command::Class { n, rank, route } => class_command(format, n, rank.condition(), route),
        Command::Table { max_n } => table_command(format, max_n),
        Command::Count { n, rank, q, brute_force } => {
            count_command(format, budget, n, rank.condition(), q, brute_force)
        }
        Command::Fibers { n, p } => {
            if n == 0 {
                return Err(CliError::Usage("fibers needs n >= 1".into()));
            }
            fibers_command(format, budget, n, p)
        }
        Command::Decompose { n, k } => decompose_command(format, n, k),
        Command::Verify { max_n, count_max_n, fiber_max_n, primes, report } => {
            verify_command(format, budget, max_n, count_max_n, fiber_max_n, primes, report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
