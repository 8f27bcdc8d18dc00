//! `sl3pretzel`: colored sl₃ invariants of pretzel links from the command line.

mod cache;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sl3_pretzel::links::{jones, Family, InvariantResult, PretzelSpec};
use sl3_pretzel::qcalc::{exponent_string, hat, run_identity_suite};
use sl3_pretzel::reference::{self, FixtureReport};
use sl3_pretzel::tails::{tail_report, TailReport};
use sl3_pretzel::webs::{diagram_for_spec, evaluate_link_with, OracleOptions, DEFAULT_CLASP_BOUND};
use sl3_pretzel::{Error, QLaurent};

use cache::Cache;

const CACHE_ENV: &str = "SL3PRETZEL_CACHE";

#[derive(Parser)]
#[command(name = "sl3pretzel", version, about = "Colored sl3 invariants of pretzel links")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Cache directory (overrides the SL3PRETZEL_CACHE environment variable).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Disable the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print J_(n,0) of a link for one color or a range of colors.
    Compute(ComputeArgs),
    /// Print the normalized rows and the stable tail through q^order.
    Tail(TailArgs),
    /// Replay the published reference values.
    Verify,
    /// Compare the closed formula against the web-evaluation oracle.
    OracleCheck(OracleArgs),
    /// Check the quantum-integer identities on a grid.
    Identities(IdentityArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// Family: even-even-even, even-even-even-mixed, odd-odd-even,
    /// odd-even-even, odd-even-even-alt, torus, 8_10, 8_15, 8_20, 8_21.
    #[arg(long)]
    family: String,
    /// Comma-separated family parameters, e.g. `1,1,1` (torus: `m`).
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    params: String,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Color n (n ≥ 1).
    #[arg(long, conflicts_with = "n_range")]
    n: Option<i64>,
    /// Inclusive color range `A..B`.
    #[arg(long, value_name = "A..B")]
    n_range: Option<String>,
}

#[derive(Args)]
struct TailArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Truncation order (≥ 0).
    #[arg(long, allow_hyphen_values = true)]
    order: i64,
}

#[derive(Args)]
struct OracleArgs {
    /// Family to check; without it a built-in list of links is checked.
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated family parameters (with --family).
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    params: String,
    /// Largest color compared.
    #[arg(long, default_value_t = 2)]
    oracle_max_n: i64,
    /// Largest clasp the oracle may expand; raise it together with
    /// --oracle-max-n (cost grows very quickly).
    #[arg(long, default_value_t = DEFAULT_CLASP_BOUND)]
    clasp_bound: usize,
}

#[derive(Args)]
struct IdentityArgs {
    /// Arguments range over 0..=max.
    #[arg(long, default_value_t = 12)]
    max: i64,
}

/// How a run ended: success, a failed check (exit 1) or bad input (exit 2).
enum Failure {
    Mismatch(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_)
            | Error::OutOfRange(_)
            | Error::NegativeArgument { .. }
            | Error::ClaspTooLarge { .. } => Failure::Config(e.to_string()),
            other => Failure::Mismatch(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cache = open_cache(&cli);
    let result = match &cli.command {
        Command::Compute(a) => compute(a, cli.format, &mut cache),
        Command::Tail(a) => tail(a, cli.format, &mut cache),
        Command::Verify => verify(cli.format),
        Command::OracleCheck(a) => oracle_check(a, cli.format, &mut cache),
        Command::Identities(a) => identities(a, cli.format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn open_cache(cli: &Cli) -> Cache {
    if cli.no_cache {
        return Cache::disabled();
    }
    let root = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    match root {
        Some(dir) => Cache::open(&dir),
        None => Cache::disabled(),
    }
}

fn parse_spec(family: &str, params: &str) -> Result<PretzelSpec, Failure> {
    let fam = Family::from_name(family).ok_or_else(|| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        Failure::Config(format!("unknown family `{family}` (expected one of {})", names.join(", ")))
    })?;
    let params: Vec<i64> = params
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Config(format!("parameter `{s}` is not an integer"))))
        .collect::<Result<_, _>>()?;
    Ok(PretzelSpec::new(fam, params)?)
}

fn parse_range(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Config(format!("--n-range expects `A..B`, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if b < a {
        return Err(Failure::Config(format!("empty color range {a}..{b}")));
    }
    Ok((a, b))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

/// `q^{s}·J` or `-q^{s}·J` as a label for the normalized form of `j`.
fn normalization_label(j: &QLaurent) -> String {
    let (low, c) = j.terms().next().expect("nonzero invariant");
    let sign = if c.to_string().starts_with('-') { "-" } else { "" };
    match -low {
        0 => format!("{sign}J"),
        s => format!("{sign}q^{{{}}}·J", exponent_string(s)),
    }
}

fn compute(args: &ComputeArgs, format: Format, cache: &mut Cache) -> Outcome {
    let spec = parse_spec(&args.spec.family, &args.spec.params)?;
    let (lo, hi) = match (&args.n, &args.n_range) {
        (Some(n), None) => (*n, *n),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => return Err(Failure::Config("give --n or --n-range".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects --n with --n-range"),
    };
    if lo < 1 {
        return Err(Failure::Config(format!("colors start at n = 1, got {lo}")));
    }
    let mut rows = Vec::new();
    for n in lo..=hi {
        let key = json!({ "command": "compute", "spec": &spec, "n": n });
        let r: InvariantResult = cache.get_or_compute(&key, || jones(n, &spec))?;
        rows.push(r);
    }
    match format {
        Format::Json => {
            let results: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "value": r.value,
                        "normalized": hat(&r.value).ok(),
                        "writhe_used": r.writhe_used,
                        "summand_count": r.summand_count,
                    })
                })
                .collect();
            print_json(&json!({ "spec": spec.to_string(), "family": spec.family.name(), "params": spec.params, "results": results }));
        }
        Format::Plain => {
            for r in &rows {
                println!("{spec}  n={}  writhe={}  summands={}", r.n, r.writhe_used, r.summand_count);
                println!("J = {}", r.value);
                if let Ok(h) = hat(&r.value) {
                    if h != r.value {
                        println!("{} = {h}", normalization_label(&r.value));
                    }
                }
            }
        }
    }
    Ok(())
}

fn tail(args: &TailArgs, format: Format, cache: &mut Cache) -> Outcome {
    let spec = parse_spec(&args.spec.family, &args.spec.params)?;
    let key = json!({ "command": "tail", "spec": &spec, "n": args.order });
    let report: TailReport = cache.get_or_compute(&key, || tail_report(&spec, args.order))?;
    match format {
        Format::Json => print_json(&report),
        Format::Plain => {
            println!("{spec}: normalized rows through q^{}", report.verified_order);
            for row in &report.rows {
                println!("  n={:<3} {}", row.n, row.coeffs.join(" "));
            }
            println!("tail = {} + O(q^{})", series_string(&report.stable_prefix), report.verified_order + 1);
            println!("verified through q^{}", report.verified_order);
        }
    }
    Ok(())
}

fn series_string(coeffs: &[String]) -> String {
    let terms = coeffs.iter().enumerate().map(|(i, c)| (i as i64, c.parse::<i64>().expect("integer coefficient")));
    let q = QLaurent::from_int_powers(terms);
    if q.is_zero() {
        "0".into()
    } else {
        q.to_string()
    }
}

fn verify(format: Format) -> Outcome {
    let reports = reference::compare_all()?;
    let ok = reports.iter().all(FixtureReport::passed);
    match format {
        Format::Json => print_json(&json!({ "passed": ok, "fixtures": reports })),
        Format::Plain => {
            for r in &reports {
                let status = if r.passed() { "ok" } else { "MISMATCH" };
                println!("{} n={}: {} coefficients compared: {status}", r.fixture, r.n, r.compared);
                for m in &r.mismatches {
                    match &m.correction {
                        Some(c) => println!(
                            "    q^{}: printed {}, computed {} (listed correction: {})",
                            m.power, m.printed, m.computed, c.evidence
                        ),
                        None => println!("    q^{}: printed {}, computed {} (unexplained)", m.power, m.printed, m.computed),
                    }
                }
            }
            println!("{}", if ok { "all fixtures reproduced" } else { "fixture mismatch" });
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch("reference values not reproduced".into()))
    }
}

fn default_oracle_specs() -> Result<Vec<PretzelSpec>, Error> {
    Ok(vec![
        PretzelSpec::torus(3)?,
        PretzelSpec::torus(-5)?,
        PretzelSpec::new(Family::EvenEvenEven, vec![1, -1, 0])?,
        PretzelSpec::new(Family::OddOddEven, vec![1, 1, 1])?,
        PretzelSpec::new(Family::OddOddEven, vec![0, 0, 1])?,
        PretzelSpec::appendix(Family::Appendix8_20)?,
    ])
}

fn oracle_check(args: &OracleArgs, format: Format, cache: &mut Cache) -> Outcome {
    if args.oracle_max_n < 1 {
        return Err(Failure::Config(format!("--oracle-max-n must be at least 1, got {}", args.oracle_max_n)));
    }
    if args.oracle_max_n as usize > args.clasp_bound {
        return Err(Failure::Config(format!(
            "--oracle-max-n {} exceeds the clasp bound {}; pass --clasp-bound {} to allow it",
            args.oracle_max_n, args.clasp_bound, args.oracle_max_n
        )));
    }
    let specs = match &args.family {
        Some(f) => vec![parse_spec(f, &args.params)?],
        None => default_oracle_specs()?,
    };
    let opts = OracleOptions { clasp_bound: args.clasp_bound };
    let mut rows = Vec::new();
    for spec in &specs {
        let diagram = diagram_for_spec(spec)?;
        for n in 1..=args.oracle_max_n {
            let formula: InvariantResult =
                cache.get_or_compute(&json!({ "command": "compute", "spec": spec, "n": n }), || jones(n, spec))?;
            let oracle: QLaurent = cache.get_or_compute(&json!({ "command": "oracle-check", "spec": spec, "n": n }), || {
                evaluate_link_with(n as usize, &diagram, opts)
            })?;
            let agrees = formula.value == oracle;
            if format == Format::Plain {
                println!("{spec}  n={n}: {}", if agrees { "formula = oracle" } else { "MISMATCH" });
                if !agrees {
                    println!("    formula: {}\n    oracle:  {oracle}", formula.value);
                }
            }
            rows.push(json!({ "spec": spec.to_string(), "n": n, "agrees": agrees, "formula": formula.value, "oracle": oracle }));
        }
    }
    let ok = rows.iter().all(|r| r["agrees"] == true);
    if format == Format::Json {
        print_json(&json!({ "passed": ok, "checks": rows }));
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch("formula and oracle disagree".into()))
    }
}

fn identities(args: &IdentityArgs, format: Format) -> Outcome {
    if args.max < 0 {
        return Err(Failure::Config(format!("--max must be non-negative, got {}", args.max)));
    }
    let r = run_identity_suite(args.max)?;
    match format {
        Format::Json => print_json(&json!({
            "passed": r.passed(),
            "max": r.max,
            "product_checked": r.product_checked,
            "product_failures": r.product_failures,
            "difference_checked": r.difference_checked,
            "difference_failures": r.difference_failures,
            "third_holds": r.third_holds.len(),
            "third_region_is_b_eq_c": r.third_region_is_b_eq_c,
        })),
        Format::Plain => {
            println!(
                "product expansion: {} pairs, {} failures",
                r.product_checked,
                r.product_failures.len()
            );
            println!(
                "difference identity: {} triples, {} failures",
                r.difference_checked,
                r.difference_failures.len()
            );
            println!(
                "third identity: holds on {} of {} triples; exactly the triples with b = c: {}",
                r.third_holds.len(),
                r.difference_checked,
                r.third_region_is_b_eq_c
            );
        }
    }
    if r.passed() && r.third_region_is_b_eq_c {
        Ok(())
    } else {
        Err(Failure::Mismatch("identity failures".into()))
    }
}
