//! Command-line front end: argument parsing, orchestration and report rendering.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fperfect_core::arith::{fib, is_fibonacci, proper_power_sum, PrimalityConfig};
use fperfect_core::contfrac::{neg_pell_fundamental, neg_pell_solvable, sqrt_cf};
use fperfect_core::fperfect::{
    generate_certificates, is_f_perfect, power_sum_completeness, power_sum_cutoff,
    search_power_sums, search_square_sums, square_sum_bounds,
};
use fperfect_core::markov::{brute_solutions, verify_no_solutions, EmptinessStatus};
use fperfect_core::sigma3::{
    classify_sigma3, conjecture_scan, scan_semiprimes, scan_two_power_times_prime, OmegaMode,
};
use fperfect_core::{Completeness, Natural};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Parses `1000000`, `1_000_000`, `10^6` or `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    let power = |base: &str, exp: &str| -> Result<u64, String> {
        let base: u64 = base.parse().map_err(|e| format!("bad base {base:?}: {e}"))?;
        let exp: u32 = exp.parse().map_err(|e| format!("bad exponent {exp:?}: {e}"))?;
        base.checked_pow(exp).ok_or_else(|| format!("{s} overflows 64 bits"))
    };
    if let Some((base, exp)) = s.split_once('^') {
        power(base, exp)
    } else if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let m = power(mantissa, "1")?;
        m.checked_mul(power("10", exp)?)
            .ok_or_else(|| format!("{s} overflows 64 bits"))
    } else {
        s.parse().map_err(|e| format!("bad number {s:?}: {e}"))
    }
}

fn parse_natural(s: &str) -> Result<Natural, String> {
    let t = s.trim().replace('_', "");
    if t.contains(['^', 'e', 'E']) {
        return parse_count(&t).map(Natural::from);
    }
    t.parse::<Natural>().map_err(|e| format!("bad natural {s:?}: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "fperfect", version, about = "F-perfect numbers, Fibonacci primes and related scans")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Scan limit for range searches.
    #[arg(long, global = true, default_value = "10^6", value_parser = parse_count)]
    limit: u64,
    /// Random-base strong-pseudoprime rounds above 2^64.
    #[arg(long, global = true, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
    mr_rounds: u32,
    /// Worker threads; never changes output.
    #[arg(long, global = true, env = "FPERFECT_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for randomized primality and factoring; 0 is a fixed default.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report elapsed_ms as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve sum_{d | n, d < n} d^a = b n for n up to --limit.
    Search {
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 2)]
        a: u32,
    },
    /// F-perfect test and sigma_3 classification of one number.
    Verify {
        #[arg(value_parser = parse_natural)]
        n: Natural,
    },
    /// Certificates n = F(2k-1) F(2k+1) for k <= --max-k.
    Certify {
        #[arg(long)]
        max_k: u64,
    },
    /// Continued fraction of sqrt(N).
    Cf {
        #[arg(value_parser = parse_natural)]
        n: Natural,
    },
    /// Negative Pell equations.
    Pell(PellArgs),
    /// Solutions of 1 + x^2 + y^2 = k x y.
    Markov {
        #[arg(long)]
        k: u64,
        /// Scan bound for x and y; defaults to --limit.
        #[arg(long, value_parser = parse_count)]
        bound: Option<u64>,
        /// Attach the argument proving there are no solutions at all.
        #[arg(long)]
        certify: bool,
    },
    /// Scans for n | sigma_3(n).
    Sigma3 {
        #[command(subcommand)]
        action: Sigma3Action,
    },
    /// Fibonacci queries.
    Fib(FibArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PellArgs {
    /// Solve x^2 - N y^2 = -1.
    #[arg(long, value_parser = parse_natural)]
    neg: Option<Natural>,
    /// Solve x^2 - D y^2 = -4 for odd D.
    #[arg(long, value_parser = parse_natural)]
    neg4: Option<Natural>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct FibArgs {
    /// Print F(I).
    #[arg(long)]
    index: Option<u64>,
    /// Test whether X is a Fibonacci number.
    #[arg(long = "is", value_parser = parse_natural)]
    is: Option<Natural>,
}

#[derive(Debug, Subcommand)]
enum Sigma3Action {
    Scan {
        #[arg(long, value_enum)]
        shape: ScanShape,
        /// Prime count used by the conjecture scan.
        #[arg(long, value_enum, default_value_t = Omega::Distinct)]
        omega: Omega,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScanShape {
    Semiprime,
    #[value(name = "2powp")]
    TwoPowP,
    Conjecture,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Omega {
    Distinct,
    Total,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(with = "fperfect_core::serde_dec::word")]
    pub limit: u64,
    pub mr_rounds: u32,
    /// Not serialized: output must not depend on it.
    #[serde(skip)]
    pub threads: u32,
    pub output_format: OutputFormat,
    #[serde(with = "fperfect_core::serde_dec::word")]
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub config: RunConfig,
    pub results: Vec<Value>,
    /// Bound reports and emptiness arguments backing `completeness`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<Value>,
    pub elapsed_ms: u64,
    pub completeness: Completeness,
}

/// Exit status plus captured output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    results: Vec<Value>,
    certification: Option<Value>,
    completeness: Completeness,
    text: Vec<String>,
}

type CmdResult = Result<Report, fperfect_core::Error>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if status == EXIT_OK {
                Outcome { status, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { status, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let config = RunConfig {
        limit: cli.config.limit,
        mr_rounds: cli.config.mr_rounds,
        threads: cli.config.threads,
        output_format: cli.config.format,
        seed: cli.config.seed,
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads as usize)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            return Outcome {
                status: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("cannot start {} threads: {e}\n", config.threads),
            }
        }
    };

    let started = Instant::now();
    let (name, result) = pool.install(|| dispatch(&cli.command, &config));
    let elapsed_ms = if cli.config.no_timing {
        0
    } else {
        started.elapsed().as_millis() as u64
    };

    let report = match result {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                status: EXIT_DOMAIN,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let stdout = match config.output_format {
        OutputFormat::Json => {
            let envelope = ReportEnvelope {
                command: name.to_string(),
                config,
                results: report.results,
                certification: report.certification,
                elapsed_ms,
                completeness: report.completeness,
            };
            let mut s = serde_json::to_string_pretty(&envelope).expect("envelope serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = report.text.join("\n");
            s.push_str(&format!(
                "\ncompleteness: {}\nelapsed: {elapsed_ms} ms\n",
                match report.completeness {
                    Completeness::Certified => "certified",
                    Completeness::UpToLimit => "up-to-limit",
                }
            ));
            s
        }
    };
    Outcome {
        status: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

fn dispatch(command: &Command, config: &RunConfig) -> (&'static str, CmdResult) {
    match command {
        Command::Search { b, a } => ("search", search(*a, *b, config)),
        Command::Verify { n } => ("verify", verify(n)),
        Command::Certify { max_k } => ("certify", certify(*max_k, config)),
        Command::Cf { n } => ("cf", cf(n)),
        Command::Pell(args) => ("pell", pell(args)),
        Command::Markov { k, bound, certify } => {
            ("markov", markov(*k, bound.unwrap_or(config.limit), *certify))
        }
        Command::Sigma3 {
            action: Sigma3Action::Scan { shape, omega },
        } => ("sigma3 scan", sigma3_scan(*shape, *omega, config.limit)),
        Command::Fib(args) => ("fib", fib_query(args)),
    }
}

fn search(a: u32, b: u64, config: &RunConfig) -> CmdResult {
    let limit = config.limit;
    let (records, certification, completeness, mut text) = match a {
        2 => {
            let records = search_square_sums(b, limit)?;
            let bounds = square_sum_bounds(b);
            let branches = bounds.branches(limit);
            let mut text = vec![format!(
                "sigma_2(n) - n^2 = {b} n, n <= {limit}: three-prime cutoff n <= {}",
                bounds.three_prime_cutoff
            )];
            for br in &branches {
                text.push(format!("  {:?}: {}", br.branch, br.reason));
            }
            let cert = json!({ "bounds": to_value(&bounds), "branches": to_value(&branches) });
            (records, Some(cert), bounds.completeness(limit), text)
        }
        a if a >= 3 => {
            let records = search_power_sums(a, b, limit)?;
            let cutoff = power_sum_cutoff(b);
            let text = vec![format!(
                "sigma_{a}(n) - n^{a} = {b} n: every solution has n <= b^2/4 = {cutoff}; scanned to {}",
                limit.min(cutoff)
            )];
            let cert = json!({ "cutoff": cutoff.to_string() });
            (records, Some(cert), power_sum_completeness(b, limit), text)
        }
        _ => {
            return Err(fperfect_core::Error::Domain(format!(
                "exponent a = {a} must be at least 2"
            )))
        }
    };
    text.push(format!("{} solution(s)", records.len()));
    for r in &records {
        text.push(format!("  n = {}", r.n));
    }
    Ok(Report {
        results: records.iter().map(to_value).collect(),
        certification,
        completeness,
        text,
    })
}

fn verify(n: &Natural) -> CmdResult {
    let f_perfect = is_f_perfect(n)?;
    let square_sum = proper_power_sum(2, n)?;
    let verdict = if *n >= Natural::from(2u32) {
        Some(classify_sigma3(n)?)
    } else {
        None
    };
    let mut text = vec![
        format!("n = {n}"),
        format!("proper square sum = {square_sum} (3n = {})", n * 3u32),
        format!("F-perfect: {f_perfect}"),
    ];
    match &verdict {
        Some(v) => text.push(format!(
            "n | sigma_3(n): {} ({:?}, {:?})",
            v.divisible, v.shape, v.classification
        )),
        None => text.push("sigma_3 classification: n/a for n < 2".into()),
    }
    let record = json!({
        "n": n.to_string(),
        "f_perfect": f_perfect,
        "proper_square_sum": square_sum.to_string(),
        "sigma3": verdict.as_ref().map(to_value),
    });
    Ok(Report {
        results: vec![record],
        certification: None,
        completeness: Completeness::Certified,
        text,
    })
}

fn certify(max_k: u64, config: &RunConfig) -> CmdResult {
    let pc = PrimalityConfig {
        rounds: config.mr_rounds,
        seed: config.seed,
    };
    let certs = generate_certificates(max_k, &pc);
    let mut text = vec![format!("{} certificate(s) for k <= {max_k}", certs.len())];
    for c in &certs {
        text.push(format!(
            "  k = {}: F({})*F({}), {} digits, {:?}/{:?}, check {:?}",
            c.k,
            c.lo_index(),
            c.hi_index(),
            c.digits,
            c.lo_primality.verdict,
            c.hi_primality.verdict,
            c.check
        ));
    }
    Ok(Report {
        results: certs.iter().map(to_value).collect(),
        certification: None,
        completeness: Completeness::UpToLimit,
        text,
    })
}

fn cf(n: &Natural) -> CmdResult {
    let e = sqrt_cf(n)?;
    let period: Vec<String> = e.period().iter().map(|a| a.to_string()).collect();
    let text = vec![
        format!("sqrt({n}) = [{}; {}]", e.a0(), period.join(", ")),
        format!("period length {}", e.period_length()),
    ];
    let mut record = to_value(&e);
    record["period_length"] = json!(e.period_length());
    Ok(Report {
        results: vec![record],
        certification: None,
        completeness: Completeness::Certified,
        text,
    })
}

fn pell(args: &PellArgs) -> CmdResult {
    let (n, c) = match (&args.neg, &args.neg4) {
        (Some(n), _) => (n, -1),
        (_, Some(d)) => (d, -4),
        _ => unreachable!("clap enforces exactly one of --neg/--neg4"),
    };
    let solvable = if c == -1 {
        neg_pell_solvable(n)?
    } else {
        fperfect_core::contfrac::neg4_solvable(n)?
    };
    let period_length = sqrt_cf(n)?.period_length();
    let mut text = vec![format!(
        "x^2 - {n} y^2 = {c}: {} (period {period_length})",
        if solvable { "solvable" } else { "no solution" }
    )];
    let mut record = json!({
        "n": n.to_string(),
        "c": c,
        "solvable": solvable,
        "period_length": period_length,
    });
    if solvable {
        let fund = neg_pell_fundamental(n)?;
        text.push(format!("least solution of x^2 - {n} y^2 = -1: ({}, {})", fund.x(), fund.y()));
        record["minus_one_fundamental"] = to_value(&fund);
        if c == -4 {
            let x: Natural = fund.x() << 1u8;
            let y: Natural = fund.y() << 1u8;
            let w = fperfect_core::contfrac::PellSolution::new(n.clone(), -4, x, y)?;
            text.push(format!("witness for -4: ({}, {})", w.x(), w.y()));
            record["minus_four_witness"] = to_value(&w);
        }
    }
    Ok(Report {
        results: vec![record],
        certification: None,
        completeness: Completeness::Certified,
        text,
    })
}

fn markov(k: u64, bound: u64, certify: bool) -> CmdResult {
    if certify {
        let report = verify_no_solutions(k, bound)?;
        let completeness = if report.status == EmptinessStatus::CertifiedEmpty {
            Completeness::Certified
        } else {
            Completeness::UpToLimit
        };
        let text = vec![
            format!("1 + x^2 + y^2 = {k} x y, scanned to {bound}: {:?}", report.status),
            format!("argument: {:?}", report.argument),
        ];
        return Ok(Report {
            results: report.brute_force_solutions.iter().map(to_value).collect(),
            certification: Some(to_value(&report)),
            completeness,
            text,
        });
    }
    let pairs = brute_solutions(k, bound);
    let mut text = vec![format!("1 + x^2 + y^2 = {k} x y, x <= y <= {bound}: {} pair(s)", pairs.len())];
    text.extend(pairs.iter().map(|p| format!("  ({}, {})", p.x(), p.y())));
    Ok(Report {
        results: pairs.iter().map(to_value).collect(),
        certification: None,
        completeness: Completeness::UpToLimit,
        text,
    })
}

fn sigma3_scan(shape: ScanShape, omega: Omega, limit: u64) -> CmdResult {
    match shape {
        ScanShape::Semiprime => {
            let verdicts = scan_semiprimes(limit)
                .into_iter()
                .map(|n| classify_sigma3(&n.into()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut text = vec![format!("n = p q <= {limit} with n | sigma_3(n):")];
            text.extend(verdicts.iter().map(|v| format!("  {} ({:?})", v.n, v.classification)));
            Ok(Report {
                results: verdicts.iter().map(to_value).collect(),
                certification: None,
                completeness: Completeness::UpToLimit,
                text,
            })
        }
        ScanShape::TwoPowP => {
            let verdicts = scan_two_power_times_prime(limit);
            let mut text = vec![format!("n = 2^a p <= {limit} with n | sigma_3(n):")];
            text.extend(verdicts.iter().map(|v| format!("  {} ({:?})", v.n, v.classification)));
            Ok(Report {
                results: verdicts.iter().map(to_value).collect(),
                certification: None,
                completeness: Completeness::UpToLimit,
                text,
            })
        }
        ScanShape::Conjecture => {
            let mode = match omega {
                Omega::Distinct => OmegaMode::Distinct,
                Omega::Total => OmegaMode::Total,
            };
            let report = conjecture_scan(limit, mode);
            let mut text = vec![
                format!(
                    "omega(n) = 2 ({mode:?}) and n | sigma_3(n), n <= {limit}: {:?}",
                    report.dividing
                ),
                format!("{} counterexample(s)", report.counterexamples.len()),
            ];
            text.extend(
                report
                    .counterexamples
                    .iter()
                    .map(|c| format!("  {} ({:?})", c.n, c.kind)),
            );
            for a in &report.even_perfect_audit {
                text.push(format!(
                    "  even perfect {} (p = {}): divides sigma_3 = {}",
                    a.n, a.mersenne_exponent, a.divisible
                ));
            }
            Ok(Report {
                results: report.counterexamples.iter().map(to_value).collect(),
                certification: Some(to_value(&report)),
                completeness: Completeness::UpToLimit,
                text,
            })
        }
    }
}

fn fib_query(args: &FibArgs) -> CmdResult {
    let (record, text) = match (&args.index, &args.is) {
        (Some(i), _) => {
            let v = fib(*i);
            (
                json!({ "index": i, "value": v.to_string() }),
                vec![format!("F({i}) = {v}")],
            )
        }
        (_, Some(x)) => {
            let idx = is_fibonacci(x);
            let line = match idx {
                Some(i) => format!("{x} = F({i})"),
                None => format!("{x} is not a Fibonacci number"),
            };
            (
                json!({ "x": x.to_string(), "fibonacci": idx.is_some(), "index": idx }),
                vec![line],
            )
        }
        _ => unreachable!("clap enforces exactly one of --index/--is"),
    };
    Ok(Report {
        results: vec![record],
        certification: None,
        completeness: Completeness::Certified,
        text,
    })
}
