mod ranges;
mod report;

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use canalyzer::canalization::estimate_pk;
use canalyzer::decimal::{format_f64, format_rational};
use canalyzer::ensemble::{
    bias_grid, empirical_expectation, expected_grid, expected_pk, write_expected_csv,
};
use canalyzer::expr::parse_table;
use canalyzer::generate::{generate, FunctionKind};
use canalyzer::sweep::{
    aggregate_strength, enumerate_all, write_buckets_csv, write_histogram_csv, write_records_csv,
    BucketStats, SweepFilter,
};
use canalyzer::verify::{run_suite, Coverage, Suite};
use canalyzer::{Error, TruthTable};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use report::{Envelope, Exact};

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {{
        let _ = writeln!($out, $($arg)*);
    }};
}

/// Collective canalization of Boolean functions.
#[derive(Parser)]
#[command(name = "canalyzer", version)]
struct Cli {
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true, env = "CANALYZER_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact profile, layers, sensitivity and bounds of one function.
    #[command(group = source_group())]
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Every function of arity n, written as CSV tables.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Closed-form expected k-set proportions for p-biased random functions, as CSV.
    Expected {
        /// Arities: `5`, `2,4,8` or `2:8`.
        #[arg(long)]
        n: String,
        /// k values in the same syntax; defaults to 1..=n.
        #[arg(long)]
        k: Option<String>,
        /// Biases: `0.5`, `0.3,0.7` or `0.05:0.95:0.05`; defaults to the grid from --step.
        #[arg(long)]
        p: Option<String>,
        /// Spacing of the default bias grid, which must be 1/m.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the structural inequalities and identities over many functions.
    Verify {
        /// thm31, cor32, thm33, thm45, cor46 or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n: usize,
        /// Random functions to check when n is too large for exhaustive coverage.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Monte Carlo estimate of P_k with a 95% Wilson interval.
    #[command(group = source_group())]
    Estimate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Mean exact P_k over sampled p-biased functions, against the closed form.
    Empirical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Truth table of a named family: and, or, parity[:b], threshold:t, constant:b, ncf:b:layers.
    Generate {
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Bits)]
        format: TableFormat,
    },
}

#[derive(Args)]
#[group(skip)]
struct Source {
    /// Boolean expression over x1..xn.
    #[arg(long, group = "src")]
    expr: Option<String>,
    /// Truth table as f(0)..f(2^n-1), x1 the least significant input.
    #[arg(long, group = "src")]
    bits: Option<String>,
    /// The same bit stream in hex, left-padded to whole digits.
    #[arg(long, group = "src")]
    hex: Option<String>,
    /// A named family, as accepted by `generate`.
    #[arg(long = "gen", group = "src")]
    generator: Option<String>,
    /// Arity; required for --hex and --gen, optional otherwise.
    #[arg(long)]
    n: Option<usize>,
}

fn source_group() -> ArgGroup {
    ArgGroup::new("src").required(true).multiple(false)
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Bits,
    Hex,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::ArityCap { .. }) {
            3
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        usage(e.to_string())
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

struct Ctx {
    argv: Vec<String>,
    start: Instant,
}

impl Ctx {
    fn emit<T: Serialize>(
        &self,
        out: &mut String,
        seeds: Vec<u64>,
        payload: T,
    ) -> Result<(), Failure> {
        let envelope = Envelope {
            tool: "canalyzer",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.argv,
            seeds,
            payload,
            elapsed_ms: self.start.elapsed().as_millis(),
        };
        let text = serde_json::to_string_pretty(&envelope).map_err(|e| usage(e.to_string()))?;
        say!(out, "{text}");
        Ok(())
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let ctx = Ctx {
        argv: argv[1..].to_vec(),
        start,
    };
    let mut out = String::new();
    let result = run(cli, &ctx, &mut out);
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout
        .write_all(out.as_bytes())
        .and_then(|()| stdout.flush())
    {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli, ctx: &Ctx, out: &mut String) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    match cli.command {
        Command::Analyze { source, format } => {
            let f = load(&source)?;
            let analysis = report::analyze(&f)?;
            match format {
                Format::Json => ctx.emit(out, vec![], analysis),
                Format::Text => {
                    out.push_str(&report::analysis_text(&analysis));
                    Ok(())
                }
            }
        }
        Command::Sweep {
            n,
            out: dir,
            format,
        } => sweep(ctx, out, n, &dir, format),
        Command::Expected {
            n,
            k,
            p,
            step,
            out: file,
        } => expected(out, &n, k.as_deref(), p.as_deref(), step, file.as_deref()),
        Command::Verify {
            suite,
            n,
            samples,
            seed,
            format,
        } => verify(ctx, out, &suite, n, samples, seed, format),
        Command::Estimate {
            source,
            k,
            samples,
            seed,
            format,
        } => {
            let f = load(&source)?;
            let e = estimate_pk(&f, k, samples, seed)?;
            match format {
                Format::Json => ctx.emit(
                    out,
                    vec![seed],
                    json!({
                        "arity": f.arity(),
                        "k": e.k,
                        "samples": e.samples,
                        "hits": e.hits,
                        "estimate": format_f64(e.estimate),
                        "lower": format_f64(e.lower),
                        "upper": format_f64(e.upper),
                        "confidence": 0.95,
                        "seed": e.seed,
                    }),
                ),
                Format::Text => {
                    say!(
                        out,
                        "P_{} ~ {} ({} of {} samples), 95% interval [{}, {}], seed {}",
                        e.k,
                        format_f64(e.estimate),
                        e.hits,
                        e.samples,
                        format_f64(e.lower),
                        format_f64(e.upper),
                        e.seed
                    );
                    Ok(())
                }
            }
        }
        Command::Empirical {
            n,
            k,
            p,
            count,
            seed,
            format,
        } => {
            let e = empirical_expectation(n, k, p, count, seed)?;
            let target: f64 = expected_pk(n, k, p)?;
            let within = (e.mean - target).abs() <= 3.0 * e.stderr;
            match format {
                Format::Json => ctx.emit(
                    out,
                    vec![seed],
                    json!({
                        "n": n,
                        "k": k,
                        "bias": p,
                        "count": count,
                        "mean": format_f64(e.mean),
                        "stderr": format_f64(e.stderr),
                        "positive_fraction": format_f64(e.positive_fraction),
                        "expected": format_f64(target),
                        "within_3_stderr": within,
                    }),
                ),
                Format::Text => {
                    say!(
                        out,
                        "mean P_{k} = {} +/- {} over {count} functions (n={n}, p={p}, seed {seed})",
                        format_f64(e.mean),
                        format_f64(e.stderr)
                    );
                    say!(
                        out,
                        "closed form {}, {} 3 standard errors",
                        format_f64(target),
                        if within { "within" } else { "outside" }
                    );
                    Ok(())
                }
            }
        }
        Command::Generate { kind, n, format } => {
            let kind: FunctionKind = kind.parse()?;
            let f = generate(&kind, n)?;
            match format {
                TableFormat::Bits => say!(out, "{}", f.to_bit_string()),
                TableFormat::Hex => say!(out, "{}", f.to_hex_string()),
                TableFormat::Json => {
                    return ctx.emit(
                        out,
                        vec![],
                        json!({
                            "kind": kind.to_string(),
                            "arity": n,
                            "bits": f.to_bit_string(),
                            "hex": f.to_hex_string(),
                        }),
                    )
                }
            }
            Ok(())
        }
    }
}

fn load(source: &Source) -> Result<TruthTable, Failure> {
    if let Some(text) = &source.expr {
        return Ok(parse_table(text, source.n)?);
    }
    if let Some(bits) = &source.bits {
        let bits = bits.trim();
        let n = match source.n {
            Some(n) => n,
            None if bits.len().is_power_of_two() => bits.len().trailing_zeros() as usize,
            None => {
                return Err(usage(format!(
                    "{} bits is not a power of two; pass --n",
                    bits.len()
                )))
            }
        };
        return Ok(TruthTable::from_bit_string(n, bits)?);
    }
    let n = source
        .n
        .ok_or_else(|| usage("--n is required with --hex and --gen"))?;
    if let Some(hex) = &source.hex {
        return Ok(TruthTable::from_hex_string(n, hex)?);
    }
    let kind: FunctionKind = source.generator.as_deref().unwrap_or_default().parse()?;
    Ok(generate(&kind, n)?)
}

fn bucket_json(stats: &[BucketStats]) -> Vec<serde_json::Value> {
    stats
        .iter()
        .map(|b| {
            json!({
                "key": b.key,
                "count": b.count,
                "min": Exact::from(&b.min),
                "mean": Exact::from(&b.mean),
                "max": Exact::from(&b.max),
            })
        })
        .collect()
}

fn sweep(ctx: &Ctx, out: &mut String, n: usize, dir: &Path, format: Format) -> Result<(), Failure> {
    let records = enumerate_all(n, SweepFilter::default())?;
    let tables = aggregate_strength(&records)?;
    fs::create_dir_all(dir)?;
    let create = |name: &str| -> io::Result<BufWriter<File>> {
        Ok(BufWriter::new(File::create(dir.join(name))?))
    };
    write_records_csv(create("sweep_records.csv")?, &records)?;
    write_buckets_csv(create("fig2a.csv")?, "depth", &tables.by_depth)?;
    write_buckets_csv(create("fig2b.csv")?, "symmetry_groups", &tables.by_symmetry)?;
    write_histogram_csv(create("fig2a_hist.csv")?, "depth", &tables.by_depth)?;
    write_histogram_csv(
        create("fig2b_hist.csv")?,
        "symmetry_groups",
        &tables.by_symmetry,
    )?;
    let meta = json!({
        "n": n,
        "records": records.len(),
        "constants_excluded": tables.constants_excluded,
        "note": "constant functions have no strength and are left out of fig2a/fig2b and the histograms",
    });
    let mut file = create("sweep_meta.json")?;
    writeln!(
        file,
        "{}",
        serde_json::to_string_pretty(&meta).map_err(|e| usage(e.to_string()))?
    )?;
    file.flush()?;

    match format {
        Format::Json => ctx.emit(
            out,
            vec![],
            json!({
                "n": n,
                "records": records.len(),
                "constants_excluded": tables.constants_excluded,
                "out": dir.display().to_string(),
                "by_depth": bucket_json(&tables.by_depth),
                "by_symmetry_groups": bucket_json(&tables.by_symmetry),
            }),
        ),
        Format::Text => {
            say!(
                out,
                "{} functions of arity {n} ({} constant) written to {}",
                records.len(),
                tables.constants_excluded,
                dir.display()
            );
            for (title, stats) in [
                ("depth", &tables.by_depth),
                ("symmetry groups", &tables.by_symmetry),
            ] {
                say!(out, "strength by {title}");
                for b in stats {
                    say!(
                        out,
                        "  {:>2}  count {:>6}  min {:<9} mean {:<9} max {}",
                        b.key,
                        b.count,
                        format_rational(&b.min),
                        format_rational(&b.mean),
                        format_rational(&b.max)
                    );
                }
            }
            Ok(())
        }
    }
}

fn expected(
    out: &mut String,
    n: &str,
    k: Option<&str>,
    p: Option<&str>,
    step: f64,
    file: Option<&Path>,
) -> Result<(), Failure> {
    let ns = ranges::parse_ints(n).map_err(usage)?;
    let ks = match k {
        Some(k) => ranges::parse_ints(k).map_err(usage)?,
        None => (1..=ns.iter().copied().max().unwrap_or(0)).collect(),
    };
    let biases = match p {
        Some(p) => ranges::parse_reals(p).map_err(usage)?,
        None => bias_grid(step)?,
    };
    if let Some(&k) = ks.iter().find(|&&k| !ns.iter().any(|&n| k <= n)) {
        return Err(usage(format!("k = {k} exceeds every requested n")));
    }
    let rows = expected_grid(&ns, &ks, &biases)?;
    match file {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write_expected_csv(&mut file, &rows)?;
            file.flush()?;
            eprintln!("{} rows written to {}", rows.len(), path.display());
        }
        None => {
            let mut buf = Vec::new();
            write_expected_csv(&mut buf, &rows)?;
            out.push_str(&String::from_utf8_lossy(&buf));
        }
    }
    Ok(())
}

fn verify(
    ctx: &Ctx,
    out: &mut String,
    suite: &str,
    n: usize,
    samples: u64,
    seed: u64,
    format: Format,
) -> Result<(), Failure> {
    let suites: Vec<Suite> = if suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, n, samples, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed());
    match format {
        Format::Json => {
            let payload: Vec<_> = reports
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite.name(),
                        "n": r.arity,
                        "coverage": match r.coverage {
                            Coverage::Exhaustive => "exhaustive",
                            Coverage::Sampled { .. } => "sampled",
                        },
                        "checked": r.checked,
                        "violations": r.violations,
                        "examples": r.examples,
                        "passed": r.passed(),
                    })
                })
                .collect();
            let sampled = reports
                .iter()
                .any(|r| matches!(r.coverage, Coverage::Sampled { .. }));
            ctx.emit(
                out,
                if sampled { vec![seed] } else { vec![] },
                json!({ "passed": passed, "suites": payload }),
            )?;
        }
        Format::Text => {
            for r in &reports {
                let coverage = match r.coverage {
                    Coverage::Exhaustive => "all".to_string(),
                    Coverage::Sampled { seed, .. } => format!("random, seed {seed},"),
                };
                say!(
                    out,
                    "{} {:<5} n={} {} {} functions, {} violations",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.suite.name(),
                    r.arity,
                    coverage,
                    r.checked,
                    r.violations
                );
                for ex in &r.examples {
                    say!(out, "    {ex}");
                }
            }
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            message: String::new(),
        })
    }
}
