//! satotate: enumeration, group models, and trace statistics for the
//! hyperelliptic curves y² = x^(p²) − 1.
//!
//! Every subcommand emits one table in the selected format. Table and CSV
//! outputs start with `#` metadata lines naming the tool version, the
//! parameters, and the sign conventions; JSON-lines outputs carry the
//! same metadata as a first `{"meta": …}` object so the stream stays
//! machine-readable. Outputs are deterministic for fixed inputs.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 runtime failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use satotate_core::arith;
use satotate_core::group;
use satotate_core::hodge;
use satotate_core::moments;
use satotate_core::shioda::{self, Stage, TupleKind};
use satotate_core::sweep::{self, SweepConfig, SweepState};
use satotate_core::verify::{self, CheckKind, Suite, VerifyConfig};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "satotate",
    version,
    about = "Shioda tuple enumeration, Sato-Tate group models, and L-polynomial statistics \
             for y^2 = x^(p^2) - 1",
    after_help = "Environment:\n  SATOTATE_CACHE_DIR  directory for sweep records and checkpoints\n\n\
                  Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 runtime failure"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    #[value(name = "json-lines")]
    JsonLines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StageArg {
    Candidates,
    Members,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    All,
    Exceptional,
    Indecomposable,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate weight-balanced tuples for a modulus and codimension.
    Tuples {
        /// Modulus m (odd, at least 3).
        #[arg(long)]
        m: u32,
        /// Codimension d.
        #[arg(long)]
        d: u32,
        /// Enumeration stage: the sum/split pre-filter or full members.
        #[arg(long, value_enum, default_value_t = StageArg::Members)]
        stage: StageArg,
        /// Keep only exceptional or exceptional-indecomposable members.
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
        /// Print only the number of surviving tuples.
        #[arg(long)]
        count_only: bool,
        /// Enumeration work budget.
        #[arg(long, default_value_t = shioda::DEFAULT_WORK_BUDGET)]
        budget: u64,
    },
    /// Classify one tuple: membership, pairing, and a decomposition witness.
    Classify {
        /// Modulus m.
        #[arg(long)]
        m: u32,
        /// Tuple entries, strictly increasing, even count.
        #[arg(required = true)]
        entries: Vec<u32>,
    },
    /// Print the multiplicative relations of the identity component.
    Relations {
        /// Odd prime p; the curve exponent is m = p².
        #[arg(long)]
        p: u32,
    },
    /// Print the component-group generator matrix and its checks.
    Gamma {
        #[arg(long)]
        p: u32,
        /// Unit generating the residues mod p²; defaults to the least one.
        #[arg(long)]
        generator: Option<u32>,
    },
    /// Exact averaged and per-component moments of the trace statistic.
    Moments {
        #[arg(long)]
        p: u32,
        /// Highest moment order.
        #[arg(long, default_value_t = 8)]
        max_n: u32,
        #[arg(long)]
        generator: Option<u32>,
        /// Lattice-walk budget.
        #[arg(long, default_value_t = moments::DEFAULT_MOMENT_BUDGET)]
        budget: u64,
    },
    /// Point-count traces: one prime, or a sweep compared with theory.
    Lpoly(LpolyArgs),
    /// Binned distribution of the normalized trace over a sweep.
    Histogram {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 101)]
        bins: u32,
        #[arg(long)]
        generator: Option<u32>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        resume: bool,
    },
    /// Run the verification suite and report a per-check ledger.
    Verify {
        /// Which checks to run: all, exact, or stats.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Prime bound for the statistical sweep.
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = moments::DEFAULT_MOMENT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 101)]
        bins: u32,
    },
}

#[derive(Args)]
struct LpolyArgs {
    #[arg(long)]
    p: u32,
    /// Single prime to evaluate.
    #[arg(long, conflicts_with = "bound")]
    q: Option<u64>,
    /// Sweep all good primes up to this bound.
    #[arg(long)]
    bound: Option<u64>,
    /// Highest moment order in the sweep comparison.
    #[arg(long, default_value_t = 8)]
    max_n: u32,
    #[arg(long)]
    generator: Option<u32>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Continue from the checkpoint in SATOTATE_CACHE_DIR.
    #[arg(long)]
    resume: bool,
    #[arg(long, default_value_t = moments::DEFAULT_MOMENT_BUDGET)]
    budget: u64,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// One table: metadata pairs, column names, and value rows.
struct Output {
    meta: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Output {
    fn new(columns: Vec<&'static str>) -> Self {
        Self {
            meta: vec![
                ("tool".into(), "satotate".into()),
                ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ],
            columns,
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }
}

fn value_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_escape(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn render(output: &Output, format: Format) -> String {
    let mut text = String::new();
    match format {
        Format::Table | Format::Csv => {
            for (key, value) in &output.meta {
                writeln!(text, "# {key}: {value}").unwrap();
            }
            if format == Format::Csv {
                writeln!(text, "{}", output.columns.join(",")).unwrap();
                for row in &output.rows {
                    let cells: Vec<String> =
                        row.iter().map(|v| csv_escape(&value_text(v))).collect();
                    writeln!(text, "{}", cells.join(",")).unwrap();
                }
            } else {
                let mut widths: Vec<usize> =
                    output.columns.iter().map(|c| c.chars().count()).collect();
                let rows: Vec<Vec<String>> = output
                    .rows
                    .iter()
                    .map(|row| row.iter().map(value_text).collect())
                    .collect();
                for row in &rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let header: Vec<String> = output
                    .columns
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                writeln!(text, "{}", header.join("  ").trim_end()).unwrap();
                for row in &rows {
                    let cells: Vec<String> = row
                        .iter()
                        .zip(&widths)
                        .map(|(cell, w)| format!("{cell:<w$}"))
                        .collect();
                    writeln!(text, "{}", cells.join("  ").trim_end()).unwrap();
                }
            }
        }
        Format::JsonLines => {
            let mut meta = Map::new();
            for (key, value) in &output.meta {
                meta.insert(key.clone(), Value::String(value.clone()));
            }
            writeln!(
                text,
                "{}",
                Value::Object(Map::from_iter([("meta".to_string(), Value::Object(meta),)]))
            )
            .unwrap();
            for row in &output.rows {
                let mut object = Map::new();
                for (column, value) in output.columns.iter().zip(row) {
                    object.insert((*column).to_string(), value.clone());
                }
                writeln!(text, "{}", Value::Object(object)).unwrap();
            }
        }
    }
    text
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("SATOTATE_CACHE_DIR").map(PathBuf::from)
}

fn resolve_generator(p: u32, generator: Option<u32>) -> Result<u32, CliError> {
    if p < 3 || p % 2 == 0 || !arith::is_prime(u64::from(p)) {
        return Err(CliError::Usage(format!("{p} is not an odd prime")));
    }
    match generator {
        Some(a) => {
            if arith::is_generator_mod_p2(p, a) {
                Ok(a)
            } else {
                Err(CliError::Usage(format!(
                    "{a} does not generate the units modulo {p}^2"
                )))
            }
        }
        None => Ok(arith::primitive_root_mod_p2(p)),
    }
}

fn run_sweep(
    p: u32,
    bound: u64,
    generator: u32,
    jobs: usize,
    resume: bool,
) -> Result<SweepState, CliError> {
    let dir = cache_dir();
    if resume && dir.is_none() {
        return Err(CliError::Usage(
            "--resume needs SATOTATE_CACHE_DIR to point at the checkpoint directory".into(),
        ));
    }
    let mut config = SweepConfig::new(p, bound).map_err(CliError::usage)?;
    config.generator = generator;
    config.jobs = jobs;
    config.dir = dir;
    config.resume = resume;
    sweep::sweep(&config).map_err(CliError::runtime)
}

fn kind_text(kind: TupleKind) -> &'static str {
    match kind {
        TupleKind::Paired => "paired",
        TupleKind::ExceptionalDecomposable => "exceptional-decomposable",
        TupleKind::Indecomposable => "indecomposable",
    }
}

fn tuples_output(
    m: u32,
    d: u32,
    stage: StageArg,
    filter: Filter,
    count_only: bool,
    budget: u64,
) -> Result<Output, CliError> {
    if stage == StageArg::Candidates && filter != Filter::All {
        return Err(CliError::Usage(
            "--filter needs full members; candidates are not classified".into(),
        ));
    }
    let core_stage = match stage {
        StageArg::Candidates => Stage::Candidates,
        StageArg::Members => Stage::Members,
    };
    let tuples =
        shioda::enumerate_tuples_with_budget(m, d, core_stage, budget).map_err(CliError::usage)?;

    let mut selected = Vec::new();
    for tuple in &tuples {
        let class = match core_stage {
            Stage::Candidates => None,
            Stage::Members => Some(shioda::classify(tuple).map_err(CliError::runtime)?),
        };
        let keep = match (&class, filter) {
            (_, Filter::All) => true,
            (Some(c), Filter::Exceptional) => c.is_exceptional(),
            (Some(c), Filter::Indecomposable) => {
                c.is_exceptional() && c.kind == TupleKind::Indecomposable
            }
            (None, _) => unreachable!("filters are rejected for candidates"),
        };
        if keep {
            selected.push((tuple, class));
        }
    }

    let mut output = if count_only {
        let mut output = Output::new(vec!["count"]);
        output.row(vec![json!(selected.len())]);
        output
    } else if core_stage == Stage::Candidates {
        let mut output = Output::new(vec!["entries", "member"]);
        for (tuple, _) in &selected {
            output.row(vec![json!(tuple.to_string()), json!(tuple.is_member())]);
        }
        output
    } else {
        let mut output = Output::new(vec!["entries", "kind", "paired"]);
        for (tuple, class) in &selected {
            let class = class.as_ref().expect("members are classified");
            output.row(vec![
                json!(tuple.to_string()),
                json!(kind_text(class.kind)),
                json!(class.paired),
            ]);
        }
        output
    };
    output
        .meta("command", "tuples")
        .meta("m", m)
        .meta("d", d)
        .meta(
            "stage",
            match stage {
                StageArg::Candidates => "candidates",
                StageArg::Members => "members",
            },
        )
        .meta(
            "filter",
            match filter {
                Filter::All => "all",
                Filter::Exceptional => "exceptional",
                Filter::Indecomposable => "indecomposable",
            },
        );
    Ok(output)
}

fn classify_output(m: u32, entries: Vec<u32>) -> Result<Output, CliError> {
    let tuple = shioda::ShiodaTuple::new(m, entries).map_err(CliError::usage)?;
    let mut output = Output::new(vec!["entries", "member", "kind", "paired", "decomposition"]);
    output.meta("command", "classify").meta("m", m);
    if !tuple.is_member() {
        output.row(vec![
            json!(tuple.to_string()),
            json!(false),
            Value::Null,
            Value::Null,
            Value::Null,
        ]);
        return Ok(output);
    }
    let class = shioda::classify(&tuple).map_err(CliError::runtime)?;
    let witness = class.decomposition.as_ref().map(|parts| {
        parts
            .iter()
            .map(|part| part.to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    });
    output.row(vec![
        json!(tuple.to_string()),
        json!(true),
        json!(kind_text(class.kind)),
        json!(class.paired),
        witness.map_or(Value::Null, Value::String),
    ]);
    Ok(output)
}

fn relations_output(p: u32) -> Result<Output, CliError> {
    let model = hodge::identity_component(p).map_err(CliError::usage)?;
    let mut output = Output::new(vec!["dependent", "relation"]);
    output
        .meta("command", "relations")
        .meta("p", p)
        .meta("g", model.g())
        .meta("torus_dimension", model.g_prime())
        .meta(
            "free_indices",
            model
                .free_indices()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        )
        .meta("convention", "angles θj of the diagonal torus, j = 1..g");
    for (dependent, relation) in model.relations() {
        output.row(vec![
            json!(format!("θ{dependent}")),
            json!(relation.to_string()),
        ]);
    }
    Ok(output)
}

fn gamma_output(p: u32, generator: Option<u32>) -> Result<Output, CliError> {
    let generator = resolve_generator(p, generator)?;
    let gamma = group::gamma_matrix(p, generator).map_err(CliError::usage)?;
    let alpha = group::alpha_endomorphism(p).map_err(CliError::runtime)?;
    let twist_ok =
        group::twisted_lefschetz_check(&gamma, &alpha, generator).map_err(CliError::runtime)?;
    let mut output = Output::new(vec!["row", "target", "tag", "sign"]);
    output
        .meta("command", "gamma")
        .meta("p", p)
        .meta("generator", generator)
        .meta("component_order", group::gamma_power_order(&gamma))
        .meta("orthogonal", gamma.is_orthogonal())
        .meta("symplectic", gamma.preserves_symplectic_form())
        .meta("twist_identity", twist_ok);
    for (i, (target, block)) in (1..).zip(gamma.rows()) {
        output.row(vec![
            json!(i),
            json!(target),
            json!(format!("{:?}", block.tag())),
            json!(block.sign()),
        ]);
    }
    Ok(output)
}

fn moments_output(
    p: u32,
    max_n: u32,
    generator: Option<u32>,
    budget: u64,
) -> Result<Output, CliError> {
    let generator = resolve_generator(p, generator)?;
    let report = moments::averaged_moments_with_generator(p, generator, max_n, budget)
        .map_err(CliError::runtime)?;
    let mut output = Output::new(vec!["n", "moment", "decimal"]);
    output
        .meta("command", "moments")
        .meta("p", p)
        .meta("generator", generator)
        .meta("components", report.classes())
        .meta(
            "statistic",
            "first L-polynomial coefficient, averaged over components",
        );
    for n in 1..=max_n {
        let moment = report.averaged_moment(n);
        output.row(vec![
            json!(n),
            json!(moment.to_string()),
            json!(moment.to_f64().unwrap_or(f64::NAN)),
        ]);
    }
    Ok(output)
}

fn a1_convention_meta(output: &mut Output, generator: u32) {
    output
        .meta("generator", generator)
        .meta("a1_convention", "a1 = (q + 1 - #C(F_q)) / sqrt(q)")
        .meta(
            "residue_class",
            "k with q = generator^k (mod p^2); trace = 0 when q != 1 (mod p)",
        );
}

fn lpoly_output(args: LpolyArgs) -> Result<Output, CliError> {
    let LpolyArgs {
        p,
        q,
        bound,
        max_n,
        generator,
        jobs,
        resume,
        budget,
    } = args;
    let generator = resolve_generator(p, generator)?;
    let m = p * p;
    match (q, bound) {
        (Some(q), None) => {
            let trace = sweep::curve_trace(q, m).map_err(CliError::usage)?;
            let a1 = trace as f64 / (q as f64).sqrt();
            let dlog = arith::dlog_table_mod_p2(p, generator);
            let class = dlog[(q % u64::from(m)) as usize];
            let mut output = Output::new(vec!["q", "residue_class", "trace", "a1"]);
            output.meta("command", "lpoly").meta("p", p).meta("m", m);
            a1_convention_meta(&mut output, generator);
            output.row(vec![
                json!(q),
                json!(class),
                json!(trace),
                json!(format!("{a1:.11e}")),
            ]);
            Ok(output)
        }
        (None, Some(bound)) => {
            let state = run_sweep(p, bound, generator, jobs, resume)?;
            let numerical = sweep::numerical_moments(&state, max_n);
            let report = moments::averaged_moments_with_generator(p, generator, max_n, budget)
                .map_err(CliError::runtime)?;
            let mut output = Output::new(vec!["n", "numerical", "theoretical", "relative_error"]);
            output
                .meta("command", "lpoly")
                .meta("p", p)
                .meta("m", m)
                .meta("bound", bound)
                .meta("records", numerical.total_records);
            a1_convention_meta(&mut output, generator);
            for n in 1..=max_n {
                let empirical = numerical.overall[(n - 1) as usize];
                let theoretical = report.averaged_moment(n).to_f64().unwrap_or(f64::NAN);
                let relative = if theoretical == 0.0 {
                    Value::Null
                } else {
                    json!((empirical - theoretical).abs() / theoretical.abs())
                };
                output.row(vec![
                    json!(n),
                    json!(empirical),
                    json!(theoretical),
                    relative,
                ]);
            }
            Ok(output)
        }
        _ => Err(CliError::Usage(
            "lpoly needs exactly one of --q or --bound".into(),
        )),
    }
}

fn histogram_output(
    p: u32,
    bound: u64,
    bins: u32,
    generator: Option<u32>,
    jobs: usize,
    resume: bool,
) -> Result<Output, CliError> {
    if bins == 0 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }
    let generator = resolve_generator(p, generator)?;
    let state = run_sweep(p, bound, generator, jobs, resume)?;
    let histogram = sweep::histogram(&state, bins);
    let width = (histogram.hi - histogram.lo) / f64::from(bins);
    let mut output = Output::new(vec!["bin_left", "bin_right", "count"]);
    output
        .meta("command", "histogram")
        .meta("p", p)
        .meta("bound", bound)
        .meta("bins", bins)
        .meta("total_records", histogram.total_records)
        .meta("zero_count", histogram.zero_count)
        .meta(
            "zero_fraction",
            format!(
                "{:.6}",
                histogram.zero_count as f64 / histogram.total_records.max(1) as f64
            ),
        );
    a1_convention_meta(&mut output, generator);
    output.meta(
        "note",
        "records with trace exactly 0 sit in zero_count, not in the bins",
    );
    for (i, count) in histogram.counts.iter().enumerate() {
        let left = histogram.lo + width * i as f64;
        let right = histogram.lo + width * (i + 1) as f64;
        output.row(vec![
            json!(format!("{left:.6}")),
            json!(format!("{right:.6}")),
            json!(count),
        ]);
    }
    Ok(output)
}

fn verify_output(
    suite: &str,
    bound: u64,
    jobs: usize,
    budget: u64,
    bins: u32,
) -> Result<(Output, bool), CliError> {
    let suite: Suite = suite.parse().map_err(CliError::Usage)?;
    let config = VerifyConfig {
        sweep_bound: bound,
        sweep_dir: cache_dir(),
        jobs,
        moment_budget: budget,
        work_budget: shioda::DEFAULT_WORK_BUDGET,
        histogram_bins: bins,
    };
    let results = verify::run_suite(suite, &config);
    let passed = verify::all_passed(&results);
    let mut output = Output::new(vec!["check", "kind", "status", "seconds", "detail"]);
    output
        .meta("command", "verify")
        .meta("suite", suite)
        .meta("sweep_bound", bound)
        .meta(
            "checks",
            format!(
                "{} run, {} passed",
                results.len(),
                results.iter().filter(|r| r.passed).count()
            ),
        );
    for result in &results {
        output.row(vec![
            json!(result.id),
            json!(match result.kind {
                CheckKind::Exact => "exact",
                CheckKind::Statistical => "statistical",
            }),
            json!(if result.passed { "PASS" } else { "FAIL" }),
            json!(format!("{:.2}", result.seconds)),
            json!(result.detail),
        ]);
    }
    Ok((output, passed))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let (output, exit) = match cli.command {
        Command::Tuples {
            m,
            d,
            stage,
            filter,
            count_only,
            budget,
        } => (
            tuples_output(m, d, stage, filter, count_only, budget)?,
            ExitCode::SUCCESS,
        ),
        Command::Classify { m, entries } => (classify_output(m, entries)?, ExitCode::SUCCESS),
        Command::Relations { p } => (relations_output(p)?, ExitCode::SUCCESS),
        Command::Gamma { p, generator } => (gamma_output(p, generator)?, ExitCode::SUCCESS),
        Command::Moments {
            p,
            max_n,
            generator,
            budget,
        } => (
            moments_output(p, max_n, generator, budget)?,
            ExitCode::SUCCESS,
        ),
        Command::Lpoly(args) => (lpoly_output(args)?, ExitCode::SUCCESS),
        Command::Histogram {
            p,
            bound,
            bins,
            generator,
            jobs,
            resume,
        } => (
            histogram_output(p, bound, bins, generator, jobs, resume)?,
            ExitCode::SUCCESS,
        ),
        Command::Verify {
            suite,
            bound,
            jobs,
            budget,
            bins,
        } => {
            let (output, passed) = verify_output(&suite, bound, jobs, budget, bins)?;
            (
                output,
                if passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                },
            )
        }
    };

    let text = render(&output, cli.format);
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(CliError::runtime)?,
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(CliError::runtime)?,
    }
    Ok(exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
