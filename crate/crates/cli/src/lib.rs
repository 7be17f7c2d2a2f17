//! Command-line surface over the moments library: derive formulas, evaluate
//! exact moments at a point, reproduce the published moment tables, emit the
//! figure data grid, and run the verification suites.
//!
//! Exit codes: 0 on success, 1 on verification failure (or I/O trouble),
//! 2 on usage errors.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use binomial_moments::moments::{
    derive_moment, factorial_moment, raw_moment_via_factorial, Basis, DerivationMethod,
    FormulaDoc, FormulaJson, MomentError, MomentKind, MomentQuery,
};
use binomial_moments::numeric::{decimal_15, is_decimal_literal, parse_rational, rational_str};
use binomial_moments::oracle::{evaluate_formula, oracle_moment, DomainError};
use binomial_moments::verify::{
    default_bounds_ps, default_oracle_ps, run_algs_suite, run_bounds_suite, run_identities_suite,
    run_oracle_suite, run_routes_suite, run_symmetry_suite, SuiteReport,
};

/// Largest order accepted anywhere on the CLI.
const MAX_ORDER: u32 = 64;
/// Largest order for the routes that enumerate compositions of d with
/// parts of size two or more; the count grows like 1.6^d, so bigger
/// orders must go through the fast method.
const MAX_DIRECT_ORDER: u32 = 28;
/// Largest trial count for `eval`, which sums n+1 exact density terms.
const MAX_EVAL_N: u64 = 50_000;

#[derive(Parser)]
#[command(
    name = "binomial-moments",
    version,
    about = "Exact binomial-moment formulas: derivation, evaluation and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Derive a closed-form moment formula
    Derive(DeriveArgs),
    /// Evaluate an exact moment at (n, p)
    Eval(EvalArgs),
    /// Emit a whole moment table over a range of orders
    Table(TableArgs),
    /// Emit the (n, p, moment) CSV grid for a central moment
    FigureData(FigureDataArgs),
    /// Run a verification suite and emit a machine-readable report
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Raw,
    Central,
    Factorial,
}

impl KindArg {
    fn to_kind(self) -> MomentKind {
        match self {
            KindArg::Raw => MomentKind::Raw,
            KindArg::Central => MomentKind::Central,
            KindArg::Factorial => MomentKind::Factorial,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    P,
    Variance,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Stable composition expansion, then symmetrization
    Direct,
    /// Associated-Stirling regrouped form, then symmetrization
    Fast,
    /// Elementary-symmetric rewriting of the p,q form
    Alg1,
    /// Normal-form reduction modulo sigma^2 - p(1-p)
    Alg2,
}

impl MethodArg {
    fn to_method(self) -> DerivationMethod {
        match self {
            MethodArg::Direct => DerivationMethod::Direct,
            MethodArg::Fast => DerivationMethod::Fast,
            MethodArg::Alg1 => DerivationMethod::Symmetrize,
            MethodArg::Alg2 => DerivationMethod::Reduction,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Latex,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Oracle,
    Routes,
    Algs,
    Symmetry,
    Bounds,
    Identities,
    All,
}

#[derive(Args)]
pub struct DeriveArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Moment order
    #[arg(long)]
    pub d: u32,
    #[arg(long, value_enum, default_value_t = BasisArg::P)]
    pub basis: BasisArg,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Write to a file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub n: u64,
    /// Exact probability: `a/b` or a decimal (converted exactly)
    #[arg(long)]
    pub p: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 2)]
    pub from: u32,
    #[arg(long, default_value_t = 10)]
    pub to: u32,
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FigureDataArgs {
    /// Central-moment order
    #[arg(long)]
    pub d: u32,
    /// Smallest n in the grid
    #[arg(long, default_value_t = 0)]
    pub from: u64,
    /// Largest n in the grid
    #[arg(long, default_value_t = 99)]
    pub to: u64,
    /// Number of uniform p-steps: the grid is p = i / p-steps, i = 0..=p-steps
    #[arg(long, default_value_t = 100)]
    pub p_steps: u32,
    /// Append a column with the exact rational value
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
    /// Largest moment order in the grid (suite-specific default)
    #[arg(long)]
    pub dmax: Option<u32>,
    /// Largest trial count in the grid (suite-specific default)
    #[arg(long)]
    pub nmax: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Internal(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<MomentError> for CliError {
    fn from(e: MomentError) -> Self {
        match e {
            MomentError::InvalidQuery(msg) => CliError::Usage(msg),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn run(cli: Cli) -> ExitCode {
    match execute(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Derive(args) => cmd_derive(args).map(|()| ExitCode::SUCCESS),
        Command::Eval(args) => cmd_eval(args).map(|()| ExitCode::SUCCESS),
        Command::Table(args) => cmd_table(args).map(|()| ExitCode::SUCCESS),
        Command::FigureData(args) => cmd_figure_data(args).map(|()| ExitCode::SUCCESS),
        Command::Check(args) => cmd_check(args),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn check_order(d: u32, method: Option<MethodArg>) -> Result<(), CliError> {
    if d > MAX_ORDER {
        return Err(CliError::Usage(format!(
            "order {d} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    let uses_compositions = !matches!(method, Some(MethodArg::Fast));
    if uses_compositions && d > MAX_DIRECT_ORDER {
        return Err(CliError::Usage(format!(
            "order {d} is too large for the composition-enumerating routes \
             (limit {MAX_DIRECT_ORDER}); pass --method fast"
        )));
    }
    Ok(())
}

fn cmd_derive(args: DeriveArgs) -> Result<(), CliError> {
    if args.kind == KindArg::Central {
        check_order(args.d, args.method)?;
    } else if args.d > MAX_ORDER {
        return Err(CliError::Usage(format!(
            "order {} exceeds the supported maximum {MAX_ORDER}",
            args.d
        )));
    }
    let query = MomentQuery {
        kind: args.kind.to_kind(),
        d: args.d,
        basis: match args.basis {
            BasisArg::P => Basis::P,
            BasisArg::Variance => Basis::Variance,
        },
        method: args.method.map(MethodArg::to_method),
    };
    let doc = derive_moment(&query)?;
    let rendered = match args.format {
        FormatArg::Text => doc.to_text()?,
        FormatArg::Latex => doc.to_latex()?,
        FormatArg::Json => doc.to_json_string(),
        FormatArg::Csv => {
            return Err(CliError::Usage(
                "csv format is not defined for derive; use table or figure-data".into(),
            ))
        }
    };
    write_output(&args.out, &format!("{rendered}\n"))
}

#[derive(Serialize)]
struct EvalJson {
    kind: String,
    d: u32,
    n: u64,
    p: String,
    exact: String,
    approx: String,
}

fn parse_probability(raw: &str) -> Result<BigRational, CliError> {
    let p = parse_rational(raw).map_err(|e| CliError::Usage(format!("invalid --p: {e}")))?;
    if p < BigRational::zero() || p > BigRational::one() {
        return Err(CliError::Usage(format!(
            "probability must lie in [0, 1], got {raw}"
        )));
    }
    if is_decimal_literal(raw) {
        eprintln!(
            "note: --p {raw} converted exactly to {} (power-of-ten denominator)",
            rational_str(&p)
        );
    }
    Ok(p)
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    if args.d > MAX_ORDER {
        return Err(CliError::Usage(format!(
            "order {} exceeds the supported maximum {MAX_ORDER}",
            args.d
        )));
    }
    if args.n > MAX_EVAL_N {
        return Err(CliError::Usage(format!(
            "--n {} exceeds the eval limit {MAX_EVAL_N}; derive the formula and evaluate it instead",
            args.n
        )));
    }
    let p = parse_probability(&args.p)?;
    let value = oracle_moment(args.n, &p, args.d, args.kind.to_kind())?;
    let content = match args.format {
        FormatArg::Text => format!(
            "exact: {}\napprox: {}\n",
            rational_str(&value),
            decimal_15(&value)
        ),
        FormatArg::Json => {
            let doc = EvalJson {
                kind: args.kind.to_kind().as_str().to_string(),
                d: args.d,
                n: args.n,
                p: rational_str(&p),
                exact: rational_str(&value),
                approx: decimal_15(&value),
            };
            format!("{}\n", serde_json::to_string(&doc).expect("eval serialization"))
        }
        _ => {
            return Err(CliError::Usage(
                "eval supports text and json formats only".into(),
            ))
        }
    };
    write_output(&args.out, &content)
}

#[derive(Serialize)]
struct TableJson {
    kind: String,
    basis: String,
    rows: Vec<FormulaJson>,
}

fn table_doc(kind: KindArg, basis: BasisArg, d: u32) -> Result<FormulaDoc, CliError> {
    match kind {
        KindArg::Raw => Ok(raw_moment_via_factorial(d)),
        KindArg::Factorial => Ok(factorial_moment(d)),
        KindArg::Central => {
            let query = MomentQuery {
                kind: MomentKind::Central,
                d,
                basis: match basis {
                    BasisArg::P => Basis::P,
                    BasisArg::Variance => Basis::Variance,
                },
                method: None,
            };
            Ok(derive_moment(&query)?)
        }
    }
}

fn table_row_text(kind: KindArg, doc: &FormulaDoc) -> Result<String, CliError> {
    Ok(match kind {
        KindArg::Raw => doc.to_binom_basis_text()?,
        _ => doc.to_text()?,
    })
}

fn table_row_latex(kind: KindArg, doc: &FormulaDoc) -> Result<String, CliError> {
    Ok(match kind {
        KindArg::Raw => doc.to_binom_basis_latex()?,
        _ => doc.to_latex()?,
    })
}

fn cmd_table(args: TableArgs) -> Result<(), CliError> {
    if args.from > args.to {
        return Err(CliError::Usage(format!(
            "empty order range {}..{}",
            args.from, args.to
        )));
    }
    let basis = match (args.kind, args.basis) {
        (KindArg::Central, None) => BasisArg::Variance,
        (KindArg::Central, Some(b)) => b,
        (_, None | Some(BasisArg::P)) => BasisArg::P,
        (_, Some(BasisArg::Variance)) => {
            return Err(CliError::Usage(
                "variance basis is only defined for central moments".into(),
            ))
        }
    };
    if args.kind == KindArg::Central {
        check_order(args.to, None)?;
    } else if args.to > MAX_ORDER {
        return Err(CliError::Usage(format!(
            "order {} exceeds the supported maximum {MAX_ORDER}",
            args.to
        )));
    }
    let mut docs = Vec::new();
    for d in args.from..=args.to {
        docs.push((d, table_doc(args.kind, basis, d)?));
    }
    let content = match args.format {
        FormatArg::Text => {
            let mut s = String::new();
            for (d, doc) in &docs {
                s.push_str(&format!("{d}\t{}\n", table_row_text(args.kind, doc)?));
            }
            s
        }
        FormatArg::Latex => {
            let mut s = String::new();
            for (d, doc) in &docs {
                s.push_str(&format!("{d} & {} \\\\\n", table_row_latex(args.kind, doc)?));
            }
            s
        }
        FormatArg::Csv => {
            let mut s = String::from("d,formula\n");
            for (d, doc) in &docs {
                s.push_str(&format!("{d},\"{}\"\n", table_row_text(args.kind, doc)?));
            }
            s
        }
        FormatArg::Json => {
            let table = TableJson {
                kind: args.kind.to_kind().as_str().to_string(),
                basis: match basis {
                    BasisArg::P => "p".to_string(),
                    BasisArg::Variance => "variance".to_string(),
                },
                rows: docs.iter().map(|(_, doc)| FormulaJson::from_doc(doc)).collect(),
            };
            format!("{}\n", serde_json::to_string(&table).expect("table serialization"))
        }
    };
    write_output(&args.out, &content)
}

fn cmd_figure_data(args: FigureDataArgs) -> Result<(), CliError> {
    if args.d < 2 {
        return Err(CliError::Usage("figure-data requires --d >= 2".into()));
    }
    if args.d > MAX_ORDER {
        return Err(CliError::Usage(format!(
            "order {} exceeds the supported maximum {MAX_ORDER}",
            args.d
        )));
    }
    if args.from > args.to {
        return Err(CliError::Usage(format!(
            "empty n range {}..{}",
            args.from, args.to
        )));
    }
    if args.p_steps == 0 {
        return Err(CliError::Usage("--p-steps must be positive".into()));
    }
    if args.format != FormatArg::Csv {
        return Err(CliError::Usage("figure-data emits csv only".into()));
    }
    // the fast route keeps large orders tractable
    let query = MomentQuery {
        kind: MomentKind::Central,
        d: args.d,
        basis: Basis::Variance,
        method: Some(DerivationMethod::Fast),
    };
    let doc = derive_moment(&query)?;
    let steps = BigRational::from_integer(args.p_steps.into());
    let mut content = String::from(if args.exact { "n,p,value,exact\n" } else { "n,p,value\n" });
    for n in args.from..=args.to {
        for i in 0..=args.p_steps {
            let p = BigRational::from_integer(i.into()) / &steps;
            let value = evaluate_formula(&doc, n, &p)?;
            content.push_str(&format!("{n},{},{}", decimal_15(&p), decimal_15(&value)));
            if args.exact {
                content.push_str(&format!(",{}", rational_str(&value)));
            }
            content.push('\n');
        }
    }
    write_output(&args.out, &content)
}

#[derive(Serialize)]
struct CheckRunJson {
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn suite_reports(args: &CheckArgs) -> Result<Vec<SuiteReport>, CliError> {
    let suites = match args.suite {
        SuiteArg::All => vec![
            SuiteArg::Identities,
            SuiteArg::Routes,
            SuiteArg::Algs,
            SuiteArg::Symmetry,
            SuiteArg::Oracle,
            SuiteArg::Bounds,
        ],
        suite => vec![suite],
    };
    suites
        .into_iter()
        .map(|suite| {
            let (default_d, default_n) = match suite {
                SuiteArg::Oracle => (10, 12),
                SuiteArg::Bounds => (16, 64),
                _ => (12, 0),
            };
            let dmax = args.dmax.unwrap_or(default_d);
            let nmax = args.nmax.unwrap_or(default_n);
            if dmax > MAX_DIRECT_ORDER {
                return Err(CliError::Usage(format!(
                    "--dmax {dmax} exceeds the suite limit {MAX_DIRECT_ORDER}"
                )));
            }
            if nmax > 512 {
                return Err(CliError::Usage(format!(
                    "--nmax {nmax} exceeds the suite limit 512"
                )));
            }
            Ok(match suite {
                SuiteArg::Oracle => run_oracle_suite(dmax, nmax, &default_oracle_ps()),
                SuiteArg::Routes => run_routes_suite(dmax),
                SuiteArg::Algs => run_algs_suite(dmax),
                SuiteArg::Symmetry => run_symmetry_suite(dmax),
                SuiteArg::Bounds => run_bounds_suite(dmax, nmax, &default_bounds_ps()),
                SuiteArg::Identities => run_identities_suite(dmax),
                SuiteArg::All => unreachable!("expanded above"),
            })
        })
        .collect()
}

fn bounds_rows_csv(reports: &[SuiteReport]) -> Result<String, CliError> {
    let mut s = String::from(
        "n,p,d,moment,upper_bound,best_lower,best_lower_k,moment_root,envelope,ratio,upper_holds,lower_holds\n",
    );
    let mut found = false;
    for report in reports {
        let Some(rows) = &report.rows else { continue };
        found = true;
        for row in rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.n,
                row.p,
                row.d,
                row.moment,
                row.upper_bound,
                row.best_lower.as_deref().unwrap_or(""),
                row.best_lower_k.map(|k| k.to_string()).unwrap_or_default(),
                row.moment_root,
                row.envelope.map(|e| e.to_string()).unwrap_or_default(),
                row.ratio.map(|r| r.to_string()).unwrap_or_default(),
                row.upper_holds,
                row.lower_holds,
            ));
        }
    }
    if !found {
        return Err(CliError::Usage(
            "csv format only applies to suites with grid rows (bounds)".into(),
        ));
    }
    Ok(s)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, CliError> {
    let reports = suite_reports(&args)?;
    let passed = reports.iter().all(|r| r.passed);
    let content = match args.format {
        FormatArg::Json => {
            let run = CheckRunJson {
                passed,
                suites: reports,
            };
            format!(
                "{}\n",
                serde_json::to_string_pretty(&run).expect("report serialization")
            )
        }
        FormatArg::Csv => bounds_rows_csv(&reports)?,
        _ => {
            return Err(CliError::Usage(
                "check supports json and csv formats only".into(),
            ))
        }
    };
    write_output(&args.out, &content)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
