//! Command-line front end for the dmodp engine: dimension tables, operator
//! actions, and recomputation reports against the source tables, as CSV or
//! JSON. Exit codes: 0 success, 1 verification failure or computation error,
//! 2 usage/input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmodp::diffop::Operator;
use dmodp::fieldpoly::Prime;
use dmodp::filtration::{growth_series, GrowthRecord, GrowthSeries};
use dmodp::frobmod::{FrobModule, GeneratorKind, GeneratorSequence, ModuleElement, SequenceCheck};
use dmodp::verify::{
    approx_sig6, check_lemma31, check_lemma41a, check_lemma41b, check_thm32, check_thm42,
    default_thm32_emax, default_thm42_range, limits_report, CheckReport, DEFAULT_LEMMA31_KMAX,
    DEFAULT_LEMMA41A_KMAX, DEFAULT_LIMITS_EMAX,
};
use dmodp::Error;

/// Primes at or above this make the exact sweeps infeasible; reject early.
const P_CAP: u64 = 1000;

/// Longest --i range we are willing to materialize.
const RANGE_CAP: u64 = 100_000;

#[derive(Parser)]
#[command(name = "dmodp", version, about = "Exact divided-power operator calculus mod p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filtration dimension table over a range of indices
    Dim(TableArgs),
    /// Dimension table plus the empirical slope bound max dim/i
    Growth(TableArgs),
    /// Apply an operator to a module element and print the image
    Act(ActArgs),
    /// Recompute a source table or claim and report agreement
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ModuleArgs {
    /// Prime modulus (default 2, or the gseq file's own)
    #[arg(long)]
    p: Option<u64>,
    /// Built-in generator sequence
    #[arg(long, value_enum, conflicts_with = "gseq_file")]
    example: Option<ExampleKind>,
    /// JSON file {"p": <prime>, "g": ["<poly>", ...]} with a custom sequence
    #[arg(long)]
    gseq_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleKind {
    Ex1,
    Ex2,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a 6-significant-digit readable ratio column to tables
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// Comma-separated generators out of s1,s2
    #[arg(long, default_value = "s2")]
    gens: String,
    /// Filtration indices: inclusive range "a..b" or comma list "a,b,c"
    #[arg(long)]
    i: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ActArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// Operator text, e.g. "x^2*D_4 + D_1"
    #[arg(long)]
    op: String,
    /// Module element text "(f1, f2)"
    #[arg(long)]
    target: String,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which recomputation to run
    #[arg(value_enum)]
    check: CheckName,
    /// Prime modulus (default 2)
    #[arg(long)]
    p: Option<u64>,
    /// Smallest index for the dimension-formula sweep
    #[arg(long)]
    i_min: Option<u64>,
    /// Largest index for the dimension-formula sweep
    #[arg(long)]
    i_max: Option<u64>,
    /// Largest exponent for the growth and limit checks
    #[arg(long)]
    e_max: Option<u32>,
    /// Largest tower level for the derivative-table checks
    #[arg(long)]
    kmax: Option<u32>,
    /// Total-order budget for the product-table check
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CheckName {
    Lemma31,
    Lemma41a,
    Lemma41b,
    Thm42,
    Thm32,
    Limits,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run(cli: Cli) -> dmodp::Result<ExitCode> {
    match cli.command {
        Command::Dim(args) => cmd_table(args, false),
        Command::Growth(args) => cmd_table(args, true),
        Command::Act(args) => cmd_act(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

/// Configuration problems exit 2; failures of exact computation exit 1.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotPrime(_)
        | Error::ModulusMismatch(_, _)
        | Error::Parse(_)
        | Error::InvalidInput(_) => 2,
        Error::Overflow(_)
        | Error::InvalidLevel { .. }
        | Error::ShortSequence { .. }
        | Error::FormulaUndefined { .. } => 1,
    }
}

fn resolve_prime(requested: Option<u64>, from_file: Option<u64>) -> dmodp::Result<Prime> {
    let value = match (requested, from_file) {
        (Some(a), Some(b)) if a != b => return Err(Error::ModulusMismatch(a, b)),
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => 2,
    };
    if value >= P_CAP {
        return Err(Error::InvalidInput(format!(
            "p = {value} is too large for exact sweeps (limit {P_CAP})"
        )));
    }
    Prime::new(value)
}

fn build_module(args: &ModuleArgs) -> dmodp::Result<FrobModule> {
    match &args.gseq_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
            })?;
            let gseq = GeneratorSequence::from_json_str(&text)?;
            resolve_prime(args.p, Some(gseq.modulus().get()))?;
            let len = match gseq.kind() {
                GeneratorKind::Custom(entries) => entries.len(),
                _ => 0,
            };
            if len > 0 {
                if let SequenceCheck::Violation { r, level } = gseq.validate(len as u32 - 1)? {
                    return Err(Error::InvalidInput(format!(
                        "generator {r} sits at tower level {level:?}, breaking the strict climb"
                    )));
                }
            }
            Ok(FrobModule::new(gseq))
        }
        None => {
            let p = resolve_prime(args.p, None)?;
            Ok(match args.example.unwrap_or(ExampleKind::Ex2) {
                ExampleKind::Ex1 => FrobModule::ex1(p),
                ExampleKind::Ex2 => FrobModule::ex2(p),
            })
        }
    }
}

fn parse_gens(text: &str, p: Prime) -> dmodp::Result<Vec<ModuleElement>> {
    let mut gens = Vec::new();
    for name in text.split(',') {
        let gen = match name.trim() {
            "s1" => ModuleElement::s1(p),
            "s2" => ModuleElement::s2(p),
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown generator {other:?}; expected s1 and/or s2"
                )))
            }
        };
        if !gens.contains(&gen) {
            gens.push(gen);
        }
    }
    Ok(gens)
}

fn parse_i_values(text: &str) -> dmodp::Result<Vec<u64>> {
    let parse_one = |s: &str| -> dmodp::Result<u64> {
        s.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad filtration index {:?}", s.trim())))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (parse_one(lo)?, parse_one(hi)?);
        if hi >= lo && hi - lo >= RANGE_CAP {
            return Err(Error::InvalidInput(format!(
                "range {lo}..{hi} is too long (limit {RANGE_CAP} indices)"
            )));
        }
        Ok((lo..=hi).collect())
    } else {
        let values: Vec<u64> = text.split(',').map(parse_one).collect::<dmodp::Result<_>>()?;
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "filtration indices must be strictly ascending".into(),
            ));
        }
        Ok(values)
    }
}

fn cmd_table(args: TableArgs, with_slope: bool) -> dmodp::Result<ExitCode> {
    let module = build_module(&args.module)?;
    let gens = parse_gens(&args.gens, module.modulus())?;
    let i_values = parse_i_values(&args.i)?;
    let series = growth_series(&module, &gens, &i_values)?;
    let text = match args.output.format {
        Format::Csv => table_csv(&series, with_slope, args.output.pretty),
        Format::Json => table_json(&series, with_slope, args.output.pretty),
    };
    emit(&args.output.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn table_csv(series: &GrowthSeries, with_slope: bool, pretty: bool) -> String {
    let mut out = String::from("i,dim,ratio_num,ratio_den,formula,match");
    if pretty {
        out.push_str(",ratio_approx");
    }
    out.push('\n');
    let blank_if_none = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &series.records {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            r.i,
            r.dim,
            blank_if_none(r.ratio_num),
            blank_if_none(r.ratio_den),
            blank_if_none(r.formula),
            r.matches.map(|b| b.to_string()).unwrap_or_default(),
        ));
        if pretty {
            out.push(',');
            if let Some((n, d)) = r.ratio() {
                out.push_str(&approx_sig6(n as u128, d as u128));
            }
        }
        out.push('\n');
    }
    if with_slope {
        match series.empirical_slope_bound {
            Some((n, d)) => out.push_str(&format!("# empirical_slope_bound,{n},{d}\n")),
            None => out.push_str("# empirical_slope_bound,,\n"),
        }
    }
    out
}

fn record_value(r: &GrowthRecord, pretty: bool) -> serde_json::Value {
    let mut value = serde_json::to_value(r).expect("record serialization is infallible");
    if pretty {
        if let Some((n, d)) = r.ratio() {
            value["ratio_approx"] =
                serde_json::Value::String(approx_sig6(n as u128, d as u128));
        }
    }
    value
}

fn table_json(series: &GrowthSeries, with_slope: bool, pretty: bool) -> String {
    let records: Vec<_> = series
        .records
        .iter()
        .map(|r| record_value(r, pretty))
        .collect();
    let doc = if with_slope {
        serde_json::json!({
            "records": records,
            "empirical_slope_bound": series.empirical_slope_bound,
        })
    } else {
        serde_json::Value::Array(records)
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("table serialization is infallible");
    text.push('\n');
    text
}

fn cmd_act(args: ActArgs) -> dmodp::Result<ExitCode> {
    let module = build_module(&args.module)?;
    let p = module.modulus();
    let op = Operator::parse(&args.op, p)?;
    let target = ModuleElement::parse(&args.target, p)?;
    let image = module.act(&op, &target)?;
    emit(&args.out, &format!("{image}\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> dmodp::Result<ExitCode> {
    let p = resolve_prime(args.p, None)?;
    let reports = build_reports(&args, p)?;
    let text = match args.output.format {
        Format::Csv => reports_csv(&reports),
        Format::Json => reports_json(&reports),
    };
    emit(&args.output.out, &text)?;
    Ok(if reports.iter().all(CheckReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn build_reports(args: &VerifyArgs, p: Prime) -> dmodp::Result<Vec<CheckReport>> {
    let (def_imin, def_imax) = default_thm42_range(p);
    let one = |name: CheckName| -> dmodp::Result<CheckReport> {
        match name {
            CheckName::Lemma31 => check_lemma31(p, args.kmax.unwrap_or(DEFAULT_LEMMA31_KMAX)),
            CheckName::Lemma41a => check_lemma41a(p, args.kmax.unwrap_or(DEFAULT_LEMMA41A_KMAX)),
            CheckName::Lemma41b => {
                let default_budget = p.pow(4)?;
                check_lemma41b(p, args.budget.unwrap_or(default_budget))
            }
            CheckName::Thm42 => check_thm42(
                p,
                args.i_min.unwrap_or(def_imin),
                args.i_max.unwrap_or(def_imax),
            ),
            CheckName::Thm32 => check_thm32(p, args.e_max.unwrap_or_else(|| default_thm32_emax(p))),
            CheckName::Limits => limits_report(p, args.e_max.unwrap_or(DEFAULT_LIMITS_EMAX)),
            CheckName::All => unreachable!("expanded by the caller"),
        }
    };
    if args.check == CheckName::All {
        [
            CheckName::Lemma31,
            CheckName::Lemma41a,
            CheckName::Lemma41b,
            CheckName::Thm42,
            CheckName::Thm32,
            CheckName::Limits,
        ]
        .into_iter()
        .map(one)
        .collect()
    } else {
        Ok(vec![one(args.check)?])
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn reports_csv(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for (idx, report) in reports.iter().enumerate() {
        if idx > 0 {
            out.push('\n');
        }
        out.push_str(&format!("# check,{},p,{}\n", report.check, report.p));
        for (k, v) in &report.params {
            out.push_str(&format!("# param,{k},{v}\n"));
        }
        out.push_str("inputs,oracle,paper,verdict,note\n");
        for case in &report.cases {
            let inputs = case
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&inputs),
                csv_field(&case.oracle),
                csv_field(&case.paper),
                case.verdict.as_str(),
                csv_field(case.note.as_deref().unwrap_or("")),
            ));
        }
        for note in &report.notes {
            out.push_str(&format!("# note,{}\n", csv_field(note)));
        }
        let s = report.summary;
        out.push_str(&format!(
            "# summary,match,{},suspected,{},out_of_range,{},fail,{}\n",
            s.matches, s.suspected, s.out_of_range, s.fail
        ));
    }
    out
}

fn reports_json(reports: &[CheckReport]) -> String {
    let mut text = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(reports).expect("report serialization is infallible")
    };
    text.push('\n');
    text
}

fn emit(out: &Option<PathBuf>, text: &str) -> dmodp::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
