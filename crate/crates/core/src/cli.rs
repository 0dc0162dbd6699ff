//! Command-line front end.
//!
//! Every flag can also come from a TOML file passed with `--config`: keys
//! are the long flag names, either at the top level (shared by all
//! subcommands) or under a `[table]`, `[verify]`, `[oracle]`, `[series]` or
//! `[cross-check]` section. Flags given on the command line win over the
//! file, and a section wins over the top level.
//!
//! Exit codes: 0 success, 1 identity failure, 2 usage or parameter error,
//! 3 oracle cap exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, BigInt, Rational};
use crate::formulas;
use crate::paths::{Oracle, OracleCap, Statistic, ORACLE_CAP_ENV};
use crate::series::{self, TruncSeries};
use crate::verify::{self, CheckReport, Grid, GridOverrides};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

const INDEX_HELP: &str = "\
Index conventions (r-colored Dyck paths with no two consecutive down steps of the same color):
  count   S_n: admissible paths of length 2n
  points  P(n,l): points at level l, over paths of length 2n
  usteps  U(n,l): up steps ending at level l+1, over paths of length 2(n+1)
  peaks   p(n,l): peaks at level l+1, over paths of length 2(n+1)
  udu     T(n,l): paths of length 2n with exactly l udu windows (row n has l < n)
  dd      A(n,k): all r-colored paths of length 2n with exactly k same-colored dd pairs
So `oracle --stat usteps --n 2 --level 1` counts up steps reaching level 2 in paths of length 6.";

#[derive(Debug, Parser)]
#[command(
    name = "riordan-paths",
    version,
    about = "Exact counts of statistics on colored Dyck paths",
    after_long_help = INDEX_HELP
)]
pub struct Cli {
    /// TOML file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a count triangle (or the S_n row for `count`).
    #[command(after_long_help = INDEX_HELP)]
    Table(TableArgs),
    /// Run identity checks on a parameter grid.
    Verify(VerifyArgs),
    /// Enumerate paths by brute force and report one value.
    #[command(after_long_help = INDEX_HELP)]
    Oracle(OracleArgs),
    /// Print the coefficients of a generating function.
    Series(SeriesArgs),
    /// Check that all routes agree on a statistic's triangle.
    #[command(name = "cross-check")]
    CrossCheck(CrossArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    #[value(alias = "md")]
    #[serde(alias = "md")]
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableStat {
    Points,
    Usteps,
    Peaks,
    Udu,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStat {
    Points,
    Usteps,
    Peaks,
    Udu,
    Count,
    Dd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossStat {
    Points,
    Usteps,
    Peaks,
    Udu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum SeriesKind {
    /// S(a, b; x), large Schröder with weights a, b
    #[value(name = "S")]
    S,
    /// C(a, b; x), Narayana-weighted Catalan
    #[value(name = "C")]
    C,
    /// M(a, b; x), weighted Motzkin
    #[value(name = "M")]
    M,
    /// S_r(x) = S(1, r-1; x)
    #[value(name = "Sr")]
    Sr,
    /// T_0(x), udu-avoiding admissible paths
    #[value(name = "T0")]
    T0,
    /// Z_m(a, b; x), the m-th stage of the Schröder tower
    #[value(name = "Z")]
    Z,
}

fn statistic(stat: TableStat) -> Option<Statistic> {
    match stat {
        TableStat::Points => Some(Statistic::Points),
        TableStat::Usteps => Some(Statistic::USteps),
        TableStat::Peaks => Some(Statistic::Peaks),
        TableStat::Udu => Some(Statistic::Udu),
        TableStat::Count => None,
    }
}

fn cli_rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

fn de_list<'de, D: Deserializer<'de>, T: Deserialize<'de>>(d: D) -> std::result::Result<Option<Vec<T>>, D::Error> {
    Ok(Option::<OneOrMany<T>>::deserialize(d)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    }))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

impl RawRational {
    fn parse<E: serde::de::Error>(self) -> std::result::Result<Rational, E> {
        match self {
            RawRational::Int(v) => Ok(crate::exact::int(v)),
            RawRational::Text(s) => parse_rational(&s).map_err(E::custom),
        }
    }
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
    Option::<RawRational>::deserialize(d)?.map(RawRational::parse).transpose()
}

fn de_rational_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
    match de_list::<D, RawRational>(d)? {
        None => Ok(None),
        Some(v) => v.into_iter().map(RawRational::parse).collect::<std::result::Result<_, _>>().map(Some),
    }
}

macro_rules! merge_fields {
    ($self:ident, $file:ident; $($f:ident),*) => {
        Self { $($f: $self.$f.or($file.$f)),* }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct TableArgs {
    /// Statistic to tabulate.
    #[arg(long, value_enum)]
    pub stat: Option<TableStat>,
    /// Number of colors; a comma-separated list prints one block per value
    /// [default: 2, or 2,3,4,5 for count].
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "de_list")]
    pub r: Option<Vec<u32>>,
    /// Last row index [default: 6, or 8 for count].
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl TableArgs {
    fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; stat, r, n_max, format)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Check id, or `all` [default: all].
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "de_list")]
    pub r: Option<Vec<u32>>,
    /// Replaces the (a, b) grid with a single pair (b defaults to 1).
    #[arg(long, value_parser = cli_rational, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_rational")]
    pub a: Option<Rational>,
    /// Replaces the (a, b) grid with a single pair (a defaults to 1).
    #[arg(long, value_parser = cli_rational, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_rational")]
    pub b: Option<Rational>,
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Rational exponents for the generalized-binomial check.
    #[arg(long, value_parser = cli_rational, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_rational_list")]
    pub m: Option<Vec<Rational>>,
    /// Truncation order for series-level checks.
    #[arg(long)]
    pub order: Option<usize>,
    /// Largest row also checked by enumeration.
    #[arg(long)]
    pub oracle_n_max: Option<usize>,
    /// Largest semilength the enumeration oracle accepts.
    #[arg(long)]
    pub oracle_cap: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl VerifyArgs {
    fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; id, n_max, r, a, b, m_max, m, order, oracle_n_max, oracle_cap, format)
    }

    fn overrides(&self) -> GridOverrides {
        GridOverrides {
            n_max: self.n_max,
            r_values: self.r.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            m_max: self.m_max,
            m_values: self.m.clone(),
            order: self.order,
            oracle_n_max: self.oracle_n_max,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub stat: Option<OracleStat>,
    /// Row index n (see the index conventions below).
    #[arg(long)]
    pub n: Option<usize>,
    /// Column index l (or k for dd) [default: 0].
    #[arg(long)]
    pub level: Option<usize>,
    /// Number of colors [default: 2].
    #[arg(long)]
    pub r: Option<u32>,
    /// Largest semilength to enumerate (overrides the environment).
    #[arg(long)]
    pub oracle_cap: Option<usize>,
    /// Output format [default: the bare value].
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl OracleArgs {
    fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; stat, n, level, r, oracle_cap, format)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SeriesArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub which: Option<SeriesKind>,
    /// Weight a for S, C, M, Z [default: 1].
    #[arg(long, value_parser = cli_rational, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_rational")]
    pub a: Option<Rational>,
    /// Weight b for S, C, M, Z [default: 1].
    #[arg(long, value_parser = cli_rational, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_rational")]
    pub b: Option<Rational>,
    /// Number of colors for Sr and T0 [default: 2].
    #[arg(long)]
    pub r: Option<u32>,
    /// Tower stage for Z [default: 0].
    #[arg(long)]
    pub m: Option<u32>,
    /// Last coefficient printed [default: 10].
    #[arg(long)]
    pub order: Option<usize>,
    /// Output format [default: comma-separated coefficients].
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl SeriesArgs {
    fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; which, a, b, r, m, order, format)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CrossArgs {
    #[arg(long, value_enum)]
    pub stat: Option<CrossStat>,
    /// Last row index [default: 6].
    #[arg(long)]
    pub n_max: Option<usize>,
    /// [default: 2,3]
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "de_list")]
    pub r: Option<Vec<u32>>,
    /// Largest row also checked by enumeration [default: n-max].
    #[arg(long)]
    pub oracle_n_max: Option<usize>,
    #[arg(long)]
    pub oracle_cap: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl CrossArgs {
    fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; stat, n_max, r, oracle_n_max, oracle_cap, format)
    }
}

/// Section `name` of the config file layered over its top-level keys.
fn config_section<T: for<'de> Deserialize<'de> + Default>(path: Option<&PathBuf>, name: &str) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
    let doc: toml::Table = text
        .parse()
        .map_err(|e| Error::InvalidParameter(format!("bad config {}: {e}", path.display())))?;
    let mut merged = toml::Table::new();
    for (k, v) in &doc {
        if !v.is_table() {
            merged.insert(k.clone(), v.clone());
        }
    }
    if let Some(toml::Value::Table(section)) = doc.get(name) {
        for (k, v) in section {
            merged.insert(k.clone(), v.clone());
        }
    }
    toml::Value::Table(merged)
        .try_into()
        .map_err(|e| Error::InvalidParameter(format!("bad [{name}] config: {e}")))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OracleCap { .. } => EXIT_CAP,
        Error::InvalidParameter(_) | Error::BeyondOrder { .. } | Error::NegativeBinomialTop { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::InvalidParameter(msg) = &e {
                if msg.starts_with("unknown check id") {
                    let _ = writeln!(err, "valid ids: {}", verify::check_ids().join(", "));
                }
            }
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(String, i32)> {
    let config = cli.config.as_ref();
    match cli.command {
        Command::Table(args) => {
            let args = args.merge(config_section(config, "table")?);
            Ok((cmd_table(&args)?, EXIT_OK))
        }
        Command::Verify(args) => {
            let args = args.merge(config_section(config, "verify")?);
            apply_cap(args.oracle_cap);
            cmd_verify(&args)
        }
        Command::Oracle(args) => {
            let args = args.merge(config_section(config, "oracle")?);
            Ok((cmd_oracle(&args)?, EXIT_OK))
        }
        Command::Series(args) => {
            let args = args.merge(config_section(config, "series")?);
            Ok((cmd_series(&args)?, EXIT_OK))
        }
        Command::CrossCheck(args) => {
            let args = args.merge(config_section(config, "cross-check")?);
            apply_cap(args.oracle_cap);
            cmd_cross_check(&args)
        }
    }
}

/// The verify harness reads the cap from the environment, so a flag is
/// forwarded there before any worker threads start.
fn apply_cap(cap: Option<usize>) {
    if let Some(cap) = cap {
        std::env::set_var(ORACLE_CAP_ENV, cap.to_string());
    }
}

// ---------------------------------------------------------------------------
// Tables

/// A rendered grid: a corner label, column labels and labeled rows whose
/// missing trailing cells print blank.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Block {
    r: u32,
    corner: &'static str,
    columns: Vec<String>,
    rows: Vec<(String, Vec<String>)>,
}

fn render_markdown(blocks: &[Block]) -> String {
    let mut s = String::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        if blocks.len() > 1 {
            let _ = writeln!(s, "r = {}\n", b.r);
        }
        let _ = writeln!(s, "| {} | {} |", b.corner, b.columns.join(" | "));
        let _ = writeln!(s, "|{}", "---|".repeat(b.columns.len() + 1));
        for (label, cells) in &b.rows {
            let padded: Vec<&str> = (0..b.columns.len())
                .map(|j| cells.get(j).map(String::as_str).unwrap_or(""))
                .collect();
            let _ = writeln!(s, "| {} | {} |", label, padded.join(" | "));
        }
    }
    s
}

fn render_csv(blocks: &[Block]) -> String {
    let mut s = String::new();
    if let Some(first) = blocks.first() {
        let _ = writeln!(s, "r,{},{}", first.corner, first.columns.join(","));
    }
    for b in blocks {
        for (label, cells) in &b.rows {
            let padded: Vec<&str> = (0..b.columns.len())
                .map(|j| cells.get(j).map(String::as_str).unwrap_or(""))
                .collect();
            let _ = writeln!(s, "{},{},{}", b.r, label, padded.join(","));
        }
    }
    s
}

fn to_strings(row: &[BigInt]) -> Vec<String> {
    row.iter().map(|v| v.to_string()).collect()
}

fn triangle_block(stat: Statistic, r: u32, n_max: usize) -> Result<Block> {
    let rows = formulas::triangle(stat, r, n_max)?;
    let width = (0..=n_max).map(|n| formulas::row_width(stat, n)).max().unwrap_or(1);
    Ok(Block {
        r,
        corner: "n/l",
        columns: (0..width).map(|l| l.to_string()).collect(),
        rows: rows.iter().enumerate().map(|(n, row)| (n.to_string(), to_strings(row))).collect(),
    })
}

fn count_row(r: u32, n_max: usize) -> Result<Vec<BigInt>> {
    (0..=n_max).map(|n| formulas::colored_schroder_number(n, r)).collect()
}

fn check_colors(rs: &[u32]) -> Result<()> {
    if rs.is_empty() {
        return Err(usage("--r needs at least one value"));
    }
    if let Some(r) = rs.iter().find(|&&r| r < 2) {
        return Err(usage(format!("--r must be at least 2, got {r}")));
    }
    Ok(())
}

pub fn cmd_table(args: &TableArgs) -> Result<String> {
    let stat = args.stat.ok_or_else(|| usage("table needs --stat"))?;
    let default_r = if stat == TableStat::Count { vec![2, 3, 4, 5] } else { vec![2] };
    let rs = args.r.clone().unwrap_or(default_r);
    check_colors(&rs)?;
    let n_max = args.n_max.unwrap_or(if stat == TableStat::Count { 8 } else { 6 });
    let format = args.format.unwrap_or(OutputFormat::Markdown);
    match statistic(stat) {
        None => {
            let rows: Vec<(u32, Vec<BigInt>)> =
                rs.iter().map(|&r| count_row(r, n_max).map(|row| (r, row))).collect::<Result<_>>()?;
            Ok(match format {
                OutputFormat::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|(r, row)| json!({"stat": "count", "r": r, "values": to_strings(row)}))
                        .collect();
                    pretty(&Value::Array(v))
                }
                OutputFormat::Markdown => {
                    let block = Block {
                        r: rs[0],
                        corner: "r/n",
                        columns: (0..=n_max).map(|n| n.to_string()).collect(),
                        rows: rows.iter().map(|(r, row)| (r.to_string(), to_strings(row))).collect(),
                    };
                    render_markdown(&[block])
                }
                OutputFormat::Csv => {
                    let mut s = format!(
                        "r,{}\n",
                        (0..=n_max).map(|n| n.to_string()).collect::<Vec<_>>().join(",")
                    );
                    for (r, row) in &rows {
                        let _ = writeln!(s, "{r},{}", to_strings(row).join(","));
                    }
                    s
                }
            })
        }
        Some(stat) => {
            let blocks: Vec<Block> = rs.iter().map(|&r| triangle_block(stat, r, n_max)).collect::<Result<_>>()?;
            Ok(match format {
                OutputFormat::Markdown => render_markdown(&blocks),
                OutputFormat::Csv => render_csv(&blocks),
                OutputFormat::Json => {
                    let v: Vec<Value> = blocks
                        .iter()
                        .map(|b| {
                            let rows: Vec<&Vec<String>> = b.rows.iter().map(|(_, cells)| cells).collect();
                            json!({"stat": stat.name(), "r": b.r, "rows": rows})
                        })
                        .collect();
                    pretty(&Value::Array(v))
                }
            })
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Reports

fn render_reports(reports: &[CheckReport], format: OutputFormat, single: bool) -> String {
    match format {
        OutputFormat::Json => {
            let v = if single {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(reports)
            };
            pretty(&v.expect("reports serialize"))
        }
        OutputFormat::Csv => {
            let mut s = String::from("check-id,status,instances,failed,millis\n");
            for r in reports {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.check_id,
                    status_word(r),
                    r.instances.len(),
                    r.failed_instances(),
                    r.millis
                );
            }
            s
        }
        OutputFormat::Markdown => {
            let mut s = String::from("| check | status | instances | failed | ms |\n|---|---|---|---|---|\n");
            for r in reports {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} |",
                    r.check_id,
                    status_word(r),
                    r.instances.len(),
                    r.failed_instances(),
                    r.millis
                );
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            let _ = writeln!(s, "\n{passed}/{} checks passed (finite grids)", reports.len());
            for r in reports {
                if let Some(ce) = &r.counterexample {
                    let _ = writeln!(s, "\n{} counterexample {}: {}", r.check_id, ce.instance, ce.detail);
                }
            }
            s
        }
    }
}

fn status_word(r: &CheckReport) -> &'static str {
    if r.passed() {
        "pass"
    } else {
        "fail"
    }
}

fn report_exit(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(CheckReport::passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(String, i32)> {
    let id = args.id.as_deref().unwrap_or("all");
    let overrides = args.overrides();
    let format = args.format.unwrap_or(OutputFormat::Markdown);
    let (reports, single) = if id == "all" {
        (verify::run_all(&overrides)?, false)
    } else {
        (vec![verify::run_check(id, &overrides)?], true)
    };
    Ok((render_reports(&reports, format, single), report_exit(&reports)))
}

pub fn cmd_cross_check(args: &CrossArgs) -> Result<(String, i32)> {
    let stat = match args.stat.ok_or_else(|| usage("cross-check needs --stat"))? {
        CrossStat::Points => Statistic::Points,
        CrossStat::Usteps => Statistic::USteps,
        CrossStat::Peaks => Statistic::Peaks,
        CrossStat::Udu => Statistic::Udu,
    };
    let n_max = args.n_max.unwrap_or(6);
    let grid = Grid {
        n_max,
        r_values: args.r.clone().unwrap_or_else(|| vec![2, 3]),
        oracle_n_max: args.oracle_n_max.unwrap_or(n_max),
        ..Grid::default()
    };
    let report = verify::cross_check_grid(stat, &grid)?;
    let format = args.format.unwrap_or(OutputFormat::Markdown);
    let reports = [report];
    Ok((render_reports(&reports, format, true), report_exit(&reports)))
}

// ---------------------------------------------------------------------------
// Single values

fn single_value(format: Option<OutputFormat>, fields: &[(&str, String)], value: String) -> String {
    match format {
        None => format!("{value}\n"),
        Some(OutputFormat::Json) => {
            let mut map = serde_json::Map::new();
            for (k, v) in fields {
                map.insert(k.to_string(), Value::String(v.clone()));
            }
            map.insert("value".into(), Value::String(value));
            pretty(&Value::Object(map))
        }
        Some(OutputFormat::Csv) => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{},value\n{},{value}\n", keys.join(","), vals.join(","))
        }
        Some(OutputFormat::Markdown) => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!(
                "| {} | value |\n|{}\n| {} | {value} |\n",
                keys.join(" | "),
                "---|".repeat(keys.len() + 1),
                vals.join(" | ")
            )
        }
    }
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<String> {
    let stat = args.stat.ok_or_else(|| usage("oracle needs --stat"))?;
    let n = args.n.ok_or_else(|| usage("oracle needs --n"))?;
    let level = args.level.unwrap_or(0);
    let r = args.r.unwrap_or(2);
    let oracle = match args.oracle_cap {
        Some(cap) => Oracle::with_cap(OracleCap::uniform(cap)),
        None => Oracle::new(),
    };
    let value = match stat {
        OracleStat::Count => oracle.admissible_count(n, r)?,
        OracleStat::Dd => oracle.dd_distribution(n, r)?.get(level).cloned().unwrap_or_default(),
        OracleStat::Points => oracle.entry(Statistic::Points, n, level, r)?,
        OracleStat::Usteps => oracle.entry(Statistic::USteps, n, level, r)?,
        OracleStat::Peaks => oracle.entry(Statistic::Peaks, n, level, r)?,
        OracleStat::Udu => oracle.entry(Statistic::Udu, n, level, r)?,
    };
    let name = match stat {
        OracleStat::Points => "points",
        OracleStat::Usteps => "usteps",
        OracleStat::Peaks => "peaks",
        OracleStat::Udu => "udu",
        OracleStat::Count => "count",
        OracleStat::Dd => "dd",
    };
    let fields = [
        ("stat", name.to_string()),
        ("n", n.to_string()),
        ("level", level.to_string()),
        ("r", r.to_string()),
    ];
    Ok(single_value(args.format, &fields, value.to_string()))
}

pub fn series_for(args: &SeriesArgs) -> Result<TruncSeries> {
    let which = args.which.ok_or_else(|| usage("series needs --which"))?;
    let one = Rational::from_integer(1.into());
    let a = args.a.clone().unwrap_or_else(|| one.clone());
    let b = args.b.clone().unwrap_or(one);
    let r = args.r.unwrap_or(2);
    let order = args.order.unwrap_or(10);
    if matches!(which, SeriesKind::Sr | SeriesKind::T0) && r < 1 {
        return Err(usage("--r must be at least 1"));
    }
    Ok(match which {
        SeriesKind::S => series::schroder(&a, &b, order),
        SeriesKind::C => {
            if num_traits::Zero::is_zero(&b) {
                return Err(usage("C(a, b; x) needs b != 0"));
            }
            series::catalan(&a, &b, order)
        }
        SeriesKind::M => series::motzkin(&a, &b, order),
        SeriesKind::Sr => series::colored_schroder(r, order),
        SeriesKind::T0 => series::udu_free(r, order),
        SeriesKind::Z => series::z_series(args.m.unwrap_or(0), &a, &b, order)?,
    })
}

pub fn cmd_series(args: &SeriesArgs) -> Result<String> {
    let s = series_for(args)?;
    let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
    Ok(match args.format {
        None => format!("{}\n", coeffs.join(",")),
        Some(OutputFormat::Json) => pretty(&json!({
            "which": format!("{:?}", args.which.expect("checked")),
            "order": s.order(),
            "coefficients": coeffs,
        })),
        Some(OutputFormat::Csv) => {
            let mut out = String::from("n,coefficient\n");
            for (n, c) in coeffs.iter().enumerate() {
                let _ = writeln!(out, "{n},{c}");
            }
            out
        }
        Some(OutputFormat::Markdown) => {
            let mut out = String::from("| n | coefficient |\n|---|---|\n");
            for (n, c) in coeffs.iter().enumerate() {
                let _ = writeln!(out, "| {n} | {c} |");
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["riordan-paths"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn markdown_triangle_leaves_upper_cells_blank() {
        let (code, out, _) = run_capture(&["table", "--stat", "points", "--r", "2", "--n-max", "2"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "| n/l | 0 | 1 | 2 |\n|---|---|---|---|\n| 0 | 1 |  |  |\n| 1 | 4 | 2 |  |\n| 2 | 16 | 12 | 2 |\n"
        );
    }

    #[test]
    fn udu_triangle_stops_below_diagonal() {
        let (_, out, _) = run_capture(&["table", "--stat", "udu", "--r", "2", "--n-max", "3", "--format", "csv"]);
        assert_eq!(out, "r,n/l,0,1,2\n2,0,1,,\n2,1,2,,\n2,2,2,4,\n2,3,6,8,8\n");
    }

    #[test]
    fn count_row_and_json_strings() {
        let (_, out, _) = run_capture(&["table", "--stat", "count", "--r", "5", "--n-max", "8", "--format", "csv"]);
        assert_eq!(out, "r,0,1,2,3,4,5,6,7,8\n5,1,5,45,505,6345,85405,1204245,17558705,262577745\n");
        let (_, out, _) = run_capture(&["table", "--stat", "peaks", "--n-max", "1", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!([{"stat": "peaks", "r": 2, "rows": [["2"], ["8", "2"]]}]));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["table"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["table", "--stat", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["table", "--stat", "points", "--r", "1"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["verify", "--id", "cor9.9"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("cor4.2"));
        assert_eq!(run_capture(&["verify", "--id", "lemma2.2", "--a", "0", "--b", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn oracle_and_cap() {
        let (code, out, _) = run_capture(&["oracle", "--stat", "peaks", "--n", "1", "--level", "0", "--r", "2"]);
        assert_eq!((code, out.as_str()), (0, "8\n"));
        let (code, _, err) =
            run_capture(&["oracle", "--stat", "points", "--n", "5", "--r", "2", "--oracle-cap", "4"]);
        assert_eq!(code, EXIT_CAP);
        assert!(err.contains("cap"), "{err}");
    }

    #[test]
    fn series_rows() {
        let (_, out, _) = run_capture(&["series", "--which", "Sr", "--r", "3", "--order", "8"]);
        assert_eq!(out, "1,3,15,93,645,4791,37275,299865,2474025\n");
        let (_, out, _) = run_capture(&["series", "--which", "T0", "--r", "2", "--order", "6"]);
        assert_eq!(out, "1,2,2,6,14,42,122\n");
        let (_, out, _) = run_capture(&["series", "--which", "S", "--a", "-1", "--b", "1/2", "--order", "2"]);
        assert_eq!(out, "1,-1/2,0\n");
    }

    #[test]
    fn config_file_fills_missing_flags() {
        let dir = std::env::temp_dir().join(format!("riordan-paths-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.toml");
        std::fs::write(&path, "format = \"csv\"\n[table]\nstat = \"peaks\"\nr = 3\nn-max = 1\n").unwrap();
        let p = path.to_str().unwrap();
        let (code, out, _) = run_capture(&["--config", p, "table"]);
        assert_eq!(code, 0);
        assert_eq!(out, "r,n/l,0,1\n3,0,3,\n3,1,18,6\n");
        let (_, out, _) = run_capture(&["--config", p, "table", "--format", "md", "--n-max", "0"]);
        assert_eq!(out, "| n/l | 0 |\n|---|---|\n| 0 | 3 |\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
