//! Command-line front end: `integrate`, `sweep`, `weights` and `gcheck`.
//!
//! Every numeric argument is a constant expression (`5/3`, `2*10^5`, `pi/5`)
//! parsed at the requested precision, so long reference values keep all their
//! digits. Exit codes: 0 on success, 2 on input errors, 3 when a realistic
//! error could not be computed (the integral is still reported).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::composite::{
    convergence_sweep, integrate, CompositeOutput, CompositePlan, Options, Reference, SweepDomain, SweepRow,
};
use crate::diagnostics::{check_condition, write_samples_csv, GCheckReport, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::exact_poly::{compute_weights, WeightSetJson};
use crate::expr::{parse_constant, Expr};
use crate::real::{Precision, Real};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_ESTIMATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ncquad", version, about = "Newton-Cotes quadrature with realistic error estimates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Composite rule over [a, b] with its realistic error.
    Integrate(IntegrateArgs),
    /// One composite run per (n, h) pair.
    Sweep(SweepArgs),
    /// Exact weights of the n-point rule.
    Weights(WeightsArgs),
    /// Sample the validity function g(x, h) on (a, b).
    Gcheck(GcheckArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Working precision in decimal digits.
    #[arg(short = 'p', long, default_value_t = 16)]
    pub precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IntegrateArgs {
    /// Integrand in x, e.g. "1/ln(x)".
    #[arg(short = 'f', long = "function")]
    pub function: String,
    #[arg(short = 'a', allow_hyphen_values = true)]
    pub a: String,
    #[arg(short = 'b', allow_hyphen_values = true)]
    pub b: String,
    /// Points per panel.
    #[arg(short = 'n')]
    pub n: usize,
    /// Number of panels.
    #[arg(long, conflicts_with = "step", required_unless_present = "step")]
    pub panels: Option<usize>,
    /// Step h; (b - a) / ((n - 1) h) must be a whole number.
    #[arg(long)]
    pub step: Option<String>,
    /// Exact value of the integral, for the true error.
    #[arg(long, conflicts_with = "antiderivative")]
    pub reference: Option<String>,
    /// Antiderivative F in x; the reference becomes F(b) - F(a).
    #[arg(long)]
    pub antiderivative: Option<String>,
    /// Include every panel's outputs.
    #[arg(long)]
    pub per_panel: bool,
    /// Evaluate panels in parallel (same results).
    #[arg(long)]
    pub parallel: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(short = 'f', long = "function")]
    pub function: String,
    #[arg(short = 'a', allow_hyphen_values = true)]
    pub a: String,
    /// Right endpoint; omit with --anchored.
    #[arg(short = 'b', allow_hyphen_values = true, required_unless_present = "anchored")]
    pub b: Option<String>,
    /// Points per panel; comma separated or repeated for several rules.
    #[arg(short = 'n', value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Comma-separated steps, e.g. "1/8,1/16". May be empty.
    #[arg(long, allow_hyphen_values = true)]
    pub steps: String,
    /// Single panel [a, a + (n-1) h] per step instead of a fixed [a, b].
    #[arg(long, conflicts_with = "b")]
    pub anchored: bool,
    #[arg(long, conflicts_with = "antiderivative")]
    pub reference: Option<String>,
    #[arg(long)]
    pub antiderivative: Option<String>,
    #[arg(long)]
    pub parallel: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WeightsArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GcheckArgs {
    #[arg(short = 'f', long = "function")]
    pub function: String,
    #[arg(short = 'a', allow_hyphen_values = true)]
    pub a: String,
    #[arg(short = 'b', allow_hyphen_values = true)]
    pub b: String,
    #[arg(short = 'n')]
    pub n: usize,
    /// Comma-separated steps.
    #[arg(long, visible_alias = "step", allow_hyphen_values = true)]
    pub steps: String,
    /// Interior sample points.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// One simple-rule panel in a report. Reals are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelReport {
    pub index: usize,
    pub start: String,
    pub q: String,
    pub e_tilde: String,
    pub s: String,
    pub e_bar: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateReport {
    pub function: String,
    pub a: String,
    pub b: String,
    pub n: usize,
    pub panels: usize,
    pub h: String,
    pub precision: u32,
    pub q: String,
    pub e_tilde: String,
    pub s: String,
    pub e_bar: Option<String>,
    pub failed_panels: Vec<usize>,
    pub e_true: Option<String>,
    pub realistic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_panel: Option<Vec<PanelReport>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRowReport {
    pub n: usize,
    pub h: String,
    pub a: String,
    pub b: String,
    pub q: String,
    pub e_tilde: String,
    pub s: String,
    pub e_bar: Option<String>,
    pub e_true: Option<String>,
    pub realistic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GCheckJson {
    pub n: usize,
    pub h: String,
    pub min_g: Option<String>,
    pub condition_holds: bool,
    pub fprime_zero_suspected: bool,
    pub flagged: usize,
    /// `(x, g)` pairs; `g` is absent where `f'` vanishes numerically.
    pub samples: Vec<(String, Option<String>)>,
}

struct Ctx {
    precision: Precision,
}

impl Ctx {
    fn new(digits: u32) -> Result<Self> {
        Ok(Ctx {
            precision: Precision::new(digits)?,
        })
    }

    fn digits(&self) -> usize {
        self.precision.digits() as usize
    }

    fn num(&self, what: &str, text: &str) -> Result<Real> {
        parse_constant(text, self.precision).map_err(|e| match e {
            Error::InvalidArgument(_) => Error::InvalidArgument(format!("{what}: `{text}` must be a constant")),
            other => other,
        })
    }

    fn list(&self, what: &str, text: &str) -> Result<Vec<Real>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.num(what, s))
            .collect()
    }

    fn fmt(&self, x: &Real) -> String {
        x.to_decimal(self.digits())
    }

    fn reference(&self, value: &Option<String>, anti: &Option<String>) -> Result<Option<Reference>> {
        Ok(match (value, anti) {
            (Some(v), _) => Some(Reference::Value(self.num("--reference", v)?)),
            (None, Some(src)) => Some(Reference::Antiderivative(Expr::parse(src)?)),
            (None, None) => None,
        })
    }
}

fn evaluator(expr: &Expr) -> impl Fn(&Real) -> Result<Real> + Sync + '_ {
    move |x| expr.eval(x)
}

fn panel_reports(ctx: &Ctx, plan: &CompositePlan, out: &CompositeOutput) -> Vec<PanelReport> {
    out.per_panel
        .iter()
        .enumerate()
        .map(|(k, p)| PanelReport {
            index: k,
            start: ctx.fmt(&plan.node(*plan.panel_range(k).start())),
            q: ctx.fmt(&p.q),
            e_tilde: ctx.fmt(&p.e_tilde),
            s: ctx.fmt(&p.s),
            e_bar: p.e_bar.as_ref().map(|e| ctx.fmt(e)),
        })
        .collect()
}

/// Runs `integrate` and returns the report without rendering it.
pub fn integrate_report(args: &IntegrateArgs) -> Result<IntegrateReport> {
    let ctx = Ctx::new(args.out.precision)?;
    let expr = Expr::parse(&args.function)?;
    let a = ctx.num("-a", &args.a)?;
    let b = ctx.num("-b", &args.b)?;
    let plan = match (&args.panels, &args.step) {
        (Some(i), _) => CompositePlan::new(a, b, args.n, *i)?,
        (None, Some(h)) => CompositePlan::with_step(a, b, args.n, &ctx.num("--step", h)?)?,
        (None, None) => return Err(Error::InvalidArgument("give --panels or --step".into())),
    };
    let reference = ctx.reference(&args.reference, &args.antiderivative)?;
    let out = integrate(&plan, evaluator(&expr), Options { parallel: args.parallel })?;
    let e_true = reference
        .map(|r| r.integral(plan.a(), plan.b()).map(|i| &i - &out.s))
        .transpose()?;
    let realistic = match (&out.e_bar, &e_true) {
        (Some(e), Some(t)) => Some(crate::rules::is_realistic(e, t)),
        _ => None,
    };
    Ok(IntegrateReport {
        function: args.function.clone(),
        a: ctx.fmt(plan.a()),
        b: ctx.fmt(plan.b()),
        n: plan.n(),
        panels: plan.panels(),
        h: ctx.fmt(plan.step()),
        precision: ctx.precision.digits(),
        q: ctx.fmt(&out.q),
        e_tilde: ctx.fmt(&out.e_tilde),
        s: ctx.fmt(&out.s),
        e_bar: out.e_bar.as_ref().map(|e| ctx.fmt(e)),
        failed_panels: out.failed_panels.clone(),
        e_true: e_true.as_ref().map(|e| ctx.fmt(e)),
        realistic,
        per_panel: args.per_panel.then(|| panel_reports(&ctx, &plan, &out)),
    })
}

/// Runs `sweep` and returns one report row per (n, h).
pub fn sweep_report(args: &SweepArgs) -> Result<Vec<SweepRowReport>> {
    let ctx = Ctx::new(args.out.precision)?;
    let expr = Expr::parse(&args.function)?;
    let a = ctx.num("-a", &args.a)?;
    let domain = match &args.b {
        Some(b) if !args.anchored => SweepDomain::Interval { a, b: ctx.num("-b", b)? },
        _ => SweepDomain::Anchored { a },
    };
    let steps = ctx.list("--steps", &args.steps)?;
    let reference = ctx.reference(&args.reference, &args.antiderivative)?;
    let mut rows = Vec::new();
    for &n in &args.n {
        let sweep = convergence_sweep(
            &domain,
            n,
            &steps,
            evaluator(&expr),
            reference.as_ref(),
            Options { parallel: args.parallel },
        )?;
        rows.extend(sweep.iter().map(|row| sweep_row(&ctx, row)));
    }
    Ok(rows)
}

fn sweep_row(ctx: &Ctx, row: &SweepRow) -> SweepRowReport {
    let out = &row.output;
    SweepRowReport {
        n: out.n,
        h: ctx.fmt(&out.h),
        a: ctx.fmt(&row.a),
        b: ctx.fmt(&row.b),
        q: ctx.fmt(&out.q),
        e_tilde: ctx.fmt(&out.e_tilde),
        s: ctx.fmt(&out.s),
        e_bar: out.e_bar.as_ref().map(|e| ctx.fmt(e)),
        e_true: row.e_true.as_ref().map(|e| ctx.fmt(e)),
        realistic: row.realistic,
    }
}

/// Runs `gcheck` for every requested step.
pub fn gcheck_reports(args: &GcheckArgs) -> Result<Vec<GCheckReport>> {
    let ctx = Ctx::new(args.out.precision)?;
    let expr = Expr::parse(&args.function)?;
    let a = ctx.num("-a", &args.a)?;
    let b = ctx.num("-b", &args.b)?;
    ctx.list("--steps", &args.steps)?
        .iter()
        .map(|h| check_condition(&expr, &a, &b, args.n, h, args.grid))
        .collect()
}

fn opt(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

const RESULT_HEADER: [&str; 7] = ["h", "n", "Q", "E_tilde", "S", "E_bar", "E_true"];

fn render_integrate(r: &IntegrateReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json_text(r),
        Format::Csv => {
            if let Some(panels) = &r.per_panel {
                let rows: Vec<Vec<String>> = panels
                    .iter()
                    .map(|p| {
                        vec![
                            p.index.to_string(),
                            p.start.clone(),
                            p.q.clone(),
                            p.e_tilde.clone(),
                            p.s.clone(),
                            opt(&p.e_bar).to_string(),
                        ]
                    })
                    .collect();
                csv_text(&["panel", "start", "Q", "E_tilde", "S", "E_bar"], &rows)?
            } else {
                let row = vec![
                    r.h.clone(),
                    r.n.to_string(),
                    r.q.clone(),
                    r.e_tilde.clone(),
                    r.s.clone(),
                    opt(&r.e_bar).to_string(),
                    opt(&r.e_true).to_string(),
                ];
                csv_text(&RESULT_HEADER, &[row])?
            }
        }
        Format::Table => {
            let mut s = String::new();
            let mut line = |k: &str, v: &str| {
                let _ = writeln!(s, "{k:<10} {v}");
            };
            line("f(x)", &r.function);
            line("interval", &format!("[{}, {}]", r.a, r.b));
            line("rule", &format!("n = {}, panels = {}, h = {}", r.n, r.panels, r.h));
            line("precision", &format!("{} digits", r.precision));
            line("Q", &r.q);
            line("E_tilde", &r.e_tilde);
            line("S", &r.s);
            match &r.e_bar {
                Some(e) => line("E_bar", e),
                None => line("E_bar", &format!("unavailable (panels {:?})", r.failed_panels)),
            }
            if let Some(e) = &r.e_true {
                line("E_true", e);
            }
            if let Some(v) = r.realistic {
                line("realistic", yes_no(v));
            }
            if let Some(panels) = &r.per_panel {
                let _ = writeln!(s, "\n{:>6}  {:<24} {:<24} {:<24}", "panel", "start", "S", "E_bar");
                for p in panels {
                    let _ = writeln!(s, "{:>6}  {:<24} {:<24} {:<24}", p.index, p.start, p.s, opt(&p.e_bar));
                }
            }
            s
        }
    })
}

fn render_sweep(rows: &[SweepRowReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json_text(&rows),
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.h.clone(),
                        r.n.to_string(),
                        r.q.clone(),
                        r.e_tilde.clone(),
                        r.s.clone(),
                        opt(&r.e_bar).to_string(),
                        opt(&r.e_true).to_string(),
                    ]
                })
                .collect();
            csv_text(&RESULT_HEADER, &body)?
        }
        Format::Table => {
            let mut s = String::new();
            if rows.is_empty() {
                return Ok(s);
            }
            let _ = writeln!(s, "{:>3}  {:<20} {:<24} {:<24} {:<24} {}", "n", "h", "S", "E_bar", "E_true", "realistic");
            for r in rows {
                let verdict = r.realistic.map(yes_no).unwrap_or("");
                let _ = writeln!(
                    s,
                    "{:>3}  {:<20} {:<24} {:<24} {:<24} {}",
                    r.n,
                    r.h,
                    r.s,
                    r.e_bar.as_deref().unwrap_or("unavailable"),
                    opt(&r.e_true),
                    verdict
                );
            }
            s
        }
    })
}

fn gcheck_json(report: &GCheckReport, digits: usize) -> GCheckJson {
    GCheckJson {
        n: report.n,
        h: report.h.to_decimal(digits),
        min_g: report.min_g.as_ref().map(|g| g.to_decimal(digits)),
        condition_holds: report.condition_holds,
        fprime_zero_suspected: report.fprime_zero_suspected,
        flagged: report.flagged,
        samples: report
            .samples
            .iter()
            .map(|s| (s.x.to_decimal(digits), s.g.as_ref().map(|g| g.to_decimal(digits))))
            .collect(),
    }
}

fn render_gcheck(reports: &[GCheckReport], digits: usize, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let all: Vec<GCheckJson> = reports.iter().map(|r| gcheck_json(r, digits)).collect();
            json_text(&all)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_samples_csv(reports, digits, &mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        Format::Table => {
            let mut s = String::new();
            let shown = digits.min(12);
            let _ = writeln!(s, "{:>3}  {:<16} {:<16} {:<6} {:<8} {}", "n", "h", "min g", "g>=h", "f'~0?", "flagged");
            for r in reports {
                let _ = writeln!(
                    s,
                    "{:>3}  {:<16} {:<16} {:<6} {:<8} {}",
                    r.n,
                    r.h.to_decimal(shown),
                    r.min_g.as_ref().map(|g| g.to_decimal(shown)).unwrap_or_else(|| "-".into()),
                    yes_no(r.condition_holds),
                    yes_no(r.fprime_zero_suspected),
                    r.flagged
                );
            }
            s
        }
    })
}

fn render_weights(n: usize, format: Format) -> Result<String> {
    let weights = compute_weights(n)?;
    let json: WeightSetJson = weights.to_json();
    let term = |coeff: &rug::Rational, power: u32| match power {
        0 => coeff.to_string(),
        1 => format!("{coeff} h"),
        k => format!("{coeff} h^{k}"),
    };
    Ok(match format {
        Format::Json => json_text(&json),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = weights
                .weights()
                .iter()
                .enumerate()
                .map(|(i, w)| vec![format!("a_{}", i + 1), w.coeff.to_string(), w.h_power.to_string()])
                .collect();
            let e = weights.error_coeff();
            rows.push(vec!["error".into(), e.coeff.to_string(), e.h_power.to_string()]);
            csv_text(&["term", "coefficient", "h_power"], &rows)?
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {n}, degree of exactness {}", weights.degree());
            for (i, w) in weights.weights().iter().enumerate() {
                let _ = writeln!(s, "a_{:<3} {}", i + 1, term(&w.coeff, w.h_power));
            }
            let e = weights.error_coeff();
            let parity = match weights.parity() {
                crate::exact_poly::Parity::Odd => "odd",
                crate::exact_poly::Parity::Even => "even",
            };
            let _ = writeln!(s, "error coefficient ({parity} n): {}", term(&e.coeff, e.h_power));
            s
        }
    })
}

fn emit(text: &str, path: &Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    let fail = |e: io::Error| Error::InvalidArgument(format!("cannot write output: {e}"));
    match path {
        Some(p) => File::create(p).and_then(|mut f| f.write_all(text.as_bytes())).map_err(fail),
        None => out.write_all(text.as_bytes()).map_err(fail),
    }
}

fn low_precision_warning(e_bar: &Option<String>, s: &str, digits: u32, err: &mut dyn Write) {
    // An estimate within a thousand units of the last carried digit of S is noise.
    let (Some(e), p) = (e_bar, Precision::new(digits)) else { return };
    let Ok(p) = p else { return };
    let (Ok(e), Ok(s)) = (Real::parse(e, p), Real::parse(s, p)) else { return };
    if !e.is_zero() && e.abs() < &p.tolerance(3) * &s.abs() {
        let _ = writeln!(
            err,
            "warning: E_bar is below the rounding level of S at {digits} digits; increase --precision"
        );
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Integrate(args) => {
            let report = integrate_report(&args)?;
            low_precision_warning(&report.e_bar, &report.s, report.precision, err);
            emit(&render_integrate(&report, args.out.format)?, &args.out.output, out)?;
            if report.e_bar.is_none() {
                let _ = writeln!(err, "error: realistic error unavailable: f' vanishes numerically on panels {:?}", report.failed_panels);
                return Ok(EXIT_NO_ESTIMATE);
            }
            Ok(EXIT_OK)
        }
        Command::Sweep(args) => {
            let rows = sweep_report(&args)?;
            for r in &rows {
                low_precision_warning(&r.e_bar, &r.s, args.out.precision, err);
            }
            emit(&render_sweep(&rows, args.out.format)?, &args.out.output, out)?;
            if rows.iter().any(|r| r.e_bar.is_none()) {
                let _ = writeln!(err, "error: realistic error unavailable for some rows");
                return Ok(EXIT_NO_ESTIMATE);
            }
            Ok(EXIT_OK)
        }
        Command::Weights(args) => {
            emit(&render_weights(args.n, args.format)?, &args.output, out)?;
            Ok(EXIT_OK)
        }
        Command::Gcheck(args) => {
            let reports = gcheck_reports(&args)?;
            let text = render_gcheck(&reports, args.out.precision as usize, args.out.format)?;
            emit(&text, &args.out.output, out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
