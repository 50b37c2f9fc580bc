use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use shellspec::closed_form::{disk_neumann_spectrum, expand_multiplicities};
use shellspec::quadrature::QuadConfig;
use shellspec::radial_sl::{sl_eigenvalue_with, ModeProblem, RobinParameter, ShellGeometry, SlConfig};
use shellspec::shell_spectrum::{assemble_spectrum_with, SpectrumMethod};
use shellspec::thresholds::{
    find_alpha_star_with, find_h0_with, find_h1_with, find_h_crossing_with, ThresholdConfig, ThresholdReport,
};
use shellspec::trial_bounds::{extend_profile_with, weinberger_quotient_with, RadialDomainSpec};
use shellspec::Error;

mod record;

use record::{Cell, OutputRecord};

#[derive(Parser)]
#[command(name = "shellspec", version, about = "Mixed Robin-Neumann eigenvalues of spherical shells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First K eigenvalues of the shell with multiplicity.
    Spectrum(SpectrumArgs),
    /// Data behind the h-sweep and alpha-sweep figures, as CSV.
    Figure(FigureArgs),
    /// Robin-parameter and inner-radius thresholds.
    Thresholds(ThresholdArgs),
    /// Trial-function quotient on a perturbed shell against tau_{l,1}.
    Bound(BoundArgs),
    /// Run the acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Copy)]
struct Tolerances {
    /// Absolute bracket width for eigenvalue searches.
    #[arg(long, default_value_t = SlConfig::default().eig_xtol, value_parser = parse_tol)]
    tol_eig: f64,
    /// Relative tolerance for adaptive quadrature.
    #[arg(long, default_value_t = QuadConfig::default().epsrel, value_parser = parse_tol)]
    tol_quad: f64,
}

impl Tolerances {
    fn sl(&self) -> SlConfig {
        SlConfig { eig_xtol: self.tol_eig, ..SlConfig::default() }
    }

    fn quad(&self) -> QuadConfig {
        QuadConfig { epsrel: self.tol_quad, ..QuadConfig::default() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Sl,
    Bessel,
    Both,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    /// Robin parameter on the inner sphere; "inf" for Dirichlet.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_robin)]
    h: RobinParameter,
    #[arg(long)]
    count: usize,
    #[arg(long, value_enum, default_value = "sl")]
    method: Method,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureId {
    Fig1,
    Fig4,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long)]
    id: FigureId,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep points (default 200 for fig1, 99 for fig4).
    #[arg(long)]
    points: Option<usize>,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Which {
    H1,
    H0,
    Crossing,
    AlphaStar,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    dim: u32,
    /// Inner radius (not used by alpha-star).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    l: u32,
    /// Search interval in h for crossing.
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["LO", "HI"])]
    range: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Args)]
struct BoundArgs {
    /// concentric | eccentric:d=X | star:q=Q,coeffs=A1;A2;...[,rot=R]
    #[arg(long)]
    domain: String,
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    l: u32,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_robin)]
    h: RobinParameter,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: shellspec_verify::Suite,
}

/// Failure of a command, mapped to the process exit code.
enum Failure {
    Usage(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Domain(_) | Error::IndexOutOfRange(_) | Error::MeasureMismatch { .. } => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Solver(e),
        }
    }
}

fn parse_robin(s: &str) -> Result<RobinParameter, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(RobinParameter::DirichletLimit);
    }
    let h: f64 = s.parse().map_err(|_| format!("'{s}' is neither a number nor \"inf\""))?;
    if !h.is_finite() {
        return Err(format!("'{s}' is not finite; write \"inf\" for the Dirichlet limit"));
    }
    Ok(RobinParameter::Finite(h))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("'{s}' is not a positive tolerance")),
    }
}

fn robin_text(h: RobinParameter) -> String {
    match h {
        RobinParameter::Finite(x) => x.to_string(),
        RobinParameter::DirichletLimit => "inf".into(),
    }
}

fn emit(record: &OutputRecord, format: Format) {
    match format {
        Format::Csv => {
            print!("{}", record.to_csv());
            for (k, v) in &record.diagnostics.0 {
                eprintln!("# {k} = {v}");
            }
        }
        Format::Json => print!("{}", record.to_json()),
    }
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let g = ShellGeometry::new(a.dim, a.alpha, a.beta)?;
    if a.method != Method::Sl && a.dim != 2 {
        return Err(Failure::Usage("--method bessel|both needs --dim 2".into()));
    }
    let cfg = a.tol.sl();
    let primary = if a.method == Method::Bessel { SpectrumMethod::Bessel } else { SpectrumMethod::Sl };
    let entries = assemble_spectrum_with(&g, a.h, a.count, primary, &cfg)?;
    let mut columns = vec!["k", "tau", "l", "j", "multiplicity"];
    let check = if a.method == Method::Both {
        columns.push("delta_bessel");
        Some(assemble_spectrum_with(&g, a.h, a.count, SpectrumMethod::Bessel, &cfg)?)
    } else {
        None
    };
    let mut rec = OutputRecord::new("spectrum", columns);
    for (k, v) in [("dim", a.dim.to_string()), ("alpha", a.alpha.to_string()), ("beta", a.beta.to_string())] {
        rec.parameters.push(k, v);
    }
    rec.parameters.push("h", robin_text(a.h));
    rec.parameters.push("count", a.count);
    rec.parameters.push("method", a.method.to_possible_value().expect("no skipped variants").get_name());
    let mut max_delta: f64 = 0.0;
    for (i, e) in entries.iter().enumerate() {
        let mut row: Vec<Cell> = vec![e.k.into(), e.tau.into(), e.l.into(), e.j.into(), e.multiplicity.into()];
        if let Some(other) = &check {
            let d = (e.tau - other[i].tau).abs();
            max_delta = max_delta.max(d);
            row.push(d.into());
        }
        rec.push_row(row);
    }
    rec.diagnostics.push("sort_key", "k");
    if check.is_some() {
        rec.diagnostics.push("max_delta_bessel", Cell::Real(max_delta).to_text());
    }
    emit(&rec, a.format);
    Ok(())
}

fn sweep(n: usize, lo: f64, hi: f64, interior: bool) -> Vec<f64> {
    if interior {
        (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
    } else {
        let n = n.max(2);
        (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
    }
}

fn cmd_figure(a: &FigureArgs) -> Result<(), Failure> {
    let cfg = a.tol.sl();
    let rec = match a.id {
        FigureId::Fig1 => {
            let g = ShellGeometry::new(2, 1.0, 15.0)?;
            let hs = sweep(a.points.unwrap_or(200), -1.01, 0.5, false);
            let rows: Vec<Vec<Cell>> = hs
                .par_iter()
                .map(|&h| {
                    let p = ModeProblem::new(g, 0, RobinParameter::Finite(h));
                    let t02 = sl_eigenvalue_with(&p, 2, &cfg)?;
                    let t11 = sl_eigenvalue_with(&p.with_angular_index(1), 1, &cfg)?;
                    Ok(vec![h.into(), t02.into(), t11.into()])
                })
                .collect::<Result<_, Error>>()?;
            let mut rec = OutputRecord::new("figure", vec!["h", "tau_02", "tau_11"]);
            rows.into_iter().for_each(|r| rec.push_row(r));
            rec
        }
        FigureId::Fig4 => {
            let mu2 = expand_multiplicities(&disk_neumann_spectrum(1.0, 2)?, 2)[1];
            let alphas = sweep(a.points.unwrap_or(99), 0.0, 1.0, true);
            let d = RobinParameter::DirichletLimit;
            let rows: Vec<Vec<Cell>> = alphas
                .par_iter()
                .map(|&alpha| {
                    let unit = ShellGeometry::new(2, alpha, 1.0)?;
                    let wide = ShellGeometry::new(2, alpha, 2f64.sqrt())?;
                    let t1 = assemble_spectrum_with(&unit, d, 1, SpectrumMethod::Auto, &cfg)?[0].tau;
                    let t2 = assemble_spectrum_with(&wide, d, 2, SpectrumMethod::Auto, &cfg)?[1].tau;
                    Ok(vec![alpha.into(), t1.into(), t2.into(), mu2.into()])
                })
                .collect::<Result<_, Error>>()?;
            let mut rec = OutputRecord::new("figure", vec!["alpha", "tau1_inner_disk", "tau2_sqrt2_shell", "mu2_disk_const"]);
            rows.into_iter().for_each(|r| rec.push_row(r));
            rec
        }
    };
    let csv = rec.to_csv();
    match &a.out {
        Some(path) => fs::write(path, csv).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn threshold_row(r: &ThresholdReport) -> Vec<Cell> {
    vec![
        r.value.unwrap_or(f64::NAN).into(),
        r.bracket.0.into(),
        r.bracket.1.into(),
        r.residual.into(),
        r.iterations.into(),
    ]
}

fn cmd_thresholds(a: &ThresholdArgs) -> Result<(), Failure> {
    let cfg = ThresholdConfig { sl: a.tol.sl(), ..ThresholdConfig::default() };
    let geometry = || -> Result<ShellGeometry, Failure> {
        let alpha = a.alpha.ok_or_else(|| Failure::Usage("--alpha is required for this threshold".into()))?;
        Ok(ShellGeometry::new(a.dim, alpha, a.beta)?)
    };
    let mut rec = OutputRecord::new("thresholds", vec!["value", "bracket_lo", "bracket_hi", "residual", "iterations"]);
    let reports = match a.which {
        Which::H1 => vec![find_h1_with(&geometry()?, a.l, &cfg)?],
        Which::H0 => vec![find_h0_with(&geometry()?, a.l, &cfg)?],
        Which::Crossing => {
            let r = a.range.as_deref().ok_or_else(|| Failure::Usage("--range LO HI is required for crossing".into()))?;
            rec.parameters.push("range", format!("{} {}", r[0], r[1]));
            find_h_crossing_with(&geometry()?, a.l, (r[0], r[1]), &cfg)?
        }
        Which::AlphaStar => vec![find_alpha_star_with(a.dim, a.beta, a.l, &cfg)?],
    };
    rec.parameters.push("which", which_name(a.which));
    rec.parameters.push("dim", a.dim);
    if let Some(alpha) = a.alpha {
        rec.parameters.push("alpha", alpha);
    }
    rec.parameters.push("beta", a.beta);
    rec.parameters.push("l", a.l);
    for r in &reports {
        rec.push_row(threshold_row(r));
    }
    rec.diagnostics.push("sort_key", "value");
    rec.diagnostics.push("method", reports.first().map_or("grid scan", |r| r.method));
    rec.diagnostics.push("found", reports.iter().filter(|r| r.value.is_some()).count());
    emit(&rec, a.format);
    Ok(())
}

fn which_name(w: Which) -> &'static str {
    match w {
        Which::H1 => "h1",
        Which::H0 => "h0",
        Which::Crossing => "crossing",
        Which::AlphaStar => "alpha-star",
    }
}

fn parse_domain(text: &str, dim: u32, alpha: f64, beta: f64) -> Result<RadialDomainSpec, Failure> {
    let bad = |m: &str| Failure::Usage(format!("--domain '{text}': {m}"));
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let mut fields = std::collections::BTreeMap::new();
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        fields.insert(k.trim(), v.trim());
    }
    let num = |k: &str| -> Result<f64, Failure> {
        fields.get(k).ok_or_else(|| bad(&format!("missing {k}")))?.parse().map_err(|_| bad(&format!("{k} is not a number")))
    };
    let domain = match kind {
        "concentric" => RadialDomainSpec::ConcentricShell { dimension: dim, alpha, beta },
        "eccentric" => RadialDomainSpec::EccentricShell { dimension: dim, alpha, beta, offset: num("d")? },
        "star" => {
            if dim != 2 {
                return Err(bad("star shells are planar (--dim 2)"));
            }
            let order: u32 = fields.get("q").ok_or_else(|| bad("missing q"))?.parse().map_err(|_| bad("q is not an integer"))?;
            let coefficients = fields
                .get("coeffs")
                .ok_or_else(|| bad("missing coeffs"))?
                .split(';')
                .map(|c| c.trim().parse::<f64>().map_err(|_| bad("coeffs are ';'-separated numbers")))
                .collect::<Result<Vec<_>, _>>()?;
            let rotation = if fields.contains_key("rot") { num("rot")? } else { 0.0 };
            RadialDomainSpec::StarShell { alpha, beta, coefficients, order, rotation }
        }
        _ => return Err(bad("expected concentric, eccentric:d=X or star:q=Q,coeffs=...")),
    };
    domain.validate()?;
    Ok(domain)
}

fn cmd_bound(a: &BoundArgs) -> Result<(), Failure> {
    let domain = parse_domain(&a.domain, a.dim, a.alpha, a.beta)?;
    let g = ShellGeometry::new(a.dim, a.alpha, a.beta)?;
    let p = ModeProblem::new(g, a.l, a.h);
    let r_max = domain.sup_radius().max(1.05 * a.beta);
    let profile = extend_profile_with(&p, r_max, &a.tol.sl())?;
    let q = weinberger_quotient_with(&domain, &profile, a.l, a.h, &a.tol.quad())?;
    let mut rec = OutputRecord::new("bound", vec!["quotient", "tau_l1", "gap"]);
    rec.parameters.push("domain", &a.domain);
    rec.parameters.push("dim", a.dim);
    rec.parameters.push("alpha", a.alpha);
    rec.parameters.push("beta", a.beta);
    rec.parameters.push("l", a.l);
    rec.parameters.push("h", robin_text(a.h));
    rec.push_row(vec![q.into(), profile.tau.into(), (profile.tau - q).into()]);
    rec.diagnostics.push("profile_extent", Cell::Real(r_max).to_text());
    emit(&rec, a.format);
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> ExitCode {
    let outcomes: Vec<_> = shellspec_verify::criteria()
        .iter()
        .filter(|c| c.in_suite(a.suite))
        .map(|c| {
            let o = shellspec_verify::run(c);
            println!("{o}");
            o
        })
        .collect();
    let passed = outcomes.iter().filter(|o| o.status == shellspec_verify::Status::Pass).count();
    println!("{passed}/{} criteria pass", outcomes.len());
    ExitCode::from(shellspec_verify::exit_code(&outcomes) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Thresholds(a) => cmd_thresholds(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Verify(a) => return cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
