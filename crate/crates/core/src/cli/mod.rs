//! Command-line front end: reads JSON documents, dispatches to the engine
//! and prints deterministic reports.

pub mod document;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::scalar::fmt_rational;
use crate::algebra::{Rational, Scalar, Zero};
use crate::cdvf::{newton_polygon, refined_residue, CdvfError, Gauge};
use crate::cycles::{hilbert_dim, monomial_char_cycle, Component, CycleError, LogCycle};
use crate::euler::{
    chi_curve, chi_ep, chi_surface_kato, default_components, derham_oracle_curve, integrality_check,
    kashiwara_dubson_charts, rows_for_geometry, EulerError, GeometryData,
};
use crate::goodmodel::{zcar_prime, GoodModel, ModelError, Verdict};

use document::{model_at_infinity, Loaded, ModelDocument, OperatorDocument, PunctureSource};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CLEAN: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("model is not clean: {0}")]
    NotClean(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Cdvf(#[from] CdvfError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Schema(_) => EXIT_INVALID,
            CliError::NotClean(_) => EXIT_NOT_CLEAN,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Euler(EulerError::NonIntegral { .. })
            | CliError::Euler(EulerError::WindowInstability { .. })
            | CliError::Cycle(CycleError::NonIntegral { .. })
            | CliError::Model(ModelError::Cycle(CycleError::NonIntegral { .. }))
            | CliError::Model(ModelError::CodimensionViolation { .. })
            | CliError::Cdvf(CdvfError::NonIntegral(_)) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "logchar", version, about = "Irregularities, cleanness, log-characteristic cycles and Euler characteristics")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the good-decomposition conditions of a model.
    Validate { file: PathBuf },
    /// Irregularity divisors of a model.
    Irr { file: PathBuf },
    /// Cleanness and numerical cleanness at points of the boundary.
    Clean {
        file: PathBuf,
        /// Point as `x=0,y=1/2`; unlisted coordinates are 0.
        #[arg(long)]
        point: Option<String>,
    },
    /// The log-characteristic cycle of a model or monomial module.
    Zcar {
        file: PathBuf,
        /// Fail with exit code 3 unless the model is clean everywhere.
        #[arg(long)]
        require_clean: bool,
    },
    /// Euler characteristic from the document's geometry.
    Chi {
        file: PathBuf,
        #[arg(long, value_enum)]
        formula: Option<Formula>,
    },
    /// Newton polygon and refined residues of a differential operator.
    Newton { file: PathBuf },
    /// Independent checks.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// de Rham Euler characteristic of `E(φ)` on the punctured line.
    ChiCurve {
        file: PathBuf,
        #[arg(long)]
        window: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    /// Irregularity formula on a curve.
    Curve,
    /// Irregularity formula on a surface.
    Kato,
    /// Chern-class formula.
    Ep,
    /// Degree of the cycle against the zero section.
    Kd,
}

/// Text and JSON renderings of a command result.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            code: EXIT_OK,
        }
    }
}

/// Parses `args` and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("json"))
            } else {
                writeln!(out, "{}", r.text.trim_end())
            };
            r.code
        }
        Err(e) => {
            let code = e.exit_code();
            log::debug!("command failed with exit code {code}");
            if cli.json {
                let v = json!({"error": e.to_string(), "exit_code": code});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(&load(file)?),
        Command::Irr { file } => cmd_irr(&load(file)?),
        Command::Clean { file, point } => cmd_clean(&load(file)?, point.as_deref()),
        Command::Zcar {
            file,
            require_clean,
        } => cmd_zcar(&load(file)?, *require_clean),
        Command::Chi { file, formula } => cmd_chi(&load(file)?, *formula),
        Command::Newton { file } => cmd_newton(&OperatorDocument::from_json(&read(file)?)?),
        Command::Oracle {
            which: OracleCommand::ChiCurve { file, window },
        } => cmd_oracle(&load(file)?, *window),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let doc = ModelDocument::from_json(&read(path)?)?;
    log::info!("loaded {}", path.display());
    doc.load()
}

fn need_model(l: &Loaded) -> Result<&GoodModel, CliError> {
    l.model
        .as_ref()
        .ok_or_else(|| CliError::Schema("document has no model".into()))
}

fn q(r: &Rational) -> String {
    fmt_rational(r)
}

fn qs(v: &[Rational]) -> Vec<String> {
    v.iter().map(q).collect()
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Holomorphic => json!({"verdict": "holomorphic"}),
        Verdict::MonomialUnit { pole } => json!({"verdict": "monomial_unit", "pole": qs(pole)}),
        Verdict::Fails { reason } => json!({"verdict": "fails", "reason": reason}),
    }
}

fn cmd_validate(l: &Loaded) -> Result<Report, CliError> {
    let m = need_model(l)?;
    let r = m.validate();
    let json = json!({
        "good": r.good,
        "summands": r.summands.iter().map(verdict_json).collect::<Vec<_>>(),
        "pairs": r.pairs.iter().map(|((a, b), v)| {
            let mut j = verdict_json(v);
            j["summands"] = json!([a + 1, b + 1]);
            j
        }).collect::<Vec<_>>(),
    });
    Ok(Report::ok(r.to_string(), json))
}

fn cmd_irr(l: &Loaded) -> Result<Report, CliError> {
    let m = need_model(l)?;
    let irr = m.irregularity_divisor();
    let names = m.chart().names();
    let mut text = Vec::new();
    for (a, (b, d)) in irr.b.iter().zip(&irr.ranks).enumerate() {
        text.push(format!("summand {} rank {}: b = ({})", a + 1, d, qs(b).join(", ")));
    }
    let mut along = serde_json::Map::new();
    for j in irr.divisors() {
        let r = irr.along(j);
        text.push(format!(
            "D_{} ({} = 0): R = [{}], total = {}",
            j + 1,
            names[j],
            qs(&r).join(", "),
            q(&irr.total_along(j))
        ));
        along.insert(
            names[j].clone(),
            json!({"multiset": qs(&r), "total": q(&irr.total_along(j))}),
        );
    }
    let json = json!({
        "summands": irr.b.iter().zip(&irr.ranks).map(|(b, d)| json!({"b": qs(b), "rank": d})).collect::<Vec<_>>(),
        "along": Value::Object(along),
        "kummer": m.kummer(),
    });
    Ok(Report::ok(text.join("\n"), json))
}

fn parse_point(spec: &str, l: &Loaded) -> Result<Vec<Scalar>, CliError> {
    let names = l.chart.names();
    let mut z = vec![Scalar::zero(); names.len()];
    for part in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (var, val) = part
            .split_once('=')
            .ok_or_else(|| CliError::Schema(format!("point entry {part:?} is not var=value")))?;
        let j = names
            .iter()
            .position(|n| n == var.trim())
            .ok_or_else(|| CliError::Schema(format!("unknown variable {var:?} in point")))?;
        z[j] = Scalar::rational(document::parse_rational(val)?);
    }
    Ok(z)
}

fn point_label(names: &[String], z: &[Scalar]) -> String {
    names
        .iter()
        .zip(z)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_clean(l: &Loaded, point: Option<&str>) -> Result<Report, CliError> {
    let m = need_model(l)?;
    let names = m.chart().names();
    let points = match point {
        Some(p) => vec![parse_point(p, l)?],
        None if !l.points.is_empty() => l.points.clone(),
        None => vec![vec![Scalar::zero(); names.len()]],
    };
    let mut text = Vec::new();
    let mut pts = Vec::new();
    for z in &points {
        let c = m.clean_at_point(z)?;
        let nc = m.numerically_clean_at_point(z)?;
        let label = point_label(names, z);
        text.push(format!(
            "point {label}: clean: {}, numerically clean: {}",
            yes_no(c.clean),
            yes_no(nc.numerically_clean)
        ));
        text.push(c.to_string().trim_end().to_string());
        text.push(nc.to_string().trim_end().to_string());
        pts.push(json!({
            "point": label,
            "clean": c.clean,
            "numerically_clean": nc.numerically_clean,
            "sharp_forms": c.profile.per_index.iter().map(|f| f.as_ref().map(|v| qs(v))).collect::<Vec<_>>(),
            "full_forms": nc.profile.per_index.iter().map(|f| f.as_ref().map(|v| qs(v))).collect::<Vec<_>>(),
            "theta": c.theta.iter().map(|t| json!({
                "summand": t.summand + 1,
                "value": t.value.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }));
    }
    let locus = m.nonclean_locus()?;
    text.push(m.describe_locus(&locus));
    let json = json!({
        "points": pts,
        "nonclean_locus": {
            "enumerated": locus.enumerated,
            "points": locus.points.iter().map(|p| point_label(names, p)).collect::<Vec<_>>(),
            "algebraic": locus.algebraic.iter().map(|(j, e)| json!({"divisor": names[*j], "equation": e})).collect::<Vec<_>>(),
        },
    });
    Ok(Report::ok(text.join("\n"), json))
}

fn cycle_json(c: &LogCycle) -> Value {
    json!(c.report_lines())
}

/// Whether the model is certified clean at every point of the boundary.
fn certified_clean(m: &GoodModel) -> Result<(bool, String), CliError> {
    let locus = m.nonclean_locus()?;
    if !locus.enumerated {
        let origin = vec![Scalar::zero(); m.chart().n()];
        return Ok((false, if m.clean_at_point(&origin)?.clean {
            "clean at the origin; not certified elsewhere for n > 2".into()
        } else {
            "not clean at the origin".into()
        }));
    }
    Ok((locus.is_empty(), m.describe_locus(&locus)))
}

fn cmd_zcar(l: &Loaded, require_clean: bool) -> Result<Report, CliError> {
    if let Some(module) = &l.module {
        let c = monomial_char_cycle(module)?;
        let dim = hilbert_dim(module)?;
        let n = module.nvars();
        let mut text = c.report_lines();
        text.push(format!("hilbert dim = {dim} (n = {n})"));
        let json = json!({
            "cycle": cycle_json(&c),
            "hilbert_dim": dim,
            "n": n,
            "pure": c.components().all(|(k, _)| k.dim(n) == n),
        });
        return Ok(Report::ok(text.join("\n"), json));
    }
    let m = need_model(l)?;
    let (clean, why) = certified_clean(m)?;
    if require_clean && !clean {
        return Err(CliError::NotClean(why));
    }
    let c = zcar_prime(m)?;
    let mut text = c.report_lines();
    if m.kummer().iter().any(|&h| h > 1) {
        text.push(format!(
            "directions in cover coordinates x_j^(1/h_j), h = ({})",
            m.kummer().iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", ")
        ));
    }
    text.push(if clean {
        "status: equals the log-characteristic cycle (clean model)".to_string()
    } else {
        format!(
            "status: conjectural, model not certified clean ({})",
            why.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" ")
        )
    });
    let json = json!({
        "cycle": cycle_json(&c),
        "clean": clean,
        "kummer": m.kummer(),
    });
    Ok(Report::ok(text.join("\n"), json))
}

fn curve_rows(g: &GeometryData, rank: usize) -> Result<Vec<Vec<Rational>>, CliError> {
    let GeometryData::Curve(c) = g else {
        unreachable!("curve geometry")
    };
    let mut rows = vec![vec![Rational::zero(); c.punctures.len()]; rank];
    for (p, punct) in c.punctures.iter().enumerate() {
        if punct.irr.len() > rank {
            return Err(CliError::Schema(format!(
                "puncture {:?} lists more irregularities than the rank",
                punct.name
            )));
        }
        for (i, b) in punct.irr.iter().enumerate() {
            rows[i][p] = b.clone();
        }
    }
    Ok(rows)
}

fn cmd_chi(l: &Loaded, formula: Option<Formula>) -> Result<Report, CliError> {
    let m = need_model(l)?;
    let geom = l
        .geometry
        .as_ref()
        .ok_or_else(|| CliError::Schema("document has no geometry".into()))?;
    let curve = matches!(geom.data, GeometryData::Curve(_));
    let formula = formula.unwrap_or(if curve { Formula::Curve } else { Formula::Kato });
    let rank = m.rank();
    let (value, provenance): (Rational, String) = match (formula, &geom.data) {
        (Formula::Curve, GeometryData::Curve(c)) => (
            Rational::from_integer(chi_curve(rank, c)?.into()),
            "curve formula: rank * chi(U) - sum of irregularities".into(),
        ),
        (Formula::Kato, GeometryData::Surface(s)) => {
            let rows = rows_for_geometry(&m.irregularity_divisor(), s.components.len());
            (
                chi_surface_kato(&rows, s)?,
                "surface formula: sum over rows of chi(U) - b.chi(D°) + b.b(D.D)".into(),
            )
        }
        (Formula::Ep, _) => {
            let rows = if curve {
                curve_rows(&geom.data, rank)?
            } else {
                rows_for_geometry(&m.irregularity_divisor(), geom.data.component_count())
            };
            let source = if geom.chern.is_some() {
                "explicit Chern numbers"
            } else {
                "Chern numbers from topology"
            };
            (
                chi_ep(&rows, &geom.data, geom.chern.as_ref())?,
                format!("Chern-class formula with sign (-1)^n, {source}"),
            )
        }
        (Formula::Kd, _) => (kd_value(m, l)?, "degree of the cycle against the zero section, sign (-1)^n".into()),
        (Formula::Curve, _) => return Err(CliError::Schema("curve formula needs a curve geometry".into())),
        (Formula::Kato, _) => return Err(CliError::Schema("kato formula needs a surface geometry".into())),
    };
    let chi = integrality_check(&value)?;
    let text = format!("chi = {chi}\nformula: {provenance}");
    let json = json!({
        "chi": chi,
        "formula": format!("{formula:?}").to_lowercase(),
        "provenance": provenance,
    });
    Ok(Report::ok(text, json))
}

fn kd_value(m: &GoodModel, l: &Loaded) -> Result<Rational, CliError> {
    let geom = l.geometry.as_ref().expect("geometry checked");
    let main = zcar_prime(m)?;
    match &geom.data {
        GeometryData::Surface(_) => {
            let map = default_components(main.log_vars());
            Ok(kashiwara_dubson_charts(&[(&main, map)], &geom.data, geom.chern.as_ref())?)
        }
        GeometryData::Curve(c) => {
            let mut extra = Vec::new();
            let mut map = vec![None; 1];
            for (p, src) in geom.sources.iter().enumerate() {
                match src {
                    PunctureSource::Chart(j) => map[*j] = Some(p),
                    PunctureSource::Infinity(_) => extra.push((zcar_prime(&model_at_infinity(m)?)?, p)),
                    PunctureSource::Explicit => {
                        if c.punctures[p].irr.iter().any(|b| !b.is_zero()) {
                            return Err(CliError::Schema(format!(
                                "kd needs a model at puncture {:?}, which only lists irregularities",
                                c.punctures[p].name
                            )));
                        }
                    }
                }
            }
            if map[0].is_none() && main.lines().next().is_some() {
                return Err(CliError::Schema("the chart divisor is not among the punctures".into()));
            }
            let mut charts: Vec<(&LogCycle, Vec<Option<usize>>)> = vec![(&main, map)];
            for (c, p) in &extra {
                charts.push((c, vec![Some(*p)]));
            }
            Ok(kashiwara_dubson_charts(&charts, &geom.data, None)?)
        }
    }
}

fn gauge_name(g: Gauge) -> &'static str {
    match g {
        Gauge::D => "d/dt",
        Gauge::Theta => "tdt",
    }
}

fn cmd_newton(doc: &OperatorDocument) -> Result<Report, CliError> {
    let op = doc.operator()?;
    let poly = newton_polygon(&op)?;
    let total = poly.total_irregularity();
    if !total.is_integer() {
        return Err(CliError::Internal(format!("total irregularity {} is not an integer", q(&total))));
    }
    let mut text = vec![
        format!("gauge {} order {}", gauge_name(op.gauge()), op.order()),
        format!(
            "vertices: {}",
            poly.vertices
                .iter()
                .map(|(i, v)| format!("({i}, {})", q(v)))
                .collect::<Vec<_>>()
                .join(" ")
        ),
        format!(
            "slopes: {}",
            poly.slopes
                .iter()
                .map(|(s, w)| format!("{} x{w}", q(s)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ];
    if poly.vertical_tail > 0 {
        text.push(format!("vertical tail: {}", poly.vertical_tail));
    }
    text.push(format!("irregularities: [{}]", qs(&poly.irregularities).join(", ")));
    text.push(format!("total irregularity: {}", q(&total)));
    let mut classes = Vec::new();
    for (b, mult) in poly.irregularity_classes() {
        if b.is_zero() {
            continue;
        }
        match refined_residue(&op, &b) {
            Ok(rc) => {
                text.push(format!(
                    "slope {} (x{mult}): kummer {}, e {}, q(X) = {}",
                    q(&b),
                    rc.kummer,
                    rc.e,
                    rc.q.display_in("X")
                ));
                let mut orbits = Vec::new();
                for o in &rc.orbits {
                    let swan = o.swan_quotient(&b);
                    if !swan.is_integer() {
                        return Err(CliError::Internal(format!(
                            "dim * slope / r = {} is not an integer",
                            q(&swan)
                        )));
                    }
                    text.push(format!(
                        "  orbit {}: r {}, mult {}, dim {}, dim*slope/r {}",
                        o.factor.display_in("Y"),
                        o.r,
                        o.multiplicity,
                        o.dim,
                        q(&swan)
                    ));
                    orbits.push(json!({
                        "factor": o.factor.display_in("Y"),
                        "r": o.r,
                        "multiplicity": o.multiplicity,
                        "dim": o.dim,
                        "swan_quotient": q(&swan),
                    }));
                }
                classes.push(json!({
                    "slope": q(&b),
                    "multiplicity": mult,
                    "kummer": rc.kummer,
                    "e": rc.e,
                    "q": rc.q.display_in("X"),
                    "orbits": orbits,
                }));
            }
            Err(CdvfError::FactorizationNeeded { degree }) => {
                text.push(format!(
                    "slope {} (x{mult}): residue polynomial of degree {degree} needs a factorization over the extension",
                    q(&b)
                ));
                classes.push(json!({"slope": q(&b), "multiplicity": mult, "factorization_needed": degree}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let json = json!({
        "gauge": gauge_name(op.gauge()),
        "order": op.order(),
        "vertices": poly.vertices.iter().map(|(i, v)| json!([i, q(v)])).collect::<Vec<_>>(),
        "slopes": poly.slopes.iter().map(|(s, w)| json!([q(s), w])).collect::<Vec<_>>(),
        "vertical_tail": poly.vertical_tail,
        "irregularities": qs(&poly.irregularities),
        "total_irregularity": q(&total),
        "classes": classes,
    });
    Ok(Report::ok(text.join("\n"), json))
}

fn cmd_oracle(l: &Loaded, window: Option<usize>) -> Result<Report, CliError> {
    let m = need_model(l)?;
    if m.chart().n() != 1 || m.summands().len() != 1 || m.rank() != 1 || m.kummer() != [1] {
        return Err(CliError::Schema(
            "the curve oracle needs a single rank-one summand with integer exponents in one variable".into(),
        ));
    }
    let phi = &m.summands()[0].phi;
    if phi.terms().any(|(_, c)| c.as_rational().is_none()) {
        return Err(EulerError::OracleInput.into());
    }
    let p = (-phi.min_exponent(0).unwrap_or(0)).max(0) as usize;
    let qd = phi.max_exponent(0).unwrap_or(0).max(0) as usize;
    let window = window.unwrap_or(2 * p.max(qd) + 5);
    let r = derham_oracle_curve(phi, window)?;
    let mut text = vec![
        format!("oracle = {}", r.chi),
        format!(
            "kernel {}, cokernel {}, window {} (stable at {})",
            r.kernel,
            r.cokernel,
            r.window,
            r.window + 3
        ),
    ];
    let mut json = json!({
        "oracle": r.chi,
        "kernel": r.kernel,
        "cokernel": r.cokernel,
        "window": r.window,
    });
    if let Some(g) = &l.geometry {
        if let GeometryData::Curve(c) = &g.data {
            let chi = chi_curve(1, c)?;
            text.insert(0, format!("chi = {chi}"));
            json["chi"] = json!(chi);
            if chi != r.chi {
                return Err(CliError::Internal(format!(
                    "curve formula gives {chi}, oracle gives {}",
                    r.chi
                )));
            }
            text.push("agreement: yes".into());
        }
    }
    Ok(Report::ok(text.join("\n"), json))
}

/// Components of `c` over the chart divisor `j`, for reports.
pub fn lines_over(c: &LogCycle, j: usize) -> usize {
    c.lines()
        .filter(|(k, _)| matches!(k, Component::DivisorLine { divisor, .. } if *divisor == j))
        .count()
}
