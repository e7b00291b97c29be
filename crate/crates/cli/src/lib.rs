//! Argument handling and rendering for the `crepant` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crepant_core::arith::Constants;
use crepant_core::frobenius::{check_associativity, check_correlators, check_idempotents};
use crepant_core::rmatrix::RMatrix;
use crepant_core::rmatrix_kp4::{assemble_r_matrix, chain_rows};
use crepant_core::rmatrix_orb::{assemble_orb_r_matrix, solve_e2};
use crepant_core::verify::suite::{run_all, Scope, SuiteConfig};
use crepant_core::{compute_hg_data, Cyclotomic, Error, Geometry, Ring, VerificationReport};

#[derive(Debug, Parser)]
#[command(name = "crepant", version, about = "Exact checks of the crepant resolution correspondence for local P4 and [C^5/Z_5]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Geometry for `series` and `rmatrix`.
    #[arg(long, global = true, value_enum, default_value_t = GeometryArg::Kp4)]
    pub geometry: GeometryArg,
    /// Truncation order in the mirror variable.
    #[arg(long, global = true, default_value_t = 20)]
    pub order: i64,
    /// Highest power of z.
    #[arg(long = "z-order", global = true, default_value_t = 6)]
    pub z_order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also run powers of z up to this value, reported but never failing.
    #[arg(long = "exploratory-orders", global = true)]
    pub exploratory_orders: Option<usize>,
    /// psi-order of the orbifold R-matrix in `verify` and `all`.
    #[arg(long = "psi-order", global = true, default_value_t = 25)]
    pub psi_order: i64,
    /// Record wall time per check (output is then not reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the basic series of one geometry.
    Series {
        #[arg(long, value_enum)]
        emit: Vec<SeriesKey>,
    },
    /// Print the R-matrix of one geometry.
    Rmatrix {
        /// Omit the Bernoulli prefactor.
        #[arg(long, conflicts_with = "with_prefactor")]
        raw: bool,
        /// Include the Bernoulli prefactor (default).
        #[arg(long)]
        with_prefactor: bool,
    },
    /// Check the orbifold Frobenius structure.
    Frobenius {
        #[arg(long, value_enum)]
        check: Option<FrobeniusCheck>,
    },
    /// Check the constant identity for local P4 and the constancy of the R-matrix ratio.
    Verify,
    /// Run every check.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Kp4,
    C5z5,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Kp4 => Geometry::Kp4,
            GeometryArg::C5z5 => Geometry::C5z5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKey {
    C1,
    C2,
    L,
    X,
    Y,
    Mirror,
}

impl SeriesKey {
    const ALL: [SeriesKey; 6] = [Self::C1, Self::C2, Self::L, Self::X, Self::Y, Self::Mirror];

    fn name(self) -> &'static str {
        match self {
            Self::C1 => "c1",
            Self::C2 => "c2",
            Self::L => "l",
            Self::X => "x",
            Self::Y => "y",
            Self::Mirror => "mirror",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FrobeniusCheck {
    Associativity,
    Correlators,
    Idempotents,
}

/// What a command produced: the rendered document and the exit code.
#[derive(Debug)]
pub struct Output {
    pub body: String,
    pub code: i32,
}

/// Exit code for an error raised by the computation.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

pub fn run(cli: &Cli) -> Result<Output, Error> {
    let c = &cli.common;
    match &cli.command {
        Command::Series { emit } => series(c, emit),
        Command::Rmatrix { raw, .. } => rmatrix(c, !raw),
        Command::Frobenius { check } => frobenius(c, *check),
        Command::Verify => suite(c, Scope::Verify),
        Command::All => suite(c, Scope::All),
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn series(c: &Common, emit: &[SeriesKey]) -> Result<Output, Error> {
    let g: Geometry = c.geometry.into();
    let d = compute_hg_data(g, c.order)?;
    let keys: Vec<SeriesKey> = if emit.is_empty() { SeriesKey::ALL.to_vec() } else { emit.to_vec() };
    let body = match c.format {
        Format::Json => {
            let mut map = serde_json::Map::new();
            for k in &keys {
                let s = d.named(k.name()).expect("key names a series");
                map.insert(k.name().to_string(), serde_json::to_value(s).expect("series serialize"));
            }
            render_json(&json!({ "geometry": g.name(), "order": c.order, "series": map }))
        }
        Format::Text => {
            let mut out = String::new();
            for k in &keys {
                let s = d.named(k.name()).expect("key names a series");
                writeln!(out, "{} = {s}", k.name()).expect("write to string");
            }
            out
        }
    };
    Ok(Output { body, code: 0 })
}

fn cyc_text<T: Ring + std::fmt::Display>(c: &Cyclotomic<T>) -> String {
    let parts: Vec<String> = c
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero())
        .map(|(m, t)| match m {
            0 => format!("({t})"),
            1 => format!("({t})*zeta"),
            _ => format!("({t})*zeta^{m}"),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else if c.is_base() {
        c.base().to_string()
    } else {
        parts.join(" + ")
    }
}

fn matrix_text<T: Ring + std::fmt::Display>(m: &RMatrix<T>) -> String {
    let mut out = String::new();
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..=m.z_order {
                let c = m.entry(i, j).coeff(k);
                writeln!(out, "R[{i}][{j}] z^{k:<2} {}", cyc_text(c)).expect("write to string");
            }
        }
    }
    out
}

fn rmatrix(c: &Common, with_prefactor: bool) -> Result<Output, Error> {
    let consts = Constants::exact();
    let body = match c.geometry {
        GeometryArg::Kp4 => {
            let m = assemble_r_matrix(&chain_rows(c.z_order)?, with_prefactor, &consts)?;
            match c.format {
                Format::Json => render_json(&m.to_json(|e| serde_json::to_value(e).expect("elements serialize"))),
                Format::Text => matrix_text(&m),
            }
        }
        GeometryArg::C5z5 => {
            let t = solve_e2(c.z_order, c.order)?;
            let m = assemble_orb_r_matrix(&t, with_prefactor, &consts)?;
            match c.format {
                Format::Json => {
                    let mut v = m.to_json(|s| serde_json::to_value(s).expect("series serialize"));
                    v["order"] = json!(c.order);
                    render_json(&v)
                }
                Format::Text => matrix_text(&m),
            }
        }
    };
    Ok(Output { body, code: 0 })
}

fn reports_output(reports: &[VerificationReport], format: Format, summary: Option<String>) -> Output {
    let code = i32::from(reports.iter().any(VerificationReport::failed));
    let body = match format {
        Format::Json => render_json(&serde_json::to_value(reports).expect("reports serialize")),
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                writeln!(out, "{r}").expect("write to string");
            }
            if let Some(s) = summary {
                out.push_str(&s);
            }
            out
        }
    };
    Output { body, code }
}

fn frobenius(c: &Common, check: Option<FrobeniusCheck>) -> Result<Output, Error> {
    let checks = match check {
        Some(k) => vec![k],
        None => vec![FrobeniusCheck::Correlators, FrobeniusCheck::Associativity, FrobeniusCheck::Idempotents],
    };
    let mut reports = Vec::new();
    for k in checks {
        let r = match k {
            FrobeniusCheck::Associativity => check_associativity(c.order),
            FrobeniusCheck::Correlators => check_correlators(c.order),
            FrobeniusCheck::Idempotents => check_idempotents(c.order),
        };
        reports.push(r?);
    }
    Ok(reports_output(&reports, c.format, None))
}

fn suite(c: &Common, scope: Scope) -> Result<Output, Error> {
    if c.order < 6 {
        return Err(Error::InvalidArgument(format!("--order must be at least 6, got {}", c.order)));
    }
    let config = SuiteConfig {
        order: c.order,
        z_order: c.z_order,
        psi_order: c.psi_order,
        exploratory: c.exploratory_orders,
        timings: c.timings,
        scope,
        ..SuiteConfig::default()
    };
    let result = run_all(&config);
    let text = result.to_text();
    let summary = text.lines().last().map(|l| format!("{l}\n"));
    Ok(reports_output(&result.reports, c.format, summary))
}
