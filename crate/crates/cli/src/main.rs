//! `prymtaut`: coefficient tables, symbolic expansions, zeta polynomials and
//! Brill-Noether checks from the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 domain error, 3 enumeration
//! cap exceeded.

mod args;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use prym_taut::bn::{classify, PrymSetup, RegimeReport};
use prym_taut::coefficients::{check_expectation, c, rows_to_csv, scan, CoeffQuery, CoeffRow};
use prym_taut::taut::{
    fourier_to_zeta, v_component, v_push_expansion, zeta_generator_degrees, GradedExpr, TautExpr, VComponent,
    ZetaPolynomial,
};
use prym_taut::tuples::index_set_size;
use prym_taut::{Error, Rational};

use args::{Cli, Command, Format};

enum Failure {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Core(Error::Parse(_)) => 1,
            Failure::Core(Error::Domain(_)) => 2,
            Failure::Core(Error::ResourceCap { .. }) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: &Command) -> Result<(), Failure> {
    let output = cmd.output();
    let format = output.format;
    let text = match cmd {
        Command::Coeff { t, r, d, g, output } => coeff(t, r, d, *g, output.cap, format)?,
        Command::Vclass { r, d, t, p, g, .. } => vclass(*r, *d, *t, prym_dim(*p, *g), format)?,
        Command::Zeta { r, d, t, p, g, .. } => {
            let p = prym_dim(*p, *g).ok_or_else(|| Error::Domain("zeta needs --p or --g".into()))?;
            zeta(*r, *d, *t, p, format)?
        }
        Command::Scan { t, r, d, expect, output } => {
            let table = scan(t.range(), r.range(), d.range(), output.cap)?;
            let report = expect.map(|e| check_expectation(&table, e.into())).transpose()?;
            match format {
                Format::Csv | Format::Json => {
                    if let Some(rep) = &report {
                        eprintln!("{rep}");
                    }
                    if format == Format::Csv {
                        table.to_csv()
                    } else {
                        table.to_json() + "\n"
                    }
                }
                Format::Text => {
                    let mut s = String::new();
                    for row in &table.rows {
                        writeln!(s, "c_{{{},{},{}}} = {}", row.t, row.r, row.d, row.c).unwrap();
                    }
                    let non_int = table.rows.iter().filter(|r| !r.is_integer).count();
                    writeln!(
                        s,
                        "{} rows, {} non-integer, {} cells skipped (2r >= d)",
                        table.rows.len(),
                        non_int,
                        table.meta.skipped_cells
                    )
                    .unwrap();
                    if let Some(rep) = &report {
                        writeln!(s, "{rep}").unwrap();
                    }
                    s
                }
            }
        }
        Command::BnCheck { g, r, d, ramified, .. } => {
            let mut reports = Vec::new();
            for gg in g.range() {
                for rr in r.range() {
                    for dd in d.range() {
                        reports.push(classify(&PrymSetup::new(gg, rr, dd, !ramified)?));
                    }
                }
            }
            bn_output(&reports, format)
        }
        Command::Example2 { .. } => vclass(3, 7, None, None, format)?,
    };
    emit(&text, output.out.as_deref())
}

fn prym_dim(p: Option<u32>, g: Option<u32>) -> Option<u32> {
    // etale covers: p = g - 1
    p.or_else(|| g.map(|g| g.saturating_sub(1)))
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CoeffOut<'a> {
    t: u32,
    r: u32,
    d: u32,
    c: &'a Rational,
}

fn coeff(
    t: &args::Span,
    r: &args::Span,
    d: &args::Span,
    g: Option<u32>,
    cap: u128,
    format: Format,
) -> Result<String, Failure> {
    let mut rows = Vec::new();
    for rr in r.range() {
        for dd in d.range() {
            for tt in t.range() {
                let mut q = CoeffQuery::new(tt, rr, dd);
                if let Some(g) = g {
                    q = q.with_genus(g);
                }
                q.validate()?;
                let size = index_set_size(rr, dd);
                if size > cap {
                    return Err(Error::ResourceCap { r: rr, d: dd, size, cap }.into());
                }
                let value = c(&q)?;
                rows.push(CoeffRow {
                    t: tt,
                    r: rr,
                    d: dd,
                    is_integer: value.is_integer(),
                    c: value,
                });
            }
        }
    }
    Ok(match format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => {
            let outs: Vec<CoeffOut> = rows
                .iter()
                .map(|row| CoeffOut {
                    t: row.t,
                    r: row.r,
                    d: row.d,
                    c: &row.c,
                })
                .collect();
            let json = if outs.len() == 1 {
                serde_json::to_string(&outs[0])
            } else {
                serde_json::to_string(&outs)
            };
            json.expect("rows serialize") + "\n"
        }
        Format::Text => rows
            .iter()
            .map(|row| format!("c_{{{},{},{}}} = {}\n", row.t, row.r, row.d, row.c))
            .collect(),
    })
}

fn keyed_csv<'a>(terms: impl Iterator<Item = (&'a [u32], &'a Rational)>) -> String {
    let mut s = String::from("key,coeff\n");
    for (k, v) in terms {
        let key: Vec<String> = k.iter().map(u32::to_string).collect();
        writeln!(s, "{},{}", key.join(" "), v).unwrap();
    }
    s
}

fn taut_output(x: &TautExpr, format: Format) -> String {
    match format {
        Format::Text => format!("2_*[V] = {x}\n"),
        Format::Json => x.to_json() + "\n",
        Format::Csv => keyed_csv(x.iter().map(|(k, v)| (k.multipliers(), v))),
    }
}

fn graded_csv(x: &GradedExpr) -> String {
    keyed_csv(x.iter().map(|(k, v)| (k.as_slice(), v)))
}

#[derive(Serialize)]
struct VComponentOut<'a> {
    t: u32,
    r: u32,
    d: u32,
    p: u32,
    component: &'a GradedExpr,
    reference: &'a GradedExpr,
    ratios: Vec<(&'a [u32], &'a Rational)>,
}

fn vcomponent_output(v: &VComponent, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "[V]_({}) = {}", v.t, v.component).unwrap();
            writeln!(s, "(Z^{{*{}}})_({}) = {}", v.r, v.t, v.reference).unwrap();
            for (k, ratio) in &v.ratios {
                writeln!(s, "ratio on {k:?}: {ratio}").unwrap();
            }
            s
        }
        Format::Json => {
            let out = VComponentOut {
                t: v.t,
                r: v.r,
                d: v.d,
                p: v.p,
                component: &v.component,
                reference: &v.reference,
                ratios: v.ratios.iter().map(|(k, q)| (k.as_slice(), q)).collect(),
            };
            serde_json::to_string(&out).expect("component serializes") + "\n"
        }
        Format::Csv => graded_csv(&v.component),
    }
}

fn vclass(r: u32, d: u32, t: Option<u32>, p: Option<u32>, format: Format) -> Result<String, Failure> {
    match t {
        None => Ok(taut_output(&v_push_expansion(r, d)?, format)),
        Some(t) => {
            let p = p.ok_or_else(|| Error::Domain("--t needs --p or --g".into()))?;
            Ok(vcomponent_output(&v_component(t, r, d, p)?, format))
        }
    }
}

fn zeta(r: u32, d: u32, t: Option<u32>, p: u32, format: Format) -> Result<String, Failure> {
    let degrees: Vec<u32> = match t {
        Some(t) => vec![t],
        None => (0..=r * (p.saturating_sub(1))).step_by(2).collect(),
    };
    let mut graded = GradedExpr::zero(p);
    for t in degrees {
        graded = graded.add(&v_component(t, r, d, p)?.component);
    }
    let poly: ZetaPolynomial = fourier_to_zeta(&graded, p)?;
    let gens = zeta_generator_degrees(p)?;
    Ok(match format {
        Format::Text => {
            let names: Vec<String> = gens.iter().map(|n| format!("zeta_{n}")).collect();
            let lhs = match t {
                Some(t) => format!("F([V]_({t}))"),
                None => "F([V])".to_string(),
            };
            format!("generators: {}\n{lhs} = {poly}\n", names.join(", "))
        }
        Format::Json => poly.to_json() + "\n",
        Format::Csv => keyed_csv(poly.iter().map(|(k, v)| (k.as_slice(), v))),
    })
}

fn bn_output(reports: &[RegimeReport], format: Format) -> String {
    match format {
        Format::Text => reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let json = if reports.len() == 1 {
                serde_json::to_string(&reports[0])
            } else {
                serde_json::to_string(reports)
            };
            json.expect("report serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("g,r,d,p,rho,range_ok,regime,notes\n");
            for rep in reports {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    rep.g,
                    rep.r,
                    rep.d,
                    rep.p,
                    rep.rho,
                    rep.range_ok,
                    rep.regime,
                    rep.notes.join("; ").replace(',', "")
                )
                .unwrap();
            }
            s
        }
    }
}
