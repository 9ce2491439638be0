use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jka::hidden::HiddenConstants;
use jka::report::{Format, RunConfig};
use jka::runner::{self, DEFAULT_SUITES, FAST_ALGEBRAS, SLOW_ALGEBRAS};
use jka::spectral::h0_matrix_spectrum;
use jka::tkk::Tkk;
use jka::{Algebra, AlgebraSpec, Family, JkaError};

#[derive(Parser)]
#[command(name = "jka", version, about = "Jordan algebras, the conformal algebra and the Kepler cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a reference table.
    Table {
        which: TableKind,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites and report every check.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated suite names.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Include the quaternionic and octonionic algebras in the default set.
        #[arg(long)]
        full: bool,
    },
    /// Spectrum of the conformal Hamiltonian on polynomials of bounded degree.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Dimensions of the derivation, structure and conformal algebras.
    Dims {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Constants,
    Dims,
}

#[derive(Args)]
struct Common {
    /// FAMILY:N, comma-separated.
    #[arg(long, value_delimiter = ',')]
    algebra: Vec<AlgebraSpec>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConstantsRow {
    algebra: String,
    rho: usize,
    delta: usize,
    a: String,
    b: String,
    kappa: String,
    ground: String,
}

/// The algebras of the constants table.
const TABLE_ALGEBRAS: [(Family, usize); 12] = [
    (Family::Gamma, 2),
    (Family::Gamma, 3),
    (Family::Gamma, 4),
    (Family::Gamma, 5),
    (Family::Gamma, 6),
    (Family::HermR, 3),
    (Family::HermR, 4),
    (Family::HermR, 5),
    (Family::HermC, 3),
    (Family::HermC, 4),
    (Family::HermH, 3),
    (Family::HermO, 3),
];

fn specs(list: &[(Family, usize)]) -> Vec<AlgebraSpec> {
    list.iter().map(|&(f, n)| AlgebraSpec::new(f, n)).collect()
}

fn render_rows<T: Serialize>(rows: &[T], format: Format, header: &[&str], line: impl Fn(&T) -> Vec<String>) -> Result<String, JkaError> {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).map_err(|e| JkaError::InvalidInput(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| JkaError::InvalidInput(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| JkaError::InvalidInput(e.to_string()))?;
            Ok(String::from_utf8_lossy(&bytes).into_owned())
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = rows.iter().map(&line).collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|i| cells.iter().map(|c| c[i].chars().count()).chain([header[i].len()]).max().unwrap_or(0))
                .collect();
            let fmt_row = |c: Vec<String>| {
                c.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
            };
            let mut out = fmt_row(header.iter().map(|s| s.to_string()).collect());
            out.push('\n');
            for c in cells {
                out.push_str(&fmt_row(c));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn constants_table(common: &Common) -> Result<String, JkaError> {
    let list = if common.algebra.is_empty() { specs(&TABLE_ALGEBRAS) } else { common.algebra.clone() };
    let mut rows = Vec::new();
    for spec in list {
        spec.validate()?;
        let (rho, delta) = spec.rank_degree();
        let k = HiddenConstants::new(rho, delta);
        rows.push(ConstantsRow {
            algebra: spec.to_string(),
            rho,
            delta,
            a: k.a.to_string(),
            b: k.b.to_string(),
            kappa: k.kappa.to_string(),
            ground: HiddenConstants::ground(rho, delta).to_string(),
        });
    }
    render_rows(&rows, common.format, &["algebra", "rho", "delta", "A", "B", "kappa", "rho*delta/4"], |r| {
        vec![r.algebra.clone(), r.rho.to_string(), r.delta.to_string(), r.a.clone(), r.b.clone(), r.kappa.clone(), r.ground.clone()]
    })
}

fn dims_table(common: &Common) -> Result<String, JkaError> {
    let list = if common.algebra.is_empty() {
        specs(&[FAST_ALGEBRAS.as_slice(), SLOW_ALGEBRAS.as_slice()].concat())
    } else {
        common.algebra.clone()
    };
    let mut rows = Vec::new();
    for spec in list {
        let alg = Algebra::shared(spec)?;
        rows.push(Tkk::new(alg).dims());
    }
    render_rows(&rows, common.format, &["algebra", "der", "str", "u", "co"], |d| {
        vec![
            AlgebraSpec::new(d.family, d.n).to_string(),
            d.der.to_string(),
            d.r#str.to_string(),
            d.u.to_string(),
            d.co.to_string(),
        ]
    })
}

fn spectrum(common: &Common, degree: usize) -> Result<String, JkaError> {
    let spec = match common.algebra.as_slice() {
        [one] => *one,
        _ => return Err(JkaError::InvalidInput("spectrum needs exactly one --algebra".into())),
    };
    let s = h0_matrix_spectrum(Algebra::shared(spec)?, degree, common.seed)?;
    match common.format {
        Format::Json => serde_json::to_string_pretty(&s).map_err(|e| JkaError::InvalidInput(e.to_string())),
        format => render_rows(&s.levels, format, &["I", "eigenvalue", "multiplicity", "energy"], |l| {
            vec![l.index.to_string(), format!("{:.9}", l.eigenvalue), l.multiplicity.to_string(), format!("{:.9}", l.energy)]
        }),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), JkaError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(JkaError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn usage(e: &JkaError) -> bool {
    matches!(
        e,
        JkaError::UnknownFamily(_) | JkaError::BadAlgebraSpec(_) | JkaError::UnknownSuite(_) | JkaError::OutOfRange { .. }
    )
}

fn run(cli: Cli) -> Result<bool, JkaError> {
    match cli.command {
        Command::Table { which, common } => {
            let text = match which {
                TableKind::Constants => constants_table(&common)?,
                TableKind::Dims => dims_table(&common)?,
            };
            emit(&text, &common.out)?;
            Ok(true)
        }
        Command::Dims { common } => {
            emit(&dims_table(&common)?, &common.out)?;
            Ok(true)
        }
        Command::Spectrum { common, degree } => {
            emit(&spectrum(&common, degree)?, &common.out)?;
            Ok(true)
        }
        Command::Verify { common, suite, tol, points, degree, full } => {
            let algebras = if !common.algebra.is_empty() {
                common.algebra.clone()
            } else if full {
                specs(&[FAST_ALGEBRAS.as_slice(), SLOW_ALGEBRAS.as_slice()].concat())
            } else {
                specs(&FAST_ALGEBRAS)
            };
            let suites = if suite.is_empty() { DEFAULT_SUITES.iter().map(|s| s.to_string()).collect() } else { suite };
            let cfg = RunConfig {
                algebras,
                suites,
                seed: common.seed,
                tol,
                points,
                degree,
                format: common.format,
                out: common.out.as_ref().map(|p| p.display().to_string()),
            };
            let start = Instant::now();
            let mut report = runner::run(&cfg)?;
            report.wall_clock_ms = Some(start.elapsed().as_millis());
            emit(&report.render(common.format)?, &common.out)?;
            if common.format != Format::Text {
                eprintln!("{} checks, {} failed", report.checks.len(), report.failures().count());
            }
            Ok(report.pass())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("JKA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if usage(&e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
