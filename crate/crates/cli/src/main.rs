//! Command-line driver for the fixed-photon-number simulator: reproducible
//! scans of the Kerr extraction pipeline, the angular momentum algebra, the
//! coherent-state limit, and cat-code overlaps, with CSV or JSON output.
//!
//! Every command is deterministic (identical invocations produce
//! byte-identical files) and exits 0 only when its internal residual checks
//! pass the requested tolerance.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ssrc_sim::bqc::{controlled_phase_extract, project_spectators_plus};
use ssrc_sim::encodings::{cat_to_bqc_with_cap, fock_overlap_sq, plus_minus_modes, Sign};
use ssrc_sim::extraction::{kerr_then_project_with_cap, SiteLayout};
use ssrc_sim::fock_space::fock_in_mode_with_cap;
use ssrc_sim::ssrc::{
    coherent_limit_exact, jordan_schwinger, poisson_amplitude, Axis, GateKind, GateSpec,
};

const TAU: f64 = std::f64::consts::TAU;

#[derive(Parser)]
#[command(
    name = "ssrc-bqc",
    about = "Fixed-photon-number bosonic states, universal gates, and dual-rail extraction",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the angular momentum algebra at a given photon number:
    /// Hermiticity, the commutator closing on iJz, the Casimir identity, and
    /// gate unitarity.
    AlgebraCheck(AlgebraArgs),
    /// Scan the Kerr pipeline over eta; emits one row per grid point with
    /// the projection probability, the entanglement entropy across
    /// {site 1 | rest}, and the controlled phase of the (1,2) pair, which
    /// must equal 8 eta mod 2 pi.
    KerrScan(KerrArgs),
    /// Exact finite-N amplitudes against the Poisson coefficients of a
    /// coherent state, per photon budget and excitation number.
    CoherentLimit(CoherentArgs),
    /// Cat-mode overlap scan over |alpha|^2, plus the GHZ register extracted
    /// at the orthogonal point |alpha|^2 = N/2.
    Cat(CatArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for tabular data.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Residual tolerance for the internal checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Photon number (matrix layer only, up to 64).
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=64))]
    photons: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct KerrArgs {
    /// Photon number (= register size), at least 2.
    #[arg(long)]
    photons: u32,
    /// Single Kerr strength eta.
    #[arg(long, conflicts_with = "eta_grid")]
    eta: Option<f64>,
    /// Grid of Kerr strengths, "start:stop:steps" (endpoints included).
    #[arg(long)]
    eta_grid: Option<String>,
    /// Resource cap on the photon number (env: SSRC_BQC_CAP).
    #[arg(long, env = "SSRC_BQC_CAP", default_value_t = 8)]
    cap: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CoherentArgs {
    /// Coherent amplitude alpha (real).
    #[arg(long)]
    alpha: f64,
    /// Comma-separated photon budgets, e.g. "100,1000,10000".
    #[arg(long, value_delimiter = ',', required = true)]
    photons: Vec<u32>,
    /// Largest excitation number in the table.
    #[arg(long, default_value_t = 10)]
    k_max: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CatArgs {
    /// Photon number (= register size for the GHZ extraction).
    #[arg(long)]
    photons: u32,
    /// Single drive amplitude alpha (real); tabulates one row at |alpha|^2.
    #[arg(long, conflicts_with = "alpha_grid")]
    alpha: Option<f64>,
    /// Grid of |alpha|^2 values, "start:stop:steps"; defaults to five evenly
    /// spaced points across [0, N].
    #[arg(long)]
    alpha_grid: Option<String>,
    /// Where to write the extracted GHZ statevector (JSON). Defaults to
    /// "OUT.ghz.json" next to --out, or stdout when neither is given.
    #[arg(long)]
    ghz_out: Option<PathBuf>,
    /// Resource cap on the photon number (env: SSRC_BQC_CAP).
    #[arg(long, env = "SSRC_BQC_CAP", default_value_t = 8)]
    cap: u32,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::AlgebraCheck(args) => {
            check_tolerance(&args.output).and_then(|()| run_algebra_check(&args))
        }
        Command::KerrScan(args) => {
            check_tolerance(&args.output).and_then(|()| run_kerr_scan(&args))
        }
        Command::CoherentLimit(args) => {
            check_tolerance(&args.output).and_then(|()| run_coherent_limit(&args))
        }
        Command::Cat(args) => check_tolerance(&args.output).and_then(|()| run_cat(&args)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ssrc-bqc: residual checks failed tolerance");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("ssrc-bqc: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn check_tolerance(output: &OutputArgs) -> Result<()> {
    if output.tol.is_nan() || output.tol <= 0.0 {
        bail!("--tol must be positive, got {}", output.tol);
    }
    Ok(())
}

/// Parses "start:stop:steps" into an inclusive, evenly spaced grid.
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be start:stop:steps, got {spec:?}");
    }
    let start: f64 = parts[0].parse().context("bad grid start")?;
    let stop: f64 = parts[1].parse().context("bad grid stop")?;
    let steps: usize = parts[2].parse().context("bad grid steps")?;
    if steps == 0 {
        bail!("grid needs at least one step");
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    Ok((0..steps)
        .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => write_stdout(content),
    }
}

// A closed pipe (e.g. `... | head`) ends the run quietly instead of
// panicking.
fn write_stdout(content: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(content.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(e.into()),
    }
}

fn render_rows<T: Serialize>(
    format: Format,
    header: &str,
    csv_rows: &[String],
    rows: &[T],
) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "{header}")?;
            for row in csv_rows {
                writeln!(out, "{row}")?;
            }
            Ok(out)
        }
        Format::Json => {
            let mut out = serde_json::to_string_pretty(rows)?;
            out.push('\n');
            Ok(out)
        }
    }
}

fn run_algebra_check(args: &AlgebraArgs) -> Result<bool> {
    let n = args.photons;
    let tol = args.output.tol;
    let ops = jordan_schwinger(n);
    let max_abs = |m: &nalgebra::DMatrix<num_complex::Complex64>| {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    };

    let hermiticity = [ops.jx(), ops.jy(), ops.jz()]
        .iter()
        .map(|m| max_abs(&(*m - m.adjoint())))
        .fold(0.0, f64::max);
    let commutator = max_abs(
        &(ops.jx() * ops.jy()
            - ops.jy() * ops.jx()
            - ops.jz() * num_complex::Complex64::new(0.0, 1.0)),
    );
    let j = n as f64 / 2.0;
    let casimir = max_abs(
        &(ops.casimir()
            - nalgebra::DMatrix::identity(ops.dim(), ops.dim())
                * num_complex::Complex64::new(j * (j + 1.0), 0.0)),
    );
    let mut unitarity: f64 = 0.0;
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        for kind in [GateKind::Rotation, GateKind::Kerr] {
            for parameter in [0.3, 1.1, -2.4] {
                let u = ops.gate_unitary(&GateSpec { kind, axis, parameter });
                let gram = &u * u.adjoint();
                unitarity = unitarity
                    .max(max_abs(&(gram - nalgebra::DMatrix::identity(ops.dim(), ops.dim()))));
            }
        }
    }

    let checks = [
        ("hermiticity", hermiticity),
        ("commutator [Jx,Jy]-iJz", commutator),
        ("casimir J^2-(N/2)(N/2+1)", casimir),
        ("gate unitarity", unitarity),
    ];
    let mut report = String::new();
    writeln!(report, "angular momentum algebra check, N = {n}, tol = {tol:e}")?;
    let mut all_pass = true;
    for (label, residual) in checks {
        let pass = residual <= tol;
        all_pass &= pass;
        writeln!(
            report,
            "{label}: residual {residual:.3e} {}",
            if pass { "PASS" } else { "FAIL" }
        )?;
    }
    writeln!(report, "overall: {}", if all_pass { "PASS" } else { "FAIL" })?;
    write_output(args.output.out.as_deref(), &report)?;
    Ok(all_pass)
}

#[derive(Serialize)]
struct KerrRow {
    eta: f64,
    probability: f64,
    entropy_bits: f64,
    phase_extracted: f64,
}

fn run_kerr_scan(args: &KerrArgs) -> Result<bool> {
    let grid = match (&args.eta, &args.eta_grid) {
        (Some(eta), None) => vec![*eta],
        (None, Some(spec)) => parse_grid(spec)?,
        (None, None) => bail!("provide --eta or --eta-grid"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let mut rows = Vec::with_capacity(grid.len());
    let mut all_pass = true;
    for &eta in &grid {
        let result = kerr_then_project_with_cap(args.photons, eta, args.cap)?;
        let entropy_bits = result.qubits.entanglement_entropy(&[1])?;
        let pair = project_spectators_plus(&result.qubits, 1, 2)?;
        let phase_extracted = controlled_phase_extract(&pair)?;
        // phi must sit at 8 eta mod 2 pi, compared circularly.
        let target = (8.0 * eta).rem_euclid(TAU);
        let distance = (phase_extracted - target).abs();
        all_pass &= distance.min(TAU - distance) <= args.output.tol;
        rows.push(KerrRow {
            eta,
            probability: result.probability,
            entropy_bits,
            phase_extracted,
        });
    }
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{},{},{}", r.eta, r.probability, r.entropy_bits, r.phase_extracted))
        .collect();
    let content = render_rows(
        args.output.format,
        "eta,probability,entropy_bits,phase_extracted",
        &csv_rows,
        &rows,
    )?;
    write_output(args.output.out.as_deref(), &content)?;
    Ok(all_pass)
}

#[derive(Serialize)]
struct CoherentRow {
    #[serde(rename = "N")]
    n: u32,
    k: u32,
    exact: f64,
    poisson: f64,
    abs_err: f64,
}

fn run_coherent_limit(args: &CoherentArgs) -> Result<bool> {
    let alpha = num_complex::Complex64::new(args.alpha, 0.0);
    for &n in &args.photons {
        if alpha.norm_sqr() >= n as f64 {
            bail!(
                "|alpha|^2 = {} must stay below every photon budget (N = {n})",
                alpha.norm_sqr()
            );
        }
    }
    let mut rows = Vec::new();
    for &n in &args.photons {
        for k in 0..=args.k_max.min(n) {
            let exact = coherent_limit_exact(n, alpha, k)?;
            let poisson = poisson_amplitude(alpha, k);
            rows.push(CoherentRow {
                n,
                k,
                exact: exact.re,
                poisson: poisson.re,
                abs_err: (exact - poisson).norm(),
            });
        }
    }
    // Larger references must approximate the Poisson profile at least as
    // well, excitation by excitation.
    let mut all_pass = true;
    let mut sorted = args.photons.clone();
    sorted.sort_unstable();
    for k in 0..=args.k_max {
        let errs: Vec<f64> = sorted
            .iter()
            .filter_map(|&n| rows.iter().find(|r| r.n == n && r.k == k).map(|r| r.abs_err))
            .collect();
        for pair in errs.windows(2) {
            all_pass &= pair[1] <= pair[0] + args.output.tol;
        }
    }
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{},{},{},{}", r.n, r.k, r.exact, r.poisson, r.abs_err))
        .collect();
    let content = render_rows(args.output.format, "N,k,exact,poisson,abs_err", &csv_rows, &rows)?;
    write_output(args.output.out.as_deref(), &content)?;
    Ok(all_pass)
}

#[derive(Serialize)]
struct CatRow {
    #[serde(rename = "N")]
    n: u32,
    alpha_sq: f64,
    overlap_exact: f64,
    overlap_gaussian_approx: f64,
}

fn run_cat(args: &CatArgs) -> Result<bool> {
    let n = args.photons;
    let grid = match (&args.alpha, &args.alpha_grid) {
        (Some(alpha), None) => vec![alpha * alpha],
        (None, Some(spec)) => parse_grid(spec)?,
        (None, None) => parse_grid(&format!("0:{n}:5"))?,
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let mut rows = Vec::with_capacity(grid.len());
    let mut all_pass = true;
    for &alpha_sq in &grid {
        let overlap_exact = fock_overlap_sq(n, alpha_sq)?;
        // Cross-check against the honest Fock-space inner product while the
        // expansion stays within the resource cap.
        if n <= args.cap {
            let alpha = num_complex::Complex64::new(alpha_sq.max(0.0).sqrt(), 0.0);
            let (plus, minus) = plus_minus_modes(n, alpha)?;
            let inner = fock_in_mode_with_cap(&plus, n, args.cap)?
                .inner(&fock_in_mode_with_cap(&minus, n, args.cap)?)?;
            all_pass &= (inner.re - overlap_exact).abs() <= args.output.tol;
        }
        rows.push(CatRow {
            n,
            alpha_sq,
            overlap_exact,
            overlap_gaussian_approx: (-2.0 * alpha_sq).exp(),
        });
    }
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!("{},{},{},{}", r.n, r.alpha_sq, r.overlap_exact, r.overlap_gaussian_approx)
        })
        .collect();
    let content = render_rows(
        args.output.format,
        "N,alpha_sq,overlap_exact,overlap_gaussian_approx",
        &csv_rows,
        &rows,
    )?;
    write_output(args.output.out.as_deref(), &content)?;

    // GHZ extraction at the exactly orthogonal point.
    let layout = SiteLayout::new(n as usize);
    let ghz = cat_to_bqc_with_cap(n, Sign::Plus, &layout, args.cap)?;
    for site in 1..n as usize {
        let entropy = ghz.qubits.entanglement_entropy(&(1..=site).collect::<Vec<_>>())?;
        all_pass &= (entropy - 1.0).abs() <= args.output.tol;
    }
    let mut ghz_json = serde_json::to_string_pretty(&ghz.qubits)?;
    ghz_json.push('\n');
    let ghz_path = args.ghz_out.clone().or_else(|| {
        args.output.out.as_ref().map(|out| {
            let mut path = out.clone().into_os_string();
            path.push(".ghz.json");
            PathBuf::from(path)
        })
    });
    match ghz_path {
        Some(path) => write_output(Some(&path), &ghz_json)?,
        None => {
            write_stdout("\n")?;
            write_stdout(&ghz_json)?;
        }
    }
    Ok(all_pass)
}
