use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qgeom::geometry::{bogoliubov_metric, metric_fd, metric_via_g, mixture_geodesic, zeta_derivatives, ExponentialArc};
use qgeom::states::{thermal_state, umegaki_divergence};
use qgeom::{DensityMatrix, Hamiltonian};
use qgeom_cli::format::sig12;
use qgeom_cli::matrix_file::{load_density, load_hamiltonian, MatrixFile};
use qgeom_cli::verify::{self, Profile};

/// Step used by `metric --method fd`.
const FD_STEP: f64 = 1e-4;

#[derive(Parser)]
#[command(name = "qgeom", version, about = "Quantum information geometry on faithful density matrices")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Umegaki relative entropy D(σ‖τ).
    Divergence { sigma: PathBuf, tau: PathBuf },
    /// Bogoliubov inner product at ρ of the directions toward σ and τ.
    Metric {
        rho: PathBuf,
        sigma: PathBuf,
        tau: PathBuf,
        #[arg(long, value_enum, default_value_t = MetricMethod::Integral)]
        method: MetricMethod,
    },
    /// Tabulate a geodesic between two states as CSV.
    Geodesic {
        rho0: PathBuf,
        rho1: PathBuf,
        #[arg(long, value_enum, default_value_t = GeodesicKind::Exponential)]
        kind: GeodesicKind,
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
    /// Gibbs state e^{-βH}/Z as a density matrix file.
    Thermal {
        hamiltonian: PathBuf,
        #[arg(long)]
        beta: f64,
    },
    /// Run the property suite and print one CSV row per (check, dim, seed).
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long = "tol-profile", default_value = "strict")]
        tol_profile: Profile,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricMethod {
    Integral,
    Superop,
    Fd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeodesicKind {
    Mixture,
    Exponential,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn same_dim(states: &[&DensityMatrix<f64>]) -> Result<()> {
    let dims: BTreeSet<usize> = states.iter().map(|s| s.dim()).collect();
    if dims.len() > 1 {
        bail!("dimension mismatch between input files: {dims:?}");
    }
    Ok(())
}

fn geodesic(rho0: DensityMatrix<f64>, rho1: DensityMatrix<f64>, kind: GeodesicKind, grid: usize, out: &mut dyn Write) -> Result<()> {
    if grid < 2 {
        bail!("--grid must be at least 2, got {grid}");
    }
    let n = rho0.dim();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|k| format!("lambda_{k}")));
    if matches!(kind, GeodesicKind::Exponential) {
        header.extend(["zeta", "zeta_dot", "zeta_ddot"].map(String::from));
    }
    header.extend(["d_t_0", "d_t_1"].map(String::from));
    w.write_record(&header)?;

    let arc = ExponentialArc::new(rho0.clone(), rho1.clone());
    for i in 0..grid {
        let t = i as f64 / (grid - 1) as f64;
        let mut row = vec![t];
        let rt = match kind {
            GeodesicKind::Mixture => mixture_geodesic(&rho0, &rho1, t)?,
            GeodesicKind::Exponential => arc.state(t),
        };
        row.extend(rt.eigenvalues().iter());
        if matches!(kind, GeodesicKind::Exponential) {
            let (zd, zdd) = zeta_derivatives(&arc, t);
            row.extend([arc.zeta(t), zd, zdd]);
        }
        row.extend([umegaki_divergence(&rt, &rho0), umegaki_divergence(&rt, &rho1)]);
        w.write_record(row.iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Returns `Ok(false)` when verification ran but some check failed.
fn run(cli: Cli) -> Result<bool> {
    let out_path = cli.out.as_deref();
    match cli.command {
        Command::Divergence { sigma, tau } => {
            let (s, t) = (load_density(&sigma)?, load_density(&tau)?);
            same_dim(&[&s, &t])?;
            writeln!(output(out_path)?, "{}", sig12(umegaki_divergence(&s, &t)))?;
        }
        Command::Metric { rho, sigma, tau, method } => {
            let (r, s, t) = (load_density(&rho)?, load_density(&sigma)?, load_density(&tau)?);
            same_dim(&[&r, &s, &t])?;
            let value = match method {
                MetricMethod::Integral => bogoliubov_metric(&r, &s, &t),
                MetricMethod::Superop => metric_via_g(&r, &s, &t),
                MetricMethod::Fd => metric_fd(&r, &s, &t, FD_STEP)?,
            };
            writeln!(output(out_path)?, "{}", sig12(value))?;
        }
        Command::Geodesic { rho0, rho1, kind, grid } => {
            let (a, b) = (load_density(&rho0)?, load_density(&rho1)?);
            same_dim(&[&a, &b])?;
            geodesic(a, b, kind, grid, &mut *output(out_path)?)?;
        }
        Command::Thermal { hamiltonian, beta } => {
            if !beta.is_finite() {
                bail!("--beta must be finite, got {beta}");
            }
            let h = Hamiltonian::new(load_hamiltonian(&hamiltonian)?);
            let rho = thermal_state(&h, beta)?;
            output(out_path)?.write_all(MatrixFile::from_density(&rho).to_json().as_bytes())?;
        }
        Command::Verify { dims, seeds, tol_profile, inject_fault } => {
            let config = verify::Config {
                dims,
                seeds,
                base_seed: cli.seed,
                profile: tol_profile,
                inject_fault,
            };
            let rows = verify::run(&config)?;
            let mut out = output(out_path)?;
            verify::write_csv(&rows, &mut out)?;
            out.flush()?;
            let failed: BTreeSet<&str> = rows.iter().filter(|r| !r.passed).map(|r| r.check_name.as_str()).collect();
            if !failed.is_empty() {
                for name in &failed {
                    let n = rows.iter().filter(|r| !r.passed && r.check_name == *name).count();
                    eprintln!("FAILED {name} ({n} rows)");
                }
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
