//! `hotspot-lab`: spectra, spectral identities and hot-spot checks for planar domains.
//!
//! Exit codes: 0 success, 1 a check failed, 2 solver failure, 3 mesh failure,
//! 4 configuration or input error, 5 `--require-lip` on a non-lip domain.

mod commands;
mod config;
mod output;
mod spec;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hotspot-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Neumann, Dirichlet and vector-operator spectra as CSV.
    Spectrum(Common),
    /// Union-of-spectra, eigenfield classification and Friedlander checks.
    Verify(Common),
    /// Hot-spot analysis of the second Neumann eigenfunction.
    Hotspots {
        #[command(flatten)]
        common: Common,
        /// Exit with code 5 unless the domain is a lip domain.
        #[arg(long)]
        require_lip: bool,
        /// Relative gradient threshold of the interior critical scan.
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
    },
    /// Eigenvalue errors under uniform refinement.
    Convergence(Common),
}

#[derive(Args, Clone, Default)]
pub struct Common {
    /// square | disk:r | ellipse:a,b | rectangle:w,h | polygon:name-or-file | file:path
    #[arg(long)]
    pub domain: Option<String>,
    /// Target mesh size.
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Number of eigenvalues.
    #[arg(short, long)]
    pub m: Option<usize>,
    /// Uniform refinements for `convergence`.
    #[arg(long)]
    pub refinements: Option<usize>,
    /// TOML configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Eigensolver residual tolerance.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Relative tolerance for grouping eigenvalues into clusters.
    #[arg(long, allow_negative_numbers = true)]
    pub cluster_tol: Option<f64>,
    /// Maximum relative gap accepted by the union check.
    #[arg(long, allow_negative_numbers = true)]
    pub tol_union: Option<f64>,
    /// Disable the thread pool.
    #[arg(long)]
    pub sequential: bool,
    /// Also write a legacy VTK file of the analysed field.
    #[arg(long)]
    pub vtk: bool,
    /// Also write the mesh.
    #[arg(long = "write-mesh")]
    pub write_mesh: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors; usage errors are input errors.
            return ExitCode::from(if e.use_stderr() { commands::EXIT_INPUT } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Spectrum(c) => commands::run(&c, commands::spectrum),
        Command::Verify(c) => commands::run(&c, commands::verify),
        Command::Hotspots { common, require_lip, eps } => {
            commands::run(&common, |cfg, ctx| commands::hotspots(cfg, ctx, require_lip, eps))
        }
        Command::Convergence(c) => commands::run(&c, commands::convergence),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("hotspot-lab: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
