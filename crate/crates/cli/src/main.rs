//! `scalinj`: tables, profiles, scans and certificates for warped metrics
//! over the 2-sphere, written as CSV or JSON.

mod commands;
mod output;

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scalinj_core::search::{DEFAULT_ALPHA_RANGE, DEFAULT_BETA_RANGE};
use thiserror::Error;

use output::Format;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) | Failure::Io(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }
}

impl From<scalinj_core::Error> for Failure {
    fn from(e: scalinj_core::Error) -> Self {
        use scalinj_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::Domain(_) => Failure::Validation(e.to_string()),
            E::StepUnderflow { .. } | E::NoConnectingGeodesic { .. } => {
                Failure::Numerical(e.to_string())
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "scalinj",
    version,
    about = "Scalar curvature, diameter and injectivity radius of warped metrics on S^2 x T^(n-2)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Total dimension n of S^2 x T^(n-2).
    #[arg(long, global = true, default_value_t = 4)]
    pub n: u32,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Also write a gnuplot script next to the data (CSV only).
    #[arg(long, global = true)]
    pub plot: bool,
}

/// Member of the family a = (sin r + alpha sin 3r)/(1 + 3 alpha),
/// b = 1 + beta sin^2 r. Without any flag, s = 0.5 is used.
#[derive(Args, Debug, Clone, Copy)]
pub struct Family {
    /// Third-mode coefficient of a.
    #[arg(long, conflicts_with = "s", allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Coefficient of sin^2 r in b.
    #[arg(long, conflicts_with = "s", allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Position on the segment from the round product (s = 0) to the corner root (s = 1).
    #[arg(long)]
    pub s: Option<f64>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Window {
    #[arg(long, default_value_t = DEFAULT_ALPHA_RANGE.0, allow_hyphen_values = true)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA_RANGE.1, allow_hyphen_values = true)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = DEFAULT_BETA_RANGE.0, allow_hyphen_values = true)]
    pub beta_min: f64,
    #[arg(long, default_value_t = DEFAULT_BETA_RANGE.1, allow_hyphen_values = true)]
    pub beta_max: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scalar curvature of a family member over a radial grid, pole limits included.
    ScalProfile {
        #[command(flatten)]
        family: Family,
        /// Radial grid points strictly between the poles.
        #[arg(long, default_value_t = 2001)]
        grid: usize,
    },
    /// Deviation of the extremal band metric dt^2 + cos(nt/2)^(4/n)|dx|^2 from
    /// constant curvature n(n-1).
    BandCheck {
        /// Interior sample points.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Classify an (alpha, beta) rectangle by scal(0) >= 2, scal(pi/2) >= 2 and
    /// scal > 2 on the whole profile.
    RegionScan {
        #[command(flatten)]
        window: Window,
        /// Cells per axis.
        #[arg(long, default_value_t = 128)]
        resolution: usize,
        /// Radial grid points per cell profile.
        #[arg(long, default_value_t = 2001)]
        grid: usize,
    },
    /// Solve scal(0) = scal(pi/2) = 2 by Newton's method from a 5x5 seed lattice.
    CornerRoots {
        #[command(flatten)]
        window: Window,
        /// Add the expected roots to the seeds.
        #[arg(long)]
        hints: bool,
    },
    /// Certificates at evenly spaced s in [0, 1] along the segment to the corner root.
    SegmentSweep {
        /// Number of s values, endpoints included.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Minimal curvature and diameter of one segment point, and whether it beats
    /// the round product.
    Certify {
        #[arg(long, default_value_t = 0.1)]
        s: f64,
    },
    /// Tabulate D-bar(r) = 2r + 2pi/(3 sqrt(1 - 4pi^2/(9r^2))) at
    /// r = 2pi/3 + i pi/(3 samples), 0 < i < samples.
    Dbar {
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Golden-section minimum of D-bar.
    DbarMin {
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Scalar curvature, injectivity radius and rescaled injectivity radius of the
    /// classical examples in dimension n, with a factor-by-factor recomputation.
    Table1,
    /// Integrate one geodesic of the surface dr^2 + a(r)^2 dphi^2 with its Jacobi field.
    Geodesic {
        #[command(flatten)]
        family: Family,
        /// Starting radius (0 or pi for a pole).
        #[arg(long, default_value_t = FRAC_PI_2)]
        r: f64,
        /// Launch angle from d/dr towards d/dphi (the meridian at a pole).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Arc length.
        #[arg(long, default_value_t = std::f64::consts::PI)]
        length: f64,
    },
    /// Injectivity radius estimate of the surface dr^2 + a(r)^2 dphi^2.
    Inj {
        #[command(flatten)]
        family: Family,
        /// Directions per base point.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Base points along a meridian.
        #[arg(long, default_value_t = 8)]
        base: usize,
    },
    /// sqrt(min scal / (n(n-1))) * inj along the segment, at evenly spaced s in
    /// [0, s].
    InjTrend {
        /// Largest s.
        #[arg(long, default_value_t = 0.2)]
        s: f64,
        /// Number of s values.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Closed-form bounds in dimension n (conjugacy, band, diameter) and the
    /// projection length check on seeded random curves.
    Bounds {
        #[command(flatten)]
        family: Family,
        /// Random curves per projection check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
