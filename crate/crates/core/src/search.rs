//! Exploration of the two-mode family: region scans in `(α, β)`, the corner
//! system, and certificates along the segment between its roots.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::scaled_inj;
use crate::curvature::{
    corner_root, curvature_profile, scal_equator_closed_form, scal_pole_closed_form,
    WarpFamilyParams, DEFAULT_GRID,
};
use crate::error::{invalid, Result};
use crate::geometry::{diameter, injectivity_radius, Surface};
use crate::numerics::newton::{Newton2, NewtonOutcome};

/// Scan window used when none is given.
pub const DEFAULT_ALPHA_RANGE: (f64, f64) = (-0.05, 0.15);
pub const DEFAULT_BETA_RANGE: (f64, f64) = (-0.1, 0.4);
/// Sample density handed to [`diameter`] by the certificates.
pub const CERTIFICATE_DIAMETER_DENSITY: usize = 8;
/// A certificate needs a diameter at least `π` minus this.
pub const DIAMETER_TOLERANCE: f64 = 1e-3;
/// Roots closer than this are the same root.
pub const ROOT_DEDUP_DISTANCE: f64 = 1e-8;
/// Residual required of a reported corner root.
pub const ROOT_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Serial,
    Parallel,
}

/// Smallest curvature of the family member: the dense profile together with
/// the exact endpoint values.
pub fn family_min_scal(params: &WarpFamilyParams, grid_size: usize) -> Result<f64> {
    let profile = curvature_profile(params, grid_size)?;
    let endpoints = scal_pole_closed_form(params)?.min(scal_equator_closed_form(params)?);
    Ok(profile.min_value.min(endpoints))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionCell {
    pub alpha: f64,
    pub beta: f64,
    pub scal0: f64,
    pub scal_equator: f64,
    pub min_scal: f64,
    /// `scal_equator ≥ 2`.
    #[serde(rename = "in_R0")]
    pub in_r0: bool,
    /// `scal0 ≥ 2`.
    #[serde(rename = "in_Rpi2")]
    pub in_rpi2: bool,
    /// Both endpoint conditions and `min_scal ≥ 2` over the whole profile.
    pub in_both: bool,
}

/// Cells of a uniform `resolution × resolution` grid, `α` major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionGrid {
    pub n: u32,
    pub alpha_range: (f64, f64),
    pub beta_range: (f64, f64),
    pub resolution: usize,
    pub profile_grid: usize,
    pub cells: Vec<RegionCell>,
}

impl RegionGrid {
    pub fn alpha_at(&self, i: usize) -> f64 {
        node(self.alpha_range, self.resolution, i)
    }

    pub fn beta_at(&self, j: usize) -> f64 {
        node(self.beta_range, self.resolution, j)
    }

    pub fn cell(&self, i: usize, j: usize) -> &RegionCell {
        &self.cells[i * self.resolution + j]
    }

    /// Cell whose node is closest to `(alpha, beta)`.
    pub fn nearest(&self, alpha: f64, beta: f64) -> &RegionCell {
        let index = |x: f64, (lo, hi): (f64, f64)| {
            let t = (x - lo) / (hi - lo) * (self.resolution - 1) as f64;
            (t.round().max(0.0) as usize).min(self.resolution - 1)
        };
        self.cell(index(alpha, self.alpha_range), index(beta, self.beta_range))
    }

    pub fn count_both(&self) -> usize {
        self.cells.iter().filter(|c| c.in_both).count()
    }
}

fn node((lo, hi): (f64, f64), resolution: usize, i: usize) -> f64 {
    if i + 1 == resolution {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / (resolution - 1) as f64)
    }
}

fn check_range(name: &'static str, (lo, hi): (f64, f64), min: f64, max: f64) -> Result<()> {
    if !(lo < hi) {
        return Err(invalid(name, format!("empty interval [{lo}, {hi}]")));
    }
    if !(lo > min && hi < max) {
        return Err(invalid(name, format!("[{lo}, {hi}] leaves the window ({min}, {max})")));
    }
    Ok(())
}

fn region_cell(n: u32, alpha: f64, beta: f64, profile_grid: usize) -> Result<RegionCell> {
    let params = WarpFamilyParams::new(n, alpha, beta)?;
    let scal0 = scal_pole_closed_form(&params)?;
    let scal_equator = scal_equator_closed_form(&params)?;
    let min_scal = curvature_profile(&params, profile_grid)?
        .min_value
        .min(scal0)
        .min(scal_equator);
    let in_r0 = scal_equator >= 2.0;
    let in_rpi2 = scal0 >= 2.0;
    Ok(RegionCell {
        alpha,
        beta,
        scal0,
        scal_equator,
        min_scal,
        in_r0,
        in_rpi2,
        in_both: in_r0 && in_rpi2 && min_scal >= 2.0,
    })
}

/// Classifies a grid of `(α, β)` using the closed endpoint values and a
/// profile of [`DEFAULT_GRID`] points per cell.
pub fn scan_region(
    n: u32,
    alpha_range: (f64, f64),
    beta_range: (f64, f64),
    resolution: usize,
    execution: Execution,
) -> Result<RegionGrid> {
    scan_region_with_grid(n, alpha_range, beta_range, resolution, DEFAULT_GRID, execution)
}

pub fn scan_region_with_grid(
    n: u32,
    alpha_range: (f64, f64),
    beta_range: (f64, f64),
    resolution: usize,
    profile_grid: usize,
    execution: Execution,
) -> Result<RegionGrid> {
    if n < 3 {
        return Err(invalid("n", format!("need n >= 3, got {n}")));
    }
    if resolution < 16 {
        return Err(invalid("resolution", format!("need at least 16, got {resolution}")));
    }
    check_range("alpha_range", alpha_range, -1.0 / 3.0, 1.0)?;
    check_range("beta_range", beta_range, -1.0, f64::INFINITY)?;
    let compute = |k: usize| {
        let alpha = node(alpha_range, resolution, k / resolution);
        let beta = node(beta_range, resolution, k % resolution);
        region_cell(n, alpha, beta, profile_grid)
    };
    let total = resolution * resolution;
    let cells = match execution {
        Execution::Serial => (0..total).map(compute).collect::<Result<Vec<_>>>()?,
        Execution::Parallel => (0..total).into_par_iter().map(compute).collect::<Result<Vec<_>>>()?,
    };
    Ok(RegionGrid {
        n,
        alpha_range,
        beta_range,
        resolution,
        profile_grid,
        cells,
    })
}

/// `(scal0 − 2, scal_equator − 2)`.
pub fn corner_residual(n: u32, alpha: f64, beta: f64) -> Result<[f64; 2]> {
    let params = WarpFamilyParams::new(n, alpha, beta)?;
    Ok([
        scal_pole_closed_form(&params)? - 2.0,
        scal_equator_closed_form(&params)? - 2.0,
    ])
}

/// Uniform 5×5 lattice over a rectangle, endpoints included.
pub fn seed_lattice(alpha_range: (f64, f64), beta_range: (f64, f64)) -> Vec<(f64, f64)> {
    (0..5)
        .flat_map(|i| (0..5).map(move |j| (node(alpha_range, 5, i), node(beta_range, 5, j))))
        .collect()
}

/// The trivial root and the expected nontrivial one, as extra seeds.
pub fn root_hints(n: u32) -> Vec<(f64, f64)> {
    vec![(0.0, 0.0), corner_root(n)]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CornerRoot {
    pub alpha: f64,
    pub beta: f64,
    pub residual: f64,
    /// Seeds that converged here.
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedFailure {
    pub seed: (f64, f64),
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerSolution {
    pub n: u32,
    /// Sorted by `α`, then `β`.
    pub roots: Vec<CornerRoot>,
    pub failures: Vec<SeedFailure>,
}

/// Newton's method on `(scal0 − 2, scal_equator − 2)` from each seed.
/// Failed seeds are recorded, not fatal.
pub fn solve_corner_system(n: u32, seeds: &[(f64, f64)]) -> Result<CornerSolution> {
    if n < 3 {
        return Err(invalid("n", format!("need n >= 3, got {n}")));
    }
    let newton = Newton2::default();
    let f = |x: [f64; 2]| corner_residual(n, x[0], x[1]).unwrap_or([f64::NAN; 2]);
    let admissible = |x: [f64; 2]| WarpFamilyParams::new(n, x[0], x[1]).is_ok();
    let mut roots: Vec<CornerRoot> = Vec::new();
    let mut failures = Vec::new();
    for &seed in seeds {
        let fail = |reason: String| SeedFailure { seed, reason };
        let x = match newton.solve(f, admissible, [seed.0, seed.1]) {
            NewtonOutcome::Converged { x, .. } => x,
            NewtonOutcome::Singular { at } => {
                failures.push(fail(format!("singular Jacobian at ({}, {})", at[0], at[1])));
                continue;
            }
            NewtonOutcome::LeftDomain { at } => {
                failures.push(fail(format!("left the window at ({}, {})", at[0], at[1])));
                continue;
            }
            NewtonOutcome::Exhausted { at, residual } => {
                failures.push(fail(format!(
                    "no convergence, residual {residual} at ({}, {})",
                    at[0], at[1]
                )));
                continue;
            }
        };
        let fx = f(x);
        let residual = fx[0].abs().max(fx[1].abs());
        if !(residual < ROOT_RESIDUAL) {
            failures.push(fail(format!("residual {residual} above {ROOT_RESIDUAL}")));
            continue;
        }
        match roots
            .iter_mut()
            .find(|r| (r.alpha - x[0]).hypot(r.beta - x[1]) < ROOT_DEDUP_DISTANCE)
        {
            Some(root) => {
                root.hits += 1;
                if residual < root.residual {
                    root.alpha = x[0];
                    root.beta = x[1];
                    root.residual = residual;
                }
            }
            None => roots.push(CornerRoot {
                alpha: x[0],
                beta: x[1],
                residual,
                hits: 1,
            }),
        }
    }
    roots.sort_by(|p, q| p.alpha.total_cmp(&q.alpha).then(p.beta.total_cmp(&q.beta)));
    Ok(CornerSolution { n, roots, failures })
}

/// Evidence that a family member beats the product metric: curvature above
/// 2 everywhere with diameter still `π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CounterexampleCertificate {
    pub n: u32,
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub min_scal: f64,
    pub diameter: f64,
    /// `min_scal − 2`.
    pub margin: f64,
    pub valid: bool,
}

/// Certificate for the point `s` of the segment towards the corner root.
pub fn certify_counterexample(n: u32, s: f64) -> Result<CounterexampleCertificate> {
    let params = WarpFamilyParams::from_segment(n, s)?;
    let min_scal = family_min_scal(&params, DEFAULT_GRID)?;
    let a = params.a();
    let diameter = diameter(&Surface::new(&a), CERTIFICATE_DIAMETER_DENSITY)?;
    let margin = min_scal - 2.0;
    Ok(CounterexampleCertificate {
        n,
        s,
        alpha: params.alpha,
        beta: params.beta,
        min_scal,
        diameter,
        margin,
        valid: margin > 0.0 && diameter >= PI - DIAMETER_TOLERANCE,
    })
}

/// [`certify_counterexample`] at each `s ∈ [0, 1]`, in input order.
pub fn sweep_segment(n: u32, s_values: &[f64]) -> Result<Vec<CounterexampleCertificate>> {
    for &s in s_values {
        if !(0.0..=1.0).contains(&s) {
            return Err(invalid("s", format!("{s} outside [0, 1]")));
        }
    }
    s_values.iter().map(|&s| certify_counterexample(n, s)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrendPoint {
    pub s: f64,
    pub min_scal: f64,
    pub inj_estimate: f64,
    /// `√(min_scal/(n(n−1))) · inj_estimate`.
    pub rescaled_inj: f64,
}

/// Sampling used by [`rescaled_inj_trend`].
pub const TREND_ANGULAR_SAMPLES: usize = 16;
pub const TREND_BASE_SAMPLES: usize = 8;

/// Curvature-normalised injectivity radius along the segment.
pub fn rescaled_inj_trend(n: u32, s_values: &[f64]) -> Result<Vec<TrendPoint>> {
    if s_values.first() != Some(&0.0) {
        return Err(invalid("s_values", "must start at 0"));
    }
    if s_values.windows(2).any(|w| !(w[0] < w[1])) || s_values.iter().any(|&s| s > 1.0) {
        return Err(invalid("s_values", "must increase strictly within [0, 1]"));
    }
    s_values
        .iter()
        .map(|&s| {
            let params = WarpFamilyParams::from_segment(n, s)?;
            let min_scal = family_min_scal(&params, DEFAULT_GRID)?;
            let a = params.a();
            let report =
                injectivity_radius(&Surface::new(&a), TREND_ANGULAR_SAMPLES, TREND_BASE_SAMPLES)?;
            Ok(TrendPoint {
                s,
                min_scal,
                inj_estimate: report.inj_estimate,
                rescaled_inj: scaled_inj(min_scal, n, report.inj_estimate)?,
            })
        })
        .collect()
}
