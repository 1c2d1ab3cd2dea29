//! Closed-form diameter, band-width and injectivity bounds.

mod table;

pub use table::{table1, table1_rows, BoundRecord, Expr, Factor, TableRow};

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numerics::optimize::golden_section;
use crate::radial::BandProfile;

fn check_n(n: u32, min: u32) -> Result<f64> {
    if n < min {
        return Err(invalid("n", format!("need n >= {min}, got {n}")));
    }
    Ok(f64::from(n))
}

/// Upper bound `π √(n(n−1)/s̄)` on the conjugacy radius of an `n`-manifold
/// with mean scalar curvature `s̄`.
pub fn green_conjugacy_bound(n: u32, mean_scal: f64) -> Result<f64> {
    let nf = check_n(n, 2)?;
    if !(mean_scal > 0.0) {
        return Err(Error::Domain(format!("mean scalar curvature {mean_scal} must be positive")));
    }
    Ok(PI * (nf * (nf - 1.0) / mean_scal).sqrt())
}

/// Width bound `2π/n` for bands `[−1, 1] × T^{n−1}` with `scal ≥ n(n−1)`.
pub fn band_bound(n: u32) -> Result<f64> {
    let nf = check_n(n, 2)?;
    Ok(2.0 * PI / nf)
}

/// Distance between the boundary components of the extremal band
/// `(−π/n, π/n) × T^{n−1}`, `dt² + cos(nt/2)^{4/n} |dx|²`.
pub fn band_model_separation(n: u32) -> Result<f64> {
    check_n(n, 2)?;
    Ok(2.0 * BandProfile { n }.half_width())
}

/// Diameter bound `2π/n` for `(S², g)` carrying a warped `T^{n−2}` factor
/// with `scal ≥ n(n−1)`.
pub fn bonnet_myers_bound(n: u32) -> Result<f64> {
    let nf = check_n(n, 3)?;
    Ok(2.0 * PI / nf)
}

/// Curvature lower bound `δ = 6 − 8π² / (3 w²)` left over by a band of
/// width `w` in a 3-manifold with `scal ≥ 6`; positive iff `w > 2π/3`.
pub fn mu_bubble_delta(separation: f64) -> Result<f64> {
    if !(separation > 0.0) {
        return Err(Error::Domain(format!("separation {separation} must be positive")));
    }
    // 6(1 − t²) with t = (2π/3)/separation, so the threshold maps to 0 exactly
    let t = (2.0 * PI / 3.0) / separation;
    Ok(6.0 * (1.0 - t * t))
}

/// Diameter bound `2π / (3 √(δ/6))` for a surface whose warped circle
/// bundle has `scal ≥ δ`.
pub fn scaled_gbm_diam_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta {delta} must be positive")));
    }
    Ok(2.0 * PI / (3.0 * (delta / 6.0).sqrt()))
}

const DBAR_LO: f64 = 2.0 * PI / 3.0;
const DBAR_HI: f64 = PI;

/// Diameter threshold `D̄(r) = 2r + 2π / (3 √(1 − 4π²/(9r²)))` on
/// `(2π/3, π)`.
pub fn dbar(r: f64) -> Result<f64> {
    if !(r > DBAR_LO && r < DBAR_HI) {
        return Err(Error::Domain(format!("r = {r} outside (2pi/3, pi)")));
    }
    Ok(2.0 * r + 2.0 * PI / (3.0 * (1.0 - 4.0 * PI * PI / (9.0 * r * r)).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DbarResult {
    pub r_star: f64,
    pub d_star: f64,
    pub evaluations: usize,
}

/// Golden-section minimum of [`dbar`] over its whole domain.
pub fn minimize_dbar(tolerance: f64) -> Result<DbarResult> {
    minimize_dbar_in(DBAR_LO + 1e-6, DBAR_HI - 1e-6, tolerance)
}

/// Golden-section minimum of [`dbar`] on a bracket inside `(2π/3, π)`.
pub fn minimize_dbar_in(lo: f64, hi: f64, tolerance: f64) -> Result<DbarResult> {
    if !(tolerance > 0.0) {
        return Err(invalid("tolerance", "must be positive"));
    }
    for x in [lo, hi] {
        dbar(x)?;
    }
    let m = golden_section(|r| dbar(r).unwrap_or(f64::INFINITY), lo, hi, tolerance);
    Ok(DbarResult {
        r_star: m.x,
        d_star: m.value,
        evaluations: m.evaluations,
    })
}

/// Runs the chain `r ↦ D̄(r) ↦ δ(D̄(r) − 2r) ↦ diameter bound`, which
/// returns `r` exactly, and reports the round-off.
pub fn dbar_fixed_point_residual(r: f64) -> Result<f64> {
    let d = dbar(r)?;
    let delta = mu_bubble_delta(d - 2.0 * r)?;
    Ok(scaled_gbm_diam_bound(delta)? - r)
}

/// Injectivity radius rescaled to the curvature of the unit sphere,
/// `√(scal / (n(n−1))) · inj`.
pub fn scaled_inj(scal_min: f64, n: u32, inj: f64) -> Result<f64> {
    let nf = check_n(n, 2)?;
    if !(scal_min > 0.0) {
        return Err(Error::Domain(format!("scalar curvature {scal_min} must be positive")));
    }
    if !(inj >= 0.0) {
        return Err(Error::Domain(format!("injectivity radius {inj} must be non-negative")));
    }
    Ok((scal_min / (nf * (nf - 1.0))).sqrt() * inj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn green_examples() {
        assert!((green_conjugacy_bound(3, 6.0).unwrap() - PI).abs() < 1e-15);
        assert!((green_conjugacy_bound(7, 42.0).unwrap() - PI).abs() < 1e-15);
        assert!((green_conjugacy_bound(3, 24.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(green_conjugacy_bound(3, 0.0).is_err());
        assert!(green_conjugacy_bound(3, -1.0).is_err());
    }

    #[test]
    fn band_and_bonnet_myers() {
        assert_eq!(band_bound(2).unwrap(), PI);
        assert_eq!(band_bound(3).unwrap(), 2.0 * PI / 3.0);
        assert_eq!(band_bound(7).unwrap(), 2.0 * PI / 7.0);
        for n in 2..=12 {
            assert_eq!(band_model_separation(n).unwrap(), band_bound(n).unwrap());
        }
        assert!((band_model_separation(4).unwrap() - PI / 2.0).abs() < 1e-15);
        for n in [3, 5, 7] {
            assert_eq!(bonnet_myers_bound(n).unwrap(), band_bound(n).unwrap());
        }
        assert!(bonnet_myers_bound(2).is_err());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(mu_bubble_delta(band_bound(3).unwrap()).unwrap(), 0.0);
        assert!((mu_bubble_delta(4.0 * PI / 3.0).unwrap() - 4.5).abs() < 1e-14);
        assert!((mu_bubble_delta(1e9).unwrap() - 6.0).abs() < 1e-12);
        assert!(mu_bubble_delta(0.0).is_err());
    }

    #[test]
    fn scaled_diameter_examples() {
        assert!((scaled_gbm_diam_bound(6.0).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((scaled_gbm_diam_bound(1.5).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((scaled_gbm_diam_bound(24.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!(scaled_gbm_diam_bound(0.0).is_err());
    }

    #[test]
    fn dbar_examples() {
        assert!((dbar(5.0 * PI / 6.0).unwrap() - 25.0 * PI / 9.0).abs() < 1e-12);
        // 50-digit evaluation of the defining expression
        assert!((dbar(0.99 * PI).unwrap() - 9.053_382_332_144_567).abs() < 1e-12);
        assert!(dbar(2.0 * PI / 3.0 + 1e-6).unwrap() > 1000.0);
        assert!(dbar(2.0 * PI / 3.0).is_err());
        assert!(dbar(PI).is_err());
    }

    #[test]
    fn dbar_minimum() {
        let m = minimize_dbar(1e-6).unwrap();
        assert!(m.d_star >= 2.774 * PI && m.d_star <= 2.776 * PI);
        assert!(m.r_star >= 0.850 * PI && m.r_star <= 0.852 * PI);
        assert!(m.d_star <= 25.0 * PI / 9.0);
        // root of D̄' located with 50-digit arithmetic
        assert!((m.r_star - 0.851_132_715_842_035_1 * PI).abs() < 1e-6);
    }

    #[test]
    fn fixed_point_examples() {
        for r in [5.0 * PI / 6.0, 0.75 * PI, 0.9 * PI] {
            assert!(dbar_fixed_point_residual(r).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn scaled_inj_examples() {
        assert!((scaled_inj(6.0, 3, PI).unwrap() - PI).abs() < 1e-15);
        for n in 3..10 {
            let nf = f64::from(n);
            let v = scaled_inj(2.0, n, PI).unwrap();
            assert!((v - (2.0 / (nf * (nf - 1.0))).sqrt() * PI).abs() < 1e-15);
            let w = scaled_inj(nf, n, PI).unwrap();
            assert!((w - PI / (nf - 1.0).sqrt()).abs() < 1e-14);
        }
        assert!(scaled_inj(0.0, 3, 1.0).is_err());
    }
}
