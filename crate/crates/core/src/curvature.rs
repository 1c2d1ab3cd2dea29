//! Scalar curvature of `dr² + a(r)² dφ² + b(r)² |dx|²` on `S² × T^{n−2}`.
//!
//! With `A = a'/a` and `B = b'/b` the scalar curvature is
//!
//! ```text
//! scal = −2(A' + (n−2)B') − (A² + (n−2)B²) − (A + (n−2)B)²
//! ```
//!
//! The expression has a removable singularity at the poles, where `a`
//! vanishes; [`scal_pole_limit`] supplies the limit there.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numerics::compensated_sum;
use crate::radial::{Jet, RadialFunction, SineSquaredBump, ThirdModeSine};

/// Width of the excluded collar around each pole in sampled profiles.
pub const POLE_COLLAR: f64 = 1e-3;
/// Default number of radial samples in a profile.
pub const DEFAULT_GRID: usize = 2001;
/// Step used to difference `a''` across a pole.
const THIRD_DERIVATIVE_STEP: f64 = 1e-4;
/// Tolerance on the smoothness conditions at a pole.
const POLE_TOL: f64 = 1e-8;

/// Parameters of the two-mode deformation
/// `a = (sin r + α sin 3r)/(1 + 3α)`, `b = 1 + β sin² r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WarpFamilyParams {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    /// Position along the segment from `(0, 0)` to the corner root, when
    /// the parameters were built from one.
    pub s: Option<f64>,
}

impl WarpFamilyParams {
    /// Validates `n ≥ 3`, `α ∈ (−1/3, 1)` and `β ∈ (−1, ∞)`.
    pub fn new(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        if n < 3 {
            return Err(invalid("n", format!("need n >= 3, got {n}")));
        }
        if !(alpha > -1.0 / 3.0 && alpha < 1.0) {
            return Err(invalid("alpha", format!("{alpha} outside (-1/3, 1)")));
        }
        if !(beta > -1.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("{beta} outside (-1, inf)")));
        }
        Ok(Self {
            n,
            alpha,
            beta,
            s: None,
        })
    }

    /// The point `s · corner(n)` of the segment between the two corner roots.
    pub fn from_segment(n: u32, s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(invalid("s", format!("need s >= 0, got {s}")));
        }
        let (ca, cb) = corner_root(n);
        let mut p = Self::new(n, s * ca, s * cb)?;
        p.s = Some(s);
        Ok(p)
    }

    pub fn a(&self) -> ThirdModeSine {
        ThirdModeSine { alpha: self.alpha }
    }

    pub fn b(&self) -> SineSquaredBump {
        SineSquaredBump { beta: self.beta }
    }
}

/// Nontrivial solution `((n−2)/(3(3n−2)), 1/(2(n−1)))` of the system
/// `scal(0) = scal(π/2) = 2`.
pub fn corner_root(n: u32) -> (f64, f64) {
    let n = f64::from(n);
    ((n - 2.0) / (3.0 * (3.0 * n - 2.0)), 1.0 / (2.0 * (n - 1.0)))
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension n = {n} < 2")));
    }
    Ok(())
}

fn scal_from_jets(a: Jet, b: Jet, n: u32) -> f64 {
    let m = f64::from(n) - 2.0;
    let big_a = a.d1 / a.value;
    let big_b = b.d1 / b.value;
    let da = a.d2 / a.value - big_a * big_a;
    let db = b.d2 / b.value - big_b * big_b;
    let mixed = big_a + m * big_b;
    compensated_sum([
        -2.0 * da,
        -2.0 * m * db,
        -big_a * big_a,
        -m * big_b * big_b,
        -mixed * mixed,
    ])
}

/// Scalar curvature of `dr² + a² dφ² + b² |dx|²` at an interior point `r`.
pub fn scal_multiwarp(a: &dyn RadialFunction, b: &dyn RadialFunction, n: u32, r: f64) -> Result<f64> {
    check_dimension(n)?;
    let ja = a.jet(r);
    if ja.value == 0.0 {
        return Err(Error::Domain(format!("a({r}) = 0: use the pole limit")));
    }
    let jb = if n > 2 {
        let jb = b.jet(r);
        if jb.value == 0.0 {
            return Err(Error::Domain(format!("b({r}) = 0")));
        }
        jb
    } else {
        Jet::new(1.0, 0.0, 0.0)
    };
    Ok(scal_from_jets(ja, jb, n))
}

/// Scalar curvature of the two-mode family at `r ∈ (0, π)`.
pub fn family_scal(params: &WarpFamilyParams, r: f64) -> Result<f64> {
    scal_multiwarp(&params.a(), &params.b(), params.n, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pole {
    North,
    South,
}

/// `f` seen from the pole at `pole_at`, as a function of the distance to it.
struct Reflected<'a> {
    inner: &'a dyn RadialFunction,
    pole_at: f64,
    sign: f64,
}

impl RadialFunction for Reflected<'_> {
    fn jet(&self, rho: f64) -> Jet {
        let j = self.inner.jet(self.pole_at + self.sign * rho);
        Jet::new(j.value, self.sign * j.d1, j.d2)
    }
}

/// Gauss curvature `−a'''(p)/a'(p)` at a pole `p` of a profile, with the
/// third derivative obtained by central differencing `a''` at steps `h` and
/// `h/2`, combined by one Richardson step.
pub fn pole_gauss_curvature(a: &dyn RadialFunction, pole_at: f64) -> f64 {
    let central = |h: f64| (a.jet(pole_at + h).d2 - a.jet(pole_at - h).d2) / (2.0 * h);
    let h = THIRD_DERIVATIVE_STEP;
    let d3 = (4.0 * central(h / 2.0) - central(h)) / 3.0;
    -d3 / a.jet(pole_at).d1
}

/// Limit of [`scal_multiwarp`] as `r → 0⁺`:
/// `2K(0) − 4(n−2) b''(0)/b(0)` with `K(0) = −a'''(0)/a'(0)`.
pub fn scal_pole_limit(a: &dyn RadialFunction, b: &dyn RadialFunction, n: u32) -> Result<f64> {
    check_dimension(n)?;
    let ja = a.jet(0.0);
    if ja.value.abs() > POLE_TOL {
        return Err(Error::Domain(format!("a(0) = {} is not zero", ja.value)));
    }
    if (ja.d1 - 1.0).abs() > POLE_TOL {
        return Err(Error::Domain(format!("a'(0) = {} is not one", ja.d1)));
    }
    let gauss = pole_gauss_curvature(a, 0.0);
    if n == 2 {
        return Ok(2.0 * gauss);
    }
    let jb = b.jet(0.0);
    if jb.d1.abs() > POLE_TOL {
        return Err(Error::Domain(format!(
            "b'(0) = {} is not zero: metric not smooth at the pole",
            jb.d1
        )));
    }
    if jb.value == 0.0 {
        return Err(Error::Domain("b(0) = 0".into()));
    }
    let m = f64::from(n) - 2.0;
    Ok(2.0 * gauss - 4.0 * m * jb.d2 / jb.value)
}

/// Pole limit at either end of a meridian of length `meridian`.
pub fn scal_pole_limit_at(
    a: &dyn RadialFunction,
    b: &dyn RadialFunction,
    n: u32,
    pole: Pole,
    meridian: f64,
) -> Result<f64> {
    let (pole_at, sign) = match pole {
        Pole::North => (0.0, 1.0),
        Pole::South => (meridian, -1.0),
    };
    let ra = Reflected {
        inner: a,
        pole_at,
        sign,
    };
    let rb = Reflected {
        inner: b,
        pole_at,
        sign,
    };
    scal_pole_limit(&ra, &rb, n)
}

fn check_window(params: &WarpFamilyParams) -> Result<()> {
    WarpFamilyParams::new(params.n, params.alpha, params.beta).map(|_| ())
}

/// Closed form of the family's curvature at the pole:
/// `(2 − 4β(n−2)(6α+2) + 54α) / (1 + 3α)`.
pub fn scal_pole_closed_form(params: &WarpFamilyParams) -> Result<f64> {
    check_window(params)?;
    let (a, b, n) = (params.alpha, params.beta, f64::from(params.n));
    Ok((2.0 - 4.0 * b * (n - 2.0) * (6.0 * a + 2.0) + 54.0 * a) / (1.0 + 3.0 * a))
}

/// Closed form of the family's curvature on the equator:
/// `2(1 − 9α − 3β − 5αβ + 2n(1−α)β) / ((1−α)(1+β))`.
pub fn scal_equator_closed_form(params: &WarpFamilyParams) -> Result<f64> {
    check_window(params)?;
    let (a, b, n) = (params.alpha, params.beta, f64::from(params.n));
    let numerator = compensated_sum([
        1.0,
        -9.0 * a,
        -3.0 * b,
        -5.0 * a * b,
        2.0 * n * (1.0 - a) * b,
    ]);
    Ok(2.0 * numerator / ((1.0 - a) * (1.0 + b)))
}

/// `∂ₛ scal |_{s=0}` along the segment towards the corner root:
/// `(n−2)((7n−10) + (5n−14) cos 2r) / (3(n−1)(3n−2))`.
pub fn scal_s_derivative(n: u32, r: f64) -> f64 {
    let nf = f64::from(n);
    if n < 2 {
        return f64::NAN;
    }
    (nf - 2.0) * ((7.0 * nf - 10.0) + (5.0 * nf - 14.0) * (2.0 * r).cos())
        / (3.0 * (nf - 1.0) * (3.0 * nf - 2.0))
}

/// Lower bound `(n−2)(2n+4) / (3(n−1)(3n−2))` of [`scal_s_derivative`].
pub fn s_derivative_lower_bound(n: u32) -> f64 {
    let nf = f64::from(n);
    (nf - 2.0) * (2.0 * nf + 4.0) / (3.0 * (nf - 1.0) * (3.0 * nf - 2.0))
}

/// Difference between the warped curvature of `dr² + a² dφ² + f² dθ²` and
/// `scal − 2Δf/f` computed on the surface `dr² + a² dφ²`. Vanishes
/// identically; used as a consistency check.
pub fn fcs_identity_residual(a: &dyn RadialFunction, f: &dyn RadialFunction, r: f64) -> Result<f64> {
    let warped = scal_multiwarp(a, f, 3, r)?;
    let ja = a.jet(r);
    let jf = f.jet(r);
    let surface = -2.0 * ja.d2 / ja.value;
    let laplacian = jf.d2 + (ja.d1 / ja.value) * jf.d1;
    Ok(warped - (surface - 2.0 * laplacian / jf.value))
}

/// Sampled scalar curvature over `(0, π)` plus the two pole limits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Limits at `r = 0` and `r = π`.
    pub pole_values: [f64; 2],
    pub min_value: f64,
    pub argmin: f64,
}

impl CurvatureProfile {
    /// `(r, scal)` pairs from pole to pole.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        std::iter::once((0.0, self.pole_values[0]))
            .chain(self.grid.iter().copied().zip(self.values.iter().copied()))
            .chain(std::iter::once((PI, self.pole_values[1])))
    }
}

/// Uniform radial grid of `grid_size` points on `[ε, π − ε]`. For odd sizes
/// the middle sample is exactly `π/2`.
pub fn radial_grid(grid_size: usize) -> Vec<f64> {
    let lo = POLE_COLLAR;
    let hi = PI - POLE_COLLAR;
    let last = (grid_size - 1) as f64;
    (0..grid_size)
        .map(|i| {
            if 2 * i + 1 == grid_size {
                FRAC_PI_2
            } else {
                lo + (hi - lo) * (i as f64 / last)
            }
        })
        .collect()
}

pub fn curvature_profile(params: &WarpFamilyParams, grid_size: usize) -> Result<CurvatureProfile> {
    if grid_size < 3 {
        return Err(invalid("grid_size", format!("need at least 3, got {grid_size}")));
    }
    let (a, b) = (params.a(), params.b());
    let grid = radial_grid(grid_size);
    let values = grid
        .iter()
        .map(|&r| scal_multiwarp(&a, &b, params.n, r))
        .collect::<Result<Vec<_>>>()?;
    let pole_values = [
        scal_pole_limit_at(&a, &b, params.n, Pole::North, PI)?,
        scal_pole_limit_at(&a, &b, params.n, Pole::South, PI)?,
    ];
    let mut min_value = pole_values[0];
    let mut argmin = 0.0;
    for (&r, &v) in grid.iter().zip(&values) {
        if v < min_value {
            min_value = v;
            argmin = r;
        }
    }
    if pole_values[1] < min_value {
        min_value = pole_values[1];
        argmin = PI;
    }
    Ok(CurvatureProfile {
        grid,
        values,
        pole_values,
        min_value,
        argmin,
    })
}

/// Maximum deviation of the band model's curvature from `n(n−1)` over
/// `samples` uniform points of `[−π/n + margin, π/n − margin]`.
pub fn band_model_residual(n: u32, samples: usize, margin: f64) -> Result<f64> {
    check_dimension(n)?;
    let band = crate::radial::BandProfile { n };
    let w = band.half_width() - margin;
    if !(margin > 0.0) || w <= 0.0 || samples < 2 {
        return Err(invalid("margin", "band interior is empty"));
    }
    let target = f64::from(n) * (f64::from(n) - 1.0);
    let mut worst = 0.0_f64;
    for i in 0..samples {
        let t = -w + 2.0 * w * i as f64 / (samples - 1) as f64;
        let s = scal_multiwarp(&band, &band, n, t)?;
        worst = worst.max((s - target).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{BandProfile, Constant, ScaledSine, TrigPolynomial};

    #[test]
    fn round_sphere_times_circle() {
        let s = scal_multiwarp(&ScaledSine::UNIT, &Constant(1.0), 3, FRAC_PI_2).unwrap();
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn band_model_constant_curvature() {
        let band = BandProfile { n: 4 };
        for t in [-0.7, -0.3, 0.0, 0.1, 0.6] {
            let s = scal_multiwarp(&band, &band, 4, t).unwrap();
            assert!((s - 12.0).abs() < 1e-10, "{t}: {s}");
        }
    }

    #[test]
    fn corner_point_has_equator_curvature_two() {
        let p = WarpFamilyParams::new(4, 1.0 / 15.0, 1.0 / 6.0).unwrap();
        assert!((family_scal(&p, FRAC_PI_2).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn matches_extended_precision_expansion() {
        // independently expanded formula evaluated with 50 significant digits
        let p = WarpFamilyParams::new(5, 0.05, 0.05).unwrap();
        let s = family_scal(&p, 1.0).unwrap();
        assert!((s - 2.240_978_975_009_163_3).abs() < 1e-9);
    }

    #[test]
    fn two_dimensional_case_is_twice_gauss_curvature() {
        let a = ThirdModeSine { alpha: 0.2 };
        for r in [0.3, 1.0, 2.5] {
            let ja = a.jet(r);
            let s = scal_multiwarp(&a, &Constant(0.0), 2, r).unwrap();
            assert!((s + 2.0 * ja.d2 / ja.value).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(scal_multiwarp(&ScaledSine::UNIT, &Constant(1.0), 3, 0.0).is_err());
        assert!(scal_multiwarp(&ScaledSine::UNIT, &Constant(0.0), 3, 1.0).is_err());
        assert!(scal_multiwarp(&ScaledSine::UNIT, &Constant(1.0), 1, 1.0).is_err());
        // odd b: b'(0) = 1
        let bad_b = TrigPolynomial {
            constant: 1.0,
            cos: vec![],
            sin: vec![1.0],
        };
        assert!(scal_pole_limit(&ScaledSine::UNIT, &bad_b, 3).is_err());
        assert!(scal_pole_limit(&ScaledSine::new(2.0), &Constant(1.0), 3).is_ok());
        assert!(scal_pole_limit(&Constant(1.0), &Constant(1.0), 3).is_err());
    }

    #[test]
    fn pole_limit_round_product() {
        let p = WarpFamilyParams::new(6, 0.0, 0.0).unwrap();
        let v = scal_pole_limit(&p.a(), &p.b(), 6).unwrap();
        assert!((v - 2.0).abs() < 1e-7);
    }

    #[test]
    fn pole_limit_zero_for_quarter_beta() {
        let p = WarpFamilyParams::new(3, 0.0, 0.25).unwrap();
        let v = scal_pole_limit(&p.a(), &p.b(), 3).unwrap();
        assert!(v.abs() < 1e-6, "{v}");
        let near = family_scal(&p, 1e-4).unwrap();
        assert!(near.abs() < 1e-6, "{near}");
        assert!(scal_pole_closed_form(&p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn pole_limit_matches_printed_closed_form() {
        for (n, a, b) in [(3, 0.1, 0.3), (5, -0.2, 1.5), (8, 0.6, -0.5)] {
            let p = WarpFamilyParams::new(n, a, b).unwrap();
            let lim = scal_pole_limit(&p.a(), &p.b(), n).unwrap();
            let closed = scal_pole_closed_form(&p).unwrap();
            assert!((lim - closed).abs() < 1e-6, "{n} {a} {b}: {lim} vs {closed}");
            let south = scal_pole_limit_at(&p.a(), &p.b(), n, Pole::South, PI).unwrap();
            assert!((south - closed).abs() < 1e-6);
        }
    }

    #[test]
    fn equator_closed_form_examples() {
        for n in 3..9 {
            assert_eq!(scal_equator_closed_form(&WarpFamilyParams::new(n, 0.0, 0.0).unwrap()).unwrap(), 2.0);
        }
        let corner = WarpFamilyParams::from_segment(6, 1.0).unwrap();
        assert!((scal_equator_closed_form(&corner).unwrap() - 2.0).abs() < 1e-14);
        // 14/9, from the retyped formula in 50-digit arithmetic
        let p = WarpFamilyParams::new(4, 0.1, 0.2).unwrap();
        assert!((scal_equator_closed_form(&p).unwrap() - 14.0 / 9.0).abs() < 1e-14);
        assert!((family_scal(&p, FRAC_PI_2).unwrap() - 14.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn s_derivative_examples() {
        assert!((scal_s_derivative(3, FRAC_PI_2) - 5.0 / 21.0).abs() < 1e-15);
        assert!((s_derivative_lower_bound(3) - 5.0 / 21.0).abs() < 1e-15);
        for r in [0.0, 0.4, 1.9] {
            assert_eq!(scal_s_derivative(2, r), 0.0);
        }
    }

    #[test]
    fn s_derivative_matches_central_difference_n3() {
        let h = 1e-5;
        let r = FRAC_PI_2;
        let plus = family_scal(&WarpFamilyParams::from_segment(3, h).unwrap(), r).unwrap();
        let minus_params = {
            let (ca, cb) = corner_root(3);
            WarpFamilyParams::new(3, -h * ca, -h * cb).unwrap()
        };
        let minus = family_scal(&minus_params, r).unwrap();
        let fd = (plus - minus) / (2.0 * h);
        assert!((fd - 5.0 / 21.0).abs() < 1e-5, "{fd}");
    }

    #[test]
    fn fcs_residual_examples() {
        let a = ScaledSine::UNIT;
        assert!(fcs_identity_residual(&a, &Constant(1.0), 1.0).unwrap().abs() < 1e-14);
        let f = FnRadialSinSq;
        assert!(fcs_identity_residual(&a, &f, 0.7).unwrap().abs() < 1e-9);
        let p = WarpFamilyParams::new(3, 0.02, 0.05).unwrap();
        assert!(fcs_identity_residual(&p.a(), &p.b(), 2.0).unwrap().abs() < 1e-9);
    }

    /// 1 + sin²(r)/4
    struct FnRadialSinSq;
    impl RadialFunction for FnRadialSinSq {
        fn jet(&self, r: f64) -> Jet {
            let s = r.sin();
            Jet::new(1.0 + 0.25 * s * s, 0.25 * (2.0 * r).sin(), 0.5 * (2.0 * r).cos())
        }
    }

    #[test]
    fn profile_of_round_product_is_flat() {
        for n in [3, 4, 7] {
            let p = WarpFamilyParams::from_segment(n, 0.0).unwrap();
            let prof = curvature_profile(&p, 101).unwrap();
            assert!((prof.min_value - 2.0).abs() < 1e-10);
            assert!(prof.values.iter().all(|v| (v - 2.0).abs() < 1e-10));
            assert!(prof.pole_values.iter().all(|v| (v - 2.0).abs() < 1e-7));
        }
    }

    #[test]
    fn profile_minimum_at_pole_or_equator() {
        let p = WarpFamilyParams::new(6, 0.05, 0.08).unwrap();
        let prof = curvature_profile(&p, DEFAULT_GRID).unwrap();
        let at_pole = prof.argmin == 0.0 || prof.argmin == PI;
        let at_equator = (prof.argmin - FRAC_PI_2).abs() < 1e-12;
        assert!(at_pole || at_equator, "argmin {}", prof.argmin);
        assert!(prof.samples().all(|(_, v)| v >= prof.min_value));
    }

    #[test]
    fn corner_profile_touches_two() {
        let p = WarpFamilyParams::from_segment(4, 1.0).unwrap();
        let prof = curvature_profile(&p, DEFAULT_GRID).unwrap();
        assert!((prof.min_value - 2.0).abs() < 1e-8);
        assert!((prof.pole_values[0] - 2.0).abs() < 1e-8);
        assert!((family_scal(&p, FRAC_PI_2).unwrap() - 2.0).abs() < 1e-8);
        // denser interior check
        let dense = curvature_profile(&p, 20_001).unwrap();
        assert!(dense.values.iter().all(|&v| v >= 2.0 - 1e-9));
    }

    #[test]
    fn grid_and_window_validation() {
        let p = WarpFamilyParams::new(4, 0.0, 0.0).unwrap();
        assert!(curvature_profile(&p, 2).is_err());
        assert!(WarpFamilyParams::new(4, -0.4, 0.0).is_err());
        assert!(WarpFamilyParams::new(4, 1.0, 0.0).is_err());
        assert!(WarpFamilyParams::new(4, 0.0, -1.0).is_err());
        assert!(WarpFamilyParams::new(2, 0.0, 0.0).is_err());
        assert!(WarpFamilyParams::from_segment(4, -0.1).is_err());
        let g = radial_grid(2001);
        assert_eq!(g[1000], FRAC_PI_2);
        assert_eq!(g[0], POLE_COLLAR);
    }
}
