//! Geodesics and injectivity radius on spheres of revolution
//! `dr² + a(r)² dφ²`, `r ∈ [0, L]`, with poles at `r = 0` and `r = L`.

mod conjugate;
mod distance;
mod geodesic;
mod injectivity;
mod projection;

pub use conjugate::conjugate_radius;
pub use distance::{diameter, distance, GeodesicFan, SWEEP_DIRECTIONS};
pub use geodesic::{shoot_geodesic, GeodesicPath, GeodesicState, SegmentKind, Shooter};
pub use injectivity::{closed_parallels, injectivity_radius, ClosedParallel, InjectivityReport, Witness};
pub use projection::{
    curve_lengths, projection_nonexpansion_check, CurveKind, ProjectionCheck, WarpedCurve,
};

use std::f64::consts::PI;

use serde::Serialize;

use crate::curvature::{pole_gauss_curvature, Pole};
use crate::radial::RadialFunction;

/// Half-width of the polar collars, where geodesics are continued in
/// normal coordinates instead of the singular polar chart.
pub const COLLAR: f64 = 1e-3;

/// A point in polar coordinates; `phi` is ignored at the poles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub r: f64,
    pub phi: f64,
}

impl SurfacePoint {
    pub const fn new(r: f64, phi: f64) -> Self {
        Self { r, phi }
    }
}

/// A rotationally symmetric sphere `dr² + a(r)² dφ²`.
pub struct Surface<'a> {
    profile: &'a dyn RadialFunction,
    meridian: f64,
    pole_curvature: [f64; 2],
}

impl<'a> Surface<'a> {
    /// Sphere whose poles sit at `0` and `π`.
    pub fn new(profile: &'a dyn RadialFunction) -> Self {
        Self::with_meridian(profile, PI)
    }

    /// Sphere whose profile vanishes at `0` and `meridian`.
    pub fn with_meridian(profile: &'a dyn RadialFunction, meridian: f64) -> Self {
        let pole_curvature = [
            pole_gauss_curvature(profile, 0.0),
            pole_gauss_curvature(profile, meridian),
        ];
        Self {
            profile,
            meridian,
            pole_curvature,
        }
    }

    pub fn profile(&self) -> &dyn RadialFunction {
        self.profile
    }

    /// Length `L` of a meridian from pole to pole.
    pub fn meridian(&self) -> f64 {
        self.meridian
    }

    pub fn pole_curvature(&self, pole: Pole) -> f64 {
        match pole {
            Pole::North => self.pole_curvature[0],
            Pole::South => self.pole_curvature[1],
        }
    }

    /// Gauss curvature `−a''/a` away from the poles.
    pub fn gauss_curvature(&self, r: f64) -> f64 {
        let j = self.profile.jet(r);
        -j.d2 / j.value
    }

    /// The pole whose collar contains `r`, if any.
    pub fn collar_of(&self, r: f64) -> Option<Pole> {
        if r <= COLLAR {
            Some(Pole::North)
        } else if r >= self.meridian - COLLAR {
            Some(Pole::South)
        } else {
            None
        }
    }

    /// A topological embedding into the unit sphere of `R³`. Distances in
    /// it are only used to detect coincidence of points.
    pub fn embed(&self, p: SurfacePoint) -> [f64; 3] {
        let theta = PI * p.r / self.meridian;
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = p.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Length of the broken path through the nearer pole; an upper bound
    /// for the distance between points at radii `r1` and `r2`.
    pub fn via_pole_bound(&self, r1: f64, r2: f64) -> f64 {
        (r1 + r2).min(2.0 * self.meridian - r1 - r2)
    }
}

pub(crate) fn chord(x: [f64; 3], y: [f64; 3]) -> f64 {
    ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt()
}
