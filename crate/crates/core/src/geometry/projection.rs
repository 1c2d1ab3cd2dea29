//! Lengths of curves on `S² × T^{n−2}` under `g̃ = g + b² |dx|²` versus the
//! lengths of their projections to `(S², g)`. The projection never
//! increases length, since the integrand only loses the `b² |x'|²` term.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numerics::quadrature::{composite_nodes, integrate};
use crate::radial::{RadialFunction, TrigPolynomial};

/// A closed curve `t ↦ (r(t), φ(t), x(t))`, `t ∈ [0, 1]`, with coordinates
/// given as trigonometric polynomials in `2πt`.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedCurve {
    pub r: TrigPolynomial,
    pub phi: TrigPolynomial,
    pub torus: Vec<TrigPolynomial>,
}

fn eval(p: &TrigPolynomial, t: f64) -> (f64, f64) {
    let j = p.jet(TAU * t);
    (j.value, TAU * j.d1)
}

impl WarpedCurve {
    /// Squared speeds `(|ċ|²_g̃, |π∘ċ|²_g)` at `t`.
    fn speeds(&self, a: &dyn RadialFunction, b: &dyn RadialFunction, t: f64) -> (f64, f64) {
        let (r, dr) = eval(&self.r, t);
        let (_, dphi) = eval(&self.phi, t);
        let av = a.value(r);
        let base = dr * dr + av * av * dphi * dphi;
        let bv = b.value(r);
        let fiber: f64 = self
            .torus
            .iter()
            .map(|x| {
                let (_, dx) = eval(x, t);
                dx * dx
            })
            .sum();
        (base + bv * bv * fiber, base)
    }
}

/// Family a randomised curve is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    /// All coordinates move.
    Random,
    /// The torus coordinates are constant.
    ConstantTorus,
    /// Only the torus coordinates move; the projection is a point.
    TorusOnly,
}

const MODES: usize = 3;

fn random_poly(rng: &mut ChaCha8Rng, constant: f64, amplitude: f64) -> TrigPolynomial {
    TrigPolynomial {
        constant,
        cos: (0..MODES).map(|_| rng.gen_range(-amplitude..amplitude)).collect(),
        sin: (0..MODES).map(|_| rng.gen_range(-amplitude..amplitude)).collect(),
    }
}

fn constant_poly(c: f64) -> TrigPolynomial {
    TrigPolynomial {
        constant: c,
        cos: vec![],
        sin: vec![],
    }
}

impl WarpedCurve {
    /// Draws a curve whose radial coordinate stays within `(0.07, π − 0.07)`.
    pub fn random(rng: &mut ChaCha8Rng, n: u32, kind: CurveKind) -> Self {
        let torus_dims = n.saturating_sub(2) as usize;
        let (r, phi) = match kind {
            CurveKind::TorusOnly => (
                constant_poly(rng.gen_range(0.5..2.5)),
                constant_poly(rng.gen_range(-3.0..3.0)),
            ),
            _ => (random_poly(rng, FRAC_PI_2, 0.25), random_poly(rng, 0.0, 2.0)),
        };
        let torus = (0..torus_dims)
            .map(|_| match kind {
                CurveKind::ConstantTorus => constant_poly(rng.gen_range(0.0..1.0)),
                _ => random_poly(rng, 0.0, 1.0),
            })
            .collect();
        Self { r, phi, torus }
    }
}

/// `(L_g̃(c), L_g(π∘c))`, both with the quadrature nodes that resolve
/// `L_g̃(c)` to `1e−10`.
pub fn curve_lengths(a: &dyn RadialFunction, b: &dyn RadialFunction, curve: &WarpedCurve) -> (f64, f64) {
    let (_, panels) = integrate(|t| curve.speeds(a, b, t).0.sqrt(), 0.0, 1.0, 1e-10);
    let mut full = 0.0;
    let mut projected = 0.0;
    for (t, w) in composite_nodes(0.0, 1.0, panels) {
        let (s_full, s_base) = curve.speeds(a, b, t);
        full += w * s_full.sqrt();
        projected += w * s_base.sqrt();
    }
    (full, projected)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionCheck {
    pub kind: CurveKind,
    pub trials: usize,
    /// Most negative `L_g̃(c) − L_g(π∘c)` over the trials.
    pub min_difference: f64,
    /// Largest `|L_g̃(c) − L_g(π∘c)|`.
    pub max_abs_difference: f64,
    pub full_lengths: Vec<f64>,
    pub projected_lengths: Vec<f64>,
}

/// Compares `L_g̃` against the projected length over `trials` seeded
/// random curves of the given kind.
pub fn projection_nonexpansion_check(
    a: &dyn RadialFunction,
    b: &dyn RadialFunction,
    n: u32,
    trials: usize,
    kind: CurveKind,
    seed: u64,
) -> Result<ProjectionCheck> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    if n < 3 {
        return Err(invalid("n", format!("need n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut full_lengths = Vec::with_capacity(trials);
    let mut projected_lengths = Vec::with_capacity(trials);
    let mut min_difference = f64::INFINITY;
    let mut max_abs_difference = 0.0_f64;
    for _ in 0..trials {
        let curve = WarpedCurve::random(&mut rng, n, kind);
        let (full, projected) = curve_lengths(a, b, &curve);
        let d = full - projected;
        min_difference = min_difference.min(d);
        max_abs_difference = max_abs_difference.max(d.abs());
        full_lengths.push(full);
        projected_lengths.push(projected);
    }
    Ok(ProjectionCheck {
        kind,
        trials,
        min_difference,
        max_abs_difference,
        full_lengths,
        projected_lengths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{SineSquaredBump, ThirdModeSine};

    #[test]
    fn constant_torus_is_equality_case() {
        let (a, b) = (ThirdModeSine { alpha: 0.05 }, SineSquaredBump { beta: 0.1 });
        let c = projection_nonexpansion_check(&a, &b, 4, 10, CurveKind::ConstantTorus, 7).unwrap();
        assert!(c.max_abs_difference < 1e-8);
    }

    #[test]
    fn torus_only_curve_projects_to_a_point() {
        let (a, b) = (ThirdModeSine { alpha: 0.05 }, SineSquaredBump { beta: 0.1 });
        let c = projection_nonexpansion_check(&a, &b, 5, 5, CurveKind::TorusOnly, 3).unwrap();
        for (full, proj) in c.full_lengths.iter().zip(&c.projected_lengths) {
            assert!(*full > 0.0);
            assert_eq!(*proj, 0.0);
        }
    }

    #[test]
    fn random_curves_do_not_shrink() {
        let (a, b) = (ThirdModeSine { alpha: 0.1 }, SineSquaredBump { beta: 0.3 });
        let c = projection_nonexpansion_check(&a, &b, 5, 20, CurveKind::Random, 11).unwrap();
        assert!(c.min_difference >= -1e-9);
        assert!(c.min_difference > 0.0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let (a, b) = (ThirdModeSine { alpha: 0.1 }, SineSquaredBump { beta: 0.3 });
        let x = projection_nonexpansion_check(&a, &b, 4, 4, CurveKind::Random, 5).unwrap();
        let y = projection_nonexpansion_check(&a, &b, 4, 4, CurveKind::Random, 5).unwrap();
        assert_eq!(x, y);
    }
}
