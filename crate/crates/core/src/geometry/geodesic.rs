//! Unit-speed geodesic flow in the polar chart, continued across the poles
//! in normal coordinates, with a Jacobi field `J'' + K J = 0` carried along.

use serde::Serialize;

use super::{Surface, SurfacePoint, COLLAR};
use crate::curvature::Pole;
use crate::error::{invalid, Error, Result};
use crate::numerics::ode::Dopri5;
use crate::numerics::optimize::bisect;

/// Phase-space point of the geodesic flow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeodesicState {
    pub r: f64,
    /// Unwrapped angle; continuous along a path.
    pub phi: f64,
    pub dr: f64,
    pub dphi: f64,
    /// `a(r)² φ'`, conserved along the flow.
    pub clairaut: f64,
}

/// How the path was continued between two consecutive samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SegmentKind {
    /// Integrated in the polar chart.
    Flow,
    /// Straight flight through the collar of a pole.
    Collar(Pole),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicPath {
    pub states: Vec<GeodesicState>,
    pub arc_lengths: Vec<f64>,
    /// Normal Jacobi field `(J, J')` with `J(0) = 0`, `J'(0) = 1`.
    pub jacobi: Vec<[f64; 2]>,
    /// `segments[k]` joins samples `k` and `k + 1`.
    pub segments: Vec<SegmentKind>,
}

impl GeodesicPath {
    fn new() -> Self {
        Self {
            states: Vec::new(),
            arc_lengths: Vec::new(),
            jacobi: Vec::new(),
            segments: Vec::new(),
        }
    }

    fn push(&mut self, t: f64, state: GeodesicState, jacobi: [f64; 2], kind: Option<SegmentKind>) {
        if let Some(kind) = kind {
            self.segments.push(kind);
        }
        self.arc_lengths.push(t);
        self.states.push(state);
        self.jacobi.push(jacobi);
    }

    pub fn length(&self) -> f64 {
        self.arc_lengths.last().copied().unwrap_or(0.0)
    }

    pub fn start(&self) -> &GeodesicState {
        &self.states[0]
    }

    pub fn end(&self) -> &GeodesicState {
        self.states.last().expect("path has at least one sample")
    }

    /// Index `k` of the segment containing arc length `t`.
    pub(crate) fn segment_index(&self, t: f64) -> usize {
        let last = self.segments.len().saturating_sub(1);
        match self.arc_lengths.binary_search_by(|s| s.total_cmp(&t)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        }
    }

    /// Position at arc length `t ∈ [0, length]`: cubic Hermite interpolation
    /// in the polar chart, straight lines inside the collars.
    pub fn position_at(&self, surface: &Surface, t: f64) -> SurfacePoint {
        if self.segments.is_empty() {
            let s = self.start();
            return SurfacePoint::new(s.r, s.phi);
        }
        let k = self.segment_index(t);
        let (t0, t1) = (self.arc_lengths[k], self.arc_lengths[k + 1]);
        let (s0, s1) = (&self.states[k], &self.states[k + 1]);
        match self.segments[k] {
            SegmentKind::Flow => {
                let h = t1 - t0;
                let u = ((t - t0) / h).clamp(0.0, 1.0);
                let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
                let h10 = u * (1.0 - u) * (1.0 - u);
                let h01 = u * u * (3.0 - 2.0 * u);
                let h11 = u * u * (u - 1.0);
                let r = h00 * s0.r + h10 * h * s0.dr + h01 * s1.r + h11 * h * s1.dr;
                let phi = h00 * s0.phi + h10 * h * s0.dphi + h01 * s1.phi + h11 * h * s1.dphi;
                SurfacePoint::new(r, phi)
            }
            SegmentKind::Collar(pole) => {
                let chart = ChartState::from_state(surface, pole, s0, [0.0, 0.0]);
                let tau = (t - t0).clamp(0.0, t1 - t0);
                let x = [chart.x[0] + tau * chart.v[0], chart.x[1] + tau * chart.v[1]];
                let rho = x[0].hypot(x[1]);
                let phi = if rho > 0.0 { unwrap_near(x[1].atan2(x[0]), s0.phi) } else { s0.phi };
                SurfacePoint::new(chart.radius(surface, rho), phi)
            }
        }
    }
}

/// Representative of `angle` modulo 2π closest to `reference`.
pub(crate) fn unwrap_near(angle: f64, reference: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    angle + tau * ((reference - angle) / tau).round()
}

/// Position and velocity in normal coordinates `x = ρ (cos φ, sin φ)` around
/// a pole, where `ρ` is the distance to the pole. Inside the collar the
/// metric is flat up to `O(ρ²)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ChartState {
    pub pole: Pole,
    pub x: [f64; 2],
    pub v: [f64; 2],
    pub jacobi: [f64; 2],
}

impl ChartState {
    pub fn from_state(surface: &Surface, pole: Pole, s: &GeodesicState, jacobi: [f64; 2]) -> Self {
        let rho = match pole {
            Pole::North => s.r,
            Pole::South => surface.meridian() - s.r,
        };
        let (sp, cp) = s.phi.sin_cos();
        if rho <= 0.0 {
            // at the pole the angle encodes the launch meridian
            return Self {
                pole,
                x: [0.0, 0.0],
                v: [cp, sp],
                jacobi,
            };
        }
        let v_rho = match pole {
            Pole::North => s.dr,
            Pole::South => -s.dr,
        };
        let v_phi = surface.profile().value(s.r) * s.dphi;
        Self {
            pole,
            x: [rho * cp, rho * sp],
            v: [v_rho * cp - v_phi * sp, v_rho * sp + v_phi * cp],
            jacobi,
        }
    }

    fn radius(&self, surface: &Surface, rho: f64) -> f64 {
        match self.pole {
            Pole::North => rho,
            Pole::South => surface.meridian() - rho,
        }
    }

    /// Arc length until the flight leaves the collar.
    fn exit_time(&self) -> f64 {
        let b = self.x[0] * self.v[0] + self.x[1] * self.v[1];
        let c = self.x[0] * self.x[0] + self.x[1] * self.x[1] - COLLAR * COLLAR;
        (-b + (b * b - c).max(0.0).sqrt()).max(0.0)
    }

    /// Straight flight of length `len`; the Jacobi field follows the
    /// constant-curvature solution with the pole's Gauss curvature.
    fn fly(&self, surface: &Surface, len: f64) -> Self {
        let k = surface.pole_curvature(self.pole);
        Self {
            pole: self.pole,
            x: [self.x[0] + len * self.v[0], self.x[1] + len * self.v[1]],
            v: self.v,
            jacobi: harmonic(k, self.jacobi, len),
        }
    }

    fn to_state(self, surface: &Surface, phi_reference: f64) -> GeodesicState {
        let rho = self.x[0].hypot(self.x[1]);
        let sign = match self.pole {
            Pole::North => 1.0,
            Pole::South => -1.0,
        };
        let r = self.radius(surface, rho);
        if rho == 0.0 {
            return GeodesicState {
                r,
                phi: unwrap_near(self.v[1].atan2(self.v[0]), phi_reference),
                dr: sign,
                dphi: 0.0,
                clairaut: 0.0,
            };
        }
        let phi = unwrap_near(self.x[1].atan2(self.x[0]), phi_reference);
        let (sp, cp) = phi.sin_cos();
        let v_rho = self.v[0] * cp + self.v[1] * sp;
        let v_phi = -self.v[0] * sp + self.v[1] * cp;
        let a = surface.profile().value(r);
        GeodesicState {
            r,
            phi,
            dr: sign * v_rho,
            dphi: v_phi / a,
            clairaut: a * v_phi,
        }
    }
}

/// Solution of `J'' + K J = 0` after time `t`.
pub(crate) fn harmonic(k: f64, j: [f64; 2], t: f64) -> [f64; 2] {
    if k.abs() < 1e-14 {
        return [j[0] + t * j[1], j[1]];
    }
    if k > 0.0 {
        let w = k.sqrt();
        let (s, c) = (w * t).sin_cos();
        [j[0] * c + j[1] * s / w, -j[0] * w * s + j[1] * c]
    } else {
        let w = (-k).sqrt();
        let (s, c) = ((w * t).sinh(), (w * t).cosh());
        [j[0] * c + j[1] * s / w, j[0] * w * s + j[1] * c]
    }
}

/// Flow state `[r, φ, r', J, J']` in the polar chart.
pub(crate) type FlowVector = [f64; 5];

pub struct Shooter<'s, 'a> {
    surface: &'s Surface<'a>,
    solver: Dopri5,
    /// Smallest admissible step before the trajectory is declared singular.
    min_step: f64,
}

impl<'s, 'a> Shooter<'s, 'a> {
    pub fn new(surface: &'s Surface<'a>) -> Self {
        Self {
            surface,
            solver: Dopri5::default(),
            min_step: 1e-12,
        }
    }

    pub fn surface(&self) -> &Surface<'a> {
        self.surface
    }

    pub(crate) fn rhs(&self, clairaut: f64) -> impl Fn(&FlowVector) -> FlowVector + '_ {
        let profile = self.surface.profile();
        move |y: &FlowVector| {
            let j = profile.jet(y[0]);
            let inv = 1.0 / j.value;
            let dphi = clairaut * inv * inv;
            [
                y[2],
                dphi,
                clairaut * clairaut * j.d1 * inv * inv * inv,
                y[4],
                j.d2 * inv * y[3],
            ]
        }
    }

    /// One Dormand–Prince step of size `h` from `y`.
    pub(crate) fn flow_step(&self, y: &FlowVector, clairaut: f64, h: f64) -> FlowVector {
        let f = self.rhs(clairaut);
        let k1 = f(y);
        self.solver.step(&f, y, &k1, h).y
    }

    fn flow_state(&self, y: &FlowVector, clairaut: f64) -> GeodesicState {
        let a = self.surface.profile().value(y[0]);
        GeodesicState {
            r: y[0],
            phi: y[1],
            dr: y[2],
            dphi: clairaut / (a * a),
            clairaut,
        }
    }

    /// Initial state at `start` heading at `direction` radians from `∂_r`
    /// towards `∂_φ`. At a pole, `direction` is the launch meridian.
    pub fn initial_state(&self, start: SurfacePoint, direction: f64) -> GeodesicState {
        let l = self.surface.meridian();
        if start.r <= 0.0 || start.r >= l {
            let north = start.r <= 0.0;
            return GeodesicState {
                r: if north { 0.0 } else { l },
                phi: direction,
                dr: if north { 1.0 } else { -1.0 },
                dphi: 0.0,
                clairaut: 0.0,
            };
        }
        let a = self.surface.profile().value(start.r);
        let (s, c) = direction.sin_cos();
        GeodesicState {
            r: start.r,
            phi: start.phi,
            dr: c,
            dphi: s / a,
            clairaut: a * s,
        }
    }

    /// Direction angle that retraces `state` backwards.
    pub fn reverse_direction(&self, state: &GeodesicState) -> f64 {
        let a = self.surface.profile().value(state.r);
        (-a * state.dphi).atan2(-state.dr)
    }

    pub fn shoot(&self, start: SurfacePoint, direction: f64, length: f64) -> Result<GeodesicPath> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid("length", format!("need a positive length, got {length}")));
        }
        let l = self.surface.meridian();
        if !(0.0..=l).contains(&start.r) {
            return Err(invalid("start.r", format!("{} outside [0, {l}]", start.r)));
        }
        let state = self.initial_state(start, direction);
        self.shoot_from_state(state, [0.0, 1.0], length)
    }

    pub(crate) fn shoot_from_state(
        &self,
        mut state: GeodesicState,
        mut jacobi: [f64; 2],
        length: f64,
    ) -> Result<GeodesicPath> {
        let surface = self.surface;
        let mut path = GeodesicPath::new();
        let mut t = 0.0;
        path.push(t, state, jacobi, None);
        let mut h = 0.02_f64.min(length);

        loop {
            if t >= length {
                return Ok(path);
            }
            // inside a collar, fly straight to its boundary
            if let Some(pole) = surface.collar_of(state.r) {
                let inward = match pole {
                    Pole::North => state.dr < 0.0,
                    Pole::South => state.dr > 0.0,
                };
                let inside = match pole {
                    Pole::North => state.r < COLLAR,
                    Pole::South => state.r > surface.meridian() - COLLAR,
                };
                if inside || inward {
                    let chart = ChartState::from_state(surface, pole, &state, jacobi);
                    let exit = chart.exit_time();
                    let remaining = length - t;
                    let (len, done) = if exit >= remaining { (remaining, true) } else { (exit, false) };
                    let flown = chart.fly(surface, len);
                    let mut next = flown.to_state(surface, state.phi);
                    if !done {
                        // snap exactly onto the collar boundary
                        next.r = match pole {
                            Pole::North => COLLAR,
                            Pole::South => surface.meridian() - COLLAR,
                        };
                    }
                    t = if done { length } else { t + len };
                    state = next;
                    jacobi = flown.jacobi;
                    path.push(t, state, jacobi, Some(SegmentKind::Collar(pole)));
                    continue;
                }
            }

            let c = state.clairaut;
            let f = self.rhs(c);
            let mut y: FlowVector = [state.r, state.phi, state.dr, jacobi[0], jacobi[1]];
            let mut dy = f(&y);
            loop {
                let remaining = length - t;
                if remaining <= 0.0 {
                    break;
                }
                let last = h >= remaining;
                let h_try = if last { remaining } else { h };
                let trial = self.solver.step(&f, &y, &dy, h_try);
                h = self.solver.next_step(h_try, trial.error);
                if trial.error > 1.0 {
                    if h < self.min_step {
                        return Err(Error::StepUnderflow {
                            at_length: t,
                            partial: Box::new(path),
                        });
                    }
                    continue;
                }
                let entered = match surface.collar_of(trial.y[0]) {
                    Some(Pole::North) => trial.y[2] < 0.0,
                    Some(Pole::South) => trial.y[2] > 0.0,
                    None => false,
                };
                if entered {
                    // shorten the step to land on the collar boundary
                    let target = if trial.y[0] < COLLAR { COLLAR } else { surface.meridian() - COLLAR };
                    let g = |s: f64| self.solver.step(&f, &y, &dy, s).y[0] - target;
                    let hit = bisect(g, 0.0, h_try, 1e-15 * h_try.max(1.0)).unwrap_or(h_try);
                    let mut yb = self.solver.step(&f, &y, &dy, hit).y;
                    yb[0] = target;
                    t += hit;
                    y = yb;
                    state = self.flow_state(&y, c);
                    jacobi = [y[3], y[4]];
                    path.push(t, state, jacobi, Some(SegmentKind::Flow));
                    break;
                }
                t = if last { length } else { t + h_try };
                y = trial.y;
                dy = trial.dy;
                state = self.flow_state(&y, c);
                jacobi = [y[3], y[4]];
                path.push(t, state, jacobi, Some(SegmentKind::Flow));
                if last {
                    break;
                }
            }
        }
    }
}

/// Unit-speed geodesic of the given length from `start`.
pub fn shoot_geodesic(
    surface: &Surface,
    start: SurfacePoint,
    direction: f64,
    length: f64,
) -> Result<GeodesicPath> {
    Shooter::new(surface).shoot(start, direction, length)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    use super::*;
    use crate::radial::{RadialFunction, ScaledSine, ThirdModeSine};

    #[test]
    fn meridian_from_pole_reaches_antipode() {
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        for dir in [0.0, 1.0, 4.0] {
            let p = shoot_geodesic(&s, SurfacePoint::new(0.0, 0.0), dir, PI).unwrap();
            assert!((p.end().r - PI).abs() < 1e-6, "{}", p.end().r);
        }
    }

    #[test]
    fn equator_closes() {
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        let p = shoot_geodesic(&s, SurfacePoint::new(FRAC_PI_2, 0.0), FRAC_PI_2, TAU).unwrap();
        let e = p.end();
        assert!((e.r - FRAC_PI_2).abs() < 1e-5);
        assert!((e.phi - TAU).abs() < 1e-5);
    }

    #[test]
    fn shrunken_equator_closes() {
        let a = ThirdModeSine { alpha: 1.0 / 15.0 };
        let s = Surface::new(&a);
        let len = TAU * a.value(FRAC_PI_2);
        let p = shoot_geodesic(&s, SurfacePoint::new(FRAC_PI_2, 0.0), FRAC_PI_2, len).unwrap();
        let e = p.end();
        assert!((e.r - FRAC_PI_2).abs() < 1e-5);
        assert!((e.phi - TAU).abs() < 1e-5);
    }

    #[test]
    fn great_circle_through_pole() {
        // start on the equator heading north; after π we are on the equator
        // on the opposite meridian
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        let p = shoot_geodesic(&s, SurfacePoint::new(FRAC_PI_2, 0.3), PI, PI).unwrap();
        let e = p.end();
        assert!((e.r - FRAC_PI_2).abs() < 1e-6, "{}", e.r);
        let dphi = unwrap_near(e.phi - 0.3, PI);
        assert!((dphi - PI).abs() < 1e-6, "{}", e.phi);
        assert!(p.segments.iter().any(|k| matches!(k, SegmentKind::Collar(Pole::North))));
        // Jacobi field along a great circle is sin t
        let j = p.jacobi.last().unwrap();
        assert!(j[0].abs() < 1e-6 && (j[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn unit_speed_and_clairaut_conserved() {
        let a = ThirdModeSine { alpha: 0.2 };
        let s = Surface::new(&a);
        let p = shoot_geodesic(&s, SurfacePoint::new(1.0, 0.0), 0.4, 9.0).unwrap();
        let c0 = p.start().clairaut;
        for st in &p.states {
            let av = a.value(st.r);
            let speed = st.dr * st.dr + av * av * st.dphi * st.dphi;
            assert!((speed - 1.0).abs() < 1e-8, "speed {speed}");
            assert!((st.clairaut - c0).abs() < 1e-7);
        }
        assert!(p.arc_lengths.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn reversal_returns_to_start() {
        let a = ThirdModeSine { alpha: 0.1 };
        let s = Surface::new(&a);
        let sh = Shooter::new(&s);
        let start = SurfacePoint::new(0.8, 0.2);
        let len = 5.0;
        let p = sh.shoot(start, 2.2, len).unwrap();
        let e = *p.end();
        let back = sh.shoot(SurfacePoint::new(e.r, e.phi), sh.reverse_direction(&e), len).unwrap();
        let b = back.end();
        assert!((b.r - start.r).abs() < 1e-6 * len);
        assert!((b.phi - start.phi).abs() < 1e-6 * len);
    }

    #[test]
    fn interpolation_matches_reshoot() {
        let a = ThirdModeSine { alpha: 0.15 };
        let s = Surface::new(&a);
        let sh = Shooter::new(&s);
        let p = sh.shoot(SurfacePoint::new(1.2, 0.0), 2.8, 3.0).unwrap();
        for t in [0.37, 1.11, 1.9, 2.71] {
            let q = p.position_at(&s, t);
            let e = *sh.shoot(SurfacePoint::new(1.2, 0.0), 2.8, t).unwrap().end();
            assert!((q.r - e.r).abs() < 1e-7 && (q.phi - e.phi).abs() < 1e-7, "{t}: {q:?} {e:?}");
        }
    }

    #[test]
    fn rejects_bad_length() {
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        assert!(shoot_geodesic(&s, SurfacePoint::new(1.0, 0.0), 0.0, 0.0).is_err());
        assert!(shoot_geodesic(&s, SurfacePoint::new(4.0, 0.0), 0.0, 1.0).is_err());
    }
}
