use super::geodesic::{harmonic, SegmentKind, Shooter};
use super::{Surface, SurfacePoint};
use crate::error::Result;
use crate::numerics::optimize::bisect;

/// Arc length to the first zero of the Jacobi field `J(0) = 0, J'(0) = 1`
/// along the geodesic from `start` in `direction`, or `None` if there is no
/// conjugate point before `max_length`.
pub fn conjugate_radius(
    surface: &Surface,
    start: SurfacePoint,
    direction: f64,
    max_length: f64,
) -> Result<Option<f64>> {
    let shooter = Shooter::new(surface);
    let path = shooter.shoot(start, direction, max_length)?;
    let j = &path.jacobi;
    for k in 1..path.segments.len() {
        let (j0, j1) = (j[k][0], j[k + 1][0]);
        if j0 == 0.0 || j0.signum() == j1.signum() && j1 != 0.0 {
            continue;
        }
        let t0 = path.arc_lengths[k];
        let h = path.arc_lengths[k + 1] - t0;
        let root = match path.segments[k] {
            SegmentKind::Flow => {
                let s = &path.states[k];
                let y = [s.r, s.phi, s.dr, j[k][0], j[k][1]];
                bisect(|x| shooter.flow_step(&y, s.clairaut, x)[3], 0.0, h, 1e-14)
            }
            SegmentKind::Collar(pole) => {
                let kp = surface.pole_curvature(pole);
                bisect(|x| harmonic(kp, j[k], x)[0], 0.0, h, 1e-14)
            }
        };
        return Ok(Some(t0 + root.unwrap_or(h)));
    }
    Ok(None)
}
