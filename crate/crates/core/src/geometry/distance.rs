//! Geodesic distance by shooting a fan of geodesics from the first point.
//!
//! By rotational symmetry the distance only depends on the two radii and
//! the angular separation, so the base point always sits on `φ = 0` and
//! directions are swept over `[0, π]`. Every candidate is a geodesic that
//! actually passes through the target; the shortest one wins.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::geodesic::{unwrap_near, GeodesicPath, Shooter};
use super::{chord, Surface, SurfacePoint};
use crate::error::{invalid, Error, Result};
use crate::numerics::optimize::golden_section;

/// Number of initial directions in a fan.
pub const SWEEP_DIRECTIONS: usize = 720;
/// A geodesic counts as reaching the target when it passes within this
/// (embedded) distance of it.
const HIT_TOLERANCE: f64 = 1e-6;
const DIRECTION_TOL: f64 = 1e-9;
/// Extra length beyond the via-pole bound.
const LENGTH_MARGIN: f64 = 1e-3;

/// Geodesics of length `L + margin` leaving one base point in evenly
/// spaced directions, with the embedded image of every sample cached.
pub struct GeodesicFan<'s, 'a> {
    shooter: Shooter<'s, 'a>,
    base_r: f64,
    length: f64,
    directions: Vec<f64>,
    paths: Vec<GeodesicPath>,
    embedded: Vec<Vec<[f64; 3]>>,
}

impl<'s, 'a> GeodesicFan<'s, 'a> {
    pub fn new(surface: &'s Surface<'a>, base_r: f64, directions: usize) -> Result<Self> {
        if directions < 3 {
            return Err(invalid("directions", "need at least three directions"));
        }
        let shooter = Shooter::new(surface);
        let length = surface.meridian() + LENGTH_MARGIN;
        let start = SurfacePoint::new(base_r, 0.0);
        let angles: Vec<f64> = (0..directions)
            .map(|i| PI * i as f64 / (directions - 1) as f64)
            .collect();
        let paths = angles
            .iter()
            .map(|&theta| shooter.shoot(start, theta, length))
            .collect::<Result<Vec<_>>>()?;
        let embedded = paths
            .iter()
            .map(|p| {
                p.states
                    .iter()
                    .map(|s| surface.embed(SurfacePoint::new(s.r, s.phi)))
                    .collect()
            })
            .collect();
        Ok(Self {
            shooter,
            base_r,
            length,
            directions: angles,
            paths,
            embedded,
        })
    }

    pub fn base_r(&self) -> f64 {
        self.base_r
    }

    /// Distance from the base point to `(target_r, dphi)`.
    pub fn distance_to(&self, target_r: f64, dphi: f64) -> Result<f64> {
        let surface = self.shooter.surface();
        if let Some(d) = exact_distance(surface, self.base_r, target_r, dphi) {
            return Ok(d);
        }
        let dphi = fold_angle(dphi);
        let target = surface.embed(SurfacePoint::new(target_r, dphi));
        let bound = surface.via_pole_bound(self.base_r, target_r);
        let t_max = (bound + 1e-9).min(self.length);

        let coarse: Vec<(f64, f64)> = self
            .paths
            .iter()
            .zip(&self.embedded)
            .map(|(p, e)| closest_approach(surface, p, Some(e), target, t_max))
            .collect();

        let spacing = self.directions[1] - self.directions[0];
        let threshold = 8.0 * spacing;
        let last = coarse.len() - 1;
        let mut best: Option<f64> = None;
        let mut best_miss = f64::INFINITY;
        for i in 0..=last {
            let m = coarse[i].0;
            best_miss = best_miss.min(m);
            let left = if i > 0 { coarse[i - 1].0 } else { f64::INFINITY };
            let right = if i < last { coarse[i + 1].0 } else { f64::INFINITY };
            if m > left || m > right || m > threshold {
                continue;
            }
            let (miss, t) = if m <= HIT_TOLERANCE {
                coarse[i]
            } else {
                let lo = self.directions[i.saturating_sub(1)];
                let hi = self.directions[(i + 1).min(last)];
                self.refine(target, t_max, lo, hi)?
            };
            best_miss = best_miss.min(miss);
            if miss <= HIT_TOLERANCE {
                best = Some(best.map_or(t, |b: f64| b.min(t)));
            }
        }
        match best {
            Some(d) => Ok(d.min(bound)),
            None => Err(Error::NoConnectingGeodesic {
                directions: self.directions.len(),
                best_miss,
            }),
        }
    }

    fn refine(&self, target: [f64; 3], t_max: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
        let surface = self.shooter.surface();
        let start = SurfacePoint::new(self.base_r, 0.0);
        let miss = |theta: f64| match self.shooter.shoot(start, theta, t_max) {
            Ok(p) => closest_approach(surface, &p, None, target, t_max).0,
            Err(_) => f64::INFINITY,
        };
        let m = golden_section(miss, lo, hi, DIRECTION_TOL);
        let p = self.shooter.shoot(start, m.x, t_max)?;
        Ok(closest_approach(surface, &p, None, target, t_max))
    }
}

/// Reduces an angular separation to `[0, π]`.
fn fold_angle(dphi: f64) -> f64 {
    unwrap_near(dphi, 0.0).abs()
}

/// Cases where the distance is known exactly: `r` is the distance to the
/// north pole, so meridians realise it.
fn exact_distance(surface: &Surface, r1: f64, r2: f64, dphi: f64) -> Option<f64> {
    let l = surface.meridian();
    if r1 <= 0.0 || r2 <= 0.0 {
        return Some((r1 - r2).abs());
    }
    if r1 >= l || r2 >= l {
        return Some((r1 - r2).abs());
    }
    if fold_angle(dphi) == 0.0 {
        return Some((r1 - r2).abs());
    }
    None
}

/// Smallest embedded distance from the path (restricted to `[0, t_max]`)
/// to `target`, and the arc length where it occurs.
fn closest_approach(
    surface: &Surface,
    path: &GeodesicPath,
    embedded: Option<&Vec<[f64; 3]>>,
    target: [f64; 3],
    t_max: f64,
) -> (f64, f64) {
    let owned;
    let embedded = match embedded {
        Some(e) => e,
        None => {
            owned = path
                .states
                .iter()
                .map(|s| surface.embed(SurfacePoint::new(s.r, s.phi)))
                .collect::<Vec<_>>();
            &owned
        }
    };
    let mut best_k = 0;
    let mut best = f64::INFINITY;
    for (k, (&t, &e)) in path.arc_lengths.iter().zip(embedded).enumerate() {
        if t > t_max {
            break;
        }
        let d = chord(e, target);
        if d < best {
            best = d;
            best_k = k;
        }
    }
    let lo = path.arc_lengths[best_k.saturating_sub(1)];
    let hi = path
        .arc_lengths
        .get(best_k + 1)
        .copied()
        .unwrap_or(path.length())
        .min(t_max);
    if hi <= lo {
        return (best, path.arc_lengths[best_k]);
    }
    let m = golden_section(
        |t| chord(surface.embed(path.position_at(surface, t)), target),
        lo,
        hi,
        1e-12,
    );
    if m.value < best {
        (m.value, m.x)
    } else {
        (best, path.arc_lengths[best_k])
    }
}

/// Geodesic distance between two points.
pub fn distance(surface: &Surface, p: SurfacePoint, q: SurfacePoint) -> Result<f64> {
    let dphi = q.phi - p.phi;
    if let Some(d) = exact_distance(surface, p.r, q.r, dphi) {
        return Ok(d);
    }
    GeodesicFan::new(surface, p.r, SWEEP_DIRECTIONS)?.distance_to(q.r, dphi)
}

/// Largest distance over a sampled set of point pairs. The first point runs
/// over `N + 1` radii on the meridian `φ = 0`, the second over an
/// `(N + 1) × (N + 1)` grid of radii and angles in `[0, π]`, where `N` is
/// `sample_density` rounded up to a power of two so that denser samplings
/// contain sparser ones.
pub fn diameter(surface: &Surface, sample_density: usize) -> Result<f64> {
    if sample_density < 8 {
        return Err(invalid("sample_density", format!("need at least 8, got {sample_density}")));
    }
    let n = sample_density.next_power_of_two();
    let l = surface.meridian();
    let radius = |i: usize| l * i as f64 / n as f64;
    let per_base: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let r1 = radius(i);
            let mut best = 0.0_f64;
            let interior = i > 0 && i < n;
            let fan = if interior {
                Some(GeodesicFan::new(surface, r1, SWEEP_DIRECTIONS)?)
            } else {
                None
            };
            // pairs with the second radius below the first are covered by symmetry
            for j in i..=n {
                let r2 = radius(j);
                for k in 0..=n {
                    let dphi = PI * k as f64 / n as f64;
                    let d = match &fan {
                        Some(f) => f.distance_to(r2, dphi),
                        None => Ok(exact_distance(surface, r1, r2, dphi).unwrap_or(0.0)),
                    };
                    // a pair the fan could not connect contributes nothing
                    if let Ok(d) = d {
                        best = best.max(d);
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_base.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::radial::{ScaledSine, ThirdModeSine};

    #[test]
    fn round_sphere_poles() {
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        let d = distance(&s, SurfacePoint::new(0.0, 0.0), SurfacePoint::new(PI, 0.0)).unwrap();
        assert!((d - PI).abs() < 1e-12);
    }

    #[test]
    fn round_sphere_equator_quarter() {
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        let d = distance(
            &s,
            SurfacePoint::new(FRAC_PI_2, 0.0),
            SurfacePoint::new(FRAC_PI_2, FRAC_PI_2),
        )
        .unwrap();
        assert!((d - FRAC_PI_2).abs() < 1e-5, "{d}");
    }

    #[test]
    fn round_sphere_generic_pair() {
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        let (p, q) = (SurfacePoint::new(0.7, 0.1), SurfacePoint::new(2.0, 2.3));
        let exact = (p.r.cos() * q.r.cos() + p.r.sin() * q.r.sin() * (q.phi - p.phi).cos()).acos();
        let d = distance(&s, p, q).unwrap();
        assert!((d - exact).abs() < 1e-5, "{d} vs {exact}");
    }

    #[test]
    fn deformed_sphere_poles_at_distance_pi() {
        let a = ThirdModeSine { alpha: 1.0 / 15.0 };
        let s = Surface::new(&a);
        let d = distance(&s, SurfacePoint::new(0.0, 0.0), SurfacePoint::new(PI, 1.0)).unwrap();
        assert!((d - PI).abs() < 1e-12);
        // opposite meridians: bounded by the path through the north pole
        let d = distance(&s, SurfacePoint::new(0.3, 0.0), SurfacePoint::new(2.5, PI)).unwrap();
        assert!((2.2..=2.8 + 1e-9).contains(&d), "{d}");
    }

    #[test]
    fn diameter_rejects_sparse_sampling() {
        let a = ScaledSine::UNIT;
        let s = Surface::new(&a);
        assert!(diameter(&s, 4).is_err());
    }
}
