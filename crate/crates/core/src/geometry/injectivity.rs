use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::{conjugate_radius, Surface, SurfacePoint, COLLAR};
use crate::error::{invalid, Result};
use crate::numerics::optimize::bisect;

/// A parallel `r = const` with `a'(r) = 0`; by Clairaut it is a closed geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedParallel {
    pub r: f64,
    pub length: f64,
}

const PARALLEL_SCAN: usize = 4096;

/// Critical radii of the profile in `(0, L)`, located on a uniform grid and
/// refined by bisection.
pub fn closed_parallels(surface: &Surface) -> Vec<ClosedParallel> {
    let a = surface.profile();
    let lo = COLLAR;
    let hi = surface.meridian() - COLLAR;
    let x = |i: usize| lo + (hi - lo) * i as f64 / PARALLEL_SCAN as f64;
    let slope = |r: f64| a.jet(r).d1;
    let mut out: Vec<ClosedParallel> = Vec::new();
    let mut push = |r: f64| {
        if out.last().is_none_or(|p| (p.r - r).abs() > 1e-9) {
            out.push(ClosedParallel {
                r,
                length: TAU * a.value(r),
            });
        }
    };
    let mut prev = slope(x(0));
    if prev == 0.0 {
        push(x(0));
    }
    for i in 1..=PARALLEL_SCAN {
        let cur = slope(x(i));
        if cur == 0.0 {
            push(x(i));
        } else if prev != 0.0 && prev.signum() != cur.signum() {
            if let Some(r) = bisect(slope, x(i - 1), x(i), 1e-13) {
                push(r);
            }
        }
        prev = cur;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    ConjugatePoint { base_r: f64, direction: f64, length: f64 },
    ClosedParallel { r: f64, length: f64 },
    /// Two opposite meridians joined at the poles.
    MeridianLoop { length: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectivityReport {
    /// Least conjugate distance over the sampled geodesics.
    pub conjugate_radius: f64,
    /// Half the length of the shortest closed geodesic found.
    pub half_systole: f64,
    pub inj_estimate: f64,
    /// Geodesics realising the two bounds above.
    pub witnesses: Vec<Witness>,
    /// Least conjugate distance per sampled base radius (`None` if no
    /// sampled geodesic from it had a conjugate point).
    pub conjugate_by_base: Vec<(f64, Option<f64>)>,
    pub angular_samples: usize,
    pub base_samples: usize,
}

/// Estimate of the injectivity radius as `min(conjugate radius, half systole)`.
///
/// Conjugate points are searched along `angular_samples` directions in
/// `[0, π]` from each of `base_samples` radii on one meridian; closed
/// geodesics are the critical parallels and the meridian loop. The result is
/// an upper bound attained by the reported witnesses.
pub fn injectivity_radius(
    surface: &Surface,
    angular_samples: usize,
    base_samples: usize,
) -> Result<InjectivityReport> {
    if angular_samples < 16 {
        return Err(invalid("angular_samples", format!("need at least 16, got {angular_samples}")));
    }
    if base_samples < 8 {
        return Err(invalid("base_samples", format!("need at least 8, got {base_samples}")));
    }
    let l = surface.meridian();
    let max_length = 2.0 * l;
    let per_base: Vec<(f64, Option<(f64, f64)>)> = (0..base_samples)
        .into_par_iter()
        .map(|k| -> Result<(f64, Option<(f64, f64)>)> {
            let r = l * (k as f64 + 0.5) / base_samples as f64;
            let mut best: Option<(f64, f64)> = None;
            for j in 0..angular_samples {
                let dir = PI * j as f64 / (angular_samples - 1) as f64;
                if let Some(c) = conjugate_radius(surface, SurfacePoint::new(r, 0.0), dir, max_length)? {
                    if best.is_none_or(|(b, _)| c < b) {
                        best = Some((c, dir));
                    }
                }
            }
            Ok((r, best))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut conj = f64::INFINITY;
    let mut conj_witness = None;
    for &(r, best) in &per_base {
        if let Some((c, dir)) = best {
            if c < conj {
                conj = c;
                conj_witness = Some(Witness::ConjugatePoint {
                    base_r: r,
                    direction: dir,
                    length: c,
                });
            }
        }
    }

    // parallels come sorted by radius and precede the meridian loop, so a
    // strict comparison keeps the smallest-radius witness among ties
    let mut systole = f64::INFINITY;
    let mut systole_witness = Witness::MeridianLoop { length: 2.0 * l };
    let candidates = closed_parallels(surface)
        .into_iter()
        .map(|p| Witness::ClosedParallel { r: p.r, length: p.length })
        .chain(std::iter::once(Witness::MeridianLoop { length: 2.0 * l }));
    for w in candidates {
        let len = match w {
            Witness::ClosedParallel { length, .. } | Witness::MeridianLoop { length } => length,
            Witness::ConjugatePoint { .. } => unreachable!(),
        };
        if len < systole {
            systole = len;
            systole_witness = w;
        }
    }
    let half_systole = 0.5 * systole;

    let mut witnesses = Vec::new();
    if conj <= half_systole {
        witnesses.extend(conj_witness.clone());
    }
    if half_systole <= conj {
        witnesses.push(systole_witness);
    }
    Ok(InjectivityReport {
        conjugate_radius: conj,
        half_systole,
        inj_estimate: conj.min(half_systole),
        witnesses,
        conjugate_by_base: per_base.into_iter().map(|(r, b)| (r, b.map(|x| x.0))).collect(),
        angular_samples,
        base_samples,
    })
}
