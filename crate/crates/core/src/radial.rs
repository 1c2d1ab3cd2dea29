//! Radial profiles: smooth functions of one coordinate that carry their
//! first two derivatives. Every metric in this crate is assembled from them.
//!
//! Profiles are evaluated on the whole real line even though they are only
//! meaningful on a bounded interval; pole limits difference a profile
//! symmetrically across the pole.

use std::f64::consts::PI;

/// Value and first two derivatives of a radial function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }
}

pub trait RadialFunction: Send + Sync {
    fn jet(&self, r: f64) -> Jet;

    fn value(&self, r: f64) -> f64 {
        self.jet(r).value
    }
}

impl<T: RadialFunction + ?Sized> RadialFunction for &T {
    fn jet(&self, r: f64) -> Jet {
        (**self).jet(r)
    }
}

impl<T: RadialFunction + ?Sized> RadialFunction for Box<T> {
    fn jet(&self, r: f64) -> Jet {
        (**self).jet(r)
    }
}

/// `r ↦ c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub f64);

impl RadialFunction for Constant {
    fn jet(&self, _r: f64) -> Jet {
        Jet::new(self.0, 0.0, 0.0)
    }
}

/// `r ↦ sin(k r) / k`, the profile of a round sphere of curvature `k²`.
/// Its poles sit at `0` and `π / k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledSine {
    pub k: f64,
}

impl ScaledSine {
    pub const UNIT: Self = Self { k: 1.0 };

    pub fn new(k: f64) -> Self {
        Self { k }
    }
}

impl RadialFunction for ScaledSine {
    fn jet(&self, r: f64) -> Jet {
        let (s, c) = (self.k * r).sin_cos();
        Jet::new(s / self.k, c, -self.k * s)
    }
}

/// Sphere profile with one extra odd Fourier mode,
/// `a(r) = (sin r + α sin 3r) / (1 + 3α)`, normalised so that `a'(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThirdModeSine {
    pub alpha: f64,
}

impl RadialFunction for ThirdModeSine {
    fn jet(&self, r: f64) -> Jet {
        let norm = 1.0 + 3.0 * self.alpha;
        let (s1, c1) = r.sin_cos();
        let (s3, c3) = (3.0 * r).sin_cos();
        Jet::new(
            (s1 + self.alpha * s3) / norm,
            (c1 + 3.0 * self.alpha * c3) / norm,
            -(s1 + 9.0 * self.alpha * s3) / norm,
        )
    }
}

/// Torus warping factor `b(r) = 1 + β sin² r`; even at both poles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineSquaredBump {
    pub beta: f64,
}

impl RadialFunction for SineSquaredBump {
    fn jet(&self, r: f64) -> Jet {
        let s = r.sin();
        let (s2, c2) = (2.0 * r).sin_cos();
        Jet::new(1.0 + self.beta * s * s, self.beta * s2, 2.0 * self.beta * c2)
    }
}

/// Warping factor of the extremal band `dt² + f(t)² |dx|²` on
/// `(−π/n, π/n) × T^{n−1}`, with `f(t) = cos(n t / 2)^{2/n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandProfile {
    pub n: u32,
}

impl BandProfile {
    /// Half-width `π / n` of the band.
    pub fn half_width(&self) -> f64 {
        PI / f64::from(self.n)
    }
}

impl RadialFunction for BandProfile {
    fn jet(&self, t: f64) -> Jet {
        let n = f64::from(self.n);
        let u = 0.5 * n * t;
        let (s, c) = u.sin_cos();
        let f = c.powf(2.0 / n);
        // f'/f = -tan u, (f'/f)' = -(n/2) sec² u
        let log_d = -s / c;
        let log_dd = -0.5 * n / (c * c);
        Jet::new(f, f * log_d, f * (log_dd + log_d * log_d))
    }
}

/// `c₀ + Σ cₖ cos(k r) + sₖ sin(k r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl RadialFunction for TrigPolynomial {
    fn jet(&self, r: f64) -> Jet {
        let mut jet = Jet::new(self.constant, 0.0, 0.0);
        let terms = self.cos.len().max(self.sin.len());
        for i in 0..terms {
            let k = (i + 1) as f64;
            let (s, c) = (k * r).sin_cos();
            let ck = self.cos.get(i).copied().unwrap_or(0.0);
            let sk = self.sin.get(i).copied().unwrap_or(0.0);
            jet.value += ck * c + sk * s;
            jet.d1 += k * (sk * c - ck * s);
            jet.d2 -= k * k * (ck * c + sk * s);
        }
        jet
    }
}

/// Adapter for closures returning `(f, f', f'')`.
pub struct FnRadial<F>(pub F);

impl<F> RadialFunction for FnRadial<F>
where
    F: Fn(f64) -> (f64, f64, f64) + Send + Sync,
{
    fn jet(&self, r: f64) -> Jet {
        let (v, d1, d2) = (self.0)(r);
        Jet::new(v, d1, d2)
    }
}
