//! Dormand–Prince 5(4) embedded Runge–Kutta pair for autonomous systems
//! of fixed dimension.

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// 5th-order weights (also row 7 of the tableau)
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// difference between 5th- and 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Result of one trial step.
#[derive(Clone, Copy, Debug)]
pub struct Trial<const N: usize> {
    pub y: [f64; N],
    /// Derivative at `y`, reusable as the first stage of the next step.
    pub dy: [f64; N],
    /// Scaled error norm; the step is acceptable when `<= 1`.
    pub error: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (w, k) in terms {
            acc += w * k[i];
        }
        out[i] += h * acc;
    }
    out
}

impl Dopri5 {
    /// Takes a single step of size `h` from `y`, whose derivative is `k1`.
    pub fn step<const N: usize, F>(&self, f: &F, y: &[f64; N], k1: &[f64; N], h: f64) -> Trial<N>
    where
        F: Fn(&[f64; N]) -> [f64; N],
    {
        let k2 = f(&axpy(y, h, &[(A21, k1)]));
        let k3 = f(&axpy(y, h, &[(A31, k1), (A32, &k2)]));
        let k4 = f(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&axpy(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let y_new = axpy(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(&y_new);

        let mut error = 0.0_f64;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            error = error.max((e / scale).abs());
        }
        if !error.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            error = f64::INFINITY;
        }
        Trial {
            y: y_new,
            dy: k7,
            error,
        }
    }

    /// Step size to try next, given the error of the last trial.
    pub fn next_step(&self, h: f64, error: f64) -> f64 {
        let factor = if error == 0.0 {
            5.0
        } else if error.is_finite() {
            (0.9 * error.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            0.1
        };
        h * factor
    }

    /// Integrates `y' = f(y)` over `[0, length]` and returns the final state.
    pub fn integrate<const N: usize, F>(&self, f: &F, y0: [f64; N], length: f64) -> Option<[f64; N]>
    where
        F: Fn(&[f64; N]) -> [f64; N],
    {
        let mut t = 0.0;
        let mut y = y0;
        let mut dy = f(&y);
        let mut h = (length / 16.0).min(0.05);
        while t < length {
            let h_try = h.min(length - t);
            let trial = self.step(f, &y, &dy, h_try);
            if trial.error <= 1.0 {
                t = if h_try == length - t { length } else { t + h_try };
                y = trial.y;
                dy = trial.dy;
            }
            h = self.next_step(h_try, trial.error);
            if h < 1e-14 * length.max(1.0) {
                return None;
            }
        }
        Some(y)
    }
}
