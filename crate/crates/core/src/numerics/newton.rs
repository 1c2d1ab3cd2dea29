//! Newton's method for square 2×2 systems with a central-difference Jacobian.

#[derive(Clone, Copy, Debug)]
pub struct Newton2 {
    /// Central-difference step for the Jacobian.
    pub fd_step: f64,
    /// Converged once `max(|F₁|, |F₂|)` drops below this.
    pub ftol: f64,
    pub max_iterations: usize,
}

impl Default for Newton2 {
    fn default() -> Self {
        Self {
            fd_step: 1e-7,
            ftol: 1e-10,
            max_iterations: 60,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NewtonOutcome {
    Converged {
        x: [f64; 2],
        residual: f64,
        iterations: usize,
    },
    /// Jacobian numerically singular at the iterate.
    Singular { at: [f64; 2] },
    /// The iterate left the admissible set.
    LeftDomain { at: [f64; 2] },
    Exhausted { at: [f64; 2], residual: f64 },
}

fn norm_inf(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

impl Newton2 {
    /// Solves `F(x) = 0` from `seed`. `admissible` rejects iterates where `F`
    /// is undefined; the residual function is only called at admissible points.
    pub fn solve<F, D>(&self, f: F, admissible: D, seed: [f64; 2]) -> NewtonOutcome
    where
        F: Fn([f64; 2]) -> [f64; 2],
        D: Fn([f64; 2]) -> bool,
    {
        let mut x = seed;
        if !admissible(x) {
            return NewtonOutcome::LeftDomain { at: x };
        }
        let mut fx = f(x);
        for iteration in 0..self.max_iterations {
            let residual = norm_inf(fx);
            if residual < self.ftol {
                // one polishing step, kept only if it does not hurt
                if let Some(next) = self.newton_step(&f, &admissible, x, fx) {
                    let fnext = f(next);
                    if norm_inf(fnext) <= residual {
                        return NewtonOutcome::Converged {
                            x: next,
                            residual: norm_inf(fnext),
                            iterations: iteration + 1,
                        };
                    }
                }
                return NewtonOutcome::Converged {
                    x,
                    residual,
                    iterations: iteration,
                };
            }
            let Some(jac) = self.jacobian(&f, &admissible, x) else {
                return NewtonOutcome::LeftDomain { at: x };
            };
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            let scale = jac.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
            if det.abs() <= 1e-14 * scale * scale || !det.is_finite() {
                return NewtonOutcome::Singular { at: x };
            }
            let dx = [
                (jac[1][1] * fx[0] - jac[0][1] * fx[1]) / det,
                (-jac[1][0] * fx[0] + jac[0][0] * fx[1]) / det,
            ];
            // backtrack until admissible and the residual decreases
            let mut lambda = 1.0;
            let mut accepted = None;
            while lambda > 1e-4 {
                let trial = [x[0] - lambda * dx[0], x[1] - lambda * dx[1]];
                if admissible(trial) {
                    let ft = f(trial);
                    if norm_inf(ft) < residual || lambda == 1.0 && norm_inf(ft) < 2.0 * residual {
                        accepted = Some((trial, ft));
                        break;
                    }
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((xn, fxn)) => {
                    x = xn;
                    fx = fxn;
                }
                None => return NewtonOutcome::LeftDomain { at: x },
            }
        }
        NewtonOutcome::Exhausted {
            at: x,
            residual: norm_inf(fx),
        }
    }

    fn newton_step<F, D>(&self, f: &F, admissible: &D, x: [f64; 2], fx: [f64; 2]) -> Option<[f64; 2]>
    where
        F: Fn([f64; 2]) -> [f64; 2],
        D: Fn([f64; 2]) -> bool,
    {
        let jac = self.jacobian(f, admissible, x)?;
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let next = [
            x[0] - (jac[1][1] * fx[0] - jac[0][1] * fx[1]) / det,
            x[1] - (-jac[1][0] * fx[0] + jac[0][0] * fx[1]) / det,
        ];
        admissible(next).then_some(next)
    }

    /// `jac[i][j] = ∂Fᵢ/∂xⱼ`.
    fn jacobian<F, D>(&self, f: &F, admissible: &D, x: [f64; 2]) -> Option<[[f64; 2]; 2]>
    where
        F: Fn([f64; 2]) -> [f64; 2],
        D: Fn([f64; 2]) -> bool,
    {
        let h = self.fd_step;
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut plus = x;
            let mut minus = x;
            plus[j] += h;
            minus[j] -= h;
            if !admissible(plus) || !admissible(minus) {
                return None;
            }
            let (fp, fm) = (f(plus), f(minus));
            for i in 0..2 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        Some(jac)
    }
}
