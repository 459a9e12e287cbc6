//! Dormand–Prince 5(4) embedded Runge–Kutta pair on a flat complex vector.
//! Systems are autonomous, so the stage nodes never appear.

use crate::error::{Error, Result};
use crate::hilbert::C64;

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

/// Autonomous system `dy/dt = f(y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, y: &[C64], dy: &mut [C64]);
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone)]
pub struct Dopri5 {
    pub rel_tol: f64,
    pub abs_tol: f64,
    h: f64,
    k: [Vec<C64>; 7],
    stage: Vec<C64>,
    y_new: Vec<C64>,
    fsal: bool,
    stats: StepStats,
}

/// `out = y + h Σ cᵢ kᵢ`
fn combine(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &[C64])]) {
    out.copy_from_slice(y);
    for &(c, k) in terms {
        let s = h * c;
        for (o, v) in out.iter_mut().zip(k) {
            *o += v * s;
        }
    }
}

impl Dopri5 {
    pub fn new(dim: usize, rel_tol: f64, abs_tol: f64) -> Self {
        let z = || vec![C64::new(0.0, 0.0); dim];
        Self {
            rel_tol,
            abs_tol,
            h: 0.0,
            k: [z(), z(), z(), z(), z(), z(), z()],
            stage: z(),
            y_new: z(),
            fsal: false,
            stats: StepStats::default(),
        }
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    /// Step size the controller will try next.
    pub fn next_step(&self) -> f64 {
        self.h
    }

    /// Forget the cached derivative, e.g. after `y` was modified externally.
    pub fn invalidate(&mut self) {
        self.fsal = false;
    }

    /// One trial step of size `h` from `y`; fills `y_new` and returns the
    /// largest componentwise error estimate in units of its tolerance.
    fn trial<S: OdeSystem>(&mut self, sys: &S, y: &[C64], h: f64) -> f64 {
        if !self.fsal {
            sys.rhs(y, &mut self.k[0]);
            self.stats.rhs_evals += 1;
            self.fsal = true;
        }
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;

        combine(&mut self.stage, y, h, &[(A21, k1)]);
        sys.rhs(&self.stage, k2);
        combine(&mut self.stage, y, h, &[(A31, k1), (A32, k2)]);
        sys.rhs(&self.stage, k3);
        combine(&mut self.stage, y, h, &[(A41, k1), (A42, k2), (A43, k3)]);
        sys.rhs(&self.stage, k4);
        combine(
            &mut self.stage,
            y,
            h,
            &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)],
        );
        sys.rhs(&self.stage, k5);
        combine(
            &mut self.stage,
            y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        );
        sys.rhs(&self.stage, k6);
        combine(
            &mut self.y_new,
            y,
            h,
            &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)],
        );
        sys.rhs(&self.y_new, k7);
        self.stats.rhs_evals += 6;

        let mut worst: f64 = 0.0;
        for i in 0..y.len() {
            let e =
                (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = self.abs_tol + self.rel_tol * y[i].norm().max(self.y_new[i].norm());
            let r = e.norm() / scale;
            if r.is_nan() {
                return r;
            }
            worst = worst.max(r);
        }
        worst
    }

    fn commit(&mut self, y: &mut [C64]) {
        y.copy_from_slice(&self.y_new);
        self.k.swap(0, 6);
    }

    /// Adaptive integration from `*t` to exactly `t_end`. `after_step` runs
    /// on `y` after every accepted step; accepted step sizes are appended to
    /// `log` when given.
    pub fn advance<S, F>(
        &mut self,
        sys: &S,
        t: &mut f64,
        y: &mut [C64],
        t_end: f64,
        mut after_step: F,
        mut log: Option<&mut Vec<f64>>,
    ) -> Result<()>
    where
        S: OdeSystem,
        F: FnMut(&mut [C64]),
    {
        if self.h <= 0.0 {
            self.h = (t_end - *t).min(1e-3);
        }
        while *t < t_end {
            let remaining = t_end - *t;
            let landing = self.h >= remaining * (1.0 - 1e-12);
            let h = if landing { remaining } else { self.h };
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t: *t, h });
            }
            let err = self.trial(sys, y, h);
            if err.is_finite() && err <= 1.0 {
                self.stats.accepted += 1;
                self.commit(y);
                after_step(y);
                if let Some(log) = log.as_deref_mut() {
                    log.push(h);
                }
                *t = if landing { t_end } else { *t + h };
                let fac = if err == 0.0 {
                    FAC_MAX
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
                };
                // A short landing step says nothing about the proposal.
                if !landing || h >= self.h {
                    self.h = h * fac;
                }
            } else {
                self.stats.rejected += 1;
                let fac = if err.is_finite() {
                    (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0)
                } else {
                    FAC_MIN
                };
                self.h = h * fac;
            }
        }
        Ok(())
    }

    /// Replays a recorded step sequence without error control. The last step
    /// lands exactly on `t_end`.
    pub fn advance_fixed<S, F>(
        &mut self,
        sys: &S,
        t: &mut f64,
        y: &mut [C64],
        t_end: f64,
        steps: &[f64],
        mut after_step: F,
    ) where
        S: OdeSystem,
        F: FnMut(&mut [C64]),
    {
        for (i, &h) in steps.iter().enumerate() {
            self.trial(sys, y, h);
            self.stats.accepted += 1;
            self.commit(y);
            after_step(y);
            *t = if i + 1 == steps.len() { t_end } else { *t + h };
        }
    }
}
