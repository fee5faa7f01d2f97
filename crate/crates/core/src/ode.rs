//! Dormand–Prince 5(4) integrator over fixed-size states.

use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-13,
            h_init: 1e-2,
            h_min: 1e-14,
            h_max: 0.25,
            max_steps: 2_000_000,
        }
    }
}

/// Outcome of [`Dopri5::integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Reached<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    /// Step size to reuse when continuing the integration.
    pub h_next: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn comb<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl Dopri5 {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol * 0.1,
            ..Self::default()
        }
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction).
    ///
    /// `f` returns `None` outside its domain; such trial steps are rejected
    /// and retried with a smaller step. `observer` sees every accepted step
    /// and may stop the integration early by returning `false`.
    pub fn integrate<const N: usize, F, O>(
        &self,
        f: F,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        h_start: Option<f64>,
        mut observer: O,
    ) -> Result<Reached<N>>
    where
        F: Fn(f64, &[f64; N]) -> Option<[f64; N]>,
        O: FnMut(f64, &[f64; N]) -> bool,
    {
        let span = t1 - t0;
        if span == 0.0 {
            return Ok(Reached {
                t: t0,
                y: y0,
                h_next: h_start.unwrap_or(self.h_init),
            });
        }
        let dir = span.signum();
        let mut t = t0;
        let mut y = y0;
        let mut h = h_start.unwrap_or(self.h_init).abs().min(self.h_max).max(self.h_min);
        let mut k1 = f(t, &y).ok_or(GeomError::StepFailure { step: h, at: t })?;
        let mut steps = 0usize;
        loop {
            let remaining = (t1 - t) * dir;
            if remaining <= 1e-15 * (1.0 + t.abs()) {
                return Ok(Reached { t: t1, y, h_next: h });
            }
            let mut last = false;
            let mut hs = h;
            if hs >= remaining {
                hs = remaining;
                last = true;
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(GeomError::StepFailure { step: hs, at: t });
            }
            let hd = hs * dir;
            let trial = (|| {
                let k2 = f(t + C2 * hd, &comb(&y, hd, &[(A21, &k1)]))?;
                let k3 = f(t + C3 * hd, &comb(&y, hd, &[(A31, &k1), (A32, &k2)]))?;
                let k4 = f(
                    t + C4 * hd,
                    &comb(&y, hd, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
                )?;
                let k5 = f(
                    t + C5 * hd,
                    &comb(&y, hd, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
                )?;
                let k6 = f(
                    t + hd,
                    &comb(
                        &y,
                        hd,
                        &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                    ),
                )?;
                let y_new = comb(
                    &y,
                    hd,
                    &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
                );
                let k7 = f(t + hd, &y_new)?;
                let mut err = 0.0;
                for i in 0..N {
                    let e = hd
                        * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                            + E7 * k7[i]);
                    let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                    err += (e / sc) * (e / sc);
                }
                let err = (err / N as f64).sqrt();
                if !err.is_finite() {
                    return None;
                }
                Some((y_new, k7, err))
            })();
            match trial {
                Some((y_new, k7, err)) if err <= 1.0 => {
                    t = if last { t1 } else { t + hd };
                    y = y_new;
                    k1 = k7;
                    let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    // a truncated final step says nothing about the natural step size
                    if !last {
                        h = (hs * fac).min(self.h_max);
                    }
                    if !observer(t, &y) {
                        return Ok(Reached { t, y, h_next: h });
                    }
                }
                Some((_, _, err)) => {
                    h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                    if h < self.h_min {
                        return Err(GeomError::StepFailure { step: h, at: t });
                    }
                }
                None => {
                    h = hs * 0.25;
                    if h < self.h_min {
                        return Err(GeomError::StepFailure { step: h, at: t });
                    }
                }
            }
        }
    }
}

/// Classical fixed-step RK4, used to audit adaptive results.
pub fn rk4_fixed<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t1: f64, steps: usize) -> Option<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> Option<[f64; N]>,
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let mut t = t0;
    for _ in 0..steps {
        let k1 = f(t, &y)?;
        let k2 = f(t + h / 2.0, &comb(&y, h, &[(0.5, &k1)]))?;
        let k3 = f(t + h / 2.0, &comb(&y, h, &[(0.5, &k2)]))?;
        let k4 = f(t + h, &comb(&y, h, &[(1.0, &k3)]))?;
        y = comb(&y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
        t += h;
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_full_period() {
        let f = |_t: f64, y: &[f64; 2]| Some([y[1], -y[0]]);
        let r = Dopri5::default()
            .integrate(f, 0.0, [1.0, 0.0], 2.0 * std::f64::consts::PI, None, |_, _| true)
            .unwrap();
        assert!((r.y[0] - 1.0).abs() < 1e-10);
        assert!(r.y[1].abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let f = |_t: f64, y: &[f64; 1]| Some([y[0]]);
        let r = Dopri5::default()
            .integrate(f, 1.0, [1.0], 0.0, None, |_, _| true)
            .unwrap();
        assert!((r.y[0] - (-1.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn observer_stops_early() {
        let f = |_t: f64, _y: &[f64; 1]| Some([1.0]);
        let r = Dopri5::default()
            .integrate(f, 0.0, [0.0], 10.0, None, |t, _| t < 1.0)
            .unwrap();
        assert!(r.t >= 1.0 && r.t < 10.0);
    }

    #[test]
    fn domain_violation_shrinks_steps_then_fails() {
        // y' = 1 with the domain y < 0.5: the step can never cross.
        let f = |_t: f64, y: &[f64; 1]| if y[0] < 0.5 { Some([1.0]) } else { None };
        let err = Dopri5::default().integrate(f, 0.0, [0.0], 1.0, None, |_, _| true);
        assert!(matches!(err, Err(GeomError::StepFailure { .. })));
    }

    #[test]
    fn rk4_matches_exponential() {
        let y = rk4_fixed(|_t, y: &[f64; 1]| Some([y[0]]), 0.0, [1.0], 1.0, 100).unwrap();
        assert!((y[0] - std::f64::consts::E).abs() < 1e-8);
    }
}
