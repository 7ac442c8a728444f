//! Quadrature for the time integrals `A(t) = ∫ a` and `B(t) = ∫ b`.

use alloc::vec::Vec;

use crate::math::abs;
use crate::problem::ScalarField1;

const MAX_DEPTH: u32 = 40;

/// Adaptive Simpson rule on `[lo, hi]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    simpson_step(f, lo, hi, flo, fmid, fhi, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let lmid = 0.5 * (lo + mid);
    let rmid = 0.5 * (mid + hi);
    let (flm, frm) = (f(lmid), f(rmid));
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let delta = left + right - whole;
    if depth == 0 || abs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1)
        + simpson_step(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1)
}

/// Cumulative integral `t ↦ ∫₀ᵗ rate(s) ds` on `[0, t_final]`.
///
/// The integral is tabulated at equispaced sample times and evaluated in
/// between with the cubic Hermite interpolant built from the tabulated values
/// and the exact slopes `rate(t_k)`.
#[derive(Clone, Debug)]
pub struct CumulativeIntegral {
    rate: ScalarField1,
    t_final: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CumulativeIntegral {
    pub const SAMPLES: usize = 4096;
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(rate: ScalarField1, t_final: f64) -> Self {
        Self::with_samples(rate, t_final, Self::SAMPLES)
    }

    pub fn with_samples(rate: ScalarField1, t_final: f64, samples: usize) -> Self {
        let samples = samples.max(1);
        let step = t_final / samples as f64;
        let seg_tol = Self::TOLERANCE / samples as f64;
        let mut values = Vec::with_capacity(samples + 1);
        let mut slopes = Vec::with_capacity(samples + 1);
        let mut acc = 0.0;
        values.push(0.0);
        slopes.push(rate.eval(0.0));
        for k in 1..=samples {
            let lo = t_final * (k - 1) as f64 / samples as f64;
            let hi = if k == samples { t_final } else { t_final * k as f64 / samples as f64 };
            acc += adaptive_simpson(&|s| rate.eval(s), lo, hi, seg_tol);
            values.push(acc);
            slopes.push(rate.eval(hi));
        }
        CumulativeIntegral { rate, t_final, step, values, slopes }
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn rate(&self) -> &ScalarField1 {
        &self.rate
    }

    /// Value at `t`, clamped to `[0, t_final]`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let last = self.values.len() - 1;
        if t >= self.t_final {
            return self.values[last];
        }
        let k = ((t / self.step) as usize).min(last - 1);
        let t0 = self.t_final * k as f64 / last as f64;
        let h = self.step;
        let s = (t - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_exponential() {
        let v = adaptive_simpson(&libm::exp, 0.0, 1.0, 1e-13);
        assert!((v - (core::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn cumulative_matches_closed_form_between_samples() {
        let a = ScalarField1::new(|t| 1.0 + t * t);
        let ci = CumulativeIntegral::new(a, 0.5);
        for k in 0..=97 {
            let t = 0.5 * k as f64 / 97.0;
            assert!((ci.eval(t) - (t + t * t * t / 3.0)).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn cumulative_handles_oscillating_rate() {
        let ci = CumulativeIntegral::new(ScalarField1::new(|t| 2.0 + libm::sin(7.0 * t)), 2.0);
        for &t in &[0.1, 0.77, 1.3, 1.999] {
            let exact = 2.0 * t + (1.0 - libm::cos(7.0 * t)) / 7.0;
            assert!((ci.eval(t) - exact).abs() < 1e-11, "t={t}");
        }
    }
}
