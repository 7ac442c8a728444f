//! Singular functions `ψ₀ … ψ₄` carried by the characteristic, and the
//! subtraction that turns the discontinuous problem into a smooth one.
//!
//! With `z = (d(t) − x) / (2√(εt))`:
//!
//! ```text
//! ψ₀ = erfc(z),   E = exp(−z²)
//! ψ₁ = (d(t) − x) ψ₀ − 2 √(εt/π) E
//! ψᵢ = (d(t) − x) ψᵢ₋₁ + 2εt (i − 1) ψᵢ₋₂,   i = 2, 3, 4
//! ```
//!
//! Each `ψᵢ` solves `−ε u_xx + a(t) u_x + u_t = 0` and `∂ψᵢ/∂x = −i ψᵢ₋₁`.

use crate::error::{bail, Result};
use crate::math::{exp, sqrt};
use crate::problem::{CharacteristicCurve, Convection, ProblemSpec};
use crate::quad::CumulativeIntegral;

/// Gaussian exponents below this are flushed to zero.
const EXP_FLOOR: f64 = -700.0;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Complementary error function `erfc(z) = 2/√π ∫_z^∞ e^{−r²} dr`.
#[inline]
pub fn erfc(z: f64) -> f64 {
    libm::erfc(z)
}

/// How much of the singular expansion is subtracted from `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// `S = 0.5 [φ] e^{−B} ψ₀`, leaving `y = u − S`.
    Jump,
    /// Additionally removes `−0.5 [φ'] e^{−B} ψ₁`, leaving `y₁`.
    Slope,
}

impl Level {
    pub fn from_index(level: u8) -> Result<Self> {
        match level {
            0 => Ok(Level::Jump),
            1 => Ok(Level::Slope),
            _ => bail!(Argument, "subtraction level must be 0 or 1, got {level}"),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Level::Jump => 0,
            Level::Slope => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SingularBasis {
    eps: f64,
    curve: CharacteristicCurve,
    convection: Convection,
    jumps: [f64; 5],
    reaction: Option<CumulativeIntegral>,
}

impl SingularBasis {
    pub fn new(problem: &ProblemSpec) -> Result<Self> {
        let curve = problem.characteristic_curve()?;
        let reaction = problem.reaction.as_ref().map(|b| CumulativeIntegral::new(b.clone(), problem.t_final));
        Self::from_parts(problem.eps, curve, problem.convection.clone(), problem.initial.jumps(), reaction)
    }

    pub fn from_parts(
        eps: f64,
        curve: CharacteristicCurve,
        convection: Convection,
        jumps: [f64; 5],
        reaction: Option<CumulativeIntegral>,
    ) -> Result<Self> {
        if !(eps > 0.0) {
            bail!(InvalidProblem, "eps must be positive, got {eps}");
        }
        if jumps[0] == 0.0 {
            bail!(InvalidProblem, "singular basis needs a nonzero jump");
        }
        Ok(SingularBasis { eps, curve, convection, jumps, reaction })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn curve(&self) -> &CharacteristicCurve {
        &self.curve
    }

    pub fn jumps(&self) -> &[f64; 5] {
        &self.jumps
    }

    pub fn t_final(&self) -> f64 {
        self.curve.t_final()
    }

    /// `e^{−∫₀ᵗ b}`; identically one when `b ≡ 0`.
    pub fn decay(&self, t: f64) -> f64 {
        match &self.reaction {
            Some(b) => exp(-b.eval(t)),
            None => 1.0,
        }
    }

    fn check_point(&self, x: f64, t: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&x) || !(t >= 0.0 && t <= self.t_final()) {
            bail!(Domain, "point ({x}, {t}) outside [0,1] x [0,{}]", self.t_final());
        }
        Ok(())
    }

    /// `ψᵢ(x, t)` for `i ∈ 0..=4`.
    pub fn psi(&self, i: usize, x: f64, t: f64) -> Result<f64> {
        if i > 4 {
            bail!(Domain, "psi index must be in 0..=4, got {i}");
        }
        self.check_point(x, t)?;
        Ok(self.psi_all(x, t)[i])
    }

    /// `E(x, t) = exp(−(x − d(t))² / (4εt))`, zero at `t = 0`.
    pub fn gaussian(&self, x: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let z = (self.curve.position_unchecked(t) - x) / (2.0 * sqrt(self.eps * t));
        gaussian_of(z)
    }

    /// All five singular functions at once. At `t = 0` the one-sided limits
    /// are used, with `ψ₀(d, 0) = 1`.
    pub fn psi_all(&self, x: f64, t: f64) -> [f64; 5] {
        let mut psi = [0.0; 5];
        let offset;
        if t <= 0.0 {
            offset = self.curve.start() - x;
            psi[0] = if offset > 0.0 {
                0.0
            } else if offset == 0.0 {
                1.0
            } else {
                2.0
            };
            psi[1] = if offset < 0.0 { 2.0 * offset } else { 0.0 };
        } else {
            offset = self.curve.position_unchecked(t) - x;
            let width = sqrt(self.eps * t);
            let z = offset / (2.0 * width);
            psi[0] = erfc(z);
            psi[1] = offset * psi[0] - 2.0 * width * FRAC_1_SQRT_PI * gaussian_of(z);
        }
        let two_eps_t = 2.0 * self.eps * t.max(0.0);
        for i in 2..5 {
            psi[i] = offset * psi[i - 1] + two_eps_t * (i - 1) as f64 * psi[i - 2];
        }
        psi
    }

    /// Subtracted function at level 0 (`S_g`) or level 1 (`S_g − 0.5 [φ'] e^{−B} ψ₁`).
    pub fn singular_part(&self, x: f64, t: f64, level: Level) -> f64 {
        let psi = self.psi_all(x, t);
        let decay = self.decay(t);
        let mut s = 0.5 * self.jumps[0] * decay * psi[0];
        if level == Level::Slope {
            s -= 0.5 * self.jumps[1] * decay * psi[1];
        }
        s
    }

    /// `−ε ψᵢ_xx + a ψᵢ_x + ψᵢ_t` by fourth-order central differences with step `h`.
    pub fn psi_residual(&self, i: usize, x: f64, t: f64, h: f64) -> Result<f64> {
        if i > 4 {
            bail!(Domain, "psi index must be in 0..=4, got {i}");
        }
        if !(h > 0.0) || x - 2.0 * h < 0.0 || x + 2.0 * h > 1.0 || t - 2.0 * h <= 0.0 || t + 2.0 * h > self.t_final() {
            bail!(Domain, "stencil of width {h} around ({x}, {t}) leaves the domain");
        }
        let f = |x: f64, t: f64| self.psi_all(x, t)[i];
        let c = f(x, t);
        let (xp1, xp2, xm1, xm2) = (f(x + h, t), f(x + 2.0 * h, t), f(x - h, t), f(x - 2.0 * h, t));
        let (tp1, tp2, tm1, tm2) = (f(x, t + h), f(x, t + 2.0 * h), f(x, t - h), f(x, t - 2.0 * h));
        let dx = (-xp2 + 8.0 * xp1 - 8.0 * xm1 + xm2) / (12.0 * h);
        let dxx = (-xp2 + 16.0 * xp1 - 30.0 * c + 16.0 * xm1 - xm2) / (12.0 * h * h);
        let dt = (-tp2 + 8.0 * tp1 - 8.0 * tm1 + tm2) / (12.0 * h);
        Ok(-self.eps * dxx + self.convection.eval(x, t) * dx + dt)
    }
}

#[inline]
fn gaussian_of(z: f64) -> f64 {
    let e = -z * z;
    if e < EXP_FLOOR {
        0.0
    } else {
        exp(e)
    }
}

/// Data of the smooth remainder problem `y = u − S` (or `y₁`).
#[derive(Clone, Copy)]
pub struct RemainderData<'a> {
    problem: &'a ProblemSpec,
    basis: &'a SingularBasis,
    level: Level,
}

impl<'a> RemainderData<'a> {
    pub fn new(problem: &'a ProblemSpec, basis: &'a SingularBasis, level: Level) -> Self {
        RemainderData { problem, basis, level }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// `y(x, 0)`: `φ(x)` left of `d`, `φ(d⁻)` at `d`, and right of `d` the
    /// right piece minus the limit of the subtracted part.
    pub fn initial(&self, x: f64) -> f64 {
        let ic = &self.problem.initial;
        let d = ic.discontinuity();
        if x <= d {
            return ic.left().value(x);
        }
        let jumps = self.basis.jumps();
        let mut y = ic.right().value(x) - jumps[0];
        if self.level == Level::Slope {
            y -= jumps[1] * (x - d);
        }
        y
    }

    pub fn left(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.initial(0.0);
        }
        self.problem.left_boundary.eval(t) - self.basis.singular_part(0.0, t, self.level)
    }

    pub fn right(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.initial(1.0);
        }
        self.problem.right_boundary.eval(t) - self.basis.singular_part(1.0, t, self.level)
    }
}

/// Convenience constructor matching [`RemainderData::new`].
pub fn remainder_data<'a>(problem: &'a ProblemSpec, basis: &'a SingularBasis, level: Level) -> RemainderData<'a> {
    RemainderData::new(problem, basis, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{InitialCondition, Piece, ScalarField1, ScalarField2};

    fn basis(eps: f64, a: fn(f64) -> f64, d: f64, jumps: [f64; 5]) -> SingularBasis {
        let a = ScalarField1::new(a);
        let curve = CharacteristicCurve::from_rate(a.clone(), d, 1.0);
        SingularBasis::from_parts(eps, curve, Convection::Time(a), jumps, None).unwrap()
    }

    fn example1() -> ProblemSpec {
        let ic = InitialCondition::new(Piece::constant(-2.0), Piece::constant(1.0), 0.3).unwrap();
        ProblemSpec::builder(Convection::Time(ScalarField1::new(|t| 1.0 + t * t)), ic, 1.0 / 64.0, 0.5)
            .source(ScalarField2::new(|x, t| 4.0 * x * (1.0 - x) * t + t * t))
            .boundary(ScalarField1::constant(-2.0), ScalarField1::constant(1.0))
            .build()
            .unwrap()
    }

    fn example2() -> ProblemSpec {
        let ic = InitialCondition::new(
            Piece::polynomial(&[0.0, 0.0, 0.0, -1.0]),
            Piece::polynomial(&[1.0, -3.0, 3.0, -1.0]),
            0.3,
        )
        .unwrap();
        ProblemSpec::builder(Convection::Time(ScalarField1::new(|t| 1.0 + t * t)), ic, 1.0 / 64.0, 0.5)
            .reaction(ScalarField1::constant(1.0))
            .source(ScalarField2::new(|x, t| 4.0 * x * (1.0 - x) * t + t * t))
            .build()
            .unwrap()
    }

    #[test]
    fn erfc_reference_values() {
        assert_eq!(erfc(0.0), 1.0);
        for z in [0.5, 1.0, 2.0] {
            assert!((erfc(-z) - (2.0 - erfc(z))).abs() < 1e-15);
        }
        assert!((erfc(1.0) - 0.157_299_207_050_285_1).abs() < 1e-16);
    }

    #[test]
    fn values_on_the_characteristic() {
        let eps = 0.01;
        let b = basis(eps, |t| 1.0 + t, 0.3, [1.0, 0.0, 0.0, 0.0, 0.0]);
        let t = 0.4;
        let x = b.curve().position(t).unwrap();
        assert!((b.psi(0, x, t).unwrap() - 1.0).abs() < 1e-15);
        let expected = -2.0 * libm::sqrt(eps * t / core::f64::consts::PI);
        assert!((b.psi(1, x, t).unwrap() - expected).abs() < 1e-15);
        assert!((b.psi(2, x, t).unwrap() - 2.0 * eps * t).abs() < 1e-15);
        assert!(matches!(b.psi(5, x, t), Err(crate::Error::Domain(_))));
        assert!(matches!(b.psi(0, 1.5, t), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn initial_limits_and_jump_capture() {
        let b = basis(0.01, |_| 1.0, 0.3, [1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(b.psi(0, 0.2, 0.0).unwrap(), 0.0);
        assert_eq!(b.psi(0, 0.3, 0.0).unwrap(), 1.0);
        assert_eq!(b.psi(0, 0.4, 0.0).unwrap(), 2.0);
        assert!((b.psi(1, 0.5, 0.0).unwrap() + 0.4).abs() < 1e-15);
        let t = 1e-10;
        assert!(b.psi(0, 0.29, t).unwrap() <= 1e-12);
        assert!((b.psi(0, 0.31, t).unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn singular_part_levels() {
        let p = example1();
        let basis = SingularBasis::new(&p).unwrap();
        let t = 0.3;
        let x = basis.curve().position(t).unwrap();
        assert!((basis.singular_part(x, t, Level::Jump) - 1.5).abs() < 1e-14);
        // [φ'] = 0 so both levels coincide.
        for &(x, t) in &[(0.1, 0.2), (0.7, 0.45), (0.0, 0.1)] {
            assert_eq!(basis.singular_part(x, t, Level::Jump), basis.singular_part(x, t, Level::Slope));
        }
    }

    #[test]
    fn remainder_initial_data() {
        let p = example1();
        let basis = SingularBasis::new(&p).unwrap();
        let data = RemainderData::new(&p, &basis, Level::Jump);
        assert_eq!(data.initial(0.5), -2.0);
        assert_eq!(data.initial(0.1), -2.0);
        assert_eq!(data.initial(0.3), -2.0);

        let p = example2();
        let basis = SingularBasis::new(&p).unwrap();
        let data = RemainderData::new(&p, &basis, Level::Slope);
        assert!((data.initial(0.5) + 0.005).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_at_initial_time() {
        for p in [example1(), example2()] {
            let basis = SingularBasis::new(&p).unwrap();
            for level in [Level::Jump, Level::Slope] {
                let data = RemainderData::new(&p, &basis, level);
                for k in 0..=50 {
                    let x = k as f64 / 50.0;
                    if (x - 0.3).abs() < 1e-12 {
                        continue;
                    }
                    let u = data.initial(x) + basis.singular_part(x, 0.0, level);
                    assert!((u - p.initial.value(x)).abs() < 1e-13, "x={x} level={level:?}");
                }
            }
        }
    }

    #[test]
    fn boundary_values_subtract_singular_part() {
        let p = example2();
        let basis = SingularBasis::new(&p).unwrap();
        let data = RemainderData::new(&p, &basis, Level::Slope);
        let t = 0.25;
        assert_eq!(data.left(t), -basis.singular_part(0.0, t, Level::Slope));
        assert_eq!(data.right(t), -basis.singular_part(1.0, t, Level::Slope));
        assert!((basis.decay(t) - libm::exp(-t)).abs() < 1e-13);
    }

    #[test]
    fn residual_vanishes_for_first_two_functions() {
        let b = basis(0.1, |_| 1.0, 0.3, [1.0, 0.0, 0.0, 0.0, 0.0]);
        for i in 0..2 {
            let r = b.psi_residual(i, 0.5, 0.25, 1e-4).unwrap();
            assert!(r.abs() <= 1e-5, "i={i} r={r}");
        }
        assert!(b.psi_residual(0, 0.0001, 0.25, 1e-3).is_err());
    }

    #[test]
    fn recursion_holds_exactly() {
        let b = basis(0.05, |t| 1.0 + t * t, 0.4, [1.0, 0.0, 0.0, 0.0, 0.0]);
        for &(x, t) in &[(0.1, 0.3), (0.5, 0.05), (0.9, 0.9)] {
            let p = b.psi_all(x, t);
            let off = b.curve().position(t).unwrap() - x;
            for i in 2..5 {
                let rhs = off * p[i - 1] + 2.0 * 0.05 * t * (i - 1) as f64 * p[i - 2];
                assert_eq!(p[i] - rhs, 0.0);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn psi0_and_gaussian_bounds(x in 0.0f64..1.0, t in 1e-8f64..1.0, e in 0u32..27) {
            let eps = libm::ldexp(1.0, -(e as i32));
            let b = basis(eps, |t| 1.0 + t, 0.3, [1.0, 0.0, 0.0, 0.0, 0.0]);
            let p0 = b.psi(0, x, t).unwrap();
            proptest::prop_assert!((0.0..=2.0).contains(&p0));
            let g = b.gaussian(x, t);
            proptest::prop_assert!((0.0..=1.0).contains(&g));
        }
    }
}
