//! Continuous problem data:
//!
//! ```text
//! -ε u_xx + a u_x + b(t) u + u_t = f(x,t)   on (0,1) × (0,T]
//! u(x,0) = φ(x)   with a jump at x = d
//! u(0,t) = g0(t),  u(1,t) = g1(t)
//! ```

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{bail, Result};
use crate::math::abs;
use crate::quad::CumulativeIntegral;

/// Number of equispaced times used to validate sign conditions on `a` and `b`.
pub const VALIDATION_SAMPLES: usize = 10_000;

/// Bisection tolerance for the crossing time.
pub const CROSSING_TOLERANCE: f64 = 1e-12;

/// Real function of time.
#[derive(Clone)]
pub struct ScalarField1(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl ScalarField1 {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        ScalarField1(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

impl fmt::Debug for ScalarField1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField1(..)")
    }
}

/// Real function of `(x, t)`.
#[derive(Clone)]
pub struct ScalarField2(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>);

impl ScalarField2 {
    pub fn new<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        ScalarField2(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c)
    }

    #[inline]
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        (self.0)(x, t)
    }
}

impl fmt::Debug for ScalarField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField2(..)")
    }
}

/// Convective coefficient.
///
/// The singular part only solves the homogeneous equation when `a = a(t)`.
/// `SpaceTime` is accepted so that the scheme can still be run on such
/// problems; the result is then not parameter-uniform.
#[derive(Clone, Debug)]
pub enum Convection {
    Time(ScalarField1),
    SpaceTime(ScalarField2),
}

impl Convection {
    #[inline]
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            Convection::Time(a) => a.eval(t),
            Convection::SpaceTime(a) => a.eval(x, t),
        }
    }

    pub fn depends_on_space(&self) -> bool {
        matches!(self, Convection::SpaceTime(_))
    }
}

/// One smooth piece of the initial condition, with derivatives up to order 4.
#[derive(Clone)]
pub enum Piece {
    /// Polynomial with coefficients in increasing degree.
    Polynomial(Vec<f64>),
    /// `f(x, k)` returns the `k`-th derivative at `x`, `k = 0..=4`.
    Custom(Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>),
}

impl Piece {
    pub fn constant(c: f64) -> Self {
        Piece::Polynomial(alloc::vec![c])
    }

    pub fn polynomial(coeffs: &[f64]) -> Self {
        Piece::Polynomial(coeffs.to_vec())
    }

    pub fn custom<F: Fn(f64, usize) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Piece::Custom(Arc::new(f))
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        match self {
            Piece::Polynomial(c) => {
                // Horner on the differentiated coefficients.
                let mut acc = 0.0;
                for (deg, &coef) in c.iter().enumerate().skip(order).rev() {
                    let falling: f64 = (deg - order + 1..=deg).map(|v| v as f64).product();
                    acc = acc * x + coef * falling;
                }
                acc
            }
            Piece::Custom(f) => f(x, order),
        }
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Piece::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Initial condition `φ`, smooth on either side of the jump at `d`.
#[derive(Clone, Debug)]
pub struct InitialCondition {
    left: Piece,
    right: Piece,
    discontinuity: f64,
}

impl InitialCondition {
    pub fn new(left: Piece, right: Piece, discontinuity: f64) -> Result<Self> {
        if !(discontinuity > 0.0 && discontinuity < 1.0) {
            bail!(InvalidProblem, "discontinuity must lie in (0,1), got {discontinuity}");
        }
        let ic = InitialCondition { left, right, discontinuity };
        if ic.jump_unchecked(0) == 0.0 {
            bail!(InvalidProblem, "initial condition has no jump at d = {discontinuity}");
        }
        Ok(ic)
    }

    pub fn discontinuity(&self) -> f64 {
        self.discontinuity
    }

    pub fn left(&self) -> &Piece {
        &self.left
    }

    pub fn right(&self) -> &Piece {
        &self.right
    }

    /// `φ(x)`; at `x = d` the left limit is returned.
    pub fn value(&self, x: f64) -> f64 {
        if x <= self.discontinuity {
            self.left.value(x)
        } else {
            self.right.value(x)
        }
    }

    /// `[φ⁽ᵒʳᵈᵉʳ⁾](d) = φ⁽ᵒʳᵈᵉʳ⁾(d⁺) − φ⁽ᵒʳᵈᵉʳ⁾(d⁻)`.
    pub fn jump(&self, order: usize) -> Result<f64> {
        if order > 4 {
            bail!(Domain, "jump order must be in 0..=4, got {order}");
        }
        Ok(self.jump_unchecked(order))
    }

    pub fn jumps(&self) -> [f64; 5] {
        core::array::from_fn(|k| self.jump_unchecked(k))
    }

    fn jump_unchecked(&self, order: usize) -> f64 {
        let d = self.discontinuity;
        self.right.derivative(order, d) - self.left.derivative(order, d)
    }

    /// Same data with the two pieces exchanged.
    pub fn swapped(&self) -> Self {
        InitialCondition { left: self.right.clone(), right: self.left.clone(), discontinuity: self.discontinuity }
    }
}

/// Full problem definition. Build with [`ProblemSpec::builder`].
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub convection: Convection,
    /// `None` means `b ≡ 0`.
    pub reaction: Option<ScalarField1>,
    /// `None` means `f ≡ 0`.
    pub source: Option<ScalarField2>,
    pub initial: InitialCondition,
    pub left_boundary: ScalarField1,
    pub right_boundary: ScalarField1,
    pub eps: f64,
    pub alpha: f64,
    pub t_final: f64,
    /// Closed-form characteristic position `d(t)`, if known.
    pub characteristic: Option<ScalarField1>,
}

impl ProblemSpec {
    pub fn builder(convection: Convection, initial: InitialCondition, eps: f64, t_final: f64) -> ProblemBuilder {
        ProblemBuilder {
            convection,
            initial,
            eps,
            t_final,
            reaction: None,
            source: None,
            left_boundary: None,
            right_boundary: None,
            alpha: None,
            characteristic: None,
        }
    }

    pub fn characteristic_curve(&self) -> Result<CharacteristicCurve> {
        CharacteristicCurve::for_problem(self)
    }
}

pub struct ProblemBuilder {
    convection: Convection,
    initial: InitialCondition,
    eps: f64,
    t_final: f64,
    reaction: Option<ScalarField1>,
    source: Option<ScalarField2>,
    left_boundary: Option<ScalarField1>,
    right_boundary: Option<ScalarField1>,
    alpha: Option<f64>,
    characteristic: Option<ScalarField1>,
}

impl ProblemBuilder {
    pub fn reaction(mut self, b: ScalarField1) -> Self {
        self.reaction = Some(b);
        self
    }

    pub fn source(mut self, f: ScalarField2) -> Self {
        self.source = Some(f);
        self
    }

    /// Dirichlet data at `x = 0` and `x = 1`; both default to zero.
    pub fn boundary(mut self, g0: ScalarField1, g1: ScalarField1) -> Self {
        self.left_boundary = Some(g0);
        self.right_boundary = Some(g1);
        self
    }

    /// Lower bound for the convective coefficient. Defaults to its sampled minimum.
    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn characteristic(mut self, position: ScalarField1) -> Self {
        self.characteristic = Some(position);
        self
    }

    pub fn build(self) -> Result<ProblemSpec> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            bail!(InvalidProblem, "eps must lie in (0,1], got {}", self.eps);
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            bail!(InvalidProblem, "final time must be positive, got {}", self.t_final);
        }
        let times = (0..=VALIDATION_SAMPLES).map(|k| self.t_final * k as f64 / VALIDATION_SAMPLES as f64);
        let min_a = match &self.convection {
            Convection::Time(a) => times.clone().map(|t| a.eval(t)).fold(f64::INFINITY, f64::min),
            Convection::SpaceTime(a) => times
                .clone()
                .flat_map(|t| (0..=10).map(move |i| (0.1 * i as f64, t)))
                .map(|(x, t)| a.eval(x, t))
                .fold(f64::INFINITY, f64::min),
        };
        let alpha = self.alpha.unwrap_or(min_a);
        if !(alpha > 0.0) {
            bail!(InvalidProblem, "convection lower bound must be positive, got {alpha}");
        }
        if !(min_a >= alpha) {
            bail!(InvalidProblem, "convective coefficient drops to {min_a} below alpha = {alpha}");
        }
        if let Some(b) = &self.reaction {
            let min_b = times.map(|t| b.eval(t)).fold(f64::INFINITY, f64::min);
            if !(min_b >= 0.0) {
                bail!(InvalidProblem, "reaction coefficient must be nonnegative, sampled minimum {min_b}");
            }
        }
        if self.convection.depends_on_space() && self.characteristic.is_none() {
            bail!(InvalidProblem, "space-dependent convection needs a closed-form characteristic");
        }
        Ok(ProblemSpec {
            convection: self.convection,
            reaction: self.reaction,
            source: self.source,
            initial: self.initial,
            left_boundary: self.left_boundary.unwrap_or_else(|| ScalarField1::constant(0.0)),
            right_boundary: self.right_boundary.unwrap_or_else(|| ScalarField1::constant(0.0)),
            eps: self.eps,
            alpha,
            t_final: self.t_final,
            characteristic: self.characteristic,
        })
    }
}

#[derive(Clone)]
enum CurveSource {
    Quadrature(CumulativeIntegral),
    Closed(ScalarField1),
}

/// The characteristic `d(t) = d + ∫₀ᵗ a(s) ds` along which the jump travels.
#[derive(Clone)]
pub struct CharacteristicCurve {
    start: f64,
    t_final: f64,
    source: CurveSource,
}

impl fmt::Debug for CharacteristicCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.source {
            CurveSource::Quadrature(_) => "quadrature",
            CurveSource::Closed(_) => "closed-form",
        };
        f.debug_struct("CharacteristicCurve")
            .field("start", &self.start)
            .field("t_final", &self.t_final)
            .field("source", &kind)
            .finish()
    }
}

impl CharacteristicCurve {
    /// Curve from a time-dependent rate, integrated numerically.
    pub fn from_rate(rate: ScalarField1, start: f64, t_final: f64) -> Self {
        CharacteristicCurve { start, t_final, source: CurveSource::Quadrature(CumulativeIntegral::new(rate, t_final)) }
    }

    /// Curve given in closed form; `position(0)` must equal `start`.
    pub fn closed_form(position: ScalarField1, start: f64, t_final: f64) -> Self {
        CharacteristicCurve { start, t_final, source: CurveSource::Closed(position) }
    }

    pub fn for_problem(problem: &ProblemSpec) -> Result<Self> {
        let d = problem.initial.discontinuity();
        if let Some(pos) = &problem.characteristic {
            let p0 = pos.eval(0.0);
            if abs(p0 - d) > 1e-12 {
                bail!(InvalidProblem, "closed-form characteristic starts at {p0}, expected {d}");
            }
            return Ok(Self::closed_form(pos.clone(), d, problem.t_final));
        }
        match &problem.convection {
            Convection::Time(a) => Ok(Self::from_rate(a.clone(), d, problem.t_final)),
            Convection::SpaceTime(_) => {
                bail!(InvalidProblem, "space-dependent convection needs a closed-form characteristic")
            }
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.source, CurveSource::Closed(_))
    }

    /// `d(t)` for `t ∈ [0, T]`.
    pub fn position(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.t_final) {
            bail!(Domain, "time {t} outside [0, {}]", self.t_final);
        }
        Ok(self.position_unchecked(t))
    }

    #[inline]
    pub(crate) fn position_unchecked(&self, t: f64) -> f64 {
        match &self.source {
            CurveSource::Quadrature(ci) => self.start + ci.eval(t),
            CurveSource::Closed(p) => p.eval(t),
        }
    }

    /// Time at which the characteristic reaches `x = 1`, or `None` if it stays
    /// inside the domain up to `T`. A crossing exactly at `T` returns `Some(T)`.
    pub fn crossing_time(&self) -> Option<f64> {
        let end = self.position_unchecked(self.t_final);
        if end < 1.0 {
            return None;
        }
        let (mut lo, mut hi) = (0.0, self.t_final);
        while hi - lo > CROSSING_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.position_unchecked(mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(rate: fn(f64) -> f64, d: f64, t_final: f64) -> CharacteristicCurve {
        CharacteristicCurve::from_rate(ScalarField1::new(rate), d, t_final)
    }

    #[test]
    fn constant_rate_moves_linearly() {
        let c = curve(|_| 1.0, 0.3, 1.0);
        assert!((c.position(0.2).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn quadratic_rate_position() {
        let c = curve(|t| 1.0 + t * t, 0.3, 0.5);
        let expected = 0.3 + 0.5 + 0.125 / 3.0;
        assert!((c.position(0.5).unwrap() - expected).abs() < 1e-13);
        assert!((expected - 0.841_666_666_666_666_6).abs() < 1e-15);
    }

    #[test]
    fn linear_rate_position() {
        let c = curve(|t| 1.0 + t, 0.3, 2.0);
        assert!((c.position(0.5).unwrap() - 0.925).abs() < 1e-13);
    }

    #[test]
    fn position_outside_interval_is_domain_error() {
        let c = curve(|_| 1.0, 0.3, 1.0);
        assert!(matches!(c.position(1.5), Err(crate::Error::Domain(_))));
        assert!(matches!(c.position(-0.1), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn crossing_time_cases() {
        let t = curve(|t| 1.0 + t, 0.3, 2.0).crossing_time().unwrap();
        assert!((t - (libm::sqrt(2.4) - 1.0)).abs() < 1e-11);
        assert!((t - 0.5492).abs() < 1e-4);
        assert!(curve(|_| 1.0, 0.3, 0.5).crossing_time().is_none());
        let t = curve(|_| 2.0, 0.5, 1.0).crossing_time().unwrap();
        assert!((t - 0.25).abs() < 1e-12);
    }

    #[test]
    fn jumps_of_paper_initial_data() {
        let ic = InitialCondition::new(Piece::constant(-2.0), Piece::constant(1.0), 0.3).unwrap();
        assert_eq!(ic.jump(0).unwrap(), 3.0);
        assert_eq!(ic.jump(1).unwrap(), 0.0);
        let ic = InitialCondition::new(
            Piece::polynomial(&[0.0, 0.0, 0.0, -1.0]),
            Piece::polynomial(&[1.0, -3.0, 3.0, -1.0]),
            0.3,
        )
        .unwrap();
        assert!((ic.jump(1).unwrap() + 1.2).abs() < 1e-14);
        assert!((ic.jump(0).unwrap() - 0.37).abs() < 1e-14);
        assert!(matches!(ic.jump(5), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn polynomial_derivatives() {
        // (1-x)^3
        let p = Piece::polynomial(&[1.0, -3.0, 3.0, -1.0]);
        let x = 0.4;
        assert!((p.derivative(0, x) - 0.216).abs() < 1e-15);
        assert!((p.derivative(1, x) + 3.0 * 0.36).abs() < 1e-14);
        assert!((p.derivative(2, x) - 6.0 * 0.6).abs() < 1e-14);
        assert!((p.derivative(3, x) + 6.0).abs() < 1e-14);
        assert_eq!(p.derivative(4, x), 0.0);
    }

    #[test]
    fn rejects_bad_problems() {
        let ic = InitialCondition::new(Piece::constant(0.0), Piece::constant(1.0), 0.5).unwrap();
        assert!(InitialCondition::new(Piece::constant(1.0), Piece::constant(1.0), 0.5).is_err());
        assert!(InitialCondition::new(Piece::constant(0.0), Piece::constant(1.0), 1.0).is_err());
        let negative =
            ProblemSpec::builder(Convection::Time(ScalarField1::new(|t| 1.0 - 2.0 * t)), ic.clone(), 0.1, 1.0).build();
        assert!(matches!(negative, Err(crate::Error::InvalidProblem(_))));
        let bad_b = ProblemSpec::builder(Convection::Time(ScalarField1::constant(1.0)), ic.clone(), 0.1, 1.0)
            .reaction(ScalarField1::new(|t| t - 0.5))
            .build();
        assert!(bad_b.is_err());
        let ok = ProblemSpec::builder(Convection::Time(ScalarField1::new(|t| 1.0 + t)), ic, 0.1, 1.0).build().unwrap();
        assert_eq!(ok.alpha, 1.0);
    }

    proptest::proptest! {
        #[test]
        fn position_strictly_increasing(t1 in 0.0f64..2.0, dt in 1e-6f64..1.0) {
            let c = curve(|t| 1.0 + t, 0.3, 3.0);
            let t2 = t1 + dt;
            proptest::prop_assert!(c.position(t2).unwrap() > c.position(t1).unwrap());
        }

        #[test]
        fn jump_is_antisymmetric(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in 0.05f64..0.95) {
            let ic = InitialCondition::new(Piece::polynomial(&[a, b]), Piece::polynomial(&[a + 1.0, c, b]), d).unwrap();
            let sw = ic.swapped();
            for k in 0..5 {
                proptest::prop_assert_eq!(ic.jump(k).unwrap(), -sw.jump(k).unwrap());
            }
        }
    }
}
