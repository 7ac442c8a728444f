//! The five test problems.

use std::fmt;

use spcd_core::{Convection, InitialCondition, Piece, ProblemSpec, ScalarField1, ScalarField2};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExampleSpec {
    pub id: u32,
    pub equation: &'static str,
    pub data: &'static str,
    pub notes: &'static str,
    /// `false` for problems outside the class where the method is parameter-uniform.
    pub expected_uniform: bool,
}

const CATALOG: [ExampleSpec; 5] = [
    ExampleSpec {
        id: 1,
        equation: "-eps u_xx + (1+t^2) u_x + u_t = 4x(1-x)t + t^2 on (0,1)x(0,0.5]",
        data: "u(x,0) = -2 (x < 0.3), 1 (x >= 0.3); u(0,t) = -2, u(1,t) = 1; d(t) = 0.3 + t + t^3/3",
        notes: "[phi'](d) = 0: almost first order; interior and boundary layers stay apart",
        expected_uniform: true,
    },
    ExampleSpec {
        id: 2,
        equation: "-eps u_xx + (1+t^2) u_x + u + u_t = 4x(1-x)t + t^2 on (0,1)x(0,0.5]",
        data: "u(x,0) = -x^3 (x < 0.3), (1-x)^3 (x >= 0.3); u(0,t) = u(1,t) = 0",
        notes: "[phi'](d) = -1.2: order 1/2 at level 0, restored toward 1 at level 1",
        expected_uniform: true,
    },
    ExampleSpec {
        id: 3,
        equation: "-eps u_xx + (1+t) u_x + u_t = 4x(1-x)t + t^2 on (0,1)x(0,2]",
        data: "u(x,0) = -2 (x < 0.3), 1 (x >= 0.3); u(0,t) = -2, u(1,t) = 1; d(t) = 0.3 + t + t^2/2",
        notes: "layers merge at T* = sqrt(2.4) - 1; Shishkin mesh in time around T*",
        expected_uniform: true,
    },
    ExampleSpec {
        id: 4,
        equation: "-eps u_xx + (1+t^2) u_x + u_t = 4x(1-x)t + t^2 on (0,1)x(0,0.5]",
        data: "u(x,0) = -2x (x < d), 1 - x^2 (x >= d); u(0,t) = 4t^2, u(1,t) = t(t+0.5)",
        notes: "eps-dependent d = min(0.3, sqrt(eps)); [phi'](d) != 0, order 1/2",
        expected_uniform: true,
    },
    ExampleSpec {
        id: 5,
        equation: "-eps u_xx + (1+x^2) u_x + u_t = 4x(1-x)t + t^2 on (0,1)x(0,0.5]",
        data: "u(x,0) = -2 (x < 0.1), 1 (x >= 0.1); u(0,t) = -2, u(1,t) = 1; d(t) = (0.1 + tan t)/(1 - 0.1 tan t)",
        notes: "space-dependent convection: expected non-uniform",
        expected_uniform: false,
    },
];

pub fn catalog() -> &'static [ExampleSpec] {
    &CATALOG
}

pub fn example(id: u32) -> Result<&'static ExampleSpec> {
    CATALOG.iter().find(|e| e.id == id).ok_or_else(|| Error::Usage(format!("unknown example {id}, expected 1..=5")))
}

impl ExampleSpec {
    /// The problem at a given ε.
    pub fn problem(&self, eps: f64) -> Result<ProblemSpec> {
        problem(self.id, eps)
    }

    pub fn warning(&self) -> Option<String> {
        (!self.expected_uniform).then(|| {
            format!(
                "WARNING: example {} has convection depending on x; the method is not parameter-uniform \
                 for a = a(x,t) and the differences below are not expected to converge uniformly",
                self.id
            )
        })
    }
}

impl fmt::Display for ExampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example {}: {}", self.id, self.equation)?;
        writeln!(f, "  {}", self.data)?;
        write!(f, "  {}", self.notes)
    }
}

fn source() -> ScalarField2 {
    ScalarField2::new(|x, t| 4.0 * x * (1.0 - x) * t + t * t)
}

fn step(d: f64) -> Result<InitialCondition> {
    Ok(InitialCondition::new(Piece::constant(-2.0), Piece::constant(1.0), d)?)
}

fn quadratic_rate() -> Convection {
    Convection::Time(ScalarField1::new(|t| 1.0 + t * t))
}

fn cubic_curve(d: f64) -> ScalarField1 {
    ScalarField1::new(move |t| d + t + t * t * t / 3.0)
}

pub fn problem(id: u32, eps: f64) -> Result<ProblemSpec> {
    let p = match id {
        1 => ProblemSpec::builder(quadratic_rate(), step(0.3)?, eps, 0.5)
            .source(source())
            .boundary(ScalarField1::constant(-2.0), ScalarField1::constant(1.0))
            .characteristic(cubic_curve(0.3))
            .build()?,
        2 => {
            let ic = InitialCondition::new(
                Piece::polynomial(&[0.0, 0.0, 0.0, -1.0]),
                Piece::polynomial(&[1.0, -3.0, 3.0, -1.0]),
                0.3,
            )?;
            ProblemSpec::builder(quadratic_rate(), ic, eps, 0.5)
                .reaction(ScalarField1::constant(1.0))
                .source(source())
                .characteristic(cubic_curve(0.3))
                .build()?
        }
        3 => ProblemSpec::builder(Convection::Time(ScalarField1::new(|t| 1.0 + t)), step(0.3)?, eps, 2.0)
            .source(source())
            .boundary(ScalarField1::constant(-2.0), ScalarField1::constant(1.0))
            .characteristic(ScalarField1::new(|t| 0.3 + t + 0.5 * t * t))
            .build()?,
        4 => {
            let d = eps.sqrt().min(0.3);
            let ic = InitialCondition::new(Piece::polynomial(&[0.0, -2.0]), Piece::polynomial(&[1.0, 0.0, -1.0]), d)?;
            ProblemSpec::builder(quadratic_rate(), ic, eps, 0.5)
                .source(source())
                .boundary(ScalarField1::new(|t| 4.0 * t * t), ScalarField1::new(|t| t * (t + 0.5)))
                .characteristic(cubic_curve(d))
                .build()?
        }
        5 => {
            let a = Convection::SpaceTime(ScalarField2::new(|x, _| 1.0 + x * x));
            ProblemSpec::builder(a, step(0.1)?, eps, 0.5)
                .source(source())
                .boundary(ScalarField1::constant(-2.0), ScalarField1::constant(1.0))
                .characteristic(ScalarField1::new(|t| {
                    let s = t.tan();
                    (0.1 + s) / (1.0 - 0.1 * s)
                }))
                .build()?
        }
        _ => return Err(Error::Usage(format!("unknown example {id}, expected 1..=5"))),
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_five_entries() {
        assert_eq!(catalog().len(), 5);
        assert!(catalog()[3].to_string().contains("eps-dependent d"));
        assert!(catalog()[4].to_string().contains("expected non-uniform"));
        assert!(catalog()[..4].iter().all(|e| e.warning().is_none()));
        assert!(example(5).unwrap().warning().is_some());
        assert!(matches!(example(6), Err(Error::Usage(_))));
    }

    #[test]
    fn example_four_moves_d_with_eps() {
        assert_eq!(problem(4, 1.0).unwrap().initial.discontinuity(), 0.3);
        let p = problem(4, 2f64.powi(-12)).unwrap();
        assert_eq!(p.initial.discontinuity(), 2f64.powi(-6));
    }

    #[test]
    fn initial_data() {
        let p = problem(2, 1.0).unwrap();
        assert!((p.initial.value(0.2) + 0.008).abs() < 1e-15);
        assert!((p.initial.value(0.5) - 0.125).abs() < 1e-15);
        assert!((p.initial.jump(1).unwrap() + 1.2).abs() < 1e-14);
        let p = problem(4, 1.0).unwrap();
        assert_eq!(p.left_boundary.eval(0.5), 1.0);
        assert_eq!(p.right_boundary.eval(0.5), 0.5);
        assert!((p.initial.jump(0).unwrap() - (1.0 - 0.09 + 0.6)).abs() < 1e-15);
    }

    #[test]
    fn crossing_only_for_example_three() {
        for id in 1..=5 {
            let c = problem(id, 1e-3).unwrap().characteristic_curve().unwrap().crossing_time();
            assert_eq!(c.is_some(), id == 3, "example {id}");
        }
    }
}
