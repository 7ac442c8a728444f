//! Upwind implicit-Euler scheme on a tensor mesh:
//!
//! ```text
//! −ε δ²ₓY + a D⁻ₓY + b Y + D⁻ₜY = f   at interior nodes,
//! ```
//!
//! with Dirichlet values on the parabolic boundary. Every time level is a
//! tridiagonal M-matrix system.

use alloc::vec::Vec;

use crate::analysis::bilinear_eval;
use crate::error::{bail, Result};
use crate::math::abs;
use crate::mesh::TensorMesh;
use crate::problem::{Convection, ProblemSpec, ScalarField1, ScalarField2};
use crate::singular::{Level, RemainderData, SingularBasis};
use crate::tridiag::tridiagonal_solve_in_place;

/// Node values `Y[i][j]` on a tensor mesh, stored time level by time level.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    mesh: TensorMesh,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(mesh: TensorMesh, values: Vec<f64>) -> Result<Self> {
        let expected = (mesh.n() + 1) * (mesh.m() + 1);
        if values.len() != expected {
            bail!(Argument, "grid function needs {expected} values, got {}", values.len());
        }
        Ok(GridFunction { mesh, values })
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(mesh: TensorMesh, f: F) -> Self {
        let mut values = Vec::with_capacity((mesh.n() + 1) * (mesh.m() + 1));
        for &t in mesh.time.nodes() {
            for &x in mesh.space.nodes() {
                values.push(f(x, t));
            }
        }
        GridFunction { mesh, values }
    }

    pub fn mesh(&self) -> &TensorMesh {
        &self.mesh
    }

    pub fn n(&self) -> usize {
        self.mesh.n()
    }

    pub fn m(&self) -> usize {
        self.mesh.m()
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.mesh.n() + 1) + i]
    }

    /// All space nodes at time level `j`.
    pub fn level(&self, j: usize) -> &[f64] {
        let w = self.mesh.n() + 1;
        &self.values[j * w..(j + 1) * w]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }
}

/// Fully discrete problem: mesh, coefficients and boundary node values.
#[derive(Clone, Debug)]
pub struct DiscreteProblem {
    pub mesh: TensorMesh,
    pub eps: f64,
    pub convection: Convection,
    pub reaction: Option<ScalarField1>,
    pub source: Option<ScalarField2>,
    /// `Y[·][0]`, length `N + 1`.
    pub initial: Vec<f64>,
    /// `Y[0][·]`, length `M + 1`.
    pub left: Vec<f64>,
    /// `Y[N][·]`, length `M + 1`.
    pub right: Vec<f64>,
}

/// Coefficients of one interior row.
#[derive(Clone, Copy, Debug)]
struct Row {
    lower: f64,
    diag: f64,
    upper: f64,
    rhs: f64,
}

impl DiscreteProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mesh: TensorMesh,
        eps: f64,
        convection: Convection,
        reaction: Option<ScalarField1>,
        source: Option<ScalarField2>,
        initial: Vec<f64>,
        left: Vec<f64>,
        right: Vec<f64>,
    ) -> Result<Self> {
        let (n, m) = (mesh.n(), mesh.m());
        if initial.len() != n + 1 || left.len() != m + 1 || right.len() != m + 1 {
            bail!(
                Argument,
                "data lengths ({}, {}, {}) do not match mesh {}x{}",
                initial.len(),
                left.len(),
                right.len(),
                n,
                m
            );
        }
        if !(eps > 0.0) {
            bail!(Argument, "eps must be positive, got {eps}");
        }
        if let Convection::Time(a) = &convection {
            let alpha = mesh.space.alpha();
            for &t in mesh.time.nodes() {
                if !(a.eval(t) >= alpha) {
                    bail!(InvalidProblem, "a({t}) = {} below alpha = {alpha}", a.eval(t));
                }
            }
        }
        Ok(DiscreteProblem { mesh, eps, convection, reaction, source, initial, left, right })
    }

    /// Discretisation of the remainder problem `y = u − S` at the given level.
    pub fn for_remainder(problem: &ProblemSpec, basis: &SingularBasis, mesh: TensorMesh, level: Level) -> Result<Self> {
        let data = RemainderData::new(problem, basis, level);
        let initial = mesh.space.nodes().iter().map(|&x| data.initial(x)).collect();
        let left = mesh.time.nodes().iter().map(|&t| data.left(t)).collect();
        let right = mesh.time.nodes().iter().map(|&t| data.right(t)).collect();
        Self::new(
            mesh,
            problem.eps,
            problem.convection.clone(),
            problem.reaction.clone(),
            problem.source.clone(),
            initial,
            left,
            right,
        )
    }

    /// The scheme applied to `u` itself, with no singular part removed.
    pub fn direct(problem: &ProblemSpec, mesh: TensorMesh) -> Result<Self> {
        let initial = mesh.space.nodes().iter().map(|&x| problem.initial.value(x)).collect();
        let times = mesh.time.nodes();
        let left = times
            .iter()
            .map(|&t| if t > 0.0 { problem.left_boundary.eval(t) } else { problem.initial.value(0.0) })
            .collect();
        let right = times
            .iter()
            .map(|&t| if t > 0.0 { problem.right_boundary.eval(t) } else { problem.initial.value(1.0) })
            .collect();
        Self::new(
            mesh,
            problem.eps,
            problem.convection.clone(),
            problem.reaction.clone(),
            problem.source.clone(),
            initial,
            left,
            right,
        )
    }

    fn row(&self, i: usize, j: usize, prev: f64) -> Row {
        let x = self.mesh.space.nodes();
        let t = self.mesh.time.nodes();
        let (tj, k) = (t[j], t[j] - t[j - 1]);
        let h_lo = x[i] - x[i - 1];
        let h_hi = x[i + 1] - x[i];
        let diffusion = 2.0 * self.eps / (h_lo + h_hi);
        let a = self.convection.eval(x[i], tj);
        let b = self.reaction.as_ref().map_or(0.0, |b| b.eval(tj));
        let f = self.source.as_ref().map_or(0.0, |f| f.eval(x[i], tj));
        Row {
            lower: -diffusion / h_lo - a / h_lo,
            diag: diffusion / h_lo + diffusion / h_hi + a / h_lo + b + 1.0 / k,
            upper: -diffusion / h_hi,
            rhs: f + prev / k,
        }
    }

    /// Solves time level `j` given level `j − 1`; returns all `N + 1` values
    /// with the endpoints pinned to the boundary data.
    pub fn advance_level(&self, j: usize, prev: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        let mut work = Workspace::default();
        self.advance_into(j, prev, &mut out, &mut work)?;
        Ok(out)
    }

    fn advance_into(&self, j: usize, prev: &[f64], out: &mut Vec<f64>, work: &mut Workspace) -> Result<()> {
        let (n, m) = (self.mesh.n(), self.mesh.m());
        if j == 0 || j > m {
            bail!(Argument, "time level {j} outside 1..={m}");
        }
        if prev.len() != n + 1 {
            bail!(Argument, "previous level has {} values, expected {}", prev.len(), n + 1);
        }
        let inner = n - 1;
        work.lower.clear();
        work.diag.clear();
        work.upper.clear();
        out.clear();
        out.resize(n + 1, 0.0);
        out[0] = self.left[j];
        out[n] = self.right[j];
        let k = self.mesh.time.nodes()[j] - self.mesh.time.nodes()[j - 1];
        for i in 1..n {
            let row = self.row(i, j, prev[i]);
            // M-matrix sign pattern with row sums bounded below by 1/k.
            if !(row.lower <= 0.0
                && row.upper <= 0.0
                && row.diag > 0.0
                && row.diag + row.lower + row.upper >= 1.0 / k - 1e-12 * row.diag)
            {
                bail!(Numeric, "M-matrix structure violated at node ({i}, {j}): {row:?}");
            }
            let mut rhs = row.rhs;
            if i == 1 {
                rhs -= row.lower * out[0];
            } else {
                work.lower.push(row.lower);
            }
            if i == n - 1 {
                rhs -= row.upper * out[n];
            } else {
                work.upper.push(row.upper);
            }
            work.diag.push(row.diag);
            out[i] = rhs;
        }
        debug_assert_eq!(work.diag.len(), inner);
        tridiagonal_solve_in_place(&work.lower, &work.diag, &work.upper, &mut out[1..n], &mut work.scratch)
    }

    /// Largest row-relative residual of the scheme equations over all interior
    /// nodes: `|r| / (|l Y₋| + |d Y| + |u Y₊| + |f| + |Y_prev|/k)`.
    pub fn scheme_residual(&self, y: &GridFunction) -> f64 {
        let (n, m) = (self.mesh.n(), self.mesh.m());
        let mut worst: f64 = 0.0;
        for j in 1..=m {
            let (prev, cur) = (y.level(j - 1), y.level(j));
            let k = self.mesh.time.nodes()[j] - self.mesh.time.nodes()[j - 1];
            for i in 1..n {
                let row = self.row(i, j, prev[i]);
                let terms = [row.lower * cur[i - 1], row.diag * cur[i], row.upper * cur[i + 1]];
                let r = terms.iter().sum::<f64>() - row.rhs;
                let scale = terms.iter().map(|v| abs(*v)).sum::<f64>() + abs(row.rhs - prev[i] / k) + abs(prev[i] / k);
                if scale > 0.0 {
                    worst = worst.max(abs(r) / scale);
                }
            }
        }
        worst
    }
}

#[derive(Default)]
struct Workspace {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: Vec<f64>,
}

/// Marches the scheme from the initial level to `T`.
pub fn solve(dp: &DiscreteProblem) -> Result<GridFunction> {
    let (n, m) = (dp.mesh.n(), dp.mesh.m());
    let width = n + 1;
    let mut values = Vec::with_capacity(width * (m + 1));
    let mut first = dp.initial.clone();
    first[0] = dp.left[0];
    first[n] = dp.right[0];
    values.extend_from_slice(&first);
    let mut work = Workspace::default();
    let mut next = Vec::with_capacity(width);
    for j in 1..=m {
        let start = (j - 1) * width;
        let prev = values[start..start + width].to_vec();
        dp.advance_into(j, &prev, &mut next, &mut work)?;
        values.extend_from_slice(&next);
    }
    GridFunction::new(dp.mesh.clone(), values)
}

/// Builds the singular basis, meshes and remainder data for `problem` and
/// solves for `y` (level 0) or `y₁` (level 1).
pub fn solve_remainder(problem: &ProblemSpec, n: usize, m: usize, level: Level) -> Result<GridFunction> {
    let basis = SingularBasis::new(problem)?;
    let mesh = TensorMesh::for_problem(problem, n, m)?;
    let dp = DiscreteProblem::for_remainder(problem, &basis, mesh, level)?;
    solve(&dp)
}

/// As [`solve_remainder`], also returning [`DiscreteProblem::scheme_residual`] of the result.
pub fn solve_remainder_with_residual(
    problem: &ProblemSpec,
    n: usize,
    m: usize,
    level: Level,
) -> Result<(GridFunction, f64)> {
    let basis = SingularBasis::new(problem)?;
    let mesh = TensorMesh::for_problem(problem, n, m)?;
    let dp = DiscreteProblem::for_remainder(problem, &basis, mesh, level)?;
    let y = solve(&dp)?;
    let r = dp.scheme_residual(&y);
    Ok((y, r))
}

/// `Ū(x, t) = Ȳ(x, t) + S(x, t)` with `S` evaluated in closed form.
pub fn reconstruct_u(y: &GridFunction, basis: &SingularBasis, level: Level, x: f64, t: f64) -> Result<f64> {
    Ok(bilinear_eval(y, x, t)? + basis.singular_part(x, t, level))
}
