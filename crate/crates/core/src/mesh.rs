//! Shishkin meshes in space and (optionally) in time.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::math::{ln, sqrt};
use crate::problem::ProblemSpec;

/// Piecewise-uniform mesh on `[0, 1]` with `N/2` cells on `[0, 1−σ]` and
/// `N/2` cells on the boundary-layer region `[1−σ, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceMesh {
    nodes: Vec<f64>,
    sigma: f64,
    alpha: f64,
}

impl SpaceMesh {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `σ = min{0.5, (ε/α) ln N}`.
pub fn transition_width(n: usize, eps: f64, alpha: f64) -> f64 {
    (eps / alpha * ln(n as f64)).min(0.5)
}

pub fn build_space_mesh(n: usize, eps: f64, alpha: f64) -> Result<SpaceMesh> {
    if n < 4 || !n.is_multiple_of(2) {
        bail!(Argument, "space mesh needs an even number of cells >= 4, got {n}");
    }
    if !(eps > 0.0 && alpha > 0.0) {
        bail!(Argument, "eps and alpha must be positive (eps = {eps}, alpha = {alpha})");
    }
    let sigma = transition_width(n, eps, alpha);
    let half = n / 2;
    let mut nodes = Vec::with_capacity(n + 1);
    push_piece(&mut nodes, 0.0, 1.0 - sigma, half, true);
    push_piece(&mut nodes, 1.0 - sigma, 1.0, half, false);
    Ok(SpaceMesh { nodes, sigma, alpha })
}

// Nodes are affine in the integer index; the piece end is stored exactly.
fn push_piece(nodes: &mut Vec<f64>, lo: f64, hi: f64, cells: usize, include_start: bool) {
    if include_start {
        nodes.push(lo);
    }
    for k in 1..cells {
        let s = k as f64 / cells as f64;
        nodes.push(lo + (hi - lo) * s);
    }
    nodes.push(hi);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeMeshKind {
    Uniform,
    /// Half of the cells packed into `[T* − τ, T* + τ]`.
    Shishkin {
        crossing: f64,
        tau: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
    kind: TimeMeshKind,
}

impl TimeMesh {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn kind(&self) -> TimeMeshKind {
        self.kind
    }

    pub fn t_final(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }
}

/// `τ = min{T*/2, (T − T*)/2, 2√(T* ε ln M)/α}`.
pub fn time_transition_width(m: usize, t_final: f64, crossing: f64, eps: f64, alpha: f64) -> f64 {
    let layer = 2.0 * sqrt(crossing * eps * ln(m as f64)) / alpha;
    (0.5 * crossing).min(0.5 * (t_final - crossing)).min(layer)
}

/// Uniform mesh when `crossing` is `None`, otherwise the three-piece mesh with
/// `M/4`, `M/2`, `M/4` equal cells on `[0, T*−τ]`, `[T*−τ, T*+τ]`, `[T*+τ, T]`.
pub fn build_time_mesh(m: usize, t_final: f64, eps: f64, alpha: f64, crossing: Option<f64>) -> Result<TimeMesh> {
    if m == 0 {
        bail!(Argument, "time mesh needs at least one cell");
    }
    if !(t_final > 0.0) {
        bail!(Argument, "final time must be positive, got {t_final}");
    }
    let mut nodes = Vec::with_capacity(m + 1);
    let kind = match crossing {
        None => {
            push_piece(&mut nodes, 0.0, t_final, m, true);
            TimeMeshKind::Uniform
        }
        Some(tc) => {
            if !m.is_multiple_of(4) {
                bail!(Argument, "time-Shishkin mesh needs M divisible by 4, got {m}");
            }
            if !(tc > 0.0 && tc < t_final) {
                bail!(Argument, "crossing time {tc} must lie strictly inside (0, {t_final})");
            }
            let tau = time_transition_width(m, t_final, tc, eps, alpha);
            push_piece(&mut nodes, 0.0, tc - tau, m / 4, true);
            push_piece(&mut nodes, tc - tau, tc + tau, m / 2, false);
            push_piece(&mut nodes, tc + tau, t_final, m / 4, false);
            TimeMeshKind::Shishkin { crossing: tc, tau }
        }
    };
    Ok(TimeMesh { nodes, kind })
}

/// Uniform time mesh unless the characteristic leaves through `x = 1`
/// strictly before `T`, in which case the time-Shishkin mesh is centred on
/// the crossing time.
pub fn select_time_mesh(problem: &ProblemSpec, m: usize) -> Result<TimeMesh> {
    let curve = problem.characteristic_curve()?;
    let crossing = curve.crossing_time().filter(|&tc| tc > 0.0 && tc < problem.t_final);
    build_time_mesh(m, problem.t_final, problem.eps, problem.alpha, crossing)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorMesh {
    pub space: SpaceMesh,
    pub time: TimeMesh,
}

impl TensorMesh {
    pub fn new(space: SpaceMesh, time: TimeMesh) -> Self {
        TensorMesh { space, time }
    }

    pub fn for_problem(problem: &ProblemSpec, n: usize, m: usize) -> Result<Self> {
        let space = build_space_mesh(n, problem.eps, problem.alpha)?;
        let time = select_time_mesh(problem, m)?;
        Ok(TensorMesh { space, time })
    }

    pub fn n(&self) -> usize {
        self.space.cells()
    }

    pub fn m(&self) -> usize {
        self.time.cells()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn coarse_eps_gives_uniform_mesh() {
        let m = build_space_mesh(8, 1.0, 1.0).unwrap();
        assert_eq!(m.sigma(), 0.5);
        for (i, &x) in m.nodes().iter().enumerate() {
            assert_close(x, i as f64 / 8.0, 1e-15);
        }
    }

    #[test]
    fn layer_mesh_widths() {
        let eps = libm::ldexp(1.0, -10);
        let m = build_space_mesh(64, eps, 1.0).unwrap();
        let sigma = eps * libm::log(64.0);
        assert_close(m.sigma(), sigma, 1e-18);
        assert_close(m.sigma(), 4.0614e-3, 1e-7);
        let x = m.nodes();
        assert_close(x[1] - x[0], (1.0 - sigma) / 32.0, 1e-15);
        assert_close(x[64] - x[63], sigma / 32.0, 1e-15);
        assert_eq!(x[32], 1.0 - sigma);
    }

    #[test]
    fn four_cell_mesh_by_hand() {
        let m = build_space_mesh(4, 0.3, 1.0).unwrap();
        let s = 0.3 * libm::log(4.0);
        assert_close(m.sigma(), s, 1e-15);
        let expected = [0.0, (1.0 - s) / 2.0, 1.0 - s, 1.0 - s / 2.0, 1.0];
        for (a, b) in m.nodes().iter().zip(expected) {
            assert_close(*a, b, 1e-15);
        }
        assert_close(m.nodes()[1], 0.29205, 1e-5);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(build_space_mesh(7, 0.1, 1.0), Err(crate::Error::Argument(_))));
        assert!(build_space_mesh(2, 0.1, 1.0).is_err());
        assert!(matches!(build_time_mesh(6, 2.0, 0.1, 1.0, Some(0.5)), Err(crate::Error::Argument(_))));
    }

    #[test]
    fn uniform_time_mesh() {
        let m = build_time_mesh(8, 0.5, 0.1, 1.0, None).unwrap();
        assert_eq!(m.kind(), TimeMeshKind::Uniform);
        for (j, &t) in m.nodes().iter().enumerate() {
            assert_close(t, 0.0625 * j as f64, 1e-16);
        }
    }

    #[test]
    fn shishkin_time_mesh_capped() {
        let m = build_time_mesh(8, 2.0, 1.0, 1.0, Some(0.5)).unwrap();
        let expected = [0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 1.375, 2.0];
        for (a, b) in m.nodes().iter().zip(expected) {
            assert_close(*a, b, 1e-15);
        }
        assert_eq!(m.kind(), TimeMeshKind::Shishkin { crossing: 0.5, tau: 0.25 });
    }

    #[test]
    fn shishkin_time_mesh_layer_branch() {
        let eps = libm::ldexp(1.0, -20);
        let m = build_time_mesh(8, 2.0, eps, 1.0, Some(0.5492)).unwrap();
        let TimeMeshKind::Shishkin { tau, .. } = m.kind() else { panic!() };
        let expected = 2.0 * libm::sqrt(0.5492 * eps * libm::log(8.0));
        assert_close(tau, expected, 1e-18);
        assert_close(tau, 2.087e-3, 1e-6);
        assert_eq!(m.nodes()[2], 0.5492 - tau);
        assert_eq!(m.nodes()[6], 0.5492 + tau);
    }

    #[test]
    fn doubled_mesh_is_not_nested() {
        let eps = libm::ldexp(1.0, -12);
        let a = build_space_mesh(64, eps, 1.0).unwrap();
        let b = build_space_mesh(128, eps, 1.0).unwrap();
        assert!(b.sigma() > a.sigma());
    }

    proptest::proptest! {
        #[test]
        fn meshes_are_well_formed(half in 2usize..300, e in 0u32..27, quarter in 1usize..200, tc in 0.05f64..1.95) {
            let n = 2 * half;
            let eps = libm::ldexp(1.0, -(e as i32));
            let m = build_space_mesh(n, eps, 1.0).unwrap();
            let x = m.nodes();
            proptest::prop_assert_eq!(x.len(), n + 1);
            proptest::prop_assert_eq!(x[0], 0.0);
            proptest::prop_assert_eq!(x[n], 1.0);
            proptest::prop_assert!(x.windows(2).all(|w| w[1] > w[0]));
            let total: f64 = x.windows(2).map(|w| w[1] - w[0]).sum();
            proptest::prop_assert!((total - 1.0).abs() <= 4.0 * f64::EPSILON);

            let mt = 4 * quarter;
            let t = build_time_mesh(mt, 2.0, eps, 1.0, Some(tc)).unwrap();
            let tn = t.nodes();
            proptest::prop_assert_eq!(tn.len(), mt + 1);
            proptest::prop_assert_eq!(tn[mt], 2.0);
            proptest::prop_assert!(tn.windows(2).all(|w| w[1] > w[0]));
            let TimeMeshKind::Shishkin { tau, .. } = t.kind() else { unreachable!() };
            proptest::prop_assert_eq!(tn[mt / 4], tc - tau);
            proptest::prop_assert_eq!(tn[3 * mt / 4], tc + tau);
            let total: f64 = tn.windows(2).map(|w| w[1] - w[0]).sum();
            proptest::prop_assert!((total - 2.0).abs() <= 4.0 * 2.0 * f64::EPSILON);
        }
    }
}
