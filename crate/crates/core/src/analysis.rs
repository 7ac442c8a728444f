//! Two-mesh convergence estimation.
//!
//! For each ε the solutions on `(N, M)` and `(2N, 2M)` are compared through
//! their bilinear interpolants on the union of both meshes, giving
//! `D_ε^{N,M}` and the orders `P = log₂(D^{N,M} / D^{2N,2M})`. Uniform rows take
//! the maximum over the ε ladder.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::math::{abs, log2};
use crate::problem::ProblemSpec;
use crate::singular::Level;
use crate::solver::{solve_remainder_with_residual, GridFunction};

/// Nodes of two meshes closer than this are treated as the same node.
pub const UNION_TOLERANCE: f64 = 1e-13;

/// Cell index and local coordinate of `v` in the sorted node list.
#[inline]
fn locate(nodes: &[f64], v: f64) -> (usize, f64) {
    let cells = nodes.len() - 1;
    let i = nodes.partition_point(|&x| x <= v).saturating_sub(1).min(cells - 1);
    let w = (v - nodes[i]) / (nodes[i + 1] - nodes[i]);
    (i, w)
}

#[inline]
fn interpolate(y: &GridFunction, (i, s): (usize, f64), (j, r): (usize, f64)) -> f64 {
    let lo = y.level(j);
    let hi = y.level(j + 1);
    let below = if s == 0.0 { lo[i] } else { lo[i] + s * (lo[i + 1] - lo[i]) };
    if r == 0.0 {
        return below;
    }
    let above = if s == 0.0 { hi[i] } else { hi[i] + s * (hi[i + 1] - hi[i]) };
    below + r * (above - below)
}

/// Piecewise-bilinear interpolant of `y` at `(x, t)`.
pub fn bilinear_eval(y: &GridFunction, x: f64, t: f64) -> Result<f64> {
    let xs = y.mesh().space.nodes();
    let ts = y.mesh().time.nodes();
    let t_final = ts[ts.len() - 1];
    if !(0.0..=1.0).contains(&x) || !(t >= 0.0 && t <= t_final) {
        bail!(Domain, "point ({x}, {t}) outside [0,1] x [0,{t_final}]");
    }
    Ok(interpolate(y, locate(xs, x), locate(ts, t)))
}

/// Sorted union of two sorted node sets, merging nodes closer than `tol`.
pub fn node_union(a: &[f64], b: &[f64], tol: f64) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for v in all {
        match out.last() {
            Some(&last) if v - last <= tol => {}
            _ => out.push(v),
        }
    }
    out
}

/// `max |Ȳ_c − Ȳ_f|` over the tensor product of the unions of the x-nodes
/// and the t-nodes of both meshes.
pub fn two_mesh_difference(coarse: &GridFunction, fine: &GridFunction) -> Result<f64> {
    let (cx, fx) = (coarse.mesh().space.nodes(), fine.mesh().space.nodes());
    let (ct, ft) = (coarse.mesh().time.nodes(), fine.mesh().time.nodes());
    let (tc, tf) = (ct[ct.len() - 1], ft[ft.len() - 1]);
    if abs(tc - tf) > 1e-12 * tc.max(1.0) || cx[0] != fx[0] || cx[cx.len() - 1] != fx[fx.len() - 1] {
        bail!(Argument, "two-mesh difference needs both solutions on the same domain (T = {tc} vs {tf})");
    }
    let xs = node_union(cx, fx, UNION_TOLERANCE);
    let ts = node_union(ct, ft, UNION_TOLERANCE);
    let xc: Vec<_> = xs.iter().map(|&x| locate(cx, x)).collect();
    let xf: Vec<_> = xs.iter().map(|&x| locate(fx, x)).collect();
    let mut worst: f64 = 0.0;
    for &t in &ts {
        let (jc, jf) = (locate(ct, t.min(tc)), locate(ft, t.min(tf)));
        for (lc, lf) in xc.iter().zip(&xf) {
            let diff = abs(interpolate(coarse, *lc, jc) - interpolate(fine, *lf, jf));
            worst = worst.max(diff);
        }
    }
    Ok(worst)
}

/// `log₂(coarse / fine)`.
pub fn order(coarse: f64, fine: f64) -> Result<f64> {
    if !(coarse > 0.0 && fine > 0.0) {
        bail!(Domain, "orders need positive differences, got {coarse} and {fine}");
    }
    Ok(log2(coarse / fine))
}

/// How the number of time cells follows the number of space cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MRule {
    /// `M = N`.
    #[default]
    MatchN,
    /// `M` equals the given value on the coarsest mesh and doubles with `N`.
    Fixed(usize),
}

impl MRule {
    pub fn time_cells(self, n0: usize, refinement: u32) -> usize {
        let base = match self {
            MRule::MatchN => n0,
            MRule::Fixed(m0) => m0,
        };
        base << refinement
    }
}

/// One column of a two-mesh table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshPair {
    pub n: usize,
    pub m: usize,
    pub diff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsRow {
    /// `ε = 2^{−eps_exp}`.
    pub eps_exp: u32,
    pub cells: Vec<MeshPair>,
    pub orders: Vec<f64>,
    /// Largest scheme residual over the solves behind this row.
    pub max_residual: f64,
}

/// Output of [`two_mesh_series`] at one ε.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub cells: Vec<MeshPair>,
    pub max_residual: f64,
}

impl EpsRow {
    pub fn eps(&self) -> f64 {
        eps_from_exp(self.eps_exp)
    }
}

pub fn eps_from_exp(exp: u32) -> f64 {
    libm::ldexp(1.0, -(exp as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoMeshReport {
    pub example: u32,
    pub level: Level,
    pub rows: Vec<EpsRow>,
    pub uniform: Vec<MeshPair>,
    pub uniform_orders: Vec<f64>,
}

impl TwoMeshReport {
    /// Builds orders and uniform rows from per-ε differences. All series must
    /// cover the same `(N, M)` columns.
    pub fn assemble(example: u32, level: Level, series: Vec<(u32, Series)>) -> Result<Self> {
        let Some((_, first)) = series.first() else {
            bail!(Argument, "two-mesh report needs at least one eps value");
        };
        let columns: Vec<(usize, usize)> = first.cells.iter().map(|c| (c.n, c.m)).collect();
        let mut uniform: Vec<MeshPair> = columns.iter().map(|&(n, m)| MeshPair { n, m, diff: 0.0 }).collect();
        let mut rows = Vec::with_capacity(series.len());
        for (eps_exp, Series { cells, max_residual }) in series {
            if cells.len() != columns.len() || cells.iter().zip(&columns).any(|(c, &(n, m))| c.n != n || c.m != m) {
                bail!(Argument, "eps = 2^-{eps_exp} covers different meshes than the first row");
            }
            for (u, c) in uniform.iter_mut().zip(&cells) {
                u.diff = u.diff.max(c.diff);
            }
            let orders = orders_of(&cells)?;
            rows.push(EpsRow { eps_exp, cells, orders, max_residual });
        }
        let uniform_orders = orders_of(&uniform)?;
        Ok(TwoMeshReport { example, level, rows, uniform, uniform_orders })
    }

    pub fn row(&self, eps_exp: u32) -> Option<&EpsRow> {
        self.rows.iter().find(|r| r.eps_exp == eps_exp)
    }

    pub fn eps_exponents(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.eps_exp).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.max_residual).fold(0.0, f64::max)
    }
}

fn orders_of(cells: &[MeshPair]) -> Result<Vec<f64>> {
    cells.windows(2).map(|w| order(w[0].diff, w[1].diff)).collect()
}

/// Differences `D^{N,M}` for `N = n0·2ˡ`, `l = 0..levels`, at a single ε.
/// Each fine solution is reused as the next coarse one.
pub fn two_mesh_series(problem: &ProblemSpec, level: Level, n0: usize, levels: usize, m_rule: MRule) -> Result<Series> {
    if levels == 0 {
        bail!(Argument, "need at least one mesh level");
    }
    let mut cells = Vec::with_capacity(levels);
    let (mut coarse, mut max_residual) = solve_remainder_with_residual(problem, n0, m_rule.time_cells(n0, 0), level)?;
    for l in 0..levels as u32 {
        let n = n0 << (l + 1);
        let (fine, r) = solve_remainder_with_residual(problem, n, m_rule.time_cells(n0, l + 1), level)?;
        max_residual = max_residual.max(r);
        let diff = two_mesh_difference(&coarse, &fine)?;
        cells.push(MeshPair { n: coarse.n(), m: coarse.m(), diff });
        coarse = fine;
    }
    Ok(Series { cells, max_residual })
}

/// Sequential sweep over an ε ladder. `problem_for` builds the problem for
/// each ε, which allows ε-dependent data.
pub fn run_sweep<F>(
    example: u32,
    problem_for: F,
    level: Level,
    n0: usize,
    levels: usize,
    eps_exponents: &[u32],
    m_rule: MRule,
) -> Result<TwoMeshReport>
where
    F: Fn(f64) -> Result<ProblemSpec>,
{
    if n0 < 4 || !n0.is_multiple_of(2) {
        bail!(Argument, "initial N must be even and at least 4, got {n0}");
    }
    if levels < 2 {
        bail!(Argument, "a sweep needs at least two mesh levels to report orders, got {levels}");
    }
    let mut series = Vec::with_capacity(eps_exponents.len());
    for &e in eps_exponents {
        let problem = problem_for(eps_from_exp(e))?;
        series.push((e, two_mesh_series(&problem, level, n0, levels, m_rule)?));
    }
    TwoMeshReport::assemble(example, level, series)
}
