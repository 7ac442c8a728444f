//! Parallel driver over the ε ladder.

use rayon::prelude::*;
use spcd_core::analysis::{eps_from_exp, two_mesh_series};
use spcd_core::{solve, DiscreteProblem, GridFunction, SingularBasis, TensorMesh, TimeMeshKind, TwoMeshReport};

use crate::config::{RunConfig, SurfaceRequest};
use crate::error::{Error, Result};
use crate::examples::example;

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Two-mesh table for `cfg`, one job per ε. Rows come back in ladder order.
pub fn sweep(cfg: &RunConfig) -> Result<TwoMeshReport> {
    let ex = example(cfg.example)?;
    let series = pool(cfg.workers)?.install(|| {
        cfg.eps_exponents
            .par_iter()
            .map(|&e| {
                let problem = ex.problem(eps_from_exp(e))?;
                Ok((e, two_mesh_series(&problem, cfg.level, cfg.n0, cfg.levels, cfg.m_rule)?))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(TwoMeshReport::assemble(cfg.example, cfg.level, series)?)
}

/// `Ȳ` and `Ū = Ȳ + S` on the nodes of one mesh.
pub struct Surfaces {
    pub request: SurfaceRequest,
    pub y: GridFunction,
    /// Same layout as `y.values()`.
    pub u: Vec<f64>,
}

pub fn surfaces(cfg: &RunConfig, request: SurfaceRequest) -> Result<Surfaces> {
    let problem = example(cfg.example)?.problem(eps_from_exp(request.eps_exp))?;
    let basis = SingularBasis::new(&problem)?;
    let mesh = TensorMesh::for_problem(&problem, request.n, request.m)?;
    let y = solve(&DiscreteProblem::for_remainder(&problem, &basis, mesh, cfg.level)?)?;
    let mesh = y.mesh();
    let mut u = Vec::with_capacity(y.values().len());
    for &t in mesh.time.nodes() {
        for &x in mesh.space.nodes() {
            u.push(basis.singular_part(x, t, cfg.level));
        }
    }
    for (u, y) in u.iter_mut().zip(y.values()) {
        *u += y;
    }
    Ok(Surfaces { request, y, u })
}

/// Time mesh used on the coarsest grid of the first row.
pub fn coarse_time_mesh(cfg: &RunConfig) -> Result<TimeMeshKind> {
    let e = *cfg.eps_exponents.first().ok_or_else(|| Error::Usage("empty eps ladder".into()))?;
    let problem = example(cfg.example)?.problem(eps_from_exp(e))?;
    let mesh = TensorMesh::for_problem(&problem, cfg.n0, cfg.m_rule.time_cells(cfg.n0, 0))?;
    Ok(mesh.time.kind())
}
