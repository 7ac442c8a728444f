//! Experiment driver around `spcd-core`: the five test problems, parallel
//! ε sweeps, and CSV / markdown output.

pub mod config;
mod error;
pub mod examples;
pub mod output;
pub mod sweep;

use std::path::PathBuf;

pub use config::{PartialConfig, RunConfig, SurfaceRequest};
pub use error::{Error, Result};
pub use examples::{catalog, ExampleSpec};

use spcd_core::{TimeMeshKind, TwoMeshReport};

#[derive(Debug)]
pub struct RunOutcome {
    pub report: Option<TwoMeshReport>,
    pub time_mesh: TimeMeshKind,
    pub warning: Option<String>,
    pub files: Vec<PathBuf>,
}

/// Runs the sweep and surface requests of `cfg` and writes their files into `cfg.out`.
pub fn run_example(cfg: &RunConfig) -> Result<RunOutcome> {
    let ex = examples::example(cfg.example)?;
    let time_mesh = sweep::coarse_time_mesh(cfg)?;
    let mut files = Vec::new();
    let report = if cfg.tables {
        let report = sweep::sweep(cfg)?;
        let stem = output::table_stem(cfg.example, cfg.level);
        let (path, mut w) = output::create(&cfg.out, &format!("{stem}.csv"))?;
        output::write_table_csv(&report, &mut w)?;
        output::finish(&path, w)?;
        files.push(path);
        files.push(output::write_string(&cfg.out, &format!("{stem}.md"), &output::table_markdown(&report))?);
        Some(report)
    } else {
        None
    };
    if let Some(req) = cfg.surfaces {
        let s = sweep::surfaces(cfg, req)?;
        for (kind, values) in [("y", s.y.values()), ("u", s.u.as_slice())] {
            let name = format!("{}.csv", output::surface_stem(kind, cfg.example, cfg.level, &s));
            let (path, mut w) = output::create(&cfg.out, &name)?;
            output::write_surface_csv(&s, values, &mut w)?;
            output::finish(&path, w)?;
            files.push(path);
        }
    }
    Ok(RunOutcome { report, time_mesh, warning: ex.warning(), files })
}
