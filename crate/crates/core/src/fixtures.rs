//! Frozen fixtures: the collapse diagram and regression constants recorded
//! from first runs.
//!
//! The directory is `$FILLSPEC_FIXTURES` when set, else the repository's
//! `fixtures/` directory, else the copies compiled into the library.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::diagram::DiskDiagram;
use crate::eigen::EigenOptions;
use crate::families::{self, collapse, grid_vertex};
use crate::fillarea::FillAreaCache;
use crate::hqm::hqm_witness;
use crate::{io, resistance, shelling, spectra};
use crate::{Error, Result};

pub const VERSION: &str = "v1";
pub const COLLAPSE_FILE: &str = "collapse_v1.json";
pub const REGRESSIONS_FILE: &str = "regressions_v1.json";

const EMBEDDED_COLLAPSE: &str = include_str!("../../../fixtures/collapse_v1.json");
const EMBEDDED_REGRESSIONS: &str = include_str!("../../../fixtures/regressions_v1.json");

/// Oracle cap used when freezing the ring verdict.
const RING_ORACLE_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingVerdict {
    pub faces: Vec<usize>,
    pub lhs: usize,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regressions {
    pub version: String,
    pub provenance: String,
    /// `R_eff` from the centre of `Q_{3,3}` to its boundary.
    pub q33_centre_r_eff: f64,
    /// Greedy based filling length of the Heisenberg diagram at `n = 3`.
    pub heisenberg3_fl_greedy: usize,
    /// `C = 9 R(g_3)` for the corridor test function at `n = 3`.
    pub heisenberg_rayleigh_constant: f64,
    /// `c' = FL * sqrt(lambda1)` on `Q_{2,2}`.
    pub grid_fl_constant: f64,
    /// Multiloop inequality at kappa 1 on the ring `N, W, S, sigma` of the
    /// collapse diagram, over its free completion.
    pub collapse_ring: RingVerdict,
}

/// Directory override, or the repository directory when it exists.
pub fn fixtures_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("FILLSPEC_FIXTURES") {
        return Some(PathBuf::from(dir));
    }
    let repo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    repo.is_dir().then_some(repo)
}

fn read(name: &str, embedded: &'static str) -> Result<String> {
    match fixtures_dir() {
        Some(dir) => Ok(std::fs::read_to_string(dir.join(name))?),
        None => Ok(embedded.to_string()),
    }
}

pub fn regressions() -> Result<Regressions> {
    let r: Regressions = serde_json::from_str(&read(REGRESSIONS_FILE, EMBEDDED_REGRESSIONS)?)?;
    if r.version != VERSION {
        return Err(Error::Schema { path: "$.version".into(), msg: format!("expected {VERSION}, got {}", r.version) });
    }
    Ok(r)
}

/// The collapse diagram `D` as frozen on disk.
pub fn collapse_diagram() -> Result<DiskDiagram> {
    io::from_json(&read(COLLAPSE_FILE, EMBEDDED_COLLAPSE)?)
}

/// Recomputes every regression constant from the current code.
pub fn compute_regressions(opts: &EigenOptions) -> Result<Regressions> {
    let q33 = families::grid(3, 3)?;
    let q33_centre_r_eff = resistance::effective_resistance(&q33, grid_vertex(3, 1, 1))?;

    let h = families::heisenberg(3)?;
    let b = h.diagram.basepoint().unwrap_or(0);
    let heisenberg3_fl_greedy = shelling::fl_greedy(&h.diagram, b)?.value;
    let heisenberg_rayleigh_constant =
        9.0 * spectra::rayleigh_dual_unweighted(&h.diagram, &h.corridor_test_function())?;

    let q22 = families::grid(2, 2)?;
    let lambda = spectra::primal_lambda1(&q22, opts)?.value.as_f64();
    let grid_fl_constant = shelling::fl_greedy(&q22, 0)?.value as f64 * lambda.sqrt();

    let fx = families::collapse_fixture()?;
    let p = fx.d.presentation().free_completion();
    let ring = [collapse::N, collapse::W, collapse::S, collapse::SIGMA];
    let mut cache = FillAreaCache::new(&p, RING_ORACLE_CAP);
    let w = hqm_witness(&fx.d, &mut cache, &p, 1.0, &ring)?;
    let collapse_ring = RingVerdict { faces: w.faces.clone(), lhs: w.lhs, rhs: w.rhs, holds: w.slack() <= 0.0 };

    Ok(Regressions {
        version: VERSION.into(),
        provenance: "first run of `fillspec export regressions --regenerate`".into(),
        q33_centre_r_eff,
        heisenberg3_fl_greedy,
        heisenberg_rayleigh_constant,
        grid_fl_constant,
        collapse_ring,
    })
}

/// Writes both fixture files into `dir`.
pub fn regenerate(dir: &std::path::Path, opts: &EigenOptions) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(COLLAPSE_FILE), io::to_json(&families::collapse_fixture()?.d) + "\n")?;
    let r = compute_regressions(opts)?;
    std::fs::write(dir.join(REGRESSIONS_FILE), serde_json::to_string_pretty(&r)? + "\n")?;
    Ok(())
}
