//! Family-restricted spectral profiles and their CSV tables.
//!
//! Values over a family are upper bounds on the true profiles, which range
//! over every area-minimising diagram. Grid rows are exact contributions
//! because grids are area-minimising.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::eigen::EigenOptions;
use crate::families;
use crate::shelling::fl_greedy;
use crate::spectra::{dual_mu1_unweighted, dual_mu1_weighted, primal_lambda1, rayleigh_dual_unweighted};
use crate::value::ExtendedValue;
use crate::word::Presentation;
use crate::{Error, Result};

/// Largest Heisenberg parameter swept by default.
pub const HEISENBERG_CAP: usize = 12;

/// Grids up to this side length get a greedy shelling; larger rows use
/// `FL = 2(p + q)`.
pub const GREEDY_FL_MAX: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    pub params: String,
    pub quantity: String,
    pub value: ExtendedValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub family: String,
    pub sweep: String,
    pub tol: f64,
    pub fixtures: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    pub meta: ProfileMeta,
    pub rows: Vec<ProfileRow>,
}

impl ProfileTable {
    fn new(family: &str, sweep: String, tol: f64) -> Self {
        ProfileTable {
            meta: ProfileMeta { family: family.into(), sweep, tol, fixtures: crate::fixtures::VERSION.into() },
            rows: Vec::new(),
        }
    }

    fn push(&mut self, n: usize, params: impl Into<String>, quantity: &str, value: impl Into<ExtendedValue>) {
        self.rows.push(ProfileRow { n, params: params.into(), quantity: quantity.into(), value: value.into() });
    }

    fn sort(&mut self) {
        // Stable: rows with equal n keep emission order.
        self.rows.sort_by_key(|r| r.n);
    }

    /// Rows named `quantity`, in table order.
    pub fn column(&self, quantity: &str) -> Vec<&ProfileRow> {
        self.rows.iter().filter(|r| r.quantity == quantity).collect()
    }

    pub fn get(&self, n: usize, quantity: &str) -> Option<ExtendedValue> {
        self.rows.iter().find(|r| r.n == n && r.quantity == quantity).map(|r| r.value)
    }

    /// Metadata as `#` comment lines, then a header row and one line per row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let m = &self.meta;
        writeln!(out, "# family={}", m.family)?;
        writeln!(out, "# sweep={}", m.sweep)?;
        writeln!(out, "# tol={}", m.tol)?;
        writeln!(out, "# fixtures={}", m.fixtures)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "params", "quantity", "value"])?;
        for r in &self.rows {
            w.write_record([r.n.to_string(), r.params.clone(), r.quantity.clone(), r.value.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    pub fn read_csv<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let mut meta = ProfileMeta { family: String::new(), sweep: String::new(), tol: 0.0, fixtures: String::new() };
        for line in text.lines().filter_map(|l| l.strip_prefix("# ")) {
            let Some((k, v)) = line.split_once('=') else { continue };
            match k {
                "family" => meta.family = v.into(),
                "sweep" => meta.sweep = v.into(),
                "tol" => meta.tol = v.parse().map_err(|_| Error::Parse(format!("bad tol {v:?}")))?,
                "fixtures" => meta.fixtures = v.into(),
                _ => {}
            }
        }
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != 4 {
                return Err(Error::Parse(format!("expected 4 columns, got {}", rec.len())));
            }
            let n = rec[0].parse().map_err(|_| Error::Parse(format!("bad n {:?}", &rec[0])))?;
            let value =
                ExtendedValue::parse(&rec[3]).ok_or_else(|| Error::Parse(format!("bad value {:?}", &rec[3])))?;
            rows.push(ProfileRow { n, params: rec[1].into(), quantity: rec[2].into(), value });
        }
        Ok(ProfileTable { meta, rows })
    }
}

fn finite(r: crate::spectra::SpectralResult) -> f64 {
    r.value.as_f64()
}

/// For `2 <= p <= p_max`, rows at `n = 4p` for `Q_{p,p}`: eigenvalues,
/// filling length, area, running-minimum profiles and the bracket flag
/// `c n^-2 <= mu1 <= C n^-1` with `c`, `C` calibrated at `p = 2`.
pub fn sweep_grid_profiles(p_max: usize, opts: &EigenOptions) -> Result<ProfileTable> {
    if p_max < 2 {
        return Err(Error::Param(format!("p_max must be at least 2 (got {p_max})")));
    }
    let mut t = ProfileTable::new("grid", format!("p=2..={p_max}"), opts.tol);
    let mut calib: Option<(f64, f64)> = None;
    let mut lambda_run = ExtendedValue::Infinite;
    let mut mu_run = ExtendedValue::Infinite;
    for p in 2..=p_max {
        let d = families::grid(p, p)?;
        let n = 4 * p;
        let params = format!("p={p},q={p}");
        let lambda = finite(primal_lambda1(&d, opts)?);
        let mu = finite(dual_mu1_weighted(&d, opts)?);
        let mu_tilde = finite(dual_mu1_unweighted(&d, opts)?);
        let (fl_name, fl) = if p <= GREEDY_FL_MAX {
            ("fl_greedy", fl_greedy(&d, 0)?.value)
        } else {
            ("fl_closed_form", 2 * (p + p))
        };
        let nf = n as f64;
        let (c, big_c) = *calib.get_or_insert((mu * nf * nf, mu * nf));
        let bracket = c / (nf * nf) <= mu * (1.0 + 1e-12) && mu <= big_c / nf * (1.0 + 1e-12);
        lambda_run = lambda_run.min(lambda.into());
        mu_run = mu_run.min(mu.into());
        t.push(n, params.clone(), "lambda1", lambda);
        t.push(n, params.clone(), "mu1", mu);
        t.push(n, params.clone(), "mu1_unweighted", mu_tilde);
        t.push(n, params.clone(), fl_name, fl as f64);
        t.push(n, params.clone(), "area", d.area() as f64);
        t.push(n, params.clone(), "lambda_profile", lambda_run);
        t.push(n, params.clone(), "dual_profile", mu_run);
        t.push(n, params, "bracket_ok", if bracket { 1.0 } else { 0.0 });
    }
    t.sort();
    Ok(t)
}

/// Heisenberg diagrams for `3 <= n <= n_max`: area, boundary length, the
/// counting-norm dual eigenvalue, the corridor Rayleigh quotient, and the
/// chain `eigenvalue <= Rayleigh <= C/n^2` with `C` frozen at `n = 3`.
/// A failed eigen-solve marks its row with the `solve_failed` quantity.
pub fn sweep_heisenberg(n_max: usize, opts: &EigenOptions) -> Result<ProfileTable> {
    if !(3..=HEISENBERG_CAP).contains(&n_max) {
        return Err(Error::Param(format!("n_max must lie in 3..={HEISENBERG_CAP} (got {n_max})")));
    }
    let c = crate::fixtures::regressions()?.heisenberg_rayleigh_constant;
    let mut t = ProfileTable::new("heisenberg", format!("n=3..={n_max}"), opts.tol);
    for n in 3..=n_max {
        let h = families::heisenberg(n)?;
        let params = format!("n={n}");
        let rayleigh = rayleigh_dual_unweighted(&h.diagram, &h.corridor_test_function())?;
        let bound = c / (n * n) as f64;
        t.push(n, params.clone(), "area", h.diagram.area() as f64);
        t.push(n, params.clone(), "boundary_length", h.diagram.boundary_length() as f64);
        t.push(n, params.clone(), "rayleigh", rayleigh);
        t.push(n, params.clone(), "c_over_n2", bound);
        match dual_mu1_unweighted(&h.diagram, opts) {
            Ok(r) => {
                let mu = r.value.as_f64();
                t.push(n, params.clone(), "mu1_unweighted", mu);
                t.push(n, params.clone(), "mu1_unweighted_n2", mu * (n * n) as f64);
                let ok = mu <= rayleigh * (1.0 + 1e-9) && rayleigh <= bound * (1.0 + 1e-9);
                t.push(n, params, "chain_ok", if ok { 1.0 } else { 0.0 });
            }
            Err(_) => t.push(n, params, "solve_failed", 1.0),
        }
    }
    t.sort();
    Ok(t)
}

/// Relator-free free group (no faces, infinite dual profile), the genus-2
/// surface disk, and the equal-area grids `Q_{m,2m}` vs `Q_{2,m^2}`.
pub fn spectral_separation_report(m_max: usize, opts: &EigenOptions) -> Result<ProfileTable> {
    let mut t = ProfileTable::new("separation", format!("m=2..={m_max}"), opts.tol);
    // No van Kampen diagram over a relator-free presentation has a face, so
    // the infimum defining the dual profile is over an empty set.
    let free = Presentation::free(&["a", "b"]);
    debug_assert!(free.relators.is_empty());
    t.push(0, "F2", "dual_profile", ExtendedValue::Infinite);

    let surface = families::single_relator_disk(&Presentation::surface(2), 0)?;
    t.push(surface.boundary_length(), "surface_genus=2", "mu1", finite(dual_mu1_weighted(&surface, opts)?));
    t.push(
        surface.boundary_length(),
        "surface_genus=2",
        "mu1_unweighted",
        finite(dual_mu1_unweighted(&surface, opts)?),
    );

    for m in 2..=m_max {
        let square = families::grid(m, 2 * m)?;
        let thin = families::grid(2, m * m)?;
        let a = finite(dual_mu1_weighted(&square, opts)?);
        let b = finite(dual_mu1_weighted(&thin, opts)?);
        let params = format!("m={m}");
        t.push(square.area(), params.clone(), "mu1_square", a);
        t.push(square.area(), params.clone(), "mu1_thin", b);
        t.push(square.area(), params, "ratio_thin_over_square", b / a);
    }
    t.sort();
    Ok(t)
}
