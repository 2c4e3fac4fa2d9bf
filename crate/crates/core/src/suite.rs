//! The numbered acceptance criteria and the cross-module invariants, run as
//! one report.

use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{DiskDiagram, HalfEdge};
use crate::eigen::EigenOptions;
use crate::families::{self, collapse, grid_vertex};
use crate::fillarea::{fillarea_oracle, FillAreaCache};
use crate::hqm::hfmhqm_check;
use crate::isoperimetry::{
    cheeger_dual_exact, cheeger_primal_exact, hole_fill, is_dual_connected, is_hole_free, multiboundary,
};
use crate::profiles::{spectral_separation_report, sweep_grid_profiles, ProfileTable};
use crate::resistance::{effective_resistance, extremal_inversion_check};
use crate::shelling::{fl_exact, fl_greedy, radius};
use crate::spectra::{
    dual_mu1_unweighted, dual_mu1_weighted, dual_network, grid_dual_mu1_exact, grid_lambda1_exact, primal_lambda1,
    rayleigh_dual_unweighted,
};
use crate::word::{self, Letter, Presentation};
use crate::Result;

pub const CRITERIA: std::ops::RangeInclusive<usize> = 1..=15;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Criterion numbers to run; empty means all.
    pub criteria: Vec<usize>,
    pub invariants: bool,
    /// Shrinks the sweep ranges.
    pub quick: bool,
    /// Corrupts one rotation of the `Q_{4,4}` fixture (fault injection).
    pub tamper_grid: bool,
    pub seed: u64,
    pub eigen: EigenOptions,
    /// Worker threads; checks are independent and reported in fixed order.
    pub threads: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            criteria: Vec::new(),
            invariants: true,
            quick: false,
            tamper_grid: false,
            seed: 7,
            eigen: EigenOptions::default(),
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title, c.detail);
        }
        let _ = writeln!(s, "{} passed, {} failed", self.passed, self.failed);
        s
    }
}

/// Accumulates sub-checks into one verdict with the first failure noted.
struct Tally {
    ok: bool,
    count: usize,
    first_failure: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { ok: true, count: 0, first_failure: None, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.ok = false;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn finish(self, id: &str, title: &str) -> Check {
        let mut detail = format!("{} sub-checks", self.count);
        if let Some(f) = self.first_failure {
            let _ = write!(detail, "; first failure: {f}");
        }
        for n in self.notes {
            let _ = write!(detail, "; {n}");
        }
        Check { id: id.into(), title: title.into(), passed: self.ok, detail }
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// `Q_{4,4}` with one rotation pointer redirected to another vertex.
pub fn tampered_grid() -> Result<DiskDiagram> {
    let d = families::grid(4, 4)?;
    let mut hes: Vec<HalfEdge> = d.half_edges().to_vec();
    let h = d.out_half_edges(grid_vertex(4, 1, 1))[0];
    hes[h].next_rotation = d.out_half_edges(grid_vertex(4, 2, 2))[0];
    DiskDiagram::from_parts(
        d.presentation().clone(),
        d.vertex_count(),
        hes,
        d.faces().to_vec(),
        d.outer().to_vec(),
        d.basepoint(),
    )
}

/// Small named diagrams used by the fixture-wide checks.
pub fn fixture_diagrams() -> Result<Vec<(String, DiskDiagram)>> {
    let mut v = Vec::new();
    for p in 2..=4 {
        for q in p..=4 {
            v.push((format!("Q{p}{q}"), families::grid(p, q)?));
        }
    }
    for m in 1..=4 {
        v.push((format!("fan{m}"), families::fan(m)?));
    }
    v.push(("dipole".into(), families::dipole()?));
    let c = families::collapse_fixture()?;
    v.push(("collapse".into(), c.d));
    v.push(("collapse_unfolded".into(), c.d_unfolded));
    v.push(("surface2".into(), families::single_relator_disk(&Presentation::surface(2), 0)?));
    v.push(("heisenberg3".into(), families::heisenberg(3)?.diagram));
    Ok(v)
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut jobs: Vec<Box<dyn Fn() -> Check + Sync + '_>> = Vec::new();
    for k in CRITERIA {
        if !cfg.criteria.is_empty() && !cfg.criteria.contains(&k) {
            continue;
        }
        jobs.push(Box::new(move || {
            let (title, result) = criterion(k, cfg);
            result.unwrap_or_else(|e| Check {
                id: format!("C{k}"),
                title: title.into(),
                passed: false,
                detail: format!("error: {e}"),
            })
        }));
    }
    if cfg.invariants {
        for &(id, title, f) in INVARIANTS {
            jobs.push(Box::new(move || {
                f(cfg).unwrap_or_else(|e| Check {
                    id: id.into(),
                    title: title.into(),
                    passed: false,
                    detail: format!("error: {e}"),
                })
            }));
        }
    }
    let threads = cfg.threads.clamp(1, jobs.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Check>>> = jobs.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let c = jobs[i]();
                *slots[i].lock().unwrap() = Some(c);
            });
        }
    });
    let checks: Vec<Check> = slots.into_iter().map(|m| m.into_inner().unwrap().expect("job ran")).collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    SuiteReport { checks, passed, failed }
}

fn criterion(k: usize, cfg: &SuiteConfig) -> (&'static str, Result<Check>) {
    let title = match k {
        1 => "grid primal spectrum",
        2 => "grid dual spectrum",
        3 => "grid filling length",
        4 => "filling-area oracle",
        5 => "fan family",
        6 => "Heisenberg family",
        7 => "Cheeger inequalities",
        8 => "multiboundary identity",
        9 => "hole filling",
        10 => "collapse obstruction",
        11 => "hfmHQM on grids",
        12 => "extremal inversion chain",
        13 => "rigidity products",
        14 => "dual area bound",
        15 => "separation report",
        _ => unreachable!(),
    };
    let id = format!("C{k}");
    let run = |f: fn(&SuiteConfig, &mut Tally) -> Result<()>| -> Result<Check> {
        let mut t = Tally::new();
        f(cfg, &mut t)?;
        Ok(t.finish(&id, title))
    };
    let r = match k {
        1 => run(c1),
        2 => run(c2),
        3 => run(c3),
        4 => run(c4),
        5 => run(c5),
        6 => run(c6),
        7 => run(c7),
        8 => run(c8),
        9 => run(c9),
        10 => run(c10),
        11 => run(c11),
        12 => run(c12),
        13 => run(c13),
        14 => run(c14),
        _ => run(c15),
    };
    (title, r)
}

fn grid_max(cfg: &SuiteConfig) -> usize {
    if cfg.quick {
        12
    } else {
        50
    }
}

fn c1(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let top = grid_max(cfg);
    for p in 2..=top {
        for q in 2..=top {
            let l = primal_lambda1(&families::grid(p, q)?, &cfg.eigen)?.value.as_f64();
            let e = grid_lambda1_exact(p, q);
            t.check(close(l, e, 1e-10), || format!("Q{p},{q}: {l} vs {e}"));
        }
    }
    Ok(())
}

fn c2(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let top = grid_max(cfg);
    for p in 2..=top {
        for q in 2..=top {
            let d = families::grid(p, q)?;
            let e = grid_dual_mu1_exact(p, q);
            let w = dual_mu1_weighted(&d, &cfg.eigen)?.value.as_f64();
            let u = dual_mu1_unweighted(&d, &cfg.eigen)?.value.as_f64();
            t.check(close(w, e, 1e-10), || format!("Q{p},{q} weighted: {w} vs {e}"));
            t.check(close(u, 4.0 * e, 1e-10), || format!("Q{p},{q} counting: {u} vs {}", 4.0 * e));
        }
    }
    t.note("closed form compared with the |df|-weighted eigenvalue; counting-norm eigenvalue is 4x".into());
    Ok(())
}

fn c3(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    for p in 2..=4 {
        for q in 2..=4 {
            let d = families::grid(p, q)?;
            let r = fl_exact(&d, 0, 16)?;
            t.check(r.value == 2 * (p + q), || format!("exact Q{p},{q}: {}", r.value));
        }
    }
    let top = if cfg.quick { 6 } else { 10 };
    for p in 2..=top {
        for q in 2..=top {
            let r = fl_greedy(&families::grid(p, q)?, 0)?;
            t.check(r.value == 2 * (p + q), || format!("greedy Q{p},{q}: {}", r.value));
        }
    }
    Ok(())
}

fn c4(_: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let z2 = Presentation::z2();
    let (a, b) = (Letter::pos(0), Letter::pos(1));
    for p in 1..=9 {
        for q in 1..=9 / p {
            let mut w = vec![a; p];
            w.extend(vec![b; q]);
            w.extend(vec![a.inverse(); p]);
            w.extend(vec![b.inverse(); q]);
            let r = fillarea_oracle(&z2, &w, 9)?.count();
            t.check(r == Some(p * q), || format!("[a^{p},b^{q}]: {r:?}"));
        }
    }
    let fan = Presentation::fan();
    for m in 1..=3 {
        let w = vec![Letter::pos(2); 2 * m];
        let r = fillarea_oracle(&fan, &w, 2 * m)?.count();
        t.check(r == Some(2 * m), || format!("t^{}: {r:?}", 2 * m));
    }
    for w in ["", "aA", "abBA", "abBAbaAB"] {
        let r = fillarea_oracle(&z2, &z2.parse_compact_word(w)?, 0)?.count();
        t.check(r == Some(0), || format!("{w:?}: {r:?}"));
    }
    Ok(())
}

fn c5(_: &SuiteConfig, t: &mut Tally) -> Result<()> {
    for m in 1..=8 {
        let d = families::fan(m)?;
        let interior = d.interior_vertices();
        let deg = d.degrees();
        t.check(interior.len() == 1 && deg[interior[0]] == 2 * m, || format!("fan({m}) interior {interior:?}"));
        t.check(d.area() == 2 * m, || format!("fan({m}) area {}", d.area()));
    }
    Ok(())
}

fn c6(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let c = crate::fixtures::regressions()?.heisenberg_rayleigh_constant;
    let top = if cfg.quick { 6 } else { 12 };
    let mut areas = Vec::new();
    for n in 3..=top {
        let h = families::heisenberg(n)?;
        let d = &h.diagram;
        areas.push(format!("{}:{}", n, d.area()));
        t.check(d.area() == n * n * n + 2 * n * n, || format!("n={n}: area {} vs {}", d.area(), n * n * n + 2 * n * n));
        t.check(d.boundary_length() == 10 * n, || format!("n={n}: boundary {}", d.boundary_length()));
        let mu = dual_mu1_unweighted(d, &cfg.eigen)?.value.as_f64();
        let r = rayleigh_dual_unweighted(d, &h.corridor_test_function())?;
        let bound = c / (n * n) as f64;
        t.check(mu <= r * (1.0 + 1e-9) && r <= bound * (1.0 + 1e-9), || format!("n={n}: {mu} <= {r} <= {bound}"));
    }
    t.note(format!("measured areas {}", areas.join(",")));
    Ok(())
}

fn c7(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    for (name, d) in fixture_diagrams()? {
        if d.interior_vertices().len() <= 20 && !d.interior_vertices().is_empty() {
            let h = cheeger_primal_exact(&d, 20)?.value;
            let l = primal_lambda1(&d, &cfg.eigen)?.value.as_f64();
            t.check(l >= h * h / 2.0 - 1e-9, || format!("{name}: lambda1 {l} < h^2/2 = {}", h * h / 2.0));
        }
        if d.face_count() <= 20 && d.face_count() > 0 {
            let h = cheeger_dual_exact(&d, false, 20)?.value;
            let lmax = d.face_length_range().1 as f64;
            let mu = dual_mu1_unweighted(&d, &cfg.eigen)?.value.as_f64();
            let rhs = h * h / (2.0 * lmax * lmax);
            t.check(mu >= rhs - 1e-9, || format!("{name}: mu~1 {mu} < {rhs}"));
        }
    }
    Ok(())
}

/// Random face subsets with a per-subset density drawn uniformly.
fn random_subsets(d: &DiskDiagram, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    (0..count)
        .map(|_| {
            let density: f64 = rng.random();
            (0..d.face_count()).filter(|_| rng.random::<f64>() < density).collect()
        })
        .collect()
}

fn identity_diagrams(cfg: &SuiteConfig) -> Result<Vec<(String, DiskDiagram)>> {
    let q44 = if cfg.tamper_grid { tampered_grid()? } else { families::grid(4, 4)? };
    Ok(vec![
        ("Q44".into(), q44),
        ("fan4".into(), families::fan(4)?),
        ("heisenberg3".into(), families::heisenberg(3)?.diagram),
        ("collapse".into(), families::collapse_fixture()?.d),
    ])
}

/// Edges with exactly one side in the set.
fn edge_cut(d: &DiskDiagram, a: &[usize]) -> usize {
    let inside = |f: Option<usize>| f.is_some_and(|f| a.contains(&f));
    (0..d.edge_count())
        .filter(|&e| {
            let (s, t) = d.edge_sides(e);
            inside(s) != inside(t)
        })
        .count()
}

fn c8(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (name, d) in identity_diagrams(cfg)? {
        for a in random_subsets(&d, 200, &mut rng) {
            match multiboundary(&d, &a) {
                Ok(mb) => {
                    let lens: usize = mb.loops.iter().map(Vec::len).sum();
                    let closed = mb
                        .loops
                        .iter()
                        .all(|l| (0..l.len()).all(|i| d.head(l[i]) == d.origin(l[(i + 1) % l.len()])));
                    let cut = edge_cut(&d, &a);
                    t.check(lens == cut && closed, || format!("{name} {a:?}: loops {lens}, cut {cut}, closed {closed}"));
                }
                Err(e) => t.check(false, || format!("{name} {a:?}: {e}")),
            }
        }
    }
    Ok(())
}

fn c9(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut used = 0;
    for (name, d) in identity_diagrams(cfg)? {
        for a in random_subsets(&d, 200, &mut rng) {
            if a.is_empty() || !is_dual_connected(&d, &a)? {
                continue;
            }
            used += 1;
            let filled = hole_fill(&d, &a)?;
            let superset = a.iter().all(|f| filled.contains(f));
            let hf = is_hole_free(&d, &filled)?;
            let conn = is_dual_connected(&d, &filled)?;
            let before = multiboundary(&d, &a)?.total_length;
            let after = multiboundary(&d, &filled)?.total_length;
            t.check(superset && hf && conn && after <= before, || {
                format!("{name} {a:?}: superset {superset}, hole-free {hf}, connected {conn}, {after} <= {before}")
            });
        }
    }
    t.note(format!("{used} dual-connected subsets"));
    Ok(())
}

fn c10(_: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let c = families::collapse_fixture()?;
    t.check(is_dual_connected(&c.d_unfolded, &c.a_prime)?, || "A' not dual-connected".into());
    t.check(is_hole_free(&c.d_unfolded, &c.a_prime)?, || "A' not hole-free in D'".into());
    let ring = vec![collapse::N, collapse::W, collapse::S, collapse::SIGMA];
    t.check(c.a_collapsed == ring, || format!("collapse image {:?}", c.a_collapsed));
    t.check(!is_hole_free(&c.d, &c.a_collapsed)?, || "collapsed ring is hole-free".into());
    Ok(())
}

fn c11(_: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let p = Presentation::z2().free_completion();
    for (a, b) in [(2, 2), (2, 3), (3, 3)] {
        let v = hfmhqm_check(&families::grid(a, b)?, &p, 1.0, 20)?;
        t.check(v.holds(), || format!("Q{a},{b}: {:?}", v.status));
    }
    Ok(())
}

fn c12(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let top = if cfg.quick { 5 } else { 8 };
    for p in 2..=top {
        for q in 2..=top {
            let d = families::grid(p, q)?;
            let r = extremal_inversion_check(&d, &cfg.eigen, Some(2 * (p + q)))?;
            t.check(r.verdict, || format!("Q{p},{q}: {r:?}"));
            if (p, q) == (2, 2) {
                t.check(close(r.r_eff, 0.25, 1e-12) && close(r.lower_bound, 0.25, 1e-9), || {
                    format!("Q22 equality: {} vs {}", r.r_eff, r.lower_bound)
                });
            }
        }
    }
    Ok(())
}

fn c13(_: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let c_prime = crate::fixtures::regressions()?.grid_fl_constant;
    for p in 2..=50 {
        let l = grid_lambda1_exact(p, p);
        let fl = (4 * p) as f64;
        let area = (p * p) as f64;
        t.check(fl * area >= (2.0 / 4.0) / l * (1.0 - 1e-12), || format!("p={p}: FL*Area"));
        t.check(fl >= c_prime / l.sqrt() * (1.0 - 1e-12), || format!("p={p}: FL {fl} < {}", c_prime / l.sqrt()));
    }
    Ok(())
}

fn c14(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    for (name, d) in fixture_diagrams()? {
        let mu = dual_mu1_weighted(&d, &cfg.eigen)?.value.as_f64();
        let lmin = d.face_length_range().0 as f64;
        let bound = d.boundary_length() as f64 / (lmin * mu);
        t.check(d.area() as f64 <= bound * (1.0 + 1e-9), || format!("{name}: area {} > {bound}", d.area()));
    }
    Ok(())
}

fn c15(cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let r = spectral_separation_report(20, &cfg.eigen)?;
    t.check(r.get(0, "dual_profile").is_some_and(|v| v.is_infinite()), || "free row is finite".into());
    let mu = r.get(8, "mu1").map(|v| v.as_f64()).unwrap_or(f64::NAN);
    t.check(close(mu, 1.0, 1e-10), || format!("surface disk {mu}"));
    let mut ratios = Vec::new();
    for m in 5..=20 {
        let ratio = r.get(2 * m * m, "ratio_thin_over_square").map(|v| v.as_f64()).unwrap_or(f64::NAN);
        ratios.push(format!("{m}:{ratio:.3}"));
        let need = (m * m) as f64 / 8.0;
        t.check(ratio >= need, || format!("m={m}: ratio {ratio:.4} < {need}"));
    }
    t.note(format!("ratios {}", ratios.join(",")));
    Ok(())
}

type InvariantFn = fn(&SuiteConfig) -> Result<Check>;

const INVARIANTS: &[(&str, &str, InvariantFn)] = &[
    ("I-valid", "fixtures validate", inv_valid),
    ("I-dual-network", "dual perimeter identity and killed connectivity", inv_dual_network),
    ("I-fl", "filling length bounds and certificate replay", inv_fl),
    ("I-oracle", "oracle symmetry under inversion and rotation", inv_oracle),
    ("I-sandwich", "counting vs weighted dual eigenvalue sandwich", inv_sandwich),
    ("I-faber-krahn", "Faber-Krahn chain on grids", inv_faber_krahn),
    ("I-primal-iso", "primal spectral-isoperimetric inequality on grids", inv_primal_iso),
    ("I-profiles", "profile monotonicity and CSV round trip", inv_profiles),
    ("I-escape", "inversion chain on non-grid fixtures", inv_escape),
    ("I-rigidity-links", "rigidity chain links on grids", inv_rigidity_links),
];

fn finish(id: &str, title: &str, f: impl FnOnce(&mut Tally) -> Result<()>) -> Result<Check> {
    let mut t = Tally::new();
    f(&mut t)?;
    Ok(t.finish(id, title))
}

fn inv_valid(_: &SuiteConfig) -> Result<Check> {
    finish("I-valid", "fixtures validate", |t| {
        for (name, d) in fixture_diagrams()? {
            let v = d.validate();
            t.check(v.all_pass(), || format!("{name}: {:?}", v.failures()));
        }
        Ok(())
    })
}

fn inv_dual_network(_: &SuiteConfig) -> Result<Check> {
    finish("I-dual-network", "dual perimeter identity and killed connectivity", |t| {
        for (name, d) in fixture_diagrams()? {
            let net = dual_network(&d);
            t.check(net.perimeter_identity_holds() && net.killed_connected(), || name.clone());
        }
        Ok(())
    })
}

fn inv_fl(_: &SuiteConfig) -> Result<Check> {
    finish("I-fl", "filling length bounds and certificate replay", |t| {
        for (name, d) in fixture_diagrams()? {
            let Some(b) = d.basepoint() else { continue };
            if d.area() > 12 {
                continue;
            }
            let ex = fl_exact(&d, b, 12)?;
            let gr = fl_greedy(&d, b)?;
            let rad = radius(&d, b)?;
            t.check(ex.value >= d.boundary_length() && ex.value >= 2 * rad, || format!("{name}: lower bounds"));
            t.check(gr.value >= ex.value, || format!("{name}: greedy {} < exact {}", gr.value, ex.value));
            for c in [&ex.certificate, &gr.certificate] {
                let replayed = c.replay(&d);
                t.check(replayed.as_ref().is_ok_and(|&m| m == c.max_boundary), || format!("{name}: replay {replayed:?}"));
            }
        }
        Ok(())
    })
}

fn inv_oracle(cfg: &SuiteConfig) -> Result<Check> {
    finish("I-oracle", "oracle symmetry under inversion and rotation", |t| {
        let p = Presentation::z2();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut cache = FillAreaCache::new(&p, 6);
        for _ in 0..50 {
            let len = rng.random_range(2..=8);
            let w: Vec<Letter> =
                (0..len).map(|_| Letter { gen: rng.random_range(0..2), inv: rng.random() }).collect();
            let base = fillarea_oracle(&p, &w, 6)?.count();
            let inv = fillarea_oracle(&p, &word::inverse(&w), 6)?.count();
            let k = rng.random_range(0..len);
            let rot = fillarea_oracle(&p, &word::rotate(&w, k), 6)?.count();
            t.check(base == inv && base == rot && cache.area(&w)? == base, || {
                format!("{}: {base:?} {inv:?} {rot:?}", p.format_word(&w))
            });
        }
        Ok(())
    })
}

fn inv_sandwich(cfg: &SuiteConfig) -> Result<Check> {
    finish("I-sandwich", "counting vs weighted dual eigenvalue sandwich", |t| {
        for (name, d) in fixture_diagrams()? {
            let w = dual_mu1_weighted(&d, &cfg.eigen)?.value.as_f64();
            let u = dual_mu1_unweighted(&d, &cfg.eigen)?.value.as_f64();
            let (lmin, lmax) = d.face_length_range();
            t.check(lmin as f64 * w <= u + 1e-9 && u <= lmax as f64 * w + 1e-9, || format!("{name}: {lmin}*{w} <= {u} <= {lmax}*{w}"));
        }
        Ok(())
    })
}

fn inv_faber_krahn(_: &SuiteConfig) -> Result<Check> {
    finish("I-faber-krahn", "Faber-Krahn chain on grids", |t| {
        let c0 = 260.0;
        for p in 2..=50 {
            let vol = (4 * (p - 1) * (p - 1)) as f64;
            let l = grid_lambda1_exact(p, p);
            // alpha = 2: the volume exponent 2/alpha - 2 is -1.
            t.check(l >= 0.5 / c0 / vol, || format!("p={p}"));
        }
        Ok(())
    })
}

fn inv_primal_iso(_: &SuiteConfig) -> Result<Check> {
    finish("I-primal-iso", "primal spectral-isoperimetric inequality on grids", |t| {
        for p in 2..=50 {
            for q in [p, p + 1] {
                let l = grid_lambda1_exact(p, q);
                let (l_max, l_min) = (4.0, 4.0);
                let rhs = (l_max / l_min) * (1.0 + 1.0 / l) * (2 * (p + q)) as f64;
                t.check((p * q) as f64 <= rhs, || format!("Q{p},{q}: {} > {rhs}", p * q));
            }
        }
        Ok(())
    })
}

fn inv_profiles(cfg: &SuiteConfig) -> Result<Check> {
    finish("I-profiles", "profile monotonicity and CSV round trip", |t| {
        let table = sweep_grid_profiles(if cfg.quick { 5 } else { 10 }, &cfg.eigen)?;
        for q in ["lambda_profile", "dual_profile"] {
            let col = table.column(q);
            t.check(col.windows(2).all(|w| w[1].value <= w[0].value), || format!("{q} increases"));
        }
        t.check(table.column("bracket_ok").iter().all(|r| r.value.as_f64() == 1.0), || "bracket".into());
        let back = ProfileTable::read_csv(table.to_csv_string().as_bytes())?;
        t.check(back == table, || "CSV round trip differs".into());
        Ok(())
    })
}

fn inv_escape(cfg: &SuiteConfig) -> Result<Check> {
    finish("I-escape", "inversion chain on non-grid fixtures", |t| {
        for (name, d) in fixture_diagrams()? {
            if d.interior_vertices().is_empty() || name.starts_with('Q') {
                continue;
            }
            let r = extremal_inversion_check(&d, &cfg.eigen, None)?;
            t.check(r.verdict, || format!("{name}: {r:?}"));
        }
        Ok(())
    })
}

fn inv_rigidity_links(cfg: &SuiteConfig) -> Result<Check> {
    finish("I-rigidity-links", "rigidity chain links on grids", |t| {
        for p in 2..=6 {
            let d = families::grid(p, p)?;
            let inv = extremal_inversion_check(&d, &cfg.eigen, None)?;
            let (l, r, vol) = (inv.lambda1, effective_resistance(&d, inv.v0)?, inv.vol_interior);
            let fl = fl_greedy(&d, 0)?.value as f64;
            t.check(vol as f64 >= 1.0 / (l * r) * (1.0 - 1e-9), || format!("p={p}: vol {vol} < 1/(lambda R)"));
            t.check(vol <= 4 * d.area(), || format!("p={p}: vol {vol} > 4 Area"));
            t.check(r <= fl / 2.0, || format!("p={p}: R {r} > FL/2"));
        }
        Ok(())
    })
}
