//! Dirichlet eigenvalues of the primal skeleton and of the killed face-dual
//! network, with closed forms for rectangular grids and Rayleigh quotients.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::diagram::DiskDiagram;
use crate::eigen::{smallest_eigenpair, EigenOptions, SymMatrix};
use crate::value::ExtendedValue;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralResult {
    pub value: ExtendedValue,
    /// Absent when the value is infinite.
    pub eigenvector: Option<Vec<f64>>,
    /// Vertex or face id of each eigenvector entry.
    pub nodes: Vec<usize>,
    pub residual: f64,
    pub iterations: usize,
}

impl SpectralResult {
    fn infinite() -> Self {
        SpectralResult { value: ExtendedValue::Infinite, eigenvector: None, nodes: Vec::new(), residual: 0.0, iterations: 0 }
    }
}

/// `lambda_1` of `I - D^{-1/2} A D^{-1/2}` on interior vertices, where `D`
/// holds full degrees and `A` the interior adjacency with multiplicity.
pub fn primal_lambda1(d: &DiskDiagram, opts: &EigenOptions) -> Result<SpectralResult> {
    let interior = d.interior_vertices();
    if interior.is_empty() {
        return Ok(SpectralResult::infinite());
    }
    let mut index = vec![usize::MAX; d.vertex_count()];
    for (i, &v) in interior.iter().enumerate() {
        index[v] = i;
    }
    let deg = d.degrees();
    let mut t: Vec<(usize, usize, f64)> = (0..interior.len()).map(|i| (i, i, 1.0)).collect();
    for (h, he) in d.half_edges().iter().enumerate() {
        let (u, v) = (he.origin, d.head(h));
        if index[u] != usize::MAX && index[v] != usize::MAX {
            t.push((index[u], index[v], -1.0 / ((deg[u] * deg[v]) as f64).sqrt()));
        }
    }
    let pair = smallest_eigenpair(&SymMatrix::from_triplets(interior.len(), &t), opts)?;
    Ok(SpectralResult {
        value: ExtendedValue::Finite(pair.value),
        eigenvector: Some(pair.vector),
        nodes: interior,
        residual: pair.residual,
        iterations: pair.iterations,
    })
}

/// The killed face-dual multigraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualNetwork {
    pub faces: usize,
    /// Shared edge count for each unordered pair `f < g` of distinct faces.
    pub m: BTreeMap<(usize, usize), usize>,
    /// Two per edge with the same face on both sides.
    pub self_loop: Vec<usize>,
    /// Edges between the face and the exterior.
    pub b: Vec<usize>,
    pub perimeter: Vec<usize>,
}

impl DualNetwork {
    /// Neighbour lists `(g, m(f,g))` for each face.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.faces];
        for (&(f, g), &c) in &self.m {
            adj[f].push((g, c));
            adj[g].push((f, c));
        }
        adj
    }

    /// `|df| = sum_g m(f,g) + self_loop(f) + b(f)` for every face.
    pub fn perimeter_identity_holds(&self) -> bool {
        let adj = self.adjacency();
        (0..self.faces).all(|f| adj[f].iter().map(|&(_, c)| c).sum::<usize>() + self.self_loop[f] + self.b[f] == self.perimeter[f])
    }

    /// Whether every face reaches the exterior through the network.
    pub fn killed_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen: Vec<bool> = self.b.iter().map(|&x| x > 0).collect();
        let mut stack: Vec<usize> = (0..self.faces).filter(|&f| seen[f]).collect();
        while let Some(f) = stack.pop() {
            for &(g, _) in &adj[f] {
                if !seen[g] {
                    seen[g] = true;
                    stack.push(g);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Diagonal of the unweighted Dirichlet operator `K`.
    pub fn k_diagonal(&self) -> Vec<usize> {
        let adj = self.adjacency();
        (0..self.faces).map(|f| adj[f].iter().map(|&(_, c)| c).sum::<usize>() + self.b[f]).collect()
    }

    fn operator(&self, weighted: bool) -> SymMatrix {
        let scale: Vec<f64> =
            (0..self.faces).map(|f| if weighted { 1.0 / (self.perimeter[f] as f64).sqrt() } else { 1.0 }).collect();
        let mut t: Vec<(usize, usize, f64)> =
            self.k_diagonal().iter().enumerate().map(|(f, &k)| (f, f, k as f64 * scale[f] * scale[f])).collect();
        for (&(f, g), &c) in &self.m {
            let v = -(c as f64) * scale[f] * scale[g];
            t.push((f, g, v));
            t.push((g, f, v));
        }
        SymMatrix::from_triplets(self.faces, &t)
    }
}

pub fn dual_network(d: &DiskDiagram) -> DualNetwork {
    let nf = d.face_count();
    let mut net = DualNetwork {
        faces: nf,
        m: BTreeMap::new(),
        self_loop: vec![0; nf],
        b: vec![0; nf],
        perimeter: d.faces().iter().map(|f| f.cycle.len()).collect(),
    };
    for e in 0..d.edge_count() {
        match d.edge_sides(e) {
            (Some(f), Some(g)) if f == g => net.self_loop[f] += 2,
            (Some(f), Some(g)) => *net.m.entry((f.min(g), f.max(g))).or_insert(0) += 1,
            (Some(f), None) | (None, Some(f)) => net.b[f] += 1,
            (None, None) => {}
        }
    }
    net
}

fn dual_mu1(d: &DiskDiagram, weighted: bool, opts: &EigenOptions) -> Result<SpectralResult> {
    if d.face_count() == 0 {
        return Ok(SpectralResult::infinite());
    }
    let net = dual_network(d);
    if !net.killed_connected() {
        return Err(Error::Precondition("face-dual network does not reach the exterior".into()));
    }
    let pair = smallest_eigenpair(&net.operator(weighted), opts)?;
    Ok(SpectralResult {
        value: ExtendedValue::Finite(pair.value),
        eigenvector: Some(pair.vector),
        nodes: (0..d.face_count()).collect(),
        residual: pair.residual,
        iterations: pair.iterations,
    })
}

/// Smallest eigenvalue of `K`; infinite when there are no faces.
pub fn dual_mu1_unweighted(d: &DiskDiagram, opts: &EigenOptions) -> Result<SpectralResult> {
    dual_mu1(d, false, opts)
}

/// Smallest eigenvalue of `W^{-1/2} K W^{-1/2}` with `W = diag(|df|)`.
pub fn dual_mu1_weighted(d: &DiskDiagram, opts: &EigenOptions) -> Result<SpectralResult> {
    dual_mu1(d, true, opts)
}

/// `lambda_1(Q_{p,q}) = 1 - (cos(pi/p) + cos(pi/q))/2`.
pub fn grid_lambda1_exact(p: usize, q: usize) -> f64 {
    1.0 - 0.5 * ((PI / p as f64).cos() + (PI / q as f64).cos())
}

/// `1 - (cos(pi/(p+1)) + cos(pi/(q+1)))/2`, the smallest eigenvalue of
/// `I - P` for the killed face walk `P` on `Q_{p,q}`. This is the weighted
/// dual eigenvalue; the unweighted one is four times larger because every
/// face has perimeter 4.
pub fn grid_dual_mu1_exact(p: usize, q: usize) -> f64 {
    1.0 - 0.5 * ((PI / (p + 1) as f64).cos() + (PI / (q + 1) as f64).cos())
}

/// Primal Rayleigh quotient `sum_e (f(u) - f(v))^2 / sum_v deg(v) f(v)^2`
/// for `f` given on interior vertices (in `interior_vertices` order) and
/// extended by zero.
pub fn rayleigh_primal(d: &DiskDiagram, f: &[f64]) -> Result<f64> {
    let interior = d.interior_vertices();
    if f.len() != interior.len() {
        return Err(Error::Param(format!("expected {} values, got {}", interior.len(), f.len())));
    }
    let mut full = vec![0.0; d.vertex_count()];
    for (&v, &x) in interior.iter().zip(f) {
        full[v] = x;
    }
    let deg = d.degrees();
    let den: f64 = interior.iter().map(|&v| deg[v] as f64 * full[v] * full[v]).sum();
    if den == 0.0 {
        return Err(Error::Param("test function vanishes".into()));
    }
    let num: f64 = (0..d.edge_count())
        .map(|e| {
            let (u, v) = d.edge_ends(e);
            (full[u] - full[v]).powi(2)
        })
        .sum();
    Ok(num / den)
}

fn rayleigh_dual(d: &DiskDiagram, g: &[f64], weighted: bool) -> Result<f64> {
    if g.len() != d.face_count() {
        return Err(Error::Param(format!("expected {} values, got {}", d.face_count(), g.len())));
    }
    let net = dual_network(d);
    let den: f64 =
        (0..net.faces).map(|f| g[f] * g[f] * if weighted { net.perimeter[f] as f64 } else { 1.0 }).sum();
    if den == 0.0 {
        return Err(Error::Param("test function vanishes".into()));
    }
    let mut num: f64 = (0..net.faces).map(|f| net.b[f] as f64 * g[f] * g[f]).sum();
    for (&(f, h), &c) in &net.m {
        num += c as f64 * (g[f] - g[h]).powi(2);
    }
    Ok(num / den)
}

/// `[sum_{f~g} m (g_f - g_g)^2 + sum_f b(f) g_f^2] / sum_f g_f^2`.
pub fn rayleigh_dual_unweighted(d: &DiskDiagram, g: &[f64]) -> Result<f64> {
    rayleigh_dual(d, g, false)
}

/// As [`rayleigh_dual_unweighted`] with denominator `sum_f |df| g_f^2`.
pub fn rayleigh_dual_weighted(d: &DiskDiagram, g: &[f64]) -> Result<f64> {
    rayleigh_dual(d, g, true)
}
