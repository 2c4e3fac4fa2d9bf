//! Effective resistance to the boundary, the Dirichlet metric built from the
//! first eigenfunction, and the extremal-length inversion chain.

use serde::Serialize;

use crate::diagram::DiskDiagram;
use crate::eigen::{solve_spd, EigenOptions, SymMatrix};
use crate::spectra::primal_lambda1;
use crate::{Error, Result};

/// Residual bound for the Dirichlet linear solves.
pub const SOLVE_TOL: f64 = 1e-10;

/// Effective resistance between `source` and the set `sinks` in a multigraph
/// with unit conductances. Self-loops carry no current.
pub fn graph_effective_resistance(n: usize, edges: &[(usize, usize)], source: usize, sinks: &[usize]) -> Result<f64> {
    if source >= n {
        return Err(Error::UnknownVertex(source));
    }
    let mut fixed = vec![false; n];
    for &s in sinks {
        if s >= n {
            return Err(Error::UnknownVertex(s));
        }
        fixed[s] = true;
    }
    if fixed[source] {
        return Err(Error::Precondition("source lies in the sink set".into()));
    }
    if sinks.is_empty() {
        return Err(Error::Precondition("empty sink set".into()));
    }
    fixed[source] = true;

    let mut index = vec![usize::MAX; n];
    let mut free = 0;
    for v in 0..n {
        if !fixed[v] {
            index[v] = free;
            free += 1;
        }
    }
    // Potential 1 at the source, 0 on sinks, harmonic elsewhere.
    let mut t = Vec::new();
    let mut rhs = vec![0.0; free];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::UnknownVertex(u.max(v)));
        }
        if u == v {
            continue;
        }
        for (a, b) in [(u, v), (v, u)] {
            if index[a] == usize::MAX {
                continue;
            }
            t.push((index[a], index[a], 1.0));
            if index[b] != usize::MAX {
                t.push((index[a], index[b], -1.0));
            } else if b == source {
                rhs[index[a]] += 1.0;
            }
        }
    }
    let x = if free == 0 {
        Vec::new()
    } else {
        // Free vertices cut off from every sink make the system singular.
        let dist = reach(n, edges, sinks);
        if let Some(v) = (0..n).find(|&v| index[v] != usize::MAX && !dist[v]) {
            return Err(Error::Precondition(format!("vertex {v} cannot reach the sink set")));
        }
        solve_spd(&SymMatrix::from_triplets(free, &t), &rhs, SOLVE_TOL)?.x
    };
    let potential = |v: usize| {
        if v == source {
            1.0
        } else if index[v] == usize::MAX {
            0.0
        } else {
            x[index[v]]
        }
    };
    let current: f64 = edges
        .iter()
        .filter(|&&(u, v)| u != v && (u == source || v == source))
        .map(|&(u, v)| 1.0 - potential(if u == source { v } else { u }))
        .sum();
    if current <= 0.0 {
        return Err(Error::Precondition("source is disconnected from the sink set".into()));
    }
    Ok(1.0 / current)
}

fn reach(n: usize, edges: &[(usize, usize)], from: &[usize]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = from.to_vec();
    for &s in from {
        seen[s] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

fn edge_list(d: &DiskDiagram) -> Vec<(usize, usize)> {
    (0..d.edge_count()).map(|e| d.edge_ends(e)).collect()
}

/// `R_eff(v0 <-> boundary)` with unit conductances on the 1-skeleton.
pub fn effective_resistance(d: &DiskDiagram, v0: usize) -> Result<f64> {
    if v0 >= d.vertex_count() {
        return Err(Error::UnknownVertex(v0));
    }
    if d.is_boundary_vertex(v0) {
        return Err(Error::Precondition(format!("vertex {v0} is not interior")));
    }
    graph_effective_resistance(d.vertex_count(), &edge_list(d), v0, &d.boundary_vertices())
}

/// First Dirichlet eigenvalue with its eigenfunction `f = D^{-1/2} phi`,
/// indexed by vertex id, zero on the boundary, positive and with max 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigenfunction {
    pub lambda1: f64,
    pub values: Vec<f64>,
    /// Smallest vertex id attaining the maximum.
    pub argmax: usize,
}

pub fn dirichlet_eigenfunction(d: &DiskDiagram, opts: &EigenOptions) -> Result<Eigenfunction> {
    let r = primal_lambda1(d, opts)?;
    let (Some(lambda1), Some(phi)) = (r.value.finite(), r.eigenvector) else {
        return Err(Error::Precondition("diagram has no interior vertices".into()));
    };
    let deg = d.degrees();
    let mut values = vec![0.0; d.vertex_count()];
    for (&v, &x) in r.nodes.iter().zip(&phi) {
        values[v] = x / (deg[v] as f64).sqrt();
    }
    let (values, argmax) = normalise(values)?;
    Ok(Eigenfunction { lambda1, values, argmax })
}

fn normalise(mut f: Vec<f64>) -> Result<(Vec<f64>, usize)> {
    let top = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if top == 0.0 {
        return Err(Error::Precondition("zero function".into()));
    }
    let sign = if f.contains(&top) { 1.0 } else { -1.0 };
    f.iter_mut().for_each(|x| *x *= sign / top);
    let argmax = f.iter().position(|&x| x >= 1.0 - 1e-9).unwrap();
    Ok((f, argmax))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeMetric {
    /// Indexed by undirected edge id.
    pub values: Vec<f64>,
}

impl EdgeMetric {
    pub fn area(&self) -> f64 {
        self.values.iter().map(|m| m * m).sum()
    }

    pub fn length(&self, edges: &[usize]) -> f64 {
        edges.iter().map(|&e| self.values[e]).sum()
    }

    /// Shortest m-length from `v0` to the boundary (Dijkstra).
    pub fn escape_length(&self, d: &DiskDiagram, v0: usize) -> f64 {
        let n = d.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        dist[v0] = 0.0;
        let mut adj = vec![Vec::new(); n];
        for e in 0..d.edge_count() {
            let (u, v) = d.edge_ends(e);
            adj[u].push((v, self.values[e]));
            adj[v].push((u, self.values[e]));
        }
        loop {
            let Some(u) = (0..n).filter(|&v| !done[v] && dist[v].is_finite()).min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            else {
                return f64::INFINITY;
            };
            if d.is_boundary_vertex(u) {
                return dist[u];
            }
            done[u] = true;
            for &(v, w) in &adj[u] {
                dist[v] = dist[v].min(dist[u] + w);
            }
        }
    }
}

/// `m(e) = |f(u) - f(v)|` for an eigenfunction `f` of the random-walk
/// Dirichlet operator, given by vertex id and rescaled to max 1.
pub fn dirichlet_metric(d: &DiskDiagram, f: &[f64]) -> Result<EdgeMetric> {
    if f.len() != d.vertex_count() {
        return Err(Error::Param(format!("expected {} vertex values, got {}", d.vertex_count(), f.len())));
    }
    let mut f = f.to_vec();
    for v in d.boundary_vertices() {
        f[v] = 0.0;
    }
    let (f, _) = normalise(f)?;
    if f.iter().any(|&x| x < -1e-9) {
        return Err(Error::Precondition("eigenfunction changes sign".into()));
    }
    let deg = d.degrees();
    let interior = d.interior_vertices();
    let mut lf = vec![0.0; d.vertex_count()];
    for e in 0..d.edge_count() {
        let (u, v) = d.edge_ends(e);
        lf[u] += f[u] - f[v];
        lf[v] += f[v] - f[u];
    }
    let num: f64 = interior.iter().map(|&v| f[v] * lf[v]).sum();
    let den: f64 = interior.iter().map(|&v| deg[v] as f64 * f[v] * f[v]).sum();
    let lambda = num / den;
    let residual = interior.iter().map(|&v| (lf[v] - lambda * deg[v] as f64 * f[v]).abs()).fold(0.0, f64::max);
    if residual > 1e-8 {
        return Err(Error::Precondition(format!("not a Dirichlet eigenfunction (residual {residual:e})")));
    }
    let values = (0..d.edge_count())
        .map(|e| {
            let (u, v) = d.edge_ends(e);
            (f[u] - f[v]).abs()
        })
        .collect();
    Ok(EdgeMetric { values })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InversionReport {
    pub v0: usize,
    pub lambda1: f64,
    /// Sum of degrees over interior vertices.
    pub vol_interior: usize,
    pub r_eff: f64,
    /// `1 / (lambda1 * vol_interior)`.
    pub lower_bound: f64,
    pub d_v0: usize,
    pub fl: Option<usize>,
    pub lower_holds: bool,
    pub escape_holds: bool,
    /// `d(v0, boundary) <= FL / 2`, when a filling length was supplied.
    pub fl_holds: Option<bool>,
    pub verdict: bool,
}

/// Checks `1/(lambda1 vol) <= R_eff(v0) <= d(v0, boundary) [<= FL/2]` at the
/// eigenfunction's maximising vertex.
pub fn extremal_inversion_check(d: &DiskDiagram, opts: &EigenOptions, fl: Option<usize>) -> Result<InversionReport> {
    let ef = dirichlet_eigenfunction(d, opts)?;
    let v0 = ef.argmax;
    let deg = d.degrees();
    let vol_interior: usize = d.interior_vertices().iter().map(|&v| deg[v]).sum();
    let r_eff = effective_resistance(d, v0)?;
    let lower_bound = 1.0 / (ef.lambda1 * vol_interior as f64);
    let dist = d.distances_from(v0);
    let d_v0 = d.boundary_vertices().iter().filter_map(|&v| dist[v]).min().ok_or_else(|| {
        Error::Precondition("boundary unreachable from v0".into())
    })?;
    let rel = 1e-9;
    let lower_holds = r_eff >= lower_bound * (1.0 - rel);
    let escape_holds = r_eff <= d_v0 as f64 * (1.0 + rel);
    let fl_holds = fl.map(|l| 2 * d_v0 <= l);
    let verdict = lower_holds && escape_holds && fl_holds.unwrap_or(true);
    Ok(InversionReport {
        v0,
        lambda1: ef.lambda1,
        vol_interior,
        r_eff,
        lower_bound,
        d_v0,
        fl,
        lower_holds,
        escape_holds,
        fl_holds,
        verdict,
    })
}
