//! Reference computations written directly from the definitions, sharing
//! nothing with the library beyond read access to diagram incidences.
#![allow(dead_code)]

use std::collections::VecDeque;

use fillspec::shelling::{ShellingCertificate, ShellingMove};
use fillspec::DiskDiagram;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub fn lambda_grid(p: usize, q: usize) -> f64 {
    let pi = std::f64::consts::PI;
    1.0 - 0.5 * ((pi / p as f64).cos() + (pi / q as f64).cos())
}

/// Weighted dual eigenvalue of `Q_{p,q}`.
pub fn mu_grid(p: usize, q: usize) -> f64 {
    lambda_grid(p + 1, q + 1)
}

fn smallest(m: DMatrix<f64>) -> (f64, Vec<f64>) {
    let e = SymmetricEigen::new(m);
    let k = e.eigenvalues.imin();
    (e.eigenvalues[k], e.eigenvectors.column(k).iter().copied().collect())
}

fn edges(d: &DiskDiagram) -> Vec<(usize, usize)> {
    (0..d.edge_count()).map(|e| d.edge_ends(e)).collect()
}

fn boundary_mask(d: &DiskDiagram) -> Vec<bool> {
    let mut b = vec![false; d.vertex_count()];
    for &h in d.outer() {
        b[d.origin(h)] = true;
    }
    if d.outer().is_empty() {
        b.iter_mut().for_each(|x| *x = true);
    }
    b
}

pub fn interior(d: &DiskDiagram) -> Vec<usize> {
    let b = boundary_mask(d);
    (0..d.vertex_count()).filter(|&v| !b[v]).collect()
}

/// Degree counting loops twice.
pub fn degrees(d: &DiskDiagram) -> Vec<usize> {
    let mut deg = vec![0; d.vertex_count()];
    for (u, v) in edges(d) {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// `lambda_1` of the normalised Dirichlet Laplacian, dense.
pub fn dense_lambda1(d: &DiskDiagram) -> Option<f64> {
    let int = interior(d);
    if int.is_empty() {
        return None;
    }
    let idx = |v: usize| int.iter().position(|&w| w == v);
    let deg = degrees(d);
    let n = int.len();
    let mut l = DMatrix::<f64>::identity(n, n);
    for (u, v) in edges(d) {
        if u == v {
            // A loop adds 2 to A(u,u) and 2 to deg(u).
            if let Some(i) = idx(u) {
                l[(i, i)] -= 2.0 / deg[u] as f64;
            }
            continue;
        }
        if let (Some(i), Some(j)) = (idx(u), idx(v)) {
            let w = 1.0 / ((deg[u] * deg[v]) as f64).sqrt();
            l[(i, j)] -= w;
            l[(j, i)] -= w;
        }
    }
    Some(smallest(l).0)
}

/// `(m(f,g), b(f), |df|)` from edge sides.
pub struct Dual {
    pub m: DMatrix<f64>,
    pub b: Vec<f64>,
    pub perimeter: Vec<f64>,
}

pub fn dual(d: &DiskDiagram) -> Dual {
    let nf = d.face_count();
    let mut m = DMatrix::zeros(nf, nf);
    let mut b = vec![0.0; nf];
    let mut perimeter = vec![0.0; nf];
    for e in 0..d.edge_count() {
        let (x, y) = d.edge_sides(e);
        for f in [x, y].into_iter().flatten() {
            perimeter[f] += 1.0;
        }
        match (x, y) {
            (Some(f), Some(g)) if f != g => {
                m[(f, g)] += 1.0;
                m[(g, f)] += 1.0;
            }
            (Some(f), None) | (None, Some(f)) => b[f] += 1.0,
            _ => {}
        }
    }
    Dual { m, b, perimeter }
}

/// Smallest eigenvalue of `K` (counting norm) or `W^-1/2 K W^-1/2`.
pub fn dense_mu1(d: &DiskDiagram, weighted: bool) -> f64 {
    let du = dual(d);
    let nf = d.face_count();
    let mut k = DMatrix::zeros(nf, nf);
    for f in 0..nf {
        let deg: f64 = (0..nf).map(|g| du.m[(f, g)]).sum::<f64>() + du.b[f];
        k[(f, f)] = deg;
        for g in 0..nf {
            if g != f {
                k[(f, g)] = -du.m[(f, g)];
            }
        }
    }
    if weighted {
        let s = DVector::from_iterator(nf, du.perimeter.iter().map(|p| 1.0 / p.sqrt()));
        for i in 0..nf {
            for j in 0..nf {
                k[(i, j)] *= s[i] * s[j];
            }
        }
    }
    smallest(k).0
}

/// `min cut/vol` over every nonempty interior vertex subset (no
/// connectivity restriction), as a float.
pub fn brute_cheeger_primal(d: &DiskDiagram) -> f64 {
    let int = interior(d);
    let deg = degrees(d);
    let es = edges(d);
    let n = int.len();
    assert!(n <= 20);
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let inside = |v: usize| int.iter().position(|&w| w == v).is_some_and(|i| mask >> i & 1 == 1);
        let cut = es.iter().filter(|&&(u, v)| inside(u) != inside(v)).count();
        let vol: usize = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| deg[int[i]]).sum();
        best = best.min(cut as f64 / vol as f64);
    }
    best
}

/// `min cut/vol` over every nonempty face subset, cuts to the exterior
/// included. Volume is `|A|` (counting) or `sum |df|` (weighted).
pub fn brute_cheeger_dual(d: &DiskDiagram, weighted: bool) -> f64 {
    let du = dual(d);
    let nf = d.face_count();
    assert!(nf <= 20);
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << nf) {
        let ins = |f: usize| mask >> f & 1 == 1;
        let mut cut = 0.0;
        let mut vol = 0.0;
        for f in (0..nf).filter(|&f| ins(f)) {
            cut += du.b[f];
            cut += (0..nf).filter(|&g| !ins(g)).map(|g| du.m[(f, g)]).sum::<f64>();
            vol += if weighted { du.perimeter[f] } else { 1.0 };
        }
        best = best.min(cut / vol);
    }
    best
}

/// `R_eff(v0 <-> boundary)` by a dense Dirichlet solve.
pub fn dense_resistance(d: &DiskDiagram, v0: usize) -> f64 {
    let bd = boundary_mask(d);
    let free: Vec<usize> = (0..d.vertex_count()).filter(|&v| !bd[v] && v != v0).collect();
    let idx = |v: usize| free.iter().position(|&w| w == v);
    let n = free.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    for (u, v) in edges(d) {
        if u == v {
            continue;
        }
        for (x, y) in [(u, v), (v, u)] {
            if let Some(i) = idx(x) {
                a[(i, i)] += 1.0;
                match idx(y) {
                    Some(j) => a[(i, j)] -= 1.0,
                    None if y == v0 => rhs[i] += 1.0,
                    None => {}
                }
            }
        }
    }
    let x = if n > 0 { a.lu().solve(&rhs).unwrap() } else { DVector::zeros(0) };
    let pot = |v: usize| if v == v0 { 1.0 } else { idx(v).map_or(0.0, |i| x[i]) };
    let current: f64 = edges(d)
        .into_iter()
        .filter(|&(u, v)| u != v && (u == v0 || v == v0))
        .map(|(u, v)| 1.0 - pot(if u == v0 { v } else { u }))
        .sum();
    1.0 / current
}

/// Faces outside `a` not connected to the exterior through edges free of
/// `a`-faces.
pub fn enclosed_faces(d: &DiskDiagram, a: &[usize]) -> Vec<usize> {
    let nf = d.face_count();
    let ext = nf;
    let mut adj = vec![Vec::new(); nf + 1];
    for e in 0..d.edge_count() {
        let (x, y) = d.edge_sides(e);
        if x.is_some_and(|f| a.contains(&f)) || y.is_some_and(|f| a.contains(&f)) {
            continue;
        }
        let (x, y) = (x.unwrap_or(ext), y.unwrap_or(ext));
        adj[x].push(y);
        adj[y].push(x);
    }
    let mut seen = vec![false; nf + 1];
    seen[ext] = true;
    let mut q = VecDeque::from([ext]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                q.push_back(v);
            }
        }
    }
    (0..nf).filter(|&f| !a.contains(&f) && !seen[f]).collect()
}

pub fn dual_connected(d: &DiskDiagram, a: &[usize]) -> bool {
    let Some(&start) = a.first() else { return false };
    let mut seen = vec![start];
    let mut q = VecDeque::from([start]);
    while let Some(f) = q.pop_front() {
        for e in 0..d.edge_count() {
            let (x, y) = d.edge_sides(e);
            let other = match (x, y) {
                (Some(s), Some(t)) if s == f => t,
                (Some(s), Some(t)) if t == f => s,
                _ => continue,
            };
            if a.contains(&other) && !seen.contains(&other) {
                seen.push(other);
                q.push_back(other);
            }
        }
    }
    seen.len() == a.len()
}

/// Edges with exactly one side in `a`.
pub fn cut_size(d: &DiskDiagram, a: &[usize]) -> usize {
    let ins = |f: Option<usize>| f.is_some_and(|f| a.contains(&f));
    (0..d.edge_count())
        .filter(|&e| {
            let (x, y) = d.edge_sides(e);
            ins(x) != ins(y)
        })
        .count()
}

/// Replays a shelling from the full diagram. After every move the remaining
/// complex must be connected, contain the basepoint and have Euler
/// characteristic 1. Returns the largest boundary length seen.
pub fn replay_shelling(d: &DiskDiagram, c: &ShellingCertificate) -> Result<usize, String> {
    let b = c.basepoint;
    let mut faces = vec![true; d.face_count()];
    let mut edges_on = vec![true; d.edge_count()];
    let face_edges: Vec<Vec<usize>> = (0..d.face_count())
        .map(|f| {
            let mut v: Vec<usize> = d.face(f).cycle.iter().map(|&h| d.edge_of(h)).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let present = |faces: &[bool], f: Option<usize>| f.is_some_and(|f| faces[f]);
    let length = |faces: &[bool], edges_on: &[bool]| -> usize {
        (0..d.edge_count())
            .filter(|&e| edges_on[e])
            .map(|e| {
                let (x, y) = d.edge_sides(e);
                usize::from(!present(faces, x)) + usize::from(!present(faces, y))
            })
            .sum()
    };
    let check = |faces: &[bool], edges_on: &[bool]| -> Result<(), String> {
        let mut verts = vec![false; d.vertex_count()];
        verts[b] = true;
        let mut ne = 0;
        for e in (0..d.edge_count()).filter(|&e| edges_on[e]) {
            let (u, v) = d.edge_ends(e);
            verts[u] = true;
            verts[v] = true;
            ne += 1;
        }
        let nv = verts.iter().filter(|&&x| x).count();
        let nf = faces.iter().filter(|&&x| x).count();
        if nv + nf != ne + 1 {
            return Err(format!("Euler characteristic {}", nv as i64 - ne as i64 + nf as i64));
        }
        let mut seen = vec![false; d.vertex_count()];
        seen[b] = true;
        let mut q = VecDeque::from([b]);
        let mut reached = 1;
        while let Some(u) = q.pop_front() {
            for e in (0..d.edge_count()).filter(|&e| edges_on[e]) {
                let (x, y) = d.edge_ends(e);
                let w = if x == u {
                    y
                } else if y == u {
                    x
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    q.push_back(w);
                }
            }
        }
        if reached != nv {
            return Err("disconnected".into());
        }
        Ok(())
    };
    let mut max = length(&faces, &edges_on);
    for (i, mv) in c.moves.iter().enumerate() {
        match *mv {
            ShellingMove::RemoveFace(f) | ShellingMove::FinalFace(f) => {
                if !faces[f] {
                    return Err(format!("move {i}: face {f} absent"));
                }
                let contact: Vec<usize> = face_edges[f]
                    .iter()
                    .copied()
                    .filter(|&e| {
                        let (x, y) = d.edge_sides(e);
                        let other = if x == Some(f) { y } else { x };
                        other != Some(f) && !present(&faces, other)
                    })
                    .collect();
                if contact.is_empty() {
                    return Err(format!("move {i}: face {f} has no boundary contact"));
                }
                faces[f] = false;
                for e in contact {
                    edges_on[e] = false;
                }
                let last = faces.iter().all(|&x| !x);
                if matches!(mv, ShellingMove::FinalFace(_)) != last {
                    return Err(format!("move {i}: final-face flag mismatch"));
                }
            }
            ShellingMove::RemoveSpur(e) => {
                let (x, y) = d.edge_sides(e);
                if !edges_on[e] || present(&faces, x) || present(&faces, y) {
                    return Err(format!("move {i}: edge {e} is not a free edge"));
                }
                let (u, v) = d.edge_ends(e);
                let deg = |w: usize| {
                    (0..d.edge_count()).filter(|&g| edges_on[g]).filter(|&g| {
                        let (s, t) = d.edge_ends(g);
                        s == w || t == w
                    }).count()
                };
                if !((u != b && deg(u) == 1) || (v != b && deg(v) == 1)) {
                    return Err(format!("move {i}: edge {e} is not a spur"));
                }
                edges_on[e] = false;
            }
        }
        check(&faces, &edges_on).map_err(|m| format!("move {i}: {m}"))?;
        max = max.max(length(&faces, &edges_on));
    }
    if faces.iter().any(|&x| x) || edges_on.iter().any(|&x| x) {
        return Err("shelling does not reach the basepoint".into());
    }
    Ok(max)
}
