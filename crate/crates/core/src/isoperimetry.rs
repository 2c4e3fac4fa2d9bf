//! Dirichlet Cheeger constants, and face-set machinery: dual components,
//! multiboundary loops, hole filling and encapsulation.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::diagram::DiskDiagram;
use crate::eigen::EigenOptions;
use crate::spectra::{self, dual_network};
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheegerKind {
    Primal,
    DualWeighted,
    DualUnweighted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheegerResult {
    pub numer: u64,
    pub denom: u64,
    pub value: f64,
    /// Vertex ids (primal) or face ids (dual), ascending.
    pub witness: Vec<usize>,
    pub exhaustive: bool,
}

impl CheegerResult {
    fn new(r: Ratio<u64>, witness: Vec<usize>, exhaustive: bool) -> Self {
        CheegerResult { numer: *r.numer(), denom: *r.denom(), value: *r.numer() as f64 / *r.denom() as f64, witness, exhaustive }
    }

    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.numer, self.denom)
    }
}

/// A weighted graph for cut/volume minimisation. The cut of a set `S` is
/// `sum_{v in S} single[v] - 2 sum_{u<v in S} m(u,v)`.
struct CutProblem {
    single: Vec<u64>,
    /// `(u, m(v,u))` for `u != v`.
    adj: Vec<Vec<(usize, u64)>>,
    vol: Vec<u64>,
    ids: Vec<usize>,
}

impl CutProblem {
    fn n(&self) -> usize {
        self.ids.len()
    }

    fn neighbours(&self) -> Vec<u64> {
        (0..self.n())
            .map(|v| self.adj[v].iter().fold(0u64, |m, &(u, _)| m | 1 << u))
            .collect()
    }

    fn ratio(&self, set: u64) -> Ratio<u64> {
        let members: Vec<usize> = (0..self.n()).filter(|&v| set >> v & 1 == 1).collect();
        let mut cut: u64 = members.iter().map(|&v| self.single[v]).sum();
        for &v in &members {
            cut -= self.adj[v].iter().filter(|&&(u, _)| set >> u & 1 == 1).map(|&(_, c)| c).sum::<u64>();
        }
        Ratio::new(cut, members.iter().map(|&v| self.vol[v]).sum())
    }

    fn witness(&self, set: u64) -> Vec<usize> {
        (0..self.n()).filter(|&v| set >> v & 1 == 1).map(|v| self.ids[v]).collect()
    }

    /// Minimum over connected node sets, ties to the lexicographically
    /// smallest witness.
    fn minimise_connected(&self) -> (Ratio<u64>, Vec<usize>) {
        let mut best: Option<(Ratio<u64>, Vec<usize>)> = None;
        for_each_connected(&self.neighbours(), &mut |set| {
            let r = self.ratio(set);
            let better = match &best {
                None => true,
                Some((br, bw)) => r < *br || (r == *br && self.witness(set) < *bw),
            };
            if better {
                best = Some((r, self.witness(set)));
            }
        });
        best.expect("nonempty node set")
    }
}

/// Visits every connected node set of a graph on at most 64 nodes exactly
/// once, growing each set from its smallest node.
pub(crate) fn for_each_connected(nbr: &[u64], visit: &mut dyn FnMut(u64)) {
    fn extend(sub: u64, mut ext: u64, root: usize, nbr: &[u64], visit: &mut dyn FnMut(u64)) {
        let closed = (0..nbr.len()).filter(|&v| sub >> v & 1 == 1).fold(sub, |m, v| m | nbr[v]);
        let above_root = !((1u64 << root << 1).wrapping_sub(1));
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= !(1 << w);
            let grown = sub | 1 << w;
            visit(grown);
            extend(grown, ext | (nbr[w] & !closed & above_root), root, nbr, visit);
        }
    }
    for v in 0..nbr.len() {
        visit(1 << v);
        let above = !((1u64 << v << 1).wrapping_sub(1));
        extend(1 << v, nbr[v] & above, v, nbr, visit);
    }
}

/// Bitmask neighbourhoods of the face-dual graph (self-adjacency dropped).
pub(crate) fn face_neighbour_masks(d: &DiskDiagram) -> Vec<u64> {
    (0..d.face_count()).map(|f| d.face_neighbours(f).iter().fold(0u64, |m, &g| m | 1 << g)).collect()
}

/// All dual-connected face sets, as sorted id lists.
pub fn dual_connected_face_sets(d: &DiskDiagram, cap: usize) -> Result<Vec<Vec<usize>>> {
    check_cap(d.face_count(), cap)?;
    let mut out = Vec::new();
    for_each_connected(&face_neighbour_masks(d), &mut |set| {
        out.push((0..64).filter(|&f| set >> f & 1 == 1).collect());
    });
    Ok(out)
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap || size > 64 {
        return Err(Error::CapExceeded { size, cap: cap.min(64) });
    }
    Ok(())
}

fn primal_problem(d: &DiskDiagram) -> CutProblem {
    let ids = d.interior_vertices();
    let mut index = vec![usize::MAX; d.vertex_count()];
    for (i, &v) in ids.iter().enumerate() {
        index[v] = i;
    }
    let deg = d.degrees();
    let n = ids.len();
    let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for e in 0..d.edge_count() {
        let (u, v) = d.edge_ends(e);
        if index[u] != usize::MAX && index[v] != usize::MAX && u != v {
            *pairs.entry((index[u].min(index[v]), index[u].max(index[v]))).or_insert(0) += 1;
        }
    }
    let adj = adjacency(n, pairs.into_iter());
    let single = ids.iter().map(|&v| deg[v] as u64).collect();
    let vol = ids.iter().map(|&v| deg[v] as u64).collect();
    CutProblem { single, adj, vol, ids }
}

fn dual_problem(d: &DiskDiagram, weighted: bool) -> CutProblem {
    let net = dual_network(d);
    let n = net.faces;
    let adj = adjacency(n, net.m.iter().map(|(&k, &c)| (k, c as u64)));
    let single = net.k_diagonal().iter().map(|&k| k as u64).collect();
    let vol = (0..n).map(|f| if weighted { net.perimeter[f] as u64 } else { 1 }).collect();
    CutProblem { single, adj, vol, ids: (0..n).collect() }
}

fn adjacency(n: usize, pairs: impl Iterator<Item = ((usize, usize), u64)>) -> Vec<Vec<(usize, u64)>> {
    let mut adj = vec![Vec::new(); n];
    for ((u, v), c) in pairs {
        adj[u].push((v, c));
        adj[v].push((u, c));
    }
    adj
}

/// Number of edges, with multiplicity, with exactly one endpoint in `a`.
pub fn edge_boundary_vertices(d: &DiskDiagram, a: &[usize]) -> Result<usize> {
    let mut inside = vec![false; d.vertex_count()];
    for &v in a {
        if v >= d.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
        if d.is_boundary_vertex(v) {
            return Err(Error::Precondition(format!("vertex {v} lies on the boundary")));
        }
        inside[v] = true;
    }
    Ok((0..d.edge_count())
        .filter(|&e| {
            let (u, v) = d.edge_ends(e);
            inside[u] != inside[v]
        })
        .count())
}

/// `h_D = min |d_E A| / vol(A)` over nonempty `A` in the interior.
pub fn cheeger_primal_exact(d: &DiskDiagram, cap: usize) -> Result<CheegerResult> {
    let prob = primal_problem(d);
    if prob.n() == 0 {
        return Err(Error::Precondition("no interior vertices".into()));
    }
    check_cap(prob.n(), cap)?;
    let (r, w) = prob.minimise_connected();
    Ok(CheegerResult::new(r, w, true))
}

/// Dual Cheeger constant: `|d_E A| / sum_A |df|` (weighted) or `/ |A|`.
pub fn cheeger_dual_exact(d: &DiskDiagram, weighted: bool, cap: usize) -> Result<CheegerResult> {
    if d.face_count() == 0 {
        return Err(Error::Precondition("no faces".into()));
    }
    check_cap(d.face_count(), cap)?;
    let (r, w) = dual_problem(d, weighted).minimise_connected();
    Ok(CheegerResult::new(r, w, true))
}

/// Best prefix of the first Dirichlet eigenvector sorted by decreasing value.
pub fn cheeger_heuristic(d: &DiskDiagram, kind: CheegerKind, opts: &EigenOptions) -> Result<CheegerResult> {
    let (prob, spec) = match kind {
        CheegerKind::Primal => (primal_problem(d), spectra::primal_lambda1(d, opts)?),
        CheegerKind::DualWeighted => (dual_problem(d, true), spectra::dual_mu1_weighted(d, opts)?),
        CheegerKind::DualUnweighted => (dual_problem(d, false), spectra::dual_mu1_unweighted(d, opts)?),
    };
    let Some(vec) = spec.eigenvector else {
        return Err(Error::Precondition("empty node set".into()));
    };
    let mut order: Vec<usize> = (0..prob.n()).collect();
    order.sort_by(|&i, &j| vec[j].total_cmp(&vec[i]).then(i.cmp(&j)));
    // Incremental cut and volume along the sweep; no 64-node limit here.
    let mut inside = vec![false; prob.n()];
    let (mut cut, mut vol) = (0u64, 0u64);
    let mut best: Option<(Ratio<u64>, usize)> = None;
    for (k, &v) in order.iter().enumerate() {
        let back: u64 = prob.adj[v].iter().filter(|&&(u, _)| inside[u]).map(|&(_, c)| c).sum();
        cut = cut + prob.single[v] - 2 * back;
        vol += prob.vol[v];
        inside[v] = true;
        let r = Ratio::new(cut, vol);
        if best.is_none_or(|(b, _)| r < b) {
            best = Some((r, k + 1));
        }
    }
    let (r, k) = best.expect("nonempty sweep");
    let mut witness: Vec<usize> = order[..k].iter().map(|&v| prob.ids[v]).collect();
    witness.sort_unstable();
    Ok(CheegerResult::new(r, witness, false))
}

fn nonempty_face_mask(d: &DiskDiagram, a: &[usize]) -> Result<Vec<bool>> {
    if a.is_empty() {
        return Err(Error::Param("empty face set".into()));
    }
    face_mask(d, a)
}

fn face_mask(d: &DiskDiagram, a: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; d.face_count()];
    for &f in a {
        if f >= d.face_count() {
            return Err(Error::UnknownFace(f));
        }
        mask[f] = true;
    }
    Ok(mask)
}

fn mask_to_set(mask: &[bool]) -> Vec<usize> {
    (0..mask.len()).filter(|&f| mask[f]).collect()
}

/// Components of `a` under adjacency across shared primal edges.
pub fn dual_connected_components(d: &DiskDiagram, a: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mask = nonempty_face_mask(d, a)?;
    let mut seen = vec![false; d.face_count()];
    let mut comps = Vec::new();
    for start in mask_to_set(&mask) {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            for g in d.face_neighbours(f) {
                if mask[g] && !seen[g] {
                    seen[g] = true;
                    comp.push(g);
                    stack.push(g);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    Ok(comps)
}

pub fn is_dual_connected(d: &DiskDiagram, a: &[usize]) -> Result<bool> {
    Ok(dual_connected_components(d, a)?.len() == 1)
}

/// Number of dual edges leaving `a`, counting edges to the exterior.
pub fn dual_edge_boundary(d: &DiskDiagram, a: &[usize]) -> Result<usize> {
    let mask = face_mask(d, a)?;
    Ok(boundary_half_edges(d, &mask).len())
}

/// Half-edges with a face of the set on their left (their twin's side)
/// and something else on their right.
fn boundary_half_edges(d: &DiskDiagram, mask: &[bool]) -> Vec<usize> {
    let in_a = |f: Option<usize>| f.is_some_and(|f| mask[f]);
    (0..d.half_edges().len()).filter(|&h| in_a(d.face_of(d.twin(h))) && !in_a(d.face_of(h))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiBoundary {
    /// Closed walks of half-edges, each with a face of the set on its left.
    pub loops: Vec<Vec<usize>>,
    pub total_length: usize,
}

/// Decomposes the boundary half-edges of `a` into loops under the
/// successor rule: from `e`, rotate counterclockwise at its terminal vertex
/// starting at `twin(e)` and take the first boundary half-edge met. For the
/// full face set this is the outer boundary walk.
pub fn multiboundary(d: &DiskDiagram, a: &[usize]) -> Result<MultiBoundary> {
    let mask = face_mask(d, a)?;
    let bd = boundary_half_edges(d, &mask);
    let mut is_bd = vec![false; d.half_edges().len()];
    for &h in &bd {
        is_bd[h] = true;
    }
    let n = d.half_edges().len();
    let succ = |e: usize| -> Result<usize> {
        // `twin(e)` borders the set on its right, so it is never a member.
        let mut h = d.next_rotation(d.twin(e));
        for _ in 0..n {
            if is_bd[h] {
                return Ok(h);
            }
            h = d.next_rotation(h);
        }
        Err(Error::Precondition(format!("rotation at the head of half-edge {e} meets no boundary half-edge")))
    };
    let mut used = vec![false; d.half_edges().len()];
    let mut loops = Vec::new();
    for &h0 in &bd {
        if used[h0] {
            continue;
        }
        let mut lp = Vec::new();
        let mut h = h0;
        while !used[h] {
            used[h] = true;
            lp.push(h);
            h = succ(h)?;
        }
        loops.push(lp);
    }
    Ok(MultiBoundary { total_length: bd.len(), loops })
}

/// Faces outside `mask` that lie in complement components not reaching
/// the exterior. Complement faces are joined across edges with no face of
/// the set on either side.
fn enclosed(d: &DiskDiagram, mask: &[bool]) -> Vec<usize> {
    let nf = d.face_count();
    let inf = nf;
    let mut parent: Vec<usize> = (0..=nf).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in 0..d.edge_count() {
        let (s, t) = d.edge_sides(e);
        if s.is_some_and(|f| mask[f]) || t.is_some_and(|f| mask[f]) {
            continue;
        }
        let (x, y) = (find(&mut parent, s.unwrap_or(inf)), find(&mut parent, t.unwrap_or(inf)));
        parent[x] = y;
    }
    let root_inf = find(&mut parent, inf);
    (0..nf).filter(|&f| !mask[f] && find(&mut parent, f) != root_inf).collect()
}

/// `a` together with every face enclosed by it.
pub fn hole_fill(d: &DiskDiagram, a: &[usize]) -> Result<Vec<usize>> {
    if !is_dual_connected(d, a)? {
        return Err(Error::Precondition("face set is not dual-connected".into()));
    }
    let mut mask = nonempty_face_mask(d, a)?;
    for f in enclosed(d, &mask) {
        mask[f] = true;
    }
    Ok(mask_to_set(&mask))
}

pub fn is_hole_free(d: &DiskDiagram, a: &[usize]) -> Result<bool> {
    let mask = nonempty_face_mask(d, a)?;
    Ok(enclosed(d, &mask).is_empty())
}

/// Vertices all of whose corners lie in faces of `a`.
pub fn carrier_interior_vertices(d: &DiskDiagram, a: &[usize]) -> Result<Vec<usize>> {
    let mask = nonempty_face_mask(d, a)?;
    let mut ok = vec![true; d.vertex_count()];
    let mut touched = vec![false; d.vertex_count()];
    for (h, he) in d.half_edges().iter().enumerate() {
        touched[he.origin] = true;
        if !d.face_of(h).is_some_and(|f| mask[f]) {
            ok[he.origin] = false;
        }
    }
    Ok((0..d.vertex_count()).filter(|&v| ok[v] && touched[v]).collect())
}

/// Faces of the hole-filled closed star of a connected interior vertex set.
pub fn encapsulate(d: &DiskDiagram, a: &[usize]) -> Result<Vec<usize>> {
    if a.is_empty() {
        return Err(Error::Param("empty vertex set".into()));
    }
    let mut inside = vec![false; d.vertex_count()];
    for &v in a {
        if v >= d.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
        if d.is_boundary_vertex(v) {
            return Err(Error::Precondition(format!("vertex {v} lies on the boundary")));
        }
        inside[v] = true;
    }
    let out = d.out_lists();
    let mut seen = vec![false; d.vertex_count()];
    let mut stack = vec![a[0]];
    seen[a[0]] = true;
    while let Some(v) = stack.pop() {
        for &h in &out[v] {
            let w = d.head(h);
            if inside[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if a.iter().any(|&v| !seen[v]) {
        return Err(Error::Precondition("vertex set is not connected".into()));
    }
    let mut mask = vec![false; d.face_count()];
    for &v in a {
        for &h in &out[v] {
            if let Some(f) = d.face_of(h) {
                mask[f] = true;
            }
        }
    }
    for f in enclosed(d, &mask) {
        mask[f] = true;
    }
    Ok(mask_to_set(&mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{collapse, collapse_fixture, fan, grid, grid_face, grid_vertex};

    #[test]
    fn primal_cheeger_small() {
        let r = cheeger_primal_exact(&grid(3, 3).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!((r.numer, r.denom), (1, 2));
        assert_eq!(r.witness.len(), 4);
        let r = cheeger_primal_exact(&grid(2, 2).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!((r.numer, r.denom, r.witness.clone()), (1, 1, vec![grid_vertex(2, 1, 1)]));
        let r = cheeger_primal_exact(&fan(2).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!((r.numer, r.denom), (1, 1));
    }

    #[test]
    fn dual_cheeger_small_grid() {
        let d = grid(2, 2).unwrap();
        let r = cheeger_dual_exact(&d, false, DEFAULT_CAP).unwrap();
        assert_eq!((r.numer, r.denom, r.witness.len()), (2, 1, 4));
        let w = cheeger_dual_exact(&d, true, DEFAULT_CAP).unwrap();
        assert_eq!(w.ratio(), r.ratio() / 4);
    }

    #[test]
    fn edge_boundary_examples() {
        let d = grid(3, 3).unwrap();
        assert_eq!(edge_boundary_vertices(&d, &d.interior_vertices()).unwrap(), 8);
        assert_eq!(edge_boundary_vertices(&d, &[grid_vertex(3, 1, 1)]).unwrap(), 4);
        assert!(edge_boundary_vertices(&d, &[0]).is_err());
    }

    fn is_cyclic_shift(a: &[usize], b: &[usize]) -> bool {
        a.len() == b.len() && (0..a.len().max(1)).any(|k| a.iter().cycle().skip(k).take(a.len()).eq(b.iter()))
    }

    #[test]
    fn multiboundary_of_grid() {
        let d = grid(2, 2).unwrap();
        let mb = multiboundary(&d, &[0, 1, 2, 3]).unwrap();
        assert_eq!(mb.loops.len(), 1);
        assert_eq!(mb.total_length, 8);
        assert!(is_cyclic_shift(&mb.loops[0], d.outer()));
        let reversed: Vec<usize> = d.face(0).cycle.iter().rev().map(|&h| d.twin(h)).collect();
        assert!(is_cyclic_shift(&multiboundary(&d, &[0]).unwrap().loops[0], &reversed));
    }

    #[test]
    fn ring_has_inner_loop_and_hole() {
        let c = collapse_fixture().unwrap();
        let ring = [collapse::N, collapse::W, collapse::S, collapse::SIGMA];
        assert_eq!(multiboundary(&c.d, &ring).unwrap().loops.len(), 2);
        assert!(!is_hole_free(&c.d, &ring).unwrap());
        assert_eq!(hole_fill(&c.d, &ring).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(is_hole_free(&c.d_unfolded, &c.a_prime).unwrap());
        assert!(is_dual_connected(&c.d_unfolded, &c.a_prime).unwrap());
    }

    #[test]
    fn grid_ring_fills_centre() {
        let d = grid(3, 3).unwrap();
        let ring: Vec<usize> = (0..9).filter(|&f| f != grid_face(3, 1, 1)).collect();
        assert_eq!(hole_fill(&d, &ring).unwrap(), (0..9).collect::<Vec<_>>());
        let corners = [grid_face(3, 0, 0), grid_face(3, 2, 2)];
        assert_eq!(dual_connected_components(&d, &corners).unwrap().len(), 2);
    }

    #[test]
    fn encapsulation_examples() {
        let d = grid(3, 3).unwrap();
        let star = encapsulate(&d, &[grid_vertex(3, 1, 1)]).unwrap();
        assert_eq!(star.len(), 4);
        assert_eq!(multiboundary(&d, &star).unwrap().total_length, 8);
        assert_eq!(encapsulate(&d, &d.interior_vertices()).unwrap().len(), 9);
        let f = fan(3).unwrap();
        assert_eq!(encapsulate(&f, &[0]).unwrap().len(), 6);
    }
}
