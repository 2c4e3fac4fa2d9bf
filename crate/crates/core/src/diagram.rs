//! Half-edge disk diagrams, their construction and structural validation.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::word::{self, Letter, Presentation, Word};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    /// Successor in the rotation at `origin`; `next_rotation(twin(h))` is
    /// the successor of `h` along the cycle that contains `h`.
    pub next_rotation: usize,
    pub label: Letter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceKind {
    /// The cycle spells `rotate(r, rotation)` where `r` is relator
    /// `relator_id`, or its inverse when `inverted`.
    Relator { relator_id: usize, rotation: usize, inverted: bool },
    FreeBigon,
    PathBigon { path_len: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub kind: FaceKind,
    pub cycle: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiskDiagram {
    presentation: Presentation,
    vertex_count: usize,
    half_edges: Vec<HalfEdge>,
    faces: Vec<Face>,
    outer: Vec<usize>,
    basepoint: Option<usize>,
    face_of: Vec<Option<usize>>,
    edge_of: Vec<usize>,
    edge_rep: Vec<usize>,
    on_boundary: Vec<bool>,
}

impl DiskDiagram {
    /// Assembles a diagram from raw parts. Only index ranges are checked
    /// here; everything else is the business of [`DiskDiagram::validate`].
    pub fn from_parts(
        presentation: Presentation,
        vertex_count: usize,
        half_edges: Vec<HalfEdge>,
        faces: Vec<Face>,
        outer: Vec<usize>,
        basepoint: Option<usize>,
    ) -> Result<Self> {
        let n = half_edges.len();
        let bad = |path: String, msg: &str| Error::Schema { path, msg: msg.to_string() };
        for (i, h) in half_edges.iter().enumerate() {
            if h.origin >= vertex_count {
                return Err(bad(format!("half_edges[{i}].origin"), "vertex out of range"));
            }
            if h.twin >= n {
                return Err(bad(format!("half_edges[{i}].twin"), "half-edge out of range"));
            }
            if h.next_rotation >= n {
                return Err(bad(format!("half_edges[{i}].next_rotation"), "half-edge out of range"));
            }
            if h.label.gen >= presentation.ngens() {
                return Err(bad(format!("half_edges[{i}].label"), "generator out of range"));
            }
        }
        for (f, face) in faces.iter().enumerate() {
            if let Some(k) = face.cycle.iter().position(|&h| h >= n) {
                return Err(bad(format!("faces[{f}].cycle[{k}]"), "half-edge out of range"));
            }
        }
        if let Some(k) = outer.iter().position(|&h| h >= n) {
            return Err(bad(format!("outer_boundary[{k}]"), "half-edge out of range"));
        }
        if let Some(b) = basepoint {
            if b >= vertex_count {
                return Err(bad("basepoint".into(), "vertex out of range"));
            }
        }

        let mut face_of = vec![None; n];
        for (f, face) in faces.iter().enumerate() {
            for &h in &face.cycle {
                face_of[h] = Some(f);
            }
        }
        let mut edge_of = vec![usize::MAX; n];
        let mut edge_rep = Vec::new();
        for h in 0..n {
            if edge_of[h] == usize::MAX {
                edge_of[h] = edge_rep.len();
                let t = half_edges[h].twin;
                if edge_of[t] == usize::MAX {
                    edge_of[t] = edge_rep.len();
                }
                edge_rep.push(h);
            }
        }
        let mut on_boundary = vec![false; vertex_count];
        for &h in &outer {
            on_boundary[half_edges[h].origin] = true;
        }
        if outer.is_empty() && vertex_count == 1 {
            on_boundary[0] = true;
        }
        Ok(DiskDiagram {
            presentation,
            vertex_count,
            half_edges,
            faces,
            outer,
            basepoint,
            face_of,
            edge_of,
            edge_rep,
            on_boundary,
        })
    }

    /// The one-vertex diagram.
    pub fn point(presentation: Presentation) -> Self {
        DiskDiagram::from_parts(presentation, 1, Vec::new(), Vec::new(), Vec::new(), Some(0)).expect("trivial diagram")
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn half_edge(&self, h: usize) -> &HalfEdge {
        &self.half_edges[h]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Number of 2-cells.
    pub fn area(&self) -> usize {
        self.faces.len()
    }

    pub fn outer(&self) -> &[usize] {
        &self.outer
    }

    pub fn boundary_length(&self) -> usize {
        self.outer.len()
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn with_basepoint(mut self, b: Option<usize>) -> Self {
        self.basepoint = b;
        self
    }

    pub fn edge_count(&self) -> usize {
        self.edge_rep.len()
    }

    pub fn origin(&self, h: usize) -> usize {
        self.half_edges[h].origin
    }

    pub fn twin(&self, h: usize) -> usize {
        self.half_edges[h].twin
    }

    pub fn head(&self, h: usize) -> usize {
        self.origin(self.twin(h))
    }

    pub fn label(&self, h: usize) -> Letter {
        self.half_edges[h].label
    }

    pub fn next_rotation(&self, h: usize) -> usize {
        self.half_edges[h].next_rotation
    }

    /// Face on the right of `h`, `None` for the exterior.
    pub fn face_of(&self, h: usize) -> Option<usize> {
        self.face_of[h]
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    /// Lowest-numbered half-edge of each undirected edge.
    pub fn edge_rep(&self, e: usize) -> usize {
        self.edge_rep[e]
    }

    pub fn edge_reps(&self) -> &[usize] {
        &self.edge_rep
    }

    /// Endpoints of an undirected edge.
    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        let h = self.edge_rep[e];
        (self.origin(h), self.head(h))
    }

    /// Faces on both sides of an undirected edge.
    pub fn edge_sides(&self, e: usize) -> (Option<usize>, Option<usize>) {
        let h = self.edge_rep[e];
        (self.face_of[h], self.face_of[self.twin(h)])
    }

    pub fn is_face_free_edge(&self, e: usize) -> bool {
        let (a, b) = self.edge_sides(e);
        a.is_none() && b.is_none()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count).filter(|&v| self.on_boundary[v]).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count).filter(|&v| !self.on_boundary[v]).collect()
    }

    /// Half-edges leaving `v`, in rotation order starting from the lowest id.
    pub fn out_half_edges(&self, v: usize) -> Vec<usize> {
        let Some(start) = (0..self.half_edges.len()).find(|&h| self.origin(h) == v) else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut h = self.next_rotation(start);
        while h != start && out.len() <= self.half_edges.len() {
            out.push(h);
            h = self.next_rotation(h);
        }
        out
    }

    /// Out-half-edges per vertex, in id order. Cheaper than calling
    /// [`DiskDiagram::out_half_edges`] for every vertex.
    pub fn out_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count];
        for (h, he) in self.half_edges.iter().enumerate() {
            out[he.origin].push(h);
        }
        out
    }

    /// Degree with multiplicity.
    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.vertex_count {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.half_edges.iter().filter(|h| h.origin == v).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for h in &self.half_edges {
            d[h.origin] += 1;
        }
        d
    }

    pub fn vol(&self, set: &[usize]) -> Result<usize> {
        let d = self.degrees();
        set.iter().map(|&v| d.get(v).copied().ok_or(Error::UnknownVertex(v))).sum()
    }

    pub fn face_word(&self, f: usize) -> Word {
        self.faces[f].cycle.iter().map(|&h| self.label(h)).collect()
    }

    /// Label of the outer cycle, read counterclockwise from its first half-edge.
    pub fn boundary_word(&self) -> Word {
        self.outer.iter().map(|&h| self.label(h)).collect()
    }

    pub fn face_perimeter(&self, f: usize) -> usize {
        self.faces[f].cycle.len()
    }

    /// Shortest and longest face perimeter (0 if there are no faces).
    pub fn face_length_range(&self) -> (usize, usize) {
        let lens = self.faces.iter().map(|f| f.cycle.len());
        (lens.clone().min().unwrap_or(0), lens.max().unwrap_or(0))
    }

    /// Breadth-first distances from `src` in the 1-skeleton.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let adj = self.out_lists();
        let mut dist = vec![None; self.vertex_count];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &h in &adj[v] {
                let w = self.head(h);
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Unique faces adjacent to `f` across a shared edge.
    pub fn face_neighbours(&self, f: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.faces[f].cycle.iter().filter_map(|&h| self.face_of(self.twin(h))).filter(|&g| g != f).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn edge_face_identity_check(&self) -> EdgeFaceIdentity {
        let face_free = (0..self.edge_count()).filter(|&e| self.is_face_free_edge(e)).count();
        let lhs = 2 * (self.edge_count() - face_free);
        let rhs = self.faces.iter().map(|f| f.cycle.len()).sum::<usize>() + self.outer.len() - 2 * face_free;
        EdgeFaceIdentity { lhs, rhs, equal: lhs == rhs, face_free_edges: face_free }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.half_edges.len();
        let he = &self.half_edges;

        let bad_twin: Vec<usize> = (0..n).filter(|&h| he[h].twin == h || he[he[h].twin].twin != h).collect();
        report.push("twin involution", bad_twin.is_empty(), detail_list("half-edges", &bad_twin));

        let bad_label: Vec<usize> = (0..n).filter(|&h| he[he[h].twin].label != he[h].label.inverse()).collect();
        report.push("twin labels", bad_label.is_empty(), detail_list("half-edges", &bad_label));

        let mut owners = vec![0usize; n];
        let mut broken_chain = Vec::new();
        let cycles: Vec<&Vec<usize>> = self.faces.iter().map(|f| &f.cycle).chain(std::iter::once(&self.outer)).collect();
        for (c, cycle) in cycles.iter().enumerate() {
            for (i, &h) in cycle.iter().enumerate() {
                owners[h] += 1;
                let nxt = cycle[(i + 1) % cycle.len()];
                if he[he[h].twin].origin != he[nxt].origin {
                    broken_chain.push(c);
                }
            }
            if c < self.faces.len() && cycle.is_empty() {
                broken_chain.push(c);
            }
        }
        broken_chain.dedup();
        let miscounted: Vec<usize> = (0..n).filter(|&h| owners[h] != 1).collect();
        let ok = miscounted.is_empty() && broken_chain.is_empty();
        let detail = if ok {
            format!("{} face cycles and the outer cycle partition {n} half-edges", self.faces.len())
        } else {
            format!("{}; {}", detail_list("half-edges not covered exactly once", &miscounted), detail_list("open cycles", &broken_chain))
        };
        report.push("cycle partition", ok, detail);

        let (v, e, f) = (self.vertex_count as i64, (n / 2) as i64, self.faces.len() as i64);
        let chi = v - e + f;
        report.push("euler characteristic", chi == 1 && n.is_multiple_of(2), format!("V - E + F = {v} - {e} + {f} = {chi}"));

        report.push_check("planar rotation", self.check_rotation());

        let connected = self.vertex_count == 0 || self.distances_from(0).iter().all(Option::is_some);
        report.push("connected", connected, if connected { "1-skeleton connected".into() } else { "1-skeleton disconnected".into() });

        let loops: Vec<usize> = (0..n).filter(|&h| he[h].origin == he[he[h].twin].origin && he[h].twin != h).collect();
        report.push("no loop edges", loops.is_empty(), detail_list("loop half-edges", &loops));

        report.push_check("relator labels", self.check_labels());

        let base_ok = match self.basepoint {
            None => (true, "no basepoint".to_string()),
            Some(b) => (self.on_boundary[b], format!("basepoint {b}")),
        };
        report.push("basepoint on boundary", base_ok.0, base_ok.1);

        let ff: Vec<usize> = (0..self.edge_count()).filter(|&e| self.is_face_free_edge(e)).collect();
        report.push("face-free edges", true, format!("{} face-free edge(s) {:?}", ff.len(), ff));
        report
    }

    fn check_rotation(&self) -> (bool, String) {
        let n = self.half_edges.len();
        let he = &self.half_edges;
        let mut seen = vec![false; n];
        for h in 0..n {
            let r = he[h].next_rotation;
            if seen[r] {
                return (false, format!("next_rotation is not a permutation (half-edge {r} hit twice)"));
            }
            seen[r] = true;
            if he[r].origin != he[h].origin {
                return (false, format!("next_rotation({h}) = {r} leaves vertex {}", he[h].origin));
            }
        }
        let lists = self.out_lists();
        for (v, list) in lists.iter().enumerate() {
            if let Some(&start) = list.first() {
                let mut len = 1;
                let mut h = he[start].next_rotation;
                while h != start {
                    len += 1;
                    h = he[h].next_rotation;
                }
                if len != list.len() {
                    return (false, format!("rotation at vertex {v} splits into several orbits"));
                }
            }
        }
        // Orbits of h -> next_rotation(twin(h)) are the regions of the embedding.
        let mut cycle_key: HashMap<Vec<usize>, usize> = HashMap::new();
        let stored: Vec<&Vec<usize>> = self.faces.iter().map(|f| &f.cycle).chain(std::iter::once(&self.outer)).collect();
        for (i, c) in stored.iter().enumerate() {
            if !c.is_empty() {
                cycle_key.insert(min_rotation_ids(c), i);
            }
        }
        let mut visited = vec![false; n];
        let mut orbits = 0usize;
        for s in 0..n {
            if visited[s] {
                continue;
            }
            orbits += 1;
            let mut orbit = Vec::new();
            let mut h = s;
            while !visited[h] {
                visited[h] = true;
                orbit.push(h);
                h = he[he[h].twin].next_rotation;
            }
            if h != s {
                return (false, "region successor is not a permutation".into());
            }
            if !cycle_key.contains_key(&min_rotation_ids(&orbit)) {
                return (false, format!("region through half-edge {s} is not a stored cycle"));
            }
        }
        let regions = if n == 0 { 1 } else { orbits };
        let v = self.vertex_count as i64;
        let chi = v - (n / 2) as i64 + regions as i64;
        if regions != self.faces.len() + 1 {
            return (false, format!("{regions} regions but {} faces plus the exterior", self.faces.len()));
        }
        (chi == 2, format!("{regions} regions, V - E + R = {chi}"))
    }

    fn check_labels(&self) -> (bool, String) {
        let mut bad = Vec::new();
        for (f, face) in self.faces.iter().enumerate() {
            let w = self.face_word(f);
            let ok = match face.kind {
                FaceKind::Relator { relator_id, rotation, inverted } => match self.presentation.relators.get(relator_id) {
                    None => false,
                    Some(r) => {
                        let base = if inverted { word::inverse(r) } else { r.clone() };
                        rotation < base.len().max(1) && word::rotate(&base, rotation) == w
                    }
                },
                FaceKind::FreeBigon => w.len() == 2 && w[0] == w[1].inverse(),
                FaceKind::PathBigon { path_len } => path_len >= 1 && w.len() == 2 * path_len && is_path_bigon_word(&w),
            };
            if !ok {
                bad.push(f);
            }
        }
        (bad.is_empty(), detail_list("faces with wrong labels", &bad))
    }
}

/// Whether a rotation of `w` has the form `p p^-1`.
pub(crate) fn is_path_bigon_word(w: &[Letter]) -> bool {
    let l = w.len() / 2;
    w.len().is_multiple_of(2)
        && (0..w.len()).any(|k| {
            let r = word::rotate(w, k);
            r[l..] == word::inverse(&r[..l])[..]
        })
}

fn min_rotation_ids(c: &[usize]) -> Vec<usize> {
    let k = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
    let mut out = c[k..].to_vec();
    out.extend_from_slice(&c[..k]);
    out
}

fn detail_list(what: &str, items: &[usize]) -> String {
    if items.is_empty() {
        "ok".into()
    } else {
        let shown: Vec<String> = items.iter().take(8).map(usize::to_string).collect();
        format!("{what}: {}{}", shown.join(", "), if items.len() > 8 { ", ..." } else { "" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeFaceIdentity {
    /// `2|E|` over edges that border a face.
    pub lhs: usize,
    /// `sum |df| + |dD|` with face-free edges removed from the walk.
    pub rhs: usize,
    pub equal: bool,
    pub face_free_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), pass, detail });
    }

    fn push_check(&mut self, name: &str, (pass, detail): (bool, String)) {
        self.push(name, pass, detail);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Incremental construction from edges and face cycles. The rotation system
/// is derived from the cycles.
#[derive(Clone, Debug)]
pub struct Builder {
    presentation: Presentation,
    vertex_count: usize,
    origins: Vec<usize>,
    labels: Vec<Letter>,
    faces: Vec<Face>,
}

impl Builder {
    pub fn new(presentation: Presentation) -> Self {
        Builder { presentation, vertex_count: 0, origins: Vec::new(), labels: Vec::new(), faces: Vec::new() }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_vertices(&mut self, k: usize) -> std::ops::Range<usize> {
        let start = self.vertex_count;
        self.vertex_count += k;
        start..self.vertex_count
    }

    /// Adds an edge `u -> v` labelled `l`; returns that half-edge. Its twin
    /// is the returned id xor 1.
    pub fn add_edge(&mut self, u: usize, v: usize, l: Letter) -> usize {
        let h = self.origins.len();
        self.origins.push(u);
        self.labels.push(l);
        self.origins.push(v);
        self.labels.push(l.inverse());
        h
    }

    pub fn twin(h: usize) -> usize {
        h ^ 1
    }

    pub fn origin(&self, h: usize) -> usize {
        self.origins[h]
    }

    pub fn head(&self, h: usize) -> usize {
        self.origins[h ^ 1]
    }

    pub fn label(&self, h: usize) -> Letter {
        self.labels[h]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Adds a face; relator rotation data is recomputed by [`Builder::build`].
    pub fn add_face(&mut self, kind: FaceKind, cycle: Vec<usize>) -> usize {
        self.faces.push(Face { kind, cycle });
        self.faces.len() - 1
    }

    /// Adds a relator face, looking up which relator its labels spell.
    pub fn add_relator_face(&mut self, cycle: Vec<usize>) -> Result<usize> {
        let w: Word = cycle.iter().map(|&h| self.labels[h]).collect();
        let id = self
            .presentation
            .relators
            .iter()
            .position(|r| word::is_rotation(&w, r) || word::is_rotation(&w, &word::inverse(r)))
            .ok_or_else(|| Error::Precondition(format!("face word {} is not a relator", self.presentation.format_word(&w))))?;
        Ok(self.add_face(FaceKind::Relator { relator_id: id, rotation: 0, inverted: false }, cycle))
    }

    pub fn build(self, outer: Vec<usize>, basepoint: Option<usize>) -> Result<DiskDiagram> {
        let n = self.origins.len();
        let mut succ = vec![usize::MAX; n];
        let mut faces = self.faces;
        for face in faces.iter_mut() {
            let w: Word = face.cycle.iter().map(|&h| self.labels[h]).collect();
            let k = word::min_rotation_offset(&w);
            face.cycle.rotate_left(k);
            let w = word::rotate(&w, k);
            if let FaceKind::Relator { relator_id, .. } = face.kind {
                face.kind = relator_kind(&self.presentation, relator_id, &w)?;
            }
        }
        for cycle in faces.iter().map(|f| &f.cycle).chain(std::iter::once(&outer)) {
            for (i, &h) in cycle.iter().enumerate() {
                if succ[h] != usize::MAX {
                    return Err(Error::Precondition(format!("half-edge {h} lies on two cycles")));
                }
                succ[h] = cycle[(i + 1) % cycle.len()];
            }
        }
        if let Some(h) = succ.iter().position(|&s| s == usize::MAX) {
            return Err(Error::Precondition(format!("half-edge {h} lies on no cycle")));
        }
        let half_edges = (0..n)
            .map(|h| HalfEdge { origin: self.origins[h], twin: h ^ 1, next_rotation: succ[h ^ 1], label: self.labels[h] })
            .collect();
        DiskDiagram::from_parts(self.presentation, self.vertex_count, half_edges, faces, outer, basepoint)
    }
}

/// Relator data for a face spelling `w`.
pub(crate) fn relator_kind(p: &Presentation, relator_id: usize, w: &[Letter]) -> Result<FaceKind> {
    let r = p.relators.get(relator_id).ok_or_else(|| Error::Precondition(format!("no relator {relator_id}")))?;
    for (inverted, base) in [(false, r.clone()), (true, word::inverse(r))] {
        if let Some(rotation) = (0..base.len()).find(|&k| word::rotate(&base, k) == w) {
            return Ok(FaceKind::Relator { relator_id, rotation, inverted });
        }
    }
    Err(Error::Precondition(format!("face word {} does not spell relator {relator_id}", p.format_word(w))))
}
