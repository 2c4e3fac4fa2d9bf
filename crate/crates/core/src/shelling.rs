//! Based shellings: exact filling length by depth-first search and a greedy
//! upper bound, both with replayable certificates.

use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::diagram::DiskDiagram;
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellingMove {
    RemoveFace(usize),
    RemoveSpur(usize),
    /// Removal of the last face, ending at the basepoint.
    FinalFace(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingCertificate {
    pub moves: Vec<ShellingMove>,
    pub max_boundary: usize,
    pub basepoint: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlResult {
    pub value: usize,
    pub certificate: ShellingCertificate,
}

/// A subcomplex: present faces and present edges. Present vertices are the
/// basepoint and the endpoints of present edges.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    faces: FixedBitSet,
    edges: FixedBitSet,
}

struct Shell<'a> {
    d: &'a DiskDiagram,
    b: usize,
    /// Distinct edges of each face.
    face_edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

impl<'a> Shell<'a> {
    fn new(d: &'a DiskDiagram, b: usize) -> Result<Self> {
        if b >= d.vertex_count() {
            return Err(Error::UnknownVertex(b));
        }
        if !d.is_boundary_vertex(b) {
            return Err(Error::Precondition(format!("basepoint {b} is not on the boundary")));
        }
        let face_edges = (0..d.face_count())
            .map(|f| {
                let mut es: Vec<usize> = d.face(f).cycle.iter().map(|&h| d.edge_of(h)).collect();
                es.sort_unstable();
                es.dedup();
                es
            })
            .collect();
        let mut incident = vec![Vec::new(); d.vertex_count()];
        for e in 0..d.edge_count() {
            let (u, v) = d.edge_ends(e);
            incident[u].push(e);
            incident[v].push(e);
        }
        Ok(Shell { d, b, face_edges, incident })
    }

    fn full(&self) -> State {
        let mut faces = FixedBitSet::with_capacity(self.d.face_count());
        faces.insert_range(..);
        let mut edges = FixedBitSet::with_capacity(self.d.edge_count());
        edges.insert_range(..);
        State { faces, edges }
    }

    fn present_face(&self, s: &State, f: Option<usize>) -> bool {
        f.is_some_and(|f| s.faces.contains(f))
    }

    fn length(&self, s: &State) -> usize {
        s.edges
            .ones()
            .map(|e| {
                let (x, y) = self.d.edge_sides(e);
                usize::from(!self.present_face(s, x)) + usize::from(!self.present_face(s, y))
            })
            .sum()
    }

    fn is_done(&self, s: &State) -> bool {
        s.faces.is_clear() && s.edges.is_clear()
    }

    fn degree(&self, s: &State, v: usize) -> usize {
        self.incident[v].iter().filter(|&&e| s.edges.contains(e)).count()
    }

    /// Edges of `f` whose side away from `f` is not a present face.
    fn contact_edges(&self, s: &State, f: usize) -> Vec<usize> {
        self.face_edges[f]
            .iter()
            .copied()
            .filter(|&e| {
                let (x, y) = self.d.edge_sides(e);
                let other = if x == Some(f) { y } else { x };
                other != Some(f) && !self.present_face(s, other)
            })
            .collect()
    }

    fn connected(&self, s: &State) -> bool {
        let mut seen = vec![false; self.d.vertex_count()];
        seen[self.b] = true;
        let mut queue = VecDeque::from([self.b]);
        let mut reached = 0;
        while let Some(v) = queue.pop_front() {
            for &e in &self.incident[v] {
                if !s.edges.contains(e) {
                    continue;
                }
                let (x, y) = self.d.edge_ends(e);
                let w = if x == v { y } else { x };
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
            reached += 1;
        }
        let mut present = vec![false; self.d.vertex_count()];
        present[self.b] = true;
        for e in s.edges.ones() {
            let (x, y) = self.d.edge_ends(e);
            present[x] = true;
            present[y] = true;
        }
        reached == present.iter().filter(|&&p| p).count()
    }

    /// Result of removing face `f`, if legal.
    fn remove_face(&self, s: &State, f: usize) -> Option<State> {
        if !s.faces.contains(f) {
            return None;
        }
        let contact = self.contact_edges(s, f);
        if contact.is_empty() {
            return None;
        }
        let mut t = s.clone();
        t.faces.set(f, false);
        for e in contact {
            t.edges.set(e, false);
        }
        self.connected(&t).then_some(t)
    }

    /// A face-free edge with an endpoint of degree one other than the basepoint.
    fn is_spur(&self, s: &State, e: usize) -> bool {
        if !s.edges.contains(e) {
            return false;
        }
        let (x, y) = self.d.edge_sides(e);
        if self.present_face(s, x) || self.present_face(s, y) {
            return false;
        }
        let (u, v) = self.d.edge_ends(e);
        (u != self.b && self.degree(s, u) == 1) || (v != self.b && self.degree(s, v) == 1)
    }

    fn strip_spurs(&self, s: &mut State, moves: &mut Vec<ShellingMove>) {
        loop {
            let Some(e) = s.edges.ones().find(|&e| self.is_spur(s, e)) else { return };
            s.edges.set(e, false);
            moves.push(ShellingMove::RemoveSpur(e));
        }
    }

    fn face_move(&self, s: &State, f: usize) -> ShellingMove {
        if s.faces.count_ones(..) == 1 {
            ShellingMove::FinalFace(f)
        } else {
            ShellingMove::RemoveFace(f)
        }
    }

    /// Depth-first search for a shelling staying within `bound`.
    fn search(&self, s: &State, bound: usize, failed: &mut HashSet<State>, moves: &mut Vec<ShellingMove>) -> bool {
        if self.is_done(s) {
            return true;
        }
        if failed.contains(s) {
            return false;
        }
        let mut options: Vec<(usize, usize, State)> = s
            .faces
            .ones()
            .filter_map(|f| self.remove_face(s, f).map(|t| (self.length(&t), f, t)))
            .filter(|(len, _, _)| *len <= bound)
            .collect();
        options.sort_by_key(|(len, f, _)| (*len, *f));
        for (_, f, mut t) in options {
            let mark = moves.len();
            moves.push(self.face_move(s, f));
            self.strip_spurs(&mut t, moves);
            if self.search(&t, bound, failed, moves) {
                return true;
            }
            moves.truncate(mark);
        }
        failed.insert(s.clone());
        false
    }
}

/// `max_v d(b, v)` in the 1-skeleton.
pub fn radius(d: &DiskDiagram, b: usize) -> Result<usize> {
    if b >= d.vertex_count() {
        return Err(Error::UnknownVertex(b));
    }
    Ok(d.distances_from(b).into_iter().flatten().max().unwrap_or(0))
}

/// Exact based filling length for diagrams of area at most `cap`.
pub fn fl_exact(d: &DiskDiagram, b: usize, cap: usize) -> Result<FlResult> {
    if d.area() > cap {
        return Err(Error::CapExceeded { size: d.area(), cap });
    }
    let shell = Shell::new(d, b)?;
    let greedy = fl_greedy(d, b)?;
    let lower = d.boundary_length().max(2 * radius(d, b)?);
    let mut start = shell.full();
    let mut prefix = Vec::new();
    shell.strip_spurs(&mut start, &mut prefix);
    for bound in lower..greedy.value {
        let mut moves = prefix.clone();
        if shell.search(&start, bound, &mut HashSet::new(), &mut moves) {
            let certificate = ShellingCertificate { max_boundary: replay_max(&shell, &moves)?, moves, basepoint: b };
            return Ok(FlResult { value: certificate.max_boundary, certificate });
        }
    }
    Ok(greedy)
}

/// Greedy shelling: remove the face giving the shortest next boundary
/// (smallest id on ties), stripping spurs as they appear.
pub fn fl_greedy(d: &DiskDiagram, b: usize) -> Result<FlResult> {
    let shell = Shell::new(d, b)?;
    let mut s = shell.full();
    let mut moves = Vec::new();
    let mut max = shell.length(&s);
    shell.strip_spurs(&mut s, &mut moves);
    while !shell.is_done(&s) {
        let best = s
            .faces
            .ones()
            .filter_map(|f| shell.remove_face(&s, f).map(|t| (shell.length(&t), f, t)))
            .min_by_key(|(len, f, _)| (*len, *f));
        let Some((len, f, mut t)) = best else {
            return Err(Error::Precondition("no legal shelling move".into()));
        };
        moves.push(shell.face_move(&s, f));
        max = max.max(len);
        shell.strip_spurs(&mut t, &mut moves);
        s = t;
    }
    let certificate = ShellingCertificate { moves, max_boundary: max, basepoint: b };
    Ok(FlResult { value: max, certificate })
}

fn replay_max(shell: &Shell, moves: &[ShellingMove]) -> Result<usize> {
    let mut s = shell.full();
    let mut max = shell.length(&s);
    for (i, &mv) in moves.iter().enumerate() {
        let illegal = || Error::Precondition(format!("move {i} ({mv:?}) is illegal"));
        s = match mv {
            ShellingMove::RemoveFace(f) | ShellingMove::FinalFace(f) => {
                let last = s.faces.count_ones(..) == 1;
                if f >= shell.d.face_count() || matches!(mv, ShellingMove::FinalFace(_)) != last {
                    return Err(illegal());
                }
                shell.remove_face(&s, f).ok_or_else(illegal)?
            }
            ShellingMove::RemoveSpur(e) => {
                if e >= shell.d.edge_count() || !shell.is_spur(&s, e) {
                    return Err(illegal());
                }
                let mut t = s.clone();
                t.edges.set(e, false);
                t
            }
        };
        max = max.max(shell.length(&s));
    }
    if !shell.is_done(&s) {
        return Err(Error::Precondition("shelling does not end at the basepoint".into()));
    }
    Ok(max)
}

impl ShellingCertificate {
    /// Replays the moves from the full diagram, checking each is legal and
    /// that the recorded maximum boundary length is attained.
    pub fn replay(&self, d: &DiskDiagram) -> Result<usize> {
        let shell = Shell::new(d, self.basepoint)?;
        let max = replay_max(&shell, &self.moves)?;
        if max != self.max_boundary {
            return Err(Error::Precondition(format!("replay reaches {max}, certificate records {}", self.max_boundary)));
        }
        Ok(max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{grid, single_relator_disk};
    use crate::word::Presentation;

    #[test]
    fn small_grids() {
        for (p, q) in [(2, 2), (3, 2), (2, 3)] {
            let d = grid(p, q).unwrap();
            let r = fl_exact(&d, 0, DEFAULT_CAP).unwrap();
            assert_eq!(r.value, 2 * (p + q));
            assert_eq!(r.certificate.replay(&d).unwrap(), r.value);
        }
    }

    #[test]
    fn single_face() {
        let d = single_relator_disk(&Presentation::surface(2), 0).unwrap();
        let r = fl_exact(&d, 0, DEFAULT_CAP).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.certificate.moves, vec![ShellingMove::FinalFace(0)]);
    }

    #[test]
    fn radius_of_grid() {
        assert_eq!(radius(&grid(2, 2).unwrap(), 0).unwrap(), 4);
        assert_eq!(radius(&grid(5, 3).unwrap(), 0).unwrap(), 8);
    }

    #[test]
    fn rejects_interior_basepoint_and_cap() {
        let d = grid(2, 2).unwrap();
        assert!(fl_exact(&d, 4, DEFAULT_CAP).is_err());
        assert!(matches!(fl_exact(&grid(4, 4).unwrap(), 0, DEFAULT_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let d = grid(2, 2).unwrap();
        let good = fl_greedy(&d, 0).unwrap().certificate;
        // The face at the basepoint corner would cut the basepoint off.
        let mut c = good.clone();
        c.moves.insert(0, ShellingMove::RemoveFace(0));
        assert!(c.replay(&d).is_err());
        let mut c = good.clone();
        c.max_boundary += 1;
        assert!(c.replay(&d).is_err());
        let mut c = good;
        c.moves.pop();
        assert!(c.replay(&d).is_err());
    }
}
