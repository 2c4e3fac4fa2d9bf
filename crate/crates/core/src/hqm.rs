//! Unfolding of path-bigons and the hereditary quasi-minimality checks.

use serde::Serialize;

use crate::diagram::{is_path_bigon_word, DiskDiagram, Face, FaceKind, HalfEdge};
use crate::fillarea::FillAreaCache;
use crate::isoperimetry::{dual_connected_face_sets, is_hole_free, multiboundary};
use crate::word::{self, Presentation, Word};
use crate::{Error, Result};

/// Largest diagram area the checkers enumerate.
pub const DEFAULT_AREA_CAP: usize = 16;

#[derive(Clone, Debug)]
pub struct Unfolded {
    pub diagram: DiskDiagram,
    /// Face of the unfolded diagram -> face it came from.
    pub face_map: Vec<usize>,
}

impl Unfolded {
    pub fn collapse_map(&self, faces: &[usize]) -> Vec<usize> {
        collapse_map(&self.face_map, faces)
    }
}

/// Image of a face set under an unfolding's face map (sorted, deduplicated).
pub fn collapse_map(face_map: &[usize], faces: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = faces.iter().map(|&f| face_map[f]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Replaces every path-bigon of length `l` by a chain of `l` free bigons,
/// identifying the matching inner vertices of its two sides. The first
/// bigon of each chain keeps the original face id; the rest are appended.
pub fn unfold(d: &DiskDiagram) -> Result<Unfolded> {
    let nv = d.vertex_count();
    let mut merge: Vec<usize> = (0..nv).collect();
    fn find(m: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while m[r] != r {
            r = m[r];
        }
        m[v] = r;
        r
    }
    let mut faces: Vec<Face> = Vec::with_capacity(d.face_count());
    let mut face_map: Vec<usize> = Vec::new();
    let mut extra: Vec<(Face, usize)> = Vec::new();
    for (f, face) in d.faces().iter().enumerate() {
        let FaceKind::PathBigon { path_len: l } = face.kind else {
            faces.push(face.clone());
            face_map.push(f);
            continue;
        };
        let w = d.face_word(f);
        if !is_path_bigon_word(&w) || w.len() != 2 * l {
            return Err(Error::Precondition(format!("face {f} is not a path-bigon of length {l}")));
        }
        let k = (0..w.len())
            .find(|&k| {
                let r = word::rotate(&w, k);
                r[l..] == word::inverse(&r[..l])[..]
            })
            .unwrap();
        let c = &face.cycle;
        let at = |i: usize| c[(k + i) % (2 * l)];
        for j in 1..l {
            let p = d.origin(at(j));
            let q = d.origin(at(2 * l - j));
            let (rp, rq) = (find(&mut merge, p), find(&mut merge, q));
            if rp != rq {
                let (lo, hi) = (rp.min(rq), rp.max(rq));
                merge[hi] = lo;
            }
        }
        for j in 1..=l {
            let bigon = Face { kind: FaceKind::FreeBigon, cycle: vec![at(j - 1), at(2 * l - j)] };
            if j == 1 {
                faces.push(bigon);
                face_map.push(f);
            } else {
                extra.push((bigon, f));
            }
        }
    }
    for (face, f) in extra {
        faces.push(face);
        face_map.push(f);
    }

    let mut new_id = vec![usize::MAX; nv];
    let mut count = 0;
    for (v, id) in new_id.iter_mut().enumerate() {
        if find(&mut merge, v) == v {
            *id = count;
            count += 1;
        }
    }
    let vmap: Vec<usize> = (0..nv).map(|v| new_id[find(&mut merge, v)]).collect();

    // Rotation is rederived from the new cycle structure.
    let n = d.half_edges().len();
    let mut succ = vec![usize::MAX; n];
    for cycle in faces.iter().map(|f| &f.cycle).chain(std::iter::once(&d.outer().to_vec())) {
        for (i, &h) in cycle.iter().enumerate() {
            succ[h] = cycle[(i + 1) % cycle.len()];
        }
    }
    let half_edges = d
        .half_edges()
        .iter()
        .map(|he| HalfEdge { origin: vmap[he.origin], twin: he.twin, next_rotation: succ[he.twin], label: he.label })
        .collect();
    let diagram = DiskDiagram::from_parts(
        d.presentation().clone(),
        count,
        half_edges,
        faces,
        d.outer().to_vec(),
        d.basepoint().map(|b| vmap[b]),
    )?;
    Ok(Unfolded { diagram, face_map })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HqmStatus {
    Holds,
    Fails,
    /// Some loop's filling area exceeded the oracle cap and no set failed.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HqmWitness {
    pub faces: Vec<usize>,
    pub loop_words: Vec<String>,
    /// `None` entries exceeded the oracle cap.
    pub loop_areas: Vec<Option<usize>>,
    pub boundary_length: usize,
    pub lhs: usize,
    /// Infinite when some loop area is unknown.
    pub rhs: f64,
}

impl HqmWitness {
    pub fn slack(&self) -> f64 {
        self.lhs as f64 - self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HqmVerdict {
    pub status: HqmStatus,
    pub kappa: f64,
    pub sets_checked: usize,
    /// The evaluated set maximising `|A| - RHS`.
    pub worst: Option<HqmWitness>,
    /// First set whose loops could not be evaluated.
    pub undecided: Option<HqmWitness>,
}

impl HqmVerdict {
    pub fn holds(&self) -> bool {
        self.status == HqmStatus::Holds
    }
}

/// Checks `|A| <= kappa * (sum of loop areas + multiboundary length)` over
/// every dual-connected hole-free face set.
pub fn hfmhqm_check(d: &DiskDiagram, p: &Presentation, kappa: f64, max_area: usize) -> Result<HqmVerdict> {
    check(d, p, kappa, max_area, true)
}

/// As [`hfmhqm_check`] but over all dual-connected face sets, holes allowed.
pub fn mhqm_check(d: &DiskDiagram, p: &Presentation, kappa: f64, max_area: usize) -> Result<HqmVerdict> {
    check(d, p, kappa, max_area, false)
}

/// Evaluates the inequality on a single face set.
pub fn hqm_witness(
    d: &DiskDiagram,
    cache: &mut FillAreaCache,
    p: &Presentation,
    kappa: f64,
    faces: &[usize],
) -> Result<HqmWitness> {
    let mb = multiboundary(d, faces)?;
    let words: Vec<Word> = mb.loops.iter().map(|l| l.iter().map(|&h| d.label(h)).collect()).collect();
    let mut areas = Vec::with_capacity(words.len());
    for w in &words {
        areas.push(cache.area(w)?);
    }
    let rhs = if areas.iter().all(Option::is_some) {
        kappa * (areas.iter().map(|a| a.unwrap()).sum::<usize>() + mb.total_length) as f64
    } else {
        f64::INFINITY
    };
    Ok(HqmWitness {
        faces: faces.to_vec(),
        loop_words: words.iter().map(|w| p.format_word(w)).collect(),
        loop_areas: areas,
        boundary_length: mb.total_length,
        lhs: faces.len(),
        rhs,
    })
}

fn check(d: &DiskDiagram, p: &Presentation, kappa: f64, max_area: usize, hole_free_only: bool) -> Result<HqmVerdict> {
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::Param(format!("kappa must be a finite real >= 1, got {kappa}")));
    }
    if p.ngens() != d.presentation().ngens() {
        return Err(Error::Param("presentation alphabet does not match the diagram labels".into()));
    }
    if d.area() > DEFAULT_AREA_CAP {
        return Err(Error::CapExceeded { size: d.area(), cap: DEFAULT_AREA_CAP });
    }
    let mut cache = FillAreaCache::new(p, max_area);
    let mut verdict =
        HqmVerdict { status: HqmStatus::Holds, kappa, sets_checked: 0, worst: None, undecided: None };
    for set in dual_connected_face_sets(d, DEFAULT_AREA_CAP)? {
        if hole_free_only && !is_hole_free(d, &set)? {
            continue;
        }
        verdict.sets_checked += 1;
        let w = hqm_witness(d, &mut cache, p, kappa, &set)?;
        if w.rhs.is_infinite() {
            if verdict.undecided.is_none() {
                verdict.undecided = Some(w);
            }
            continue;
        }
        let replace = match &verdict.worst {
            None => true,
            Some(b) => w.slack() > b.slack() || (w.slack() == b.slack() && w.faces < b.faces),
        };
        if replace {
            verdict.worst = Some(w);
        }
    }
    verdict.status = if verdict.worst.as_ref().is_some_and(|w| w.slack() > 1e-12) {
        HqmStatus::Fails
    } else if verdict.undecided.is_some() {
        HqmStatus::Indeterminate
    } else {
        HqmStatus::Holds
    };
    Ok(verdict)
}
