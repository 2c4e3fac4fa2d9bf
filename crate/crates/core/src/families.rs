//! Named diagram families.

use std::collections::HashMap;

use crate::diagram::{Builder, DiskDiagram, FaceKind};
use crate::word::{Letter, Presentation};
use crate::{Error, Result};

pub use crate::heisenberg::{heisenberg, heisenberg_word, CorridorFace, Heisenberg};

/// Vertex `(i, j)` of the `(p+1) x (q+1)` lattice underlying `grid(p, q)`.
pub fn grid_vertex(p: usize, i: usize, j: usize) -> usize {
    j * (p + 1) + i
}

/// Face `(i, j)` of `grid(p, q)`, the unit square with lower-left corner `(i, j)`.
pub fn grid_face(p: usize, i: usize, j: usize) -> usize {
    j * p + i
}

/// The rectangular commutator grid `Q_{p,q}` with boundary word
/// `a^p b^q a^-p b^-q` read from the lower-left corner.
pub fn grid(p: usize, q: usize) -> Result<DiskDiagram> {
    if p < 2 || q < 2 {
        return Err(Error::Param(format!("grid needs p, q >= 2 (got {p}, {q})")));
    }
    let mut b = Builder::new(Presentation::z2());
    b.add_vertices((p + 1) * (q + 1));
    let v = |i, j| grid_vertex(p, i, j);
    let mut horiz = vec![vec![0; q + 1]; p];
    let mut vert = vec![vec![0; q]; p + 1];
    for j in 0..=q {
        for (i, row) in horiz.iter_mut().enumerate() {
            row[j] = b.add_edge(v(i, j), v(i + 1, j), Letter::pos(0));
        }
    }
    for (i, col) in vert.iter_mut().enumerate() {
        for (j, e) in col.iter_mut().enumerate() {
            *e = b.add_edge(v(i, j), v(i, j + 1), Letter::pos(1));
        }
    }
    for j in 0..q {
        for i in 0..p {
            let cycle = vec![vert[i][j], horiz[i][j + 1], vert[i + 1][j] ^ 1, horiz[i][j] ^ 1];
            b.add_face(FaceKind::Relator { relator_id: 0, rotation: 0, inverted: false }, cycle);
        }
    }
    let mut outer = Vec::with_capacity(2 * (p + q));
    outer.extend((0..p).map(|i| horiz[i][0]));
    outer.extend((0..q).map(|j| vert[p][j]));
    outer.extend((0..p).rev().map(|i| horiz[i][q] ^ 1));
    outer.extend((0..q).rev().map(|j| vert[0][j] ^ 1));
    b.build(outer, Some(v(0, 0)))
}

/// The alternating fan over `<a, b, t | a t b, b^-1 t a^-1>`: a centre
/// (vertex 0) of degree `2m` and boundary word `t^{2m}`.
pub fn fan(m: usize) -> Result<DiskDiagram> {
    if m < 1 {
        return Err(Error::Param("fan needs m >= 1".into()));
    }
    let k = 2 * m;
    let mut b = Builder::new(Presentation::fan());
    let c = b.add_vertex();
    let rim: Vec<usize> = b.add_vertices(k).collect();
    let spokes: Vec<usize> = (0..k)
        .map(|i| b.add_edge(c, rim[i], if i % 2 == 0 { Letter::pos(0) } else { Letter::neg(1) }))
        .collect();
    let rims: Vec<usize> = (0..k).map(|i| b.add_edge(rim[i], rim[(i + 1) % k], Letter::pos(2))).collect();
    for i in 0..k {
        let cycle = vec![spokes[(i + 1) % k], rims[i] ^ 1, spokes[i] ^ 1];
        b.add_relator_face(cycle)?;
    }
    b.build(rims, Some(rim[0]))
}

/// One face spelling relator `index` around its boundary.
pub fn single_relator_disk(p: &Presentation, index: usize) -> Result<DiskDiagram> {
    let r = p
        .relators
        .get(index)
        .ok_or_else(|| Error::Param(format!("relator index {index} out of range")))?
        .clone();
    if r.len() < 2 {
        return Err(Error::Param("a relator of length 1 would need a loop edge".into()));
    }
    let l = r.len();
    let mut b = Builder::new(p.clone());
    b.add_vertices(l);
    let edges: Vec<usize> = (0..l).map(|k| b.add_edge(k, (k + 1) % l, r[k])).collect();
    let cycle = edges.iter().rev().map(|&h| h ^ 1).collect();
    b.add_face(FaceKind::Relator { relator_id: index, rotation: 0, inverted: false }, cycle);
    b.build(edges, Some(0))
}

/// Two commutator squares glued along a path of three edges; the boundary
/// `a a^-1` is freely trivial.
pub fn dipole() -> Result<DiskDiagram> {
    let mut b = Builder::new(Presentation::z2());
    let (u, p1, p2, v) = (b.add_vertex(), b.add_vertex(), b.add_vertex(), b.add_vertex());
    let lower = b.add_edge(u, v, Letter::pos(0));
    let upper = b.add_edge(u, v, Letter::pos(0));
    let s1 = b.add_edge(u, p1, Letter::pos(1));
    let s2 = b.add_edge(p1, p2, Letter::pos(0));
    let s3 = b.add_edge(p2, v, Letter::neg(1));
    b.add_relator_face(vec![s1, s2, s3, lower ^ 1])?;
    b.add_relator_face(vec![upper, s3 ^ 1, s2 ^ 1, s1 ^ 1])?;
    b.build(vec![lower, upper ^ 1], Some(u))
}

/// Face indices of the collapse fixture.
pub mod collapse {
    pub const H: usize = 0;
    pub const N: usize = 1;
    pub const W: usize = 2;
    pub const S: usize = 3;
    pub const SIGMA: usize = 4;
}

#[derive(Clone, Debug)]
pub struct CollapseFixture {
    /// Five faces `H, N, W, S, sigma`; the ring `N, W, S, sigma` surrounds `H`.
    pub d: DiskDiagram,
    /// `d` with `sigma` unfolded into two free bigons meeting at a cut vertex.
    pub d_unfolded: DiskDiagram,
    /// Unfolded face -> face of `d`.
    pub face_map: Vec<usize>,
    pub beta1: usize,
    pub beta2: usize,
    pub a_prime: Vec<usize>,
    pub a_collapsed: Vec<usize>,
}

/// A five-face diagram whose ring of four faces is hole-free only after the
/// path-bigon `sigma` is unfolded.
pub fn collapse_fixture() -> Result<CollapseFixture> {
    let d = collapse_diagram()?;
    let unf = crate::hqm::unfold(&d)?;
    let edge_faces = |f: usize| -> Vec<usize> {
        unf.diagram.face(f).cycle.iter().filter_map(|&h| unf.diagram.face_of(unf.diagram.twin(h))).collect()
    };
    let bigons: Vec<usize> =
        (0..unf.diagram.face_count()).filter(|&f| unf.face_map[f] == collapse::SIGMA).collect();
    let (beta1, beta2) = match bigons[..] {
        [x, y] if edge_faces(x).contains(&collapse::W) => (x, y),
        [x, y] => (y, x),
        _ => return Err(Error::Precondition("unfolding did not produce two bigons".into())),
    };
    let mut a_prime = vec![collapse::N, collapse::W, collapse::S, beta1];
    a_prime.sort_unstable();
    let a_collapsed = crate::hqm::collapse_map(&unf.face_map, &a_prime);
    Ok(CollapseFixture { d, d_unfolded: unf.diagram, face_map: unf.face_map, beta1, beta2, a_prime, a_collapsed })
}

fn collapse_diagram() -> Result<DiskDiagram> {
    // Vertices, with rough planar positions for orientation:
    // x1 (0,0), w (2,0), hr (2,2), hl (0,2), x1' (2,-2), u (0.5,-1.5),
    // z (4,0), nr (4,4), nl (-2,4), sl (-2,-2).
    let names = ["x1", "w", "hr", "hl", "x1p", "u", "z", "nr", "nl", "sl"];
    let vid = |s: &str| names.iter().position(|&n| n == s).unwrap();
    let edges: [(&str, &str, &str); 14] = [
        ("x1", "w", "s2"),
        ("w", "hr", "e2"),
        ("hr", "hl", "e3"),
        ("hl", "x1", "e4"),
        ("x1p", "w", "s2"),
        ("u", "x1p", "s1"),
        ("u", "x1", "s1"),
        ("w", "z", "e8"),
        ("z", "nr", "e9"),
        ("nr", "hr", "e10"),
        ("nr", "nl", "e11"),
        ("nl", "hl", "e12"),
        ("nl", "sl", "e13"),
        ("sl", "x1p", "e14"),
    ];
    let mut gens: Vec<String> = Vec::new();
    for (_, _, g) in &edges {
        if !gens.iter().any(|x| x == g) {
            gens.push(g.to_string());
        }
    }
    let mut b = Builder::new(Presentation { generators: gens.clone(), relators: Vec::new() });
    b.add_vertices(names.len());
    let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
    for (s, t, g) in &edges {
        let gen = gens.iter().position(|x| x == g).unwrap();
        let h = b.add_edge(vid(s), vid(t), Letter::pos(gen));
        lookup.insert((vid(s), vid(t)), h);
        lookup.insert((vid(t), vid(s)), h ^ 1);
    }
    let walk = |vs: &[&str]| -> Vec<usize> { (0..vs.len()).map(|i| lookup[&(vid(vs[i]), vid(vs[(i + 1) % vs.len()]))]).collect() };
    // Clockwise face walks.
    let faces = [
        walk(&["x1", "hl", "hr", "w"]),
        walk(&["hl", "nl", "nr", "hr"]),
        walk(&["x1", "u", "x1p", "sl", "nl", "hl"]),
        walk(&["w", "hr", "nr", "z"]),
    ];
    let sigma = walk(&["x1", "w", "x1p", "u"]);
    let outer = walk(&["x1p", "w", "z", "nr", "nl", "sl"]);
    let rels = faces.iter().map(|c| c.iter().map(|&h| b.label(h)).collect()).collect();
    let mut b2 = Builder::new(Presentation::new(gens, rels)?);
    b2.add_vertices(names.len());
    for (s, t, g) in &edges {
        let gen = b2.presentation().gen_index(g).unwrap();
        b2.add_edge(vid(s), vid(t), Letter::pos(gen));
    }
    for (i, c) in faces.into_iter().enumerate() {
        b2.add_face(FaceKind::Relator { relator_id: i, rotation: 0, inverted: false }, c);
    }
    b2.add_face(FaceKind::PathBigon { path_len: 2 }, sigma);
    b2.build(outer, Some(vid("x1p")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word;

    #[test]
    fn grid_counts() {
        let d = grid(2, 2).unwrap();
        assert!(d.validate().all_pass(), "{:?}", d.validate().failures());
        assert_eq!(d.area(), 4);
        assert_eq!(d.boundary_length(), 8);
        assert_eq!(d.interior_vertices().len(), 1);
        let g = grid(3, 2).unwrap();
        assert_eq!((g.area(), g.boundary_length()), (6, 10));
        assert_eq!(grid(4, 3).unwrap().interior_vertices().len(), 6);
        assert!(grid(1, 3).is_err());
    }

    #[test]
    fn grid_boundary_word() {
        let d = grid(3, 2).unwrap();
        let p = d.presentation();
        assert_eq!(d.boundary_word(), p.parse_compact_word("aaabbAAABB").unwrap());
    }

    #[test]
    fn fan_counts() {
        let d = fan(3).unwrap();
        assert!(d.validate().all_pass(), "{:?}", d.validate().failures());
        assert_eq!((d.vertex_count(), d.edge_count(), d.area()), (7, 12, 6));
        assert_eq!(d.degree(0).unwrap(), 6);
        assert_eq!(d.interior_vertices(), vec![0]);
        let d1 = fan(1).unwrap();
        assert!(d1.validate().all_pass());
        assert_eq!(d1.boundary_word(), vec![Letter::pos(2); 2]);
    }

    #[test]
    fn single_face() {
        let s = Presentation::surface(2);
        let d = single_relator_disk(&s, 0).unwrap();
        assert!(d.validate().all_pass());
        assert_eq!((d.area(), d.boundary_length()), (1, 8));
        assert!(d.interior_vertices().is_empty());
        assert!(single_relator_disk(&s, 1).is_err());
    }

    #[test]
    fn dipole_is_valid() {
        let d = dipole().unwrap();
        assert!(d.validate().all_pass(), "{:?}", d.validate().failures());
        assert!(word::free_reduce(&d.boundary_word()).is_empty());
        assert_eq!((d.vertex_count(), d.edge_count(), d.area()), (4, 5, 2));
    }

    #[test]
    fn collapse_fixture_shape() {
        let c = collapse_fixture().unwrap();
        assert!(c.d.validate().all_pass(), "{:?}", c.d.validate().failures());
        assert!(c.d_unfolded.validate().all_pass(), "{:?}", c.d_unfolded.validate().failures());
        assert_eq!((c.d.area(), c.d_unfolded.area()), (5, 6));
        assert_eq!(c.a_collapsed, vec![collapse::N, collapse::W, collapse::S, collapse::SIGMA]);
    }
}
