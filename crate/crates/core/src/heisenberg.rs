//! The funnel-corridor-funnel family over `<x, y, z | [x,y] z^-1, [x,z], [y,z]>`.
//!
//! Built by rewriting a frontier path: every rewrite replaces a subpath by a
//! new path with the same endpoints and glues a relator face in between.

use crate::diagram::{Builder, DiskDiagram};
use crate::word::{Letter, Presentation};
use crate::{Error, Result};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

/// A path of half-edges whose right-hand sides are not yet assigned.
struct Frontier {
    b: Builder,
    start: usize,
    path: Vec<usize>,
}

impl Frontier {
    fn new(b: Builder, start: usize, path: Vec<usize>) -> Self {
        Frontier { b, start, path }
    }

    fn vertex_at(&self, pos: usize) -> usize {
        if pos == 0 {
            self.start
        } else {
            self.b.head(self.path[pos - 1])
        }
    }

    fn new_path(&mut self, from: usize, to: Option<usize>, labels: &[Letter]) -> Vec<usize> {
        let mut out = Vec::with_capacity(labels.len());
        let mut cur = from;
        for (i, &l) in labels.iter().enumerate() {
            let next = match to {
                Some(t) if i + 1 == labels.len() => t,
                _ => self.b.add_vertex(),
            };
            out.push(self.b.add_edge(cur, next, l));
            cur = next;
        }
        out
    }

    /// Replaces `path[pos..pos + old_len]` by a fresh path spelling `new`
    /// and glues the face between them. Returns the face id.
    fn rewrite(&mut self, pos: usize, old_len: usize, new: &[Letter]) -> Result<usize> {
        let (s, t) = (self.vertex_at(pos), self.vertex_at(pos + old_len));
        let fresh = self.new_path(s, Some(t), new);
        let mut cycle: Vec<usize> = self.path[pos..pos + old_len].to_vec();
        cycle.extend(fresh.iter().rev().map(|&h| Builder::twin(h)));
        let f = self.b.add_relator_face(cycle)?;
        self.path.splice(pos..pos + old_len, fresh);
        Ok(f)
    }

    /// Hangs the tree path `labels` off the vertex at `pos`, entering the
    /// frontier as the path followed by its reverse.
    fn insert_spur(&mut self, pos: usize, labels: &[Letter]) {
        let v = self.vertex_at(pos);
        let out = self.new_path(v, None, labels);
        let back: Vec<usize> = out.iter().rev().map(|&h| Builder::twin(h)).collect();
        self.path.splice(pos..pos, out.into_iter().chain(back));
    }

    fn word(&self) -> Vec<Letter> {
        self.path.iter().map(|&h| self.b.label(h)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Step {
    pos: usize,
    old: &'static [Letter],
    new: &'static [Letter],
}

const XY: &[Letter] = &[Letter { gen: X, inv: false }, Letter { gen: Y, inv: false }];
const ZYX: &[Letter] = &[Letter { gen: Z, inv: false }, Letter { gen: Y, inv: false }, Letter { gen: X, inv: false }];
const XZ: &[Letter] = &[Letter { gen: X, inv: false }, Letter { gen: Z, inv: false }];
const ZX: &[Letter] = &[Letter { gen: Z, inv: false }, Letter { gen: X, inv: false }];
const YZ: &[Letter] = &[Letter { gen: Y, inv: false }, Letter { gen: Z, inv: false }];
const ZY: &[Letter] = &[Letter { gen: Z, inv: false }, Letter { gen: Y, inv: false }];

/// Rewrites taking `x^n y^n` to `z^{n^2} y^n x^n`, each `y` in turn being
/// pushed left through the `x` block.
fn funnel_steps(n: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    let mut zs = 0;
    for ys in 0..n {
        for a in (1..=n).rev() {
            let p = zs + ys + a;
            steps.push(Step { pos: p - 1, old: XY, new: ZYX });
            let mut q = p - 1;
            for _ in 0..a - 1 {
                steps.push(Step { pos: q - 1, old: XZ, new: ZX });
                q -= 1;
            }
            for _ in 0..ys {
                steps.push(Step { pos: q - 1, old: YZ, new: ZY });
                q -= 1;
            }
            zs += 1;
        }
    }
    steps
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorridorFace {
    pub face: usize,
    /// Column along the `x` direction, `1..=n`.
    pub i: usize,
    /// Row along the `z` direction, `1..=n^2`.
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct Heisenberg {
    pub n: usize,
    pub diagram: DiskDiagram,
    /// The `n x n^2` grid of `[x,z]` squares.
    pub corridor: Vec<CorridorFace>,
}

impl Heisenberg {
    pub fn corridor_faces(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.corridor.iter().map(|c| c.face).collect();
        v.sort_unstable();
        v
    }

    /// `g(i,k) = sin(pi (i-1)/(n-1)) sin(pi k/(n^2+1))` on corridor faces,
    /// zero elsewhere.
    pub fn corridor_test_function(&self) -> Vec<f64> {
        let n = self.n as f64;
        let m = (self.n * self.n) as f64;
        let mut g = vec![0.0; self.diagram.face_count()];
        for c in &self.corridor {
            g[c.face] = (std::f64::consts::PI * (c.i as f64 - 1.0) / (n - 1.0)).sin()
                * (std::f64::consts::PI * c.k as f64 / (m + 1.0)).sin();
        }
        g
    }
}

/// Builds the diagram with boundary word `[x^n, [x^n, y^n]]` (length `10n`,
/// read from the basepoint) out of two funnels and a corridor.
pub fn heisenberg(n: usize) -> Result<Heisenberg> {
    if n < 3 {
        return Err(Error::Param(format!("heisenberg needs n >= 3 (got {n})")));
    }
    let m = n * n;
    let x = Letter::pos(X);
    let y = Letter::pos(Y);
    let xi = Letter::neg(X);

    let mut b = Builder::new(Presentation::heisenberg());
    let c = b.add_vertex();
    let mut initial_word = vec![x; n];
    initial_word.extend(vec![y; n]);
    let mut fr = Frontier::new(b, c, Vec::new());
    let initial = fr.new_path(c, None, &initial_word);
    fr.path = initial.clone();

    let steps = funnel_steps(n);
    for s in &steps {
        fr.rewrite(s.pos, s.old.len(), s.new)?;
    }

    // Corridor: push x^-n through z^m, one z at a time.
    fr.insert_spur(0, &vec![x; n]);
    let mut corridor = Vec::with_capacity(n * m);
    for k in 1..=m {
        let mut q = n + (k - 1) + n;
        for i in (1..=n).rev() {
            let face = fr.rewrite(q - 1, 2, &[Letter::pos(Z), xi])?;
            corridor.push(CorridorFace { face, i, k });
            q -= 1;
        }
    }

    let mut spur = vec![y; n];
    spur.extend(vec![x; n]);
    fr.insert_spur(n + m, &spur);
    for s in steps.iter().rev() {
        fr.rewrite(n + s.pos, s.new.len(), s.old)?;
    }

    debug_assert_eq!(fr.word().len(), 8 * n);
    let mut outer = fr.path.clone();
    outer.extend(initial.iter().rev().map(|&h| Builder::twin(h)));
    let diagram = fr.b.build(outer, Some(c))?;
    Ok(Heisenberg { n, diagram, corridor })
}

/// `[x^n, [x^n, y^n]]` spelled out.
pub fn heisenberg_word(n: usize) -> Vec<Letter> {
    let rep = |l: Letter| vec![l; n];
    let (x, y, xi, yi) = (Letter::pos(X), Letter::pos(Y), Letter::neg(X), Letter::neg(Y));
    [rep(x), rep(x), rep(y), rep(xi), rep(yi), rep(xi), rep(y), rep(x), rep(yi), rep(xi)].concat()
}
