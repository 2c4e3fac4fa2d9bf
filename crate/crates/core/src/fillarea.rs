//! Minimal number of relator insertions reducing a word to the empty word,
//! found by iterative deepening over cyclically reduced words.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::value::ExtendedValue;
use crate::word::{self, Letter, Presentation, Word};
use crate::{Error, Result};

/// Insert `rotate(r, rotation)` (or the same rotation of `r^-1`) in front
/// of letter `position`, then cyclically reduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionStep {
    pub relator: usize,
    pub rotation: usize,
    pub inverse: bool,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FillAreaResult {
    pub area: ExtendedValue,
    /// Empty when the area is infinite.
    pub witness: Vec<InsertionStep>,
}

impl FillAreaResult {
    pub fn count(&self) -> Option<usize> {
        self.area.finite().map(|a| a as usize)
    }
}

fn reduce(w: &[Letter]) -> Word {
    word::cyclic_reduce(&word::free_reduce(w))
}

fn inserted_word(p: &Presentation, step: &InsertionStep) -> Result<Word> {
    let r = p.relators.get(step.relator).ok_or_else(|| Error::Param(format!("unknown relator {}", step.relator)))?;
    let base = if step.inverse { word::inverse(r) } else { r.clone() };
    if base.is_empty() || step.rotation >= base.len() {
        return Err(Error::Param(format!("rotation {} out of range", step.rotation)));
    }
    Ok(word::rotate(&base, step.rotation))
}

/// Applies an insertion trace to the cyclic reduction of `w`.
pub fn replay(p: &Presentation, w: &[Letter], steps: &[InsertionStep]) -> Result<Word> {
    let mut cur = reduce(w);
    for step in steps {
        if step.position > cur.len() {
            return Err(Error::Param(format!("position {} beyond word length {}", step.position, cur.len())));
        }
        let ins = inserted_word(p, step)?;
        let mut next = cur[..step.position].to_vec();
        next.extend_from_slice(&ins);
        next.extend_from_slice(&cur[step.position..]);
        cur = reduce(&next);
    }
    Ok(cur)
}

/// A rotation of a relator or its inverse, with its inverse precomputed.
struct Piece {
    word: Word,
    /// The insertion step that cancels a prefix of `word`.
    relator: usize,
    inverse: bool,
    rotation_of_inverse: usize,
}

struct Bounds {
    /// `max_r |e_s(r)|` per generator.
    gen_max: Vec<i64>,
    /// Generator pairs with zero exponent sum in every relator, with
    /// `max_r |A_st(r)|`.
    pairs: Vec<(usize, usize, i64)>,
}

/// Twice the signed area enclosed by the `(s, t)` projection of a closed word.
fn signed_area2(w: &[Letter], s: usize, t: usize) -> i64 {
    let (mut x, mut y, mut a) = (0i64, 0i64, 0i64);
    for l in w {
        let d = l.sign();
        if l.gen == s {
            a -= y * d;
            x += d;
        } else if l.gen == t {
            a += x * d;
            y += d;
        }
    }
    debug_assert!(x == 0 && y == 0);
    a
}

impl Bounds {
    fn new(p: &Presentation) -> Self {
        let n = p.ngens();
        let sums: Vec<Vec<i64>> = p.relators.iter().map(|r| word::exponent_sums(r, n)).collect();
        let gen_max = (0..n).map(|s| sums.iter().map(|e| e[s].abs()).max().unwrap_or(0)).collect();
        let mut pairs = Vec::new();
        for s in 0..n {
            for t in s + 1..n {
                if sums.iter().all(|e| e[s] == 0 && e[t] == 0) {
                    let m = p.relators.iter().map(|r| signed_area2(r, s, t).abs()).max().unwrap_or(0);
                    pairs.push((s, t, m));
                }
            }
        }
        Bounds { gen_max, pairs }
    }

    /// Admissible lower bound on the remaining number of insertions;
    /// `None` when no sequence of insertions can empty the word.
    fn estimate(&self, w: &[Letter]) -> Option<usize> {
        if w.is_empty() {
            return Some(0);
        }
        let mut h = 1usize;
        let sums = word::exponent_sums(w, self.gen_max.len());
        for (s, &e) in sums.iter().enumerate() {
            if e != 0 {
                if self.gen_max[s] == 0 {
                    return None;
                }
                h = h.max(e.unsigned_abs().div_ceil(self.gen_max[s] as u64) as usize);
            }
        }
        for &(s, t, m) in &self.pairs {
            if sums[s] != 0 || sums[t] != 0 {
                continue;
            }
            let a = signed_area2(w, s, t);
            if a != 0 {
                if m == 0 {
                    return None;
                }
                h = h.max(a.unsigned_abs().div_ceil(m as u64) as usize);
            }
        }
        Some(h)
    }
}

struct Search {
    pieces: Vec<Piece>,
    bounds: Bounds,
    table: HashMap<Word, usize>,
    path: Vec<InsertionStep>,
}

const FOUND: usize = usize::MAX;

impl Search {
    /// Distinct successors of `w`: replace a cyclic subword `u` that is a
    /// prefix of a piece `uv` by `v^-1`.
    fn successors(&self, w: &[Letter]) -> Vec<(Word, InsertionStep)> {
        let n = w.len();
        let mut out: Vec<(Word, InsertionStep)> = Vec::new();
        let mut seen: HashSet<Word> = HashSet::new();
        for piece in &self.pieces {
            let r = &piece.word;
            for pos in 0..n {
                let mut len = 0;
                while len < r.len() && len < n && w[(pos + len) % n] == r[len] {
                    len += 1;
                    let step = InsertionStep {
                        relator: piece.relator,
                        rotation: piece.rotation_of_inverse,
                        inverse: !piece.inverse,
                        position: pos,
                    };
                    let mut next = w[..pos].to_vec();
                    next.extend(word::inverse(r));
                    next.extend_from_slice(&w[pos..]);
                    let next = reduce(&next);
                    let key = word::canonical_rotation(&next);
                    if next.as_slice() != w && seen.insert(key) {
                        out.push((next, step));
                    }
                }
            }
        }
        out
    }

    /// Returns `FOUND` or the smallest `f` value above `bound`.
    fn dfs(&mut self, w: Word, g: usize, bound: usize) -> usize {
        let Some(h) = self.bounds.estimate(&w) else { return usize::MAX - 1 };
        let f = g + h;
        if f > bound {
            return f;
        }
        if w.is_empty() {
            return FOUND;
        }
        let key = word::canonical_rotation(&w);
        if self.table.get(&key).is_some_and(|&g0| g0 <= g) {
            return usize::MAX - 1;
        }
        self.table.insert(key, g);
        let mut kids: Vec<(usize, Word, InsertionStep)> = self
            .successors(&w)
            .into_iter()
            .filter_map(|(x, s)| self.bounds.estimate(&x).map(|h| (h, x, s)))
            .collect();
        kids.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.len().cmp(&b.1.len())));
        let mut next_bound = usize::MAX - 1;
        for (_, x, step) in kids {
            self.path.push(step);
            let t = self.dfs(x, g + 1, bound);
            if t == FOUND {
                return FOUND;
            }
            self.path.pop();
            next_bound = next_bound.min(t);
        }
        next_bound
    }
}

/// Minimal number of relator insertions turning `w` into the empty word,
/// or infinity if it exceeds `max_area`.
pub fn fillarea_oracle(p: &Presentation, w: &[Letter], max_area: usize) -> Result<FillAreaResult> {
    if let Some(l) = w.iter().find(|l| l.gen >= p.ngens()) {
        return Err(Error::Param(format!("generator index {} outside the alphabet", l.gen)));
    }
    let start = reduce(w);
    let mut pieces = Vec::new();
    for (i, r) in p.relators.iter().enumerate() {
        if reduce(r).is_empty() {
            // Bigon relators only ever reinsert a cancelling pair.
            continue;
        }
        for inverse in [false, true] {
            let base = if inverse { word::inverse(r) } else { r.clone() };
            for k in 0..base.len() {
                pieces.push(Piece {
                    word: word::rotate(&base, k),
                    relator: i,
                    inverse,
                    rotation_of_inverse: (base.len() - k) % base.len(),
                });
            }
        }
    }
    let mut search = Search { pieces, bounds: Bounds::new(p), table: HashMap::new(), path: Vec::new() };
    let Some(mut bound) = search.bounds.estimate(&start) else {
        return Ok(FillAreaResult { area: ExtendedValue::Infinite, witness: Vec::new() });
    };
    while bound <= max_area {
        search.table.clear();
        search.path.clear();
        let t = search.dfs(start.clone(), 0, bound);
        if t == FOUND {
            let witness = std::mem::take(&mut search.path);
            return Ok(FillAreaResult { area: ExtendedValue::Finite(witness.len() as f64), witness });
        }
        if t >= usize::MAX - 1 {
            break;
        }
        bound = t;
    }
    Ok(FillAreaResult { area: ExtendedValue::Infinite, witness: Vec::new() })
}

/// Memoised oracle over canonical cyclic words.
pub struct FillAreaCache<'a> {
    p: &'a Presentation,
    max_area: usize,
    memo: HashMap<Word, Option<usize>>,
}

impl<'a> FillAreaCache<'a> {
    pub fn new(p: &'a Presentation, max_area: usize) -> Self {
        FillAreaCache { p, max_area, memo: HashMap::new() }
    }

    /// `None` when the area exceeds the cap.
    pub fn area(&mut self, w: &[Letter]) -> Result<Option<usize>> {
        let key = word::canonical_rotation(&reduce(w));
        if let Some(&a) = self.memo.get(&key) {
            return Ok(a);
        }
        let a = fillarea_oracle(self.p, &key, self.max_area)?.count();
        self.memo.insert(key, a);
        Ok(a)
    }
}
