//! Letters, words and finite presentations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A generator index together with an exponent sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inv: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

pub type Word = Vec<Letter>;

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn power(w: &[Letter], k: usize) -> Word {
    let mut out = Vec::with_capacity(w.len() * k);
    for _ in 0..k {
        out.extend_from_slice(w);
    }
    out
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let r = free_reduce(w);
    let mut i = 0;
    let mut j = r.len();
    while j - i >= 2 && r[i] == r[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    r[i..j].to_vec()
}

/// Rotation `w[k..] w[..k]`.
pub fn rotate(w: &[Letter], k: usize) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    let k = k % w.len();
    let mut out = w[k..].to_vec();
    out.extend_from_slice(&w[..k]);
    out
}

/// Offset of the lexicographically least rotation (Booth's algorithm would
/// do, but words here are short).
pub fn min_rotation_offset(w: &[Letter]) -> usize {
    let n = w.len();
    let mut best = 0;
    for k in 1..n {
        if (0..n).map(|i| w[(k + i) % n]).lt((0..n).map(|i| w[(best + i) % n])) {
            best = k;
        }
    }
    best
}

pub fn canonical_rotation(w: &[Letter]) -> Word {
    rotate(w, min_rotation_offset(w))
}

/// Whether `u` is a cyclic rotation of `v`.
pub fn is_rotation(u: &[Letter], v: &[Letter]) -> bool {
    u.len() == v.len() && (u.is_empty() || (0..v.len()).any(|k| rotate(v, k) == u))
}

/// Exponent sum of each generator.
pub fn exponent_sums(w: &[Letter], ngens: usize) -> Vec<i64> {
    let mut e = vec![0i64; ngens];
    for l in w {
        e[l.gen] += l.sign();
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, Error> {
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::Presentation(format!("relator {i} is empty")));
            }
            if let Some(l) = r.iter().find(|l| l.gen >= generators.len()) {
                return Err(Error::Presentation(format!(
                    "relator {i} uses generator index {} outside the alphabet",
                    l.gen
                )));
            }
        }
        Ok(Presentation { generators, relators })
    }

    /// The presentation with no relators on the given generators.
    pub fn free(generators: &[&str]) -> Self {
        Presentation { generators: generators.iter().map(|s| s.to_string()).collect(), relators: Vec::new() }
    }

    /// `<a, b | a b a^-1 b^-1>`
    pub fn z2() -> Self {
        Presentation {
            generators: vec!["a".into(), "b".into()],
            relators: vec![vec![Letter::pos(0), Letter::pos(1), Letter::neg(0), Letter::neg(1)]],
        }
    }

    /// `<a, b, t | a t b, b^-1 t a^-1>`
    pub fn fan() -> Self {
        Presentation {
            generators: vec!["a".into(), "b".into(), "t".into()],
            relators: vec![
                vec![Letter::pos(0), Letter::pos(2), Letter::pos(1)],
                vec![Letter::neg(1), Letter::pos(2), Letter::neg(0)],
            ],
        }
    }

    /// `<x, y, z | [x,y] z^-1, [x,z], [y,z]>`
    pub fn heisenberg() -> Self {
        let (x, y, z) = (0, 1, 2);
        let comm = |s: usize, t: usize| vec![Letter::pos(s), Letter::pos(t), Letter::neg(s), Letter::neg(t)];
        let mut r0 = comm(x, y);
        r0.push(Letter::neg(z));
        Presentation {
            generators: vec!["x".into(), "y".into(), "z".into()],
            relators: vec![r0, comm(x, z), comm(y, z)],
        }
    }

    /// Closed orientable surface of genus `g`: `prod [a_i, b_i]`.
    pub fn surface(g: usize) -> Self {
        let mut generators = Vec::new();
        let mut rel = Vec::new();
        for i in 0..g {
            generators.push(format!("a{}", i + 1));
            generators.push(format!("b{}", i + 1));
            let (a, b) = (2 * i, 2 * i + 1);
            rel.extend([Letter::pos(a), Letter::pos(b), Letter::neg(a), Letter::neg(b)]);
        }
        Presentation { generators, relators: vec![rel] }
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    /// Shortest relator length, 0 when there are no relators.
    pub fn l_min(&self) -> usize {
        self.relators.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Longest relator length, 0 when there are no relators.
    pub fn l_max(&self) -> usize {
        self.relators.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Adds the bigon `s s^-1` for every generator that does not already
    /// have one (so the operation is idempotent).
    pub fn free_completion(&self) -> Presentation {
        let mut out = self.clone();
        for s in 0..self.ngens() {
            let bigon = vec![Letter::pos(s), Letter::neg(s)];
            let present = out.relators.iter().any(|r| is_rotation(r, &bigon) || is_rotation(&inverse(r), &bigon));
            if !present {
                out.relators.push(bigon);
            }
        }
        out
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parses `gens: a b t` / `rels: a t b, b- t a-`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels_line: Option<String> = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                gens = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("rels:") {
                rels_line = Some(rest.to_string());
            } else {
                return Err(Error::Parse(format!("unrecognised line `{line}`")));
            }
        }
        let gens = gens.ok_or_else(|| Error::Parse("missing `gens:` line".into()))?;
        let mut p = Presentation { generators: gens, relators: Vec::new() };
        if let Some(rels) = rels_line {
            for chunk in rels.split(',') {
                if chunk.trim().is_empty() {
                    continue;
                }
                let w = p.parse_spaced_word(chunk)?;
                p.relators.push(w);
            }
        }
        Presentation::new(p.generators, p.relators)
    }

    /// Words written as space separated tokens, a trailing `-` marking an
    /// inverse letter.
    pub fn parse_spaced_word(&self, text: &str) -> Result<Word, Error> {
        text.split_whitespace()
            .map(|tok| {
                let (name, inv) = match tok.strip_suffix('-') {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                self.gen_index(name)
                    .map(|gen| Letter { gen, inv })
                    .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))
            })
            .collect()
    }

    /// Compact words: one character per letter, upper case for inverses.
    /// Only usable when every generator name is a single lower case letter.
    pub fn parse_compact_word(&self, text: &str) -> Result<Word, Error> {
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                let lower = c.to_ascii_lowercase().to_string();
                self.gen_index(&lower)
                    .map(|gen| Letter { gen, inv: c.is_ascii_uppercase() })
                    .ok_or_else(|| Error::Parse(format!("unknown generator `{c}`")))
            })
            .collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|l| format!("{}{}", self.generators[l.gen], if l.inv { "-" } else { "" }))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_text(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        format!("gens: {}\nrels: {}\n", self.generators.join(" "), rels.join(", "))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}
