//! Finitely presented groups: the picture group from silting intervals, the
//! fundamental group of the nerve of the picture category, Tietze moves and
//! computable invariants.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{malformed, Result};

mod invariants;
mod routes;
mod tietze;

pub use invariants::{hom_count, invariants, FiniteGroup, GroupInvariants};
pub use routes::{
    b_generators, pi1_nerve, presentation_from_poset, rewrite_intervals, with_cover_identifications, BGenerators, BRewriting, IntervalRewriting,
    NervePresentation, PosetPresentation, RewriteStep,
};
pub use tietze::{tietze_simplify, TietzeMove, TietzeOutcome};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Letter { gen, inv: false }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }
}

pub type Word = Vec<Letter>;

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

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
        w.pop();
        w.remove(0);
    }
    w
}

/// Representative of a relator up to rotation and inversion.
pub fn canonical_relator(w: &[Letter]) -> Word {
    let w = cyclic_reduce(w);
    let mut best = w.clone();
    for v in [w.clone(), inverse_word(&w)] {
        for k in 0..v.len() {
            let rot: Word = v[k..].iter().chain(&v[..k]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    /// Freely reduced, nonempty.
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if !g.starts_with(|c: char| c.is_ascii_lowercase()) || !g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(malformed(0, format!("generator name {g:?} must be lowercase-initial alphanumeric")));
            }
            if seen.insert(g.clone(), i).is_some() {
                return Err(malformed(0, format!("duplicate generator {g}")));
            }
        }
        for r in &relators {
            if let Some(l) = r.iter().find(|l| l.gen >= generators.len()) {
                return Err(malformed(0, format!("relator uses unknown generator {}", l.gen)));
            }
        }
        let relators = relators.iter().map(|r| free_reduce(r)).filter(|r| !r.is_empty()).collect();
        Ok(GroupPresentation { generators, relators })
    }

    pub fn trivial() -> Self {
        GroupPresentation { generators: Vec::new(), relators: Vec::new() }
    }

    pub fn letter_text(&self, l: Letter) -> String {
        let g = &self.generators[l.gen];
        if l.inv {
            let mut c = g.chars();
            let first = c.next().unwrap().to_ascii_uppercase();
            std::iter::once(first).chain(c).collect()
        } else {
            g.clone()
        }
    }

    pub fn word_text(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&l| self.letter_text(l)).collect::<Vec<_>>().join("*")
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        if s == "1" {
            return Ok(Vec::new());
        }
        s.split('*')
            .map(|tok| {
                let inv = tok.starts_with(|c: char| c.is_ascii_uppercase());
                let name: String = tok
                    .chars()
                    .enumerate()
                    .map(|(i, c)| if i == 0 { c.to_ascii_lowercase() } else { c })
                    .collect();
                let gen = self
                    .generators
                    .iter()
                    .position(|g| *g == name)
                    .ok_or_else(|| malformed(0, format!("unknown generator in {tok:?}")))?;
                Ok(Letter { gen, inv })
            })
            .collect()
    }

    /// `gens: a b` / `rels: a*B ...`
    pub fn to_text(&self) -> String {
        let gens: String = self.generators.iter().map(|g| format!(" {g}")).collect();
        let rels: String = self.relators.iter().map(|r| format!(" {}", self.word_text(r))).collect();
        format!("gens:{gens}\nrels:{rels}\n")
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let mut gens = None;
        let mut rels = None;
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("gens:") {
                gens = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            } else if let Some(rest) = line.strip_prefix("rels:") {
                rels = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            } else {
                return Err(malformed(0, format!("unexpected line {line:?}")));
            }
        }
        let gens = gens.ok_or_else(|| malformed(0, "missing gens line"))?;
        let shell = GroupPresentation::new(gens, Vec::new())?;
        let rels = rels.unwrap_or_default().iter().map(|r| shell.parse_word(r)).collect::<Result<_>>()?;
        GroupPresentation::new(shell.generators, rels)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PresentationDoc {
            schema: 1,
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|r| self.word_text(r)).collect(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: PresentationDoc = serde_json::from_value(v.clone()).map_err(|e| malformed(0, e.to_string()))?;
        let shell = GroupPresentation::new(doc.generators, Vec::new())?;
        let rels = doc.relators.iter().map(|r| shell.parse_word(r)).collect::<Result<_>>()?;
        GroupPresentation::new(shell.generators, rels)
    }

    /// Relator exponent sums, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.generators.len()];
                for l in r {
                    row[l.gen] += if l.inv { -1 } else { 1 };
                }
                row
            })
            .collect()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    schema: u32,
    generators: Vec<String>,
    relators: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let p = GroupPresentation::parse_text("gens: a b g0_1\nrels: a*B*G0_1 b*b\n").unwrap();
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.to_text(), "gens: a b g0_1\nrels: a*B*G0_1 b*b\n");
        assert_eq!(GroupPresentation::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn reduction() {
        let a = Letter::new(0);
        let b = Letter::new(1);
        assert_eq!(free_reduce(&[a, b, b.inverse(), a]), vec![a, a]);
        assert_eq!(cyclic_reduce(&[b, a, a, b.inverse()]), vec![a, a]);
        assert_eq!(canonical_relator(&[b, a]), canonical_relator(&[a.inverse(), b.inverse()]));
    }

    #[test]
    fn rejects_bad_names() {
        assert!(GroupPresentation::parse_text("gens: A\nrels:\n").is_err());
        assert!(GroupPresentation::parse_text("gens: a a\nrels:\n").is_err());
        assert!(GroupPresentation::parse_text("gens: a\nrels: b\n").is_err());
    }
}
