use std::collections::HashSet;

use serde::Serialize;

use super::{canonical_relator, cyclic_reduce, free_reduce, inverse_word, invariants::abelianization, GroupPresentation, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum TietzeMove {
    /// A relator that is trivial or a rotation/inverse of another one.
    DropRelator { relator: String, reason: String },
    /// `generator = replacement`, read off `relator`, substituted everywhere.
    EliminateGenerator { generator: String, relator: String, replacement: String },
}

#[derive(Clone, Debug)]
pub struct TietzeOutcome {
    pub presentation: GroupPresentation,
    pub log: Vec<TietzeMove>,
    /// The move budget ran out while moves were still available.
    pub exhausted: bool,
}

/// Substitutions that would grow the relators past this many letters are skipped.
const MAX_LETTERS: usize = 20_000;

/// Greedy simplification: drop trivial and repeated relators, then eliminate
/// a generator occurring exactly once in a shortest possible relator, until
/// nothing applies or `budget` moves have been made. The abelianization is
/// recomputed at the end as a consistency check.
pub fn tietze_simplify(pres: &GroupPresentation, budget: usize) -> Result<TietzeOutcome> {
    let before = abelianization(pres);
    let names = &pres.generators;
    let mut rels: Vec<Word> = pres.relators.clone();
    let mut alive = vec![true; names.len()];
    let mut log = Vec::new();
    let shown = |w: &[super::Letter]| pres.word_text(w);
    let mut exhausted = false;
    loop {
        // relator clean-up is free; only eliminations count against the budget
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(rels.len());
        for r in rels {
            let c = cyclic_reduce(&r);
            if c.is_empty() {
                log.push(TietzeMove::DropRelator { relator: shown(&r), reason: "trivial".into() });
            } else if !seen.insert(canonical_relator(&c)) {
                log.push(TietzeMove::DropRelator { relator: shown(&c), reason: "duplicate".into() });
            } else {
                kept.push(c);
            }
        }
        rels = kept;

        let total: usize = rels.iter().map(Vec::len).sum();
        let mut order: Vec<usize> = (0..rels.len()).collect();
        order.sort_by_key(|&i| (rels[i].len(), i));
        let choice = order.iter().find_map(|&i| {
            let r = &rels[i];
            (0..r.len()).find_map(|pos| {
                let g = r[pos].gen;
                if r.iter().filter(|l| l.gen == g).count() != 1 {
                    return None;
                }
                let uses: usize = rels.iter().map(|w| w.iter().filter(|l| l.gen == g).count()).sum::<usize>() - 1;
                (total + uses * r.len() <= MAX_LETTERS).then_some((i, pos))
            })
        });
        let Some((i, pos)) = choice else { break };
        if log.iter().filter(|m| matches!(m, TietzeMove::EliminateGenerator { .. })).count() >= budget {
            exhausted = true;
            break;
        }
        let r = rels.remove(i);
        let l = r[pos];
        // u l v = 1  gives  l = u⁻¹ v⁻¹
        let mut repl = inverse_word(&r[..pos]);
        repl.extend(inverse_word(&r[pos + 1..]));
        let repl = free_reduce(&repl);
        let (g, gword) = if l.inv { (l.gen, inverse_word(&repl)) } else { (l.gen, repl) };
        log.push(TietzeMove::EliminateGenerator {
            generator: names[g].clone(),
            relator: shown(&r),
            replacement: shown(&gword),
        });
        let ginv = inverse_word(&gword);
        for w in rels.iter_mut() {
            let mut out = Vec::with_capacity(w.len());
            for &x in w.iter() {
                if x.gen == g {
                    out.extend_from_slice(if x.inv { &ginv } else { &gword });
                } else {
                    out.push(x);
                }
            }
            *w = free_reduce(&out);
        }
        alive[g] = false;
    }

    let mut index = vec![usize::MAX; names.len()];
    let mut gens = Vec::new();
    for (g, name) in names.iter().enumerate() {
        if alive[g] {
            index[g] = gens.len();
            gens.push(name.clone());
        }
    }
    let rels = rels
        .into_iter()
        .map(|w| w.into_iter().map(|l| super::Letter { gen: index[l.gen], inv: l.inv }).collect())
        .collect();
    let presentation = GroupPresentation::new(gens, rels)?;
    if abelianization(&presentation) != before {
        return Err(Error::InvariantViolation("Tietze moves changed the abelianization".into()));
    }
    Ok(TietzeOutcome { presentation, log, exhausted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> GroupPresentation {
        GroupPresentation::parse_text(s).unwrap()
    }

    #[test]
    fn trivial_generator_goes() {
        let out = tietze_simplify(&p("gens: a b\nrels: b\n"), 100).unwrap();
        assert_eq!(out.presentation, p("gens: a\nrels:\n"));
    }

    #[test]
    fn idempotent_on_minimal() {
        let q = p("gens: a b\nrels: a*b*A*B\n");
        let once = tietze_simplify(&q, 100).unwrap();
        assert_eq!(once.presentation, q);
        assert!(once.log.is_empty());
    }

    #[test]
    fn budget_is_reported() {
        let out = tietze_simplify(&p("gens: a b c\nrels: a b c\n"), 1).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.presentation.generators.len(), 2);
    }
}
