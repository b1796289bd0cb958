//! Category axioms and the cubical structure, checked by enumeration.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::PictureCategory;
use crate::error::Result;
use crate::model::explore_silt_poset;

/// Morphisms whose composite with an identity is not themselves.
pub fn check_identities(cat: &PictureCategory) -> Vec<String> {
    (0..cat.morphisms.len())
        .filter(|&f| {
            let m = &cat.morphisms[f];
            cat.compose(cat.identity(m.source), f) != Some(f) || cat.compose(f, cat.identity(m.target)) != Some(f)
        })
        .map(|f| cat.describe_morphism(f))
        .collect()
}

/// Composable triples `(f, g, h)` with `(h∘g)∘f != h∘(g∘f)`.
pub fn check_associativity(cat: &PictureCategory) -> Vec<(usize, usize, usize)> {
    let n = cat.morphisms.len();
    crate::par::map_range(n, |f| {
        let mut bad = Vec::new();
        for g in 0..n {
            let Some(gf) = cat.compose(f, g) else { continue };
            for h in 0..n {
                let Some(hg) = cat.compose(g, h) else { continue };
                if cat.compose(gf, h) != cat.compose(f, hg) {
                    bad.push((f, g, h));
                }
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Objects whose morphisms into `O` do not match the silting subcategories
/// of their reduced model.
pub fn check_sink_homs(cat: &PictureCategory, budget: usize) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for (k, obj) in cat.objects.iter().enumerate() {
        let homs = cat.hom(k, cat.sink).len();
        let silt = explore_silt_poset(obj.reduced.as_ref(), budget)?.len();
        if homs != silt {
            bad.push(format!("{}: {homs} morphisms to O, {silt} siltings", obj.label));
        }
    }
    Ok(bad)
}

/// For every morphism `h`, the pairs `(f, g)` with `g ∘ f = h`.
fn factorizations(cat: &PictureCategory) -> Vec<Vec<(usize, usize)>> {
    let n = cat.morphisms.len();
    let mut out = vec![Vec::new(); n];
    for f in 0..n {
        for g in 0..n {
            if let Some(h) = cat.compose(f, g) {
                out[h].push((f, g));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CubicalReport {
    pub rank_additivity: Vec<String>,
    /// Morphisms whose first factors do not form the Boolean lattice on
    /// their payload.
    pub factor_lattice: Vec<String>,
    pub first_factor_collisions: Vec<String>,
    pub last_factor_collisions: Vec<String>,
}

impl CubicalReport {
    pub fn passed(&self) -> bool {
        self.rank_additivity.is_empty()
            && self.factor_lattice.is_empty()
            && self.first_factor_collisions.is_empty()
            && self.last_factor_collisions.is_empty()
    }
}

pub fn check_cubical(cat: &PictureCategory) -> CubicalReport {
    let mut rep = CubicalReport::default();
    let ms = &cat.morphisms;
    let facts = factorizations(cat);
    for (h, fs) in facts.iter().enumerate() {
        for &(f, g) in fs {
            if ms[h].rank() != ms[f].rank() + ms[g].rank() {
                rep.rank_additivity.push(format!(
                    "{} = {} then {}",
                    cat.describe_morphism(h),
                    cat.describe_morphism(f),
                    cat.describe_morphism(g)
                ));
            }
        }
        let first: BTreeSet<usize> = fs.iter().map(|&(f, _)| f).collect();
        let payloads: BTreeSet<Vec<usize>> = first.iter().map(|&f| ms[f].payload.clone()).collect();
        let l = ms[h].rank();
        let subsets_ok = payloads.len() == first.len()
            && first.len() == 1 << l
            && payloads.iter().all(|p| p.iter().all(|x| ms[h].payload.contains(x)));
        // f <= f' iff f' factors through f, which must match inclusion
        let order_ok = subsets_ok
            && first.iter().all(|&f| {
                first.iter().all(|&f2| {
                    let through = (0..ms.len()).any(|k| cat.compose(f, k) == Some(f2));
                    let incl = ms[f].payload.iter().all(|x| ms[f2].payload.contains(x));
                    through == incl
                })
            });
        if !order_ok {
            rep.factor_lattice.push(format!("{}: {} first factors", cat.describe_morphism(h), first.len()));
        }
    }
    let rank1_first = |h: usize| -> BTreeSet<usize> {
        facts[h].iter().map(|&(f, _)| f).filter(|&f| ms[f].rank() == 1).collect()
    };
    let rank1_last = |h: usize| -> BTreeSet<usize> {
        facts[h].iter().map(|&(_, g)| g).filter(|&g| ms[g].rank() == 1).collect()
    };
    let mut seen: HashMap<(usize, BTreeSet<usize>), usize> = HashMap::new();
    for h in 0..ms.len() {
        if let Some(&o) = seen.get(&(ms[h].source, rank1_first(h))) {
            rep.first_factor_collisions.push(format!("{} / {}", cat.describe_morphism(o), cat.describe_morphism(h)));
        }
        seen.insert((ms[h].source, rank1_first(h)), h);
    }
    let mut seen: HashMap<(usize, BTreeSet<usize>), usize> = HashMap::new();
    for h in 0..ms.len() {
        if let Some(&o) = seen.get(&(ms[h].target, rank1_last(h))) {
            rep.last_factor_collisions.push(format!("{} / {}", cat.describe_morphism(o), cat.describe_morphism(h)));
        }
        seen.insert((ms[h].target, rank1_last(h)), h);
    }
    rep
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct I12Report {
    pub sets_checked: usize,
    pub i1: Vec<String>,
    pub i2: Vec<String>,
}

impl I12Report {
    pub fn passed(&self) -> bool {
        self.i1.is_empty() && self.i2.is_empty()
    }
}

fn subsets_of_size_at_least_two(items: &[usize]) -> Vec<Vec<usize>> {
    let n = items.len();
    (0u64..(1u64 << n))
        .filter(|m| m.count_ones() >= 2)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).map(|i| items[i]).collect())
        .collect()
}

/// Sets of rank-1 morphisms out of (resp. into) one object that are pairwise
/// first (resp. last) factors of rank-2 morphisms must jointly be the first
/// (resp. last) factors of a single morphism of the full rank.
pub fn check_i1_i2(cat: &PictureCategory) -> I12Report {
    let ms = &cat.morphisms;
    let facts = factorizations(cat);
    let firsts: Vec<BTreeSet<usize>> =
        facts.iter().map(|fs| fs.iter().map(|&(f, _)| f).filter(|&f| ms[f].rank() == 1).collect()).collect();
    let lasts: Vec<BTreeSet<usize>> =
        facts.iter().map(|fs| fs.iter().map(|&(_, g)| g).filter(|&g| ms[g].rank() == 1).collect()).collect();
    let mut rep = I12Report::default();
    for (dual, sets) in [(false, &firsts), (true, &lasts)] {
        for obj in 0..cat.objects.len() {
            let rank1: Vec<usize> = (0..ms.len())
                .filter(|&f| ms[f].rank() == 1 && if dual { ms[f].target == obj } else { ms[f].source == obj })
                .collect();
            let same_end = |h: usize| if dual { ms[h].target == obj } else { ms[h].source == obj };
            for set in subsets_of_size_at_least_two(&rank1) {
                rep.sets_checked += 1;
                let wanted: BTreeSet<usize> = set.iter().copied().collect();
                let pairwise = set.iter().enumerate().all(|(i, &a)| {
                    set[i + 1..].iter().all(|&b| {
                        (0..ms.len()).any(|h| same_end(h) && ms[h].rank() == 2 && sets[h].contains(&a) && sets[h].contains(&b))
                    })
                });
                let joint = (0..ms.len()).any(|h| same_end(h) && ms[h].rank() == set.len() && sets[h] == wanted);
                if pairwise != joint {
                    let names: Vec<String> = set.iter().map(|&f| cat.describe_morphism(f)).collect();
                    let msg = format!("{{{}}}: pairwise {pairwise}, joint {joint}", names.join(", "));
                    if dual {
                        rep.i2.push(msg);
                    } else {
                        rep.i1.push(msg);
                    }
                }
            }
        }
    }
    rep
}
