//! The two routes to the picture group and the rewriting certificates
//! relating their generators.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::{canonical_relator, free_reduce, inverse_word, GroupPresentation, Letter, Word};
use crate::error::{Error, Result};
use crate::model::{enumerate_rigid, explore_silt_poset, ObjId, RigidSubcat, SiltingPoset};
use crate::picture::PictureCategory;

/// Generators are the intervals `[lo, hi]` of the silting poset, relators
/// `[lo,hi]⁻¹[lo,mid][mid,hi]` for every chain `lo <= mid <= hi`.
#[derive(Clone, Debug)]
pub struct PosetPresentation {
    pub presentation: GroupPresentation,
    /// `(lo, hi)` node indices, one per generator.
    pub intervals: Vec<(usize, usize)>,
    /// `(lo, mid, hi)`, one per relator.
    pub chains: Vec<(usize, usize, usize)>,
}

impl PosetPresentation {
    pub fn generator(&self, lo: usize, hi: usize) -> Option<usize> {
        self.intervals.iter().position(|&iv| iv == (lo, hi))
    }

    pub fn relator(&self, chain: (usize, usize, usize)) -> Option<usize> {
        self.chains.iter().position(|&c| c == chain)
    }
}

pub fn presentation_from_poset(poset: &SiltingPoset) -> Result<PosetPresentation> {
    let intervals = poset.intervals();
    let names = intervals.iter().map(|(lo, hi)| format!("g{lo}_{hi}")).collect();
    let gen = |lo: usize, hi: usize| intervals.iter().position(|&iv| iv == (lo, hi)).expect("interval");
    let mut chains = Vec::new();
    let mut rels = Vec::new();
    for &(lo, hi) in &intervals {
        for mid in poset.interval_members(lo, hi) {
            chains.push((lo, mid, hi));
            rels.push(free_reduce(&[
                Letter::new(gen(lo, hi)).inverse(),
                Letter::new(gen(lo, mid)),
                Letter::new(gen(mid, hi)),
            ]));
        }
    }
    let presentation = GroupPresentation::new(names, rels)?;
    debug_assert_eq!(presentation.relators.len(), chains.len());
    Ok(PosetPresentation { presentation, intervals, chains })
}

#[derive(Clone, Debug, Serialize)]
pub struct RewriteStep {
    pub chain: (usize, usize, usize),
    pub relator: usize,
}

/// `[lo, hi]` written as a product of irreducible intervals.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalRewriting {
    pub interval: (usize, usize),
    pub word: Vec<(usize, usize)>,
    pub steps: Vec<RewriteStep>,
}

/// Rewrites every interval generator along a maximal chain of covers. Each
/// step replaces one letter `x` by a segment `s` and is accepted only if
/// `x⁻¹s` is, letter for letter, a relator of the presentation.
pub fn rewrite_intervals(pp: &PosetPresentation, poset: &SiltingPoset) -> Result<Vec<IntervalRewriting>> {
    let is_cover = |lo: usize, hi: usize| poset.hasse.contains(&(hi, lo));
    let gen = |lo: usize, hi: usize| {
        pp.generator(lo, hi).ok_or_else(|| Error::RewritingFailed(format!("[{lo},{hi}] is not an interval")))
    };
    let mut out = Vec::new();
    for &(lo, hi) in &pp.intervals {
        let mut word = vec![(lo, hi)];
        let mut steps = Vec::new();
        while let Some(k) = word.iter().position(|&(a, c)| !is_cover(a, c)) {
            let (a, c) = word[k];
            let segment: Vec<(usize, usize)> = if a == c {
                vec![]
            } else {
                let b = (0..poset.len())
                    .find(|&b| is_cover(a, b) && poset.geq[c][b])
                    .ok_or_else(|| Error::RewritingFailed(format!("no cover of {a} below {c}")))?;
                vec![(a, b), (b, c)]
            };
            let chain = match segment.as_slice() {
                [] => (a, a, a),
                [(_, b), _] => (a, *b, c),
                _ => unreachable!(),
            };
            let relator = pp
                .relator(chain)
                .ok_or_else(|| Error::RewritingFailed(format!("no relator for chain {chain:?}")))?;
            let mut expected: Word = vec![Letter::new(gen(a, c)?).inverse()];
            for &(x, y) in &segment {
                expected.push(Letter::new(gen(x, y)?));
            }
            let expected = free_reduce(&expected);
            let r = &pp.presentation.relators[relator];
            if expected != *r && inverse_word(&expected) != *r {
                return Err(Error::RewritingFailed(format!("relator {relator} does not justify [{a},{c}]")));
            }
            word.splice(k..=k, segment);
            steps.push(RewriteStep { chain, relator });
        }
        out.push(IntervalRewriting { interval: (lo, hi), word, steps });
    }
    Ok(out)
}

/// Edge-path presentation of the nerve's fundamental group at `O`, with a
/// breadth-first spanning tree collapsed.
#[derive(Clone, Debug)]
pub struct NervePresentation {
    pub presentation: GroupPresentation,
    /// Generator of each morphism; `None` for identities and tree edges.
    pub generator_of: Vec<Option<usize>>,
    pub tree: Vec<usize>,
}

impl NervePresentation {
    pub fn edge_word(&self, f: usize) -> Word {
        self.generator_of[f].map(|g| vec![Letter::new(g)]).unwrap_or_default()
    }
}

pub fn pi1_nerve(cat: &PictureCategory) -> Result<NervePresentation> {
    let ms = &cat.morphisms;
    let n_obj = cat.objects.len();
    let mut seen = vec![false; n_obj];
    let mut in_tree = vec![false; ms.len()];
    let mut queue = VecDeque::from([cat.sink]);
    seen[cat.sink] = true;
    while let Some(o) = queue.pop_front() {
        for (f, m) in ms.iter().enumerate() {
            if m.is_identity() || (m.source != o && m.target != o) {
                continue;
            }
            let other = if m.source == o { m.target } else { m.source };
            if !seen[other] {
                seen[other] = true;
                in_tree[f] = true;
                queue.push_back(other);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvariantViolation("picture category is not connected".into()));
    }
    let mut generator_of = vec![None; ms.len()];
    let mut names = Vec::new();
    for (f, m) in ms.iter().enumerate() {
        if !m.is_identity() && !in_tree[f] {
            generator_of[f] = Some(names.len());
            names.push(format!("m{f}"));
        }
    }
    let mut np = NervePresentation {
        presentation: GroupPresentation::trivial(),
        generator_of,
        tree: (0..ms.len()).filter(|&f| in_tree[f]).collect(),
    };
    let mut rels = Vec::new();
    for f in (0..ms.len()).filter(|&f| !ms[f].is_identity()) {
        for g in (0..ms.len()).filter(|&g| !ms[g].is_identity()) {
            if let Some(h) = cat.compose(f, g) {
                let mut w = np.edge_word(f);
                w.extend(np.edge_word(g));
                w.extend(inverse_word(&np.edge_word(h)));
                rels.push(w);
            }
        }
    }
    np.presentation = GroupPresentation::new(names, rels)?;
    Ok(np)
}

/// The loop of a covering pair `[S₁, S₂]` rewritten through the object
/// `class(S₁ ∩ S₂)`.
#[derive(Clone, Debug, Serialize)]
pub struct BRewriting {
    /// `(lo, hi)` node indices of the ambient silting poset.
    pub interval: (usize, usize),
    pub intersection: Vec<ObjId>,
    pub object: usize,
    /// The morphisms `P_L` and `I_L` to `O`.
    pub upper: usize,
    pub lower: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BGenerators {
    /// Objects all of whose nonzero rigid subcategories are silting and which
    /// have exactly two morphisms to `O`.
    pub objects: Vec<usize>,
    pub rewritings: Vec<BRewriting>,
    /// Every object of `objects` is reached by some covering pair.
    pub surjective: bool,
}

impl BGenerators {
    pub fn passed(&self) -> bool {
        self.surjective && self.rewritings.iter().all(|r| r.verified)
    }
}

pub fn b_generators(cat: &PictureCategory, budget: usize) -> Result<BGenerators> {
    let model = cat.model().as_ref();
    let mut objects = Vec::new();
    let mut silts = Vec::new();
    for (k, obj) in cat.objects.iter().enumerate() {
        let silt = explore_silt_poset(obj.reduced.as_ref(), budget)?;
        let all_silting = enumerate_rigid(obj.reduced.as_ref())
            .iter()
            .filter(|r| !r.is_empty())
            .all(|r| silt.index_of(r.members()).is_some());
        if all_silting && cat.hom(k, cat.sink).len() == 2 {
            objects.push(k);
        }
        silts.push(silt);
    }

    let poset = explore_silt_poset(model, budget)?;
    let nerve = pi1_nerve(cat)?;
    let relators: HashSet<Word> = nerve.presentation.relators.iter().map(|r| canonical_relator(r)).collect();
    // e_h = u a as edge paths, witnessed by a triangle relator
    let triangle = |u: usize, a: usize, h: usize| {
        let mut w = nerve.edge_word(u);
        w.extend(nerve.edge_word(a));
        w.extend(inverse_word(&nerve.edge_word(h)));
        let c = canonical_relator(&w);
        c.is_empty() || relators.contains(&c)
    };

    let mut rewritings = Vec::new();
    for &(hi, lo) in &poset.hasse {
        let fail = |what: &str| Error::RewritingFailed(format!("[{lo},{hi}]: {what}"));
        let inter: Vec<ObjId> = poset.nodes[lo].iter().copied().filter(|x| poset.nodes[hi].contains(x)).collect();
        RigidSubcat::new(model, inter.iter().copied()).map_err(|_| fail("intersection is not rigid"))?;
        let l = cat.object_of(&inter).ok_or_else(|| fail("intersection has no object"))?;
        let u = cat.morphism(cat.root, &inter).ok_or_else(|| fail("no morphism to the intersection"))?;
        let e_lo = cat.morphism(cat.root, &poset.nodes[lo]).ok_or_else(|| fail("lower end is not a morphism"))?;
        let e_hi = cat.morphism(cat.root, &poset.nodes[hi]).ok_or_else(|| fail("upper end is not a morphism"))?;
        let through = |e: usize| -> Result<usize> {
            let gs: Vec<usize> = cat.hom(l, cat.sink).into_iter().filter(|&g| cat.compose(u, g) == Some(e)).collect();
            match gs.as_slice() {
                [g] => Ok(*g),
                _ => Err(fail(&format!("{} factorizations through {}", gs.len(), cat.object_label(l)))),
            }
        };
        let (lower, upper) = (through(e_lo)?, through(e_hi)?);
        let silt = &silts[l];
        let order_ok = match (
            silt.index_of(&cat.morphisms[upper].payload),
            silt.index_of(&cat.morphisms[lower].payload),
        ) {
            (Some(p), Some(i)) => p != i && silt.geq[p][i],
            _ => false,
        };
        // γ[S₁,S₂] = e_{S₂}⁻¹ e_{S₁}; substitute e = u a and reduce
        let via_u = |a: usize| [nerve.edge_word(u), nerve.edge_word(a)].concat();
        let lhs = [inverse_word(&via_u(upper)), via_u(lower)].concat();
        let mut rhs = inverse_word(&nerve.edge_word(upper));
        rhs.extend(nerve.edge_word(lower));
        let verified = objects.contains(&l)
            && order_ok
            && triangle(u, upper, e_hi)
            && triangle(u, lower, e_lo)
            && free_reduce(&lhs) == free_reduce(&rhs);
        rewritings.push(BRewriting { interval: (lo, hi), intersection: inter, object: l, upper, lower, verified });
    }
    let surjective = objects.iter().all(|o| rewritings.iter().any(|r| r.object == *o));
    Ok(BGenerators { objects, rewritings, surjective })
}

/// The poset presentation with the covers that share an object of `b`
/// identified: `[lo,hi] = [lo',hi']` whenever both rewrite through the same
/// object. The chain relators alone only see the shape of the poset.
pub fn with_cover_identifications(pp: &PosetPresentation, b: &BGenerators) -> Result<GroupPresentation> {
    let mut rels = pp.presentation.relators.clone();
    for (i, r) in b.rewritings.iter().enumerate() {
        if let Some(first) = b.rewritings[..i].iter().find(|s| s.object == r.object) {
            let g = |(lo, hi): (usize, usize)| {
                pp.generator(lo, hi).ok_or_else(|| Error::RewritingFailed(format!("[{lo},{hi}] is not an interval")))
            };
            rels.push(vec![Letter::new(g(r.interval)?).inverse(), Letter::new(g(first.interval)?)]);
        }
    }
    GroupPresentation::new(pp.presentation.generators.clone(), rels)
}
