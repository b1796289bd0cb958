//! The bijection `rigid_R(C) <-> rigid(C̄_R)` and its restriction to silting
//! posets, plus coherence of iterated reductions.

use std::sync::Arc;

use serde::Serialize;

use super::bongartz::{bongartz, Extremum};
use super::{reduce, ReducedModel};
use crate::error::Result;
use crate::model::{
    enumerate_rigid, explore_silt_poset, injectives, projectives, strip, Handle, Model, ObjId, RigidSubcat, SiltingPoset,
};

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    /// `(Q, Q \ R)` for every rigid `Q ⊇ R`.
    pub pairs: Vec<(Vec<ObjId>, Vec<ObjId>)>,
    pub roundtrip: bool,
    /// The forward map hits every rigid subcategory of the reduced model.
    pub onto: bool,
    /// `silt_R(C) ≅ silt(C̄_R)` against an independent exploration.
    pub poset_iso: bool,
    /// Maximal and minimal completions map to the projectives and injectives.
    pub extremes: bool,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.roundtrip && self.onto && self.poset_iso && self.extremes
    }
}

pub fn rigid_bijection(
    model: &dyn Model,
    poset: &SiltingPoset,
    r: &RigidSubcat,
    reduced: &ReducedModel,
    budget: usize,
) -> Result<BijectionReport> {
    let rs = r.members();
    let above: Vec<RigidSubcat> = enumerate_rigid(model).into_iter().filter(|q| r.is_subset(q)).collect();
    let mut pairs = Vec::new();
    let mut roundtrip = true;
    for q in &above {
        let image = strip(q.members(), rs);
        let back = RigidSubcat::new(model, image.iter().copied().chain(rs.iter().copied()))?;
        roundtrip &= &back == q && image.iter().all(|x| reduced.objects().contains(x));
        pairs.push((q.members().to_vec(), image));
    }
    let mut images: Vec<Vec<ObjId>> = pairs.iter().map(|(_, i)| i.clone()).collect();
    images.sort();
    let mut reduced_rigid: Vec<Vec<ObjId>> = enumerate_rigid(reduced).iter().map(|q| q.members().to_vec()).collect();
    reduced_rigid.sort();
    let onto = images == reduced_rigid;

    let red_poset = explore_silt_poset(reduced, budget)?;
    let mine = poset.containing(rs);
    let mapped: Vec<Option<usize>> = mine.iter().map(|&i| red_poset.index_of(&strip(&poset.nodes[i], rs))).collect();
    let poset_iso = mine.len() == red_poset.len()
        && mapped.iter().all(Option::is_some)
        && mine.iter().zip(&mapped).all(|(&i, fi)| {
            mine.iter().zip(&mapped).all(|(&j, fj)| poset.geq[i][j] == red_poset.geq[fi.unwrap()][fj.unwrap()])
        });

    let hi = bongartz(model, poset, r, Extremum::Max)?;
    let lo = bongartz(model, poset, r, Extremum::Min)?;
    let extremes = strip(hi.silting.members(), rs) == projectives(reduced)
        && strip(lo.silting.members(), rs) == injectives(reduced);
    Ok(BijectionReport { pairs, roundtrip, onto, poset_iso, extremes })
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleReductionReport {
    pub objects: bool,
    pub hom: bool,
    pub ext: bool,
    pub posets: bool,
}

impl DoubleReductionReport {
    pub fn passed(&self) -> bool {
        self.objects && self.hom && self.ext && self.posets
    }
}

/// Compares `reduce(reduce(C, R), Q \ R)` with `reduce(C, Q)` for `R ⊆ Q`.
pub fn double_reduction_check(model: &Handle, r: &RigidSubcat, q: &RigidSubcat, budget: usize) -> Result<DoubleReductionReport> {
    let first: Handle = Arc::new(reduce(model, r)?);
    let rest = RigidSubcat::new(first.as_ref(), strip(q.members(), r.members()))?;
    let twice = reduce(&first, &rest)?;
    let once = reduce(model, q)?;
    let objects = twice.objects() == once.objects();
    let table = |m: &dyn Model, f: &dyn Fn(&dyn Model, ObjId, ObjId) -> usize| -> Vec<usize> {
        m.objects().iter().flat_map(|&x| m.objects().iter().map(move |&y| (x, y))).map(|(x, y)| f(m, x, y)).collect()
    };
    let hom = objects && table(&twice, &|m, x, y| m.hom_dim(x, y)) == table(&once, &|m, x, y| m.hom_dim(x, y));
    let ext = objects && table(&twice, &|m, x, y| m.ext_dim(x, y)) == table(&once, &|m, x, y| m.ext_dim(x, y));
    let (p1, p2) = (explore_silt_poset(&twice, budget)?, explore_silt_poset(&once, budget)?);
    let posets = p1.nodes == p2.nodes && p1.geq == p2.geq;
    Ok(DoubleReductionReport { objects, hom, ext, posets })
}
