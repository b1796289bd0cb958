//! Silting reduction: perpendicular categories, the reduced category
//! `Z_R / [R]`, approximation witnesses, thick closures and the validator.

use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::model::{strip, Catalogue, Conflation, ExtClass, Handle, Model, ObjId, RigidSubcat};

mod bijection;
mod bongartz;
mod thick;
mod validate;
mod witness;

pub use bijection::{double_reduction_check, rigid_bijection, BijectionReport, DoubleReductionReport};
pub use bongartz::{bongartz, Bongartz, Extremum};
pub use thick::{thick_closure, thick_equal, ThickClosure, ThickVerdict};
pub use validate::{validate_zero_auslander, AxiomResult, ValidationReport};
pub use witness::{approx_functor_f, check_gcp, ct3l, ct3r, GcpEntry, GcpReport, SearchOrder, WitnessConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `^⊥R`: objects `x` with `E(x, R) = 0`.
    Left,
    /// `R^⊥`: objects `x` with `E(R, x) = 0`.
    Right,
    Both,
}

pub fn perp(model: &dyn Model, r: &[ObjId], side: Side) -> Vec<ObjId> {
    model
        .objects()
        .iter()
        .copied()
        .filter(|&x| {
            let left = r.iter().all(|&s| model.ext_dim(x, s) == 0);
            let right = r.iter().all(|&s| model.ext_dim(s, x) == 0);
            match side {
                Side::Left => left,
                Side::Right => right,
                Side::Both => left && right,
            }
        })
        .collect()
}

/// A catalogue conflation with both ends in `set` whose middle leaves it.
pub fn extension_closure_violation(model: &dyn Model, set: &[ObjId]) -> Option<Conflation> {
    model
        .catalogue()
        .conflations
        .iter()
        .find(|c| {
            c.left().iter().chain(c.right()).all(|x| set.contains(x)) && !c.middle.iter().all(|x| set.contains(x))
        })
        .cloned()
}

/// The reduced category `C̄_R = Z_R / [R]`. Objects keep their ambient ids.
pub struct ReducedModel {
    parent: Handle,
    r: Vec<ObjId>,
    objects: Vec<ObjId>,
    hom: Vec<Vec<usize>>,
    index: Vec<Option<usize>>,
    catalogue: OnceLock<Arc<Catalogue>>,
}

impl ReducedModel {
    pub fn parent(&self) -> &Handle {
        &self.parent
    }

    pub fn reducing(&self) -> &[ObjId] {
        &self.r
    }

    fn idx(&self, x: ObjId) -> usize {
        self.index.get(x).copied().flatten().unwrap_or_else(|| panic!("object {x} is not in the reduced model"))
    }
}

pub fn reduce(model: &Handle, r: &RigidSubcat) -> Result<ReducedModel> {
    let rs = r.members().to_vec();
    let objects: Vec<ObjId> = strip(&perp(model.as_ref(), &rs, Side::Both), &rs);
    let hom = crate::par::try_map(&objects, |&x| {
        objects
            .iter()
            .map(|&y| {
                let through = if rs.is_empty() { 0 } else { model.ideal_rank(x, y, &rs)? };
                Ok(model.hom_dim(x, y) - through)
            })
            .collect::<Result<Vec<usize>>>()
    })?;
    let top = model.objects().iter().copied().max().map_or(0, |m| m + 1);
    let mut index = vec![None; top];
    for (i, &x) in objects.iter().enumerate() {
        index[x] = Some(i);
    }
    Ok(ReducedModel { parent: model.clone(), r: rs, objects, hom, index, catalogue: OnceLock::new() })
}

impl Model for ReducedModel {
    fn name(&self) -> String {
        let r: Vec<String> = self.r.iter().map(|&x| self.parent.label(x)).collect();
        format!("{}/[{}]", self.parent.name(), r.join(","))
    }

    fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    fn label(&self, x: ObjId) -> String {
        self.parent.label(x)
    }

    fn hom_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.hom[self.idx(x)][self.idx(y)]
    }

    fn ext_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.parent.ext_dim(x, y)
    }

    fn ideal_rank(&self, x: ObjId, y: ObjId, through: &[ObjId]) -> Result<usize> {
        if through.is_empty() {
            return Ok(0);
        }
        let base = if self.r.is_empty() { 0 } else { self.parent.ideal_rank(x, y, &self.r)? };
        let all: Vec<ObjId> = self.r.iter().chain(through).copied().collect();
        Ok(self.parent.ideal_rank(x, y, &all)? - base)
    }

    fn middle(&self, xi: &ExtClass) -> Result<Vec<ObjId>> {
        Ok(strip(&self.parent.middle(xi)?, &self.r))
    }

    fn catalogue(&self) -> Arc<Catalogue> {
        self.catalogue
            .get_or_init(|| {
                let parent = self.parent.catalogue();
                let inside = |xs: &[ObjId]| xs.iter().all(|x| self.index.get(*x).copied().flatten().is_some());
                let conflations = parent
                    .conflations
                    .iter()
                    .filter(|c| inside(c.left()) && inside(c.right()))
                    .map(|c| Conflation { class: c.class.clone(), middle: strip(&c.middle, &self.r) })
                    .collect();
                Arc::new(Catalogue { conflations, max_size: parent.max_size })
            })
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::interval::IntervalModel;
    use crate::model::projectives;

    fn lambda2() -> (Handle, ObjId, ObjId, ObjId) {
        let m = IntervalModel::new(2);
        let (p, n, i) = (m.id(2, 2).unwrap(), m.id(1, 2).unwrap(), m.id(1, 1).unwrap());
        (Arc::new(m), p, n, i)
    }

    #[test]
    fn perpendiculars_of_lambda2() {
        let (m, p, n, i) = lambda2();
        assert_eq!(perp(m.as_ref(), &[], Side::Both), m.objects());
        assert_eq!(crate::model::sorted(perp(m.as_ref(), &[n], Side::Both)), crate::model::sorted(vec![p, n, i]));
        assert_eq!(crate::model::sorted(perp(m.as_ref(), &[p], Side::Both)), crate::model::sorted(vec![p, n]));
    }

    #[test]
    fn reduction_at_projective_injective() {
        let (m, p, n, i) = lambda2();
        let red = reduce(&m, &RigidSubcat::new(m.as_ref(), [n]).unwrap()).unwrap();
        assert_eq!(crate::model::sorted(red.objects().to_vec()), crate::model::sorted(vec![p, i]));
        assert_eq!(red.ext_dim(i, p), 1);
        assert_eq!(red.hom_dim(p, i), 0);
        assert_eq!(projectives(&red), vec![p]);
        let xi = ExtClass { source: vec![i], target: vec![p], coords: vec![crate::exact::scalar::int(1)] };
        assert!(red.middle(&xi).unwrap().is_empty());
    }

    #[test]
    fn silting_reduction_is_trivial() {
        let (m, p, n, _) = lambda2();
        let red = reduce(&m, &RigidSubcat::new(m.as_ref(), [p, n]).unwrap()).unwrap();
        assert!(red.objects().is_empty());
    }
}
