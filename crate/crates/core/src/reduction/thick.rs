//! Thick closures by saturation over the conflation catalogue, and a
//! three-valued comparison of thick closures.

use serde::Serialize;

use super::witness::{approx_functor_f, WitnessConfig};
use crate::error::Result;
use crate::model::{is_silting, Conflation, Model, ObjId, RigidSubcat};

#[derive(Clone, Debug)]
pub struct ThickClosure {
    pub generators: Vec<ObjId>,
    pub members: Vec<ObjId>,
    /// Each added object with the conflation that forced it.
    pub log: Vec<(ObjId, Conflation)>,
    /// Whether the catalogue could be exhausted without further additions.
    pub closed: bool,
}

impl ThickClosure {
    pub fn contains(&self, x: ObjId) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// Saturates `r` under the third term of catalogued conflations whose other
/// two terms already lie in the closure.
pub fn thick_closure(model: &dyn Model, r: &[ObjId]) -> ThickClosure {
    let mut members: Vec<ObjId> = crate::model::support(r);
    let mut log = Vec::new();
    let cat = model.catalogue();
    loop {
        let inside = |xs: &[ObjId], m: &[ObjId]| xs.iter().all(|x| m.binary_search(x).is_ok());
        let mut added = false;
        for c in &cat.conflations {
            let (a, b, d) = (inside(c.left(), &members), inside(&c.middle, &members), inside(c.right(), &members));
            let third: &[ObjId] = match (a, b, d) {
                (true, true, false) => c.right(),
                (true, false, true) => &c.middle,
                (false, true, true) => c.left(),
                _ => continue,
            };
            for &x in third {
                if let Err(pos) = members.binary_search(&x) {
                    members.insert(pos, x);
                    log.push((x, c.clone()));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    ThickClosure { generators: crate::model::support(r), members, log, closed: true }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ThickVerdict {
    /// Mutual membership, or both sides silting.
    Equal { reason: String },
    /// `generator` survives the approximation functor of the other side.
    Different { generator: String, image: Vec<String> },
    Undecided,
}

impl ThickVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, ThickVerdict::Equal { .. })
    }
}

pub fn thick_equal(model: &dyn Model, r1: &RigidSubcat, r2: &RigidSubcat) -> Result<ThickVerdict> {
    if r1 == r2 {
        return Ok(ThickVerdict::Equal { reason: "identical generators".into() });
    }
    if is_silting(model, r1)? && is_silting(model, r2)? {
        return Ok(ThickVerdict::Equal { reason: "both silting".into() });
    }
    let c1 = thick_closure(model, r1.members());
    let c2 = thick_closure(model, r2.members());
    if r1.members().iter().all(|&x| c2.contains(x)) && r2.members().iter().all(|&x| c1.contains(x)) {
        return Ok(ThickVerdict::Equal { reason: "mutual membership by saturation".into() });
    }
    let cfg = WitnessConfig::default();
    for (gens, other) in [(r1, r2), (r2, r1)] {
        for &g in gens.members() {
            let image = approx_functor_f(model, other, &[g], cfg)?;
            if !image.is_empty() {
                return Ok(ThickVerdict::Different {
                    generator: model.label(g),
                    image: image.iter().map(|&y| model.label(y)).collect(),
                });
            }
        }
    }
    Ok(ThickVerdict::Undecided)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::interval::IntervalModel;

    #[test]
    fn lambda2_closures() {
        let m = IntervalModel::new(2);
        let (p, n, i) = (m.id(2, 2).unwrap(), m.id(1, 2).unwrap(), m.id(1, 1).unwrap());
        assert_eq!(thick_closure(&m, &[p]).members, vec![p]);
        let rp = RigidSubcat::new(&m, [p]).unwrap();
        let ri = RigidSubcat::new(&m, [i]).unwrap();
        assert!(matches!(thick_equal(&m, &rp, &ri).unwrap(), ThickVerdict::Different { .. }));
        let a = RigidSubcat::new(&m, [p, n]).unwrap();
        let b = RigidSubcat::new(&m, [n, i]).unwrap();
        assert!(thick_equal(&m, &a, &b).unwrap().is_equal());
    }
}
