//! Maximal and minimal Bongartz completions.

use super::witness::{ct3l, ct3r, WitnessConfig};
use crate::error::{Error, Result};
use crate::model::{injectives, projectives, Conflation, Model, RigidSubcat, SiltingPoset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

#[derive(Clone, Debug)]
pub struct Bongartz {
    pub silting: RigidSubcat,
    /// Left approximations `p -> b -> c` of the projectives (max) or right
    /// approximations `a -> b -> i` of the injectives (min); the middles
    /// together with `R` generate the completion.
    pub witnesses: Vec<Conflation>,
}

/// The largest (or smallest) silting subcategory containing `r`, read off the
/// poset and confirmed by approximation conflations.
pub fn bongartz(model: &dyn Model, poset: &SiltingPoset, r: &RigidSubcat, which: Extremum) -> Result<Bongartz> {
    let above = poset.containing(r.members());
    if above.is_empty() {
        return Err(Error::NoSiltingExtension(r.describe(model)));
    }
    let ext: Vec<usize> = above
        .iter()
        .copied()
        .filter(|&i| {
            above.iter().all(|&j| match which {
                Extremum::Max => poset.geq[i][j],
                Extremum::Min => poset.geq[j][i],
            })
        })
        .collect();
    let node = match ext.as_slice() {
        [i] => *i,
        _ => return Err(Error::NonUniqueExtremum(format!("{} completions of {}", ext.len(), r.describe(model)))),
    };
    let silting = RigidSubcat::new(model, poset.nodes[node].iter().copied())?;
    let cfg = WitnessConfig::default();
    let witnesses: Vec<Conflation> = match which {
        Extremum::Max => projectives(model).into_iter().map(|p| ct3l(model, r, p, cfg)).collect::<Result<_>>()?,
        Extremum::Min => injectives(model).into_iter().map(|i| ct3r(model, r, i, cfg)).collect::<Result<_>>()?,
    };
    let generated: Vec<usize> =
        crate::model::support(&r.members().iter().copied().chain(witnesses.iter().flat_map(|w| w.middle.iter().copied())).collect::<Vec<_>>());
    if generated != silting.members() {
        return Err(Error::InvariantViolation(format!(
            "approximations generate {:?}, poset completion is {}",
            generated,
            silting.describe(model)
        )));
    }
    Ok(Bongartz { silting, witnesses })
}
