//! Silting subcategories: the rank test, mutation and the silting poset.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{is_rigid_set, projectives, injectives, rank, Conflation, ExtClass, Model, ObjId, RigidSubcat};
use crate::error::{Error, Result};

pub fn is_silting(model: &dyn Model, r: &RigidSubcat) -> Result<bool> {
    Ok(r.len() == rank(model)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Towards smaller silting subcategories.
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub result: RigidSubcat,
    pub removed: ObjId,
    pub added: ObjId,
    pub direction: Direction,
    /// `x -> m -> y` (left) or `y -> m -> x` (right) with `m` in `add(S \ x)`.
    pub exchange: Option<Conflation>,
}

/// Indecomposables `y != x` outside `S` completing `S \ {x}` to a rigid set.
fn complements(model: &dyn Model, s: &RigidSubcat, x: ObjId) -> Vec<ObjId> {
    let rest: Vec<ObjId> = s.members().iter().copied().filter(|&m| m != x).collect();
    model
        .objects()
        .iter()
        .copied()
        .filter(|&y| !s.contains(y) && model.ext_dim(y, y) == 0)
        .filter(|&y| rest.iter().all(|&r| model.ext_dim(r, y) == 0 && model.ext_dim(y, r) == 0))
        .collect()
}

pub fn mutate(model: &dyn Model, s: &RigidSubcat, x: ObjId, direction: Direction) -> Result<Mutation> {
    if !s.contains(x) {
        return Err(Error::MutationUndefined(format!("{} is not a member of {}", model.label(x), s.describe(model))));
    }
    if !is_silting(model, s)? {
        return Err(Error::MutationUndefined(format!("{} is not silting", s.describe(model))));
    }
    let fits = |y: ObjId| match direction {
        Direction::Left => model.ext_dim(x, y) == 0,
        Direction::Right => model.ext_dim(y, x) == 0,
    };
    let cands: Vec<ObjId> = complements(model, s, x).into_iter().filter(|&y| fits(y)).collect();
    let y = match cands.as_slice() {
        [] => {
            return Err(Error::MutationUndefined(format!(
                "no {direction:?} exchange partner for {} in {}",
                model.label(x),
                s.describe(model)
            )))
        }
        [y] => *y,
        _ => {
            return Err(Error::InvariantViolation(format!(
                "{} has several {direction:?} exchange partners in {}",
                model.label(x),
                s.describe(model)
            )))
        }
    };
    let rest: Vec<ObjId> = s.members().iter().copied().filter(|&m| m != x).collect();
    let result = RigidSubcat::new(model, rest.iter().copied().chain([y]))?;
    let (c, a) = match direction {
        Direction::Left => (y, x),
        Direction::Right => (x, y),
    };
    let mut exchange = None;
    for coords in model.candidate_classes(&[c], &[a]) {
        let class = ExtClass { source: vec![c], target: vec![a], coords };
        if let Ok(middle) = model.middle(&class) {
            if middle.iter().all(|m| rest.contains(m)) {
                exchange = Some(Conflation { class, middle });
                break;
            }
        }
    }
    Ok(Mutation { result, removed: x, added: y, direction, exchange })
}

#[derive(Clone, Debug, Serialize)]
pub struct SiltingPoset {
    pub nodes: Vec<Vec<ObjId>>,
    /// `geq[i][j]` iff `nodes[i] >= nodes[j]`, i.e. `E(s, s') = 0`.
    pub geq: Vec<Vec<bool>>,
    /// Covering pairs `(upper, lower)`.
    pub hasse: Vec<(usize, usize)>,
    pub max: usize,
    pub min: usize,
    pub complete: bool,
}

impl SiltingPoset {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, members: &[ObjId]) -> Option<usize> {
        self.nodes.iter().position(|n| n == members)
    }

    /// Nodes containing every element of `r`.
    pub fn containing(&self, r: &[ObjId]) -> Vec<usize> {
        (0..self.len()).filter(|&i| r.iter().all(|x| self.nodes[i].contains(x))).collect()
    }

    /// Builds the order data for a fixed node list.
    pub fn from_nodes(model: &dyn Model, mut nodes: Vec<Vec<ObjId>>, complete: bool) -> Result<Self> {
        nodes.sort();
        nodes.dedup();
        let n = nodes.len();
        let geq: Vec<Vec<bool>> = crate::par::map_range(n, |i| {
            (0..n).map(|j| nodes[i].iter().all(|&s| nodes[j].iter().all(|&t| model.ext_dim(s, t) == 0))).collect()
        });
        for i in 0..n {
            for j in 0..n {
                if i != j && geq[i][j] && geq[j][i] {
                    return Err(Error::InvariantViolation("silting order is not antisymmetric".into()));
                }
            }
        }
        let mut hasse = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && geq[i][j] && !(0..n).any(|k| k != i && k != j && geq[i][k] && geq[k][j]) {
                    hasse.push((i, j));
                }
            }
        }
        let maxima: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| geq[i][j])).collect();
        let minima: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| geq[j][i])).collect();
        let (max, min) = match (maxima.as_slice(), minima.as_slice()) {
            ([a], [b]) => (*a, *b),
            _ if !complete => {
                let top = (0..n).find(|&i| (0..n).all(|j| j == i || !geq[j][i])).unwrap_or(0);
                let bottom = (0..n).find(|&i| (0..n).all(|j| j == i || !geq[i][j])).unwrap_or(0);
                (top, bottom)
            }
            _ => return Err(Error::NonUniqueExtremum(format!("{} maxima, {} minima", maxima.len(), minima.len()))),
        };
        Ok(SiltingPoset { nodes, geq, hasse, max, min, complete })
    }

    /// `(lower, upper)` pairs with `lower <= upper`, including degenerate ones.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for lo in 0..self.len() {
            for hi in 0..self.len() {
                if self.geq[hi][lo] {
                    out.push((lo, hi));
                }
            }
        }
        out
    }

    /// Elements of the closed interval `[lo, hi]`.
    pub fn interval_members(&self, lo: usize, hi: usize) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.geq[hi][k] && self.geq[k][lo]).collect()
    }

    pub fn to_dot(&self, model: &dyn Model) -> String {
        let mut s = String::from("digraph silt {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let label: Vec<String> = n.iter().map(|&x| model.label(x)).collect();
            let mut attrs = format!("label=\"{}\"", label.join(" + "));
            if i == self.max {
                attrs += ", shape=box";
            }
            if i == self.min {
                attrs += ", shape=box, style=dashed";
            }
            s += &format!("  n{i} [{attrs}];\n");
        }
        for &(a, b) in &self.hasse {
            s += &format!("  n{a} -> n{b};\n");
        }
        s += "}\n";
        s
    }
}

/// Breadth-first mutation closure from the projectives.
///
/// Returns the explored poset and whether the closure finished within
/// `budget` nodes.
pub fn explore_partial(model: &dyn Model, budget: usize) -> Result<SiltingPoset> {
    let start = projectives(model);
    let r = rank(model)?;
    if start.len() != r || !is_rigid_set(model, &start) {
        return Err(Error::InvariantViolation("projectives are not silting".into()));
    }
    let mut seen: BTreeSet<Vec<ObjId>> = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    let mut complete = true;
    while let Some(node) = queue.pop_front() {
        let s = RigidSubcat::new(model, node.iter().copied())?;
        let mut next: BTreeMap<Vec<ObjId>, ()> = BTreeMap::new();
        for &x in &node {
            for y in complements(model, &s, x) {
                let mut m: Vec<ObjId> = node.iter().copied().filter(|&z| z != x).chain([y]).collect();
                m.sort_unstable();
                next.insert(m, ());
            }
        }
        for m in next.into_keys() {
            if seen.contains(&m) {
                continue;
            }
            if seen.len() >= budget {
                complete = false;
                break;
            }
            seen.insert(m.clone());
            queue.push_back(m);
        }
        if !complete {
            break;
        }
    }
    let nodes: Vec<Vec<ObjId>> = seen.into_iter().collect();
    for n in &nodes {
        let maximal = model
            .objects()
            .iter()
            .all(|&z| n.contains(&z) || !is_rigid_set(model, &n.iter().copied().chain([z]).collect::<Vec<_>>()));
        if !maximal {
            return Err(Error::InvariantViolation(format!("silting node {n:?} is not maximal rigid")));
        }
    }
    let poset = SiltingPoset::from_nodes(model, nodes, complete)?;
    if complete {
        if poset.nodes[poset.max] != projectives(model) {
            return Err(Error::InvariantViolation("maximum is not the projectives".into()));
        }
        if poset.nodes[poset.min] != injectives(model) {
            return Err(Error::InvariantViolation("minimum is not the injectives".into()));
        }
    }
    Ok(poset)
}

pub fn explore_silt_poset(model: &dyn Model, budget: usize) -> Result<SiltingPoset> {
    let p = explore_partial(model, budget)?;
    if !p.complete {
        return Err(Error::BudgetExceeded(format!("silting poset exceeds {budget} nodes")));
    }
    Ok(p)
}
