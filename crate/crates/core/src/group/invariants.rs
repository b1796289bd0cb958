use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use super::{GroupPresentation, Word};
use crate::error::{malformed, Error, Result};
use crate::exact::snf::AbelianInvariants;

/// A small group by its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    id: usize,
}

impl FiniteGroup {
    fn from_permutations(name: String, elems: Vec<Vec<usize>>) -> Self {
        let index = |p: &Vec<usize>| elems.iter().position(|q| q == p).expect("closed under composition");
        // x * y: apply x, then y
        let mul: Vec<Vec<usize>> =
            elems.iter().map(|x| elems.iter().map(|y| index(&x.iter().map(|&i| y[i]).collect())).collect()).collect();
        let e = index(&(0..elems[0].len()).collect());
        let inv = (0..elems.len()).map(|a| (0..elems.len()).find(|&b| mul[a][b] == e).unwrap()).collect();
        FiniteGroup { name, mul, inv, id: e }
    }

    pub fn cyclic(n: usize) -> Self {
        let elems = (0..n).map(|k| (0..n).map(|i| (i + k) % n).collect()).collect();
        Self::from_permutations(format!("Z{n}"), elems)
    }

    pub fn symmetric(n: usize) -> Self {
        let mut elems = vec![vec![]];
        for k in 0..n {
            elems = elems
                .into_iter()
                .flat_map(|p: Vec<usize>| (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                }))
                .collect();
        }
        elems.sort();
        Self::from_permutations(format!("S{n}"), elems)
    }

    /// `Z<n>` for `1 <= n <= 12` or `S<n>` for `1 <= n <= 5`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || malformed(0, format!("unknown target group {s:?}"));
        let n: usize = s.get(1..).and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        match s.chars().next() {
            Some('Z') if (1..=12).contains(&n) => Ok(Self::cyclic(n)),
            Some('S') if (1..=5).contains(&n) => Ok(Self::symmetric(n)),
            _ => Err(bad()),
        }
    }

    pub fn defaults() -> Vec<Self> {
        vec![Self::cyclic(2), Self::cyclic(3), Self::symmetric(3)]
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    fn eval(&self, w: &Word, img: &[usize]) -> usize {
        w.iter().fold(self.id, |acc, l| self.mul[acc][if l.inv { self.inv[img[l.gen]] } else { img[l.gen] }])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub abelianization: AbelianInvariants,
    pub hom_counts: BTreeMap<String, u64>,
}

pub(crate) fn abelianization(p: &GroupPresentation) -> AbelianInvariants {
    AbelianInvariants::from_relations(&p.exponent_matrix(), p.generators.len())
}

/// Number of homomorphisms into `target`, by backtracking over generator
/// images with each relator checked as soon as its generators are assigned.
/// `budget` caps the number of partial assignments visited.
pub fn hom_count(p: &GroupPresentation, target: &FiniteGroup, budget: u64) -> Result<u64> {
    let n = p.generators.len();
    let used: Vec<bool> = (0..n).map(|g| p.relators.iter().any(|r| r.iter().any(|l| l.gen == g))).collect();
    let order: Vec<usize> = (0..n).filter(|&g| used[g]).collect();
    let free = (n - order.len()) as u32;
    let mut pos = vec![0; n];
    for (i, &g) in order.iter().enumerate() {
        pos[g] = i;
    }
    // relators grouped by the step at which they become checkable
    let mut due: Vec<Vec<&Word>> = vec![Vec::new(); order.len()];
    for r in &p.relators {
        let last = r.iter().map(|l| pos[l.gen]).max().expect("relators are nonempty");
        due[last].push(r);
    }
    let m = target.order();
    let visited = AtomicU64::new(0);

    fn search(
        t: &FiniteGroup,
        order: &[usize],
        due: &[Vec<&Word>],
        img: &mut Vec<usize>,
        step: usize,
        visited: &AtomicU64,
        budget: u64,
    ) -> Option<u64> {
        if visited.fetch_add(1, Ordering::Relaxed) >= budget {
            return None;
        }
        if step == order.len() {
            return Some(1);
        }
        let mut total = 0;
        for x in 0..t.order() {
            img[order[step]] = x;
            if due[step].iter().all(|r| t.eval(r, img) == t.id) {
                total += search(t, order, due, img, step + 1, visited, budget)?;
            }
        }
        Some(total)
    }

    let counted: u64 = if order.is_empty() {
        1
    } else {
        let branches = crate::par::map_range(m, |x| {
            let mut img = vec![0; n];
            img[order[0]] = x;
            if due[0].iter().all(|r| target.eval(r, &img) == target.id) {
                search(target, &order, &due, &mut img, 1, &visited, budget)
            } else {
                Some(0)
            }
        });
        branches.into_iter().sum::<Option<u64>>().ok_or_else(|| {
            Error::HomCountBudgetExceeded(format!(
                "{} relator generators into {} exceed {budget} assignments",
                order.len(),
                target.name
            ))
        })?
    };
    (m as u64)
        .checked_pow(free)
        .and_then(|f| f.checked_mul(counted))
        .ok_or_else(|| Error::HomCountBudgetExceeded(format!("count into {} overflows", target.name)))
}

pub fn invariants(p: &GroupPresentation, targets: &[FiniteGroup], budget: u64) -> Result<GroupInvariants> {
    let mut hom_counts = BTreeMap::new();
    for t in targets {
        hom_counts.insert(t.name.clone(), hom_count(p, t, budget)?);
    }
    Ok(GroupInvariants { abelianization: abelianization(p), hom_counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> GroupPresentation {
        GroupPresentation::parse_text(s).unwrap()
    }

    #[test]
    fn free_group_counts() {
        let inv = invariants(&p("gens: a\nrels:\n"), &FiniteGroup::defaults(), 1 << 20).unwrap();
        assert_eq!(inv.abelianization.describe(), "Z");
        assert_eq!(inv.hom_counts["S3"], 6);
        assert_eq!(inv.hom_counts["Z2"], 2);
    }

    #[test]
    fn known_groups() {
        let s3 = FiniteGroup::symmetric(3);
        // commuting pairs of elements of order at most two
        assert_eq!(hom_count(&p("gens: a b\nrels: a*a b*b a*b*A*B\n"), &s3, 1 << 20).unwrap(), 10);
        // homomorphisms from S3 to itself: 6 automorphisms, 3 onto order two subgroups, 1 trivial
        assert_eq!(hom_count(&p("gens: s t\nrels: s*s t*t s*t*s*t*s*t\n"), &s3, 1 << 20).unwrap(), 10);
        assert_eq!(hom_count(&p("gens: a b\nrels: a*b*A*B\n"), &FiniteGroup::cyclic(3), 1 << 20).unwrap(), 9);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
    }

    #[test]
    fn budget_error() {
        let q = p("gens: a b c d\nrels: a*b*c*d*a*b*c*d\n");
        assert!(matches!(hom_count(&q, &FiniteGroup::symmetric(5), 100), Err(Error::HomCountBudgetExceeded(_))));
    }
}
