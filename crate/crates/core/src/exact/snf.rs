//! Smith normal form of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Nonzero invariant factors `d_1 | d_2 | ...` (all positive) of an integer
/// matrix given by rows with `cols` columns.
pub fn invariant_factors(rows: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols);
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let nr = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr && t < cols {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pr, pc)) = (t..nr)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !m[r][c].is_zero())
            .min_by(|&(r1, c1), &(r2, c2)| m[r1][c1].abs().cmp(&m[r2][c2].abs()))
        else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let mut dirty = false;
        for r in (t + 1)..nr {
            let q = m[r][t].div_floor(&m[t][t]);
            if !q.is_zero() {
                for c in t..cols {
                    let v = &q * &m[t][c];
                    m[r][c] -= v;
                }
            }
            dirty |= !m[r][t].is_zero();
        }
        for c in (t + 1)..cols {
            let q = m[t][c].div_floor(&m[t][t]);
            if !q.is_zero() {
                for r in t..nr {
                    let v = &q * &m[r][t];
                    m[r][c] -= v;
                }
            }
            dirty |= !m[t][c].is_zero();
        }
        if dirty {
            continue;
        }
        // divisibility: fold a non-multiple entry into the pivot row
        let p = m[t][t].clone();
        if let Some(r) = ((t + 1)..nr).find(|&r| ((t + 1)..cols).any(|c| !(&m[r][c] % &p).is_zero())) {
            for c in t..cols {
                let v = m[r][c].clone();
                m[t][c] += v;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Abelian group `Z^free ⊕ ⊕ Z/d` presented by `cols` generators and the
/// given relation rows.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl AbelianInvariants {
    pub fn from_relations(rows: &[Vec<i64>], cols: usize) -> Self {
        let d = invariant_factors(rows, cols);
        let torsion = d.iter().filter(|x| !x.is_one()).map(|x| x.to_string()).collect();
        AbelianInvariants { free_rank: cols - d.len(), torsion }
    }

    /// `Z^2 + Z/2` style rendering; `0` for the trivial group.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
