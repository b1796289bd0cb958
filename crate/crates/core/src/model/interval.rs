//! `mod Λ_n` for the linearly oriented quiver `1 -> 2 -> .. -> n`.
//!
//! Indecomposables are the interval modules `[i, j]`; the projectives are
//! `[i, n]`, the injectives `[1, j]` and `[1, n]` is projective-injective.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::{build_catalogue, Catalogue, ExtClass, Model, ObjId};
use crate::error::{Error, Result};
use crate::exact::matrix::{independent_subset, rank_of, Matrix};
use crate::exact::scalar::Scalar;

/// A representation: vector spaces `dims[v]` and maps `maps[v]: M_v -> M_{v+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl Rep {
    pub fn zero(n: usize) -> Self {
        Rep { dims: vec![0; n], maps: (0..n.saturating_sub(1)).map(|_| Matrix::zero(0, 0)).collect() }
    }

    /// The interval module supported on `i..=j` (0-based, inclusive).
    pub fn interval(n: usize, i: usize, j: usize) -> Self {
        let dims: Vec<usize> = (0..n).map(|v| usize::from(i <= v && v <= j)).collect();
        let maps = (0..n - 1)
            .map(|v| {
                let mut m = Matrix::zero(dims[v + 1], dims[v]);
                if dims[v] == 1 && dims[v + 1] == 1 {
                    m[(0, 0)] = Scalar::one();
                }
                m
            })
            .collect();
        Rep { dims, maps }
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        Rep { dims, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Rank of the composite map `M_i -> M_j` for `i <= j`.
    fn path_rank(&self, i: usize, j: usize) -> usize {
        let mut m = Matrix::identity(self.dims[i]);
        for v in i..j {
            m = self.maps[v].mul(&m);
        }
        m.rank()
    }

    /// Multiplicities of interval summands, keyed by 0-based `(i, j)`.
    pub fn decompose(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dims.len();
        let r = |i: isize, j: isize| -> isize {
            if i < 0 || j >= n as isize || i > j {
                0
            } else {
                self.path_rank(i as usize, j as usize) as isize
            }
        };
        let mut out = Vec::new();
        for i in 0..n as isize {
            for j in i..n as isize {
                let m = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1);
                debug_assert!(m >= 0);
                if m > 0 {
                    out.push((i as usize, j as usize, m as usize));
                }
            }
        }
        out
    }
}

/// Layout of `⊕_v Hom(M_v, N_v)` as a flat coordinate space.
struct VertexMaps {
    offsets: Vec<usize>,
    total: usize,
}

impl VertexMaps {
    fn new(m: &Rep, n: &Rep) -> Self {
        let mut offsets = Vec::new();
        let mut total = 0;
        for v in 0..m.dims.len() {
            offsets.push(total);
            total += n.dims[v] * m.dims[v];
        }
        VertexMaps { offsets, total }
    }

    fn unpack(&self, m: &Rep, n: &Rep, x: &[Scalar]) -> Vec<Matrix> {
        (0..m.dims.len())
            .map(|v| {
                let mut a = Matrix::zero(n.dims[v], m.dims[v]);
                for r in 0..n.dims[v] {
                    for c in 0..m.dims[v] {
                        a[(r, c)] = x[self.offsets[v] + r * m.dims[v] + c].clone();
                    }
                }
                a
            })
            .collect()
    }

    fn pack(&self, mats: &[Matrix]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.total);
        for a in mats {
            for r in 0..a.rows() {
                out.extend_from_slice(a.row(r));
            }
        }
        out
    }
}

/// The map `δ(φ)_v = N_v φ_v - φ_{v+1} M_v` whose kernel is `Hom(M, N)` and
/// whose cokernel is `Ext¹(M, N)`.
fn delta(m: &Rep, n: &Rep) -> (Matrix, VertexMaps, VertexMaps) {
    let src = VertexMaps::new(m, n);
    let arrows = m.dims.len() - 1;
    let mut offs = Vec::new();
    let mut total = 0;
    for v in 0..arrows {
        offs.push(total);
        total += n.dims[v + 1] * m.dims[v];
    }
    let tgt = VertexMaps { offsets: offs, total };
    let mut cols = Vec::with_capacity(src.total);
    for k in 0..src.total {
        let mut e = vec![Scalar::zero(); src.total];
        e[k] = Scalar::one();
        let phi = src.unpack(m, n, &e);
        let out: Vec<Matrix> = (0..arrows).map(|v| n.maps[v].mul(&phi[v]).sub(&phi[v + 1].mul(&m.maps[v]))).collect();
        cols.push(tgt.pack(&out));
    }
    (Matrix::from_columns(tgt.total, &cols), src, tgt)
}

struct PairData {
    hom: Vec<Vec<Matrix>>,
    ext_reps: Vec<Vec<Scalar>>,
}

fn pair_data(m: &Rep, n: &Rep) -> PairData {
    let (d, src, tgt) = delta(m, n);
    let hom = d.kernel().iter().map(|x| src.unpack(m, n, x)).collect();
    let image: Vec<Vec<Scalar>> = (0..d.cols()).map(|c| d.column(c)).collect();
    let mut family = image.clone();
    family.extend((0..tgt.total).map(|k| {
        let mut e = vec![Scalar::zero(); tgt.total];
        e[k] = Scalar::one();
        e
    }));
    let chosen = independent_subset(&family, tgt.total);
    let ext_reps = chosen.into_iter().filter(|&i| i >= image.len()).map(|i| family[i].clone()).collect();
    PairData { hom, ext_reps }
}

pub struct IntervalModel {
    n: usize,
    intervals: Vec<(usize, usize)>,
    reps: Vec<Rep>,
    objects: Vec<ObjId>,
    data: Vec<Vec<PairData>>,
    middles: Mutex<HashMap<ExtClass, Vec<ObjId>>>,
    catalogue: OnceLock<Arc<Catalogue>>,
}

impl IntervalModel {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Λ_n needs n >= 1");
        let intervals: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let reps: Vec<Rep> = intervals.iter().map(|&(i, j)| Rep::interval(n, i, j)).collect();
        let data = crate::par::map(&reps, |m| reps.iter().map(|x| pair_data(m, x)).collect());
        IntervalModel {
            n,
            objects: (0..intervals.len()).collect(),
            intervals,
            reps,
            data,
            middles: Mutex::new(HashMap::new()),
            catalogue: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Id of the interval `[i, j]` (1-based).
    pub fn id(&self, i: usize, j: usize) -> Option<ObjId> {
        self.intervals.iter().position(|&iv| iv == (i - 1, j - 1))
    }

    pub fn rep(&self, x: ObjId) -> &Rep {
        &self.reps[x]
    }

    fn sum(&self, xs: &[ObjId]) -> Rep {
        xs.iter().fold(Rep::zero(self.n), |acc, &x| acc.direct_sum(&self.reps[x]))
    }

    /// Decomposes an arbitrary representation into registered intervals.
    pub fn decompose(&self, m: &Rep) -> Vec<ObjId> {
        let mut out = Vec::new();
        for (i, j, k) in m.decompose() {
            let id = self.intervals.iter().position(|&iv| iv == (i, j)).unwrap();
            out.extend(std::iter::repeat_n(id, k));
        }
        out
    }

    fn compute_middle(&self, xi: &ExtClass) -> Result<Vec<ObjId>> {
        let c = self.sum(&xi.source);
        let a = self.sum(&xi.target);
        if xi.coords.len() != super::ext_dim_multi(self, &xi.source, &xi.target) {
            return Err(Error::InvariantViolation(format!("extension class has {} coordinates", xi.coords.len())));
        }
        // assemble ξ_v: C_v -> A_{v+1} blockwise from the summand representatives
        let arrows = self.n - 1;
        let mut xis: Vec<Matrix> = (0..arrows).map(|v| Matrix::zero(a.dims[v + 1], c.dims[v])).collect();
        let mut off = 0;
        let mut c_off = vec![0usize; self.n];
        for &ck in &xi.source {
            let mut a_off = vec![0usize; self.n];
            for &al in &xi.target {
                let pd = &self.data[ck][al];
                let (cr, ar) = (&self.reps[ck], &self.reps[al]);
                let mut block = vec![Scalar::zero(); pd.ext_reps.first().map_or(0, Vec::len)];
                for (t, rep) in pd.ext_reps.iter().enumerate() {
                    let s = &xi.coords[off + t];
                    if !s.is_zero() {
                        for (b, r) in block.iter_mut().zip(rep) {
                            *b += s * r;
                        }
                    }
                }
                off += pd.ext_reps.len();
                // unpack block into per-arrow matrices A_{v+1} x C_v
                let mut pos = 0;
                for v in 0..arrows {
                    for r in 0..ar.dims[v + 1] {
                        for col in 0..cr.dims[v] {
                            if !block.is_empty() {
                                xis[v][(a_off[v + 1] + r, c_off[v] + col)] = block[pos].clone();
                            }
                            pos += 1;
                        }
                    }
                }
                for v in 0..self.n {
                    a_off[v] += ar.dims[v];
                }
            }
            for v in 0..self.n {
                c_off[v] += self.reps[ck].dims[v];
            }
        }
        let dims: Vec<usize> = (0..self.n).map(|v| a.dims[v] + c.dims[v]).collect();
        let maps = (0..arrows)
            .map(|v| {
                let mut m = Matrix::zero(dims[v + 1], dims[v]);
                m.set_block(0, 0, &a.maps[v]);
                m.set_block(0, a.dims[v], &xis[v]);
                m.set_block(a.dims[v + 1], a.dims[v], &c.maps[v]);
                m
            })
            .collect();
        Ok(self.decompose(&Rep { dims, maps }))
    }
}

impl Model for IntervalModel {
    fn name(&self) -> String {
        format!("mod(Λ{})", self.n)
    }

    fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    fn label(&self, x: ObjId) -> String {
        let (i, j) = self.intervals[x];
        format!("[{},{}]", i + 1, j + 1)
    }

    fn hom_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.data[x][y].hom.len()
    }

    fn ext_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.data[x][y].ext_reps.len()
    }

    fn ideal_rank(&self, x: ObjId, y: ObjId, through: &[ObjId]) -> Result<usize> {
        let (rx, ry) = (&self.reps[x], &self.reps[y]);
        let layout = VertexMaps::new(rx, ry);
        let mut comps = Vec::new();
        for &r in through {
            for f in &self.data[x][r].hom {
                for g in &self.data[r][y].hom {
                    let gf: Vec<Matrix> = g.iter().zip(f).map(|(a, b)| a.mul(b)).collect();
                    comps.push(layout.pack(&gf));
                }
            }
        }
        Ok(rank_of(&comps, layout.total))
    }

    fn middle(&self, xi: &ExtClass) -> Result<Vec<ObjId>> {
        if let Some(m) = self.middles.lock().unwrap().get(xi) {
            return Ok(m.clone());
        }
        let mut m = self.compute_middle(xi)?;
        m.sort_unstable();
        self.middles.lock().unwrap().insert(xi.clone(), m.clone());
        Ok(m)
    }

    fn catalogue(&self) -> Arc<Catalogue> {
        self.catalogue
            .get_or_init(|| Arc::new(build_catalogue(self, 2).expect("interval middles are always available")))
            .clone()
    }

    fn is_projective(&self, x: ObjId) -> bool {
        self.intervals[x].1 == self.n - 1
    }

    fn is_injective(&self, x: ObjId) -> bool {
        self.intervals[x].0 == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;

    #[test]
    fn rank_formula_recovers_sums() {
        let n = 3;
        let m = Rep::interval(n, 0, 1).direct_sum(&Rep::interval(n, 1, 2)).direct_sum(&Rep::interval(n, 1, 2));
        assert_eq!(m.decompose(), vec![(0, 1, 1), (1, 2, 2)]);
    }

    #[test]
    fn lambda_two_tables() {
        let m = IntervalModel::new(2);
        let (i, n, p) = (m.id(1, 1).unwrap(), m.id(1, 2).unwrap(), m.id(2, 2).unwrap());
        for x in [i, n, p] {
            for y in [i, n, p] {
                let want = usize::from(x == i && y == p);
                assert_eq!(m.ext_dim(x, y), want, "E({}, {})", m.label(x), m.label(y));
            }
        }
        let xi = ExtClass { source: vec![i], target: vec![p], coords: vec![int(1)] };
        assert_eq!(m.middle(&xi).unwrap(), vec![n]);
        let split = ExtClass { source: vec![i], target: vec![p], coords: vec![int(0)] };
        assert_eq!(m.middle(&split).unwrap(), vec![i, p]);
        assert!(m.is_projective(n) && m.is_injective(n));
        assert_eq!(m.ideal_rank(p, i, &[n]).unwrap(), 0);
        assert_eq!(m.ideal_rank(p, n, &[n]).unwrap(), 1);
    }
}
