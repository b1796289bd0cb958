//! Finite-dimensional algebras given by structure constants: Jacobson
//! radical, corner algebras and primitive idempotent decomposition.

use num_traits::{One, Zero};

use super::matrix::{independent_subset, Factorized, Matrix};
use super::poly::Poly;
use super::scalar::{int, Scalar};
use crate::error::{Error, Result};

pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimAlgebra {
    dim: usize,
    /// `table[i][j]` is the product `b_i * b_j` in basis coordinates.
    table: Vec<Vec<Vector>>,
    unit: Vector,
}

impl FinDimAlgebra {
    /// Builds the algebra and checks associativity and the unit law on all
    /// basis elements.
    pub fn new(table: Vec<Vec<Vector>>, unit: Vector) -> Result<Self> {
        let a = FinDimAlgebra { dim: unit.len(), table, unit };
        a.check_invariants()?;
        Ok(a)
    }

    pub fn new_unchecked(table: Vec<Vec<Vector>>, unit: Vector) -> Self {
        FinDimAlgebra { dim: unit.len(), table, unit }
    }

    /// `k^n` with componentwise product.
    pub fn split_semisimple(n: usize) -> Self {
        let mut table = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            row[i][i] = Scalar::one();
        }
        FinDimAlgebra::new_unchecked(table, vec![Scalar::one(); n])
    }

    /// `k[x]/(x^n)` in the basis `1, x, .., x^{n-1}`.
    pub fn truncated_polynomial(n: usize) -> Self {
        let mut table = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if i + j < n {
                    v[i + j] = Scalar::one();
                }
            }
        }
        let mut unit = vec![Scalar::zero(); n];
        unit[0] = Scalar::one();
        FinDimAlgebra::new_unchecked(table, unit)
    }

    /// Full matrix algebra `M_n(k)` restricted to the entries allowed by
    /// `mask` (must be closed under products, contain the diagonal).
    /// Basis: matrix units `E_ij` with `mask[i][j]`, in row-major order.
    pub fn matrix_units(mask: &[Vec<bool>]) -> Self {
        let n = mask.len();
        let units: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| mask[i][j]).collect();
        let d = units.len();
        let index = |i: usize, j: usize| units.iter().position(|&u| u == (i, j));
        let mut table = vec![vec![vec![Scalar::zero(); d]; d]; d];
        for (a, &(i, j)) in units.iter().enumerate() {
            for (b, &(k, l)) in units.iter().enumerate() {
                if j == k {
                    let c = index(i, l).expect("mask not closed under products");
                    table[a][b][c] = Scalar::one();
                }
            }
        }
        let mut unit = vec![Scalar::zero(); d];
        for i in 0..n {
            unit[index(i, i).expect("mask must contain the diagonal")] = Scalar::one();
        }
        FinDimAlgebra::new_unchecked(table, unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    pub fn zero_vector(&self) -> Vector {
        vec![Scalar::zero(); self.dim]
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = self.zero_vector();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    pub fn check_invariants(&self) -> Result<()> {
        let d = self.dim;
        if self.table.len() != d || self.table.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(Error::InvariantViolation("structure constant tensor has wrong shape".into()));
        }
        for i in 0..d {
            let bi = self.basis_vector(i);
            if self.mul(&self.unit, &bi) != bi || self.mul(&bi, &self.unit) != bi {
                return Err(Error::InvariantViolation(format!("unit fails on basis element {i}")));
            }
            for j in 0..d {
                let bij = &self.table[i][j];
                for k in 0..d {
                    let bk = self.basis_vector(k);
                    let left = self.mul(bij, &bk);
                    let right = self.mul(&bi, &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvariantViolation(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of left multiplication by `a`.
    pub fn left_mult(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    fn trace(m: &Matrix) -> Scalar {
        (0..m.rows()).fold(Scalar::zero(), |acc, i| acc + &m[(i, i)])
    }

    /// Jacobson radical as the radical of the trace form
    /// `(a, b) -> tr(L_{ab})` (characteristic zero).
    pub fn radical(&self) -> Vec<Vector> {
        let d = self.dim;
        let lmats: Vec<Matrix> = (0..d).map(|i| self.left_mult(&self.basis_vector(i))).collect();
        let mut gram = Matrix::zero(d, d);
        for i in 0..d {
            for j in 0..d {
                // L_{b_i b_j} = L_{b_i} L_{b_j}
                let t = Self::trace(&lmats[i].mul(&lmats[j]));
                gram[(i, j)] = t;
            }
        }
        gram.kernel()
    }

    /// Quotient by a two-sided ideal spanned by `ideal`. The quotient basis
    /// consists of the images of the standard basis vectors not in the span
    /// of the ideal, chosen greedily.
    pub fn quotient(&self, ideal: &[Vector]) -> Result<FinDimAlgebra> {
        let d = self.dim;
        let base = independent_subset(ideal, d).len();
        let std: Vec<Vector> = (0..d).map(|i| self.basis_vector(i)).collect();
        let mut all = ideal.to_vec();
        all.extend(std.iter().cloned());
        let chosen = independent_subset(&all, d);
        let ideal_part: Vec<usize> = chosen.iter().copied().filter(|&i| i < ideal.len()).collect();
        if ideal_part.len() != base {
            return Err(Error::InvariantViolation("ideal generators inconsistent".into()));
        }
        let complement: Vec<usize> = chosen.iter().copied().filter(|&i| i >= ideal.len()).map(|i| i - ideal.len()).collect();
        let mut cols: Vec<Vector> = ideal_part.iter().map(|&i| ideal[i].clone()).collect();
        cols.extend(complement.iter().map(|&i| std[i].clone()));
        let solver = Factorized::new(&Matrix::from_columns(d, &cols));
        let k = ideal_part.len();
        let coords = |v: &Vector| -> Vector {
            let x = solver.solve(v).expect("basis spans the algebra");
            x[k..].to_vec()
        };
        let q = complement.len();
        let mut table = vec![vec![Vec::new(); q]; q];
        for (a, &i) in complement.iter().enumerate() {
            for (b, &j) in complement.iter().enumerate() {
                let p = self.mul(&std[i], &std[j]);
                table[a][b] = coords(&p);
            }
        }
        let unit = coords(&self.unit);
        // closure under multiplication by the algebra
        for v in ideal {
            for s in &std {
                for w in [self.mul(v, s), self.mul(s, v)] {
                    if coords(&w).iter().any(|x| !x.is_zero()) {
                        return Err(Error::InvariantViolation("span is not a two-sided ideal".into()));
                    }
                }
            }
        }
        Ok(FinDimAlgebra::new_unchecked(table, unit))
    }

    /// The corner algebra `e A e` for an idempotent `e`, together with the
    /// embedding of its basis into `A`.
    pub fn corner(&self, e: &[Scalar]) -> (FinDimAlgebra, Vec<Vector>) {
        let d = self.dim;
        let cands: Vec<Vector> = (0..d).map(|i| self.mul(&self.mul(e, &self.basis_vector(i)), e)).collect();
        let idx = independent_subset(&cands, d);
        let basis: Vec<Vector> = idx.iter().map(|&i| cands[i].clone()).collect();
        let m = basis.len();
        if m == 0 {
            return (FinDimAlgebra::new_unchecked(vec![], vec![]), basis);
        }
        let solver = Factorized::new(&Matrix::from_columns(d, &basis));
        let coords = |v: &Vector| solver.solve(v).expect("corner closed under products");
        let mut table = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                table[i][j] = coords(&self.mul(&basis[i], &basis[j]));
            }
        }
        let unit = coords(&e.to_vec());
        (FinDimAlgebra::new_unchecked(table, unit), basis)
    }

    /// Local means `A / J(A)` is one-dimensional.
    pub fn is_local(&self) -> bool {
        self.dim >= 1 && self.dim - self.radical().len() == 1
    }

    pub fn is_idempotent(&self, e: &[Scalar]) -> bool {
        self.mul(e, e) == e
    }

    /// Minimal polynomial of `a` relative to the unit `one`.
    pub fn min_poly_rel(&self, a: &[Scalar], one: &[Scalar]) -> Poly {
        let mut powers: Vec<Vector> = vec![one.to_vec()];
        loop {
            let next = self.mul(powers.last().unwrap(), a);
            powers.push(next);
            let k = powers.len();
            let m = Matrix::from_columns(self.dim, &powers);
            let ker = m.kernel();
            if let Some(v) = ker.first() {
                debug_assert_eq!(ker.len(), 1);
                debug_assert!(!v[k - 1].is_zero());
                return Poly::new(v.clone()).monic();
            }
        }
    }

    pub fn min_poly(&self, a: &[Scalar]) -> Poly {
        let one = self.unit.clone();
        self.min_poly_rel(a, &one)
    }

    pub fn eval_poly(&self, p: &Poly, a: &[Scalar], one: &[Scalar]) -> Vector {
        let mut acc = self.zero_vector();
        for c in p.0.iter().rev() {
            acc = self.mul(&acc, a);
            for (x, u) in acc.iter_mut().zip(one) {
                *x += c * u;
            }
        }
        acc
    }

    /// Newton iteration `e <- 3e^2 - 2e^3`; converges to an idempotent when
    /// `e` is idempotent modulo a nilpotent ideal.
    pub fn lift_idempotent(&self, e: &[Scalar]) -> Vector {
        let mut e = e.to_vec();
        for _ in 0..64 {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return e;
            }
            let e3 = self.mul(&e2, &e);
            e = e2.iter().zip(&e3).map(|(a, b)| int(3) * a - int(2) * b).collect();
        }
        e
    }

    /// Complete set of orthogonal primitive idempotents summing to one.
    pub fn decompose_idempotents(&self) -> Result<Vec<Vector>> {
        if self.dim == 0 {
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        let mut stack = vec![self.unit.clone()];
        while let Some(f) = stack.pop() {
            let (corner, _) = self.corner(&f);
            if corner.is_local() {
                out.push(f);
                continue;
            }
            let e = self.split_corner(&f)?;
            let rest: Vector = f.iter().zip(&e).map(|(a, b)| a - b).collect();
            // keep the order deterministic: process `e` first
            stack.push(rest);
            stack.push(e);
        }
        Ok(out)
    }

    /// Finds an idempotent `e` of `fAf` with `e != 0, f`.
    fn split_corner(&self, f: &[Scalar]) -> Result<Vector> {
        let d = self.dim;
        let elems: Vec<Vector> = (0..d)
            .map(|i| self.mul(&self.mul(f, &self.basis_vector(i)), f))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let mut pool: Vec<Vector> = elems.clone();
        // small integer combinations of pairs and triples
        let coeffs = [int(1), int(2), int(-1), int(3)];
        for i in 0..elems.len() {
            for j in (i + 1)..elems.len() {
                for c in &coeffs {
                    pool.push(elems[i].iter().zip(&elems[j]).map(|(a, b)| a + c * b).collect());
                }
            }
        }
        for i in 0..elems.len().min(12) {
            for j in (i + 1)..elems.len().min(12) {
                for k in (j + 1)..elems.len().min(12) {
                    pool.push(
                        (0..d).map(|t| &elems[i][t] + int(2) * &elems[j][t] + int(5) * &elems[k][t]).collect(),
                    );
                }
            }
        }
        for a in &pool {
            let m = self.min_poly_rel(a, f);
            let roots = m.rational_roots();
            for r in &roots {
                let k = m.multiplicity(r);
                let g = Poly::linear(r).pow(k);
                let (h, rem) = m.divrem(&g);
                debug_assert!(rem.is_zero());
                if h.degree() == Some(0) {
                    continue;
                }
                let (one, u, _v) = g.ext_gcd(&h);
                debug_assert_eq!(one, Poly::one());
                // u*g + v*h = 1; u*g vanishes on the r-primary part
                let e = self.eval_poly(&u.mul(&g), a, f);
                let e = self.lift_idempotent(&e);
                if self.is_idempotent(&e) && e.iter().any(|x| !x.is_zero()) && e != f {
                    return Ok(e);
                }
            }
        }
        Err(Error::IdempotentSearchIncomplete(format!(
            "no splitting element found in a non-local corner of dimension {}",
            self.corner(f).0.dim()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upper_triangular() -> FinDimAlgebra {
        FinDimAlgebra::matrix_units(&[vec![true, true], vec![false, true]])
    }

    /// Brute-force oracle: the largest ideal spanned by basis vectors that is
    /// nilpotent. Valid for algebras whose radical is spanned by basis elements.
    fn basis_nilpotent_ideal(a: &FinDimAlgebra) -> Vec<usize> {
        let d = a.dim();
        let mut best = vec![];
        for mask in 0u32..(1 << d) {
            let idx: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
            let in_span = |v: &Vector| v.iter().enumerate().all(|(k, x)| x.is_zero() || idx.contains(&k));
            let ideal = idx.iter().all(|&i| {
                (0..d).all(|j| {
                    in_span(&a.mul(&a.basis_vector(i), &a.basis_vector(j)))
                        && in_span(&a.mul(&a.basis_vector(j), &a.basis_vector(i)))
                })
            });
            let nilpotent = idx.iter().all(|&i| {
                let b = a.basis_vector(i);
                let mut p = b.clone();
                for _ in 0..d {
                    p = a.mul(&p, &b);
                }
                p.iter().all(Zero::is_zero)
            });
            if ideal && nilpotent && idx.len() > best.len() {
                best = idx;
            }
        }
        best
    }

    #[test]
    fn radical_examples() {
        assert!(FinDimAlgebra::split_semisimple(2).radical().is_empty());
        let dual = FinDimAlgebra::truncated_polynomial(2);
        dual.check_invariants().unwrap();
        let r = dual.radical();
        assert_eq!(r.len(), 1);
        assert_eq!(basis_nilpotent_ideal(&dual), vec![1]);
        assert!(r[0][0].is_zero() && !r[0][1].is_zero());
        let ut = upper_triangular();
        ut.check_invariants().unwrap();
        // basis E11, E12, E22
        assert_eq!(basis_nilpotent_ideal(&ut), vec![1]);
        let r = ut.radical();
        assert_eq!(r.len(), 1);
        assert!(r[0][0].is_zero() && !r[0][1].is_zero() && r[0][2].is_zero());
    }

    #[test]
    fn radical_of_quotient_vanishes() {
        for a in [FinDimAlgebra::truncated_polynomial(3), upper_triangular()] {
            let q = a.quotient(&a.radical()).unwrap();
            q.check_invariants().unwrap();
            assert!(q.radical().is_empty());
        }
    }

    #[test]
    fn idempotents_local_and_split() {
        let local = FinDimAlgebra::truncated_polynomial(2);
        assert_eq!(local.decompose_idempotents().unwrap(), vec![local.unit().clone()]);
        let ss = FinDimAlgebra::split_semisimple(2);
        let mut es = ss.decompose_idempotents().unwrap();
        es.sort();
        assert_eq!(es, vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
    }

    #[test]
    fn idempotents_upper_triangular() {
        // End of P1 + P2 over kA2 is the upper triangular algebra
        let a = upper_triangular();
        let es = a.decompose_idempotents().unwrap();
        assert_eq!(es.len(), 2);
        let sum: Vector = (0..a.dim()).map(|k| es.iter().map(|e| e[k].clone()).sum()).collect();
        assert_eq!(&sum, a.unit());
        for (i, e) in es.iter().enumerate() {
            assert!(a.is_idempotent(e));
            assert!(a.corner(e).0.is_local());
            for (j, f) in es.iter().enumerate() {
                if i != j {
                    assert!(a.mul(e, f).iter().all(Zero::is_zero));
                }
            }
        }
    }

    #[test]
    fn full_matrix_algebra_splits() {
        let m2 = FinDimAlgebra::matrix_units(&[vec![true, true], vec![true, true]]);
        let es = m2.decompose_idempotents().unwrap();
        assert_eq!(es.len(), 2);
        for e in &es {
            assert_eq!(m2.corner(e).0.dim(), 1);
        }
    }

    #[test]
    fn broken_associativity_is_rejected() {
        let mut t = FinDimAlgebra::truncated_polynomial(2).table.clone();
        t[1][1][0] = int(1); // x^2 = 1 would still be associative; break unit instead
        t[0][1][1] = int(2);
        assert!(FinDimAlgebra::new(t, vec![int(1), int(0)]).is_err());
    }
}
