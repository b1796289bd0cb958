//! Univariate polynomials over the rationals, just enough to split minimal
//! polynomials into coprime factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::Scalar;

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Scalar>);

impl Poly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn one() -> Self {
        Poly(vec![Scalar::one()])
    }

    /// `x - root`
    pub fn linear(root: &Scalar) -> Self {
        Poly(vec![-root.clone(), Scalar::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.0.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        Poly(self.0.iter().map(|c| c * &l).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Scalar::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Scalar::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut c = vec![Scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() < d.0.len() {
            return (Poly(vec![]), self.clone());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        let inv = d.lead().recip();
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, c) in d.0.iter().enumerate() {
                r[i + j] -= &f * c;
            }
            q[i] = f;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    /// Returns `(g, u, v)` with `u*self + v*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly(vec![]));
        let (mut t0, mut t1) = (Poly(vec![]), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = Poly(vec![r0.lead().recip()]);
        (r0.monic(), s0.mul(&l), t0.mul(&l))
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let mut p = self.clone();
        if p.0[0].is_zero() {
            roots.push(Scalar::zero());
            let k = p.0.iter().position(|c| !c.is_zero()).unwrap();
            p = Poly::new(p.0[k..].to_vec());
        }
        // integer coefficients
        let den = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.0.iter().map(|c| (c * Scalar::from_integer(den.clone())).to_integer()).collect();
        let (Some(a0), Some(an)) = (ints.first(), ints.last()) else { return roots };
        let (Some(ps), Some(qs)) = (divisors(a0), divisors(an)) else { return roots };
        for q in &qs {
            for pp in &ps {
                for sign in [1i64, -1] {
                    let cand = Scalar::new(pp * BigInt::from(sign), q.clone());
                    if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Multiplicity of `root` as a root.
    pub fn multiplicity(&self, root: &Scalar) -> usize {
        let lin = Poly::linear(root);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() || p.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut d = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            d.push(BigInt::from(i));
            if i * i != n {
                d.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    d.sort();
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{frac, int};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn roots_and_multiplicity() {
        // (x-1)^2 (2x+1) x
        let f = p(&[0, 1, -2, 1]).mul(&p(&[1, 2]));
        assert_eq!(f.rational_roots(), vec![frac(-1, 2), int(0), int(1)]);
        assert_eq!(f.multiplicity(&int(1)), 2);
        assert!(p(&[1, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn bezout() {
        let a = p(&[-1, 1]).pow(2);
        let b = p(&[2, 1]);
        let (g, u, v) = a.ext_gcd(&b);
        assert_eq!(g, Poly::one());
        assert_eq!(u.mul(&a).add(&v.mul(&b)), Poly::one());
    }
}
