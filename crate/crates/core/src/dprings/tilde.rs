//! Elements of S̃ = k[u]/u^p.

use crate::gf::{FieldElem, GaloisField};

/// Dense coefficient vector of `1, u, …, u^{p-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TildeSElem(pub Vec<FieldElem>);

impl TildeSElem {
    pub fn zero(p: usize) -> Self {
        TildeSElem(vec![FieldElem::ZERO; p])
    }

    pub fn constant(p: usize, c: FieldElem) -> Self {
        let mut v = Self::zero(p);
        v.0[0] = c;
        v
    }

    pub fn one(f: &GaloisField) -> Self {
        Self::constant(f.p() as usize, f.one())
    }

    /// `c·u^i`, zero when `i ≥ p`.
    pub fn monomial(p: usize, i: usize, c: FieldElem) -> Self {
        let mut v = Self::zero(p);
        if i < p {
            v.0[i] = c;
        }
        v
    }

    pub fn u_pow(f: &GaloisField, i: usize) -> Self {
        Self::monomial(f.p() as usize, i, f.one())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.0.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn constant_term(&self) -> FieldElem {
        self.0[0]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// u-adic valuation, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.0[0].is_zero()
    }

    /// Membership in `Fil^n S̃ = u^{en} S̃`.
    pub fn in_fil(&self, n: usize, e: usize) -> bool {
        self.0.iter().take(n * e).all(|x| x.is_zero())
    }

    pub fn add(&self, f: &GaloisField, o: &Self) -> Self {
        TildeSElem(self.0.iter().zip(&o.0).map(|(&a, &b)| f.add(a, b)).collect())
    }

    pub fn sub(&self, f: &GaloisField, o: &Self) -> Self {
        TildeSElem(self.0.iter().zip(&o.0).map(|(&a, &b)| f.sub(a, b)).collect())
    }

    pub fn neg(&self, f: &GaloisField) -> Self {
        TildeSElem(self.0.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn scale(&self, f: &GaloisField, c: FieldElem) -> Self {
        TildeSElem(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &GaloisField, o: &Self) -> Self {
        let p = self.0.len();
        let mut out = vec![f.zero(); p];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.0.iter().take(p - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        TildeSElem(out)
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: usize) -> Self {
        let p = self.0.len();
        let mut out = vec![FieldElem::ZERO; p];
        if k < p {
            out[k..].copy_from_slice(&self.0[..p - k]);
        }
        TildeSElem(out)
    }

    /// Power-series inverse of a unit.
    pub fn inv(&self, f: &GaloisField) -> Option<Self> {
        let a0_inv = f.inv(self.0[0])?;
        let p = self.0.len();
        let mut out = vec![f.zero(); p];
        out[0] = a0_inv;
        for n in 1..p {
            let mut acc = f.zero();
            for k in 1..=n {
                acc = f.add(acc, f.mul(self.0[k], out[n - k]));
            }
            out[n] = f.neg(f.mul(acc, a0_inv));
        }
        Some(TildeSElem(out))
    }

    /// Some `q` with `q·a = self`, when `v(a) ≤ v(self)`; top coefficients of `q` are zero.
    pub fn div_exact(&self, f: &GaloisField, a: &Self) -> Option<Self> {
        let p = self.0.len();
        let va = a.valuation()?;
        let Some(vb) = self.valuation() else {
            return Some(Self::zero(p));
        };
        if vb < va {
            return None;
        }
        let mut a_unit = vec![f.zero(); p];
        let mut b_red = vec![f.zero(); p];
        a_unit[..p - va].copy_from_slice(&a.0[va..]);
        b_red[..p - va].copy_from_slice(&self.0[va..]);
        let q = TildeSElem(b_red).mul(f, &TildeSElem(a_unit).inv(f)?);
        let mut qv = q.0;
        for x in qv.iter_mut().skip(p - va) {
            *x = f.zero();
        }
        Some(TildeSElem(qv))
    }

    /// Frobenius: `u ↦ u^p = 0`, so only the constant term survives, twisted by σ.
    pub fn phi(&self, f: &GaloisField) -> Self {
        Self::constant(self.0.len(), f.frobenius(self.0[0]))
    }

    /// Monodromy `N(u^i) = −i·u^i`.
    pub fn monodromy(&self, f: &GaloisField) -> Self {
        TildeSElem(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &a)| f.mul(a, f.from_int(-(i as i64))))
                .collect(),
        )
    }

    pub fn map_frobenius(&self, f: &GaloisField, j: u32) -> Self {
        TildeSElem(self.0.iter().map(|&a| f.frobenius_iter(a, j)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_division() {
        let f = GaloisField::prime(5).unwrap();
        let a = TildeSElem(vec![2, 1, 0, 3, 1].into_iter().map(|x| f.from_int(x)).collect());
        let ai = a.inv(&f).unwrap();
        assert_eq!(a.mul(&f, &ai), TildeSElem::one(&f));
        let u2 = TildeSElem::u_pow(&f, 2);
        let b = u2.mul(&f, &a);
        let q = b.div_exact(&f, &u2).unwrap();
        assert_eq!(q.mul(&f, &u2), b);
        assert!(u2.div_exact(&f, &b.shift(1)).is_none());
    }

    #[test]
    fn monodromy_is_a_derivation() {
        let f = GaloisField::new(3, 2).unwrap();
        let x: Vec<FieldElem> = f.elements().take(3).collect();
        let y: Vec<FieldElem> = f.elements().skip(4).take(3).collect();
        let (a, b) = (TildeSElem(x), TildeSElem(y));
        let lhs = a.mul(&f, &b).monodromy(&f);
        let rhs = a.monodromy(&f).mul(&f, &b).add(&f, &a.mul(&f, &b.monodromy(&f)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fil_membership() {
        let f = GaloisField::prime(5).unwrap();
        let x = TildeSElem::u_pow(&f, 2);
        assert!(x.in_fil(1, 2));
        assert!(!x.in_fil(1, 3));
        assert!(TildeSElem::zero(5).in_fil(3, 2));
    }
}
