//! Finite fields GF(p^m) in a fixed polynomial basis.
//!
//! A [`GaloisField`] is a cheap-to-clone handle holding the modulus and the
//! log/antilog tables. Elements are [`FieldElem`] values: the coefficient
//! vector `c_0 + c_1 x + … + c_{m-1} x^{m-1}` packed as the base-p integer
//! `c_0 + c_1 p + …`. An element is only meaningful together with the field
//! it came from.
//!
//! ```
//! use breuil::gf::GaloisField;
//!
//! let f = GaloisField::new(3, 2).unwrap();
//! let eps = f.from_coeffs(&[0, 1]).unwrap();
//! assert_eq!(f.mul(eps, eps), f.from_int(-1));
//! assert_eq!(f.frobenius_iter(eps, 1), f.neg(eps));
//! ```

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order; every table is O(q).
pub const MAX_ORDER: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub m: u32,
    /// Monic irreducible of degree m, coefficients from the constant term up.
    pub modulus: Vec<u32>,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// Packed base-p index of the coefficient vector.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    params: FieldParams,
    q: u32,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct GaloisField {
    inner: Arc<Inner>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p(), self.degree(), self.inner.params.modulus)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.params == other.inner.params
    }
}

impl Eq for GaloisField {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * b as u128) % modulus as u128) as u64;
        }
        b = ((b as u128 * b as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Dense polynomials over GF(p), lowest coefficient first.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        super::mod_pow(a as u64, p as u64 - 2, p as u64) as u32
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
        trim(&mut out);
        out
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let f = (r[top] as u64 * lead_inv) % p as u64;
            let shift = top - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = (f * c as u64) % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            exp >>= 1;
        }
        acc
    }

    /// Ben-Or: f of degree m is irreducible iff gcd(f, x^{p^j} − x) = 1 for j ≤ m/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        if m == 0 {
            return false;
        }
        if m == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        let mut h = x.clone();
        for _ in 1..=m / 2 {
            h = pow_mod(&h, p as u64, f, p);
            let g = gcd(f, &sub(&h, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// The lexicographically smallest monic irreducible of degree `m` over GF(p),
/// comparing the coefficient list `(c_0, …, c_{m-1})` from the constant term.
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let total = (p as u64).pow(m);
    for n in 0..total {
        let mut f = vec![0u32; m as usize + 1];
        let mut rest = n;
        for k in (0..m as usize).rev() {
            f[k] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        f[m as usize] = 1;
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl GaloisField {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::check_size(p, m)?;
        Self::build(p, m, smallest_irreducible(p, m))
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::params("modulus", "degree must be at least 1"));
        }
        let m = (modulus.len() - 1) as u32;
        Self::check_size(p, m)?;
        if *modulus.last().unwrap() != 1 {
            return Err(Error::params("modulus", "must be monic"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::params("modulus", "coefficients must lie in [0, p)"));
        }
        if !poly::is_irreducible(modulus, p) {
            return Err(Error::params("modulus", "polynomial is reducible over GF(p)"));
        }
        Self::build(p, m, modulus.to_vec())
    }

    pub fn from_params(params: &FieldParams) -> Result<Self> {
        if params.modulus.len() != params.m as usize + 1 {
            return Err(Error::params("modulus", "length must be m + 1"));
        }
        Self::with_modulus(params.p, &params.modulus)
    }

    fn check_size(p: u32, m: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::params("p", format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::params("m", "extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge { p, m });
        }
        Ok(())
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(m);
        let pow_p: Vec<u32> = (0..=m).map(|i| p.pow(i)).collect();
        let to_poly = |x: u32| -> Vec<u32> {
            let mut v: Vec<u32> = (0..m as usize).map(|i| (x / pow_p[i]) % p).collect();
            poly::trim(&mut v);
            v
        };
        let from_poly = |v: &[u32]| -> u32 { v.iter().enumerate().map(|(i, &c)| c * pow_p[i]).sum() };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                let gp = to_poly(g);
                factors.iter().all(|&l| poly::pow_mod(&gp, order / l, &modulus, p) != vec![1u32])
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let gp = to_poly(generator);
        let mut cur = vec![1u32];
        for (k, slot) in exp.iter_mut().take((q - 1) as usize).enumerate() {
            let idx = from_poly(&cur);
            *slot = idx;
            log[idx as usize] = k as u32;
            cur = poly::rem(&poly::mul(&cur, &gp, p), &modulus, p);
        }
        let period = (q - 1) as usize;
        for k in period..exp.len() {
            exp[k] = exp[k - period];
        }
        Ok(GaloisField {
            inner: Arc::new(Inner { params: FieldParams { p, m, modulus }, q, pow_p, exp, log }),
        })
    }

    pub fn params(&self) -> &FieldParams {
        &self.inner.params
    }

    pub fn p(&self) -> u32 {
        self.inner.params.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.params.m
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p() as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        let m = self.degree() as usize;
        if coeffs.len() > m {
            return Err(Error::InvalidInput(format!(
                "field element has {} coefficients, expected at most {m}",
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p()) {
            return Err(Error::InvalidInput(format!("coefficient {c} not reduced mod {}", self.p())));
        }
        Ok(FieldElem(coeffs.iter().enumerate().map(|(i, &c)| c * self.inner.pow_p[i]).sum()))
    }

    /// Element with the given packed index; `None` if out of range.
    pub fn from_index(&self, idx: u32) -> Option<FieldElem> {
        (idx < self.order()).then_some(FieldElem(idx))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let p = self.p();
        (0..self.degree() as usize).map(|i| (x.0 / self.inner.pow_p[i]) % p).collect()
    }

    /// Integer value of an element of the prime subfield.
    pub fn to_prime(&self, x: FieldElem) -> Option<u32> {
        (x.0 < self.p()).then_some(x.0)
    }

    /// All elements in increasing packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p();
        if self.degree() == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= p { s - p } else { s });
        }
        let mut out = 0;
        for &w in &self.inner.pow_p[..self.degree() as usize] {
            let s = (a.0 / w) % p + (b.0 / w) % p;
            out += (if s >= p { s - p } else { s }) * w;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.p();
        if self.degree() == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut out = 0;
        for &w in &self.inner.pow_p[..self.degree() as usize] {
            let c = (a.0 / w) % p;
            out += (if c == 0 { 0 } else { p - c }) * w;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let inner = &*self.inner;
        FieldElem(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.inner;
        let period = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Some(FieldElem(inner.exp[((period - l) % period) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, n: u64) -> FieldElem {
        if n == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return self.zero();
        }
        let period = (self.inner.q - 1) as u64;
        let l = self.inner.log[a.0 as usize] as u64;
        let e = ((l as u128 * (n % period) as u128) % period as u128) as usize;
        FieldElem(self.inner.exp[e])
    }

    /// `x^(p^j)`.
    pub fn frobenius_iter(&self, x: FieldElem, j: u32) -> FieldElem {
        if x.0 == 0 {
            return x;
        }
        let period = (self.inner.q - 1) as u64;
        let e = mod_pow(self.p() as u64, j as u64, period);
        let l = self.inner.log[x.0 as usize] as u64;
        FieldElem(self.inner.exp[((l * e) % period) as usize])
    }

    pub fn frobenius(&self, x: FieldElem) -> FieldElem {
        self.frobenius_iter(x, 1)
    }

    /// Inverse Frobenius `x^(p^(m-1))`.
    pub fn frobenius_inv(&self, x: FieldElem) -> FieldElem {
        self.frobenius_iter(x, self.degree() - 1)
    }

    pub fn is_in_subfield(&self, x: FieldElem, d: u32) -> bool {
        self.frobenius_iter(x, d) == x
    }

    /// Trace from GF(p^d) down to GF(p).
    pub fn trace(&self, x: FieldElem, d: u32) -> Result<FieldElem> {
        if !self.is_in_subfield(x, d) {
            return Err(Error::NotInSubfield { degree: d });
        }
        let mut acc = self.zero();
        for j in 0..d {
            acc = self.add(acc, self.frobenius_iter(x, j));
        }
        debug_assert!(self.to_prime(acc).is_some());
        Ok(acc)
    }

    /// Solutions of `x^(p^d) = (−1)^parity · x`; all of them lie in GF(p^(2d)).
    pub fn twisted_roots(&self, d: u32, parity: u32) -> Result<Vec<FieldElem>> {
        if d == 0 || !self.degree().is_multiple_of(2 * d) {
            return Err(Error::AmbientTooSmall { p: self.p(), have: self.degree(), need: 2 * d });
        }
        let sign = if parity % 2 == 1 { self.from_int(-1) } else { self.one() };
        Ok(self
            .elements()
            .filter(|&x| self.frobenius_iter(x, d) == self.mul(sign, x))
            .collect())
    }

    /// First element in scan order with `ε^(p−1) = −1`.
    pub fn epsilon(&self) -> Result<FieldElem> {
        let minus_one = self.from_int(-1);
        let p = self.p() as u64;
        self.elements()
            .find(|&x| self.pow(x, p - 1) == minus_one)
            .ok_or(Error::AmbientTooSmall { p: self.p(), have: self.degree(), need: 2 })
    }

    /// `dst[i] -= factor * src[i]`.
    #[inline]
    pub fn sub_scaled(&self, dst: &mut [FieldElem], factor: FieldElem, src: &[FieldElem]) {
        if factor.0 == 0 {
            return;
        }
        if self.degree() == 1 {
            let p = self.p() as u64;
            let f = factor.0 as u64;
            for (d, s) in dst.iter_mut().zip(src) {
                if s.0 != 0 {
                    let prod = (f * s.0 as u64) % p;
                    d.0 = ((d.0 as u64 + p - prod) % p) as u32;
                }
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s.0 != 0 {
                    *d = self.sub(*d, self.mul(factor, s));
                }
            }
        }
    }

    pub fn fmt_elem(&self, x: FieldElem) -> String {
        if self.degree() == 1 {
            return x.0.to_string();
        }
        let c = self.coeffs(x);
        let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(5, 1), vec![0, 1]);
        // (c0, c1) = (1, 1): x^2 + x + 1, since x^2 + 1 splits mod 5.
        assert_eq!(smallest_irreducible(5, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 0, 1, 1]);
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(GaloisField::with_modulus(5, &[1, 0, 1]).is_err());
        assert!(GaloisField::with_modulus(5, &[2, 0, 1]).is_ok());
        assert!(GaloisField::new(4, 1).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f = GaloisField::new(3, 2).unwrap();
        let eps = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(eps, eps), f.from_int(-1));
        assert_eq!(f.frobenius_iter(eps, 1), f.neg(eps));
        for x in f.elements() {
            assert_eq!(f.frobenius_iter(x, 2), x);
        }
        for c in 0..3 {
            let x = f.from_int(c);
            for j in 0..5 {
                assert_eq!(f.frobenius_iter(x, j), x);
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f = GaloisField::new(3, 2).unwrap();
        let eps = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.trace(f.zero(), 2).unwrap(), f.zero());
        assert_eq!(f.trace(f.one(), 2).unwrap(), f.from_int(2));
        assert_eq!(f.trace(eps, 2).unwrap(), f.zero());
        assert_eq!(f.trace(eps, 1), Err(Error::NotInSubfield { degree: 1 }));
    }

    #[test]
    fn twisted_root_examples() {
        let f = GaloisField::new(3, 2).unwrap();
        let eps = f.from_coeffs(&[0, 1]).unwrap();
        let mut roots = f.twisted_roots(1, 1).unwrap();
        roots.sort();
        let mut expected = vec![f.zero(), eps, f.neg(eps)];
        expected.sort();
        assert_eq!(roots, expected);
        assert_eq!(f.twisted_roots(1, 0).unwrap(), vec![f.zero(), f.one(), f.from_int(2)]);
        assert!(matches!(f.twisted_roots(2, 0), Err(Error::AmbientTooSmall { .. })));
        assert_eq!(f.epsilon().unwrap(), eps);
    }

    #[test]
    fn twisted_root_counts_by_enumeration() {
        for p in [2u32, 3, 5] {
            for d in 1..=2u32 {
                let f = GaloisField::new(p, 2 * d).unwrap();
                for parity in 0..2 {
                    let expected = p.pow(d) as usize;
                    assert_eq!(f.twisted_roots(d, parity).unwrap().len(), expected, "p={p} d={d}");
                }
            }
        }
    }

    #[test]
    fn trace_surjective() {
        for p in [2u32, 3, 5] {
            for d in 1..=3u32 {
                let f = GaloisField::new(p, d).unwrap();
                assert!(f.elements().any(|x| !f.trace(x, d).unwrap().is_zero()));
            }
        }
    }

    #[test]
    fn inverse_and_pow() {
        let f = GaloisField::new(7, 2).unwrap();
        for x in f.elements().skip(1) {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            assert_eq!(f.pow(x, 48), f.one());
        }
        assert_eq!(f.inv(f.zero()), None);
    }

    #[test]
    fn coefficient_round_trip() {
        let f = GaloisField::new(5, 3).unwrap();
        for x in f.elements().step_by(7) {
            assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
        }
        assert!(f.from_coeffs(&[5]).is_err());
    }
}
