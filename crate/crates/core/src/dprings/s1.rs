//! Elements of S₁ in the divided-power basis `γ̃_i = u^i/q(i)!`.

use std::collections::BTreeMap;

use super::{DpRing, TildeSElem};
use crate::error::{Error, Result};
use crate::gf::{FieldElem, GaloisField};

/// Sparse `Σ w_i γ̃_i` with `w_i ∈ k`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct S1Elem {
    terms: BTreeMap<usize, FieldElem>,
}

/// Like [`S1Elem`] but with integer coefficients mod `p^N`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct S1LiftElem {
    terms: BTreeMap<usize, u64>,
}

impl S1LiftElem {
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }

    fn add_term(&mut self, ring: &DpRing, i: usize, c: u64) {
        let zr = ring.inner.lift_ring;
        let slot = self.terms.entry(i).or_insert(0);
        *slot = zr.add(*slot, c % zr.modulus);
        if *slot == 0 {
            self.terms.remove(&i);
        }
    }

    pub fn reduce(&self, ring: &DpRing) -> S1Elem {
        let f = ring.field();
        let p = ring.p() as u64;
        let mut out = S1Elem::zero();
        for (&i, &c) in &self.terms {
            out.add_term(f, i, f.from_int((c % p) as i64));
        }
        out
    }
}

impl S1Elem {
    pub fn zero() -> Self {
        S1Elem::default()
    }

    pub fn term(i: usize, c: FieldElem) -> Self {
        let mut s = Self::zero();
        if !c.is_zero() {
            s.terms.insert(i, c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.terms.get(&i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, FieldElem)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(0)
    }

    pub(crate) fn add_term(&mut self, f: &GaloisField, i: usize, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_insert(FieldElem::ZERO);
        *slot = f.add(*slot, c);
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn add(&self, f: &GaloisField, o: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in o.terms() {
            out.add_term(f, i, c);
        }
        out
    }

    pub fn sub(&self, f: &GaloisField, o: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in o.terms() {
            out.add_term(f, i, f.neg(c));
        }
        out
    }

    pub fn neg(&self, f: &GaloisField) -> Self {
        S1Elem { terms: self.terms.iter().map(|(&i, &c)| (i, f.neg(c))).collect() }
    }

    pub fn scale(&self, f: &GaloisField, c: FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        S1Elem { terms: self.terms.iter().map(|(&i, &x)| (i, f.mul(x, c))).collect() }
    }

    pub fn map_frobenius(&self, f: &GaloisField, j: u32) -> Self {
        S1Elem { terms: self.terms.iter().map(|(&i, &x)| (i, f.frobenius_iter(x, j))).collect() }
    }

    /// Membership in `Fil^n S₁`: support inside `{i : q(i) ≥ n}`.
    pub fn in_fil(&self, n: usize, e: usize) -> bool {
        self.min_degree().is_none_or(|d| d / e >= n)
    }

    /// Dense coefficients of degrees `0..len`.
    pub fn to_dense(&self, len: usize) -> Vec<FieldElem> {
        let mut v = vec![FieldElem::ZERO; len];
        for (i, c) in self.terms() {
            if i < len {
                v[i] = c;
            }
        }
        v
    }

    pub fn from_dense(v: &[FieldElem]) -> Self {
        S1Elem {
            terms: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c)).collect(),
        }
    }

    pub fn display(&self, f: &GaloisField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(i, c)| if i == 0 { f.fmt_elem(c) } else { format!("{}*g{}", f.fmt_elem(c), i) })
            .collect();
        parts.join(" + ")
    }
}

impl DpRing {
    pub fn one(&self) -> S1Elem {
        S1Elem::term(0, self.field().one())
    }

    pub fn scalar(&self, c: FieldElem) -> S1Elem {
        S1Elem::term(0, c)
    }

    /// The basis element `γ̃_i`, zero past the truncation degree.
    pub fn basis(&self, i: usize) -> S1Elem {
        if i >= self.trunc_degree() {
            return S1Elem::zero();
        }
        S1Elem::term(i, self.field().one())
    }

    /// `u^i = q(i)!·γ̃_i`.
    pub fn u_pow(&self, i: usize) -> S1Elem {
        if i >= self.trunc_degree() {
            return S1Elem::zero();
        }
        let c = self.fact().factorial(self.q(i));
        S1Elem::term(i, self.field().from_int(c as i64))
    }

    /// `q(i+j)!/(q(i)!·q(j)!)` mod p.
    pub fn dp_coeff(&self, i: usize, j: usize) -> FieldElem {
        let c = self.fact().multinomial(self.q(i + j), self.q(i), self.q(j));
        self.field().from_int(c as i64)
    }

    pub fn s1_mul(&self, a: &S1Elem, b: &S1Elem) -> S1Elem {
        let f = self.field();
        let d = self.trunc_degree();
        let mut out = S1Elem::zero();
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                if i + j >= d {
                    break;
                }
                let c = self.fact().multinomial(self.q(i + j), self.q(i), self.q(j));
                if c != 0 {
                    out.add_term(f, i + j, f.mul(f.mul(x, y), f.from_int(c as i64)));
                }
            }
        }
        out
    }

    pub fn s1_pow(&self, a: &S1Elem, n: usize) -> S1Elem {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.s1_mul(&acc, a);
        }
        acc
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn s1_inv(&self, a: &S1Elem) -> Option<S1Elem> {
        let f = self.field();
        let a0_inv = f.inv(a.constant_term())?;
        // a = a0 (1 + n) with n nilpotent
        let mut n = a.scale(f, a0_inv);
        n.terms.remove(&0);
        let minus_n = n.neg(f);
        let mut term = self.one();
        let mut acc = self.one();
        loop {
            term = self.s1_mul(&term, &minus_n);
            if term.is_zero() {
                break;
            }
            acc = acc.add(f, &term);
        }
        Some(acc.scale(f, a0_inv))
    }

    pub(crate) fn phi_basis_sparse(&self, i: usize) -> Vec<(usize, u32)> {
        let pi = self.p() * i;
        if pi >= self.trunc_degree() {
            return Vec::new();
        }
        let c = self.fact().ratio(self.q(pi), self.q(i));
        if c == 0 {
            Vec::new()
        } else {
            vec![(pi, c as u32)]
        }
    }

    /// Frobenius: σ on coefficients, `γ̃_i ↦ [q(pi)!/q(i)!]·γ̃_{pi}`.
    pub fn s1_phi(&self, a: &S1Elem) -> S1Elem {
        let f = self.field();
        let mut out = S1Elem::zero();
        for (i, w) in a.terms() {
            for (j, c) in self.phi_basis_sparse(i) {
                out.add_term(f, j, f.mul(f.frobenius(w), f.from_int(c as i64)));
            }
        }
        out
    }

    /// Monodromy: `γ̃_i ↦ −i·γ̃_i`.
    pub fn s1_n(&self, a: &S1Elem) -> S1Elem {
        let f = self.field();
        let mut out = S1Elem::zero();
        for (i, w) in a.terms() {
            out.add_term(f, i, f.mul(w, f.from_int(-(i as i64))));
        }
        out
    }

    /// Divided Frobenius `φ_r = φ/p^r` on `Fil^r S₁`.
    pub fn s1_phi_r(&self, a: &S1Elem) -> Result<S1Elem> {
        if !a.in_fil(self.r(), self.e()) {
            return Err(Error::NotInFil {
                level: self.r() as u32,
                detail: format!("support starts in degree {}", a.min_degree().unwrap_or(0)),
            });
        }
        let f = self.field();
        let mut out = S1Elem::zero();
        for (i, w) in a.terms() {
            let sw = f.frobenius(w);
            for &(j, c) in &self.inner.phi_r_table[i] {
                out.add_term(f, j, f.mul(sw, f.from_int(c as i64)));
            }
        }
        Ok(out)
    }

    /// `φ_r(γ̃_i)`; zero below `er` where it is undefined.
    pub fn phi_r_basis(&self, i: usize) -> S1Elem {
        let f = self.field();
        let mut out = S1Elem::zero();
        if let Some(t) = self.inner.phi_r_table.get(i) {
            for &(j, c) in t {
                out.add_term(f, j, f.from_int(c as i64));
            }
        }
        out
    }

    /// Lift of `u^j·γ_Q(E) = Σ_k (p^k/k!)·u^j h^k·γ̃_{e(Q−k)}` to Z/p^N, truncated.
    pub fn lift_gamma_e(&self, big_q: usize, j: usize) -> S1LiftElem {
        let zr = self.inner.lift_ring;
        let lf = &self.inner.lift_fact;
        let e = self.e();
        let d = self.trunc_degree();
        let mut out = S1LiftElem::default();
        // poly = u^j · h^k, coefficients mod p^N
        let mut poly = vec![0u64; j + 1];
        poly[j] = 1 % zr.modulus;
        for k in 0..=big_q {
            let pk = lf.p_pow_over_factorial(k);
            if pk != 0 {
                let base = e * (big_q - k);
                for (t, &pt) in poly.iter().enumerate() {
                    if pt == 0 || t + base >= d {
                        continue;
                    }
                    let coeff = lf.ratio(self.q(t + base), big_q - k);
                    out.add_term(self, t + base, zr.mul(zr.mul(pk, pt), coeff));
                }
            }
            let mut next = vec![0u64; poly.len() + e - 1];
            for (t, &pt) in poly.iter().enumerate() {
                if pt == 0 {
                    continue;
                }
                for (l, &hl) in self.inner.h.iter().enumerate() {
                    next[t + l] = zr.add(next[t + l], zr.mul(pt, hl));
                }
            }
            poly = next;
        }
        out
    }

    /// Applies φ to an integral lift exactly and divides by `p^level`.
    pub fn lift_phi_divide(&self, a: &S1LiftElem, level: u32) -> Result<S1Elem> {
        let zr = self.inner.lift_ring;
        if level + 1 > zr.n {
            return Err(Error::Precision(format!("level {level} needs more than {} p-adic digits", zr.n)));
        }
        let lf = &self.inner.lift_fact;
        let d = self.trunc_degree();
        let mut image = S1LiftElem::default();
        for (i, c) in a.terms() {
            let pi = self.p() * i;
            if pi >= d {
                continue;
            }
            image.add_term(self, pi, zr.mul(c, lf.ratio(self.q(pi), self.q(i))));
        }
        let f = self.field();
        let p = self.p() as u64;
        let mut out = S1Elem::zero();
        for (i, c) in image.terms() {
            let q = zr.div_p_pow(c, level).ok_or_else(|| {
                Error::Precision(format!("φ of the lift is not divisible by p^{level} in degree {i}"))
            })?;
            out.add_term(f, i, f.from_int((q % p) as i64));
        }
        Ok(out)
    }

    pub(crate) fn phi_r_basis_lifted(&self, i: usize) -> Result<Vec<(usize, u32)>> {
        let big_q = self.q(i);
        let lift = self.lift_gamma_e(big_q, i - self.e() * big_q);
        let img = self.lift_phi_divide(&lift, self.r() as u32)?;
        Ok(img.terms().map(|(j, c)| (j, self.field().to_prime(c).unwrap())).collect())
    }

    /// `c = φ(E)/p` computed from the integral lift of E.
    pub(crate) fn phi_1_of_eisenstein(&self) -> Result<S1Elem> {
        let zr = self.inner.lift_ring;
        let mut lift = S1LiftElem::default();
        for (l, &a) in self.params().eisenstein.iter().enumerate() {
            // u^l = γ̃_l for l ≤ e
            lift.add_term(self, l, zr.reduce(a as i128));
        }
        self.lift_phi_divide(&lift, 1)
    }

    /// The κ-generators `γ̃_i`, `p ≤ i < 2p`.
    pub fn kappa_generators(&self) -> Vec<(usize, S1Elem)> {
        (self.p()..2 * self.p()).map(|i| (i, self.basis(i))).collect()
    }

    /// `γ̃_i ↦ (q(i)!)^{-1} u^i` for `i < p`, zero on κ.
    pub fn project_tilde(&self, a: &S1Elem) -> TildeSElem {
        let f = self.field();
        let p = self.p();
        let mut out = TildeSElem::zero(p);
        for (i, w) in a.terms() {
            if i < p {
                let inv = f.from_int(self.fact().inv_factorial(self.q(i)) as i64);
                out.0[i] = f.add(out.0[i], f.mul(w, inv));
            }
        }
        out
    }

    /// Canonical section of [`DpRing::project_tilde`]: `u^j ↦ q(j)!·γ̃_j`.
    pub fn section(&self, t: &TildeSElem) -> S1Elem {
        let f = self.field();
        let mut out = S1Elem::zero();
        for (j, &w) in t.0.iter().enumerate() {
            let c = f.from_int(self.fact().factorial(self.q(j)) as i64);
            out.add_term(f, j, f.mul(w, c));
        }
        out
    }

    /// `φ(u^j) = u^{pj}` in S₁.
    pub fn phi_u_pow(&self, j: usize) -> S1Elem {
        self.u_pow(self.p() * j)
    }
}
