//! Tame inertia weights of simple objects, fundamental characters and the
//! duality pairing.

use serde::Serialize;

use crate::cat::SimpleObject;
use crate::error::{Error, Result};
use crate::gf::{FieldElem, GaloisField};
use crate::oracle;
use crate::report::{Check, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightData {
    pub p: u32,
    pub e: usize,
    pub r: usize,
    pub n: Vec<usize>,
    pub s: Vec<u64>,
    pub m: Vec<usize>,
    pub t: Vec<u64>,
    pub v: u64,
}

impl WeightData {
    pub fn d(&self) -> usize {
        self.n.len()
    }

    /// `q = p^d`.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.d() as u32)
    }

    /// Checks the integer identities tying the exponents together.
    pub fn check(&self) -> ValidationReport {
        let d = self.d();
        let p = self.p as u64;
        let q1 = self.q() - 1;
        let er = self.e * self.r;
        let mut rep = ValidationReport::new();
        let rec = (0..d).find(|&i| p * self.s[i] != self.s[(i + 1) % d] + self.n[i] as u64 * q1);
        rep.push(match rec {
            None => Check::pass("s_recursion"),
            Some(i) => Check::fail("s_recursion", format!("p·s_{i} = {} but s_{{i+1}} + n_i(q−1) = {}", p * self.s[i], self.s[(i + 1) % d] + self.n[i] as u64 * q1)),
        });
        let rec = (0..d).find(|&i| p * self.t[i] != self.t[(i + 1) % d] + self.m[i] as u64 * q1);
        rep.push(match rec {
            None => Check::pass("t_recursion"),
            Some(i) => Check::fail("t_recursion", format!("index {i}")),
        });
        let expect_v = er as u64 * q1 / (p - 1).max(1);
        let sum = (0..d).find(|&i| self.s[i] + self.t[i] != self.v || self.v != expect_v);
        rep.push(match sum {
            None => Check::pass("s_plus_t_is_v"),
            Some(i) => Check::fail("s_plus_t_is_v", format!("s_{i} + t_{i} = {} but v = {}", self.s[i] + self.t[i], expect_v)),
        });
        let digits = (0..d).find(|&i| {
            let want: Vec<u32> = (0..d).map(|k| self.n[(i + d - 1 - k) % d] as u32).collect();
            base_p_digits(self.s[i], self.p, d) != want
        });
        rep.push(match digits {
            None => Check::pass("digits_are_weights"),
            Some(i) => Check::fail("digits_are_weights", format!("digits of s_{i} = {} are {:?}", self.s[i], base_p_digits(self.s[i], self.p, d))),
        });
        let bound = (0..d).find(|&i| self.s[i] >= q1);
        rep.push(match bound {
            None => Check::pass("s_below_q_minus_1"),
            Some(i) => Check::fail("s_below_q_minus_1", format!("s_{i} = {}", self.s[i])),
        });
        rep
    }
}

/// Little-endian base-p digits, exactly `h` of them.
pub fn base_p_digits(mut x: u64, p: u32, h: usize) -> Vec<u32> {
    (0..h)
        .map(|_| {
            let dgt = (x % p as u64) as u32;
            x /= p as u64;
            dgt
        })
        .collect()
}

/// `s_i = Σ_k n_{i+k} p^{d−1−k}` and likewise `t_i` with `m_i = er − n_i`.
pub fn weight_exponents_for(p: u32, e: usize, r: usize, n: &[usize]) -> Result<WeightData> {
    let d = n.len();
    if d == 0 {
        return Err(Error::DimensionMismatch("at least one weight is required".into()));
    }
    let er = e * r;
    if let Some(&w) = n.iter().find(|&&w| w > er) {
        return Err(Error::WeightOutOfRange { weight: w as u32, bound: er as u32 });
    }
    let pp = p as u64;
    let expo = |w: &[usize], i: usize| -> u64 { (0..d).fold(0u64, |acc, k| acc * pp + w[(i + k) % d] as u64) };
    let m: Vec<usize> = n.iter().map(|&x| er - x).collect();
    let s: Vec<u64> = (0..d).map(|i| expo(n, i)).collect();
    let t: Vec<u64> = (0..d).map(|i| expo(&m, i)).collect();
    let q1 = pp.pow(d as u32) - 1;
    let v = if p > 1 { er as u64 * q1 / (pp - 1) } else { 0 };
    Ok(WeightData { p, e, r, n: n.to_vec(), s, m, t, v })
}

pub fn weight_exponents(s: &SimpleObject) -> Result<WeightData> {
    if !s.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let ring = s.ring();
    weight_exponents_for(ring.p() as u32, ring.e(), ring.r(), s.weights())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TameCharacter {
    pub p: u32,
    pub h: usize,
    pub exponent: u64,
    /// Little-endian base-p digits of the exponent.
    pub digits: Vec<u32>,
}

impl TameCharacter {
    pub fn new(p: u32, h: usize, exponent: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::params("h", "level must be positive"));
        }
        let modulus = (p as u64).pow(h as u32) - 1;
        if exponent >= modulus.max(1) {
            return Err(Error::params("exponent", format!("must be below p^h − 1 = {modulus}")));
        }
        Ok(TameCharacter { p, h, exponent, digits: base_p_digits(exponent, p, h) })
    }

    pub fn from_digits(p: u32, digits: &[u32]) -> Result<Self> {
        if let Some(&x) = digits.iter().find(|&&x| x >= p) {
            return Err(Error::params("digits", format!("digit {x} is not below p = {p}")));
        }
        let exponent = digits.iter().rev().fold(0u64, |acc, &x| acc * p as u64 + x as u64);
        let modulus = (p as u64).pow(digits.len() as u32) - 1;
        Self::new(p, digits.len(), exponent % modulus.max(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterInfo {
    pub character: TameCharacter,
    /// The p-torsion group is (Z/p)^d.
    pub group_rank: usize,
    pub group_order: u64,
    /// Exponents of the Frobenius conjugates: s_0, …, s_{d−1}.
    pub orbit: Vec<u64>,
}

impl CharacterInfo {
    /// The group is `(Z/p)^h` and the orbit is closed under multiplication by p mod `p^h − 1`.
    pub fn check(&self) -> ValidationReport {
        let chi = &self.character;
        let mut rep = ValidationReport::new();
        let q = (chi.p as u64).pow(chi.h as u32);
        rep.push(if self.group_order == q && self.group_rank == chi.h {
            Check::pass_with("group_order", format!("(Z/{})^{}", chi.p, chi.h))
        } else {
            Check::fail("group_order", format!("order {} and rank {}, expected {q} and {}", self.group_order, self.group_rank, chi.h))
        });
        let h = self.orbit.len();
        let closed = h == chi.h
            && self.orbit.first() == Some(&chi.exponent)
            && (0..h).all(|i| (chi.p as u64 * self.orbit[i]) % (q - 1).max(1) == self.orbit[(i + 1) % h] % (q - 1).max(1));
        rep.push(if closed {
            Check::pass("frobenius_orbit")
        } else {
            Check::fail("frobenius_orbit", format!("{:?} is not the orbit of {} under x ↦ px", self.orbit, chi.exponent))
        });
        rep
    }
}

pub fn character_of_simple(s: &SimpleObject) -> Result<CharacterInfo> {
    let w = weight_exponents(s)?;
    let character = TameCharacter::new(w.p, w.d(), w.s[0])?;
    Ok(CharacterInfo { character, group_rank: w.d(), group_order: w.q(), orbit: w.s.clone() })
}

/// `θ_h(ζ)^n` for ζ a (p^h − 1)-th root of unity.
pub fn character_apply(chi: &TameCharacter, field: &GaloisField, zeta: FieldElem) -> Result<FieldElem> {
    let order = (chi.p as u64).pow(chi.h as u32) - 1;
    if zeta.is_zero() || field.pow(zeta, order) != field.one() {
        return Err(Error::NotRootOfUnity { order });
    }
    Ok(field.pow(zeta, chi.exponent))
}

/// Every digit of the exponent lies in `[0, er]`.
pub fn serre_check(chi: &TameCharacter, e: usize, r: usize) -> (bool, ValidationReport) {
    let er = (e * r) as u32;
    let mut rep = ValidationReport::new();
    for (i, &dg) in chi.digits.iter().enumerate() {
        let name = format!("digit_{i}");
        rep.push(if dg <= er {
            Check::pass_with(name, format!("{dg} ≤ {er}"))
        } else {
            Check::fail(name, format!("{dg} > er = {er}"))
        });
    }
    (rep.all_pass(), rep)
}

/// Ambient field GF(p^M), M = lcm(m, 2d), holding F_q and the twisted roots.
pub fn ambient_field(p: u32, m: u32, d: usize) -> Result<GaloisField> {
    let two_d = 2 * d as u32;
    let g = gcd(m, two_d);
    GaloisField::new(p, m / g * two_d)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `λ(a, b) = Σ_i σ_i (ab)^{p^i}`, divided by ε when r is odd so that it lies in GF(p).
pub fn pairing(a: FieldElem, b: FieldElem, s: &SimpleObject, amb: &GaloisField) -> Result<FieldElem> {
    let w = weight_exponents(s)?;
    let d = w.d() as u32;
    if !amb.degree().is_multiple_of(2 * d) {
        return Err(Error::AmbientTooSmall { p: amb.p(), have: amb.degree(), need: 2 * d });
    }
    if !amb.is_in_subfield(a, d) {
        return Err(Error::BadSolutionPair("a is not in F_q".into()));
    }
    let parity = ((w.r as u32) * d) % 2;
    let bq = amb.frobenius_iter(b, d);
    let want = if parity == 1 { amb.neg(b) } else { b };
    if bq != want {
        return Err(Error::BadSolutionPair(format!("b does not satisfy x^q = (−1)^{parity}·x")));
    }
    let signs = oracle::derive_signs(&w, amb)?;
    Ok(pairing_with_signs(&w, &signs, amb, a, b))
}

pub(crate) fn pairing_with_signs(w: &WeightData, signs: &[i8], amb: &GaloisField, a: FieldElem, b: FieldElem) -> FieldElem {
    let ab = amb.mul(a, b);
    let mut raw = FieldElem::ZERO;
    for (i, &sg) in signs.iter().enumerate() {
        let term = amb.frobenius_iter(ab, i as u32);
        raw = if sg > 0 { amb.add(raw, term) } else { amb.sub(raw, term) };
    }
    if w.r % 2 == 1 {
        let eps = amb.epsilon().expect("ambient field contains ε");
        amb.div(raw, eps).expect("ε ≠ 0")
    } else {
        raw
    }
}
