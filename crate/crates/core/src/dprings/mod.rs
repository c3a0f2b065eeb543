//! The rings S̃ = k[u]/u^p and S₁ = S/pS (truncated in u-degree) with their
//! Frobenius, monodromy, filtration and divided Frobenius.
//!
//! ```
//! use breuil::dprings::{DpRing, RingParams};
//!
//! let ring = DpRing::new(RingParams::standard(3, 1, 1, 1)).unwrap();
//! let c = ring.c();
//! assert_eq!(ring.c_pi(), ring.field().from_int(2));
//! assert_eq!(ring.s1_phi_r(&ring.u_pow(1)).unwrap(), *c);
//! ```

mod s1;
mod tilde;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldParams, GaloisField};
use crate::padic::{FactorialTable, ZpN};

pub use s1::{S1Elem, S1LiftElem};
pub use tilde::TildeSElem;

/// Largest accepted truncation degree.
pub const MAX_TRUNC_DEGREE: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingParams {
    pub p: u32,
    #[serde(default = "default_m")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub e: u32,
    pub r: u32,
    /// Coefficients of E(u) from the constant term up; the last one is 1.
    pub eisenstein: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc_degree: Option<usize>,
}

fn default_m() -> u32 {
    1
}

impl RingParams {
    /// `E(u) = u^e − p` over `GF(p^m)`.
    pub fn standard(p: u32, m: u32, e: u32, r: u32) -> Self {
        let mut eis = vec![0i64; e as usize + 1];
        eis[0] = -(p as i64);
        eis[e as usize] = 1;
        RingParams { p, m, modulus: None, e, r, eisenstein: eis, trunc_degree: None }
    }

    pub fn with_eisenstein(mut self, coeffs: Vec<i64>) -> Self {
        self.eisenstein = coeffs;
        self
    }

    pub fn with_trunc_degree(mut self, d: usize) -> Self {
        self.trunc_degree = Some(d);
        self
    }

    pub fn default_trunc_degree(&self) -> usize {
        2 * (self.p as usize) * (self.p as usize)
    }

    /// Checks admissibility and the shape of E without building any tables.
    pub fn check(&self) -> Result<()> {
        let p = self.p;
        if !crate::gf::is_prime(p) {
            return Err(Error::params("p", format!("{p} is not prime")));
        }
        if self.m == 0 {
            return Err(Error::params("m", "extension degree must be at least 1"));
        }
        if self.e == 0 {
            return Err(Error::params("e", "ramification index must be positive"));
        }
        let er = self.e as u64 * self.r as u64;
        if er + 2 > p as u64 {
            return Err(Error::Inadmissible { p, e: self.e, r: self.r });
        }
        let e = self.e as usize;
        if self.eisenstein.len() != e + 1 {
            return Err(Error::params(
                "eisenstein",
                format!("expected {} coefficients (constant term first, monic), got {}", e + 1, self.eisenstein.len()),
            ));
        }
        if self.eisenstein[e] != 1 {
            return Err(Error::params("eisenstein", "polynomial must be monic"));
        }
        let pi = p as i64;
        if let Some(i) = (0..e).find(|&i| self.eisenstein[i].rem_euclid(pi) != 0) {
            return Err(Error::params("eisenstein", format!("coefficient a_{i} is not divisible by p")));
        }
        if (self.eisenstein[0] / pi).rem_euclid(pi) == 0 {
            return Err(Error::params("eisenstein", "a_0/p must be a unit mod p"));
        }
        if let Some(d) = self.trunc_degree {
            if d < self.default_trunc_degree() {
                return Err(Error::params("trunc_degree", format!("must be at least 2p^2 = {}", self.default_trunc_degree())));
            }
            if d > MAX_TRUNC_DEGREE {
                return Err(Error::params("trunc_degree", format!("must be at most {MAX_TRUNC_DEGREE}")));
            }
        } else if self.default_trunc_degree() > MAX_TRUNC_DEGREE {
            return Err(Error::params("p", "too large for the default truncation degree"));
        }
        if let Some(modulus) = &self.modulus {
            if modulus.len() != self.m as usize + 1 {
                return Err(Error::params("modulus", "length must be m + 1"));
            }
        }
        Ok(())
    }
}

/// Factorials mod p with precomputed inverse unit parts.
#[derive(Debug)]
pub(crate) struct ModPFactorials {
    p: u64,
    val: Vec<u64>,
    unit: Vec<u64>,
    unit_inv: Vec<u64>,
}

impl ModPFactorials {
    fn new(p: u32, max: usize) -> Self {
        let p = p as u64;
        let mut val = vec![0u64; max + 1];
        let mut unit = vec![1u64; max + 1];
        let mut stripped = vec![1u64; max + 1];
        for k in 1..=max {
            let mut x = k as u64;
            let mut v = 0;
            while x.is_multiple_of(p) {
                x /= p;
                v += 1;
            }
            stripped[k] = x % p;
            val[k] = val[k - 1] + v;
            unit[k] = unit[k - 1] * stripped[k] % p;
        }
        let mut unit_inv = vec![1u64; max + 1];
        unit_inv[max] = crate::gf::mod_pow(unit[max], p - 2, p);
        for k in (1..=max).rev() {
            unit_inv[k - 1] = unit_inv[k] * stripped[k] % p;
        }
        ModPFactorials { p, val, unit, unit_inv }
    }

    fn max(&self) -> usize {
        self.val.len() - 1
    }

    /// `a!/(b!·c!)` mod p.
    #[inline]
    pub(crate) fn multinomial(&self, a: usize, b: usize, c: usize) -> u64 {
        if self.val[a] > self.val[b] + self.val[c] {
            return 0;
        }
        self.unit[a] * self.unit_inv[b] % self.p * self.unit_inv[c] % self.p
    }

    #[inline]
    pub(crate) fn ratio(&self, a: usize, b: usize) -> u64 {
        self.multinomial(a, b, 0)
    }

    /// `(n!)^{-1}` mod p for `n < p`.
    pub(crate) fn inv_factorial(&self, n: usize) -> u64 {
        debug_assert!(self.val[n] == 0);
        self.unit_inv[n]
    }

    pub(crate) fn factorial(&self, n: usize) -> u64 {
        if self.val[n] > 0 {
            0
        } else {
            self.unit[n]
        }
    }
}

pub(crate) struct Inner {
    pub(crate) params: RingParams,
    pub(crate) field: GaloisField,
    pub(crate) p: usize,
    pub(crate) e: usize,
    pub(crate) r: usize,
    pub(crate) trunc: usize,
    pub(crate) fact: ModPFactorials,
    pub(crate) lift_ring: ZpN,
    pub(crate) lift_fact: FactorialTable,
    /// `h = (E − u^e)/p`, coefficients mod p^N.
    pub(crate) h: Vec<u64>,
    /// `φ_r(γ̃_i)` for `er ≤ i < D` as sparse prime-field images.
    pub(crate) phi_r_table: Vec<Vec<(usize, u32)>>,
    pub(crate) c: S1Elem,
    pub(crate) c_inv: S1Elem,
    pub(crate) c_neg_r: S1Elem,
    pub(crate) c_pi: FieldElem,
}

/// Shared handle to the ring data for one parameter set.
#[derive(Clone)]
pub struct DpRing {
    pub(crate) inner: Arc<Inner>,
}

impl std::fmt::Debug for DpRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DpRing")
            .field("p", &self.inner.p)
            .field("m", &self.inner.params.m)
            .field("e", &self.inner.e)
            .field("r", &self.inner.r)
            .field("trunc_degree", &self.inner.trunc)
            .finish()
    }
}

impl PartialEq for DpRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.params == other.inner.params && self.inner.field == other.inner.field)
    }
}

impl Eq for DpRing {}

impl DpRing {
    pub fn new(params: RingParams) -> Result<Self> {
        params.check()?;
        let field = match &params.modulus {
            Some(m) => GaloisField::from_params(&FieldParams { p: params.p, m: params.m, modulus: m.clone() })?,
            None => GaloisField::new(params.p, params.m)?,
        };
        let p = params.p as usize;
        let e = params.e as usize;
        let r = params.r as usize;
        let trunc = params.trunc_degree.unwrap_or_else(|| params.default_trunc_degree());
        // largest factorial argument: q(p·i) for i < D
        let fmax = (p * trunc) / e + 2;
        let fact = ModPFactorials::new(params.p, fmax);
        let lift_ring = ZpN::new(params.p, r.max(1) as u32 + 2)?;
        let lift_fact = FactorialTable::new(lift_ring, fmax);
        let h: Vec<u64> = params.eisenstein[..e]
            .iter()
            .map(|&a| lift_ring.reduce((a / params.p as i64) as i128))
            .collect();
        let zero = field.zero();
        let inner = Inner {
            params,
            field,
            p,
            e,
            r,
            trunc,
            fact,
            lift_ring,
            lift_fact,
            h,
            phi_r_table: Vec::new(),
            c: S1Elem::zero(),
            c_inv: S1Elem::zero(),
            c_neg_r: S1Elem::zero(),
            c_pi: zero,
        };
        debug_assert!(inner.fact.max() >= fmax);
        let mut ring = DpRing { inner: Arc::new(inner) };
        ring.finish_construction()?;
        Ok(ring)
    }

    fn finish_construction(&mut self) -> Result<()> {
        let table = (0..self.trunc_degree())
            .map(|i| {
                if i < self.er() {
                    Ok(Vec::new())
                } else if self.r() == 0 {
                    Ok(self.phi_basis_sparse(i))
                } else {
                    self.phi_r_basis_lifted(i)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let c = self.phi_1_of_eisenstein()?;
        let c_inv = self.s1_inv(&c).ok_or(Error::NotAUnit)?;
        let mut c_neg_r = self.one();
        for _ in 0..self.r() {
            c_neg_r = self.s1_mul(&c_neg_r, &c_inv);
        }
        let c_pi = self.project_tilde(&c).constant_term();
        {
            let inner = Arc::get_mut(&mut self.inner).expect("fresh ring handle");
            inner.phi_r_table = table;
            inner.c = c;
            inner.c_inv = c_inv;
            inner.c_neg_r = c_neg_r;
            inner.c_pi = c_pi;
        }
        self.self_test()
    }

    /// Construction-time checks of the facts the filtration and c rely on.
    fn self_test(&self) -> Result<()> {
        let f = self.field();
        // γ_n(E) ≡ γ̃_{en} mod p, so Fil^n S₁ is exactly the span of γ̃_i with q(i) ≥ n.
        for n in 0..=self.r() + 1 {
            if self.e() * n >= self.trunc_degree() {
                break;
            }
            let g = self.lift_gamma_e(n, 0).reduce(self);
            if g != self.basis(self.e() * n) {
                return Err(Error::SelfTest(format!("divided power γ_{n}(E) does not reduce to the basis element")));
            }
            let u_en = self.u_pow(self.e() * n);
            let nf = f.from_int(self.inner.fact.factorial(n) as i64);
            if u_en != g.scale(f, nf) {
                return Err(Error::SelfTest(format!("u^(e·{n}) is not n!·γ_{n}(E)")));
            }
        }
        let a0 = self.params().eisenstein[0] / self.p() as i64;
        if self.inner.c_pi != f.from_int(a0) || self.inner.c_pi.is_zero() {
            return Err(Error::SelfTest("constant term of c differs from a_0/p".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> &RingParams {
        &self.inner.params
    }

    pub fn field(&self) -> &GaloisField {
        &self.inner.field
    }

    pub fn p(&self) -> usize {
        self.inner.p
    }

    pub fn e(&self) -> usize {
        self.inner.e
    }

    pub fn r(&self) -> usize {
        self.inner.r
    }

    pub fn er(&self) -> usize {
        self.inner.e * self.inner.r
    }

    pub fn trunc_degree(&self) -> usize {
        self.inner.trunc
    }

    /// `q(i) = ⌊i/e⌋`.
    #[inline]
    pub fn q(&self, i: usize) -> usize {
        i / self.inner.e
    }

    /// The unit `c = φ₁(E)` of S₁.
    pub fn c(&self) -> &S1Elem {
        &self.inner.c
    }

    pub fn c_inv(&self) -> &S1Elem {
        &self.inner.c_inv
    }

    /// `c^{-r}`.
    pub fn c_neg_r(&self) -> &S1Elem {
        &self.inner.c_neg_r
    }

    /// Image of c in S̃, a nonzero constant.
    pub fn c_pi(&self) -> FieldElem {
        self.inner.c_pi
    }

    pub(crate) fn fact(&self) -> &ModPFactorials {
        &self.inner.fact
    }
}
