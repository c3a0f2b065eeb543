//! Integers modulo `p^N` and factorials split into valuation and unit part.

use crate::error::{Error, Result};

/// The ring Z/p^N with N small enough that products fit in `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZpN {
    pub p: u64,
    pub n: u32,
    pub modulus: u64,
}

impl ZpN {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        let modulus = (p as u64)
            .checked_pow(n)
            .filter(|&m| m < (1u64 << 62))
            .ok_or_else(|| Error::Precision(format!("{p}^{n} does not fit in machine words")))?;
        Ok(ZpN { p: p as u64, n, modulus })
    }

    #[inline]
    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        let mut b = a % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit (an integer prime to p).
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (self.modulus as i128, (a % self.modulus) as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        (r == 1).then(|| self.reduce(t))
    }

    pub fn valuation(&self, mut a: u64) -> u32 {
        a %= self.modulus;
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// `a / p^k` for `a` divisible by `p^k`; `None` leaves a nonzero remainder.
    pub fn div_p_pow(&self, a: u64, k: u32) -> Option<u64> {
        let pk = self.p.pow(k);
        a.is_multiple_of(pk).then(|| a / pk)
    }
}

/// Legendre: `v_p(n!)`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}

/// `n!` as `p^{val} · unit` with the unit reduced mod `p^N`, tabulated up to a bound.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    ring: ZpN,
    val: Vec<u64>,
    unit: Vec<u64>,
}

impl FactorialTable {
    pub fn new(ring: ZpN, max: usize) -> Self {
        let mut val = Vec::with_capacity(max + 1);
        let mut unit = Vec::with_capacity(max + 1);
        val.push(0);
        unit.push(1 % ring.modulus);
        for k in 1..=max as u64 {
            let mut x = k;
            let mut v = 0;
            while x % ring.p == 0 {
                x /= ring.p;
                v += 1;
            }
            val.push(val[k as usize - 1] + v);
            unit.push(ring.mul(unit[k as usize - 1], x % ring.modulus));
        }
        FactorialTable { ring, val, unit }
    }

    pub fn ring(&self) -> ZpN {
        self.ring
    }

    pub fn max(&self) -> usize {
        self.val.len() - 1
    }

    pub fn valuation(&self, n: usize) -> u64 {
        self.val[n]
    }

    pub fn unit(&self, n: usize) -> u64 {
        self.unit[n]
    }

    /// `p^v · u` reduced mod `p^N` (zero once `v ≥ N`).
    fn assemble(&self, v: u64, u: u64) -> u64 {
        if v >= self.ring.n as u64 {
            0
        } else {
            self.ring.mul(self.ring.p.pow(v as u32), u)
        }
    }

    /// `a! / b!` for `a ≥ b`.
    pub fn ratio(&self, a: usize, b: usize) -> u64 {
        assert!(a >= b);
        let v = self.val[a] - self.val[b];
        let u = self.ring.mul(self.unit[a], self.ring.inv(self.unit[b]).unwrap());
        self.assemble(v, u)
    }

    /// `a! / (b! c!)`; requires `a ≥ b + c`.
    pub fn multinomial(&self, a: usize, b: usize, c: usize) -> u64 {
        assert!(a >= b + c);
        let v = self.val[a] - self.val[b] - self.val[c];
        let den = self.ring.mul(self.unit[b], self.unit[c]);
        let u = self.ring.mul(self.unit[a], self.ring.inv(den).unwrap());
        self.assemble(v, u)
    }

    /// `p^k / k!`, which is p-integral.
    pub fn p_pow_over_factorial(&self, k: usize) -> u64 {
        let v = k as u64 - self.val[k];
        self.assemble(v, self.ring.inv(self.unit[k]).unwrap())
    }
}
