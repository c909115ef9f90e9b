//! Prime fields `F_p` with `p` an odd prime.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted. Keeps every product of two residues inside `u64`
/// with room to spare for lazy accumulation.
pub const MAX_PRIME: u32 = 1 << 20;

/// The prime field `F_p`. Elements are plain `u32` residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: 3 }
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::Config(
                "p = 2 is not supported: the algebra requires characteristic p > 2".into(),
            ));
        }
        if !is_prime(p) {
            return Err(Error::Config(format!("modulus {p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::Config(format!(
                "modulus {p} exceeds the supported maximum {MAX_PRIME}"
            )));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, (self.p - 2) as u64))
        }
    }

    /// `a` mapped to its signed representative in `(-p/2, p/2]`.
    pub fn signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `binom(n, k) mod p` by Lucas' theorem.
    pub fn binomial(self, mut n: u64, mut k: u64) -> u32 {
        if k > n {
            return 0;
        }
        let p = self.p as u64;
        let mut acc = 1u32;
        while k > 0 || n > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, self.small_binomial(nd as u32, kd as u32));
            n /= p;
            k /= p;
        }
        acc
    }

    // n < p, so every factor below is invertible.
    fn small_binomial(self, n: u32, k: u32) -> u32 {
        let k = k.min(n - k);
        let mut num = 1u32;
        let mut den = 1u32;
        for i in 0..k {
            num = self.mul(num, n - i);
            den = self.mul(den, i + 1);
        }
        self.mul(num, self.inv(den).expect("nonzero factorial below p"))
    }

    /// Multinomial coefficient `(sum parts)! / prod(parts!)` reduced mod `p`.
    pub fn multinomial(self, parts: &[u64]) -> u32 {
        let mut total = 0u64;
        let mut acc = 1u32;
        for &k in parts {
            total += k;
            acc = self.mul(acc, self.binomial(total, k));
            if acc == 0 {
                return 0;
            }
        }
        acc
    }
}
