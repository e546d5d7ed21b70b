//! Arithmetic in the finite field F_{p^m}.
//!
//! An element is a single `u64` whose base-p digits are the coefficients of
//! the residue polynomial: the element sum c_i x^i is stored as sum c_i p^i.
//! With this encoding the prime subfield F_p is literally the range 0..p, so
//! scalars transfer between F_p and any extension without conversion. The
//! modulus is the lexicographically smallest monic irreducible polynomial of
//! degree m over F_p (ordered by the coefficient tuple (c_0, ..., c_{m-1})),
//! so a given (p, m) always yields the same field.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::ffalg::poly;

/// Largest allowed field order; keeps digit products inside `u64`.
const MAX_ORDER: u64 = 1 << 48;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The field F_{p^m} with a canonical modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    m: u32,
    q: u64,
    /// Coefficients c_0..c_{m-1} of the monic modulus x^m + sum c_i x^i.
    modulus: Vec<u64>,
}

/// An element of Gal(F_{p^m}/F_p), acting as x -> x^{p^j}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaloisElement {
    pub j: u32,
}

impl Field {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::BadModulus {
                p,
                m,
                reason: "degree must be at least 1".into(),
            });
        }
        let mut q: u64 = 1;
        for _ in 0..m {
            q = q.checked_mul(p).filter(|&v| v <= MAX_ORDER).ok_or(Error::FieldTooLarge { p, m })?;
        }
        let modulus = if m == 1 {
            vec![0]
        } else {
            canonical_modulus(p, m)?
        };
        Ok(Field { p, m, q, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order p^m.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// Embed an integer through F_p.
    pub fn from_u64(&self, c: u64) -> u64 {
        c % self.p
    }

    /// True if the element lies in the prime subfield.
    pub fn is_rational(&self, a: u64) -> bool {
        a < self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    pub fn rand_elem(&self, rng: &mut impl RngCore) -> u64 {
        // Rejection-free: bias is irrelevant for randomised search.
        rng.next_u64() % self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return a * b % self.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.m as usize;
        let mut da = [0u64; 64];
        let mut db = [0u64; 64];
        digits(self.p, a, &mut da);
        digits(self.p, b, &mut db);
        let mut prod = [0u64; 128];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += da[i] * db[j];
            }
        }
        // Reduce degrees 2m-2 down to m using x^m = -modulus tail.
        for i in (m..2 * m - 1).rev() {
            let c = prod[i] % self.p;
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &mj) in self.modulus.iter().enumerate() {
                if mj != 0 {
                    prod[i - m + j] += (self.p - mj) * c;
                }
            }
        }
        let mut out = 0;
        let mut place = 1;
        for item in prod.iter().take(m) {
            out += (item % self.p) * place;
            place *= self.p;
        }
        out
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero (a zero pivot is a caller bug).
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.q - 2)
    }

    /// Apply the Galois element x -> x^{p^j}.
    pub fn frobenius(&self, a: u64, sigma: GaloisElement) -> u64 {
        let j = sigma.j % self.m;
        let mut out = a;
        for _ in 0..j {
            out = self.pow(out, self.p);
        }
        out
    }

    /// The full Galois group as powers of the Frobenius.
    pub fn galois_group(&self) -> Vec<GaloisElement> {
        (0..self.m).map(|j| GaloisElement { j }).collect()
    }

    pub fn digits_of(&self, a: u64) -> Vec<u64> {
        let mut out = vec![0; self.m as usize];
        let mut a = a;
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }
}

fn digits(p: u64, mut a: u64, out: &mut [u64]) {
    let mut i = 0;
    while a > 0 {
        out[i] = a % p;
        a /= p;
        i += 1;
    }
}

/// Lexicographically smallest monic irreducible of degree m over F_p.
fn canonical_modulus(p: u64, m: u32) -> Result<Vec<u64>> {
    let fp = Field {
        p,
        m: 1,
        q: p,
        modulus: vec![0],
    };
    let m = m as usize;
    let mut total: u64 = 1;
    for _ in 0..m {
        total = total.saturating_mul(p);
    }
    for t in 0..total {
        let mut coeffs = Vec::with_capacity(m + 1);
        let mut v = t;
        for _ in 0..m {
            coeffs.push(v % p);
            v /= p;
        }
        coeffs.push(1);
        if poly::is_irreducible(&fp, &coeffs) {
            coeffs.pop();
            return Ok(coeffs);
        }
    }
    Err(Error::BadModulus {
        p,
        m: m as u32,
        reason: "no irreducible polynomial found (impossible)".into(),
    })
}
