use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// The prime field `F_q`, `q = p > 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldConfig {
    q: u64,
}

impl FieldConfig {
    pub fn new(q: u64) -> Result<Self> {
        if !(5..=MAX_MODULUS).contains(&q) || !is_prime(q) {
            return Err(Error::InvalidField(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.q)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.q)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.q)
    }

    /// Inverse of a nonzero residue (Fermat).
    pub fn inv(&self, a: u64) -> Result<u64> {
        inv_mod(a, self.q)
    }

    /// Legendre symbol of `a` as -1, 0 or +1.
    pub fn legendre(&self, a: u64) -> i8 {
        legendre(a, self.q)
    }

    /// Square root of a residue, `None` for non-squares. Of the two roots the
    /// smaller representative is returned.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        sqrt_mod(a, self.q)
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % q;
        }
        a = a * a % q;
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, q: u64) -> Result<u64> {
    if a.is_multiple_of(q) {
        return Err(Error::DivisionByZero);
    }
    Ok(pow_mod(a, q - 2, q))
}

pub(crate) fn legendre(a: u64, q: u64) -> i8 {
    let a = a % q;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Exhaustive search up to `10^4`, Tonelli–Shanks above.
pub(crate) fn sqrt_mod(a: u64, q: u64) -> Option<u64> {
    let a = a % q;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, q) != 1 {
        return None;
    }
    let r = if q <= 10_000 {
        (1..q).find(|&x| x * x % q == a)?
    } else {
        tonelli_shanks(a, q)
    };
    Some(r.min(q - r))
}

fn tonelli_shanks(a: u64, q: u64) -> u64 {
    let mut s = 0;
    let mut odd = q - 1;
    while odd.is_multiple_of(2) {
        odd /= 2;
        s += 1;
    }
    let z = (2..q).find(|&z| legendre(z, q) == -1).expect("odd prime has a non-residue");
    let mut m = s;
    let mut c = pow_mod(z, odd, q);
    let mut t = pow_mod(a, odd, q);
    let mut r = pow_mod(a, odd.div_ceil(2), q);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % q;
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = b * b % q;
        }
        m = i;
        c = b * b % q;
        t = t * c % q;
        r = r * b % q;
    }
    r
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors by trial division.
pub(crate) fn prime_divisors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
