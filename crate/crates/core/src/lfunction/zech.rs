//! `F_{q^n}` through Zech logarithms, for bulk trace computation over all
//! places of a fixed degree.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field_poly::{is_irreducible, prime_divisors, Poly};

/// Elements are discrete logs to a primitive generator `g`; `zero()` is a sentinel.
pub struct ZechField {
    q: u64,
    n: usize,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl ZechField {
    pub fn new(q: u64, n: usize) -> Result<Self> {
        let size = q
            .checked_pow(n as u32)
            .filter(|&s| s <= u32::MAX as u64 / 2)
            .ok_or_else(|| Error::Budget(format!("F_{q}^{n} too large for log tables")))?;
        let order = (size - 1) as u32;
        let m = primitive_poly(q, n)?;
        let mc = m.coeffs();
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![order; size as usize];
        let mut cur = vec![0u64; n];
        cur[0] = 1;
        for (k, slot) in exp.iter_mut().enumerate() {
            let idx = cur.iter().rev().fold(0u64, |acc, &c| acc * q + c) as u32;
            *slot = idx;
            log[idx as usize] = k as u32;
            // multiply by the root of m
            let top = cur[n - 1];
            for j in (1..n).rev() {
                cur[j] = (cur[j - 1] + q - top * mc[j] % q) % q;
            }
            cur[0] = (q - top * mc[0] % q) % q;
        }
        let zech = exp
            .iter()
            .map(|&idx| {
                let d0 = idx as u64 % q;
                let plus_one = idx as u64 - d0 + (d0 + 1) % q;
                log[plus_one as usize]
            })
            .collect();
        Ok(Self { q, n, order, exp, log, zech })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `q^n - 1`, the multiplicative order.
    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        self.order
    }

    /// Log of the prime-field element `c`.
    #[inline]
    pub fn from_base(&self, c: u64) -> u32 {
        self.log[(c % self.q) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == self.order || b == self.order {
            return self.order;
        }
        let s = a as u64 + b as u64;
        (s % self.order as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == self.order {
            return b;
        }
        if b == self.order {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.order - a };
        let z = self.zech[d as usize];
        if z == self.order {
            return self.order;
        }
        self.mul(a, z)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.mul(a, self.order / 2)
    }

    /// Quadratic character: even logs are squares.
    #[inline]
    pub fn chi(&self, a: u32) -> i64 {
        if a == self.order {
            0
        } else if a.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn eval(&self, p: &Poly, x: u32) -> u32 {
        p.coeffs().iter().rev().fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), self.from_base(c)))
    }

    /// Logs of elements of exact degree `n` that are minimal in their Frobenius orbit.
    pub fn orbit_representatives(&self) -> Vec<u32> {
        let ord = self.order as u64;
        (0..self.order)
            .filter(|&l| {
                let mut c = l as u64;
                for _ in 1..self.n {
                    c = c * self.q % ord;
                    if c <= l as u64 {
                        return false;
                    }
                }
                true
            })
            .collect()
    }

    /// Minimal polynomial over `F_q` of `g^l`, an element of exact degree `n`.
    pub fn minimal_poly(&self, l: u32) -> Poly {
        let ord = self.order as u64;
        let mut coeffs = vec![0u32]; // the constant 1
        let mut c = l as u64;
        for _ in 0..self.n {
            let root = self.neg(c as u32);
            let mut next = vec![self.zero(); coeffs.len() + 1];
            for (j, &pj) in coeffs.iter().enumerate() {
                next[j + 1] = self.add(next[j + 1], pj);
                next[j] = self.add(next[j], self.mul(root, pj));
            }
            coeffs = next;
            c = c * self.q % ord;
        }
        let base = coeffs
            .iter()
            .map(|&lg| if lg == self.order { 0 } else { self.exp[lg as usize] as u64 })
            .collect::<Vec<_>>();
        debug_assert!(base.iter().all(|&c| c < self.q));
        Poly::new(self.q, base)
    }

    /// `-Σ_x χ(x^3 + A x + B)` over the whole field, with `A`, `B` given as logs.
    pub fn cubic_trace(&self, la: u32, lb: u32) -> i64 {
        let mut s = self.chi(lb);
        for lx in 0..self.order {
            let x3 = ((lx as u64 * 3) % self.order as u64) as u32;
            let t = self.add(self.add(x3, self.mul(la, lx)), lb);
            s += self.chi(t);
        }
        -s
    }
}

fn primitive_poly(q: u64, n: usize) -> Result<Poly> {
    let order = BigUint::from(q).pow(n as u32) - 1u32;
    let primes = prime_divisors(u128::try_from(&order).map_err(|_| Error::Budget("field too large".into()))?);
    let t = Poly::t(q);
    for i in 0..q.pow(n as u32) {
        let mut c = Poly::from_index(q, i, n).coeffs().to_vec();
        c.resize(n, 0);
        c.push(1);
        let m = Poly::new(q, c);
        if m.coeff(0) == 0 || !is_irreducible(&m)? {
            continue;
        }
        let one = Poly::one(q);
        let primitive = primes.iter().all(|&r| {
            let e = &order / BigUint::from(r);
            t.pow_mod_big(&e, &m).map(|p| p != one).unwrap_or(false)
        });
        if primitive {
            return Ok(m);
        }
    }
    Err(Error::InternalInconsistency(format!("no primitive polynomial of degree {n} over F_{q}")))
}
