use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use super::field::{add_mod, inv_mod, sqrt_mod, sub_mod};
use crate::error::{Error, Result};

const KARATSUBA_THRESHOLD: usize = 32;

/// Dense univariate polynomial over `F_q`, coefficients ascending.
///
/// The zero polynomial has an empty coefficient vector; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    q: u64,
    c: Vec<u64>,
}

impl Poly {
    pub fn new(q: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        let mut p = Self { q, c: coeffs };
        p.trim();
        p
    }

    pub fn from_i64(q: u64, coeffs: &[i64]) -> Self {
        Self::new(q, coeffs.iter().map(|&c| c.rem_euclid(q as i64) as u64).collect())
    }

    pub fn zero(q: u64) -> Self {
        Self { q, c: Vec::new() }
    }

    pub fn one(q: u64) -> Self {
        Self::constant(q, 1)
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::new(q, vec![c])
    }

    /// The variable `T`.
    pub fn t(q: u64) -> Self {
        Self { q, c: vec![0, 1] }
    }

    pub fn monomial(q: u64, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(q, v)
    }

    /// Polynomial whose coefficients are the base-`q` digits of `index`
    /// (least significant digit is the constant term).
    pub fn from_index(q: u64, mut index: u64, len: usize) -> Self {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(index % q);
            index /= q;
        }
        Self::new(q, v)
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// Degree; `None` stands for the `-∞` degree of the zero polynomial.
    #[inline]
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for zero; handy in degree arithmetic.
    pub fn degree_i64(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn scale(&self, s: u64) -> Self {
        let s = s % self.q;
        if s == 0 {
            return Self::zero(self.q);
        }
        Self { q: self.q, c: self.c.iter().map(|&a| a * s % self.q).collect() }
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Self { q: self.q, c }
    }

    /// Returns `(lc, self / lc)`; the zero polynomial maps to `(0, 0)`.
    pub fn monic(&self) -> (u64, Self) {
        let lc = self.lc();
        if lc == 0 {
            return (0, self.clone());
        }
        let inv = inv_mod(lc, self.q).expect("nonzero leading coefficient");
        (lc, self.scale(inv))
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.q;
        self.c.iter().rev().fold(0, |acc, &c| add_mod(acc * x % self.q, c, self.q))
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(self.q);
        for &c in self.c.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(self.q, c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let q = self.q;
        Poly::new(q, self.c.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % q) * c % q).collect())
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut r = Poly::one(self.q);
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        r
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.q;
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(q), self.clone()));
        }
        let dl = d.c.len();
        let inv = inv_mod(d.lc(), q)?;
        let mut r = self.c.clone();
        let mut quo = vec![0; r.len() - dl + 1];
        for i in (0..quo.len()).rev() {
            let top = r[i + dl - 1];
            if top == 0 {
                continue;
            }
            let f = top * inv % q;
            quo[i] = f;
            for (j, &dc) in d.c.iter().enumerate() {
                r[i + j] = sub_mod(r[i + j], f * dc % q, q);
            }
        }
        r.truncate(dl - 1);
        Ok((Poly::new(q, quo), Poly::new(q, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient, failing if the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (quo, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InternalInconsistency(format!("{d} does not divide {self}")));
        }
        Ok(quo)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Exponent of `pi` in `self`; `None` for the zero polynomial.
    pub fn valuation_at(&self, pi: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (quo, r) = cur.div_rem(pi).ok()?;
            if !r.is_zero() {
                return Some(v);
            }
            v += 1;
            cur = quo;
        }
    }

    /// Strip every factor `pi` from `self`, returning the exponent removed.
    pub fn remove_factor(&mut self, pi: &Poly) -> u32 {
        let mut v = 0;
        while !self.is_zero() {
            let (quo, r) = self.div_rem(pi).expect("nonzero divisor");
            if !r.is_zero() {
                break;
            }
            *self = quo;
            v += 1;
        }
        v
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Result<Poly> {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(m)?;
        let mut r = Poly::one(self.q).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m)?;
            }
        }
        Ok(r)
    }

    pub fn pow_mod_big(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let mut r = Poly::one(self.q).rem(m)?;
        let base = self.rem(m)?;
        for i in (0..e.bits()).rev() {
            r = r.mul_mod(&r, m)?;
            if e.bit(i) {
                r = r.mul_mod(&base, m)?;
            }
        }
        Ok(r)
    }

    /// Extended Euclid: `(g, s, t)` with `g = s·a + t·b`, `g` monic.
    pub fn xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        a.check_field(b)?;
        if a.is_zero() && b.is_zero() {
            return Err(Error::BothZero);
        }
        let q = a.q;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(q), Poly::zero(q));
        let (mut t0, mut t1) = (Poly::zero(q), Poly::one(q));
        while !r1.is_zero() {
            let (quo, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&quo * &s1);
            let t = &t0 - &(&quo * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = inv_mod(r0.lc(), q)?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Square root in `F_q[T]`, or `None` when `self` is not a square.
    ///
    /// The root's leading coefficient is the smaller representative of the
    /// square root of the leading coefficient.
    pub fn sqrt(&self) -> Option<Poly> {
        let q = self.q;
        let Some(d) = self.deg() else {
            return Some(self.clone());
        };
        if d % 2 == 1 {
            return None;
        }
        let n = d / 2;
        let top = sqrt_mod(self.lc(), q)?;
        let inv_two_top = inv_mod(2 * top % q, q).ok()?;
        let mut g = vec![0u64; n + 1];
        g[n] = top;
        for k in 1..=n {
            let mut acc = self.c[2 * n - k];
            for i in (n - k + 1)..n {
                let j = 2 * n - k - i;
                if j > n - k && j < n {
                    acc = sub_mod(acc, g[i] * g[j] % q, q);
                }
            }
            g[n - k] = acc * inv_two_top % q;
        }
        let g = Poly::new(q, g);
        if &(&g * &g) == self {
            Some(g)
        } else {
            None
        }
    }

    pub fn is_square_free(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        let dp = self.derivative();
        if dp.is_zero() {
            return false;
        }
        gcd(self, &dp).map(|g| g.is_one()).unwrap_or(false)
    }

    pub fn parse(q: u64, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut v = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let c: i64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {tok:?} in {s:?}")))?;
            v.push(c.rem_euclid(q as i64) as u64);
        }
        Ok(Poly::new(q, v))
    }

    pub(crate) fn check_field(&self, other: &Poly) -> Result<()> {
        if self.q != other.q {
            return Err(Error::FieldMismatch(self.q, other.q));
        }
        Ok(())
    }
}

/// Monic gcd.
pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    a.check_field(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_zero() {
        let r = r0.rem(&r1)?;
        r0 = std::mem::replace(&mut r1, r);
    }
    Ok(r0.monic().1)
}

impl fmt::Display for Poly {
    /// Comma-separated ascending coefficients; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}] mod {}", self.q)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.q, rhs.q, "field mismatch");
        let q = self.q;
        let (long, short) = if self.c.len() >= rhs.c.len() { (self, rhs) } else { (rhs, self) };
        let mut c = long.c.clone();
        for (a, &b) in c.iter_mut().zip(short.c.iter()) {
            *a = add_mod(*a, b, q);
        }
        let mut p = Poly { q, c };
        p.trim();
        p
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.q, rhs.q, "field mismatch");
        let q = self.q;
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| sub_mod(self.coeff(i), rhs.coeff(i), q)).collect();
        let mut p = Poly { q, c };
        p.trim();
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let q = self.q;
        Poly { q, c: self.c.iter().map(|&a| if a == 0 { 0 } else { q - a }).collect() }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.q, rhs.q, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.q);
        }
        let c = mul_slices(&self.c, &rhs.c, self.q);
        let mut p = Poly { q: self.q, c };
        p.trim();
        p
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn schoolbook(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let sq = (q - 1) * (q - 1);
    let safe_terms = (u64::MAX / 2).checked_div(sq).map_or(usize::MAX, |t| t as usize);
    if a.len().min(b.len()) <= safe_terms {
        let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        for o in out.iter_mut() {
            *o %= q;
        }
    } else {
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y % q) % q;
            }
        }
    }
    out
}

fn add_into(dst: &mut [u64], src: &[u64], q: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = add_mod(*d, s, q);
    }
}

fn sub_into(dst: &mut [u64], src: &[u64], q: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = sub_mod(*d, s, q);
    }
}

fn sum_halves(lo: &[u64], hi: &[u64], q: u64) -> Vec<u64> {
    let mut s = lo.to_vec();
    if hi.len() > s.len() {
        s.resize(hi.len(), 0);
    }
    add_into(&mut s, hi, q);
    s
}

/// Karatsuba product of two nonempty coefficient slices.
pub(crate) fn mul_slices(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (la, lb) = (a.len(), b.len());
    if la.min(lb) <= KARATSUBA_THRESHOLD {
        return schoolbook(a, b, q);
    }
    let (short, long) = if la <= lb { (a, b) } else { (b, a) };
    if short.len() * 2 <= long.len() {
        let mut out = vec![0u64; la + lb - 1];
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let prod = mul_slices(short, chunk, q);
            add_into(&mut out[k * short.len()..], &prod, q);
        }
        return out;
    }
    let m = la.max(lb) / 2;
    let (a0, a1) = a.split_at(m.min(la));
    let (b0, b1) = b.split_at(m.min(lb));
    let z0 = mul_slices(a0, b0, q);
    let z2 = mul_slices(a1, b1, q);
    let mut z1 = mul_slices(&sum_halves(a0, a1, q), &sum_halves(b0, b1, q), q);
    sub_into(&mut z1, &z0, q);
    sub_into(&mut z1, &z2, q);
    let mut out = vec![0u64; la + lb - 1];
    add_into(&mut out, &z0, q);
    add_into(&mut out[m..], &z1, q);
    add_into(&mut out[2 * m..], &z2, q);
    out
}
