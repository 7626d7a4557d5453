use std::fmt;

use super::poly::{gcd, Poly};
use crate::error::{Error, Result};

/// Reduced fraction `num/den` in `F_q(T)` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.check_field(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.q()));
        }
        let g = gcd(&num, &den)?;
        let (num, den) = if g.is_one() { (num, den) } else { (num.exact_div(&g)?, den.exact_div(&g)?) };
        let (lc, den) = den.monic();
        let num = num.scale(super::field::inv_mod(lc, num.q())?);
        Ok(Self { num, den })
    }

    /// Skips the gcd; the caller guarantees coprimality.
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> Self {
        let (lc, den) = den.monic();
        let num = num.scale(super::field::inv_mod(lc, num.q()).expect("nonzero denominator"));
        Self { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let q = p.q();
        Self { num: p, den: Poly::one(q) }
    }

    pub fn zero(q: u64) -> Self {
        Self { num: Poly::zero(q), den: Poly::one(q) }
    }

    pub fn one(q: u64) -> Self {
        Self::from_poly(Poly::one(q))
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::from_poly(Poly::constant(q, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn q(&self) -> u64 {
        self.num.q()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value lies in `F_q`.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// `log_q H(x) = max(deg num, deg den)`.
    pub fn height(&self) -> u64 {
        self.num.degree_i64().max(self.den.degree_i64()).max(0) as u64
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone()).expect("nonzero den");
        }
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero den")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        // cross-cancel first to keep products small
        let g1 = gcd(&self.num, &o.den).unwrap_or_else(|_| Poly::one(self.q()));
        let g2 = gcd(&o.num, &self.den).unwrap_or_else(|_| Poly::one(self.q()));
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.q());
        }
        let n = &self.num.exact_div(&g1).unwrap() * &o.num.exact_div(&g2).unwrap();
        let d = &self.den.exact_div(&g2).unwrap() * &o.den.exact_div(&g1).unwrap();
        Self::from_coprime(n, d)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn scale(&self, c: u64) -> Self {
        if c.is_multiple_of(self.q()) {
            return Self::zero(self.q());
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn square(&self) -> Self {
        Self { num: &self.num * &self.num, den: &self.den * &self.den }
    }

    /// `num/den` with `/den` omitted when the denominator is 1.
    pub fn parse(q: u64, s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((n, d)) => Self::new(Poly::parse(q, n)?, Poly::parse(q, d)?),
            None => Ok(Self::from_poly(Poly::parse(q, s)?)),
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn[{self}] mod {}", self.q())
    }
}
