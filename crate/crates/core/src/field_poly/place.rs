use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use super::factor::is_irreducible;
use super::poly::Poly;
use super::ratfn::RationalFn;
use crate::error::{Error, Result};

/// A place of `F_q(T)`: a monic irreducible polynomial or the place at infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinite,
}

impl Place {
    /// Validates that `p` is monic and irreducible.
    pub fn finite(p: Poly) -> Result<Self> {
        if !p.is_monic() || p.deg().unwrap_or(0) == 0 || !is_irreducible(&p)? {
            return Err(Error::NotAPlace(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    pub fn deg(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg().unwrap_or(0),
            Place::Infinite => 1,
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    /// `q_v = q^{deg v}`.
    pub fn residue_size(&self, q: u64) -> BigUint {
        BigUint::from(q).pow(self.deg() as u32)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

/// Order of vanishing of `x` at `v`; `deg den - deg num` at infinity.
pub fn valuation(x: &RationalFn, v: &Place) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    Ok(match v {
        Place::Infinite => x.den().degree_i64() - x.num().degree_i64(),
        Place::Finite(pi) => {
            let n = x.num().valuation_at(pi).unwrap_or(0) as i64;
            let d = x.den().valuation_at(pi).unwrap_or(0) as i64;
            n - d
        }
    })
}

/// Polynomial valuation; `None` stands for `+∞` (zero polynomial).
pub fn poly_valuation(p: &Poly, v: &Place) -> Option<i64> {
    if p.is_zero() {
        return None;
    }
    Some(match v {
        Place::Infinite => -p.degree_i64(),
        Place::Finite(pi) => p.valuation_at(pi).unwrap_or(0) as i64,
    })
}

/// Residue field `κ_v = F_q[T]/(v)` of a finite place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    modulus: Poly,
    size: BigUint,
}

impl ResidueField {
    pub fn new(v: &Place) -> Result<Arc<Self>> {
        match v {
            Place::Infinite => Err(Error::Parameter("residue field of the infinite place: use s = 1/T".into())),
            Place::Finite(p) => Ok(Arc::new(Self { modulus: p.clone(), size: v.residue_size(p.q()) })),
        }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn size(&self) -> &BigUint {
        &self.size
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg().unwrap_or(0)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.modulus).expect("modulus nonzero")
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&(a * b))
    }

    pub fn inv(&self, a: &Poly) -> Result<Poly> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (_, s, _) = Poly::xgcd(&a, &self.modulus)?;
        Ok(self.reduce(&s))
    }

    /// Euler criterion `a^{(q_v - 1)/2}`.
    pub fn chi(&self, a: &Poly) -> i8 {
        let a = self.reduce(a);
        if a.is_zero() {
            return 0;
        }
        let e = (&self.size - 1u32) / 2u32;
        let r = a.pow_mod_big(&e, &self.modulus).expect("modulus nonzero");
        if r.is_one() {
            1
        } else {
            -1
        }
    }

    /// Every element, as reduced representatives (only for small fields).
    pub fn elements(&self) -> impl Iterator<Item = Poly> + '_ {
        let q = self.modulus.q();
        let d = self.degree();
        let n = q.pow(d as u32);
        (0..n).map(move |i| Poly::from_index(q, i, d))
    }

    pub fn element(self: &Arc<Self>, rep: &Poly) -> ResidueElem {
        ResidueElem { rep: self.reduce(rep), field: Arc::clone(self) }
    }
}

/// An element of a residue field, stored as its reduced representative.
#[derive(Debug, Clone)]
pub struct ResidueElem {
    rep: Poly,
    field: Arc<ResidueField>,
}

impl ResidueElem {
    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }
}

/// Quadratic character of `κ_v`: 0, +1 on nonzero squares, -1 otherwise.
pub fn quadratic_character(a: &ResidueElem) -> i8 {
    a.field.chi(&a.rep)
}
