//! Short-Weierstrass curves `y^2 = x^3 + ax + b` over `F_q(T)`, their
//! quadratic twists `d·y^2 = x^3 + ax + b`, and the group law.

use std::fmt;

use crate::error::{Error, Result};
use crate::field_poly::{FieldConfig, Poly, RationalFn};

/// A curve `d·y^2 = x^3 + a x + b` with `a, b ∈ F_q[T]` (`d = 1` unless `twist_d` is set).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveModel {
    pub a: Poly,
    pub b: Poly,
    pub field: FieldConfig,
    pub twist_d: Option<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveInvariants {
    pub discriminant: Poly,
    pub c4: Poly,
    pub j: RationalFn,
    pub is_constant: bool,
    pub is_isotrivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Infinity,
    Affine { x: RationalFn, y: RationalFn },
}

impl Point {
    pub fn affine(x: RationalFn, y: RationalFn) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&RationalFn> {
        match self {
            Point::Affine { x, .. } => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&RationalFn> {
        match self {
            Point::Affine { y, .. } => Some(y),
            Point::Infinity => None,
        }
    }

    /// Text form `x_num/x_den;y_num/y_den`, or `O`.
    pub fn parse(q: u64, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "O" {
            return Ok(Point::Infinity);
        }
        let (x, y) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("point {s:?} must look like \"x;y\" or \"O\"")))?;
        Ok(Point::Affine { x: RationalFn::parse(q, x)?, y: RationalFn::parse(q, y)? })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "{x};{y}"),
        }
    }
}

/// `-16(4a^3 + 27b^2)`.
pub fn discriminant(a: &Poly, b: &Poly) -> Poly {
    let q = a.q();
    let four_a3 = (&(a * a) * a).scale(4);
    let b2 = (b * b).scale(27);
    (&four_a3 + &b2).scale((-16i64).rem_euclid(q as i64) as u64)
}

impl CurveModel {
    pub fn new(field: FieldConfig, a: Poly, b: Poly) -> Result<Self> {
        let m = Self { a: a_in(field, a)?, b: a_in(field, b)?, field, twist_d: None };
        m.check_nonsingular()?;
        Ok(m)
    }

    /// Builds a curve from the polynomial text form of `a` and `b`.
    pub fn parse(q: u64, a: &str, b: &str) -> Result<Self> {
        let field = FieldConfig::new(q)?;
        Self::new(field, Poly::parse(q, a)?, Poly::parse(q, b)?)
    }

    fn check_nonsingular(&self) -> Result<()> {
        if discriminant(&self.a, &self.b).is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// The twist factor `d` (1 for an untwisted model).
    pub fn d(&self) -> Poly {
        self.twist_d.clone().unwrap_or_else(|| Poly::one(self.q()))
    }

    /// `x^3 + a x + b` evaluated at `x`.
    pub fn f_at(&self, x: &RationalFn) -> RationalFn {
        let a = RationalFn::from_poly(self.a.clone());
        let b = RationalFn::from_poly(self.b.clone());
        x.square().add(&a).mul(x).add(&b)
    }

    /// `x^3 + a x + b` at a polynomial `x`.
    pub fn f_poly(&self, x: &Poly) -> Poly {
        &(&(&(x * x) + &self.a) * x) + &self.b
    }

    /// The equivalent short model `y^2 = x^3 + a d^2 x + b d^3`.
    pub fn short_model(&self) -> CurveModel {
        match &self.twist_d {
            None => self.clone(),
            Some(d) => {
                let d2 = d * d;
                CurveModel { a: &self.a * &d2, b: &(&self.b * &d2) * d, field: self.field, twist_d: None }
            }
        }
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => y.square().mul_poly(&self.d()) == self.f_at(x),
        }
    }

    fn check(&self, p: &Point) -> Result<()> {
        if self.is_on_curve(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: y.neg() },
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 {
            if y1.add(y2).is_zero() {
                return Point::Infinity;
            }
            return self.double_unchecked(p).expect("y != 0 checked above");
        }
        let lambda = y2.sub(y1).div(&x2.sub(x1)).expect("distinct x");
        let x3 = lambda.square().mul_poly(&self.d()).sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
        Point::Affine { x: x3, y: y3 }
    }

    /// Duplication through `((3x^2+a)^2 - 8dxy^2)/(4dy^2)` and `F_{a,b}(x)/(8d^2y^3)`.
    pub fn double(&self, p: &Point) -> Result<Point> {
        self.check(p)?;
        self.double_unchecked(p)
    }

    fn double_unchecked(&self, p: &Point) -> Result<Point> {
        let (x, y) = match p {
            Point::Infinity => return Ok(Point::Infinity),
            Point::Affine { x, y } => (x, y),
        };
        if y.is_zero() {
            return Err(Error::TwoTorsion);
        }
        let d = self.d();
        let a = RationalFn::from_poly(self.a.clone());
        let x2 = x.square();
        let three_x2_a = x2.scale(3).add(&a);
        let y2 = y.square();
        let num = three_x2_a.square().sub(&x.mul(&y2).mul_poly(&d).scale(8));
        let den = y2.mul_poly(&d).scale(4);
        let new_x = num.div(&den)?;
        let y3 = y2.mul(y).mul_poly(&(&d * &d)).scale(8);
        let new_y = self.duplication_numerator(x).div(&y3)?;
        Ok(Point::Affine { x: new_x, y: new_y })
    }

    /// `F_{a,b}(x) = x^6 + 5ax^4 + 20bx^3 - 5a^2x^2 - 4abx - a^3 - 8b^2`.
    pub fn duplication_numerator(&self, x: &RationalFn) -> RationalFn {
        let k = |c: i64| self.field.reduce(c);
        let a = &self.a;
        let b = &self.b;
        let c = |p: Poly| RationalFn::from_poly(p);
        let x2 = x.square();
        let x3 = x2.mul(x);
        let x4 = x2.square();
        let x6 = x3.square();
        let terms = [
            x6,
            x4.mul_poly(a).scale(5),
            x3.mul_poly(b).scale(20),
            x2.mul_poly(&(a * a)).scale(k(-5)),
            x.mul_poly(&(a * b)).scale(k(-4)),
            c(-&(&(a * a) * a)),
            c((b * b).scale(k(-8))),
        ];
        terms.iter().skip(1).fold(terms[0].clone(), |acc, t| acc.add(t))
    }

    /// x-coordinate of `[2]P` from `x(P)` alone: `((3x^2+a)^2 - 8x·f(x)) / (4 f(x))`.
    ///
    /// The same map serves the twisted model `d·y^2 = f(x)`.
    pub fn x_only_double(&self, x: &RationalFn) -> Result<RationalFn> {
        let fx = self.f_at(x);
        if fx.is_zero() {
            return Err(Error::TwoTorsion);
        }
        let a = RationalFn::from_poly(self.a.clone());
        let num = x.square().scale(3).add(&a).square().sub(&x.mul(&fx).scale(8));
        num.div(&fx.scale(4))
    }

    /// `[n]P` by double-and-add.
    pub fn scalar_mul(&self, n: u64, p: &Point) -> Result<Point> {
        self.check(p)?;
        let mut acc = Point::Infinity;
        for i in (0..64 - n.leading_zeros()).rev() {
            acc = self.add_unchecked(&acc, &acc);
            if (n >> i) & 1 == 1 {
                acc = self.add_unchecked(&acc, p);
            }
        }
        Ok(acc)
    }

    /// `[n]P` for signed `n`.
    pub fn scalar_mul_signed(&self, n: i64, p: &Point) -> Result<Point> {
        let r = self.scalar_mul(n.unsigned_abs(), p)?;
        Ok(if n < 0 { self.neg(&r) } else { r })
    }
}

fn a_in(field: FieldConfig, p: Poly) -> Result<Poly> {
    if p.q() != field.q() {
        return Err(Error::FieldMismatch(p.q(), field.q()));
    }
    Ok(p)
}

/// Discriminant, `c4`, `j` and constancy flags of the (short form of the) model.
pub fn validate(model: &CurveModel) -> Result<CurveInvariants> {
    if let Some(d) = &model.twist_d {
        if d.is_zero() || !d.is_square_free() {
            return Err(Error::NotSquareFree(d.to_string()));
        }
    }
    let short = model.short_model();
    let discriminant = discriminant(&short.a, &short.b);
    if discriminant.is_zero() {
        return Err(Error::SingularCurve);
    }
    let c4 = short.a.scale(model.field.reduce(-48));
    let j = RationalFn::new(&(&c4 * &c4) * &c4, discriminant.clone())?;
    Ok(CurveInvariants {
        is_constant: short.a.is_constant() && short.b.is_constant(),
        is_isotrivial: j.is_constant(),
        discriminant,
        c4,
        j,
    })
}

/// The twist `d·y^2 = x^3 + ax + b` together with its short model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistPair {
    pub twisted: CurveModel,
    pub short: CurveModel,
}

impl TwistPair {
    /// `(x, y) ↦ (d x, d^2 y)` from the twisted to the short model.
    pub fn to_short(&self, p: &Point) -> Point {
        let d = self.twisted.d();
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.mul_poly(&d), y: y.mul_poly(&(&d * &d)) },
        }
    }

    pub fn to_twisted(&self, p: &Point) -> Result<Point> {
        let d = RationalFn::from_poly(self.twisted.d());
        match p {
            Point::Infinity => Ok(Point::Infinity),
            Point::Affine { x, y } => Ok(Point::Affine { x: x.div(&d)?, y: y.div(&d.square())? }),
        }
    }
}

pub fn quadratic_twist(model: &CurveModel, d: &Poly) -> Result<TwistPair> {
    if model.twist_d.is_some() {
        return Err(Error::Parameter("model is already twisted".into()));
    }
    if d.is_zero() || !d.is_square_free() {
        return Err(Error::NotSquareFree(d.to_string()));
    }
    let twisted = CurveModel { twist_d: if d.is_one() { None } else { Some(d.clone()) }, ..model.clone() };
    let short = twisted.short_model();
    Ok(TwistPair { twisted, short })
}
