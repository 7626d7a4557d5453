//! Minimal models, reduction types and the conductor for `p > 3`.

use std::fmt;

use crate::curve::{discriminant, CurveModel};
use crate::error::{Error, Result};
use crate::field_poly::{factorize, poly_valuation, Place, Poly, ResidueField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionType {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl ReductionType {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, Self::MultiplicativeSplit | Self::MultiplicativeNonsplit)
    }

    pub fn conductor_exponent(self) -> u8 {
        match self {
            Self::Good => 0,
            Self::MultiplicativeSplit | Self::MultiplicativeNonsplit => 1,
            Self::Additive => 2,
        }
    }

    /// `a_v` at a bad place: `+1` split, `-1` non-split, `0` additive.
    pub fn bad_trace(self) -> i8 {
        match self {
            Self::MultiplicativeSplit => 1,
            Self::MultiplicativeNonsplit => -1,
            Self::Good | Self::Additive => 0,
        }
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Good => "good",
            Self::MultiplicativeSplit => "mult_split",
            Self::MultiplicativeNonsplit => "mult_nonsplit",
            Self::Additive => "add",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalData {
    pub place: Place,
    pub v_delta: u32,
    /// `None` when `c4 = 0`.
    pub v_c4: Option<u32>,
    pub rtype: ReductionType,
    pub n_v: u8,
    pub a_v_bad: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductorData {
    pub locals: Vec<LocalData>,
    pub deg_n: u64,
}

impl ConductorData {
    pub fn local(&self, v: &Place) -> Option<&LocalData> {
        self.locals.iter().find(|l| &l.place == v)
    }

    pub fn is_bad(&self, v: &Place) -> bool {
        self.local(v).is_some()
    }

    /// `b_E = deg N - 4`.
    pub fn b_e(&self) -> i64 {
        self.deg_n as i64 - 4
    }
}

fn val(p: &Poly, pi: &Poly) -> Option<u32> {
    poly_valuation(p, &Place::Finite(pi.clone())).map(|v| v as u32)
}

/// Removes `π^4` from `a` and `π^6` from `b` while both are divisible.
pub fn minimal_model_at(model: &CurveModel, v: &Place) -> Result<(CurveModel, u32)> {
    let pi = v
        .poly()
        .ok_or_else(|| Error::Parameter("minimal_model_at needs a finite place; use model_at_infinity".into()))?;
    let mut m = model.short_model();
    let mut steps = 0;
    while val(&m.a, pi).is_none_or(|k| k >= 4) && val(&m.b, pi).is_none_or(|k| k >= 6) {
        m.a = m.a.exact_div(&pi.pow(4))?;
        m.b = m.b.exact_div(&pi.pow(6))?;
        steps += 1;
    }
    Ok((m, steps))
}

/// A short model minimal at every finite place.
pub fn global_minimal_model(model: &CurveModel) -> Result<CurveModel> {
    let mut m = model.short_model();
    let delta = discriminant(&m.a, &m.b);
    if delta.is_constant() {
        return Ok(m);
    }
    for (pi, e) in factorize(&delta, 0)?.factors {
        if e >= 12 {
            m = minimal_model_at(&m, &Place::Finite(pi))?.0;
        }
    }
    Ok(m)
}

/// `s^d·p(1/s)` for `d ≥ deg p`.
fn reverse_into(p: &Poly, d: usize) -> Poly {
    match p.deg() {
        None => p.clone(),
        Some(n) => {
            let mut c = p.coeffs().to_vec();
            c.reverse();
            Poly::new(p.q(), c).shift(d - n)
        }
    }
}

/// The curve at `v = ∞` as a model over `F_q[s]`, `s = 1/T`, minimal at `s`.
pub fn model_at_infinity(model: &CurveModel) -> Result<CurveModel> {
    Ok(model_at_infinity_weighted(model)?.0)
}

/// Also returns the net weight `w`: the coordinate change is `x_s = s^{2w} x`.
pub fn model_at_infinity_weighted(model: &CurveModel) -> Result<(CurveModel, i64)> {
    let m = model.short_model();
    let da = m.a.deg().unwrap_or(0);
    let db = m.b.deg().unwrap_or(0);
    let k = da.div_ceil(4).max(db.div_ceil(6));
    let at_inf = CurveModel { a: reverse_into(&m.a, 4 * k), b: reverse_into(&m.b, 6 * k), ..m };
    let s = Place::Finite(Poly::t(model.q()));
    let (min, steps) = minimal_model_at(&at_inf, &s)?;
    Ok((min, k as i64 - steps as i64))
}

/// Classifies a model that is already minimal at `v`.
///
/// For `v = ∞` the model must be the one returned by [`model_at_infinity`]
/// (coefficients in `s`); the classification then happens at `s = 0`.
pub fn reduction_type(model: &CurveModel, v: &Place) -> Result<LocalData> {
    let q = model.q();
    let pi = match v {
        Place::Finite(p) => p.clone(),
        Place::Infinite => Poly::t(q),
    };
    let m = model.short_model();
    if val(&m.a, &pi).is_none_or(|k| k >= 4) && val(&m.b, &pi).is_none_or(|k| k >= 6) {
        return Err(Error::NotMinimal(v.to_string()));
    }
    let delta = discriminant(&m.a, &m.b);
    let v_delta = val(&delta, &pi).ok_or(Error::SingularCurve)?;
    let c4 = m.a.scale((-48i64).rem_euclid(q as i64) as u64);
    let v_c4 = val(&c4, &pi);
    let rtype = if v_delta == 0 {
        ReductionType::Good
    } else if v_c4 == Some(0) {
        // reduced cubic (x - r)^2 (x - s): r = -3B/(2A), s = 3B/A, r - s = -9B/(2A)
        let k = ResidueField::new(&Place::Finite(pi.clone()))?;
        let num = k.reduce(&m.b).scale((-9i64).rem_euclid(q as i64) as u64);
        let den = k.reduce(&m.a).scale(2);
        let diff = k.mul(&num, &k.inv(&den)?);
        if k.chi(&diff) == 1 {
            ReductionType::MultiplicativeSplit
        } else {
            ReductionType::MultiplicativeNonsplit
        }
    } else {
        ReductionType::Additive
    };
    Ok(LocalData {
        place: v.clone(),
        v_delta,
        v_c4,
        rtype,
        n_v: rtype.conductor_exponent(),
        a_v_bad: rtype.bad_trace(),
    })
}

/// Minimalizes at `v` (including `∞`) and classifies.
pub fn local_data(model: &CurveModel, v: &Place) -> Result<LocalData> {
    match v {
        Place::Infinite => reduction_type(&model_at_infinity(model)?, v),
        Place::Finite(_) => reduction_type(&minimal_model_at(model, v)?.0, v),
    }
}

pub fn conductor(model: &CurveModel) -> Result<ConductorData> {
    let m = model.short_model();
    let delta = discriminant(&m.a, &m.b);
    if delta.is_zero() {
        return Err(Error::SingularCurve);
    }
    let mut places: Vec<Place> = if delta.is_constant() {
        Vec::new()
    } else {
        factorize(&delta, 0)?.factors.into_iter().map(|(p, _)| Place::Finite(p)).collect()
    };
    places.push(Place::Infinite);
    let mut locals = Vec::new();
    for v in &places {
        let l = local_data(&m, v)?;
        if l.n_v > 0 {
            locals.push(l);
        }
    }
    let deg_n = locals.iter().map(|l| l.n_v as u64 * l.place.deg() as u64).sum();
    Ok(ConductorData { locals, deg_n })
}

pub const CONDUCTOR_CSV_HEADER: &str = "curve_id,place,deg_v,v_delta,type,n_v,a_v";

/// Quotes a field containing commas (polynomial text does).
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One CSV line per bad place.
pub fn conductor_rows(curve_id: &str, data: &ConductorData) -> Vec<String> {
    data.locals
        .iter()
        .map(|l| {
            format!(
                "{curve_id},{},{},{},{},{},{}",
                csv_field(&l.place.to_string()),
                l.place.deg(),
                l.v_delta,
                l.rtype,
                l.n_v,
                l.a_v_bad
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::validate;
    use proptest::prelude::*;

    fn p5(c: &[i64]) -> Poly {
        Poly::from_i64(5, c)
    }

    fn curve(a: &str, b: &str) -> CurveModel {
        CurveModel::parse(5, a, b).unwrap()
    }

    fn t_place() -> Place {
        Place::finite(Poly::t(5)).unwrap()
    }

    #[test]
    fn descent_examples() {
        let (m, k) = minimal_model_at(&curve("0,0,0,0,1", "0,0,0,0,0,0,1"), &t_place()).unwrap();
        assert_eq!((m.a, m.b, k), (Poly::one(5), Poly::one(5), 1));
        let e = curve("0,1", "1");
        assert_eq!(minimal_model_at(&e, &t_place()).unwrap(), (e.clone(), 0));
        // T^8(1+T), T^12(2+T)
        let a = &Poly::t(5).pow(8) * &p5(&[1, 1]);
        let b = &Poly::t(5).pow(12) * &p5(&[2, 1]);
        let e = CurveModel::new(e.field, a, b).unwrap();
        let (m, k) = minimal_model_at(&e, &t_place()).unwrap();
        assert_eq!((m.a, m.b, k), (p5(&[1, 1]), p5(&[2, 1]), 2));
    }

    #[test]
    fn infinity_examples() {
        let m = model_at_infinity(&curve("0,1", "1")).unwrap();
        assert_eq!((m.a, m.b), (p5(&[0, 0, 0, 1]), Poly::t(5).pow(6)));
        let m = model_at_infinity(&curve("0", "1")).unwrap();
        assert_eq!((m.a, m.b), (Poly::zero(5), Poly::one(5)));
        let m = model_at_infinity(&curve("0", "0,1")).unwrap();
        assert_eq!((m.a, m.b), (Poly::zero(5), Poly::t(5).pow(5)));
    }

    #[test]
    fn classification_examples() {
        let e = curve("0,1", "1");
        let v = Place::finite(p5(&[2, 1])).unwrap();
        let l = reduction_type(&e, &v).unwrap();
        assert_eq!((l.rtype, l.a_v_bad, l.n_v), (ReductionType::MultiplicativeSplit, 1, 1));
        // reduced cubic x^3 + 3x + 1 = (x - 2)^2 (x - 1) over F_5
        let cubic = |x: u64| (x * x * x + 3 * x + 1) % 5;
        let roots: Vec<u64> = (0..5).filter(|&x| cubic(x) == 0).collect();
        assert_eq!(roots, vec![1, 2]);
        assert_eq!((3 * 2 * 2 + 3) % 5, 0, "x = 2 is a double root");

        let l = local_data(&e, &Place::Infinite).unwrap();
        assert_eq!((l.rtype, l.n_v, l.v_delta, l.v_c4), (ReductionType::Additive, 2, 9, Some(3)));
        let l = local_data(&e, &Place::finite(p5(&[1, 1])).unwrap()).unwrap();
        assert_eq!((l.rtype, l.n_v), (ReductionType::Good, 0));
    }

    #[test]
    fn non_minimal_rejected() {
        let e = curve("0,0,0,0,1", "0,0,0,0,0,0,1");
        assert!(matches!(reduction_type(&e, &t_place()), Err(Error::NotMinimal(_))));
    }

    #[test]
    fn conductor_examples() {
        let c = conductor(&curve("0,1", "1")).unwrap();
        assert_eq!(c.deg_n, 5);
        let places: Vec<String> = c.locals.iter().map(|l| format!("{}:{}", l.place, l.n_v)).collect();
        assert_eq!(places, vec!["2,1:1", "4,3,1:1", "inf:2"]);
        assert_eq!(conductor(&curve("0", "1")).unwrap().deg_n, 0);
        let c = conductor(&curve("0", "0,1")).unwrap();
        assert_eq!(c.deg_n, 4);
        assert!(c.locals.iter().all(|l| l.rtype == ReductionType::Additive));
    }

    #[test]
    fn csv_rows() {
        let c = conductor(&curve("0,1", "1")).unwrap();
        let rows = conductor_rows("ex", &c);
        assert_eq!(rows[0], "ex,\"2,1\",1,1,mult_split,1,1");
        assert_eq!(rows[1], "ex,\"4,3,1\",2,1,mult_split,1,1");
        assert_eq!(rows[2], "ex,inf,1,9,add,2,0");
    }

    /// `#E_v(κ_v)` of the reduced (possibly singular) cubic by exhaustion.
    fn reduced_count(e: &CurveModel, pi: &Poly) -> i64 {
        let k = ResidueField::new(&Place::Finite(pi.clone())).unwrap();
        let (a, b) = (k.reduce(&e.a), k.reduce(&e.b));
        1 + k
            .elements()
            .map(|x| {
                let fx = k.reduce(&(&(&(&k.mul(&x, &x) + &a) * &x) + &b));
                1 + k.chi(&fx) as i64
            })
            .sum::<i64>()
    }

    #[test]
    fn split_decision_matches_singular_point_counts() {
        // at a multiplicative place, #E_v = q_v + 1 - a_v counting the node once
        let mut seen = [false; 2];
        for (a, b) in [("0,1", "1"), ("1,1", "0,0,1"), ("2,0,1", "3,1"), ("1,2", "4,0,0,1"), ("3,1,1", "1,1,1")] {
            let e = curve(a, b);
            for l in conductor(&e).unwrap().locals {
                if let (Place::Finite(pi), true) = (&l.place, l.rtype.is_multiplicative()) {
                    let qv = 5i64.pow(pi.deg().unwrap() as u32);
                    let m = minimal_model_at(&e, &l.place).unwrap().0;
                    assert_eq!(reduced_count(&m, pi), qv + 1 - l.a_v_bad as i64, "{a};{b} at {pi}");
                    seen[(l.a_v_bad == 1) as usize] = true;
                }
            }
        }
        assert_eq!(seen, [true, true], "both split and non-split exercised");
    }

    fn translate(p: &Poly, c: u64) -> Poly {
        p.compose(&Poly::new(p.q(), vec![c, 1]))
    }

    fn arb_curve() -> impl Strategy<Value = CurveModel> {
        (prop::collection::vec(0u64..5, 0..4), prop::collection::vec(0u64..5, 0..5)).prop_filter_map(
            "non-isotrivial",
            |(a, b)| {
                let e = CurveModel::new(crate::field_poly::FieldConfig::new(5).unwrap(), Poly::new(5, a), Poly::new(5, b))
                    .ok()?;
                (!validate(&e).ok()?.is_isotrivial).then_some(e)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn degree_n_translation_invariant(e in arb_curve(), c in 1u64..5) {
            let moved = CurveModel { a: translate(&e.a, c), b: translate(&e.b, c), ..e.clone() };
            prop_assert_eq!(conductor(&moved).unwrap().deg_n, conductor(&e).unwrap().deg_n);
        }

        #[test]
        fn non_isotrivial_conductor_at_least_three(e in arb_curve()) {
            let c = conductor(&e).unwrap();
            prop_assert!(c.deg_n >= 3, "deg N = {} for {:?}", c.deg_n, e);
            prop_assert!(c.locals.iter().all(|l| (1..=2).contains(&l.n_v)));
        }
    }
}
