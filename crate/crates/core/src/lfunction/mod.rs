//! Traces of Frobenius, the L-polynomial in `u = q^{-s}`, analytic rank and
//! the rank bounds driven by `deg N`.

mod zech;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use zech::ZechField;

use crate::curve::{discriminant, validate, CurveModel};
use crate::error::{Error, Result};
use crate::field_poly::{Place, Poly, ResidueField};
use crate::reduction::{conductor, global_minimal_model, local_data, model_at_infinity, ConductorData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AvSource {
    Counted,
    BadPlaceTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvRecord {
    pub place: Place,
    pub q_v: u64,
    pub a_v: i64,
    pub source: AvSource,
}

impl AvRecord {
    /// `a_v^2 ≤ 4 q_v`.
    pub fn hasse_ok(&self) -> bool {
        let a = self.a_v as i128;
        a * a <= 4 * self.q_v as i128
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    pub coeffs: Vec<BigInt>,
    pub b_e: i64,
}

impl LPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(), b_e: coeffs.len() as i64 - 1 }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Value at `u = 1/q` scaled by `q^{deg}` (an integer, zero iff `L(1/q) = 0`).
    pub fn scaled_value_at_inverse_q(&self, q: u64) -> BigInt {
        let n = self.coeffs.len();
        let q = BigInt::from(q);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * q.pow((n - 1 - k) as u32))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LExpansion {
    pub l: LPolynomial,
    /// Coefficients of `u^{b_E+1} .. u^{b_E+extra}`; all zero when consistent.
    pub tail: Vec<BigInt>,
    pub records: Vec<AvRecord>,
    pub conductor: ConductorData,
}

impl LExpansion {
    pub fn truncation_ok(&self) -> bool {
        self.tail.iter().all(Zero::is_zero)
    }

    pub fn hasse_ok(&self) -> bool {
        self.records.iter().all(AvRecord::hasse_ok)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankBounds {
    pub rank_an: Option<u32>,
    pub trivial_bound: i64,
    pub brumer_main_term: f64,
    pub brumer_error_scale: f64,
}

/// Limits on the bulk point count, in field operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountBudget {
    pub max_ops: u128,
}

impl Default for CountBudget {
    fn default() -> Self {
        Self { max_ops: 4_000_000_000 }
    }
}

impl CountBudget {
    /// Work for all places up to degree `d`: about `Σ_n q^{2n}/n`.
    pub fn estimate(q: u64, d: usize) -> u128 {
        (1..=d).map(|n| (q as u128).saturating_pow(2 * n as u32) / n as u128).sum()
    }
}

/// `#E_v(κ_v) = 1 + Σ_x (1 + χ(f(x)))` by exhausting `κ_v`.
pub fn count_points(model: &CurveModel, v: &Place) -> Result<u64> {
    let ld = local_data(model, v)?;
    if ld.n_v != 0 {
        return Err(Error::BadReduction(v.to_string()));
    }
    let (m, pi) = match v {
        Place::Infinite => (model_at_infinity(model)?, Poly::t(model.q())),
        Place::Finite(p) => (crate::reduction::minimal_model_at(model, v)?.0, p.clone()),
    };
    let k = ResidueField::new(&Place::Finite(pi))?;
    let (a, b) = (k.reduce(&m.a), k.reduce(&m.b));
    let mut n = 1u64;
    for x in k.elements() {
        let fx = k.reduce(&(&(&(&k.mul(&x, &x) + &a) * &x) + &b));
        n += (1 + k.chi(&fx) as i64) as u64;
    }
    let qv = k.size().to_string().parse::<i128>().unwrap_or(i128::MAX);
    let a_v = qv + 1 - n as i128;
    if a_v * a_v > 4 * qv {
        return Err(Error::InternalInconsistency(format!("Hasse bound violated at {v}")));
    }
    Ok(n)
}

/// `a_v = q_v + 1 - #E_v(κ_v)` through [`count_points`].
pub fn trace_direct(model: &CurveModel, v: &Place) -> Result<i64> {
    let n = count_points(model, v)?;
    let qv = q_power(model.q(), v.deg())?;
    Ok(qv as i64 + 1 - n as i64)
}

fn q_power(q: u64, d: usize) -> Result<u64> {
    q.checked_pow(d as u32).ok_or_else(|| Error::Budget(format!("q^{d} overflows")))
}

/// Traces at every good finite place of degree `n`, from one set of log tables.
///
/// `model` must be minimal at every finite place.
pub fn traces_of_degree(model: &CurveModel, n: usize) -> Result<Vec<(Poly, i64)>> {
    let q = model.q();
    let f = ZechField::new(q, n)?;
    let delta = discriminant(&model.a, &model.b);
    let trace_at = |theta: u32| -> Option<i64> {
        if f.eval(&delta, theta) == f.zero() {
            return None;
        }
        Some(f.cubic_trace(f.eval(&model.a, theta), f.eval(&model.b, theta)))
    };
    let reps = f.orbit_representatives();
    let mut out: Vec<(Poly, i64)> = reps
        .par_iter()
        .filter_map(|&l| trace_at(l).map(|a| (f.minimal_poly(l), a)))
        .collect();
    if n == 1 {
        if let Some(a) = trace_at(f.zero()) {
            out.push((Poly::t(q), a));
        }
    }
    out.sort();
    Ok(out)
}

/// `a_v` for every place of degree `≤ max_deg` plus `∞`, good and bad.
pub fn av_records(model: &CurveModel, max_deg: usize, budget: CountBudget) -> Result<(Vec<AvRecord>, ConductorData)> {
    let q = model.q();
    let need = CountBudget::estimate(q, max_deg);
    if need > budget.max_ops {
        return Err(Error::Budget(format!(
            "counting places up to degree {max_deg} over F_{q} needs ~{need} operations (budget {})",
            budget.max_ops
        )));
    }
    let cond = conductor(model)?;
    let m = global_minimal_model(model)?;
    let mut records = Vec::new();
    for n in 1..=max_deg {
        let qv = q_power(q, n)?;
        for (pi, a_v) in traces_of_degree(&m, n)? {
            records.push(AvRecord { place: Place::Finite(pi), q_v: qv, a_v, source: AvSource::Counted });
        }
    }
    if max_deg >= 1 {
        let inf = match cond.local(&Place::Infinite) {
            Some(l) => AvRecord { place: Place::Infinite, q_v: q, a_v: l.a_v_bad as i64, source: AvSource::BadPlaceTable },
            None => AvRecord {
                place: Place::Infinite,
                q_v: q,
                a_v: trace_direct(&m, &Place::Infinite)?,
                source: AvSource::Counted,
            },
        };
        records.push(inf);
    }
    for l in &cond.locals {
        if !l.place.is_infinite() && l.place.deg() <= max_deg {
            records.push(AvRecord {
                place: l.place.clone(),
                q_v: q_power(q, l.place.deg())?,
                a_v: l.a_v_bad as i64,
                source: AvSource::BadPlaceTable,
            });
        }
    }
    Ok((records, cond))
}

/// Power series `Π_v (local factor)^{-1}` up to `u^len-1`.
pub fn euler_product(records: &[AvRecord], cond: &ConductorData, len: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); len];
    if len == 0 {
        return s;
    }
    s[0] = BigInt::one();
    for r in records {
        let d = r.place.deg();
        if d >= len {
            continue;
        }
        let a = BigInt::from(r.a_v);
        match r.source {
            AvSource::Counted => {
                let qv = BigInt::from(r.q_v);
                for k in d..len {
                    let mut v = &s[k] + &a * &s[k - d];
                    if k >= 2 * d {
                        v -= &qv * &s[k - 2 * d];
                    }
                    s[k] = v;
                }
            }
            AvSource::BadPlaceTable => {
                let multiplicative = cond.local(&r.place).is_some_and(|l| l.rtype.is_multiplicative());
                if multiplicative {
                    for k in d..len {
                        let v = &s[k] + &a * &s[k - d];
                        s[k] = v;
                    }
                }
            }
        }
    }
    s
}

/// Full expansion with the consistency tail and the records it used.
pub fn l_expansion(model: &CurveModel, extra: usize, budget: CountBudget) -> Result<LExpansion> {
    let inv = validate(model)?;
    if inv.is_isotrivial {
        return Err(Error::IsotrivialUnsupported);
    }
    let cond = conductor(model)?;
    let b_e = cond.b_e();
    if b_e < 0 {
        return Err(Error::DegenerateConductor(cond.deg_n as i64));
    }
    let len = b_e as usize + extra + 1;
    let (records, cond) = av_records(model, len - 1, budget)?;
    let mut series = euler_product(&records, &cond, len);
    let tail = series.split_off(b_e as usize + 1);
    Ok(LExpansion { l: LPolynomial { coeffs: series, b_e }, tail, records, conductor: cond })
}

/// The L-polynomial, degree `b_E = deg N - 4`, checked against `extra` further coefficients.
pub fn l_polynomial(model: &CurveModel, extra: usize) -> Result<LPolynomial> {
    let e = l_expansion(model, extra, CountBudget::default())?;
    if !e.truncation_ok() {
        return Err(Error::InternalInconsistency(format!(
            "coefficients beyond degree b_E = {} do not vanish: {:?}",
            e.l.b_e, e.tail
        )));
    }
    Ok(e.l)
}

/// Order of vanishing at `u = 1/q` by exact division by `1 - q u`.
pub fn analytic_rank(l: &LPolynomial, q: u64) -> u32 {
    let q = BigInt::from(q);
    let mut c: Vec<BigInt> = l.coeffs[..=l.degree()].to_vec();
    let mut rank = 0;
    while c.len() > 1 {
        let n = c.len() - 1;
        let mut m = Vec::with_capacity(n);
        m.push(c[0].clone());
        for k in 1..n {
            let v = &c[k] + &q * &m[k - 1];
            m.push(v);
        }
        if !(&c[n] + &q * &m[n - 1]).is_zero() {
            break;
        }
        c = m;
        rank += 1;
    }
    rank
}

pub fn rank_bounds(deg_n: u64, q: u64) -> Result<RankBounds> {
    if deg_n < 5 {
        return Err(Error::DegenerateConductor(deg_n as i64));
    }
    let (n, lq) = (deg_n as f64, (q as f64).ln());
    Ok(RankBounds {
        rank_an: None,
        trivial_bound: deg_n as i64 - 4,
        brumer_main_term: (n - 8.0) * lq / (2.0 * n.ln()),
        brumer_error_scale: n * lq * lq / ((q as f64).sqrt() * n.ln().powi(2)),
    })
}

/// `exp(c · deg N · log q / log deg N)`.
pub fn theorem_envelope(c: f64, deg_n: u64, q: u64) -> f64 {
    let n = deg_n as f64;
    (c * n * (q as f64).ln() / n.ln()).exp()
}

/// `max |coeff|`, handy for reporting growth.
pub fn max_abs_coeff(l: &LPolynomial) -> BigInt {
    l.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
}
