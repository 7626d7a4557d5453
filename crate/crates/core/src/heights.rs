//! Naive and canonical heights (log_q units), local heights at good places,
//! the height pairing, Gram matrices and the twist height identities.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::curve::{discriminant, quadratic_twist, CurveModel, Point};
use crate::error::{Error, Result};
use crate::field_poly::{factorize, valuation, Place, Poly, RationalFn};
use crate::reduction::{local_data, minimal_model_at, model_at_infinity_weighted};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightOptions {
    pub tol: f64,
    pub k_max: u32,
    /// Largest polynomial degree the doubling iteration may produce.
    pub degree_budget: usize,
}

impl Default for HeightOptions {
    fn default() -> Self {
        Self { tol: 1e-3, k_max: 10, degree_budget: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeightValue {
    pub value: f64,
    pub converged: bool,
    pub iterations: u32,
    /// Detected exactly: the doubling orbit closed up or reached `O`.
    pub torsion: bool,
    /// `4^{-k} h_x([2^k]P)` for `k = 0, 1, ...`.
    pub estimates: Vec<f64>,
}

impl HeightValue {
    fn torsion(iterations: u32, estimates: Vec<f64>) -> Self {
        Self { value: 0.0, converged: true, iterations, torsion: true, estimates }
    }
}

/// `h_x(P) = max(deg x_num, deg x_den)`; `0` at `O`.
pub fn naive_height_x(p: &Point) -> u64 {
    p.x().map_or(0, RationalFn::height)
}

/// Canonical heights on one model, with the primes of `Δ` factored once and a cache keyed by `x(P)`.
pub struct HeightEngine {
    model: CurveModel,
    opts: HeightOptions,
    delta_primes: Vec<Poly>,
    cache: Mutex<HashMap<RationalFn, HeightValue>>,
}

impl HeightEngine {
    pub fn new(model: &CurveModel, opts: HeightOptions) -> Result<Self> {
        let delta = discriminant(&model.a, &model.b);
        if delta.is_zero() {
            return Err(Error::SingularCurve);
        }
        let delta_primes = if delta.is_constant() {
            Vec::new()
        } else {
            factorize(&delta, 0)?.factors.into_iter().map(|(p, _)| p).collect()
        };
        Ok(Self { model: model.clone(), opts, delta_primes, cache: Mutex::new(HashMap::new()) })
    }

    pub fn model(&self) -> &CurveModel {
        &self.model
    }

    pub fn options(&self) -> HeightOptions {
        self.opts
    }

    /// One x-only doubling on `(X : Z)`; the common factor can only involve primes of `Δ`.
    fn double_xz(&self, x: &Poly, z: &Poly) -> (Poly, Poly) {
        let q = self.model.q();
        let (a, b) = (&self.model.a, &self.model.b);
        let x2 = x * x;
        let z2 = z * z;
        let xz = x * z;
        let z4 = &z2 * &z2;
        let mut nx = &x2 * &x2;
        nx = &nx - &(&(a * &x2) * &z2).scale(2);
        nx = &nx - &(&(b * &xz) * &z2).scale(8);
        nx = &nx + &(&(a * a) * &z4);
        let inner = &(x * &(&x2 + &(a * &z2))) + &(b * &(z * &z2));
        let mut nz = (z * &inner).scale(4 % q);
        for pi in &self.delta_primes {
            while !nz.is_zero() && pi.divides(&nx) && pi.divides(&nz) {
                nx = nx.exact_div(pi).expect("divisible");
                nz = nz.exact_div(pi).expect("divisible");
            }
        }
        (nx, nz)
    }

    /// `ĥ(P) = lim 4^{-k} h_x([2^k]P)`; stops once the last gap is below `tol`
    /// and the one before it below `4·tol`.
    pub fn canonical(&self, p: &Point) -> Result<HeightValue> {
        let x = match p {
            Point::Infinity => return Ok(HeightValue::torsion(0, vec![0.0])),
            Point::Affine { x, y } => {
                if !self.model.is_on_curve(p) {
                    return Err(Error::NotOnCurve);
                }
                if y.is_zero() {
                    return Ok(HeightValue::torsion(0, vec![x.height() as f64]));
                }
                x
            }
        };
        if let Some(h) = self.cache.lock().expect("cache lock").get(x) {
            return Ok(h.clone());
        }
        let h = self.iterate(x);
        self.cache.lock().expect("cache lock").insert(x.clone(), h.clone());
        Ok(h)
    }

    fn iterate(&self, x: &RationalFn) -> HeightValue {
        let (mut nx, mut nz) = (x.num().clone(), x.den().clone());
        let height = |a: &Poly, b: &Poly| a.degree_i64().max(b.degree_i64()).max(0) as f64;
        let mut estimates = vec![height(&nx, &nz)];
        let mut seen = HashSet::new();
        seen.insert((nx.clone(), nz.clone()));
        let mut prev_gap = f64::INFINITY;
        for k in 1..=self.opts.k_max {
            let d = nx.deg().unwrap_or(0).max(nz.deg().unwrap_or(0));
            if 4 * d.max(1) > self.opts.degree_budget {
                return self.unconverged(k - 1, estimates);
            }
            let (x2, z2) = self.double_xz(&nx, &nz);
            if z2.is_zero() {
                return HeightValue::torsion(k, estimates);
            }
            let (lc, z2) = z2.monic();
            let x2 = x2.scale(crate::field_poly::inv_mod(lc, self.model.q()).expect("nonzero"));
            (nx, nz) = (x2, z2);
            let h = height(&nx, &nz);
            if h <= 256.0 && !seen.insert((nx.clone(), nz.clone())) {
                return HeightValue::torsion(k, estimates);
            }
            let est = h / 4f64.powi(k as i32);
            let gap = (est - estimates.last().unwrap()).abs();
            estimates.push(est);
            // errors shrink like 4^{-k}: the previous gap must already be near tol
            if gap < self.opts.tol && prev_gap < 4.0 * self.opts.tol {
                return HeightValue { value: est, converged: true, iterations: k, torsion: false, estimates };
            }
            prev_gap = gap;
        }
        self.unconverged(self.opts.k_max, estimates)
    }

    fn unconverged(&self, iterations: u32, estimates: Vec<f64>) -> HeightValue {
        let value = *estimates.last().unwrap();
        HeightValue { value, converged: false, iterations, torsion: false, estimates }
    }

    /// Converged height or `NotConverged`.
    pub fn value(&self, p: &Point) -> Result<f64> {
        let h = self.canonical(p)?;
        if !h.converged {
            return Err(Error::NotConverged(format!("{p} after {} doublings", h.iterations)));
        }
        Ok(h.value)
    }

    /// `⟨P, Q⟩ = (ĥ(P+Q) - ĥ(P) - ĥ(Q)) / 2`.
    pub fn pairing(&self, p: &Point, q: &Point) -> Result<f64> {
        if p == q {
            return self.value(p);
        }
        let s = self.model.add(p, q)?;
        Ok((self.value(&s)? - self.value(p)? - self.value(q)?) / 2.0)
    }

    /// Exact torsion test, falling back to an order search up to `max_order` for tiny heights.
    pub fn torsion_status(&self, p: &Point, max_order: u64) -> Result<TorsionStatus> {
        let h = self.canonical(p)?;
        if h.torsion {
            return Ok(TorsionStatus::Torsion);
        }
        if h.converged && h.value >= 1e-4 {
            return Ok(TorsionStatus::NonTorsion);
        }
        let mut acc = p.clone();
        for _ in 1..max_order {
            acc = self.model.add(&acc, p)?;
            if acc.is_infinity() {
                return Ok(TorsionStatus::Torsion);
            }
        }
        Ok(if h.converged { TorsionStatus::Unresolved } else { TorsionStatus::NonTorsion })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionStatus {
    Torsion,
    NonTorsion,
    /// Tiny height yet no small order: flagged for review.
    Unresolved,
}

pub fn canonical_height(model: &CurveModel, p: &Point, opts: HeightOptions) -> Result<HeightValue> {
    HeightEngine::new(model, opts)?.canonical(p)
}

pub fn height_pairing(model: &CurveModel, p: &Point, q: &Point, opts: HeightOptions) -> Result<f64> {
    HeightEngine::new(model, opts)?.pairing(p, q)
}

/// `½·max(-v(x(P)), 0)` at a good place `v` of a model minimal there.
pub fn local_height_good(model: &CurveModel, p: &Point, v: &Place) -> Result<f64> {
    let ld = local_data(model, v)?;
    if ld.n_v != 0 {
        return Err(Error::BadReduction(v.to_string()));
    }
    let x = match p {
        Point::Infinity => return Ok(0.0),
        Point::Affine { x, .. } => x.mul_poly(&model.d()),
    };
    if x.is_zero() {
        return Ok(0.0);
    }
    let vx = match v {
        Place::Finite(_) => {
            if minimal_model_at(model, v)?.1 != 0 {
                return Err(Error::NotMinimal(v.to_string()));
            }
            valuation(&x, v)?
        }
        Place::Infinite => valuation(&x, v)? + 2 * model_at_infinity_weighted(model)?.1,
    };
    Ok(0.5 * (-vx).max(0) as f64)
}

#[derive(Debug, Clone)]
pub struct GramData {
    pub points: Vec<Point>,
    pub heights: Vec<HeightValue>,
    pub gram: DMatrix<f64>,
    /// Determinant of the full Gram matrix.
    pub regulator: f64,
    /// `arccos(⟨P,Q⟩/√(ĥ(P)ĥ(Q)))`; `NaN` when either height is zero.
    pub angles: DMatrix<f64>,
    /// Indices of a maximal independent subset, chosen greedily by increasing height.
    pub independent: Vec<usize>,
    /// Indices whose classification could not be certified.
    pub flagged: Vec<usize>,
}

impl GramData {
    pub fn rank_lower_bound(&self) -> usize {
        self.independent.len()
    }
}

/// Schur-complement ratio below which a point is examined for an exact relation.
pub const DEPENDENCE_RATIO: f64 = 0.05;
/// Uncertified points below this ratio count as dependent (and are flagged).
pub const DETERMINANT_THRESHOLD: f64 = 1e-4;
const MAX_MULTIPLIER: i64 = 12;

pub fn gram_and_angles(model: &CurveModel, points: &[Point], opts: HeightOptions) -> Result<GramData> {
    gram_with_engine(&HeightEngine::new(model, opts)?, points)
}

pub fn gram_with_engine(engine: &HeightEngine, points: &[Point]) -> Result<GramData> {
    let n = points.len();
    let heights: Vec<HeightValue> = points.par_iter().map(|p| engine.canonical(p)).collect::<Result<_>>()?;
    for (p, h) in points.iter().zip(&heights) {
        if !h.converged {
            return Err(Error::NotConverged(p.to_string()));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let off: Vec<f64> = pairs.par_iter().map(|&(i, j)| engine.pairing(&points[i], &points[j])).collect::<Result<_>>()?;
    let mut gram = DMatrix::from_fn(n, n, |i, j| if i == j { heights[i].value } else { 0.0 });
    for (&(i, j), &v) in pairs.iter().zip(&off) {
        gram[(i, j)] = v;
        gram[(j, i)] = v;
    }
    let angles = DMatrix::from_fn(n, n, |i, j| {
        let (hi, hj) = (gram[(i, i)], gram[(j, j)]);
        if hi <= 0.0 || hj <= 0.0 {
            f64::NAN
        } else {
            (gram[(i, j)] / (hi * hj).sqrt()).clamp(-1.0, 1.0).acos()
        }
    });
    let regulator = if n == 0 { 1.0 } else { gram.determinant() };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| heights[i].value.total_cmp(&heights[j].value).then(i.cmp(&j)));
    let mut independent: Vec<usize> = Vec::new();
    let mut flagged = Vec::new();
    for &k in &order {
        match engine.torsion_status(&points[k], 100)? {
            TorsionStatus::Torsion => continue,
            TorsionStatus::Unresolved => {
                flagged.push(k);
                continue;
            }
            TorsionStatus::NonTorsion => {}
        }
        if independent.is_empty() {
            independent.push(k);
            continue;
        }
        let m = independent.len();
        let g = DMatrix::from_fn(m, m, |r, c| gram[(independent[r], independent[c])]);
        let b = DVector::from_fn(m, |r, _| gram[(independent[r], k)]);
        let coeffs = match g.clone().cholesky() {
            Some(ch) => ch.solve(&b),
            None => return Err(Error::InternalInconsistency("basis Gram matrix not positive definite".into())),
        };
        let residual = gram[(k, k)] - b.dot(&coeffs);
        let ratio = residual / gram[(k, k)];
        if ratio >= DEPENDENCE_RATIO {
            independent.push(k);
            continue;
        }
        let basis: Vec<&Point> = independent.iter().map(|&i| &points[i]).collect();
        if certify_relation(engine, &points[k], &basis, coeffs.as_slice())? {
            continue;
        }
        flagged.push(k);
        if ratio >= DETERMINANT_THRESHOLD {
            independent.push(k);
        }
    }
    independent.sort_unstable();
    flagged.sort_unstable();
    Ok(GramData { points: points.to_vec(), heights, gram, regulator, angles, independent, flagged })
}

/// Looks for `m·Q - Σ n_i P_i` torsion with `n_i ≈ m·c_i`, `1 ≤ m ≤ 12`.
fn certify_relation(engine: &HeightEngine, q: &Point, basis: &[&Point], c: &[f64]) -> Result<bool> {
    let e = engine.model();
    for m in 1..=MAX_MULTIPLIER {
        let scaled: Vec<f64> = c.iter().map(|&ci| ci * m as f64).collect();
        if scaled.iter().any(|s| (s - s.round()).abs() > 0.05) {
            continue;
        }
        let mut r = e.scalar_mul(m as u64, q)?;
        for (p, s) in basis.iter().zip(&scaled) {
            let t = e.scalar_mul_signed(s.round() as i64, p)?;
            r = e.add(&r, &e.neg(&t))?;
        }
        if engine.torsion_status(&r, 100)? == TorsionStatus::Torsion {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistRow {
    pub point: Point,
    /// ĥ by x-only doubling on the twisted model.
    pub h_twist: HeightValue,
    /// ĥ of the image `(d x, d^2 y)` on the short model.
    pub h_short: HeightValue,
    pub same_height: bool,
    /// `h_y(P') = ½·h(d y^2)`; `None` when `y = 0`.
    pub h_y_prime: Option<f64>,
    /// `h_y(P') ≥ (3/8)·deg d`, checked as `4·h(d y^2) ≥ 3·deg d`.
    pub y_height_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistReport {
    pub d: Poly,
    pub rows: Vec<TwistRow>,
    /// `min (ĥ(P) - deg d / 8)` over non-torsion points.
    pub c_f: Option<f64>,
}

impl TwistReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.same_height && r.y_height_ok != Some(false))
    }
}

/// Height identities for points on `d·y^2 = x^3 + ax + b`.
pub fn twist_height_report(model: &CurveModel, d: &Poly, points: &[Point], opts: HeightOptions) -> Result<TwistReport> {
    let pair = quadratic_twist(model, d)?;
    let tw = HeightEngine::new(&pair.twisted, opts)?;
    let sh = HeightEngine::new(&pair.short, opts)?;
    let deg_d = d.deg().unwrap_or(0) as u64;
    let rows = points
        .par_iter()
        .map(|p| {
            if !pair.twisted.is_on_curve(p) {
                return Err(Error::NotOnCurve);
            }
            let h_twist = tw.canonical(p)?;
            let h_short = sh.canonical(&pair.to_short(p))?;
            let same_height = (h_twist.value - h_short.value).abs() <= 2.0 * opts.tol;
            let (h_y_prime, y_height_ok) = match p {
                Point::Affine { x, y } if !y.is_zero() => {
                    let h = pair.twisted.f_at(x).height();
                    (Some(0.5 * h as f64), Some(4 * h >= 3 * deg_d))
                }
                _ => (None, None),
            };
            Ok(TwistRow { point: p.clone(), h_twist, h_short, same_height, h_y_prime, y_height_ok })
        })
        .collect::<Result<Vec<_>>>()?;
    let c_f = rows
        .iter()
        .filter(|r| !r.h_twist.torsion)
        .map(|r| r.h_twist.value - deg_d as f64 / 8.0)
        .min_by(f64::total_cmp);
    Ok(TwistReport { d: d.clone(), rows, c_f })
}

/// `min ĥ / max(1, h(j))` over the given heights (non-torsion only).
pub fn lower_bound_ratio(heights: &[HeightValue], j: &RationalFn) -> Option<f64> {
    let min = heights.iter().filter(|h| !h.torsion).map(|h| h.value).min_by(f64::total_cmp)?;
    Some(min / (j.height().max(1) as f64))
}
