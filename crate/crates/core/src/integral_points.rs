//! Brute-force enumeration of integral and `S`-integral points, the
//! constant-curve Siegel check, and the main-theorem ratio `c_required`.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{discriminant, CurveModel, Point};
use crate::error::{Error, Result};
use crate::field_poly::{factorize, gcd, poly_sqrt, Place, Poly, RationalFn};
use crate::heights::{gram_with_engine, GramData, HeightEngine, TorsionStatus};
use crate::reduction::minimal_model_at;

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationSpec {
    /// Bound on the naive height `max(deg x₀, 2 deg h)` of `x = x₀/h²`.
    pub max_deg_x: usize,
    pub s_places: Vec<Place>,
    /// Total exponent cap for `h`; `0` means integral points only.
    pub max_den_exp: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointInventory {
    pub points: Vec<Point>,
    pub count_affine: usize,
    /// Filled by [`classify_inventory`].
    pub torsion_count: usize,
    /// Filled by [`classify_inventory`].
    pub independent_count: usize,
}

impl PointInventory {
    fn new(points: Vec<Point>) -> Self {
        Self { count_affine: points.len(), points, torsion_count: 0, independent_count: 0 }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }
}

/// Number of `x` candidates for integral enumeration: `q^(D+1)`.
pub fn enumeration_cost(q: u64, max_deg_x: usize) -> Option<u64> {
    q.checked_pow(max_deg_x as u32 + 1)
}

/// Errors unless the model is untwisted and minimal at every finite place.
pub fn check_minimal(model: &CurveModel) -> Result<()> {
    if model.twist_d.is_some() {
        return Err(Error::Parameter("enumeration runs on the short model; convert the twist first".into()));
    }
    let delta = discriminant(&model.a, &model.b);
    if delta.is_zero() {
        return Err(Error::SingularCurve);
    }
    if delta.is_constant() {
        return Ok(());
    }
    for (pi, e) in factorize(&delta, 0)?.factors {
        if e >= 12 {
            let v = Place::Finite(pi);
            if minimal_model_at(model, &v)?.1 > 0 {
                return Err(Error::NotMinimal(v.to_string()));
            }
        }
    }
    Ok(())
}

fn padded(p: &Poly, len: usize) -> Vec<u64> {
    let mut c = p.coeffs().to_vec();
    c.resize(len.max(c.len()), 0);
    c
}

/// Lexicographic by ascending coefficients of (denominator of `x`, numerator of `x`, numerator of `y`).
fn sort_points(points: &mut [Point]) {
    let len = points
        .iter()
        .filter_map(|p| p.x().zip(p.y()))
        .map(|(x, y)| x.den().coeffs().len().max(x.num().coeffs().len()).max(y.num().coeffs().len()))
        .max()
        .unwrap_or(0);
    points.sort_by_cached_key(|p| match (p.x(), p.y()) {
        (Some(x), Some(y)) => (padded(x.den(), len), padded(x.num(), len), padded(y.num(), len)),
        _ => (Vec::new(), Vec::new(), Vec::new()),
    });
}

/// Points over one denominator `h`: `x = x₀/h²`, `y = g/h³` with `g² = x₀³ + a x₀ h⁴ + b h⁶`.
fn scan(model: &CurveModel, h: &Poly, deg_x0: usize) -> Result<Vec<Point>> {
    let q = model.q();
    let count = enumeration_cost(q, deg_x0).ok_or_else(|| Error::Budget(format!("q^{} candidates", deg_x0 + 1)))?;
    let h2 = h * h;
    let h3 = &h2 * h;
    let h4 = &h2 * &h2;
    let (ah4, bh6) = (&model.a * &h4, &model.b * &(&h3 * &h3));
    let trivial_h = h.is_one();
    let found: Vec<Vec<Point>> = (0..count)
        .into_par_iter()
        .map(|idx| -> Result<Vec<Point>> {
            let x0 = Poly::from_index(q, idx, deg_x0 + 1);
            if !trivial_h && !gcd(&x0, h)?.is_one() {
                return Ok(Vec::new());
            }
            let rhs = &(&(&(&x0 * &x0) * &x0) + &(&ah4 * &x0)) + &bh6;
            let Some(g) = poly_sqrt(&rhs) else { return Ok(Vec::new()) };
            let x = RationalFn::from_coprime(x0, h2.clone());
            let mk = |g: Poly| Point::affine(x.clone(), RationalFn::from_coprime(g, h3.clone()));
            let mut out = vec![mk(g.clone())];
            if !g.is_zero() {
                out.push(mk(g.scale(q - 1)));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// All `(x, y)` with `x, y ∈ F_q[T]`, `deg x ≤ max_deg_x`, on a model minimal at all finite places.
pub fn enumerate_integral(model: &CurveModel, max_deg_x: usize) -> Result<PointInventory> {
    check_minimal(model)?;
    let mut points = scan(model, &Poly::one(model.q()), max_deg_x)?;
    sort_points(&mut points);
    Ok(PointInventory::new(points))
}

/// Monic `h = Π π_i^{e_i}` with `Σ e_i ≤ cap`, starting with `h = 1`.
fn denominators(places: &[Poly], cap: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    fn rec(places: &[Poly], cap: u32, acc: Poly, out: &mut Vec<Poly>) {
        match places.split_first() {
            None => out.push(acc),
            Some((pi, rest)) => {
                let mut cur = acc;
                for e in 0..=cap {
                    rec(rest, cap - e, cur.clone(), out);
                    cur = &cur * pi;
                }
            }
        }
    }
    if let Some(first) = places.first() {
        rec(places, cap, Poly::one(first.q()), &mut out);
    }
    out
}

/// `S`-integral points `x = x₀/h²`, `y = g/h³` with `h` supported on `spec.s_places`.
pub fn enumerate_s_integral(model: &CurveModel, spec: &EnumerationSpec) -> Result<PointInventory> {
    check_minimal(model)?;
    let q = model.q();
    let mut primes = Vec::with_capacity(spec.s_places.len());
    for v in &spec.s_places {
        let pi = v.poly().ok_or_else(|| Error::Parameter("S must contain finite places only".into()))?;
        if !primes.contains(pi) {
            primes.push(pi.clone());
        }
    }
    let hs = if spec.max_den_exp == 0 || primes.is_empty() {
        vec![Poly::one(q)]
    } else {
        denominators(&primes, spec.max_den_exp)
    };
    let mut points = Vec::new();
    for h in hs.iter().filter(|h| 2 * h.deg().unwrap_or(0) <= spec.max_deg_x) {
        points.extend(scan(model, h, spec.max_deg_x)?);
    }
    sort_points(&mut points);
    Ok(PointInventory::new(points))
}

/// The distinct irreducible divisors of `Δ` as places.
pub fn discriminant_places(model: &CurveModel) -> Result<Vec<Place>> {
    let short = model.short_model();
    let delta = discriminant(&short.a, &short.b);
    if delta.is_zero() {
        return Err(Error::SingularCurve);
    }
    if delta.is_constant() {
        return Ok(Vec::new());
    }
    Ok(factorize(&delta, 0)?.factors.into_iter().map(|(p, _)| Place::Finite(p)).collect())
}

/// Fills torsion and independence counts; `y ↦ -y` pairs enter the Gram matrix once.
pub fn classify_inventory(engine: &HeightEngine, inv: &mut PointInventory) -> Result<GramData> {
    let statuses: Vec<TorsionStatus> =
        inv.points.par_iter().map(|p| engine.torsion_status(p, 100)).collect::<Result<_>>()?;
    inv.torsion_count = statuses.iter().filter(|&&s| s == TorsionStatus::Torsion).count();
    let model = engine.model();
    let reps: Vec<Point> = inv
        .points
        .iter()
        .zip(&statuses)
        .filter(|(p, &s)| s != TorsionStatus::Torsion && !inv.points[..].iter().any(|o| o == &model.neg(p) && o < p))
        .map(|(p, _)| p.clone())
        .collect();
    let gram = gram_with_engine(engine, &reps)?;
    inv.independent_count = gram.rank_lower_bound();
    Ok(gram)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTheoremRatio {
    /// `ln(count)·ln(deg N)/deg N`.
    pub c_required: f64,
    /// The same divided by `ln q`.
    pub c_required_log_q: f64,
}

/// The constant `c` the inventory would force in `#E ≤ exp(c·deg N/ln deg N)`.
/// An empty inventory is treated like a single point (`c = 0`).
pub fn main_theorem_ratio(inv: &PointInventory, deg_n: u64, q: u64) -> Result<MainTheoremRatio> {
    if deg_n < 3 {
        return Err(Error::DegenerateConductor(deg_n as i64));
    }
    let n = deg_n as f64;
    let c = (inv.count_affine.max(1) as f64).ln() * n.ln() / n;
    Ok(MainTheoremRatio { c_required: c, c_required_log_q: c / (q as f64).ln() })
}

/// `count_affine + 1 ≤ q + 1 + 2√q`, decided in integers.
pub fn siegel_ok(inv: &PointInventory, q: u64) -> bool {
    let c = inv.count_affine as u64;
    c <= q || (c - q) * (c - q) <= 4 * q
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationStats {
    pub non_torsion: usize,
    pub pairs: usize,
    pub min_angle_deg: f64,
    /// `min ĥ(P-Q) / max(ĥ(P), ĥ(Q))` over pairs.
    pub min_ratio: f64,
}

/// Pairwise angles and difference-height ratios among the non-torsion points.
pub fn separation_stats(engine: &HeightEngine, inv: &PointInventory) -> Result<SeparationStats> {
    let mut pts = Vec::new();
    let mut hs = Vec::new();
    for p in &inv.points {
        if engine.torsion_status(p, 100)? == TorsionStatus::NonTorsion {
            hs.push(engine.value(p)?);
            pts.push(p.clone());
        }
    }
    if pts.len() < 2 {
        return Err(Error::EmptyStatistic);
    }
    let model = engine.model();
    let pairs: Vec<(usize, usize)> = (0..pts.len()).flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j))).collect();
    let per_pair: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let diff = model.add(&pts[i], &model.neg(&pts[j]))?;
            let hd = if diff.is_infinity() { 0.0 } else { engine.canonical(&diff)?.value };
            let pairing = (hs[i] + hs[j] - hd) / 2.0;
            let cos = (pairing / (hs[i] * hs[j]).sqrt()).clamp(-1.0, 1.0);
            Ok((cos.acos().to_degrees(), hd / hs[i].max(hs[j])))
        })
        .collect::<Result<_>>()?;
    Ok(SeparationStats {
        non_torsion: pts.len(),
        pairs: pairs.len(),
        min_angle_deg: per_pair.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
        min_ratio: per_pair.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
    })
}

/// Per-point CSV rows: `curve_id,x,y,h_x,h_canonical,is_torsion`.
pub const POINTS_CSV_HEADER: &str = "curve_id,x,y,h_x,h_canonical,is_torsion";
