//! Packing-rate bounds (Kabatiansky–Levenshtein), `β(t)`, `α(x)`, ball counts
//! and the shell covering by `ε`-balls with a sampling verifier.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// `x·ln x`, extended by continuity to `0` at `x = 0`.
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// The KL expression in natural logs at `s ∈ (0, 1]`.
fn kl_nats(s: f64) -> f64 {
    xlogx((1.0 + s) / (2.0 * s)) - xlogx((1.0 - s) / (2.0 * s))
}

/// Kabatiansky–Levenshtein rate for minimal angle `θ`, in bits per dimension.
pub fn kl_bound(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Parameter(format!("theta = {theta} outside (0, pi/2)")));
    }
    Ok(kl_nats(theta.sin()) / LN_2)
}

/// `f(t) = √((1+t)(3-t)) / 2`.
pub fn f_of_t(t: f64) -> f64 {
    ((1.0 + t) * (3.0 - t)).sqrt() / 2.0
}

/// `β(t)`: the KL expression at `f(t)`, natural logs; `β(1) = 0`.
pub fn beta(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("t = {t} outside [0, 1]")));
    }
    Ok(beta_unchecked(t))
}

fn beta_unchecked(t: f64) -> f64 {
    let s = f_of_t(t).min(1.0);
    kl_nats(s)
}

/// Exponent of the integral-point bound, `β(0) / (2 ln 2)`.
pub fn integral_point_exponent() -> f64 {
    beta_unchecked(0.0) / (2.0 * LN_2)
}

/// `α(x) = min_{t∈[0,1]} (x t + β(t))` and the minimizing `t`.
pub fn alpha(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Parameter(format!("x = {x} must be non-negative")));
    }
    let g = |t: f64| x * t + beta_unchecked(t);
    let (mut best, mut best_i) = (f64::INFINITY, 0usize);
    for i in 0..=1000 {
        let v = g(i as f64 * 1e-3);
        if v < best {
            (best, best_i) = (v, i);
        }
    }
    let (mut lo, mut hi) = ((best_i.max(1) - 1) as f64 * 1e-3, ((best_i + 1).min(1000)) as f64 * 1e-3);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t = (lo + hi) / 2.0;
    // keep the grid point if refinement did not improve on it (e.g. endpoint minima)
    if g(t) < best {
        Ok((g(t), t))
    } else {
        Ok((best, best_i as f64 * 1e-3))
    }
}

/// `(1 + 2√(c2/c1))^rank`.
pub fn ball_count_bound(c1: f64, c2: f64, rank: u32) -> Result<f64> {
    if !(c1 > 0.0 && c1 <= c2) {
        return Err(Error::Parameter(format!("need 0 < c1 <= c2, got c1 = {c1}, c2 = {c2}")));
    }
    Ok((1.0 + 2.0 * (c2 / c1).sqrt()).powi(rank as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringSet {
    pub c1: f64,
    pub c2: f64,
    pub eps: f64,
    pub n: usize,
    /// Slices run over `m = 0..=m_max`.
    pub m_max: u32,
    /// Integer vectors `Z` shared by every slice.
    pub z_vectors: Vec<Vec<u32>>,
    pub centers: Vec<Vec<f64>>,
}

impl CoveringSet {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Scale of slice `m`: `c1·ε·(1+ε)^m / n`.
    pub fn slice_scale(&self, m: u32) -> f64 {
        self.c1 * self.eps * (1.0 + self.eps).powi(m as i32) / self.n as f64
    }

    /// Admissible range of `|Z|₁`: `(n/ε)(1-ε) ..= (n/ε)(1+ε)`.
    pub fn z_norm_range(&self) -> (u32, u32) {
        z_norm_range(self.n, self.eps)
    }

    /// `C` with `|T| = C^n ε^{-(n+1)} (1 + ln(c2/c1))`.
    pub fn fitted_c(&self) -> f64 {
        let n = self.n as f64;
        (self.len() as f64 * self.eps.powf(n + 1.0) / (1.0 + (self.c2 / self.c1).ln())).powf(1.0 / n)
    }
}

fn z_norm_range(n: usize, eps: f64) -> (u32, u32) {
    let base = n as f64 / eps;
    let lo = (base * (1.0 - eps) - 1e-9).ceil().max(0.0) as u32;
    let hi = (base * (1.0 + eps) + 1e-9).floor() as u32;
    (lo, hi)
}

/// All non-negative integer vectors of length `n` with coordinate sum `s`.
fn compositions(n: usize, s: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n {
        prefix.push(s);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=s {
        prefix.push(first);
        compositions(n, s - first, prefix, out);
        prefix.pop();
    }
}

fn check_cover_params(c1: f64, c2: f64, eps: f64, n: usize) -> Result<()> {
    if !(c1 > 0.0 && c1 < c2) {
        return Err(Error::Parameter(format!("need 0 < c1 < c2, got c1 = {c1}, c2 = {c2}")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Parameter(format!("eps = {eps} outside (0, 1/2)")));
    }
    if !(1..=4).contains(&n) {
        return Err(Error::Parameter(format!("dimension n = {n} outside 1..=4")));
    }
    Ok(())
}

/// Centers `Y = (c1 ε (1+ε)^m / n)·Z` for `m = 0..=⌈log_{1+ε}(c2/c1)⌉`.
pub fn covering_centers(c1: f64, c2: f64, eps: f64, n: usize) -> Result<CoveringSet> {
    check_cover_params(c1, c2, eps, n)?;
    let m_max = ((c2 / c1).ln() / (1.0 + eps).ln() - 1e-9).ceil().max(0.0) as u32;
    let (lo, hi) = z_norm_range(n, eps);
    let mut z_vectors = Vec::new();
    for s in lo..=hi {
        compositions(n, s, &mut Vec::with_capacity(n), &mut z_vectors);
    }
    let mut cover = CoveringSet { c1, c2, eps, n, m_max, z_vectors, centers: Vec::new() };
    let mut centers = Vec::with_capacity((m_max as usize + 1) * cover.z_vectors.len());
    for m in 0..=m_max {
        let scale = cover.slice_scale(m);
        centers.extend(cover.z_vectors.iter().map(|z| z.iter().map(|&zi| scale * zi as f64).collect::<Vec<f64>>()));
    }
    cover.centers = centers;
    Ok(cover)
}

/// Where the construction sends a point `X` of the shell.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverHit {
    pub m: u32,
    pub z: Vec<u32>,
    pub y: Vec<f64>,
    /// `|X - Y|₁ / (ε |Y|₁)`; the lemma needs at most 2.
    pub ratio: f64,
    /// `Z` is admissible and `m ≤ m_max`, i.e. `Y` is an emitted center.
    pub is_center: bool,
}

/// `m(X) = ⌊log_{1+ε}(|X|₁/c1)⌋`, `Z = ⌊n X / (c1 ε (1+ε)^m)⌋`, `Y = scale·Z`.
pub fn cover_point(cover: &CoveringSet, x: &[f64]) -> CoverHit {
    let norm: f64 = x.iter().sum();
    let raw = ((norm / cover.c1).ln() / (1.0 + cover.eps).ln() + 1e-12).floor();
    let m = raw.clamp(0.0, cover.m_max as f64) as u32;
    let scale = cover.slice_scale(m);
    let z: Vec<u32> = x.iter().map(|&xi| (xi / scale + 1e-12).floor().max(0.0) as u32).collect();
    let y: Vec<f64> = z.iter().map(|&zi| scale * zi as f64).collect();
    let dist: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
    let ynorm: f64 = y.iter().sum();
    let ratio = if ynorm > 0.0 { dist / (cover.eps * ynorm) } else { f64::INFINITY };
    let (lo, hi) = cover.z_norm_range();
    let zsum: u32 = z.iter().sum();
    let is_center = raw >= 0.0 && raw <= cover.m_max as f64 && (lo..=hi).contains(&zsum);
    CoverHit { m, z, y, ratio, is_center }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub samples: usize,
    pub failures: usize,
    pub max_ratio: f64,
    pub fitted_c: f64,
    pub centers: usize,
}

const SAMPLE_BLOCK: usize = 1024;

/// Uniform point of `{X ≥ 0 : c1 ≤ |X|₁ ≤ c2}`: Dirichlet(1) direction, radius with density `∝ r^{n-1}`.
fn sample_shell(rng: &mut ChaCha8Rng, n: usize, c1: f64, c2: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    let nf = n as f64;
    let u: f64 = rng.gen();
    let r = (c1.powf(nf) + u * (c2.powf(nf) - c1.powf(nf))).powf(1.0 / nf);
    for wi in &mut w {
        *wi *= r / total;
    }
    w
}

/// Samples the shell and checks `|X - Y|₁ ≤ 2ε|Y|₁` with `Y` an emitted center.
pub fn covering_verify(cover: &CoveringSet, samples: usize, seed: u64) -> CoverReport {
    let blocks = samples.div_ceil(SAMPLE_BLOCK);
    let per_block: Vec<(usize, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK);
            let mut failures = 0;
            let mut max_ratio: f64 = 0.0;
            for _ in 0..count {
                let x = sample_shell(&mut rng, cover.n, cover.c1, cover.c2);
                let hit = cover_point(cover, &x);
                if !hit.is_center || hit.ratio > 2.0 {
                    failures += 1;
                }
                max_ratio = max_ratio.max(hit.ratio);
            }
            (failures, max_ratio)
        })
        .collect();
    CoverReport {
        samples,
        failures: per_block.iter().map(|b| b.0).sum(),
        max_ratio: per_block.iter().map(|b| b.1).fold(0.0, f64::max),
        fitted_c: cover.fitted_c(),
        centers: cover.len(),
    }
}

/// Rows `(t, f(t), β(t), α(t))` for `t = start, start+step, ..., ≤ end`.
pub fn beta_table(start: f64, end: f64, step: f64) -> Result<Vec<[f64; 4]>> {
    if step.is_nan() || step <= 0.0 || start > end {
        return Err(Error::Parameter(format!("bad range {start}:{end}:{step}")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|i| {
            let t = (start + i as f64 * step).min(end);
            Ok([t, f_of_t(t), beta(t)?, alpha(t)?.0])
        })
        .collect()
}
