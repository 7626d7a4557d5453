//! Factorization over `F_q`: square-free split, distinct-degree split and
//! seeded Cantor–Zassenhaus equal-degree split.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{gcd, Poly};
use crate::error::{Error, Result};

/// `f = unit · Π factor^multiplicity`, factors monic irreducible and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, q: u64) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(q, self.unit), |acc, (f, m)| &acc * &f.pow(*m as u64))
    }
}

/// Rabin's test: `T^{q^n} ≡ T (mod f)` and `gcd(T^{q^{n/r}} - T, f) = 1`
/// for every prime `r | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.deg() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let q = f.q();
    let f = f.monic().1;
    let t = Poly::t(q);
    let mut frob = vec![t.rem(&f)?];
    for _ in 0..n {
        let next = frob.last().unwrap().pow_mod(q, &f)?;
        frob.push(next);
    }
    if frob[n] != t.rem(&f)? {
        return Ok(false);
    }
    for r in super::field::prime_divisors(n as u128) {
        let k = n / r as usize;
        let g = gcd(&(&frob[k] - &t), &f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complete factorization, deterministic for a fixed `seed`.
pub fn factorize(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = f.q();
    let (unit, monic) = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (part, mult) in square_free_decomposition(&monic)? {
        for (d, block) in distinct_degree(&part)? {
            for g in equal_degree(&block, d, &mut rng)? {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.cmp(&b.0)));
    // merge duplicates (possible when the p-th root branch revisits a factor)
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (g, m) in factors {
        match merged.last_mut() {
            Some((h, k)) if *h == g => *k += m,
            _ => merged.push((g, m)),
        }
    }
    debug_assert_eq!(Factorization { unit, factors: merged.clone() }.expand(q), *f);
    Ok(Factorization { unit, factors: merged })
}

/// Monic square-free parts with multiplicities (Yun, with the `p`-th root step).
fn square_free_decomposition(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let q = f.q();
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let df = f.derivative();
    if df.is_zero() {
        // f(T) = g(T^p) = g(T)^p over the prime field
        let g = Poly::new(q, f.coeffs().iter().step_by(q as usize).copied().collect());
        for (h, m) in square_free_decomposition(&g)? {
            out.push((h, m * q as u32));
        }
        return Ok(out);
    }
    let mut c = gcd(f, &df)?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_constant() {
        let y = gcd(&w, &c)?;
        let z = w.exact_div(&y)?;
        if !z.is_constant() {
            out.push((z.monic().1, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w)?;
    }
    if !c.is_constant() {
        // remaining part is a p-th power
        let g = Poly::new(q, c.coeffs().iter().step_by(q as usize).copied().collect());
        for (h, m) in square_free_decomposition(&g)? {
            out.push((h, m * q as u32));
        }
    }
    Ok(out)
}

/// Splits a monic square-free polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Result<Vec<(usize, Poly)>> {
    let q = f.q();
    let t = Poly::t(q);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest)?;
    let mut d = 0;
    while let Some(n) = rest.deg() {
        if n == 0 {
            break;
        }
        d += 1;
        if 2 * d > n {
            out.push((n, rest.clone()));
            break;
        }
        h = h.pow_mod(q, &rest)?;
        let g = gcd(&(&h - &t), &rest)?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((d, g));
        }
    }
    Ok(out)
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.deg().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let q = f.q();
    let exp = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = Poly::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.is_constant() {
            continue;
        }
        let g = gcd(&a, f)?;
        let split = if !g.is_one() {
            g
        } else {
            let b = a.pow_mod_big(&exp, f)?;
            gcd(&(&b - &Poly::one(q)), f)?
        };
        if let Some(k) = split.deg() {
            if k > 0 && k < n {
                let other = f.exact_div(&split)?;
                let mut out = equal_degree(&split, d, rng)?;
                out.extend(equal_degree(&other, d, rng)?);
                return Ok(out);
            }
        }
    }
}

/// All monic irreducible polynomials of degree `d` (small `q^d` only).
pub fn monic_irreducibles(q: u64, d: usize) -> Vec<Poly> {
    let count = q.pow(d as u32);
    (0..count)
        .map(|i| {
            let mut p = Poly::from_index(q, i, d).coeffs().to_vec();
            p.resize(d, 0);
            p.push(1);
            Poly::new(q, p)
        })
        .filter(|p| is_irreducible(p).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p5(c: &[i64]) -> Poly {
        Poly::from_i64(5, c)
    }

    fn has_root(f: &Poly) -> bool {
        (0..f.q()).any(|x| f.eval(x) == 0)
    }

    #[test]
    fn irreducibility_examples() {
        // -2 = 3 is a non-square mod 5
        assert!(is_irreducible(&p5(&[2, 0, 1])).unwrap());
        assert!(!has_root(&p5(&[2, 0, 1])));
        // T^2 + 1 = (T - 2)(T + 2) mod 5
        assert!(!is_irreducible(&p5(&[1, 0, 1])).unwrap());
        assert_eq!(p5(&[1, 0, 1]).eval(2), 0);
        assert!(is_irreducible(&Poly::t(5)).unwrap());
        assert_eq!(is_irreducible(&p5(&[3])), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn factorization_examples() {
        let fac = factorize(&p5(&[3, 0, 0, 1]), 1).unwrap();
        assert_eq!(fac.unit, 1);
        assert_eq!(fac.factors, vec![(p5(&[2, 1]), 1), (p5(&[4, 3, 1]), 1)]);
        // oracle: T^2+3T+4 has no root in F_5 and no monic irreducible of
        // degree 1 divides it (trial division)
        assert!(!has_root(&p5(&[4, 3, 1])));
        assert!(monic_irreducibles(5, 1).iter().all(|g| !g.divides(&p5(&[4, 3, 1]))));

        assert_eq!(factorize(&p5(&[0, 0, 1]), 0).unwrap().factors, vec![(Poly::t(5), 2)]);
        let fac = factorize(&p5(&[0, 0, 3, 3]), 0).unwrap();
        assert_eq!(fac.unit, 3);
        assert_eq!(fac.factors, vec![(Poly::t(5), 2), (p5(&[1, 1]), 1)]);
        assert_eq!(factorize(&Poly::zero(5), 0), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn pth_powers_factor() {
        // (T+1)^5 * (T^2+2) = (T^5 + 1)(T^2 + 2) over F_5
        let f = &p5(&[1, 0, 0, 0, 0, 1]) * &p5(&[2, 0, 1]);
        let fac = factorize(&f, 3).unwrap();
        assert_eq!(fac.factors, vec![(p5(&[1, 1]), 5), (p5(&[2, 0, 1]), 1)]);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree d over F_q
        assert_eq!(monic_irreducibles(5, 1).len(), 5);
        assert_eq!(monic_irreducibles(5, 2).len(), 10);
        assert_eq!(monic_irreducibles(5, 3).len(), 40);
        assert_eq!(monic_irreducibles(7, 2).len(), 21);
        assert_eq!(monic_irreducibles(5, 4).len(), 150);
    }

    #[test]
    fn factorization_is_seed_deterministic() {
        let f = Poly::new(7, vec![3, 1, 4, 1, 5, 2, 6, 5, 3, 1]);
        assert_eq!(factorize(&f, 42).unwrap(), factorize(&f, 42).unwrap());
        assert_eq!(factorize(&f, 42).unwrap(), factorize(&f, 7).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn factors_multiply_back(c in prop::collection::vec(0u64..5, 1..10), seed in 0u64..1000) {
            let f = Poly::new(5, c);
            prop_assume!(!f.is_zero());
            let fac = factorize(&f, seed).unwrap();
            prop_assert_eq!(fac.expand(5), f);
            for (g, _) in &fac.factors {
                prop_assert!(g.is_monic());
                prop_assert!(is_irreducible(g).unwrap());
            }
        }
    }
}
