//! Exact arithmetic over `F_q`: polynomials, rational functions, places,
//! valuations and residue fields.

mod factor;
mod field;
mod place;
mod poly;
mod ratfn;

pub use factor::{factorize, is_irreducible, monic_irreducibles, Factorization};
pub use field::FieldConfig;
pub use place::{poly_valuation, quadratic_character, valuation, Place, ResidueElem, ResidueField};
pub use poly::{gcd, Poly};
pub use ratfn::RationalFn;

pub(crate) use field::{inv_mod, prime_divisors};

/// Square root of `f` in `F_q[T]`; `None` when `f` is not a square.
pub fn poly_sqrt(f: &Poly) -> Option<Poly> {
    f.sqrt()
}
