//! Arithmetic in `F_q`, `F_{q^n}` and `F_q[X]`.

pub mod arith;
pub mod enumerate;
pub mod ext;
pub mod field;
pub mod poly;
pub mod primes;
pub mod text;

pub use arith::{
    count_prime_factors_squarefree, is_irreducible, is_irreducible_trial, is_squarefree, jacobi_symbol,
    legendre_reciprocity, legendre_symbol, mobius_squarefree, quad_char_eval, ProjectivePoint,
};
pub use enumerate::{
    enumerate, enumerate_range, integer_mobius, monic_count, prime_count, prime_count_exact, squarefree_count, PolyKind,
};
pub use ext::{extension, ExtElem, ExtensionField, LOG_ZERO};
pub use field::{Elem, FiniteField};
pub use poly::Poly;
pub use primes::{least_irreducible, primes_of_degree, primes_with_roots, PrimeTable};
pub use text::parse_poly;
