//! Shared inputs for the benchmarks.

use ffstat::{CurveTriple, FiniteField, Poly, Variant};

pub fn f3() -> FiniteField {
    FiniteField::prime(3).expect("F_3")
}

/// The genus-1 curve `y1^2 = X^2 + 1, y2^2 = X^2 + X + 2` over `F_3`.
pub fn worked_curve() -> CurveTriple {
    let f = f3();
    CurveTriple::new(Poly::from_ints(&f, &[1, 0, 1]), Poly::from_ints(&f, &[2, 1, 1]), Poly::one(&f), Variant::Monic)
        .expect("valid triple")
}

/// A square-free monic modulus of the given degree over `F_q`: the first one found.
pub fn squarefree_modulus(field: &FiniteField, d: usize) -> Poly {
    ffstat::ffpoly::enumerate(field, d, ffstat::ffpoly::PolyKind::SquarefreeMonic)
        .expect("enumeration")
        .into_iter()
        .last()
        .expect("square-free polynomials exist in every degree")
}
