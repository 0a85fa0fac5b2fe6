//! The biquadratic family `Y1^2 = f1 f3`, `Y2^2 = f2 f3`: genus bookkeeping, family
//! enumeration, point counts by character sums, and zeta numerators.

pub mod curve;
mod family;
mod table;

pub use curve::{curve_counts, zeta_numerator, CurveData};
pub use family::{
    degree_patterns, enumerate_family, family_size, genus_length, CurveTriple, DegreePattern, Family, FamilySize,
    Variant,
};
pub use table::{CharSumTable, PointSums};
