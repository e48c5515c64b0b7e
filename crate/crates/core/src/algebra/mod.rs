//! Exact arithmetic: rationals and prime fields, bivariate polynomials,
//! truncated power series, row reduction, and classes in `Z[L, L^-1]`.

pub mod field;
pub mod gfext;
pub mod linalg;
pub mod motclass;
pub mod poly;
pub mod series;
pub mod unipoly;

pub use field::{Field, FieldElem, Rational};
pub use linalg::EchelonBasis;
pub use motclass::{MotClass, MotSeries};
pub use poly::BivarPoly;
pub use series::{SeriesOrder, TruncSeries};
pub use unipoly::UniPoly;
