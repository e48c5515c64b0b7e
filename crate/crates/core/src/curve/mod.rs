//! Curve equations: parsing, germs at a point, reduction modulo a prime and
//! projective plane curves over prime fields.

mod parse;
mod projective;

pub use parse::parse_curve;
pub use projective::{find_singular_points, GermChart, GlobalCurve, ProjPoint, SingularPoint, TernaryForm};

use serde::Serialize;

use crate::algebra::{BivarPoly, Field, FieldElem};
use crate::error::{Error, Result};

/// A plane curve germ: the equation translated so that the point of
/// interest is the origin.
///
/// Factors of the equation that do not pass through the origin are units
/// in the local ring and are carried along untouched; they never influence
/// local invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGerm {
    f: BivarPoly,
}

impl CurveGerm {
    /// Germ of `f = 0` at the origin. Rejects equations that do not vanish
    /// there and equations with a repeated factor.
    pub fn new(f: BivarPoly) -> Result<CurveGerm> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let field = f.field();
        if !f.eval(&field.zero(), &field.zero()).is_zero() {
            return Err(Error::NotAGerm("the equation does not vanish at the origin".into()));
        }
        if !f.is_squarefree() {
            return Err(Error::DegenerateReduction(format!("{f} has a repeated factor")));
        }
        Ok(CurveGerm { f })
    }

    /// Germ of `f = 0` at the point `(a, b)`.
    pub fn at_point(f: &BivarPoly, a: &FieldElem, b: &FieldElem) -> Result<CurveGerm> {
        CurveGerm::new(f.translate(a, b))
    }

    /// Parses an equation over the rationals and takes its germ at the
    /// origin.
    pub fn parse(text: &str) -> Result<CurveGerm> {
        CurveGerm::new(parse_curve(text)?)
    }

    /// Parses an equation, reduces it into `field` and takes the germ.
    pub fn parse_in(text: &str, field: Field) -> Result<CurveGerm> {
        let f = parse_curve(text)?;
        match field {
            Field::Rationals => CurveGerm::new(f),
            Field::Prime(p) => CurveGerm::new(reduce_mod_p(&f, p)?),
        }
    }

    pub fn equation(&self) -> &BivarPoly {
        &self.f
    }

    pub fn field(&self) -> Field {
        self.f.field()
    }

    /// Multiplicity at the origin.
    pub fn multiplicity(&self) -> u32 {
        self.f.order().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.f.total_degree().unwrap_or(0)
    }

    /// Reduction of a germ over the rationals modulo `p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<CurveGerm> {
        CurveGerm::new(reduce_mod_p(&self.f, p)?)
    }
}

/// Coefficientwise reduction of a rational equation modulo `p`.
///
/// Fails with [`Error::BadDenominator`] when `p` divides a denominator and
/// with [`Error::DegenerateReduction`] when the image vanishes or acquires a
/// repeated factor.
pub fn reduce_mod_p(f: &BivarPoly, p: u64) -> Result<BivarPoly> {
    if f.field() != Field::Rationals {
        return Err(Error::FieldMismatch(f.field().to_string(), Field::Rationals.to_string()));
    }
    let field = Field::prime(p)?;
    let mut out = BivarPoly::zero(field);
    for (&(a, b), c) in f.terms() {
        let r = FieldElem::reduce_mod(c.as_rational().unwrap(), p).ok_or(Error::BadDenominator(p))?;
        out.add_term(a, b, r);
    }
    if out.is_zero() {
        return Err(Error::DegenerateReduction(format!("{f} vanishes modulo {p}")));
    }
    if !out.is_squarefree() {
        return Err(Error::DegenerateReduction(format!("{out} has a repeated factor over F_{p}")));
    }
    Ok(out)
}

/// Outcome classes for reduction at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionStatus {
    Good,
    BadDenominator,
    DegenerateReduction,
    BadProcess,
    BadSemigroup,
    WildFailure,
}

/// Per-prime verdict of a reduction scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub prime: u64,
    pub status: ReductionStatus,
    pub detail: String,
}

impl ReductionReport {
    pub fn good(prime: u64) -> ReductionReport {
        ReductionReport { prime, status: ReductionStatus::Good, detail: String::new() }
    }

    pub fn is_good(&self) -> bool {
        self.status == ReductionStatus::Good
    }

    /// Report for a failure that happened before any comparison.
    pub fn from_error(prime: u64, err: &Error, fallback: ReductionStatus) -> ReductionReport {
        let status = match err {
            Error::BadDenominator(_) => ReductionStatus::BadDenominator,
            Error::DegenerateReduction(_) => ReductionStatus::DegenerateReduction,
            Error::WildFailure(_) => ReductionStatus::WildFailure,
            _ => fallback,
        };
        ReductionReport { prime, status, detail: err.to_string() }
    }
}

/// Primes in `lo..=hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| crate::algebra::field::is_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        let f = parse_curve("y^2 - x^3 - x^2").unwrap();
        assert_eq!(reduce_mod_p(&f, 5).unwrap().to_string(), "y^2 + 4*x^2 + 4*x^3");
        let g = parse_curve("(1/2)x^2 + y").unwrap();
        assert_eq!(reduce_mod_p(&g, 2), Err(Error::BadDenominator(2)));
        let cusp = parse_curve("y^2 - x^3").unwrap();
        assert_eq!(reduce_mod_p(&cusp, 7).unwrap().to_string(), "y^2 + 6*x^3");
    }

    #[test]
    fn degenerate_reductions() {
        let tacnode = parse_curve("y^2 - x^4").unwrap();
        assert!(matches!(reduce_mod_p(&tacnode, 2), Err(Error::DegenerateReduction(_))));
        let vanishing = parse_curve("3*y^2 - 3*x^3").unwrap();
        assert!(matches!(reduce_mod_p(&vanishing, 3), Err(Error::DegenerateReduction(_))));
        assert_eq!(reduce_mod_p(&tacnode, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn germ_validation() {
        assert!(matches!(CurveGerm::parse("y^2 - x^3 + 1"), Err(Error::NotAGerm(_))));
        assert!(matches!(CurveGerm::parse("(y - x^2)^2"), Err(Error::DegenerateReduction(_))));
        let g = CurveGerm::parse("y^2 - x^3").unwrap();
        assert_eq!(g.multiplicity(), 2);
        let moved = CurveGerm::at_point(
            &parse_curve("(y-1)^2 - (x-2)^3").unwrap(),
            &Field::Rationals.from_i64(2),
            &Field::Rationals.from_i64(1),
        )
        .unwrap();
        assert_eq!(moved, g);
    }

    #[test]
    fn prime_ranges() {
        assert_eq!(primes_in(2, 13), vec![2, 3, 5, 7, 11, 13]);
    }
}
