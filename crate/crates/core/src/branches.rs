//! Branch parametrizations of a germ and valuations along them.
//!
//! Each branch is parametrized at the resolved point where it meets the
//! exceptional divisor normally. There the strict transform is smooth, so
//! one coordinate is a power series in the other, found by Newton
//! iteration; pushing that series back through the chart moves yields
//! `(x(t), y(t))`. Every step is a polynomial substitution, so the method
//! works in every characteristic, including the ones where the ramification
//! index is divisible by `p`.

use std::fmt;

use serde::Serialize;

use crate::algebra::{BivarPoly, SeriesOrder, TruncSeries};
use crate::curve::CurveGerm;
use crate::error::{Error, Result};
use crate::resolution::{resolve_germ, BranchChart, ChartMove};

/// Initial precision `4 deg(f)^2` used when no other precision is asked for.
pub fn default_precision(germ: &CurveGerm) -> usize {
    let d = germ.degree().max(1) as usize;
    4 * d * d
}

/// A parametrization `t -> (x(t), y(t))` of one branch, correct modulo
/// `t^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchParam {
    pub x: TruncSeries,
    pub y: TruncSeries,
    /// `min(ord x, ord y)`.
    pub ramification: usize,
    /// Set when `ord y < ord x`, i.e. the branch is tangent to `x = 0` and
    /// `y` is the ramified variable.
    pub tangent_to_y_axis: bool,
    chart: BranchChart,
    germ_degree: usize,
}

#[derive(Serialize)]
struct BranchJson {
    x: Vec<String>,
    y: Vec<String>,
    precision: usize,
}

impl BranchParam {
    fn from_chart(chart: &BranchChart, germ_degree: usize, precision: usize) -> BranchParam {
        let g = &chart.strict;
        let field = g.field();
        let t = TruncSeries::monomial(field.one(), 1, precision);
        let (mut u, mut v) = if !g.coeff(0, 1).is_zero() {
            let v = implicit_series(g, precision);
            (t, v)
        } else {
            let swapped = BivarPoly::from_terms(field, g.terms().map(|(&(a, b), c)| ((b, a), c.clone())));
            let u = implicit_series(&swapped, precision);
            (u, t)
        };
        for mv in chart.path.iter().rev() {
            let (nu, nv) = match mv {
                ChartMove::Slope(s) => {
                    let vs = v.add(&TruncSeries::constant(s.clone(), precision));
                    (u.clone(), u.mul(&vs))
                }
                ChartMove::Vertical => (u.mul(&v), v.clone()),
            };
            u = nu;
            v = nv;
        }
        let ox = u.order().finite().unwrap_or(usize::MAX);
        let oy = v.order().finite().unwrap_or(usize::MAX);
        BranchParam {
            ramification: ox.min(oy),
            tangent_to_y_axis: oy < ox,
            x: u,
            y: v,
            chart: chart.clone(),
            germ_degree,
        }
    }

    pub fn precision(&self) -> usize {
        self.x.precision()
    }

    /// The same branch recomputed modulo `t^precision`.
    pub fn extend(&self, precision: usize) -> BranchParam {
        BranchParam::from_chart(&self.chart, self.germ_degree, precision)
    }

    /// `z(x(t), y(t))` at the branch's precision.
    pub fn substitute(&self, z: &BivarPoly) -> TruncSeries {
        z.substitute_series(&self.x, &self.y)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |s: &TruncSeries| s.coeffs().iter().map(|c| c.to_string()).collect();
        serde_json::to_value(BranchJson { x: strs(&self.x), y: strs(&self.y), precision: self.precision() })
            .expect("serializable")
    }
}

/// Solves `h(t, w(t)) = 0` with `w(0) = 0`, assuming `dh/dw (0, 0) != 0`.
fn implicit_series(h: &BivarPoly, precision: usize) -> TruncSeries {
    let field = h.field();
    let t = TruncSeries::monomial(field.one(), 1, precision);
    let hw = h.partial_y();
    let mut w = TruncSeries::zero(field, precision);
    // Newton's method doubles the number of correct coefficients per step.
    loop {
        let r = h.substitute_series(&t, &w);
        if matches!(r.order(), SeriesOrder::AbovePrecision(_)) {
            return w;
        }
        let d = hw.substitute_series(&t, &w).inverse().expect("smooth in w at the origin");
        w = w.sub(&r.mul(&d));
    }
}

/// One parametrization per branch of the germ, in the canonical order of the
/// resolution tree.
pub fn puiseux_branches(germ: &CurveGerm, precision: usize) -> Result<Vec<BranchParam>> {
    if precision == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let process = resolve_germ(germ)?;
    let degree = germ.degree() as usize;
    Ok(process.branch_charts().iter().map(|c| BranchParam::from_chart(c, degree, precision)).collect())
}

/// Vector of branch orders `(v_1(z), ..., v_d(z))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ValueVector(pub Vec<usize>);

impl ValueVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise sum.
    pub fn add(&self, other: &ValueVector) -> ValueVector {
        ValueVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn norm(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Order of `z` along every branch. Precision is doubled as needed; once it
/// exceeds `deg z * deg f` (a bound on the local intersection number) a
/// vanishing order is certified as infinite and reported as
/// [`Error::ZeroDivisor`].
pub fn value_of(z: &BivarPoly, branches: &[BranchParam]) -> Result<ValueVector> {
    let mut out = Vec::with_capacity(branches.len());
    for (i, b) in branches.iter().enumerate() {
        if z.field() != b.x.field() {
            return Err(Error::FieldMismatch(z.field().to_string(), b.x.field().to_string()));
        }
        if z.is_zero() {
            return Err(Error::ZeroDivisor { branch: i });
        }
        let bound = z.total_degree().unwrap_or(0) as usize * b.germ_degree + 1;
        let mut current = b.clone();
        loop {
            match current.substitute(z).order() {
                SeriesOrder::Finite(k) => {
                    out.push(k);
                    break;
                }
                SeriesOrder::AbovePrecision(p) if p > bound => return Err(Error::ZeroDivisor { branch: i }),
                SeriesOrder::AbovePrecision(p) => current = current.extend((2 * p).max(bound + 1)),
            }
        }
    }
    Ok(ValueVector(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn branches(text: &str, field: Field, prec: usize) -> (CurveGerm, Vec<BranchParam>) {
        let g = CurveGerm::parse_in(text, field).unwrap();
        let b = puiseux_branches(&g, prec).unwrap();
        (g, b)
    }

    fn vanishes(g: &CurveGerm, b: &BranchParam) -> bool {
        matches!(b.substitute(g.equation()).order(), SeriesOrder::AbovePrecision(_))
    }

    #[test]
    fn cusp_branch() {
        let (g, bs) = branches("y^2 - x^3", Field::Rationals, 12);
        assert_eq!(bs.len(), 1);
        let b = &bs[0];
        assert!(vanishes(&g, b));
        assert_eq!(b.x.order(), SeriesOrder::Finite(2));
        assert_eq!(b.y.order(), SeriesOrder::Finite(3));
        assert_eq!(b.ramification, 2);
        assert!(!b.tangent_to_y_axis);
    }

    #[test]
    fn node_axes() {
        let (g, bs) = branches("x*y", Field::Rationals, 6);
        assert_eq!(bs.len(), 2);
        let mut shapes: Vec<(SeriesOrder, SeriesOrder)> = bs.iter().map(|b| (b.x.order(), b.y.order())).collect();
        shapes.sort_by_key(|s| format!("{s:?}"));
        assert!(shapes.contains(&(SeriesOrder::Finite(1), SeriesOrder::AbovePrecision(6))));
        assert!(shapes.contains(&(SeriesOrder::AbovePrecision(6), SeriesOrder::Finite(1))));
        assert!(bs.iter().all(|b| vanishes(&g, b)));
    }

    /// Coefficients of sqrt(1 + t) from the binomial series.
    fn binomial_sqrt(n: usize) -> Vec<crate::algebra::Rational> {
        use crate::algebra::Rational;
        let mut out = vec![Rational::from_integer(1.into())];
        for k in 1..n {
            let prev = out[k - 1].clone();
            let num = Rational::from_integer(1.into()) / Rational::from_integer(2.into())
                - Rational::from_integer(((k - 1) as i64).into());
            out.push(prev * num / Rational::from_integer((k as i64).into()));
        }
        out
    }

    #[test]
    fn nodal_cubic_matches_binomial_series() {
        let prec = 10;
        let (_, bs) = branches("y^2 - x^2 - x^3", Field::Rationals, prec);
        assert_eq!(bs.len(), 2);
        let s = binomial_sqrt(prec);
        let mut signs = Vec::new();
        for b in &bs {
            assert_eq!(b.x, TruncSeries::monomial(Field::Rationals.one(), 1, prec));
            let lead = b.y.coeff(1).as_rational().unwrap().clone();
            signs.push(lead.clone());
            for k in 1..prec {
                let expect = &lead * &s[k - 1];
                assert_eq!(b.y.coeff(k).as_rational().unwrap(), &expect, "coefficient {k}");
            }
        }
        signs.sort();
        assert_eq!(signs[0], -signs[1].clone());
    }

    #[test]
    fn char_two_cusp_is_parametrized() {
        let (g, bs) = branches("y^2 - x^3 - x^2", Field::Prime(2), 16);
        assert_eq!(bs.len(), 1);
        assert!(vanishes(&g, &bs[0]));
        assert_eq!(bs[0].ramification, 2);
    }

    #[test]
    fn ramification_sums_to_multiplicity() {
        for (text, field) in [
            ("y^2 - x^3", Field::Rationals),
            ("y^3 - x^5", Field::Rationals),
            ("y^2 - x^4", Field::Rationals),
            ("x^3 - y^2", Field::Prime(5)),
            ("x*y*(x - y)", Field::Prime(3)),
            ("(y - x^2)*(y + x^2)*x", Field::Rationals),
        ] {
            let (g, bs) = branches(text, field, 20);
            let total: usize = bs.iter().map(|b| b.ramification).sum();
            assert_eq!(total, g.multiplicity() as usize, "{text}");
            assert!(bs.iter().all(|b| vanishes(&g, b)), "{text}");
        }
    }

    #[test]
    fn tangent_to_y_axis_flag() {
        let (_, bs) = branches("x^2 - y^3", Field::Rationals, 10);
        assert!(bs[0].tangent_to_y_axis);
        assert_eq!(bs[0].ramification, 2);
    }

    #[test]
    fn valuations() {
        let q = Field::Rationals;
        let (_, cusp) = branches("y^2 - x^3", q, 8);
        assert_eq!(value_of(&BivarPoly::x(q), &cusp).unwrap(), ValueVector(vec![2]));
        let (_, node) = branches("x*y", q, 8);
        let sum = BivarPoly::x(q).add(&BivarPoly::y(q));
        assert_eq!(value_of(&sum, &node).unwrap(), ValueVector(vec![1, 1]));
        assert!(matches!(value_of(&BivarPoly::x(q), &node), Err(Error::ZeroDivisor { .. })));
    }

    #[test]
    fn values_beyond_initial_precision_are_found() {
        let q = Field::Rationals;
        let (_, cusp) = branches("y^2 - x^3", q, 3);
        let z = BivarPoly::y(q).pow(3);
        assert_eq!(value_of(&z, &cusp).unwrap(), ValueVector(vec![9]));
    }

    #[test]
    fn branch_json() {
        let (_, bs) = branches("y^2 - x^3", Field::Prime(7), 4);
        let v = bs[0].to_json();
        assert_eq!(v["precision"], 4);
        assert_eq!(v["x"].as_array().unwrap().len(), 4);
    }
}
