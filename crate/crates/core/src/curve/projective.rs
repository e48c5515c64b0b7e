use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::CurveGerm;
use crate::algebra::{BivarPoly, Field, FieldElem};
use crate::error::{Error, Result};

/// A homogeneous polynomial `F(x, y, z)` over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryForm {
    p: u64,
    degree: u32,
    terms: BTreeMap<(u32, u32, u32), u64>,
}

impl TernaryForm {
    /// Homogenization `z^d f(x/z, y/z)` of an affine equation over `F_p`.
    pub fn homogenize(f: &BivarPoly) -> Result<TernaryForm> {
        let Field::Prime(p) = f.field() else {
            return Err(Error::InvalidInput("global curves must be defined over a prime field".into()));
        };
        let degree = f.total_degree().ok_or(Error::ZeroPolynomial)?;
        let terms = f
            .terms()
            .map(|(&(a, b), c)| ((a, b, degree - a - b), residue(c)))
            .collect();
        Ok(TernaryForm { p, degree, terms })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Terms as `((a, b, c), residue)` for `x^a y^b z^c`.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &u64)> {
        self.terms.iter()
    }

    pub fn eval(&self, pt: [u64; 3]) -> u64 {
        let p = self.p as u128;
        let mut acc = 0u128;
        for (&(a, b, c), &coef) in &self.terms {
            let mut v = coef as u128;
            v = v * powm(pt[0], a, self.p) as u128 % p;
            v = v * powm(pt[1], b, self.p) as u128 % p;
            v = v * powm(pt[2], c, self.p) as u128 % p;
            acc = (acc + v) % p;
        }
        acc as u64
    }

    /// Partial derivative with respect to coordinate `i` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, i: usize) -> TernaryForm {
        let mut terms = BTreeMap::new();
        for (&e, &coef) in &self.terms {
            let exps = [e.0, e.1, e.2];
            if exps[i] == 0 {
                continue;
            }
            let c = coef as u128 * (exps[i] as u128 % self.p as u128) % self.p as u128;
            if c == 0 {
                continue;
            }
            let mut ne = exps;
            ne[i] -= 1;
            terms.insert((ne[0], ne[1], ne[2]), c as u64);
        }
        TernaryForm { p: self.p, degree: self.degree.saturating_sub(1), terms }
    }

    /// Affine equation of the chart in which `chart`'s coordinate is 1,
    /// with the remaining two coordinates (in their natural order) as `x`
    /// and `y`.
    pub fn dehomogenize(&self, chart: GermChart) -> BivarPoly {
        let field = Field::Prime(self.p);
        let mut f = BivarPoly::zero(field);
        for (&(a, b, c), &coef) in &self.terms {
            let (u, v) = match chart {
                GermChart::Z => (a, b),
                GermChart::Y => (a, c),
                GermChart::X => (b, c),
            };
            f.add_term(u, v, field.from_i64(coef as i64));
        }
        f
    }
}

fn residue(c: &FieldElem) -> u64 {
    match c {
        FieldElem::Fp { value, .. } => *value,
        FieldElem::Q(_) => unreachable!("checked by caller"),
    }
}

fn powm(b: u64, e: u32, p: u64) -> u64 {
    let mut acc = 1u128 % p as u128;
    let mut base = b as u128 % p as u128;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// A point of `P^2(F_p)` with its first nonzero coordinate equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(pub [u64; 3]);

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl ProjPoint {
    /// All points of `P^2(F_p)` in lexicographic order.
    pub fn all(p: u64) -> Vec<ProjPoint> {
        let mut pts = vec![ProjPoint([0, 0, 1])];
        pts.extend((0..p).map(|c| ProjPoint([0, 1, c])));
        for b in 0..p {
            for c in 0..p {
                pts.push(ProjPoint([1, b, c]));
            }
        }
        pts
    }
}

/// Which coordinate is set to 1 to obtain the affine chart around a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GermChart {
    /// `z = 1`, local coordinates `(x, y)`.
    Z,
    /// `y = 1`, local coordinates `(x, z)`.
    Y,
    /// `x = 1`, local coordinates `(y, z)`.
    X,
}

/// A rational singular point together with its germ.
#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub point: ProjPoint,
    pub chart: GermChart,
    pub germ: CurveGerm,
}

/// All `F_p`-points where `F` and its three partial derivatives vanish, in
/// lexicographic order. The enumeration cost `p^2 * deg` must fit in
/// `budget`.
pub fn find_singular_points(form: &TernaryForm, budget: u128) -> Result<Vec<ProjPoint>> {
    let p = form.prime();
    let needed = (p as u128) * (p as u128) * form.degree().max(1) as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let partials = [form.partial(0), form.partial(1), form.partial(2)];
    Ok(ProjPoint::all(p)
        .into_iter()
        .filter(|pt| form.eval(pt.0) == 0 && partials.iter().all(|d| d.eval(pt.0) == 0))
        .collect())
}

/// A projective plane curve over `F_p` with its rational singular points.
#[derive(Clone, Debug)]
pub struct GlobalCurve {
    form: TernaryForm,
    singular: Vec<SingularPoint>,
}

impl GlobalCurve {
    /// Projective closure of the affine curve `f = 0` over `F_p`.
    pub fn from_affine(f: &BivarPoly, budget: u128) -> Result<GlobalCurve> {
        if !f.is_squarefree() {
            return Err(Error::DegenerateReduction(format!("{f} has a repeated factor")));
        }
        let form = TernaryForm::homogenize(f)?;
        let field = Field::Prime(form.prime());
        let mut singular = Vec::new();
        for pt in find_singular_points(&form, budget)? {
            let [a, b, c] = pt.0;
            let (chart, u, v) = if c != 0 {
                let inv = field.from_i64(c as i64).inv().unwrap();
                (GermChart::Z, &field.from_i64(a as i64) * &inv, &field.from_i64(b as i64) * &inv)
            } else if b != 0 {
                (GermChart::Y, field.from_i64(a as i64), field.zero())
            } else {
                (GermChart::X, field.zero(), field.zero())
            };
            let germ = CurveGerm::at_point(&form.dehomogenize(chart), &u, &v)?;
            singular.push(SingularPoint { point: pt, chart, germ });
        }
        Ok(GlobalCurve { form, singular })
    }

    /// Parses an affine equation and reduces it modulo `p`.
    pub fn parse(text: &str, p: u64, budget: u128) -> Result<GlobalCurve> {
        let f = super::reduce_mod_p(&super::parse_curve(text)?, p)?;
        GlobalCurve::from_affine(&f, budget)
    }

    pub fn form(&self) -> &TernaryForm {
        &self.form
    }

    pub fn q(&self) -> u64 {
        self.form.prime()
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.singular
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{parse_curve, reduce_mod_p};

    fn form(text: &str, p: u64) -> TernaryForm {
        TernaryForm::homogenize(&reduce_mod_p(&parse_curve(text).unwrap(), p).unwrap()).unwrap()
    }

    /// Independent check: the Jacobian criterion evaluated by brute force
    /// over every representative of every point.
    fn brute_singular(text: &str, p: u64) -> Vec<ProjPoint> {
        let f = form(text, p);
        let mut out = Vec::new();
        for pt in ProjPoint::all(p) {
            let vanish = (1..p).all(|l| {
                let scaled = [pt.0[0] * l % p, pt.0[1] * l % p, pt.0[2] * l % p];
                f.eval(scaled) == 0 && (0..3).all(|i| f.partial(i).eval(scaled) == 0)
            });
            if vanish {
                out.push(pt);
            }
        }
        out
    }

    #[test]
    fn nodal_cubic_over_f3() {
        let pts = find_singular_points(&form("y^2 - x^3 - x^2", 3), 1_000_000).unwrap();
        assert_eq!(pts, vec![ProjPoint([0, 0, 1])]);
        assert_eq!(pts, brute_singular("y^2 - x^3 - x^2", 3));
    }

    #[test]
    fn smooth_conic_over_f5() {
        assert!(find_singular_points(&form("x^2 + y^2 - 1", 5), 1_000_000).unwrap().is_empty());
        assert!(brute_singular("x^2 + y^2 - 1", 5).is_empty());
    }

    #[test]
    fn cuspidal_cubic_over_f2() {
        let pts = find_singular_points(&form("y^2 - x^3", 2), 1_000_000).unwrap();
        assert_eq!(pts, vec![ProjPoint([0, 0, 1])]);
        assert_eq!(pts[0].to_string(), "(0:0:1)");
    }

    #[test]
    fn singular_point_at_infinity_gets_a_chart() {
        // y = x^3 has a cusp at (0:1:0).
        let c = GlobalCurve::parse("y - x^3", 5, 1_000_000).unwrap();
        assert_eq!(c.singular_points().len(), 1);
        let sp = &c.singular_points()[0];
        assert_eq!(sp.point, ProjPoint([0, 1, 0]));
        assert_eq!(sp.chart, GermChart::Y);
        assert!(sp.germ.multiplicity() >= 2);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            find_singular_points(&form("y^2 - x^3", 31), 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
