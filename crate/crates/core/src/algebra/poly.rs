//! Sparse bivariate polynomials in `x`, `y`.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, FieldElem};
use super::series::TruncSeries;
use super::unipoly::UniPoly;

/// Sparse polynomial `sum c_{a,b} x^a y^b`; zero coefficients are never
/// stored and all coefficients share one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    field: Field,
    terms: BTreeMap<(u32, u32), FieldElem>,
}

impl BivarPoly {
    pub fn zero(field: Field) -> BivarPoly {
        BivarPoly { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElem) -> BivarPoly {
        let mut p = BivarPoly::zero(c.field());
        p.add_term(0, 0, c);
        p
    }

    pub fn monomial(c: FieldElem, a: u32, b: u32) -> BivarPoly {
        let mut p = BivarPoly::zero(c.field());
        p.add_term(a, b, c);
        p
    }

    pub fn x(field: Field) -> BivarPoly {
        BivarPoly::monomial(field.one(), 1, 0)
    }

    pub fn y(field: Field) -> BivarPoly {
        BivarPoly::monomial(field.one(), 0, 1)
    }

    /// Builds a polynomial from `(a, b, c)` triples with small integer
    /// coefficients; repeated exponents are summed.
    pub fn from_i64_terms(field: Field, terms: &[(u32, u32, i64)]) -> BivarPoly {
        let mut p = BivarPoly::zero(field);
        for &(a, b, c) in terms {
            p.add_term(a, b, field.from_i64(c));
        }
        p
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = ((u32, u32), FieldElem)>) -> BivarPoly {
        let mut p = BivarPoly::zero(field);
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: FieldElem) {
        assert_eq!(c.field(), self.field, "coefficient field mismatch");
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let sum = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> FieldElem {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|(a, _)| *a).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|(_, b)| *b).max().unwrap_or(0)
    }

    /// Lowest total degree of a term: the multiplicity at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).min()
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BivarPoly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &FieldElem) -> BivarPoly {
        self.map_coeffs(|a| a * c)
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (&(a, b), c) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a + a2, b + b2, c * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        let mut acc = BivarPoly::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies `g` to every coefficient, dropping results that vanish.
    pub fn map_coeffs(&self, g: impl Fn(&FieldElem) -> FieldElem) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (&(a, b), c) in &self.terms {
            out.add_term(a, b, g(c));
        }
        out
    }

    /// Re-tags coefficients into another field via `g`.
    pub fn map_into(&self, field: Field, g: impl Fn(&FieldElem) -> FieldElem) -> BivarPoly {
        let mut out = BivarPoly::zero(field);
        for (&(a, b), c) in &self.terms {
            out.add_term(a, b, g(c));
        }
        out
    }

    pub fn eval(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for (&(a, b), c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(a as u64)) * &y.pow(b as u64));
        }
        acc
    }

    pub fn partial_x(&self) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                out.add_term(a - 1, b, c * &self.field.from_i64(a as i64));
            }
        }
        out
    }

    pub fn partial_y(&self) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (&(a, b), c) in &self.terms {
            if b > 0 {
                out.add_term(a, b - 1, c * &self.field.from_i64(b as i64));
            }
        }
        out
    }

    /// Substitutes `x -> px`, `y -> py` for polynomials `px`, `py`.
    pub fn compose(&self, px: &BivarPoly, py: &BivarPoly) -> BivarPoly {
        let max_a = self.degree_x();
        let max_b = self.degree_y();
        let xs = powers(px, max_a);
        let ys = powers(py, max_b);
        let mut out = BivarPoly::zero(self.field);
        for (&(a, b), c) in &self.terms {
            out = out.add(&xs[a as usize].mul(&ys[b as usize]).scale(c));
        }
        out
    }

    /// `f(x + dx, y + dy)`.
    pub fn translate(&self, dx: &FieldElem, dy: &FieldElem) -> BivarPoly {
        let px = BivarPoly::x(self.field).add(&BivarPoly::constant(dx.clone()));
        let py = BivarPoly::y(self.field).add(&BivarPoly::constant(dy.clone()));
        self.compose(&px, &py)
    }

    /// Exact division by `x^k y^l`; panics if some term is not divisible.
    pub fn divide_monomial(&self, k: u32, l: u32) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (&(a, b), c) in &self.terms {
            assert!(a >= k && b >= l, "monomial division is not exact");
            out.add_term(a - k, b - l, c.clone());
        }
        out
    }

    /// Homogeneous part of lowest degree `m`, dehomogenized as the
    /// polynomial `g_m(1, s)` in `s` (coefficient of `s^b` is that of
    /// `x^{m-b} y^b`). Returns `(m, g_m(1, s))`.
    pub fn tangent_cone(&self) -> Option<(u32, UniPoly)> {
        let m = self.order()?;
        let mut coeffs = vec![self.field.zero(); m as usize + 1];
        for (&(a, b), c) in &self.terms {
            if a + b == m {
                coeffs[b as usize] = c.clone();
            }
        }
        Some((m, UniPoly::new(self.field, coeffs)))
    }

    /// `f(x(t), y(t))`, truncated to the smaller precision of the inputs.
    pub fn substitute_series(&self, x: &TruncSeries, y: &TruncSeries) -> TruncSeries {
        let prec = x.precision().min(y.precision());
        let x = x.truncate(prec);
        let y = y.truncate(prec);
        let mut xs = vec![TruncSeries::constant(self.field.one(), prec)];
        for _ in 0..self.degree_x() {
            let next = xs.last().unwrap().mul(&x);
            xs.push(next);
        }
        let mut ys = vec![TruncSeries::constant(self.field.one(), prec)];
        for _ in 0..self.degree_y() {
            let next = ys.last().unwrap().mul(&y);
            ys.push(next);
        }
        let mut acc = TruncSeries::zero(self.field, prec);
        for (&(a, b), c) in &self.terms {
            acc = acc.add(&xs[a as usize].mul(&ys[b as usize]).scale(c));
        }
        acc
    }

    /// Coefficients as a polynomial in `y` over `k[x]`.
    fn y_rows(&self) -> Vec<UniPoly> {
        let mut rows: Vec<Vec<FieldElem>> =
            vec![vec![self.field.zero(); self.degree_x() as usize + 1]; self.degree_y() as usize + 1];
        for (&(a, b), c) in &self.terms {
            rows[b as usize][a as usize] = c.clone();
        }
        rows.into_iter().map(|r| UniPoly::new(self.field, r)).collect()
    }

    fn from_y_rows(field: Field, rows: &[UniPoly]) -> BivarPoly {
        let mut out = BivarPoly::zero(field);
        for (b, row) in rows.iter().enumerate() {
            for (a, c) in row.coeffs().iter().enumerate() {
                out.add_term(a as u32, b as u32, c.clone());
            }
        }
        out
    }

    /// Greatest common divisor, normalized so that its leading coefficient
    /// (in `y`, then in `x`) is one. Uses a primitive pseudo-remainder
    /// sequence over `k[x][y]`.
    pub fn gcd(&self, other: &BivarPoly) -> BivarPoly {
        if self.is_zero() {
            return normalize(other);
        }
        if other.is_zero() {
            return normalize(self);
        }
        let field = self.field;
        let a = trim(self.y_rows());
        let b = trim(other.y_rows());
        let ca = content(&a);
        let cb = content(&b);
        let c = ca.gcd(&cb);
        let mut f = primitive_part(&a, &ca);
        let mut g = primitive_part(&b, &cb);
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        while !g.is_empty() {
            let r = trim(pseudo_remainder(&f, &g));
            f = g;
            g = if r.is_empty() {
                r
            } else {
                let cr = content(&r);
                primitive_part(&r, &cr)
            };
        }
        let result = if f.len() <= 1 {
            vec![c]
        } else {
            f.iter().map(|row| row.mul(&c)).collect()
        };
        normalize(&BivarPoly::from_y_rows(field, &result))
    }

    /// Whether no nonconstant factor occurs twice, via
    /// `gcd(f, f_x, f_y) = 1` (valid over perfect fields).
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let g = self.gcd(&self.partial_x()).gcd(&self.partial_y());
        g.is_constant()
    }
}

fn powers(p: &BivarPoly, max: u32) -> Vec<BivarPoly> {
    let mut out = vec![BivarPoly::constant(p.field().one())];
    for _ in 0..max {
        let next = out.last().unwrap().mul(p);
        out.push(next);
    }
    out
}

fn trim(mut rows: Vec<UniPoly>) -> Vec<UniPoly> {
    while rows.last().is_some_and(|r| r.is_zero()) {
        rows.pop();
    }
    rows
}

fn content(rows: &[UniPoly]) -> UniPoly {
    let field = rows[0].field();
    rows.iter().fold(UniPoly::zero(field), |acc, r| acc.gcd(r))
}

fn primitive_part(rows: &[UniPoly], c: &UniPoly) -> Vec<UniPoly> {
    rows.iter()
        .map(|r| {
            let (q, rem) = r.div_rem(c);
            debug_assert!(rem.is_zero());
            q
        })
        .collect()
}

/// `lc(g)^(deg f - deg g + 1) f mod g` in `k[x][y]`.
fn pseudo_remainder(f: &[UniPoly], g: &[UniPoly]) -> Vec<UniPoly> {
    let dg = g.len() - 1;
    let lc = g[dg].clone();
    let mut r: Vec<UniPoly> = f.to_vec();
    while r.len() > dg && !r.is_empty() {
        let k = r.len() - 1 - dg;
        let lead = r[r.len() - 1].clone();
        for row in r.iter_mut() {
            *row = row.mul(&lc);
        }
        for (j, gj) in g.iter().enumerate() {
            r[k + j] = r[k + j].sub(&gj.mul(&lead));
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        r = trim(r);
    }
    r
}

fn normalize(p: &BivarPoly) -> BivarPoly {
    match p.terms.iter().max_by_key(|((a, b), _)| (*b, *a)) {
        None => p.clone(),
        Some((_, lead)) => {
            let inv = lead.inv().unwrap();
            p.scale(&inv)
        }
    }
}

fn monomial_string(a: u32, b: u32) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part("x", a), part("y", b)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

impl fmt::Display for BivarPoly {
    /// Canonical form: terms by increasing total degree, ties by increasing
    /// power of `x`. Parsing the output reproduces the polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|(a, b)| (a + b, *a));
        for (i, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let negative = c.is_negative();
            let magnitude = if negative { -c } else { c.clone() };
            let sign = match (i, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let mono = monomial_string(key.0, key.1);
            let body = if mono.is_empty() {
                magnitude.to_string()
            } else if magnitude.is_one() {
                mono
            } else {
                format!("{magnitude}*{mono}")
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(terms: &[(u32, u32, i64)]) -> BivarPoly {
        BivarPoly::from_i64_terms(Field::Rationals, terms)
    }

    #[test]
    fn display_is_canonical() {
        let f = q(&[(3, 0, -1), (0, 2, 1)]);
        assert_eq!(f.to_string(), "y^2 - x^3");
        let g = q(&[(2, 0, -1), (0, 2, 1), (3, 0, -1)]);
        assert_eq!(g.to_string(), "y^2 - x^2 - x^3");
        assert_eq!(BivarPoly::from_i64_terms(Field::Prime(7), &[(0, 2, 1), (3, 0, -1)]).to_string(), "y^2 + 6*x^3");
    }

    #[test]
    fn substitution_into_cusp() {
        let f = q(&[(0, 2, 1), (3, 0, -1)]);
        let field = Field::Rationals;
        let x = TruncSeries::from_i64(field, &[0, 0, 1], 12);
        let y = TruncSeries::from_i64(field, &[0, 0, 0, 1, 1], 12);
        let s = f.substitute_series(&x, &y);
        // (t^3 + t^4)^2 - t^6 = 2t^7 + t^8
        assert_eq!(s, TruncSeries::from_i64(field, &[0, 0, 0, 0, 0, 0, 0, 2, 1], 12));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = q(&[(0, 1, 1), (1, 0, -1)]); // y - x
        let b = q(&[(0, 1, 1), (2, 0, 1)]); // y + x^2
        let ab = a.mul(&b);
        let aa = a.mul(&a);
        assert_eq!(ab.gcd(&aa), a);
        assert!(ab.is_squarefree());
        assert!(!aa.mul(&b).is_squarefree());
        let tacnode2 = BivarPoly::from_i64_terms(Field::Prime(2), &[(0, 2, 1), (4, 0, -1)]);
        assert!(!tacnode2.is_squarefree());
        let cusp2 = BivarPoly::from_i64_terms(Field::Prime(2), &[(0, 2, 1), (3, 0, -1)]);
        assert!(cusp2.is_squarefree());
    }

    #[test]
    fn tangent_cone_of_node() {
        let f = q(&[(0, 2, 1), (2, 0, -1), (3, 0, -1)]);
        let (m, cone) = f.tangent_cone().unwrap();
        assert_eq!(m, 2);
        let roots: Vec<String> = cone.roots().iter().map(|(r, _)| r.to_string()).collect();
        assert_eq!(roots, vec!["-1", "1"]);
    }
}
