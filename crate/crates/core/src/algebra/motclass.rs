//! Classes in `Z[L, L^-1]`, the part of the localized Grothendieck ring of
//! varieties spanned by powers of the Lefschetz class `L = [A^1]`, and
//! multivariate power series with such coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{format_rational, Rational};

/// A Laurent polynomial in `L` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotClass {
    coeffs: BTreeMap<i64, BigInt>,
}

impl MotClass {
    pub fn zero() -> MotClass {
        MotClass::default()
    }

    pub fn one() -> MotClass {
        MotClass::l_pow(0)
    }

    pub fn from_int(c: i64) -> MotClass {
        MotClass::term(c, 0)
    }

    /// `L^k`.
    pub fn l_pow(k: i64) -> MotClass {
        MotClass::term(1, k)
    }

    /// `c L^k`.
    pub fn term(c: i64, k: i64) -> MotClass {
        let mut m = MotClass::zero();
        m.add_term(k, BigInt::from(c));
        m
    }

    /// `L - 1`, the class of the multiplicative group.
    pub fn l_minus_one() -> MotClass {
        &MotClass::l_pow(1) - &MotClass::one()
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplication by `L^k`.
    pub fn shift(&self, k: i64) -> MotClass {
        MotClass {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MotClass {
        let mut acc = MotClass::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient, `None` when `divisor` does not divide `self` in
    /// `Z[L, L^-1]` (or `divisor` is zero).
    pub fn div_exact(&self, divisor: &MotClass) -> Option<MotClass> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MotClass::zero());
        }
        // Normalize both to polynomials with nonzero constant term, divide
        // as integer polynomials, then restore the L-power.
        let ds = divisor.min_exponent().unwrap();
        let ns = self.min_exponent().unwrap();
        let d = divisor.shift(-ds);
        let mut rem = self.shift(-ns);
        let d_deg = d.max_exponent().unwrap();
        let d_lead = d.coeff(d_deg);
        let mut quot = MotClass::zero();
        while let Some(top) = rem.max_exponent() {
            if top < d_deg {
                return None;
            }
            let c = rem.coeff(top);
            if !(&c % &d_lead).is_zero() {
                return None;
            }
            let qc = &c / &d_lead;
            let k = top - d_deg;
            let mut t = MotClass::zero();
            t.add_term(k, qc);
            rem = &rem - &(&t * &d);
            quot = &quot + &t;
        }
        Some(quot.shift(ns - ds))
    }

    /// Counting specialization `L -> q`.
    pub fn evaluate(&self, q: u64) -> Rational {
        let qb = BigRational::from_integer(BigInt::from(q));
        let mut acc = BigRational::zero();
        for (&k, c) in &self.coeffs {
            let pw = if k >= 0 {
                num_traits::pow(qb.clone(), k as usize)
            } else {
                num_traits::pow(qb.clone(), (-k) as usize).recip()
            };
            acc += BigRational::from_integer(c.clone()) * pw;
        }
        acc
    }

    /// Factored presentation `(L-1)^a L^b (rest)`, e.g. `(L-1)L^-2`.
    pub fn factored(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let low = self.min_exponent().unwrap();
        let mut rest = self.shift(-low);
        let mut a = 0;
        let lm1 = MotClass::l_minus_one();
        while let Some(q) = rest.div_exact(&lm1) {
            if q.is_zero() {
                break;
            }
            rest = q;
            a += 1;
        }
        let mut parts = Vec::new();
        let rest_is_one = rest == MotClass::one();
        let rest_is_minus_one = rest == MotClass::from_int(-1);
        if rest_is_minus_one {
            parts.push("-".to_string());
        } else if !rest_is_one {
            parts.push(format!("({rest})"));
        }
        match a {
            0 => {}
            1 => parts.push("(L-1)".into()),
            _ => parts.push(format!("(L-1)^{a}")),
        }
        match low {
            0 => {}
            1 => parts.push("L".into()),
            _ => parts.push(format!("L^{low}")),
        }
        let s: String = parts.concat();
        if s.is_empty() || s == "-" {
            format!("{s}1")
        } else {
            s
        }
    }
}

impl Add for &MotClass {
    type Output = MotClass;
    fn add(self, rhs: &MotClass) -> MotClass {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &MotClass {
    type Output = MotClass;
    fn sub(self, rhs: &MotClass) -> MotClass {
        self + &(-rhs)
    }
}

impl Neg for &MotClass {
    type Output = MotClass;
    fn neg(self) -> MotClass {
        MotClass {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &MotClass {
    type Output = MotClass;
    fn mul(self, rhs: &MotClass) -> MotClass {
        let mut out = MotClass::zero();
        for (&k1, c1) in &self.coeffs {
            for (&k2, c2) in &rhs.coeffs {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for MotClass {
    /// Expanded form with decreasing exponents, e.g. `L^4 - 2L^3 + L^2` or
    /// `L^-1 - L^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            let sign = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let power = match k {
                0 => String::new(),
                1 => "L".into(),
                _ => format!("L^{k}"),
            };
            let body = if power.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                power
            } else {
                format!("{mag}{power}")
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

/// A power series in `d` variables with [`MotClass`] coefficients, kept for
/// exponent vectors of total degree at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotSeries {
    vars: usize,
    bound: u32,
    terms: BTreeMap<Vec<u32>, MotClass>,
}

impl MotSeries {
    pub fn new(vars: usize, bound: u32) -> MotSeries {
        assert!(vars >= 1);
        MotSeries { vars, bound, terms: BTreeMap::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Adds `c t^n`; terms beyond the bound are discarded.
    pub fn add_term(&mut self, n: Vec<u32>, c: MotClass) {
        assert_eq!(n.len(), self.vars);
        if n.iter().sum::<u32>() > self.bound || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(n.clone()).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn coeff(&self, n: &[u32]) -> MotClass {
        self.terms.get(n).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &MotClass)> {
        self.terms.iter()
    }

    /// Coefficientwise multiplication by a class.
    pub fn scale(&self, c: &MotClass) -> MotSeries {
        let mut out = MotSeries::new(self.vars, self.bound);
        for (n, v) in &self.terms {
            out.add_term(n.clone(), v * c);
        }
        out
    }

    /// Specialization `t_1 = ... = t_d = t`.
    pub fn diagonal(&self) -> MotSeries {
        let mut out = MotSeries::new(1, self.bound);
        for (n, v) in &self.terms {
            out.add_term(vec![n.iter().sum()], v.clone());
        }
        out
    }

    /// Counting specialization of every coefficient.
    pub fn specialize(&self, q: u64) -> BTreeMap<Vec<u32>, Rational> {
        self.terms.iter().map(|(n, v)| (n.clone(), v.evaluate(q))).collect()
    }

    /// Dense coefficient list of a one-variable series, `0..=bound`.
    pub fn univariate_coeffs(&self) -> Vec<MotClass> {
        assert_eq!(self.vars, 1);
        (0..=self.bound).map(|k| self.coeff(&[k])).collect()
    }
}

/// Display helper for specialized coefficients.
pub fn rational_string(r: &Rational) -> String {
    format_rational(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_examples() {
        let lm1 = MotClass::l_minus_one();
        assert_eq!(lm1.evaluate(3), Rational::from_integer(2.into()));
        assert_eq!(MotClass::l_pow(-2).evaluate(2), Rational::new(1.into(), 4.into()));
        let c = &MotClass::l_pow(6) - &MotClass::l_pow(5);
        assert_eq!(c.evaluate(2), Rational::from_integer(32.into()));
    }

    #[test]
    fn exact_division() {
        let lm1 = MotClass::l_minus_one();
        let f = &(&MotClass::l_pow(4) - &MotClass::term(2, 3)) + &MotClass::l_pow(2);
        let q = f.div_exact(&lm1).unwrap();
        assert_eq!(q, &MotClass::l_pow(3) - &MotClass::l_pow(2));
        assert!(MotClass::l_pow(3).div_exact(&lm1).is_none());
        assert_eq!(MotClass::l_pow(-3).div_exact(&MotClass::l_pow(-1)), Some(MotClass::l_pow(-2)));
    }

    #[test]
    fn display_forms() {
        let c = &MotClass::l_pow(-1) - &MotClass::l_pow(-2);
        assert_eq!(c.to_string(), "L^-1 - L^-2");
        assert_eq!(c.factored(), "(L-1)L^-2");
        let f = &(&MotClass::l_pow(4) - &MotClass::term(2, 3)) + &MotClass::l_pow(2);
        assert_eq!(f.to_string(), "L^4 - 2L^3 + L^2");
        assert_eq!(f.factored(), "(L-1)^2L^2");
        assert_eq!(MotClass::l_pow(1).factored(), "L");
        assert_eq!(MotClass::one().factored(), "1");
        assert_eq!(MotClass::l_minus_one().to_string(), "L - 1");
    }

    #[test]
    fn diagonal_sums_total_degree() {
        let mut s = MotSeries::new(2, 3);
        s.add_term(vec![1, 1], MotClass::one());
        s.add_term(vec![2, 0], MotClass::l_pow(1));
        s.add_term(vec![3, 1], MotClass::one());
        let d = s.diagonal();
        assert_eq!(d.coeff(&[2]), &MotClass::one() + &MotClass::l_pow(1));
        assert_eq!(d.coeff(&[4]), MotClass::zero());
    }
}
