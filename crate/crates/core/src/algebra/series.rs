//! Truncated univariate power series `sum_{i < precision} a_i t^i`.
//!
//! Precision is tracked pessimistically: every binary operation returns the
//! minimum of its operands' precisions, so no coefficient is ever reported
//! that the inputs did not determine.

use std::fmt;

use super::field::{Field, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    field: Field,
    coeffs: Vec<FieldElem>,
}

/// Result of [`TruncSeries::order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrder {
    Finite(usize),
    /// Every stored coefficient vanishes; the true order is at least the
    /// given precision.
    AbovePrecision(usize),
}

impl SeriesOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            SeriesOrder::Finite(n) => Some(n),
            SeriesOrder::AbovePrecision(_) => None,
        }
    }
}

impl TruncSeries {
    /// Series with the given coefficients; the precision is their count.
    pub fn new(field: Field, coeffs: Vec<FieldElem>) -> TruncSeries {
        assert!(!coeffs.is_empty(), "precision must be at least 1");
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        TruncSeries { field, coeffs }
    }

    pub fn zero(field: Field, precision: usize) -> TruncSeries {
        TruncSeries::new(field, vec![field.zero(); precision])
    }

    pub fn constant(c: FieldElem, precision: usize) -> TruncSeries {
        let field = c.field();
        let mut s = TruncSeries::zero(field, precision);
        s.coeffs[0] = c;
        s
    }

    /// `c * t^k`, truncated.
    pub fn monomial(c: FieldElem, k: usize, precision: usize) -> TruncSeries {
        let field = c.field();
        let mut s = TruncSeries::zero(field, precision);
        if k < precision {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_i64(field: Field, coeffs: &[i64], precision: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(field, precision);
        for (i, c) in coeffs.iter().enumerate().take(precision) {
            s.coeffs[i] = field.from_i64(*c);
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &FieldElem {
        &self.coeffs[i]
    }

    pub fn order(&self) -> SeriesOrder {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => SeriesOrder::Finite(i),
            None => SeriesOrder::AbovePrecision(self.precision()),
        }
    }

    pub fn truncate(&self, precision: usize) -> TruncSeries {
        let p = precision.min(self.precision()).max(1);
        TruncSeries::new(self.field, self.coeffs[..p].to_vec())
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let p = self.precision().min(other.precision());
        let coeffs = (0..p).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        TruncSeries::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        let p = self.precision().min(other.precision());
        let coeffs = (0..p).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        TruncSeries::new(self.field, coeffs)
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &FieldElem) -> TruncSeries {
        TruncSeries::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let p = self.precision().min(other.precision());
        let mut out = vec![self.field.zero(); p];
        for (i, a) in self.coeffs.iter().enumerate().take(p) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(p - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        TruncSeries::new(self.field, out)
    }

    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::constant(self.field.one(), self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Option<TruncSeries> {
        let c0inv = self.coeffs[0].inv()?;
        let p = self.precision();
        let mut out = vec![self.field.zero(); p];
        out[0] = c0inv.clone();
        for k in 1..p {
            let mut acc = self.field.zero();
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -&(&acc * &c0inv);
        }
        Some(TruncSeries::new(self.field, out))
    }

    /// Multiplication by `t^k`; the precision grows by `k` because the
    /// low coefficients are known to vanish.
    pub fn shift_up(&self, k: usize) -> TruncSeries {
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncSeries::new(self.field, coeffs)
    }

    /// Substitutes `t -> c t`.
    pub fn rescale_variable(&self, c: &FieldElem) -> TruncSeries {
        let mut pw = self.field.one();
        let mut out = Vec::with_capacity(self.precision());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        TruncSeries::new(self.field, out)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        let f = Field::Rationals;
        let s = TruncSeries::from_i64(f, &[0, 0, 0, 1, 0, 1], 10);
        assert_eq!(s.order(), SeriesOrder::Finite(3));
        assert_eq!(TruncSeries::zero(f, 10).order(), SeriesOrder::AbovePrecision(10));
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let f = Field::Prime(3);
        let s = TruncSeries::from_i64(f, &[1, -1], 6);
        let inv = s.inverse().unwrap();
        assert!(inv.coeffs().iter().all(|c| c.is_one()));
        assert!(TruncSeries::from_i64(f, &[0, 1], 4).inverse().is_none());
    }

    #[test]
    fn precision_is_pessimistic() {
        let f = Field::Rationals;
        let a = TruncSeries::from_i64(f, &[1, 1], 8);
        let b = TruncSeries::from_i64(f, &[1, 1], 5);
        assert_eq!(a.mul(&b).precision(), 5);
        assert_eq!(a.add(&b).precision(), 5);
    }
}
