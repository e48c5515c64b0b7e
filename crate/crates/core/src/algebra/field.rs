//! Coefficient fields: the rationals and prime fields `F_p`.
//!
//! Elements carry their own field tag so that mixed arithmetic is caught
//! instead of silently producing garbage. Arithmetic on mismatched operands
//! is an invariant violation and panics; public entry points check field
//! agreement up front and report [`Error::FieldMismatch`](crate::Error).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Prime field `F_p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Q(Rational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldElem::Fp {
                value: v.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Q(Rational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                FieldElem::Fp {
                    value: r.to_u64().expect("residue fits"),
                    modulus: *p,
                }
            }
        }
    }

    /// All elements of a prime field in residue order.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(
                (0..*p)
                    .map(|value| FieldElem::Fp { value, modulus: *p })
                    .collect(),
            ),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Deterministic primality by trial division; moduli here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(Rational),
    Fp { value: u64, modulus: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Rationals,
            FieldElem::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Fp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Q(r) => FieldElem::Q(r.recip()),
            FieldElem::Fp { value, modulus } => FieldElem::Fp {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            FieldElem::Q(r) => Some(r),
            FieldElem::Fp { .. } => None,
        }
    }

    /// Ordering key used for deterministic enumeration: numeric order over
    /// the rationals, residue order over `F_p`.
    pub fn sort_key(&self) -> SortKey {
        match self {
            FieldElem::Q(r) => SortKey::Q(r.clone()),
            FieldElem::Fp { value, .. } => SortKey::Fp(*value),
        }
    }

    /// Reduction of a rational modulo `p`; `None` when `p` divides the
    /// denominator.
    pub fn reduce_mod(r: &Rational, p: u64) -> Option<FieldElem> {
        let pb = BigInt::from(p);
        let den = r.denom().mod_floor(&pb);
        if den.is_zero() {
            return None;
        }
        let field = Field::Prime(p);
        let num = field.from_bigint(r.numer());
        let den = field.from_bigint(&den);
        Some(&num * &den.inv().expect("nonzero"))
    }

    /// Parses the decimal forms produced by `Display` ("-3/4", "5").
    pub fn parse_in(field: Field, text: &str) -> Option<FieldElem> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
            None => (text.parse::<BigInt>().ok()?, BigInt::one()),
        };
        if den.is_zero() {
            return None;
        }
        match field {
            Field::Rationals => Some(FieldElem::Q(Rational::new(num, den))),
            Field::Prime(p) => FieldElem::reduce_mod(&Rational::new(num, den), p),
        }
    }

    /// True for a negative rational; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_negative(),
            FieldElem::Fp { .. } => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SortKey {
    Q(Rational),
    Fp(u64),
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

fn mismatch(a: &FieldElem, b: &FieldElem) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { value: a, modulus: p }, FieldElem::Fp { value: b, modulus: q })
                if p == q =>
            {
                FieldElem::Fp {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a - b),
            (FieldElem::Fp { value: a, modulus: p }, FieldElem::Fp { value: b, modulus: q })
                if p == q =>
            {
                FieldElem::Fp {
                    value: ((*a as u128 + *p as u128 - *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { value: a, modulus: p }, FieldElem::Fp { value: b, modulus: q })
                if p == q =>
            {
                FieldElem::Fp {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { value, modulus } => FieldElem::Fp {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Formats a rational the same way `FieldElem` does.
pub fn format_rational(r: &Rational) -> String {
    FieldElem::Q(r.clone()).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for v in 1..7 {
            let a = f.from_i64(v);
            assert!((&a * &a.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn reduction_mod_p() {
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(FieldElem::reduce_mod(&half, 2), None);
        assert_eq!(FieldElem::reduce_mod(&half, 5), Some(Field::Prime(5).from_i64(3)));
        assert_eq!(Field::Prime(7).from_i64(-1).to_string(), "6");
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert!(Field::prime(31).is_ok());
    }

    #[test]
    fn display_round_trip() {
        let f = Field::Rationals;
        for s in ["0", "-3/4", "17", "5/3"] {
            assert_eq!(FieldElem::parse_in(f, s).unwrap().to_string(), s);
        }
    }
}
