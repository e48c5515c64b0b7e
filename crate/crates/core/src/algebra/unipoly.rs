//! Dense univariate polynomials over a [`Field`], used for tangent-cone
//! root finding, the gcd underneath squarefree checks, and extension-field
//! point counting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{Field, FieldElem, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    /// Coefficients from degree 0 upward, without trailing zeros.
    coeffs: Vec<FieldElem>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<FieldElem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> UniPoly {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> UniPoly {
        UniPoly::new(c.field(), vec![c])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        UniPoly::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        UniPoly::new(self.field, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(self.field, out)
    }

    pub fn scale(&self, c: &FieldElem) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &lead_inv;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * b);
                }
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UniPoly::new(self.field, quot), UniPoly::new(self.field, rem))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_i64(i as i64) * c)
            .collect();
        UniPoly::new(self.field, coeffs)
    }

    /// `self^e mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut e: u128, modulus: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::constant(self.field.one()).div_rem(modulus).1;
        let mut base = self.div_rem(modulus).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(modulus).1;
            }
            base = base.mul(&base).div_rem(modulus).1;
            e >>= 1;
        }
        acc
    }

    /// Roots in the ground field with multiplicities, sorted by
    /// [`FieldElem::sort_key`]. Over the rationals this is a rational-root
    /// search; over `F_p` an exhaustive one.
    pub fn roots(&self) -> Vec<(FieldElem, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let candidates = match self.field {
            Field::Prime(_) => self.field.elements().unwrap(),
            Field::Rationals => rational_root_candidates(self),
        };
        let mut out = Vec::new();
        for r in candidates {
            let mut mult = 0;
            let mut p = self.clone();
            let lin = UniPoly::new(self.field, vec![-&r, self.field.one()]);
            loop {
                if p.is_zero() {
                    break;
                }
                let (q, rem) = p.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                mult += 1;
                p = q;
            }
            if mult > 0 {
                out.push((r, mult));
            }
        }
        out.sort_by_key(|(r, _)| r.sort_key());
        out
    }
}

/// Candidate rational roots p/q with p | a_0 and q | a_n after clearing
/// denominators, plus zero when it is a root.
fn rational_root_candidates(poly: &UniPoly) -> Vec<FieldElem> {
    let mut lcm = BigInt::one();
    for c in poly.coeffs() {
        lcm = lcm.lcm(c.as_rational().unwrap().denom());
    }
    let ints: Vec<BigInt> = poly
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        out.push(poly.field.zero());
    }
    let a0 = ints[low].abs();
    let an = ints.last().unwrap().abs();
    let num_divs = divisors(&a0);
    let den_divs = divisors(&an);
    let mut seen = std::collections::HashSet::new();
    for p in &num_divs {
        for q in &den_divs {
            for sign in [1, -1] {
                let r = Rational::new(p * BigInt::from(sign), q.clone());
                if seen.insert(r.clone()) {
                    out.push(FieldElem::Q(r));
                }
            }
        }
    }
    out
}

/// Positive divisors by trial division. Coefficients arising from plane
/// curve equations are small, so this stays cheap.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}
