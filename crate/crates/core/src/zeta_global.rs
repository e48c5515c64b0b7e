//! Global checks over a finite field: point counts, the Weil zeta function
//! of the smooth model, the zeta function of effective Cartier divisors,
//! and the factorization of the global zeta function into a smooth part
//! and local factors at the singular points.
//!
//! All series are compared after the counting specialization `L -> q`.
//! The global series are taken in the variable `q^{-1} T`, which is how the
//! local factors `sum [I_n] L^{-|n|} t^n` weigh an ideal of colength `|n|`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::gfext::GfExt;
use crate::algebra::motclass::rational_string;
use crate::algebra::Rational;
use crate::curve::{GlobalCurve, SingularPoint, TernaryForm};
use crate::error::{Error, Result};
use crate::oracle::{brute_force_ideal_counts, count_units};
use crate::semigroup::LocalRing;
use crate::zeta_local::local_zeta;

/// Point counts over `F_{q^m}` for `m = 1..=m_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCounts {
    pub q: u64,
    /// `N_m = #X(F_{q^m})`.
    pub counts: Vec<u64>,
    /// Counts of the smooth model: singular points replaced by branches.
    pub adjusted: Vec<i64>,
}

fn count_over(form: &TernaryForm, ext: &GfExt) -> u64 {
    let q = ext.order();
    let d = form.degree() as usize;
    // Affine part z = 1: for each x, count the y-roots of F(x, y, 1).
    let mut rows = vec![vec![0u64; d + 1]; d + 1];
    for (&(a, b, _), &c) in form.terms() {
        rows[b as usize][a as usize] = c;
    }
    let mut total = 0u64;
    for x in 0..q as u32 {
        let poly: Vec<u32> = rows.iter().map(|r| ext.eval_prime_poly(r, x)).collect();
        total += ext.count_roots(&poly);
    }
    // Line at infinity: (x : 1 : 0) and (1 : 0 : 0).
    let mut at_infinity = vec![0u64; d + 1];
    let mut corner = 0u64;
    for (&(a, b, c), &coef) in form.terms() {
        if c == 0 {
            at_infinity[a as usize] = coef;
            if b == 0 {
                corner = coef;
            }
        }
    }
    total += (0..q as u32).filter(|&x| ext.eval_prime_poly(&at_infinity, x) == 0).count() as u64;
    total += u64::from(corner == 0);
    total
}

/// Counts points over `F_{q^m}` for `m <= m_max`. The work, roughly
/// `sum q^m`, must fit in `budget`.
pub fn count_points(curve: &GlobalCurve, m_max: usize, budget: u128) -> Result<PointCounts> {
    let q = curve.q();
    let mut needed: u128 = 0;
    for m in 1..=m_max {
        needed = needed.saturating_add((q as u128).saturating_pow(m as u32));
    }
    if needed > budget || (q as u128).saturating_pow(m_max as u32) > u32::MAX as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let counts: Vec<u64> = (1..=m_max)
        .into_par_iter()
        .map(|m| count_over(curve.form(), &GfExt::new(q, m as u32)))
        .collect();
    let branch_total = branch_total(curve)?;
    let sing = curve.singular_points().len() as i64;
    let adjusted = counts.iter().map(|&n| n as i64 - sing + branch_total as i64).collect();
    Ok(PointCounts { q, counts, adjusted })
}

fn branch_total(curve: &GlobalCurve) -> Result<usize> {
    let mut total = 0;
    for sp in curve.singular_points() {
        total += crate::resolution::resolve_germ(&sp.germ)?.branch_charts().len();
    }
    Ok(total)
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of closed points of each degree `k <= m_max` on the smooth model,
/// by Möbius inversion of `sum_{k | m} k a_k = N~_m`.
pub fn closed_point_tallies(pc: &PointCounts) -> Result<Vec<i64>> {
    let m_max = pc.adjusted.len();
    let mut tallies = Vec::with_capacity(m_max);
    for k in 1..=m_max {
        let s: i64 = (1..=k).filter(|j| k % j == 0).map(|j| mobius(k / j) * pc.adjusted[j - 1]).sum();
        if s % k as i64 != 0 || s < 0 {
            return Err(Error::InconsistentCounts(format!("{s} points of degree {k} is not a multiple of {k}")));
        }
        tallies.push(s / k as i64);
    }
    for m in 1..=m_max {
        let back: i64 = (1..=m).filter(|k| m % k == 0).map(|k| k as i64 * tallies[k - 1]).sum();
        debug_assert_eq!(back, pc.adjusted[m - 1]);
    }
    Ok(tallies)
}

/// `Z(T) = P(T) / ((1 - T)(1 - qT))` for a smooth projective curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilZeta {
    pub q: u64,
    pub genus: usize,
    /// Coefficients of `P`, constant term first; degree `2 genus`.
    #[serde(serialize_with = "bigint_strings")]
    pub numerator: Vec<BigInt>,
}

fn bigint_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl WeilZeta {
    /// Integer coefficients of `Z(T)` up to `T^bound`.
    pub fn series(&self, bound: usize) -> Vec<BigInt> {
        let qb = BigInt::from(self.q);
        // 1 / ((1 - T)(1 - qT)) = sum_k (1 + q + ... + q^k) T^k.
        let mut geo = Vec::with_capacity(bound + 1);
        let mut acc = BigInt::zero();
        let mut pw = BigInt::one();
        for _ in 0..=bound {
            acc += &pw;
            geo.push(acc.clone());
            pw *= &qb;
        }
        (0..=bound)
            .map(|k| {
                self.numerator
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i <= k)
                    .map(|(i, a)| a * &geo[k - i])
                    .sum()
            })
            .collect()
    }
}

/// Power series `exp(sum N_m T^m / m)` up to `T^len-1`, from
/// `k z_k = sum_{j=1}^k N_j z_{k-j}`.
fn exp_log_series(adjusted: &[i64], len: usize) -> Result<Vec<BigInt>> {
    let mut z = vec![BigInt::one()];
    for k in 1..len {
        let s: BigInt = (1..=k).map(|j| BigInt::from(adjusted[j - 1]) * &z[k - j]).sum();
        let (quot, rem) = s.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::InconsistentCounts(format!("coefficient {k} of the zeta series is not integral")));
        }
        z.push(quot);
    }
    Ok(z)
}

/// Reconstructs the Weil zeta function of the smooth model from the
/// adjusted counts. Counts beyond `2 genus` are used as a consistency check.
pub fn weil_zeta_smooth(pc: &PointCounts, genus: usize) -> Result<WeilZeta> {
    let m_max = pc.adjusted.len();
    if m_max < 2 * genus {
        return Err(Error::InvalidInput(format!("need counts up to m = {}, have {m_max}", 2 * genus)));
    }
    let q = pc.q;
    let qb = BigInt::from(q);
    let z = exp_log_series(&pc.adjusted, m_max + 1)?;
    // P = Z (1 - T)(1 - qT) = Z (1 - (1 + q) T + q T^2).
    let coeff = |k: usize| -> BigInt {
        let mut c = z[k].clone();
        if k >= 1 {
            c -= (&qb + 1) * &z[k - 1];
        }
        if k >= 2 {
            c += &qb * &z[k - 2];
        }
        c
    };
    let numerator: Vec<BigInt> = (0..=2 * genus).map(coeff).collect();
    for k in 2 * genus + 1..=m_max {
        if !coeff(k).is_zero() {
            return Err(Error::InconsistentCounts(format!(
                "the counts do not fit a numerator of degree {}",
                2 * genus
            )));
        }
    }
    // Functional equation: a_{2g - i} = q^{g - i} a_i.
    for i in 0..genus {
        if numerator[2 * genus - i] != qb.pow((genus - i) as u32) * &numerator[i] {
            return Err(Error::InconsistentCounts("numerator violates the functional equation".into()));
        }
    }
    // Weil bounds |N_m - q^m - 1| <= 2 g q^{m/2}, squared to stay exact.
    for (m, &n) in pc.adjusted.iter().enumerate() {
        let qm = qb.pow(m as u32 + 1);
        let dev = BigInt::from(n) - &qm - 1;
        if &dev * &dev > BigInt::from(4 * genus * genus) * &qm {
            return Err(Error::InconsistentCounts(format!("N~_{} = {n} violates the Weil bound", m + 1)));
        }
    }
    Ok(WeilZeta { q, genus, numerator })
}

/// Local data of a rational singular point.
#[derive(Debug)]
pub struct SingularData {
    pub point: SingularPoint,
    pub ring: LocalRing,
}

impl SingularData {
    pub fn branches(&self) -> usize {
        self.ring.d()
    }
}

/// Analyses every singular point of the curve.
pub fn singular_data(curve: &GlobalCurve) -> Result<Vec<SingularData>> {
    curve
        .singular_points()
        .iter()
        .map(|sp| Ok(SingularData { point: sp.clone(), ring: LocalRing::new(&sp.germ)? }))
        .collect()
}

/// Genus of the normalization of a plane curve of degree `d`.
pub fn normalization_genus(curve: &GlobalCurve, data: &[SingularData]) -> Result<usize> {
    let d = curve.degree() as i64;
    let arithmetic = (d - 1) * (d - 2) / 2;
    let delta: i64 = data.iter().map(|s| s.ring.delta() as i64).sum();
    let g = arithmetic - delta;
    if g < 0 {
        return Err(Error::InconsistentCounts(format!(
            "arithmetic genus {arithmetic} is smaller than the total delta {delta}"
        )));
    }
    Ok(g as usize)
}

fn mul_series(a: &[BigInt], b: &[BigInt], bound: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); bound + 1];
    for (i, x) in a.iter().enumerate().take(bound + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(bound + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn binomial(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Coefficients of the zeta function of effective Cartier divisors up to
/// `T^bound`: closed points of the smooth model away from the singular
/// points contribute `(1 - T^k)^{-1}` each, and every singular point
/// contributes `sum_n #I_n T^{|n|}` with the ideal counts enumerated by the
/// brute-force oracle.
pub fn divisor_zeta(curve: &GlobalCurve, bound: usize, budget: u128) -> Result<Vec<BigInt>> {
    let data = singular_data(curve)?;
    divisor_zeta_with(curve, &data, bound, budget)
}

fn divisor_zeta_with(curve: &GlobalCurve, data: &[SingularData], bound: usize, budget: u128) -> Result<Vec<BigInt>> {
    let pc = count_points(curve, bound.max(1), budget)?;
    let tallies = closed_point_tallies(&pc)?;
    let over_singular: i64 = data.iter().map(|s| s.branches() as i64).sum();
    let mut series = vec![BigInt::zero(); bound + 1];
    series[0] = BigInt::one();
    for (k, &a) in tallies.iter().enumerate().take(bound) {
        let deg = k + 1;
        let b = if deg == 1 { a - over_singular } else { a };
        if b < 0 {
            return Err(Error::InconsistentCounts(format!("negative number of smooth points of degree {deg}")));
        }
        // (1 - T^deg)^{-b} = sum_j C(b + j - 1, j) T^{deg j}.
        let bb = BigInt::from(b);
        let factor: Vec<BigInt> = (0..=bound)
            .map(|e| if e % deg == 0 { binomial(&(&bb + e / deg - 1), e / deg) } else { BigInt::zero() })
            .collect();
        series = mul_series(&series, &factor, bound);
    }
    for s in data {
        let counts = brute_force_ideal_counts(&s.ring, bound, budget)?;
        let mut local = vec![BigInt::zero(); bound + 1];
        for (n, c) in counts {
            local[n.iter().sum::<usize>()] += c;
        }
        series = mul_series(&series, &local, bound);
    }
    Ok(series)
}

/// Outcome of [`verify_global_factorization`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub q: u64,
    pub bound: usize,
    pub left: Vec<Rational>,
    pub right: Vec<Rational>,
    pub equal: bool,
    pub first_mismatch: Option<usize>,
    /// Whether the unit-index form of the factorization holds as well.
    pub unit_index_form: bool,
}

#[derive(Serialize)]
struct ReportJson {
    q: u64,
    bound: usize,
    equal: bool,
    first_mismatch: Option<usize>,
    left: Vec<String>,
    right: Vec<String>,
    unit_index_form: bool,
}

impl FactorizationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            q: self.q,
            bound: self.bound,
            equal: self.equal,
            first_mismatch: self.first_mismatch,
            left: self.left.iter().map(rational_string).collect(),
            right: self.right.iter().map(rational_string).collect(),
            unit_index_form: self.unit_index_form,
        })
        .expect("serializable")
    }
}

fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn mul_rat_series(a: &[Rational], b: &[Rational], bound: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); bound + 1];
    for (i, x) in a.iter().enumerate().take(bound + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(bound + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(1 - c T)^e` truncated, for integer `e >= 0`.
fn linear_power(c: &Rational, e: usize, bound: usize) -> Vec<Rational> {
    (0..=bound)
        .map(|k| {
            if k > e {
                Rational::zero()
            } else {
                rat(binomial(&BigInt::from(e), k)) * num_traits::pow(-c.clone(), k)
            }
        })
        .collect()
}

/// Checks, coefficientwise up to `T^bound`,
///
/// `(1 - q^{-1})^r Z(Ca(X), q^{-1} T) = (1 - q^{-1})^r ζ(X~, T) prod_P Z(T, O_P)`
///
/// where the left side comes from point counts and enumerated ideal counts
/// and the right side from the Weil zeta function (through counts up to
/// `2 g~` only) and the closed formula for the local classes. Here
/// `ζ(X~, T)` is the zeta function of the normalization with the points
/// over the singular points removed, in the variable `q^{-1} T`.
pub fn verify_global_factorization(curve: &GlobalCurve, bound: usize, budget: u128) -> Result<FactorizationReport> {
    let q = curve.q();
    let data = singular_data(curve)?;
    let r = data.len();
    let qinv = Rational::new(BigInt::one(), BigInt::from(q));
    let unit_factor = num_traits::pow(Rational::one() - &qinv, r);

    let ca = divisor_zeta_with(curve, &data, bound, budget)?;
    let left: Vec<Rational> =
        ca.iter().enumerate().map(|(k, c)| &unit_factor * rat(c.clone()) * num_traits::pow(qinv.clone(), k)).collect();

    let genus = normalization_genus(curve, &data)?;
    let pc = count_points(curve, (2 * genus).max(1), budget)?;
    let weil = weil_zeta_smooth(&pc, genus)?;
    let mut smooth: Vec<Rational> =
        weil.series(bound).into_iter().enumerate().map(|(k, c)| rat(c) * num_traits::pow(qinv.clone(), k)).collect();
    let over_singular: usize = data.iter().map(|s| s.branches()).sum();
    smooth = mul_rat_series(&smooth, &linear_power(&qinv, over_singular, bound), bound);

    let mut locals = Vec::with_capacity(r);
    for s in &data {
        let z = local_zeta(&s.ring, bound)?;
        let coeffs: Vec<Rational> = z.single.univariate_coeffs().iter().map(|c| c.evaluate(q)).collect();
        locals.push(coeffs);
    }
    let mut right: Vec<Rational> = smooth.iter().map(|c| &unit_factor * c).collect();
    for l in &locals {
        right = mul_rat_series(&right, l, bound);
    }
    let first_mismatch = (0..=bound).find(|&k| left[k] != right[k]);

    // Unit-index form: #ζ(X) = #ζ(X~) prod_P [(1 - q^{-1})^{m_P} / index_P] Z(T, O_P),
    // with #ζ(X) = q^{-δ} times the left side.
    let delta: usize = data.iter().map(|s| s.ring.delta()).sum();
    let mut via_index = smooth.clone();
    for (s, l) in data.iter().zip(&locals) {
        let index = unit_index(&s.ring, budget)?;
        let factor = num_traits::pow(Rational::one() - &qinv, s.branches()) / rat(index.direct);
        via_index = mul_rat_series(&via_index, l, bound).iter().map(|c| c * &factor).collect();
    }
    let scale = num_traits::pow(qinv.clone(), delta);
    let unit_index_form = left.iter().zip(&via_index).all(|(a, b)| a * &scale == *b);

    Ok(FactorizationReport {
        q,
        bound,
        left,
        right,
        equal: first_mismatch.is_none(),
        first_mismatch,
        unit_index_form,
    })
}

/// Unit index `(U_Õ : U_O)` of a germ over `F_q`, both from the closed form
/// `q^δ (1 - q^{-1})^{m - 1}` and by enumerating truncated units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitIndex {
    pub q: u64,
    pub delta: usize,
    pub branches: usize,
    pub formula: u128,
    pub direct: u128,
}

/// Computes the unit index both ways and fails with
/// [`Error::IndexMismatch`] when they disagree.
pub fn unit_index(ring: &LocalRing, budget: u128) -> Result<UnitIndex> {
    let q = ring
        .field()
        .order()
        .ok_or_else(|| Error::InvalidInput("the unit index needs a finite ground field".into()))?;
    let delta = ring.delta();
    let m = ring.d();
    let qr = Rational::from_integer(BigInt::from(q));
    let formula_rat = num_traits::pow(qr.clone(), delta) * num_traits::pow(Rational::one() - qr.recip(), m - 1);
    let trunc: Vec<usize> = ring.conductor().iter().map(|g| g + 1).collect();
    let units_o = count_units(ring, &trunc, budget)?;
    let units_normal: u128 = trunc.iter().map(|&k| (q as u128 - 1) * (q as u128).pow(k as u32 - 1)).product();
    let formula_str = rational_string(&formula_rat);
    if units_o == 0 || !units_normal.is_multiple_of(units_o) || !formula_rat.is_integer() || formula_rat.is_negative() {
        return Err(Error::IndexMismatch {
            formula: formula_str,
            direct: format!("{units_normal}/{units_o}"),
        });
    }
    let direct = units_normal / units_o;
    let formula = formula_rat.to_integer().to_u128().unwrap_or(u128::MAX);
    if formula != direct {
        return Err(Error::IndexMismatch { formula: formula_str, direct: direct.to_string() });
    }
    Ok(UnitIndex { q, delta, branches: m, formula, direct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::curve::CurveGerm;

    const BUDGET: u128 = 10_000_000;

    fn curve(text: &str, p: u64) -> GlobalCurve {
        GlobalCurve::parse(text, p, BUDGET).unwrap()
    }

    #[test]
    fn nodal_cubic_counts() {
        let pc = count_points(&curve("y^2 - x^3 - x^2", 3), 4, BUDGET).unwrap();
        assert_eq!(pc.counts[0], 3);
        assert_eq!(pc.adjusted[0], 4);
        // Rational curve: N~_m = 3^m + 1.
        assert_eq!(pc.adjusted, vec![4, 10, 28, 82]);
    }

    #[test]
    fn cuspidal_cubic_counts() {
        let pc = count_points(&curve("y^2 - x^3", 2), 3, BUDGET).unwrap();
        assert_eq!(pc.adjusted, pc.counts.iter().map(|&n| n as i64).collect::<Vec<_>>());
        assert_eq!(pc.adjusted, vec![3, 5, 9]);
    }

    #[test]
    fn conic_counts_match_brute_force() {
        let c = curve("x^2 + y^2 - 1", 5);
        let pc = count_points(&c, 2, BUDGET).unwrap();
        let brute = crate::curve::ProjPoint::all(5).into_iter().filter(|pt| c.form().eval(pt.0) == 0).count();
        assert_eq!(pc.counts[0], brute as u64);
        assert_eq!(pc.adjusted, vec![6, 26]);
    }

    #[test]
    fn weil_zeta_of_rational_curves() {
        let pc = count_points(&curve("y^2 - x^3 - x^2", 3), 3, BUDGET).unwrap();
        let w = weil_zeta_smooth(&pc, 0).unwrap();
        assert_eq!(w.numerator, vec![BigInt::one()]);
        let pc = count_points(&curve("y^2 - x^3", 5), 2, BUDGET).unwrap();
        assert_eq!(weil_zeta_smooth(&pc, 0).unwrap().numerator, vec![BigInt::one()]);
    }

    #[test]
    fn weil_zeta_of_elliptic_curve() {
        let c = curve("y^2 - x^3 - x - 1", 5);
        let pc = count_points(&c, 4, BUDGET).unwrap();
        let w = weil_zeta_smooth(&pc, 1).unwrap();
        let a = pc.adjusted[0];
        let expect: Vec<BigInt> = vec![1.into(), (a - 6).into(), 5.into()];
        assert_eq!(w.numerator, expect);
    }

    #[test]
    fn tallies_invert() {
        let pc = count_points(&curve("x^2 + y^2 - 1", 5), 4, BUDGET).unwrap();
        let t = closed_point_tallies(&pc).unwrap();
        for m in 1..=4 {
            let back: i64 = (1..=m).filter(|k| m % k == 0).map(|k| k as i64 * t[k - 1]).sum();
            assert_eq!(back, pc.adjusted[m - 1]);
        }
    }

    #[test]
    fn divisor_zeta_of_nodal_cubic() {
        let z = divisor_zeta(&curve("y^2 - x^3 - x^2", 3), 3, BUDGET).unwrap();
        assert_eq!(z[0], BigInt::one());
        assert_eq!(z[1], BigInt::from(2));
    }

    #[test]
    fn conic_divisor_zeta_is_weil_zeta() {
        let c = curve("x^2 + y^2 - 1", 5);
        let z = divisor_zeta(&c, 5, BUDGET).unwrap();
        let w = weil_zeta_smooth(&count_points(&c, 1, BUDGET).unwrap(), 0).unwrap();
        assert_eq!(z, w.series(5));
    }

    #[test]
    fn factorizations_hold() {
        for (text, p) in [("y^2 - x^3 - x^2", 3), ("y^2 - x^3", 2), ("y^2 - x^3", 5), ("x^2 + y^2 - 1", 5)] {
            let report = verify_global_factorization(&curve(text, p), 4, BUDGET).unwrap();
            assert!(report.equal, "{text} over F_{p}: {:?}", report.first_mismatch);
            assert!(report.unit_index_form, "{text} over F_{p}");
        }
    }

    #[test]
    fn unit_indices() {
        let node = LocalRing::new(&CurveGerm::parse_in("x*y", Field::Prime(3)).unwrap()).unwrap();
        let u = unit_index(&node, BUDGET).unwrap();
        assert_eq!((u.formula, u.direct), (2, 2));
        let cusp = LocalRing::new(&CurveGerm::parse_in("y^2 - x^3", Field::Prime(2)).unwrap()).unwrap();
        assert_eq!(unit_index(&cusp, BUDGET).unwrap().direct, 2);
    }

    #[test]
    fn mobius_values() {
        let v: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(v, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
