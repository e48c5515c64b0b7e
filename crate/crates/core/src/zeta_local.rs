//! Local zeta function of a germ: classes of the sets of principal ideals
//! with a given value vector, assembled into power series.
//!
//! The set `F(n)` of elements of value exactly `n` is, modulo `C(M)`, the
//! complement of the subspaces `C(n + e_i)` in `C(n)`, so its class is an
//! alternating sum of powers of `L`. Units act freely on it and two elements
//! generate the same ideal exactly when they lie in one orbit, which gives
//! `[I_n] = [F(n)] (L - 1)^{-1} L^{1 - l(M - n)}` for `M >= n + gamma`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{MotClass, MotSeries, Rational};
use crate::curve::CurveGerm;
use crate::error::{Error, Result};
use crate::semigroup::{JetModel, LocalRing};

/// Value-ideal dimensions `D(n) = dim C(n)/C(M)` on a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueIdealTable {
    trunc: Vec<usize>,
    dims: BTreeMap<Vec<usize>, usize>,
}

impl ValueIdealTable {
    pub fn trunc(&self) -> &[usize] {
        &self.trunc
    }

    /// `D(n)`, if `n` lies in the tabulated region.
    pub fn dim(&self, n: &[usize]) -> Option<usize> {
        self.dims.get(n).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &usize)> {
        self.dims.iter()
    }
}

fn box_points(upper: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &u in upper {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=u).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn table_from_model(model: &JetModel, upper: &[usize]) -> ValueIdealTable {
    let dims = box_points(upper).into_iter().map(|n| {
        let d = model.value_ideal_dim(&n);
        (n, d)
    });
    ValueIdealTable { trunc: model.trunc().to_vec(), dims: dims.collect() }
}

/// `D(n)` for every `n <= upper` at truncation `trunc`.
pub fn value_ideal_dims(ring: &LocalRing, trunc: &[usize], upper: &[usize]) -> Result<ValueIdealTable> {
    if trunc.len() != ring.d() || upper.len() != ring.d() {
        return Err(Error::InvalidInput(format!("expected vectors of length {}", ring.d())));
    }
    if upper.iter().zip(trunc).any(|(u, m)| u > m) {
        return Err(Error::InvalidInput(format!("region {upper:?} exceeds truncation {trunc:?}")));
    }
    let model = JetModel::build_for(ring, trunc);
    Ok(table_from_model(&model, upper))
}

fn fiber_from(dim: impl Fn(&[usize]) -> usize, n: &[usize]) -> MotClass {
    let d = n.len();
    let mut out = MotClass::zero();
    for mask in 0u32..(1 << d) {
        let shifted: Vec<usize> = (0..d).map(|i| n[i] + ((mask >> i) & 1) as usize).collect();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        out = &out + &MotClass::term(sign, dim(&shifted) as i64);
    }
    out
}

/// `[F(n)]_M = sum_I (-1)^{|I|} L^{D(n + e_I)}`; zero exactly when `n` is
/// not a value. The table must contain `n + e_I` for every `I`.
pub fn fiber_class(table: &ValueIdealTable, n: &[usize]) -> Result<MotClass> {
    let d = n.len();
    for mask in 0u32..(1 << d) {
        let shifted: Vec<usize> = (0..d).map(|i| n[i] + ((mask >> i) & 1) as usize).collect();
        if table.dim(&shifted).is_none() {
            return Err(Error::InvalidInput(format!("{shifted:?} is outside the value-ideal table")));
        }
    }
    Ok(fiber_from(|m| table.dim(m).unwrap(), n))
}

fn ideal_class_in(ring: &LocalRing, model: &JetModel, n: &[usize]) -> Result<MotClass> {
    let fiber = fiber_from(|m| model.value_ideal_dim(m), n);
    if fiber.is_zero() {
        return Ok(fiber);
    }
    let rest: Vec<usize> = model.trunc().iter().zip(n).map(|(m, a)| m - a).collect();
    let shift = 1 - ring.ell(&rest) as i64;
    fiber
        .div_exact(&MotClass::l_minus_one())
        .map(|c| c.shift(shift))
        .ok_or_else(|| Error::ExactDivisionFailure(format!("[F({n:?})] = {fiber} is not divisible by L - 1")))
}

fn admissible_trunc(ring: &LocalRing, n: &[usize]) -> Vec<usize> {
    n.iter().zip(ring.conductor()).map(|(a, g)| a + g + 1).collect()
}

/// Class `[I_n]` of the set of principal ideals generated by elements of
/// value `n`, computed at the smallest admissible truncation
/// `M = n + gamma + 1`.
pub fn ideal_class(ring: &LocalRing, n: &[usize]) -> Result<MotClass> {
    ideal_class_default(ring, n)
}

/// [`ideal_class`] at an explicit truncation `M >= n + gamma + 1`.
pub fn ideal_class_at(ring: &LocalRing, n: &[usize], trunc: &[usize]) -> Result<MotClass> {
    let least = admissible_trunc(ring, n);
    if trunc.len() != least.len() || trunc.iter().zip(&least).any(|(m, l)| m < l) {
        return Err(Error::InvalidInput(format!("truncation {trunc:?} is below {least:?}")));
    }
    ideal_class_in(ring, &JetModel::build_for(ring, trunc), n)
}

fn ideal_class_default(ring: &LocalRing, n: &[usize]) -> Result<MotClass> {
    ideal_class_in(ring, &ring.model(&admissible_trunc(ring, n)), n)
}

/// Joint and single-variable local zeta series up to total degree `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalZeta {
    pub joint: MotSeries,
    pub single: MotSeries,
    pub delta: usize,
    pub conductor: Vec<usize>,
}

/// Exponent vectors of total degree at most `bound`.
pub fn simplex_points(d: usize, bound: usize) -> Vec<Vec<usize>> {
    box_points(&vec![bound; d]).into_iter().filter(|n| n.iter().sum::<usize>() <= bound).collect()
}

/// `Z(t, O) = sum_n [I_n] L^{-|n|} t^n` truncated at `|n| <= bound`, and
/// its diagonal.
pub fn local_zeta(ring: &LocalRing, bound: usize) -> Result<LocalZeta> {
    let d = ring.d();
    let points = simplex_points(d, bound);
    // One model large enough for every coefficient, built up front.
    let top: Vec<usize> = (0..d).map(|i| bound + ring.conductor()[i] + 1).collect();
    let model = ring.model(&top);
    let classes: Vec<(Vec<usize>, MotClass)> = points
        .into_par_iter()
        .map(|n| {
            let c = ideal_class_in(ring, &model, &n)?;
            Ok((n, c))
        })
        .collect::<Result<_>>()?;
    let mut joint = MotSeries::new(d, bound as u32);
    for (n, c) in classes {
        let norm = n.iter().sum::<usize>() as i64;
        joint.add_term(n.iter().map(|&v| v as u32).collect(), c.shift(-norm));
    }
    let single = joint.diagonal();
    Ok(LocalZeta { joint, single, delta: ring.delta(), conductor: ring.conductor().to_vec() })
}

/// Convenience wrapper analysing the germ first.
pub fn local_zeta_of(germ: &CurveGerm, bound: usize) -> Result<LocalZeta> {
    local_zeta(&LocalRing::new(germ)?, bound)
}

/// Generalized Poincaré series `P_g = L^{-(delta + 1)} Z`.
pub fn poincare_series(z: &LocalZeta) -> MotSeries {
    z.joint.scale(&MotClass::l_pow(-(z.delta as i64) - 1))
}

/// Coefficientwise evaluation at `L = q`.
pub fn counting_specialization(s: &MotSeries, q: u64) -> BTreeMap<Vec<u32>, Rational> {
    s.specialize(q)
}

#[derive(Serialize)]
struct TermJson {
    n: Vec<u32>,
    class: String,
    factored: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    specialized: Option<String>,
}

#[derive(Serialize)]
struct SeriesJson {
    d: usize,
    bound: u32,
    terms: Vec<TermJson>,
}

/// Series JSON `{"d", "bound", "terms": [{"n", "class", ...}]}`; with `q`
/// every term also carries its counting specialization.
pub fn series_json(s: &MotSeries, q: Option<u64>) -> serde_json::Value {
    let terms = s
        .terms()
        .map(|(n, c)| TermJson {
            n: n.clone(),
            class: c.to_string(),
            factored: c.factored(),
            specialized: q.map(|q| crate::algebra::motclass::rational_string(&c.evaluate(q))),
        })
        .collect();
    serde_json::to_value(SeriesJson { d: s.vars(), bound: s.bound(), terms }).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn ring(text: &str) -> LocalRing {
        LocalRing::new(&CurveGerm::parse(text).unwrap()).unwrap()
    }

    fn l(k: i64) -> MotClass {
        MotClass::l_pow(k)
    }

    #[test]
    fn value_ideal_tables() {
        let cusp = ring("y^2 - x^3");
        let t = value_ideal_dims(&cusp, &[8], &[8]).unwrap();
        assert_eq!((t.dim(&[2]), t.dim(&[3])), (Some(6), Some(5)));
        let node = ring("x*y");
        let t = value_ideal_dims(&node, &[3, 3], &[3, 3]).unwrap();
        assert_eq!(t.dim(&[1, 1]), Some(4));
        assert_eq!(t.dim(&[2, 1]), Some(3));
        assert_eq!(t.dim(&[2, 2]), Some(2));
        let smooth = ring("y - x^2");
        let t = value_ideal_dims(&smooth, &[8], &[8]).unwrap();
        assert!((0..=8).all(|s| t.dim(&[s]) == Some(8 - s)));
    }

    #[test]
    fn fiber_classes() {
        let smooth = ring("y - x^2");
        let t = value_ideal_dims(&smooth, &[8], &[8]).unwrap();
        assert_eq!(fiber_class(&t, &[6]).unwrap(), &l(2) - &l(1));
        let cusp = ring("y^2 - x^3");
        let t = value_ideal_dims(&cusp, &[8], &[8]).unwrap();
        assert_eq!(fiber_class(&t, &[2]).unwrap(), &l(6) - &l(5));
        assert!(fiber_class(&t, &[1]).unwrap().is_zero());
        let node = ring("x*y");
        let t = value_ideal_dims(&node, &[3, 3], &[3, 3]).unwrap();
        assert_eq!(fiber_class(&t, &[1, 1]).unwrap().to_string(), "L^4 - 2L^3 + L^2");
    }

    #[test]
    fn ideal_classes() {
        let smooth = ring("y - x^2");
        assert!((0..6).all(|s| ideal_class(&smooth, &[s]).unwrap() == MotClass::one()));
        assert_eq!(ideal_class(&ring("y^2 - x^3"), &[2]).unwrap(), l(1));
        assert_eq!(ideal_class(&ring("x*y"), &[1, 1]).unwrap(), MotClass::l_minus_one());
    }

    #[test]
    fn ideal_class_is_truncation_stable() {
        let node = ring("x*y");
        let a = ideal_class_at(&node, &[2, 1], &[4, 3]).unwrap();
        let b = ideal_class_at(&node, &[2, 1], &[7, 5]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cusp_series() {
        let z = local_zeta(&ring("y^2 - x^3"), 5).unwrap();
        let expect = ["1", "0", "L^-1", "L^-2", "L^-3", "L^-4"];
        let got: Vec<String> = z.single.univariate_coeffs().iter().map(|c| c.to_string()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn node_joint_coefficient() {
        let z = local_zeta(&ring("x*y"), 4).unwrap();
        assert_eq!(z.joint.coeff(&[1, 1]).factored(), "(L-1)L^-2");
        assert_eq!(z.joint.diagonal(), z.single);
    }

    #[test]
    fn poincare_and_specialization() {
        let smooth = local_zeta(&ring("y - x^2"), 4).unwrap();
        let p = poincare_series(&smooth);
        assert_eq!(p.coeff(&[3]), l(-4));
        let cusp = local_zeta(&ring("y^2 - x^3"), 4).unwrap();
        assert_eq!(poincare_series(&cusp).coeff(&[2]), l(-3));
        let at_q = counting_specialization(&cusp.single, 3);
        assert_eq!(at_q[&vec![3]], Rational::new(1.into(), 9.into()));
        let node = local_zeta(&ring("x*y"), 3).unwrap();
        let at_q = counting_specialization(&node.joint, 2);
        assert_eq!(at_q[&vec![1, 1]], Rational::new(1.into(), 4.into()));
    }

    #[test]
    fn depends_only_on_semigroup() {
        let a = local_zeta(&ring("y^2 - x^3"), 7).unwrap();
        let b = local_zeta(&ring("y^2 - x^3 - x^4"), 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn works_over_prime_fields() {
        let g = CurveGerm::parse_in("y^2 - x^3", Field::Prime(2)).unwrap();
        let z = local_zeta(&LocalRing::new(&g).unwrap(), 4).unwrap();
        assert_eq!(z.single.coeff(&[2]), l(-1));
    }

    #[test]
    fn json_terms() {
        let z = local_zeta(&ring("y^2 - x^3"), 3).unwrap();
        let v = series_json(&z.single, Some(2));
        assert_eq!(v["d"], 1);
        assert_eq!(v["terms"][1]["class"], "L^-1");
        assert_eq!(v["terms"][1]["specialized"], "1/2");
    }
}
