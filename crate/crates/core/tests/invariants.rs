use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;

use germzeta::algebra::gfext::GfExt;
use germzeta::algebra::{BivarPoly, Field, MotClass, Rational};
use germzeta::branches::value_of;
use germzeta::curve::{CurveGerm, GlobalCurve, ProjPoint};
use germzeta::resolution::resolve_germ;
use germzeta::semigroup::{semigroup_of, LocalRing};
use germzeta::zeta_global::count_points;
use germzeta::zeta_local::local_zeta;

/// Numerical semigroup generated by `a, b`, listed below `limit`.
fn generated(a: usize, b: usize, limit: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for i in 0..=limit / a {
        for j in 0..=limit / b {
            if i * a + j * b < limit {
                out.insert(i * a + j * b);
            }
        }
    }
    out
}

fn binomial_germ(a: u32, b: u32, extra: Option<(u32, u32, i64)>, field: Field) -> CurveGerm {
    let mut terms = vec![(0, a, 1), (b, 0, -1)];
    terms.extend(extra);
    CurveGerm::new(BivarPoly::from_i64_terms(field, &terms)).unwrap()
}

fn coprime_pair() -> impl Strategy<Value = (u32, u32)> {
    (2u32..5, 3u32..8).prop_filter("coprime", |(a, b)| a < b && a.gcd(b) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quasi_homogeneous_semigroups((a, b) in coprime_pair(), field in prop_oneof![Just(Field::Rationals), Just(Field::Prime(7))]) {
        let ring = LocalRing::new(&binomial_germ(a, b, None, field)).unwrap();
        let (a, b) = (a as usize, b as usize);
        prop_assert_eq!(ring.delta(), (a - 1) * (b - 1) / 2);
        prop_assert_eq!(ring.conductor(), &[(a - 1) * (b - 1)][..]);
        let s = semigroup_of(&ring).unwrap();
        let limit = (a - 1) * (b - 1);
        let members: BTreeSet<usize> = s.box_members.iter().map(|v| v[0]).filter(|&v| v < limit).collect();
        prop_assert_eq!(members, generated(a, b, limit));
    }

    #[test]
    fn higher_terms_keep_the_semigroup((a, b) in coprime_pair(), i in 0u32..4, j in 0u32..3, c in -3i64..4) {
        // A term of weighted degree above a*b leaves the equisingularity type alone.
        prop_assume!(c != 0 && (i * a + j * b) > a * b);
        let plain = LocalRing::new(&binomial_germ(a, b, None, Field::Rationals)).unwrap();
        let bent = LocalRing::new(&binomial_germ(a, b, Some((i, j, c)), Field::Rationals)).unwrap();
        prop_assert_eq!(semigroup_of(&plain).unwrap(), semigroup_of(&bent).unwrap());
        let bound = plain.conductor()[0] + 2;
        prop_assert_eq!(local_zeta(&plain, bound).unwrap(), local_zeta(&bent, bound).unwrap());
    }

    #[test]
    fn delta_from_multiplicities((a, b) in coprime_pair(), split in proptest::bool::ANY) {
        // delta = sum m (m - 1) / 2 over the infinitely near points.
        let germ = if split {
            CurveGerm::new(BivarPoly::from_i64_terms(Field::Rationals, &[(0, 2, 1), (2 * (b - 1), 0, -1)])).unwrap()
        } else {
            binomial_germ(a, b, None, Field::Rationals)
        };
        let process = resolve_germ(&germ).unwrap();
        let from_process: u32 = process.multiplicities().iter().map(|m| m * (m - 1) / 2).sum();
        let ring = LocalRing::new(&germ).unwrap();
        prop_assert_eq!(from_process as usize, ring.delta());
        prop_assert_eq!(process.branch_charts().len(), ring.d());
    }

    #[test]
    fn valuations_add(e1 in 0u32..3, f1 in 0u32..3, e2 in 0u32..3, f2 in 0u32..3) {
        let germ = CurveGerm::parse("y^2 - x^3").unwrap();
        let ring = LocalRing::new(&germ).unwrap();
        let mono = |e, f| BivarPoly::from_i64_terms(Field::Rationals, &[(e, f, 1), (e + 1, f + 1, 2)]);
        let (p, q) = (mono(e1, f1), mono(e2, f2));
        let vp = value_of(&p, ring.branches()).unwrap();
        let vq = value_of(&q, ring.branches()).unwrap();
        let vpq = value_of(&p.mul(&q), ring.branches()).unwrap();
        prop_assert_eq!(vpq, vp.add(&vq));
        prop_assert_eq!(vp.0[0] as u32, 2 * e1 + 3 * f1);
    }

    #[test]
    fn specialization_is_multiplicative(a in proptest::collection::vec(-3i64..4, 1..4), b in proptest::collection::vec(-3i64..4, 1..4), q in 2u64..8) {
        let class = |v: &[i64]| v.iter().enumerate().fold(MotClass::zero(), |acc, (k, &c)| &acc + &MotClass::term(c, k as i64 - 1));
        let (x, y) = (class(&a), class(&b));
        prop_assert_eq!((&x * &y).evaluate(q), x.evaluate(q) * y.evaluate(q));
        prop_assert_eq!((&x + &y).evaluate(q), x.evaluate(q) + y.evaluate(q));
    }

    #[test]
    fn root_counts_match_evaluation(coeffs in proptest::collection::vec(0u32..9, 0..5), pm in prop_oneof![Just((2u64, 3u32)), Just((3, 2)), Just((5, 1))]) {
        let f = GfExt::new(pm.0, pm.1);
        let poly: Vec<u32> = coeffs.iter().map(|&c| c % f.order() as u32).collect();
        let eval = |x: u32| poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
        let brute = (0..f.order() as u32).filter(|&x| eval(x) == 0).count() as u64;
        prop_assert_eq!(f.count_roots(&poly), brute);
    }

    #[test]
    fn point_counts_match_enumeration(c in proptest::collection::vec(0i64..5, 4), p in prop_oneof![Just(3u64), Just(5), Just(7)]) {
        let text = format!("y^2 + {}*x*y - x^3 - {}*x^2 - {}*x - {} - {}*y", c[0], c[1], c[2], c[3], c[0] + c[3]);
        let curve = match GlobalCurve::parse(&text, p, 1_000_000) {
            Ok(curve) => curve,
            Err(_) => return Ok(()),
        };
        prop_assume!(curve.singular_points().is_empty());
        let pc = count_points(&curve, 1, 1_000_000).unwrap();
        let brute = ProjPoint::all(p).into_iter().filter(|pt| curve.form().eval(pt.0) == 0).count() as u64;
        prop_assert_eq!(pc.counts[0], brute);
    }
}

#[test]
fn smooth_zeta_over_several_fields() {
    for field in [Field::Rationals, Field::Prime(2), Field::Prime(5)] {
        let ring = LocalRing::new(&CurveGerm::parse_in("x - y^3 + x*y", field).unwrap()).unwrap();
        let z = local_zeta(&ring, 8).unwrap();
        for s in 0..=8u32 {
            assert_eq!(z.joint.coeff(&[s]), MotClass::l_pow(-(s as i64)));
        }
        assert_eq!(z.single.coeff(&[3]).evaluate(4), Rational::new(1.into(), 64.into()));
    }
}
