//! Value semigroup, degree of singularity and conductor of a germ, computed
//! by exact linear algebra on jets.
//!
//! The local ring `O` embeds into the product of the branch rings
//! `k[[t_1]] x ... x k[[t_d]]`. Truncating every factor at `t_i^{M_i}`
//! turns `O` into a finite dimensional subspace `W` of `k^{|M|}`, spanned
//! by the images of the monomials `x^a y^b`. All dimensions of value ideals
//! `C(n) = {z : v(z) >= n}` are ranks of coordinate projections of `W`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::linalg::rank_on_columns;
use crate::algebra::{EchelonBasis, Field, FieldElem, TruncSeries};
use crate::branches::{puiseux_branches, BranchParam};
use crate::curve::{reduce_mod_p, CurveGerm, ReductionReport, ReductionStatus};
use crate::error::{Error, Result};

/// Image of the local ring in `⊕ k[t]/(t^{M_i})`.
#[derive(Debug)]
pub struct JetModel {
    field: Field,
    trunc: Vec<usize>,
    offsets: Vec<usize>,
    basis: EchelonBasis,
}

impl JetModel {
    fn build(field: Field, branches: &[BranchParam], trunc: &[usize]) -> JetModel {
        assert_eq!(branches.len(), trunc.len());
        assert!(trunc.iter().all(|&m| m >= 1), "truncation must be positive");
        let mut offsets = Vec::with_capacity(trunc.len());
        let mut total = 0;
        for &m in trunc {
            offsets.push(total);
            total += m;
        }
        // Monomials of total degree >= max M_i vanish in every factor.
        let cap = *trunc.iter().max().unwrap_or(&1);
        let mut images: Vec<Vec<Vec<FieldElem>>> = Vec::new();
        for (b, &m) in branches.iter().zip(trunc) {
            let b = if b.precision() < m { b.extend(m) } else { b.clone() };
            let x = b.x.truncate(m);
            let y = b.y.truncate(m);
            let mut rows = Vec::new();
            let mut ypow = TruncSeries::constant(field.one(), m);
            for deg_y in 0..cap {
                let mut cur = ypow.clone();
                for _ in 0..cap - deg_y {
                    rows.push(cur.coeffs().to_vec());
                    cur = cur.mul(&x);
                }
                ypow = ypow.mul(&y);
            }
            images.push(rows);
        }
        let nrows = images.first().map_or(0, |r| r.len());
        let mut basis = EchelonBasis::empty(field, total);
        for r in 0..nrows {
            let mut row = Vec::with_capacity(total);
            for per_branch in &images {
                row.extend(per_branch[r].iter().cloned());
            }
            basis.insert(row);
        }
        JetModel { field, trunc: trunc.to_vec(), offsets, basis }
    }

    /// Jet model of an analysed ring at exactly the truncation `trunc`.
    pub fn build_for(ring: &LocalRing, trunc: &[usize]) -> JetModel {
        JetModel::build(ring.field(), ring.branches(), trunc)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The truncation vector `M`.
    pub fn trunc(&self) -> &[usize] {
        &self.trunc
    }

    /// `dim O / C(M)`.
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Reduced echelon basis of the image, columns ordered branch by branch.
    pub fn basis(&self) -> &EchelonBasis {
        &self.basis
    }

    /// Column index of the coefficient of `t_i^j`.
    pub fn column(&self, branch: usize, j: usize) -> usize {
        self.offsets[branch] + j
    }

    /// `l(n) = dim O / C(n)` for `n <= M`: the rank of the projection onto
    /// the coordinates below `n`.
    pub fn ell(&self, n: &[usize]) -> usize {
        assert!(n.iter().zip(&self.trunc).all(|(a, m)| a <= m), "{n:?} exceeds truncation {:?}", self.trunc);
        let cols: Vec<usize> =
            n.iter().enumerate().flat_map(|(i, &ni)| (0..ni).map(move |j| (i, j))).map(|(i, j)| self.column(i, j)).collect();
        rank_on_columns(self.field, self.basis.rows(), &cols)
    }

    /// `D(n) = dim C(n) / C(M)` for `n <= M`.
    pub fn value_ideal_dim(&self, n: &[usize]) -> usize {
        self.dim() - self.ell(n)
    }
}

/// Builds the jet model of `germ` at truncation `m` (one entry per branch).
pub fn build_jet_model(germ: &CurveGerm, m: &[usize]) -> Result<JetModel> {
    let prec = *m.iter().max().unwrap_or(&1);
    let branches = puiseux_branches(germ, prec.max(1))?;
    if branches.len() != m.len() {
        return Err(Error::InvalidInput(format!(
            "truncation has {} entries but the germ has {} branches",
            m.len(),
            branches.len()
        )));
    }
    Ok(JetModel::build(germ.field(), &branches, m))
}

/// A germ together with its branches, degree of singularity and conductor,
/// and a growing jet model that serves dimension queries.
#[derive(Debug)]
pub struct LocalRing {
    germ: CurveGerm,
    branches: Vec<BranchParam>,
    delta: usize,
    conductor: Vec<usize>,
    model: Mutex<Arc<JetModel>>,
    ell_cache: Mutex<HashMap<Vec<usize>, usize>>,
}

const MAX_DOUBLINGS: usize = 8;

impl LocalRing {
    pub fn new(germ: &CurveGerm) -> Result<LocalRing> {
        let field = germ.field();
        let mut c = 4usize.max(2 * germ.multiplicity() as usize);
        let branches = puiseux_branches(germ, c)?;
        let d = branches.len();
        let norm = |m: &JetModel| m.trunc().iter().sum::<usize>() - m.dim();
        let mut model = JetModel::build(field, &branches, &vec![c; d]);
        let mut delta = norm(&model);
        let mut stable = false;
        for _ in 0..MAX_DOUBLINGS {
            c *= 2;
            let bigger = JetModel::build(field, &branches, &vec![c; d]);
            let next = norm(&bigger);
            model = bigger;
            if next == delta {
                stable = true;
                break;
            }
            delta = next;
        }
        if !stable {
            return Err(Error::NonStabilized);
        }
        let ring = LocalRing {
            germ: germ.clone(),
            branches,
            delta,
            conductor: Vec::new(),
            model: Mutex::new(Arc::new(model)),
            ell_cache: Mutex::new(HashMap::new()),
        };
        let conductor = ring.search_conductor()?;
        Ok(LocalRing { conductor, ..ring })
    }

    /// Componentwise minimum of `{n : |n| - l(n) = delta}`, which is the
    /// upper set `gamma + N^d`. Found by coordinate descent from the corner
    /// of the box `[0, 2 delta]^d`.
    fn search_conductor(&self) -> Result<Vec<usize>> {
        let d = self.d();
        let in_conductor_set = |n: &[usize]| n.iter().sum::<usize>() - self.ell(n) == self.delta;
        let mut n = vec![2 * self.delta; d];
        if !in_conductor_set(&n) {
            return Err(Error::NonStabilized);
        }
        for i in 0..d {
            while n[i] > 0 {
                n[i] -= 1;
                if !in_conductor_set(&n) {
                    n[i] += 1;
                    break;
                }
            }
        }
        if n.iter().sum::<usize>() != 2 * self.delta {
            return Err(Error::NonStabilized);
        }
        Ok(n)
    }

    pub fn germ(&self) -> &CurveGerm {
        &self.germ
    }

    pub fn field(&self) -> Field {
        self.germ.field()
    }

    pub fn branches(&self) -> &[BranchParam] {
        &self.branches
    }

    /// Number of branches.
    pub fn d(&self) -> usize {
        self.branches.len()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn conductor(&self) -> &[usize] {
        &self.conductor
    }

    /// A jet model whose truncation dominates `need`.
    pub fn model(&self, need: &[usize]) -> Arc<JetModel> {
        let mut guard = self.model.lock().unwrap();
        if need.iter().zip(guard.trunc()).all(|(a, m)| a <= m) {
            return guard.clone();
        }
        let trunc: Vec<usize> = need.iter().zip(guard.trunc()).map(|(a, m)| *a.max(m)).collect();
        let model = Arc::new(JetModel::build(self.field(), &self.branches, &trunc));
        *guard = model.clone();
        model
    }

    /// `l(n) = dim O / C(n)`; independent of the truncation used.
    pub fn ell(&self, n: &[usize]) -> usize {
        if let Some(&v) = self.ell_cache.lock().unwrap().get(n) {
            return v;
        }
        let v = self.model(n).ell(n);
        self.ell_cache.lock().unwrap().insert(n.to_vec(), v);
        v
    }

    /// Whether `n` is the value of some element of the ring.
    ///
    /// Decided by a strict drop `l(n + e_i) > l(n)` in every direction,
    /// which is exact over infinite fields and over `F_q` with `d <= q`.
    /// Over smaller fields the number of `F_q`-jets with value exactly `n`
    /// is counted by inclusion-exclusion as well, and a disagreement is
    /// reported as [`Error::SmallFieldAmbiguity`].
    pub fn contains(&self, n: &[usize]) -> Result<bool> {
        let d = self.d();
        if n.len() != d {
            return Err(Error::InvalidInput(format!("expected {d} coordinates, got {}", n.len())));
        }
        if n.iter().zip(&self.conductor).all(|(a, g)| a >= g) {
            return Ok(true);
        }
        let base = self.ell(n);
        let drop = (0..d).all(|i| {
            let mut m = n.to_vec();
            m[i] += 1;
            self.ell(&m) > base
        });
        if let Some(q) = self.field().order() {
            if d as u64 > q {
                let exact = self.exact_count(n, q).is_positive();
                if exact != drop {
                    return Err(Error::SmallFieldAmbiguity(n.iter().map(|&v| v as u32).collect()));
                }
            }
        }
        Ok(drop)
    }

    /// `#(C(n) \ ∪ C(n + e_i)) / C(M)` at `M = n + 1`, by inclusion-exclusion.
    fn exact_count(&self, n: &[usize], q: u64) -> BigInt {
        let d = self.d();
        let top: Vec<usize> = n.iter().map(|a| a + 1).collect();
        let model = self.model(&top);
        let mut total = BigInt::zero();
        for mask in 0u32..(1 << d) {
            let shifted: Vec<usize> = (0..d).map(|i| n[i] + ((mask >> i) & 1) as usize).collect();
            let term = BigInt::from(q).pow(model.value_ideal_dim(&shifted) as u32);
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
}

/// The value semigroup on the box `{n : n <= gamma + 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSemigroup {
    pub d: usize,
    pub delta: usize,
    pub conductor: Vec<usize>,
    /// Members of the box, in lexicographic order.
    pub box_members: BTreeSet<Vec<usize>>,
    /// Minimal generators when `d = 1`.
    pub generators: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct SemigroupJson<'a> {
    d: usize,
    delta: usize,
    conductor: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<&'a Vec<usize>>,
    box_members: Vec<&'a Vec<usize>>,
}

impl ValueSemigroup {
    /// Membership for any `n`, using the stored box and the conductor.
    /// Points outside the box that are not above the conductor need the
    /// jet model; see [`LocalRing::contains`].
    pub fn contains_in_box(&self, n: &[usize]) -> Option<bool> {
        if n.iter().zip(&self.conductor).all(|(a, g)| a >= g) {
            return Some(true);
        }
        if n.iter().zip(&self.conductor).all(|(a, g)| *a <= g + 1) {
            return Some(self.box_members.contains(n));
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SemigroupJson {
            d: self.d,
            delta: self.delta,
            conductor: &self.conductor,
            generators: self.generators.as_ref(),
            box_members: self.box_members.iter().collect(),
        })
        .expect("serializable")
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

/// Semigroup data of an already analysed local ring.
pub fn semigroup_of(ring: &LocalRing) -> Result<ValueSemigroup> {
    let upper: Vec<usize> = ring.conductor().iter().map(|g| g + 1).collect();
    let mut box_members = BTreeSet::new();
    for n in box_points(&upper) {
        if ring.contains(&n)? {
            box_members.insert(n);
        }
    }
    let generators = if ring.d() == 1 {
        let gamma = ring.conductor()[0];
        let mult = (1..).find(|&s| ring.contains(&[s]).unwrap_or(false)).unwrap_or(1);
        let mut members = vec![0usize];
        let mut gens = Vec::new();
        for s in 1..=gamma + mult {
            if !ring.contains(&[s])? {
                continue;
            }
            let decomposable = members.iter().any(|&a| a > 0 && members.binary_search(&(s - a)).is_ok());
            if !decomposable {
                gens.push(s);
            }
            members.push(s);
        }
        Some(gens)
    } else {
        None
    };
    Ok(ValueSemigroup {
        d: ring.d(),
        delta: ring.delta(),
        conductor: ring.conductor().to_vec(),
        box_members,
        generators,
    })
}

/// Degree of singularity `dim Õ/O`.
pub fn delta_invariant(germ: &CurveGerm) -> Result<usize> {
    Ok(LocalRing::new(germ)?.delta())
}

pub fn value_semigroup(germ: &CurveGerm) -> Result<ValueSemigroup> {
    semigroup_of(&LocalRing::new(germ)?)
}

pub fn semigroup_membership(ring: &LocalRing, n: &[usize]) -> Result<bool> {
    ring.contains(n)
}

/// Compares the semigroup over the rationals with the one over `F_p` for
/// every prime in `primes`.
pub fn reduction_semigroup_scan(f: &crate::algebra::BivarPoly, primes: &[u64]) -> Result<Vec<ReductionReport>> {
    if f.field() != Field::Rationals {
        return Err(Error::FieldMismatch(f.field().to_string(), Field::Rationals.to_string()));
    }
    let reference = value_semigroup(&CurveGerm::new(f.clone())?)?;
    Ok(primes
        .par_iter()
        .map(|&p| {
            let sg = reduce_mod_p(f, p).and_then(CurveGerm::new).and_then(|g| value_semigroup(&g));
            match sg {
                Err(e) => ReductionReport::from_error(p, &e, ReductionStatus::BadSemigroup),
                Ok(s) if s == reference => ReductionReport::good(p),
                Ok(s) => ReductionReport {
                    prime: p,
                    status: ReductionStatus::BadSemigroup,
                    detail: format!(
                        "delta {} and conductor {:?} over Q but delta {} and conductor {:?} over F_{p}",
                        reference.delta, reference.conductor, s.delta, s.conductor
                    ),
                },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_curve;

    fn germ(text: &str) -> CurveGerm {
        CurveGerm::parse(text).unwrap()
    }

    #[test]
    fn jet_model_dimensions() {
        assert_eq!(build_jet_model(&germ("y^2 - x^3"), &[8]).unwrap().dim(), 7);
        assert_eq!(build_jet_model(&germ("x*y"), &[3, 3]).unwrap().dim(), 5);
        assert_eq!(build_jet_model(&germ("y - x^2"), &[4]).unwrap().dim(), 4);
    }

    #[test]
    fn cusp_model_spans_semigroup_exponents() {
        let m = build_jet_model(&germ("y^2 - x^3"), &[8]).unwrap();
        let pivots: Vec<usize> = m.basis().pivots().to_vec();
        assert_eq!(pivots, vec![0, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn deltas() {
        assert_eq!(delta_invariant(&germ("y - x^2")).unwrap(), 0);
        assert_eq!(delta_invariant(&germ("y^2 - x^3")).unwrap(), 1);
        assert_eq!(delta_invariant(&germ("y^2 - x^4")).unwrap(), 2);
        assert_eq!(delta_invariant(&germ("x*y")).unwrap(), 1);
    }

    #[test]
    fn cusp_semigroup() {
        let s = value_semigroup(&germ("y^2 - x^3")).unwrap();
        assert_eq!(s.d, 1);
        assert_eq!(s.generators, Some(vec![2, 3]));
        assert_eq!(s.conductor, vec![2]);
        assert_eq!(s.delta, 1);
        assert!(!s.box_members.contains(&vec![1]));
    }

    #[test]
    fn node_semigroup() {
        let ring = LocalRing::new(&germ("x*y")).unwrap();
        assert_eq!(ring.conductor(), &[1, 1]);
        assert!(!semigroup_membership(&ring, &[1, 0]).unwrap());
        assert!(semigroup_membership(&ring, &[5, 7]).unwrap());
        assert!(semigroup_membership(&ring, &[0, 0]).unwrap());
        let s = semigroup_of(&ring).unwrap();
        let expect: BTreeSet<Vec<usize>> =
            [vec![0, 0], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]].into_iter().collect();
        assert_eq!(s.box_members, expect);
    }

    #[test]
    fn smooth_and_e8() {
        let s = value_semigroup(&germ("y - x^2")).unwrap();
        assert_eq!((s.delta, s.conductor.clone(), s.generators.clone()), (0, vec![0], Some(vec![1])));
        let e8 = value_semigroup(&germ("y^3 - x^5")).unwrap();
        assert_eq!(e8.generators, Some(vec![3, 5]));
        assert_eq!(e8.delta, 4);
        assert_eq!(e8.conductor, vec![8]);
    }

    #[test]
    fn tacnode_conductor_is_symmetric() {
        let s = value_semigroup(&germ("y^2 - x^4")).unwrap();
        assert_eq!(s.conductor, vec![2, 2]);
        assert_eq!(s.delta, 2);
    }

    #[test]
    fn three_lines_over_f2_is_ambiguous() {
        let g = CurveGerm::parse_in("x*y*(x + y)", Field::Prime(3)).unwrap();
        assert!(value_semigroup(&g).is_ok());
        let g2 = CurveGerm::parse_in("x*y*(x + y)", Field::Prime(2)).unwrap();
        let ring = LocalRing::new(&g2).unwrap();
        assert_eq!(ring.contains(&[1, 1, 1]), Err(Error::SmallFieldAmbiguity(vec![1, 1, 1])));
    }

    #[test]
    fn nodal_cubic_scan() {
        let f = parse_curve("y^2 - x^3 - x^2").unwrap();
        let r = reduction_semigroup_scan(&f, &[2, 3, 5, 7, 11, 13]).unwrap();
        let good: Vec<u64> = r.iter().filter(|r| r.is_good()).map(|r| r.prime).collect();
        assert_eq!(good, vec![3, 5, 7, 11, 13]);
        assert_eq!(r[0].status, ReductionStatus::BadSemigroup);
    }

    #[test]
    fn json_shape() {
        let s = value_semigroup(&germ("y^2 - x^3")).unwrap();
        assert_eq!(
            s.to_json().to_string(),
            r#"{"box_members":[[0],[2],[3]],"conductor":[2],"d":1,"delta":1,"generators":[2,3]}"#
        );
    }
}
