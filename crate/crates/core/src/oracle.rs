//! Brute-force enumeration of jets over a small prime field.
//!
//! Elements of the local ring are enumerated modulo `C(M)` as explicit
//! vectors of residues, and principal ideals are counted as orbits of the
//! full group of truncated units. Nothing here uses the closed formulas of
//! [`crate::zeta_local`], which makes these counts an independent check.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::algebra::{EchelonBasis, Field, FieldElem};
use crate::error::{Error, Result};
use crate::semigroup::{JetModel, LocalRing};
use crate::zeta_local::simplex_points;

/// Counts attached to one value vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    pub n: Vec<usize>,
    /// Truncation used for the enumeration.
    pub trunc: Vec<usize>,
    /// `#F(n)` modulo `C(M)`.
    pub fiber: u64,
    /// Orbits of `F(n)` under nonzero scalars.
    pub projectivized: u64,
    /// Orbits of `F(n)` under truncated units: the number of ideals.
    pub ideals: u64,
}

fn residue(c: &FieldElem) -> u64 {
    match c {
        FieldElem::Fp { value, .. } => *value,
        FieldElem::Q(_) => unreachable!("enumeration only over prime fields"),
    }
}

fn prime_of(ring: &LocalRing) -> Result<u64> {
    match ring.field() {
        Field::Prime(p) => Ok(p),
        Field::Rationals => Err(Error::InvalidInput("enumeration needs a finite ground field".into())),
    }
}

/// Layout of a product of truncated branch rings.
#[derive(Clone, Debug)]
struct Layout {
    p: u64,
    trunc: Vec<usize>,
    offsets: Vec<usize>,
}

impl Layout {
    fn new(p: u64, trunc: &[usize]) -> Layout {
        let mut offsets = Vec::new();
        let mut total = 0;
        for &m in trunc {
            offsets.push(total);
            total += m;
        }
        Layout { p, trunc: trunc.to_vec(), offsets }
    }

    /// `u z` where `u` lives in the layout `unit` (shorter by `n`) and `z`
    /// has value at least `n`; the product is taken in this layout.
    fn mul(&self, unit: &Layout, u: &[u64], z: &[u64], n: &[usize]) -> Vec<u64> {
        let mut out = vec![0u64; z.len()];
        for (i, &m) in self.trunc.iter().enumerate() {
            let zo = self.offsets[i];
            let uo = unit.offsets[i];
            for a in n[i]..m {
                let za = z[zo + a];
                if za == 0 {
                    continue;
                }
                for b in 0..m - a {
                    let ub = u[uo + b];
                    if ub != 0 {
                        let slot = &mut out[zo + a + b];
                        *slot = (*slot + za * ub) % self.p;
                    }
                }
            }
        }
        out
    }
}

/// Basis of `W ∩ {coordinates below n vanish}`.
fn basis_above(model: &JetModel, n: &[usize]) -> Vec<Vec<u64>> {
    let ncols = model.basis().ncols();
    let mut low = Vec::new();
    let mut high = Vec::new();
    for (i, &m) in model.trunc().iter().enumerate() {
        for j in 0..m {
            if j < n[i] {
                low.push(model.column(i, j));
            } else {
                high.push(model.column(i, j));
            }
        }
    }
    let order: Vec<usize> = low.iter().chain(&high).copied().collect();
    let mut permuted = EchelonBasis::empty(model.field(), ncols);
    for row in model.basis().rows() {
        permuted.insert(order.iter().map(|&c| row[c].clone()).collect());
    }
    permuted
        .rows()
        .iter()
        .zip(permuted.pivots())
        .filter(|(_, &piv)| piv >= low.len())
        .map(|(row, _)| {
            let mut v = vec![0u64; ncols];
            for (k, &c) in order.iter().enumerate() {
                v[c] = residue(&row[k]);
            }
            v
        })
        .collect()
}

/// Every `F_p`-linear combination of `basis`, passed to `visit`.
fn for_each_combination(p: u64, basis: &[Vec<u64>], len: usize, mut visit: impl FnMut(&[u64])) {
    let k = basis.len();
    let mut coeffs = vec![0u64; k];
    let mut v = vec![0u64; len];
    loop {
        visit(&v);
        // Odometer increment, updating v incrementally.
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            coeffs[i] += 1;
            for (vj, bj) in v.iter_mut().zip(&basis[i]) {
                *vj = (*vj + bj) % p;
            }
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

fn pow_u128(q: u64, k: usize) -> u128 {
    (q as u128).saturating_pow(k as u32)
}

/// Enumerates the units of the ring modulo `C(trunc)`.
fn units(ring: &LocalRing, p: u64, trunc: &[usize]) -> Vec<Vec<u64>> {
    let model = JetModel::build_for(ring, trunc);
    let zero = vec![0; trunc.len()];
    let basis = basis_above(&model, &zero);
    let mut out = Vec::new();
    for_each_combination(p, &basis, model.basis().ncols(), |v| {
        if v[0] != 0 {
            out.push(v.to_vec());
        }
    });
    out
}

struct Plan {
    n: Vec<usize>,
    trunc: Vec<usize>,
    model: JetModel,
    fiber_basis: Vec<Vec<u64>>,
}

/// Enumerates `F(n)` and its ideals for every `n` with `|n| <= bound`.
///
/// The total number of enumerated jets and unit products must fit in
/// `budget`.
pub fn brute_force_fibers(ring: &LocalRing, bound: usize, budget: u128) -> Result<Vec<FiberCount>> {
    let p = prime_of(ring)?;
    let d = ring.d();
    let gamma = ring.conductor().to_vec();
    let unit_trunc: Vec<usize> = gamma.iter().map(|g| g + 1).collect();
    let unit_dim = JetModel::build_for(ring, &unit_trunc).dim();
    let mut plans = Vec::new();
    let mut needed: u128 = pow_u128(p, unit_dim);
    for n in simplex_points(d, bound) {
        let trunc: Vec<usize> = n.iter().zip(&gamma).map(|(a, g)| a + g + 1).collect();
        let model = JetModel::build_for(ring, &trunc);
        let fiber_basis = basis_above(&model, &n);
        // Enumeration of C(n) plus one unit orbit per element at worst.
        let size = pow_u128(p, fiber_basis.len());
        needed = needed.saturating_add(size.saturating_mul(2));
        plans.push(Plan { n, trunc, model, fiber_basis });
    }
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let unit_layout = Layout::new(p, &unit_trunc);
    let unit_group = units(ring, p, &unit_trunc);
    let scalars: Vec<Vec<u64>> = unit_group
        .iter()
        .filter(|u| {
            // Constant jets: every coefficient other than the constant terms vanishes.
            u.iter().enumerate().all(|(c, &v)| v == 0 || unit_layout.offsets.contains(&c))
        })
        .cloned()
        .collect();
    let mut out = Vec::new();
    for plan in plans {
        let layout = Layout::new(p, &plan.trunc);
        let exact_cols: Vec<usize> = (0..d).map(|i| plan.model.column(i, plan.n[i])).collect();
        let mut fiber = Vec::new();
        for_each_combination(p, &plan.fiber_basis, plan.model.basis().ncols(), |v| {
            if exact_cols.iter().all(|&c| v[c] != 0) {
                fiber.push(v.to_vec());
            }
        });
        let count_orbits = |group: &[Vec<u64>]| {
            let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(fiber.len());
            let mut orbits = 0u64;
            for z in &fiber {
                if seen.contains(z) {
                    continue;
                }
                orbits += 1;
                for u in group {
                    seen.insert(layout.mul(&unit_layout, u, z, &plan.n));
                }
            }
            orbits
        };
        let ideals = count_orbits(&unit_group);
        let projectivized = count_orbits(&scalars);
        out.push(FiberCount {
            n: plan.n,
            trunc: plan.trunc,
            fiber: fiber.len() as u64,
            projectivized,
            ideals,
        });
    }
    Ok(out)
}

/// `#I_n(F_p)` for every `n` with `|n| <= bound` and a nonempty fiber.
pub fn brute_force_ideal_counts(ring: &LocalRing, bound: usize, budget: u128) -> Result<BTreeMap<Vec<usize>, u64>> {
    Ok(brute_force_fibers(ring, bound, budget)?
        .into_iter()
        .filter(|c| c.fiber > 0)
        .map(|c| (c.n, c.ideals))
        .collect())
}

/// Number of units of the ring modulo `C(trunc)`, by enumeration.
pub fn count_units(ring: &LocalRing, trunc: &[usize], budget: u128) -> Result<u128> {
    let p = prime_of(ring)?;
    let dim = JetModel::build_for(ring, trunc).dim();
    let needed = pow_u128(p, dim);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(units(ring, p, trunc).len() as u128)
}
