//! Embedded resolution of a plane curve germ by successive point blow-ups.
//!
//! Every blow-up of a point is looked at in its two standard affine charts:
//! `(x, y) = (u, u (v + s))` around the tangent direction of slope `s`, and
//! `(x, y) = (u v, v)` around the vertical direction. In either chart the
//! exceptional curve and the surviving old exceptional curves are
//! coordinate axes, so normal crossings can be read off the strict
//! transform's low-order terms.
//!
//! The tree of infinitely near points is put in a canonical order (children
//! sorted by the shape of their subtrees, ties by the lexicographic order of
//! their centers) so that the recorded multiplicity sequence does not depend
//! on how the ground field happens to order its elements.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{BivarPoly, Field, FieldElem};
use crate::curve::{reduce_mod_p, CurveGerm, ReductionReport, ReductionStatus};
use crate::error::{Error, Result};

/// Maximal number of nested blow-ups before giving up.
pub const MAX_DEPTH: usize = 96;

/// One chart move from a point to an infinitely near point on the
/// exceptional curve of its blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartMove {
    /// `(x, y) = (u, u (v + slope))`.
    Slope(FieldElem),
    /// `(x, y) = (u v, v)`.
    Vertical,
}

impl ChartMove {
    fn pull_back(&self, g: &BivarPoly, m: u32) -> BivarPoly {
        let field = g.field();
        let u = BivarPoly::x(field);
        let v = BivarPoly::y(field);
        match self {
            ChartMove::Slope(s) => {
                let vs = v.add(&BivarPoly::constant(s.clone()));
                g.compose(&u, &u.mul(&vs)).divide_monomial(m, 0)
            }
            ChartMove::Vertical => g.compose(&u.mul(&v), &v).divide_monomial(0, m),
        }
    }

    /// Center of the move in the coordinates of the parent point.
    fn center_label(&self) -> (String, String) {
        match self {
            ChartMove::Slope(s) => ("x".into(), format!("y/x={s}")),
            ChartMove::Vertical => ("x/y=0".into(), "y".into()),
        }
    }
}

/// A blow-up performed during the resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupStep {
    /// Chart moves (as labels) leading from the germ to the blown-up point.
    pub chart: Vec<String>,
    /// Coordinates of the blown-up point in its parent chart.
    pub center: (String, String),
    /// Multiplicity of the strict transform at the center.
    pub multiplicity: u32,
}

/// A point of the strict transform where it is smooth and crosses the
/// exceptional divisor normally; exactly one branch passes through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchChart {
    /// Strict transform in local coordinates centered at the point.
    pub strict: BivarPoly,
    /// Chart moves from the germ to this point.
    pub path: Vec<ChartMove>,
}

/// Tree of infinitely near points visited by the resolution.
#[derive(Clone, Debug)]
enum Node {
    Leaf(BranchChart),
    Blowup { multiplicity: u32, path: Vec<ChartMove>, children: Vec<Node> },
}

impl Node {
    /// Preorder encoding used as canonical sort key.
    fn signature(&self) -> Vec<u32> {
        match self {
            Node::Leaf(_) => vec![0],
            Node::Blowup { multiplicity, children, .. } => {
                let mut sig = vec![*multiplicity, children.len() as u32];
                for c in children {
                    sig.extend(c.signature());
                }
                sig
            }
        }
    }
}

/// Outcome of [`resolve_germ`].
#[derive(Clone, Debug)]
pub struct ResolutionProcess {
    steps: Vec<BlowupStep>,
    branches: Vec<BranchChart>,
}

#[derive(Serialize)]
struct ProcessJson<'a> {
    #[serde(rename = "N")]
    n: usize,
    multiplicities: &'a [u32],
    exceptional_components: usize,
}

impl ResolutionProcess {
    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    /// Total number of blow-ups.
    pub fn n(&self) -> usize {
        self.steps.len()
    }

    /// Number of exceptional components: one per blow-up of a point.
    pub fn exceptional_components(&self) -> usize {
        self.steps.len()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.steps.iter().map(|s| s.multiplicity).collect()
    }

    /// Resolved points through which a branch passes, in canonical order.
    pub fn branch_charts(&self) -> &[BranchChart] {
        &self.branches
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mults = self.multiplicities();
        serde_json::to_value(ProcessJson {
            n: self.n(),
            multiplicities: &mults,
            exceptional_components: self.exceptional_components(),
        })
        .expect("serializable")
    }
}

fn is_resolved(g: &BivarPoly, exc_u: bool, exc_v: bool) -> bool {
    if g.order() != Some(1) {
        return false;
    }
    match (exc_u, exc_v) {
        (true, true) => false,
        // Transversal to {u = 0}: g(0, v) has order one.
        (true, false) => !g.coeff(0, 1).is_zero(),
        (false, true) => !g.coeff(1, 0).is_zero(),
        (false, false) => true,
    }
}

fn resolve_node(g: BivarPoly, exc_u: bool, exc_v: bool, path: Vec<ChartMove>) -> Result<Node> {
    if is_resolved(&g, exc_u, exc_v) {
        return Ok(Node::Leaf(BranchChart { strict: g, path }));
    }
    if path.len() >= MAX_DEPTH {
        return Err(Error::WildFailure(format!(
            "no normal crossings after {MAX_DEPTH} nested blow-ups"
        )));
    }
    let (m, cone) = g.tangent_cone().ok_or(Error::ZeroPolynomial)?;
    let roots = cone.roots();
    let finite: usize = roots.iter().map(|(_, k)| k).sum();
    let vertical = m as usize - cone.degree().unwrap_or(0);
    if finite + vertical != m as usize {
        return Err(Error::NotTotallyRational(format!(
            "the tangent cone of {g} has a direction not defined over the ground field"
        )));
    }
    let mut moves: Vec<(ChartMove, bool, bool)> = roots
        .into_iter()
        .map(|(s, _)| {
            let keep_v = exc_v && s.is_zero();
            (ChartMove::Slope(s), true, keep_v)
        })
        .collect();
    if vertical > 0 {
        moves.push((ChartMove::Vertical, exc_u, true));
    }
    let mut children = Vec::with_capacity(moves.len());
    for (mv, eu, ev) in moves {
        let g1 = mv.pull_back(&g, m);
        let mut p = path.clone();
        p.push(mv);
        children.push(resolve_node(g1, eu, ev, p)?);
    }
    // Stable sort keeps the coordinate order among identical subtrees.
    children.sort_by_key(|c| std::cmp::Reverse(c.signature()));
    Ok(Node::Blowup { multiplicity: m, path, children })
}

fn flatten(node: &Node, steps: &mut Vec<BlowupStep>, branches: &mut Vec<BranchChart>) {
    match node {
        Node::Leaf(b) => branches.push(b.clone()),
        Node::Blowup { multiplicity, path, children } => {
            let center = path.last().map(|m| m.center_label()).unwrap_or(("0".into(), "0".into()));
            steps.push(BlowupStep {
                chart: path
                    .iter()
                    .map(|m| match m {
                        ChartMove::Slope(s) => format!("(x, y/x - {s})"),
                        ChartMove::Vertical => "(x/y, y)".into(),
                    })
                    .collect(),
                center,
                multiplicity: *multiplicity,
            });
            for c in children {
                flatten(c, steps, branches);
            }
        }
    }
}

/// Resolves the germ to normal crossings and records the multiplicity of
/// the strict transform at every blown-up point.
pub fn resolve_germ(germ: &CurveGerm) -> Result<ResolutionProcess> {
    let root = resolve_node(germ.equation().clone(), false, false, Vec::new())?;
    let mut steps = Vec::new();
    let mut branches = Vec::new();
    flatten(&root, &mut steps, &mut branches);
    Ok(ResolutionProcess { steps, branches })
}

/// Two processes agree when they have the same number of blow-ups and the
/// same multiplicity at every position.
pub fn same_process(a: &ResolutionProcess, b: &ResolutionProcess) -> bool {
    a.n() == b.n() && a.multiplicities() == b.multiplicities()
}

/// Resolves `f` over the rationals and over `F_p` for every prime in
/// `primes`, and reports whether the processes agree.
///
/// Failures at one prime are recorded in that prime's report and never
/// abort the scan.
pub fn good_reduction_scan(f: &BivarPoly, primes: &[u64]) -> Result<Vec<ReductionReport>> {
    if f.field() != Field::Rationals {
        return Err(Error::FieldMismatch(f.field().to_string(), Field::Rationals.to_string()));
    }
    let reference = resolve_germ(&CurveGerm::new(f.clone())?)?;
    Ok(primes
        .par_iter()
        .map(|&p| scan_prime(f, p, &reference))
        .collect())
}

fn scan_prime(f: &BivarPoly, p: u64, reference: &ResolutionProcess) -> ReductionReport {
    let germ = match reduce_mod_p(f, p).and_then(CurveGerm::new) {
        Ok(g) => g,
        Err(e) => return ReductionReport::from_error(p, &e, ReductionStatus::BadProcess),
    };
    match resolve_germ(&germ) {
        Err(e) => ReductionReport::from_error(p, &e, ReductionStatus::BadProcess),
        Ok(proc_p) if same_process(reference, &proc_p) => {
            debug_assert_eq!(reference.exceptional_components(), proc_p.exceptional_components());
            ReductionReport::good(p)
        }
        Ok(proc_p) => ReductionReport {
            prime: p,
            status: ReductionStatus::BadProcess,
            detail: format!(
                "multiplicities {:?} over Q but {:?} over F_{p}",
                reference.multiplicities(),
                proc_p.multiplicities()
            ),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_curve;

    fn process(text: &str) -> ResolutionProcess {
        resolve_germ(&CurveGerm::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn cusp_node_and_smooth() {
        let cusp = process("y^2 - x^3");
        assert_eq!(cusp.multiplicities(), vec![2, 1, 1]);
        assert_eq!(cusp.n(), 3);
        assert_eq!(cusp.branch_charts().len(), 1);
        let node = process("x*y");
        assert_eq!(node.multiplicities(), vec![2]);
        assert_eq!(node.branch_charts().len(), 2);
        let smooth = process("y - x^2");
        assert_eq!(smooth.n(), 0);
        assert_eq!(smooth.branch_charts().len(), 1);
    }

    #[test]
    fn tacnode_and_higher_cusps() {
        assert_eq!(process("y^2 - x^4").multiplicities(), vec![2, 2]);
        // Milnor number check: mu = sum m(m-1) - r + 1 = 8 for y^3 = x^5.
        assert_eq!(process("y^3 - x^5").multiplicities(), vec![3, 2, 1, 1]);
        // A smooth branch tangent to the exceptional curve is separated.
        assert_eq!(process("y^2 - x^5").multiplicities(), vec![2, 2, 1, 1]);
    }

    #[test]
    fn comparisons() {
        let cusp_q = process("y^2 - x^3");
        let cusp_5 = resolve_germ(&CurveGerm::parse("y^2 - x^3").unwrap().reduce_mod_p(5).unwrap()).unwrap();
        assert!(same_process(&cusp_q, &cusp_5));
        assert!(!same_process(&cusp_q, &process("x*y")));
        assert!(same_process(&cusp_q, &cusp_q));
    }

    #[test]
    fn irrational_tangent() {
        assert!(matches!(
            resolve_germ(&CurveGerm::parse("y^2 - 2*x^2").unwrap()),
            Err(Error::NotTotallyRational(_))
        ));
    }

    #[test]
    fn scan_nodal_cubic() {
        let f = parse_curve("y^2 - x^3 - x^2").unwrap();
        let reports = good_reduction_scan(&f, &[2, 3, 5, 7, 11, 13]).unwrap();
        let good: Vec<u64> = reports.iter().filter(|r| r.is_good()).map(|r| r.prime).collect();
        assert_eq!(good, vec![3, 5, 7, 11, 13]);
        assert_eq!(reports[0].status, ReductionStatus::BadProcess);
    }

    #[test]
    fn scan_denominators() {
        let f = parse_curve("(1/6)y^2 - x^3").unwrap();
        let reports = good_reduction_scan(&f, &[2, 3, 5, 7]).unwrap();
        let statuses: Vec<ReductionStatus> = reports.iter().map(|r| r.status).collect();
        assert_eq!(
            statuses,
            vec![
                ReductionStatus::BadDenominator,
                ReductionStatus::BadDenominator,
                ReductionStatus::Good,
                ReductionStatus::Good
            ]
        );
    }

    #[test]
    fn json_shape() {
        let v = process("y^2 - x^3").to_json();
        assert_eq!(v.to_string(), r#"{"N":3,"exceptional_components":3,"multiplicities":[2,1,1]}"#);
    }
}
