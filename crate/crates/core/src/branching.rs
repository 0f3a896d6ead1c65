//! Branching systems, their axiom checker, and the induced module action.
//!
//! Bases are usually infinite, so every operation works inside a
//! [`Truncation`] window. Leaving the window is always an error, never a
//! silent drop.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, VertexId};
use crate::scalar::Scalar;
use crate::term::{Element, Monomial};

/// Bounds on path length and on how many members of each bundle appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub max_path_length: usize,
    pub bundle_sample: u32,
}

impl Truncation {
    pub fn new(max_path_length: usize, bundle_sample: u32) -> Result<Self> {
        if max_path_length == 0 || bundle_sample == 0 {
            return Err(Error::Precondition("window bounds must be positive".into()));
        }
        Ok(Truncation { max_path_length, bundle_sample })
    }
}

/// A set `X` with parts `X_v`, `X_e` and bijections `sigma_e: X_r(e) -> X_e`.
pub trait BranchingSystem {
    type Elem: Clone + Ord + Debug;

    fn graph(&self) -> &Graph;

    /// Every basis element inside the window, without repetition.
    fn basis(&self, t: Truncation) -> Vec<Self::Elem>;

    fn contains_in_window(&self, x: &Self::Elem, t: Truncation) -> bool;

    /// The vertex `v` with `x` in `X_v`, if any.
    fn vertex_part(&self, x: &Self::Elem) -> Option<VertexId>;

    /// The edge `e` with `x` in `X_e`, if any.
    fn edge_part(&self, x: &Self::Elem) -> Option<EdgeRef>;

    fn in_vertex_part(&self, v: VertexId, x: &Self::Elem) -> bool {
        self.vertex_part(x) == Some(v)
    }

    fn in_edge_part(&self, e: EdgeRef, x: &Self::Elem) -> bool {
        self.edge_part(x) == Some(e)
    }

    /// `sigma_e(x)`, or `None` when `x` is not in `X_r(e)`.
    fn sigma(&self, e: EdgeRef, x: &Self::Elem) -> Option<Self::Elem>;

    /// `sigma_e^{-1}(x)`, or `None` when `x` is not in `X_e`.
    fn sigma_inv(&self, e: EdgeRef, x: &Self::Elem) -> Option<Self::Elem>;

    fn degree(&self, x: &Self::Elem) -> Option<i64>;

    fn is_graded(&self) -> bool;

    fn show(&self, x: &Self::Elem) -> String;
}

/// A finite combination of basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVector<X: Ord> {
    terms: BTreeMap<X, Scalar>,
}

impl<X: Ord + Clone> Default for ModuleVector<X> {
    fn default() -> Self {
        ModuleVector { terms: BTreeMap::new() }
    }
}

impl<X: Ord + Clone> ModuleVector<X> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(x: X) -> Self {
        Self::from_terms([(x, Scalar::one())])
    }

    pub fn from_terms(items: impl IntoIterator<Item = (X, Scalar)>) -> Self {
        let mut out = Self::zero();
        for (x, k) in items {
            out.add_term(x, &k);
        }
        out
    }

    pub fn add_term(&mut self, x: X, k: &Scalar) {
        if k.is_zero() {
            return;
        }
        let entry = self.terms.entry(x.clone()).or_insert_with(Scalar::zero);
        *entry += k;
        if entry.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, k) in &other.terms {
            out.add_term(x.clone(), k);
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, c)| (x.clone(), k * c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&X, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: &X) -> Option<&Scalar> {
        self.terms.get(x)
    }

    pub fn coefficient_sum(&self) -> Scalar {
        self.terms.values().fold(Scalar::zero(), |acc, k| &acc + k)
    }
}

pub fn show_vector<S: BranchingSystem>(sys: &S, m: &ModuleVector<S::Elem>) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (x, k)) in m.terms().enumerate() {
        let (neg, mag) = if k.is_negative() { (true, -k) } else { (false, k.clone()) };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(&sys.show(x));
    }
    out
}

/// Common degree of the support, `None` if mixed or the system is ungraded.
pub fn vector_degree<S: BranchingSystem>(sys: &S, m: &ModuleVector<S::Elem>) -> Option<i64> {
    let mut degrees = m.terms().map(|(x, _)| sys.degree(x));
    let first = degrees.next()??;
    degrees.all(|d| d == Some(first)).then_some(first)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axioms_1_to_4: bool,
    pub perfect: bool,
    pub saturated: bool,
    pub graded: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn first(&self, rule: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.rule == rule)
    }
}

/// Evaluates axioms (1)-(4), perfectness, saturation and grading on the window.
pub fn check_axioms<S: BranchingSystem>(sys: &S, t: Truncation) -> Result<AxiomReport> {
    let g = sys.graph();
    let basis = sys.basis(t);
    let distinct: BTreeSet<&S::Elem> = basis.iter().collect();
    if distinct.len() != basis.len() {
        return Err(Error::MalformedSystem("basis enumerator repeats an element".into()));
    }
    let edges = g.edge_refs(t.bundle_sample);
    let mut violations = Vec::new();
    let flag = |rule: &'static str, x: &S::Elem, violations: &mut Vec<Violation>| {
        violations.push(Violation { rule, witness: sys.show(x) });
    };
    for x in &basis {
        let vertices = g.vertices().filter(|&v| sys.in_vertex_part(v, x)).count();
        if vertices > 1 {
            flag("1", x, &mut violations);
        }
        if vertices == 0 {
            flag("saturated", x, &mut violations);
        }
        let owners: Vec<EdgeRef> = edges.iter().copied().filter(|&e| sys.in_edge_part(e, x)).collect();
        if owners.len() > 1 {
            flag("1", x, &mut violations);
        }
        for &e in &owners {
            if !sys.in_vertex_part(g.source(e), x) {
                flag("2", x, &mut violations);
            }
        }
        for &e in &edges {
            if sys.in_vertex_part(g.range(e), x) {
                match sys.sigma(e, x) {
                    Some(y) if sys.in_edge_part(e, &y) && sys.sigma_inv(e, &y).as_ref() == Some(x) => {
                        if sys.is_graded() && sys.degree(&y).zip(sys.degree(x)).is_none_or(|(a, b)| a != b + 1) {
                            flag("graded", x, &mut violations);
                        }
                    }
                    _ => flag("3", x, &mut violations),
                }
            }
            if sys.in_edge_part(e, x) {
                match sys.sigma_inv(e, x) {
                    Some(y) if sys.in_vertex_part(g.range(e), &y) && sys.sigma(e, &y).as_ref() == Some(x) => {}
                    _ => flag("3", x, &mut violations),
                }
            }
        }
        if let Some(v) = sys.vertex_part(x) {
            let covered = sys.edge_part(x).is_some_and(|e| g.source(e) == v);
            if g.is_regular(v) && !covered {
                flag("4", x, &mut violations);
            }
            if g.is_infinite_emitter(v) && !covered {
                flag("perfect", x, &mut violations);
            }
        }
    }
    let has = |rule: &str| violations.iter().any(|v| v.rule == rule);
    Ok(AxiomReport {
        axioms_1_to_4: !has("1") && !has("2") && !has("3") && !has("4"),
        perfect: !has("4") && !has("perfect"),
        saturated: !has("saturated"),
        graded: sys.is_graded() && !has("graded"),
        checked: basis.len(),
        violations,
    })
}

fn overflow<S: BranchingSystem>(sys: &S, x: &S::Elem) -> Error {
    Error::WindowOverflow { element: sys.show(x) }
}

/// `p q*` applied to a single basis element.
pub fn act_monomial<S: BranchingSystem>(
    sys: &S,
    m: &Monomial,
    x: &S::Elem,
    t: Truncation,
) -> Result<Option<S::Elem>> {
    if !sys.contains_in_window(x, t) {
        return Err(overflow(sys, x));
    }
    let mut y = x.clone();
    if m.q().is_trivial() && !sys.in_vertex_part(m.q().source(), &y) {
        return Ok(None);
    }
    for &e in m.q().steps() {
        match sys.sigma_inv(e, &y) {
            Some(z) if sys.in_edge_part(e, &y) => y = z,
            _ => return Ok(None),
        }
        if !sys.contains_in_window(&y, t) {
            return Err(overflow(sys, &y));
        }
    }
    for &e in m.p().steps().iter().rev() {
        if !sys.in_vertex_part(sys.graph().range(e), &y) {
            return Ok(None);
        }
        y = sys
            .sigma(e, &y)
            .ok_or_else(|| Error::MalformedSystem(format!("sigma undefined on {}", sys.show(&y))))?;
        if !sys.contains_in_window(&y, t) {
            return Err(overflow(sys, &y));
        }
    }
    Ok(Some(y))
}

/// The module action of an algebra element on a vector.
pub fn act<S: BranchingSystem>(
    sys: &S,
    a: &Element,
    m: &ModuleVector<S::Elem>,
    t: Truncation,
) -> Result<ModuleVector<S::Elem>> {
    let mut out = ModuleVector::zero();
    for (mono, k) in a.terms() {
        for (x, c) in m.terms() {
            if let Some(y) = act_monomial(sys, mono, x, t)? {
                out.add_term(y, &(k * c));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub generator: usize,
    pub basis_element: String,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilationReport {
    pub pass: bool,
    pub checked: usize,
    pub overflows: usize,
    pub counterexample: Option<Counterexample>,
}

/// Every generator kills every basis element whose action stays in the window.
pub fn annihilation_check<S: BranchingSystem>(
    sys: &S,
    gens: &[Element],
    t: Truncation,
) -> AnnihilationReport {
    let basis = sys.basis(t);
    let mut report = AnnihilationReport { pass: true, checked: 0, overflows: 0, counterexample: None };
    for (i, a) in gens.iter().enumerate() {
        for x in &basis {
            match act(sys, a, &ModuleVector::basis(x.clone()), t) {
                Ok(y) if y.is_zero() => report.checked += 1,
                Ok(y) => {
                    report.checked += 1;
                    report.pass = false;
                    report.counterexample = Some(Counterexample {
                        generator: i,
                        basis_element: sys.show(x),
                        result: show_vector(sys, &y),
                    });
                    return report;
                }
                Err(_) => report.overflows += 1,
            }
        }
    }
    report
}

/// A basis element moved by `a`, if the window contains one.
pub fn nonzero_witness<S: BranchingSystem>(sys: &S, a: &Element, t: Truncation) -> Option<S::Elem> {
    sys.basis(t)
        .into_iter()
        .find(|x| matches!(act(sys, a, &ModuleVector::basis(x.clone()), t), Ok(y) if !y.is_zero()))
}

pub fn degree_histogram<S: BranchingSystem>(sys: &S, t: Truncation) -> Result<BTreeMap<i64, usize>> {
    if !sys.is_graded() {
        return Err(Error::Precondition("system is not graded".into()));
    }
    let mut out = BTreeMap::new();
    for x in sys.basis(t) {
        let d = sys.degree(&x).ok_or_else(|| Error::MalformedSystem("missing degree".into()))?;
        *out.entry(d).or_insert(0) += 1;
    }
    Ok(out)
}
