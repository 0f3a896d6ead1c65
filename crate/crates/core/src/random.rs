//! Seeded generators for graphs, algebra elements and module vectors.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::branching::{BranchingSystem, ModuleVector, Truncation};
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::term::{Algebra, Element};

#[derive(Debug, Clone, Copy)]
pub struct GraphShape {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_bundles: usize,
}

impl Default for GraphShape {
    fn default() -> Self {
        GraphShape { max_vertices: 6, max_edges: 10, max_bundles: 2 }
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, shape: GraphShape) -> Graph {
    let n = rng.gen_range(1..=shape.max_vertices);
    let mut b = Graph::builder();
    for i in 0..n {
        b.vertex(&format!("v{i}")).expect("fresh");
    }
    for i in 0..rng.gen_range(0..=shape.max_edges) {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        b.edge(&format!("e{i}"), &format!("v{s}"), &format!("v{t}")).expect("known");
    }
    for i in 0..rng.gen_range(0..=shape.max_bundles) {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        b.bundle(&format!("b{i}"), &format!("v{s}"), &format!("v{t}")).expect("known");
    }
    b.build()
}

fn coefficient<R: Rng>(alg: &Algebra, rng: &mut R) -> Scalar {
    let k = rng.gen_range(1..=4);
    alg.scalar(if rng.gen_bool(0.5) { k } else { -k })
}

/// Up to `terms` monomials with `|p|, |q| <= bound`, random nonzero coefficients.
pub fn random_element<R: Rng>(alg: &Algebra, rng: &mut R, bound: usize, terms: usize) -> Element {
    let monomials = alg.monomials_up_to(bound);
    let picks: Vec<Element> = (0..rng.gen_range(1..=terms))
        .filter_map(|_| {
            let m = monomials.choose(rng)?;
            Some(alg.scale(&coefficient(alg, rng), m))
        })
        .collect();
    alg.sum(&picks)
}

/// As [`random_element`], restricted to one degree; `None` if the graph has
/// no monomials at all.
pub fn random_homogeneous_element<R: Rng>(
    alg: &Algebra,
    rng: &mut R,
    bound: usize,
    terms: usize,
) -> Option<Element> {
    let monomials = alg.monomials_up_to(bound);
    let degree = monomials.choose(rng)?.degree()?;
    let same: Vec<&Element> = monomials.iter().filter(|m| m.degree() == Some(degree)).collect();
    let picks: Vec<Element> = (0..rng.gen_range(1..=terms))
        .filter_map(|_| {
            let m = same.choose(rng)?;
            Some(alg.scale(&coefficient(alg, rng), m))
        })
        .collect();
    Some(alg.sum(&picks))
}

/// A homogeneous combination of up to `terms` windowed basis elements with
/// nonzero coefficients; `None` for an empty window.
pub fn random_homogeneous_vector<S: BranchingSystem, R: Rng>(
    sys: &S,
    alg: &Algebra,
    rng: &mut R,
    t: Truncation,
    terms: usize,
) -> Option<ModuleVector<S::Elem>> {
    let basis = sys.basis(t);
    let degree = sys.degree(basis.choose(rng)?);
    let same: Vec<&S::Elem> = basis.iter().filter(|x| sys.degree(x) == degree).collect();
    let mut out = ModuleVector::zero();
    while out.is_zero() {
        for _ in 0..rng.gen_range(1..=terms) {
            let x = same.choose(rng).expect("nonempty");
            out.add_term((*x).clone(), &coefficient(alg, rng));
        }
    }
    Some(out)
}
