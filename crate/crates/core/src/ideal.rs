//! Admissible pairs, the graded ideals they generate, quotient graphs, and
//! ideal membership through the quotient map.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeRef, Graph, Path, Verdict, VertexId, VertexSet};
use crate::laurent::LaurentPoly;
use crate::term::{Algebra, Element};

/// `(H, S)` with `H` hereditary and saturated and `S` a subset of `B_H`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissiblePair {
    h: VertexSet,
    s: VertexSet,
}

impl AdmissiblePair {
    pub fn new(g: &Graph, h: VertexSet, s: VertexSet) -> Result<Self> {
        let breaking = g.breaking_vertices(&h).map_err(|e| Error::InvalidPair(e.to_string()))?;
        if let Some(v) = s.iter().find(|v| !breaking.contains(v)) {
            g.check_vertex(*v)?;
            return Err(Error::InvalidPair(format!(
                "{} is not a breaking vertex of {}",
                g.vertex_name(*v),
                g.set_names(&h)
            )));
        }
        Ok(AdmissiblePair { h, s })
    }

    pub fn by_names(g: &Graph, h: &[&str], s: &[&str]) -> Result<Self> {
        AdmissiblePair::new(g, g.vertex_set(h)?, g.vertex_set(s)?)
    }

    pub fn zero() -> Self {
        AdmissiblePair { h: VertexSet::new(), s: VertexSet::new() }
    }

    pub fn h(&self) -> &VertexSet {
        &self.h
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.h.len() < g.vertex_count()
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_empty() && self.s.is_empty()
    }

    pub fn breaking(&self, g: &Graph) -> VertexSet {
        g.breaking_vertices(&self.h).expect("validated pair")
    }

    /// `B_H - S`.
    pub fn unbroken(&self, g: &Graph) -> VertexSet {
        self.breaking(g).difference(&self.s).copied().collect()
    }

    pub fn display(&self, g: &Graph) -> String {
        format!("I({}, {})", g.set_names(&self.h), g.set_names(&self.s))
    }
}

/// Every admissible pair, each once, ordered by `H` then `S`.
///
/// Hereditary saturated sets are found by closing under single-vertex
/// extensions starting from the closure of the empty set.
pub fn enumerate_admissible_pairs(g: &Graph) -> Vec<AdmissiblePair> {
    let mut found: BTreeSet<(usize, VertexSet)> = BTreeSet::new();
    let start = g.hereditary_saturated_closure(&VertexSet::new()).expect("empty set");
    let mut queue = vec![start.clone()];
    found.insert((start.len(), start));
    while let Some(h) = queue.pop() {
        for v in g.vertices().filter(|v| !h.contains(v)) {
            let mut bigger = h.clone();
            bigger.insert(v);
            let closed = g.hereditary_saturated_closure(&bigger).expect("valid set");
            if found.insert((closed.len(), closed.clone())) {
                queue.push(closed);
            }
        }
    }
    let mut out = Vec::new();
    for (_, h) in found {
        let breaking: Vec<VertexId> = g.breaking_vertices(&h).expect("closed").into_iter().collect();
        let mut subsets: Vec<VertexSet> = (0u32..1 << breaking.len())
            .map(|mask| {
                breaking
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out.extend(subsets.into_iter().map(|s| AdmissiblePair { h: h.clone(), s }));
    }
    out
}

/// `v^H = v - sum e e*` over the finitely many edges from `v` leaving `H`.
pub fn v_h(alg: &Algebra, h: &VertexSet, v: VertexId) -> Element {
    let g = alg.graph();
    let rest = g.complement(h);
    let (edges, _) = g.edges_into(v, &rest);
    let parts: Vec<Element> = edges
        .into_iter()
        .map(|e| {
            let x = alg.edge(EdgeRef::Edge(e));
            alg.multiply(&x, &alg.star(&x))
        })
        .collect();
    alg.sub(&alg.vertex(v), &alg.sum(&parts))
}

/// Vertices of `H` followed by `v^H` for `v` in `S`.
pub fn ideal_generators(alg: &Algebra, pair: &AdmissiblePair) -> Vec<Element> {
    pair.h
        .iter()
        .map(|&v| alg.vertex(v))
        .chain(pair.s.iter().map(|&v| v_h(alg, &pair.h, v)))
        .collect()
}

/// Where a quotient vertex or edge comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin<T> {
    Inherited(T),
    Primed(T),
}

/// `E/(H,S)` with provenance for every vertex, edge and bundle.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    pub graph: Graph,
    pub vertex_origin: Vec<Origin<VertexId>>,
    pub edge_origin: Vec<Origin<crate::graph::EdgeId>>,
    pub bundle_origin: Vec<Origin<crate::graph::BundleId>>,
    vertex_image: BTreeMap<VertexId, VertexId>,
    primed_vertex: BTreeMap<VertexId, VertexId>,
    edge_image: BTreeMap<crate::graph::EdgeId, crate::graph::EdgeId>,
    primed_edge: BTreeMap<crate::graph::EdgeId, crate::graph::EdgeId>,
    bundle_image: BTreeMap<crate::graph::BundleId, crate::graph::BundleId>,
    primed_bundle: BTreeMap<crate::graph::BundleId, crate::graph::BundleId>,
}

fn fresh(taken: &mut BTreeSet<String>, base: &str) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

pub fn quotient_graph(g: &Graph, pair: &AdmissiblePair) -> QuotientGraph {
    let h = &pair.h;
    let unbroken = pair.unbroken(g);
    let mut taken: BTreeSet<String> = g
        .vertices()
        .map(|v| g.vertex_name(v).to_string())
        .chain(g.edges().map(|e| g.edge_name(e).to_string()))
        .chain(g.bundles().map(|b| g.bundle_name(b).to_string()))
        .collect();
    let mut b = Graph::builder();
    let mut vertex_origin = Vec::new();
    let mut vertex_image = BTreeMap::new();
    let mut primed_vertex = BTreeMap::new();
    let mut names: BTreeMap<VertexId, String> = BTreeMap::new();
    let mut primed_names: BTreeMap<VertexId, String> = BTreeMap::new();
    for v in g.vertices().filter(|v| !h.contains(v)) {
        let id = b.vertex(g.vertex_name(v)).expect("unique names");
        vertex_origin.push(Origin::Inherited(v));
        vertex_image.insert(v, id);
        names.insert(v, g.vertex_name(v).to_string());
    }
    for &v in &unbroken {
        let name = fresh(&mut taken, g.vertex_name(v));
        let id = b.vertex(&name).expect("fresh name");
        vertex_origin.push(Origin::Primed(v));
        primed_vertex.insert(v, id);
        primed_names.insert(v, name);
    }
    let mut edge_origin = Vec::new();
    let mut edge_image = BTreeMap::new();
    let mut primed_edge = BTreeMap::new();
    for e in g.edges() {
        let (s, r) = (g.source(EdgeRef::Edge(e)), g.range(EdgeRef::Edge(e)));
        if h.contains(&r) {
            continue;
        }
        let id = b.edge(g.edge_name(e), &names[&s], &names[&r]).expect("unique");
        edge_origin.push(Origin::Inherited(e));
        edge_image.insert(e, id);
    }
    for e in g.edges() {
        let (s, r) = (g.source(EdgeRef::Edge(e)), g.range(EdgeRef::Edge(e)));
        if !unbroken.contains(&r) {
            continue;
        }
        let name = fresh(&mut taken, g.edge_name(e));
        let id = b.edge(&name, &names[&s], &primed_names[&r]).expect("fresh");
        edge_origin.push(Origin::Primed(e));
        primed_edge.insert(e, id);
    }
    let mut bundle_origin = Vec::new();
    let mut bundle_image = BTreeMap::new();
    let mut primed_bundle = BTreeMap::new();
    for x in g.bundles() {
        let (s, r) = (g.source(EdgeRef::Bundle(x, 0)), g.range(EdgeRef::Bundle(x, 0)));
        if h.contains(&r) {
            continue;
        }
        let id = b.bundle(g.bundle_name(x), &names[&s], &names[&r]).expect("unique");
        bundle_origin.push(Origin::Inherited(x));
        bundle_image.insert(x, id);
    }
    for x in g.bundles() {
        let (s, r) = (g.source(EdgeRef::Bundle(x, 0)), g.range(EdgeRef::Bundle(x, 0)));
        if !unbroken.contains(&r) {
            continue;
        }
        let name = fresh(&mut taken, g.bundle_name(x));
        let id = b.bundle(&name, &names[&s], &primed_names[&r]).expect("fresh");
        bundle_origin.push(Origin::Primed(x));
        primed_bundle.insert(x, id);
    }
    QuotientGraph {
        graph: b.build(),
        vertex_origin,
        edge_origin,
        bundle_origin,
        vertex_image,
        primed_vertex,
        edge_image,
        primed_edge,
        bundle_image,
        primed_bundle,
    }
}

impl QuotientGraph {
    fn vertex_map(&self, qa: &Algebra, v: VertexId) -> Element {
        let mut out = Element::zero();
        if let Some(&x) = self.vertex_image.get(&v) {
            out = qa.add(&out, &qa.vertex(x));
        }
        if let Some(&x) = self.primed_vertex.get(&v) {
            out = qa.add(&out, &qa.vertex(x));
        }
        out
    }

    fn edge_map(&self, qa: &Algebra, e: EdgeRef) -> Element {
        let (plain, primed) = match e {
            EdgeRef::Edge(id) => (
                self.edge_image.get(&id).map(|&x| EdgeRef::Edge(x)),
                self.primed_edge.get(&id).map(|&x| EdgeRef::Edge(x)),
            ),
            EdgeRef::Bundle(id, i) => (
                self.bundle_image.get(&id).map(|&x| EdgeRef::Bundle(x, i)),
                self.primed_bundle.get(&id).map(|&x| EdgeRef::Bundle(x, i)),
            ),
        };
        let items: Vec<Element> = plain.into_iter().chain(primed).map(|x| qa.edge(x)).collect();
        qa.sum(&items)
    }

    fn path_map(&self, qa: &Algebra, p: &Path) -> Element {
        let mut out = self.vertex_map(qa, p.source());
        for &e in p.steps() {
            if out.is_zero() {
                break;
            }
            out = qa.multiply(&out, &self.edge_map(qa, e));
        }
        out
    }

    /// The canonical surjection onto `L_K(E/(H,S))`, whose kernel is `I(H,S)`.
    ///
    /// Vertices of `H` and edges into `H` vanish; a vertex `v` of `B_H - S`
    /// goes to `v + v'` and an edge into it to `e + e'`, so `v^H` goes to `v'`.
    pub fn quotient_map(&self, qa: &Algebra, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, k) in a.terms() {
            let left = self.path_map(qa, m.p());
            if left.is_zero() {
                continue;
            }
            let right = qa.star(&self.path_map(qa, m.q()));
            out = qa.add(&out, &qa.scale(k, &qa.multiply(&left, &right)));
        }
        out
    }

    pub fn primed_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_origin.iter().enumerate().filter_map(|(i, o)| match o {
            Origin::Primed(_) => Some(VertexId(i as u32)),
            Origin::Inherited(_) => None,
        })
    }

    /// The quotient vertex standing for an inherited vertex.
    pub fn image_of(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_image.get(&v).copied()
    }
}

/// `a` lies in `I(H,S)`.
pub fn contains(alg: &Algebra, pair: &AdmissiblePair, a: &Element) -> bool {
    let q = quotient_graph(alg.graph(), pair);
    let qa = Algebra::new(&q.graph, alg.field());
    q.quotient_map(&qa, a).is_zero()
}

/// A graded ideal `I(H,S)`, or a non-graded primitive ideal
/// `I(H, B_H) + <f(c)>` over an exclusive cycle `c` with `E^0 - H = R(c^0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealDescriptor {
    Graded(AdmissiblePair),
    NonGradedPrimitive {
        pair: AdmissiblePair,
        cycle: Cycle,
        f: LaurentPoly,
        assume_irreducible: bool,
    },
}

impl IdealDescriptor {
    pub fn pair(&self) -> &AdmissiblePair {
        match self {
            IdealDescriptor::Graded(p) => p,
            IdealDescriptor::NonGradedPrimitive { pair, .. } => pair,
        }
    }

    /// Builds `I(E^0 - R(c^0), B_H) + <f(c)>` after checking its invariants.
    pub fn non_graded(g: &Graph, cycle: Cycle, f: LaurentPoly, assume_irreducible: bool) -> Result<Self> {
        g.check_cycle(&cycle)?;
        if !g.is_exclusive(&cycle) {
            return Err(Error::Precondition("cycle is not exclusive".into()));
        }
        let h = g.complement(&g.root(&cycle.vertices())?);
        let s = g.breaking_vertices(&h)?;
        let pair = AdmissiblePair::new(g, h, s)?;
        Ok(IdealDescriptor::NonGradedPrimitive { pair, cycle, f, assume_irreducible })
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            IdealDescriptor::Graded(p) => p.display(g),
            IdealDescriptor::NonGradedPrimitive { pair, cycle, f, .. } => {
                format!("{} + <f(c)> with c = {}, f = {}", pair.display(g), cycle.display(g), f)
            }
        }
    }
}

/// Evaluates `E^0 - H` and the quotient vertex set for downward direction.
pub fn quotient_is_downwards_directed(g: &Graph, pair: &AdmissiblePair) -> bool {
    let q = quotient_graph(g, pair);
    matches!(q.graph.is_downwards_directed(&q.graph.all_vertices()), Ok(Verdict::Holds))
}
