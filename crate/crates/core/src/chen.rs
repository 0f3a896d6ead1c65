//! Concrete graded simple modules given by branching systems.
//!
//! * `V_[α]` on infinite paths tail equivalent to `α`;
//! * `N_v` on finite paths ending at a sink or an infinite emitter `v`;
//! * `N_c^v` on reduced pairs `p q*` where `q` walks an exclusive cycle `c`
//!   from `v`.

use std::collections::BTreeMap;

use crate::branching::{
    act, act_monomial, vector_degree, BranchingSystem, ModuleVector, Truncation,
};
use crate::error::{Error, Result};
use crate::graph::{BundleId, Cycle, EdgeRef, Graph, Path, RationalTailSpec, VertexId, VertexSet};
use crate::ideal::{ideal_generators, AdmissiblePair, IdealDescriptor};
use crate::laurent::LaurentPoly;
use crate::scalar::Field;
use crate::term::{Algebra, Element, Monomial};

fn paths_ending_at(g: &Graph, x: VertexId, t: Truncation) -> Vec<Path> {
    g.paths_up_to(t.max_path_length, t.bundle_sample)
        .into_iter()
        .filter(|p| p.range() == x)
        .collect()
}

fn within_sample(p: &Path, t: Truncation) -> bool {
    p.len() <= t.max_path_length && p.max_bundle_index().is_none_or(|i| i < t.bundle_sample)
}

fn bundle_ok(e: EdgeRef, t: Truncation) -> bool {
    match e {
        EdgeRef::Bundle(_, i) => i < t.bundle_sample,
        EdgeRef::Edge(_) => true,
    }
}

/// `p q*` in `N_c^v`: `q` walks the cycle from `v`, `p` ends where `q` does.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedPair {
    pub p: Path,
    pub q: Path,
}

impl ReducedPair {
    pub fn degree(&self) -> i64 {
        self.p.len() as i64 - self.q.len() as i64
    }

    pub fn is_reduced(&self) -> bool {
        match (self.p.last_edge(), self.q.last_edge()) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        Monomial::new(g, self.p.clone(), self.q.clone())
            .map(|m| m.display(g).to_string())
            .unwrap_or_else(|_| "?".into())
    }
}

/// The branching system of `N_c^v`.
#[derive(Debug, Clone)]
pub struct NcSystem<'g> {
    graph: &'g Graph,
    cycle: Cycle,
    v: VertexId,
}

impl<'g> NcSystem<'g> {
    pub fn new(graph: &'g Graph, cycle: &Cycle, v: VertexId) -> Result<Self> {
        graph.check_cycle(cycle)?;
        if !graph.is_exclusive(cycle) {
            return Err(Error::InvalidDescriptor("cycle is not exclusive".into()));
        }
        let cycle = cycle
            .rotated_to(graph, v)
            .ok_or_else(|| Error::InvalidDescriptor("vertex is not on the cycle".into()))?;
        Ok(NcSystem { graph, cycle, v })
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn base(&self) -> VertexId {
        self.v
    }

    /// `q` of length `k` walking the cycle from `v`.
    pub fn walk(&self, k: usize) -> Path {
        self.cycle.walk(self.graph, self.v, k).expect("v on cycle")
    }

    /// The cyclic generator `v` itself.
    pub fn generator(&self) -> ReducedPair {
        ReducedPair { p: Path::trivial(self.v), q: Path::trivial(self.v) }
    }

    fn check_q(&self, q: &Path) -> Result<()> {
        if q.source() != self.v || !self.cycle.contains_path(self.graph, q) {
            return Err(Error::Precondition("q does not walk the cycle from v".into()));
        }
        Ok(())
    }

    /// Cancels common final edges of `p` and `q`.
    pub fn red(&self, p: &Path, q: &Path) -> Result<ReducedPair> {
        self.check_q(q)?;
        if p.range() != q.range() {
            return Err(Error::RangeMismatch {
                p_range: self.graph.vertex_name(p.range()).into(),
                q_range: self.graph.vertex_name(q.range()).into(),
            });
        }
        let (mut p, mut q) = (p.clone(), q.clone());
        while let (Some(a), Some(b)) = (p.last_edge(), q.last_edge()) {
            if a != b {
                break;
            }
            p = p.init(self.graph).expect("nonempty");
            q = q.init(self.graph).expect("nonempty");
        }
        Ok(ReducedPair { p, q })
    }

    /// The pair `(p, q)` of `Y` with `|p|, |q|` inside the window.
    pub fn y_window(&self, t: Truncation) -> Vec<(Path, Path)> {
        let paths = self.graph.paths_up_to(t.max_path_length, t.bundle_sample);
        let mut out = Vec::new();
        for k in 0..=t.max_path_length {
            let q = self.walk(k);
            out.extend(paths.iter().filter(|p| p.range() == q.range()).map(|p| (p.clone(), q.clone())));
        }
        out
    }
}

impl BranchingSystem for NcSystem<'_> {
    type Elem = ReducedPair;

    fn graph(&self) -> &Graph {
        self.graph
    }

    fn basis(&self, t: Truncation) -> Vec<ReducedPair> {
        let mut out = Vec::new();
        for k in 0..=t.max_path_length {
            let q = self.walk(k);
            for p in paths_ending_at(self.graph, q.range(), t) {
                let x = ReducedPair { p, q: q.clone() };
                if x.is_reduced() {
                    out.push(x);
                }
            }
        }
        out
    }

    fn contains_in_window(&self, x: &ReducedPair, t: Truncation) -> bool {
        within_sample(&x.p, t) && x.q.len() <= t.max_path_length
    }

    fn vertex_part(&self, x: &ReducedPair) -> Option<VertexId> {
        Some(x.p.source())
    }

    fn edge_part(&self, x: &ReducedPair) -> Option<EdgeRef> {
        x.p.first_edge().or_else(|| self.cycle.edge_from(self.graph, x.p.source()))
    }

    fn sigma(&self, e: EdgeRef, x: &ReducedPair) -> Option<ReducedPair> {
        if self.graph.range(e) != x.p.source() {
            return None;
        }
        if x.p.is_trivial() && x.q.last_edge() == Some(e) {
            return Some(ReducedPair {
                p: Path::trivial(self.graph.source(e)),
                q: x.q.init(self.graph).expect("nonempty"),
            });
        }
        Some(ReducedPair { p: x.p.prepend(self.graph, e)?, q: x.q.clone() })
    }

    fn sigma_inv(&self, e: EdgeRef, x: &ReducedPair) -> Option<ReducedPair> {
        if self.edge_part(x) != Some(e) {
            return None;
        }
        if x.p.is_trivial() {
            Some(ReducedPair {
                p: Path::trivial(self.graph.range(e)),
                q: x.q.append(self.graph, e)?,
            })
        } else {
            Some(ReducedPair { p: x.p.tail(self.graph)?, q: x.q.clone() })
        }
    }

    fn degree(&self, x: &ReducedPair) -> Option<i64> {
        Some(x.degree())
    }

    fn is_graded(&self) -> bool {
        true
    }

    fn show(&self, x: &ReducedPair) -> String {
        x.display(self.graph)
    }
}

/// The unreduced candidate `{p q* : s(q) = v}` without cancellation, which
/// breaks axiom (4) at `v`.
#[derive(Debug, Clone)]
pub struct NaiveZSystem<'g> {
    graph: &'g Graph,
    v: VertexId,
}

impl<'g> NaiveZSystem<'g> {
    pub fn new(graph: &'g Graph, v: VertexId) -> Result<Self> {
        graph.check_vertex(v)?;
        Ok(NaiveZSystem { graph, v })
    }
}

impl BranchingSystem for NaiveZSystem<'_> {
    type Elem = ReducedPair;

    fn graph(&self) -> &Graph {
        self.graph
    }

    fn basis(&self, t: Truncation) -> Vec<ReducedPair> {
        let paths = self.graph.paths_up_to(t.max_path_length, t.bundle_sample);
        let mut out: Vec<ReducedPair> = paths
            .iter()
            .filter(|q| q.source() == self.v)
            .flat_map(|q| {
                paths
                    .iter()
                    .filter(move |p| p.range() == q.range())
                    .map(move |p| ReducedPair { p: p.clone(), q: q.clone() })
            })
            .collect();
        out.sort_by_key(|x| (x.p.len() + x.q.len(), x.clone()));
        out
    }

    fn contains_in_window(&self, x: &ReducedPair, t: Truncation) -> bool {
        within_sample(&x.p, t) && within_sample(&x.q, t)
    }

    fn vertex_part(&self, x: &ReducedPair) -> Option<VertexId> {
        Some(x.p.source())
    }

    fn edge_part(&self, x: &ReducedPair) -> Option<EdgeRef> {
        x.p.first_edge()
    }

    fn sigma(&self, e: EdgeRef, x: &ReducedPair) -> Option<ReducedPair> {
        Some(ReducedPair { p: x.p.prepend(self.graph, e)?, q: x.q.clone() })
    }

    fn sigma_inv(&self, e: EdgeRef, x: &ReducedPair) -> Option<ReducedPair> {
        (x.p.first_edge() == Some(e)).then(|| ReducedPair { p: x.p.tail(self.graph).expect("nonempty"), q: x.q.clone() })
    }

    fn degree(&self, x: &ReducedPair) -> Option<i64> {
        Some(x.degree())
    }

    fn is_graded(&self) -> bool {
        true
    }

    fn show(&self, x: &ReducedPair) -> String {
        x.display(self.graph)
    }
}

/// Finite paths ending at a fixed sink or infinite emitter.
#[derive(Debug, Clone)]
pub struct PathSystem<'g> {
    graph: &'g Graph,
    target: VertexId,
}

impl<'g> PathSystem<'g> {
    pub fn new(graph: &'g Graph, target: VertexId) -> Result<Self> {
        graph.check_vertex(target)?;
        if graph.is_regular(target) {
            return Err(Error::InvalidDescriptor(format!(
                "{} is regular",
                graph.vertex_name(target)
            )));
        }
        Ok(PathSystem { graph, target })
    }
}

impl BranchingSystem for PathSystem<'_> {
    type Elem = Path;

    fn graph(&self) -> &Graph {
        self.graph
    }

    fn basis(&self, t: Truncation) -> Vec<Path> {
        paths_ending_at(self.graph, self.target, t)
    }

    fn contains_in_window(&self, x: &Path, t: Truncation) -> bool {
        within_sample(x, t)
    }

    fn vertex_part(&self, x: &Path) -> Option<VertexId> {
        Some(x.source())
    }

    fn edge_part(&self, x: &Path) -> Option<EdgeRef> {
        x.first_edge()
    }

    fn sigma(&self, e: EdgeRef, x: &Path) -> Option<Path> {
        x.prepend(self.graph, e)
    }

    fn sigma_inv(&self, e: EdgeRef, x: &Path) -> Option<Path> {
        (x.first_edge() == Some(e)).then(|| x.tail(self.graph).expect("nonempty"))
    }

    fn degree(&self, x: &Path) -> Option<i64> {
        Some(x.len() as i64)
    }

    fn is_graded(&self) -> bool {
        true
    }

    fn show(&self, x: &Path) -> String {
        x.display(self.graph).to_string()
    }
}

/// The aperiodic path `c d c c d d c c c d d d ...` through a shared vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrationalRule {
    c: Cycle,
    d: Cycle,
}

impl IrrationalRule {
    pub fn new(g: &Graph, c: &Cycle, d: &Cycle) -> Result<Self> {
        g.check_cycle(c)?;
        g.check_cycle(d)?;
        if c.same_as(g, d) {
            return Err(Error::InvalidDescriptor("the two cycles coincide".into()));
        }
        let shared = c
            .vertices()
            .intersection(&d.vertices())
            .next()
            .copied()
            .ok_or_else(|| Error::InvalidDescriptor("the cycles share no vertex".into()))?;
        Ok(IrrationalRule {
            c: c.rotated_to(g, shared).expect("shared"),
            d: d.rotated_to(g, shared).expect("shared"),
        })
    }

    pub fn cycles(&self) -> (&Cycle, &Cycle) {
        (&self.c, &self.d)
    }

    pub fn edge_at(&self, i: usize) -> EdgeRef {
        let mut i = i;
        let mut n = 1;
        loop {
            for cyc in [&self.c, &self.d] {
                let block = n * cyc.len();
                if i < block {
                    return cyc.edges()[i % cyc.len()];
                }
                i -= block;
            }
            n += 1;
        }
    }
}

/// How the infinite path of `V_[α]` is described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaSpec {
    Rational(RationalTailSpec),
    Irrational(IrrationalRule),
    /// `b[0] b[1] b[2] ...` along a bundle of loops.
    Sweep(BundleId),
}

impl AlphaSpec {
    pub fn is_rational(&self) -> bool {
        matches!(self, AlphaSpec::Rational(_))
    }

    /// `α^0`.
    pub fn vertices(&self, g: &Graph) -> VertexSet {
        match self {
            AlphaSpec::Rational(s) => s.vertices(g),
            AlphaSpec::Irrational(r) => r.c.vertices().union(&r.d.vertices()).copied().collect(),
            AlphaSpec::Sweep(b) => VertexSet::from([g.source(EdgeRef::Bundle(*b, 0))]),
        }
    }

    /// Edge at position `i` of an irrational path.
    fn edge_at(&self, i: usize) -> EdgeRef {
        match self {
            AlphaSpec::Rational(s) => s.edge_at(i),
            AlphaSpec::Irrational(r) => r.edge_at(i),
            AlphaSpec::Sweep(b) => EdgeRef::Bundle(*b, i as u32),
        }
    }
}

/// A point of `V_[α]`: a rational tail, or a finite head followed by `α`
/// from position `shift` on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlphaElem {
    Tail(RationalTailSpec),
    Shifted { head: Path, shift: usize },
}

#[derive(Debug, Clone)]
pub struct AlphaSystem<'g> {
    graph: &'g Graph,
    spec: AlphaSpec,
}

impl<'g> AlphaSystem<'g> {
    pub fn new(graph: &'g Graph, spec: AlphaSpec) -> Result<Self> {
        if let AlphaSpec::Sweep(b) = spec {
            let e = EdgeRef::Bundle(b, 0);
            if !graph.edge_ref_exists(e) || graph.source(e) != graph.range(e) {
                return Err(Error::InvalidDescriptor("sweep needs a bundle of loops".into()));
            }
        }
        Ok(AlphaSystem { graph, spec })
    }

    /// The point `α` itself.
    pub fn alpha(&self) -> AlphaElem {
        match &self.spec {
            AlphaSpec::Rational(s) => AlphaElem::Tail(s.clone()),
            _ => AlphaElem::Shifted { head: Path::trivial(self.graph.source(self.spec.edge_at(0))), shift: 0 },
        }
    }

    fn canonical(&self, head: Path, shift: usize) -> AlphaElem {
        let (mut head, mut shift) = (head, shift);
        while shift > 0 && head.last_edge() == Some(self.spec.edge_at(shift - 1)) {
            head = head.init(self.graph).expect("nonempty");
            shift -= 1;
        }
        AlphaElem::Shifted { head, shift }
    }

    fn tail(&self, head: Path, cycle: &Cycle) -> AlphaElem {
        AlphaElem::Tail(RationalTailSpec::new(self.graph, head, cycle.clone()).expect("head ends on cycle"))
    }

    /// A point given by a finite head; the head is followed by `α` from its
    /// first position at `r(head)`.
    pub fn from_head(&self, head: Path) -> Result<AlphaElem> {
        match &self.spec {
            AlphaSpec::Rational(s) => RationalTailSpec::new(self.graph, head, s.cycle().clone()).map(AlphaElem::Tail),
            _ => {
                let shift = (0..64)
                    .find(|&m| self.graph.source(self.spec.edge_at(m)) == head.range())
                    .ok_or_else(|| Error::Precondition("head does not meet the path".into()))?;
                Ok(self.canonical(head, shift))
            }
        }
    }
}

impl BranchingSystem for AlphaSystem<'_> {
    type Elem = AlphaElem;

    fn graph(&self) -> &Graph {
        self.graph
    }

    fn basis(&self, t: Truncation) -> Vec<AlphaElem> {
        let mut out = Vec::new();
        match &self.spec {
            AlphaSpec::Rational(s) => {
                let cycle = s.cycle();
                if !cycle.edges().iter().all(|&e| bundle_ok(e, t)) {
                    return out;
                }
                for &x in cycle.vertex_list() {
                    for h in paths_ending_at(self.graph, x, t) {
                        let elem = self.tail(h.clone(), cycle);
                        if matches!(&elem, AlphaElem::Tail(r) if r.prefix().len() == h.len()) {
                            out.push(elem);
                        }
                    }
                }
            }
            _ => {
                for m in 0..=t.max_path_length {
                    let e = self.spec.edge_at(m);
                    if !bundle_ok(e, t) {
                        continue;
                    }
                    for h in paths_ending_at(self.graph, self.graph.source(e), t) {
                        if m > 0 && h.last_edge() == Some(self.spec.edge_at(m - 1)) {
                            continue;
                        }
                        out.push(AlphaElem::Shifted { head: h, shift: m });
                    }
                }
            }
        }
        out
    }

    fn contains_in_window(&self, x: &AlphaElem, t: Truncation) -> bool {
        match x {
            AlphaElem::Tail(s) => within_sample(s.prefix(), t),
            AlphaElem::Shifted { head, shift } => {
                within_sample(head, t) && *shift <= t.max_path_length && bundle_ok(self.spec.edge_at(*shift), t)
            }
        }
    }

    fn vertex_part(&self, x: &AlphaElem) -> Option<VertexId> {
        Some(match x {
            AlphaElem::Tail(s) => s.prefix().source(),
            AlphaElem::Shifted { head, .. } => head.source(),
        })
    }

    fn edge_part(&self, x: &AlphaElem) -> Option<EdgeRef> {
        Some(match x {
            AlphaElem::Tail(s) => s.prefix().first_edge().unwrap_or(s.cycle().edges()[0]),
            AlphaElem::Shifted { head, shift } => head.first_edge().unwrap_or(self.spec.edge_at(*shift)),
        })
    }

    fn sigma(&self, e: EdgeRef, x: &AlphaElem) -> Option<AlphaElem> {
        match x {
            AlphaElem::Tail(s) => Some(self.tail(s.prefix().prepend(self.graph, e)?, s.cycle())),
            AlphaElem::Shifted { head, shift } => Some(self.canonical(head.prepend(self.graph, e)?, *shift)),
        }
    }

    fn sigma_inv(&self, e: EdgeRef, x: &AlphaElem) -> Option<AlphaElem> {
        if self.edge_part(x) != Some(e) {
            return None;
        }
        Some(match x {
            AlphaElem::Tail(s) => match s.prefix().tail(self.graph) {
                Some(rest) => self.tail(rest, s.cycle()),
                None => self.tail(Path::trivial(self.graph.range(e)), s.cycle()),
            },
            AlphaElem::Shifted { head, shift } => match head.tail(self.graph) {
                Some(rest) => AlphaElem::Shifted { head: rest, shift: *shift },
                None => AlphaElem::Shifted { head: Path::trivial(self.graph.range(e)), shift: shift + 1 },
            },
        })
    }

    fn degree(&self, x: &AlphaElem) -> Option<i64> {
        match x {
            AlphaElem::Tail(_) => None,
            AlphaElem::Shifted { head, shift } => Some(head.len() as i64 - *shift as i64),
        }
    }

    fn is_graded(&self) -> bool {
        !self.spec.is_rational()
    }

    fn show(&self, x: &AlphaElem) -> String {
        let g = self.graph;
        match x {
            AlphaElem::Tail(s) if s.prefix().is_trivial() => format!("({})^inf", s.cycle().display(g)),
            AlphaElem::Tail(s) => format!("{} ({})^inf", s.prefix().display(g), s.cycle().display(g)),
            AlphaElem::Shifted { head, shift } if head.is_trivial() => format!("alpha[{shift}..]"),
            AlphaElem::Shifted { head, shift } => format!("{} alpha[{shift}..]", head.display(g)),
        }
    }
}

/// Subtype of `N_v` for an infinite emitter `v`, read from the edges out of
/// `v` that land in `R(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitterSubtype {
    Empty,
    InBreaking,
    Infinite,
}

/// Whether subtypes count edges or range vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmitterReading {
    #[default]
    EdgeSet,
    VertexSet,
}

pub fn emitter_subtype(g: &Graph, v: VertexId, reading: EmitterReading) -> EmitterSubtype {
    let back = g.root_of(v);
    let (finite, infinite) = g.edges_into(v, &back);
    match reading {
        EmitterReading::EdgeSet if infinite => EmitterSubtype::Infinite,
        EmitterReading::EdgeSet if finite.is_empty() => EmitterSubtype::Empty,
        EmitterReading::EdgeSet => EmitterSubtype::InBreaking,
        EmitterReading::VertexSet => {
            let ranges: VertexSet = g.successors(v).intersection(&back).copied().collect();
            if ranges.is_empty() {
                EmitterSubtype::Empty
            } else {
                // a finite graph has finitely many range vertices
                EmitterSubtype::InBreaking
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleDescriptor {
    VAlpha(AlphaSpec),
    SinkN(VertexId),
    InfEmitterN { v: VertexId, subtype: EmitterSubtype },
    NcModule { cycle: Cycle, v: VertexId },
}

impl ModuleDescriptor {
    pub fn inf_emitter(g: &Graph, v: VertexId) -> Result<Self> {
        g.check_vertex(v)?;
        if !g.is_infinite_emitter(v) {
            return Err(Error::InvalidDescriptor(format!("{} is not an infinite emitter", g.vertex_name(v))));
        }
        Ok(ModuleDescriptor::InfEmitterN { v, subtype: emitter_subtype(g, v, EmitterReading::EdgeSet) })
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        match self {
            ModuleDescriptor::SinkN(v) => {
                g.check_vertex(*v)?;
                if !g.is_sink(*v) {
                    return Err(Error::InvalidDescriptor(format!("{} is not a sink", g.vertex_name(*v))));
                }
            }
            ModuleDescriptor::InfEmitterN { v, subtype } => {
                if ModuleDescriptor::inf_emitter(g, *v)? != (ModuleDescriptor::InfEmitterN { v: *v, subtype: *subtype }) {
                    return Err(Error::InvalidDescriptor("emitter subtype does not match the graph".into()));
                }
            }
            ModuleDescriptor::NcModule { cycle, v } => {
                NcSystem::new(g, cycle, *v)?;
            }
            ModuleDescriptor::VAlpha(spec) => {
                AlphaSystem::new(g, spec.clone())?;
            }
        }
        Ok(())
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            ModuleDescriptor::SinkN(v) => format!("N_{}", g.vertex_name(*v)),
            ModuleDescriptor::InfEmitterN { v, subtype } => {
                let tag = match subtype {
                    EmitterSubtype::Empty => "empty",
                    EmitterSubtype::InBreaking => "in B_H",
                    EmitterSubtype::Infinite => "infinite",
                };
                format!("N_{} ({tag})", g.vertex_name(*v))
            }
            ModuleDescriptor::NcModule { cycle, v } => {
                format!("N_c^{} with c = {}", g.vertex_name(*v), cycle.display(g))
            }
            ModuleDescriptor::VAlpha(AlphaSpec::Rational(s)) => {
                if s.prefix().is_trivial() {
                    format!("V_[({})^inf]", s.cycle().display(g))
                } else {
                    format!("V_[{} ({})^inf]", s.prefix().display(g), s.cycle().display(g))
                }
            }
            ModuleDescriptor::VAlpha(AlphaSpec::Irrational(r)) => {
                format!("V_[alpha] with alpha = ({}) ({}) ... c^n d^n ...", r.c.display(g), r.d.display(g))
            }
            ModuleDescriptor::VAlpha(AlphaSpec::Sweep(b)) => {
                format!("V_[alpha] with alpha = {0}[0] {0}[1] {0}[2] ...", g.bundle_name(*b))
            }
        }
    }
}

/// A built module; one element type covers all families.
#[derive(Debug, Clone)]
pub enum ModuleSystem<'g> {
    Nc(NcSystem<'g>),
    Paths(PathSystem<'g>),
    Alpha(AlphaSystem<'g>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleElem {
    Pair(ReducedPair),
    Path(Path),
    Alpha(AlphaElem),
}

pub fn build_module<'g>(g: &'g Graph, d: &ModuleDescriptor) -> Result<ModuleSystem<'g>> {
    d.validate(g)?;
    Ok(match d {
        ModuleDescriptor::SinkN(v) | ModuleDescriptor::InfEmitterN { v, .. } => {
            ModuleSystem::Paths(PathSystem::new(g, *v)?)
        }
        ModuleDescriptor::NcModule { cycle, v } => ModuleSystem::Nc(NcSystem::new(g, cycle, *v)?),
        ModuleDescriptor::VAlpha(spec) => ModuleSystem::Alpha(AlphaSystem::new(g, spec.clone())?),
    })
}

impl ModuleSystem<'_> {
    /// Reads a monomial `p q*` as a basis element of this module.
    pub fn basis_from_monomial(&self, m: &Monomial) -> Result<ModuleElem> {
        match self {
            ModuleSystem::Nc(s) => s.red(m.p(), m.q()).map(ModuleElem::Pair),
            ModuleSystem::Paths(s) => {
                if !m.q().is_trivial() || m.p().range() != s.target {
                    return Err(Error::Precondition("basis elements are paths ending at the target".into()));
                }
                Ok(ModuleElem::Path(m.p().clone()))
            }
            ModuleSystem::Alpha(s) => {
                if !m.q().is_trivial() {
                    return Err(Error::Precondition("basis elements are given by a finite head".into()));
                }
                s.from_head(m.p().clone()).map(ModuleElem::Alpha)
            }
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $s:ident => $body:expr) => {
        match $self {
            ModuleSystem::Nc($s) => $body,
            ModuleSystem::Paths($s) => $body,
            ModuleSystem::Alpha($s) => $body,
        }
    };
}

macro_rules! lift {
    ($self:ident, $x:ident, $s:ident, $y:ident => $body:expr) => {
        match ($self, $x) {
            (ModuleSystem::Nc($s), ModuleElem::Pair($y)) => $body.map(ModuleElem::Pair),
            (ModuleSystem::Paths($s), ModuleElem::Path($y)) => $body.map(ModuleElem::Path),
            (ModuleSystem::Alpha($s), ModuleElem::Alpha($y)) => $body.map(ModuleElem::Alpha),
            _ => None,
        }
    };
}

impl BranchingSystem for ModuleSystem<'_> {
    type Elem = ModuleElem;

    fn graph(&self) -> &Graph {
        dispatch!(self, s => s.graph())
    }

    fn basis(&self, t: Truncation) -> Vec<ModuleElem> {
        match self {
            ModuleSystem::Nc(s) => s.basis(t).into_iter().map(ModuleElem::Pair).collect(),
            ModuleSystem::Paths(s) => s.basis(t).into_iter().map(ModuleElem::Path).collect(),
            ModuleSystem::Alpha(s) => s.basis(t).into_iter().map(ModuleElem::Alpha).collect(),
        }
    }

    fn contains_in_window(&self, x: &ModuleElem, t: Truncation) -> bool {
        match (self, x) {
            (ModuleSystem::Nc(s), ModuleElem::Pair(y)) => s.contains_in_window(y, t),
            (ModuleSystem::Paths(s), ModuleElem::Path(y)) => s.contains_in_window(y, t),
            (ModuleSystem::Alpha(s), ModuleElem::Alpha(y)) => s.contains_in_window(y, t),
            _ => false,
        }
    }

    fn vertex_part(&self, x: &ModuleElem) -> Option<VertexId> {
        match (self, x) {
            (ModuleSystem::Nc(s), ModuleElem::Pair(y)) => s.vertex_part(y),
            (ModuleSystem::Paths(s), ModuleElem::Path(y)) => s.vertex_part(y),
            (ModuleSystem::Alpha(s), ModuleElem::Alpha(y)) => s.vertex_part(y),
            _ => None,
        }
    }

    fn edge_part(&self, x: &ModuleElem) -> Option<EdgeRef> {
        match (self, x) {
            (ModuleSystem::Nc(s), ModuleElem::Pair(y)) => s.edge_part(y),
            (ModuleSystem::Paths(s), ModuleElem::Path(y)) => s.edge_part(y),
            (ModuleSystem::Alpha(s), ModuleElem::Alpha(y)) => s.edge_part(y),
            _ => None,
        }
    }

    fn sigma(&self, e: EdgeRef, x: &ModuleElem) -> Option<ModuleElem> {
        lift!(self, x, s, y => s.sigma(e, y))
    }

    fn sigma_inv(&self, e: EdgeRef, x: &ModuleElem) -> Option<ModuleElem> {
        lift!(self, x, s, y => s.sigma_inv(e, y))
    }

    fn degree(&self, x: &ModuleElem) -> Option<i64> {
        match (self, x) {
            (ModuleSystem::Nc(s), ModuleElem::Pair(y)) => s.degree(y),
            (ModuleSystem::Paths(s), ModuleElem::Path(y)) => s.degree(y),
            (ModuleSystem::Alpha(s), ModuleElem::Alpha(y)) => s.degree(y),
            _ => None,
        }
    }

    fn is_graded(&self) -> bool {
        dispatch!(self, s => s.is_graded())
    }

    fn show(&self, x: &ModuleElem) -> String {
        match (self, x) {
            (ModuleSystem::Nc(s), ModuleElem::Pair(y)) => s.show(y),
            (ModuleSystem::Paths(s), ModuleElem::Path(y)) => s.show(y),
            (ModuleSystem::Alpha(s), ModuleElem::Alpha(y)) => s.show(y),
            _ => "?".into(),
        }
    }
}

fn graded_below(g: &Graph, support: &VertexSet) -> AdmissiblePair {
    let h = g.complement(&g.root(support).expect("valid vertices"));
    let s = g.breaking_vertices(&h).expect("complement of a root");
    AdmissiblePair::new(g, h, s).expect("B_H is admissible")
}

/// The annihilator, computed from the descriptor alone.
pub fn annihilator(g: &Graph, d: &ModuleDescriptor) -> Result<IdealDescriptor> {
    d.validate(g)?;
    Ok(match d {
        ModuleDescriptor::NcModule { cycle, .. } => IdealDescriptor::Graded(graded_below(g, &cycle.vertices())),
        ModuleDescriptor::SinkN(v) => IdealDescriptor::Graded(graded_below(g, &VertexSet::from([*v]))),
        ModuleDescriptor::InfEmitterN { v, subtype } => {
            let full = graded_below(g, &VertexSet::from([*v]));
            match subtype {
                EmitterSubtype::InBreaking => {
                    let mut s = full.s().clone();
                    s.remove(v);
                    IdealDescriptor::Graded(AdmissiblePair::new(g, full.h().clone(), s)?)
                }
                _ => IdealDescriptor::Graded(full),
            }
        }
        ModuleDescriptor::VAlpha(spec) => {
            let pair = graded_below(g, &spec.vertices(g));
            match spec {
                AlphaSpec::Rational(s) if g.is_exclusive(s.cycle()) => {
                    IdealDescriptor::non_graded(g, s.cycle().clone(), LaurentPoly::x_minus_one(Field::Rationals), false)?
                }
                _ => IdealDescriptor::Graded(pair),
            }
        }
    })
}

/// Generators of an ideal as algebra elements; a non-graded descriptor adds `f(c)`.
pub fn annihilator_generators(alg: &Algebra, ideal: &IdealDescriptor) -> Vec<Element> {
    let mut gens = ideal_generators(alg, ideal.pair());
    if let IdealDescriptor::NonGradedPrimitive { cycle, f, .. } = ideal {
        let terms: Vec<Element> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, k)| alg.scale(&(&alg.scalar(1) * k), &alg.cycle_power(cycle, i as i64)))
            .collect();
        gens.push(alg.sum(&terms));
    }
    gens
}

/// One block of the homogeneous decomposition: the elements sharing the
/// off-cycle prefix `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub t: Path,
    pub k: crate::scalar::Scalar,
    pub element: ReducedPair,
}

/// Splits a homogeneous vector by the prefix of `p` that ends at its first
/// vertex on the cycle.
pub fn homogeneous_decompose(sys: &NcSystem, a: &ModuleVector<ReducedPair>) -> Result<Vec<Block>> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if vector_degree(sys, a).is_none() {
        return Err(Error::NotHomogeneous);
    }
    let on_cycle = sys.cycle.vertices();
    let mut blocks: BTreeMap<Path, Block> = BTreeMap::new();
    for (x, k) in a.terms() {
        let touch = x
            .p
            .vertex_sequence(sys.graph)
            .iter()
            .position(|v| on_cycle.contains(v))
            .expect("p ends on the cycle");
        let t = x.p.prefix(sys.graph, touch);
        blocks
            .entry(t.clone())
            .and_modify(|b| b.k = &b.k + k)
            .or_insert(Block { t, k: k.clone(), element: x.clone() });
    }
    Ok(blocks.into_values().collect())
}

/// An algebra element carrying a homogeneous vector to the generator `v`.
#[derive(Debug, Clone)]
pub struct Recovery {
    pub block: Block,
    pub element: Element,
}

pub fn recover_generator(
    sys: &NcSystem,
    alg: &Algebra,
    a: &ModuleVector<ReducedPair>,
    t: Truncation,
) -> Result<Recovery> {
    if let Some((x, _)) = a.terms().find(|(x, _)| !sys.contains_in_window(x, t)) {
        return Err(Error::WindowOverflow { element: sys.show(x) });
    }
    let target = ModuleVector::basis(sys.generator());
    for block in homogeneous_decompose(sys, a)? {
        let Some(kinv) = block.k.inverse() else { continue };
        let m = Monomial::new(sys.graph, block.element.q.clone(), block.element.p.clone())?;
        let element = alg.from_monomial(m, kinv);
        if act(sys, &element, a, t)? == target {
            return Ok(Recovery { block, element });
        }
    }
    Err(Error::Precondition("no block carries the vector to the generator".into()))
}

/// `f_vw : N_c^w -> N_c^v`, `p q* -> red(p q* c_vw*)`.
#[derive(Debug, Clone)]
pub struct ShiftIso<'g> {
    pub to: NcSystem<'g>,
    pub from: NcSystem<'g>,
    c_vw: Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftReport {
    pub n: usize,
    pub bijective: bool,
    pub intertwines: bool,
    pub degree_shift: bool,
    pub checked: usize,
    pub failure: Option<String>,
}

impl ShiftReport {
    pub fn pass(&self) -> bool {
        self.bijective && self.intertwines && self.degree_shift
    }
}

pub fn shift_iso<'g>(g: &'g Graph, c: &Cycle, v: VertexId, w: VertexId) -> Result<ShiftIso<'g>> {
    if v == w {
        return Err(Error::Precondition("the two vertices coincide".into()));
    }
    let to = NcSystem::new(g, c, v)?;
    let from = NcSystem::new(g, c, w)?;
    let c_vw = c.segment(g, v, w).expect("both on the cycle");
    Ok(ShiftIso { to, from, c_vw })
}

impl ShiftIso<'_> {
    pub fn n(&self) -> usize {
        self.c_vw.len()
    }

    pub fn forward(&self, x: &ReducedPair) -> ReducedPair {
        let q = self.c_vw.concat(&x.q).expect("q starts at w");
        self.to.red(&x.p, &q).expect("q walks the cycle")
    }

    pub fn backward(&self, y: &ReducedPair) -> ReducedPair {
        let g = self.to.graph;
        match y.q.strip_prefix(&self.c_vw) {
            Some(q) => ReducedPair { p: y.p.clone(), q },
            None => {
                let rest = self.c_vw.suffix(g, y.q.len());
                ReducedPair { p: y.p.concat(&rest).expect("composes"), q: Path::trivial(rest.range()) }
            }
        }
    }

    /// Bijectivity, compatibility with every `sigma_e`, and the degree shift
    /// on the window.
    pub fn verify(&self, t: Truncation) -> ShiftReport {
        let g = self.to.graph;
        let n = self.n();
        let mut report = ShiftReport { n, bijective: true, intertwines: true, degree_shift: true, checked: 0, failure: None };
        let edges = g.edge_refs(t.bundle_sample);
        for x in self.from.basis(t) {
            report.checked += 1;
            let y = self.forward(&x);
            if self.backward(&y) != x || !y.is_reduced() {
                report.bijective = false;
                report.failure.get_or_insert(format!("not invertible at {}", self.from.show(&x)));
            }
            if y.degree() != x.degree() - n as i64 {
                report.degree_shift = false;
                report.failure.get_or_insert(format!("degree not shifted at {}", self.from.show(&x)));
            }
            for &e in &edges {
                let lhs = self.from.sigma(e, &x).map(|z| self.forward(&z));
                let rhs = self.to.sigma(e, &y);
                let lhs_inv = self.from.sigma_inv(e, &x).map(|z| self.forward(&z));
                let rhs_inv = self.to.sigma_inv(e, &y);
                if lhs != rhs || lhs_inv != rhs_inv {
                    report.intertwines = false;
                    report.failure.get_or_insert(format!("sigma mismatch at {}", self.from.show(&x)));
                }
            }
        }
        for y in self.to.basis(t) {
            report.checked += 1;
            let x = self.backward(&y);
            if self.forward(&x) != y || x.q.source() != self.from.v {
                report.bijective = false;
                report.failure.get_or_insert(format!("not surjective at {}", self.to.show(&y)));
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostReport {
    pub pass: bool,
    pub checked: usize,
    pub failure: Option<String>,
}

/// `p* . red(p q*) = q*`, `red(e . red(p q*)) = red(e p q*)`, and `red` is
/// idempotent and degree preserving, for every `p q*` of `Y` in the window.
pub fn ghost_action_check(sys: &NcSystem, t: Truncation) -> GhostReport {
    let g = sys.graph;
    let mut report = GhostReport { pass: true, checked: 0, failure: None };
    let fail = |report: &mut GhostReport, msg: String| {
        report.pass = false;
        report.failure.get_or_insert(msg);
    };
    let edges = g.edge_refs(t.bundle_sample);
    for (p, q) in sys.y_window(t) {
        report.checked += 1;
        let shown = format!("({}, {})", p.display(g), q.display(g));
        let x = sys.red(&p, &q).expect("q on cycle");
        if sys.red(&x.p, &x.q).as_ref() != Ok(&x) || x.degree() != p.len() as i64 - q.len() as i64 {
            fail(&mut report, format!("red not idempotent at {shown}"));
        }
        let ghost = Monomial::new(g, Path::trivial(p.range()), p.clone()).expect("same range");
        let expect = ReducedPair { p: Path::trivial(q.range()), q: q.clone() };
        match act_monomial(sys, &ghost, &x, t) {
            Ok(Some(y)) if y == expect => {}
            other => fail(&mut report, format!("ghost action at {shown} gave {other:?}")),
        }
        for &e in edges.iter().filter(|&&e| g.range(e) == p.source()) {
            let ep = p.prepend(g, e).expect("composes");
            if sys.sigma(e, &x) != sys.red(&ep, &q).ok() {
                fail(&mut report, format!("reduction identity at {} {shown}", g.edge_ref_name(e)));
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Isomorphism {
    Yes { graded: bool },
    No,
    NotDecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinctness {
    pub same_annihilator: bool,
    pub isomorphic: Isomorphism,
}

pub fn distinctness_report(g: &Graph, d1: &ModuleDescriptor, d2: &ModuleDescriptor) -> Result<Distinctness> {
    let same_annihilator = annihilator(g, d1)? == annihilator(g, d2)?;
    use ModuleDescriptor::*;
    let isomorphic = match (d1, d2) {
        (NcModule { cycle: c, v }, NcModule { cycle: d, v: w }) => {
            if c.same_as(g, d) {
                Isomorphism::Yes { graded: v == w }
            } else {
                Isomorphism::No
            }
        }
        (NcModule { .. }, _) | (_, NcModule { .. }) => Isomorphism::No,
        (VAlpha(_), InfEmitterN { .. }) | (InfEmitterN { .. }, VAlpha(_)) if same_annihilator => Isomorphism::No,
        _ => Isomorphism::NotDecided,
    };
    Ok(Distinctness { same_annihilator, isomorphic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::{annihilation_check, check_axioms, degree_histogram, nonzero_witness};
    use crate::catalog;

    fn win(l: usize, n: u32) -> Truncation {
        Truncation::new(l, n).unwrap()
    }

    fn nc<'g>(g: &'g Graph, cycle: &[&str], v: &str) -> NcSystem<'g> {
        NcSystem::new(g, &g.cycle_of(cycle).unwrap(), g.vertex_by_name(v).unwrap()).unwrap()
    }

    fn pair(sys: &NcSystem, p: &[&str], q: &[&str]) -> ReducedPair {
        let g = sys.graph;
        let path = |edges: &[&str], at: VertexId| if edges.is_empty() { Path::trivial(at) } else { g.path_of(edges).unwrap() };
        let q = path(q, sys.v);
        sys.red(&path(p, q.range()), &q).unwrap()
    }

    #[test]
    fn red_cancels_common_tails() {
        let g = catalog::g1();
        let s = nc(&g, &["e"], "v");
        assert_eq!(pair(&s, &["e"], &["e"]), s.generator());
        assert_eq!(pair(&s, &["e", "e"], &["e"]).p.len(), 1);
        let g = catalog::g6();
        let s = nc(&g, &["f", "g"], "v");
        assert_eq!(pair(&s, &["f"], &["f"]), s.generator());
        let x = pair(&s, &["f", "g"], &[]);
        assert_eq!(s.red(&x.p, &x.q).unwrap(), x);
        let off = g.path_of(&["g"]).unwrap();
        assert!(s.red(&off, &off).is_err());
    }

    #[test]
    fn g1_basis_is_one_per_degree() {
        let g = catalog::g1();
        let s = nc(&g, &["e"], "v");
        let h = degree_histogram(&s, win(3, 1)).unwrap();
        assert_eq!(h, (-3..=3).map(|d| (d, 1)).collect());
    }

    #[test]
    fn nc_systems_satisfy_every_axiom() {
        for (g, cycle, v) in [
            (catalog::g1(), vec!["e"], "v"),
            (catalog::g3(), vec!["c"], "v"),
            (catalog::g6(), vec!["f", "g"], "w"),
        ] {
            let s = nc(&g, &cycle, v);
            let r = check_axioms(&s, win(4, 2)).unwrap();
            assert!(r.axioms_1_to_4 && r.perfect && r.saturated && r.graded, "{:?}", r.violations);
        }
    }

    #[test]
    fn naive_system_breaks_axiom_four_at_v() {
        let g = catalog::g1();
        let z = NaiveZSystem::new(&g, g.vertex_by_name("v").unwrap()).unwrap();
        let r = check_axioms(&z, win(3, 1)).unwrap();
        assert!(!r.axioms_1_to_4);
        assert_eq!(r.first("4").unwrap().witness, "v");
    }

    #[test]
    fn emitter_module_is_not_perfect() {
        let g = catalog::g4();
        let d = ModuleDescriptor::inf_emitter(&g, g.vertex_by_name("v").unwrap()).unwrap();
        assert!(matches!(d, ModuleDescriptor::InfEmitterN { subtype: EmitterSubtype::Infinite, .. }));
        let s = build_module(&g, &d).unwrap();
        let r = check_axioms(&s, win(3, 3)).unwrap();
        assert!(r.axioms_1_to_4 && r.saturated && !r.perfect);
        assert_eq!(r.first("perfect").unwrap().witness, "v");
    }

    #[test]
    fn sink_and_alpha_modules() {
        let g = catalog::g2();
        let s = build_module(&g, &ModuleDescriptor::SinkN(g.vertex_by_name("w").unwrap())).unwrap();
        let r = check_axioms(&s, win(3, 2)).unwrap();
        assert!(r.axioms_1_to_4 && r.perfect && r.graded);
        // paths into w: b[i] c^k, so 2 per length >= 1 with sample 2
        let h = degree_histogram(&s, win(3, 2)).unwrap();
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 2), (2, 2), (3, 2)]));

        for (name, g) in [("G5", catalog::g5()), ("G4", catalog::g4()), ("G1", catalog::g1())] {
            for d in catalog::descriptors(name, &g) {
                if let ModuleDescriptor::VAlpha(spec) = &d {
                    let s = build_module(&g, &d).unwrap();
                    let r = check_axioms(&s, win(4, 3)).unwrap();
                    assert!(r.axioms_1_to_4 && r.perfect && r.saturated, "{name}: {:?}", r.violations);
                    assert_eq!(r.graded, !spec.is_rational());
                }
            }
        }
    }

    #[test]
    fn irrational_word_blocks() {
        let g = catalog::g5();
        let rule = IrrationalRule::new(&g, &g.cycle_of(&["d"]).unwrap(), &g.cycle_of(&["e"]).unwrap()).unwrap();
        let word: Vec<String> = (0..12).map(|i| g.edge_ref_name(rule.edge_at(i))).collect();
        assert_eq!(word.join(""), "dedde eddde eed".replace(' ', "")[..12].to_string());
        assert!(IrrationalRule::new(&g, &g.cycle_of(&["d"]).unwrap(), &g.cycle_of(&["d"]).unwrap()).is_err());
    }

    #[test]
    fn actions_match_hand_computation() {
        let g = catalog::g1();
        let alg = Algebra::new(&g, Field::Rationals);
        let s = nc(&g, &["e"], "v");
        let e = g.edge_ref_by_name("e").unwrap();
        let out = act(&s, &alg.ghost(e), &ModuleVector::basis(s.generator()), win(3, 1)).unwrap();
        assert_eq!(out, ModuleVector::basis(pair(&s, &[], &["e"])));

        let g = catalog::g3();
        let alg = Algebra::new(&g, Field::Rationals);
        let s = nc(&g, &["c"], "v");
        let u = alg.vertex(g.vertex_by_name("u").unwrap());
        let e = g.edge_ref_by_name("e").unwrap();
        let ee = alg.multiply(&alg.edge(e), &alg.ghost(e));
        let gen = alg.sub(&u, &ee);
        for x in s.basis(win(4, 2)).into_iter().filter(|x| x.p.first_edge() == Some(e)) {
            assert!(act(&s, &gen, &ModuleVector::basis(x), win(5, 2)).unwrap().is_zero());
        }
    }

    #[test]
    fn annihilator_formulas() {
        let g = catalog::g3();
        let d = &catalog::descriptors("G3", &g)[0];
        assert_eq!(annihilator(&g, d).unwrap(), IdealDescriptor::Graded(AdmissiblePair::by_names(&g, &["w"], &["u"]).unwrap()));
        let g = catalog::g4();
        for d in catalog::descriptors("G4", &g) {
            assert_eq!(annihilator(&g, &d).unwrap(), IdealDescriptor::Graded(AdmissiblePair::zero()));
        }
        let g = catalog::g2();
        let sink = ModuleDescriptor::SinkN(g.vertex_by_name("w").unwrap());
        assert_eq!(annihilator(&g, &sink).unwrap(), IdealDescriptor::Graded(AdmissiblePair::zero()));
        let emitter = ModuleDescriptor::inf_emitter(&g, g.vertex_by_name("v").unwrap()).unwrap();
        assert_eq!(annihilator(&g, &emitter).unwrap(), IdealDescriptor::Graded(AdmissiblePair::by_names(&g, &["w"], &[]).unwrap()));
        let rational = &catalog::descriptors("G2", &g)[3];
        assert!(matches!(annihilator(&g, rational).unwrap(), IdealDescriptor::NonGradedPrimitive { .. }));
    }

    #[test]
    fn catalog_annihilators_kill_and_nothing_more() {
        let t = win(4, 2);
        for (name, g) in catalog::graphs() {
            let alg = Algebra::new(&g, Field::Rationals);
            for d in catalog::descriptors(name, &g) {
                let ideal = annihilator(&g, &d).unwrap();
                let sys = build_module(&g, &d).unwrap();
                let r = annihilation_check(&sys, &annihilator_generators(&alg, &ideal), t);
                assert!(r.pass, "{name} {}: {:?}", d.display(&g), r.counterexample);
                for u in g.complement(ideal.pair().h()) {
                    assert!(nonzero_witness(&sys, &alg.vertex(u), t).is_some(), "{name} {}", d.display(&g));
                }
            }
        }
    }

    #[test]
    fn subtype_tracks_breaking_vertices() {
        for (_, g) in catalog::graphs() {
            for v in g.vertices().filter(|&v| g.is_infinite_emitter(v)) {
                let h = g.complement(&g.root_of(v));
                let in_b = g.breaking_vertices(&h).unwrap().contains(&v);
                assert_eq!(emitter_subtype(&g, v, EmitterReading::EdgeSet) == EmitterSubtype::InBreaking, in_b);
            }
        }
    }

    #[test]
    fn ghost_lemmas_hold() {
        for (g, cycle, v) in [(catalog::g1(), vec!["e"], "v"), (catalog::g3(), vec!["c"], "v"), (catalog::g6(), vec!["f", "g"], "v")] {
            let s = nc(&g, &cycle, v);
            let r = ghost_action_check(&s, win(4, 2));
            assert!(r.pass && r.checked > 0, "{:?}", r.failure);
        }
    }

    #[test]
    fn shift_iso_on_two_cycle() {
        let g = catalog::g6();
        let c = g.cycle_of(&["f", "g"]).unwrap();
        let (v, w) = (g.vertex_by_name("v").unwrap(), g.vertex_by_name("w").unwrap());
        let f = shift_iso(&g, &c, v, w).unwrap();
        let r = f.verify(win(5, 1));
        assert!(r.pass(), "{:?}", r.failure);
        assert_eq!(r.n, 1);
        let g1 = catalog::g1();
        let v = g1.vertex_by_name("v").unwrap();
        assert!(shift_iso(&g1, &g1.cycle_of(&["e"]).unwrap(), v, v).is_err());
    }

    #[test]
    fn recovery_reaches_the_generator() {
        let g = catalog::g3();
        let alg = Algebra::new(&g, Field::Rationals);
        let s = nc(&g, &["c"], "v");
        let t = win(5, 2);
        let k = |n| alg.scalar(n);
        // e c and c c share degree 2
        let a = ModuleVector::from_terms([(pair(&s, &["e", "c"], &[]), k(2)), (pair(&s, &["c", "c"], &[]), k(3))]);
        let blocks = homogeneous_decompose(&s, &a).unwrap();
        assert_eq!(blocks.len(), 2);
        let r = recover_generator(&s, &alg, &a, t).unwrap();
        assert_eq!(act(&s, &r.element, &a, t).unwrap(), ModuleVector::basis(s.generator()));
        let gen = ModuleVector::basis(s.generator());
        assert!(recover_generator(&s, &alg, &gen, t).is_ok());
        assert!(matches!(recover_generator(&s, &alg, &ModuleVector::zero(), t), Err(Error::ZeroElement)));
        let mixed = ModuleVector::from_terms([(s.generator(), k(1)), (pair(&s, &["c"], &[]), k(1))]);
        assert!(matches!(recover_generator(&s, &alg, &mixed, t), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn g1_module_is_not_simple() {
        // every monomial moves each basis element to a basis element, so the
        // coefficient sum of v - e is preserved and v is never reached
        let g = catalog::g1();
        let alg = Algebra::new(&g, Field::Rationals);
        let s = nc(&g, &["e"], "v");
        let a = ModuleVector::from_terms([(s.generator(), alg.scalar(1)), (pair(&s, &["e"], &[]), alg.scalar(-1))]);
        for m in alg.monomials_up_to(3) {
            let b = act(&s, &m, &a, win(8, 1)).unwrap();
            assert!(b.coefficient_sum().is_zero());
        }
    }

    #[test]
    fn distinctness_cases() {
        let g = catalog::g6();
        let d = catalog::descriptors("G6", &g);
        let r = distinctness_report(&g, &d[0], &d[1]).unwrap();
        assert!(r.same_annihilator);
        assert_eq!(r.isomorphic, Isomorphism::Yes { graded: false });
        let g = catalog::g4();
        let d = catalog::descriptors("G4", &g);
        let r = distinctness_report(&g, &d[1], &d[0]).unwrap();
        assert_eq!((r.same_annihilator, r.isomorphic), (true, Isomorphism::No));
        let g = catalog::g2();
        let d = catalog::descriptors("G2", &g);
        assert!(!distinctness_report(&g, &d[0], &d[1]).unwrap().same_annihilator);
    }

    #[test]
    fn invalid_descriptors_rejected() {
        let g = catalog::g5();
        let d = ModuleDescriptor::NcModule { cycle: g.cycle_of(&["d"]).unwrap(), v: g.vertex_by_name("v").unwrap() };
        assert!(matches!(build_module(&g, &d), Err(Error::InvalidDescriptor(_))));
        let g = catalog::g2();
        assert!(ModuleDescriptor::SinkN(g.vertex_by_name("v").unwrap()).validate(&g).is_err());
    }
}
