//! Finite directed graphs with symbolic infinite emitters.
//!
//! A graph has finitely many vertices, finitely many ordinary edges, and
//! finitely many *bundles*. A bundle stands for countably many parallel edges
//! `b[0], b[1], ...` between the same two vertices, so a vertex sourcing a
//! bundle is an infinite emitter while the vertex set stays finite.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BundleId(pub u32);

/// One concrete edge: an ordinary edge or a single member of a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeRef {
    Edge(EdgeId),
    Bundle(BundleId, u32),
}

pub type VertexSet = BTreeSet<VertexId>;

/// Outcome of a predicate that explains a negative answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Arrow {
    name: String,
    src: VertexId,
    tgt: VertexId,
}

#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<Arrow>,
    bundles: Vec<Arrow>,
    names: HashMap<String, ()>,
}

impl GraphBuilder {
    fn claim(&mut self, name: &str) -> Result<()> {
        if name.is_empty() {
            return Err(Error::Precondition("empty identifier".into()));
        }
        if self.names.insert(name.to_string(), ()).is_some() {
            return Err(Error::DuplicateId(name.to_string()));
        }
        Ok(())
    }

    fn lookup(&self, name: &str) -> Result<VertexId> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(|i| VertexId(i as u32))
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex(&mut self, name: &str) -> Result<VertexId> {
        self.claim(name)?;
        self.vertices.push(name.to_string());
        Ok(VertexId(self.vertices.len() as u32 - 1))
    }

    pub fn edge(&mut self, name: &str, src: &str, tgt: &str) -> Result<EdgeId> {
        let (src, tgt) = (self.lookup(src)?, self.lookup(tgt)?);
        self.claim(name)?;
        self.edges.push(Arrow { name: name.to_string(), src, tgt });
        Ok(EdgeId(self.edges.len() as u32 - 1))
    }

    pub fn bundle(&mut self, name: &str, src: &str, tgt: &str) -> Result<BundleId> {
        let (src, tgt) = (self.lookup(src)?, self.lookup(tgt)?);
        self.claim(name)?;
        self.bundles.push(Arrow { name: name.to_string(), src, tgt });
        Ok(BundleId(self.bundles.len() as u32 - 1))
    }

    pub fn build(self) -> Graph {
        Graph {
            vertices: self.vertices,
            edges: self.edges,
            bundles: self.bundles,
            reach: OnceLock::new(),
        }
    }
}

/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Arrow>,
    bundles: Vec<Arrow>,
    reach: OnceLock<Vec<Vec<bool>>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges && self.bundles == other.bundles
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn bundle_count(&self) -> usize {
        self.bundles.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn bundles(&self) -> impl Iterator<Item = BundleId> + '_ {
        (0..self.bundles.len() as u32).map(BundleId)
    }

    pub fn all_vertices(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0 as usize].name
    }

    pub fn bundle_name(&self, b: BundleId) -> &str {
        &self.bundles[b.0 as usize].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(|i| VertexId(i as u32))
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(|i| EdgeId(i as u32))
    }

    pub fn bundle_by_name(&self, name: &str) -> Option<BundleId> {
        self.bundles.iter().position(|e| e.name == name).map(|i| BundleId(i as u32))
    }

    /// Resolves `e` or `b[3]`; a bare bundle name means index 0.
    pub fn edge_ref_by_name(&self, name: &str) -> Result<EdgeRef> {
        if let Some(e) = self.edge_by_name(name) {
            return Ok(EdgeRef::Edge(e));
        }
        let (base, index) = match name.split_once('[') {
            Some((base, rest)) => {
                let idx = rest
                    .strip_suffix(']')
                    .and_then(|s| s.parse::<u32>().ok())
                    .ok_or_else(|| Error::UnknownEdge(name.to_string()))?;
                (base, idx)
            }
            None => (name, 0),
        };
        self.bundle_by_name(base)
            .map(|b| EdgeRef::Bundle(b, index))
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn vertex_set(&self, names: &[&str]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex_by_name(n)).collect()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v.0 as usize) < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{}", v.0)))
        }
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<()> {
        set.iter().try_for_each(|&v| self.check_vertex(v))
    }

    pub fn source(&self, e: EdgeRef) -> VertexId {
        match e {
            EdgeRef::Edge(id) => self.edges[id.0 as usize].src,
            EdgeRef::Bundle(id, _) => self.bundles[id.0 as usize].src,
        }
    }

    pub fn range(&self, e: EdgeRef) -> VertexId {
        match e {
            EdgeRef::Edge(id) => self.edges[id.0 as usize].tgt,
            EdgeRef::Bundle(id, _) => self.bundles[id.0 as usize].tgt,
        }
    }

    pub fn edge_ref_name(&self, e: EdgeRef) -> String {
        match e {
            EdgeRef::Edge(id) => self.edge_name(id).to_string(),
            EdgeRef::Bundle(id, i) => format!("{}[{}]", self.bundle_name(id), i),
        }
    }

    pub fn edge_ref_exists(&self, e: EdgeRef) -> bool {
        match e {
            EdgeRef::Edge(id) => (id.0 as usize) < self.edges.len(),
            EdgeRef::Bundle(id, _) => (id.0 as usize) < self.bundles.len(),
        }
    }

    /// Ordinary edges sourced at `v`, in id order.
    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().filter(move |&e| self.edges[e.0 as usize].src == v)
    }

    pub fn out_bundles(&self, v: VertexId) -> impl Iterator<Item = BundleId> + '_ {
        self.bundles().filter(move |&b| self.bundles[b.0 as usize].src == v)
    }

    /// Concrete edges out of `v`, instantiating `sample` members per bundle.
    pub fn out_refs(&self, v: VertexId, sample: u32) -> Vec<EdgeRef> {
        let mut out: Vec<EdgeRef> = self.out_edges(v).map(EdgeRef::Edge).collect();
        for b in self.out_bundles(v) {
            out.extend((0..sample).map(|i| EdgeRef::Bundle(b, i)));
        }
        out
    }

    /// Concrete edges into `v`, instantiating `sample` members per bundle.
    pub fn in_refs(&self, v: VertexId, sample: u32) -> Vec<EdgeRef> {
        let mut out: Vec<EdgeRef> = self
            .edges()
            .filter(|&e| self.edges[e.0 as usize].tgt == v)
            .map(EdgeRef::Edge)
            .collect();
        for b in self.bundles().filter(|&b| self.bundles[b.0 as usize].tgt == v) {
            out.extend((0..sample).map(|i| EdgeRef::Bundle(b, i)));
        }
        out
    }

    /// All concrete edges, `sample` members per bundle.
    pub fn edge_refs(&self, sample: u32) -> Vec<EdgeRef> {
        let mut out: Vec<EdgeRef> = self.edges().map(EdgeRef::Edge).collect();
        for b in self.bundles() {
            out.extend((0..sample).map(|i| EdgeRef::Bundle(b, i)));
        }
        out
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges(v).next().is_none() && self.out_bundles(v).next().is_none()
    }

    pub fn is_infinite_emitter(&self, v: VertexId) -> bool {
        self.out_bundles(v).next().is_some()
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        self.out_edges(v).next().is_some() && !self.is_infinite_emitter(v)
    }

    /// Ranges of everything `v` emits (bundles contribute their target once).
    pub fn successors(&self, v: VertexId) -> VertexSet {
        self.out_edges(v)
            .map(|e| self.edges[e.0 as usize].tgt)
            .chain(self.out_bundles(v).map(|b| self.bundles[b.0 as usize].tgt))
            .collect()
    }

    fn predecessors(&self, v: VertexId) -> VertexSet {
        self.edges
            .iter()
            .chain(self.bundles.iter())
            .filter(|a| a.tgt == v)
            .map(|a| a.src)
            .collect()
    }

    fn reach_matrix(&self) -> &Vec<Vec<bool>> {
        self.reach.get_or_init(|| {
            let n = self.vertex_count();
            let succ: Vec<VertexSet> = self.vertices().map(|v| self.successors(v)).collect();
            (0..n)
                .map(|start| {
                    let mut seen = vec![false; n];
                    seen[start] = true;
                    let mut queue = VecDeque::from([start]);
                    while let Some(u) = queue.pop_front() {
                        for w in &succ[u] {
                            if !seen[w.0 as usize] {
                                seen[w.0 as usize] = true;
                                queue.push_back(w.0 as usize);
                            }
                        }
                    }
                    seen
                })
                .collect()
        })
    }

    /// `u >= v`: there is a (possibly trivial) path from `u` to `v`.
    pub fn reaches(&self, u: VertexId, v: VertexId) -> bool {
        self.reach_matrix()[u.0 as usize][v.0 as usize]
    }

    /// `R(V)`: every vertex from which some vertex of `V` is reachable.
    pub fn root(&self, set: &VertexSet) -> Result<VertexSet> {
        self.check_set(set)?;
        Ok(self.search(set, |g, v| g.predecessors(v), |_| true))
    }

    /// `T(V)`: every vertex reachable from some vertex of `V`.
    pub fn tree(&self, set: &VertexSet) -> Result<VertexSet> {
        self.check_set(set)?;
        Ok(self.search(set, |g, v| g.successors(v), |_| true))
    }

    pub fn root_of(&self, v: VertexId) -> VertexSet {
        self.root(&BTreeSet::from([v])).expect("valid vertex")
    }

    /// Breadth-first closure of `seeds` under `step`, visiting only vertices
    /// accepted by `allowed`.
    fn search(
        &self,
        seeds: &VertexSet,
        step: impl Fn(&Graph, VertexId) -> VertexSet,
        allowed: impl Fn(VertexId) -> bool,
    ) -> VertexSet {
        let mut seen: VertexSet = seeds.iter().copied().filter(|&v| allowed(v)).collect();
        let mut queue: VecDeque<VertexId> = seen.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            for w in step(self, u) {
                if allowed(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Witness on failure: `(u, v)` with `u` in `H`, `v` outside, and an edge `u -> v`.
    pub fn is_hereditary(&self, h: &VertexSet) -> Result<Verdict<(VertexId, VertexId)>> {
        self.check_set(h)?;
        for &u in h {
            if let Some(v) = self.successors(u).into_iter().find(|v| !h.contains(v)) {
                return Ok(Verdict::Fails((u, v)));
            }
        }
        Ok(Verdict::Holds)
    }

    /// Witness on failure: a regular vertex outside `H` whose edges all land in `H`.
    pub fn is_saturated(&self, h: &VertexSet) -> Result<Verdict<VertexId>> {
        self.check_set(h)?;
        Ok(self
            .unsaturated_vertex(h)
            .map_or(Verdict::Holds, Verdict::Fails))
    }

    fn unsaturated_vertex(&self, h: &VertexSet) -> Option<VertexId> {
        self.vertices()
            .find(|&v| !h.contains(&v) && self.is_regular(v) && self.successors(v).is_subset(h))
    }

    pub fn is_hereditary_saturated(&self, h: &VertexSet) -> Result<bool> {
        Ok(self.is_hereditary(h)?.holds() && self.is_saturated(h)?.holds())
    }

    /// Least hereditary saturated superset of `V`.
    pub fn hereditary_saturated_closure(&self, set: &VertexSet) -> Result<VertexSet> {
        let mut h = self.tree(set)?;
        while let Some(v) = self.unsaturated_vertex(&h) {
            h.insert(v);
            h = self.tree(&h)?;
        }
        Ok(h)
    }

    /// Witness on failure: a pair without a common lower bound inside `V`.
    pub fn is_downwards_directed(&self, set: &VertexSet) -> Result<Verdict<(VertexId, VertexId)>> {
        self.check_set(set)?;
        for (i, &u) in set.iter().enumerate() {
            for &v in set.iter().skip(i + 1) {
                if !set.iter().any(|&w| self.reaches(u, w) && self.reaches(v, w)) {
                    return Ok(Verdict::Fails((u, v)));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// Inner countable separation: on a finite graph `V` itself is a witness.
    pub fn icsp_witness(&self, set: &VertexSet) -> Result<VertexSet> {
        self.check_set(set)?;
        Ok(set.clone())
    }

    /// Countable separation: on a finite graph `V` itself is a witness.
    pub fn csp_witness(&self, set: &VertexSet) -> Result<VertexSet> {
        self.icsp_witness(set)
    }

    /// Witness on failure: a cycle inside `V` none of whose exits lands in `V`.
    pub fn has_condition_l(&self, set: &VertexSet) -> Result<Verdict<Cycle>> {
        self.check_set(set)?;
        for c in self.enumerate_cycles() {
            if c.vertices().is_subset(set) && !self.has_exit_into(&c, set) {
                return Ok(Verdict::Fails(c));
            }
        }
        Ok(Verdict::Holds)
    }

    /// Simple cycles in rotation-canonical form, bundles represented by member 0.
    pub fn enumerate_cycles(&self) -> Vec<Cycle> {
        self.enumerate_cycles_sampled(1)
    }

    /// Simple cycles where each bundle contributes `sample` parallel members.
    ///
    /// Backtracking from each start vertex `s` through vertices greater than
    /// `s` only, so each cycle is produced once, based at its least vertex.
    pub fn enumerate_cycles_sampled(&self, sample: u32) -> Vec<Cycle> {
        let mut out = Vec::new();
        for start in self.vertices() {
            let mut on_path = vec![false; self.vertex_count()];
            let mut steps = Vec::new();
            on_path[start.0 as usize] = true;
            self.extend_cycles(start, start, sample, &mut on_path, &mut steps, &mut out);
        }
        out
    }

    fn extend_cycles(
        &self,
        start: VertexId,
        at: VertexId,
        sample: u32,
        on_path: &mut [bool],
        steps: &mut Vec<EdgeRef>,
        out: &mut Vec<Cycle>,
    ) {
        for e in self.out_refs(at, sample) {
            let next = self.range(e);
            steps.push(e);
            if next == start {
                out.push(Cycle {
                    path: Path { start, steps: steps.clone(), end: start },
                    sources: steps.iter().map(|&e| self.source(e)).collect(),
                });
            } else if next > start && !on_path[next.0 as usize] {
                on_path[next.0 as usize] = true;
                self.extend_cycles(start, next, sample, on_path, steps, out);
                on_path[next.0 as usize] = false;
            }
            steps.pop();
        }
    }

    /// Validates that `c` is a cycle of this graph.
    pub fn check_cycle(&self, c: &Cycle) -> Result<()> {
        let p = &c.path;
        self.check_vertex(p.start)?;
        if p.steps.is_empty() || p.start != p.end {
            return Err(Error::NotACycle("not a closed path of positive length".into()));
        }
        self.check_path(p).map_err(|e| Error::NotACycle(e.to_string()))?;
        let sources: BTreeSet<VertexId> = p.steps.iter().map(|&e| self.source(e)).collect();
        if sources.len() != p.steps.len() {
            return Err(Error::NotACycle("repeated edge source".into()));
        }
        Ok(())
    }

    pub fn check_path(&self, p: &Path) -> Result<()> {
        self.check_vertex(p.start)?;
        let mut at = p.start;
        for &e in &p.steps {
            if !self.edge_ref_exists(e) {
                return Err(Error::UnknownEdge(format!("{e:?}")));
            }
            if self.source(e) != at {
                return Err(Error::BrokenPath(format!(
                    "edge {} does not start at {}",
                    self.edge_ref_name(e),
                    self.vertex_name(at)
                )));
            }
            at = self.range(e);
        }
        if at != p.end {
            return Err(Error::BrokenPath("recorded range is wrong".into()));
        }
        Ok(())
    }

    /// Whether some edge out of `c`, other than `c`'s own, satisfies `accept` on its range.
    fn has_exit_where(&self, c: &Cycle, accept: impl Fn(VertexId) -> bool) -> bool {
        c.path.steps.iter().any(|&own| {
            let x = self.source(own);
            let ordinary = self
                .out_edges(x)
                .map(EdgeRef::Edge)
                .filter(|&e| e != own)
                .any(|e| accept(self.range(e)));
            // every bundle has infinitely many members, so at least one differs from `own`
            let bundled = self.out_bundles(x).any(|b| accept(self.range(EdgeRef::Bundle(b, 0))));
            ordinary || bundled
        })
    }

    pub fn has_exit(&self, c: &Cycle) -> bool {
        self.has_exit_where(c, |_| true)
    }

    pub fn has_exit_into(&self, c: &Cycle, set: &VertexSet) -> bool {
        self.has_exit_where(c, |r| set.contains(&r))
    }

    /// No vertex of `c` lies on a cycle distinct from `c`: no exit returns.
    pub fn is_exclusive(&self, c: &Cycle) -> bool {
        let back = self.root(&c.vertices()).expect("cycle vertices are valid");
        !self.has_exit_where(c, |r| back.contains(&r))
    }

    /// `c` has an exit into `V`, and every path leaving `c` inside `V` can
    /// return to `c` inside `V`.
    pub fn is_extreme_in(&self, c: &Cycle, set: &VertexSet) -> bool {
        let cv = c.vertices();
        if !cv.is_subset(set) || !self.has_exit_into(c, set) {
            return false;
        }
        let inside = |v: VertexId| set.contains(&v);
        let forward = self.search(&cv, |g, v| g.successors(v), inside);
        let backward = self.search(&cv, |g, v| g.predecessors(v), inside);
        forward.is_subset(&backward)
    }

    pub fn classify_cycle(&self, c: &Cycle, set: &VertexSet) -> Result<CycleClass> {
        self.check_cycle(c)?;
        self.check_set(set)?;
        if !c.vertices().is_subset(set) {
            return Err(Error::Precondition("cycle vertices are not contained in V".into()));
        }
        let kind = if self.is_exclusive(c) {
            CycleKind::Exclusive
        } else if self.is_extreme_in(c, set) {
            CycleKind::ExtremeIn
        } else {
            CycleKind::Neither
        };
        Ok(CycleClass {
            kind,
            no_exit_in_v: !self.has_exit_into(c, set),
        })
    }

    /// Edges out of `v` landing in `target`: the finite ordinary ones, and
    /// whether a bundle (hence infinitely many) lands there as well.
    pub fn edges_into(&self, v: VertexId, target: &VertexSet) -> (Vec<EdgeId>, bool) {
        let finite = self
            .out_edges(v)
            .filter(|&e| target.contains(&self.range(EdgeRef::Edge(e))))
            .collect();
        let infinite = self
            .out_bundles(v)
            .any(|b| target.contains(&self.range(EdgeRef::Bundle(b, 0))));
        (finite, infinite)
    }

    /// `B_H`: infinite emitters outside `H` emitting a nonempty finite set of
    /// edges into the complement of `H`.
    pub fn breaking_vertices(&self, h: &VertexSet) -> Result<VertexSet> {
        if let Verdict::Fails((u, v)) = self.is_hereditary(h)? {
            return Err(Error::NotHereditarySaturated(format!(
                "{} is in H but {} is not",
                self.vertex_name(u),
                self.vertex_name(v)
            )));
        }
        if let Verdict::Fails(v) = self.is_saturated(h)? {
            return Err(Error::NotHereditarySaturated(format!(
                "regular vertex {} has all ranges in H",
                self.vertex_name(v)
            )));
        }
        let rest = self.complement(h);
        Ok(self
            .vertices()
            .filter(|v| !h.contains(v) && self.is_infinite_emitter(*v))
            .filter(|&v| {
                let (finite, infinite) = self.edges_into(v, &rest);
                !infinite && !finite.is_empty()
            })
            .collect())
    }

    pub fn complement(&self, set: &VertexSet) -> VertexSet {
        self.vertices().filter(|v| !set.contains(v)).collect()
    }

    /// Every path of length at most `max_len`, shortest first, `sample`
    /// members per bundle.
    pub fn paths_up_to(&self, max_len: usize, sample: u32) -> Vec<Path> {
        let mut out: Vec<Path> = self.vertices().map(Path::trivial).collect();
        let mut layer = out.clone();
        for _ in 0..max_len {
            let next: Vec<Path> = layer
                .iter()
                .flat_map(|p| {
                    self.out_refs(p.range(), sample)
                        .into_iter()
                        .map(move |e| p.append(self, e).expect("composes"))
                })
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn path(&self, start: &str, edges: &[&str]) -> Result<Path> {
        let start = self.vertex_by_name(start)?;
        let steps = edges
            .iter()
            .map(|e| self.edge_ref_by_name(e))
            .collect::<Result<Vec<_>>>()?;
        Path::new(self, start, steps)
    }

    /// A path given only by its edges (or a vertex name when `edges` is empty
    /// is impossible, use [`Path::trivial`]).
    pub fn path_of(&self, edges: &[&str]) -> Result<Path> {
        let first = edges
            .first()
            .ok_or_else(|| Error::Precondition("empty edge list".into()))?;
        let e = self.edge_ref_by_name(first)?;
        let start = self.vertex_name(self.source(e)).to_string();
        self.path(&start, edges)
    }

    pub fn cycle_of(&self, edges: &[&str]) -> Result<Cycle> {
        Cycle::new(self, self.path_of(edges)?)
    }

    pub fn set_names(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|&v| self.vertex_name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    Exclusive,
    ExtremeIn,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleClass {
    pub kind: CycleKind,
    pub no_exit_in_v: bool,
}

/// A finite path; a trivial path is a single vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start: VertexId,
    steps: Vec<EdgeRef>,
    end: VertexId,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path { start: v, steps: Vec::new(), end: v }
    }

    pub fn new(g: &Graph, start: VertexId, steps: Vec<EdgeRef>) -> Result<Self> {
        let end = steps.last().map_or(start, |&e| g.range(e));
        let p = Path { start, steps, end };
        g.check_path(&p)?;
        Ok(p)
    }

    pub fn edge(g: &Graph, e: EdgeRef) -> Self {
        Path { start: g.source(e), steps: vec![e], end: g.range(e) }
    }

    pub fn source(&self) -> VertexId {
        self.start
    }

    pub fn range(&self) -> VertexId {
        self.end
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[EdgeRef] {
        &self.steps
    }

    pub fn first_edge(&self) -> Option<EdgeRef> {
        self.steps.first().copied()
    }

    pub fn last_edge(&self) -> Option<EdgeRef> {
        self.steps.last().copied()
    }

    /// `self` followed by `other`; `None` when they do not compose.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        (self.end == other.start).then(|| {
            let mut steps = self.steps.clone();
            steps.extend_from_slice(&other.steps);
            Path { start: self.start, steps, end: other.end }
        })
    }

    /// `e` followed by `self`, unchecked beyond the composition test.
    pub fn prepend(&self, g: &Graph, e: EdgeRef) -> Option<Path> {
        (g.range(e) == self.start).then(|| {
            let mut steps = Vec::with_capacity(self.steps.len() + 1);
            steps.push(e);
            steps.extend_from_slice(&self.steps);
            Path { start: g.source(e), steps, end: self.end }
        })
    }

    pub fn append(&self, g: &Graph, e: EdgeRef) -> Option<Path> {
        (g.source(e) == self.end).then(|| {
            let mut steps = self.steps.clone();
            steps.push(e);
            Path { start: self.start, steps, end: g.range(e) }
        })
    }

    /// Drops the first edge.
    pub fn tail(&self, g: &Graph) -> Option<Path> {
        let (&first, rest) = self.steps.split_first()?;
        Some(Path { start: g.range(first), steps: rest.to_vec(), end: self.end })
    }

    /// Drops the last edge.
    pub fn init(&self, g: &Graph) -> Option<Path> {
        let (&last, rest) = self.steps.split_last()?;
        Some(Path { start: self.start, steps: rest.to_vec(), end: g.source(last) })
    }

    /// If `prefix` is an initial segment of `self`, the remainder.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if prefix.start != self.start || !self.steps.starts_with(&prefix.steps) {
            return None;
        }
        Some(Path {
            start: prefix.end,
            steps: self.steps[prefix.steps.len()..].to_vec(),
            end: self.end,
        })
    }

    /// Initial segment of length `n`.
    pub fn prefix(&self, g: &Graph, n: usize) -> Path {
        let steps = self.steps[..n].to_vec();
        let end = steps.last().map_or(self.start, |&e| g.range(e));
        Path { start: self.start, steps, end }
    }

    /// Segment from position `n` to the end.
    pub fn suffix(&self, g: &Graph, n: usize) -> Path {
        let start = if n == 0 { self.start } else { g.range(self.steps[n - 1]) };
        Path { start, steps: self.steps[n..].to_vec(), end: self.end }
    }

    /// Vertices visited, in order, including both endpoints.
    pub fn vertex_sequence(&self, g: &Graph) -> Vec<VertexId> {
        std::iter::once(self.start).chain(self.steps.iter().map(|&e| g.range(e))).collect()
    }

    pub fn vertices(&self, g: &Graph) -> VertexSet {
        self.vertex_sequence(g).into_iter().collect()
    }

    pub fn max_bundle_index(&self) -> Option<u32> {
        self.steps
            .iter()
            .filter_map(|e| match e {
                EdgeRef::Bundle(_, i) => Some(*i),
                EdgeRef::Edge(_) => None,
            })
            .max()
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph: g }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    graph: &'a Graph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_trivial() {
            return write!(f, "{}", self.graph.vertex_name(self.path.start));
        }
        let names: Vec<String> = self.path.steps.iter().map(|&e| self.graph.edge_ref_name(e)).collect();
        write!(f, "{}", names.join(" "))
    }
}

/// A closed path of positive length whose edges have distinct sources.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    path: Path,
    sources: Vec<VertexId>,
}

impl Cycle {
    /// Validates and stores `path` as given (its start is the basepoint).
    pub fn new(g: &Graph, path: Path) -> Result<Self> {
        let sources = path.steps.iter().map(|&e| g.source(e)).collect();
        let c = Cycle { path, sources };
        g.check_cycle(&c)?;
        Ok(c)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn basepoint(&self) -> VertexId {
        self.path.start
    }

    pub fn len(&self) -> usize {
        self.path.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.path.steps
    }

    /// Vertices on the cycle (the edge sources).
    pub fn vertices(&self) -> VertexSet {
        self.sources.iter().copied().collect()
    }

    /// Vertices in cycle order starting at the basepoint.
    pub fn vertex_list(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.sources.contains(&v)
    }

    /// The edge of the cycle leaving `v`.
    pub fn edge_from(&self, g: &Graph, v: VertexId) -> Option<EdgeRef> {
        self.path.steps.iter().copied().find(|&e| g.source(e) == v)
    }

    /// The edge of the cycle entering `v`.
    pub fn edge_into(&self, g: &Graph, v: VertexId) -> Option<EdgeRef> {
        self.path.steps.iter().copied().find(|&e| g.range(e) == v)
    }

    /// The same cycle based at `v`.
    pub fn rotated_to(&self, g: &Graph, v: VertexId) -> Option<Cycle> {
        let _ = g;
        let k = self.sources.iter().position(|&s| s == v)?;
        let mut steps = self.path.steps[k..].to_vec();
        steps.extend_from_slice(&self.path.steps[..k]);
        let mut sources = self.sources[k..].to_vec();
        sources.extend_from_slice(&self.sources[..k]);
        Some(Cycle { path: Path { start: v, steps, end: v }, sources })
    }

    /// Rotation based at the least vertex.
    pub fn canonical(&self, g: &Graph) -> Cycle {
        let least = *self.sources.iter().min().expect("nonempty cycle");
        self.rotated_to(g, least).expect("vertex on cycle")
    }

    /// Equality up to rotation.
    pub fn same_as(&self, g: &Graph, other: &Cycle) -> bool {
        self.canonical(g) == other.canonical(g)
    }

    /// The walk along the cycle from `from` of length `n` (may wrap around).
    pub fn walk(&self, g: &Graph, from: VertexId, n: usize) -> Option<Path> {
        let rotated = self.rotated_to(g, from)?;
        let k = rotated.len();
        let steps: Vec<EdgeRef> = (0..n).map(|i| rotated.path.steps[i % k]).collect();
        let end = steps.last().map_or(from, |&e| g.range(e));
        Some(Path { start: from, steps, end })
    }

    /// The shortest walk along the cycle from `from` to `to`.
    pub fn segment(&self, g: &Graph, from: VertexId, to: VertexId) -> Option<Path> {
        let rotated = self.rotated_to(g, from)?;
        let n = rotated.path.steps.iter().position(|&e| g.source(e) == to)?;
        self.walk(g, from, n)
    }

    /// `p` runs along the cycle.
    pub fn contains_path(&self, g: &Graph, p: &Path) -> bool {
        match self.walk(g, p.source(), p.len()) {
            Some(w) => w == *p,
            None => false,
        }
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> PathDisplay<'a> {
        self.path.display(g)
    }
}

/// A rational infinite path `prefix · c c c ...`.
///
/// Stored with a minimal prefix: a trailing prefix edge that is the cycle
/// edge entering `r(prefix)` is absorbed into the cycle. The cycle is kept
/// rotated to start at `r(prefix)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalTailSpec {
    prefix: Path,
    cycle: Cycle,
}

impl RationalTailSpec {
    pub fn new(g: &Graph, prefix: Path, cycle: Cycle) -> Result<Self> {
        g.check_path(&prefix)?;
        g.check_cycle(&cycle)?;
        let mut cycle = cycle
            .rotated_to(g, prefix.range())
            .ok_or_else(|| Error::Precondition("prefix does not end on the cycle".into()))?;
        let mut prefix = prefix;
        while let Some(last) = prefix.last_edge() {
            if cycle.edge_into(g, prefix.range()) != Some(last) {
                break;
            }
            prefix = prefix.init(g).expect("nonempty");
            cycle = cycle.rotated_to(g, prefix.range()).expect("on cycle");
        }
        Ok(RationalTailSpec { prefix, cycle })
    }

    pub fn prefix(&self) -> &Path {
        &self.prefix
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    /// `α^0`.
    pub fn vertices(&self, g: &Graph) -> VertexSet {
        let mut out = self.prefix.vertices(g);
        out.extend(self.cycle.vertices());
        out
    }

    /// Edge at position `i` of the infinite path.
    pub fn edge_at(&self, i: usize) -> EdgeRef {
        let n = self.prefix.len();
        if i < n {
            self.prefix.steps[i]
        } else {
            self.cycle.edges()[(i - n) % self.cycle.len()]
        }
    }
}

/// Adjacency summary used by reports.
pub fn degree_table(g: &Graph) -> BTreeMap<VertexId, (usize, usize)> {
    g.vertices()
        .map(|v| (v, (g.out_edges(v).count(), g.out_bundles(v).count())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn build(n: usize, edges: &[(usize, usize)], bundles: &[(usize, usize)]) -> Graph {
        let mut b = Graph::builder();
        for i in 0..n {
            b.vertex(&format!("v{i}")).unwrap();
        }
        for (i, &(s, t)) in edges.iter().enumerate() {
            b.edge(&format!("e{i}"), &format!("v{s}"), &format!("v{t}")).unwrap();
        }
        for (i, &(s, t)) in bundles.iter().enumerate() {
            b.bundle(&format!("b{i}"), &format!("v{s}"), &format!("v{t}")).unwrap();
        }
        b.build()
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=6).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n), 0..=10),
                prop::collection::vec((0..n, 0..n), 0..=2),
            )
                .prop_map(|(n, e, b)| build(n, &e, &b))
        })
    }

    /// Reflexive transitive closure by Warshall's algorithm.
    fn warshall(g: &Graph) -> Vec<Vec<bool>> {
        let n = g.vertex_count();
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for e in g.edge_refs(1) {
            m[g.source(e).0 as usize][g.range(e).0 as usize] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        m
    }

    fn subsets(g: &Graph) -> Vec<VertexSet> {
        let n = g.vertex_count();
        (0u32..1 << n)
            .map(|mask| (0..n as u32).filter(|i| mask >> i & 1 == 1).map(VertexId).collect())
            .collect()
    }

    fn hs_by_definition(g: &Graph, h: &VertexSet) -> bool {
        let hereditary = g
            .edge_refs(1)
            .iter()
            .all(|&e| !h.contains(&g.source(e)) || h.contains(&g.range(e)));
        let saturated = g.vertices().all(|v| {
            h.contains(&v) || !g.is_regular(v) || g.out_refs(v, 1).iter().any(|&e| !h.contains(&g.range(e)))
        });
        hereditary && saturated
    }

    /// Closed walks of length at most `n` with distinct sources, canonically rotated.
    fn brute_cycles(g: &Graph, sample: u32) -> BTreeSet<Vec<EdgeRef>> {
        let refs = g.edge_refs(sample);
        let mut out = BTreeSet::new();
        let mut frontier: Vec<Vec<EdgeRef>> = refs.iter().map(|&e| vec![e]).collect();
        for _ in 0..g.vertex_count() {
            let mut next = Vec::new();
            for w in frontier {
                let first = g.source(w[0]);
                let last = g.range(*w.last().unwrap());
                let srcs: BTreeSet<_> = w.iter().map(|&e| g.source(e)).collect();
                if srcs.len() == w.len() && last == first {
                    let k = (0..w.len()).min_by_key(|&i| g.source(w[i])).unwrap();
                    let mut rot = w[k..].to_vec();
                    rot.extend_from_slice(&w[..k]);
                    out.insert(rot);
                }
                if srcs.len() == w.len() {
                    for &e in &refs {
                        if g.source(e) == last {
                            let mut x = w.clone();
                            x.push(e);
                            next.push(x);
                        }
                    }
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn root_and_tree_of_a_line() {
        let g = build(3, &[(0, 1), (1, 2)], &[]);
        let mid = BTreeSet::from([VertexId(1)]);
        assert_eq!(g.root(&mid).unwrap(), g.vertex_set(&["v0", "v1"]).unwrap());
        assert_eq!(g.tree(&mid).unwrap(), g.vertex_set(&["v1", "v2"]).unwrap());
    }

    #[test]
    fn predicates_report_witnesses() {
        let g = build(3, &[(0, 1), (1, 2)], &[]);
        let h = g.vertex_set(&["v1"]).unwrap();
        assert_eq!(g.is_hereditary(&h).unwrap(), Verdict::Fails((VertexId(1), VertexId(2))));
        let h = g.vertex_set(&["v2"]).unwrap();
        assert_eq!(g.is_saturated(&h).unwrap(), Verdict::Fails(VertexId(1)));
        assert_eq!(g.hereditary_saturated_closure(&h).unwrap(), g.all_vertices());
        let sinks = build(2, &[], &[]);
        assert!(!sinks.is_downwards_directed(&sinks.all_vertices()).unwrap().holds());
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        let g = build(2, &[], &[]);
        assert!(matches!(g.root(&BTreeSet::from([VertexId(7)])), Err(Error::UnknownVertex(_))));
        let mut b = Graph::builder();
        b.vertex("v").unwrap();
        assert!(matches!(b.vertex("v"), Err(Error::DuplicateId(_))));
        assert!(matches!(b.edge("e", "v", "x"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn bundle_edges_resolve_by_index() {
        let g = build(2, &[], &[(0, 1)]);
        assert_eq!(g.edge_ref_by_name("b0[4]").unwrap(), EdgeRef::Bundle(BundleId(0), 4));
        assert!(g.is_infinite_emitter(VertexId(0)));
        assert!(g.is_sink(VertexId(1)));
        assert!(!g.is_regular(VertexId(0)));
    }

    #[test]
    fn loop_with_bundle_exit_to_sink_is_exclusive() {
        // v has a loop c and a bundle to the sink w
        let g = build(2, &[(0, 0)], &[(0, 1)]);
        let c = g.cycle_of(&["e0"]).unwrap();
        assert!(g.is_exclusive(&c));
        assert!(g.has_exit(&c));
        let class = g.classify_cycle(&c, &g.all_vertices()).unwrap();
        assert_eq!(class.kind, CycleKind::Exclusive);
        assert!(!class.no_exit_in_v);
        let only_v = g.vertex_set(&["v0"]).unwrap();
        let class = g.classify_cycle(&c, &only_v).unwrap();
        assert_eq!(class.kind, CycleKind::Exclusive);
        assert!(class.no_exit_in_v);
        assert!(g.has_condition_l(&g.all_vertices()).unwrap().holds());
    }

    #[test]
    fn lone_loop_is_exclusive() {
        let g = build(2, &[(0, 1), (1, 1)], &[]);
        let c = g.cycle_of(&["e1"]).unwrap();
        assert!(g.is_exclusive(&c));
        assert!(!g.has_condition_l(&g.all_vertices()).unwrap().holds());
    }

    #[test]
    fn two_loops_are_extreme() {
        let g = build(2, &[(0, 0), (0, 1), (1, 0)], &[]);
        let c = g.cycle_of(&["e0"]).unwrap();
        let class = g.classify_cycle(&c, &g.all_vertices()).unwrap();
        assert_eq!(class.kind, CycleKind::ExtremeIn);
        assert!(!class.no_exit_in_v);
    }

    #[test]
    fn bundle_loop_is_not_exclusive() {
        let g = build(1, &[], &[(0, 0)]);
        let cycles = g.enumerate_cycles();
        assert_eq!(cycles.len(), 1);
        assert!(!g.is_exclusive(&cycles[0]));
        assert_eq!(g.enumerate_cycles_sampled(3).len(), 3);
    }

    #[test]
    fn breaking_vertices_need_finite_nonzero_edges_out() {
        // u -> v by an edge, u => w by a bundle
        let g = build(3, &[(0, 1)], &[(0, 2)]);
        let h = g.vertex_set(&["v2"]).unwrap();
        assert_eq!(g.breaking_vertices(&h).unwrap(), g.vertex_set(&["v0"]).unwrap());
        let h = g.vertex_set(&["v1"]).unwrap();
        assert!(g.breaking_vertices(&h).unwrap().is_empty());
        let bad = g.vertex_set(&["v0"]).unwrap();
        assert!(matches!(g.breaking_vertices(&bad), Err(Error::NotHereditarySaturated(_))));
    }

    #[test]
    fn rational_tail_absorbs_cycle_edges() {
        let g = build(2, &[(0, 1), (1, 1)], &[]);
        let c = g.cycle_of(&["e1"]).unwrap();
        let long = g.path_of(&["e0", "e1", "e1"]).unwrap();
        let spec = RationalTailSpec::new(&g, long, c.clone()).unwrap();
        assert_eq!(spec.prefix(), &g.path_of(&["e0"]).unwrap());
        assert_eq!(spec.edge_at(3), c.edges()[0]);
    }

    #[test]
    fn cycle_rotation_and_walks() {
        let g = build(3, &[(0, 1), (1, 2), (2, 0)], &[]);
        let c = g.cycle_of(&["e1", "e2", "e0"]).unwrap();
        assert_eq!(c.canonical(&g).basepoint(), VertexId(0));
        assert!(c.same_as(&g, &g.cycle_of(&["e0", "e1", "e2"]).unwrap()));
        let w = c.walk(&g, VertexId(2), 4).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.range(), VertexId(0));
        assert_eq!(c.segment(&g, VertexId(1), VertexId(0)).unwrap().len(), 2);
        assert!(matches!(g.cycle_of(&["e0", "e1"]), Err(Error::NotACycle(_))));
    }

    proptest! {
        #[test]
        fn reachability_matches_warshall(g in arb_graph()) {
            let m = warshall(&g);
            for u in g.vertices() {
                let single = BTreeSet::from([u]);
                let tree = g.tree(&single).unwrap();
                let root = g.root(&single).unwrap();
                for v in g.vertices() {
                    prop_assert_eq!(tree.contains(&v), m[u.0 as usize][v.0 as usize]);
                    prop_assert_eq!(root.contains(&v), m[v.0 as usize][u.0 as usize]);
                }
            }
        }

        #[test]
        fn closure_is_least_hereditary_saturated_superset(g in arb_graph(), seed in any::<u32>()) {
            let all = subsets(&g);
            let x = &all[seed as usize % all.len()];
            let closed = g.hereditary_saturated_closure(x).unwrap();
            let oracle = all
                .iter()
                .filter(|h| x.is_subset(h) && hs_by_definition(&g, h))
                .min_by_key(|h| h.len())
                .unwrap();
            prop_assert_eq!(&closed, oracle);
            prop_assert!(g.is_hereditary_saturated(&closed).unwrap());
            prop_assert_eq!(g.hereditary_saturated_closure(&closed).unwrap(), closed.clone());
            for h in &all {
                prop_assert_eq!(g.is_hereditary_saturated(h).unwrap(), hs_by_definition(&g, h));
            }
        }

        #[test]
        fn cycles_match_brute_force(g in arb_graph(), sample in 1u32..=2) {
            let found: BTreeSet<Vec<EdgeRef>> =
                g.enumerate_cycles_sampled(sample).iter().map(|c| c.edges().to_vec()).collect();
            prop_assert_eq!(found.len(), g.enumerate_cycles_sampled(sample).len());
            prop_assert_eq!(found, brute_cycles(&g, sample));
        }

        #[test]
        fn root_tree_monotone(g in arb_graph(), a in any::<u32>(), b in any::<u32>()) {
            let all = subsets(&g);
            let x = &all[a as usize % all.len()];
            let y: VertexSet = x.union(&all[b as usize % all.len()]).copied().collect();
            prop_assert!(g.root(x).unwrap().is_subset(&g.root(&y).unwrap()));
            prop_assert!(g.tree(x).unwrap().is_subset(&g.tree(&y).unwrap()));
            prop_assert!(x.is_subset(&g.root(x).unwrap()));
        }
    }
}
