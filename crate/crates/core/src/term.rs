//! Exact arithmetic in the Leavitt path algebra `L_K(E)`.
//!
//! Elements are finite combinations of monomials `p q*` kept in a canonical
//! form: (CK1) is applied during multiplication, and (CK2) is oriented as
//! `e_v e_v* -> v - sum_{e != e_v} e e*` for the least edge `e_v` out of
//! each regular vertex `v`. Monomials `p' e_v e_v* q'*` therefore never
//! survive normalisation, and the remaining monomials form a linear basis.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId, EdgeRef, Graph, Path, VertexId};
use crate::scalar::{Field, Scalar};

/// `p q*` with `r(p) = r(q)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    p: Path,
    q: Path,
}

impl Monomial {
    pub fn new(g: &Graph, p: Path, q: Path) -> Result<Self> {
        if p.range() != q.range() {
            return Err(Error::RangeMismatch {
                p_range: g.vertex_name(p.range()).to_string(),
                q_range: g.vertex_name(q.range()).to_string(),
            });
        }
        Ok(Monomial { p, q })
    }

    pub fn vertex(v: VertexId) -> Self {
        Monomial { p: Path::trivial(v), q: Path::trivial(v) }
    }

    pub fn p(&self) -> &Path {
        &self.p
    }

    pub fn q(&self) -> &Path {
        &self.q
    }

    pub fn degree(&self) -> i64 {
        self.p.len() as i64 - self.q.len() as i64
    }

    pub fn star(&self) -> Monomial {
        Monomial { p: self.q.clone(), q: self.p.clone() }
    }

    pub fn is_vertex(&self) -> bool {
        self.p.is_trivial() && self.q.is_trivial()
    }

    /// `(p1 q1*)(p2 q2*)` under (V), (E) and (CK1).
    pub fn times(&self, other: &Monomial) -> Option<Monomial> {
        if let Some(t) = other.p.strip_prefix(&self.q) {
            let p = self.p.concat(&t).expect("ranges agree");
            return Some(Monomial { p, q: other.q.clone() });
        }
        if let Some(t) = self.q.strip_prefix(&other.p) {
            let q = other.q.concat(&t).expect("ranges agree");
            return Some(Monomial { p: self.p.clone(), q });
        }
        None
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, g }
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    g: &'a Graph,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = (&self.m.p, &self.m.q);
        if p.is_trivial() && q.is_trivial() {
            return write!(f, "{}", self.g.vertex_name(p.source()));
        }
        let mut parts: Vec<String> = p.steps().iter().map(|&e| self.g.edge_ref_name(e)).collect();
        parts.extend(q.steps().iter().rev().map(|&e| format!("{}*", self.g.edge_ref_name(e))));
        write!(f, "{}", parts.join(" "))
    }
}

/// A finite combination of normal-form monomials with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// The single term of a one-term element.
    pub fn single_term(&self) -> Option<(&Monomial, &Scalar)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().expect("one term"))
    }

    /// Common degree of all terms; `None` for non-homogeneous elements.
    /// The zero element is homogeneous of every degree and reports `Some(0)`.
    pub fn degree(&self) -> Option<i64> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next().unwrap_or(0);
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_some()
    }

    fn accumulate(&mut self, m: Monomial, k: &Scalar) {
        if k.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *entry += k;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }
}

/// Normal-form arithmetic for one graph over one field.
#[derive(Debug, Clone)]
pub struct Algebra<'g> {
    graph: &'g Graph,
    field: Field,
    designated: Vec<Option<EdgeId>>,
}

impl<'g> Algebra<'g> {
    pub fn new(graph: &'g Graph, field: Field) -> Self {
        let designated = graph
            .vertices()
            .map(|v| if graph.is_regular(v) { graph.out_edges(v).next() } else { None })
            .collect();
        Algebra { graph, field, designated }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.field.integer(n)
    }

    /// The edge `e_v` whose (CK2) relation is used as a rewrite rule.
    pub fn designated_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.designated[v.0 as usize]
    }

    pub fn from_monomial(&self, m: Monomial, k: Scalar) -> Element {
        self.normalize(vec![(m, k)])
    }

    pub fn monomial(&self, p: Path, q: Path) -> Result<Element> {
        let m = Monomial::new(self.graph, p, q)?;
        Ok(self.from_monomial(m, self.scalar(1)))
    }

    pub fn vertex(&self, v: VertexId) -> Element {
        self.from_monomial(Monomial::vertex(v), self.scalar(1))
    }

    pub fn path(&self, p: &Path) -> Element {
        let q = Path::trivial(p.range());
        self.from_monomial(Monomial { p: p.clone(), q }, self.scalar(1))
    }

    pub fn edge(&self, e: EdgeRef) -> Element {
        self.path(&Path::edge(self.graph, e))
    }

    pub fn ghost(&self, e: EdgeRef) -> Element {
        self.star(&self.edge(e))
    }

    /// `c^n` for `n >= 0`, `(c*)^{-n}` for `n < 0`; `c^0` is the basepoint.
    pub fn cycle_power(&self, c: &Cycle, n: i64) -> Element {
        let walk = c
            .walk(self.graph, c.basepoint(), c.len() * n.unsigned_abs() as usize)
            .expect("basepoint on cycle");
        let e = self.path(&walk);
        if n < 0 {
            self.star(&e)
        } else {
            e
        }
    }

    fn reducible(&self, m: &Monomial) -> bool {
        match (m.p.last_edge(), m.q.last_edge()) {
            (Some(EdgeRef::Edge(a)), Some(EdgeRef::Edge(b))) if a == b => {
                let v = self.graph.source(EdgeRef::Edge(a));
                self.designated_edge(v) == Some(a)
            }
            _ => false,
        }
    }

    /// Applies the oriented (CK2) rule until no term is reducible.
    pub fn normalize(&self, terms: Vec<(Monomial, Scalar)>) -> Element {
        let mut out = Element::zero();
        let mut stack = terms;
        while let Some((m, k)) = stack.pop() {
            if k.is_zero() {
                continue;
            }
            if !self.reducible(&m) {
                out.accumulate(m, &k);
                continue;
            }
            let p = m.p.init(self.graph).expect("nonempty");
            let q = m.q.init(self.graph).expect("nonempty");
            let v = p.range();
            let special = m.p.last_edge().expect("nonempty");
            for e in self.graph.out_edges(v).map(EdgeRef::Edge).filter(|&e| e != special) {
                let pe = p.append(self.graph, e).expect("composes");
                let qe = q.append(self.graph, e).expect("composes");
                stack.push((Monomial { p: pe, q: qe }, -&k));
            }
            stack.push((Monomial { p, q }, k));
        }
        out
    }

    pub fn normal_form(&self, a: &Element) -> Element {
        self.normalize(a.terms.iter().map(|(m, k)| (m.clone(), k.clone())).collect())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        for (m, k) in &b.terms {
            out.accumulate(m.clone(), k);
        }
        out
    }

    pub fn scale(&self, k: &Scalar, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in &a.terms {
            out.accumulate(m.clone(), &(k * c));
        }
        out
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.scale(&self.scalar(-1), a)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Element {
        items.into_iter().fold(Element::zero(), |acc, x| self.add(&acc, x))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut terms = Vec::new();
        for (ma, ka) in &a.terms {
            for (mb, kb) in &b.terms {
                if let Some(m) = ma.times(mb) {
                    terms.push((m, ka * kb));
                }
            }
        }
        self.normalize(terms)
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Option<Element> {
        let mut iter = items.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, x| self.multiply(&acc, x)))
    }

    pub fn star(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, k) in &a.terms {
            out.accumulate(m.star(), k);
        }
        out
    }

    /// Components by degree; only nonzero components are listed.
    pub fn homogeneous_components(&self, a: &Element) -> BTreeMap<i64, Element> {
        let mut out: BTreeMap<i64, Element> = BTreeMap::new();
        for (m, k) in &a.terms {
            out.entry(m.degree()).or_default().accumulate(m.clone(), k);
        }
        out
    }

    /// A sum of vertices `u` with `u a = a u = a`.
    pub fn local_unit(&self, a: &Element) -> Element {
        let vertices: std::collections::BTreeSet<VertexId> = a
            .terms
            .keys()
            .flat_map(|m| [m.p.source(), m.q.source()])
            .collect();
        let items: Vec<Element> = vertices.into_iter().map(|v| self.vertex(v)).collect();
        self.sum(&items)
    }

    /// A nonzero homogeneous idempotent in the left ideal generated by `a`,
    /// searching monomials whose paths have length at most `bound`.
    pub fn find_homogeneous_idempotent(&self, a: &Element, bound: usize) -> Result<Option<Element>> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !a.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let monomials = self.monomials_up_to(bound);
        for x in &monomials {
            let xa = self.multiply(x, a);
            if xa.is_zero() {
                continue;
            }
            for y in &monomials {
                let b = self.multiply(&xa, y);
                let Some((m, k)) = b.single_term() else { continue };
                let kinv = k.inverse().expect("nonzero coefficient");
                let candidate = if m.is_vertex() {
                    self.scale(&kinv, &self.multiply(y, &xa))
                } else if self.on_exitless_cycle(m) {
                    let back = self.star(&self.from_monomial(m.clone(), self.scalar(1)));
                    let yx = self.multiply(y, &back);
                    self.scale(&kinv, &self.multiply(&yx, &xa))
                } else {
                    continue;
                };
                if !candidate.is_zero() && self.multiply(&candidate, &candidate) == candidate {
                    return Ok(Some(candidate));
                }
            }
        }
        Ok(None)
    }

    /// `m` is a power of a cycle without exits, or of its ghost.
    fn on_exitless_cycle(&self, m: &Monomial) -> bool {
        let (p, q) = (&m.p, &m.q);
        let v = p.source();
        if q.source() != v || p.range() != v || !(p.is_trivial() || q.is_trivial()) {
            return false;
        }
        let walk = if p.is_trivial() { q } else { p };
        self.graph
            .enumerate_cycles()
            .iter()
            .filter(|c| c.contains_vertex(v) && !self.graph.has_exit(c))
            .any(|c| c.contains_path(self.graph, walk))
    }

    /// All monomials `p q*` with `|p|, |q| <= bound`, shortest first; bundles
    /// contribute two members.
    pub fn monomials_up_to(&self, bound: usize) -> Vec<Element> {
        let paths = self.graph.paths_up_to(bound, 2);
        let mut pairs: Vec<(&Path, &Path)> = paths
            .iter()
            .flat_map(|p| paths.iter().filter(move |q| q.range() == p.range()).map(move |q| (p, q)))
            .collect();
        pairs.sort_by_key(|(p, q)| p.len() + q.len());
        pairs
            .into_iter()
            .map(|(p, q)| Monomial { p: p.clone(), q: q.clone() })
            .filter(|m| !self.reducible(m))
            .map(|m| self.from_monomial(m, self.scalar(1)))
            .collect()
    }

    pub fn display<'a>(&'a self, a: &'a Element) -> ElementDisplay<'a> {
        ElementDisplay { a, g: self.graph }
    }
}

pub struct ElementDisplay<'a> {
    a: &'a Element,
    g: &'a Graph,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, k)) in self.a.terms.iter().enumerate() {
            let (negative, magnitude) = if k.is_negative() { (true, -k) } else { (false, k.clone()) };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if magnitude.is_one() {
                write!(f, "{}", m.display(self.g))?;
            } else {
                write!(f, "{} {}", magnitude, m.display(self.g))?;
            }
        }
        Ok(())
    }
}
