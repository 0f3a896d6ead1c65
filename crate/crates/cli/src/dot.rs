//! Graphviz output.

use std::collections::BTreeSet;
use std::fmt::Write;

use lpa_core::{EdgeRef, Graph, VertexId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A digraph; vertices in `primed` are drawn dashed as double circles.
/// A bundle is one bold arrow labelled `b[*]`.
pub fn to_dot(g: &Graph, primed: &BTreeSet<VertexId>) -> String {
    let mut out = String::from("digraph E {\n");
    for v in g.vertices() {
        let name = quote(g.vertex_name(v));
        if primed.contains(&v) {
            writeln!(out, "  {name} [shape=doublecircle, style=dashed];").expect("string write");
        } else {
            writeln!(out, "  {name};").expect("string write");
        }
    }
    for e in g.edges() {
        let r = EdgeRef::Edge(e);
        let (s, t) = (quote(g.vertex_name(g.source(r))), quote(g.vertex_name(g.range(r))));
        writeln!(out, "  {s} -> {t} [label={}];", quote(g.edge_name(e))).expect("string write");
    }
    for b in g.bundles() {
        let r = EdgeRef::Bundle(b, 0);
        let (s, t) = (quote(g.vertex_name(g.source(r))), quote(g.vertex_name(g.range(r))));
        let label = quote(&format!("{}[*]", g.bundle_name(b)));
        writeln!(out, "  {s} -> {t} [label={label}, style=bold];").expect("string write");
    }
    out.push_str("}\n");
    out
}
