//! Graph documents: a line-oriented text form and an equivalent JSON form.
//!
//! ```text
//! # comments run to the end of the line
//! vertex u v w
//! edge e u v
//! edge c v v
//! bundle b u w
//! cycle C c
//! path P e c
//! pair I {w} {u}
//! ```

use std::collections::BTreeMap;
use std::fmt;

use lpa_core::{AdmissiblePair, Cycle, EdgeRef, Graph, Path};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Graph,
    pub cycles: BTreeMap<String, Cycle>,
    pub paths: BTreeMap<String, Path>,
    pub pairs: BTreeMap<String, AdmissiblePair>,
}

impl GraphFile {
    pub fn plain(graph: Graph) -> Self {
        GraphFile { graph, cycles: BTreeMap::new(), paths: BTreeMap::new(), pairs: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairDoc {
    #[serde(default)]
    pub h: Vec<String>,
    #[serde(default)]
    pub s: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<ArrowDoc>,
    #[serde(default)]
    pub bundles: Vec<ArrowDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cycles: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub paths: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pairs: BTreeMap<String, PairDoc>,
}

/// A token with its 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// `{a,b}` or `{a b}` or `{}`, possibly spread over several tokens.
fn braced_sets(toks: &[(usize, &str)], line: usize) -> Result<Vec<Vec<String>>, ParseError> {
    let text: String = toks.iter().map(|(_, t)| *t).collect::<Vec<_>>().join(" ");
    let column = toks.first().map_or(1, |t| t.0);
    let mut sets = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('{')
            .and_then(|r| r.split_once('}'))
            .ok_or_else(|| err(line, column, "expected a set like {a,b}"))?;
        sets.push(
            inner
                .0
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
        );
        rest = inner.1.trim_start();
    }
    Ok(sets)
}

/// A `cycle`, `path` or `pair` line: position, keyword, name, arguments.
type Deferred<'a> = (usize, usize, &'a str, String, Vec<(usize, &'a str)>);

pub fn parse_text(src: &str) -> Result<GraphFile, ParseError> {
    let mut b = Graph::builder();
    let mut seen_vertex = false;
    // named objects need the finished graph, so they wait for the end
    let mut deferred: Vec<Deferred> = Vec::new();
    let mut names: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else { continue };
        let args = &toks[1..];
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(line, col, format!("`{keyword}` takes {n} arguments, found {}", args.len())))
            }
        };
        let core = |(c, _): (usize, &str), e: lpa_core::Error| err(line, c, e.to_string());
        match keyword {
            "vertex" => {
                if args.is_empty() {
                    return Err(err(line, col, "`vertex` needs at least one name"));
                }
                for &(c, name) in args {
                    b.vertex(name).map_err(|e| core((c, name), e))?;
                    seen_vertex = true;
                }
            }
            "edge" | "bundle" => {
                arity(3)?;
                let (id, src_v, tgt_v) = (args[0], args[1], args[2]);
                let res = if keyword == "edge" {
                    b.edge(id.1, src_v.1, tgt_v.1).map(|_| ())
                } else {
                    b.bundle(id.1, src_v.1, tgt_v.1).map(|_| ())
                };
                res.map_err(|e| match e {
                    lpa_core::Error::UnknownVertex(ref v) if v == src_v.1 => core(src_v, e),
                    lpa_core::Error::UnknownVertex(_) => core(tgt_v, e),
                    other => core(id, other),
                })?;
            }
            "cycle" | "path" | "pair" => {
                let Some(&(c, name)) = args.first() else {
                    return Err(err(line, col, format!("`{keyword}` needs a name")));
                };
                if let Some((l, k)) = names.insert(name.to_string(), (line, c)) {
                    return Err(err(line, c, format!("duplicate id `{name}` (first defined at {l}:{k})")));
                }
                deferred.push((line, c, keyword, name.to_string(), args[1..].to_vec()));
            }
            other => return Err(err(line, col, format!("unknown keyword `{other}`"))),
        }
    }
    if !seen_vertex {
        return Err(err(1, 1, "graph has no vertices"));
    }
    let mut file = GraphFile::plain(b.build());
    let g = &file.graph;
    for (line, c, keyword, name, args) in deferred {
        if g.vertex_by_name(&name).is_ok() || g.edge_ref_by_name(&name).is_ok() {
            return Err(err(line, c, format!("duplicate id `{name}`")));
        }
        let at = |(col, _): &(usize, &str), e: lpa_core::Error| err(line, *col, e.to_string());
        match keyword {
            "cycle" | "path" => {
                if args.is_empty() {
                    return Err(err(line, c, format!("`{keyword}` needs at least one edge")));
                }
                let mut steps = Vec::new();
                for tok in &args {
                    steps.push(g.edge_ref_by_name(tok.1).map_err(|e| at(tok, e))?);
                }
                let path = Path::new(g, g.source(steps[0]), steps).map_err(|e| at(&args[0], e))?;
                if keyword == "cycle" {
                    let cycle = Cycle::new(g, path).map_err(|e| at(&args[0], e))?;
                    file.cycles.insert(name, cycle);
                } else {
                    file.paths.insert(name, path);
                }
            }
            _ => {
                let sets = braced_sets(&args, line)?;
                let [h, s] = sets.as_slice() else {
                    return Err(err(line, c, "`pair` takes two sets: {H} {S}"));
                };
                let pair = pair_from_names(g, h, s).map_err(|e| err(line, c, e.to_string()))?;
                file.pairs.insert(name, pair);
            }
        }
    }
    Ok(file)
}

pub fn pair_from_names(g: &Graph, h: &[String], s: &[String]) -> lpa_core::Result<AdmissiblePair> {
    let h: Vec<&str> = h.iter().map(String::as_str).collect();
    let s: Vec<&str> = s.iter().map(String::as_str).collect();
    AdmissiblePair::by_names(g, &h, &s)
}

fn names_of(g: &Graph, p: &Path) -> Vec<String> {
    p.steps().iter().map(|&e| g.edge_ref_name(e)).collect()
}

pub fn to_doc(file: &GraphFile) -> GraphDoc {
    let g = &file.graph;
    let arrow = |e: EdgeRef, id: String| ArrowDoc {
        id,
        src: g.vertex_name(g.source(e)).into(),
        tgt: g.vertex_name(g.range(e)).into(),
    };
    let set = |s: &lpa_core::VertexSet| s.iter().map(|&v| g.vertex_name(v).to_string()).collect();
    GraphDoc {
        vertices: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
        edges: g.edges().map(|e| arrow(EdgeRef::Edge(e), g.edge_name(e).into())).collect(),
        bundles: g.bundles().map(|b| arrow(EdgeRef::Bundle(b, 0), g.bundle_name(b).into())).collect(),
        cycles: file.cycles.iter().map(|(k, c)| (k.clone(), names_of(g, c.path()))).collect(),
        paths: file.paths.iter().map(|(k, p)| (k.clone(), names_of(g, p))).collect(),
        pairs: file.pairs.iter().map(|(k, p)| (k.clone(), PairDoc { h: set(p.h()), s: set(p.s()) })).collect(),
    }
}

/// Builds a graph from the structured form; errors name the offending entry.
pub fn from_doc(doc: &GraphDoc) -> Result<GraphFile, ParseError> {
    let fail = |what: String, e: lpa_core::Error| err(1, 1, format!("{what}: {e}"));
    if doc.vertices.is_empty() {
        return Err(err(1, 1, "graph has no vertices"));
    }
    let mut b = Graph::builder();
    for (i, v) in doc.vertices.iter().enumerate() {
        b.vertex(v).map_err(|e| fail(format!("vertices[{i}]"), e))?;
    }
    for (i, a) in doc.edges.iter().enumerate() {
        b.edge(&a.id, &a.src, &a.tgt).map_err(|e| fail(format!("edges[{i}]"), e))?;
    }
    for (i, a) in doc.bundles.iter().enumerate() {
        b.bundle(&a.id, &a.src, &a.tgt).map_err(|e| fail(format!("bundles[{i}]"), e))?;
    }
    let mut file = GraphFile::plain(b.build());
    let g = &file.graph;
    let mut taken = std::collections::BTreeSet::new();
    let names = doc.cycles.keys().map(|k| ("cycles", k)).chain(doc.paths.keys().map(|k| ("paths", k))).chain(doc.pairs.keys().map(|k| ("pairs", k)));
    for (kind, k) in names {
        if !taken.insert(k) || g.vertex_by_name(k).is_ok() || g.edge_ref_by_name(k).is_ok() {
            return Err(err(1, 1, format!("{kind}.{k}: duplicate id `{k}`")));
        }
    }
    let path = |what: String, edges: &[String]| -> Result<Path, ParseError> {
        let steps = edges
            .iter()
            .map(|e| g.edge_ref_by_name(e))
            .collect::<lpa_core::Result<Vec<_>>>()
            .map_err(|e| fail(what.clone(), e))?;
        let first = *steps.first().ok_or_else(|| err(1, 1, format!("{what}: needs at least one edge")))?;
        Path::new(g, g.source(first), steps).map_err(|e| fail(what, e))
    };
    for (k, edges) in &doc.cycles {
        let p = path(format!("cycles.{k}"), edges)?;
        let c = Cycle::new(g, p).map_err(|e| fail(format!("cycles.{k}"), e))?;
        file.cycles.insert(k.clone(), c);
    }
    for (k, edges) in &doc.paths {
        let p = path(format!("paths.{k}"), edges)?;
        file.paths.insert(k.clone(), p);
    }
    for (k, p) in &doc.pairs {
        let pair = pair_from_names(g, &p.h, &p.s).map_err(|e| fail(format!("pairs.{k}"), e))?;
        file.pairs.insert(k.clone(), pair);
    }
    Ok(file)
}

fn emit_doc_text(doc: &GraphDoc) -> String {
    let mut out = String::new();
    if !doc.vertices.is_empty() {
        out.push_str(&format!("vertex {}\n", doc.vertices.join(" ")));
    }
    for e in &doc.edges {
        out.push_str(&format!("edge {} {} {}\n", e.id, e.src, e.tgt));
    }
    for e in &doc.bundles {
        out.push_str(&format!("bundle {} {} {}\n", e.id, e.src, e.tgt));
    }
    for (k, c) in &doc.cycles {
        out.push_str(&format!("cycle {k} {}\n", c.join(" ")));
    }
    for (k, p) in &doc.paths {
        out.push_str(&format!("path {k} {}\n", p.join(" ")));
    }
    for (k, p) in &doc.pairs {
        out.push_str(&format!("pair {k} {{{}}} {{{}}}\n", p.h.join(","), p.s.join(",")));
    }
    out
}

pub fn emit_text(file: &GraphFile) -> String {
    emit_doc_text(&to_doc(file))
}

pub fn parse_json(src: &str) -> Result<GraphFile, ParseError> {
    let doc: GraphDoc =
        serde_json::from_str(src).map_err(|e| err(e.line(), e.column(), e.to_string()))?;
    from_doc(&doc)
}

/// JSON when the document starts with `{`, text otherwise.
pub fn parse_any(src: &str) -> Result<GraphFile, ParseError> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lpa_core::catalog;

    const G3: &str = "\
# entry edge, loop, bundle into a sink
vertex u v w
edge e u v
edge c v v
bundle b u w
cycle C c
path P e c
pair I {w} {u}
";

    #[test]
    fn parses_named_objects() {
        let f = parse_text(G3).unwrap();
        assert_eq!(f.graph, catalog::g3());
        assert_eq!(f.cycles["C"].len(), 1);
        assert_eq!(f.paths["P"].len(), 2);
        assert_eq!(f.pairs["I"].display(&f.graph), "I({w}, {u})");
    }

    #[test]
    fn round_trips_catalog() {
        for (_, g) in catalog::graphs() {
            let f = GraphFile::plain(g.clone());
            assert_eq!(parse_text(&emit_text(&f)).unwrap().graph, g);
            let json = serde_json::to_string(&to_doc(&f)).unwrap();
            assert_eq!(parse_json(&json).unwrap().graph, g);
        }
        let f = parse_text(G3).unwrap();
        let again = parse_text(&emit_text(&f)).unwrap();
        assert_eq!(emit_text(&again), emit_text(&f));
    }

    #[test]
    fn diagnostics_point_at_the_token() {
        let e = parse_text("vertex v\nvertex w v\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        let e = parse_text("vertex v\nedge e v  x\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        let e = parse_text("vertex v\nedge e v v\nedge e v v\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 6));
        let e = parse_text("# nothing\n").unwrap_err();
        assert!(e.message.contains("no vertices"));
        let e = parse_text("vertex v\nloop e v\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert!(parse_text("vertex v w\nedge e v w\ncycle C e\n").is_err());
        assert!(parse_text("vertex v\npair I {v} {v}\n").is_err());
    }

    #[test]
    fn json_errors_carry_positions() {
        let e = parse_json("{\"vertices\": [\"v\"],\n \"edges\": 3}").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_any("{\"vertices\": []}").is_err());
        let e = parse_json(r#"{"vertices": ["v"], "edges": [{"id": "e", "src": "v", "tgt": "x"}]}"#).unwrap_err();
        assert!(e.message.starts_with("edges[0]"), "{}", e.message);
    }
}
