//! Algebra expressions, basis elements and module descriptors on the command line.
//!
//! Expressions: `2 e e* - 1/2 (u - e e*) c`. Juxtaposition multiplies, a
//! postfix `*` stars, names are vertices, edges or bundle members `b[3]`.

use lpa_core::chen::{AlphaSpec, IrrationalRule};
use lpa_core::{Algebra, Cycle, Element, Graph, ModuleDescriptor, Monomial, Path, RationalTailSpec, Scalar};

use crate::graphfile::GraphFile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Number(i64, i64),
    Plus,
    Minus,
    Star,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let fail = |i: usize, m: String| ExprError { column: i + 1, message: m };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let mut den = 1;
            if i < chars.len() && chars[i] == '/' {
                let d0 = i + 1;
                i = d0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let d: String = chars[d0..i].iter().collect();
                den = d.parse().map_err(|_| fail(d0, "expected a denominator".into()))?;
                if den == 0 {
                    return Err(fail(d0, "zero denominator".into()));
                }
            }
            let n = num.parse().map_err(|_| fail(start, "number too large".into()))?;
            out.push((start, Tok::Number(n, den)));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '\'' | '.')) {
                i += 1;
            }
            if i < chars.len() && chars[i] == '[' {
                while i < chars.len() && chars[i] != ']' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(fail(start, "unclosed `[`".into()));
                }
                i += 1;
            }
            out.push((start, Tok::Name(chars[start..i].iter().collect())));
        } else {
            return Err(fail(start, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, 'g> {
    alg: &'a Algebra<'g>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len + 1, |(c, _)| c + 1)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { column: self.column(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Element, ExprError> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = self.alg.neg(&acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = self.alg.add(&acc, &self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = self.alg.sub(&acc, &self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Element, ExprError> {
        let mut factors = Vec::new();
        while matches!(self.peek(), Some(Tok::Name(_) | Tok::Number(..) | Tok::Open)) {
            factors.push(self.factor()?);
        }
        if factors.is_empty() {
            return self.fail("expected a term");
        }
        Ok(self.alg.product(&factors).expect("nonempty"))
    }

    fn factor(&mut self) -> Result<Element, ExprError> {
        let col = self.column();
        let (_, tok) = self.toks[self.pos].clone();
        self.pos += 1;
        let base = match tok {
            Tok::Number(n, d) => {
                let k: Scalar = self.alg.field().ratio(n, d).map_err(|e| ExprError { column: col, message: e.to_string() })?;
                // a bare scalar stands for k times the sum of all vertices
                let units: Vec<Element> = self.alg.graph().vertices().map(|v| self.alg.vertex(v)).collect();
                self.alg.scale(&k, &self.alg.sum(&units))
            }
            Tok::Open => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                inner
            }
            Tok::Name(name) => {
                let g = self.alg.graph();
                if let Ok(v) = g.vertex_by_name(&name) {
                    self.alg.vertex(v)
                } else if let Ok(e) = g.edge_ref_by_name(&name) {
                    self.alg.edge(e)
                } else {
                    return Err(ExprError { column: col, message: format!("unknown name `{name}`") });
                }
            }
            _ => unreachable!("guarded by term"),
        };
        let mut out = base;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            out = self.alg.star(&out);
        }
        Ok(out)
    }
}

pub fn parse_element(alg: &Algebra, src: &str) -> Result<Element, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { alg, toks, pos: 0, len: src.chars().count() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("unexpected token");
    }
    Ok(out)
}

/// A single `p q*` written as edges followed by starred edges, or a vertex.
/// No relations are applied, so `e e*` stays a basis label.
pub fn parse_monomial(g: &Graph, src: &str) -> Result<Monomial, ExprError> {
    let toks = lex(src)?;
    let fail = |column: usize, m: String| ExprError { column: column + 1, message: m };
    let mut p = Vec::new();
    let mut q = Vec::new();
    let mut vertex = None;
    let mut i = 0;
    while i < toks.len() {
        let (col, tok) = &toks[i];
        let Tok::Name(name) = tok else {
            return Err(fail(*col, "expected a vertex or edge name".into()));
        };
        let starred = matches!(toks.get(i + 1), Some((_, Tok::Star)));
        i += if starred { 2 } else { 1 };
        if let Ok(v) = g.vertex_by_name(name) {
            if starred || vertex.is_some() || !p.is_empty() || !q.is_empty() || i < toks.len() {
                return Err(fail(*col, "a vertex must stand alone".into()));
            }
            vertex = Some(v);
            continue;
        }
        let e = g.edge_ref_by_name(name).map_err(|e| fail(*col, e.to_string()))?;
        if starred {
            q.push(e);
        } else if !q.is_empty() {
            return Err(fail(*col, "edges must precede starred edges".into()));
        } else {
            p.push(e);
        }
    }
    if let Some(v) = vertex {
        return Ok(Monomial::vertex(v));
    }
    q.reverse();
    let meet = match (p.last(), q.last()) {
        (Some(&e), _) => g.range(e),
        (None, Some(&e)) => g.range(e),
        (None, None) => return Err(fail(0, "empty basis element".into())),
    };
    let path = |steps: Vec<lpa_core::EdgeRef>| -> Result<Path, ExprError> {
        match steps.first() {
            None => Ok(Path::trivial(meet)),
            Some(&e) => Path::new(g, g.source(e), steps).map_err(|e| fail(0, e.to_string())),
        }
    };
    Monomial::new(g, path(p)?, path(q)?).map_err(|e| fail(0, e.to_string()))
}

fn cycle_arg(file: &GraphFile, words: &[&str]) -> Result<Cycle, String> {
    if let [name] = words {
        if let Some(c) = file.cycles.get(*name) {
            return Ok(c.clone());
        }
    }
    file.graph.cycle_of(words).map_err(|e| e.to_string())
}

fn vertex_arg(g: &Graph, name: &str) -> Result<lpa_core::VertexId, String> {
    g.vertex_by_name(name).map_err(|e| e.to_string())
}

/// Module descriptors:
///
/// * `sink w`
/// * `emitter v`
/// * `nc v CYCLE` with `CYCLE` a named cycle or its edges
/// * `rational CYCLE` or `rational PREFIX | CYCLE`
/// * `irrational CYCLE | CYCLE`
/// * `sweep b` for a bundle of loops
pub fn parse_module(file: &GraphFile, src: &str) -> Result<ModuleDescriptor, String> {
    let g = &file.graph;
    let words: Vec<&str> = src.split_whitespace().collect();
    let (&kind, rest) = words.split_first().ok_or("empty module descriptor")?;
    let halves: Vec<Vec<&str>> = rest.split(|w| *w == "|").map(|s| s.to_vec()).collect();
    let d = match (kind, rest) {
        ("sink", [v]) => ModuleDescriptor::SinkN(vertex_arg(g, v)?),
        ("emitter", [v]) => ModuleDescriptor::inf_emitter(g, vertex_arg(g, v)?).map_err(|e| e.to_string())?,
        ("nc", [v, cycle @ ..]) if !cycle.is_empty() => {
            ModuleDescriptor::NcModule { cycle: cycle_arg(file, cycle)?, v: vertex_arg(g, v)? }
        }
        ("rational", _) => {
            let (prefix, cycle) = match halves.as_slice() {
                [c] => (None, cycle_arg(file, c)?),
                [p, c] => (Some(p), cycle_arg(file, c)?),
                _ => return Err("expected `rational CYCLE` or `rational PREFIX | CYCLE`".into()),
            };
            let prefix = match prefix {
                Some(p) if file.paths.contains_key(p.join(" ").as_str()) => file.paths[p.join(" ").as_str()].clone(),
                Some(p) => g.path_of(p).map_err(|e| e.to_string())?,
                None => Path::trivial(cycle.basepoint()),
            };
            let cycle = cycle.rotated_to(g, prefix.range()).ok_or("the prefix does not end on the cycle")?;
            let tail = RationalTailSpec::new(g, prefix, cycle).map_err(|e| e.to_string())?;
            ModuleDescriptor::VAlpha(AlphaSpec::Rational(tail))
        }
        ("irrational", _) => match halves.as_slice() {
            [c, d] => {
                let rule = IrrationalRule::new(g, &cycle_arg(file, c)?, &cycle_arg(file, d)?).map_err(|e| e.to_string())?;
                ModuleDescriptor::VAlpha(AlphaSpec::Irrational(rule))
            }
            _ => return Err("expected `irrational CYCLE | CYCLE`".into()),
        },
        ("sweep", [b]) => ModuleDescriptor::VAlpha(AlphaSpec::Sweep(
            g.bundle_by_name(b).ok_or_else(|| format!("unknown bundle `{b}`"))?,
        )),
        _ => return Err(format!("cannot read module descriptor `{src}`")),
    };
    d.validate(g).map_err(|e| e.to_string())?;
    Ok(d)
}
