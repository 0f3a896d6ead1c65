//! Small fixed graphs used across tests and the verification runner.

use crate::chen::{AlphaSpec, IrrationalRule, ModuleDescriptor};
use crate::graph::{Graph, Path, RationalTailSpec};

fn build(vertices: &[&str], edges: &[(&str, &str, &str)], bundles: &[(&str, &str, &str)]) -> Graph {
    let mut b = Graph::builder();
    for v in vertices {
        b.vertex(v).expect("fresh name");
    }
    for (e, s, t) in edges {
        b.edge(e, s, t).expect("known vertices");
    }
    for (e, s, t) in bundles {
        b.bundle(e, s, t).expect("known vertices");
    }
    b.build()
}

/// One vertex `v` with a loop `e`.
pub fn g1() -> Graph {
    build(&["v"], &[("e", "v", "v")], &[])
}

/// Loop `c` at `v`, bundle `b` from `v` to the sink `w`.
pub fn g2() -> Graph {
    build(&["v", "w"], &[("c", "v", "v")], &[("b", "v", "w")])
}

/// `e: u -> v`, loop `c` at `v`, bundle `b` from `u` to the sink `w`.
pub fn g3() -> Graph {
    build(&["u", "v", "w"], &[("e", "u", "v"), ("c", "v", "v")], &[("b", "u", "w")])
}

/// One vertex with a bundle `b` of loops.
pub fn g4() -> Graph {
    build(&["v"], &[], &[("b", "v", "v")])
}

/// Two loops `d`, `e` at `v`.
pub fn g5() -> Graph {
    build(&["v"], &[("d", "v", "v"), ("e", "v", "v")], &[])
}

/// `f: v -> w`, `g: w -> v`.
pub fn g6() -> Graph {
    build(&["v", "w"], &[("f", "v", "w"), ("g", "w", "v")], &[])
}

pub fn two_sinks() -> Graph {
    build(&["a", "b"], &[], &[])
}

pub fn line() -> Graph {
    build(&["a", "b"], &[("e", "a", "b")], &[])
}

pub fn graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("G1", g1()),
        ("G2", g2()),
        ("G3", g3()),
        ("G4", g4()),
        ("G5", g5()),
        ("G6", g6()),
        ("two-sinks", two_sinks()),
        ("line", line()),
    ]
}

fn rational(g: &Graph, prefix: &[&str], start: &str, cycle: &[&str]) -> ModuleDescriptor {
    let c = g.cycle_of(cycle).expect("catalog cycle");
    let p = if prefix.is_empty() {
        Path::trivial(g.vertex_by_name(start).expect("catalog vertex"))
    } else {
        g.path_of(prefix).expect("catalog path")
    };
    let c = c.rotated_to(g, p.range()).expect("prefix ends on the cycle");
    ModuleDescriptor::VAlpha(AlphaSpec::Rational(RationalTailSpec::new(g, p, c).expect("valid tail")))
}

fn nc(g: &Graph, cycle: &[&str], v: &str) -> ModuleDescriptor {
    ModuleDescriptor::NcModule {
        cycle: g.cycle_of(cycle).expect("catalog cycle"),
        v: g.vertex_by_name(v).expect("catalog vertex"),
    }
}

fn vid(g: &Graph, v: &str) -> crate::graph::VertexId {
    g.vertex_by_name(v).expect("catalog vertex")
}

/// Module descriptors that make sense on the named catalog graph.
pub fn descriptors(name: &str, g: &Graph) -> Vec<ModuleDescriptor> {
    let emitter = |v: &str| ModuleDescriptor::inf_emitter(g, vid(g, v)).expect("infinite emitter");
    match name {
        "G1" => vec![nc(g, &["e"], "v"), rational(g, &[], "v", &["e"])],
        "G2" => vec![
            nc(g, &["c"], "v"),
            ModuleDescriptor::SinkN(vid(g, "w")),
            emitter("v"),
            rational(g, &[], "v", &["c"]),
        ],
        "G3" => vec![
            nc(g, &["c"], "v"),
            ModuleDescriptor::SinkN(vid(g, "w")),
            emitter("u"),
            rational(g, &["e"], "u", &["c"]),
        ],
        "G4" => vec![
            emitter("v"),
            ModuleDescriptor::VAlpha(AlphaSpec::Sweep(g.bundle_by_name("b").expect("bundle"))),
        ],
        "G5" => {
            let d = g.cycle_of(&["d"]).expect("loop");
            let e = g.cycle_of(&["e"]).expect("loop");
            vec![
                ModuleDescriptor::VAlpha(AlphaSpec::Irrational(IrrationalRule::new(g, &d, &e).expect("crossing loops"))),
                rational(g, &[], "v", &["d"]),
            ]
        }
        "G6" => vec![nc(g, &["f", "g"], "v"), nc(g, &["f", "g"], "w")],
        "line" => vec![ModuleDescriptor::SinkN(vid(g, "b"))],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_validate() {
        for (name, g) in graphs() {
            for d in descriptors(name, &g) {
                d.validate(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }

    #[test]
    fn vertex_kinds() {
        let g = g3();
        assert!(g.is_infinite_emitter(vid(&g, "u")));
        assert!(g.is_regular(vid(&g, "v")));
        assert!(g.is_sink(vid(&g, "w")));
        assert!(g4().is_infinite_emitter(vid(&g4(), "v")));
    }
}
