//! Bounded checks of every structural property, run per graph.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::branching::{act, annihilation_check, check_axioms, nonzero_witness, BranchingSystem, ModuleVector, Truncation};
use crate::chen::{
    annihilator, annihilator_generators, build_module, ghost_action_check, recover_generator, shift_iso, AlphaSpec,
    IrrationalRule, ModuleDescriptor, NcSystem,
};
use crate::classify::{chen_witness, classify_graded_ideal, ChenWitness, GradedPrimitiveCase};
use crate::graph::{Graph, RationalTailSpec};
use crate::ideal::{contains, enumerate_admissible_pairs, ideal_generators, quotient_graph};
use crate::random::{random_element, random_homogeneous_element, random_homogeneous_vector};
use crate::scalar::Field;
use crate::term::Algebra;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub window: Truncation,
    pub field: Field,
    /// Random samples per randomized suite.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            window: Truncation::new(4, 2).expect("valid"),
            field: Field::Rationals,
            samples: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub graph: String,
    pub suite: &'static str,
    pub pass: bool,
    pub checked: usize,
    pub detail: Option<String>,
}

struct Tally {
    checked: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self, graph: &str, suite: &'static str) -> SuiteResult {
        SuiteResult { graph: graph.into(), suite, pass: self.failure.is_none(), checked: self.checked, detail: self.failure }
    }
}

/// One module of every family the graph supports: sinks, infinite emitters,
/// `N_c^v` for each exclusive cycle and vertex on it, `c^inf` for each cycle,
/// and an aperiodic path for the first pair of crossing cycles.
pub fn auto_descriptors(g: &Graph) -> Vec<ModuleDescriptor> {
    let mut out = Vec::new();
    for v in g.vertices() {
        if g.is_sink(v) {
            out.push(ModuleDescriptor::SinkN(v));
        } else if g.is_infinite_emitter(v) {
            out.push(ModuleDescriptor::inf_emitter(g, v).expect("infinite emitter"));
        }
    }
    let cycles = g.enumerate_cycles();
    for c in &cycles {
        if g.is_exclusive(c) {
            for &v in c.vertex_list() {
                out.push(ModuleDescriptor::NcModule { cycle: c.clone(), v });
            }
        }
        let tail = RationalTailSpec::new(g, crate::graph::Path::trivial(c.basepoint()), c.clone()).expect("on cycle");
        out.push(ModuleDescriptor::VAlpha(AlphaSpec::Rational(tail)));
    }
    let sampled = g.enumerate_cycles_sampled(2);
    'outer: for (i, c) in sampled.iter().enumerate() {
        for d in &sampled[i + 1..] {
            if let Ok(rule) = IrrationalRule::new(g, c, d) {
                out.push(ModuleDescriptor::VAlpha(AlphaSpec::Irrational(rule)));
                break 'outer;
            }
        }
    }
    out
}

fn classification_suite(name: &str, g: &Graph) -> SuiteResult {
    let mut t = Tally::new();
    for pair in enumerate_admissible_pairs(g).into_iter().filter(|p| p.is_proper(g)) {
        let shown = || pair.display(g);
        let c = match classify_graded_ideal(g, &pair) {
            Ok(c) => c,
            Err(e) => {
                t.check(false, || format!("{}: {e}", shown()));
                continue;
            }
        };
        let gp = c.graded_primitive.is_graded_primitive();
        t.check(c.condition_two == gp, || format!("{}: criteria disagree", shown()));
        t.check(!gp || c.graded_prime, || format!("{}: graded primitive but not graded prime", shown()));
        if !gp {
            continue;
        }
        let q = quotient_graph(g, &pair);
        let l = q.graph.has_condition_l(&q.graph.all_vertices()).is_ok_and(|v| v.holds());
        t.check(c.primitive == l, || format!("{}: primitive = {} but Condition (L) = {l}", shown(), c.primitive));
        match chen_witness(g, &pair) {
            Ok(w) => {
                let matches = matches!(
                    (&c.graded_primitive, &w),
                    (GradedPrimitiveCase::Case3b { .. }, ChenWitness::RelativeSink(_))
                        | (GradedPrimitiveCase::Case3c { .. }, ChenWitness::ExtremeCycle(_))
                        | (GradedPrimitiveCase::Case3d { .. }, ChenWitness::ExclusiveCycle(_))
                );
                t.check(matches, || format!("{}: witness type does not match the case", shown()));
            }
            Err(e) => t.check(false, || format!("{}: {e}", shown())),
        }
    }
    t.finish(name, "classification")
}

fn quotient_suite(name: &str, g: &Graph, field: Field) -> SuiteResult {
    let mut t = Tally::new();
    let alg = Algebra::new(g, field);
    for pair in enumerate_admissible_pairs(g) {
        let q = quotient_graph(g, &pair);
        let expected = g.vertex_count() - pair.h().len() + pair.unbroken(g).len();
        t.check(q.graph.vertex_count() == expected, || format!("{}: quotient has {} vertices", pair.display(g), q.graph.vertex_count()));
        for gen in ideal_generators(&alg, &pair) {
            t.check(contains(&alg, &pair, &gen), || format!("{}: generator {} not in the ideal", pair.display(g), alg.display(&gen)));
        }
    }
    t.finish(name, "quotient")
}

fn module_suites(name: &str, g: &Graph, opts: &VerifyOptions) -> Vec<SuiteResult> {
    let alg = Algebra::new(g, opts.field);
    let w = opts.window;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut axioms, mut ann, mut action) = (Tally::new(), Tally::new(), Tally::new());
    for d in auto_descriptors(g) {
        let shown = d.display(g);
        let Ok(sys) = build_module(g, &d) else {
            axioms.check(false, || format!("{shown}: does not build"));
            continue;
        };
        match check_axioms(&sys, w) {
            Ok(r) => {
                let emitter = matches!(d, ModuleDescriptor::InfEmitterN { .. });
                let ok = r.axioms_1_to_4 && r.saturated && r.perfect != emitter && r.graded == sys.is_graded();
                axioms.check(ok, || format!("{shown}: {:?}", r.violations.first()));
            }
            Err(e) => axioms.check(false, || format!("{shown}: {e}")),
        }
        let ideal = annihilator(g, &d).expect("valid descriptor");
        let r = annihilation_check(&sys, &annihilator_generators(&alg, &ideal), w);
        ann.check(r.pass, || format!("{shown}: {:?}", r.counterexample));
        for u in g.complement(ideal.pair().h()) {
            ann.check(nonzero_witness(&sys, &alg.vertex(u), w).is_some(), || {
                format!("{shown}: {} acts as zero on the window", g.vertex_name(u))
            });
        }
        for _ in 0..opts.samples / 5 {
            let (a, b) = (random_element(&alg, &mut rng, 2, 2), random_element(&alg, &mut rng, 2, 2));
            let ab = alg.multiply(&a, &b);
            for x in sys.basis(Truncation::new(2, w.bundle_sample).expect("valid")) {
                let m = ModuleVector::basis(x);
                let lhs = act(&sys, &ab, &m, w);
                let rhs = act(&sys, &b, &m, w).and_then(|y| act(&sys, &a, &y, w));
                if let (Ok(l), Ok(r)) = (lhs, rhs) {
                    action.check(l == r, || format!("{shown}: (ab)x != a(bx) for a = {}, b = {}", alg.display(&a), alg.display(&b)));
                }
            }
        }
    }
    let mut out = vec![axioms.finish(name, "axioms"), ann.finish(name, "annihilators"), action.finish(name, "action")];

    let (mut ghost, mut simple, mut shift) = (Tally::new(), Tally::new(), Tally::new());
    for c in g.enumerate_cycles().into_iter().filter(|c| g.is_exclusive(c)) {
        for &v in c.vertex_list() {
            let sys = NcSystem::new(g, &c, v).expect("exclusive cycle");
            let r = ghost_action_check(&sys, w);
            ghost.check(r.pass, || r.failure.clone().unwrap_or_default());
            for _ in 0..opts.samples {
                let Some(a) = random_homogeneous_vector(&sys, &alg, &mut rng, w, 4) else { break };
                let ok = recover_generator(&sys, &alg, &a, w)
                    .and_then(|r| act(&sys, &r.element, &a, w))
                    .is_ok_and(|y| y == ModuleVector::basis(sys.generator()));
                simple.check(ok, || format!("no generator recovered from {}", crate::branching::show_vector(&sys, &a)));
            }
            for &u in c.vertex_list().iter().filter(|&&u| u != v) {
                let r = shift_iso(g, &c, v, u).expect("distinct vertices on the cycle").verify(w);
                shift.check(r.pass(), || r.failure.clone().unwrap_or_default());
            }
        }
    }
    out.push(ghost.finish(name, "nc-calculus"));
    out.push(simple.finish(name, "graded-simplicity"));
    out.push(shift.finish(name, "shift"));
    out
}

fn term_suite(name: &str, g: &Graph, opts: &VerifyOptions) -> SuiteResult {
    let alg = Algebra::new(g, opts.field);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut t = Tally::new();
    for _ in 0..opts.samples {
        let a = random_element(&alg, &mut rng, 2, 3);
        let b = random_element(&alg, &mut rng, 2, 3);
        let c = random_element(&alg, &mut rng, 2, 3);
        let show = || format!("a = {}, b = {}, c = {}", alg.display(&a), alg.display(&b), alg.display(&c));
        let ab = alg.multiply(&a, &b);
        t.check(alg.multiply(&ab, &c) == alg.multiply(&a, &alg.multiply(&b, &c)), || format!("associativity: {}", show()));
        t.check(alg.star(&ab) == alg.multiply(&alg.star(&b), &alg.star(&a)), || format!("involution: {}", show()));
        t.check(alg.star(&alg.star(&a)) == a, || format!("double star: {}", show()));
        t.check(alg.normal_form(&a) == a, || format!("normal form: {}", show()));
        if let (Some(x), Some(y)) = (
            random_homogeneous_element(&alg, &mut rng, 2, 2),
            random_homogeneous_element(&alg, &mut rng, 2, 2),
        ) {
            let xy = alg.multiply(&x, &y);
            let ok = xy.is_zero() || xy.degree() == Some(x.degree().unwrap_or(0) + y.degree().unwrap_or(0));
            t.check(ok, || format!("grading: {} {}", alg.display(&x), alg.display(&y)));
        }
    }
    t.finish(name, "terms")
}

/// Every suite on one graph, in a fixed order.
pub fn verify_graph(name: &str, g: &Graph, opts: &VerifyOptions) -> Vec<SuiteResult> {
    let mut out = vec![classification_suite(name, g), quotient_suite(name, g, opts.field)];
    out.extend(module_suites(name, g, opts));
    out.push(term_suite(name, g, opts));
    out
}
