//! Graded prime, graded primitive and primitive ideals, and the graded simple
//! module whose annihilator is a given graded primitive ideal.

use std::convert::Infallible;

use crate::chen::{annihilator, AlphaSpec, IrrationalRule, ModuleDescriptor};
use crate::error::{Error, Result};
use crate::graph::{Cycle, CycleKind, Graph, Verdict, VertexId, VertexSet};
use crate::ideal::{quotient_is_downwards_directed, AdmissiblePair, IdealDescriptor};
use crate::laurent::Irreducibility;

/// Shape of `S` in a graded primitive pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SForm {
    Full,
    Minus(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradedPrimitiveCase {
    /// A strictly decreasing infinite path needs infinitely many vertices, so
    /// on a finite graph this variant cannot be built.
    StrictlyDecreasing(Infallible),
    Case3b { v: VertexId },
    Case3c { v: VertexId, cycle: Cycle, s_form: SForm },
    Case3d { v: VertexId, cycle: Cycle, s_form: SForm },
    NotGradedPrimitive(String),
}

impl GradedPrimitiveCase {
    pub fn is_graded_primitive(&self) -> bool {
        !matches!(self, GradedPrimitiveCase::NotGradedPrimitive(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            GradedPrimitiveCase::StrictlyDecreasing(never) => match *never {},
            GradedPrimitiveCase::Case3b { .. } => "3b",
            GradedPrimitiveCase::Case3c { .. } => "3c",
            GradedPrimitiveCase::Case3d { .. } => "3d",
            GradedPrimitiveCase::NotGradedPrimitive(_) => "none",
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        let form = |s: &SForm| match s {
            SForm::Full => "S = B_H".to_string(),
            SForm::Minus(u) => format!("S = B_H - {{{}}}", g.vertex_name(*u)),
        };
        match self {
            GradedPrimitiveCase::StrictlyDecreasing(never) => match *never {},
            GradedPrimitiveCase::Case3b { v } => format!("3b: relative sink {}", g.vertex_name(*v)),
            GradedPrimitiveCase::Case3c { v, cycle, s_form } => {
                format!("3c: extreme cycle {} at {}, {}", cycle.display(g), g.vertex_name(*v), form(s_form))
            }
            GradedPrimitiveCase::Case3d { v, cycle, s_form } => {
                format!("3d: exclusive cycle {} at {}, {}", cycle.display(g), g.vertex_name(*v), form(s_form))
            }
            GradedPrimitiveCase::NotGradedPrimitive(why) => format!("not graded primitive: {why}"),
        }
    }
}

/// How the base vertex returned by [`find_base_vertex`] sits in `E^0 - H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCase {
    NoEdgesOut,
    ExtremeCycle(Cycle),
    ExclusiveCycle(Cycle),
}

fn cycles_within(g: &Graph, set: &VertexSet) -> Vec<Cycle> {
    g.enumerate_cycles_sampled(2)
        .into_iter()
        .filter(|c| c.vertices().is_subset(set))
        .collect()
}

/// First cycle through `v` inside `set`, sorted as enumerated.
fn cycle_through(g: &Graph, v: VertexId, set: &VertexSet) -> Option<Cycle> {
    cycles_within(g, set).into_iter().find(|c| c.contains_vertex(v))
}

fn cycle_case(g: &Graph, c: Cycle, set: &VertexSet) -> Result<BaseCase> {
    match g.classify_cycle(&c, set)?.kind {
        CycleKind::Exclusive => Ok(BaseCase::ExclusiveCycle(c)),
        CycleKind::ExtremeIn => Ok(BaseCase::ExtremeCycle(c)),
        CycleKind::Neither => Err(Error::Precondition(format!(
            "cycle {} is neither exclusive nor extreme",
            c.display(g)
        ))),
    }
}

fn proper_complement(g: &Graph, h: &VertexSet) -> Result<VertexSet> {
    if !g.is_hereditary_saturated(h)? {
        return Err(Error::NotHereditarySaturated(g.set_names(h)));
    }
    let rest = g.complement(h);
    if rest.is_empty() {
        return Err(Error::ImproperPair);
    }
    Ok(rest)
}

/// A vertex `v` with `R(v) = E^0 - H`, and whether it emits nothing into
/// `E^0 - H` or lies on an extreme or exclusive cycle there.
pub fn find_base_vertex(g: &Graph, h: &VertexSet) -> Result<(VertexId, BaseCase)> {
    let rest = proper_complement(g, h)?;
    if let Verdict::Fails((a, b)) = g.is_downwards_directed(&rest)? {
        return Err(Error::Precondition(format!(
            "{} and {} have no common lower bound",
            g.vertex_name(a),
            g.vertex_name(b)
        )));
    }
    let v = rest
        .iter()
        .copied()
        .find(|&v| g.root_of(v) == rest)
        .ok_or_else(|| Error::Precondition("no vertex is reached from all of E^0 - H".into()))?;
    if g.successors(v).is_disjoint(&rest) {
        return Ok((v, BaseCase::NoEdgesOut));
    }
    let c = cycle_through(g, v, &rest).expect("every vertex outside H returns to v");
    Ok((v, cycle_case(g, c, &rest)?))
}

/// Downward direction of `E^0 - H` together with the allowed forms of `S`.
pub fn condition_two(g: &Graph, pair: &AdmissiblePair) -> Result<bool> {
    let rest = proper_complement(g, pair.h())?;
    if !g.is_downwards_directed(&rest)?.holds() {
        return Ok(false);
    }
    let unbroken = pair.unbroken(g);
    Ok(match unbroken.len() {
        0 => true,
        1 => g.root_of(*unbroken.first().expect("one element")) == rest,
        _ => false,
    })
}

/// The case split describing a graded primitive pair.
pub fn case_analysis(g: &Graph, pair: &AdmissiblePair) -> Result<GradedPrimitiveCase> {
    use GradedPrimitiveCase::*;
    let rest = proper_complement(g, pair.h())?;
    if let Verdict::Fails((a, b)) = g.is_downwards_directed(&rest)? {
        return Ok(NotGradedPrimitive(format!(
            "{} and {} have no common lower bound outside H",
            g.vertex_name(a),
            g.vertex_name(b)
        )));
    }
    let unbroken: Vec<VertexId> = pair.unbroken(g).into_iter().collect();
    match unbroken[..] {
        [] => Ok(match find_base_vertex(g, pair.h())? {
            (v, BaseCase::NoEdgesOut) => Case3b { v },
            (v, BaseCase::ExtremeCycle(cycle)) => Case3c { v, cycle, s_form: SForm::Full },
            (v, BaseCase::ExclusiveCycle(cycle)) => Case3d { v, cycle, s_form: SForm::Full },
        }),
        [u] => {
            if g.root_of(u) != rest {
                return Ok(NotGradedPrimitive(format!(
                    "{} is not reached from all of E^0 - H",
                    g.vertex_name(u)
                )));
            }
            let c = cycle_through(g, u, &rest).expect("u has an edge back into its root");
            Ok(match cycle_case(g, c, &rest)? {
                BaseCase::ExclusiveCycle(cycle) => Case3d { v: u, cycle, s_form: SForm::Minus(u) },
                BaseCase::ExtremeCycle(cycle) => Case3c { v: u, cycle, s_form: SForm::Minus(u) },
                BaseCase::NoEdgesOut => unreachable!("cycle_case never returns NoEdgesOut"),
            })
        }
        _ => Ok(NotGradedPrimitive(format!(
            "B_H - S = {} has more than one vertex",
            g.set_names(&pair.unbroken(g))
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub graded_prime: bool,
    pub graded_primitive: GradedPrimitiveCase,
    /// The graded primitive verdict read off the direct criterion.
    pub condition_two: bool,
    pub primitive: bool,
}

/// An exclusive cycle `c` inside `E^0 - H` with `R(c^0) = E^0 - H`.
pub fn exclusive_root_cycle(g: &Graph, h: &VertexSet) -> Option<Cycle> {
    let rest = g.complement(h);
    cycles_within(g, &rest)
        .into_iter()
        .find(|c| g.is_exclusive(c) && g.root(&c.vertices()).ok().as_ref() == Some(&rest))
}

pub fn classify_graded_ideal(g: &Graph, pair: &AdmissiblePair) -> Result<Classification> {
    let graded_primitive = case_analysis(g, pair)?;
    let condition_two = condition_two(g, pair)?;
    let primitive = graded_primitive.is_graded_primitive()
        && !(pair.unbroken(g).is_empty() && exclusive_root_cycle(g, pair.h()).is_some());
    Ok(Classification {
        graded_prime: quotient_is_downwards_directed(g, pair),
        graded_primitive,
        condition_two,
        primitive,
    })
}

/// Whether `L_K(E)` is graded primitive; for a finite graph this is downward
/// direction of `E^0`.
pub fn is_graded_primitive_algebra(g: &Graph) -> bool {
    g.vertex_count() > 0 && g.is_downwards_directed(&g.all_vertices()).is_ok_and(|v| v.holds())
}

pub fn is_primitive(g: &Graph, d: &IdealDescriptor) -> Result<bool> {
    match d {
        IdealDescriptor::Graded(pair) => Ok(classify_graded_ideal(g, pair)?.primitive),
        IdealDescriptor::NonGradedPrimitive { pair, cycle, f, assume_irreducible } => {
            let expected = IdealDescriptor::non_graded(g, cycle.clone(), f.clone(), *assume_irreducible)
                .map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
            if expected.pair() != pair {
                return Err(Error::InvalidDescriptor("pair is not (E^0 - R(c^0), B_H)".into()));
            }
            if f.is_unit() {
                return Err(Error::InvalidDescriptor(format!("{f} is a unit")));
            }
            match f.irreducibility() {
                Irreducibility::Irreducible => Ok(true),
                Irreducibility::Undecided if *assume_irreducible => Ok(true),
                Irreducibility::Undecided => Err(Error::InvalidDescriptor(format!(
                    "irreducibility of {f} is not decided; mark it as assumed"
                ))),
                Irreducibility::Reducible => Err(Error::InvalidDescriptor(format!("{f} is reducible"))),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChenWitness {
    StrictDecreasing(Infallible),
    RelativeSink(ModuleDescriptor),
    ExtremeCycle(ModuleDescriptor),
    ExclusiveCycle(ModuleDescriptor),
}

impl ChenWitness {
    pub fn descriptor(&self) -> &ModuleDescriptor {
        match self {
            ChenWitness::StrictDecreasing(never) => match *never {},
            ChenWitness::RelativeSink(d) | ChenWitness::ExtremeCycle(d) | ChenWitness::ExclusiveCycle(d) => d,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ChenWitness::StrictDecreasing(never) => match *never {},
            ChenWitness::RelativeSink(_) => "relative sink",
            ChenWitness::ExtremeCycle(_) => "extreme cycle",
            ChenWitness::ExclusiveCycle(_) => "exclusive cycle",
        }
    }
}

/// The other cycle used to build an aperiodic path around `c`.
fn crossing_cycle(g: &Graph, c: &Cycle) -> Option<Cycle> {
    g.enumerate_cycles_sampled(2)
        .into_iter()
        .find(|d| !d.same_as(g, c) && !d.vertices().is_disjoint(&c.vertices()))
}

/// A graded simple module annihilated by exactly `I(H, S)`.
pub fn chen_witness(g: &Graph, pair: &AdmissiblePair) -> Result<ChenWitness> {
    let witness = match case_analysis(g, pair)? {
        GradedPrimitiveCase::StrictlyDecreasing(never) => match never {},
        GradedPrimitiveCase::NotGradedPrimitive(why) => {
            return Err(Error::Precondition(format!("pair is not graded primitive: {why}")))
        }
        GradedPrimitiveCase::Case3b { v } if g.is_sink(v) => ChenWitness::RelativeSink(ModuleDescriptor::SinkN(v)),
        GradedPrimitiveCase::Case3b { v } => ChenWitness::RelativeSink(ModuleDescriptor::inf_emitter(g, v)?),
        GradedPrimitiveCase::Case3c { s_form: SForm::Minus(u), .. } => {
            ChenWitness::ExtremeCycle(ModuleDescriptor::inf_emitter(g, u)?)
        }
        GradedPrimitiveCase::Case3d { s_form: SForm::Minus(u), .. } => {
            ChenWitness::ExclusiveCycle(ModuleDescriptor::inf_emitter(g, u)?)
        }
        GradedPrimitiveCase::Case3c { cycle, .. } => {
            let d = crossing_cycle(g, &cycle).expect("an extreme cycle has a returning exit");
            let rule = IrrationalRule::new(g, &cycle, &d)?;
            ChenWitness::ExtremeCycle(ModuleDescriptor::VAlpha(AlphaSpec::Irrational(rule)))
        }
        GradedPrimitiveCase::Case3d { v, cycle, .. } => {
            ChenWitness::ExclusiveCycle(ModuleDescriptor::NcModule { cycle, v })
        }
    };
    let ann = annihilator(g, witness.descriptor())?;
    if ann != IdealDescriptor::Graded(pair.clone()) {
        return Err(Error::Precondition(format!(
            "witness {} has annihilator {}",
            witness.descriptor().display(g),
            ann.display(g)
        )));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ideal::enumerate_admissible_pairs;
    use crate::laurent::LaurentPoly;
    use crate::scalar::Field;

    fn pair(g: &Graph, h: &[&str], s: &[&str]) -> AdmissiblePair {
        AdmissiblePair::by_names(g, h, s).unwrap()
    }

    fn vid(g: &Graph, v: &str) -> VertexId {
        g.vertex_by_name(v).unwrap()
    }

    #[test]
    fn base_vertices() {
        let g = catalog::g2();
        let (v, case) = find_base_vertex(&g, &g.vertex_set(&["w"]).unwrap()).unwrap();
        assert_eq!(v, vid(&g, "v"));
        assert!(matches!(case, BaseCase::ExclusiveCycle(_)));
        assert_eq!(find_base_vertex(&g, &VertexSet::new()).unwrap(), (vid(&g, "w"), BaseCase::NoEdgesOut));
        let g = catalog::g5();
        let (_, case) = find_base_vertex(&g, &VertexSet::new()).unwrap();
        assert!(matches!(case, BaseCase::ExtremeCycle(_)));
        let g = catalog::two_sinks();
        assert!(find_base_vertex(&g, &VertexSet::new()).is_err());
    }

    #[test]
    fn pinned_classifications() {
        let g = catalog::g1();
        let c = classify_graded_ideal(&g, &AdmissiblePair::zero()).unwrap();
        assert!(c.graded_prime && !c.primitive && c.condition_two);
        assert!(matches!(c.graded_primitive, GradedPrimitiveCase::Case3d { s_form: SForm::Full, .. }));

        let g = catalog::g2();
        let c = classify_graded_ideal(&g, &pair(&g, &["w"], &[])).unwrap();
        assert_eq!(c.graded_primitive.label(), "3d");
        assert!(matches!(c.graded_primitive, GradedPrimitiveCase::Case3d { s_form: SForm::Minus(u), .. } if u == vid(&g, "v")));
        assert!(c.primitive);
        let c = classify_graded_ideal(&g, &pair(&g, &["w"], &["v"])).unwrap();
        assert!(c.graded_primitive.is_graded_primitive() && !c.primitive);
        let c = classify_graded_ideal(&g, &AdmissiblePair::zero()).unwrap();
        assert_eq!(c.graded_primitive, GradedPrimitiveCase::Case3b { v: vid(&g, "w") });
        assert!(c.primitive);

        let all = pair(&g, &["v", "w"], &[]);
        assert!(matches!(classify_graded_ideal(&g, &all), Err(Error::ImproperPair)));
    }

    #[test]
    fn graded_primitive_algebras() {
        assert!(is_graded_primitive_algebra(&catalog::g1()));
        assert!(!is_graded_primitive_algebra(&catalog::two_sinks()));
        assert!(!is_graded_primitive_algebra(&catalog::g3()));
    }

    #[test]
    fn primitivity_of_descriptors() {
        let g = catalog::g1();
        let f = Field::Rationals;
        let one_plus_x = LaurentPoly::new(f, &[(0, f.integer(1)), (1, f.integer(1))]).unwrap();
        let d = IdealDescriptor::non_graded(&g, g.cycle_of(&["e"]).unwrap(), one_plus_x, false).unwrap();
        assert!(is_primitive(&g, &d).unwrap());
        assert!(!is_primitive(&g, &IdealDescriptor::Graded(AdmissiblePair::zero())).unwrap());

        let reducible = LaurentPoly::new(f, &[(0, f.integer(-1)), (2, f.integer(1))]).unwrap();
        let d = IdealDescriptor::non_graded(&g, g.cycle_of(&["e"]).unwrap(), reducible, false).unwrap();
        assert!(is_primitive(&g, &d).is_err());
        let quartic = LaurentPoly::new(f, &[(0, f.integer(1)), (4, f.integer(1))]).unwrap();
        let d = IdealDescriptor::non_graded(&g, g.cycle_of(&["e"]).unwrap(), quartic.clone(), false).unwrap();
        assert!(is_primitive(&g, &d).is_err());
        let d = IdealDescriptor::non_graded(&g, g.cycle_of(&["e"]).unwrap(), quartic, true).unwrap();
        assert!(is_primitive(&g, &d).unwrap());

        let g = catalog::g2();
        assert!(!is_primitive(&g, &IdealDescriptor::Graded(pair(&g, &["w"], &["v"]))).unwrap());
    }

    #[test]
    fn witnesses_for_pinned_pairs() {
        let g = catalog::g2();
        let w = chen_witness(&g, &pair(&g, &["w"], &["v"])).unwrap();
        assert!(matches!(w, ChenWitness::ExclusiveCycle(ModuleDescriptor::NcModule { .. })));
        let w = chen_witness(&g, &pair(&g, &["w"], &[])).unwrap();
        assert!(matches!(w, ChenWitness::ExclusiveCycle(ModuleDescriptor::InfEmitterN { .. })));

        let g = catalog::g5();
        let ChenWitness::ExtremeCycle(ModuleDescriptor::VAlpha(AlphaSpec::Irrational(rule))) =
            chen_witness(&g, &AdmissiblePair::zero()).unwrap()
        else {
            panic!("expected an irrational path");
        };
        let (c, d) = rule.cycles();
        assert_eq!((g.edge_ref_name(c.edges()[0]), g.edge_ref_name(d.edges()[0])), ("d".into(), "e".into()));

        let g = catalog::g4();
        assert!(matches!(chen_witness(&g, &AdmissiblePair::zero()).unwrap(), ChenWitness::ExtremeCycle(_)));
        assert!(chen_witness(&catalog::two_sinks(), &AdmissiblePair::zero()).is_err());
    }

    #[test]
    fn both_criteria_agree_on_catalog() {
        for (name, g) in catalog::graphs() {
            for p in enumerate_admissible_pairs(&g).into_iter().filter(|p| p.is_proper(&g)) {
                let c = classify_graded_ideal(&g, &p).unwrap();
                assert_eq!(c.condition_two, c.graded_primitive.is_graded_primitive(), "{name} {}", p.display(&g));
                if c.condition_two {
                    assert!(c.graded_prime);
                    chen_witness(&g, &p).unwrap();
                }
            }
        }
    }

    #[test]
    fn minus_form_needs_the_root() {
        // u -> v with a loop at v, u also emits a bundle into the sink w:
        // B_{w} = {u}, but R(u) = {u} misses v
        let g = catalog::g3();
        let c = classify_graded_ideal(&g, &pair(&g, &["w"], &[])).unwrap();
        assert!(!c.condition_two && !c.graded_primitive.is_graded_primitive());
    }
}
