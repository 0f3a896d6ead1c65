//! Leavitt path algebras of finite graphs with symbolic infinite emitters:
//! graded ideals, primitive ideals, and branching-system modules realising them.

pub mod branching;
pub mod catalog;
pub mod chen;
pub mod classify;
pub mod error;
pub mod graph;
pub mod ideal;
pub mod laurent;
pub mod random;
pub mod scalar;
pub mod term;
pub mod verify;

pub use branching::{BranchingSystem, ModuleVector, Truncation};
pub use chen::{AlphaSpec, ModuleDescriptor, ModuleSystem};
pub use error::{Error, Result};
pub use graph::{
    BundleId, Cycle, CycleClass, CycleKind, EdgeId, EdgeRef, Graph, GraphBuilder, Path, RationalTailSpec,
    Verdict, VertexId, VertexSet,
};
pub use ideal::{AdmissiblePair, IdealDescriptor, QuotientGraph};
pub use laurent::{Irreducibility, LaurentPoly};
pub use scalar::{Field, Scalar};
pub use term::{Algebra, Element, Monomial};
