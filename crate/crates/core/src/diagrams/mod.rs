//! Uni-trivalent diagrams, their canonical forms modulo antisymmetry, and
//! formal rational combinations of them.

mod canon;
mod combination;
mod diagram;

pub use canon::{canonicalize, graph_key, Canonical, CanonicalDiagram};
pub use combination::DiagramCombination;
pub use diagram::{classify_components, membership, ComponentReport, Diagram, Membership};

/// `wheel(n)` as a free function.
pub fn wheel(n: usize) -> crate::Result<Diagram> {
    Diagram::wheel(n)
}

pub fn interval() -> Diagram {
    Diagram::interval()
}

pub fn disjoint_union(a: &Diagram, b: &Diagram) -> Diagram {
    a.disjoint_union(b)
}
