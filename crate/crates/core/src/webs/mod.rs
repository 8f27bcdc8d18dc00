//! Independent A₂ skein oracle.
//!
//! Diagrams are `n`-cabled, each component carries one expanded clasp, and
//! crossings are resolved one at a time with
//! `⟨positive⟩ = q^{1/3}⟨smoothing⟩ − q^{−1/6}⟨H⟩` and
//! `⟨negative⟩ = q^{−1/3}⟨smoothing⟩ − q^{1/6}⟨H⟩`. After each step webs are
//! reduced with the circle (`[3]`), bigon (`[2]`) and square (sum of the two
//! smoothings) relations and structurally equal webs are merged through a
//! canonical rotation-system code. Exact but exponential: meant for small
//! colors only.

mod clasp;
mod diagram;
mod eval;
mod map;

pub use clasp::{expand_clasp, ClaspExpansion, HWord, DEFAULT_CLASP_BOUND};
pub use diagram::{braid_closure, pretzel_components, pretzel_diagram, word_tangle, Component, Crossing, LinkDiagram};
pub use eval::{
    clasp_sum, evaluate_closed, evaluate_link, normalized_bracket, evaluate_link_with, reduce_web, resolve_all, resolve_crossing, scaled_bracket,
    OracleOptions, WebSum,
};
pub use map::{Face, SquareSide, VertexKind, Web, WebCode};

use crate::error::Result;
use crate::links::{Closure, PretzelSpec};

/// The diagram the oracle uses for a family specification: the braid
/// closure `σ₁^m` for torus knots, otherwise the pretzel diagram oriented
/// to match the formula's column types.
pub fn diagram_for_spec(spec: &PretzelSpec) -> Result<LinkDiagram> {
    let plan = spec.plan()?;
    match plan.closure {
        Closure::Braid => {
            let m = plan.columns[0].twists;
            braid_closure(2, &vec![m.signum(); m.unsigned_abs() as usize])
        }
        Closure::Pretzel => {
            let twists: Vec<i64> = plan.columns.iter().map(|c| c.twists).collect();
            let strands: Vec<_> = plan.columns.iter().map(|c| c.strands).collect();
            pretzel_diagram(&twists, Some(&strands))
        }
    }
}
