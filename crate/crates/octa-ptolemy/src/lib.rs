//! Gluing equations, Ptolemy data and holonomy invariants of knot diagrams.
//!
//! Given a knot diagram as a PD code, this crate builds the gluing-equation
//! systems of the two octahedral ideal triangulations of the knot complement
//! (minus two points) — the segment-variable form `T4` and the region-variable
//! form `T5` — solves them numerically, and computes from any solution:
//!
//! * the per-crossing Ptolemy data (sigma values, scaling parameters,
//!   short-edge tables, intercusp/translation parameters),
//! * the obstruction class in `{±1}` of the induced boundary-parabolic
//!   `PSL(2,C)` representation,
//! * the cusp shape and peripheral holonomy,
//! * the holonomy images of the Wirtinger generators,
//! * the complex volume (volume and Chern-Simons invariant mod `pi^2`),
//!   cross-checked by an independent Bloch-Wigner tetrahedron sum.
//!
//! The `book/` directory holds a guided tour; its code snippets are included
//! below as doc-tests so `cargo test` keeps them in sync with the library.

pub mod builtin;
pub mod diagram;
pub mod gluing;
pub mod invariants;
pub mod ptolemy;
pub mod report;
pub mod solver;
pub mod special;

pub use diagram::{parse_pd, Diagram};
pub use gluing::{build_t4_system, build_t5_system, Assignment, GluingSystem, Mode};
pub use invariants::{invariant_report, InvariantReport};
pub use solver::{newton_solve, search_solutions, SolverConfig};

// Book chapters, included so their code blocks run under `cargo test --doc`.
#[doc = include_str!("../../../book/src/diagrams.md")]
mod _book_diagrams {}
#[doc = include_str!("../../../book/src/gluing.md")]
mod _book_gluing {}
#[doc = include_str!("../../../book/src/solving.md")]
mod _book_solving {}
#[doc = include_str!("../../../book/src/invariants.md")]
mod _book_invariants {}
#[doc = include_str!("../../../book/src/volume.md")]
mod _book_volume {}
