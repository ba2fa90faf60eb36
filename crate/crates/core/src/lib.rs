//! Parity-game solving toolkit built around fatal monotone attractors.
//!
//! The library provides:
//!
//! * the game model, PGSolver-format I/O, sub-game views and edge
//!   surgery ([`game`], [`view`], [`pgsolver`], [`scc`]);
//! * classical, monotone, permissive and layered attractors
//!   ([`attractors`]);
//! * the partial solvers `psol`, `psolB`, `psolQ` ([`solvers`]) and the
//!   precision-boosting `lift` transformation ([`lift`]);
//! * ground truth: Zielonka's solver, a brute-force oracle, a solution
//!   verifier, and completion of partial results ([`reference`]);
//! * deterministic benchmark-family and seeded random-game generators
//!   ([`generators`]).

pub mod attractors;
pub mod ctl;
pub mod game;
pub mod generators;
pub mod lift;
pub mod node_set;
pub mod pgsolver;
pub mod reference;
pub mod scc;
pub mod solvers;
pub mod view;

pub use crate::ctl::{Aborted, Ctl};
pub use crate::game::{Game, GameError, NodeData, PerPlayer, Player, StrategyFragment};
pub use crate::node_set::NodeSet;
pub use crate::pgsolver::{parse_pgsolver, serialize_pgsolver, ParseError};
pub use crate::reference::{brute_force, complete, verify_solution, zielonka, FullSolution, Rho};
pub use crate::solvers::{psol, psolb, psolq, PartialResult, PartialSolverKind, RunStats};
pub use crate::view::{subgame_view, GameView, ViewError};
