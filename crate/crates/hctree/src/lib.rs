//! Boundary-law fixed points, critical activities and phase regimes for
//! hard-core models on Cayley trees.
//!
//! A hard-core model is given by a constraint graph on a finite state
//! set; nearest-neighbour state pairs must be edges of the graph. On a
//! Cayley tree of order k, splitting Gibbs measures correspond to
//! positive solutions of a boundary-law fixed-point system. This crate
//! builds those systems for three built-in graphs (the four-state
//! `stick` and `key`, and the two-state graph with a self-loop), reduces
//! them to certified scalar root-finding problems, computes critical
//! activities, classifies phase regimes over activity grids, and
//! cross-checks every law against exact enumeration on small finite
//! volumes.
//!
//! Modules:
//! - [`model`]: constraint graphs and shared parameters;
//! - [`systems`]: the multi-dimensional fixed-point maps, including the
//!   index-four weakly periodic systems;
//! - [`reductions`]: scalar reductions and closed-form critical values;
//! - [`roots`]: certified real-root isolation and refinement;
//! - [`phase`]: critical activities and regime classification;
//! - [`oracle`]: exact finite-volume consistency checks;
//! - [`cli`]: the command-line surface used by the `hctree` binary.
//!
//! The `examples/` directory exercises each capability end to end.

pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod reductions;
pub mod roots;
pub mod systems;

pub use error::{Error, Result};
pub use model::{Activity, BuiltinGraph, ConstraintGraph, TreeParams};
pub use phase::{classify, sweep, Model, PhaseReport, Regime};
pub use roots::{Certificate, RootBracket};
