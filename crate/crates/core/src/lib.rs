//! Bounds on the Euclidean embedding dimension of lens spaces `L^{2m+1}(2^e)`.

pub mod bounds;
pub mod cohomology;
pub mod derivation;
pub mod dyadic;
pub mod inductive;
pub mod lifting;
pub mod verify;

pub use bounds::{report, Bound, BoundsError, Catalog, Category, Column, Direction, LensSpace, Provenance, Report, ReportOptions};
pub use derivation::{DerivationNode, Premise, ReplayFailure, SideCondition};
pub use inductive::{run_rounds, run_rounds_detailed, EngineError, RoundOptions};
