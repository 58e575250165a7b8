pub mod blocks;
pub mod closed_form;
pub mod cycle;
pub mod error;
pub mod graph;
pub mod lift;
pub mod paths;
pub mod report;
pub mod suites;
pub mod verify;

pub use blocks::{decompose, distance2_criterion, Block, BlockType, Decomposition};
pub use closed_form::{diameter_formula, DiameterResult, DiameterValue, Method};
pub use cycle::{enumerate_stable_sets, is_2_stable, CycleParams, StableSet};
pub use error::{Error, Result};
pub use graph::{Distance, SchrijverGraph};
pub use paths::PathCertificate;
