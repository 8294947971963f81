//! Combined heat and power economic emission dispatch.
//!
//! The crate bundles the dispatch model (cost, emission, transmission loss and
//! balance residuals), the cogeneration feasible regions, a repair-based
//! constraint handler, the multi-objective engines (IDBEA, IBEA, NSGA-II) and
//! the post-hoc quality metrics used to compare them.

pub mod archive;
pub mod constraint;
pub mod error;
pub mod metrics;
pub mod model;
pub mod moea;
pub mod region;
pub mod system;

pub use archive::{FrontArchive, FrontPoint};
pub use constraint::{ConstraintConfig, ConstraintMode};
pub use error::{Error, Result};
pub use model::Evaluation;
pub use region::{ForPolygon, Interval};
pub use system::{bundled, DispatchVector, SystemDefinition};
