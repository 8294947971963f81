//! Evolutionary multi-objective machinery.

pub mod crowding;
pub mod dominance;
pub mod engine;
pub mod hypervolume;
pub mod indicator;
pub mod operators;
pub mod sorting;

pub use crowding::crowding_distance;
pub use dominance::{constrained_dominates, dominates};
pub use engine::{
    ibea_run, idbea_run, nsga2_run, run, Algorithm, ArchiveTruncation, EngineConfig, Individual,
    ObjectiveMode,
};
pub use hypervolume::hypervolume_2d;
pub use indicator::{assign_fitness, environmental_selection, indicator_ihd, FitnessTable};
pub use operators::{binary_tournament, polynomial_mutation, sbx_crossover, Bounds};
pub use sorting::nondominated_sort;
