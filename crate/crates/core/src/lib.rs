//! Perfect and distance regular colorings of the `n`-dimensional grid `Z^n`.
//!
//! Colorings are periodic with a rectangular period and are handled on the
//! corresponding torus ([`torus`]). On top of that sit the perfectness
//! checker ([`perfect`]), distance regularity and the degree-sequence
//! validators ([`distreg`]), vertex-level structure and reducibility
//! ([`structure`]), the known coloring families ([`constructions`]) and an
//! exhaustive search over small tori ([`search`]).

pub mod analysis;
pub mod constructions;
pub mod distreg;
pub mod perfect;
pub mod search;
pub mod structure;
pub mod torus;

pub use analysis::{analyze, AnalysisReport};
pub use constructions::{
    cylindrical_lift, gray_inverse, gray_lift, gray_point, hamming_distance_coloring, lift_reducible,
    one_dim_pattern, reducible_matrix, BinaryWord, ConstructionError, OneDimKind, ReducibleMatrixSpec,
};
pub use distreg::{
    check_distance_regular, degree_triples, find_standard_orders, DRReport, DegreeTriple, DistRegError,
    SegmentPartition, StandardOrder, TheoremViolation,
};
pub use perfect::{compute_parameter_matrix, NotPerfectWitness, ParameterMatrix};
pub use search::{canonical_form, classify, enumerate_matrices, search_colorings, SearchConfig, SearchOutcome};
pub use structure::{detect_reducible, essential_variables, DirectionSets, HyperplaneSpec, Reduction};
pub use torus::{Cell, ColoringError, Direction, PeriodicColoring, Sign, Torus};
