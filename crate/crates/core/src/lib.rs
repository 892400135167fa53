//! Construction and validation of optimal and perfect single-deletion-correcting
//! codes of length 4 over even alphabets, with the combinatorial-design
//! machinery behind them: step-ordered Steiner quadruple systems, pair-system
//! families, group divisible designs, and independent search oracles.

pub mod bounds;
pub mod construct;
pub mod cover;
pub mod error;
pub mod gdd;
pub mod orbit;
pub mod pairs;
pub mod sqs;
pub mod word;

pub use bounds::{
    bound_report, exact_cover_sqs, levenshtein_bound, max_code_search, max_code_search_with_start,
    theorem2_bound, BoundReport, SearchOutcome,
};
pub use construct::{
    base_code, code_from_gdd, code_from_sqs, double_code, optimal_code, optimal_code_with_budget,
    perfect_code, perfect_code_with_budget, ConstructionTrace, RouteStep,
};
pub use cover::{Budget, CoverOutcome, ExactCover};
pub use error::{Error, Result};
pub use gdd::{
    build_gdd, build_gdd_with_budget, expected_gdd_blocks, family_a, is_gdd, FamilyA, Gdd,
    GroupedPoint, CACHE_DIR_ENV, GROUP_SIZE,
};
pub use orbit::{gen_a, gen_b, Quad4};
pub use pairs::{
    hexagon_edge, mills_pairs, p_bar_systems, p_systems, reiss_partition, PairKind, PairSystem,
    PairSystemFamily,
};
pub use sqs::{
    base_sqs_14_raw, build_case, build_sqs_step, build_sqs_step_traced, case_for,
    has_step_property, is_sqs, select_upper_quads, CanonicalSqs, CaseId, CaseUse, Quad,
};
pub use word::{
    all_words, ambient_triple_counts, classify, classify_triple, deletion_ball,
    find_ball_collision, indel_distance, is_deletion_correcting, is_perfect, min_distance,
    profile, Code, Letter, Profile, TripleClass, Word, WordClass,
};
