//! Translation-semigroup dynamics on weighted function spaces over the half
//! line: admissibility certification and tier classification of weights,
//! grid-backed norms and shifts, chaos witness constructions, separated-set
//! entropy estimates, and orbit, proximality, and chain diagnostics.

pub mod dynamics;
pub mod entropy;
pub mod space;
pub mod weights;
pub mod witness;

pub use dynamics::{
    build_chain_constant_weight, chain_escape_test, concatenate_chains, decay_chain_to_zero,
    distributional_densities, li_yorke_check, orbit_trace, uniform_bound_probe, verify_chain,
    Chain, DensityReport, DynamicsError, EscapeVerdict, LiYorkeReport, LiYorkeVerdict,
    OrbitTrace, UniformBoundReport,
};

pub use entropy::{
    entropy_scan, infinite_entropy_experiment, is_separated_pair, max_separated, EntropyError,
    EntropyRow, EntropyTable, InfiniteEntropyReport, SearchMode, SeparationQuery,
};
pub use space::{GridFunction, Mode, Representation, SpaceError, SpaceSpec};
pub use weights::{
    certify_admissibility, classify_tier, sup_ratio, AdmissibilityCertificate, RatioEstimate,
    Tier, TierEvidence, TierReport, WeightError, WeightFunction, WeightKind,
};
pub use witness::{
    build_nonvanishing_witness, build_periodic_witness, build_separated_family,
    build_windowed_witness, find_escape_sequences, quadratic_schedule, rate_increasing_schedule,
    verify_nonvanishing, EscapeSequences, FamilyMember, LevelCheck, NonvanishingReport,
    SeparatedFamily, WindowedWitness, WitnessError,
};
