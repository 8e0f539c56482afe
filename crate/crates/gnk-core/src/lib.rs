//! Computable presentations of three families of involutive groups — words
//! over oriented or unordered strand triples, and words over unordered pairs
//! of ordered strand-pair labels — together with the maps connecting them:
//! the pair-doubling homomorphism from oriented triples, an action on the
//! free product of order-two groups, and a pure-braid invariant read off
//! from collinearity events of a geometric realization.
//!
//! Everything is deterministic: searches explore in a fixed order, and the
//! geometric pipeline is a pure function of (braid, epsilon, seed,
//! tolerances).

pub mod aut;
pub mod braid;
pub mod g2;
pub mod g3;
pub mod invariant;
pub mod motion;
pub mod words;

/// Default state budget for the class searches.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

pub use aut::{aut_equal, compose, g_of_generator, g_of_word, FreeAutomorphism, Z2FreeWord};
pub use braid::{parse_braid, BraidLetter, BraidParseError, BraidWord};
pub use g2::{
    commutes, exchange_applicable, is_minimal, neighbors, reduce_to_minimal,
    reduce_to_minimal_traced, words_equal, CommutationMode, EngineError, EqualityOutcome,
    MinimalityCertificate, MinimalityStatus, ReductionCertificate, ReductionStatus, Verdict,
};
pub use g3::{
    certify_minimal_via_phi, enumerate_relators, enumerate_relators_oriented,
    enumerate_relators_plain, phi_generator, phi_word, project_to_plain, verify_phi_well_defined,
    G3Variant, GroupContextG3, PhiMinimalityStatus, PhiReport, RelatorTag,
};
pub use invariant::{
    f_invariant, phi_invariant, InvariantError, InvariantRun, PhiRun, DEFAULT_EPSILON,
    DEFAULT_RETRIES,
};
pub use motion::{
    detect_events, realize, CollinearityEvent, StabilityReport, Tolerances, Trajectory,
};
pub use words::{
    free_reduce_involutive, parity_vector, reverse_word, OrderedPairLabel, PairPairGenerator,
    ParityVector, StrandIndex, TripleGenerator, UnorderedTripleGenerator, Word, WordError,
};
