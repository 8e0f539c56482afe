//! The event-word invariant of pure braids: realize, detect collinearity
//! events, and read off one oriented-triple generator per event (middle
//! strand in the middle slot, events in time order). Composing with the
//! pair-doubling homomorphism and the reduction engine turns the word into a
//! braid nontriviality certificate.

use serde::Serialize;
use thiserror::Error;

use crate::braid::BraidWord;
use crate::g2::{reduce_to_minimal, CommutationMode, EngineError, ReductionCertificate};
use crate::g3::phi_word;
use crate::motion::{detect_events, realize, CollinearityEvent, StabilityReport, Tolerances};
use crate::words::{PairPairGenerator, TripleGenerator, Word};

pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_RETRIES: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("the invariant is defined on pure braids only")]
    NotPure,
    #[error("no stable realization within {attempts} attempts; last flags: {last:?}")]
    Degenerate { attempts: u32, last: Box<StabilityReport> },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One stable realization run: the event word plus the evidence behind it.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantRun {
    #[serde(serialize_with = "serialize_word")]
    pub word: Word<TripleGenerator>,
    pub events: Vec<CollinearityEvent>,
    pub stability: StabilityReport,
    pub seed_used: u64,
    pub attempts: u32,
}

fn serialize_word<S: serde::Serializer>(
    w: &Word<TripleGenerator>,
    s: S,
) -> Result<S::Ok, S::Error> {
    w.letters().serialize(s)
}

/// Computes the event word of a pure braid, retrying with fresh jitter seeds
/// while the stability grade fails.
pub fn f_invariant(
    b: &BraidWord,
    epsilon: f64,
    seed: u64,
    retries: u32,
) -> Result<InvariantRun, InvariantError> {
    f_invariant_with(b, epsilon, seed, retries, &Tolerances::default())
}

pub fn f_invariant_with(
    b: &BraidWord,
    epsilon: f64,
    seed: u64,
    retries: u32,
    tol: &Tolerances,
) -> Result<InvariantRun, InvariantError> {
    if !b.is_pure() {
        return Err(InvariantError::NotPure);
    }
    let mut last: Option<StabilityReport> = None;
    for attempt in 0..=retries {
        let seed_used = seed.wrapping_add(attempt as u64);
        let tr = realize(b, epsilon, seed_used).expect("pureness checked above");
        let (events, mut report) = detect_events(&tr, tol);
        report.retries_used = attempt;
        if report.pass {
            let letters = events
                .iter()
                .map(|e| {
                    TripleGenerator::new(e.triple[0], e.triple[1], e.triple[2])
                        .expect("event triples are distinct")
                })
                .collect();
            let word = Word::new(b.n(), letters).expect("strands fit the context");
            return Ok(InvariantRun { word, events, stability: report, seed_used, attempts: attempt + 1 });
        }
        last = Some(report);
    }
    Err(InvariantError::Degenerate {
        attempts: retries + 1,
        last: Box::new(last.expect("at least one attempt ran")),
    })
}

/// The composite certificate: event word, its pair-group image, and the
/// image reduced to certified minimal length. A nontrivial reduced image
/// certifies the braid is nontrivial.
#[derive(Debug, Clone, Serialize)]
pub struct PhiRun {
    #[serde(flatten)]
    pub run: InvariantRun,
    pub image: Vec<PairPairGenerator>,
    pub certificate: ReductionCertificate<PairPairGenerator>,
}

pub fn phi_invariant(
    b: &BraidWord,
    mode: CommutationMode,
    budget: u64,
    epsilon: f64,
    seed: u64,
    retries: u32,
) -> Result<PhiRun, InvariantError> {
    let run = f_invariant(b, epsilon, seed, retries)?;
    let image = phi_word(&run.word);
    let certificate = reduce_to_minimal(image.letters(), mode, budget)?;
    Ok(PhiRun { run, image: image.into_letters(), certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use crate::g2::{words_equal, ReductionStatus, Verdict};
    use crate::words::{parity_vector, ParityVector};

    fn t(a: u8, b: u8, c: u8) -> TripleGenerator {
        TripleGenerator::new(a, b, c).unwrap()
    }

    #[test]
    fn empty_braid_has_empty_invariant() {
        let b = BraidWord::empty(3);
        let run = f_invariant(&b, DEFAULT_EPSILON, 0, DEFAULT_RETRIES).unwrap();
        assert!(run.word.is_empty());
        let phi = phi_invariant(&b, CommutationMode::Ordered, 10_000, DEFAULT_EPSILON, 0, 1)
            .unwrap();
        assert!(phi.certificate.output.is_empty());
        assert_eq!(phi.certificate.status, ReductionStatus::MinimalCertified);
    }

    #[test]
    fn non_pure_is_rejected() {
        let b = parse_braid("s1", 3).unwrap();
        assert!(matches!(
            f_invariant(&b, DEFAULT_EPSILON, 0, 1),
            Err(InvariantError::NotPure)
        ));
    }

    /// The rotation braid: two events, middle strand 3 then 2 under the
    /// counterclockwise convention (fixed by the closed-form root analysis
    /// in the motion tests).
    #[test]
    fn rotation_braid_word() {
        let b = parse_braid("s2 s2", 3).unwrap();
        let run = f_invariant(&b, DEFAULT_EPSILON, 1, DEFAULT_RETRIES).unwrap();
        assert_eq!(run.word.letters(), &[t(2, 3, 1), t(1, 2, 3)]);
        assert_eq!(run.word.letters()[0], t(1, 3, 2));
    }

    #[test]
    fn rotation_braid_phi_certificates() {
        let b = parse_braid("s2 s2", 3).unwrap();
        let ordered =
            phi_invariant(&b, CommutationMode::Ordered, 100_000, DEFAULT_EPSILON, 1, 4).unwrap();
        assert_eq!(ordered.image.len(), 4);
        assert_eq!(ordered.certificate.output.len(), 2);
        assert_eq!(ordered.certificate.status, ReductionStatus::MinimalCertified);
        let parity = ParityVector::of_letters(&ordered.certificate.output);
        assert_eq!(parity.odd_count(), 2);

        let sets = phi_invariant(
            &b,
            CommutationMode::UnorderedSets,
            100_000,
            DEFAULT_EPSILON,
            1,
            4,
        )
        .unwrap();
        assert_eq!(sets.certificate.output.len(), 4);
        assert_eq!(sets.certificate.status, ReductionStatus::MinimalCertified);
    }

    #[test]
    fn invariant_is_multiplicative_over_concatenation() {
        for (lhs, rhs) in [("s2 s2", "s1 s1"), ("s1 s1", "s2 s2 s2 s2"), ("s2 s2^-1", "s1 s1")] {
            let b1 = parse_braid(lhs, 3).unwrap();
            let b2 = parse_braid(rhs, 3).unwrap();
            let joined = b1.concat(&b2).unwrap();
            let seed = 5;
            let w1 = f_invariant(&b1, DEFAULT_EPSILON, seed, 0).unwrap().word;
            let w2 = f_invariant(&b2, DEFAULT_EPSILON, seed, 0).unwrap().word;
            let w = f_invariant(&joined, DEFAULT_EPSILON, seed, 0).unwrap().word;
            assert_eq!(w, w1.concat(&w2).unwrap(), "{lhs} * {rhs}");
        }
    }

    #[test]
    fn braid_times_inverse_reduces_to_identity() {
        for text in ["s2 s2", "s1 s1^-1", "s1 s1 s2 s2"] {
            let b = parse_braid(text, 3).unwrap();
            let both = b.concat(&b.inverse()).unwrap();
            let run = phi_invariant(&both, CommutationMode::Ordered, 1_000_000, DEFAULT_EPSILON, 2, 6)
                .unwrap();
            assert!(
                run.certificate.output.is_empty(),
                "{text}: reduced to {:?}",
                run.certificate.output
            );
        }
    }

    /// Time reversal forces this identity, but it is checked, not assumed:
    /// the inverse braid is realized on its own and must produce the
    /// reversed event word.
    #[test]
    fn inverse_braid_gives_reversed_word() {
        for text in ["s2 s2", "s1 s1 s2 s2", "s1 s2 s1 s1 s2 s1"] {
            let b = parse_braid(text, 3).unwrap();
            let seed = 13;
            let fwd = f_invariant(&b, DEFAULT_EPSILON, seed, 0).unwrap().word;
            let bwd = f_invariant(&b.inverse(), DEFAULT_EPSILON, seed, 0).unwrap().word;
            assert_eq!(bwd, crate::words::reverse_word(&fwd), "{text}");
        }
    }

    #[test]
    fn event_count_matches_word_length_and_gaps_hold() {
        let b = parse_braid("s1 s1 s2 s2", 4).unwrap();
        let run = f_invariant(&b, DEFAULT_EPSILON, 9, DEFAULT_RETRIES).unwrap();
        assert_eq!(run.events.len(), run.word.len());
        for pair in run.events.windows(2) {
            assert!(pair[1].t - pair[0].t >= Tolerances::default().min_event_gap);
        }
        assert!(parity_vector(&run.word).odd_count() <= run.word.len());
    }

    #[test]
    fn equivalent_braid_words_have_equal_images() {
        // Commuting far-apart generators: the two orders are the same braid.
        let b1 = parse_braid("s1 s1 s3 s3", 4).unwrap();
        let b2 = parse_braid("s3 s3 s1 s1", 4).unwrap();
        let r1 = phi_invariant(&b1, CommutationMode::Ordered, 1_000_000, DEFAULT_EPSILON, 3, 6)
            .unwrap();
        let r2 = phi_invariant(&b2, CommutationMode::Ordered, 1_000_000, DEFAULT_EPSILON, 3, 6)
            .unwrap();
        let out = words_equal(&r1.image, &r2.image, CommutationMode::Ordered, 1_000_000).unwrap();
        assert_eq!(out.verdict, Verdict::Equal);
    }
}
