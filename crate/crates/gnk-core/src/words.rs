//! Alphabets and word machinery shared by every group in the toolkit.
//!
//! Every generator of every group handled here is an involution, so the
//! inverse of a word is its letterwise reversal and free reduction is plain
//! cancellation of adjacent equal letters. Words of different generator kinds
//! are distinct types and can never be mixed.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("strand index {index} out of range 1..={n}")]
    IndexOutOfRange { index: u8, n: u8 },
    #[error("indices of a generator must be pairwise distinct")]
    RepeatedIndex,
    #[error("the two labels of a pair generator must differ")]
    EqualLabels,
    #[error("group contexts differ: n={left} vs n={right}")]
    ContextMismatch { left: u8, right: u8 },
    #[error("group context requires n >= 3, got {0}")]
    ContextTooSmall(u8),
}

/// 1-based strand index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrandIndex(u8);

impl StrandIndex {
    pub fn new(value: u8) -> Result<Self, WordError> {
        if value == 0 {
            return Err(WordError::IndexOutOfRange { index: 0, n: u8::MAX });
        }
        Ok(StrandIndex(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for StrandIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered pair of distinct strand indices. `(i, j)` and `(j, i)` are
/// different labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 2]", into = "[u8; 2]")]
pub struct OrderedPairLabel {
    first: StrandIndex,
    second: StrandIndex,
}

impl OrderedPairLabel {
    pub fn new(first: u8, second: u8) -> Result<Self, WordError> {
        if first == second {
            return Err(WordError::RepeatedIndex);
        }
        Ok(OrderedPairLabel {
            first: StrandIndex::new(first)?,
            second: StrandIndex::new(second)?,
        })
    }

    pub fn first(self) -> u8 {
        self.first.get()
    }

    pub fn second(self) -> u8 {
        self.second.get()
    }

    /// The underlying unordered 2-element set, as a sorted pair.
    pub fn index_set(self) -> (u8, u8) {
        let (a, b) = (self.first.get(), self.second.get());
        (a.min(b), a.max(b))
    }
}

impl TryFrom<[u8; 2]> for OrderedPairLabel {
    type Error = WordError;
    fn try_from(v: [u8; 2]) -> Result<Self, Self::Error> {
        OrderedPairLabel::new(v[0], v[1])
    }
}

impl From<OrderedPairLabel> for [u8; 2] {
    fn from(l: OrderedPairLabel) -> [u8; 2] {
        [l.first(), l.second()]
    }
}

impl fmt::Display for OrderedPairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first, self.second)
    }
}

/// Generator indexed by an ordered triple of distinct strands, identified
/// with its reversal. The middle slot is meaningful; the canonical form
/// stores the smaller endpoint on the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 3]", into = "[u8; 3]")]
pub struct TripleGenerator {
    left: StrandIndex,
    middle: StrandIndex,
    right: StrandIndex,
}

impl TripleGenerator {
    pub fn new(left: u8, middle: u8, right: u8) -> Result<Self, WordError> {
        if left == middle || left == right || middle == right {
            return Err(WordError::RepeatedIndex);
        }
        let (left, right) = if left <= right { (left, right) } else { (right, left) };
        Ok(TripleGenerator {
            left: StrandIndex::new(left)?,
            middle: StrandIndex::new(middle)?,
            right: StrandIndex::new(right)?,
        })
    }

    pub fn left(self) -> u8 {
        self.left.get()
    }

    pub fn middle(self) -> u8 {
        self.middle.get()
    }

    pub fn right(self) -> u8 {
        self.right.get()
    }

    /// The three indices as a sorted set.
    pub fn support(self) -> [u8; 3] {
        let mut s = [self.left(), self.middle(), self.right()];
        s.sort_unstable();
        s
    }
}

impl TryFrom<[u8; 3]> for TripleGenerator {
    type Error = WordError;
    fn try_from(v: [u8; 3]) -> Result<Self, Self::Error> {
        TripleGenerator::new(v[0], v[1], v[2])
    }
}

impl From<TripleGenerator> for [u8; 3] {
    fn from(g: TripleGenerator) -> [u8; 3] {
        [g.left(), g.middle(), g.right()]
    }
}

impl fmt::Display for TripleGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a'{}{}{}", self.left, self.middle, self.right)
    }
}

/// Generator indexed by an unordered triple of distinct strands (the middle
/// distinction is forgotten). Stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 3]", into = "[u8; 3]")]
pub struct UnorderedTripleGenerator([StrandIndex; 3]);

impl UnorderedTripleGenerator {
    pub fn new(a: u8, b: u8, c: u8) -> Result<Self, WordError> {
        if a == b || a == c || b == c {
            return Err(WordError::RepeatedIndex);
        }
        let mut s = [a, b, c];
        s.sort_unstable();
        Ok(UnorderedTripleGenerator([
            StrandIndex::new(s[0])?,
            StrandIndex::new(s[1])?,
            StrandIndex::new(s[2])?,
        ]))
    }

    pub fn support(self) -> [u8; 3] {
        [self.0[0].get(), self.0[1].get(), self.0[2].get()]
    }
}

impl From<TripleGenerator> for UnorderedTripleGenerator {
    fn from(g: TripleGenerator) -> Self {
        let s = g.support();
        UnorderedTripleGenerator::new(s[0], s[1], s[2]).expect("triple support is distinct")
    }
}

impl TryFrom<[u8; 3]> for UnorderedTripleGenerator {
    type Error = WordError;
    fn try_from(v: [u8; 3]) -> Result<Self, Self::Error> {
        UnorderedTripleGenerator::new(v[0], v[1], v[2])
    }
}

impl From<UnorderedTripleGenerator> for [u8; 3] {
    fn from(g: UnorderedTripleGenerator) -> [u8; 3] {
        g.support()
    }
}

impl fmt::Display for UnorderedTripleGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// Generator indexed by an unordered pair of distinct ordered-pair labels.
/// Stored with the lexicographically smaller label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[u8; 2]; 2]", into = "[[u8; 2]; 2]")]
pub struct PairPairGenerator {
    low: OrderedPairLabel,
    high: OrderedPairLabel,
}

impl PairPairGenerator {
    pub fn new(a: OrderedPairLabel, b: OrderedPairLabel) -> Result<Self, WordError> {
        if a == b {
            return Err(WordError::EqualLabels);
        }
        let (low, high) = if a < b { (a, b) } else { (b, a) };
        Ok(PairPairGenerator { low, high })
    }

    pub fn from_indices(i: u8, j: u8, k: u8, l: u8) -> Result<Self, WordError> {
        PairPairGenerator::new(OrderedPairLabel::new(i, j)?, OrderedPairLabel::new(k, l)?)
    }

    pub fn low(self) -> OrderedPairLabel {
        self.low
    }

    pub fn high(self) -> OrderedPairLabel {
        self.high
    }

    pub fn labels(self) -> [OrderedPairLabel; 2] {
        [self.low, self.high]
    }
}

impl TryFrom<[[u8; 2]; 2]> for PairPairGenerator {
    type Error = WordError;
    fn try_from(v: [[u8; 2]; 2]) -> Result<Self, Self::Error> {
        PairPairGenerator::new(v[0].try_into()?, v[1].try_into()?)
    }
}

impl From<PairPairGenerator> for [[u8; 2]; 2] {
    fn from(g: PairPairGenerator) -> [[u8; 2]; 2] {
        [g.low.into(), g.high.into()]
    }
}

impl fmt::Display for PairPairGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{},{}", self.low, self.high)
    }
}

/// A word letter: anything canonical, order-stable and bound-checkable.
pub trait Letter: Copy + Eq + Ord + Hash + fmt::Debug {
    /// Largest strand index mentioned by the letter.
    fn max_index(&self) -> u8;
}

impl Letter for TripleGenerator {
    fn max_index(&self) -> u8 {
        self.support()[2]
    }
}

impl Letter for UnorderedTripleGenerator {
    fn max_index(&self) -> u8 {
        self.support()[2]
    }
}

impl Letter for PairPairGenerator {
    fn max_index(&self) -> u8 {
        let a = self.low.index_set();
        let b = self.high.index_set();
        a.1.max(b.1)
    }
}

impl Letter for OrderedPairLabel {
    fn max_index(&self) -> u8 {
        self.index_set().1
    }
}

/// A finite word over one generator kind, in a declared group context `n`.
/// The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<G> {
    n: u8,
    letters: Vec<G>,
}

impl<G: Letter> Word<G> {
    pub fn new(n: u8, letters: Vec<G>) -> Result<Self, WordError> {
        if n < 3 {
            return Err(WordError::ContextTooSmall(n));
        }
        for letter in &letters {
            if letter.max_index() > n {
                return Err(WordError::IndexOutOfRange { index: letter.max_index(), n });
            }
        }
        Ok(Word { n, letters })
    }

    pub fn empty(n: u8) -> Self {
        assert!(n >= 3, "group context requires n >= 3");
        Word { n, letters: Vec::new() }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn letters(&self) -> &[G] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<G> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Result<Self, WordError> {
        if self.n != other.n {
            return Err(WordError::ContextMismatch { left: self.n, right: other.n });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }
}

/// Cancels adjacent equal letters until none remain. Since all generators
/// are involutions this is exactly free reduction.
pub fn free_reduce_involutive<G: Letter>(w: &Word<G>) -> Word<G> {
    Word { n: w.n, letters: reduce_letters(&w.letters) }
}

/// Slice-level free reduction; single stack pass removes all adjacent pairs.
pub fn reduce_letters<G: Eq + Copy>(letters: &[G]) -> Vec<G> {
    let mut stack: Vec<G> = Vec::with_capacity(letters.len());
    for &letter in letters {
        if stack.last() == Some(&letter) {
            stack.pop();
        } else {
            stack.push(letter);
        }
    }
    stack
}

/// The inverse of a word of involutions: its letters in reverse order.
pub fn reverse_word<G: Letter>(w: &Word<G>) -> Word<G> {
    let mut letters = w.letters.clone();
    letters.reverse();
    Word { n: w.n, letters }
}

/// Per-generator letter count mod 2. Invariant under every relation of every
/// group in this toolkit, since each relator uses each generator an even
/// number of times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ParityVector<G: Ord>(BTreeSet<G>);

impl<G: Ord + Copy> ParityVector<G> {
    pub fn of_letters(letters: &[G]) -> Self {
        let mut odd = BTreeSet::new();
        for letter in letters {
            if !odd.remove(letter) {
                odd.insert(*letter);
            }
        }
        ParityVector(odd)
    }

    pub fn zero() -> Self {
        ParityVector(BTreeSet::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn odd_count(&self) -> usize {
        self.0.len()
    }

    pub fn odd_generators(&self) -> impl Iterator<Item = &G> {
        self.0.iter()
    }

    /// Componentwise XOR; parity of a concatenation.
    pub fn xor(&self, other: &Self) -> Self {
        ParityVector(self.0.symmetric_difference(&other.0).copied().collect())
    }
}

pub fn parity_vector<G: Letter>(w: &Word<G>) -> ParityVector<G> {
    ParityVector::of_letters(&w.letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(a: u8, b: u8, c: u8) -> TripleGenerator {
        TripleGenerator::new(a, b, c).unwrap()
    }

    #[test]
    fn triple_canonicalizes_under_end_reversal() {
        assert_eq!(t(1, 2, 3), t(3, 2, 1));
        assert_ne!(t(1, 2, 3), t(1, 3, 2));
        assert_eq!(t(3, 1, 2).left(), 2);
        assert_eq!(t(3, 1, 2).middle(), 1);
        assert_eq!(t(3, 1, 2).right(), 3);
    }

    #[test]
    fn triple_rejects_repeats_and_zero() {
        assert_eq!(TripleGenerator::new(1, 1, 2), Err(WordError::RepeatedIndex));
        assert!(TripleGenerator::new(0, 1, 2).is_err());
    }

    #[test]
    fn pair_pair_canonicalizes_and_rejects_equal_labels() {
        let a = OrderedPairLabel::new(3, 2).unwrap();
        let b = OrderedPairLabel::new(1, 2).unwrap();
        let g = PairPairGenerator::new(a, b).unwrap();
        assert_eq!(g.low(), b);
        assert_eq!(g.high(), a);
        assert_eq!(PairPairGenerator::new(a, a), Err(WordError::EqualLabels));
        // (i, j) and (j, i) are distinct labels, so the pair is legal.
        let ij = OrderedPairLabel::new(1, 2).unwrap();
        let ji = OrderedPairLabel::new(2, 1).unwrap();
        assert!(PairPairGenerator::new(ij, ji).is_ok());
    }

    #[test]
    fn serde_applies_canonical_ordering_on_read() {
        let g: TripleGenerator = serde_json::from_str("[3,2,1]").unwrap();
        assert_eq!(g, t(1, 2, 3));
        let p: PairPairGenerator = serde_json::from_str("[[3,2],[1,2]]").unwrap();
        assert_eq!(p, PairPairGenerator::from_indices(1, 2, 3, 2).unwrap());
        assert_eq!(serde_json::to_string(&t(3, 1, 2)).unwrap(), "[2,1,3]");
    }

    #[test]
    fn word_checks_context() {
        let w = Word::new(3, vec![t(1, 2, 3)]).unwrap();
        assert_eq!(w.n(), 3);
        assert_eq!(
            Word::new(3, vec![t(1, 2, 4)]),
            Err(WordError::IndexOutOfRange { index: 4, n: 3 })
        );
        let other = Word::new(4, vec![t(1, 2, 3)]).unwrap();
        assert_eq!(
            w.concat(&other),
            Err(WordError::ContextMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn free_reduce_examples() {
        let x = t(1, 2, 3);
        let y = t(1, 3, 2);
        let reduce = |letters: Vec<TripleGenerator>| {
            free_reduce_involutive(&Word::new(4, letters).unwrap()).into_letters()
        };
        assert_eq!(reduce(vec![x, x]), vec![]);
        assert_eq!(reduce(vec![x, y, y, x]), vec![]);
        assert_eq!(reduce(vec![x, y, x]), vec![x, y, x]);
    }

    #[test]
    fn reverse_examples() {
        let x = t(1, 2, 3);
        let y = t(1, 3, 2);
        let z = t(2, 1, 3);
        let rev = |letters: Vec<TripleGenerator>| {
            reverse_word(&Word::new(4, letters).unwrap()).into_letters()
        };
        assert_eq!(rev(vec![]), vec![]);
        assert_eq!(rev(vec![x, y]), vec![y, x]);
        assert_eq!(rev(vec![x, y, z]), vec![z, y, x]);
    }

    #[test]
    fn parity_examples() {
        let x = t(1, 2, 3);
        let y = t(1, 3, 2);
        assert!(ParityVector::<TripleGenerator>::of_letters(&[]).is_zero());
        let p = ParityVector::of_letters(&[x, y, x]);
        assert_eq!(p.odd_count(), 1);
        assert_eq!(p.odd_generators().copied().collect::<Vec<_>>(), vec![y]);
    }

    fn all_triples(n: u8) -> Vec<TripleGenerator> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                for k in i + 1..=n {
                    if j != i && j != k {
                        out.push(t(i, j, k));
                    }
                }
            }
        }
        out
    }

    fn arb_word(n: u8, max_len: usize) -> impl Strategy<Value = Word<TripleGenerator>> {
        let gens = all_triples(n);
        prop::collection::vec(0..gens.len(), 0..=max_len)
            .prop_map(move |ix| Word::new(n, ix.into_iter().map(|i| gens[i]).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent_and_square_free(w in arb_word(5, 12)) {
            let r = free_reduce_involutive(&w);
            prop_assert!(r.len() <= w.len());
            prop_assert_eq!(free_reduce_involutive(&r).clone(), r.clone());
            for pair in r.letters().windows(2) {
                prop_assert_ne!(pair[0], pair[1]);
            }
            prop_assert_eq!(w.len() % 2, r.len() % 2);
        }

        #[test]
        fn parity_survives_reduction_and_reversal(w in arb_word(5, 12)) {
            let p = parity_vector(&w);
            prop_assert_eq!(p.clone(), parity_vector(&free_reduce_involutive(&w)));
            prop_assert_eq!(p.clone(), parity_vector(&reverse_word(&w)));
        }

        #[test]
        fn reverse_is_an_involution_and_inverts(w in arb_word(5, 10)) {
            let r = reverse_word(&w);
            prop_assert_eq!(reverse_word(&r).clone(), w.clone());
            let product = w.concat(&r).unwrap();
            prop_assert!(free_reduce_involutive(&product).is_empty());
        }

        #[test]
        fn parity_is_a_homomorphism(u in arb_word(5, 8), v in arb_word(5, 8)) {
            let joined = u.concat(&v).unwrap();
            prop_assert_eq!(
                parity_vector(&joined),
                parity_vector(&u).xor(&parity_vector(&v))
            );
        }
    }
}
