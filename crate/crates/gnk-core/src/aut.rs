//! The free product of `n(n-1)` copies of the order-two group, one factor
//! per ordered pair label, and the action of oriented triple generators on
//! it by automorphisms: the triple `(i, j, k)` conjugates `a(i,j)` by
//! `a(i,k)` and `a(k,j)` by `a(k,i)`, fixing every other generator.
//!
//! Free reduction is a complete normal form over this alphabet, so
//! automorphism equality is literal equality of reduced generator images.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::words::{reduce_letters, OrderedPairLabel, TripleGenerator, Word, WordError};

/// A freely reduced word in the involutive free-product alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Z2FreeWord(Vec<OrderedPairLabel>);

impl Z2FreeWord {
    /// Reduces on construction; the representation is always reduced.
    pub fn new(letters: Vec<OrderedPairLabel>) -> Self {
        Z2FreeWord(reduce_letters(&letters))
    }

    pub fn identity() -> Self {
        Z2FreeWord(Vec::new())
    }

    pub fn generator(label: OrderedPairLabel) -> Self {
        Z2FreeWord(vec![label])
    }

    pub fn letters(&self) -> &[OrderedPairLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Z2FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "a{l}")?;
        }
        Ok(())
    }
}

/// An endomorphism of the free product given per generator by a reduced
/// word. Identity-mapped generators are omitted from storage; the images
/// arising from the triple action are involutions, hence automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAutomorphism {
    n: u8,
    images: BTreeMap<OrderedPairLabel, Z2FreeWord>,
}

impl FreeAutomorphism {
    pub fn identity(n: u8) -> Self {
        FreeAutomorphism { n, images: BTreeMap::new() }
    }

    pub fn from_images(
        n: u8,
        images: BTreeMap<OrderedPairLabel, Z2FreeWord>,
    ) -> Self {
        let images = images
            .into_iter()
            .filter(|(label, word)| word.letters() != [*label])
            .collect();
        FreeAutomorphism { n, images }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    /// Generators with a non-identity image.
    pub fn moved_generators(&self) -> impl Iterator<Item = &OrderedPairLabel> {
        self.images.keys()
    }

    pub fn image_of(&self, label: OrderedPairLabel) -> Z2FreeWord {
        self.images
            .get(&label)
            .cloned()
            .unwrap_or_else(|| Z2FreeWord::generator(label))
    }

    /// Letterwise substitution followed by free reduction.
    pub fn apply(&self, w: &Z2FreeWord) -> Z2FreeWord {
        let mut letters = Vec::with_capacity(w.len() * 3);
        for &letter in w.letters() {
            match self.images.get(&letter) {
                Some(image) => letters.extend_from_slice(image.letters()),
                None => letters.push(letter),
            }
        }
        Z2FreeWord::new(letters)
    }
}

impl Serialize for FreeAutomorphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.images.len()))?;
        for (label, image) in &self.images {
            map.serialize_entry(&format!("{}.{}", label.first(), label.second()), image)?;
        }
        map.end()
    }
}

/// `(a ∘ b)(x) = a(b(x))` for every generator `x`.
pub fn compose(a: &FreeAutomorphism, b: &FreeAutomorphism) -> Result<FreeAutomorphism, WordError> {
    if a.n != b.n {
        return Err(WordError::ContextMismatch { left: a.n, right: b.n });
    }
    let mut images = BTreeMap::new();
    for (&label, image) in &b.images {
        images.insert(label, a.apply(image));
    }
    for (&label, image) in &a.images {
        images.entry(label).or_insert_with(|| image.clone());
    }
    Ok(FreeAutomorphism::from_images(a.n, images))
}

/// Literal equality of generator images (valid because reduced words are a
/// normal form). Automorphisms over different contexts are never equal.
pub fn aut_equal(a: &FreeAutomorphism, b: &FreeAutomorphism) -> bool {
    a == b
}

/// The action of a raw orientation `(i, j, k)`:
/// `a(i,j) ↦ a(i,k) a(i,j) a(i,k)` and `a(k,j) ↦ a(k,i) a(k,j) a(k,i)`,
/// all other generators fixed.
pub fn g_from_orientation(i: u8, j: u8, k: u8, n: u8) -> Result<FreeAutomorphism, WordError> {
    if i == j || i == k || j == k {
        return Err(WordError::RepeatedIndex);
    }
    let max = i.max(j).max(k);
    if max > n {
        return Err(WordError::IndexOutOfRange { index: max, n });
    }
    let ij = OrderedPairLabel::new(i, j)?;
    let ik = OrderedPairLabel::new(i, k)?;
    let kj = OrderedPairLabel::new(k, j)?;
    let ki = OrderedPairLabel::new(k, i)?;
    let mut images = BTreeMap::new();
    images.insert(ij, Z2FreeWord::new(vec![ik, ij, ik]));
    images.insert(kj, Z2FreeWord::new(vec![ki, kj, ki]));
    Ok(FreeAutomorphism::from_images(n, images))
}

/// The action of a canonical generator, in its stored orientation. The two
/// orientations of a triple give the same automorphism.
pub fn g_of_generator(t: TripleGenerator, n: u8) -> Result<FreeAutomorphism, WordError> {
    g_from_orientation(t.left(), t.middle(), t.right(), n)
}

/// Image of a whole word: composition of the letter actions in word order.
pub fn g_of_word(w: &Word<TripleGenerator>) -> FreeAutomorphism {
    let mut acc = FreeAutomorphism::identity(w.n());
    for &letter in w.letters() {
        let step = g_of_generator(letter, w.n()).expect("word letters fit the context");
        acc = compose(&acc, &step).expect("contexts agree");
    }
    acc
}
