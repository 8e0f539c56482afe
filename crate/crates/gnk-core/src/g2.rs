//! Rewriting engine for groups whose generators are unordered pairs of
//! labels, subject to three relation families: squares of generators,
//! commutation of generators with fully disjoint labels, and the exchange
//! move that reverses a triangle segment `a{p,q} a{p,r} a{q,r}`.
//!
//! Commutation and exchange preserve word length, so the engine certifies
//! minimality by exhausting the length-preserving equivalence class of a word
//! and checking that no member contains two adjacent identical letters;
//! whenever such a square shows up it is cancelled and the search restarts
//! from the shorter word.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{OrderedPairLabel, PairPairGenerator, ParityVector};

/// The two readings of "pairwise distinct" for the labels in the commutation
/// and exchange side conditions: distinct as labels, or distinct as the
/// underlying unordered index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommutationMode {
    Ordered,
    UnorderedSets,
}

impl fmt::Display for CommutationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommutationMode::Ordered => write!(f, "ordered"),
            CommutationMode::UnorderedSets => write!(f, "unordered-sets"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("search budget must be at least 1")]
    ZeroBudget,
}

/// A letter of the engine: an unordered pair of two distinct labels, each
/// label projecting to a set key for the `UnorderedSets` reading.
pub trait PairLetter: Copy + Eq + Ord + Hash + fmt::Debug {
    type Label: Copy + Eq + Ord + Hash + fmt::Debug;
    type SetKey: Copy + Eq + Ord + Hash;

    /// The two labels in canonical (sorted) order.
    fn label_pair(&self) -> (Self::Label, Self::Label);
    fn set_key(label: Self::Label) -> Self::SetKey;
    /// Canonical letter from two labels; `None` when the labels coincide.
    fn from_label_pair(a: Self::Label, b: Self::Label) -> Option<Self>;
}

impl PairLetter for PairPairGenerator {
    type Label = OrderedPairLabel;
    type SetKey = (u8, u8);

    fn label_pair(&self) -> (OrderedPairLabel, OrderedPairLabel) {
        (self.low(), self.high())
    }

    fn set_key(label: OrderedPairLabel) -> (u8, u8) {
        label.index_set()
    }

    fn from_label_pair(a: OrderedPairLabel, b: OrderedPairLabel) -> Option<Self> {
        PairPairGenerator::new(a, b).ok()
    }
}

fn all_distinct<K: Eq>(items: &[K]) -> bool {
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i] == items[j] {
                return false;
            }
        }
    }
    true
}

/// Commutation test: the four labels of `x` and `y` must be pairwise
/// distinct under the mode's notion of distinctness.
pub fn commutes<T: PairLetter>(x: T, y: T, mode: CommutationMode) -> bool {
    let (xa, xb) = x.label_pair();
    let (ya, yb) = y.label_pair();
    match mode {
        CommutationMode::Ordered => all_distinct(&[xa, xb, ya, yb]),
        CommutationMode::UnorderedSets => all_distinct(&[
            T::set_key(xa),
            T::set_key(xb),
            T::set_key(ya),
            T::set_key(yb),
        ]),
    }
}

/// If `(x, y, z)` matches `a{p,q} a{p,r} a{q,r}` with p, q, r pairwise
/// distinct under `mode`, the exchange move applies (and replaces the
/// segment by its reversal `a{q,r} a{p,r} a{p,q}`).
fn exchange_matches<T: PairLetter>(x: T, y: T, z: T, mode: CommutationMode) -> bool {
    let (xa, xb) = x.label_pair();
    let (ya, yb) = y.label_pair();
    // p is a common label of x and y, q and r the respective other labels.
    let (p, q) = if xa == ya || xa == yb {
        (xa, xb)
    } else if xb == ya || xb == yb {
        (xb, xa)
    } else {
        return false;
    };
    let r = if p == ya { yb } else { ya };
    let Some(expected) = T::from_label_pair(q, r) else {
        return false;
    };
    if z != expected {
        return false;
    }
    match mode {
        CommutationMode::Ordered => all_distinct(&[p, q, r]),
        CommutationMode::UnorderedSets => {
            all_distinct(&[T::set_key(p), T::set_key(q), T::set_key(r)])
        }
    }
}

/// Applies the exchange move at `pos` if the three letters starting there
/// match the triangle pattern; the move reverses the segment in place.
pub fn exchange_applicable<T: PairLetter>(
    w: &[T],
    pos: usize,
    mode: CommutationMode,
) -> Option<Vec<T>> {
    if pos + 2 >= w.len() {
        return None;
    }
    if !exchange_matches(w[pos], w[pos + 1], w[pos + 2], mode) {
        return None;
    }
    let mut out = w.to_vec();
    out.swap(pos, pos + 2);
    Some(out)
}

/// One relation move applied to a word: an adjacent commutation swap, an
/// exchange of a triangle segment, or cancellation of an adjacent equal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "pos", rename_all = "snake_case")]
pub enum Move {
    Swap(usize),
    Exchange(usize),
    Cancel(usize),
}

/// Applies a single move, if legal. Used to replay certificate traces.
pub fn apply_move<T: PairLetter>(w: &[T], mv: Move, mode: CommutationMode) -> Option<Vec<T>> {
    match mv {
        Move::Swap(pos) => {
            if pos + 1 >= w.len() || !commutes(w[pos], w[pos + 1], mode) {
                return None;
            }
            let mut out = w.to_vec();
            out.swap(pos, pos + 1);
            Some(out)
        }
        Move::Exchange(pos) => exchange_applicable(w, pos, mode),
        Move::Cancel(pos) => {
            if pos + 1 >= w.len() || w[pos] != w[pos + 1] {
                return None;
            }
            let mut out = w.to_vec();
            out.drain(pos..pos + 2);
            Some(out)
        }
    }
}

/// All words one length-preserving move away (commutation swaps and
/// exchanges). Outputs keep the length and letter multiset of `w`.
pub fn neighbors<T: PairLetter>(w: &[T], mode: CommutationMode) -> BTreeSet<Vec<T>> {
    let mut out = BTreeSet::new();
    for_each_neighbor(w, mode, |word, _mv| {
        out.insert(word);
        true
    });
    out
}

/// Deterministic neighbor enumeration: per position, swap before exchange.
/// The callback returns `false` to stop early.
fn for_each_neighbor<T: PairLetter>(
    w: &[T],
    mode: CommutationMode,
    mut visit: impl FnMut(Vec<T>, Move) -> bool,
) {
    for pos in 0..w.len() {
        if pos + 1 < w.len() && w[pos] != w[pos + 1] && commutes(w[pos], w[pos + 1], mode) {
            let mut nb = w.to_vec();
            nb.swap(pos, pos + 1);
            if !visit(nb, Move::Swap(pos)) {
                return;
            }
        }
        if let Some(nb) = exchange_applicable(w, pos, mode) {
            if !visit(nb, Move::Exchange(pos)) {
                return;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReductionStatus {
    MinimalCertified,
    BudgetExhausted,
}

/// Result of a reduction run. `output` is reachable from `input` by relation
/// moves; with `MINIMAL_CERTIFIED` the full length-preserving class of
/// `output` was exhausted square-free and `output` is its lexicographically
/// least member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct ReductionCertificate<T> {
    pub input: Vec<T>,
    pub output: Vec<T>,
    pub status: ReductionStatus,
    pub mode: CommutationMode,
    #[serde(rename = "states")]
    pub states_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub move_trace: Option<Vec<Move>>,
}

impl<T: PairLetter> ReductionCertificate<T> {
    /// Replays the move trace, checking every move is legal and lands on
    /// `output`. Only possible for traced runs.
    pub fn verify_trace(&self) -> bool {
        let Some(trace) = &self.move_trace else {
            return false;
        };
        let mut word = self.input.clone();
        for &mv in trace {
            match apply_move(&word, mv, self.mode) {
                Some(next) => word = next,
                None => return false,
            }
        }
        word == self.output
    }
}

/// Cancels adjacent equal pairs (leftmost first) until none remain,
/// recording the cancellations.
fn cancel_all<T: PairLetter>(mut word: Vec<T>, trace: &mut Option<Vec<Move>>) -> Vec<T> {
    loop {
        let mut cancelled = false;
        let mut pos = 0;
        while pos + 1 < word.len() {
            if word[pos] == word[pos + 1] {
                word.drain(pos..pos + 2);
                if let Some(t) = trace {
                    t.push(Move::Cancel(pos));
                }
                cancelled = true;
            } else {
                pos += 1;
            }
        }
        if !cancelled {
            return word;
        }
    }
}

/// Finds two equal letters separated only by letters commuting with them,
/// i.e. a square reachable by commutation moves alone.
fn find_commutable_pair<T: PairLetter>(w: &[T], mode: CommutationMode) -> Option<(usize, usize)> {
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[j] == w[i] {
                return Some((i, j));
            }
            if !commutes(w[i], w[j], mode) {
                break;
            }
        }
    }
    None
}

enum ClassOutcome<T> {
    /// A square was found; the word after cancellation, strictly shorter.
    Shorter(Vec<T>),
    /// Class exhausted square-free; its lexicographically least member.
    Exhausted(Vec<T>),
    /// Budget ran out; least member seen so far.
    Budget(Vec<T>),
}

struct ClassSearch<T> {
    visited: HashMap<Vec<T>, u32>,
    meta: Vec<(u32, Move)>, // parent index and the move that produced a state
}

impl<T: PairLetter> ClassSearch<T> {
    fn path_to(&self, mut idx: u32) -> Vec<Move> {
        let mut moves = Vec::new();
        while idx != u32::MAX {
            let (parent, mv) = self.meta[idx as usize];
            if parent == u32::MAX {
                break;
            }
            moves.push(mv);
            idx = parent;
        }
        moves.reverse();
        moves
    }
}

/// Breadth-first search of the length-preserving class of `start`. Stops at
/// the first reachable word containing an adjacent equal pair and cancels it.
fn class_search<T: PairLetter>(
    start: &[T],
    mode: CommutationMode,
    budget: u64,
    states: &mut u64,
    trace: &mut Option<Vec<Move>>,
) -> ClassOutcome<T> {
    let mut search = ClassSearch { visited: HashMap::new(), meta: Vec::new() };
    let mut queue: VecDeque<(Vec<T>, u32)> = VecDeque::new();

    *states += 1;
    search.visited.insert(start.to_vec(), 0);
    search.meta.push((u32::MAX, Move::Swap(0)));
    queue.push_back((start.to_vec(), 0));

    let mut lex_min = start.to_vec();
    let mut lex_min_idx = 0u32;
    let mut truncated = false;

    while let Some((word, idx)) = queue.pop_front() {
        let mut result: Option<Vec<T>> = None;
        for_each_neighbor(&word, mode, |nb, mv| {
            if nb.windows(2).any(|p| p[0] == p[1]) {
                // A square: cancel it and restart from the shorter word.
                if let Some(t) = trace {
                    t.extend(search.path_to(idx));
                    t.push(mv);
                }
                result = Some(cancel_all(nb, trace));
                return false;
            }
            if search.visited.contains_key(&nb) {
                return true;
            }
            if *states >= budget {
                // Keep scanning for squares, but the class can no longer
                // be exhausted.
                truncated = true;
                return true;
            }
            *states += 1;
            let nb_idx = search.meta.len() as u32;
            search.meta.push((idx, mv));
            if nb < lex_min {
                lex_min = nb.clone();
                lex_min_idx = nb_idx;
            }
            search.visited.insert(nb.clone(), nb_idx);
            queue.push_back((nb, nb_idx));
            true
        });
        if let Some(shorter) = result {
            return ClassOutcome::Shorter(shorter);
        }
    }
    if let Some(t) = trace {
        t.extend(search.path_to(lex_min_idx));
    }
    if truncated {
        ClassOutcome::Budget(lex_min)
    } else {
        ClassOutcome::Exhausted(lex_min)
    }
}

fn reduce_impl<T: PairLetter>(
    input: &[T],
    mode: CommutationMode,
    budget: u64,
    want_trace: bool,
) -> Result<ReductionCertificate<T>, EngineError> {
    if budget < 1 {
        return Err(EngineError::ZeroBudget);
    }
    let mut trace: Option<Vec<Move>> = want_trace.then(Vec::new);
    let mut states: u64 = 0;
    let mut current = input.to_vec();

    loop {
        // Cheap pass: cancel squares reachable by commutation moves alone.
        while let Some((i, j)) = find_commutable_pair(&current, mode) {
            if let Some(t) = &mut trace {
                for k in i..j - 1 {
                    t.push(Move::Swap(k));
                }
                t.push(Move::Cancel(j - 1));
            }
            current.remove(j);
            current.remove(i);
        }
        if current.is_empty() {
            break;
        }
        match class_search(&current, mode, budget, &mut states, &mut trace) {
            ClassOutcome::Shorter(word) => current = word,
            ClassOutcome::Exhausted(word) => {
                return Ok(ReductionCertificate {
                    input: input.to_vec(),
                    output: word,
                    status: ReductionStatus::MinimalCertified,
                    mode,
                    states_explored: states,
                    move_trace: trace,
                });
            }
            ClassOutcome::Budget(word) => {
                return Ok(ReductionCertificate {
                    input: input.to_vec(),
                    output: word,
                    status: ReductionStatus::BudgetExhausted,
                    mode,
                    states_explored: states,
                    move_trace: trace,
                });
            }
        }
    }
    Ok(ReductionCertificate {
        input: input.to_vec(),
        output: Vec::new(),
        status: ReductionStatus::MinimalCertified,
        mode,
        states_explored: states,
        move_trace: trace,
    })
}

/// Reduces `input` to a word of certified minimal length when the budget
/// permits: squares are cancelled eagerly, and between cancellations the
/// length-preserving class is searched breadth-first with memoization.
pub fn reduce_to_minimal<T: PairLetter>(
    input: &[T],
    mode: CommutationMode,
    budget: u64,
) -> Result<ReductionCertificate<T>, EngineError> {
    reduce_impl(input, mode, budget, false)
}

/// Same as [`reduce_to_minimal`] but records the move trace.
pub fn reduce_to_minimal_traced<T: PairLetter>(
    input: &[T],
    mode: CommutationMode,
    budget: u64,
) -> Result<ReductionCertificate<T>, EngineError> {
    reduce_impl(input, mode, budget, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equal,
    Distinct,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "T: Serialize"), tag = "kind", rename_all = "snake_case")]
pub enum EqualityEvidence<T> {
    ReductionToEmpty { certificate: ReductionCertificate<T> },
    ParityCertificate { left_odd: Vec<T>, right_odd: Vec<T> },
    ExhaustedMinimalSearch { certificate: ReductionCertificate<T> },
    BudgetExhausted { certificate: ReductionCertificate<T> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct EqualityOutcome<T> {
    pub verdict: Verdict,
    pub evidence: EqualityEvidence<T>,
}

/// Decides `u = v` by reducing `u · reverse(v)` (generators are involutions,
/// so reversal inverts). A differing parity vector short-circuits to
/// `DISTINCT`; `UNKNOWN` occurs only on budget exhaustion.
pub fn words_equal<T: PairLetter>(
    u: &[T],
    v: &[T],
    mode: CommutationMode,
    budget: u64,
) -> Result<EqualityOutcome<T>, EngineError> {
    if budget < 1 {
        return Err(EngineError::ZeroBudget);
    }
    let pu = ParityVector::of_letters(u);
    let pv = ParityVector::of_letters(v);
    if pu != pv {
        return Ok(EqualityOutcome {
            verdict: Verdict::Distinct,
            evidence: EqualityEvidence::ParityCertificate {
                left_odd: pu.odd_generators().copied().collect(),
                right_odd: pv.odd_generators().copied().collect(),
            },
        });
    }
    let mut joined = u.to_vec();
    joined.extend(v.iter().rev().copied());
    let certificate = reduce_to_minimal(&joined, mode, budget)?;
    Ok(match certificate.status {
        ReductionStatus::MinimalCertified if certificate.output.is_empty() => EqualityOutcome {
            verdict: Verdict::Equal,
            evidence: EqualityEvidence::ReductionToEmpty { certificate },
        },
        ReductionStatus::MinimalCertified => EqualityOutcome {
            verdict: Verdict::Distinct,
            evidence: EqualityEvidence::ExhaustedMinimalSearch { certificate },
        },
        ReductionStatus::BudgetExhausted => EqualityOutcome {
            verdict: Verdict::Unknown,
            evidence: EqualityEvidence::BudgetExhausted { certificate },
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MinimalityStatus {
    MinimalCertified,
    NotMinimal,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct MinimalityCertificate<T> {
    pub word: Vec<T>,
    pub status: MinimalityStatus,
    pub mode: CommutationMode,
    pub reduction: ReductionCertificate<T>,
}

/// Certifies whether `w` already has minimal length: its length-preserving
/// class must exhaust square-free within budget.
pub fn is_minimal<T: PairLetter>(
    w: &[T],
    mode: CommutationMode,
    budget: u64,
) -> Result<MinimalityCertificate<T>, EngineError> {
    let reduction = reduce_to_minimal(w, mode, budget)?;
    let status = match reduction.status {
        ReductionStatus::MinimalCertified if reduction.output.len() == w.len() => {
            MinimalityStatus::MinimalCertified
        }
        ReductionStatus::MinimalCertified => MinimalityStatus::NotMinimal,
        // Already strictly shorter: not minimal even though the final class
        // was not exhausted.
        ReductionStatus::BudgetExhausted if reduction.output.len() < w.len() => {
            MinimalityStatus::NotMinimal
        }
        ReductionStatus::BudgetExhausted => MinimalityStatus::BudgetExhausted,
    };
    Ok(MinimalityCertificate { word: w.to_vec(), status, mode, reduction })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum G2RelatorTag {
    Square,
    Commutation,
    Exchange,
}

/// All ordered-pair labels over strands `1..=n`.
pub fn ordered_pair_labels(n: u8) -> Vec<OrderedPairLabel> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(OrderedPairLabel::new(i, j).unwrap());
            }
        }
    }
    out.sort();
    out
}

/// All generators of the pair-of-ordered-pairs group over strands `1..=n`.
pub fn pair_pair_generators(n: u8) -> Vec<PairPairGenerator> {
    let labels = ordered_pair_labels(n);
    let mut out = Vec::new();
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            out.push(PairPairGenerator::new(a, b).unwrap());
        }
    }
    out.sort();
    out
}

/// The defining relators of the group, as words, under the given mode:
/// squares, commutation words `x y x y`, and exchange words
/// `(a{p,q} a{p,r} a{q,r})²` (one representative per label triple, the rest
/// being cyclic rotations or reversals of it).
pub fn g2_relators(
    n: u8,
    mode: CommutationMode,
) -> Vec<(G2RelatorTag, Vec<PairPairGenerator>)> {
    let labels = ordered_pair_labels(n);
    let gens = pair_pair_generators(n);
    let mut out = Vec::new();
    for &g in &gens {
        out.push((G2RelatorTag::Square, vec![g, g]));
    }
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i + 1..] {
            if commutes(x, y, mode) {
                out.push((G2RelatorTag::Commutation, vec![x, y, x, y]));
            }
        }
    }
    for (i, &p) in labels.iter().enumerate() {
        for (j, &q) in labels.iter().enumerate().skip(i + 1) {
            for &r in &labels[j + 1..] {
                let distinct = match mode {
                    CommutationMode::Ordered => true,
                    CommutationMode::UnorderedSets => all_distinct(&[
                        p.index_set(),
                        q.index_set(),
                        r.index_set(),
                    ]),
                };
                if !distinct {
                    continue;
                }
                let a = PairPairGenerator::new(p, q).unwrap();
                let b = PairPairGenerator::new(p, r).unwrap();
                let c = PairPairGenerator::new(q, r).unwrap();
                out.push((G2RelatorTag::Exchange, vec![a, b, c, a, b, c]));
            }
        }
    }
    out
}
