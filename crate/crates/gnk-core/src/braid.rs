//! Braid words in the standard generators, the induced permutation of
//! position slots, and the `s<k>` / `s<k>^-1` text grammar.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidParseError {
    #[error("syntax error at byte {pos}: expected s<k> or s<k>^-1, got {token:?}")]
    Syntax { pos: usize, token: String },
    #[error("generator index {index} out of range 1..={max} at byte {pos}")]
    IndexOutOfRange { index: u32, max: u8, pos: usize },
    #[error("braid group context requires n >= 3, got {0}")]
    ContextTooSmall(u8),
}

/// One Artin generator: strands in position slots `index` and `index + 1`
/// cross, counterclockwise for positive sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: u8,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    n: u8,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(n: u8, letters: Vec<BraidLetter>) -> Result<Self, BraidParseError> {
        if n < 3 {
            return Err(BraidParseError::ContextTooSmall(n));
        }
        for letter in &letters {
            if letter.index == 0 || letter.index > n - 1 {
                return Err(BraidParseError::IndexOutOfRange {
                    index: letter.index as u32,
                    max: n - 1,
                    pos: 0,
                });
            }
            debug_assert!(letter.sign == 1 || letter.sign == -1);
        }
        Ok(BraidWord { n, letters })
    }

    pub fn empty(n: u8) -> Self {
        assert!(n >= 3, "braid group context requires n >= 3");
        BraidWord { n, letters: Vec::new() }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reversed letters with flipped signs.
    pub fn inverse(&self) -> Self {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| BraidLetter { index: l.index, sign: -l.sign })
            .collect();
        BraidWord { n: self.n, letters }
    }

    pub fn concat(&self, other: &Self) -> Result<Self, BraidParseError> {
        if self.n != other.n {
            return Err(BraidParseError::ContextTooSmall(self.n.min(other.n)));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { n: self.n, letters })
    }

    /// The slot where each strand ends: entry `s - 1` is the final position
    /// slot of the strand starting in slot `s`. Signs do not matter here.
    pub fn permutation(&self) -> Vec<u8> {
        let n = self.n as usize;
        let mut occupant: Vec<u8> = (1..=self.n).collect();
        for letter in &self.letters {
            let i = (letter.index - 1) as usize;
            occupant.swap(i, i + 1);
        }
        let mut final_slot = vec![0u8; n];
        for (slot, &strand) in occupant.iter().enumerate() {
            final_slot[(strand - 1) as usize] = slot as u8 + 1;
        }
        final_slot
    }

    pub fn is_pure(&self) -> bool {
        self.permutation()
            .iter()
            .enumerate()
            .all(|(i, &slot)| slot == i as u8 + 1)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "s{}", letter.index)?;
            if letter.sign < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Parses whitespace-separated tokens `s<k>` or `s<k>^-1` with
/// `1 <= k <= n - 1`.
pub fn parse_braid(text: &str, n: u8) -> Result<BraidWord, BraidParseError> {
    if n < 3 {
        return Err(BraidParseError::ContextTooSmall(n));
    }
    let mut letters = Vec::new();
    let mut rest = text;
    let mut offset = 0usize;
    loop {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            break;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let token = &trimmed[..end];
        let pos = offset;
        letters.push(parse_token(token, n, pos)?);
        rest = &trimmed[end..];
        offset += end;
    }
    Ok(BraidWord { n, letters })
}

fn parse_token(token: &str, n: u8, pos: usize) -> Result<BraidLetter, BraidParseError> {
    let syntax = || BraidParseError::Syntax { pos, token: token.to_string() };
    let body = token.strip_prefix('s').ok_or_else(syntax)?;
    let (digits, sign) = match body.strip_suffix("^-1") {
        Some(digits) => (digits, -1),
        None => (body, 1),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax());
    }
    let index: u32 = digits.parse().map_err(|_| syntax())?;
    if index == 0 || index > (n - 1) as u32 {
        return Err(BraidParseError::IndexOutOfRange { index, max: n - 1, pos });
    }
    Ok(BraidLetter { index: index as u8, sign })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let b = parse_braid("s2 s2", 3).unwrap();
        assert_eq!(
            b.letters(),
            &[BraidLetter { index: 2, sign: 1 }, BraidLetter { index: 2, sign: 1 }]
        );
        let b = parse_braid("s1 s1^-1", 3).unwrap();
        assert_eq!(
            b.letters(),
            &[BraidLetter { index: 1, sign: 1 }, BraidLetter { index: 1, sign: -1 }]
        );
        assert_eq!(
            parse_braid("s3", 3),
            Err(BraidParseError::IndexOutOfRange { index: 3, max: 2, pos: 0 })
        );
        assert!(matches!(
            parse_braid("s1 x2", 3),
            Err(BraidParseError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_braid("s", 3), Err(BraidParseError::Syntax { .. })));
    }

    #[test]
    fn display_round_trips() {
        for text in ["", "s1", "s2 s2", "s1^-1 s2 s1^-1"] {
            let b = parse_braid(text, 4).unwrap();
            assert_eq!(parse_braid(&b.to_string(), 4).unwrap(), b);
        }
    }

    #[test]
    fn permutation_examples() {
        let b = parse_braid("s1", 3).unwrap();
        assert_eq!(b.permutation(), vec![2, 1, 3]);
        assert!(!b.is_pure());

        let b = parse_braid("s2 s2", 3).unwrap();
        assert_eq!(b.permutation(), vec![1, 2, 3]);
        assert!(b.is_pure());

        let b = parse_braid("s1 s2", 3).unwrap();
        assert_eq!(b.permutation(), vec![3, 1, 2]);
        assert!(!b.is_pure());
    }

    #[test]
    fn inverse_word() {
        let b = parse_braid("s1 s2^-1", 3).unwrap();
        assert_eq!(b.inverse().to_string(), "s2 s1^-1");
        let joined = b.concat(&b.inverse()).unwrap();
        assert!(joined.is_pure());
    }
}
