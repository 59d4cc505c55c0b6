//! Identities `u ≈ v` between words.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{ParseError, Var, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityParseError {
    #[error("identity must have the form `u = v`")]
    MissingEquals,
    #[error("bad word in identity: {0}")]
    Word(#[from] ParseError),
}

/// Which way an identity is used in a rewrite step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Replace an instance of the left side by the right side.
    Forward,
    /// Replace an instance of the right side by the left side.
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// An ordered pair of words, optionally labelled (`w_3`, `aperiodic-1`, ...).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
    #[serde(default)]
    pub tag: String,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Identity {
        Identity {
            lhs,
            rhs,
            tag: String::new(),
        }
    }

    pub fn tagged(lhs: Word, rhs: Word, tag: impl Into<String>) -> Identity {
        Identity {
            lhs,
            rhs,
            tag: tag.into(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn content(&self) -> BTreeSet<Var> {
        let mut c = self.lhs.content();
        c.extend(self.rhs.iter().copied());
        c
    }

    /// Equal occurrence counts of every variable on both sides.
    pub fn is_balanced(&self) -> bool {
        self.lhs.occurrences() == self.rhs.occurrences()
    }

    pub fn swapped(&self) -> Identity {
        Identity {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            tag: self.tag.clone(),
        }
    }

    pub fn reversed(&self) -> Identity {
        Identity {
            lhs: self.lhs.reverse(),
            rhs: self.rhs.reverse(),
            tag: self.tag.clone(),
        }
    }

    /// Variables that must receive a nonempty image for the two sides to
    /// evaluate differently: deleting any one of them equalizes the sides.
    pub fn forced_nonempty(&self) -> BTreeSet<Var> {
        let content = self.content();
        content
            .iter()
            .copied()
            .filter(|&z| {
                let drop = BTreeSet::from([z]);
                self.lhs.delete(&drop) == self.rhs.delete(&drop)
            })
            .collect()
    }

    /// The side matched by a step in the given direction.
    pub fn source(&self, d: Direction) -> &Word {
        match d {
            Direction::Forward => &self.lhs,
            Direction::Backward => &self.rhs,
        }
    }

    /// The side produced by a step in the given direction.
    pub fn target(&self, d: Direction) -> &Word {
        self.source(d.flip())
    }

    /// The n in a `w_n` tag.
    pub fn w_index(&self) -> Option<usize> {
        self.tag.strip_prefix("w_").and_then(|n| n.parse().ok())
    }

    /// Representative of the identity up to renaming and swapping sides:
    /// letters renamed in order of first occurrence in `lhs · rhs`, with the
    /// orientation giving the shortlex-least pair. The tag is dropped.
    pub fn canonical(&self) -> Identity {
        let orient = |a: &Word, b: &Word| {
            let joined = Word::join(&[a, b]).canonical_form();
            let (l, r) = joined.split_at(a.len());
            (Word::from(l), Word::from(r))
        };
        let p = orient(&self.lhs, &self.rhs);
        let q = orient(&self.rhs, &self.lhs);
        let key = |(l, r): &(Word, Word)| (l.len(), l.clone(), r.len(), r.clone());
        let (lhs, rhs) = if key(&q) < key(&p) { q } else { p };
        Identity::new(lhs, rhs)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = IdentityParseError;

    fn from_str(s: &str) -> Result<Identity, IdentityParseError> {
        let (l, r) = s
            .split_once('=')
            .or_else(|| s.split_once('≈'))
            .ok_or(IdentityParseError::MissingEquals)?;
        Ok(Identity::new(l.trim().parse()?, r.trim().parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn canonical_representatives() {
        let a: Identity = "yxyx = xyxy".parse().unwrap();
        let b: Identity = "xyxy = yxyx".parse().unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.canonical().to_string(), "abab = baba");
        let c: Identity = "t = 1".parse().unwrap();
        assert_eq!(c.canonical().to_string(), "1 = a");
    }

    #[test]
    fn parses_with_optional_whitespace() {
        let id: Identity = "xyxy=yxyx".parse().unwrap();
        assert_eq!(id.lhs, w("xyxy"));
        assert_eq!(id.rhs, w("yxyx"));
        let id: Identity = "1 = x".parse().unwrap();
        assert!(id.lhs.is_empty());
        assert_eq!(id.to_string(), "1 = x");
        assert!("xy".parse::<Identity>().is_err());
    }

    #[test]
    fn forced_nonempty_letters() {
        let id: Identity = "xyxy = yxyx".parse().unwrap();
        assert_eq!(id.forced_nonempty(), w("xy").content());
        let cube: Identity = "xt1xt2x = xxxt1t2".parse().unwrap();
        assert_eq!(cube.forced_nonempty(), w("x").content());
        assert!(cube.is_balanced());
        let aper: Identity = "xxx = xxxx".parse().unwrap();
        assert!(!aper.is_balanced());
    }
}
