//! The identity system and the two word catalogues it is tested against.
//!
//! The system consists of three aperiodicity identities and the family
//! `w_n ≈ w'_n` for `n ≥ 2`, where
//! `w_n = x0 z1 x y z2 · x1 x0 x2 x1 … xn x(n-1) · z1 x y z2 · xn` and `w'_n`
//! swaps both `xy` factors to `yx`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::identity::Identity;
use crate::substitution::Substitution;
use crate::word::{w, Var, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("index {0} out of range (need n >= {1})")]
    OutOfRange(usize, usize),
}

pub const APERIODIC_GATHER: &str = "aperiodic-1";
pub const APERIODIC_SHIFT: &str = "aperiodic-2";
pub const APERIODIC_POWER: &str = "aperiodic-3";

fn x(i: usize) -> Var {
    Var::indexed('x', i as u32)
}

/// `x1 x0 x2 x1 … xn x(n-1)`.
pub fn make_u(n: usize) -> Result<Word, SigmaError> {
    if n < 1 {
        return Err(SigmaError::OutOfRange(n, 1));
    }
    Ok((1..=n).flat_map(|k| [x(k), x(k - 1)]).collect())
}

/// `x0 x · x1x0 x2x1 … xn x(n-1) · x xn`: the family word with `y` and the
/// padding erased.
pub fn sandwich_word(n: usize) -> Result<Word, SigmaError> {
    let u = make_u(n)?;
    let xv = Var::letter('x');
    Ok(Word::join(&[&[x(0), xv], &u, &[xv, x(n)]]))
}

fn make_family(n: usize, swapped: bool) -> Result<Word, SigmaError> {
    let u = make_u(n)?;
    let pair = if swapped { w("z1yxz2") } else { w("z1xyz2") };
    Ok(Word::join(&[&[x(0)], &pair, &u, &pair, &[x(n)]]))
}

pub fn make_w(n: usize) -> Result<Word, SigmaError> {
    make_family(n, false)
}

pub fn make_w_prime(n: usize) -> Result<Word, SigmaError> {
    make_family(n, true)
}

/// `w_n ≈ w'_n`, tagged `w_n`. Defined for `n ≥ 1`, although only `n ≥ 2`
/// belongs to the system.
pub fn w_identity(n: usize) -> Result<Identity, SigmaError> {
    Ok(Identity::tagged(make_w(n)?, make_w_prime(n)?, format!("w_{n}")))
}

/// The substitution sending `w_n ≈ w'_n` to `w_1 ≈ w'_1`: every `xi` is
/// erased and the outer letters `x0`, `x1` of `w_1` ride on the padding.
pub fn collapse_to_w1(n: usize) -> Substitution {
    let mut theta = Substitution::identity()
        .with(Var::indexed('z', 1), w("x0z1"))
        .with(Var::indexed('z', 2), w("z2x1"));
    for i in 0..=n {
        theta.set(x(i), Word::empty());
    }
    theta
}

/// The three aperiodicity identities, in system order.
pub fn aperiodic_identities() -> Vec<Identity> {
    vec![
        Identity::tagged(w("xt1xt2x"), w("xxxt1t2"), APERIODIC_GATHER),
        Identity::tagged(w("xxxt1t2"), w("t1t2xxx"), APERIODIC_SHIFT),
        Identity::tagged(w("xxx"), w("xxxx"), APERIODIC_POWER),
    ]
}

/// The system truncated at `n_max`: the aperiodic trio, then `w_n ≈ w'_n`
/// for `2 ≤ n ≤ n_max`.
pub fn sigma_members(n_max: usize) -> Result<Vec<Identity>, SigmaError> {
    if n_max < 2 {
        return Err(SigmaError::OutOfRange(n_max, 2));
    }
    let mut out = aperiodic_identities();
    for n in 2..=n_max {
        out.push(w_identity(n)?);
    }
    Ok(out)
}

/// Look up a member by tag (`w_5`, `aperiodic-2`).
pub fn member_by_tag(tag: &str) -> Option<Identity> {
    if let Some(n) = tag.strip_prefix("w_").and_then(|s| s.parse::<usize>().ok()) {
        return (n >= 2).then(|| w_identity(n).expect("n >= 2"));
    }
    aperiodic_identities().into_iter().find(|id| id.tag == tag)
}

/// Whether `id` is literally a member of the system (same tag and sides).
pub fn is_member(id: &Identity) -> bool {
    member_by_tag(&id.tag).is_some_and(|m| m.lhs == id.lhs && m.rhs == id.rhs)
}

pub fn catalogue_u() -> Vec<Word> {
    ["xyyx", "xxyy", "xtyxy", "xytxy", "xyxty", "xyzyxz", "zxyzyx"]
        .iter()
        .map(|s| w(s))
        .collect()
}

/// The three short words that head the second catalogue.
pub const EXTRA_WORDS: [&str; 3] = ["xxyy", "xyzyxz", "zxyzyx"];

/// The twenty base words, keyed by `group.index`.
pub const BASE_WORDS: [(&str, &str); 20] = [
    ("1.1", "atxyaxy"),
    ("2.1", "abaxybxy"),
    ("2.2", "abxyaxyb"),
    ("3.1", "abbxyaxy"),
    ("3.2", "abxybaxy"),
    ("3.3", "xyabbaxy"),
    ("4.1", "abxyacbcxy"),
    ("5.1", "axybcbacxy"),
    ("5.2", "axybbcacxy"),
    ("5.3", "axybbaccxy"),
    ("5.4", "axybbacxyc"),
    ("6.1", "axybcabxyc"),
    ("7.1", "axybcabdcxyd"),
    ("7.2", "abxyacbddxyc"),
    ("7.3", "abxyacbdxycd"),
    ("7.4", "axybcabdcdxy"),
    ("8.1", "xyabcadbecdexy"),
    ("9.1", "xydcdabcaebexy"),
    ("9.2", "dxycdabcaebexy"),
    ("9.3", "dxycdabcaebxye"),
];

pub const CATALOGUE_V_SIZE: usize = 37;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub word: Word,
    /// `None` for the three short extra words.
    pub group: Option<u8>,
    pub index: u8,
    pub reversed: bool,
}

impl CatalogueEntry {
    /// `3.3`, `3.2r`, or `extra-2`.
    pub fn label(&self) -> String {
        match self.group {
            Some(g) => format!("{g}.{}{}", self.index, if self.reversed { "r" } else { "" }),
            None => format!("extra-{}", self.index),
        }
    }
}

impl fmt::Display for CatalogueEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.label(), self.word)
    }
}

fn parse_label(label: &str) -> (u8, u8) {
    let (g, i) = label.split_once('.').expect("group.index");
    (g.parse().expect("group"), i.parse().expect("index"))
}

/// The 37-word catalogue: the extras, then each base word followed by its
/// reverse unless the reverse duplicates an earlier entry up to renaming.
pub fn catalogue_v() -> Vec<CatalogueEntry> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |entry: CatalogueEntry, out: &mut Vec<CatalogueEntry>| {
        if seen.insert(entry.word.canonical_form()) {
            out.push(entry);
        }
    };
    for (i, s) in EXTRA_WORDS.iter().enumerate() {
        push(
            CatalogueEntry { word: w(s), group: None, index: i as u8 + 1, reversed: false },
            &mut out,
        );
    }
    for (label, s) in BASE_WORDS {
        let (group, index) = parse_label(label);
        let word = w(s);
        let rev = word.reverse();
        push(CatalogueEntry { word, group: Some(group), index, reversed: false }, &mut out);
        push(CatalogueEntry { word: rev, group: Some(group), index, reversed: true }, &mut out);
    }
    assert_eq!(out.len(), CATALOGUE_V_SIZE, "catalogue size");
    out
}

pub fn catalogue_v_words() -> Vec<Word> {
    catalogue_v().into_iter().map(|e| e.word).collect()
}

/// Base word by label (`"9.3"`).
pub fn base_word(label: &str) -> Option<Word> {
    BASE_WORDS.iter().find(|(l, _)| *l == label).map(|(_, s)| w(s))
}

/// Labels of base words equal to their own reverse up to renaming.
pub fn self_reverse_labels() -> Vec<&'static str> {
    BASE_WORDS
        .iter()
        .filter(|(_, s)| {
            let word = w(s);
            word.reverse().canonical_form() == word.canonical_form()
        })
        .map(|(l, _)| *l)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_words() {
        assert_eq!(make_u(1).unwrap(), w("x1x0"));
        assert_eq!(make_u(3).unwrap(), w("x1x0x2x1x3x2"));
        assert!(make_u(0).is_err());
        assert_eq!(make_w(2).unwrap(), w("x0z1xyz2x1x0x2x1z1xyz2x2"));
        assert_eq!(make_w_prime(2).unwrap(), w("x0z1yxz2x1x0x2x1z1yxz2x2"));
        for n in 1..=10 {
            let wn = make_w(n).unwrap();
            assert_eq!(wn.len(), 2 * n + 10);
            assert_eq!(wn.project_to(&[Var::letter('x'), Var::letter('y')]), w("xyxy"));
            assert!(wn.is_limited(2));
        }
    }

    #[test]
    fn members() {
        let s = sigma_members(4).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.iter().skip(3).all(|id| id.is_balanced()));
        assert_eq!(s[3].tag, "w_2");
        assert!(sigma_members(1).is_err());
        assert!(member_by_tag("w_1").is_none());
        assert_eq!(member_by_tag("aperiodic-3").unwrap().lhs, w("xxx"));
        assert!(s.iter().all(is_member));
    }

    #[test]
    fn sandwich_shape() {
        assert_eq!(sandwich_word(2).unwrap(), w("x0xx1x0x2x1xx2"));
        assert!(sandwich_word(0).is_err());
    }

    #[test]
    fn collapse_reaches_w1() {
        for n in 2..=10 {
            let theta = collapse_to_w1(n);
            assert_eq!(theta.apply(&make_w(n).unwrap()), make_w(1).unwrap());
            assert_eq!(theta.apply(&make_w_prime(n).unwrap()), make_w_prime(1).unwrap());
        }
    }

    #[test]
    fn catalogue_shape() {
        assert_eq!(catalogue_u().len(), 7);
        let v = catalogue_v();
        assert_eq!(v.len(), 37);
        assert_eq!(v[0].label(), "extra-1");
        assert_eq!(v[3].label(), "1.1");
        assert_eq!(v[4].label(), "1.1r");
        assert!(v.iter().all(|e| e.word.is_limited(2)));
        assert_eq!(
            self_reverse_labels(),
            vec!["3.3", "6.1", "7.3", "8.1", "9.1", "9.3"]
        );
        for l in self_reverse_labels() {
            let (g, i) = parse_label(l);
            assert!(!v.iter().any(|e| e.group == Some(g) && e.index == i && e.reversed));
        }
    }

    #[test]
    fn u_words_sit_inside_v() {
        let v = catalogue_v_words();
        for u in catalogue_u() {
            if EXTRA_WORDS.contains(&u.to_string().as_str()) {
                continue;
            }
            let k = u.content().len();
            let found = v.iter().any(|host| {
                host.windows(u.len()).any(|f| {
                    let f = Word::from(f);
                    f.content().len() == k && f.canonical_form() == u.canonical_form()
                })
            });
            assert!(found, "{u}");
        }
    }
}
