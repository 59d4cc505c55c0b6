//! Words over a countably infinite alphabet of variables.
//!
//! A variable is written as one lowercase letter followed by a (possibly
//! empty) run of decimal digits, so `x`, `z1` and `x12` are all single
//! variables and `z1xyz2x1` tokenizes to `z1 x y z2 x1`. The empty word is
//! written `1`.
//!
//! Besides parsing and rendering, this module carries the bookkeeping used
//! throughout the crate: content and occurrence counts, projections onto
//! sets of letters, factor and occurrence-factor tests, and the
//! block/interlock/link structure of 2-limited words.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Deref, Range};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const MAX_DIGITS: usize = 9;

/// Errors raised while parsing words and variables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at position {position}")]
    UnexpectedChar { position: usize, found: char },
    #[error("digit run starting at position {position} has no leading letter")]
    DigitLeading { position: usize },
    #[error("digit run at position {position} is longer than {MAX_DIGITS} digits")]
    TooManyDigits { position: usize },
    #[error("empty input (the empty word is written `1`)")]
    Empty,
    #[error("expected exactly one variable, found {0:?}")]
    NotAVariable(String),
}

/// Errors raised by occurrence-indexed queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("occurrence {occurrence} cannot be resolved in {word}")]
    Unresolvable { occurrence: OccurrenceRef, word: Word },
}

/// A single variable such as `x`, `z1` or `x12`.
///
/// The digit run is stored with its width so that `x01` and `x1` stay
/// distinct and render back exactly as written.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    letter: u8,
    digits: u8,
    value: u32,
}

impl Var {
    /// A bare letter variable. Panics if `letter` is not ASCII lowercase.
    pub fn letter(letter: char) -> Var {
        assert!(letter.is_ascii_lowercase(), "variable letters are a-z");
        Var {
            letter: letter as u8,
            digits: 0,
            value: 0,
        }
    }

    /// A subscripted variable, e.g. `Var::indexed('x', 3)` is `x3`.
    pub fn indexed(letter: char, index: u32) -> Var {
        assert!(letter.is_ascii_lowercase(), "variable letters are a-z");
        let digits = index.to_string().len() as u8;
        Var {
            letter: letter as u8,
            digits,
            value: index,
        }
    }

    pub fn base_letter(self) -> char {
        self.letter as char
    }

    /// The numeric subscript, if the token carries one.
    pub fn index(self) -> Option<u32> {
        (self.digits > 0).then_some(self.value)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits == 0 {
            write!(f, "{}", self.letter as char)
        } else {
            write!(
                f,
                "{}{:0width$}",
                self.letter as char,
                self.value,
                width = self.digits as usize
            )
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Var {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Var, ParseError> {
        let w: Word = s.parse()?;
        match w.as_slice() {
            [v] => Ok(*v),
            _ => Err(ParseError::NotAVariable(s.to_string())),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Var, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The `i`th occurrence (1-based, from the left) of a variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OccurrenceRef {
    pub var: Var,
    pub index: usize,
}

impl OccurrenceRef {
    pub fn new(var: Var, index: usize) -> OccurrenceRef {
        OccurrenceRef { var, index }
    }
}

impl fmt::Display for OccurrenceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.var, self.index)
    }
}

/// A finite sequence of variables. The empty word is the monoid identity.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Var>);

/// Summary statistics of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordStats {
    pub content: BTreeSet<Var>,
    pub occ: BTreeMap<Var, usize>,
    pub linear: BTreeSet<Var>,
    /// Smallest `n` for which the word is `n`-limited.
    pub limit: usize,
}

impl WordStats {
    pub fn is_limited(&self, n: usize) -> bool {
        self.limit <= n
    }
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_vars(vars: Vec<Var>) -> Word {
        Word(vars)
    }

    /// Concatenation of slices.
    pub fn join(parts: &[&[Var]]) -> Word {
        let mut out = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            out.extend_from_slice(p);
        }
        Word(out)
    }

    pub fn as_slice(&self) -> &[Var] {
        &self.0
    }

    pub fn into_vars(self) -> Vec<Var> {
        self.0
    }

    pub fn push(&mut self, v: Var) {
        self.0.push(v);
    }

    pub fn extend_from(&mut self, w: &[Var]) {
        self.0.extend_from_slice(w);
    }

    pub fn concat(&self, other: &[Var]) -> Word {
        Word::join(&[&self.0, other])
    }

    pub fn content(&self) -> BTreeSet<Var> {
        self.0.iter().copied().collect()
    }

    pub fn occurrences(&self) -> BTreeMap<Var, usize> {
        let mut occ = BTreeMap::new();
        for &v in &self.0 {
            *occ.entry(v).or_insert(0) += 1;
        }
        occ
    }

    pub fn occ(&self, x: Var) -> usize {
        self.0.iter().filter(|&&v| v == x).count()
    }

    pub fn stats(&self) -> WordStats {
        let occ = self.occurrences();
        let content = occ.keys().copied().collect();
        let linear = occ
            .iter()
            .filter(|&(_, &c)| c == 1)
            .map(|(&v, _)| v)
            .collect();
        let limit = occ.values().copied().max().unwrap_or(0);
        WordStats {
            content,
            occ,
            linear,
            limit,
        }
    }

    pub fn is_limited(&self, n: usize) -> bool {
        self.occurrences().values().all(|&c| c <= n)
    }

    /// Variables in order of first occurrence.
    pub fn first_occurrence_order(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        self.0.iter().copied().filter(|v| seen.insert(*v)).collect()
    }

    /// The subsequence keeping exactly the letters in `keep`.
    pub fn project(&self, keep: &BTreeSet<Var>) -> Word {
        Word(self.0.iter().copied().filter(|v| keep.contains(v)).collect())
    }

    /// `w[x1, ..., xr]`.
    pub fn project_to(&self, keep: &[Var]) -> Word {
        Word(self.0.iter().copied().filter(|v| keep.contains(v)).collect())
    }

    /// Delete every occurrence of the given letters.
    pub fn delete(&self, drop: &BTreeSet<Var>) -> Word {
        Word(self.0.iter().copied().filter(|v| !drop.contains(v)).collect())
    }

    /// True iff `self` occurs contiguously in `host`.
    pub fn is_factor_of(&self, host: &[Var]) -> bool {
        find_factor(host, &self.0).is_some()
    }

    /// Positions (0-based) of every occurrence of `x`.
    pub fn positions(&self, x: Var) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == x)
            .map(|(i, _)| i)
            .collect()
    }

    /// Position of the referenced occurrence, if it exists.
    pub fn resolve(&self, r: OccurrenceRef) -> Option<usize> {
        if r.index == 0 {
            return None;
        }
        self.0
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == r.var)
            .nth(r.index - 1)
            .map(|(i, _)| i)
    }

    /// Which occurrence of its letter sits at `pos` (1-based).
    pub fn occurrence_at(&self, pos: usize) -> OccurrenceRef {
        let v = self.0[pos];
        let index = self.0[..=pos].iter().filter(|&&u| u == v).count();
        OccurrenceRef { var: v, index }
    }

    /// True iff the referenced occurrences sit at consecutive positions, in
    /// the given order.
    pub fn occurrence_factor(&self, refs: &[OccurrenceRef]) -> Result<bool, WordError> {
        let mut positions = Vec::with_capacity(refs.len());
        for &r in refs {
            match self.resolve(r) {
                Some(p) => positions.push(p),
                None => {
                    return Err(WordError::Unresolvable {
                        occurrence: r,
                        word: self.clone(),
                    })
                }
            }
        }
        Ok(positions.windows(2).all(|w| w[1] == w[0] + 1))
    }

    /// `x` and `y` interlock when `w[x,y]` is `xyxy` or `yxyx`.
    pub fn interlocks(&self, x: Var, y: Var) -> bool {
        if x == y {
            return false;
        }
        let p = self.project_to(&[x, y]);
        p.0 == [x, y, x, y] || p.0 == [y, x, y, x]
    }

    /// True iff `y` is linked to `x`: some chain of successively interlocked
    /// letters `x = x0, ..., xn` ends in a letter that interlocks `y`, or
    /// with `w[xn, y]` equal to `xn y y xn` or `xn y xn`.
    pub fn linked(&self, x: Var, y: Var) -> bool {
        if x == y {
            return false;
        }
        let content = self.content();
        if !content.contains(&x) || !content.contains(&y) {
            return false;
        }
        let chain = self.interlock_closure(x);
        chain.iter().any(|&xn| {
            if xn == y {
                return false;
            }
            if self.interlocks(xn, y) {
                return true;
            }
            let p = self.project_to(&[xn, y]);
            p.0 == [xn, y, y, xn] || p.0 == [xn, y, xn]
        })
    }

    /// All letters reachable from `x` through interlocking pairs, `x` included.
    fn interlock_closure(&self, x: Var) -> BTreeSet<Var> {
        let content = self.content();
        let mut seen = BTreeSet::from([x]);
        let mut stack = vec![x];
        while let Some(a) = stack.pop() {
            for &b in &content {
                if !seen.contains(&b) && self.interlocks(a, b) {
                    seen.insert(b);
                    stack.push(b);
                }
            }
        }
        seen
    }

    /// The least closed factor containing `span`: a factor is closed when it
    /// holds every occurrence of each of its letters.
    pub fn smallest_block(&self, span: Range<usize>) -> Range<usize> {
        assert!(span.end <= self.len(), "span outside word");
        let (mut lo, mut hi) = (span.start, span.end);
        if lo >= hi {
            return lo..hi;
        }
        loop {
            let (mut nlo, mut nhi) = (lo, hi);
            for &v in &self.0[lo..hi] {
                // every occurrence of v must be inside
                for (i, &u) in self.0.iter().enumerate() {
                    if u == v {
                        nlo = nlo.min(i);
                        nhi = nhi.max(i + 1);
                    }
                }
            }
            if (nlo, nhi) == (lo, hi) {
                return lo..hi;
            }
            lo = nlo;
            hi = nhi;
        }
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Rename variables to `a, b, c, ...` in order of first occurrence. After
    /// `z` the scheme continues `a1, ..., z1, a2, ...`.
    pub fn canonical_form(&self) -> Word {
        let mut names = BTreeMap::new();
        let mut out = Vec::with_capacity(self.len());
        for &v in &self.0 {
            let next = names.len();
            let c = *names.entry(v).or_insert_with(|| canonical_var(next));
            out.push(c);
        }
        Word(out)
    }

    /// Apply a letter-to-letter renaming; letters outside the map are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Word {
        Word(self.0.iter().map(|v| *map.get(v).unwrap_or(v)).collect())
    }
}

/// The `i`th canonical variable: `a..z`, then `a1..z1`, `a2..`.
pub fn canonical_var(i: usize) -> Var {
    let letter = (b'a' + (i % 26) as u8) as char;
    let round = i / 26;
    if round == 0 {
        Var::letter(letter)
    } else {
        Var::indexed(letter, round as u32)
    }
}

/// First position at which `needle` occurs in `hay`.
pub fn find_factor(hay: &[Var], needle: &[Var]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    if needle.len() > hay.len() {
        return None;
    }
    hay.windows(needle.len()).position(|w| w == needle)
}

/// Shortlex order: shorter words first, then lexicographic.
pub fn shortlex(a: &[Var], b: &[Var]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Deref for Word {
    type Target = [Var];

    fn deref(&self) -> &[Var] {
        &self.0
    }
}

impl Borrow<[Var]> for Word {
    fn borrow(&self) -> &[Var] {
        &self.0
    }
}

impl From<Vec<Var>> for Word {
    fn from(v: Vec<Var>) -> Word {
        Word(v)
    }
}

impl From<&[Var]> for Word {
    fn from(v: &[Var]) -> Word {
        Word(v.to_vec())
    }
}

impl FromIterator<Var> for Word {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Word, ParseError> {
        let text = s.trim();
        if text.is_empty() {
            return Err(ParseError::Empty);
        }
        if text == "1" {
            return Ok(Word::empty());
        }
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_lowercase() {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let run = &text[start..j];
                if run.len() > MAX_DIGITS {
                    return Err(ParseError::TooManyDigits { position: start });
                }
                let value = if run.is_empty() {
                    0
                } else {
                    run.parse::<u32>().expect("digit run fits u32")
                };
                out.push(Var {
                    letter: c,
                    digits: run.len() as u8,
                    value,
                });
                i = j;
            } else if c.is_ascii_digit() {
                return Err(ParseError::DigitLeading { position: i });
            } else {
                let found = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::UnexpectedChar { position: i, found });
            }
        }
        Ok(Word(out))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse a word, panicking on malformed input. Intended for literals.
pub fn w(text: &str) -> Word {
    text.parse()
        .unwrap_or_else(|e| panic!("bad word literal {text:?}: {e}"))
}

/// Parse a variable, panicking on malformed input. Intended for literals.
pub fn v(text: &str) -> Var {
    text.parse()
        .unwrap_or_else(|e| panic!("bad variable literal {text:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> BTreeSet<Var> {
        w(s).content()
    }

    #[test]
    fn tokenizes_maximal_munch() {
        let word = w("z1xyz2x1");
        let toks: Vec<String> = word.iter().map(|v| v.to_string()).collect();
        assert_eq!(toks, ["z1", "x", "y", "z2", "x1"]);
        assert_eq!(w("1"), Word::empty());
        assert_eq!(w("xyyx").len(), 4);
        assert_eq!(w("x01").to_string(), "x01");
        assert_ne!(v("x01"), v("x1"));
    }

    #[test]
    fn rejects_malformed_tokens() {
        assert_eq!(
            "1x".parse::<Word>(),
            Err(ParseError::DigitLeading { position: 0 })
        );
        assert!(matches!(
            "xY".parse::<Word>(),
            Err(ParseError::UnexpectedChar { position: 1, found: 'Y' })
        ));
        assert_eq!("".parse::<Word>(), Err(ParseError::Empty));
        assert!(matches!(
            "x1234567890".parse::<Word>(),
            Err(ParseError::TooManyDigits { .. })
        ));
    }

    #[test]
    fn stats_of_small_words() {
        let s = w("xyyx").stats();
        assert_eq!(s.content, set("xy"));
        assert_eq!(s.occ[&v("x")], 2);
        assert_eq!(s.occ[&v("y")], 2);
        assert!(s.is_limited(2));
        assert!(s.linear.is_empty());

        assert_eq!(w("atxyaxy").stats().linear, set("t"));

        let e = Word::empty().stats();
        assert!(e.content.is_empty());
        assert!(e.is_limited(0));
    }

    #[test]
    fn projections() {
        assert_eq!(w("xyxzzy").project(&set("xz")), w("xxzz"));
        assert_eq!(w("xyxzzy").project(&set("x")), w("xx"));
        assert_eq!(w("xyxzzy").project(&BTreeSet::new()), Word::empty());
    }

    #[test]
    fn factor_tests() {
        assert!(w("xz").is_factor_of(&w("xyxzzy")));
        assert!(w("zy").is_factor_of(&w("xyxzzy")));
        assert!(!w("xyy").is_factor_of(&w("xyxzzy")));
        assert!(Word::empty().is_factor_of(&w("x")));
    }

    #[test]
    fn occurrence_factors() {
        let word = w("xyxzzy");
        let r = |s: &str, i| OccurrenceRef::new(v(s), i);
        assert_eq!(word.occurrence_factor(&[r("x", 2), r("z", 1)]), Ok(true));
        assert_eq!(word.occurrence_factor(&[r("z", 1), r("y", 2)]), Ok(false));
        assert_eq!(w("xx").occurrence_factor(&[r("x", 1), r("x", 2)]), Ok(true));
        assert!(word.occurrence_factor(&[r("x", 3)]).is_err());
    }

    #[test]
    fn interlock_and_link() {
        let (x, y) = (v("x"), v("y"));
        assert!(w("xyxy").interlocks(x, y));
        assert!(!w("xyyx").interlocks(x, y));
        assert!(w("abxyaxyb").interlocks(v("a"), v("b")));

        assert!(w("xyyx").linked(x, y));
        assert!(!w("xyyx").linked(y, x));
        assert!(w("xyxy").linked(x, y));
        assert!(w("xyxy").linked(y, x));
        assert!(w("abacbc").linked(v("a"), v("c")));
        assert!(w("xtx").linked(x, v("t")));
    }

    #[test]
    fn blocks() {
        assert_eq!(w("xxyy").smallest_block(0..1), 0..2);
        assert_eq!(w("xyyx").smallest_block(1..2), 1..3);
        assert_eq!(w("xyyx").smallest_block(0..1), 0..4);
        assert_eq!(w("ccaxybaxyb").smallest_block(3..4), 2..10);
    }

    #[test]
    fn reversal_and_canonical_forms() {
        assert_eq!(w("zxyzyx").canonical_form(), w("abcacb"));
        let base = w("axybcabxyc");
        assert_eq!(base.canonical_form(), w("abcdeadbce"));
        assert_eq!(base.reverse().canonical_form(), base.canonical_form());
        assert_eq!(Word::empty().reverse(), Word::empty());
        assert_eq!(canonical_var(26).to_string(), "a1");
        assert_eq!(canonical_var(27).to_string(), "b1");
    }

    #[test]
    fn renders_losslessly() {
        for s in ["1", "x", "z1xyz2x1", "x0x10x01"] {
            assert_eq!(w(s).to_string(), s);
        }
    }
}
