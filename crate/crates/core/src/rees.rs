//! Rees quotients `M(W)` of the free monoid by the ideal of non-factors.
//!
//! The universe of `M(W)` is the factorial closure of `W` (every factor of
//! a member of `W`, including the empty word) together with an absorbing
//! zero. Two elements multiply to their concatenation when that is still a
//! factor, and to zero otherwise.
//!
//! Satisfaction of `u ≈ v` is decided exactly. With equal content, any
//! substitution sending a variable to zero zeroes both sides, and both
//! sides differ only when one of them evaluates to a factor of some
//! generator. So it suffices to enumerate every substitution that carries
//! `u` (respectively `v`) onto a factor of a generator and compare with the
//! other side. That enumeration is the factor search of [`crate::matcher`].

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::identity::Identity;
use crate::matcher::{MatchError, Pattern, DEFAULT_BUDGET};
use crate::substitution::Substitution;
use crate::word::{shortlex, Var, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("at least one nonempty generator word is required (zero would equal one)")]
    Degenerate,
    #[error("stored factor list does not match the factorial closure of the generators")]
    FactorMismatch,
    #[error("stored max_len {stored} does not match the generators ({actual})")]
    MaxLenMismatch { stored: usize, actual: usize },
    #[error("undecided: {0}")]
    Undecided(String),
    #[error(transparent)]
    Budget(#[from] MatchError),
    #[error("bad monoid file: {0}")]
    Format(String),
}

/// An element of a Rees quotient monoid.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Element {
    Word(Word),
    Zero,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Word(w) => write!(f, "{w}"),
            Element::Zero => f.write_str("0"),
        }
    }
}

/// A substitution on which the two sides of an identity disagree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SatisfactionWitness {
    pub substitution: Substitution,
    pub lhs_value: Element,
    pub rhs_value: Element,
}

impl fmt::Display for SatisfactionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "θ = {{{}}} gives {} vs {}",
            self.substitution, self.lhs_value, self.rhs_value
        )
    }
}

/// The finite monoid `M(W)`.
#[derive(Clone, Debug)]
pub struct ReesMonoid {
    generators: Vec<Word>,
    factors: HashSet<Word>,
    max_len: usize,
}

/// All factors of the given words, the empty word included.
pub fn factorial_closure(words: &[Word]) -> Result<BTreeSet<Word>, MonoidError> {
    if words.iter().all(|w| w.is_empty()) {
        return Err(MonoidError::Degenerate);
    }
    let mut out = BTreeSet::new();
    for w in words {
        for i in 0..=w.len() {
            for j in i..=w.len() {
                out.insert(Word::from(&w[i..j]));
            }
        }
    }
    Ok(out)
}

impl ReesMonoid {
    pub fn new(generators: Vec<Word>) -> Result<ReesMonoid, MonoidError> {
        let factors: HashSet<Word> = factorial_closure(&generators)?.into_iter().collect();
        let max_len = generators.iter().map(|w| w.len()).max().unwrap_or(0);
        Ok(ReesMonoid {
            generators,
            factors,
            max_len,
        })
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of elements, zero included.
    pub fn order(&self) -> usize {
        self.factors.len() + 1
    }

    pub fn is_factor(&self, w: &[Var]) -> bool {
        w.len() <= self.max_len && self.factors.contains(w)
    }

    /// Factors in shortlex order (the empty word first).
    pub fn factors(&self) -> Vec<Word> {
        let mut f: Vec<Word> = self.factors.iter().cloned().collect();
        f.sort_by(|a, b| shortlex(a, b));
        f
    }

    /// Every element: factors in shortlex order, then zero.
    pub fn elements(&self) -> Vec<Element> {
        let mut e: Vec<Element> = self.factors().into_iter().map(Element::Word).collect();
        e.push(Element::Zero);
        e
    }

    pub fn element_of(&self, w: &[Var]) -> Element {
        if self.is_factor(w) {
            Element::Word(Word::from(w))
        } else {
            Element::Zero
        }
    }

    pub fn product(&self, a: &Element, b: &Element) -> Element {
        match (a, b) {
            (Element::Word(x), Element::Word(y)) => self.element_of(&x.concat(y)),
            _ => Element::Zero,
        }
    }

    /// Value of `w` under a substitution into factors (unmapped variables
    /// evaluate as themselves).
    pub fn evaluate(&self, w: &[Var], theta: &Substitution) -> Element {
        self.element_of(&theta.apply(w))
    }

    /// Decide `M ⊨ id`, returning a witness on failure.
    ///
    /// Witness order: when contents differ, the least variable of the
    /// symmetric difference is sent to the first longest generator.
    /// Otherwise the first disagreeing substitution found by searching
    /// generators in order, left side before right side, start positions
    /// left to right and shorter images first.
    pub fn satisfies(&self, id: &Identity) -> Result<Option<SatisfactionWitness>, MonoidError> {
        self.satisfies_with_budget(id, DEFAULT_BUDGET)
    }

    pub fn satisfies_with_budget(
        &self,
        id: &Identity,
        budget: u64,
    ) -> Result<Option<SatisfactionWitness>, MonoidError> {
        let (cu, cv) = (id.lhs.content(), id.rhs.content());
        if cu != cv {
            return Ok(Some(self.content_witness(id, &cu, &cv)));
        }
        if id.lhs == id.rhs {
            return Ok(None);
        }
        let forced = id.forced_nonempty();
        for g in &self.generators {
            for (src, other, lhs_side) in [(&id.lhs, &id.rhs, true), (&id.rhs, &id.lhs, false)] {
                let pattern = Pattern::new(src, &forced);
                let locals: Vec<usize> = other
                    .iter()
                    .map(|&x| pattern.local(x).expect("equal content"))
                    .collect();
                let mut found = None;
                let mut buf = Vec::with_capacity(self.max_len + 1);
                pattern.for_each(g, false, budget, |a| {
                    let m = a.matched();
                    buf.clear();
                    for &i in &locals {
                        buf.extend_from_slice(a.local_image(i));
                        if buf.len() > m.len() {
                            break;
                        }
                    }
                    if buf.as_slice() != m {
                        found = Some(a.substitution());
                        return ControlFlow::Break(());
                    }
                    ControlFlow::Continue(())
                })?;
                if let Some(theta) = found {
                    let src_val = self.evaluate(src, &theta);
                    let other_val = self.evaluate(other, &theta);
                    let (lhs_value, rhs_value) = if lhs_side {
                        (src_val, other_val)
                    } else {
                        (other_val, src_val)
                    };
                    return Ok(Some(SatisfactionWitness {
                        substitution: theta,
                        lhs_value,
                        rhs_value,
                    }));
                }
            }
        }
        Ok(None)
    }

    fn content_witness(
        &self,
        id: &Identity,
        cu: &BTreeSet<Var>,
        cv: &BTreeSet<Var>,
    ) -> SatisfactionWitness {
        let z = *cu
            .symmetric_difference(cv)
            .next()
            .expect("contents differ");
        let longest = self
            .generators
            .iter()
            .max_by(|a, b| a.len().cmp(&b.len()).then(std::cmp::Ordering::Greater))
            .expect("nonempty generator set")
            .clone();
        let mut theta = Substitution::identity();
        for x in cu.union(cv) {
            theta.set(*x, Word::empty());
        }
        theta.set(z, longest);
        SatisfactionWitness {
            lhs_value: self.evaluate(&id.lhs, &theta),
            rhs_value: self.evaluate(&id.rhs, &theta),
            substitution: theta,
        }
    }

    pub fn satisfies_all(
        &self,
        ids: &[Identity],
    ) -> Result<Vec<Option<SatisfactionWitness>>, MonoidError> {
        use rayon::prelude::*;
        ids.par_iter().map(|id| self.satisfies(id)).collect()
    }

    fn has_square(&self) -> bool {
        self.factors
            .iter()
            .any(|f| f.len() == 2 && f[0] == f[1])
    }

    fn check_isoterm_domain(&self, w: &Word) -> Result<(), MonoidError> {
        if !w.is_limited(2) {
            return Err(MonoidError::Undecided(format!(
                "{w} is not 2-limited; isoterm checking is restricted to 2-limited words"
            )));
        }
        if !self.has_square() {
            return Err(MonoidError::Undecided(
                "the factor set has no squared letter, so occurrence counts are not forced".into(),
            ));
        }
        Ok(())
    }

    /// Pair patterns `p` over `{a, b}` with the counts of `w[a,b]` such that
    /// `M ⊨ w[a,b] ≈ p`.
    fn allowed_pair_patterns(
        &self,
        w: &Word,
        a: Var,
        b: Var,
        cache: &mut BTreeMap<Word, Vec<Word>>,
    ) -> Result<Vec<Word>, MonoidError> {
        let proj = w.project_to(&[a, b]);
        if let Some(hit) = cache.get(&proj) {
            return Ok(hit.clone());
        }
        let mut out = Vec::new();
        for p in arrangements(&proj) {
            if p == proj || self.satisfies(&Identity::new(proj.clone(), p.clone()))?.is_none() {
                out.push(p);
            }
        }
        cache.insert(proj, out.clone());
        Ok(out)
    }

    /// Candidates `w'` with `M ⊨ w ≈ w'` not yet excluded: rearrangements of
    /// `w` whose every pair projection is allowed, visited in lexicographic
    /// order of letter sequences.
    fn candidates(&self, w: &Word) -> Result<Vec<Word>, MonoidError> {
        let letters = w.first_occurrence_order();
        let mut cache = BTreeMap::new();
        let mut pairs = Vec::new();
        for (i, &a) in letters.iter().enumerate() {
            for &b in &letters[i + 1..] {
                let allowed = self.allowed_pair_patterns(w, a, b, &mut cache)?;
                pairs.push((a, b, allowed));
            }
        }
        let mut counts: BTreeMap<Var, usize> = w.occurrences();
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(w.len());
        extend_candidates(&pairs, &mut counts, &mut prefix, w.len(), &mut out);
        Ok(out)
    }

    /// Decide whether `w` is an isoterm for this monoid; on failure return
    /// the least `w' ≠ w` with `M ⊨ w ≈ w'`.
    pub fn is_isoterm(&self, w: &Word) -> Result<Option<Word>, MonoidError> {
        self.check_isoterm_domain(w)?;
        for c in self.candidates(w)? {
            if &c != w && self.satisfies(&Identity::new(w.clone(), c.clone()))?.is_none() {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Decide whether `{x, y}` is stable in `w`; on instability return the
    /// least `w'` with `M ⊨ w ≈ w'` and `w'[x,y] ≠ w[x,y]`.
    pub fn pair_stable(&self, w: &Word, x: Var, y: Var) -> Result<Option<Word>, MonoidError> {
        self.check_isoterm_domain(w)?;
        let content = w.content();
        if x == y || !content.contains(&x) || !content.contains(&y) {
            return Err(MonoidError::Undecided(format!(
                "{x} and {y} must be distinct letters of {w}"
            )));
        }
        let proj = w.project_to(&[x, y]);
        for c in self.candidates(w)? {
            if c.project_to(&[x, y]) != proj
                && self.satisfies(&Identity::new(w.clone(), c.clone()))?.is_none()
            {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    pub fn to_file(&self, include_factors: bool) -> MonoidFile {
        MonoidFile {
            generator_words: self.generators.clone(),
            max_len: self.max_len,
            factors: include_factors.then(|| self.factors()),
        }
    }

    pub fn from_file(file: &MonoidFile) -> Result<ReesMonoid, MonoidError> {
        let m = ReesMonoid::new(file.generator_words.clone())?;
        if file.max_len != m.max_len {
            return Err(MonoidError::MaxLenMismatch {
                stored: file.max_len,
                actual: m.max_len,
            });
        }
        if let Some(stored) = &file.factors {
            let stored: HashSet<Word> = stored.iter().cloned().collect();
            let closed = stored.iter().all(|f| {
                (0..=f.len()).all(|i| (i..=f.len()).all(|j| stored.contains(&f[i..j])))
            });
            if !closed || stored != m.factors {
                return Err(MonoidError::FactorMismatch);
            }
        }
        Ok(m)
    }

    pub fn to_json(&self, include_factors: bool) -> String {
        serde_json::to_string_pretty(&self.to_file(include_factors)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<ReesMonoid, MonoidError> {
        let file: MonoidFile =
            serde_json::from_str(text).map_err(|e| MonoidError::Format(e.to_string()))?;
        ReesMonoid::from_file(&file)
    }
}

/// On-disk form of a Rees quotient monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidFile {
    pub generator_words: Vec<Word>,
    pub max_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Word>>,
}

/// All distinct rearrangements of the letters of `w`, in lexicographic order.
pub fn arrangements(w: &Word) -> Vec<Word> {
    let mut counts = w.occurrences();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(w.len());
    fn go(
        counts: &mut BTreeMap<Var, usize>,
        prefix: &mut Vec<Var>,
        len: usize,
        out: &mut Vec<Word>,
    ) {
        if prefix.len() == len {
            out.push(Word::from(prefix.as_slice()));
            return;
        }
        let letters: Vec<Var> = counts.iter().filter(|(_, &c)| c > 0).map(|(&v, _)| v).collect();
        for x in letters {
            *counts.get_mut(&x).unwrap() -= 1;
            prefix.push(x);
            go(counts, prefix, len, out);
            prefix.pop();
            *counts.get_mut(&x).unwrap() += 1;
        }
    }
    go(&mut counts, &mut prefix, w.len(), &mut out);
    out
}

fn extend_candidates(
    pairs: &[(Var, Var, Vec<Word>)],
    counts: &mut BTreeMap<Var, usize>,
    prefix: &mut Vec<Var>,
    len: usize,
    out: &mut Vec<Word>,
) {
    if prefix.len() == len {
        out.push(Word::from(prefix.as_slice()));
        return;
    }
    let letters: Vec<Var> = counts.iter().filter(|(_, &c)| c > 0).map(|(&v, _)| v).collect();
    for x in letters {
        prefix.push(x);
        let ok = pairs.iter().filter(|(a, b, _)| *a == x || *b == x).all(|(a, b, allowed)| {
            let proj: Vec<Var> = prefix.iter().copied().filter(|v| v == a || v == b).collect();
            allowed.iter().any(|p| p.starts_with(&proj))
        });
        if ok {
            *counts.get_mut(&x).unwrap() -= 1;
            extend_candidates(pairs, counts, prefix, len, out);
            *counts.get_mut(&x).unwrap() += 1;
        }
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{v, w};

    fn monoid(words: &[&str]) -> ReesMonoid {
        ReesMonoid::new(words.iter().map(|s| w(s)).collect()).unwrap()
    }

    fn id(s: &str) -> Identity {
        s.parse().unwrap()
    }

    #[test]
    fn closure_of_small_sets() {
        let c = factorial_closure(&[w("xyx")]).unwrap();
        let expect: BTreeSet<Word> = ["1", "x", "y", "xy", "yx", "xyx"].iter().map(|s| w(s)).collect();
        assert_eq!(c, expect);
        let c = factorial_closure(&[w("ab"), w("b")]).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(factorial_closure(&[w("xx")]).unwrap().len(), 3);
        assert_eq!(factorial_closure(&[]), Err(MonoidError::Degenerate));
        assert_eq!(factorial_closure(&[Word::empty()]), Err(MonoidError::Degenerate));
    }

    #[test]
    fn products() {
        let m = monoid(&["xyx"]);
        assert_eq!(m.order(), 7);
        let e = |s: &str| Element::Word(w(s));
        assert_eq!(m.product(&e("x"), &e("yx")), e("xyx"));
        assert_eq!(m.product(&e("x"), &e("x")), Element::Zero);
        for el in m.elements() {
            assert_eq!(m.product(&e("1"), &el), el);
            assert_eq!(m.product(&el, &Element::Zero), Element::Zero);
        }
    }

    #[test]
    fn satisfaction_verdicts() {
        let m = monoid(&["xyyx", "xxyy"]);
        assert_eq!(m.satisfies(&id("xyxy = yxyx")).unwrap(), None);
        let wit = m.satisfies(&id("xyyx = xyxy")).unwrap().unwrap();
        assert_eq!(wit.substitution.apply(&w("xy")), w("xy"));
        assert_eq!(wit.lhs_value, Element::Word(w("xyyx")));
        assert_eq!(wit.rhs_value, Element::Zero);
        assert_eq!(m.satisfies(&id("xyzx = xyzx")).unwrap(), None);
    }

    #[test]
    fn content_mismatch_witness() {
        let m = monoid(&["xyyx", "xxyy"]);
        let wit = m.satisfies(&id("xy = x")).unwrap().unwrap();
        assert_ne!(wit.lhs_value, wit.rhs_value);
        assert_eq!(wit.rhs_value, Element::Word(Word::empty()));
        assert_eq!(m.evaluate(&w("xy"), &wit.substitution), wit.lhs_value);
    }

    #[test]
    fn isoterms_of_small_monoids() {
        let m = monoid(&["xyyx"]);
        for s in ["xy", "xxy", "xyx", "yxx", "xx"] {
            assert_eq!(m.is_isoterm(&w(s)).unwrap(), None, "{s}");
        }
        let m = monoid(&["xyyx", "xxyy"]);
        assert_eq!(m.is_isoterm(&w("xyxy")).unwrap(), Some(w("yxyx")));
        assert_eq!(
            m.pair_stable(&w("xyxy"), v("x"), v("y")).unwrap(),
            Some(w("yxyx"))
        );
    }

    #[test]
    fn isoterm_domain_is_enforced() {
        let m = monoid(&["xyx"]);
        assert!(matches!(m.is_isoterm(&w("xy")), Err(MonoidError::Undecided(_))));
        let m = monoid(&["xx"]);
        assert!(matches!(m.is_isoterm(&w("xxx")), Err(MonoidError::Undecided(_))));
    }

    #[test]
    fn json_revalidates() {
        let m = monoid(&["xyyx", "xxyy"]);
        let text = m.to_json(true);
        let back = ReesMonoid::from_json(&text).unwrap();
        assert_eq!(back.order(), m.order());
        let mut file = m.to_file(true);
        file.factors.as_mut().unwrap().pop();
        assert_eq!(ReesMonoid::from_file(&file).unwrap_err(), MonoidError::FactorMismatch);
        let mut file = m.to_file(false);
        file.max_len = 3;
        assert!(matches!(
            ReesMonoid::from_file(&file),
            Err(MonoidError::MaxLenMismatch { .. })
        ));
    }

    #[test]
    fn arrangements_are_distinct() {
        assert_eq!(arrangements(&w("xxyy")).len(), 6);
        assert_eq!(arrangements(&w("xyz")).len(), 6);
        assert_eq!(arrangements(&Word::empty()), vec![Word::empty()]);
    }
}
