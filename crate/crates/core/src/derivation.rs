//! One-step rewriting, derivation traces and their verification, bounded
//! derivation search, and the unstable/critical pair calculus.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::identity::{Direction, Identity};
use crate::matcher::{applies_nontrivially, MatchError};
use crate::sigma::member_by_tag;
use crate::substitution::Substitution;
use crate::word::{Var, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("{word} is not {left} · ({side}θ) · {right}")]
    Malformed {
        word: Word,
        left: Word,
        side: Word,
        right: Word,
    },
}

/// Rewrite `w = left · (source θ) · right` into `left · (target θ) · right`.
pub fn apply_step(
    w: &Word,
    rule: &Identity,
    theta: &Substitution,
    left: &Word,
    right: &Word,
    direction: Direction,
) -> Result<Word, StepError> {
    let source = rule.source(direction);
    let before = Word::join(&[left, &theta.apply(source), right]);
    if &before != w {
        return Err(StepError::Malformed {
            word: w.clone(),
            left: left.clone(),
            side: source.clone(),
            right: right.clone(),
        });
    }
    Ok(Word::join(&[left, &theta.apply(rule.target(direction)), right]))
}

/// A single rewrite citing a rule, a substitution and a context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub rule: Identity,
    pub direction: Direction,
    pub substitution: Substitution,
    pub left: Word,
    pub right: Word,
    pub before: Word,
    pub after: Word,
}

impl DerivationStep {
    /// Build a step, computing both words from the rule and the context.
    pub fn new(
        rule: Identity,
        direction: Direction,
        substitution: Substitution,
        left: Word,
        right: Word,
    ) -> DerivationStep {
        let before = Word::join(&[&left, &substitution.apply(rule.source(direction)), &right]);
        let after = Word::join(&[&left, &substitution.apply(rule.target(direction)), &right]);
        DerivationStep {
            rule,
            direction,
            substitution,
            left,
            right,
            before,
            after,
        }
    }

    /// The same rewrite read backwards.
    pub fn inverted(&self) -> DerivationStep {
        DerivationStep {
            rule: self.rule.clone(),
            direction: self.direction.flip(),
            substitution: self.substitution.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
            before: self.after.clone(),
            after: self.before.clone(),
        }
    }

    /// The same rewrite inside a larger context.
    pub fn embedded(&self, outer_left: &[Var], outer_right: &[Var]) -> DerivationStep {
        DerivationStep::new(
            self.rule.clone(),
            self.direction,
            self.substitution.clone(),
            Word::join(&[outer_left, &self.left]),
            Word::join(&[&self.right, outer_right]),
        )
    }
}

impl fmt::Display for DerivationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.direction {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        };
        write!(
            f,
            "{} => {}  [{} {arrow} | {} | left {} | right {}]",
            self.before,
            self.after,
            if self.rule.tag.is_empty() { self.rule.to_string() } else { self.rule.tag.clone() },
            self.substitution,
            self.left,
            self.right
        )
    }
}

/// A chain of rewrite steps from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub start: Word,
    pub end: Word,
    pub steps: Vec<DerivationStep>,
}

impl DerivationTrace {
    pub fn empty(w: Word) -> DerivationTrace {
        DerivationTrace {
            start: w.clone(),
            end: w,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(start: Word, steps: Vec<DerivationStep>) -> DerivationTrace {
        let end = steps.last().map_or_else(|| start.clone(), |s| s.after.clone());
        DerivationTrace { start, end, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every word of the chain, `start` first.
    pub fn words(&self) -> Vec<&Word> {
        std::iter::once(&self.start)
            .chain(self.steps.iter().map(|s| &s.after))
            .collect()
    }

    /// The trace read from `end` back to `start`.
    pub fn reversed(&self) -> DerivationTrace {
        DerivationTrace {
            start: self.end.clone(),
            end: self.start.clone(),
            steps: self.steps.iter().rev().map(DerivationStep::inverted).collect(),
        }
    }

    /// Concatenate two traces; `self.end` must equal `next.start`.
    pub fn then(mut self, next: DerivationTrace) -> DerivationTrace {
        assert_eq!(self.end, next.start, "traces do not chain");
        self.steps.extend(next.steps);
        self.end = next.end;
        self
    }

    pub fn embedded(&self, left: &[Var], right: &[Var]) -> DerivationTrace {
        DerivationTrace {
            start: Word::join(&[left, &self.start, right]),
            end: Word::join(&[left, &self.end, right]),
            steps: self.steps.iter().map(|s| s.embedded(left, right)).collect(),
        }
    }

    /// Cut out every loop so that the words of the chain are pairwise
    /// distinct. The endpoints are unchanged.
    pub fn without_cycles(&self) -> DerivationTrace {
        let mut kept: Vec<DerivationStep> = Vec::new();
        let mut seen: HashMap<Word, usize> = HashMap::from([(self.start.clone(), 0)]);
        for step in &self.steps {
            if let Some(&k) = seen.get(&step.after) {
                for s in kept.drain(k..) {
                    seen.remove(&s.after);
                }
            } else {
                kept.push(step.clone());
                seen.insert(step.after.clone(), kept.len());
            }
        }
        DerivationTrace::from_steps(self.start.clone(), kept)
    }

    /// Longest word in the chain.
    pub fn max_word_len(&self) -> usize {
        self.words().iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Default bound on the `w_n` members a verifier accepts for this trace.
    pub fn default_bound(&self) -> usize {
        self.max_word_len().max(2)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<DerivationTrace, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.start)?;
        for s in &self.steps {
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace endpoints disagree with its steps")]
    Endpoints,
    #[error("step {index}: rule `{tag}` is not a member of the system (bound n <= {bound})")]
    NotMember { index: usize, tag: String, bound: usize },
    #[error("step {index}: recorded words do not match the rule, substitution and context")]
    Malformed { index: usize },
    #[error("step {index}: rewrite does not change the word")]
    Trivial { index: usize },
    #[error("step {index}: does not start where the previous step ended")]
    Chain { index: usize },
    #[error("step {index}: word {word} already occurred earlier in the chain")]
    Repeat { index: usize, word: Word },
}

impl TraceError {
    /// Index of the first offending step, if any.
    pub fn step(&self) -> Option<usize> {
        match self {
            TraceError::Endpoints => None,
            TraceError::NotMember { index, .. }
            | TraceError::Malformed { index }
            | TraceError::Trivial { index }
            | TraceError::Chain { index }
            | TraceError::Repeat { index, .. } => Some(*index),
        }
    }
}

/// Check a trace against the system truncated at `w_bound` (defaulting to
/// the longest word of the trace, but at least 2).
pub fn verify_trace(trace: &DerivationTrace, w_bound: Option<usize>) -> Result<(), TraceError> {
    let bound = w_bound.unwrap_or_else(|| trace.default_bound());
    let mut seen: HashSet<&Word> = HashSet::from([&trace.start]);
    let mut cur = &trace.start;
    for (index, s) in trace.steps.iter().enumerate() {
        let member = member_by_tag(&s.rule.tag).filter(|m| m.lhs == s.rule.lhs && m.rhs == s.rule.rhs);
        let in_bound = s.rule.w_index().is_none_or(|n| n <= bound);
        if member.is_none() || !in_bound {
            return Err(TraceError::NotMember {
                index,
                tag: s.rule.tag.clone(),
                bound,
            });
        }
        if &s.before != cur {
            return Err(TraceError::Chain { index });
        }
        let src = s.substitution.apply(s.rule.source(s.direction));
        let tgt = s.substitution.apply(s.rule.target(s.direction));
        if s.before != Word::join(&[&s.left, &src, &s.right])
            || s.after != Word::join(&[&s.left, &tgt, &s.right])
        {
            return Err(TraceError::Malformed { index });
        }
        if s.before == s.after {
            return Err(TraceError::Trivial { index });
        }
        if !seen.insert(&s.after) {
            return Err(TraceError::Repeat {
                index,
                word: s.after.clone(),
            });
        }
        cur = &s.after;
    }
    if cur != &trace.end {
        return Err(TraceError::Endpoints);
    }
    Ok(())
}

/// Classification of one pair of letters of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStatus {
    pub pair: (Var, Var),
    pub stable: bool,
    /// Critical occurrence pairs on these two letters, in either order.
    pub critical: Vec<CriticalOccurrence>,
}

/// An adjacent factor `(i-th a)(j-th b)` of `u` whose order is reversed in
/// `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalOccurrence {
    pub first: Var,
    pub second: Var,
    pub i: usize,
    pub j: usize,
    /// Position of the `first` occurrence in `u`.
    pub position: usize,
}

fn occurrence_position(w: &Word, x: Var, i: usize) -> Option<usize> {
    w.iter().enumerate().filter(|(_, &c)| c == x).nth(i - 1).map(|(p, _)| p)
}

/// Every adjacent occurrence pair of `u` that appears in the other order in
/// `v`, leftmost first.
pub fn critical_occurrences(u: &Word, v: &Word) -> Vec<CriticalOccurrence> {
    let mut seen: HashMap<Var, usize> = HashMap::new();
    let mut index_at = Vec::with_capacity(u.len());
    for &c in u.iter() {
        let e = seen.entry(c).or_insert(0);
        *e += 1;
        index_at.push(*e);
    }
    let mut out = Vec::new();
    for p in 0..u.len().saturating_sub(1) {
        let (a, b) = (u[p], u[p + 1]);
        if a == b {
            continue;
        }
        let (i, j) = (index_at[p], index_at[p + 1]);
        if let (Some(pa), Some(pb)) = (occurrence_position(v, a, i), occurrence_position(v, b, j)) {
            if pa > pb {
                out.push(CriticalOccurrence {
                    first: a,
                    second: b,
                    i,
                    j,
                    position: p,
                });
            }
        }
    }
    out
}

/// Status of every pair of letters of `u ≈ v`, pairs ordered by the first
/// occurrences of their letters in `u` (letters only in `v` last).
pub fn unstable_pairs(u: &Word, v: &Word) -> Vec<PairStatus> {
    let mut letters = u.first_occurrence_order();
    for x in v.first_occurrence_order() {
        if !letters.contains(&x) {
            letters.push(x);
        }
    }
    let crit = critical_occurrences(u, v);
    let mut out = Vec::new();
    for (k, &a) in letters.iter().enumerate() {
        for &b in &letters[k + 1..] {
            let stable = u.project_to(&[a, b]) == v.project_to(&[a, b]);
            let critical = crit
                .iter()
                .filter(|c| (c.first == a && c.second == b) || (c.first == b && c.second == a))
                .copied()
                .collect();
            out.push(PairStatus {
                pair: (a, b),
                stable,
                critical,
            });
        }
    }
    out
}

/// Number of unstable pairs of `u ≈ v`.
pub fn unstable_count(u: &Word, v: &Word) -> usize {
    let letters: BTreeSet<Var> = u.content().union(&v.content()).copied().collect();
    let letters: Vec<Var> = letters.into_iter().collect();
    let mut n = 0;
    for (k, &a) in letters.iter().enumerate() {
        for &b in &letters[k + 1..] {
            if u.project_to(&[a, b]) != v.project_to(&[a, b]) {
                n += 1;
            }
        }
    }
    n
}

/// The leftmost critical occurrence pair of `u ≈ v`.
pub fn find_critical_pair(u: &Word, v: &Word) -> Option<CriticalOccurrence> {
    critical_occurrences(u, v).into_iter().next()
}

/// Result of a bounded derivation search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(DerivationTrace),
    /// Every word reachable from the start was explored; no derivation
    /// exists from the given rules.
    Unreachable { explored: usize },
    /// The depth bound stopped the search with words left to expand.
    DepthExhausted { explored: usize },
    /// The frontier was truncated to the width bound at some level.
    WidthExhausted { explored: usize },
}

impl SearchOutcome {
    pub fn trace(&self) -> Option<&DerivationTrace> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Breadth-first search for a derivation of `u ≈ v` from `rules`, at most
/// `depth` steps long, keeping at most `width` words per level (in
/// discovery order). Found traces are shortest and verified by
/// construction.
pub fn bounded_search(
    u: &Word,
    v: &Word,
    rules: &[Identity],
    depth: usize,
    width: usize,
    budget: u64,
) -> Result<SearchOutcome, MatchError> {
    if u == v {
        return Ok(SearchOutcome::Found(DerivationTrace::empty(u.clone())));
    }
    let mut parent: HashMap<Word, Option<DerivationStep>> = HashMap::from([(u.clone(), None)]);
    let mut frontier = vec![u.clone()];
    let mut truncated = false;
    for _ in 0..depth {
        let mut next = Vec::new();
        for word in &frontier {
            for rule in rules {
                for rw in applies_nontrivially(rule, word, budget)? {
                    if parent.contains_key(&rw.rewritten) {
                        continue;
                    }
                    let step = DerivationStep::new(
                        rule.clone(),
                        rw.direction,
                        rw.matched.substitution,
                        rw.matched.left,
                        rw.matched.right,
                    );
                    debug_assert_eq!(step.after, rw.rewritten);
                    parent.insert(rw.rewritten.clone(), Some(step));
                    if &rw.rewritten == v {
                        return Ok(SearchOutcome::Found(unwind(&parent, u, v)));
                    }
                    next.push(rw.rewritten);
                }
            }
        }
        if next.len() > width {
            next.truncate(width);
            truncated = true;
        }
        if next.is_empty() {
            return Ok(if truncated {
                SearchOutcome::WidthExhausted { explored: parent.len() }
            } else {
                SearchOutcome::Unreachable { explored: parent.len() }
            });
        }
        frontier = next;
    }
    Ok(if truncated {
        SearchOutcome::WidthExhausted { explored: parent.len() }
    } else {
        SearchOutcome::DepthExhausted { explored: parent.len() }
    })
}

fn unwind(parent: &HashMap<Word, Option<DerivationStep>>, u: &Word, v: &Word) -> DerivationTrace {
    let mut steps = Vec::new();
    let mut cur = v.clone();
    while let Some(Some(step)) = parent.get(&cur) {
        cur = step.before.clone();
        steps.push(step.clone());
    }
    steps.reverse();
    DerivationTrace::from_steps(u.clone(), steps)
}

/// Words reachable from `u` in breadth-first order, at most `limit` of
/// them. The flag reports whether the whole class was exhausted.
pub fn reachable_words(
    u: &Word,
    rules: &[Identity],
    limit: usize,
    budget: u64,
) -> Result<(Vec<Word>, bool), MatchError> {
    let mut seen: HashSet<Word> = HashSet::from([u.clone()]);
    let mut order = vec![u.clone()];
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(word) = queue.pop_front() {
        for rule in rules {
            for rw in applies_nontrivially(rule, &word, budget)? {
                if seen.insert(rw.rewritten.clone()) {
                    if order.len() == limit {
                        return Ok((order, false));
                    }
                    order.push(rw.rewritten.clone());
                    queue.push_back(rw.rewritten);
                }
            }
        }
    }
    Ok((order, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::DEFAULT_BUDGET;
    use crate::sigma::{make_w, make_w_prime, sigma_members, w_identity};
    use crate::word::{v, w};

    fn only_xy(n: usize) -> Substitution {
        let mut theta = Substitution::identity();
        for i in 0..=n {
            theta.set(Var::indexed('x', i as u32), Word::empty());
        }
        theta.set(v("z1"), Word::empty());
        theta.set(v("z2"), Word::empty());
        theta
    }

    #[test]
    fn single_steps() {
        let rule = w_identity(2).unwrap();
        let out = apply_step(&w("xyxy"), &rule, &only_xy(2), &Word::empty(), &Word::empty(), Direction::Forward)
            .unwrap();
        assert_eq!(out, w("yxyx"));
        let theta = Substitution::from_pairs([
            (v("x0"), Word::empty()),
            (v("x1"), Word::empty()),
            (v("x2"), Word::empty()),
            (v("z1"), w("x0z1")),
            (v("z2"), w("z2x1")),
        ]);
        let e = Word::empty();
        let out = apply_step(&make_w(1).unwrap(), &rule, &theta, &e, &e, Direction::Forward).unwrap();
        assert_eq!(out, make_w_prime(1).unwrap());
        let cube = &sigma_members(2).unwrap()[2];
        let out = apply_step(&w("xxx"), cube, &Substitution::identity(), &e, &e, Direction::Forward).unwrap();
        assert_eq!(out, w("xxxx"));
        assert!(apply_step(&w("xyx"), cube, &Substitution::identity(), &e, &e, Direction::Forward).is_err());
    }

    #[test]
    fn steps_invert() {
        let rule = w_identity(2).unwrap();
        let s = DerivationStep::new(rule.clone(), Direction::Forward, only_xy(2), w("a"), w("b"));
        let back = apply_step(&s.after, &rule, &s.substitution, &s.left, &s.right, Direction::Backward).unwrap();
        assert_eq!(back, s.before);
        assert_eq!(s.inverted().inverted(), s);
    }

    #[test]
    fn verification() {
        let rule = w_identity(2).unwrap();
        let s = DerivationStep::new(rule.clone(), Direction::Forward, only_xy(2), Word::empty(), Word::empty());
        let t = DerivationTrace::from_steps(w("xyxy"), vec![s.clone()]);
        assert_eq!(verify_trace(&t, None), Ok(()));
        assert_eq!(verify_trace(&DerivationTrace::empty(w("xy")), None), Ok(()));

        let looped = DerivationTrace::from_steps(w("xyxy"), vec![s.clone(), s.inverted(), s.clone()]);
        assert!(matches!(verify_trace(&looped, None), Err(TraceError::Repeat { index: 1, .. })));
        assert_eq!(verify_trace(&looped.without_cycles(), None), Ok(()));
        assert_eq!(looped.without_cycles().len(), 1);

        let mut bad = t.clone();
        bad.steps[0].after = w("yyxx");
        bad.end = w("yyxx");
        assert_eq!(verify_trace(&bad, None), Err(TraceError::Malformed { index: 0 }));

        let mut foreign = t.clone();
        foreign.steps[0].rule.tag = "w_1".into();
        assert!(matches!(verify_trace(&foreign, None), Err(TraceError::NotMember { .. })));
        assert!(matches!(verify_trace(&t, Some(1)), Err(TraceError::NotMember { .. })));
    }

    #[test]
    fn json_round_trip() {
        let rule = w_identity(2).unwrap();
        let s = DerivationStep::new(rule, Direction::Forward, only_xy(2), Word::empty(), w("t"));
        let t = DerivationTrace::from_steps(w("xyxyt"), vec![s]);
        assert_eq!(DerivationTrace::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn pairs() {
        let (u, vv) = (w("xyxy"), w("yxyx"));
        let st = unstable_pairs(&u, &vv);
        assert_eq!(st.len(), 1);
        assert!(!st[0].stable);
        let c = find_critical_pair(&u, &vv).unwrap();
        assert_eq!((c.first, c.second, c.i, c.j), (v("x"), v("y"), 1, 1));
        assert!(find_critical_pair(&u, &u).is_none());
        assert!(unstable_pairs(&u, &u).iter().all(|p| p.stable));
        for n in 2..=10 {
            let (a, b) = (make_w(n).unwrap(), make_w_prime(n).unwrap());
            let bad: Vec<_> = unstable_pairs(&a, &b).into_iter().filter(|p| !p.stable).collect();
            assert_eq!(bad.len(), 1);
            assert_eq!(bad[0].pair, (v("x"), v("y")));
            assert_eq!(unstable_count(&a, &b), 1);
        }
    }

    #[test]
    fn searches() {
        let rules = sigma_members(3).unwrap();
        let out = bounded_search(&make_w(1).unwrap(), &make_w_prime(1).unwrap(), &rules, 1, 1000, DEFAULT_BUDGET)
            .unwrap();
        let t = out.trace().unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(verify_trace(t, None), Ok(()));

        let rest: Vec<_> = sigma_members(5).unwrap().into_iter().filter(|r| r.tag != "w_2").collect();
        let out = bounded_search(&make_w(2).unwrap(), &make_w_prime(2).unwrap(), &rest, 3, 1000, DEFAULT_BUDGET)
            .unwrap();
        assert!(matches!(out, SearchOutcome::Unreachable { .. }), "{out:?}");

        let out = bounded_search(&w("xy"), &w("xy"), &rules, 0, 0, DEFAULT_BUDGET).unwrap();
        assert!(out.trace().unwrap().is_empty());
    }
}
