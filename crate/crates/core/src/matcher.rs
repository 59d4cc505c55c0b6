//! Substitution search: all ways of carrying a pattern word onto, or into,
//! a target word.
//!
//! The search walks the pattern left to right keeping a cursor into the
//! target. The first occurrence of a variable branches over every image
//! length (shortest first); later occurrences must repeat the recorded
//! image. A node budget turns runaway searches into an explicit error
//! instead of a partial answer.
//!
//! Results come out ordered by start position in the target, then by the
//! depth-first order of image lengths along the pattern.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::identity::{Direction, Identity};
use crate::substitution::Substitution;
use crate::word::{Var, Word};

/// Default node budget for a single search.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
}

/// A substitution together with the context it was found in:
/// `target = left · (pattern θ) · right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub substitution: Substitution,
    pub left: Word,
    pub right: Word,
}

/// A borrowed view of one alignment found by the search.
pub struct Alignment<'a> {
    pub start: usize,
    pub end: usize,
    vars: &'a [Var],
    spans: &'a [Option<(usize, usize)>],
    target: &'a [Var],
}

impl<'a> Alignment<'a> {
    /// Image of the `i`th pattern variable (in first-occurrence order).
    pub fn local_image(&self, i: usize) -> &'a [Var] {
        let (s, l) = self.spans[i].expect("every pattern variable is aligned");
        &self.target[s..s + l]
    }

    pub fn image(&self, x: Var) -> Option<&'a [Var]> {
        self.vars
            .iter()
            .position(|&v| v == x)
            .map(|i| self.local_image(i))
    }

    pub fn matched(&self) -> &'a [Var] {
        &self.target[self.start..self.end]
    }

    pub fn substitution(&self) -> Substitution {
        Substitution::from_pairs(
            self.vars
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, Word::from(self.local_image(i)))),
        )
    }

    pub fn to_result(&self) -> MatchResult {
        MatchResult {
            substitution: self.substitution(),
            left: Word::from(&self.target[..self.start]),
            right: Word::from(&self.target[self.end..]),
        }
    }
}

/// A compiled pattern: variables renumbered by first occurrence.
pub struct Pattern {
    vars: Vec<Var>,
    ids: Vec<usize>,
    required: Vec<bool>,
}

impl Pattern {
    pub fn new(pattern: &[Var], nonempty: &BTreeSet<Var>) -> Pattern {
        let mut vars: Vec<Var> = Vec::new();
        let ids = pattern
            .iter()
            .map(|&x| match vars.iter().position(|&v| v == x) {
                Some(i) => i,
                None => {
                    vars.push(x);
                    vars.len() - 1
                }
            })
            .collect();
        let required = vars.iter().map(|v| nonempty.contains(v)).collect();
        Pattern {
            vars,
            ids,
            required,
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Local index of `x`, if it occurs in the pattern.
    pub fn local(&self, x: Var) -> Option<usize> {
        self.vars.iter().position(|&v| v == x)
    }

    /// Visit every alignment of the pattern into `target`. With `exact` the
    /// image must cover the whole target; otherwise every start position
    /// and every end position is tried. Returns whether `visit` stopped the
    /// search early.
    pub fn for_each<F>(
        &self,
        target: &[Var],
        exact: bool,
        budget: u64,
        mut visit: F,
    ) -> Result<bool, MatchError>
    where
        F: FnMut(&Alignment<'_>) -> ControlFlow<()>,
    {
        let mut state = Search {
            pattern: self,
            target,
            exact,
            spans: vec![None; self.vars.len()],
            nodes: 0,
            budget,
            start: 0,
        };
        let starts = if exact { 0..=0 } else { 0..=target.len() };
        for start in starts {
            state.start = start;
            if state.go(0, start, &mut visit)?.is_break() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

struct Search<'p, 't> {
    pattern: &'p Pattern,
    target: &'t [Var],
    exact: bool,
    spans: Vec<Option<(usize, usize)>>,
    nodes: u64,
    budget: u64,
    start: usize,
}

impl Search<'_, '_> {
    /// Minimum length still needed by `ids[from..]`, and whether every one
    /// of those positions already has an image.
    fn rest(&self, from: usize) -> (usize, bool) {
        let mut min = 0;
        let mut fixed = true;
        for &id in &self.pattern.ids[from..] {
            match self.spans[id] {
                Some((_, l)) => min += l,
                None => {
                    fixed = false;
                    if self.pattern.required[id] {
                        min += 1;
                    }
                }
            }
        }
        (min, fixed)
    }

    fn feasible(&self, from: usize, at: usize) -> bool {
        let remaining = self.target.len() - at;
        let (min, fixed) = self.rest(from);
        if min > remaining {
            return false;
        }
        !(self.exact && fixed && min != remaining)
    }

    fn go<F>(&mut self, pi: usize, ti: usize, visit: &mut F) -> Result<ControlFlow<()>, MatchError>
    where
        F: FnMut(&Alignment<'_>) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(MatchError::BudgetExceeded {
                budget: self.budget,
            });
        }
        let n = self.target.len();
        if pi == self.pattern.ids.len() {
            if self.exact && ti != n {
                return Ok(ControlFlow::Continue(()));
            }
            let a = Alignment {
                start: self.start,
                end: ti,
                vars: &self.pattern.vars,
                spans: &self.spans,
                target: self.target,
            };
            return Ok(visit(&a));
        }
        let id = self.pattern.ids[pi];
        match self.spans[id] {
            Some((s, l)) => {
                if ti + l > n || self.target[s..s + l] != self.target[ti..ti + l] {
                    return Ok(ControlFlow::Continue(()));
                }
                self.go(pi + 1, ti + l, visit)
            }
            None => {
                let lo = usize::from(self.pattern.required[id]);
                for l in lo..=n - ti {
                    self.spans[id] = Some((ti, l));
                    let (min, _) = self.rest(pi + 1);
                    if ti + l + min > n {
                        // later copies of this variable only grow the demand
                        break;
                    }
                    if !self.feasible(pi + 1, ti + l) {
                        continue;
                    }
                    let flow = self.go(pi + 1, ti + l, visit);
                    match flow {
                        Ok(ControlFlow::Continue(())) => {}
                        other => {
                            self.spans[id] = None;
                            return other;
                        }
                    }
                }
                self.spans[id] = None;
                Ok(ControlFlow::Continue(()))
            }
        }
    }
}

fn collect(
    pattern: &[Var],
    target: &[Var],
    nonempty: &BTreeSet<Var>,
    exact: bool,
    budget: u64,
) -> Result<Vec<MatchResult>, MatchError> {
    let compiled = Pattern::new(pattern, nonempty);
    let mut out = Vec::new();
    compiled.for_each(target, exact, budget, |a| {
        let r = a.to_result();
        debug_assert_eq!(
            Word::join(&[&r.left, &r.substitution.apply(pattern), &r.right]).as_slice(),
            target
        );
        out.push(r);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Every substitution θ over `con(pattern)` with `pattern θ = target` and
/// each variable of `nonempty` receiving a nonempty image.
pub fn match_exact(
    pattern: &[Var],
    target: &[Var],
    nonempty: &BTreeSet<Var>,
    budget: u64,
) -> Result<Vec<MatchResult>, MatchError> {
    collect(pattern, target, nonempty, true, budget)
}

/// Every way of writing `target = left · (pattern θ) · right`.
pub fn match_factor(
    pattern: &[Var],
    target: &[Var],
    nonempty: &BTreeSet<Var>,
    budget: u64,
) -> Result<Vec<MatchResult>, MatchError> {
    collect(pattern, target, nonempty, false, budget)
}

/// One nontrivial way of rewriting a word with an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub direction: Direction,
    pub matched: MatchResult,
    pub rewritten: Word,
}

/// Every way of writing `target = a (sθ) b` with `s` one side of `id`
/// such that replacing `sθ` by the other side changes the word. Variables
/// of the other side that are absent from `s` are left fixed.
///
/// Only substitutions giving every forced letter of the identity a
/// nonempty image are explored; the others cannot change the word.
pub fn applies_nontrivially(
    id: &Identity,
    target: &[Var],
    budget: u64,
) -> Result<Vec<Rewrite>, MatchError> {
    let forced = id.forced_nonempty();
    let mut out = Vec::new();
    for direction in [Direction::Forward, Direction::Backward] {
        let source = id.source(direction);
        let other = id.target(direction);
        let compiled = Pattern::new(source, &forced);
        compiled.for_each(target, false, budget, |a| {
            let theta = a.substitution();
            let replaced = theta.apply(other);
            if replaced.as_slice() != a.matched() {
                let rewritten = Word::join(&[&target[..a.start], &replaced, &target[a.end..]]);
                out.push(Rewrite {
                    direction,
                    matched: a.to_result(),
                    rewritten,
                });
            }
            ControlFlow::Continue(())
        })?;
    }
    Ok(out)
}

/// Verdict of the stuck check for one member of a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuckVerdict {
    pub identity: Identity,
    /// Tags of other members applying nontrivially to either side.
    pub blockers: Vec<String>,
}

impl StuckVerdict {
    /// No other member can rewrite either side, so no derivation of this
    /// identity from the rest can take a first step.
    pub fn certified(&self) -> bool {
        self.blockers.is_empty()
    }
}

/// For each member, list the other members that apply nontrivially to its
/// left or right side.
pub fn stuck_irredundancy_report(
    ids: &[Identity],
    budget: u64,
) -> Result<Vec<StuckVerdict>, MatchError> {
    use rayon::prelude::*;
    ids.par_iter()
        .enumerate()
        .map(|(i, sigma)| {
            let mut blockers = Vec::new();
            for (j, other) in ids.iter().enumerate() {
                if i == j {
                    continue;
                }
                let hits = !applies_nontrivially(other, &sigma.lhs, budget)?.is_empty()
                    || !applies_nontrivially(other, &sigma.rhs, budget)?.is_empty();
                if hits {
                    blockers.push(if other.tag.is_empty() {
                        other.to_string()
                    } else {
                        other.tag.clone()
                    });
                }
            }
            Ok(StuckVerdict {
                identity: sigma.clone(),
                blockers,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{v, w};

    fn none() -> BTreeSet<Var> {
        BTreeSet::new()
    }

    fn subs(results: &[MatchResult]) -> Vec<String> {
        results.iter().map(|r| r.substitution.to_string()).collect()
    }

    #[test]
    fn splittings_of_a_two_letter_word() {
        let r = match_exact(&w("xy"), &w("xy"), &none(), DEFAULT_BUDGET).unwrap();
        assert_eq!(subs(&r), ["x=1 y=xy", "x=x y=y", "x=xy y=1"]);
    }

    #[test]
    fn square_pattern() {
        let r = match_exact(&w("xx"), &w("xyxy"), &none(), DEFAULT_BUDGET).unwrap();
        assert_eq!(subs(&r), ["x=xy"]);
    }

    #[test]
    fn single_variable_factor_matches() {
        let target = w("xyz");
        let r = match_factor(&w("x"), &target, &none(), DEFAULT_BUDGET).unwrap();
        let n = target.len();
        assert_eq!(r.len(), (n + 1) + n * (n + 1) / 2);
        for m in &r {
            let rebuilt = Word::join(&[&m.left, &m.substitution.apply(&w("x")), &m.right]);
            assert_eq!(rebuilt, target);
        }
    }

    #[test]
    fn nonempty_constraints_are_respected() {
        let ne = w("xy").content();
        let r = match_exact(&w("xy"), &w("ab"), &ne, DEFAULT_BUDGET).unwrap();
        assert_eq!(subs(&r), ["x=a y=b"]);
    }

    #[test]
    fn budget_is_reported() {
        let err = match_factor(&w("abcabc"), &w("xyzxyzxyzxyz"), &none(), 10).unwrap_err();
        assert_eq!(err, MatchError::BudgetExceeded { budget: 10 });
    }

    #[test]
    fn cube_rewrites() {
        let id = Identity::tagged(w("xxx"), w("xxxx"), "aperiodic-3");
        let r = applies_nontrivially(&id, &w("xxxt1t2"), DEFAULT_BUDGET).unwrap();
        assert!(r.iter().any(|rw| rw.rewritten == w("xxxxt1t2")));

        let gather = Identity::tagged(w("xt1xt2x"), w("xxxt1t2"), "aperiodic-1");
        assert!(applies_nontrivially(&gather, &w("abcabc"), DEFAULT_BUDGET)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn swap_rewrite_on_square() {
        let id = Identity::tagged(w("xyxy"), w("yxyx"), "swap");
        let r = applies_nontrivially(&id, &w("abab"), DEFAULT_BUDGET).unwrap();
        assert!(r.iter().all(|rw| rw.rewritten != w("abab")));
        assert!(r.iter().any(|rw| rw.rewritten == w("baba")));
        let img = r[0].matched.substitution.image(v("x"));
        assert!(!img.is_empty());
    }
}
