//! Reading a reduced word as an instance `w_n φ` of the family.
//!
//! With `z1φ = z2φ = 1` and `xφ = x`, `yφ = y`, an instance reads
//! `a0 x y a1 a0 a2 a1 … an a(n-1) x y an` where each `aj = xj φ` is a
//! single letter or empty. The builder scans the word left to right,
//! fixing one `aj` per round.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::derivation::DerivationStep;
use crate::identity::Direction;
use crate::sigma::{make_w, make_w_prime, w_identity};
use crate::substitution::Substitution;
use crate::word::{v, Var, Word};

/// `left · (w_n φ) · right`, the data of one application of `w_n ≈ w'_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiStep {
    pub n: usize,
    pub phi: Substitution,
    pub left: Word,
    pub right: Word,
}

impl PhiStep {
    pub fn word(&self) -> Word {
        let wn = make_w(self.n).expect("n >= 1");
        Word::join(&[&self.left, &self.phi.apply(&wn), &self.right])
    }

    pub fn swapped_word(&self) -> Word {
        let wn = make_w_prime(self.n).expect("n >= 1");
        Word::join(&[&self.left, &self.phi.apply(&wn), &self.right])
    }

    /// Replace an `n = 1` instance by the equal `n = 2` instance obtained
    /// by erasing `x0, x1, x2` and moving their images into the padding
    /// letters.
    pub fn lift_degenerate(&self) -> PhiStep {
        if self.n != 1 {
            return self.clone();
        }
        let (z1, z2) = (v("z1"), v("z2"));
        let mut phi = Substitution::identity()
            .with(v("x"), self.phi.image(v("x")))
            .with(v("y"), self.phi.image(v("y")))
            .with(z1, Word::join(&[&self.phi.image(v("x0")), &self.phi.image(z1)]))
            .with(z2, Word::join(&[&self.phi.image(z2), &self.phi.image(v("x1"))]));
        for i in 0..=2 {
            phi.set(Var::indexed('x', i), Word::empty());
        }
        let out = PhiStep {
            n: 2,
            phi,
            left: self.left.clone(),
            right: self.right.clone(),
        };
        debug_assert_eq!(out.word(), self.word());
        out
    }

    /// The forward application of `w_n ≈ w'_n` this instance describes.
    pub fn to_step(&self) -> DerivationStep {
        assert!(self.n >= 2, "the family starts at n = 2");
        DerivationStep::new(
            w_identity(self.n).expect("n >= 2"),
            Direction::Forward,
            self.phi.clone(),
            self.left.clone(),
            self.right.clone(),
        )
    }
}

impl fmt::Display for PhiStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} φ={{{}}} left={} right={}", self.n, self.phi, self.left, self.right)
    }
}

/// Progress of the left-to-right construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiBuilderState {
    word: Word,
    x: Var,
    y: Var,
    /// `a0, a1, …`; `None` is the empty word.
    pub assigned: Vec<Option<Var>>,
    /// Length of the prefix of `word` accounted for so far.
    pub cursor: usize,
    pub terminal: Option<usize>,
}

impl PhiBuilderState {
    /// Start from `a0 = u1`, which must have length at most one.
    pub fn new(u: &Word, x: Var, y: Var) -> Result<PhiBuilderState, EngineError> {
        let fail = |detail: String| EngineError::Phi { word: u.clone(), detail };
        let px = u.positions(x);
        let a0 = match px.first() {
            Some(0) => None,
            Some(1) => Some(u[0]),
            _ => return Err(fail("more than one letter precedes the first x".into())),
        };
        let start = px[0];
        if u.get(start + 1) != Some(&y) {
            return Err(fail("first x is not followed by y".into()));
        }
        Ok(PhiBuilderState {
            word: u.clone(),
            x,
            y,
            assigned: vec![a0],
            cursor: start + 2,
            terminal: None,
        })
    }

    fn k(&self) -> usize {
        self.assigned.len() - 1
    }

    fn fail(&self, detail: String) -> EngineError {
        EngineError::Phi { word: self.word.clone(), detail }
    }

    /// Fix the next letter, or the value of n. Returns `true` when done.
    pub fn advance(&mut self) -> Result<bool, EngineError> {
        if self.terminal.is_some() {
            return Ok(true);
        }
        let k = self.k();
        let ak = self.assigned[k];
        let c = *self
            .word
            .get(self.cursor)
            .ok_or_else(|| self.fail("word ended before the second xy".into()))?;
        if c == self.x {
            let tail: Vec<Var> = [self.x, self.y].into_iter().chain(ak).collect();
            if self.word[self.cursor..] != tail[..] {
                return Err(self.fail(format!(
                    "after the second xy expected exactly {}",
                    Word::from(tail[2..].to_vec())
                )));
            }
            if k == 0 {
                // xy xy with a0 on both ends is the degenerate instance n = 1.
                self.assigned.push(None);
                self.terminal = Some(1);
            } else {
                self.terminal = Some(k);
            }
            self.cursor = self.word.len();
            return Ok(true);
        }
        if Some(c) == ak {
            self.assigned.push(None);
            self.cursor += 1;
        } else {
            if c == self.y || self.assigned.contains(&Some(c)) {
                return Err(self.fail(format!("letter {c} cannot start a new round")));
            }
            self.assigned.push(Some(c));
            let expect: Vec<Var> = [c].into_iter().chain(ak).collect();
            let end = self.cursor + expect.len();
            if self.word.get(self.cursor..end) != Some(&expect[..]) {
                return Err(self.fail(format!(
                    "expected {} at position {}",
                    Word::from(expect),
                    self.cursor
                )));
            }
            self.cursor = end;
        }
        let k = self.k();
        if self.assigned[k].is_none() && self.assigned[k - 1].is_none() {
            return Err(self.fail(format!("a{} and a{k} are both empty", k - 1)));
        }
        Ok(false)
    }

    pub fn finish(&self) -> Result<PhiStep, EngineError> {
        let n = self.terminal.ok_or_else(|| self.fail("construction did not terminate".into()))?;
        let mut phi = Substitution::identity()
            .with(v("x"), Word::from(vec![self.x]))
            .with(v("y"), Word::from(vec![self.y]))
            .with(v("z1"), Word::empty())
            .with(v("z2"), Word::empty());
        for (j, a) in self.assigned.iter().enumerate().take(n + 1) {
            phi.set(Var::indexed('x', j as u32), a.iter().copied().collect());
        }
        let step = PhiStep { n, phi, left: Word::empty(), right: Word::empty() };
        if step.word() != self.word {
            return Err(self.fail(format!("w_{n}φ = {} differs from the word", step.word())));
        }
        Ok(step)
    }
}

/// Find `n` and `φ` with `w_n φ = u`, `xφ = x`, `yφ = y` and empty padding.
pub fn build_phi(u: &Word, x: Var, y: Var) -> Result<PhiStep, EngineError> {
    let mut state = PhiBuilderState::new(u, x, y)?;
    while !state.advance()? {}
    state.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn xy() -> (Var, Var) {
        (v("x"), v("y"))
    }

    #[test]
    fn direct_instance() {
        let (x, y) = xy();
        let u = w("x0xyx1x0x2x1xyx2");
        let s = build_phi(&u, x, y).unwrap();
        assert_eq!(s.n, 2);
        for i in 0..=2 {
            let xi = Var::indexed('x', i);
            assert_eq!(s.phi.image(xi), Word::from(vec![xi]));
        }
        assert_eq!(s.swapped_word(), w("x0yxx1x0x2x1yxx2"));
    }

    #[test]
    fn with_empty_images() {
        let (x, y) = xy();
        let s = build_phi(&w("xyababxy"), x, y).unwrap();
        assert_eq!(s.n, 3);
        assert_eq!(s.phi.image(v("x0")), Word::empty());
        assert_eq!(s.phi.image(v("x1")), w("a"));
        assert_eq!(s.phi.image(v("x2")), w("b"));
        assert_eq!(s.phi.image(v("x3")), Word::empty());
    }

    #[test]
    fn degenerate_instances() {
        let (x, y) = xy();
        let s = build_phi(&w("axybaxyb"), x, y).unwrap();
        assert_eq!(s.n, 1);
        let lifted = s.lift_degenerate();
        assert_eq!(lifted.n, 2);
        assert_eq!(lifted.phi.image(v("z1")), w("a"));
        assert_eq!(lifted.phi.image(v("z2")), w("b"));
        assert_eq!(lifted.word(), w("axybaxyb"));
        assert_eq!(lifted.to_step().after, w("ayxbayxb"));

        let s = build_phi(&w("xyxy"), x, y).unwrap();
        assert_eq!(s.n, 1);
        assert_eq!(s.lift_degenerate().to_step().after, w("yxyx"));
    }

    #[test]
    fn rejects_non_instances() {
        let (x, y) = xy();
        assert!(build_phi(&w("abxyxy"), x, y).is_err());
        assert!(build_phi(&w("xyabbaxy"), x, y).is_err());
        assert!(build_phi(&w("xyaxya"), x, y).is_ok());
    }
}
