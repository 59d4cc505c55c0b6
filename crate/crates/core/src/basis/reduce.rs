//! Splitting a word around a critical pair and the three reductions that
//! shrink it, each with the lift that transports a `w_n` instance on the
//! reduced word back to the original.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::phi::PhiStep;
use super::EngineError;
use crate::substitution::Substitution;
use crate::word::{Var, Word};

/// Which occurrences of the pair form the critical occurrence pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// First `x` next to first `y`.
    First,
    /// Second `x` next to second `y`.
    Second,
}

/// `u = u1 · xy · u2 · xy · u3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacent {
    pub orientation: Orientation,
    pub u1: Word,
    pub u2: Word,
    pub u3: Word,
}

impl Adjacent {
    /// Position range of `u2` inside the host word.
    pub fn middle(&self) -> Range<usize> {
        let start = self.u1.len() + 2;
        start..start + self.u2.len()
    }
}

/// Split `u` around both `xy` factors. Fails unless `u` is 2-limited,
/// `x` and `y` both occur twice with `u[x,y] = xyxy`, both `xy` are
/// factors, and no letter of the middle part is linear in `u`.
pub fn decompose_adjacent(u: &Word, x: Var, y: Var, occurrence: usize) -> Result<Adjacent, EngineError> {
    let fail = |reason: &str| EngineError::NotAdjacent {
        pair: (x, y),
        word: u.clone(),
        reason: reason.to_string(),
    };
    if !u.is_limited(2) {
        return Err(fail("word is not 2-limited"));
    }
    let (px, py) = (u.positions(x), u.positions(y));
    if px.len() != 2 || py.len() != 2 {
        return Err(fail("pair letters must occur exactly twice"));
    }
    if py[0] != px[0] + 1 || py[1] != px[1] + 1 {
        return Err(fail("both occurrences of x must be immediately followed by y"));
    }
    let u2 = Word::from(&u[px[0] + 2..px[1]]);
    let stats = u.stats();
    if let Some(t) = u2.iter().find(|t| stats.linear.contains(t)) {
        return Err(fail(&format!("middle part contains the linear letter {t}")));
    }
    Ok(Adjacent {
        orientation: if occurrence == 1 { Orientation::First } else { Orientation::Second },
        u1: Word::from(&u[..px[0]]),
        u2,
        u3: Word::from(&u[px[1] + 2..]),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    /// Restriction to the smallest block containing the pair; the flanks
    /// are put back as context.
    Block { left: Word, right: Word },
    /// Common suffix of `u1`, `u2` and common prefix of `u2`, `u3` removed;
    /// they return as images of the two padding letters.
    Trim { suffix: Word, prefix: Word },
    /// Each maximal repeated factor replaced by its first letter; `map`
    /// sends that letter back to the factor.
    Collapse { map: Substitution },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub kind: ReductionKind,
    pub original: Word,
    pub reduced: Word,
}

impl ReductionRecord {
    pub fn number(&self) -> u8 {
        match self.kind {
            ReductionKind::Block { .. } => 1,
            ReductionKind::Trim { .. } => 2,
            ReductionKind::Collapse { .. } => 3,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.original == self.reduced
    }

    /// Transport an instance on `reduced` to one on `original`.
    pub fn lift(&self, step: &PhiStep) -> PhiStep {
        debug_assert_eq!(step.word(), self.reduced);
        let lifted = match &self.kind {
            ReductionKind::Block { left, right } => PhiStep {
                n: step.n,
                phi: step.phi.clone(),
                left: Word::join(&[left, &step.left]),
                right: Word::join(&[&step.right, right]),
            },
            ReductionKind::Trim { suffix, prefix } => {
                let (z1, z2) = (Var::indexed('z', 1), Var::indexed('z', 2));
                let phi = step
                    .phi
                    .clone()
                    .with(z1, Word::join(&[&step.phi.image(z1), suffix]))
                    .with(z2, Word::join(&[prefix, &step.phi.image(z2)]));
                PhiStep { n: step.n, phi, left: step.left.clone(), right: step.right.clone() }
            }
            ReductionKind::Collapse { map } => PhiStep {
                n: step.n,
                phi: Substitution::from_pairs(step.phi.iter().map(|(&k, img)| (k, map.apply(img)))),
                left: map.apply(&step.left),
                right: map.apply(&step.right),
            },
        };
        debug_assert_eq!(lifted.word(), self.original);
        lifted
    }
}

/// Restrict to the smallest block containing the first `x`.
pub fn reduce1_block(u: &Word, x: Var) -> ReductionRecord {
    let p = u.positions(x)[0];
    let b = u.smallest_block(p..p + 1);
    ReductionRecord {
        kind: ReductionKind::Block {
            left: Word::from(&u[..b.start]),
            right: Word::from(&u[b.end..]),
        },
        original: u.clone(),
        reduced: Word::from(&u[b]),
    }
}

fn common_suffix(a: &[Var], b: &[Var]) -> usize {
    a.iter().rev().zip(b.iter().rev()).take_while(|(p, q)| p == q).count()
}

fn common_prefix(a: &[Var], b: &[Var]) -> usize {
    a.iter().zip(b.iter()).take_while(|(p, q)| p == q).count()
}

/// Remove the largest common suffix of `u1` and `u2` and the largest
/// common prefix of `u2` and `u3`.
pub fn reduce2_trim(u: &Word, x: Var, y: Var, adj: &Adjacent) -> Result<ReductionRecord, EngineError> {
    let s = common_suffix(&adj.u1, &adj.u2);
    let p = common_prefix(&adj.u3, &adj.u2);
    if s + p > adj.u2.len() {
        return Err(EngineError::Internal(format!(
            "trimmed affixes overlap inside the middle part of {u}"
        )));
    }
    let suffix = Word::from(&adj.u1[adj.u1.len() - s..]);
    let prefix = Word::from(&adj.u3[..p]);
    let pair = [x, y];
    let reduced = Word::join(&[
        &adj.u1[..adj.u1.len() - s],
        &pair,
        &adj.u2[p..adj.u2.len() - s],
        &pair,
        &adj.u3[p..],
    ]);
    Ok(ReductionRecord {
        kind: ReductionKind::Trim { suffix, prefix },
        original: u.clone(),
        reduced,
    })
}

/// Maximal factors occurring twice and avoiding the letters in `sep`, as
/// `(first start, second start, len)`. In a 2-limited word the two
/// occurrences of each letter lie on one diagonal of the self-alignment, so
/// these are the maximal runs of agreement along such diagonals.
pub fn repeated_factors(u: &Word, sep: &[Var]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in u.first_occurrence_order() {
        let p = u.positions(a);
        if p.len() != 2 || sep.contains(&a) {
            continue;
        }
        let (i, j) = (p[0], p[1]);
        if i > 0 && u[i - 1] == u[j - 1] && !sep.contains(&u[i - 1]) {
            continue;
        }
        let mut len = 0;
        while j + len < u.len() && i + len < j && u[i + len] == u[j + len] && !sep.contains(&u[i + len]) {
            len += 1;
        }
        out.push((i, j, len));
    }
    out
}

/// Collapse every maximal twice-occurring factor avoiding `x` and `y` to
/// its first letter.
pub fn reduce3_collapse(u: &Word, x: Var, y: Var) -> Result<ReductionRecord, EngineError> {
    let mut drop = BTreeSet::new();
    let mut map = Substitution::identity();
    for (i, j, len) in repeated_factors(u, &[x, y]) {
        if len < 2 {
            continue;
        }
        let f = Word::from(&u[i..i + len]);
        drop.extend(i + 1..i + len);
        drop.extend(j + 1..j + len);
        map.set(f[0], f);
    }
    let reduced: Word = u
        .iter()
        .enumerate()
        .filter(|(p, _)| !drop.contains(p))
        .map(|(_, &c)| c)
        .collect();
    Ok(ReductionRecord {
        kind: ReductionKind::Collapse { map },
        original: u.clone(),
        reduced,
    })
}

/// Apply the three reductions until none changes the word. Returns the
/// non-trivial records in the order applied.
pub fn reduce_all(u: &Word, x: Var, y: Var) -> Result<(Word, Vec<ReductionRecord>), EngineError> {
    let mut cur = u.clone();
    let mut records = Vec::new();
    loop {
        let before = cur.clone();
        let r1 = reduce1_block(&cur, x);
        cur = r1.reduced.clone();
        if !r1.is_identity() {
            records.push(r1);
        }
        let adj = decompose_adjacent(&cur, x, y, 1)?;
        let r2 = reduce2_trim(&cur, x, y, &adj)?;
        cur = r2.reduced.clone();
        if !r2.is_identity() {
            records.push(r2);
        }
        let r3 = reduce3_collapse(&cur, x, y)?;
        cur = r3.reduced.clone();
        if !r3.is_identity() {
            records.push(r3);
        }
        if cur == before {
            return Ok((cur, records));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{v, w};

    fn xy() -> (Var, Var) {
        (v("x"), v("y"))
    }

    #[test]
    fn adjacency() {
        let (x, y) = xy();
        let a = decompose_adjacent(&w("xyxy"), x, y, 1).unwrap();
        assert_eq!((a.u1.len(), a.u2.len(), a.u3.len()), (0, 0, 0));
        let a = decompose_adjacent(&w("axybaxyb"), x, y, 1).unwrap();
        assert_eq!((a.u1, a.u2, a.u3), (w("a"), w("ba"), w("b")));
        assert_eq!(a.orientation, Orientation::First);
        assert!(decompose_adjacent(&w("xayxy"), x, y, 1).is_err());
        assert!(decompose_adjacent(&w("xytxy"), x, y, 1).is_err());
    }

    #[test]
    fn block() {
        let r = reduce1_block(&w("ccaxybaxyb"), v("x"));
        assert_eq!(r.reduced, w("axybaxyb"));
        assert_eq!(r.kind, ReductionKind::Block { left: w("cc"), right: Word::empty() });
        assert!(reduce1_block(&w("axybaxyb"), v("x")).is_identity());
    }

    #[test]
    fn trim() {
        let (x, y) = xy();
        let u = w("cxydcxyd");
        let a = decompose_adjacent(&u, x, y, 1).unwrap();
        let r = reduce2_trim(&u, x, y, &a).unwrap();
        assert_eq!(r.reduced, w("xyxy"));
        assert_eq!(r.kind, ReductionKind::Trim { suffix: w("c"), prefix: w("d") });
        let u = w("axybaxyb");
        let a = decompose_adjacent(&u, x, y, 1).unwrap();
        assert_eq!(reduce2_trim(&u, x, y, &a).unwrap().reduced, w("xyxy"));
        let u = w("xyababxy");
        let a = decompose_adjacent(&u, x, y, 1).unwrap();
        assert!(reduce2_trim(&u, x, y, &a).unwrap().is_identity());
    }

    #[test]
    fn collapse() {
        let (x, y) = xy();
        let r = reduce3_collapse(&w("xyabcabcxy"), x, y).unwrap();
        assert_eq!(r.reduced, w("xyaaxy"));
        match &r.kind {
            ReductionKind::Collapse { map } => assert_eq!(map.image(v("a")), w("abc")),
            _ => unreachable!(),
        }
        assert!(reduce3_collapse(&w("x0xyx1x0x2x1xyx2"), x, y).unwrap().is_identity());
        assert_eq!(repeated_factors(&w("aa"), &[]), vec![(0, 1, 1)]);
        let r = reduce3_collapse(&w("abxyabxy"), x, y).unwrap();
        assert_eq!(r.reduced, w("axyaxy"));
    }

    #[test]
    fn full_reduction() {
        let (x, y) = xy();
        let (r, recs) = reduce_all(&w("ccdxyedxye"), x, y).unwrap();
        assert_eq!(r, w("xyxy"));
        assert!(!recs.is_empty());
    }
}
