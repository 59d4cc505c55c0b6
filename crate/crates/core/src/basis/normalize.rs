//! Gathering letters that occur more than twice into a prefix of cubes.

use crate::derivation::{DerivationStep, DerivationTrace};
use crate::identity::{Direction, Identity};
use crate::sigma::aperiodic_identities;
use crate::substitution::Substitution;
use crate::word::{v, Var, Word};

/// Letters occurring more than twice, in order of first occurrence.
pub fn cube_letters(u: &Word) -> Vec<Var> {
    u.first_occurrence_order()
        .into_iter()
        .filter(|&z| u.occ(z) > 2)
        .collect()
}

struct Normalizer {
    gather: Identity,
    shift: Identity,
    power: Identity,
    cur: Word,
    steps: Vec<DerivationStep>,
}

impl Normalizer {
    fn push(&mut self, rule: &Identity, dir: Direction, theta: Substitution, left: &[Var], right: &[Var]) {
        let step = DerivationStep::new(rule.clone(), dir, theta, Word::from(left), Word::from(right));
        assert_eq!(step.before, self.cur, "normalization step out of sync");
        if step.before != step.after {
            self.cur = step.after.clone();
            self.steps.push(step);
        }
    }

    fn positions_from(&self, z: Var, from: usize) -> Vec<usize> {
        self.cur
            .iter()
            .enumerate()
            .skip(from)
            .filter(|(_, &c)| c == z)
            .map(|(p, _)| p)
            .collect()
    }

    /// Turn the occurrences of `z` after `done` into a cube placed at
    /// `done`.
    fn gather(&mut self, z: Var, done: usize) {
        let (x, t1, t2) = (v("x"), v("t1"), v("t2"));
        let p = self.positions_from(z, done);
        let (p0, p1, p2) = (p[0], p[1], p[2]);
        let cur = self.cur.clone();
        let theta = Substitution::from_pairs([
            (x, Word::from(&[z][..])),
            (t1, Word::from(&cur[p0 + 1..p1])),
            (t2, Word::from(&cur[p1 + 1..p2])),
        ]);
        let gather = self.gather.clone();
        self.push(&gather, Direction::Forward, theta, &cur[..p0], &cur[p2 + 1..]);

        // Absorb each further occurrence: z³ F z → z⁴ F → z³ F.
        while let Some(&q) = self.positions_from(z, p0 + 3).first() {
            let cur = self.cur.clone();
            let f = Word::from(&cur[p0 + 3..q]);
            if !f.is_empty() {
                let theta = Substitution::from_pairs([
                    (x, Word::from(&[z][..])),
                    (t1, Word::from(&[z][..])),
                    (t2, f),
                ]);
                self.push(&gather, Direction::Forward, theta, &cur[..p0], &cur[q + 1..]);
            }
            let cur = self.cur.clone();
            let theta = Substitution::from_pairs([(x, Word::from(&[z][..]))]);
            let power = self.power.clone();
            self.push(&power, Direction::Backward, theta, &cur[..p0], &cur[p0 + 4..]);
        }

        // Move the cube left past everything since the previous cube.
        let cur = self.cur.clone();
        let theta = Substitution::from_pairs([
            (x, Word::from(&[z][..])),
            (t1, Word::from(&cur[done..p0])),
            (t2, Word::empty()),
        ]);
        let shift = self.shift.clone();
        self.push(&shift, Direction::Backward, theta, &cur[..done], &cur[p0 + 3..]);
    }
}

/// Rewrite `u` into `z1³ … zk³ · u'` where the `zi` are `order` (each must
/// occur more than twice in `u`) and `u'` is `u` with those letters
/// deleted. Uses only the aperiodic identities.
pub fn normalize_cubes_in_order(u: &Word, order: &[Var]) -> (Word, DerivationTrace) {
    let ids = aperiodic_identities();
    let mut n = Normalizer {
        gather: ids[0].clone(),
        shift: ids[1].clone(),
        power: ids[2].clone(),
        cur: u.clone(),
        steps: Vec::new(),
    };
    for (k, &z) in order.iter().enumerate() {
        assert!(u.occ(z) > 2, "{z} occurs at most twice in {u}");
        n.gather(z, 3 * k);
    }
    let trace = DerivationTrace::from_steps(u.clone(), n.steps).without_cycles();
    (n.cur, trace)
}

/// [`normalize_cubes_in_order`] with the letters of `u` occurring more than
/// twice, in first-occurrence order.
pub fn normalize_cubes(u: &Word) -> (Word, DerivationTrace) {
    normalize_cubes_in_order(u, &cube_letters(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::verify_trace;
    use crate::word::w;

    fn check(u: &str, expect: &str) -> DerivationTrace {
        let (out, t) = normalize_cubes(&w(u));
        assert_eq!(out, w(expect), "{u}");
        assert_eq!(t.end, out);
        assert_eq!(verify_trace(&t, None), Ok(()), "{u}");
        assert!(t.steps.iter().all(|s| s.rule.tag.starts_with("aperiodic")));
        t
    }

    #[test]
    fn small_cases() {
        check("zazz", "zzza");
        assert_eq!(check("azzz", "zzza").len(), 1);
        assert!(check("xyyx", "xyyx").is_empty());
        check("zzz", "zzz");
        check("zzzz", "zzz");
        check("azbzczdze", "zzzabcde");
        check("xaybxcydxey", "xxxyyyabcde");
        check("abzzzzzzb", "zzzabb");
    }
}
