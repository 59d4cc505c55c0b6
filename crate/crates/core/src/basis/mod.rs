//! Constructive derivations from the identity system.
//!
//! Given `u ≈ v`, the engine gathers letters occurring more than twice into
//! cube prefixes, then removes unstable pairs one at a time. Each removal
//! picks the leftmost critical pair `(x, y)`, reduces the word around it,
//! reads the reduced word as an instance `w_n φ`, lifts that instance back
//! through the reductions and applies `w_n ≈ w'_n` once. The resulting
//! trace is verified before it is returned. When the construction fails,
//! the satisfaction checker decides whether the identity is false (a
//! witness is returned) or whether the failure is an internal error.

pub mod claims;
pub mod normalize;
pub mod phi;
pub mod reduce;

use std::fmt;

use thiserror::Error;

use crate::derivation::{
    find_critical_pair, unstable_count, verify_trace, DerivationStep, DerivationTrace, TraceError,
};
use crate::identity::Identity;
use crate::matcher::MatchError;
use crate::rees::{MonoidError, ReesMonoid, SatisfactionWitness};
use crate::sigma::catalogue_v_words;
use crate::word::{Var, Word};

pub use claims::{check_claims, ClaimViolation};
pub use normalize::{cube_letters, normalize_cubes, normalize_cubes_in_order};
pub use phi::{build_phi, PhiBuilderState, PhiStep};
pub use reduce::{
    decompose_adjacent, reduce1_block, reduce2_trim, reduce3_collapse, reduce_all, Adjacent,
    Orientation, ReductionKind, ReductionRecord,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("({}, {}) in {word} is not an adjacent unstable configuration: {reason}", pair.0, pair.1)]
    NotAdjacent {
        pair: (Var, Var),
        word: Word,
        reason: String,
    },
    #[error("reduced word {word}: {violation}")]
    Claim { word: Word, violation: ClaimViolation },
    #[error("no family instance for {word}: {detail}")]
    Phi { word: Word, detail: String },
    #[error("identity has no critical pair")]
    NoCriticalPair,
    #[error("sides have different shape: {0}")]
    Shape(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("constructed trace failed verification: {0}")]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Budget(#[from] MatchError),
    #[error("construction failed although the identity holds: {0}")]
    Unexplained(Box<EngineError>),
}

/// Everything one critical-pair removal did.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub pair: (Var, Var),
    pub orientation: Orientation,
    pub reduced: Word,
    pub records: Vec<ReductionRecord>,
    /// Instance found on the reduced word, before lifting.
    pub instance: PhiStep,
    /// Instance on the original word.
    pub lifted: PhiStep,
    pub step: DerivationStep,
}

/// Remove the leftmost critical pair of the 2-limited balanced identity
/// `u ≈ v` with one application of a `w_n ≈ w'_n`.
pub fn eliminate_critical_pair(u: &Word, v: &Word) -> Result<Elimination, EngineError> {
    let crit = find_critical_pair(u, v).ok_or(EngineError::NoCriticalPair)?;
    let (x, y) = (crit.first, crit.second);
    let adj = decompose_adjacent(u, x, y, crit.i)?;
    let (reduced, records) = reduce_all(u, x, y)?;
    let radj = decompose_adjacent(&reduced, x, y, crit.i)?;
    check_claims(&reduced, x, y, &radj).map_err(|violation| EngineError::Claim {
        word: reduced.clone(),
        violation,
    })?;
    let instance = build_phi(&reduced, x, y)?;
    let mut lifted = instance.lift_degenerate();
    for r in records.iter().rev() {
        lifted = r.lift(&lifted);
    }
    let step = lifted.to_step();
    if &step.before != u {
        return Err(EngineError::Internal(format!(
            "lifted instance {} does not reproduce {u}",
            step.before
        )));
    }
    let (before, after) = (unstable_count(u, v), unstable_count(&step.after, v));
    if after + 1 != before {
        return Err(EngineError::Internal(format!(
            "unstable pairs went from {before} to {after} rewriting {u}"
        )));
    }
    if lifted.n > u.len().max(2) {
        return Err(EngineError::Internal(format!("n = {} exceeds the bound for {u}", lifted.n)));
    }
    Ok(Elimination {
        pair: (x, y),
        orientation: adj.orientation,
        reduced,
        records,
        instance,
        lifted,
        step,
    })
}

/// Outcome of [`BasisEngine::derive`].
#[derive(Clone, Debug)]
pub enum DeriveOutcome {
    Derived(DerivationTrace),
    Refuted(SatisfactionWitness),
}

impl fmt::Display for DeriveOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeriveOutcome::Derived(t) => write!(f, "derived in {} steps\n{t}", t.len()),
            DeriveOutcome::Refuted(w) => write!(f, "refuted: {w}"),
        }
    }
}

/// The monoid built from the 37-word catalogue, with the derivation
/// construction and its checker.
#[derive(Clone, Debug)]
pub struct BasisEngine {
    monoid: ReesMonoid,
}

impl Default for BasisEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl BasisEngine {
    pub fn new() -> BasisEngine {
        BasisEngine {
            monoid: ReesMonoid::new(catalogue_v_words()).expect("nonempty catalogue"),
        }
    }

    pub fn monoid(&self) -> &ReesMonoid {
        &self.monoid
    }

    /// Build a verified derivation of `u ≈ v`, or explain why the
    /// construction does not apply.
    pub fn construct(&self, u: &Word, v: &Word) -> Result<DerivationTrace, EngineError> {
        if u == v {
            return Ok(DerivationTrace::empty(u.clone()));
        }
        let order = cube_letters(u);
        if order.iter().copied().collect::<std::collections::BTreeSet<_>>()
            != cube_letters(v).into_iter().collect()
        {
            return Err(EngineError::Shape("letters occurring more than twice differ".into()));
        }
        let (un, tu) = normalize_cubes_in_order(u, &order);
        let (vn, tv) = normalize_cubes_in_order(v, &order);
        let prefix = 3 * order.len();
        let (core_u, core_v) = (Word::from(&un[prefix..]), Word::from(&vn[prefix..]));
        if core_u.occurrences() != core_v.occurrences() {
            return Err(EngineError::Shape(format!("{core_u} and {core_v} are not balanced")));
        }
        let cubes = &un[..prefix];
        let mut cur = core_u;
        let mut steps = Vec::new();
        while cur != core_v {
            let e = eliminate_critical_pair(&cur, &core_v)?;
            cur = e.step.after.clone();
            steps.push(e.step.embedded(cubes, &[]));
        }
        let core = DerivationTrace::from_steps(un.clone(), steps);
        let trace = tu.then(core).then(tv.reversed()).without_cycles();
        verify_trace(&trace, None)?;
        Ok(trace)
    }

    /// A verified derivation when the monoid satisfies `u ≈ v`, otherwise a
    /// witness substitution.
    pub fn derive(&self, u: &Word, v: &Word) -> Result<DeriveOutcome, EngineError> {
        match self.construct(u, v) {
            Ok(t) => Ok(DeriveOutcome::Derived(t)),
            Err(e) => match self.monoid.satisfies(&Identity::new(u.clone(), v.clone()))? {
                Some(w) => Ok(DeriveOutcome::Refuted(w)),
                None => Err(EngineError::Unexplained(Box::new(e))),
            },
        }
    }
}
