//! Named batches of checks reproducing each result at desk scale.
//!
//! A suite is a list of independent items. Items run in parallel; the
//! report keeps them in declaration order.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::basis::{
    check_claims, claims, decompose_adjacent, reduce_all, BasisEngine, DeriveOutcome,
};
use crate::derivation::{find_critical_pair, verify_trace};
use crate::identity::Identity;
use crate::matcher::{applies_nontrivially, match_factor, stuck_irredundancy_report, MatchError, DEFAULT_BUDGET};
use crate::oracle::{
    all_words, cross_check, rees_irredundancy_witness, semantic_irredundancy_witness, FiniteMonoidTable, OracleError,
};
use crate::rees::{arrangements, MonoidError, ReesMonoid};
use crate::sigma::{
    aperiodic_identities, catalogue_u, catalogue_v, collapse_to_w1, make_w, make_w_prime, sandwich_word,
    self_reverse_labels, sigma_members, w_identity, APERIODIC_POWER, CATALOGUE_V_SIZE,
};
use crate::substitution::Substitution;
use crate::word::{v, w, Var, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass { detail: String },
    Fail { reason: String },
    Skipped { reason: String, budget: bool },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemReport {
    pub name: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub items: Vec<ItemReport>,
    pub millis: u128,
}

impl SuiteReport {
    /// A suite passes iff all of its items pass.
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.verdict.passed())
    }

    pub fn failed(&self) -> bool {
        self.items.iter().any(|i| matches!(i.verdict, Verdict::Fail { .. }))
    }

    pub fn budget_exhausted(&self) -> bool {
        self.items
            .iter()
            .any(|i| matches!(i.verdict, Verdict::Skipped { budget: true, .. }))
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for item in &self.items {
            let (tag, text) = match &item.verdict {
                Verdict::Pass { detail } => ("PASS", detail),
                Verdict::Fail { reason } => ("FAIL", reason),
                Verdict::Skipped { reason, .. } => ("SKIP", reason),
            };
            writeln!(f, "  {tag} {} ({} ms): {text}", item.name, item.millis)?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} in {} ms", self.suite, self.millis)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; known: {known}", known = SUITE_NAMES.join(", "))]
    Unknown(String),
}

/// Sizes and budgets for the suites.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub budget: u64,
    /// Largest family index used where a suite needs a finite cut of the
    /// system (the criteria fix their own ranges below this).
    pub nmax: usize,
    pub theorem_vars: usize,
    pub theorem_len: usize,
    pub random_instances: usize,
    pub random_max_len: usize,
    pub seed: u64,
    pub max_order: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            budget: DEFAULT_BUDGET,
            nmax: 8,
            theorem_vars: 4,
            theorem_len: 10,
            random_instances: 1000,
            random_max_len: 16,
            seed: 2024,
            max_order: 5,
        }
    }
}

pub const SUITE_NAMES: [&str; 11] = [
    "catalogue",
    "lemma-easy",
    "lemma-u-isoterms",
    "lemma-adjacent",
    "lemma-v-isoterms",
    "irredundancy",
    "degeneracy",
    "theorem",
    "claims",
    "cross-check",
    "sandwich",
];

type Outcome = Result<String, Failure>;

/// Why an item did not pass.
#[derive(Debug)]
pub enum Failure {
    Fail(String),
    Budget(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Failure {
        Failure::Fail(s)
    }
}

impl From<MatchError> for Failure {
    fn from(e: MatchError) -> Failure {
        Failure::Budget(e.to_string())
    }
}

impl From<MonoidError> for Failure {
    fn from(e: MonoidError) -> Failure {
        match e {
            MonoidError::Budget(b) => Failure::Budget(b.to_string()),
            other => Failure::Fail(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::Budget { .. } => Failure::Budget(e.to_string()),
            OracleError::Monoid(m) => m.into(),
            other => Failure::Fail(other.to_string()),
        }
    }
}

fn ensure(cond: bool, pass: impl Into<String>, fail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(pass.into())
    } else {
        Err(Failure::Fail(fail()))
    }
}

type Check<'a> = Box<dyn Fn() -> Outcome + Send + Sync + 'a>;

struct Item<'a> {
    name: String,
    check: Check<'a>,
}

fn item<'a>(name: impl Into<String>, check: impl Fn() -> Outcome + Send + Sync + 'a) -> Item<'a> {
    Item { name: name.into(), check: Box::new(check) }
}

fn run_items(suite: &str, items: Vec<Item<'_>>) -> SuiteReport {
    let start = Instant::now();
    let reports = items
        .par_iter()
        .map(|it| {
            let t = Instant::now();
            let verdict = match (it.check)() {
                Ok(detail) => Verdict::Pass { detail },
                Err(Failure::Fail(reason)) => Verdict::Fail { reason },
                Err(Failure::Budget(reason)) => Verdict::Skipped { reason, budget: true },
            };
            ItemReport { name: it.name.clone(), verdict, millis: t.elapsed().as_millis() }
        })
        .collect();
    SuiteReport { suite: suite.to_string(), items: reports, millis: start.elapsed().as_millis() }
}

/// Run one named suite.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let items = match name {
        "catalogue" => catalogue_items(),
        "lemma-easy" => lemma_easy_items(cfg),
        "lemma-u-isoterms" => lemma_u_items(),
        "lemma-adjacent" => lemma_adjacent_items(cfg),
        "lemma-v-isoterms" => lemma_v_items(cfg),
        "irredundancy" => irredundancy_items(cfg),
        "degeneracy" => degeneracy_items(),
        "theorem" => theorem_items(cfg),
        "claims" => claims_items(cfg),
        "cross-check" => cross_check_items(cfg),
        "sandwich" => sandwich_items(cfg),
        other => return Err(SuiteError::Unknown(other.to_string())),
    };
    Ok(run_items(name, items))
}

fn catalogue_items() -> Vec<Item<'static>> {
    vec![
        item("M({xyx}) has 7 elements", || {
            let m = ReesMonoid::new(vec![w("xyx")])?;
            let elems: Vec<String> = m.elements().iter().map(|e| e.to_string()).collect();
            ensure(m.order() == 7, elems.join(" "), || format!("order {}", m.order()))
        }),
        item("catalogue size after canonical dedup", || {
            let words: BTreeSet<Word> = catalogue_v().iter().map(|e| e.word.canonical_form()).collect();
            ensure(words.len() == CATALOGUE_V_SIZE, format!("{} words", words.len()), || {
                format!("{} distinct words", words.len())
            })
        }),
        item("self-reverse base words", || {
            let got = self_reverse_labels();
            let want = ["3.3", "6.1", "7.3", "8.1", "9.1", "9.3"];
            ensure(got == want, got.join(" "), || format!("got {got:?}"))
        }),
    ]
}

fn lemma_easy_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    let mut items = vec![item("xyxy class in M({xyyx,xxyy})", move || {
        let m = ReesMonoid::new(vec![w("xyyx"), w("xxyy")])?;
        let mut class = Vec::new();
        for p in arrangements(&w("xxyy")) {
            if m.satisfies_with_budget(&Identity::new(w("xyxy"), p.clone()), cfg.budget)?.is_none() {
                class.push(p.to_string());
            }
        }
        ensure(class == ["xyxy", "yxyx"], class.join(" "), || format!("class {class:?}"))
    })];
    for s in ["xy", "xxy", "xyx", "yxx", "xx"] {
        items.push(item(format!("{s} is an isoterm for M({{xyyx}})"), move || {
            let m = ReesMonoid::new(vec![w("xyyx")])?;
            match m.is_isoterm(&w(s))? {
                None => Ok("isoterm".into()),
                Some(o) => Err(Failure::Fail(format!("M satisfies {s} = {o}"))),
            }
        }));
    }
    items
}

fn lemma_u_items() -> Vec<Item<'static>> {
    ["xyzxzy", "xyxzzy", "xyxzyz"]
        .into_iter()
        .map(|s| {
            item(format!("{s} is an isoterm for M(U)"), move || {
                let m = ReesMonoid::new(catalogue_u())?;
                match m.is_isoterm(&w(s))? {
                    None => Ok("isoterm".into()),
                    Some(o) => Err(Failure::Fail(format!("M(U) satisfies {s} = {o}"))),
                }
            })
        })
        .collect()
}

/// Balanced 2-limited identities `u ≈ v`, `u ≠ v`, with at most `max_vars`
/// variables and sides of length at most `max_len`, one per class up to
/// renaming and swapping sides, that `m` satisfies.
pub fn exhaustive_identities(
    m: &ReesMonoid,
    max_vars: usize,
    max_len: usize,
    budget: u64,
) -> Result<Vec<Identity>, MonoidError> {
    let len = max_len.min(2 * max_vars);
    let mut ids = BTreeSet::new();
    for u in all_words(max_vars, len) {
        if u.is_empty() || !u.is_limited(2) || u.canonical_form() != u {
            continue;
        }
        for p in arrangements(&u) {
            if p != u {
                ids.insert(Identity::new(u.clone(), p).canonical());
            }
        }
    }
    let ids: Vec<Identity> = ids.into_iter().collect();
    let keep = ids
        .par_iter()
        .map(|id| m.satisfies_with_budget(id, budget).map(|w| w.is_none()))
        .collect::<Result<Vec<bool>, _>>()?;
    Ok(ids.into_iter().zip(keep).filter(|(_, k)| *k).map(|(id, _)| id).collect())
}

fn engine_identities(cfg: &SuiteConfig) -> Result<(BasisEngine, Vec<Identity>), Failure> {
    let e = BasisEngine::new();
    let ids = exhaustive_identities(e.monoid(), cfg.theorem_vars, cfg.theorem_len, cfg.budget)?;
    Ok((e, ids))
}

fn lemma_adjacent_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    vec![item("leftmost critical pairs are adjacent", move || {
        let (_, ids) = engine_identities(cfg)?;
        for id in &ids {
            let (u, v) = (&id.lhs, &id.rhs);
            let c = find_critical_pair(u, v).ok_or_else(|| format!("{id}: no critical pair"))?;
            decompose_adjacent(u, c.first, c.second, c.i).map_err(|e| format!("{id}: {e}"))?;
        }
        Ok(format!("{} identities", ids.len()))
    })]
}

fn lemma_v_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    let mut items = Vec::new();
    for n in 2..=cfg.nmax.max(2) {
        items.push(item(format!("w_{n} does not apply to V"), move || {
            let id = w_identity(n).map_err(|e| e.to_string())?;
            for e in catalogue_v() {
                let hits = applies_nontrivially(&id, &e.word, cfg.budget)?;
                if let Some(h) = hits.first() {
                    return Err(Failure::Fail(format!("{} rewrites to {}", e.label(), h.rewritten)));
                }
            }
            Ok(format!("{} words", CATALOGUE_V_SIZE))
        }));
    }
    items.push(item("trio does not apply to 2-limited words", move || {
        for id in aperiodic_identities() {
            let forced = id.forced_nonempty();
            for side in [&id.lhs, &id.rhs] {
                if !forced.iter().any(|&x| side.occ(x) >= 3) {
                    return Err(Failure::Fail(format!("{}: side {side} has no forced cube", id.tag)));
                }
            }
            for e in catalogue_v() {
                if !applies_nontrivially(&id, &e.word, cfg.budget)?.is_empty() {
                    return Err(Failure::Fail(format!("{} applies to {}", id.tag, e.label())));
                }
            }
        }
        Ok("each side has a forced letter occurring three times".into())
    }));
    items.push(item("M(V) satisfies Σ (n ≤ 6)", move || {
        let e = BasisEngine::new();
        let ids = sigma_members(6).map_err(|e| e.to_string())?;
        for (id, r) in ids.iter().zip(e.monoid().satisfies_all(&ids)?) {
            if let Some(wit) = r {
                return Err(Failure::Fail(format!("{}: {wit}", id.tag)));
            }
        }
        Ok(format!("{} members", ids.len()))
    }));
    items
}

fn rest_of(tag: &str, n_max: usize) -> Result<(Identity, Vec<Identity>), Failure> {
    let all = sigma_members(n_max).map_err(|e| e.to_string())?;
    let sigma = all.iter().find(|i| i.tag == tag).cloned().ok_or_else(|| format!("no member {tag}"))?;
    Ok((sigma, all.into_iter().filter(|i| i.tag != tag).collect()))
}

fn irredundancy_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    const N: usize = 7;
    let mut items = vec![
        item("no w_n is a factor pattern of w_m (2 ≤ n ≠ m ≤ 7)", move || {
            let nz: BTreeSet<Var> = [v("x"), v("y")].into_iter().collect();
            for n in 2..=N {
                for m in (2..=N).filter(|&m| m != n) {
                    let (p, t) = (make_w(n).unwrap(), make_w(m).unwrap());
                    if let Some(r) = match_factor(&p, &t, &nz, cfg.budget)?.first() {
                        return Err(Failure::Fail(format!("w_{n} into w_{m}: {}", r.substitution)));
                    }
                }
            }
            Ok("30 ordered pairs".into())
        }),
        item("family members are stuck (n ≤ 7)", move || {
            let ids = sigma_members(N).map_err(|e| e.to_string())?;
            let report = stuck_irredundancy_report(&ids, cfg.budget)?;
            let mut certified = Vec::new();
            for r in &report {
                if r.certified() {
                    certified.push(r.identity.tag.clone());
                } else if r.identity.w_index().is_some() {
                    return Err(Failure::Fail(format!("{} blocked by {:?}", r.identity.tag, r.blockers)));
                }
            }
            Ok(format!("certified: {}", certified.join(" ")))
        }),
        item("x³ ≈ x⁴ semantic witness", move || {
            let (sigma, rest) = rest_of(APERIODIC_POWER, N)?;
            let s = semantic_irredundancy_witness(&sigma, &rest, 2, cfg.budget)?;
            match s.witness {
                Some(t) if t == FiniteMonoidTable::cyclic_group(2) => Ok("cyclic group of order 2".into()),
                Some(t) => Ok(format!("order {} table\n{t}", t.order())),
                None => Err(Failure::Fail("no witness of order ≤ 2".into())),
            }
        }),
    ];
    for tag in [crate::sigma::APERIODIC_SHIFT, crate::sigma::APERIODIC_GATHER] {
        items.push(item(format!("{tag} semantic witness"), move || {
            let (sigma, rest) = rest_of(tag, N)?;
            let s = semantic_irredundancy_witness(&sigma, &rest, cfg.max_order, cfg.budget)?;
            if let Some(t) = s.witness {
                return Ok(format!("table of order {}: {:?}", t.order(), t.rows()));
            }
            match rees_irredundancy_witness(&sigma, &rest, 6, 3, cfg.budget)? {
                Some(h) => Ok(format!(
                    "none of order ≤ {}; Rees quotient M({{{}}}) of order {}",
                    cfg.max_order,
                    h.word,
                    h.table.order()
                )),
                None => Err(Failure::Fail(format!("no witness of order ≤ {} nor among one-word quotients", cfg.max_order))),
            }
        }));
    }
    items
}

fn degeneracy_items() -> Vec<Item<'static>> {
    vec![
        item("collapse of w_2 is w_1", || {
            let theta = collapse_to_w1(2);
            let (a, b) = (theta.apply(&make_w(2).unwrap()), theta.apply(&make_w_prime(2).unwrap()));
            ensure(a == make_w(1).unwrap() && b == make_w_prime(1).unwrap(), format!("{a} = {b}"), || {
                format!("got {a} = {b}")
            })
        }),
        item("w_1 ≈ w'_1 derives in one step", || {
            let (a, b) = (make_w(1).unwrap(), make_w_prime(1).unwrap());
            match BasisEngine::new().derive(&a, &b).map_err(|e| e.to_string())? {
                DeriveOutcome::Derived(t) => {
                    verify_trace(&t, None).map_err(|e| e.to_string())?;
                    ensure(t.len() == 1, format!("via {}", t.steps[0].rule.tag), || format!("{} steps", t.len()))
                }
                DeriveOutcome::Refuted(wit) => Err(Failure::Fail(format!("refuted: {wit}"))),
            }
        }),
    ]
}

/// Random identities satisfied by M(V): a family swap under a random
/// substitution and context, followed by up to two further random family
/// rewrites of the right side. Half use fresh letters (2-limited words),
/// half a small shared alphabet (cube normalization).
pub fn random_instances(count: usize, max_len: usize, seed: u64) -> Vec<Identity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shared: Vec<Var> = "abcdef".chars().map(Var::letter).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let fresh_mode = out.len() % 2 == 0;
        let mut next = 0u32;
        let mut letter = |rng: &mut ChaCha8Rng| {
            if fresh_mode {
                next += 1;
                Var::indexed('q', next)
            } else {
                shared[rng.gen_range(0..shared.len())]
            }
        };
        let mut word = |rng: &mut ChaCha8Rng, max: usize| -> Word {
            let l = rng.gen_range(0..=max);
            (0..l).map(|_| letter(rng)).collect()
        };
        let n = rng.gen_range(2..=4);
        let id = w_identity(n).expect("n >= 2");
        let mut theta = Substitution::identity();
        for x in id.content() {
            let img = if x == v("x") || x == v("y") { word(&mut rng, 1) } else { word(&mut rng, 2) };
            theta.set(x, img);
        }
        let (l, r) = (word(&mut rng, 2), word(&mut rng, 2));
        let u = Word::join(&[&l, &theta.apply(&id.lhs), &r]);
        let mut v = Word::join(&[&l, &theta.apply(&id.rhs), &r]);
        if u.len() > max_len || u == v {
            continue;
        }
        for _ in 0..rng.gen_range(0..=2) {
            let m = rng.gen_range(2..=4);
            let rule = w_identity(m).expect("m >= 2");
            let Ok(hits) = applies_nontrivially(&rule, &v, DEFAULT_BUDGET) else { break };
            if hits.is_empty() {
                break;
            }
            v = hits[rng.gen_range(0..hits.len())].rewritten.clone();
        }
        if u != v {
            out.push(Identity::new(u, v));
        }
    }
    out
}

fn derive_all(e: &BasisEngine, ids: &[Identity]) -> Outcome {
    let longest = ids
        .par_iter()
        .map(|id| match e.derive(&id.lhs, &id.rhs) {
            Ok(DeriveOutcome::Derived(t)) => {
                verify_trace(&t, None).map_err(|err| format!("{id}: {err}"))?;
                Ok(t.len())
            }
            Ok(DeriveOutcome::Refuted(wit)) => Err(format!("{id}: refuted by {wit}")),
            Err(err) => Err(format!("{id}: {err}")),
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(format!("{} identities, longest trace {longest}", ids.len()))
}

fn theorem_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    vec![
        item("exhaustive small identities derive", move || {
            let (e, ids) = engine_identities(cfg)?;
            derive_all(&e, &ids)
        }),
        item("randomized longer instances derive", move || {
            let ids = random_instances(cfg.random_instances, cfg.random_max_len, cfg.seed);
            derive_all(&BasisEngine::new(), &ids)
        }),
    ]
}

fn claims_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    vec![
        item("claims 2, 3, 4, 7, 8 on reduced words", move || {
            let (_, ids) = engine_identities(cfg)?;
            let mut checked = 0;
            for id in &ids {
                let Some(c) = find_critical_pair(&id.lhs, &id.rhs) else { continue };
                let (x, y) = (c.first, c.second);
                let (r, _) = reduce_all(&id.lhs, x, y).map_err(|e| format!("{id}: {e}"))?;
                let adj = decompose_adjacent(&r, x, y, c.i).map_err(|e| format!("{id}: {e}"))?;
                check_claims(&r, x, y, &adj).map_err(|e| format!("{id} reduced to {r}: {e}"))?;
                checked += 1;
            }
            Ok(format!("{checked} reduced words"))
        }),
        item("claim 1 on reduced words", move || {
            let (_, ids) = engine_identities(cfg)?;
            let mut bad = Vec::new();
            for id in &ids {
                let Some(c) = find_critical_pair(&id.lhs, &id.rhs) else { continue };
                let (r, _) = reduce_all(&id.lhs, c.first, c.second).map_err(|e| format!("{id}: {e}"))?;
                if let Err(e) = claims::claim1(&r, c.first) {
                    bad.push(format!("{r}: {}", e.detail));
                }
            }
            ensure(bad.is_empty(), format!("{} identities", ids.len()), || {
                format!("{} reduced words violate it, e.g. {}", bad.len(), bad[0])
            })
        }),
    ]
}

fn cross_check_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    [["xyyx", "xxyy"], ["abba", "aabb"]]
        .into_iter()
        .map(|gens| {
            item(format!("M({{{},{}}}) exact vs naive", gens[0], gens[1]), move || {
                let m = ReesMonoid::new(gens.iter().map(|s| w(s)).collect())?;
                let r = cross_check(&m, 3, 6, cfg.budget.saturating_mul(100))?;
                ensure(r.passed(), format!("{} identities, {} satisfied", r.identities, r.satisfied), || {
                    format!("{} disagreements, e.g. {}", r.disagreements.len(), r.disagreements[0])
                })
            })
        })
        .collect()
}

fn sandwich_items(cfg: &SuiteConfig) -> Vec<Item<'_>> {
    let mut items = vec![item(format!("M({{abba,aabb}}) satisfies Σ (n ≤ {})", cfg.nmax), move || {
        let m = ReesMonoid::new(vec![w("abba"), w("aabb")])?;
        let ids = sigma_members(cfg.nmax.max(2)).map_err(|e| e.to_string())?;
        for (id, r) in ids.iter().zip(m.satisfies_all(&ids)?) {
            if let Some(wit) = r {
                return Err(Failure::Fail(format!("{}: {wit}", id.tag)));
            }
        }
        Ok(format!("{} members", ids.len()))
    })];
    for n in 2..=5 {
        items.push(item(format!("sandwich word n = {n} is an isoterm"), move || {
            let m = ReesMonoid::new(vec![w("abba"), w("aabb")])?;
            let s = sandwich_word(n).map_err(|e| e.to_string())?;
            match m.is_isoterm(&s)? {
                None => Ok(s.to_string()),
                Some(o) => Err(Failure::Fail(format!("M satisfies {s} = {o}"))),
            }
        }));
    }
    items
}
