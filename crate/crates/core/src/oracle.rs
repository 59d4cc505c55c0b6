//! Brute-force ground truth over explicit multiplication tables: naive
//! satisfaction, exhaustive identity enumeration, and small monoids that
//! separate one identity from a set of others.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::identity::Identity;
use crate::rees::{Element, MonoidError, ReesMonoid};
use crate::sigma::{make_w, make_w_prime};
use crate::word::{canonical_var, Var, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("budget exceeded: {needed} evaluations needed, {budget} allowed")]
    Budget { needed: u128, budget: u64 },
    #[error("ill-posed query: {0}")]
    IllPosed(String),
    #[error("invalid table: {0}")]
    Table(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

const UNSET: usize = usize::MAX;

/// A finite monoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TableFile", into = "TableFile")]
pub struct FiniteMonoidTable {
    order: usize,
    identity: usize,
    cells: Vec<usize>,
}

#[derive(Clone, Serialize, Deserialize)]
struct TableFile {
    order: usize,
    identity_element: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<TableFile> for FiniteMonoidTable {
    type Error = OracleError;

    fn try_from(f: TableFile) -> Result<Self, OracleError> {
        if f.table.len() != f.order {
            return Err(OracleError::Table(format!("{} rows for order {}", f.table.len(), f.order)));
        }
        FiniteMonoidTable::new(f.table, f.identity_element)
    }
}

impl From<FiniteMonoidTable> for TableFile {
    fn from(t: FiniteMonoidTable) -> TableFile {
        TableFile {
            order: t.order,
            identity_element: t.identity,
            table: t.rows(),
        }
    }
}

impl FiniteMonoidTable {
    /// Validate shape, identity laws and associativity.
    pub fn new(rows: Vec<Vec<usize>>, identity: usize) -> Result<FiniteMonoidTable, OracleError> {
        let order = rows.len();
        if order == 0 {
            return Err(OracleError::Table("a monoid has at least one element".into()));
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(OracleError::Table("table is not square".into()));
        }
        if rows.iter().flatten().any(|&c| c >= order) || identity >= order {
            return Err(OracleError::Table(format!("entries must be below {order}")));
        }
        let t = FiniteMonoidTable {
            order,
            identity,
            cells: rows.into_iter().flatten().collect(),
        };
        if let Some(a) = (0..order).find(|&a| t.mul(identity, a) != a || t.mul(a, identity) != a) {
            return Err(OracleError::Table(format!("{identity} is not an identity for {a}")));
        }
        if let Some((a, b, c)) = t.associativity_failure() {
            return Err(OracleError::Table(format!("({a}{b}){c} differs from {a}({b}{c})")));
        }
        Ok(t)
    }

    pub fn trivial() -> FiniteMonoidTable {
        FiniteMonoidTable { order: 1, identity: 0, cells: vec![0] }
    }

    /// The cyclic group of order `n` (identity 0, generator 1).
    pub fn cyclic_group(n: usize) -> FiniteMonoidTable {
        assert!(n > 0);
        FiniteMonoidTable {
            order: n,
            identity: 0,
            cells: (0..n * n).map(|k| (k / n + k % n) % n).collect(),
        }
    }

    /// The table of a Rees quotient together with the element of each index.
    pub fn from_rees(m: &ReesMonoid) -> (FiniteMonoidTable, Vec<Element>) {
        let elems = m.elements();
        let index: HashMap<&Element, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let order = elems.len();
        let mut cells = Vec::with_capacity(order * order);
        for a in &elems {
            for b in &elems {
                cells.push(index[&m.product(a, b)]);
            }
        }
        let identity = index[&Element::Word(Word::empty())];
        (FiniteMonoidTable { order, identity, cells }, elems)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.order + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Value of a word whose letters have been replaced by element indices.
    pub fn product_of(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.identity, |acc, e| self.mul(acc, e))
    }

    /// Relabel so that the identity is 0 and the flattened table is least
    /// among all relabelings fixing the identity.
    pub fn canonical_form(&self) -> FiniteMonoidTable {
        let n = self.order;
        let mut perm: Vec<usize> = (0..n).filter(|&a| a != self.identity).collect();
        let mut best: Option<Vec<usize>> = None;
        let mut old_of = vec![self.identity; n];
        let mut new_of = vec![0; n];
        let mut cells = vec![0; n * n];
        // perm[i] is the old label that receives the new label i + 1.
        permutations(&mut perm, 0, &mut |perm| {
            old_of[1..].copy_from_slice(perm);
            for (new, &old) in old_of.iter().enumerate() {
                new_of[old] = new;
            }
            let mut decided = best.is_none();
            for k in 0..n * n {
                let c = new_of[self.mul(old_of[k / n], old_of[k % n])];
                if !decided {
                    let b = best.as_ref().unwrap()[k];
                    if c > b {
                        return;
                    }
                    decided = c < b;
                }
                cells[k] = c;
            }
            if decided {
                best = Some(cells.clone());
            }
        });
        FiniteMonoidTable {
            order: n,
            identity: 0,
            cells: best.expect("at least one relabeling"),
        }
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k >= items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

impl fmt::Display for FiniteMonoidTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order {} identity {}", self.order, self.identity)?;
        for row in self.cells.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Either kind of finite model.
#[derive(Clone, Copy, Debug)]
pub enum Model<'a> {
    Rees(&'a ReesMonoid),
    Table(&'a FiniteMonoidTable),
}

fn check_budget(order: usize, vars: usize, budget: u64) -> Result<(), OracleError> {
    let needed = (order as u128).saturating_pow(vars as u32);
    if needed > budget as u128 {
        return Err(OracleError::Budget { needed, budget });
    }
    Ok(())
}

/// Calls `f` on every assignment of `k` variables to elements of `0..order`
/// in lexicographic order until it returns `false`.
fn for_each_assignment(order: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut a = vec![0; k];
    loop {
        if !f(&a) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < order {
                break;
            }
            a[i] = 0;
        }
    }
}

/// The least assignment (variables in sorted order) on which the two sides
/// of `id` take different values, or `None` if the table satisfies `id`.
pub fn naive_counterexample(
    t: &FiniteMonoidTable,
    id: &Identity,
    budget: u64,
) -> Result<Option<Vec<(Var, usize)>>, OracleError> {
    let vars: Vec<Var> = id.content().into_iter().collect();
    check_budget(t.order, vars.len(), budget)?;
    let slot = |w: &Word| -> Vec<usize> { w.iter().map(|c| vars.binary_search(c).unwrap()).collect() };
    let (l, r) = (slot(&id.lhs), slot(&id.rhs));
    let mut found = None;
    for_each_assignment(t.order, vars.len(), |a| {
        let lv = t.product_of(l.iter().map(|&i| a[i]));
        let rv = t.product_of(r.iter().map(|&i| a[i]));
        if lv != rv {
            found = Some(vars.iter().copied().zip(a.iter().copied()).collect());
            return false;
        }
        true
    });
    Ok(found)
}

/// Decide `M ⊨ id` by evaluating every assignment of elements.
pub fn satisfies_naive(model: Model<'_>, id: &Identity, budget: u64) -> Result<bool, OracleError> {
    match model {
        Model::Table(t) => Ok(naive_counterexample(t, id, budget)?.is_none()),
        Model::Rees(m) => {
            check_budget(m.order(), id.content().len(), budget)?;
            let (t, _) = FiniteMonoidTable::from_rees(m);
            Ok(naive_counterexample(&t, id, budget)?.is_none())
        }
    }
}

/// All words over the first `max_vars` canonical letters of length at most
/// `max_len`, in shortlex order.
pub fn all_words(max_vars: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<Var> = (0..max_vars).map(canonical_var).collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        if letters.is_empty() {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |&c| w.concat(&[c])))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Nontrivial identities between the given words, one per class up to
/// renaming and swapping sides.
fn canonical_pairs(words: &[Word]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in 0..words.len() {
            if i == j {
                continue;
            }
            let id = Identity::new(words[i].clone(), words[j].clone());
            let c = id.canonical();
            if c.lhs == id.lhs && c.rhs == id.rhs {
                out.push((i, j));
            }
        }
    }
    out
}

/// Value of each word under every assignment of its alphabet.
fn value_vectors(t: &FiniteMonoidTable, words: &[Word], vars: &[Var], budget: u64) -> Result<Vec<Vec<usize>>, OracleError> {
    check_budget(t.order, vars.len(), budget / words.len().max(1) as u64)?;
    Ok(words
        .par_iter()
        .map(|w| {
            let idx: Vec<usize> = w.iter().map(|c| vars.iter().position(|v| v == c).unwrap()).collect();
            let mut vals = Vec::new();
            for_each_assignment(t.order, vars.len(), |a| {
                vals.push(t.product_of(idx.iter().map(|&i| a[i])));
                true
            });
            vals
        })
        .collect())
}

/// All nontrivial identities with sides of length at most `max_len` over at
/// most `max_vars` variables that the model satisfies, as canonical
/// representatives in shortlex order.
pub fn enumerate_identities(
    model: Model<'_>,
    max_len: usize,
    max_vars: usize,
    budget: u64,
) -> Result<Vec<Identity>, OracleError> {
    if max_len == 0 {
        return Ok(Vec::new());
    }
    let words = all_words(max_vars, max_len);
    let pairs = canonical_pairs(&words);
    let holds: Vec<bool> = match model {
        Model::Table(t) => {
            let vars: Vec<Var> = (0..max_vars).map(canonical_var).collect();
            let vals = value_vectors(t, &words, &vars, budget)?;
            pairs.iter().map(|&(i, j)| vals[i] == vals[j]).collect()
        }
        Model::Rees(m) => pairs
            .par_iter()
            .map(|&(i, j)| {
                let id = Identity::new(words[i].clone(), words[j].clone());
                m.satisfies_with_budget(&id, budget).map(|w| w.is_none())
            })
            .collect::<Result<_, _>>()?,
    };
    let out: Vec<Identity> = pairs
        .iter()
        .zip(holds)
        .filter(|(_, h)| *h)
        .map(|(&(i, j), _)| Identity::new(words[i].clone(), words[j].clone()))
        .collect();
    debug_assert!(out.iter().all(|id| &id.canonical() == id));
    Ok(out)
}

/// Agreement of the exact checker with exhaustive evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub generators: Vec<Word>,
    pub max_vars: usize,
    pub max_len: usize,
    pub identities: usize,
    pub satisfied: usize,
    pub disagreements: Vec<Identity>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compare `ReesMonoid::satisfies` with naive evaluation on every identity
/// (up to renaming) with at most `max_vars` variables and sides of length at
/// most `max_len`.
pub fn cross_check(m: &ReesMonoid, max_vars: usize, max_len: usize, budget: u64) -> Result<CrossCheckReport, OracleError> {
    let words = all_words(max_vars, max_len);
    let pairs = canonical_pairs(&words);
    let (t, _) = FiniteMonoidTable::from_rees(m);
    let vars: Vec<Var> = (0..max_vars).map(canonical_var).collect();
    let vals = value_vectors(&t, &words, &vars, budget)?;
    let verdicts: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let id = Identity::new(words[i].clone(), words[j].clone());
            m.satisfies_with_budget(&id, budget)
                .map(|w| (w.is_none(), vals[i] == vals[j]))
        })
        .collect::<Result<_, _>>()?;
    let disagreements = pairs
        .iter()
        .zip(&verdicts)
        .filter(|(_, (a, b))| a != b)
        .map(|(&(i, j), _)| Identity::new(words[i].clone(), words[j].clone()))
        .collect();
    Ok(CrossCheckReport {
        generators: m.generators().to_vec(),
        max_vars,
        max_len,
        identities: pairs.len(),
        satisfied: verdicts.iter().filter(|v| v.0).count(),
        disagreements,
    })
}

/// All monoids of the given order up to isomorphism, identity labelled 0,
/// in increasing order of flattened table.
pub fn enumerate_monoids(order: usize) -> Vec<FiniteMonoidTable> {
    if order == 0 {
        return Vec::new();
    }
    let mut cells = vec![UNSET; order * order];
    for a in 0..order {
        cells[a] = a;
        cells[a * order] = a;
    }
    // Squares first: associativity on powers prunes early, and idempotents
    // can be required to carry the smallest labels.
    let mut free: Vec<(usize, usize)> = (1..order).map(|a| (a, a)).collect();
    free.extend((1..order).flat_map(|a| (1..order).filter(move |&b| b != a).map(move |b| (a, b))));
    let mut labelled = Vec::new();
    fill(order, &free, 0, &mut cells, &mut labelled);
    let classes: HashSet<FiniteMonoidTable> = labelled
        .into_par_iter()
        .map(|cells| FiniteMonoidTable { order, identity: 0, cells }.canonical_form())
        .collect();
    let mut out: Vec<FiniteMonoidTable> = classes.into_iter().collect();
    out.sort();
    out
}

fn fill(n: usize, free: &[(usize, usize)], k: usize, cells: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == free.len() {
        out.push(cells.clone());
        return;
    }
    let (a, b) = free[k];
    for c in 0..n {
        if a == b && a > 1 {
            let prev_idempotent = cells[(a - 1) * n + a - 1] == a - 1;
            if c == a && !prev_idempotent {
                continue;
            }
        }
        cells[a * n + b] = c;
        if consistent_at(n, cells, a, b) {
            fill(n, free, k + 1, cells, out);
        }
    }
    cells[a * n + b] = UNSET;
}

/// Associativity on every triple whose products are known and that uses the
/// cell `(a, b)`.
fn consistent_at(n: usize, t: &[usize], a: usize, b: usize) -> bool {
    let m = |x: usize, y: usize| if x == UNSET || y == UNSET { UNSET } else { t[x * n + y] };
    let ok = |x: usize, y: usize, z: usize| {
        let l = m(m(x, y), z);
        let r = m(x, m(y, z));
        l == UNSET || r == UNSET || l == r
    };
    for z in 0..n {
        if !ok(a, b, z) || !ok(z, a, b) {
            return false;
        }
    }
    for x in 0..n {
        for y in 0..n {
            if (m(x, y) == a && !ok(x, y, b)) || (m(x, y) == b && !ok(a, x, y)) {
                return false;
            }
        }
    }
    true
}

/// `w_n ≈ w'_n` in a table, for one `n`, without enumerating all
/// `order^(n+5)` assignments. The padded factor `z1 x y z2` contributes a
/// pair of values; the chain `x1x0 x2x1 … xn x(n-1)` is folded left to
/// right keeping `(x0, current x_k, product so far)`.
pub fn family_member_holds(t: &FiniteMonoidTable, n: usize) -> bool {
    let o = t.order;
    let mut pads = HashSet::new();
    for_each_assignment(o, 4, |a| {
        let (z1, x, y, z2) = (a[0], a[1], a[2], a[3]);
        let p = t.product_of([z1, x, y, z2]);
        let q = t.product_of([z1, y, x, z2]);
        if p != q {
            pads.insert((p, q));
        }
        true
    });
    if pads.is_empty() {
        return true;
    }
    let mut states: HashSet<(usize, usize, usize)> = (0..o).map(|x0| (x0, x0, t.identity)).collect();
    for _ in 1..=n {
        let mut next = HashSet::new();
        for &(x0, prev, m) in &states {
            for cur in 0..o {
                next.insert((x0, cur, t.product_of([m, cur, prev])));
            }
        }
        states = next;
    }
    states.iter().all(|&(x0, xn, m)| {
        pads.iter()
            .all(|&(p, q)| t.product_of([x0, p, m, p, xn]) == t.product_of([x0, q, m, q, xn]))
    })
}

fn is_family_member(id: &Identity) -> Option<usize> {
    let n = id.w_index()?;
    let exact = make_w(n).ok()? == id.lhs && make_w_prime(n).ok()? == id.rhs;
    exact.then_some(n)
}

/// Decide whether the table satisfies every identity in `rest`. Balanced
/// identities hold in commutative tables; family members are decided by
/// [`family_member_holds`]; everything else by naive evaluation.
pub fn satisfies_all(t: &FiniteMonoidTable, rest: &[Identity], budget: u64) -> Result<bool, OracleError> {
    let commutative = t.is_commutative();
    for id in rest {
        if commutative && id.is_balanced() {
            continue;
        }
        let holds = match is_family_member(id) {
            Some(n) => family_member_holds(t, n),
            None => naive_counterexample(t, id, budget)?.is_none(),
        };
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a witness search.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSearch {
    pub witness: Option<FiniteMonoidTable>,
    /// `(order, isomorphism classes examined)` for each order searched.
    pub searched: Vec<(usize, usize)>,
    /// Largest family index checked in `rest`.
    pub family_bound: Option<usize>,
}

/// Search monoids of order up to `max_order` for one satisfying every
/// member of `rest` but not `sigma`; such a table shows `rest ⊬ sigma`.
/// The least witness (by order, then table) is reported.
pub fn semantic_irredundancy_witness(
    sigma: &Identity,
    rest: &[Identity],
    max_order: usize,
    budget: u64,
) -> Result<WitnessSearch, OracleError> {
    let same = |a: &Identity| {
        (a.lhs == sigma.lhs && a.rhs == sigma.rhs)
            || (a.lhs == sigma.rhs && a.rhs == sigma.lhs)
            || (!sigma.tag.is_empty() && a.tag == sigma.tag)
    };
    if let Some(dup) = rest.iter().find(|a| same(a)) {
        return Err(OracleError::IllPosed(format!("{dup} is itself among the premises")));
    }
    let family_bound = rest.iter().filter_map(is_family_member).max();
    let mut searched = Vec::new();
    for order in 1..=max_order {
        let tables = enumerate_monoids(order);
        let hit = tables
            .par_iter()
            .map(|t| -> Result<bool, OracleError> {
                Ok(naive_counterexample(t, sigma, budget)?.is_some() && satisfies_all(t, rest, budget)?)
            })
            .collect::<Result<Vec<bool>, _>>()?
            .iter()
            .position(|&h| h);
        searched.push((order, tables.len()));
        if let Some(i) = hit {
            return Ok(WitnessSearch {
                witness: Some(tables[i].clone()),
                searched,
                family_bound,
            });
        }
    }
    Ok(WitnessSearch { witness: None, searched, family_bound })
}

/// A Rees quotient `M({w})` separating `sigma` from `rest`.
#[derive(Clone, Debug, Serialize)]
pub struct ReesWitness {
    pub word: Word,
    pub table: FiniteMonoidTable,
}

/// Search the quotients `M({w})` for canonical words `w` of length at most
/// `max_len` over at most `max_vars` letters, in order of monoid size and
/// then shortlex, for one satisfying `rest` but not `sigma`.
pub fn rees_irredundancy_witness(
    sigma: &Identity,
    rest: &[Identity],
    max_len: usize,
    max_vars: usize,
    budget: u64,
) -> Result<Option<ReesWitness>, OracleError> {
    let mut candidates: Vec<(usize, Word, FiniteMonoidTable)> = all_words(max_vars, max_len)
        .into_iter()
        .filter(|w| !w.is_empty() && w.canonical_form() == *w)
        .map(|w| {
            let m = ReesMonoid::new(vec![w.clone()]).expect("nonempty word");
            let (t, _) = FiniteMonoidTable::from_rees(&m);
            (t.order(), w, t)
        })
        .collect();
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| crate::word::shortlex(&a.1, &b.1)));
    let hits = candidates
        .par_iter()
        .map(|(_, _, t)| -> Result<bool, OracleError> {
            Ok(naive_counterexample(t, sigma, budget)?.is_some() && satisfies_all(t, rest, budget)?)
        })
        .collect::<Result<Vec<bool>, _>>()?;
    Ok(hits
        .iter()
        .position(|&h| h)
        .map(|i| ReesWitness { word: candidates[i].1.clone(), table: candidates[i].2.clone() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::DEFAULT_BUDGET;
    use crate::sigma::{sigma_members, w_identity, APERIODIC_POWER};
    use crate::word::w;

    fn id(s: &str) -> Identity {
        s.parse().unwrap()
    }

    #[test]
    fn validation() {
        assert!(FiniteMonoidTable::new(vec![vec![0, 1], vec![1, 0]], 0).is_ok());
        assert!(FiniteMonoidTable::new(vec![vec![0, 1], vec![1, 1]], 1).is_err());
        // Right zero semigroup with an identity adjoined is fine; a table
        // mixing left and right zeros is not associative.
        let bad = vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 1]];
        assert!(matches!(FiniteMonoidTable::new(bad, 0), Err(OracleError::Table(_))));
    }

    #[test]
    fn cyclic_group_fails_power_law() {
        let z2 = FiniteMonoidTable::cyclic_group(2);
        let ce = naive_counterexample(&z2, &id("xxx = xxxx"), DEFAULT_BUDGET).unwrap();
        assert_eq!(ce, Some(vec![(crate::word::v("x"), 1)]));
        assert!(satisfies_naive(Model::Table(&z2), &id("x = x"), 10).unwrap());
    }

    #[test]
    fn rees_table_agrees_with_products() {
        let m = ReesMonoid::new(vec![w("xyx")]).unwrap();
        let (t, elems) = FiniteMonoidTable::from_rees(&m);
        assert_eq!(t.order(), 7);
        assert!(t.associativity_failure().is_none());
        assert_eq!(elems[t.identity()], Element::Word(Word::empty()));
    }

    #[test]
    fn monoid_counts() {
        // Numbers of monoids of small order up to isomorphism.
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_monoids(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 35]);
    }

    #[test]
    fn family_dp_matches_brute_force() {
        for t in enumerate_monoids(3) {
            let brute = naive_counterexample(&t, &w_identity(2).unwrap(), DEFAULT_BUDGET)
                .unwrap()
                .is_none();
            assert_eq!(family_member_holds(&t, 2), brute, "{t}");
        }
    }

    #[test]
    fn easy_lemma_enumeration() {
        let m = ReesMonoid::new(vec![w("xyyx"), w("xxyy")]).unwrap();
        let ids = enumerate_identities(Model::Rees(&m), 4, 2, DEFAULT_BUDGET).unwrap();
        let two_limited: Vec<String> = ids
            .iter()
            .filter(|i| i.lhs.len() == 4 && i.is_balanced() && i.lhs.is_limited(2) && i.content().len() == 2)
            .map(|i| i.to_string())
            .collect();
        assert_eq!(two_limited, vec!["abab = baba"]);
        let (t, _) = FiniteMonoidTable::from_rees(&m);
        let by_table = enumerate_identities(Model::Table(&t), 4, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(ids, by_table);
        assert!(enumerate_identities(Model::Rees(&m), 0, 2, DEFAULT_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn power_law_witness() {
        let rest: Vec<Identity> = sigma_members(4)
            .unwrap()
            .into_iter()
            .filter(|i| i.tag != APERIODIC_POWER)
            .collect();
        let sigma = crate::sigma::member_by_tag(APERIODIC_POWER).unwrap();
        let found = semantic_irredundancy_witness(&sigma, &rest, 3, DEFAULT_BUDGET).unwrap();
        let t = found.witness.unwrap();
        assert_eq!(t, FiniteMonoidTable::cyclic_group(2));
        assert_eq!(found.family_bound, Some(4));
        assert!(semantic_irredundancy_witness(&sigma, std::slice::from_ref(&sigma), 2, 10).is_err());
    }

    fn split(tag: &str) -> (Identity, Vec<Identity>) {
        let all = sigma_members(4).unwrap();
        let sigma = all.iter().find(|i| i.tag == tag).unwrap().clone();
        (sigma, all.into_iter().filter(|i| i.tag != tag).collect())
    }

    #[test]
    fn shift_law_witness_is_small() {
        let (sigma, rest) = split(crate::sigma::APERIODIC_SHIFT);
        let t = semantic_irredundancy_witness(&sigma, &rest, 4, DEFAULT_BUDGET).unwrap().witness.unwrap();
        assert_eq!(t.order(), 4);
        assert!(!t.is_commutative());
        // Brute force on the family members with few enough variables.
        for n in 2..=3 {
            let id = w_identity(n).unwrap();
            assert!(naive_counterexample(&t, &id, DEFAULT_BUDGET).unwrap().is_none());
        }
    }

    #[test]
    fn gather_law_needs_a_larger_quotient() {
        let (sigma, rest) = split(crate::sigma::APERIODIC_GATHER);
        assert!(semantic_irredundancy_witness(&sigma, &rest, 4, DEFAULT_BUDGET).unwrap().witness.is_none());
        let hit = rees_irredundancy_witness(&sigma, &rest, 5, 3, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(hit.word, w("aaba"));
        assert_eq!(hit.table.order(), 10);
        assert!(naive_counterexample(&hit.table, &sigma, DEFAULT_BUDGET).unwrap().is_some());
    }
}
