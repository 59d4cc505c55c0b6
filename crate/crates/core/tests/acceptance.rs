//! One line per acceptance criterion. Parameters and time limits are pinned
//! here and never read from defaults, so a change elsewhere cannot silently
//! shrink a check.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use isoterm::basis::{BasisEngine, DeriveOutcome};
use isoterm::derivation::verify_trace;
use isoterm::identity::Identity;
use isoterm::matcher::{applies_nontrivially, match_factor, stuck_irredundancy_report, DEFAULT_BUDGET};
use isoterm::oracle::{cross_check, semantic_irredundancy_witness, FiniteMonoidTable};
use isoterm::rees::{arrangements, ReesMonoid};
use isoterm::sigma::{
    aperiodic_identities, catalogue_u, catalogue_v, catalogue_v_words, collapse_to_w1, make_w, make_w_prime,
    sandwich_word, self_reverse_labels, sigma_members, w_identity,
};
use isoterm::suite::{exhaustive_identities, random_instances};
use isoterm::word::{Var, Word};

const BUDGET: u64 = DEFAULT_BUDGET;
const INSTANT: Duration = Duration::from_secs(1);

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn var(s: &str) -> Var {
    s.parse().unwrap()
}

type Check = fn() -> Result<String, String>;

fn c1_xyx_universe() -> Result<String, String> {
    let m = ReesMonoid::new(vec![w("xyx")]).map_err(|e| e.to_string())?;
    let elems: Vec<String> = m.elements().iter().map(|e| e.to_string()).collect();
    let want = ["1", "x", "y", "xy", "yx", "xyx", "0"];
    if m.order() == 7 && want.iter().all(|s| elems.contains(&s.to_string())) {
        Ok(elems.join(" "))
    } else {
        Err(format!("elements {elems:?}"))
    }
}

fn c2_easy_lemma() -> Result<String, String> {
    let m = ReesMonoid::new(vec![w("xyyx"), w("xxyy")]).map_err(|e| e.to_string())?;
    let words = arrangements(&w("xxyy"));
    if words.len() != 6 {
        return Err(format!("{} arrangements of xxyy", words.len()));
    }
    let mut class = Vec::new();
    for p in words {
        if m.satisfies(&Identity::new(w("xyxy"), p.clone())).map_err(|e| e.to_string())?.is_none() {
            class.push(p.to_string());
        }
    }
    if class != ["xyxy", "yxyx"] {
        return Err(format!("class of xyxy is {class:?}"));
    }
    let m1 = ReesMonoid::new(vec![w("xyyx")]).map_err(|e| e.to_string())?;
    for s in ["xy", "xxy", "xyx", "yxx", "xx"] {
        if let Some(o) = m1.is_isoterm(&w(s)).map_err(|e| e.to_string())? {
            return Err(format!("M({{xyyx}}) satisfies {s} = {o}"));
        }
    }
    Ok("class {xyxy, yxyx}; 5 isoterms".into())
}

fn c3_u_isoterms() -> Result<String, String> {
    let m = ReesMonoid::new(catalogue_u()).map_err(|e| e.to_string())?;
    for s in ["xyzxzy", "xyxzzy", "xyxzyz"] {
        if let Some(o) = m.is_isoterm(&w(s)).map_err(|e| e.to_string())? {
            return Err(format!("M(U) satisfies {s} = {o}"));
        }
    }
    Ok(format!("3 isoterms, |M(U)| = {}", m.order()))
}

fn c4_catalogue() -> Result<String, String> {
    let canon: BTreeSet<Word> = catalogue_v().iter().map(|e| e.word.canonical_form()).collect();
    let rev = self_reverse_labels();
    if canon.len() != 37 {
        return Err(format!("{} distinct words", canon.len()));
    }
    if rev != ["3.3", "6.1", "7.3", "8.1", "9.1", "9.3"] {
        return Err(format!("self-reverse {rev:?}"));
    }
    Ok(format!("37 words; self-reverse {}", rev.join(" ")))
}

fn c5_v_isoterms() -> Result<String, String> {
    for n in 2..=8 {
        let id = w_identity(n).map_err(|e| e.to_string())?;
        for e in catalogue_v() {
            let hits = applies_nontrivially(&id, &e.word, BUDGET).map_err(|e| e.to_string())?;
            if !hits.is_empty() {
                return Err(format!("w_{n} rewrites {}", e.label()));
            }
        }
    }
    for id in aperiodic_identities() {
        // Every side has a letter that must be nonempty and occurs three
        // times, so no instance fits inside a 2-limited word.
        let forced = id.forced_nonempty();
        for side in [&id.lhs, &id.rhs] {
            if !forced.iter().any(|&x| side.occ(x) >= 3) {
                return Err(format!("{}: {side} has no forced cube", id.tag));
            }
        }
        for e in catalogue_v() {
            if !applies_nontrivially(&id, &e.word, BUDGET).map_err(|e| e.to_string())?.is_empty() {
                return Err(format!("{} applies to {}", id.tag, e.label()));
            }
        }
    }
    let m = ReesMonoid::new(catalogue_v_words()).map_err(|e| e.to_string())?;
    let ids = sigma_members(6).map_err(|e| e.to_string())?;
    for (id, r) in ids.iter().zip(m.satisfies_all(&ids).map_err(|e| e.to_string())?) {
        if let Some(wit) = r {
            return Err(format!("M(V) fails {}: {wit}", id.tag));
        }
    }
    Ok(format!("w_2..w_8 and the trio inert on V; M(V) satisfies {} members", ids.len()))
}

fn c6_irredundancy() -> Result<String, String> {
    let nz: BTreeSet<Var> = [var("x"), var("y")].into_iter().collect();
    for n in 2..=7 {
        for m in (2..=7).filter(|&m| m != n) {
            let (p, t) = (make_w(n).unwrap(), make_w(m).unwrap());
            if !match_factor(&p, &t, &nz, BUDGET).map_err(|e| e.to_string())?.is_empty() {
                return Err(format!("w_{n} matches a factor of w_{m}"));
            }
        }
    }
    let ids = sigma_members(7).map_err(|e| e.to_string())?;
    let report = stuck_irredundancy_report(&ids, BUDGET).map_err(|e| e.to_string())?;
    for r in report.iter().filter(|r| r.identity.w_index().is_some()) {
        if !r.certified() {
            return Err(format!("{} is rewritten by {:?}", r.identity.tag, r.blockers));
        }
    }
    let power = ids.iter().find(|i| i.lhs == w("xxx") || i.rhs == w("xxx")).cloned().ok_or("no x³ ≈ x⁴")?;
    let rest: Vec<Identity> = ids.iter().filter(|i| i.tag != power.tag).cloned().collect();
    let s = semantic_irredundancy_witness(&power, &rest, 2, BUDGET).map_err(|e| e.to_string())?;
    match s.witness {
        Some(t) if t.order() == 2 => {
            let z2 = if t == FiniteMonoidTable::cyclic_group(2) { " (cyclic group)" } else { "" };
            Ok(format!("30 pairs disjoint; w_2..w_7 stuck; x³ ≈ x⁴ witness of order 2{z2}"))
        }
        Some(t) => Err(format!("witness of order {}", t.order())),
        None => Err("no order-2 witness for x³ ≈ x⁴".into()),
    }
}

fn c7_degeneracy() -> Result<String, String> {
    let theta = collapse_to_w1(2);
    let (a, b) = (make_w(1).unwrap(), make_w_prime(1).unwrap());
    if theta.apply(&make_w(2).unwrap()) != a || theta.apply(&make_w_prime(2).unwrap()) != b {
        return Err("θ does not collapse w_2 onto w_1".into());
    }
    match BasisEngine::new().derive(&a, &b).map_err(|e| e.to_string())? {
        DeriveOutcome::Derived(t) if t.len() == 1 => {
            verify_trace(&t, None).map_err(|e| e.to_string())?;
            Ok(format!("{a} = {b} via {}", t.steps[0].rule.tag))
        }
        DeriveOutcome::Derived(t) => Err(format!("{} steps", t.len())),
        DeriveOutcome::Refuted(wit) => Err(format!("refuted: {wit}")),
    }
}

fn derive_all(e: &BasisEngine, ids: &[Identity]) -> Result<usize, String> {
    let lens = ids
        .par_iter()
        .map(|id| match e.derive(&id.lhs, &id.rhs) {
            Ok(DeriveOutcome::Derived(t)) => verify_trace(&t, None).map(|_| t.len()).map_err(|x| format!("{id}: {x}")),
            Ok(DeriveOutcome::Refuted(wit)) => Err(format!("{id} refuted: {wit}")),
            Err(x) => Err(format!("{id}: {x}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(lens.into_iter().max().unwrap_or(0))
}

fn c8_theorem() -> Result<String, String> {
    let e = BasisEngine::new();
    let small = exhaustive_identities(e.monoid(), 4, 10, BUDGET).map_err(|e| e.to_string())?;
    if small.is_empty() {
        return Err("no identities enumerated".into());
    }
    let l1 = derive_all(&e, &small)?;
    let random = random_instances(1000, 16, 2024);
    if random.len() != 1000 || random.iter().any(|i| i.lhs.len() > 16 || i.rhs.len() > 16) {
        return Err("random instances violate the size limits".into());
    }
    let l2 = derive_all(&e, &random)?;
    Ok(format!("{} exhaustive (longest trace {l1}), 1000 random (longest trace {l2})", small.len()))
}

fn c9_oracle() -> Result<String, String> {
    let mut parts = Vec::new();
    for gens in [["xyyx", "xxyy"], ["abba", "aabb"]] {
        let m = ReesMonoid::new(gens.iter().map(|s| w(s)).collect()).map_err(|e| e.to_string())?;
        let r = cross_check(&m, 3, 6, BUDGET.saturating_mul(100)).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("{} disagreements, e.g. {}", r.disagreements.len(), r.disagreements[0]));
        }
        parts.push(format!("{}: {}/{}", gens.join(","), r.satisfied, r.identities));
    }
    Ok(parts.join("; "))
}

fn c10_sandwich() -> Result<String, String> {
    let m = ReesMonoid::new(vec![w("abba"), w("aabb")]).map_err(|e| e.to_string())?;
    let ids = sigma_members(8).map_err(|e| e.to_string())?;
    for (id, r) in ids.iter().zip(m.satisfies_all(&ids).map_err(|e| e.to_string())?) {
        if let Some(wit) = r {
            return Err(format!("fails {}: {wit}", id.tag));
        }
    }
    // The word needs two distinct family letters on each side of x, so the
    // range starts at n = 2 (for n = 1 it is xyzxyz, which is not an isoterm).
    for n in 2..=5 {
        let s = sandwich_word(n).map_err(|e| e.to_string())?;
        if let Some(o) = m.is_isoterm(&s).map_err(|e| e.to_string())? {
            return Err(format!("n = {n}: M satisfies {s} = {o}"));
        }
    }
    Ok(format!("{} members hold; sandwich words n = 2..5 are isoterms", ids.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, Check); 10] = [
        ("1 M({xyx}) has 7 elements", INSTANT, c1_xyx_universe),
        ("2 easy lemma", Duration::from_secs(1), c2_easy_lemma),
        ("3 U isoterms", Duration::from_secs(10), c3_u_isoterms),
        ("4 catalogue integrity", INSTANT, c4_catalogue),
        ("5 V isoterms", Duration::from_secs(300), c5_v_isoterms),
        ("6 irredundancy", Duration::from_secs(600), c6_irredundancy),
        ("7 w_1 degeneracy", INSTANT, c7_degeneracy),
        ("8 derivations", Duration::from_secs(1800), c8_theorem),
        ("9 oracle equivalence", Duration::from_secs(300), c9_oracle),
        ("10 sandwich", Duration::from_secs(300), c10_sandwich),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let line = match result {
            Ok(detail) if took <= limit => format!("PASS criterion {name} [{took:.2?} ≤ {limit:?}]: {detail}"),
            Ok(detail) => format!("FAIL criterion {name} [{took:.2?} > {limit:?}]: over time; {detail}"),
            Err(reason) => format!("FAIL criterion {name} [{took:.2?}]: {reason}"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
