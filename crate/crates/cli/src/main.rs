//! `isoterm`: batch front end for the identity-basis workbench.
//!
//! Exit codes: 0 pass, 1 failure or counterexample, 2 usage, 3 budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isoterm::basis::{BasisEngine, DeriveOutcome, EngineError};
use isoterm::derivation::{verify_trace, DerivationTrace};
use isoterm::identity::Identity;
use isoterm::matcher::{match_exact, match_factor, stuck_irredundancy_report, MatchError, DEFAULT_BUDGET};
use isoterm::oracle::{cross_check, rees_irredundancy_witness, semantic_irredundancy_witness, OracleError};
use isoterm::rees::{MonoidError, ReesMonoid, SatisfactionWitness};
use isoterm::sigma::{catalogue_u, catalogue_v, catalogue_v_words, sigma_members};
use isoterm::suite::{run_suite, SuiteConfig, SuiteReport, SUITE_NAMES};
use isoterm::word::{Var, Word};

#[derive(Parser)]
#[command(name = "isoterm", version, about = "Rees quotient monoids, identity bases and derivations")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Search budget (pattern-matcher steps or evaluations).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect words.
    Words {
        #[command(subcommand)]
        cmd: WordsCmd,
    },
    /// Build and query Rees quotients M(W).
    ///
    /// MONOID is a monoid file, a comma-separated word list, `U` or `V`.
    Monoid {
        #[command(subcommand)]
        cmd: MonoidCmd,
    },
    /// The identity system and the word catalogue.
    Sigma {
        #[command(subcommand)]
        cmd: SigmaCmd,
    },
    /// Match a pattern word against a target word.
    Match {
        pattern: String,
        target: String,
        /// Match a factor of the target instead of the whole word.
        #[arg(long)]
        factor: bool,
        /// Variables that must receive nonempty images.
        #[arg(long, value_delimiter = ',')]
        nonempty: Vec<String>,
    },
    /// Derive `u = v` from the system, or refute it in M(V).
    Derive {
        identity: String,
        /// Largest family index allowed when verifying.
        #[arg(long)]
        nmax: Option<usize>,
        /// Write the trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Re-verify the trace against the system bounded by --nmax.
        #[arg(long)]
        verify: bool,
    },
    /// Stuck-check every member and search for semantic witnesses for the
    /// members it cannot certify.
    Irredundant {
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        #[arg(long, default_value_t = 5)]
        max_order: usize,
    },
    /// Brute-force ground truth.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Run a named suite, or verify a stored trace.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, required_unless_present = "trace")]
        suite: Option<String>,
        /// Trace file to check instead of running a suite.
        #[arg(long, conflicts_with = "suite")]
        trace: Option<PathBuf>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of randomized theorem instances.
        #[arg(long)]
        random: Option<usize>,
    },
}

#[derive(Subcommand)]
enum WordsCmd {
    /// Length, content, occurrence counts and normal forms.
    Info { word: String },
}

#[derive(Subcommand)]
enum MonoidCmd {
    /// Build M(W) from generator words.
    Build {
        words: Vec<String>,
        /// Write a monoid file.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Store the factor list in the file.
        #[arg(long)]
        with_factors: bool,
    },
    /// Decide whether M satisfies `u = v`.
    Check { monoid: String, identity: String },
    /// Decide whether a 2-limited word is an isoterm for M.
    Isoterm { monoid: String, word: String },
}

#[derive(Subcommand)]
enum SigmaCmd {
    /// Print the members up to the given family index.
    Emit {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
    /// Print the catalogue V with labels.
    Catalogue,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Compare the exact checker with naive evaluation.
    CrossCheck {
        monoid: String,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 6)]
        len: usize,
    },
    /// Search small monoids separating one member from the others.
    Witness {
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 5)]
        max_order: usize,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
    },
}

enum CliError {
    Usage(String),
    Fail(String),
    Budget(String),
}

impl From<MonoidError> for CliError {
    fn from(e: MonoidError) -> CliError {
        match e {
            MonoidError::Budget(b) => CliError::Budget(b.to_string()),
            MonoidError::Format(_) | MonoidError::FactorMismatch | MonoidError::MaxLenMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Fail(other.to_string()),
        }
    }
}

impl From<MatchError> for CliError {
    fn from(e: MatchError) -> CliError {
        CliError::Budget(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        match e {
            OracleError::Budget { .. } => CliError::Budget(e.to_string()),
            OracleError::IllPosed(_) => CliError::Usage(e.to_string()),
            OracleError::Monoid(m) => m.into(),
            other => CliError::Fail(other.to_string()),
        }
    }
}

/// What a command produced: a text report, the same report as JSON, and
/// whether it counts as a pass.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn pass(text: String, json: Value) -> Report {
        Report { text, json, ok: true }
    }
}

fn parse_word(s: &str) -> Result<Word, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("bad word {s:?}: {e}")))
}

fn parse_identity(s: &str) -> Result<Identity, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("bad identity {s:?}: {e}")))
}

fn parse_var(s: &str) -> Result<Var, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("bad variable {s:?}: {e}")))
}

fn load_monoid(arg: &str) -> Result<ReesMonoid, CliError> {
    match arg {
        "V" => return Ok(ReesMonoid::new(catalogue_v_words())?),
        "U" => return Ok(ReesMonoid::new(catalogue_u())?),
        _ => {}
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        return Ok(ReesMonoid::from_json(&text)?);
    }
    let words = arg.split(',').map(|s| parse_word(s.trim())).collect::<Result<Vec<_>, _>>()?;
    Ok(ReesMonoid::new(words)?)
}

fn words_list(ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

fn witness_json(w: &SatisfactionWitness) -> Value {
    json!({
        "substitution": w.substitution.to_string(),
        "lhs_value": w.lhs_value.to_string(),
        "rhs_value": w.rhs_value.to_string(),
    })
}

fn words_info(word: &str) -> Result<Report, CliError> {
    let w = parse_word(word)?;
    let stats = w.stats();
    let occ: Vec<String> = w.occurrences().iter().map(|(v, n)| format!("{v}:{n}")).collect();
    let linear: Vec<String> = stats.linear.iter().map(|v| v.to_string()).collect();
    let text = format!(
        "word       {w}\nlength     {}\ncontent    {}\nlinear     {}\n2-limited  {}\ncanonical  {}\nreverse    {}",
        w.len(),
        occ.join(" "),
        if linear.is_empty() { "-".to_string() } else { linear.join(" ") },
        w.is_limited(2),
        w.canonical_form(),
        w.reverse(),
    );
    let json = json!({
        "word": w.to_string(),
        "length": w.len(),
        "occurrences": w.occurrences().iter().map(|(v, n)| (v.to_string(), json!(n))).collect::<serde_json::Map<_, _>>(),
        "linear": linear,
        "two_limited": w.is_limited(2),
        "canonical": w.canonical_form().to_string(),
        "reverse": w.reverse().to_string(),
    });
    Ok(Report::pass(text, json))
}

fn monoid_cmd(cmd: MonoidCmd, budget: u64) -> Result<Report, CliError> {
    match cmd {
        MonoidCmd::Build { words, out, with_factors } => {
            let ws = words.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>, _>>()?;
            let m = ReesMonoid::new(ws)?;
            let elements: Vec<String> = m.elements().iter().map(|e| e.to_string()).collect();
            let mut text = format!("M({}) has {} elements", words_list(m.generators()).join(","), m.order());
            if m.order() <= 64 {
                text.push_str(&format!("\n{}", elements.join(" ")));
            }
            if let Some(path) = &out {
                fs::write(path, m.to_json(with_factors)).map_err(|e| CliError::Fail(format!("{}: {e}", path.display())))?;
                text.push_str(&format!("\nwritten to {}", path.display()));
            }
            let json = json!({
                "generators": words_list(m.generators()),
                "order": m.order(),
                "elements": elements,
                "file": out.map(|p| p.display().to_string()),
            });
            Ok(Report::pass(text, json))
        }
        MonoidCmd::Check { monoid, identity } => {
            let m = load_monoid(&monoid)?;
            let id = parse_identity(&identity)?;
            Ok(match m.satisfies_with_budget(&id, budget)? {
                None => Report::pass(format!("SATISFIED {id}"), json!({"identity": id.to_string(), "satisfied": true})),
                Some(w) => Report {
                    text: format!("NOT SATISFIED {id}\nwitness {w}"),
                    json: json!({"identity": id.to_string(), "satisfied": false, "witness": witness_json(&w)}),
                    ok: false,
                },
            })
        }
        MonoidCmd::Isoterm { monoid, word } => {
            let m = load_monoid(&monoid)?;
            let w = parse_word(&word)?;
            Ok(match m.is_isoterm(&w)? {
                None => Report::pass(format!("ISOTERM {w}"), json!({"word": w.to_string(), "isoterm": true})),
                Some(o) => Report {
                    text: format!("NOT AN ISOTERM {w}\nM satisfies {w} = {o}"),
                    json: json!({"word": w.to_string(), "isoterm": false, "partner": o.to_string()}),
                    ok: false,
                },
            })
        }
    }
}

fn sigma_cmd(cmd: SigmaCmd) -> Result<Report, CliError> {
    match cmd {
        SigmaCmd::Emit { nmax } => {
            let ids = sigma_members(nmax).map_err(|e| CliError::Usage(e.to_string()))?;
            let text = ids.iter().map(|i| format!("{:<12} {i}", i.tag)).collect::<Vec<_>>().join("\n");
            let json = json!(ids.iter().map(|i| json!({"tag": i.tag, "identity": i.to_string()})).collect::<Vec<_>>());
            Ok(Report::pass(text, json))
        }
        SigmaCmd::Catalogue => {
            let cat = catalogue_v();
            let text = cat.iter().map(|e| format!("{:<8} {}", e.label(), e.word)).collect::<Vec<_>>().join("\n");
            let json = json!(cat.iter().map(|e| json!({"label": e.label(), "word": e.word.to_string()})).collect::<Vec<_>>());
            Ok(Report::pass(text, json))
        }
    }
}

fn match_cmd(pattern: &str, target: &str, factor: bool, nonempty: &[String], budget: u64) -> Result<Report, CliError> {
    let (p, t) = (parse_word(pattern)?, parse_word(target)?);
    let ne = nonempty.iter().map(|s| parse_var(s)).collect::<Result<_, _>>()?;
    let found = if factor { match_factor(&p, &t, &ne, budget)? } else { match_exact(&p, &t, &ne, budget)? };
    let lines: Vec<String> = found
        .iter()
        .map(|r| {
            if factor {
                format!("{} · [{}] · {}", r.left, r.substitution, r.right)
            } else {
                r.substitution.to_string()
            }
        })
        .collect();
    let text = format!("{} match(es)\n{}", found.len(), lines.join("\n"));
    let json = json!(found
        .iter()
        .map(|r| json!({"substitution": r.substitution.to_string(), "left": r.left.to_string(), "right": r.right.to_string()}))
        .collect::<Vec<_>>());
    Ok(Report { text: text.trim_end().to_string(), json, ok: !found.is_empty() })
}

fn trace_json(t: &DerivationTrace) -> Value {
    serde_json::from_str(&t.to_json()).expect("trace serializes")
}

fn derive_cmd(identity: &str, nmax: Option<usize>, trace: Option<PathBuf>, verify: bool) -> Result<Report, CliError> {
    let id = parse_identity(identity)?;
    let engine = BasisEngine::new();
    let outcome = engine.derive(&id.lhs, &id.rhs).map_err(|e| match e {
        EngineError::Budget(b) => CliError::Budget(b.to_string()),
        EngineError::Monoid(MonoidError::Budget(b)) => CliError::Budget(b.to_string()),
        other => CliError::Fail(format!("derivation failed: {other}")),
    })?;
    match outcome {
        DeriveOutcome::Derived(t) => {
            let mut text = format!("DERIVED {id} in {} step(s)\n{t}", t.len());
            if verify || nmax.is_some() {
                if let Err(e) = verify_trace(&t, nmax) {
                    return Ok(Report {
                        text: format!("{text}\nverification failed: {e}"),
                        json: json!({"identity": id.to_string(), "derived": true, "verified": false, "error": e.to_string()}),
                        ok: false,
                    });
                }
                text.push_str(&format!("\nverified (bound n <= {})", nmax.unwrap_or_else(|| t.default_bound())));
            }
            if let Some(path) = &trace {
                fs::write(path, t.to_json()).map_err(|e| CliError::Fail(format!("{}: {e}", path.display())))?;
                text.push_str(&format!("\ntrace written to {}", path.display()));
            }
            let json = json!({"identity": id.to_string(), "derived": true, "steps": t.len(), "trace": trace_json(&t)});
            Ok(Report::pass(text, json))
        }
        DeriveOutcome::Refuted(w) => Ok(Report {
            text: format!("COUNTEREXAMPLE {id} fails in M(V)\nwitness {w}"),
            json: json!({"identity": id.to_string(), "derived": false, "witness": witness_json(&w)}),
            ok: false,
        }),
    }
}

fn irredundant_cmd(nmax: usize, max_order: usize, budget: u64) -> Result<Report, CliError> {
    let ids = sigma_members(nmax).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = stuck_irredundancy_report(&ids, budget)?;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for r in &report {
        let tag = &r.identity.tag;
        if r.certified() {
            lines.push(format!("{tag:<12} certificate: stuck"));
            rows.push(json!({"tag": tag, "certificate": "stuck"}));
            continue;
        }
        let rest: Vec<Identity> = ids.iter().filter(|i| &i.tag != tag).cloned().collect();
        let table = semantic_irredundancy_witness(&r.identity, &rest, max_order, budget)?;
        let (line, row) = if let Some(t) = table.witness {
            (
                format!("{tag:<12} certificate: monoid of order {} {:?}", t.order(), t.rows()),
                json!({"tag": tag, "certificate": "table", "table": t}),
            )
        } else if let Some(h) = rees_irredundancy_witness(&r.identity, &rest, 6, 3, budget)? {
            (
                format!("{tag:<12} certificate: M({{{}}}) of order {}", h.word, h.table.order()),
                json!({"tag": tag, "certificate": "rees", "word": h.word.to_string(), "table": h.table}),
            )
        } else {
            ok = false;
            (
                format!("{tag:<12} no certificate (rewritten by {})", r.blockers.join(", ")),
                json!({"tag": tag, "certificate": null, "blockers": r.blockers}),
            )
        };
        lines.push(line);
        rows.push(row);
    }
    Ok(Report { text: lines.join("\n"), json: json!(rows), ok })
}

fn oracle_cmd(cmd: OracleCmd, budget: u64) -> Result<Report, CliError> {
    match cmd {
        OracleCmd::CrossCheck { monoid, vars, len } => {
            let m = load_monoid(&monoid)?;
            let r = cross_check(&m, vars, len, budget.saturating_mul(100))?;
            let mut text = format!(
                "{} identities (≤ {vars} variables, sides ≤ {len}), {} satisfied, {} disagreement(s)",
                r.identities,
                r.satisfied,
                r.disagreements.len()
            );
            for d in r.disagreements.iter().take(10) {
                text.push_str(&format!("\n  {d}"));
            }
            let ok = r.passed();
            Ok(Report { text, json: serde_json::to_value(&r).expect("serializable"), ok })
        }
        OracleCmd::Witness { sigma, max_order, nmax } => {
            let ids = sigma_members(nmax).map_err(|e| CliError::Usage(e.to_string()))?;
            let target = ids
                .iter()
                .find(|i| i.tag == sigma)
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("no member tagged {sigma:?} with n <= {nmax}")))?;
            let rest: Vec<Identity> = ids.into_iter().filter(|i| i.tag != sigma).collect();
            let s = semantic_irredundancy_witness(&target, &rest, max_order, budget)?;
            let searched: Vec<String> = s.searched.iter().map(|(o, c)| format!("order {o}: {c}")).collect();
            let head = format!("{} against the other members (family up to n = {nmax})\nsearched {}", target, searched.join(", "));
            Ok(match &s.witness {
                Some(t) => Report::pass(format!("{head}\nWITNESS\n{t}"), serde_json::to_value(&s).expect("serializable")),
                None => Report {
                    text: format!("{head}\nnone found within bounds (inconclusive)"),
                    json: serde_json::to_value(&s).expect("serializable"),
                    ok: false,
                },
            })
        }
    }
}

fn verify_cmd(
    suite: Option<String>,
    trace: Option<PathBuf>,
    nmax: Option<usize>,
    seed: Option<u64>,
    random: Option<usize>,
    budget: u64,
) -> Result<Report, CliError> {
    if let Some(path) = trace {
        let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let t = DerivationTrace::from_json(&text).map_err(|e| CliError::Usage(format!("bad trace file: {e}")))?;
        return Ok(match verify_trace(&t, nmax) {
            Ok(()) => Report::pass(
                format!("VALID trace {} = {} in {} step(s)", t.start, t.end, t.len()),
                json!({"valid": true, "start": t.start.to_string(), "end": t.end.to_string(), "steps": t.len()}),
            ),
            Err(e) => Report {
                text: format!("INVALID trace: {e}"),
                json: json!({"valid": false, "error": e.to_string(), "step": e.step()}),
                ok: false,
            },
        });
    }
    let name = suite.expect("clap requires --suite or --trace");
    let mut cfg = SuiteConfig { budget, ..SuiteConfig::default() };
    if let Some(n) = nmax {
        cfg.nmax = n;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(r) = random {
        cfg.random_instances = r;
    }
    let names: Vec<&str> = if name == "all" { SUITE_NAMES.to_vec() } else { vec![name.as_str()] };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for n in names {
        reports.push(run_suite(n, &cfg).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    let failed = reports.iter().any(|r| r.failed());
    if !failed && reports.iter().any(|r| r.budget_exhausted()) {
        let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
        return Err(CliError::Budget(text));
    }
    Ok(Report {
        text: reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
        json: json!(reports),
        ok: reports.iter().all(|r| r.passed()),
    })
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let budget = cli.budget;
    match cli.cmd {
        Cmd::Words { cmd: WordsCmd::Info { word } } => words_info(&word),
        Cmd::Monoid { cmd } => monoid_cmd(cmd, budget),
        Cmd::Sigma { cmd } => sigma_cmd(cmd),
        Cmd::Match { pattern, target, factor, nonempty } => match_cmd(&pattern, &target, factor, &nonempty, budget),
        Cmd::Derive { identity, nmax, trace, verify } => derive_cmd(&identity, nmax, trace, verify),
        Cmd::Irredundant { nmax, max_order } => irredundant_cmd(nmax, max_order, budget),
        Cmd::Oracle { cmd } => oracle_cmd(cmd, budget),
        Cmd::Verify { suite, trace, nmax, seed, random } => verify_cmd(suite, trace, nmax, seed, random, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let (code, text, value) = match run(cli) {
        Ok(r) => (if r.ok { 0 } else { 1 }, r.text, r.json),
        Err(CliError::Usage(m)) => (2, format!("usage error: {m}"), json!({"error": "usage", "message": m})),
        Err(CliError::Fail(m)) => (1, format!("error: {m}"), json!({"error": "failure", "message": m})),
        Err(CliError::Budget(m)) => (3, format!("budget exhausted: {m}"), json!({"error": "budget", "message": m})),
    };
    match format {
        Format::Text if code >= 2 => eprintln!("{text}"),
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&json!({"exit": code, "report": value})).expect("json")),
    }
    ExitCode::from(code)
}
