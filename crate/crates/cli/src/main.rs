//! `semifree-lab`: command-line front end.
//!
//! Exit codes: 0 verified, 1 verification failure (witnesses printed),
//! 2 usage or parse error, 3 budget or feasibility refusal.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semifree_core::builtin::Builtin;
use semifree_core::categorical::{
    check_comonad, check_functoriality, check_ideal, check_ideal_algebra_correspondence, nonpointedness_witness,
    semifree_morphism, BuiltinMorphism, CheckReport,
};
use semifree_core::dsl::{parse_equation, parse_theory_named, print_theory, proof_from_json, proof_to_json, Report};
use semifree_core::models::{enumerate_models_capped, find_countermodel, verify_iso, ModelError, DEFAULT_CAP};
use semifree_core::monads::{check_monad_laws, free_algebra, BuiltinMonad, LawReport, Monad, Semifree};
use semifree_core::proof::{check_proof, lift_proof, prove_bounded, Budget, ProofTree};
use semifree_core::semifree::{
    iterate_semifree, presentations_equivalent, semifree_theory, simplify_presentation, EquivalenceVerdict,
    SimplifyBudget,
};
use semifree_core::{Name, Theory};

#[derive(Parser)]
#[command(name = "semifree-lab", version, about = "Semifree monads and their presentations, checked on finite data")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Enumeration order for models and terms.
    #[arg(long, global = true, value_enum, default_value_t = SeedOrder::Canonical)]
    seed_order: SeedOrder,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedOrder {
    Canonical,
}

#[derive(Subcommand)]
enum Command {
    /// Semifree presentation of a theory.
    Semifree {
        theory: String,
        #[arg(long)]
        simplify: bool,
        /// Apply the construction N times (simplifying each round).
        #[arg(long, value_name = "N")]
        iterate: Option<usize>,
    },
    /// Bounded proof search for an equation.
    Prove {
        theory: String,
        equation: String,
        #[arg(long, default_value_t = 8)]
        budget: usize,
    },
    /// Smallest finite model falsifying an equation.
    Countermodel {
        theory: String,
        equation: String,
        #[arg(long, default_value_t = 3)]
        max_carrier: usize,
    },
    /// Lift a proof over a theory to its semifree presentation.
    LiftProof { theory: String, proof: PathBuf },
    /// Bounded free algebra on the given generators.
    Free {
        theory: String,
        #[arg(long, value_delimiter = ',', default_value = "x,y")]
        vars: Vec<String>,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// All models on a carrier.
    Models {
        theory: String,
        #[arg(long)]
        carrier: usize,
        /// Largest search space accepted.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Models of the semifree presentation against semialgebras.
    VerifyIso {
        builtin: String,
        #[arg(long)]
        carrier: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Monad laws for a built-in monad and its semifree monad.
    VerifyMonad {
        builtin: String,
        #[arg(long, default_value_t = 2)]
        set_size: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Ideal, comonad, morphism and non-pointedness checks.
    VerifyCategorical {
        builtin: String,
        #[arg(long)]
        ideal: bool,
        #[arg(long)]
        comonad: bool,
        #[arg(long)]
        morphisms: bool,
        #[arg(long)]
        nonpointed: bool,
        #[arg(long, default_value_t = 2)]
        set_size: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Mutual derivability of two presentations.
    Equiv {
        first: String,
        second: String,
        #[arg(long, default_value_t = 8)]
        budget: usize,
        /// Carrier bound for countermodels when a proof is not found.
        #[arg(long, default_value_t = 3)]
        model_carrier: usize,
        /// Renames operations of the second theory, e.g. `a0=a,a1=b`.
        #[arg(long, value_delimiter = ',')]
        rename: Vec<String>,
    },
}

/// What a command produced.
struct Outcome {
    code: u8,
    text: String,
    report: Report,
}

impl Outcome {
    fn new(code: u8, text: String, report: Report) -> Self {
        Outcome { code, text, report }
    }
}

/// A failure before any check ran.
struct Usage(String);

fn usage<E: std::fmt::Display>(e: E) -> Usage {
    Usage(e.to_string())
}

fn load_theory(arg: &str) -> Result<Theory, Usage> {
    if !arg.starts_with("builtin:") && Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Usage(format!("{arg}: {e}")))?;
        return parse_theory_named(&text, PathBuf::from(arg)).map_err(usage);
    }
    Builtin::parse(arg)
        .map(|b| b.theory())
        .map_err(|e| Usage(format!("{arg}: not a readable file, and {e}")))
}

fn load_monad(arg: &str) -> Result<BuiltinMonad, Usage> {
    let b = Builtin::parse(arg).map_err(usage)?;
    let id = b.monad().ok_or_else(|| Usage(format!("{arg}: not a built-in monad")))?;
    BuiltinMonad::new(id).map_err(usage)
}

fn refusal(kind: &str, theory: Option<&str>, e: &ModelError) -> Outcome {
    let report = Report::new(kind, theory, "refused").meta("reason", e.to_string());
    Outcome::new(3, format!("refused: {e}\n"), report)
}

fn run(cli: &Cli) -> Result<Outcome, Usage> {
    match &cli.command {
        Command::Semifree { theory, simplify, iterate } => semifree(theory, *simplify, *iterate),
        Command::Prove { theory, equation, budget } => {
            let th = load_theory(theory)?;
            let eq = parse_equation(equation, &th.signature).map_err(usage)?;
            let budget = Budget::new(*budget);
            Ok(match prove_bounded(&th, &eq.lhs, &eq.rhs, &budget) {
                Ok(p) => {
                    let checked = check_proof(&th, &p).map(|j| j.proves(&eq.lhs, &eq.rhs)).unwrap_or(false);
                    let report = Report::new("prove", Some(&th.name), "proved")
                        .item(proof_to_json(&p))
                        .meta("equation", eq.to_string())
                        .meta("checked", checked)
                        .meta("proof_size", p.size());
                    let text = format!("proved {eq} ({} steps, checked: {checked})\n{}", p.size(), render(&th, &p));
                    Outcome::new(if checked { 0 } else { 1 }, text, report)
                }
                Err(ex) => {
                    let report = Report::new("prove", Some(&th.name), "unknown")
                        .meta("equation", eq.to_string())
                        .meta("budget", json!(budget))
                        .meta("nodes", ex.nodes)
                        .meta("rounds", ex.rounds)
                        .meta("saturated", ex.saturated);
                    Outcome::new(3, format!("{ex}\n"), report)
                }
            })
        }
        Command::Countermodel { theory, equation, max_carrier } => {
            let th = load_theory(theory)?;
            let eq = parse_equation(equation, &th.signature).map_err(usage)?;
            Ok(match find_countermodel(&th, &eq.lhs, &eq.rhs, *max_carrier) {
                Some(cm) => {
                    let report = Report::new("countermodel", Some(&th.name), "refuted")
                        .item(cm.to_json())
                        .meta("equation", eq.to_string())
                        .meta("max_carrier", *max_carrier);
                    let env: Vec<String> = cm.assignment.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                    let text = format!("countermodel for {eq} with {}\n{}\n", env.join(", "), cm.algebra);
                    Outcome::new(1, text, report)
                }
                None => {
                    let report = Report::new("countermodel", Some(&th.name), "none")
                        .meta("equation", eq.to_string())
                        .meta("max_carrier", *max_carrier);
                    Outcome::new(3, format!("no countermodel on carriers up to {max_carrier}\n"), report)
                }
            })
        }
        Command::LiftProof { theory, proof } => {
            let th = load_theory(theory)?;
            let text = std::fs::read_to_string(proof).map_err(|e| Usage(format!("{}: {e}", proof.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", proof.display())))?;
            // Accept a bare proof or a report carrying one.
            let v = v.get("items").and_then(|i| i.get(0)).cloned().unwrap_or(v);
            let p = proof_from_json(&v, &th.signature).map_err(usage)?;
            let input = match check_proof(&th, &p) {
                Ok(j) => j,
                Err(e) => {
                    let report = Report::new("lift-proof", Some(&th.name), "invalid").meta("error", e.to_string());
                    return Ok(Outcome::new(1, format!("input proof rejected: {e}\n"), report));
                }
            };
            let sf = semifree_theory(&th);
            let lifted = lift_proof(&sf, &p).map_err(usage)?;
            let (lhs, rhs) = (input.lhs.wrap_vars(sf.a()), input.rhs.wrap_vars(sf.a()));
            let ok = check_proof(&sf.result, &lifted).map(|j| j.proves(&lhs, &rhs)).unwrap_or(false);
            let report = Report::new("lift-proof", Some(&sf.result.name), if ok { "lifted" } else { "failed" })
                .item(proof_to_json(&lifted))
                .meta("input", input.equation().to_string())
                .meta("judgment", format!("{lhs} = {rhs}"))
                .meta("checked", ok);
            let text = format!("{} ⊢ {lhs} = {rhs} (checked: {ok})\n{}", sf.result.name, render(&sf.result, &lifted));
            Ok(Outcome::new(if ok { 0 } else { 1 }, text, report))
        }
        Command::Free { theory, vars, bound } => {
            let th = load_theory(theory)?;
            let gens: Vec<Name> = vars.iter().map(|v| Name::new(v.trim())).collect();
            if let Some(g) = gens.iter().find(|g| th.signature.contains(g.as_str())) {
                return Err(Usage(format!("generator `{g}` clashes with an operation")));
            }
            let free = free_algebra(&th, &gens, *bound);
            let mut text = format!(
                "{} classes (term size ≤ {bound}, {}; bounded under-approximation)\n",
                free.len(),
                if free.saturated { "saturated" } else { "not saturated" }
            );
            for t in &free.classes {
                let _ = writeln!(text, "  {t}");
            }
            let report = Report::new("free", Some(&th.name), "bounded").item(free.to_json());
            Ok(Outcome::new(0, text, report))
        }
        Command::Models { theory, carrier, cap } => {
            let th = load_theory(theory)?;
            if *carrier == 0 {
                return Err(Usage("carrier must be positive".into()));
            }
            Ok(match enumerate_models_capped(&th, *carrier, *cap) {
                Ok(models) => {
                    let n = models.len();
                    let mut text = format!("{n} {}\n", if n == 1 { "model" } else { "models" });
                    for (i, m) in models.iter().enumerate() {
                        let _ = writeln!(text, "  {i}: {m}");
                    }
                    let mut report = Report::new("models", Some(&th.name), "enumerated")
                        .meta("carrier", *carrier)
                        .meta("count", n);
                    for m in &models {
                        report = report.item(m.to_json());
                    }
                    Outcome::new(0, text, report)
                }
                Err(e) => refusal("models", Some(&th.name), &e),
            })
        }
        Command::VerifyIso { builtin, carrier, bound, cap } => {
            let m = load_monad(builtin)?;
            if *carrier == 0 {
                return Err(Usage("carrier must be positive".into()));
            }
            Ok(match verify_iso(&m, *carrier, *bound, *cap) {
                Ok(r) => {
                    let ok = r.passed();
                    let brute = r.brute_force_count.map_or("n/a".to_string(), |c| c.to_string());
                    let mut text = format!(
                        "{}: carrier {}: {} models, {brute} associative structure maps, round trips {}\n",
                        r.monad,
                        r.carrier_size,
                        r.model_count,
                        if ok { "agree" } else { "FAIL" }
                    );
                    for f in r.gh_failures.iter().chain(&r.hg_failures).chain(&r.semialgebra_failures).chain(&r.hom_mismatches) {
                        let _ = writeln!(text, "  {f}");
                    }
                    let v = serde_json::to_value(&r).expect("report serializes");
                    let report = Report::new("verify-iso", Some(&r.monad), if ok { "verified" } else { "failed" }).item(v);
                    Outcome::new(if ok { 0 } else { 1 }, text, report)
                }
                Err(e) => refusal("verify-iso", Some(&m.name()), &e),
            })
        }
        Command::VerifyMonad { builtin, set_size, bound } => {
            let m = load_monad(builtin)?;
            let xs: Vec<u8> = (0..*set_size as u8).collect();
            let plain = check_monad_laws(&m, &xs, Some(*bound));
            let semi = check_monad_laws(&Semifree(m.clone()), &xs, Some(*bound));
            let ok = plain.passed() && semi.passed();
            let mut text = String::new();
            for r in [&plain, &semi] {
                law_lines(&mut text, r);
            }
            let mut report = Report::new("verify-monad", Some(&m.name()), if ok { "verified" } else { "failed" });
            for r in [&plain, &semi] {
                report = report.item(serde_json::to_value(r).expect("report serializes"));
            }
            Ok(Outcome::new(if ok { 0 } else { 1 }, text, report))
        }
        Command::VerifyCategorical { builtin, ideal, comonad, morphisms, nonpointed, set_size, bound } => {
            let m = load_monad(builtin)?;
            let all = !(*ideal || *comonad || *morphisms || *nonpointed);
            let xs: Vec<u8> = (0..*set_size as u8).collect();
            let b = Some(*bound);
            let mut checks: Vec<CheckReport> = Vec::new();
            let mut items = Vec::new();
            let mut text = String::new();
            let mut ok = true;
            if all || *ideal {
                checks.push(check_ideal(&m, &xs, b));
                if m.is_finite() {
                    for size in 1..=*set_size {
                        let r = check_ideal_algebra_correspondence(&m, size);
                        ok &= r.passed();
                        let _ = writeln!(
                            text,
                            "correspondence {} carrier {size}: {} algebras, {} ideal squares: {}",
                            r.monad,
                            r.em_algebras,
                            r.square_algebras,
                            pass(r.passed())
                        );
                        items.push(serde_json::to_value(&r).expect("report serializes"));
                    }
                }
            }
            if all || *comonad {
                checks.push(check_comonad(&m, &xs, b));
            }
            if all || *morphisms {
                for sigma in [BuiltinMorphism::Support, BuiltinMorphism::ForgetOrder] {
                    match semifree_morphism(sigma.resolve(), &xs, b) {
                        Ok((_, r)) => checks.push(r),
                        Err(e) => checks.push(e.0),
                    }
                }
                checks.push(check_functoriality(&xs, b));
            }
            for r in &checks {
                ok &= r.passed();
                let _ = writeln!(
                    text,
                    "{} {}: {} checks, {} failures{}: {}",
                    r.check,
                    r.monad,
                    r.checks,
                    r.failure_count,
                    if r.exhaustive { "" } else { " (bounded)" },
                    pass(r.passed())
                );
                for f in &r.failures {
                    let _ = writeln!(text, "  {f}");
                }
                items.push(serde_json::to_value(r).expect("report serializes"));
            }
            if all || *nonpointed {
                let w = nonpointedness_witness();
                ok &= w.verdict == "no natural point exists";
                let _ = writeln!(
                    text,
                    "nonpointedness: {} (forced component {}, witness carrier {})",
                    w.verdict, w.forced_component, w.witness_carrier_size
                );
                items.push(serde_json::to_value(&w).expect("report serializes"));
            }
            let mut report = Report::new("verify-categorical", Some(&m.name()), if ok { "verified" } else { "failed" });
            for v in items {
                report = report.item(v);
            }
            Ok(Outcome::new(if ok { 0 } else { 1 }, text, report))
        }
        Command::Equiv { first, second, budget, model_carrier, rename } => {
            let (t1, t2) = (load_theory(first)?, load_theory(second)?);
            let mut renaming = BTreeMap::new();
            for pair in rename.iter().filter(|p| !p.is_empty()) {
                let (from, to) = pair.split_once('=').ok_or_else(|| Usage(format!("bad renaming `{pair}`")))?;
                renaming.insert(Name::new(from.trim()), Name::new(to.trim()));
            }
            let verdict = presentations_equivalent(&t1, &t2, &renaming, &Budget::new(*budget), *model_carrier)
                .map_err(usage)?;
            let name = format!("{} ~ {}", t1.name, t2.name);
            let report = Report::new("equiv", Some(&name), verdict.label()).meta("budget", *budget);
            Ok(match verdict {
                EquivalenceVerdict::Equivalent { forward, backward } => {
                    let items = json!({
                        "forward": forward.iter().map(proof_to_json).collect::<Vec<_>>(),
                        "backward": backward.iter().map(proof_to_json).collect::<Vec<_>>(),
                    });
                    let text = format!(
                        "equivalent: {} + {} equations derived\n",
                        forward.len(),
                        backward.len()
                    );
                    Outcome::new(0, text, report.item(items))
                }
                EquivalenceVerdict::Inequivalent { direction, equation, countermodel } => {
                    let text = format!("inequivalent ({direction:?}): {equation} fails in\n{}\n", countermodel.algebra);
                    let report = report
                        .item(countermodel.to_json())
                        .meta("direction", format!("{direction:?}").to_lowercase())
                        .meta("equation", equation.to_string());
                    Outcome::new(1, text, report)
                }
                EquivalenceVerdict::Unknown { direction, equation, exhausted, model_carrier } => {
                    let text = format!("unknown ({direction:?}): {equation}: {exhausted}; no countermodel up to {model_carrier}\n");
                    let report = report
                        .meta("direction", format!("{direction:?}").to_lowercase())
                        .meta("equation", equation.to_string())
                        .meta("model_carrier", model_carrier);
                    Outcome::new(3, text, report)
                }
            })
        }
    }
}

/// One line per proof node, indented by depth, with the judgment it proves.
fn render(th: &Theory, p: &ProofTree) -> String {
    fn go(th: &Theory, p: &ProofTree, depth: usize, out: &mut String) {
        let judgment = check_proof(th, p).map(|j| format!("{} = {}", j.lhs, j.rhs)).unwrap_or_else(|e| e.to_string());
        let detail = match p {
            ProofTree::Axiom(i) => format!(" {i}"),
            ProofTree::Congruence(op, _) => format!(" {}", op.name),
            _ => String::new(),
        };
        let _ = writeln!(out, "{:indent$}{}{detail}: {judgment}", "", p.rule_name(), indent = 2 * depth);
        for q in p.children() {
            go(th, q, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(th, p, 0, &mut out);
    out
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn law_lines(text: &mut String, r: &LawReport) {
    let levels: Vec<String> = r
        .levels
        .iter()
        .map(|l| format!("L{}={}{}", l.level, l.elements, if l.exhaustive { "" } else { "*" }))
        .collect();
    let _ = writeln!(
        text,
        "{} on {} points: {} checks, {} failures [{}]: {}",
        r.monad,
        r.carrier_size,
        r.checks,
        r.failure_count,
        levels.join(" "),
        pass(r.passed())
    );
    for f in &r.failures {
        let _ = writeln!(text, "  {}: {}", f.law, f.element);
    }
}

fn semifree(theory: &str, simplify: bool, iterate: Option<usize>) -> Result<Outcome, Usage> {
    let th = load_theory(theory)?;
    let budget = SimplifyBudget::default();
    if let Some(n) = iterate {
        if n == 0 {
            return Err(Usage("--iterate needs N ≥ 1".into()));
        }
        let (result, audits) = iterate_semifree(&th, n, &budget);
        let mut report = Report::new("semifree", Some(&result.name), "iterated").meta("iterations", n);
        for e in &result.equations {
            report = report.item(json!({"equation": e.to_string()}));
        }
        let audit: Vec<Value> = audits.iter().map(|a| Value::Array(a.iter().map(|s| s.to_json()).collect())).collect();
        return Ok(Outcome::new(0, print_theory(&result), report.meta("audit", Value::Array(audit))));
    }
    let sf = semifree_theory(&th);
    if simplify {
        let out = simplify_presentation(&sf, &budget);
        let mut report = Report::new("semifree", Some(&out.theory.name), "simplified");
        for e in &out.theory.equations {
            report = report.item(json!({"equation": e.to_string()}));
        }
        let audit: Vec<Value> = out.audit.iter().map(|s| s.to_json()).collect();
        return Ok(Outcome::new(0, print_theory(&out.theory), report.meta("audit", Value::Array(audit))));
    }
    let mut report = Report::new("semifree", Some(&sf.result.name), "generated")
        .meta("fresh_symbol", sf.a().to_string())
        .meta("idempotency", 1)
        .meta("front_absorption", sf.front.len())
        .meta("inside_absorption", sf.inside.len())
        .meta("lifted_axioms", sf.lifted.len());
    for (e, p) in sf.result.equations.iter().zip(&sf.provenance) {
        report = report.item(json!({"equation": e.to_string(), "provenance": p.to_string()}));
    }
    Ok(Outcome::new(0, print_theory(&sf.result), report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let SeedOrder::Canonical = cli.seed_order;
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.report.to_json_string());
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(Usage(msg)) => {
            if cli.json {
                let report = Report::new("error", None, "usage").meta("message", msg);
                println!("{}", report.to_json_string());
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
