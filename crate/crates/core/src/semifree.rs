//! The semifree presentation `(Σˢ, Eˢ)` of a theory, its simplification,
//! iteration, and presentation-equivalence checking.
//!
//! Generation emits four families, in this order:
//!
//! 1. idempotency `a a v = a v`;
//! 2. front absorption `a(op(v1..vn)) = op(v1..vn)` for every `op`;
//! 3. inside absorption `op(a v1..a vn) = op(v1..vn)` for every `op` of
//!    positive arity;
//! 4. a lifted copy `t[a v / v] = s[a v / v]` of every base equation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dsl::proof_to_json;
use crate::models::{find_countermodel, Countermodel};
use crate::proof::{check_proof, proof_a_inside, prove_bounded, Budget, ProofTree, SearchExhausted};
use crate::term::{
    fresh_variables, size_then_canonical, validate_theory, Equation, Name, OpSymbol, Signature, Substitution, Term,
    Theory,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Idempotency,
    FrontAbsorption(Name),
    InsideAbsorption(Name),
    LiftedAxiom(usize),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Idempotency => f.write_str("idempotency"),
            Provenance::FrontAbsorption(op) => write!(f, "front-absorption({op})"),
            Provenance::InsideAbsorption(op) => write!(f, "inside-absorption({op})"),
            Provenance::LiftedAxiom(i) => write!(f, "lifted-axiom({i})"),
        }
    }
}

/// A theory together with its raw semifree presentation.
#[derive(Clone, Debug)]
pub struct SemifreeTheory {
    pub base: Theory,
    pub result: Theory,
    pub a_symbol: OpSymbol,
    /// One tag per equation of `result`.
    pub provenance: Vec<Provenance>,
    pub idempotency: usize,
    pub front: BTreeMap<Name, usize>,
    pub inside: BTreeMap<Name, usize>,
    /// `lifted[i]` is the index in `result` of the copy of base equation `i`.
    pub lifted: Vec<usize>,
}

impl SemifreeTheory {
    pub fn a(&self) -> &Name {
        &self.a_symbol.name
    }
}

/// Picks `preferred`, then `preferred'`, `preferred''`, ... avoiding
/// operation and variable names of `th`.
pub fn fresh_symbol(th: &Theory, preferred: &str) -> Name {
    let vars = th.variable_names();
    let mut cand = preferred.to_string();
    while th.signature.contains(&cand) || vars.contains(cand.as_str()) {
        cand.push('\'');
    }
    Name::from(cand)
}

/// `(Σ, E) ↦ (Σˢ, Eˢ)` with the fresh symbol preferably named `a`.
pub fn semifree_theory(th: &Theory) -> SemifreeTheory {
    semifree_theory_named(th, "a")
}

/// As [`semifree_theory`], preferring `preferred` for the fresh symbol.
pub fn semifree_theory_named(th: &Theory, preferred: &str) -> SemifreeTheory {
    let a = fresh_symbol(th, preferred);
    let a_symbol = OpSymbol::new(a.clone(), 1);
    let mut signature = th.signature.clone();
    signature.push(a_symbol.clone()).expect("fresh symbol");
    let is_op = |s: &str| signature.contains(s);
    let wrap = |t: Term| Term::unary(a.clone(), t);

    let mut equations = Vec::new();
    let mut provenance = Vec::new();

    let v = Term::Var(fresh_variables(1, &is_op).remove(0));
    equations.push(Equation::new(wrap(wrap(v.clone())), wrap(v)));
    provenance.push(Provenance::Idempotency);
    let idempotency = 0;

    let mut front = BTreeMap::new();
    for op in th.signature.symbols() {
        let vars: Vec<Term> = fresh_variables(op.arity, &is_op).into_iter().map(Term::Var).collect();
        let t = Term::App(op.name.clone(), vars);
        front.insert(op.name.clone(), equations.len());
        equations.push(Equation::new(wrap(t.clone()), t));
        provenance.push(Provenance::FrontAbsorption(op.name.clone()));
    }

    let mut inside = BTreeMap::new();
    for op in th.signature.symbols().iter().filter(|op| op.arity > 0) {
        let vars: Vec<Term> = fresh_variables(op.arity, &is_op).into_iter().map(Term::Var).collect();
        let lhs = Term::App(op.name.clone(), vars.iter().cloned().map(wrap).collect());
        inside.insert(op.name.clone(), equations.len());
        equations.push(Equation::new(lhs, Term::App(op.name.clone(), vars)));
        provenance.push(Provenance::InsideAbsorption(op.name.clone()));
    }

    let mut lifted = Vec::new();
    for (i, eq) in th.equations.iter().enumerate() {
        lifted.push(equations.len());
        equations.push(eq.map_terms(|t| t.wrap_vars(&a)));
        provenance.push(Provenance::LiftedAxiom(i));
    }

    let result = Theory::new(format!("{}_s", th.name), signature, equations);
    SemifreeTheory { base: th.clone(), result, a_symbol, provenance, idempotency, front, inside, lifted }
}

/// Limits for [`simplify_presentation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplifyBudget {
    /// Proof search for eliminating the fresh symbol.
    pub proof: Budget,
    /// Largest candidate definiens considered for the fresh symbol.
    pub definiens_size: usize,
    /// Proof search when dropping redundant equations.
    pub prune: Budget,
    /// Carrier bound of the countermodel pre-filter.
    pub refute_carrier: usize,
}

impl Default for SimplifyBudget {
    fn default() -> Self {
        SimplifyBudget {
            proof: Budget::new(8),
            definiens_size: 5,
            prune: Budget::new(10),
            refute_carrier: 2,
        }
    }
}

/// One entry of the simplification audit trail.
#[derive(Clone, Debug)]
pub enum AuditStep {
    /// Pass 1. `forward` proves `after` from the raw presentation,
    /// `backward` proves `before` once `after` replaces it.
    Stripped { index: usize, before: Equation, after: Equation, forward: ProofTree, backward: ProofTree },
    /// Pass 2: `symbol v = definiens` was proved, so `symbol` was expanded away.
    Eliminated { symbol: Name, param: Name, definiens: Term, proof: ProofTree },
    /// Pass 2 found no definiens within budget.
    Kept { symbol: Name, candidates: usize },
    /// Pass 3: rewritten by strictly size-decreasing instances of the others.
    Rewritten { before: Equation, after: Equation },
    /// Pass 3: derivable from the remaining equations (proof refers to them).
    Dropped { equation: Equation, remaining: Vec<Equation>, proof: ProofTree },
}

impl AuditStep {
    pub fn to_json(&self) -> Value {
        match self {
            AuditStep::Stripped { index, before, after, forward, backward } => json!({
                "pass": 1, "action": "strip", "index": index,
                "before": before.to_string(), "after": after.to_string(),
                "forward": proof_to_json(forward), "backward": proof_to_json(backward),
            }),
            AuditStep::Eliminated { symbol, param, definiens, proof } => json!({
                "pass": 2, "action": "eliminate", "symbol": symbol.to_string(),
                "definition": format!("{symbol}({param}) = {definiens}"), "proof": proof_to_json(proof),
            }),
            AuditStep::Kept { symbol, candidates } => json!({
                "pass": 2, "action": "keep", "symbol": symbol.to_string(), "candidates_tried": candidates,
            }),
            AuditStep::Rewritten { before, after } => json!({
                "pass": 3, "action": "rewrite", "before": before.to_string(), "after": after.to_string(),
            }),
            AuditStep::Dropped { equation, proof, .. } => json!({
                "pass": 3, "action": "drop", "equation": equation.to_string(), "proof": proof_to_json(proof),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub theory: Theory,
    pub audit: Vec<AuditStep>,
}

/// Simplifies a raw semifree presentation in three passes: stripping `a`
/// inside lifted axioms, eliminating `a` by a definable term, and removing
/// redundant equations. Every change is justified by a checked proof or by
/// rewriting with the remaining equations, so the output presents the same
/// theory; running out of budget only leaves more equations behind.
pub fn simplify_presentation(sf: &SemifreeTheory, budget: &SimplifyBudget) -> Simplified {
    let mut audit = Vec::new();
    let a = sf.a().clone();

    // Pass 1.
    let mut current = sf.result.clone();
    for (base_index, &index) in sf.lifted.iter().enumerate() {
        let base = &sf.base.equations[base_index];
        let before = current.equations[index].clone();
        let (t, s) = (&base.lhs, &base.rhs);
        let after = match (t.is_var(), s.is_var()) {
            (false, false) => base.clone(),
            (false, true) => Equation::new(t.clone(), before.rhs.clone()),
            (true, false) => Equation::new(before.lhs.clone(), s.clone()),
            (true, true) => continue,
        };
        if after == before {
            continue;
        }
        // Lifted axiom: t[a] = s[a]. The stripped side(s) are tied back by
        // the inside-absorption lemma.
        let down = |u: &Term| if u.is_var() { None } else { Some(proof_a_inside(sf, u).expect("depth ≥ 1")) };
        let forward = ProofTree::chain(
            [down(t).map(ProofTree::sym), Some(ProofTree::Axiom(index)), down(s)].into_iter().flatten(),
        )
        .expect("nonempty");
        let backward = ProofTree::chain(
            [down(t), Some(ProofTree::Axiom(index)), down(s).map(ProofTree::sym)].into_iter().flatten(),
        )
        .expect("nonempty");
        let mut replaced = current.clone();
        replaced.equations[index] = after.clone();
        debug_assert!(check_proof(&current, &forward).is_ok_and(|j| j.equation() == after));
        debug_assert!(check_proof(&replaced, &backward).is_ok_and(|j| j.equation() == before));
        current = replaced;
        audit.push(AuditStep::Stripped { index, before, after, forward, backward });
    }

    // Pass 2.
    current = eliminate(&current, &a, budget, &mut audit);

    // Pass 3.
    current = demodulate(&current, &mut audit);
    current = prune(&current, budget, &mut audit);

    Simplified { theory: current, audit }
}

/// Terms over `sig` minus `skip`, in the single variable `v`, up to `max_size`,
/// ordered by size and then canonically.
pub fn small_terms(sig: &Signature, skip: &Name, vars: &[Name], max_size: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return Vec::new();
    }
    by_size[1] = vars.iter().cloned().map(Term::Var).collect();
    let ops: Vec<&OpSymbol> = sig.symbols().iter().filter(|s| &s.name != skip).collect();
    for op in ops.iter().filter(|o| o.arity == 0) {
        by_size[1].push(Term::constant(op.name.clone()));
    }
    for size in 2..=max_size {
        let mut out = Vec::new();
        for op in ops.iter().filter(|o| o.arity > 0) {
            // Distribute size - 1 over the arguments.
            let mut stack: Vec<(Vec<Term>, usize)> = vec![(Vec::new(), size - 1)];
            while let Some((args, left)) = stack.pop() {
                let remaining_args = op.arity - args.len();
                if remaining_args == 0 {
                    if left == 0 {
                        out.push(Term::App(op.name.clone(), args));
                    }
                    continue;
                }
                for s in 1..=left.saturating_sub(remaining_args - 1) {
                    for t in &by_size[s] {
                        let mut next = args.clone();
                        next.push(t.clone());
                        stack.push((next, left - s));
                    }
                }
            }
        }
        by_size[size] = out;
    }
    let mut all: Vec<Term> = by_size.into_iter().flatten().collect();
    all.sort_by(size_then_canonical);
    all.dedup();
    all
}

fn eliminate(th: &Theory, a: &Name, budget: &SimplifyBudget, audit: &mut Vec<AuditStep>) -> Theory {
    let param = fresh_variables(1, &|s| th.signature.contains(s)).remove(0);
    let goal = Term::unary(a.clone(), Term::Var(param.clone()));
    let candidates = small_terms(&th.signature, a, std::slice::from_ref(&param), budget.definiens_size);
    let found = candidates.iter().find_map(|c| {
        if find_countermodel(th, &goal, c, budget.refute_carrier).is_some() {
            return None;
        }
        prove_bounded(th, &goal, c, &budget.proof).ok().map(|p| (c.clone(), p))
    });
    let Some((definiens, proof)) = found else {
        audit.push(AuditStep::Kept { symbol: a.clone(), candidates: candidates.len() });
        return th.clone();
    };
    let signature = Signature::from_symbols(th.signature.symbols().iter().filter(|s| &s.name != a).cloned())
        .expect("subset of a valid signature");
    let mut equations = Vec::new();
    for eq in &th.equations {
        let eq = eq.map_terms(|t| t.expand_unary(a, &param, &definiens));
        push_new(&mut equations, eq);
    }
    let out = Theory::new(th.name.clone(), signature, equations);
    validate_theory(&out).expect("expansion stays inside the signature");
    audit.push(AuditStep::Eliminated { symbol: a.clone(), param, definiens, proof });
    out
}

/// Adds `eq` unless it is trivial or an alpha-variant (either orientation)
/// of one already present.
fn push_new(equations: &mut Vec<Equation>, eq: Equation) -> bool {
    if eq.is_trivial() {
        return false;
    }
    let key = eq.alpha_normal();
    let flipped = eq.flipped().alpha_normal();
    if equations.iter().any(|e| {
        let k = e.alpha_normal();
        k == key || k == flipped
    }) {
        return false;
    }
    equations.push(eq);
    true
}

/// Syntactic matching: `t = pattern[σ]`.
pub fn match_term(pattern: &Term, t: &Term) -> Option<Substitution> {
    fn go(p: &Term, t: &Term, s: &mut BTreeMap<Name, Term>) -> bool {
        match p {
            Term::Var(v) => match s.get(v) {
                Some(b) => b == t,
                None => {
                    s.insert(v.clone(), t.clone());
                    true
                }
            },
            Term::App(op, ps) => match t {
                Term::App(o, ts) if o == op && ts.len() == ps.len() => ps.iter().zip(ts).all(|(p, t)| go(p, t, s)),
                _ => false,
            },
        }
    }
    let mut s = BTreeMap::new();
    go(pattern, t, &mut s).then(|| Substitution::from_map(s))
}

fn rewrite_once(t: &Term, rules: &[(Term, Term)]) -> Option<Term> {
    for (l, r) in rules {
        if let Some(s) = match_term(l, t) {
            return Some(s.apply(r));
        }
    }
    if let Term::App(op, args) = t {
        for (i, a) in args.iter().enumerate() {
            if let Some(new) = rewrite_once(a, rules) {
                let mut args = args.clone();
                args[i] = new;
                return Some(Term::App(op.clone(), args));
            }
        }
    }
    None
}

fn normal_form(t: &Term, rules: &[(Term, Term)]) -> Term {
    let mut t = t.clone();
    // Every rule strictly shrinks the term, so this terminates.
    while let Some(next) = rewrite_once(&t, rules) {
        t = next;
    }
    t
}

fn oriented(eq: &Equation) -> Option<(Term, Term)> {
    let (l, r) = if eq.lhs.size() > eq.rhs.size() {
        (&eq.lhs, &eq.rhs)
    } else if eq.rhs.size() > eq.lhs.size() {
        (&eq.rhs, &eq.lhs)
    } else {
        return None;
    };
    let lv = l.variables();
    (!l.is_var() && r.variables().iter().all(|v| lv.contains(v))).then(|| (l.clone(), r.clone()))
}

fn demodulate(th: &Theory, audit: &mut Vec<AuditStep>) -> Theory {
    let mut eqs = th.equations.clone();
    // Each rewrite strictly shrinks one equation, so this terminates.
    'outer: loop {
        for i in 0..eqs.len() {
            let rules: Vec<(Term, Term)> =
                eqs.iter().enumerate().filter(|&(j, _)| j != i).filter_map(|(_, e)| oriented(e)).collect();
            let before = eqs[i].clone();
            let after = Equation::new(normal_form(&before.lhs, &rules), normal_form(&before.rhs, &rules));
            if after == before {
                continue;
            }
            audit.push(AuditStep::Rewritten { before, after: after.clone() });
            let mut next = Vec::with_capacity(eqs.len());
            for (j, e) in eqs.iter().enumerate() {
                push_new(&mut next, if j == i { after.clone() } else { e.clone() });
            }
            eqs = next;
            continue 'outer;
        }
        break;
    }
    th.with_equations(eqs)
}

fn prune(th: &Theory, budget: &SimplifyBudget, audit: &mut Vec<AuditStep>) -> Theory {
    let mut eqs = th.equations.clone();
    let mut i = eqs.len();
    while i > 0 {
        i -= 1;
        let candidate = eqs[i].clone();
        let rest: Vec<Equation> = eqs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, e)| e.clone()).collect();
        let rest_th = th.with_equations(rest.clone());
        if find_countermodel(&rest_th, &candidate.lhs, &candidate.rhs, budget.refute_carrier).is_some() {
            continue;
        }
        if let Ok(proof) = prove_bounded(&rest_th, &candidate.lhs, &candidate.rhs, &budget.prune) {
            audit.push(AuditStep::Dropped { equation: candidate, remaining: rest.clone(), proof });
            eqs = rest;
        }
    }
    th.with_equations(eqs)
}

/// `n` rounds of generation plus simplification, naming the fresh symbols
/// `a`, `b`, `c`, ... in order.
pub fn iterate_semifree(th: &Theory, n: usize, budget: &SimplifyBudget) -> (Theory, Vec<Vec<AuditStep>>) {
    let mut current = th.clone();
    let mut audits = Vec::new();
    for k in 0..n {
        let preferred = iteration_symbol(k);
        let sf = semifree_theory_named(&current, &preferred);
        let simplified = simplify_presentation(&sf, budget);
        current = simplified.theory;
        current.name = format!("{}_s{}", th.name, k + 1);
        audits.push(simplified.audit);
    }
    (current, audits)
}

/// `a`, `b`, ..., `z`, then `a1`, `b1`, ...
pub fn iteration_symbol(k: usize) -> String {
    let letter = (b'a' + (k % 26) as u8) as char;
    if k < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", k / 26)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("signatures differ: {left} vs {right}")]
pub struct SignatureMismatch {
    pub left: String,
    pub right: String,
}

/// Which theory the failing equation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// An equation of the second theory, checked against the first.
    Forward,
    /// An equation of the first theory, checked against the second.
    Backward,
}

#[derive(Clone, Debug)]
pub enum EquivalenceVerdict {
    /// `forward[i]` proves equation `i` of the second theory under the
    /// first; `backward[i]` the converse.
    Equivalent { forward: Vec<ProofTree>, backward: Vec<ProofTree> },
    Inequivalent { direction: Direction, equation: Equation, countermodel: Countermodel },
    Unknown { direction: Direction, equation: Equation, exhausted: SearchExhausted, model_carrier: usize },
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            EquivalenceVerdict::Equivalent { .. } => "equivalent",
            EquivalenceVerdict::Inequivalent { .. } => "inequivalent",
            EquivalenceVerdict::Unknown { .. } => "unknown",
        }
    }
}

/// Renames operation symbols of `th` along `map` (unmapped names are kept).
pub fn rename_ops(th: &Theory, map: &BTreeMap<Name, Name>) -> Theory {
    fn go(t: &Term, map: &BTreeMap<Name, Name>) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(op, args) => Term::App(
                map.get(op).cloned().unwrap_or_else(|| op.clone()),
                args.iter().map(|a| go(a, map)).collect(),
            ),
        }
    }
    let signature = Signature::from_symbols(th.signature.symbols().iter().map(|s| OpSymbol {
        name: map.get(&s.name).cloned().unwrap_or_else(|| s.name.clone()),
        arity: s.arity,
    }))
    .expect("renaming must stay injective");
    Theory::new(th.name.clone(), signature, th.equations.iter().map(|e| e.map_terms(|t| go(t, map))).collect())
}

/// Decides mutual derivability within budgets. Proofs are searched in
/// parallel; the reported failure is the first in equation order.
pub fn presentations_equivalent(
    t1: &Theory,
    t2: &Theory,
    renaming: &BTreeMap<Name, Name>,
    proof_budget: &Budget,
    model_carrier: usize,
) -> Result<EquivalenceVerdict, SignatureMismatch> {
    let t2 = rename_ops(t2, renaming);
    if !t1.signature.same_symbols(&t2.signature) {
        let show = |s: &Signature| s.symbols().iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", ");
        return Err(SignatureMismatch { left: show(&t1.signature), right: show(&t2.signature) });
    }
    let attempt = |from: &Theory, eqs: &[Equation]| -> Vec<Result<ProofTree, SearchExhausted>> {
        eqs.par_iter().map(|e| prove_bounded(from, &e.lhs, &e.rhs, proof_budget)).collect()
    };
    let forward = attempt(t1, &t2.equations);
    let backward = attempt(&t2, &t1.equations);
    let mut first_gap = None;
    for (direction, results, from, eqs) in
        [(Direction::Forward, &forward, t1, &t2.equations), (Direction::Backward, &backward, &t2, &t1.equations)]
    {
        for (r, eq) in results.iter().zip(eqs.iter()) {
            if let Err(exhausted) = r {
                if let Some(countermodel) = find_countermodel(from, &eq.lhs, &eq.rhs, model_carrier) {
                    return Ok(EquivalenceVerdict::Inequivalent { direction, equation: eq.clone(), countermodel });
                }
                first_gap.get_or_insert((direction, eq.clone(), exhausted.clone()));
            }
        }
    }
    if let Some((direction, equation, exhausted)) = first_gap {
        return Ok(EquivalenceVerdict::Unknown { direction, equation, exhausted, model_carrier });
    }
    let unwrap = |rs: Vec<Result<ProofTree, SearchExhausted>>| rs.into_iter().map(|r| r.expect("all found")).collect();
    Ok(EquivalenceVerdict::Equivalent { forward: unwrap(forward), backward: unwrap(backward) })
}

/// Operation names whose arity is positive.
pub fn positive_arity_ops(sig: &Signature) -> BTreeSet<Name> {
    sig.symbols().iter().filter(|s| s.arity > 0).map(|s| s.name.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::dsl::{parse_theory, print_theory};

    fn shown(th: &Theory) -> Vec<String> {
        th.equations.iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn exception_presentation() {
        let sf = semifree_theory(&builtin::exception(&["k".into()]));
        assert_eq!(shown(&sf.result), vec!["a(a(v)) = a(v)", "a(c_k) = c_k"]);
        assert_eq!(sf.result.signature.len(), 2);
    }

    #[test]
    fn identity_presentation() {
        let sf = semifree_theory(&builtin::identity());
        assert_eq!(shown(&sf.result), vec!["a(a(v)) = a(v)"]);
    }

    #[test]
    fn monoid_presentation() {
        let sf = semifree_theory(&builtin::monoid());
        assert_eq!(
            shown(&sf.result),
            vec![
                "a(a(v)) = a(v)",
                "a(e) = e",
                "a(mul(u, v)) = mul(u, v)",
                "mul(a(u), a(v)) = mul(u, v)",
                "mul(mul(a(u), a(v)), a(w)) = mul(a(u), mul(a(v), a(w)))",
                "mul(e, a(v)) = a(v)",
                "mul(a(v), e) = a(v)",
            ]
        );
        assert_eq!(
            sf.provenance,
            vec![
                Provenance::Idempotency,
                Provenance::FrontAbsorption("e".into()),
                Provenance::FrontAbsorption("mul".into()),
                Provenance::InsideAbsorption("mul".into()),
                Provenance::LiftedAxiom(0),
                Provenance::LiftedAxiom(1),
                Provenance::LiftedAxiom(2),
            ]
        );
    }

    #[test]
    fn fresh_name_avoids_collisions() {
        let th = parse_theory("theory T\nop a : 0\neq a = a'\nend").unwrap();
        let sf = semifree_theory(&th);
        assert_eq!(sf.a().as_str(), "a''");
        assert_eq!(parse_theory(&print_theory(&sf.result)).unwrap(), sf.result);
    }

    #[test]
    fn generation_count() {
        for b in builtin::Builtin::all_monadic() {
            let th = b.theory();
            let sf = semifree_theory(&th);
            let positive = th.signature.symbols().iter().filter(|s| s.arity > 0).count();
            assert_eq!(sf.result.equations.len(), 1 + th.signature.len() + positive + th.equations.len(), "{b}");
        }
    }

    #[test]
    fn monoid_pass_one() {
        let sf = semifree_theory(&builtin::monoid());
        let out = simplify_presentation(&sf, &SimplifyBudget::default());
        let stripped: Vec<String> = out
            .audit
            .iter()
            .filter_map(|s| match s {
                AuditStep::Stripped { after, .. } => Some(after.to_string()),
                _ => None,
            })
            .collect();
        assert_eq!(stripped, vec!["mul(mul(u, v), w) = mul(u, mul(v, w))", "mul(e, v) = a(v)", "mul(v, e) = a(v)"]);
        for step in &out.audit {
            if let AuditStep::Stripped { index, before, after, forward, backward } = step {
                let j = check_proof(&sf.result, forward).unwrap();
                assert_eq!(&j.equation(), after);
                let mut replaced = sf.result.clone();
                replaced.equations[*index] = after.clone();
                let j = check_proof(&replaced, backward).unwrap();
                assert_eq!(&j.equation(), before);
            }
        }
    }

    #[test]
    fn a_free_output_for_list() {
        let sf = semifree_theory(&builtin::monoid());
        let out = simplify_presentation(&sf, &SimplifyBudget::default());
        assert!(!out.theory.signature.contains("a"));
        assert!(out.audit.iter().any(|s| matches!(s, AuditStep::Eliminated { .. })));
    }

    #[test]
    fn inequivalent_idempotent_vs_identity() {
        let t1 = builtin::idsemifree();
        let t2 = parse_theory("theory T\nop a : 1\neq a v = v\nend").unwrap();
        let verdict = presentations_equivalent(&t1, &t2, &BTreeMap::new(), &Budget::default(), 2).unwrap();
        match verdict {
            EquivalenceVerdict::Inequivalent { direction, countermodel, .. } => {
                assert_eq!(direction, Direction::Forward);
                assert_eq!(countermodel.algebra.carrier_size, 2);
                assert_eq!(countermodel.algebra.table("a").unwrap(), &[0, 0]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn self_equivalent() {
        let th = builtin::multiset();
        let verdict = presentations_equivalent(&th, &th, &BTreeMap::new(), &Budget::default(), 2).unwrap();
        assert!(verdict.is_equivalent());
    }

    #[test]
    fn signature_mismatch() {
        assert!(presentations_equivalent(
            &builtin::monoid(),
            &builtin::identity(),
            &BTreeMap::new(),
            &Budget::default(),
            2
        )
        .is_err());
    }

    #[test]
    fn small_terms_order() {
        let sig = builtin::monoid().signature;
        let ts = small_terms(&sig, &"a".into(), &["v".into()], 3);
        let shown: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, vec!["v", "e", "mul(v, v)", "mul(v, e)", "mul(e, v)", "mul(e, e)"]);
    }

    #[test]
    fn match_term_binds_consistently() {
        let sig = builtin::monoid().signature;
        let p = crate::dsl::parse_term("mul(x, x)", &sig).unwrap();
        assert!(match_term(&p, &crate::dsl::parse_term("mul(e, e)", &sig).unwrap()).is_some());
        assert!(match_term(&p, &crate::dsl::parse_term("mul(e, y)", &sig).unwrap()).is_none());
    }
}
