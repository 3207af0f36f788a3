//! Proof search, proof lifting and the simplification audit trail.

mod common;

use proptest::prelude::*;

use semifree_core::builtin::Builtin;
use semifree_core::monads::{evaluate_semifree_term, BuiltinMonad};
use semifree_core::proof::{check_proof, lift_proof, prove_bounded, Budget, CheckErrorKind, ProofTree};
use std::collections::BTreeMap;

use semifree_core::models::enumerate_models_capped;
use semifree_core::semifree::{
    iterate_semifree, presentations_equivalent, semifree_theory, simplify_presentation, AuditStep, SimplifyBudget,
};
use semifree_core::{Equation, Name, OpSymbol, Substitution, Term, Theory};

use common::{proof_corpus, random_term, rng};

fn all_theories() -> Vec<Theory> {
    Builtin::all_monadic().into_iter().chain([Builtin::IdSemifree]).map(|b| b.theory()).collect()
}

#[test]
fn corrupted_proofs_are_rejected() {
    let th = Builtin::List.theory();
    let err = check_proof(&th, &ProofTree::Axiom(9)).unwrap_err();
    assert!(matches!(err.kind, CheckErrorKind::AxiomOutOfRange { .. }));
    let bad = ProofTree::trans(ProofTree::Axiom(0), ProofTree::Axiom(1));
    let err = check_proof(&th, &bad).unwrap_err();
    assert!(matches!(err.kind, CheckErrorKind::MidpointMismatch { .. }));
    let mul = th.signature.get("mul").unwrap().clone();
    let err = check_proof(&th, &ProofTree::Congruence(mul, vec![ProofTree::Axiom(0)])).unwrap_err();
    assert!(matches!(err.kind, CheckErrorKind::CongruenceArity { .. }));
}

#[test]
fn search_finds_corpus_equations_and_proofs_check() {
    for th in all_theories() {
        for p in proof_corpus(&th, 10, 11) {
            let j = check_proof(&th, &p).unwrap();
            if let Ok(q) = prove_bounded(&th, &j.lhs, &j.rhs, &Budget::new(10)) {
                assert!(check_proof(&th, &q).unwrap().proves(&j.lhs, &j.rhs), "{}: {}", th.name, j);
            }
        }
    }
}

#[test]
fn simplification_audit_replays() {
    for b in Builtin::all_monadic() {
        let sf = semifree_theory(&b.theory());
        let out = simplify_presentation(&sf, &SimplifyBudget::default());
        let mut current = sf.result.clone();
        for step in &out.audit {
            match step {
                AuditStep::Stripped { index, before, after, forward, backward } => {
                    assert_eq!(check_proof(&current, forward).unwrap().equation(), *after);
                    current.equations[*index] = after.clone();
                    assert_eq!(check_proof(&current, backward).unwrap().equation(), *before);
                }
                AuditStep::Eliminated { symbol, param, definiens, proof } => {
                    let goal = Term::unary(symbol.clone(), Term::Var(param.clone()));
                    assert!(check_proof(&current, proof).unwrap().proves(&goal, definiens));
                }
                AuditStep::Dropped { equation, remaining, proof } => {
                    let rest = current.with_equations(remaining.clone());
                    let j = check_proof(&rest, proof).unwrap();
                    assert!(j.proves(&equation.lhs, &equation.rhs) || j.proves(&equation.rhs, &equation.lhs));
                }
                AuditStep::Kept { .. } | AuditStep::Rewritten { .. } => {}
            }
        }
        // Only theories with a definable `a` lose it.
        let definable = matches!(b, Builtin::List | Builtin::Multiset | Builtin::FiniteSet | Builtin::State(_));
        assert_eq!(out.theory.signature.contains("a"), !definable, "{b:?}");
    }
}

/// The simplified presentation, with `a` defined back in when it was
/// eliminated, is equivalent to the raw one and has as many models.
#[test]
fn simplification_preserves_the_theory() {
    for b in Builtin::all_monadic() {
        let sf = semifree_theory(&b.theory());
        let out = simplify_presentation(&sf, &SimplifyBudget::default());
        let mut restored = out.theory.clone();
        for step in &out.audit {
            if let AuditStep::Eliminated { symbol, param, definiens, .. } = step {
                restored.signature.push(OpSymbol::new(symbol.clone(), 1)).unwrap();
                restored.equations.push(Equation::new(Term::unary(symbol.clone(), Term::Var(param.clone())), definiens.clone()));
            }
        }
        // Some derivations from the raw side pass through terms of size 15.
        let verdict = [10, 16]
            .into_iter()
            .map(|k| presentations_equivalent(&sf.result, &restored, &BTreeMap::new(), &Budget::new(k), 2).unwrap())
            .find(|v| v.is_equivalent())
            .unwrap_or_else(|| panic!("{b:?} not shown equivalent"));
        assert!(verdict.is_equivalent());
        for m in 1..=3 {
            let raw = enumerate_models_capped(&sf.result, m, u128::MAX).unwrap().len();
            let simple = enumerate_models_capped(&out.theory, m, u128::MAX).unwrap().len();
            assert_eq!(raw, simple, "{b:?} on {m}");
        }
    }
}

#[test]
fn iteration_names_symbols_in_order() {
    let (th, audits) = iterate_semifree(&Builtin::Identity.theory(), 3, &SimplifyBudget::default());
    assert_eq!(th.name, "Identity_s3");
    assert_eq!(audits.len(), 3);
    let names: Vec<&str> = th.signature.symbols().iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names.len(), 3);
    for n in ["a", "b", "c"] {
        assert!(names.contains(&n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lifted_corpus_checks(seed in any::<u64>()) {
        for th in all_theories() {
            let sf = semifree_theory(&th);
            for p in proof_corpus(&th, 4, seed) {
                let j = check_proof(&th, &p).unwrap();
                let q = lift_proof(&sf, &p).unwrap();
                let jq = check_proof(&sf.result, &q).unwrap();
                prop_assert!(jq.proves(&j.lhs.wrap_vars(sf.a()), &j.rhs.wrap_vars(sf.a())));
            }
        }
    }

    /// Every equation of the raw presentation holds in `X + MX`.
    #[test]
    fn semifree_equations_hold_in_the_semantics(seed in any::<u64>()) {
        let mut r = rng(seed);
        for b in Builtin::all_monadic() {
            let m = BuiltinMonad::new(b.monad().unwrap()).unwrap();
            let sf = semifree_theory(&b.theory());
            let vars = [Name::new("x"), Name::new("y")];
            for eq in &sf.result.equations {
                let mut s = Substitution::new();
                for v in eq.variables() {
                    s.insert(v, random_term(&mut r, &sf.result.signature, &vars, 2));
                }
                let a = sf.a().as_str();
                let lhs = evaluate_semifree_term(&m, a, &s.apply(&eq.lhs)).unwrap();
                let rhs = evaluate_semifree_term(&m, a, &s.apply(&eq.rhs)).unwrap();
                prop_assert_eq!(lhs, rhs, "{} under {}", eq, s);
            }
        }
    }
}
