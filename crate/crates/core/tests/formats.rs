//! Text and JSON formats against the rest of the library.

mod common;

use proptest::prelude::*;

use semifree_core::builtin::Builtin;
use semifree_core::dsl::{
    parse_equation, parse_term, parse_theory, print_theory, proof_from_json, proof_to_json, ParseErrorKind, Report,
    FORMAT,
};
use semifree_core::proof::check_proof;
use semifree_core::term::validate_theory;
use semifree_core::Name;

use common::{golden, proof_corpus, random_term, rng};

#[test]
fn golden_files_parse_and_validate() {
    for file in [
        "exception_k_raw.theory",
        "list_s.theory",
        "multiset_s.theory",
        "finiteset_s.theory",
        "state2_s.theory",
        "idempotents2.theory",
        "idempotents3.theory",
    ] {
        let th = golden(file);
        assert!(validate_theory(&th).is_ok(), "{file}");
        assert!(!th.equations.is_empty());
    }
}

#[test]
fn printed_builtins_read_back() {
    for b in Builtin::all_monadic().into_iter().chain([Builtin::IdSemifree, Builtin::State(3)]) {
        let th = b.theory();
        let back = parse_theory(&print_theory(&th)).expect("printer output parses");
        assert_eq!(back, th, "{b:?}");
    }
}

#[test]
fn juxtaposition_and_comments() {
    let th = golden("idempotents2.theory");
    let eq = parse_equation("a b x = a(x) # trailing", &th.signature).unwrap();
    assert_eq!(eq.lhs.to_string(), "a(b(x))");
    assert_eq!(eq.rhs.to_string(), "a(x)");
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_theory("theory T\n  op f : 2\n  eq f(x) = x\nend\n").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::ArityMismatch { .. }), "{err}");
    assert_eq!(err.span.line, 3);
    let err = parse_theory("theory T\n  op f : 1\n  op f : 2\nend\n").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::DuplicateSymbol(_)));
}

#[test]
fn report_envelope() {
    let v = Report::new("models", Some("T"), "enumerated").meta("count", 3).to_json();
    assert_eq!(v["format"], FORMAT);
    for key in ["kind", "theory", "verdict", "items", "metadata"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn corpus_proofs_round_trip_through_json() {
    for b in Builtin::all_monadic() {
        let th = b.theory();
        for p in proof_corpus(&th, 12, 3) {
            let back = proof_from_json(&proof_to_json(&p), &th.signature).expect("reads back");
            assert_eq!(back, p);
            assert_eq!(check_proof(&th, &back), check_proof(&th, &p));
        }
    }
}

proptest! {
    #[test]
    fn terms_print_and_parse(seed in any::<u64>(), depth in 0usize..5) {
        let th = Builtin::State(2).theory();
        let vars = [Name::new("x"), Name::new("y")];
        let t = random_term(&mut rng(seed), &th.signature, &vars, depth);
        prop_assert_eq!(parse_term(&t.to_string(), &th.signature).unwrap(), t);
    }
}
