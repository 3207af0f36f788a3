//! Constructive proofs over `Eˢ`: the two absorption lemmas and the lifting
//! of base proofs along `v ↦ a v`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{check_proof, CheckError, ProofTree};
use crate::semifree::SemifreeTheory;
use crate::term::{OpSymbol, Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("input proof does not check under the base theory: {0}")]
    Check(#[from] CheckError),
}

/// `Eˢ ⊢ a(t) = t` for `t` of depth at least 1.
///
/// Front absorption is schematic in the arguments, so one instance at the
/// root suffices; when the root is `a` itself idempotency plays that role.
pub fn proof_a_front(sf: &SemifreeTheory, t: &Term) -> Result<ProofTree, LiftError> {
    let Term::App(op, args) = t else {
        return Err(LiftError::Precondition(format!("`{t}` has depth 0")));
    };
    let (index, vars) = if *op == sf.a_symbol.name {
        let eq = &sf.result.equations[sf.idempotency];
        (sf.idempotency, eq.rhs.variables())
    } else {
        let index = *sf
            .front
            .get(op)
            .ok_or_else(|| LiftError::Precondition(format!("`{op}` is not in the base signature")))?;
        // The axiom's right side is `op(v1, .., vn)`; its variables are in
        // argument order.
        (index, sf.result.equations[index].rhs.variables())
    };
    let f: BTreeMap<_, _> = vars.into_iter().zip(args.iter().cloned()).collect();
    Ok(ProofTree::subst(ProofTree::Axiom(index), Substitution::from_map(f)))
}

/// `Eˢ ⊢ t[a v / v] = t` for a base term `t` of depth at least 1.
///
/// By induction on `t = op(t1, .., tn)`: each argument is brought to the
/// form `a(s_i)` (variables already are; complex arguments by induction and
/// front absorption), then one inside-absorption instance removes the `a`s.
pub fn proof_a_inside(sf: &SemifreeTheory, t: &Term) -> Result<ProofTree, LiftError> {
    let Term::App(op, args) = t else {
        return Err(LiftError::Precondition(format!("`{t}` has depth 0")));
    };
    if args.is_empty() {
        return Ok(ProofTree::Reflexivity(t.clone()));
    }
    let index = *sf
        .inside
        .get(op)
        .ok_or_else(|| LiftError::Precondition(format!("`{op}` is not a base operation of positive arity")))?;
    let a = &sf.a_symbol.name;
    let mut premises = Vec::with_capacity(args.len());
    let mut inner = Vec::with_capacity(args.len());
    for arg in args {
        if arg.is_var() {
            premises.push(ProofTree::Reflexivity(Term::unary(a.clone(), arg.clone())));
        } else {
            // arg[a] = arg = a(arg)
            let down = proof_a_inside(sf, arg)?;
            let up = ProofTree::sym(proof_a_front(sf, arg)?);
            premises.push(ProofTree::chain([down, up]).expect("nonempty"));
        }
        inner.push(arg.clone());
    }
    let vars = sf.result.equations[index].rhs.variables();
    let absorb = ProofTree::subst(
        ProofTree::Axiom(index),
        Substitution::from_map(vars.into_iter().zip(inner).collect()),
    );
    if premises.iter().all(|p| matches!(p, ProofTree::Reflexivity(_))) {
        return Ok(absorb);
    }
    let cong = ProofTree::Congruence(OpSymbol::new(op.clone(), args.len()), premises);
    Ok(ProofTree::trans(cong, absorb))
}

/// Transforms a base proof of `t = s` into an `Eˢ` proof of
/// `t[a v / v] = s[a v / v]`, rule for rule.
pub fn lift_proof(sf: &SemifreeTheory, p: &ProofTree) -> Result<ProofTree, LiftError> {
    check_proof(&sf.base, p)?;
    lift(sf, p)
}

fn lift(sf: &SemifreeTheory, p: &ProofTree) -> Result<ProofTree, LiftError> {
    let a = &sf.a_symbol.name;
    Ok(match p {
        ProofTree::Axiom(i) => ProofTree::Axiom(sf.lifted[*i]),
        ProofTree::Reflexivity(t) => ProofTree::Reflexivity(t.wrap_vars(a)),
        ProofTree::Symmetry(q) => ProofTree::Symmetry(Box::new(lift(sf, q)?)),
        ProofTree::Transitivity(x, y) => ProofTree::trans(lift(sf, x)?, lift(sf, y)?),
        ProofTree::Congruence(op, ps) => {
            ProofTree::Congruence(op.clone(), ps.iter().map(|q| lift(sf, q)).collect::<Result<_, _>>()?)
        }
        ProofTree::SubstitutionStep(q, f) => {
            let j = check_proof(&sf.base, q)?;
            // g(v) = f(v)[a w / w], on every variable of the premise.
            let mut g = Substitution::new();
            for v in j.equation().variables() {
                g.insert(v.clone(), f.image(&v).wrap_vars(a));
            }
            let lhs = bridge(sf, &j.lhs, f, &g)?;
            let rhs = bridge(sf, &j.rhs, f, &g)?;
            let middle = ProofTree::subst(lift(sf, q)?, g);
            ProofTree::trans(ProofTree::trans(lhs, middle), ProofTree::sym(rhs))
        }
    })
}

/// `Eˢ ⊢ t'[g] = t'[a v / v][g]`, by the case split on the shape of `t'`.
fn bridge(sf: &SemifreeTheory, t: &Term, f: &Substitution, g: &Substitution) -> Result<ProofTree, LiftError> {
    match t {
        Term::Var(v) => {
            let image = g.image(v);
            if f.image(v).is_var() {
                // g v = a w, and a w = a a w is an idempotency instance.
                let Term::App(_, inner) = &image else { unreachable!("wrapped variable") };
                let idem = &sf.result.equations[sf.idempotency];
                let var = idem.rhs.variables()[0].clone();
                Ok(ProofTree::sym(ProofTree::subst(
                    ProofTree::Axiom(sf.idempotency),
                    Substitution::single(var, inner[0].clone()),
                )))
            } else {
                Ok(ProofTree::sym(proof_a_front(sf, &image)?))
            }
        }
        Term::App(..) => Ok(ProofTree::subst(ProofTree::sym(proof_a_inside(sf, t)?), g.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::dsl::parse_term;
    use crate::semifree::semifree_theory;

    fn checks_to(sf: &SemifreeTheory, p: &ProofTree, lhs: &Term, rhs: &Term) {
        let j = check_proof(&sf.result, p).unwrap();
        assert!(j.proves(lhs, rhs), "got {j}");
    }

    #[test]
    fn front_examples() {
        let sf = semifree_theory(&builtin::monoid());
        let t = |s: &str| parse_term(s, &sf.result.signature).unwrap();
        assert_eq!(proof_a_front(&sf, &t("e")).unwrap(), ProofTree::Axiom(sf.front["e"]));
        assert_eq!(proof_a_front(&sf, &t("mul(u, v)")).unwrap(), ProofTree::Axiom(sf.front["mul"]));
        let uvw = t("mul(mul(u, v), w)");
        checks_to(&sf, &proof_a_front(&sf, &uvw).unwrap(), &t("a(mul(mul(u, v), w))"), &uvw);
        assert!(proof_a_front(&sf, &t("v")).is_err());
    }

    #[test]
    fn inside_examples() {
        let sf = semifree_theory(&builtin::monoid());
        let t = |s: &str| parse_term(s, &sf.result.signature).unwrap();
        assert_eq!(proof_a_inside(&sf, &t("mul(u, v)")).unwrap(), ProofTree::Axiom(sf.inside["mul"]));
        let p = proof_a_inside(&sf, &t("mul(u, mul(v, w))")).unwrap();
        checks_to(&sf, &p, &t("mul(a u, mul(a v, a w))"), &t("mul(u, mul(v, w))"));
        assert_eq!(proof_a_inside(&sf, &t("e")).unwrap(), ProofTree::Reflexivity(t("e")));
        let p = proof_a_inside(&sf, &t("mul(e, mul(x, e))")).unwrap();
        checks_to(&sf, &p, &t("mul(e, mul(a x, e))"), &t("mul(e, mul(x, e))"));
    }

    #[test]
    fn lift_examples() {
        let th = builtin::monoid();
        let sf = semifree_theory(&th);
        let t = |s: &str| parse_term(s, &sf.result.signature).unwrap();
        assert_eq!(lift_proof(&sf, &ProofTree::Axiom(1)).unwrap(), ProofTree::Axiom(sf.lifted[1]));
        assert_eq!(
            lift_proof(&sf, &ProofTree::Reflexivity(t("mul(x, e)"))).unwrap(),
            ProofTree::Reflexivity(t("mul(a x, e)"))
        );
        let p = ProofTree::trans(
            ProofTree::subst(ProofTree::Axiom(1), Substitution::single("v".into(), t("mul(e, x)"))),
            ProofTree::subst(ProofTree::Axiom(1), Substitution::single("v".into(), t("x"))),
        );
        let lifted = lift_proof(&sf, &p).unwrap();
        checks_to(&sf, &lifted, &t("mul(e, mul(e, a x))"), &t("a x"));
    }

    #[test]
    fn lift_variable_to_variable_axiom() {
        // v = w style axioms lift to a v = a w.
        let th = crate::term::Theory::new(
            "Trivial",
            crate::term::Signature::new(),
            vec![crate::term::Equation::new(Term::var("v"), Term::var("w"))],
        );
        let sf = semifree_theory(&th);
        let p = ProofTree::subst(
            ProofTree::Axiom(0),
            Substitution::from_map([("v".into(), Term::var("x")), ("w".into(), Term::var("y"))].into()),
        );
        let lifted = lift_proof(&sf, &p).unwrap();
        checks_to(&sf, &lifted, &Term::unary("a", Term::var("x")), &Term::unary("a", Term::var("y")));
    }
}
