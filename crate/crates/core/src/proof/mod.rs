//! Equational logic: proof trees over the six inference rules, a checker,
//! bounded proof search, and the constructive builders for the semifree
//! presentation (absorption lemmas and proof lifting).

mod lift;
mod search;

pub use lift::{lift_proof, proof_a_front, proof_a_inside, LiftError};
pub use search::{prove_bounded, Budget, EGraph, SearchExhausted};

use std::fmt;

use thiserror::Error;

use crate::term::{Equation, OpSymbol, Substitution, Term, TermError, Theory};

/// A derivation. Axiom leaves refer to equations by index, so a tree is only
/// meaningful together with the theory it was built against.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ProofTree {
    Axiom(usize),
    Reflexivity(Term),
    Symmetry(Box<ProofTree>),
    Transitivity(Box<ProofTree>, Box<ProofTree>),
    Congruence(OpSymbol, Vec<ProofTree>),
    SubstitutionStep(Box<ProofTree>, Substitution),
}

impl ProofTree {
    pub fn sym(p: ProofTree) -> ProofTree {
        match p {
            ProofTree::Symmetry(q) => *q,
            ProofTree::Reflexivity(t) => ProofTree::Reflexivity(t),
            p => ProofTree::Symmetry(Box::new(p)),
        }
    }

    pub fn trans(p: ProofTree, q: ProofTree) -> ProofTree {
        ProofTree::Transitivity(Box::new(p), Box::new(q))
    }

    /// Substitution step, omitted when `f` fixes every variable.
    pub fn subst(p: ProofTree, f: Substitution) -> ProofTree {
        if f.is_identity() {
            p
        } else {
            ProofTree::SubstitutionStep(Box::new(p), f)
        }
    }

    /// Chains proofs with transitivity, skipping reflexive links. `None` on an
    /// empty chain.
    pub fn chain(proofs: impl IntoIterator<Item = ProofTree>) -> Option<ProofTree> {
        proofs
            .into_iter()
            .filter(|p| !matches!(p, ProofTree::Reflexivity(_)))
            .reduce(ProofTree::trans)
    }

    pub fn children(&self) -> Vec<&ProofTree> {
        match self {
            ProofTree::Axiom(_) | ProofTree::Reflexivity(_) => vec![],
            ProofTree::Symmetry(p) | ProofTree::SubstitutionStep(p, _) => vec![p],
            ProofTree::Transitivity(a, b) => vec![a, b],
            ProofTree::Congruence(_, ps) => ps.iter().collect(),
        }
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn count_substitutions(&self) -> usize {
        let own = usize::from(matches!(self, ProofTree::SubstitutionStep(..)));
        own + self.children().into_iter().map(ProofTree::count_substitutions).sum::<usize>()
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            ProofTree::Axiom(_) => "axiom",
            ProofTree::Reflexivity(_) => "reflexivity",
            ProofTree::Symmetry(_) => "symmetry",
            ProofTree::Transitivity(..) => "transitivity",
            ProofTree::Congruence(..) => "congruence",
            ProofTree::SubstitutionStep(..) => "substitution",
        }
    }
}

impl fmt::Debug for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofTree::Axiom(i) => write!(f, "Axiom({i})"),
            ProofTree::Reflexivity(t) => write!(f, "Refl({t})"),
            ProofTree::Symmetry(p) => write!(f, "Sym({p:?})"),
            ProofTree::Transitivity(a, b) => write!(f, "Trans({a:?}, {b:?})"),
            ProofTree::Congruence(op, ps) => write!(f, "Cong({}, {ps:?})", op.name),
            ProofTree::SubstitutionStep(p, s) => write!(f, "Subst({p:?}, {s})"),
        }
    }
}

/// What a proof tree establishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub theory: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl Judgment {
    pub fn equation(&self) -> Equation {
        Equation::new(self.lhs.clone(), self.rhs.clone())
    }

    pub fn proves(&self, lhs: &Term, rhs: &Term) -> bool {
        &self.lhs == lhs && &self.rhs == rhs
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊢ {} = {}", self.theory, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error("axiom index {index} out of range ({len} equations)")]
    AxiomOutOfRange { index: usize, len: usize },
    #[error("transitivity midpoint mismatch: `{left}` vs `{right}`")]
    MidpointMismatch { left: Term, right: Term },
    #[error("congruence on `{op}` expects {expected} premise(s), found {found}")]
    CongruenceArity { op: String, expected: usize, found: usize },
    #[error(transparent)]
    Malformed(#[from] TermError),
}

/// A rule violation and where it sits: child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at proof path {path:?}: {kind}")]
pub struct CheckError {
    pub path: Vec<usize>,
    pub kind: CheckErrorKind,
}

/// Computes the judgment proved by `p` under `th`, or the first violation in
/// depth-first order.
pub fn check_proof(th: &Theory, p: &ProofTree) -> Result<Judgment, CheckError> {
    let mut path = Vec::new();
    let (lhs, rhs) = check_at(th, p, &mut path)?;
    Ok(Judgment { theory: th.name.clone(), lhs, rhs })
}

fn check_at(th: &Theory, p: &ProofTree, path: &mut Vec<usize>) -> Result<(Term, Term), CheckError> {
    let fail = |path: &Vec<usize>, kind: CheckErrorKind| CheckError { path: path.clone(), kind };
    let child = |i: usize, q: &ProofTree, path: &mut Vec<usize>| {
        path.push(i);
        let r = check_at(th, q, path);
        path.pop();
        r
    };
    match p {
        ProofTree::Axiom(i) => th
            .equations
            .get(*i)
            .map(|e| (e.lhs.clone(), e.rhs.clone()))
            .ok_or_else(|| fail(path, CheckErrorKind::AxiomOutOfRange { index: *i, len: th.equations.len() })),
        ProofTree::Reflexivity(t) => {
            th.signature.check_term(t).map_err(|e| fail(path, e.into()))?;
            Ok((t.clone(), t.clone()))
        }
        ProofTree::Symmetry(q) => {
            let (l, r) = child(0, q, path)?;
            Ok((r, l))
        }
        ProofTree::Transitivity(a, b) => {
            let (l1, r1) = child(0, a, path)?;
            let (l2, r2) = child(1, b, path)?;
            if r1 != l2 {
                return Err(fail(path, CheckErrorKind::MidpointMismatch { left: r1, right: l2 }));
            }
            Ok((l1, r2))
        }
        ProofTree::Congruence(op, ps) => {
            let expected = th
                .signature
                .arity(op.name.as_str())
                .ok_or_else(|| fail(path, TermError::UnknownSymbol(op.name.clone()).into()))?;
            if ps.len() != expected || op.arity != expected {
                return Err(fail(
                    path,
                    CheckErrorKind::CongruenceArity { op: op.name.to_string(), expected, found: ps.len() },
                ));
            }
            let mut ls = Vec::with_capacity(ps.len());
            let mut rs = Vec::with_capacity(ps.len());
            for (i, q) in ps.iter().enumerate() {
                let (l, r) = child(i, q, path)?;
                ls.push(l);
                rs.push(r);
            }
            Ok((Term::App(op.name.clone(), ls), Term::App(op.name.clone(), rs)))
        }
        ProofTree::SubstitutionStep(q, f) => {
            let (l, r) = child(0, q, path)?;
            for (_, img) in f.iter() {
                th.signature.check_term(img).map_err(|e| fail(path, e.into()))?;
            }
            Ok((f.apply(&l), f.apply(&r)))
        }
    }
}
