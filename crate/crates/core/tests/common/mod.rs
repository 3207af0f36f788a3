//! Shared fixtures: golden presentations and a random proof generator.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use semifree_core::dsl::parse_theory_named;
use semifree_core::proof::{check_proof, ProofTree};
use semifree_core::semifree::match_term;
use semifree_core::{Name, Signature, Substitution, Term, Theory};

pub fn golden(name: &str) -> Theory {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_theory_named(&text, path).expect("golden file parses")
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random term of depth at most `depth`; leaves are variables or constants.
pub fn random_term(rng: &mut StdRng, sig: &Signature, vars: &[Name], depth: usize) -> Term {
    let ops = sig.symbols();
    let constants: Vec<_> = ops.iter().filter(|o| o.arity == 0).collect();
    let compound: Vec<_> = ops.iter().filter(|o| o.arity > 0).collect();
    if depth == 0 || compound.is_empty() || rng.random_bool(0.35) {
        let k = rng.random_range(0..vars.len() + constants.len());
        return match k.checked_sub(vars.len()) {
            None => Term::Var(vars[k].clone()),
            Some(c) => Term::constant(constants[c].name.clone()),
        };
    }
    let op = compound[rng.random_range(0..compound.len())];
    let args = (0..op.arity).map(|_| random_term(rng, sig, vars, depth - 1)).collect();
    Term::App(op.name.clone(), args)
}

fn positions(t: &Term, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    for (i, a) in t.args().iter().enumerate() {
        prefix.push(i);
        positions(a, prefix, out);
        prefix.pop();
    }
}

/// Lifts a proof of `t|path = s` to a proof of `t = t[s]path` by congruence.
fn in_context(th: &Theory, t: &Term, path: &[usize], inner: ProofTree) -> ProofTree {
    let Some((&i, rest)) = path.split_first() else { return inner };
    let Term::App(op, args) = t else { unreachable!("path into a variable") };
    let sym = th.signature.get(op.as_str()).expect("declared").clone();
    let premises = args
        .iter()
        .enumerate()
        .map(|(k, a)| if k == i { in_context(th, a, rest, inner.clone()) } else { ProofTree::Reflexivity(a.clone()) })
        .collect();
    ProofTree::Congruence(sym, premises)
}

/// One rewrite step from `t`, by some axiom in some direction at some position.
fn rewrite_step(rng: &mut StdRng, th: &Theory, t: &Term, vars: &[Name]) -> Option<(ProofTree, Term)> {
    let mut spots = Vec::new();
    positions(t, &mut Vec::new(), &mut spots);
    let mut options = Vec::new();
    for path in &spots {
        let sub = t.at_path(path).expect("valid path");
        for (i, eq) in th.equations.iter().enumerate() {
            for flip in [false, true] {
                let (from, _) = if flip { (&eq.rhs, &eq.lhs) } else { (&eq.lhs, &eq.rhs) };
                if let Some(s) = match_term(from, sub) {
                    options.push((path.clone(), i, flip, s));
                }
            }
        }
    }
    if options.is_empty() {
        return None;
    }
    let (path, i, flip, mut s) = options.swap_remove(rng.random_range(0..options.len()));
    let eq = &th.equations[i];
    for v in eq.variables() {
        if s.get(v.as_str()).is_none() {
            s.insert(v.clone(), random_term(rng, &th.signature, vars, 1));
        }
    }
    let base = ProofTree::subst(ProofTree::Axiom(i), s);
    let step = if flip { ProofTree::sym(base) } else { base };
    let step = in_context(th, t, &path, step);
    let to = check_proof(th, &step).expect("generated step checks").rhs;
    Some((step, to))
}

/// A rewrite chain of up to `steps` steps from a random term.
fn chain(rng: &mut StdRng, th: &Theory, vars: &[Name], steps: usize) -> ProofTree {
    let mut t = random_term(rng, &th.signature, vars, 3);
    let mut proofs = vec![ProofTree::Reflexivity(t.clone())];
    for _ in 0..steps {
        match rewrite_step(rng, th, &t, vars) {
            Some((p, to)) => {
                proofs.push(p);
                t = to;
            }
            None => break,
        }
    }
    ProofTree::chain(proofs.clone()).unwrap_or_else(|| proofs.swap_remove(0))
}

fn random_substitution(rng: &mut StdRng, th: &Theory, vars: &[Name], over: &[Name]) -> Substitution {
    let mut s = Substitution::new();
    for v in over {
        s.insert(v.clone(), random_term(rng, &th.signature, vars, 2));
    }
    s
}

/// `n` valid proofs over `th`, mixing every rule; at least a quarter of
/// them contain a substitution step.
pub fn proof_corpus(th: &Theory, n: usize, seed: u64) -> Vec<ProofTree> {
    let mut rng = rng(seed);
    let vars: Vec<Name> = ["x", "y", "z"].into_iter().map(Name::new).filter(|v| !th.signature.contains(v.as_str())).collect();
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < n {
        let p = match k % 6 {
            // A bare axiom instance, or a substituted reflexivity when there are none.
            0 => match th.equations.len() {
                0 => {
                    let x = ProofTree::Reflexivity(Term::Var(vars[0].clone()));
                    let s = random_substitution(&mut rng, th, &vars, &vars[..1]);
                    ProofTree::SubstitutionStep(Box::new(x), s)
                }
                len => {
                    let i = rng.random_range(0..len);
                    let over = th.equations[i].variables();
                    let s = random_substitution(&mut rng, th, &vars, &over);
                    ProofTree::SubstitutionStep(Box::new(ProofTree::Axiom(i)), s)
                }
            },
            1 => chain(&mut rng, th, &vars, 4),
            2 => ProofTree::Symmetry(Box::new(chain(&mut rng, th, &vars, 3))),
            // Substitution over a compound proof.
            3 => {
                let p = chain(&mut rng, th, &vars, 3);
                let s = random_substitution(&mut rng, th, &vars, &vars);
                ProofTree::SubstitutionStep(Box::new(p), s)
            }
            4 => match th.signature.symbols().iter().find(|o| o.arity > 0) {
                Some(op) => ProofTree::Congruence(op.clone(), (0..op.arity).map(|_| chain(&mut rng, th, &vars, 2)).collect()),
                None => chain(&mut rng, th, &vars, 2),
            },
            _ => match th.equations.len() {
                0 => chain(&mut rng, th, &vars, 2),
                len => ProofTree::Axiom(rng.random_range(0..len)),
            },
        };
        k += 1;
        if check_proof(th, &p).is_ok() {
            out.push(p);
        }
    }
    out
}
