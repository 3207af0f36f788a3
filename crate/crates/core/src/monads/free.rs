//! Bounded free algebras `T_{Σ,E}(X)` for arbitrary theories.
//!
//! All terms over `X` up to the size bound are seeded into an e-graph and
//! closed under the equations, with instances restricted to the same bound.
//! This under-approximates the true quotient: two classes may denote equal
//! terms whose identification needs a detour through larger terms.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::proof::{Budget, EGraph};
use crate::semifree::small_terms;
use crate::term::{Name, Substitution, Term, Theory};

pub struct FreeStructure {
    pub theory: String,
    pub generators: Vec<Name>,
    pub bound: usize,
    /// Whether closure reached a fixpoint within the node budget.
    pub saturated: bool,
    /// Smallest representative of each class, in size-then-canonical order.
    pub classes: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl FreeStructure {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class of a term inside the bounded universe.
    pub fn class_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn eta(&self, x: &Name) -> Option<usize> {
        self.class_of(&Term::Var(x.clone()))
    }

    /// `⟦op⟧` on classes; `None` when the result leaves the bound.
    pub fn apply_op(&self, op: &Name, args: &[usize]) -> Option<usize> {
        self.class_of(&Term::App(op.clone(), args.iter().map(|&c| self.classes[c].clone()).collect()))
    }

    /// Flattens a term whose variables stand for classes.
    pub fn mu(&self, outer: &Term, inner: &BTreeMap<Name, usize>) -> Option<usize> {
        let mut f = Substitution::new();
        for v in outer.variables() {
            f.insert(v.clone(), self.classes[*inner.get(&v)?].clone());
        }
        self.class_of(&f.apply(outer))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theory": self.theory,
            "generators": self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "bound": self.bound,
            "saturated": self.saturated,
            "under_approximation": true,
            "class_count": self.classes.len(),
            "classes": self.classes.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn free_algebra(th: &Theory, generators: &[Name], bound: usize) -> FreeStructure {
    let universe = small_terms(&th.signature, &Name::new(""), generators, bound);
    let mut g = EGraph::new(th);
    for t in &universe {
        g.add(t);
    }
    let budget = Budget { max_term_size: bound, max_nodes: 200_000, max_rounds: 64 };
    let (_, saturated) = g.saturate(th, &budget, &|_| false);
    let mut reps: BTreeMap<usize, Term> = BTreeMap::new();
    for t in &universe {
        let class = g.find(g.lookup(t).expect("seeded"));
        reps.entry(class).or_insert_with(|| g.representative(class).clone());
    }
    let mut classes: Vec<Term> = reps.values().cloned().collect();
    classes.sort_by(crate::term::size_then_canonical);
    let position: HashMap<Term, usize> = classes.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let index = universe
        .iter()
        .map(|t| {
            let rep = g.representative(g.lookup(t).expect("seeded"));
            (t.clone(), position[rep])
        })
        .collect();
    FreeStructure {
        theory: th.name.clone(),
        generators: generators.to_vec(),
        bound,
        saturated,
        classes,
        index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::term::Signature;

    #[test]
    fn idempotent_unary() {
        let fs = free_algebra(&builtin::idsemifree(), &["x".into()], 4);
        assert_eq!(fs.classes.len(), 2);
        let ax = Term::unary("a", Term::var("x"));
        let aaax = Term::unary("a", Term::unary("a", ax.clone()));
        assert_eq!(fs.class_of(&aaax), fs.class_of(&ax));
        assert_eq!(fs.apply_op(&"a".into(), &[fs.class_of(&ax).unwrap()]), fs.class_of(&ax));
    }

    #[test]
    fn empty_theory() {
        let th = Theory::new("Empty", Signature::new(), Vec::new());
        let fs = free_algebra(&th, &["x".into()], 3);
        assert_eq!(fs.classes, vec![Term::var("x")]);
    }
}
