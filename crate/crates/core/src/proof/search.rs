//! Bounded proof search by congruence closure with a proof forest.
//!
//! Nodes are hash-consed ground terms; goal variables are treated as fresh
//! constants. Each round e-matches every axiom, in both orientations, against
//! the current classes and adds the instance built from the smallest
//! representatives, provided it fits the term-size budget. Every union is
//! recorded as a labelled edge of a proof forest, from which an explanation
//! of any derived equality is rebuilt as a [`ProofTree`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::ProofTree;
use crate::term::{Name, OpSymbol, Substitution, Term, Theory};

/// Limits on the closure universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest term size admitted as an axiom instance.
    pub max_term_size: usize,
    /// Node cap for the e-graph.
    pub max_nodes: usize,
    /// Matching rounds before giving up.
    pub max_rounds: usize,
}

impl Budget {
    pub fn new(max_term_size: usize) -> Self {
        Budget { max_term_size, max_nodes: 60_000, max_rounds: 12 }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(8)
    }
}

/// The "not found" outcome of [`prove_bounded`]. It never means refuted.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("no proof within budget (term size ≤ {}, ≤ {} nodes, ≤ {} rounds; used {nodes} nodes, {rounds} rounds{})",
    .budget.max_term_size, .budget.max_nodes, .budget.max_rounds,
    if *.saturated { ", saturated" } else { "" })]
pub struct SearchExhausted {
    pub budget: Budget,
    pub nodes: usize,
    pub rounds: usize,
    /// The closure reached a fixpoint: nothing else fits the budget.
    pub saturated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Head {
    Var(usize),
    Op(usize),
}

#[derive(Clone, Debug)]
enum Reason {
    /// `lhs` is the node holding the instance of the axiom's left side.
    Axiom { index: usize, subst: Substitution, lhs: usize },
    Congruence,
}

/// A congruence-closed set of ground terms with explanations.
pub struct EGraph {
    names: Vec<Name>,
    name_ids: HashMap<Name, usize>,
    nodes: Vec<(Head, Vec<usize>)>,
    memo: HashMap<(Head, Vec<usize>), usize>,
    terms: Vec<Term>,
    sizes: Vec<usize>,
    parent: Vec<usize>,
    proof_parent: Vec<Option<(usize, Reason)>>,
    /// Smallest member of each class, valid for roots.
    best: Vec<usize>,
    /// Members of each class, valid for roots.
    members: Vec<Vec<usize>>,
    arities: HashMap<Name, usize>,
}

impl EGraph {
    pub fn new(th: &Theory) -> Self {
        EGraph {
            names: Vec::new(),
            name_ids: HashMap::new(),
            nodes: Vec::new(),
            memo: HashMap::new(),
            terms: Vec::new(),
            sizes: Vec::new(),
            parent: Vec::new(),
            proof_parent: Vec::new(),
            best: Vec::new(),
            members: Vec::new(),
            arities: th.signature.symbols().iter().map(|s| (s.name.clone(), s.arity)).collect(),
        }
    }

    fn intern(&mut self, n: &Name) -> usize {
        if let Some(&i) = self.name_ids.get(n) {
            return i;
        }
        self.names.push(n.clone());
        self.name_ids.insert(n.clone(), self.names.len() - 1);
        self.names.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, mut a: usize) -> usize {
        while self.parent[a] != a {
            a = self.parent[a];
        }
        a
    }

    fn find_compress(&mut self, a: usize) -> usize {
        let root = self.find(a);
        let mut x = a;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn term(&self, node: usize) -> &Term {
        &self.terms[node]
    }

    /// Smallest known member of the class of `node`.
    pub fn representative(&self, node: usize) -> &Term {
        &self.terms[self.best[self.find(node)]]
    }

    pub fn lookup(&self, t: &Term) -> Option<usize> {
        let (head, args) = match t {
            Term::Var(v) => (Head::Var(*self.name_ids.get(v)?), Vec::new()),
            Term::App(op, args) => {
                let args: Option<Vec<usize>> = args.iter().map(|a| self.lookup(a)).collect();
                (Head::Op(*self.name_ids.get(op)?), args?)
            }
        };
        self.memo.get(&(head, args)).copied()
    }

    /// Inserts `t` and all its subterms; returns the node of `t`.
    pub fn add(&mut self, t: &Term) -> usize {
        let (head, args) = match t {
            Term::Var(v) => (Head::Var(self.intern(v)), Vec::new()),
            Term::App(op, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.add(a)).collect();
                (Head::Op(self.intern(op)), args)
            }
        };
        if let Some(&n) = self.memo.get(&(head, args.clone())) {
            return n;
        }
        let id = self.nodes.len();
        self.nodes.push((head, args.clone()));
        self.memo.insert((head, args), id);
        self.terms.push(t.clone());
        self.sizes.push(t.size());
        self.parent.push(id);
        self.proof_parent.push(None);
        self.best.push(id);
        self.members.push(vec![id]);
        id
    }

    fn better(&self, a: usize, b: usize) -> bool {
        (self.sizes[a], &self.terms[a]) < (self.sizes[b], &self.terms[b])
    }

    /// Merges two classes, recording why. Returns false if already equal.
    fn union(&mut self, a: usize, b: usize, reason: Reason) -> bool {
        let (ra, rb) = (self.find_compress(a), self.find_compress(b));
        if ra == rb {
            return false;
        }
        // Proof forest: re-root a's tree at a, then hang a under b.
        let mut prev: Option<(usize, Reason)> = None;
        let mut x = a;
        loop {
            let next = self.proof_parent[x].take();
            self.proof_parent[x] = prev.take();
            match next {
                Some((y, r)) => {
                    prev = Some((x, r));
                    x = y;
                }
                None => break,
            }
        }
        self.proof_parent[a] = Some((b, reason));
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        let moved = std::mem::take(&mut self.members[drop]);
        self.members[keep].extend(moved);
        if self.better(self.best[drop], self.best[keep]) {
            self.best[keep] = self.best[drop];
        }
        true
    }

    /// Restores the congruence invariant. Returns the number of merges.
    fn rebuild(&mut self) -> usize {
        let mut merges = 0;
        loop {
            let mut table: HashMap<(Head, Vec<usize>), usize> = HashMap::new();
            let mut pending = Vec::new();
            for n in 0..self.nodes.len() {
                let (head, args) = &self.nodes[n];
                if args.is_empty() {
                    continue;
                }
                let key = (*head, args.iter().map(|&c| self.find(c)).collect::<Vec<_>>());
                match table.get(&key) {
                    Some(&m) if self.find(m) != self.find(n) => pending.push((m, n)),
                    Some(_) => {}
                    None => {
                        table.insert(key, n);
                    }
                }
            }
            let mut changed = 0;
            for (m, n) in pending {
                if self.union(m, n, Reason::Congruence) {
                    changed += 1;
                }
            }
            if changed == 0 {
                return merges;
            }
            merges += changed;
        }
    }

    pub fn equivalent(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Roots of all classes, ascending.
    pub fn classes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.parent[n] == n).collect()
    }

    /// Runs matching rounds until `stop` holds, the graph saturates or the
    /// budget runs out. Returns `(rounds, saturated)`.
    pub fn saturate(&mut self, th: &Theory, budget: &Budget, stop: &dyn Fn(&EGraph) -> bool) -> (usize, bool) {
        self.rebuild();
        let rules = orientations(th);
        for round in 0..budget.max_rounds {
            if stop(self) {
                return (round, false);
            }
            let mut instances = Vec::new();
            let mut by_head: BTreeMap<Head, Vec<usize>> = BTreeMap::new();
            for (n, (h, _)) in self.nodes.iter().enumerate() {
                by_head.entry(*h).or_default().push(n);
            }
            for rule in &rules {
                for sigma in self.matches(&rule.pattern, &by_head) {
                    let subst = Substitution::from_map(
                        sigma.into_iter().map(|(v, c)| (v, self.representative(c).clone())).collect(),
                    );
                    let eq = &th.equations[rule.index];
                    let (l, r) = (subst.apply(&eq.lhs), subst.apply(&eq.rhs));
                    if l.size() > budget.max_term_size || r.size() > budget.max_term_size {
                        continue;
                    }
                    instances.push((rule.index, subst, l, r));
                }
            }
            let mut changed = false;
            for (index, subst, l, r) in instances {
                if self.nodes.len() >= budget.max_nodes {
                    return (round + 1, false);
                }
                let before = self.nodes.len();
                let ln = self.add(&l);
                let rn = self.add(&r);
                changed |= self.nodes.len() != before;
                changed |= self.union(ln, rn, Reason::Axiom { index, subst, lhs: ln });
            }
            changed |= self.rebuild() > 0;
            if !changed {
                return (round + 1, true);
            }
        }
        (budget.max_rounds, false)
    }

    fn matches(&self, pattern: &Term, by_head: &BTreeMap<Head, Vec<usize>>) -> Vec<BTreeMap<Name, usize>> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let candidates: Vec<usize> = match pattern {
            Term::Var(_) => self.classes(),
            Term::App(op, _) => match self.name_ids.get(op) {
                Some(&id) => by_head.get(&Head::Op(id)).cloned().unwrap_or_default(),
                None => Vec::new(),
            },
        };
        for n in candidates {
            for s in self.match_node(pattern, n, BTreeMap::new()) {
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Matches `pattern` against the specific node `n` (variables bind to
    /// classes; arguments match any member of the argument class).
    fn match_node(&self, pattern: &Term, n: usize, sigma: BTreeMap<Name, usize>) -> Vec<BTreeMap<Name, usize>> {
        match pattern {
            Term::Var(v) => self.bind(v, n, sigma).into_iter().collect(),
            Term::App(op, pargs) => {
                let (head, args) = &self.nodes[n];
                match (head, self.name_ids.get(op)) {
                    (Head::Op(h), Some(id)) if h == id && args.len() == pargs.len() => {}
                    _ => return Vec::new(),
                }
                let mut partial = vec![sigma];
                for (p, &c) in pargs.iter().zip(args) {
                    let mut next = Vec::new();
                    for s in partial {
                        next.extend(self.match_class(p, c, s));
                    }
                    if next.is_empty() {
                        return next;
                    }
                    partial = next;
                }
                partial
            }
        }
    }

    fn match_class(&self, pattern: &Term, c: usize, sigma: BTreeMap<Name, usize>) -> Vec<BTreeMap<Name, usize>> {
        match pattern {
            Term::Var(v) => self.bind(v, c, sigma).into_iter().collect(),
            Term::App(..) => {
                let root = self.find(c);
                let mut out = Vec::new();
                for &m in &self.members[root] {
                    out.extend(self.match_node(pattern, m, sigma.clone()));
                }
                out
            }
        }
    }

    /// Nodes in the class of `node`.
    pub fn class_members(&self, node: usize) -> &[usize] {
        &self.members[self.find(node)]
    }

    fn bind(&self, v: &Name, c: usize, mut sigma: BTreeMap<Name, usize>) -> Option<BTreeMap<Name, usize>> {
        let root = self.find(c);
        match sigma.get(v) {
            Some(&b) if b != root => None,
            Some(_) => Some(sigma),
            None => {
                sigma.insert(v.clone(), root);
                Some(sigma)
            }
        }
    }

    /// A proof of `term(a) = term(b)` from the recorded unions.
    pub fn explain(&self, a: usize, b: usize) -> Option<ProofTree> {
        if !self.equivalent(a, b) {
            return None;
        }
        Some(self.explain_path(a, b))
    }

    fn ancestors(&self, mut x: usize) -> Vec<usize> {
        let mut path = vec![x];
        while let Some((y, _)) = &self.proof_parent[x] {
            x = *y;
            path.push(x);
        }
        path
    }

    fn explain_path(&self, a: usize, b: usize) -> ProofTree {
        if a == b {
            return ProofTree::Reflexivity(self.terms[a].clone());
        }
        let pa = self.ancestors(a);
        let pb = self.ancestors(b);
        let lca = *pa.iter().find(|x| pb.contains(x)).expect("same proof tree");
        let mut steps = Vec::new();
        let mut x = a;
        while x != lca {
            let (y, r) = self.proof_parent[x].as_ref().expect("on path");
            steps.push(self.edge_proof(x, *y, r));
            x = *y;
        }
        let mut back = Vec::new();
        let mut x = b;
        while x != lca {
            let (y, r) = self.proof_parent[x].as_ref().expect("on path");
            back.push(ProofTree::sym(self.edge_proof(x, *y, r)));
            x = *y;
        }
        steps.extend(back.into_iter().rev());
        ProofTree::chain(steps).unwrap_or_else(|| ProofTree::Reflexivity(self.terms[a].clone()))
    }

    /// Proof of `term(x) = term(y)` for a single forest edge.
    fn edge_proof(&self, x: usize, y: usize, r: &Reason) -> ProofTree {
        match r {
            Reason::Axiom { index, subst, lhs } => {
                let p = ProofTree::subst(ProofTree::Axiom(*index), subst.clone());
                if *lhs == x {
                    p
                } else {
                    ProofTree::sym(p)
                }
            }
            Reason::Congruence => {
                let (Head::Op(op), xs) = &self.nodes[x] else { unreachable!("congruence on a variable") };
                let ys = &self.nodes[y].1;
                let name = self.names[*op].clone();
                let arity = self.arities.get(&name).copied().unwrap_or(xs.len());
                let premises = xs.iter().zip(ys).map(|(&p, &q)| self.explain_path(p, q)).collect();
                ProofTree::Congruence(OpSymbol { name, arity }, premises)
            }
        }
    }
}

impl fmt::Debug for EGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EGraph({} nodes, {} classes)", self.nodes.len(), self.classes().len())
    }
}

struct Orientation {
    index: usize,
    pattern: Term,
}

/// Axiom sides usable as match patterns: the other side's variables must be
/// bound by the pattern.
fn orientations(th: &Theory) -> Vec<Orientation> {
    let mut out = Vec::new();
    for (index, eq) in th.equations.iter().enumerate() {
        let lv = eq.lhs.variables();
        let rv = eq.rhs.variables();
        if rv.iter().all(|v| lv.contains(v)) {
            out.push(Orientation { index, pattern: eq.lhs.clone() });
        }
        if lv.iter().all(|v| rv.contains(v)) && eq.lhs != eq.rhs {
            out.push(Orientation { index, pattern: eq.rhs.clone() });
        }
    }
    out
}

/// Searches for a proof of `s = t` under `th` within `budget`. Any returned
/// tree checks to exactly `(s, t)`.
pub fn prove_bounded(th: &Theory, s: &Term, t: &Term, budget: &Budget) -> Result<ProofTree, SearchExhausted> {
    if s == t {
        return Ok(ProofTree::Reflexivity(s.clone()));
    }
    let mut g = EGraph::new(th);
    let sn = g.add(s);
    let tn = g.add(t);
    let (rounds, saturated) = g.saturate(th, budget, &|g| g.equivalent(sn, tn));
    g.explain(sn, tn).ok_or(SearchExhausted { budget: *budget, nodes: g.len(), rounds, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::dsl::parse_term;
    use crate::proof::check_proof;
    use crate::semifree::semifree_theory;

    fn assert_proves(th: &Theory, s: &str, t: &str, budget: Budget) -> ProofTree {
        let s = parse_term(s, &th.signature).unwrap();
        let t = parse_term(t, &th.signature).unwrap();
        let p = prove_bounded(th, &s, &t, &budget).unwrap_or_else(|e| panic!("{s} = {t}: {e}"));
        let j = check_proof(th, &p).unwrap();
        assert!(j.proves(&s, &t), "proved {j} instead");
        p
    }

    #[test]
    fn monoid_units() {
        assert_proves(&builtin::monoid(), "mul(e, mul(e, x))", "x", Budget::default());
    }

    #[test]
    fn semifree_monoid_front_absorption() {
        let sf = semifree_theory(&builtin::monoid());
        assert_proves(&sf.result, "a(mul(a(x), e))", "a(x)", Budget::default());
    }

    #[test]
    fn commutativity_not_found_in_monoid() {
        let th = builtin::monoid();
        let s = parse_term("mul(x, y)", &th.signature).unwrap();
        let t = parse_term("mul(y, x)", &th.signature).unwrap();
        let err = prove_bounded(&th, &s, &t, &Budget::new(7)).unwrap_err();
        assert_eq!(err.budget.max_term_size, 7);
    }

    #[test]
    fn congruence_needed() {
        let th = builtin::monoid();
        assert_proves(&th, "mul(mul(x, e), mul(e, y))", "mul(x, y)", Budget::default());
    }

    #[test]
    fn reassociation() {
        let th = builtin::monoid();
        assert_proves(&th, "mul(mul(mul(x, y), z), w)", "mul(x, mul(y, mul(z, w)))", Budget::default());
    }
}
