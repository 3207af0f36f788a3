//! Semialgebras `α : MX → X` of the built-in monads and the transforms `G`
//! (semialgebra to `Σˢ`-algebra) and `H` (`Eˢ`-model to semialgebra).

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{assignments, enumerate_models_capped, Check, Csp, FiniteAlgebra, ModelError};
use crate::monads::{BuiltinMonad, Elem, Monad, MonadId, MonadValue};
use crate::semifree::{semifree_theory, small_terms, SemifreeTheory};
use crate::term::{Name, OpSymbol, Term};

/// A structure map on `{0, .., carrier_size - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureMap {
    /// Explicit values on every element of `MX` (finite monads only).
    Table { monad: MonadId, carrier_size: usize, values: BTreeMap<MonadValue<usize>, usize> },
    /// `α(t̄) = ⦅t⦆` with leaves routed through the unary table `a_symbol`.
    Interpreted { monad: MonadId, algebra: FiniteAlgebra, a_symbol: Name },
}

impl StructureMap {
    pub fn monad(&self) -> &MonadId {
        match self {
            StructureMap::Table { monad, .. } | StructureMap::Interpreted { monad, .. } => monad,
        }
    }

    pub fn carrier_size(&self) -> usize {
        match self {
            StructureMap::Table { carrier_size, .. } => *carrier_size,
            StructureMap::Interpreted { algebra, .. } => algebra.carrier_size,
        }
    }

    pub fn apply(&self, m: &BuiltinMonad, v: &MonadValue<usize>) -> usize {
        match self {
            StructureMap::Table { values, .. } => *values.get(v).unwrap_or_else(|| panic!("α undefined at {v:?}")),
            StructureMap::Interpreted { algebra, a_symbol, .. } => {
                let a = algebra.table(a_symbol.as_str()).expect("table for a");
                let rep = m.represent(v, &|x: &usize| Term::var(x.to_string()));
                algebra.eval(&rep, &|n: &Name| a[n.as_str().parse::<usize>().expect("numeric leaf")])
            }
        }
    }

    /// Like [`StructureMap::apply`], through the alternative representative.
    pub fn apply_alt(&self, m: &BuiltinMonad, v: &MonadValue<usize>) -> usize {
        match self {
            StructureMap::Table { .. } => self.apply(m, v),
            StructureMap::Interpreted { algebra, a_symbol, .. } => {
                let a = algebra.table(a_symbol.as_str()).expect("table for a");
                let rep = m.represent_alt(v, &|x: &usize| Term::var(x.to_string()));
                algebra.eval(&rep, &|n: &Name| a[n.as_str().parse::<usize>().expect("numeric leaf")])
            }
        }
    }
}

fn carrier(m: usize) -> Vec<(usize, usize)> {
    (0..m).map(|x| (x, 1)).collect()
}

/// Elements of `MX` for `X = {0, .., m-1}`: all of them when the monad is
/// finite, those of size at most `bound` otherwise.
fn level_one(m: &BuiltinMonad, size: usize, bound: usize) -> (Vec<(MonadValue<usize>, usize)>, bool) {
    if m.is_finite() {
        (m.enumerate(&carrier(size), None), true)
    } else {
        (m.enumerate(&carrier(size), Some(bound)), false)
    }
}

/// `G(α)`: `⦅a⦆ = α ∘ η` and `⦅op⦆ = α ∘ ⟦op⟧ ∘ ηⁿ`, in `Σˢ` order.
pub fn g_transform(m: &BuiltinMonad, alpha: &StructureMap) -> FiniteAlgebra {
    let sf = semifree_theory(&m.theory());
    let c = alpha.carrier_size();
    let tables = sf
        .result
        .signature
        .symbols()
        .iter()
        .map(|op| {
            let vars: Vec<Name> = (0..op.arity).map(|i| Name::from(format!("x{i}"))).collect();
            let table = assignments(&vars, c)
                .map(|a| {
                    let args: Vec<MonadValue<usize>> = vars.iter().map(|v| m.eta(a[v])).collect();
                    if op.name == sf.a_symbol.name {
                        alpha.apply(m, &args[0])
                    } else {
                        alpha.apply(m, &m.apply_op(op.name.as_str(), &args).expect("base operation"))
                    }
                })
                .collect();
            (op.clone(), table)
        })
        .collect();
    FiniteAlgebra { carrier_size: c, tables }
}

/// `H(A)`, refusing algebras that violate `Eˢ`.
pub fn h_transform(m: &BuiltinMonad, alg: &FiniteAlgebra) -> Result<StructureMap, ModelError> {
    let sf = semifree_theory(&m.theory());
    alg.check_theory(&sf.result)?;
    Ok(StructureMap::Interpreted { monad: m.id().clone(), algebra: alg.clone(), a_symbol: sf.a_symbol.name })
}

#[derive(Clone, Debug, Serialize)]
pub struct SemialgebraReport {
    pub monad: String,
    pub carrier_size: usize,
    pub bound: usize,
    pub exhaustive: bool,
    pub checks: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl SemialgebraReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const SHOWN: usize = 20;

/// Associativity `α ∘ Mα = α ∘ μ` on `MMX`, `α ∘ η ∘ α = α` on `MX` (so
/// `α ∘ η` is idempotent), and `α ∘ ⟦op⟧ = α ∘ ⟦op⟧ ∘ ηⁿ ∘ αⁿ` on `(MX)ⁿ`.
pub fn check_semialgebra(m: &BuiltinMonad, alpha: &StructureMap, bound: usize) -> SemialgebraReport {
    let c = alpha.carrier_size();
    let (one, exhaustive) = level_one(m, c, bound);
    let two = if exhaustive { m.enumerate(&one, None) } else { m.enumerate(&one, Some(bound)) };
    let mut failures: Vec<String> = two
        .par_iter()
        .filter_map(|(w, _)| {
            let left = alpha.apply(m, &m.mu(w));
            let right = alpha.apply(m, &m.fmap(w, &|v| alpha.apply(m, v)));
            (left != right).then(|| format!("associativity at {w:?}: {left} ≠ {right}"))
        })
        .collect();
    let mut checks = two.len() as u64;
    for (v, _) in &one {
        checks += 1;
        let direct = alpha.apply(m, v);
        let round = alpha.apply(m, &m.eta(direct));
        if direct != round {
            failures.push(format!("α∘η∘α at {v:?}: {round} ≠ {direct}"));
        }
    }
    for op in m.theory().signature.symbols() {
        let idx: Vec<Name> = (0..op.arity).map(|i| Name::from(format!("v{i}"))).collect();
        let tuples: Vec<_> = assignments(&idx, one.len()).collect();
        checks += tuples.len() as u64;
        let bad: Vec<String> = tuples
            .par_iter()
            .filter_map(|t| {
                let args: Vec<MonadValue<usize>> = idx.iter().map(|v| one[t[v]].0.clone()).collect();
                let folded: Vec<MonadValue<usize>> = args.iter().map(|v| m.eta(alpha.apply(m, v))).collect();
                let left = alpha.apply(m, &m.apply_op(op.name.as_str(), &args).expect("base operation"));
                let right = alpha.apply(m, &m.apply_op(op.name.as_str(), &folded).expect("base operation"));
                (left != right).then(|| format!("α∘⟦{}⟧ at {args:?}: {left} ≠ {right}", op.name))
            })
            .collect();
        failures.extend(bad);
    }
    failures.sort();
    let failure_count = failures.len() as u64;
    failures.truncate(SHOWN);
    SemialgebraReport {
        monad: m.name(),
        carrier_size: c,
        bound,
        exhaustive,
        checks,
        failure_count,
        failures,
    }
}

/// Tables of every `α : MX → X` with `α ∘ μ = α ∘ Mα`, found by search.
pub struct BruteForce<V> {
    /// The elements of `MX`, in enumeration order.
    pub elements: Vec<V>,
    /// One value per element, per solution, in lexicographic order.
    pub solutions: Vec<Vec<usize>>,
}

impl<V: Elem> BruteForce<V> {
    pub fn table(&self, i: usize) -> BTreeMap<V, usize> {
        self.elements.iter().cloned().zip(self.solutions[i].iter().copied()).collect()
    }
}

/// All associative `α` for a finite monad on `{0, .., size-1}`; with
/// `unit`, also `α ∘ η = id` (Eilenberg-Moore algebras).
pub fn brute_force_algebras<M: Monad>(m: &M, size: usize, unit: bool) -> BruteForce<M::Value<usize>> {
    let one: Vec<(M::Value<usize>, usize)> = m.enumerate(&carrier(size), None);
    let elements: Vec<M::Value<usize>> = one.iter().map(|(v, _)| v.clone()).collect();
    let index: HashMap<M::Value<usize>, usize> = elements.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let two = m.enumerate(&one, None);
    let mut csp = Csp::new(elements.len(), size);
    if unit {
        for x in 0..size {
            csp.fixed[index[&m.eta(x)]] = Some(x);
        }
    }
    let index = &index;
    for (w, _) in two {
        let left = index[&m.mu(&w)];
        let inner = RefCell::new(BTreeSet::new());
        m.fmap(&w, &|v: &M::Value<usize>| {
            inner.borrow_mut().insert(index[v]);
        });
        let inner: Vec<usize> = inner.into_inner().into_iter().collect();
        csp.push(Box::new(move |cells: &[Option<usize>]| {
            if let Some(&c) = inner.iter().find(|&&c| cells[c].is_none()) {
                return Check::Blocked(c);
            }
            let pushed = m.fmap(&w, &|v: &M::Value<usize>| cells[index[v]].expect("assigned"));
            let right = index[&pushed];
            match (cells[left], cells[right]) {
                (None, _) => Check::Blocked(left),
                (_, None) => Check::Blocked(right),
                (Some(x), Some(y)) if x == y => Check::Holds,
                _ => Check::Fails,
            }
        }));
    }
    let solutions = csp.solve_all();
    BruteForce { elements, solutions }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub monad: String,
    pub carrier_size: usize,
    pub bound: usize,
    pub model_count: usize,
    /// Associative tables found by search; finite monads only.
    pub brute_force_count: Option<usize>,
    /// Whether `{H(A)}` and the searched tables coincide as sets.
    pub brute_force_matches: Option<bool>,
    pub gh_failures: Vec<String>,
    pub hg_failures: Vec<String>,
    pub semialgebra_failures: Vec<String>,
    pub g_model_failures: Vec<String>,
    pub term_identity_failures: Vec<String>,
    pub representative_failures: Vec<String>,
    pub hom_models_used: usize,
    pub hom_models_total: usize,
    pub hom_functions_checked: u64,
    pub hom_mismatches: Vec<String>,
    pub exhaustive: bool,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.brute_force_matches != Some(false)
            && self.brute_force_count.is_none_or(|c| c == self.model_count)
            && self.gh_failures.is_empty()
            && self.hg_failures.is_empty()
            && self.semialgebra_failures.is_empty()
            && self.g_model_failures.is_empty()
            && self.term_identity_failures.is_empty()
            && self.representative_failures.is_empty()
            && self.hom_mismatches.is_empty()
    }
}

/// Most models used for the pairwise homomorphism comparison.
pub const HOM_MODEL_LIMIT: usize = 24;

fn eval_in_monad(m: &BuiltinMonad, t: &Term, env: &BTreeMap<Name, usize>) -> MonadValue<usize> {
    match t {
        Term::Var(v) => m.eta(env[v]),
        Term::App(op, args) => {
            let args: Vec<_> = args.iter().map(|s| eval_in_monad(m, s, env)).collect();
            m.apply_op(op.as_str(), &args).expect("base operation")
        }
    }
}

fn tabulate(m: &BuiltinMonad, alpha: &StructureMap, values: &[(MonadValue<usize>, usize)]) -> Vec<usize> {
    values.iter().map(|(v, _)| alpha.apply(m, v)).collect()
}

/// Round-trip verification of `G` and `H` on carrier `{0, .., size-1}`.
pub fn verify_iso(m: &BuiltinMonad, size: usize, bound: usize, cap: u128) -> Result<IsoReport, ModelError> {
    let sf: SemifreeTheory = semifree_theory(&m.theory());
    let models = enumerate_models_capped(&sf.result, size, cap)?;
    let (one, exhaustive) = level_one(m, size, bound);

    let per_model: Vec<(Vec<String>, Vec<String>, Vec<String>, Vec<String>, Vec<usize>)> = models
        .par_iter()
        .enumerate()
        .map(|(i, alg)| {
            let (mut gh, mut hg, mut semi, mut terms) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            let alpha = h_transform(m, alg).expect("enumerated models satisfy Eˢ");
            if g_transform(m, &alpha) != *alg {
                gh.push(format!("model {i}: G(H(A)) ≠ A"));
            }
            let report = check_semialgebra(m, &alpha, bound);
            if !report.passed() {
                semi.push(format!("model {i}: {}", report.failures.join("; ")));
            }
            let table = tabulate(m, &alpha, &one);
            let back = h_transform(m, &g_transform(m, &alpha)).expect("G output satisfies Eˢ");
            if tabulate(m, &back, &one) != table {
                hg.push(format!("model {i}: H(G(α)) ≠ α"));
            }
            for ((v, _), &x) in one.iter().zip(&table) {
                if alpha.apply_alt(m, v) != x {
                    terms.push(format!("model {i}: representative dependence at {v:?}"));
                }
            }
            (gh, hg, semi, terms, table)
        })
        .collect();

    let mut report = IsoReport {
        monad: m.name(),
        carrier_size: size,
        bound,
        model_count: models.len(),
        brute_force_count: None,
        brute_force_matches: None,
        gh_failures: Vec::new(),
        hg_failures: Vec::new(),
        semialgebra_failures: Vec::new(),
        g_model_failures: Vec::new(),
        term_identity_failures: Vec::new(),
        representative_failures: Vec::new(),
        hom_models_used: 0,
        hom_models_total: 0,
        hom_functions_checked: 0,
        hom_mismatches: Vec::new(),
        exhaustive,
    };
    let mut h_tables = BTreeSet::new();
    for (gh, hg, semi, reps, table) in per_model {
        report.gh_failures.extend(gh);
        report.hg_failures.extend(hg);
        report.semialgebra_failures.extend(semi);
        report.representative_failures.extend(reps);
        h_tables.insert(table);
    }

    // ⦅t⦆_σ = α(⟦t⟧ with leaves η ∘ σ) for small base terms.
    let vars: Vec<Name> = vec!["x".into(), "y".into()];
    let base_terms: Vec<Term> = small_terms(&m.theory().signature, &Name::new(""), &vars, 4)
        .into_iter()
        .filter(|t| t.depth() >= 1)
        .collect();
    for (i, alg) in models.iter().enumerate() {
        let alpha = h_transform(m, alg).expect("model");
        for t in &base_terms {
            for env in assignments(&vars, size) {
                let direct = alg.eval(t, &|v: &Name| env[v]);
                let via = alpha.apply(m, &eval_in_monad(m, t, &env));
                if direct != via {
                    report.term_identity_failures.push(format!("model {i}: {t} at {env:?}"));
                }
            }
        }
    }

    if m.is_finite() {
        let brute = brute_force_algebras(m, size, false);
        report.brute_force_count = Some(brute.solutions.len());
        // Align the brute-force element order with `one`.
        let position: HashMap<&MonadValue<usize>, usize> =
            brute.elements.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let brute_tables: BTreeSet<Vec<usize>> = brute
            .solutions
            .iter()
            .map(|s| one.iter().map(|(v, _)| s[position[v]]).collect())
            .collect();
        report.brute_force_matches = Some(brute_tables == h_tables);
        for k in 0..brute.solutions.len() {
            let alpha = StructureMap::Table { monad: m.id().clone(), carrier_size: size, values: brute.table(k) };
            let g = g_transform(m, &alpha);
            match h_transform(m, &g) {
                Err(e) => report.g_model_failures.push(format!("table {k}: {e}")),
                Ok(back) => {
                    if tabulate(m, &back, &one) != tabulate(m, &alpha, &one) {
                        report.hg_failures.push(format!("table {k}: H(G(α)) ≠ α"));
                    }
                }
            }
        }
    }

    hom_correspondence(m, &sf, size, bound, cap, &mut report)?;
    Ok(report)
}

/// `f` is a semialgebra morphism iff it is a `Σˢ`-homomorphism, for every
/// `f` between the carriers of (a prefix of) the models of size ≤ `size`.
fn hom_correspondence(
    m: &BuiltinMonad,
    sf: &SemifreeTheory,
    size: usize,
    bound: usize,
    cap: u128,
    report: &mut IsoReport,
) -> Result<(), ModelError> {
    let mut all = Vec::new();
    for c in 1..=size {
        all.extend(enumerate_models_capped(&sf.result, c, cap)?);
    }
    report.hom_models_total = all.len();
    all.truncate(HOM_MODEL_LIMIT);
    report.hom_models_used = all.len();
    let prepared: Vec<(StructureMap, Vec<(MonadValue<usize>, usize)>)> = all
        .iter()
        .map(|alg| (h_transform(m, alg).expect("model"), level_one(m, alg.carrier_size, bound).0))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..all.len()).flat_map(|i| (0..all.len()).map(move |j| (i, j))).collect();
    let results: Vec<(u64, Vec<String>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&all[i], &all[j]);
            let (alpha_a, one_a) = (&prepared[i].0, &prepared[i].1);
            let alpha_b = &prepared[j].0;
            let fvars: Vec<Name> = (0..a.carrier_size).map(|k| Name::from(format!("p{k}"))).collect();
            let mut count = 0;
            let mut bad = Vec::new();
            for fmap_env in assignments(&fvars, b.carrier_size) {
                let f: Vec<usize> = fvars.iter().map(|v| fmap_env[v]).collect();
                count += 1;
                let semi = one_a.iter().all(|(v, _)| f[alpha_a.apply(m, v)] == alpha_b.apply(m, &m.fmap(v, &|x| f[*x])));
                let alg = is_homomorphism(a, b, &f);
                if semi != alg {
                    bad.push(format!("models {i} → {j}, f = {f:?}: semialgebra {semi}, Σˢ {alg}"));
                }
            }
            (count, bad)
        })
        .collect();
    for (c, bad) in results {
        report.hom_functions_checked += c;
        report.hom_mismatches.extend(bad);
    }
    Ok(())
}

fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[usize]) -> bool {
    a.tables.iter().all(|(op, table)| {
        let OpSymbol { name, arity } = op;
        let vars: Vec<Name> = (0..*arity).map(|i| Name::from(format!("x{i}"))).collect();
        let ok = assignments(&vars, a.carrier_size).enumerate().all(|(cell, env)| {
            let mapped: Vec<usize> = vars.iter().map(|v| f[env[v]]).collect();
            f[table[cell]] == b.apply(name.as_str(), &mapped)
        });
        ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn monad(id: MonadId) -> BuiltinMonad {
        BuiltinMonad::new(id).unwrap()
    }

    #[test]
    fn identity_constant_zero() {
        let m = monad(MonadId::Identity);
        let alpha = StructureMap::Table {
            monad: MonadId::Identity,
            carrier_size: 2,
            values: [(MonadValue::Identity(0), 0), (MonadValue::Identity(1), 0)].into(),
        };
        let g = g_transform(&m, &alpha);
        assert_eq!(g.table("a"), Some(&[0, 0][..]));
        let h = h_transform(&m, &g).unwrap();
        assert_eq!(h.apply(&m, &MonadValue::Identity(1)), 0);
    }

    #[test]
    fn negation_is_not_a_semialgebra() {
        let m = monad(MonadId::Identity);
        let alpha = StructureMap::Table {
            monad: MonadId::Identity,
            carrier_size: 2,
            values: [(MonadValue::Identity(0), 1), (MonadValue::Identity(1), 0)].into(),
        };
        assert!(!check_semialgebra(&m, &alpha, 3).passed());
    }

    #[test]
    fn multiset_max_interpretation() {
        let m = monad(MonadId::Multiset);
        let alg = FiniteAlgebra::new(
            2,
            vec![
                (OpSymbol::new("e", 0), vec![0]),
                (OpSymbol::new("mul", 2), vec![0, 1, 1, 1]),
                (OpSymbol::new("a", 1), vec![0, 1]),
            ],
        )
        .unwrap();
        let alpha = h_transform(&m, &alg).unwrap();
        assert_eq!(alpha.apply(&m, &MonadValue::Multiset(BTreeMap::new())), 0);
        assert_eq!(alpha.apply(&m, &MonadValue::Multiset([(0, 1)].into())), 0);
        assert_eq!(alpha.apply(&m, &MonadValue::Multiset([(1, 2)].into())), 1);
        assert!(check_semialgebra(&m, &alpha, 3).passed());
    }

    #[test]
    fn h_refuses_non_models() {
        let m = monad(MonadId::Identity);
        let neg = FiniteAlgebra::new(2, vec![(OpSymbol::new("a", 1), vec![1, 0])]).unwrap();
        assert!(matches!(h_transform(&m, &neg), Err(ModelError::Violation { .. })));
    }

    #[test]
    fn small_round_trips() {
        for (id, count) in [(MonadId::Identity, 3), (MonadId::Exception(vec!["k".into()]), 4)] {
            let r = verify_iso(&monad(id), 2, 3, super::super::DEFAULT_CAP).unwrap();
            assert_eq!(r.model_count, count);
            assert_eq!(r.brute_force_count, Some(count));
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn finiteset_brute_force_agrees() {
        let m = monad(MonadId::FiniteSet);
        let brute = brute_force_algebras(&m, 2, false);
        let models = crate::models::enumerate_models(&semifree_theory(&builtin::finiteset()).result, 2).unwrap();
        assert_eq!(brute.solutions.len(), models.len());
    }
}
