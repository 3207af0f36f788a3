//! The semifree construction as a comonad on monads, at desk scale: the
//! ideal restriction `m₀`, counit `ε` and comultiplication `δ`, lifting of
//! monad morphisms, the ideal-algebra correspondence, and the finite
//! obstruction to a natural point `Id ⇒ (−)ˢ`.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::models::{brute_force_algebras, Check, Csp};
use crate::monads::{level, BuiltinMonad, Elem, FinalMonad, Monad, MonadId, MonadValue, Semifree, SemifreeValue};

/// Result of an elementwise check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub monad: String,
    pub carrier_size: usize,
    pub bound: Option<usize>,
    pub exhaustive: bool,
    pub checks: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(check: &str, monad: String, carrier_size: usize, bound: Option<usize>) -> Self {
        CheckReport {
            check: check.into(),
            monad,
            carrier_size,
            bound,
            exhaustive: true,
            checks: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn record(&mut self, exhaustive: bool, checks: usize, mut failures: Vec<String>) {
        self.exhaustive &= exhaustive;
        self.checks += checks as u64;
        self.failure_count += failures.len() as u64;
        failures.sort();
        self.failures.extend(failures);
        self.failures.truncate(20);
    }
}

fn weighted<T: Elem>(xs: &[T]) -> Vec<(T, usize)> {
    xs.iter().map(|x| (x.clone(), 1)).collect()
}

/// `m₀ = μ ∘ M[η, id] : M Mˢ → M`.
pub fn m0<M: Monad, T: Elem>(m: &M, v: &M::Value<SemifreeValue<T, M::Value<T>>>) -> M::Value<T> {
    let sf = Semifree(m);
    m.mu(&m.fmap(v, &|s| sf.coerce(s)))
}

impl<M: Monad> Monad for &M {
    type Value<T: Elem> = M::Value<T>;

    fn name(&self) -> String {
        (**self).name()
    }
    fn eta<T: Elem>(&self, x: T) -> M::Value<T> {
        (**self).eta(x)
    }
    fn mu<T: Elem>(&self, v: &M::Value<M::Value<T>>) -> M::Value<T> {
        (**self).mu(v)
    }
    fn fmap<T: Elem, U: Elem>(&self, v: &M::Value<T>, f: &dyn Fn(&T) -> U) -> M::Value<U> {
        (**self).fmap(v, f)
    }
    fn cardinality(&self, n: u128) -> Option<u128> {
        (**self).cardinality(n)
    }
    fn nth<T: Elem>(&self, xs: &[T], i: u128) -> M::Value<T> {
        (**self).nth(xs, i)
    }
    fn enumerate<T: Elem>(&self, xs: &[(T, usize)], bound: Option<usize>) -> Vec<(M::Value<T>, usize)> {
        (**self).enumerate(xs, bound)
    }
}

/// `μˢ = [id, inr ∘ m₀]` on every (bounded) element of `MˢMˢX`.
pub fn check_ideal<M: Monad, T: Elem>(m: &M, xs: &[T], bound: Option<usize>) -> CheckReport {
    let sf = Semifree(m);
    let mut report = CheckReport::new("ideal", sf.name(), xs.len(), bound);
    let (one, ex1) = level(&sf, &weighted(xs), bound);
    let (two, ex2) = level(&sf, &one, bound);
    let failures = two
        .par_iter()
        .filter_map(|(w, _)| {
            let cotuple = match w {
                SemifreeValue::Pure(u) => u.clone(),
                SemifreeValue::Wrapped(v) => SemifreeValue::Wrapped(m0(m, v)),
            };
            (sf.mu(w) != cotuple).then(|| format!("{w:?}"))
        })
        .collect();
    report.record(ex1 && ex2, two.len(), failures);
    report
}

/// `ε = [η, id] : Mˢ → M`.
pub fn epsilon<M: Monad, T: Elem>(m: &M, v: &SemifreeValue<T, M::Value<T>>) -> M::Value<T> {
    Semifree(m).coerce(v)
}

/// `δ = id + inr : X + MX → X + (X + MX)`.
pub fn delta<W: Clone, T: Clone>(v: &SemifreeValue<T, W>) -> SemifreeValue<T, SemifreeValue<T, W>> {
    match v {
        SemifreeValue::Pure(x) => SemifreeValue::Pure(x.clone()),
        SemifreeValue::Wrapped(u) => SemifreeValue::Wrapped(SemifreeValue::Wrapped(u.clone())),
    }
}

/// `f + g` on `X + Y`, the semifree action on a natural transformation.
fn lift<T: Clone, A, B>(v: &SemifreeValue<T, A>, f: impl Fn(&A) -> B) -> SemifreeValue<T, B> {
    match v {
        SemifreeValue::Pure(x) => SemifreeValue::Pure(x.clone()),
        SemifreeValue::Wrapped(u) => SemifreeValue::Wrapped(f(u)),
    }
}

/// Counit and coassociativity laws, and that `ε` and `δ` are monad morphisms.
pub fn check_comonad<M: Monad, T: Elem>(m: &M, xs: &[T], bound: Option<usize>) -> CheckReport {
    let sf = Semifree(m);
    let sff = Semifree(&sf);
    let mut report = CheckReport::new("comonad", sf.name(), xs.len(), bound);
    let (one, ex1) = level(&sf, &weighted(xs), bound);

    let mut failures = Vec::new();
    for (v, _) in &one {
        let d = delta(v);
        // ε_{Mˢ} ∘ δ = id
        if epsilon(&sf, &d) != *v {
            failures.push(format!("ε_Mˢ∘δ at {v:?}"));
        }
        // εˢ ∘ δ = id
        if lift(&d, |u| epsilon(m, u)) != *v {
            failures.push(format!("εˢ∘δ at {v:?}"));
        }
        // δˢ ∘ δ = δ_{Mˢ} ∘ δ
        if lift(&d, |u| delta(u)) != delta(&d) {
            failures.push(format!("δˢ∘δ at {v:?}"));
        }
    }
    for x in xs {
        if epsilon(m, &sf.eta(x.clone())) != m.eta(x.clone()) {
            failures.push(format!("ε∘ηˢ at {x:?}"));
        }
        if delta::<M::Value<T>, T>(&sf.eta(x.clone())) != sff.eta(x.clone()) {
            failures.push(format!("δ∘ηˢ at {x:?}"));
        }
    }
    report.record(ex1, one.len() + 2 * xs.len(), failures);

    let (two, ex2) = level(&sf, &one, bound);
    let failures = two
        .par_iter()
        .flat_map_iter(|(w, _)| {
            let mut bad = Vec::new();
            // ε ∘ μˢ = μ ∘ (ε ∗ ε)
            let outer = epsilon(m, w);
            let eps = m.mu(&m.fmap(&outer, &|u| epsilon(m, u)));
            if epsilon(m, &sf.mu(w)) != eps {
                bad.push(format!("ε∘μˢ at {w:?}"));
            }
            // δ ∘ μˢ = μˢˢ ∘ (δ ∗ δ)
            let inner = sf.fmap(w, &|u| delta(u));
            let dd = delta(&inner);
            if delta(&sf.mu(w)) != sff.mu(&dd) {
                bad.push(format!("δ∘μˢ at {w:?}"));
            }
            bad
        })
        .collect();
    report.record(ex1 && ex2, two.len(), failures);
    report
}

/// A natural transformation between monads, given componentwise.
pub trait Morphism: Sync {
    type Source: Monad;
    type Target: Monad;
    fn name(&self) -> String;
    fn source(&self) -> &Self::Source;
    fn target(&self) -> &Self::Target;
    fn apply<T: Elem>(
        &self,
        v: &<Self::Source as Monad>::Value<T>,
    ) -> <Self::Target as Monad>::Value<T>;
}

/// Morphisms between built-in monads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinMorphism {
    Identity(BuiltinMonad),
    /// `Multiset ⇒ FiniteSet`, forgetting multiplicities.
    Support,
    /// `List ⇒ Multiset`, forgetting order.
    ForgetOrder,
    /// `f` then `g`.
    Compose(Box<BuiltinMorphism>, Box<BuiltinMorphism>),
}

fn builtin(id: MonadId) -> BuiltinMonad {
    BuiltinMonad::new(id).expect("valid builtin")
}

impl BuiltinMorphism {
    pub fn endpoints(&self) -> (BuiltinMonad, BuiltinMonad) {
        match self {
            BuiltinMorphism::Identity(m) => (m.clone(), m.clone()),
            BuiltinMorphism::Support => (builtin(MonadId::Multiset), builtin(MonadId::FiniteSet)),
            BuiltinMorphism::ForgetOrder => (builtin(MonadId::List), builtin(MonadId::Multiset)),
            BuiltinMorphism::Compose(f, g) => (f.endpoints().0, g.endpoints().1),
        }
    }

    /// Resolves endpoints once, for use with the generic checks.
    pub fn resolve(self) -> ResolvedMorphism {
        let (source, target) = self.endpoints();
        ResolvedMorphism { morphism: self, source, target }
    }

    fn component<T: Elem>(&self, v: &MonadValue<T>) -> MonadValue<T> {
        match (self, v) {
            (BuiltinMorphism::Identity(_), v) => v.clone(),
            (BuiltinMorphism::Support, MonadValue::Multiset(m)) => MonadValue::FiniteSet(m.keys().cloned().collect()),
            (BuiltinMorphism::ForgetOrder, MonadValue::List(xs)) => {
                let mut m = std::collections::BTreeMap::new();
                for x in xs {
                    *m.entry(x.clone()).or_insert(0) += 1;
                }
                MonadValue::Multiset(m)
            }
            (BuiltinMorphism::Compose(f, g), v) => g.component(&f.component(v)),
            (f, v) => panic!("{f:?} applied outside its source at {v:?}"),
        }
    }
}

pub struct ResolvedMorphism {
    pub morphism: BuiltinMorphism,
    source: BuiltinMonad,
    target: BuiltinMonad,
}

impl Morphism for ResolvedMorphism {
    type Source = BuiltinMonad;
    type Target = BuiltinMonad;

    fn name(&self) -> String {
        match &self.morphism {
            BuiltinMorphism::Identity(m) => format!("id_{}", m.name()),
            BuiltinMorphism::Support => "support".into(),
            BuiltinMorphism::ForgetOrder => "forget-order".into(),
            BuiltinMorphism::Compose(..) => format!("{} ⇒ {}", self.source.name(), self.target.name()),
        }
    }
    fn source(&self) -> &BuiltinMonad {
        &self.source
    }
    fn target(&self) -> &BuiltinMonad {
        &self.target
    }
    fn apply<T: Elem>(&self, v: &MonadValue<T>) -> MonadValue<T> {
        self.morphism.component(v)
    }
}

/// `σˢ = id + σ`.
pub struct SemifreeMorphism<F: Morphism> {
    pub base: F,
    source: Semifree<F::Source>,
    target: Semifree<F::Target>,
}

impl<F: Morphism> Morphism for SemifreeMorphism<F>
where
    F::Source: Clone,
    F::Target: Clone,
{
    type Source = Semifree<F::Source>;
    type Target = Semifree<F::Target>;

    fn name(&self) -> String {
        format!("({})ˢ", self.base.name())
    }
    fn source(&self) -> &Self::Source {
        &self.source
    }
    fn target(&self) -> &Self::Target {
        &self.target
    }
    fn apply<T: Elem>(
        &self,
        v: &SemifreeValue<T, <F::Source as Monad>::Value<T>>,
    ) -> SemifreeValue<T, <F::Target as Monad>::Value<T>> {
        lift(v, |u| self.base.apply(u))
    }
}

/// Unit and multiplication axioms on `X = xs`, and naturality along every
/// function from `xs` to a carrier of size at most 2.
pub fn check_morphism<F: Morphism, T: Elem + From<u8>>(f: &F, xs: &[T], bound: Option<usize>) -> CheckReport {
    let (s, t) = (f.source(), f.target());
    let mut report = CheckReport::new("morphism", f.name(), xs.len(), bound);
    let mut failures = Vec::new();
    for x in xs {
        if f.apply(&s.eta(x.clone())) != t.eta(x.clone()) {
            failures.push(format!("σ∘η at {x:?}"));
        }
    }
    report.record(true, xs.len(), failures);

    let (one, ex1) = level(s, &weighted(xs), bound);
    let (two, ex2) = level(s, &one, bound);
    let failures = two
        .par_iter()
        .filter_map(|(w, _)| {
            let left = f.apply(&s.mu(w));
            let pushed = f.apply(&s.fmap(w, &|u| f.apply(u)));
            (left != t.mu(&pushed)).then(|| format!("σ∘μ at {w:?}"))
        })
        .collect();
    report.record(ex1 && ex2, two.len(), failures);

    let mut failures = Vec::new();
    let mut checks = 0;
    for target_size in 1..=2u8 {
        let count = (target_size as usize).pow(xs.len() as u32);
        for code in 0..count {
            let mut c = code;
            let map: HashMap<T, T> = xs
                .iter()
                .map(|x| {
                    let y = T::from((c % target_size as usize) as u8);
                    c /= target_size as usize;
                    (x.clone(), y)
                })
                .collect();
            let g = |x: &T| map[x].clone();
            for (v, _) in &one {
                checks += 1;
                if f.apply(&s.fmap(v, &g)) != t.fmap(&f.apply(v), &g) {
                    failures.push(format!("naturality at {v:?} along {map:?}"));
                }
            }
        }
    }
    report.record(ex1, checks, failures);
    report
}

/// Errors from [`semifree_morphism`].
#[derive(Debug, Clone, thiserror::Error)]
#[error("input is not a monad morphism at the checked bounds: {}", .0.failures.join("; "))]
pub struct NotAMorphism(pub CheckReport);

/// Lifts `σ` to `σˢ` after checking it, and re-checks the result.
pub fn semifree_morphism<F: Morphism, T: Elem + From<u8>>(
    sigma: F,
    xs: &[T],
    bound: Option<usize>,
) -> Result<(SemifreeMorphism<F>, CheckReport), NotAMorphism>
where
    F::Source: Clone,
    F::Target: Clone,
{
    let input = check_morphism(&sigma, xs, bound);
    if !input.passed() {
        return Err(NotAMorphism(input));
    }
    let lifted = SemifreeMorphism { source: Semifree(sigma.source().clone()), target: Semifree(sigma.target().clone()), base: sigma };
    let report = check_morphism(&lifted, xs, bound);
    Ok((lifted, report))
}

/// `(g ∘ f)ˢ = gˢ ∘ fˢ` and `idˢ = id` on bounded elements of `Mˢ X`.
pub fn check_functoriality<T: Elem>(xs: &[T], bound: Option<usize>) -> CheckReport {
    let list = builtin(MonadId::List);
    let sf = Semifree(list.clone());
    let forget = BuiltinMorphism::ForgetOrder.resolve();
    let support = BuiltinMorphism::Support.resolve();
    let both = BuiltinMorphism::Compose(Box::new(BuiltinMorphism::ForgetOrder), Box::new(BuiltinMorphism::Support));
    let id = BuiltinMorphism::Identity(list.clone());
    let mut report = CheckReport::new("functoriality", sf.name(), xs.len(), bound);
    let (one, ex) = level(&sf, &weighted(xs), bound);
    let mut failures = Vec::new();
    for (v, _) in &one {
        let composite = lift(v, |u| both.component(u));
        let stepwise = lift(&lift(v, |u| forget.apply(u)), |u| support.apply(u));
        if composite != stepwise {
            failures.push(format!("composition at {v:?}"));
        }
        if lift(v, |u| id.component(u)) != *v {
            failures.push(format!("identity at {v:?}"));
        }
    }
    report.record(ex, 2 * one.len(), failures);
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct NonPointednessReport {
    pub verdict: String,
    /// Functions `1(∅) → 1ˢ(∅)`, as the injection each picks.
    pub components_over_empty: Vec<String>,
    pub forced_component: String,
    pub witness_carrier_size: usize,
    /// `τ(η¹ x)` versus `ηˢ x` at the witness.
    pub forced_value: String,
    pub unit_value: String,
    pub final_monad_laws_pass: bool,
}

/// The finite obstruction for the final monad `1`: naturality over the empty
/// carrier forces `τ = inr`, which breaks `τ ∘ η = ηˢ` on a one-element set.
pub fn nonpointedness_witness() -> NonPointednessReport {
    let one = FinalMonad;
    let sf = Semifree(one);
    let empty: [(u8, usize); 0] = [];
    // 1(∅) has the single element (); every candidate component sends it
    // to one of the elements of 1ˢ(∅) = ∅ + 1.
    let targets: Vec<SemifreeValue<u8, ()>> = sf.enumerate(&empty, None).into_iter().map(|(v, _)| v).collect();
    let components: Vec<String> = targets
        .iter()
        .map(|v| match v {
            SemifreeValue::Pure(_) => "inl".to_string(),
            SemifreeValue::Wrapped(()) => "inr".to_string(),
        })
        .collect();
    // Naturality along ∅ → {0}: τ_{0}(*) = 1ˢ(!)(τ_∅(*)).
    let forced_empty = targets.first().cloned().expect("exactly one candidate");
    let forced = sf.fmap(&forced_empty, &|x: &u8| *x);
    let x = 0u8;
    let tau_eta = forced;
    let unit = sf.eta(x);
    let laws = crate::monads::check_monad_laws(&one, &[0u8, 1], None).passed();
    NonPointednessReport {
        verdict: if tau_eta != unit { "no natural point exists".into() } else { "point found".into() },
        components_over_empty: components,
        forced_component: match tau_eta {
            SemifreeValue::Pure(_) => "inl".into(),
            SemifreeValue::Wrapped(()) => "inr".into(),
        },
        witness_carrier_size: 1,
        forced_value: format!("{tau_eta:?}"),
        unit_value: format!("{unit:?}"),
        final_monad_laws_pass: laws,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub monad: String,
    pub carrier_size: usize,
    pub em_algebras: usize,
    pub square_algebras: usize,
    pub matched: bool,
    pub mismatches: Vec<String>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.matched && self.em_algebras == self.square_algebras
    }
}

/// Where `a : MX → X` breaks `a ∘ M[id, a] = a ∘ m₀` on `M(X + MX)`, if it
/// does. `a` is given on the elements of `MX` in enumeration order.
pub fn ideal_square_witness(m: &BuiltinMonad, size: usize, a: &[usize]) -> Option<String> {
    let xs: Vec<(usize, usize)> = (0..size).map(|x| (x, 1)).collect();
    let mx: Vec<MonadValue<usize>> = m.enumerate(&xs, None).into_iter().map(|(v, _)| v).collect();
    let index: HashMap<&MonadValue<usize>, usize> = mx.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let sfx = Semifree(m).enumerate(&xs, None);
    m.enumerate(&sfx, None).into_iter().find_map(|(v, _)| {
        let folded = m.fmap(&v, &|s| match s {
            SemifreeValue::Pure(x) => *x,
            SemifreeValue::Wrapped(u) => a[index[u]],
        });
        let left = a[index[&folded]];
        let right = a[index[&m0(m, &v)]];
        (left != right).then(|| format!("{v:?}: {left} ≠ {right}"))
    })
}

/// Every `a : MX → X` satisfying the ideal-algebra square, by search.
fn square_algebras(m: &BuiltinMonad, size: usize) -> Vec<Vec<usize>> {
    let xs: Vec<(usize, usize)> = (0..size).map(|x| (x, 1)).collect();
    let mx: Vec<MonadValue<usize>> = m.enumerate(&xs, None).into_iter().map(|(v, _)| v).collect();
    let index: HashMap<MonadValue<usize>, usize> = mx.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let sfx = Semifree(m).enumerate(&xs, None);
    let index = &index;
    let mut csp = Csp::new(mx.len(), size);
    for (v, _) in m.enumerate(&sfx, None) {
        let right = index[&m0(m, &v)];
        let inner = RefCell::new(BTreeSet::new());
        m.fmap(&v, &|s: &SemifreeValue<usize, MonadValue<usize>>| {
            if let SemifreeValue::Wrapped(u) = s {
                inner.borrow_mut().insert(index[u]);
            }
        });
        let inner: Vec<usize> = inner.into_inner().into_iter().collect();
        csp.push(Box::new(move |cells: &[Option<usize>]| {
            if let Some(&c) = inner.iter().find(|&&c| cells[c].is_none()) {
                return Check::Blocked(c);
            }
            let folded = m.fmap(&v, &|s: &SemifreeValue<usize, MonadValue<usize>>| match s {
                SemifreeValue::Pure(x) => *x,
                SemifreeValue::Wrapped(u) => cells[index[u]].expect("assigned"),
            });
            let left = index[&folded];
            match (cells[left], cells[right]) {
                (None, _) => Check::Blocked(left),
                (_, None) => Check::Blocked(right),
                (Some(x), Some(y)) if x == y => Check::Holds,
                _ => Check::Fails,
            }
        }));
    }
    csp.solve_all()
}

/// Eilenberg-Moore algebras of `Mˢ` on `{0, .., size-1}` are exactly the
/// cotuples `[id, a]` with `a` satisfying the ideal-algebra square.
pub fn check_ideal_algebra_correspondence(m: &BuiltinMonad, size: usize) -> CorrespondenceReport {
    let sf = Semifree(m.clone());
    let em = brute_force_algebras(&sf, size, true);
    let xs: Vec<(usize, usize)> = (0..size).map(|x| (x, 1)).collect();
    let mx: Vec<MonadValue<usize>> = m.enumerate(&xs, None).into_iter().map(|(v, _)| v).collect();
    let position: HashMap<&SemifreeValue<usize, MonadValue<usize>>, usize> =
        em.elements.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut mismatches = Vec::new();
    // Restrict each EM algebra to its wrapped part, checking the Pure part is id.
    let mut from_em = BTreeSet::new();
    for (k, sol) in em.solutions.iter().enumerate() {
        for x in 0..size {
            if sol[position[&SemifreeValue::Pure(x)]] != x {
                mismatches.push(format!("EM algebra {k} is not the identity on X"));
            }
        }
        let a: Vec<usize> = mx.iter().map(|u| sol[position[&SemifreeValue::Wrapped(u.clone())]]).collect();
        if let Some(w) = ideal_square_witness(m, size, &a) {
            mismatches.push(format!("EM algebra {k} restricts to a failing square at {w}"));
        }
        from_em.insert(a);
    }
    let squares: BTreeSet<Vec<usize>> = square_algebras(m, size).into_iter().collect();
    if squares != from_em {
        mismatches.push(format!(
            "{} square algebras without EM counterpart, {} EM algebras without square counterpart",
            squares.difference(&from_em).count(),
            from_em.difference(&squares).count()
        ));
    }
    CorrespondenceReport {
        monad: m.name(),
        carrier_size: size,
        em_algebras: em.solutions.len(),
        square_algebras: squares.len(),
        matched: mismatches.is_empty(),
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m0_examples() {
        let list = builtin(MonadId::List);
        let v = MonadValue::List(vec![
            SemifreeValue::Pure('x'),
            SemifreeValue::Wrapped(MonadValue::List(vec!['y', 'z'])),
        ]);
        assert_eq!(m0(&list, &v), MonadValue::List(vec!['x', 'y', 'z']));
        let id = builtin(MonadId::Identity);
        assert_eq!(m0(&id, &MonadValue::Identity(SemifreeValue::Pure('x'))), MonadValue::Identity('x'));
    }

    #[test]
    fn counit_and_comultiplication() {
        let list = builtin(MonadId::List);
        assert_eq!(epsilon(&list, &SemifreeValue::Pure('x')), MonadValue::List(vec!['x']));
        let w = MonadValue::List(vec!['x', 'y']);
        assert_eq!(epsilon(&list, &SemifreeValue::Wrapped(w.clone())), w);
        let d = delta::<MonadValue<char>, char>(&SemifreeValue::Pure('x'));
        assert_eq!(d, SemifreeValue::Pure('x'));
        let d = delta(&SemifreeValue::<char, _>::Wrapped(MonadValue::List(vec!['x'])));
        assert_eq!(d, SemifreeValue::Wrapped(SemifreeValue::Wrapped(MonadValue::List(vec!['x']))));
    }

    #[test]
    fn support_lifts() {
        let (lifted, report) = semifree_morphism(BuiltinMorphism::Support.resolve(), &[0u8, 1], Some(3)).unwrap();
        assert!(report.passed(), "{report:?}");
        let v = SemifreeValue::Wrapped(MonadValue::Multiset([(0u8, 2)].into()));
        assert_eq!(lifted.apply(&v), SemifreeValue::Wrapped(MonadValue::FiniteSet([0u8].into())));
    }

    #[test]
    fn nonpointed() {
        let r = nonpointedness_witness();
        assert_eq!(r.verdict, "no natural point exists");
        assert_eq!(r.components_over_empty, vec!["inr"]);
        assert_eq!(r.witness_carrier_size, 1);
        assert!(r.final_monad_laws_pass);
    }

    #[test]
    fn correspondence_small() {
        let r = check_ideal_algebra_correspondence(&builtin(MonadId::Identity), 2);
        assert_eq!((r.em_algebras, r.square_algebras), (3, 3));
        assert!(r.passed());
        let r = check_ideal_algebra_correspondence(&builtin(MonadId::Exception(vec!["k".into()])), 2);
        assert_eq!((r.em_algebras, r.square_algebras), (4, 4));
    }

    #[test]
    fn corrupted_square() {
        // Negation on Id(2) is not idempotent, so the square fails.
        let id = builtin(MonadId::Identity);
        assert!(ideal_square_witness(&id, 2, &[1, 0]).is_some());
        assert!(ideal_square_witness(&id, 2, &[0, 1]).is_none());
    }
}
