//! Built-in finitary monads with canonical element encodings, their
//! semifree extensions `X + MX`, law checking, and bounded free algebras.
//!
//! Every encoding is canonical: two values denote the same element exactly
//! when they are structurally equal (sorted keys, no zero multiplicities).

mod free;
mod laws;
mod semifree;

pub use free::{free_algebra, FreeStructure};
pub use laws::{check_monad_laws, LawFailure, LawReport, LevelInfo, DEFAULT_BOUND};
pub(crate) use laws::level;
pub use semifree::{evaluate_semifree_term, FinalMonad, Semifree, SemifreeValue};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::builtin::{exception_constant, state_write, writer_level};
use crate::term::{Name, Term, Theory};

/// Requirements on carrier elements: opaque, totally ordered labels.
pub trait Elem: Clone + Ord + Hash + fmt::Debug + Send + Sync + 'static {}
impl<T: Clone + Ord + Hash + fmt::Debug + Send + Sync + 'static> Elem for T {}

/// A monad on finite sets, given by its action on elements.
pub trait Monad: Send + Sync {
    type Value<T: Elem>: Elem;

    fn name(&self) -> String;
    fn eta<T: Elem>(&self, x: T) -> Self::Value<T>;
    fn mu<T: Elem>(&self, v: &Self::Value<Self::Value<T>>) -> Self::Value<T>;
    fn fmap<T: Elem, U: Elem>(&self, v: &Self::Value<T>, f: &dyn Fn(&T) -> U) -> Self::Value<U>;

    /// `|MX|` for `|X| = n`, when finite and representable.
    fn cardinality(&self, n: u128) -> Option<u128>;

    /// The `i`-th element of `MX` in a fixed order; only for finite monads.
    fn nth<T: Elem>(&self, xs: &[T], i: u128) -> Self::Value<T>;

    /// Elements of `MX` with their weight (total weight of the elements of
    /// `X` they contain). With `Some(b)`, only values of weight and length
    /// at most `b`; with `None`, all of `MX` (finite monads only).
    fn enumerate<T: Elem>(&self, xs: &[(T, usize)], bound: Option<usize>) -> Vec<(Self::Value<T>, usize)>;
}

/// Position in the min-writer monoid `{0, .., n-1, ∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Finite(usize),
    Infinity,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(k) => write!(f, "{k}"),
            Level::Infinity => f.write_str("∞"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonadId {
    Identity,
    Exception(Vec<String>),
    List,
    Multiset,
    FiniteSet,
    /// Global state over `n` states.
    State(usize),
    /// Writer over `({0, .., n-1, ∞}, min, ∞)`.
    WriterMin(usize),
    /// The term monad of an arbitrary theory, approximated up to a term size.
    FreeGeneric { theory: Box<Theory>, bound: usize },
}

impl fmt::Display for MonadId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadId::Identity => f.write_str("identity"),
            MonadId::Exception(k) => write!(f, "exception:K={}", k.join(",")),
            MonadId::List => f.write_str("list"),
            MonadId::Multiset => f.write_str("multiset"),
            MonadId::FiniteSet => f.write_str("finiteset"),
            MonadId::State(n) => write!(f, "state:n={n}"),
            MonadId::WriterMin(n) => write!(f, "writermin:n={n}"),
            MonadId::FreeGeneric { theory, bound } => write!(f, "free({}, bound {bound})", theory.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonadError {
    #[error("invalid monad parameters: {0}")]
    Parameters(String),
    #[error("operation `{op}` is not interpreted by {monad}")]
    UnknownOp { op: String, monad: String },
    #[error("`{op}` applied to {found} argument(s), expects {expected}")]
    Arity { op: String, expected: usize, found: usize },
}

/// An element of `MX` for one of the built-in monads.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonadValue<T> {
    Identity(T),
    /// The normal (non-exceptional) case of the exception monad.
    Left(T),
    /// Exception label, as an index into `K`.
    Const(usize),
    List(Vec<T>),
    Multiset(BTreeMap<T, usize>),
    FiniteSet(BTreeSet<T>),
    /// `table[i] = (j, x)`: from state `i`, end in state `j` with `x`.
    State(Vec<(usize, T)>),
    Writer(Level, T),
}

impl<T: fmt::Display> fmt::Display for MonadValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: Vec<String>| items.join(", ");
        match self {
            MonadValue::Identity(x) => write!(f, "{x}"),
            MonadValue::Left(x) => write!(f, "inl {x}"),
            MonadValue::Const(k) => write!(f, "raise #{k}"),
            MonadValue::List(xs) => write!(f, "[{}]", join(xs.iter().map(|x| x.to_string()).collect())),
            MonadValue::Multiset(m) => {
                write!(f, "{{{}}}", join(m.iter().map(|(x, k)| format!("{x}:{k}")).collect()))
            }
            MonadValue::FiniteSet(s) => write!(f, "{{{}}}", join(s.iter().map(|x| x.to_string()).collect())),
            MonadValue::State(t) => write!(
                f,
                "{{{}}}",
                join(t.iter().enumerate().map(|(i, (j, x))| format!("{} ↦ ({}, {x})", i + 1, j + 1)).collect())
            ),
            MonadValue::Writer(k, x) => write!(f, "({k}, {x})"),
        }
    }
}

/// One of the built-in monads, validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinMonad {
    id: MonadId,
}

impl BuiltinMonad {
    pub fn new(id: MonadId) -> Result<Self, MonadError> {
        match &id {
            MonadId::State(0) => return Err(MonadError::Parameters("state needs n ≥ 1".into())),
            MonadId::WriterMin(0) => return Err(MonadError::Parameters("writermin needs n ≥ 1".into())),
            MonadId::FreeGeneric { .. } => {
                return Err(MonadError::Parameters("free monads are handled by `free_algebra`".into()))
            }
            MonadId::Exception(k) => {
                let distinct: BTreeSet<_> = k.iter().collect();
                if distinct.len() != k.len() {
                    return Err(MonadError::Parameters("exception labels must be distinct".into()));
                }
            }
            _ => {}
        }
        Ok(BuiltinMonad { id })
    }

    pub fn id(&self) -> &MonadId {
        &self.id
    }

    /// The theory this monad is presented by.
    pub fn theory(&self) -> Theory {
        use crate::builtin;
        match &self.id {
            MonadId::Identity => builtin::identity(),
            MonadId::Exception(k) => builtin::exception(k),
            MonadId::List => builtin::monoid(),
            MonadId::Multiset => builtin::multiset(),
            MonadId::FiniteSet => builtin::finiteset(),
            MonadId::State(n) => builtin::state(*n),
            MonadId::WriterMin(n) => builtin::writermin(*n),
            MonadId::FreeGeneric { theory, .. } => (**theory).clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.id, MonadId::List | MonadId::Multiset)
    }

    fn unknown<V>(&self, op: &str) -> Result<V, MonadError> {
        Err(MonadError::UnknownOp { op: op.to_string(), monad: self.id.to_string() })
    }

    /// Interprets a theory operation on `MX`.
    pub fn apply_op<T: Elem>(&self, op: &str, args: &[MonadValue<T>]) -> Result<MonadValue<T>, MonadError> {
        let arity = |expected: usize| {
            if args.len() == expected {
                Ok(())
            } else {
                Err(MonadError::Arity { op: op.to_string(), expected, found: args.len() })
            }
        };
        match &self.id {
            MonadId::Exception(k) => match k.iter().position(|l| exception_constant(l).as_str() == op) {
                Some(i) => {
                    arity(0)?;
                    Ok(MonadValue::Const(i))
                }
                None => self.unknown(op),
            },
            MonadId::List | MonadId::Multiset | MonadId::FiniteSet => match op {
                "e" => {
                    arity(0)?;
                    Ok(match self.id {
                        MonadId::List => MonadValue::List(Vec::new()),
                        MonadId::Multiset => MonadValue::Multiset(BTreeMap::new()),
                        _ => MonadValue::FiniteSet(BTreeSet::new()),
                    })
                }
                "mul" => {
                    arity(2)?;
                    Ok(match (&args[0], &args[1]) {
                        (MonadValue::List(a), MonadValue::List(b)) => {
                            MonadValue::List(a.iter().chain(b).cloned().collect())
                        }
                        (MonadValue::Multiset(a), MonadValue::Multiset(b)) => {
                            let mut m = a.clone();
                            for (x, k) in b {
                                *m.entry(x.clone()).or_insert(0) += k;
                            }
                            MonadValue::Multiset(m)
                        }
                        (MonadValue::FiniteSet(a), MonadValue::FiniteSet(b)) => {
                            MonadValue::FiniteSet(a.union(b).cloned().collect())
                        }
                        _ => panic!("mixed monad values"),
                    })
                }
                _ => self.unknown(op),
            },
            MonadId::State(n) => {
                let n = *n;
                if op == "f" {
                    arity(n)?;
                    let table = (0..n)
                        .map(|s| match &args[s] {
                            MonadValue::State(t) => t[s].clone(),
                            _ => panic!("mixed monad values"),
                        })
                        .collect();
                    return Ok(MonadValue::State(table));
                }
                match (1..=n).find(|&i| state_write(i).as_str() == op) {
                    Some(i) => {
                        arity(1)?;
                        let MonadValue::State(t) = &args[0] else { panic!("mixed monad values") };
                        Ok(MonadValue::State(vec![t[i - 1].clone(); n]))
                    }
                    None => self.unknown(op),
                }
            }
            MonadId::WriterMin(n) => match (0..*n).find(|&i| writer_level(i).as_str() == op) {
                Some(i) => {
                    arity(1)?;
                    let MonadValue::Writer(k, x) = &args[0] else { panic!("mixed monad values") };
                    Ok(MonadValue::Writer((*k).min(Level::Finite(i)), x.clone()))
                }
                None => self.unknown(op),
            },
            MonadId::Identity | MonadId::FreeGeneric { .. } => self.unknown(op),
        }
    }

    /// Evaluates a base-theory term with variables as generators: the
    /// canonical normal form of its equivalence class.
    pub fn normalize(&self, t: &Term) -> Result<MonadValue<Name>, MonadError> {
        match t {
            Term::Var(x) => Ok(self.eta(x.clone())),
            Term::App(op, args) => {
                let args: Vec<_> = args.iter().map(|a| self.normalize(a)).collect::<Result<_, _>>()?;
                self.apply_op(op.as_str(), &args)
            }
        }
    }

    /// A base-theory term denoting `v`, with `leaf` for the elements.
    pub fn represent<T: Elem>(&self, v: &MonadValue<T>, leaf: &dyn Fn(&T) -> Term) -> Term {
        let product = |items: Vec<Term>| -> Term {
            let mut it = items.into_iter().rev();
            match it.next() {
                None => Term::constant("e"),
                Some(last) => it.fold(last, |acc, t| Term::app("mul", vec![t, acc])),
            }
        };
        match v {
            MonadValue::Identity(x) | MonadValue::Left(x) => leaf(x),
            MonadValue::Const(i) => {
                let MonadId::Exception(k) = &self.id else { unreachable!() };
                Term::constant(exception_constant(&k[*i]))
            }
            MonadValue::List(xs) => product(xs.iter().map(leaf).collect()),
            MonadValue::Multiset(m) => {
                product(m.iter().flat_map(|(x, k)| std::iter::repeat_n(leaf(x), *k)).collect())
            }
            MonadValue::FiniteSet(s) => product(s.iter().map(leaf).collect()),
            MonadValue::State(t) => Term::app(
                "f",
                t.iter().map(|(j, x)| Term::unary(state_write(j + 1), leaf(x))).collect(),
            ),
            MonadValue::Writer(Level::Infinity, x) => leaf(x),
            MonadValue::Writer(Level::Finite(k), x) => Term::unary(writer_level(*k), leaf(x)),
        }
    }

    /// A second, syntactically different representative where one exists.
    pub fn represent_alt<T: Elem>(&self, v: &MonadValue<T>, leaf: &dyn Fn(&T) -> Term) -> Term {
        let rep = self.represent(v, leaf);
        match v {
            MonadValue::List(_) | MonadValue::FiniteSet(_) | MonadValue::Multiset(_) if xs_len(v) >= 1 => {
                // Left-nested with a unit in front.
                let leaves = leaf_list(v, leaf);
                let mut it = leaves.into_iter();
                let first = it.next().expect("nonempty");
                let body = it.fold(first, |acc, t| Term::app("mul", vec![acc, t]));
                let body = match v {
                    // Idempotence lets a set repeat its first element.
                    MonadValue::FiniteSet(s) => {
                        let x = leaf(s.iter().next().expect("nonempty"));
                        Term::app("mul", vec![x, body])
                    }
                    _ => body,
                };
                Term::app("mul", vec![Term::constant("e"), body])
            }
            MonadValue::List(_) | MonadValue::Multiset(_) | MonadValue::FiniteSet(_) => {
                Term::app("mul", vec![Term::constant("e"), Term::constant("e")])
            }
            MonadValue::State(t) => Term::app("f", vec![rep; t.len()]),
            MonadValue::Writer(Level::Finite(k), _) => Term::unary(writer_level(*k), rep),
            _ => rep,
        }
    }
}

fn xs_len<T>(v: &MonadValue<T>) -> usize {
    match v {
        MonadValue::List(xs) => xs.len(),
        MonadValue::Multiset(m) => m.values().sum(),
        MonadValue::FiniteSet(s) => s.len(),
        _ => 1,
    }
}

fn leaf_list<T: Elem>(v: &MonadValue<T>, leaf: &dyn Fn(&T) -> Term) -> Vec<Term> {
    match v {
        MonadValue::List(xs) => xs.iter().map(leaf).collect(),
        // Reverse order: a different bracketing and ordering of the same class.
        MonadValue::Multiset(m) => m.iter().rev().flat_map(|(x, k)| std::iter::repeat_n(leaf(x), *k)).collect(),
        MonadValue::FiniteSet(s) => s.iter().rev().map(leaf).collect(),
        _ => Vec::new(),
    }
}

fn sorted<V: Ord>(mut v: Vec<(V, usize)>) -> Vec<(V, usize)> {
    v.sort();
    v.dedup();
    v
}

/// Sequences over `xs` of length ≤ `bound` and total weight ≤ `bound`.
fn sequences<T: Clone>(xs: &[(T, usize)], bound: usize) -> Vec<(Vec<T>, usize)> {
    let mut out = vec![(Vec::new(), 0)];
    let mut frontier = vec![(Vec::new(), 0usize)];
    for _ in 0..bound {
        let mut next = Vec::new();
        for (seq, w) in &frontier {
            for (x, wx) in xs {
                if w + wx <= bound {
                    let mut s: Vec<T> = seq.clone();
                    s.push(x.clone());
                    next.push((s, w + wx));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Non-decreasing index sequences: multisets of length ≤ `bound` and
/// weight ≤ `bound`; with `strict`, sets instead.
fn combinations<T: Clone>(xs: &[(T, usize)], bound: usize, strict: bool) -> Vec<(Vec<T>, usize)> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((idx, w)) = stack.pop() {
        out.push((idx.iter().map(|&i| xs[i].0.clone()).collect(), w));
        if idx.len() == bound {
            continue;
        }
        let start = idx.last().map_or(0, |&l| if strict { l + 1 } else { l });
        for i in start..xs.len() {
            if w + xs[i].1 <= bound {
                let mut next = idx.clone();
                next.push(i);
                stack.push((next, w + xs[i].1));
            }
        }
    }
    out
}

impl Monad for BuiltinMonad {
    type Value<T: Elem> = MonadValue<T>;

    fn name(&self) -> String {
        self.id.to_string()
    }

    fn eta<T: Elem>(&self, x: T) -> MonadValue<T> {
        match &self.id {
            MonadId::Identity => MonadValue::Identity(x),
            MonadId::Exception(_) => MonadValue::Left(x),
            MonadId::List => MonadValue::List(vec![x]),
            MonadId::Multiset => MonadValue::Multiset([(x, 1)].into_iter().collect()),
            MonadId::FiniteSet => MonadValue::FiniteSet([x].into_iter().collect()),
            MonadId::State(n) => MonadValue::State((0..*n).map(|i| (i, x.clone())).collect()),
            MonadId::WriterMin(_) => MonadValue::Writer(Level::Infinity, x),
            MonadId::FreeGeneric { .. } => unreachable!("rejected by BuiltinMonad::new"),
        }
    }

    fn mu<T: Elem>(&self, v: &MonadValue<MonadValue<T>>) -> MonadValue<T> {
        match v {
            MonadValue::Identity(inner) => inner.clone(),
            MonadValue::Left(inner) => inner.clone(),
            MonadValue::Const(k) => MonadValue::Const(*k),
            MonadValue::List(xss) => MonadValue::List(
                xss.iter()
                    .flat_map(|xs| match xs {
                        MonadValue::List(xs) => xs.clone(),
                        _ => panic!("mixed monad values"),
                    })
                    .collect(),
            ),
            MonadValue::Multiset(outer) => {
                let mut m = BTreeMap::new();
                for (inner, k) in outer {
                    let MonadValue::Multiset(inner) = inner else { panic!("mixed monad values") };
                    for (x, j) in inner {
                        *m.entry(x.clone()).or_insert(0) += k * j;
                    }
                }
                MonadValue::Multiset(m)
            }
            MonadValue::FiniteSet(outer) => MonadValue::FiniteSet(
                outer
                    .iter()
                    .flat_map(|inner| match inner {
                        MonadValue::FiniteSet(s) => s.iter().cloned().collect::<Vec<_>>(),
                        _ => panic!("mixed monad values"),
                    })
                    .collect(),
            ),
            MonadValue::State(outer) => MonadValue::State(
                outer
                    .iter()
                    .map(|(j, inner)| match inner {
                        MonadValue::State(t) => t[*j].clone(),
                        _ => panic!("mixed monad values"),
                    })
                    .collect(),
            ),
            MonadValue::Writer(k, inner) => match inner {
                MonadValue::Writer(j, x) => MonadValue::Writer((*k).min(*j), x.clone()),
                _ => panic!("mixed monad values"),
            },
        }
    }

    fn fmap<T: Elem, U: Elem>(&self, v: &MonadValue<T>, f: &dyn Fn(&T) -> U) -> MonadValue<U> {
        match v {
            MonadValue::Identity(x) => MonadValue::Identity(f(x)),
            MonadValue::Left(x) => MonadValue::Left(f(x)),
            MonadValue::Const(k) => MonadValue::Const(*k),
            MonadValue::List(xs) => MonadValue::List(xs.iter().map(f).collect()),
            MonadValue::Multiset(m) => {
                let mut out = BTreeMap::new();
                for (x, k) in m {
                    *out.entry(f(x)).or_insert(0) += k;
                }
                MonadValue::Multiset(out)
            }
            MonadValue::FiniteSet(s) => MonadValue::FiniteSet(s.iter().map(f).collect()),
            MonadValue::State(t) => MonadValue::State(t.iter().map(|(j, x)| (*j, f(x))).collect()),
            MonadValue::Writer(k, x) => MonadValue::Writer(*k, f(x)),
        }
    }

    fn cardinality(&self, n: u128) -> Option<u128> {
        match &self.id {
            MonadId::Identity => Some(n),
            MonadId::Exception(k) => Some(n + k.len() as u128),
            MonadId::List | MonadId::Multiset | MonadId::FreeGeneric { .. } => None,
            MonadId::FiniteSet => (n < 100).then(|| 1u128 << n),
            MonadId::State(s) => (*s as u128 * n).checked_pow(*s as u32),
            MonadId::WriterMin(w) => Some((*w as u128 + 1) * n),
        }
    }

    fn nth<T: Elem>(&self, xs: &[T], i: u128) -> MonadValue<T> {
        let n = xs.len() as u128;
        match &self.id {
            MonadId::Identity => MonadValue::Identity(xs[i as usize].clone()),
            MonadId::Exception(_) if i < n => MonadValue::Left(xs[i as usize].clone()),
            MonadId::Exception(_) => MonadValue::Const((i - n) as usize),
            MonadId::FiniteSet => MonadValue::FiniteSet(
                xs.iter().enumerate().filter(|(j, _)| i >> j & 1 == 1).map(|(_, x)| x.clone()).collect(),
            ),
            MonadId::State(s) => {
                let base = *s as u128 * n;
                let mut rest = i;
                let mut table = Vec::with_capacity(*s);
                for _ in 0..*s {
                    let d = rest % base;
                    rest /= base;
                    table.push(((d / n) as usize, xs[(d % n) as usize].clone()));
                }
                MonadValue::State(table)
            }
            MonadId::WriterMin(w) => {
                let level = (i / n) as usize;
                let level = if level == *w { Level::Infinity } else { Level::Finite(level) };
                MonadValue::Writer(level, xs[(i % n) as usize].clone())
            }
            MonadId::List | MonadId::Multiset | MonadId::FreeGeneric { .. } => {
                panic!("{} has no finite enumeration", self.id)
            }
        }
    }

    fn enumerate<T: Elem>(&self, xs: &[(T, usize)], bound: Option<usize>) -> Vec<(MonadValue<T>, usize)> {
        let within = |w: usize| bound.is_none_or(|b| w <= b);
        let out: Vec<(MonadValue<T>, usize)> = match &self.id {
            MonadId::Identity => xs.iter().map(|(x, w)| (MonadValue::Identity(x.clone()), *w)).collect(),
            MonadId::Exception(k) => xs
                .iter()
                .map(|(x, w)| (MonadValue::Left(x.clone()), *w))
                .chain((0..k.len()).map(|i| (MonadValue::Const(i), 0)))
                .collect(),
            MonadId::List => {
                let b = bound.expect("the list monad needs a bound");
                sequences(xs, b).into_iter().map(|(s, w)| (MonadValue::List(s), w)).collect()
            }
            MonadId::Multiset => {
                let b = bound.expect("the multiset monad needs a bound");
                combinations(xs, b, false)
                    .into_iter()
                    .map(|(s, w)| {
                        let mut m = BTreeMap::new();
                        for x in s {
                            *m.entry(x).or_insert(0) += 1;
                        }
                        (MonadValue::Multiset(m), w)
                    })
                    .collect()
            }
            MonadId::FiniteSet => {
                // Unbounded: no subset can exceed the total weight or size.
                let b = bound.unwrap_or_else(|| xs.len() + xs.iter().map(|(_, w)| w).sum::<usize>());
                combinations(xs, b, true)
                    .into_iter()
                    .map(|(s, w)| (MonadValue::FiniteSet(s.into_iter().collect()), w))
                    .collect()
            }
            MonadId::State(s) => {
                let mut tables: Vec<(Vec<(usize, T)>, usize)> = vec![(Vec::new(), 0)];
                for _ in 0..*s {
                    let mut next = Vec::new();
                    for (t, w) in &tables {
                        for j in 0..*s {
                            for (x, wx) in xs {
                                let mut t = t.clone();
                                t.push((j, x.clone()));
                                next.push((t, w + wx));
                            }
                        }
                    }
                    tables = next;
                }
                tables.into_iter().map(|(t, w)| (MonadValue::State(t), w)).collect()
            }
            MonadId::WriterMin(n) => (0..*n)
                .map(Level::Finite)
                .chain([Level::Infinity])
                .flat_map(|l| xs.iter().map(move |(x, w)| (MonadValue::Writer(l, x.clone()), *w)))
                .collect(),
            MonadId::FreeGeneric { .. } => unreachable!("rejected by BuiltinMonad::new"),
        };
        sorted(out.into_iter().filter(|(_, w)| within(*w)).collect())
    }
}

/// `normalize` for a monad given by id.
pub fn normalize(m: &MonadId, t: &Term) -> Result<MonadValue<Name>, MonadError> {
    BuiltinMonad::new(m.clone())?.normalize(t)
}

/// The unit of `m` at `x`.
pub fn eta<T: Elem>(m: &BuiltinMonad, x: T) -> MonadValue<T> {
    m.eta(x)
}

/// The multiplication of `m`.
pub fn mu<T: Elem>(m: &BuiltinMonad, v: &MonadValue<MonadValue<T>>) -> MonadValue<T> {
    m.mu(v)
}

/// The functor action of `m`.
pub fn fmap<T: Elem, U: Elem>(m: &BuiltinMonad, f: &dyn Fn(&T) -> U, v: &MonadValue<T>) -> MonadValue<U> {
    m.fmap(v, f)
}
