//! The semifree monad `Mˢ X = X + MX` with `ηˢ = inl` and
//! `μˢ = [id, inr ∘ μ ∘ M[η, id]]`, and the evaluator of `Σˢ`-terms into it.

use std::fmt;

use super::{BuiltinMonad, Elem, Monad, MonadError, MonadValue};
use crate::term::{Name, Term};

/// An element of `X + MX`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemifreeValue<X, W> {
    Pure(X),
    Wrapped(W),
}

impl<X: fmt::Display, W: fmt::Display> fmt::Display for SemifreeValue<X, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemifreeValue::Pure(x) => write!(f, "pure {x}"),
            SemifreeValue::Wrapped(w) => write!(f, "wrap {w}"),
        }
    }
}

/// `Mˢ` for any monad `M`; nests, so `Semifree<Semifree<M>>` is `Mˢˢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semifree<M>(pub M);

impl<M: Monad> Semifree<M> {
    pub fn inner(&self) -> &M {
        &self.0
    }

    /// `[η, id] : X + MX → MX`.
    pub fn coerce<T: Elem>(&self, v: &SemifreeValue<T, M::Value<T>>) -> M::Value<T> {
        match v {
            SemifreeValue::Pure(x) => self.0.eta(x.clone()),
            SemifreeValue::Wrapped(u) => u.clone(),
        }
    }
}

impl<M: Monad> Monad for Semifree<M> {
    type Value<T: Elem> = SemifreeValue<T, M::Value<T>>;

    fn name(&self) -> String {
        format!("({})ˢ", self.0.name())
    }

    fn eta<T: Elem>(&self, x: T) -> Self::Value<T> {
        SemifreeValue::Pure(x)
    }

    fn mu<T: Elem>(&self, v: &Self::Value<Self::Value<T>>) -> Self::Value<T> {
        match v {
            SemifreeValue::Pure(w) => w.clone(),
            SemifreeValue::Wrapped(mv) => SemifreeValue::Wrapped(self.0.mu(&self.0.fmap(mv, &|s| self.coerce(s)))),
        }
    }

    fn fmap<T: Elem, U: Elem>(&self, v: &Self::Value<T>, f: &dyn Fn(&T) -> U) -> Self::Value<U> {
        match v {
            SemifreeValue::Pure(x) => SemifreeValue::Pure(f(x)),
            SemifreeValue::Wrapped(u) => SemifreeValue::Wrapped(self.0.fmap(u, f)),
        }
    }

    fn cardinality(&self, n: u128) -> Option<u128> {
        self.0.cardinality(n)?.checked_add(n)
    }

    fn nth<T: Elem>(&self, xs: &[T], i: u128) -> Self::Value<T> {
        let n = xs.len() as u128;
        if i < n {
            SemifreeValue::Pure(xs[i as usize].clone())
        } else {
            SemifreeValue::Wrapped(self.0.nth(xs, i - n))
        }
    }

    fn enumerate<T: Elem>(&self, xs: &[(T, usize)], bound: Option<usize>) -> Vec<(Self::Value<T>, usize)> {
        let mut out: Vec<_> = xs
            .iter()
            .filter(|(_, w)| bound.is_none_or(|b| *w <= b))
            .map(|(x, w)| (SemifreeValue::Pure(x.clone()), *w))
            .collect();
        out.extend(self.0.enumerate(xs, bound).into_iter().map(|(u, w)| (SemifreeValue::Wrapped(u), w)));
        out.sort();
        out
    }
}

/// The final monad `1`: every `1(X)` is a singleton.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinalMonad;

impl Monad for FinalMonad {
    type Value<T: Elem> = ();

    fn name(&self) -> String {
        "final".into()
    }

    fn eta<T: Elem>(&self, _: T) {}

    fn mu<T: Elem>(&self, _: &()) {}

    fn fmap<T: Elem, U: Elem>(&self, _: &(), _: &dyn Fn(&T) -> U) {}

    fn cardinality(&self, _: u128) -> Option<u128> {
        Some(1)
    }

    fn nth<T: Elem>(&self, _: &[T], _: u128) {}

    fn enumerate<T: Elem>(&self, _: &[(T, usize)], _: Option<usize>) -> Vec<((), usize)> {
        vec![((), 0)]
    }
}

/// Evaluates a `Σˢ`-term, `a` being the fresh symbol, into `X + MX`.
pub fn evaluate_semifree_term(
    m: &BuiltinMonad,
    a: &str,
    t: &Term,
) -> Result<SemifreeValue<Name, MonadValue<Name>>, MonadError> {
    let sf = Semifree(m.clone());
    match t {
        Term::Var(x) => Ok(SemifreeValue::Pure(x.clone())),
        Term::App(op, args) if op.as_str() == a => {
            if args.len() != 1 {
                return Err(MonadError::Arity { op: a.to_string(), expected: 1, found: args.len() });
            }
            Ok(SemifreeValue::Wrapped(sf.coerce(&evaluate_semifree_term(m, a, &args[0])?)))
        }
        Term::App(op, args) => {
            let args: Vec<_> = args
                .iter()
                .map(|s| Ok(sf.coerce(&evaluate_semifree_term(m, a, s)?)))
                .collect::<Result<_, MonadError>>()?;
            Ok(SemifreeValue::Wrapped(m.apply_op(op.as_str(), &args)?))
        }
    }
}
