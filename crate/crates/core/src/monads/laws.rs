//! Elementwise checking of the unit and associativity laws.
//!
//! `MX` and `MMX` are materialized; `MMMX` is streamed by index when the
//! monad is finite and small enough, and enumerated up to a size bound
//! otherwise. The report records which levels were exhaustive.

use rayon::prelude::*;
use serde::Serialize;

use super::{Elem, Monad};

/// Largest `|MMMX|` that is streamed exhaustively.
pub const STREAM_LIMIT: u128 = 1 << 24;

/// Largest `|MX|` or `|MMX|` that is materialized exhaustively.
const MATERIALIZE_LIMIT: u128 = 1 << 16;

/// Size bound used for levels too large to exhaust when none is given.
pub const DEFAULT_BOUND: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelInfo {
    pub level: usize,
    pub elements: u64,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LawFailure {
    pub law: String,
    pub element: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub monad: String,
    pub carrier_size: usize,
    pub bound: Option<usize>,
    pub levels: Vec<LevelInfo>,
    pub checks: u64,
    pub failure_count: u64,
    /// The first failures in canonical order.
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn exhaustive(&self) -> bool {
        self.levels.iter().all(|l| l.exhaustive)
    }
}

const SHOWN_FAILURES: usize = 20;

pub(crate) fn level<M: Monad, T: Elem>(m: &M, xs: &[(T, usize)], bound: Option<usize>) -> (Vec<(M::Value<T>, usize)>, bool) {
    match m.cardinality(xs.len() as u128) {
        Some(c) if c <= MATERIALIZE_LIMIT => {
            let all = m.enumerate(xs, None);
            assert_eq!(all.len() as u128, c, "{} enumerates {} of {c} elements", m.name(), all.len());
            (all, true)
        }
        _ => (m.enumerate(xs, Some(bound.unwrap_or(DEFAULT_BOUND))), false),
    }
}

/// Checks `μ ∘ η_M = id`, `μ ∘ Mη = id` on `MX` and `μ ∘ μ_M = μ ∘ Mμ` on
/// `MMMX`, for `X = xs`. Finite levels are exhausted when small enough;
/// the others use values of size at most `bound` (default 3).
pub fn check_monad_laws<M: Monad, T: Elem>(m: &M, xs: &[T], bound: Option<usize>) -> LawReport {
    let weighted: Vec<(T, usize)> = xs.iter().map(|x| (x.clone(), 1)).collect();
    let (one, ex1) = level(m, &weighted, bound);
    let (two, ex2) = level(m, &one, bound);
    let mut failures: Vec<LawFailure> = Vec::new();
    let mut failure_count = 0u64;
    let mut checks = 0u64;

    for (v, _) in &one {
        checks += 2;
        if m.mu(&m.eta(v.clone())) != *v {
            failure_count += 1;
            failures.push(LawFailure { law: "unit-left".into(), element: format!("{v:?}") });
        }
        if m.mu(&m.fmap(v, &|x| m.eta(x.clone()))) != *v {
            failure_count += 1;
            failures.push(LawFailure { law: "unit-right".into(), element: format!("{v:?}") });
        }
    }

    let assoc = |w: &M::Value<M::Value<M::Value<T>>>| -> Option<LawFailure> {
        let left = m.mu(&m.mu(w));
        let right = m.mu(&m.fmap(w, &|inner| m.mu(inner)));
        (left != right).then(|| LawFailure { law: "associativity".into(), element: format!("{w:?}") })
    };
    let level2: Vec<M::Value<M::Value<T>>> = two.iter().map(|(v, _)| v.clone()).collect();
    let (count3, ex3, bad): (u64, bool, Vec<LawFailure>) = match m.cardinality(two.len() as u128) {
        Some(c) if ex2 && c <= STREAM_LIMIT => {
            let bad = (0..c as u64)
                .into_par_iter()
                .filter_map(|i| assoc(&m.nth(&level2, i as u128)))
                .collect();
            (c as u64, true, bad)
        }
        _ => {
            let three = m.enumerate(&two, Some(bound.unwrap_or(DEFAULT_BOUND)));
            let bad = three.par_iter().filter_map(|(w, _)| assoc(w)).collect();
            (three.len() as u64, false, bad)
        }
    };
    checks += count3;
    failure_count += bad.len() as u64;
    failures.extend(bad);
    failures.sort();
    failures.truncate(SHOWN_FAILURES);

    LawReport {
        monad: m.name(),
        carrier_size: xs.len(),
        bound,
        levels: vec![
            LevelInfo { level: 1, elements: one.len() as u64, exhaustive: ex1 },
            LevelInfo { level: 2, elements: two.len() as u64, exhaustive: ex2 },
            LevelInfo { level: 3, elements: count3, exhaustive: ex3 },
        ],
        checks,
        failure_count,
        failures,
    }
}
