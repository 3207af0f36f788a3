//! The built-in theory library and the name registry shared with the CLI.
//!
//! Names: `identity`, `exception:K=k1,k2`, `list` (alias `monoid`),
//! `multiset`, `finiteset` (alias `powerset`), `state:n=2`, `writermin:n=3`
//! and `idsemifree`. A leading `builtin:` is accepted and ignored.

use std::fmt;

use thiserror::Error;

use crate::monads::MonadId;
use crate::term::{fresh_variables, Equation, Name, OpSymbol, Signature, Term, Theory};

fn sig(symbols: impl IntoIterator<Item = (String, usize)>) -> Signature {
    Signature::from_symbols(symbols.into_iter().map(|(n, a)| OpSymbol::new(n, a))).expect("distinct builtin symbols")
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn mul(a: Term, b: Term) -> Term {
    Term::app("mul", vec![a, b])
}

fn e() -> Term {
    Term::constant("e")
}

/// `Σ = E = ∅`.
pub fn identity() -> Theory {
    Theory::new("Identity", Signature::new(), Vec::new())
}

/// Name of the constant for exception label `k`.
pub fn exception_constant(k: &str) -> Name {
    Name::from(format!("c_{k}"))
}

/// `K`-pointed sets: one constant per label, no equations.
pub fn exception(labels: &[String]) -> Theory {
    Theory::new(
        "Exception",
        sig(labels.iter().map(|k| (exception_constant(k).to_string(), 0))),
        Vec::new(),
    )
}

fn monoid_equations() -> Vec<Equation> {
    vec![
        Equation::new(mul(mul(v("u"), v("v")), v("w")), mul(v("u"), mul(v("v"), v("w")))),
        Equation::new(mul(e(), v("v")), v("v")),
        Equation::new(mul(v("v"), e()), v("v")),
    ]
}

fn monoid_sig() -> Signature {
    sig([("e".to_string(), 0), ("mul".to_string(), 2)])
}

/// Monoids: associativity, then left and right unit.
pub fn monoid() -> Theory {
    Theory::new("Monoid", monoid_sig(), monoid_equations())
}

/// Commutative monoids.
pub fn multiset() -> Theory {
    let mut eqs = monoid_equations();
    eqs.push(Equation::new(mul(v("u"), v("v")), mul(v("v"), v("u"))));
    Theory::new("Multiset", monoid_sig(), eqs)
}

/// Join-semilattices with bottom.
pub fn finiteset() -> Theory {
    let mut th = multiset();
    th.name = "FiniteSet".into();
    th.equations.push(Equation::new(mul(v("v"), v("v")), v("v")));
    th
}

/// Name of the `i`-th (1-based) state-writing operation.
pub fn state_write(i: usize) -> Name {
    Name::from(format!("g{i}"))
}

/// Global state over `n` states: `f : n` reads, `g_i : 1` writes.
pub fn state(n: usize) -> Theory {
    let mut symbols = vec![("f".to_string(), n)];
    symbols.extend((1..=n).map(|i| (state_write(i).to_string(), 1)));
    let g = |i: usize, t: Term| Term::unary(state_write(i), t);
    let vars = fresh_variables(n, &|s| s == "f" || s.starts_with('g'));
    let mut eqs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            eqs.push(Equation::new(g(i, g(j, v("v"))), g(j, v("v"))));
        }
    }
    let f_vars = Term::app("f", vars.iter().cloned().map(Term::Var).collect());
    for (i, vi) in vars.iter().enumerate() {
        eqs.push(Equation::new(g(i + 1, f_vars.clone()), g(i + 1, Term::Var(vi.clone()))));
    }
    eqs.push(Equation::new(Term::app("f", (1..=n).map(|i| g(i, v("v"))).collect()), v("v")));
    Theory::new("State", sig(symbols), eqs)
}

/// Name of the `i`-th idempotent of the min-writer theory.
pub fn writer_level(i: usize) -> Name {
    Name::from(format!("a{i}"))
}

/// `n` idempotents with `a_i a_j v = a_min(i,j) v`.
pub fn writermin(n: usize) -> Theory {
    let a = |i: usize, t: Term| Term::unary(writer_level(i), t);
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            eqs.push(Equation::new(a(i, a(j, v("v"))), a(i.min(j), v("v"))));
        }
    }
    Theory::new("WriterMin", sig((0..n).map(|i| (writer_level(i).to_string(), 1))), eqs)
}

/// One idempotent: `a a v = a v`.
pub fn idsemifree() -> Theory {
    let a = |t: Term| Term::unary("a", t);
    Theory::new(
        "IdSemifree",
        sig([("a".to_string(), 1)]),
        vec![Equation::new(a(a(v("v"))), a(v("v")))],
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Identity,
    Exception(Vec<String>),
    List,
    Multiset,
    FiniteSet,
    State(usize),
    WriterMin(usize),
    IdSemifree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("unknown builtin theory `{0}`")]
    Unknown(String),
    #[error("bad parameter for `{name}`: {message}")]
    Parameter { name: String, message: String },
}

impl Builtin {
    /// Parses `name[:param=value]`, with an optional `builtin:` prefix.
    pub fn parse(spec: &str) -> Result<Builtin, BuiltinError> {
        let spec = spec.strip_prefix("builtin:").unwrap_or(spec);
        let (name, param) = match spec.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (spec, None),
        };
        let bad = |message: &str| BuiltinError::Parameter { name: name.to_string(), message: message.to_string() };
        let value = |key: &str| -> Result<Option<&str>, BuiltinError> {
            match param {
                None => Ok(None),
                Some(p) => match p.split_once('=') {
                    Some((k, val)) if k == key => Ok(Some(val)),
                    _ => Err(bad(&format!("expected `{key}=...`"))),
                },
            }
        };
        let count = |key: &str, default: usize| -> Result<usize, BuiltinError> {
            match value(key)? {
                None => Ok(default),
                Some(s) => match s.parse::<usize>() {
                    Ok(n) if (1..=8).contains(&n) => Ok(n),
                    _ => Err(bad(&format!("`{key}` must be an integer in 1..=8"))),
                },
            }
        };
        let no_param = |b: Builtin| if param.is_some() { Err(bad("takes no parameters")) } else { Ok(b) };
        match name {
            "identity" | "id" => no_param(Builtin::Identity),
            "exception" => {
                let labels: Vec<String> = match value("K")? {
                    None => vec!["k".to_string()],
                    Some(s) => s.split(',').map(str::to_string).collect(),
                };
                let ok = |k: &String| !k.is_empty() && k.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !labels.iter().all(ok) {
                    return Err(bad("labels must be nonempty identifiers"));
                }
                let mut sorted = labels.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != labels.len() {
                    return Err(bad("labels must be distinct"));
                }
                Ok(Builtin::Exception(labels))
            }
            "list" | "monoid" => no_param(Builtin::List),
            "multiset" => no_param(Builtin::Multiset),
            "finiteset" | "powerset" => no_param(Builtin::FiniteSet),
            "state" => Ok(Builtin::State(count("n", 2)?)),
            "writermin" => Ok(Builtin::WriterMin(count("n", 2)?)),
            "idsemifree" => no_param(Builtin::IdSemifree),
            other => Err(BuiltinError::Unknown(other.to_string())),
        }
    }

    pub fn theory(&self) -> Theory {
        match self {
            Builtin::Identity => identity(),
            Builtin::Exception(k) => exception(k),
            Builtin::List => monoid(),
            Builtin::Multiset => multiset(),
            Builtin::FiniteSet => finiteset(),
            Builtin::State(n) => state(*n),
            Builtin::WriterMin(n) => writermin(*n),
            Builtin::IdSemifree => idsemifree(),
        }
    }

    /// The monad this theory presents, when it is one of the built-in monads.
    pub fn monad(&self) -> Option<MonadId> {
        Some(match self {
            Builtin::Identity => MonadId::Identity,
            Builtin::Exception(k) => MonadId::Exception(k.clone()),
            Builtin::List => MonadId::List,
            Builtin::Multiset => MonadId::Multiset,
            Builtin::FiniteSet => MonadId::FiniteSet,
            Builtin::State(n) => MonadId::State(*n),
            Builtin::WriterMin(n) => MonadId::WriterMin(*n),
            Builtin::IdSemifree => return None,
        })
    }

    /// Every built-in that presents a monad, with small default parameters.
    pub fn all_monadic() -> Vec<Builtin> {
        vec![
            Builtin::Identity,
            Builtin::Exception(vec!["k".into()]),
            Builtin::List,
            Builtin::Multiset,
            Builtin::FiniteSet,
            Builtin::State(2),
            Builtin::WriterMin(2),
        ]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Identity => f.write_str("identity"),
            Builtin::Exception(k) => write!(f, "exception:K={}", k.join(",")),
            Builtin::List => f.write_str("list"),
            Builtin::Multiset => f.write_str("multiset"),
            Builtin::FiniteSet => f.write_str("finiteset"),
            Builtin::State(n) => write!(f, "state:n={n}"),
            Builtin::WriterMin(n) => write!(f, "writermin:n={n}"),
            Builtin::IdSemifree => f.write_str("idsemifree"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_theory, print_theory};
    use crate::term::validate_theory;

    #[test]
    fn all_valid_and_round_trip() {
        let mut all = Builtin::all_monadic();
        all.push(Builtin::IdSemifree);
        all.push(Builtin::Exception(vec!["k1".into(), "k2".into()]));
        all.push(Builtin::State(3));
        for b in all {
            let th = b.theory();
            validate_theory(&th).unwrap();
            assert_eq!(parse_theory(&print_theory(&th)).unwrap(), th, "{b}");
        }
    }

    #[test]
    fn registry_names() {
        assert_eq!(Builtin::parse("builtin:state:n=2").unwrap(), Builtin::State(2));
        assert_eq!(Builtin::parse("powerset").unwrap(), Builtin::FiniteSet);
        assert_eq!(
            Builtin::parse("exception:K=k1,k2").unwrap(),
            Builtin::Exception(vec!["k1".into(), "k2".into()])
        );
        assert!(Builtin::parse("state:n=0").is_err());
        assert!(Builtin::parse("list:n=2").is_err());
        assert!(Builtin::parse("nope").is_err());
        for b in Builtin::all_monadic() {
            assert_eq!(Builtin::parse(&b.to_string()).unwrap(), b);
        }
    }

    #[test]
    fn exception_prints_constants_first() {
        let text = print_theory(&exception(&["k1".into(), "k2".into()]));
        assert!(text.starts_with("theory Exception\n  op c_k1 : 0\n  op c_k2 : 0\n"));
    }

    #[test]
    fn state_shape() {
        let th = state(2);
        assert_eq!(th.signature.len(), 3);
        assert_eq!(th.equations.len(), 4 + 2 + 1);
        assert_eq!(th.equations.last().unwrap().to_string(), "f(g1(v), g2(v)) = v");
    }
}
