//! First-order syntax: names, signatures, terms, equations, theories and
//! substitutions.
//!
//! Terms are immutable values compared structurally. The [`Ord`] instance on
//! [`Term`] is the canonical order used for every deterministic output: depth
//! first, then root name, then arguments left to right.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An interned identifier. Cloning is a reference-count bump.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(Arc::from(s))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl std::borrow::Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpSymbol {
    pub name: Name,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: impl Into<Name>, arity: usize) -> Self {
        OpSymbol { name: name.into(), arity }
    }
}

impl fmt::Display for OpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.arity)
    }
}

/// Ordered collection of operation symbols with unique names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<OpSymbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a signature, rejecting duplicate names.
    pub fn from_symbols(symbols: impl IntoIterator<Item = OpSymbol>) -> Result<Self, TermError> {
        let mut sig = Signature::new();
        for s in symbols {
            sig.push(s)?;
        }
        Ok(sig)
    }

    pub fn push(&mut self, sym: OpSymbol) -> Result<(), TermError> {
        if sym.name.as_str().is_empty() {
            return Err(TermError::EmptyName);
        }
        if self.get(sym.name.as_str()).is_some() {
            return Err(TermError::DuplicateSymbol(sym.name));
        }
        self.symbols.push(sym);
        Ok(())
    }

    pub fn symbols(&self) -> &[OpSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&OpSymbol> {
        self.symbols.iter().find(|s| s.name.as_str() == name)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name.as_str() == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.get(name).map(|s| s.arity)
    }

    /// Same symbols regardless of declaration order.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        let a: BTreeSet<_> = self.symbols.iter().collect();
        let b: BTreeSet<_> = other.symbols.iter().collect();
        a == b
    }

    /// Checks that every application in `t` names a declared symbol with the
    /// right number of arguments.
    pub fn check_term(&self, t: &Term) -> Result<(), TermError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let arity = self.arity(op.as_str()).ok_or_else(|| TermError::UnknownSymbol(op.clone()))?;
                if arity != args.len() {
                    return Err(TermError::ArityMismatch {
                        op: op.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("operation symbol names must be nonempty")]
    EmptyName,
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(Name),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("`{op}` expects {expected} argument(s), found {found}")]
    ArityMismatch { op: Name, expected: usize, found: usize },
}

/// A first-order term: a variable or an operation applied to arguments.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<Name>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<Name>) -> Term {
        Term::App(op.into(), Vec::new())
    }

    /// Unary application, the common case for the idempotent `a`.
    pub fn unary(op: impl Into<Name>, arg: Term) -> Term {
        Term::App(op.into(), vec![arg])
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// Root symbol of an application.
    pub fn root(&self) -> Option<&Name> {
        match self {
            Term::App(op, _) => Some(op),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    /// Variables have depth 0, constants depth 1, and an application is one
    /// deeper than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Variables in left-to-right order of first occurrence.
    pub fn variables(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Every operation name occurring in the term.
    pub fn symbols(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::App(op, _) = t {
                out.insert(op.clone());
            }
        });
        out
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(op, args) => op.as_str() == name || args.iter().any(|a| a.contains_symbol(name)),
        }
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        for a in self.args() {
            a.visit(f);
        }
    }

    /// All distinct subterms, canonically ordered.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            out.insert(t.clone());
        });
        out
    }

    /// Replaces every variable by `f(name)`.
    pub fn map_vars(&self, f: &impl Fn(&Name) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Puts `op` in front of every variable occurrence: `t[op v / v]`.
    pub fn wrap_vars(&self, op: &Name) -> Term {
        self.map_vars(&|v| Term::unary(op.clone(), Term::Var(v.clone())))
    }

    /// Removes `op` wherever it is applied directly to a variable, also
    /// collapsing stacked occurrences such as `op op v`.
    pub fn strip_wrapped_vars(&self, op: &Name) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(o, args) if o == op && args.len() == 1 => {
                let inner = args[0].strip_wrapped_vars(op);
                if inner.is_var() {
                    inner
                } else {
                    Term::App(o.clone(), vec![inner])
                }
            }
            Term::App(o, args) => Term::App(o.clone(), args.iter().map(|a| a.strip_wrapped_vars(op)).collect()),
        }
    }

    /// Replaces every application of the unary `op` by `definiens[param := arg]`.
    pub fn expand_unary(&self, op: &Name, param: &Name, definiens: &Term) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(o, args) => {
                let args: Vec<Term> = args.iter().map(|a| a.expand_unary(op, param, definiens)).collect();
                if o == op && args.len() == 1 {
                    let arg = args.into_iter().next().expect("unary");
                    Substitution::single(param.clone(), arg).apply(definiens)
                } else {
                    Term::App(o.clone(), args)
                }
            }
        }
    }

    /// The subterm at `path` (argument positions from the root).
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.at_path(rest),
        }
    }

    /// Renames variables to `names[i]` in order of first occurrence, so two
    /// alpha-equivalent terms become identical.
    pub fn canonical_vars(&self, names: &[Name]) -> Term {
        let vars = self.variables();
        let map: BTreeMap<Name, Term> = vars
            .iter()
            .zip(names)
            .map(|(v, n)| (v.clone(), Term::Var(n.clone())))
            .collect();
        Substitution::from_map(map).apply(self)
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth()
            .cmp(&other.depth())
            .then_with(|| match (self, other) {
                (Term::Var(a), Term::Var(b)) => a.cmp(b),
                (Term::App(f, xs), Term::App(g, ys)) => f.cmp(g).then_with(|| xs.cmp(ys)),
                // unreachable with equal depths, kept total anyway
                (Term::Var(_), Term::App(..)) => Ordering::Less,
                (Term::App(..), Term::Var(_)) => Ordering::Greater,
            })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) if args.is_empty() => write!(f, "{op}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Size first, then the canonical order. Used wherever a smallest term is
/// picked.
pub fn size_then_canonical(a: &Term, b: &Term) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn variables(&self) -> Vec<Name> {
        let mut vars = self.lhs.variables();
        for v in self.rhs.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }

    pub fn flipped(&self) -> Equation {
        Equation::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Equation {
        Equation::new(f(&self.lhs), f(&self.rhs))
    }

    /// Alpha-normal form: variables renamed `_0, _1, ...` by first occurrence.
    pub fn alpha_normal(&self) -> Equation {
        let names: Vec<Name> = (0..self.variables().len()).map(|i| Name::from(format!("_{i}"))).collect();
        let map: BTreeMap<Name, Term> = self
            .variables()
            .into_iter()
            .zip(names)
            .map(|(v, n)| (v, Term::Var(n)))
            .collect();
        let s = Substitution::from_map(map);
        Equation::new(s.apply(&self.lhs), s.apply(&self.rhs))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub equations: Vec<Equation>,
}

impl Theory {
    pub fn new(name: impl Into<String>, signature: Signature, equations: Vec<Equation>) -> Self {
        Theory { name: name.into(), signature, equations }
    }

    /// Variables used anywhere in the equations.
    pub fn variable_names(&self) -> BTreeSet<Name> {
        self.equations.iter().flat_map(|e| e.variables()).collect()
    }

    pub fn with_equations(&self, equations: Vec<Equation>) -> Theory {
        Theory::new(self.name.clone(), self.signature.clone(), equations)
    }
}

/// Where a validation problem sits inside a theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Symbol(usize),
    Equation { index: usize, side: Side, path: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Symbol(i) => write!(f, "symbol #{i}"),
            Location::Equation { index, side, path } => {
                let side = match side {
                    Side::Lhs => "lhs",
                    Side::Rhs => "rhs",
                };
                write!(f, "equation #{index} {side} at {path:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: Location,
    pub error: TermError,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.error)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("theory `{theory}` is invalid: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationReport {
    pub theory: String,
    pub violations: Vec<Violation>,
}

/// Checks symbol uniqueness and that every equation is well formed over the
/// signature. Reports every violation, not just the first.
pub fn validate_theory(th: &Theory) -> Result<(), ValidationReport> {
    let mut violations = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, s) in th.signature.symbols().iter().enumerate() {
        if s.name.as_str().is_empty() {
            violations.push(Violation { location: Location::Symbol(i), error: TermError::EmptyName });
        } else if !seen.insert(s.name.clone()) {
            violations.push(Violation {
                location: Location::Symbol(i),
                error: TermError::DuplicateSymbol(s.name.clone()),
            });
        }
    }
    for (index, eq) in th.equations.iter().enumerate() {
        for (side, t) in [(Side::Lhs, &eq.lhs), (Side::Rhs, &eq.rhs)] {
            let mut path = Vec::new();
            collect_violations(&th.signature, t, &mut path, &mut |path, error| {
                violations.push(Violation {
                    location: Location::Equation { index, side, path: path.to_vec() },
                    error,
                })
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ValidationReport { theory: th.name.clone(), violations })
    }
}

fn collect_violations(sig: &Signature, t: &Term, path: &mut Vec<usize>, report: &mut impl FnMut(&[usize], TermError)) {
    if let Term::App(op, args) = t {
        match sig.arity(op.as_str()) {
            None => report(path, TermError::UnknownSymbol(op.clone())),
            Some(n) if n != args.len() => report(
                path,
                TermError::ArityMismatch { op: op.clone(), expected: n, found: args.len() },
            ),
            Some(_) => {}
        }
        for (i, a) in args.iter().enumerate() {
            path.push(i);
            collect_violations(sig, a, path, report);
            path.pop();
        }
    }
}

/// A finite map from variables to terms; unmapped variables are fixed.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(map: BTreeMap<Name, Term>) -> Self {
        Substitution { map }
    }

    pub fn single(v: Name, t: Term) -> Self {
        let mut map = BTreeMap::new();
        map.insert(v, t);
        Substitution { map }
    }

    pub fn insert(&mut self, v: Name, t: Term) {
        self.map.insert(v, t);
    }

    pub fn get(&self, v: &str) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// True when every mapped variable goes to itself.
    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(v, t)| t.as_var() == Some(v))
    }

    pub fn image(&self, v: &Name) -> Term {
        self.map.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone()))
    }

    /// Simultaneous replacement of every variable by its image.
    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.image(v),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// [`Substitution::apply`], after checking every image term against `sig`.
    pub fn apply_checked(&self, t: &Term, sig: &Signature) -> Result<Term, TermError> {
        self.map.values().try_for_each(|img| sig.check_term(img))?;
        Ok(self.apply(t))
    }

    /// `self.then(g)` is the substitution `t ↦ t[self][g]`.
    pub fn then(&self, g: &Substitution) -> Substitution {
        let mut map: BTreeMap<Name, Term> = self.map.iter().map(|(v, t)| (v.clone(), g.apply(t))).collect();
        for (v, t) in &g.map {
            map.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution { map }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Free-standing form of [`Term::depth`].
pub fn depth(t: &Term) -> usize {
    t.depth()
}

/// Free-standing form of [`Term::variables`].
pub fn variables_of(t: &Term) -> Vec<Name> {
    t.variables()
}

/// Applies `f` to `t`, rejecting images that are not well formed over `sig`.
pub fn apply_substitution(t: &Term, f: &Substitution, sig: &Signature) -> Result<Term, TermError> {
    f.apply_checked(t, sig)
}

/// Picks `n` variable names not used as operation names, preferring the
/// conventional `v`, `u, v`, `u, v, w` and falling back to `v1..vn`.
pub fn fresh_variables(n: usize, avoid: &impl Fn(&str) -> bool) -> Vec<Name> {
    let preferred: Vec<&str> = match n {
        0 => vec![],
        1 => vec!["v"],
        2 => vec!["u", "v"],
        3 => vec!["u", "v", "w"],
        _ => vec![],
    };
    if !preferred.is_empty() && preferred.iter().all(|p| !avoid(p)) {
        return preferred.into_iter().map(Name::from).collect();
    }
    let mut out = Vec::with_capacity(n);
    let mut k = 1;
    while out.len() < n {
        let cand = format!("v{k}");
        if !avoid(&cand) {
            out.push(Name::from(cand));
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }
    fn z() -> Term {
        Term::var("z")
    }
    fn e() -> Term {
        Term::constant("e")
    }
    fn mul(a: Term, b: Term) -> Term {
        Term::app("mul", vec![a, b])
    }

    fn monoid_sig() -> Signature {
        Signature::from_symbols([OpSymbol::new("e", 0), OpSymbol::new("mul", 2)]).unwrap()
    }

    #[test]
    fn depth_rules() {
        assert_eq!(depth(&Term::var("v")), 0);
        assert_eq!(depth(&e()), 1);
        assert_eq!(depth(&mul(x(), mul(y(), z()))), 2);
    }

    #[test]
    fn substitution_examples() {
        let sig = Signature::from_symbols([OpSymbol::new("a", 1), OpSymbol::new("e", 0), OpSymbol::new("mul", 2)]).unwrap();
        let f = Substitution::single("x".into(), Term::unary("a", y()));
        assert_eq!(apply_substitution(&x(), &f, &sig).unwrap(), Term::unary("a", y()));
        let f = Substitution::single("x".into(), e());
        assert_eq!(apply_substitution(&mul(x(), y()), &f, &sig).unwrap(), mul(e(), y()));
        let c = mul(e(), e());
        let f = Substitution::single("x".into(), Term::unary("a", y()));
        assert_eq!(apply_substitution(&c, &f, &sig).unwrap(), c);
    }

    #[test]
    fn substitution_rejects_malformed_images() {
        let f = Substitution::single("x".into(), Term::app("mul", vec![y()]));
        let err = apply_substitution(&x(), &f, &monoid_sig()).unwrap_err();
        assert!(matches!(err, TermError::ArityMismatch { expected: 2, found: 1, .. }));
    }

    #[test]
    fn variables_in_first_occurrence_order() {
        assert_eq!(variables_of(&mul(x(), mul(y(), x()))), vec![Name::from("x"), Name::from("y")]);
        assert!(variables_of(&e()).is_empty());
        assert_eq!(variables_of(&z()), vec![Name::from("z")]);
    }

    #[test]
    fn validation_reports_every_violation() {
        let th = Theory::new(
            "Bad",
            monoid_sig(),
            vec![
                Equation::new(mul(x(), e()), x()),
                Equation::new(Term::app("mul", vec![x()]), Term::app("inv", vec![x()])),
            ],
        );
        let report = validate_theory(&th).unwrap_err();
        assert_eq!(report.violations.len(), 2);
        assert!(matches!(report.violations[0].error, TermError::ArityMismatch { .. }));
        assert!(matches!(&report.violations[1].error, TermError::UnknownSymbol(n) if n.as_str() == "inv"));
        assert!(report.to_string().contains("inv"));
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(Signature::from_symbols([OpSymbol::new("e", 0), OpSymbol::new("e", 1)]).is_err());
    }

    #[test]
    fn canonical_order_is_depth_then_name_then_args() {
        let mut ts = vec![mul(e(), x()), x(), e(), mul(x(), e()), Term::var("a")];
        ts.sort();
        assert_eq!(ts, vec![Term::var("a"), x(), e(), mul(x(), e()), mul(e(), x())]);
    }

    #[test]
    fn strip_and_wrap_are_inverse_on_base_terms() {
        let a = Name::from("a");
        let t = mul(x(), mul(e(), y()));
        let wrapped = t.wrap_vars(&a);
        assert_eq!(wrapped.to_string(), "mul(a(x), mul(e, a(y)))");
        assert_eq!(wrapped.strip_wrapped_vars(&a), t);
        let stacked = Term::unary("a", Term::unary("a", x()));
        assert_eq!(stacked.strip_wrapped_vars(&a), x());
    }

    #[test]
    fn expand_unary_substitutes_definiens() {
        let a = Name::from("a");
        let v = Name::from("v");
        let def = mul(Term::Var(v.clone()), e());
        let t = Term::unary("a", Term::unary("a", x()));
        assert_eq!(t.expand_unary(&a, &v, &def), mul(mul(x(), e()), e()));
    }

    #[test]
    fn fresh_variables_avoid_ops() {
        assert_eq!(fresh_variables(2, &|s| s == "e"), vec![Name::from("u"), Name::from("v")]);
        assert_eq!(fresh_variables(1, &|s| s == "v"), vec![Name::from("v1")]);
        assert_eq!(fresh_variables(4, &|_| false).len(), 4);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_term() -> impl Strategy<Value = Term> {
            let leaf = prop_oneof![
                Just(Term::var("x")),
                Just(Term::var("y")),
                Just(Term::var("z")),
                Just(Term::constant("e")),
            ];
            leaf.prop_recursive(4, 24, 2, |inner| {
                prop_oneof![
                    inner.clone().prop_map(|t| Term::unary("a", t)),
                    (inner.clone(), inner).prop_map(|(l, r)| Term::app("mul", vec![l, r])),
                ]
            })
        }

        fn arb_subst() -> impl Strategy<Value = Substitution> {
            proptest::collection::btree_map(
                prop_oneof![Just(Name::from("x")), Just(Name::from("y")), Just(Name::from("z"))],
                arb_term(),
                0..3,
            )
            .prop_map(Substitution::from_map)
        }

        proptest! {
            #[test]
            fn substitution_composes(t in arb_term(), f in arb_subst(), g in arb_subst()) {
                prop_assert_eq!(g.apply(&f.apply(&t)), f.then(&g).apply(&t));
            }

            #[test]
            fn identity_substitution_fixes_terms(t in arb_term()) {
                let id = Substitution::from_map(t.variables().into_iter().map(|v| (v.clone(), Term::Var(v))).collect());
                let image = id.apply(&t);
                prop_assert_eq!(image.depth(), t.depth());
                prop_assert_eq!(image, t);
            }

            #[test]
            fn variables_of_image_are_covered(t in arb_term(), f in arb_subst()) {
                let image_vars: BTreeSet<Name> = f.apply(&t).variables().into_iter().collect();
                let mut allowed = BTreeSet::new();
                for v in t.variables() {
                    allowed.extend(f.image(&v).variables());
                }
                prop_assert!(image_vars.is_subset(&allowed));
            }

            #[test]
            fn canonical_order_is_total_and_consistent(s in arb_term(), t in arb_term()) {
                prop_assert_eq!(s.cmp(&t) == Ordering::Equal, s == t);
                prop_assert_eq!(s.cmp(&t), t.cmp(&s).reverse());
            }
        }
    }
}
