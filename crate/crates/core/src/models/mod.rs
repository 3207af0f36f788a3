//! Finite algebras: satisfaction, model enumeration and countermodels, plus
//! semialgebra structure maps and the transforms between the two sides.

mod csp;
mod semialgebra;

pub use csp::{Check, Constraint, Csp};
pub use semialgebra::{
    brute_force_algebras, check_semialgebra, g_transform, h_transform, verify_iso, BruteForce, IsoReport,
    SemialgebraReport, StructureMap,
};

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};
use thiserror::Error;

use crate::term::{Equation, Name, OpSymbol, Term, Theory};

/// Default cap on the candidate table space `Π m^(m^arity)`.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// A finite `Σ`-algebra on `{0, .., m-1}`. Table cells are indexed with the
/// first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAlgebra {
    pub carrier_size: usize,
    pub tables: Vec<(OpSymbol, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("carrier size must be at least 1")]
    EmptyCarrier,
    #[error("search space {carrier}^{exponent} = {size} exceeds the cap {cap}")]
    CapExceeded { carrier: usize, exponent: u128, size: String, cap: u128 },
    #[error("table for `{0}` has the wrong length")]
    TableShape(String),
    #[error("algebra violates `{equation}` at {assignment:?}")]
    Violation { equation: String, assignment: BTreeMap<String, usize> },
}

fn cell_index(m: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &x| acc * m + x)
}

/// All assignments of `vars` to `{0, .., m-1}`, first variable most significant.
pub fn assignments(vars: &[Name], m: usize) -> impl Iterator<Item = BTreeMap<Name, usize>> + '_ {
    let total = m.checked_pow(vars.len() as u32).expect("assignment space fits");
    (0..total).map(move |mut i| {
        let mut out = BTreeMap::new();
        for v in vars.iter().rev() {
            out.insert(v.clone(), i % m);
            i /= m;
        }
        out
    })
}

impl FiniteAlgebra {
    pub fn new(carrier_size: usize, tables: Vec<(OpSymbol, Vec<usize>)>) -> Result<Self, ModelError> {
        if carrier_size == 0 {
            return Err(ModelError::EmptyCarrier);
        }
        for (op, t) in &tables {
            if t.len() != carrier_size.pow(op.arity as u32) || t.iter().any(|&x| x >= carrier_size) {
                return Err(ModelError::TableShape(op.name.to_string()));
            }
        }
        Ok(FiniteAlgebra { carrier_size, tables })
    }

    pub fn table(&self, name: &str) -> Option<&[usize]> {
        self.tables.iter().find(|(op, _)| op.name.as_str() == name).map(|(_, t)| t.as_slice())
    }

    pub fn apply(&self, op: &str, args: &[usize]) -> usize {
        let t = self.table(op).unwrap_or_else(|| panic!("no table for `{op}`"));
        t[cell_index(self.carrier_size, args)]
    }

    pub fn eval(&self, t: &Term, env: &dyn Fn(&Name) -> usize) -> usize {
        match t {
            Term::Var(v) => env(v),
            Term::App(op, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval(a, env)).collect();
                self.apply(op.as_str(), &vals)
            }
        }
    }

    /// First assignment (in lexicographic order) falsifying `eq`.
    pub fn falsifying_assignment(&self, eq: &Equation) -> Option<BTreeMap<Name, usize>> {
        let vars = eq.variables();
        let found = assignments(&vars, self.carrier_size).find(|a| {
            let env = |v: &Name| a[v];
            self.eval(&eq.lhs, &env) != self.eval(&eq.rhs, &env)
        });
        found
    }

    pub fn satisfies(&self, eq: &Equation) -> bool {
        self.falsifying_assignment(eq).is_none()
    }

    /// Checks every equation; on failure names the equation and assignment.
    pub fn check_theory(&self, th: &Theory) -> Result<(), ModelError> {
        for eq in &th.equations {
            if let Some(a) = self.falsifying_assignment(eq) {
                return Err(ModelError::Violation {
                    equation: eq.to_string(),
                    assignment: a.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                });
            }
        }
        Ok(())
    }

    /// The algebra restricted to the symbols of `th`'s signature.
    pub fn restrict(&self, th: &Theory) -> FiniteAlgebra {
        FiniteAlgebra {
            carrier_size: self.carrier_size,
            tables: self.tables.iter().filter(|(op, _)| th.signature.contains(op.name.as_str())).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "carrier_size": self.carrier_size,
            "tables": self.tables.iter().map(|(op, t)| json!({
                "op": op.name.to_string(),
                "arity": op.arity,
                "table": t,
            })).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "carrier {}", self.carrier_size)?;
        for (op, t) in &self.tables {
            write!(f, "; {} = {:?}", op.name, t)?;
        }
        Ok(())
    }
}

/// A term with variables and symbols resolved to indices.
enum Compiled {
    Var(usize),
    App { offset: usize, args: Vec<Compiled> },
}

struct Layout {
    m: usize,
    offsets: HashMap<Name, usize>,
    symbols: Vec<OpSymbol>,
    cells: usize,
}

impl Layout {
    fn new(th: &Theory, m: usize) -> Self {
        let mut offsets = HashMap::new();
        let mut cells = 0;
        for op in th.signature.symbols() {
            offsets.insert(op.name.clone(), cells);
            cells += m.pow(op.arity as u32);
        }
        Layout { m, offsets, symbols: th.signature.symbols().to_vec(), cells }
    }

    fn compile(&self, t: &Term, vars: &[Name]) -> Compiled {
        match t {
            Term::Var(v) => Compiled::Var(vars.iter().position(|w| w == v).expect("bound variable")),
            Term::App(op, args) => Compiled::App {
                offset: self.offsets[op],
                args: args.iter().map(|a| self.compile(a, vars)).collect(),
            },
        }
    }

    fn eval(&self, t: &Compiled, env: &[usize], cells: &[Option<usize>]) -> Result<usize, usize> {
        match t {
            Compiled::Var(i) => Ok(env[*i]),
            Compiled::App { offset, args } => {
                let mut idx = 0;
                for a in args {
                    idx = idx * self.m + self.eval(a, env, cells)?;
                }
                let cell = offset + idx;
                cells[cell].ok_or(cell)
            }
        }
    }

    fn algebra(&self, cells: &[usize]) -> FiniteAlgebra {
        let tables = self
            .symbols
            .iter()
            .map(|op| {
                let start = self.offsets[&op.name];
                (op.clone(), cells[start..start + self.m.pow(op.arity as u32)].to_vec())
            })
            .collect();
        FiniteAlgebra { carrier_size: self.m, tables }
    }
}

/// Table-search exponent `Σ m^arity`, or `None` on overflow.
fn exponent(th: &Theory, m: usize) -> Option<u128> {
    th.signature
        .symbols()
        .iter()
        .try_fold(0u128, |acc, op| acc.checked_add((m as u128).checked_pow(op.arity as u32)?))
}

fn model_csp<'a>(th: &Theory, layout: &'a Layout) -> Csp<'a> {
    let mut csp = Csp::new(layout.cells, layout.m);
    for eq in &th.equations {
        let vars = eq.variables();
        let lhs = std::sync::Arc::new(layout.compile(&eq.lhs, &vars));
        let rhs = std::sync::Arc::new(layout.compile(&eq.rhs, &vars));
        for a in assignments(&vars, layout.m) {
            let env: Vec<usize> = vars.iter().map(|v| a[v]).collect();
            let (lhs, rhs) = (lhs.clone(), rhs.clone());
            csp.push(Box::new(move |cells: &[Option<usize>]| {
                match (layout.eval(&lhs, &env, cells), layout.eval(&rhs, &env, cells)) {
                    (Err(c), _) | (_, Err(c)) => Check::Blocked(c),
                    (Ok(x), Ok(y)) if x == y => Check::Holds,
                    _ => Check::Fails,
                }
            }));
        }
    }
    csp
}

/// All models of `th` on `{0, .., m-1}` in canonical order, refusing when the
/// candidate table space exceeds [`DEFAULT_CAP`].
pub fn enumerate_models(th: &Theory, m: usize) -> Result<Vec<FiniteAlgebra>, ModelError> {
    enumerate_models_capped(th, m, DEFAULT_CAP)
}

pub fn enumerate_models_capped(th: &Theory, m: usize, cap: u128) -> Result<Vec<FiniteAlgebra>, ModelError> {
    if m == 0 {
        return Err(ModelError::EmptyCarrier);
    }
    let exp = exponent(th, m);
    let size = exp.and_then(|e| u32::try_from(e).ok()).and_then(|e| (m as u128).checked_pow(e));
    if size.is_none_or(|s| s > cap) {
        return Err(ModelError::CapExceeded {
            carrier: m,
            exponent: exp.unwrap_or(u128::MAX),
            size: size.map_or_else(|| "more than 2^128".to_string(), |s| s.to_string()),
            cap,
        });
    }
    let layout = Layout::new(th, m);
    let csp = model_csp(th, &layout);
    Ok(csp.solve_all().iter().map(|cells| layout.algebra(cells)).collect())
}

/// Visits models of `th` on `{0, .., m-1}` in canonical order, without a cap,
/// until `visit` returns `false`.
pub fn search_models(th: &Theory, m: usize, visit: &mut dyn FnMut(FiniteAlgebra) -> bool) {
    let layout = Layout::new(th, m);
    let csp = model_csp(th, &layout);
    csp.solve(&mut |cells| visit(layout.algebra(cells)));
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub algebra: FiniteAlgebra,
    pub assignment: BTreeMap<Name, usize>,
}

impl Countermodel {
    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.algebra.to_json(),
            "assignment": self.assignment.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// The first model of `th` (by carrier size, then tables) falsifying
/// `s = t`, with the first falsifying assignment.
pub fn find_countermodel(th: &Theory, s: &Term, t: &Term, max_carrier: usize) -> Option<Countermodel> {
    let eq = Equation::new(s.clone(), t.clone());
    if eq.is_trivial() {
        return None;
    }
    for m in 1..=max_carrier {
        let mut found = None;
        search_models(th, m, &mut |alg| match alg.falsifying_assignment(&eq) {
            Some(assignment) => {
                found = Some(Countermodel { algebra: alg, assignment });
                false
            }
            None => true,
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::dsl::parse_term;
    use crate::semifree::semifree_theory;
    use crate::term::Signature;

    fn unary(table: Vec<usize>) -> FiniteAlgebra {
        FiniteAlgebra::new(2, vec![(OpSymbol::new("a", 1), table)]).unwrap()
    }

    #[test]
    fn satisfaction_examples() {
        let idem = &builtin::idsemifree().equations[0];
        assert!(unary(vec![0, 0]).satisfies(idem));
        let neg = unary(vec![1, 0]);
        assert!(!neg.satisfies(idem));
        assert_eq!(neg.falsifying_assignment(idem).unwrap()[&Name::new("v")], 0);
    }

    #[test]
    fn max_monoid_satisfies_semifree_multiset() {
        let sf = semifree_theory(&builtin::multiset());
        let alg = FiniteAlgebra::new(
            2,
            vec![
                (OpSymbol::new("e", 0), vec![0]),
                (OpSymbol::new("mul", 2), vec![0, 1, 1, 1]),
                (OpSymbol::new("a", 1), vec![0, 1]),
            ],
        )
        .unwrap();
        assert!(alg.check_theory(&sf.result).is_ok());
    }

    #[test]
    fn model_counts() {
        assert_eq!(enumerate_models(&builtin::idsemifree(), 2).unwrap().len(), 3);
        let exc = semifree_theory(&builtin::exception(&["k".into()]));
        assert_eq!(enumerate_models(&exc.result, 2).unwrap().len(), 4);
        let empty = Theory::new("Empty", Signature::new(), Vec::new());
        for m in 1..4 {
            assert_eq!(enumerate_models(&empty, m).unwrap().len(), 1);
        }
    }

    #[test]
    fn models_in_canonical_order() {
        let models = enumerate_models(&builtin::idsemifree(), 3).unwrap();
        let mut sorted = models.clone();
        sorted.sort_by(|a, b| a.tables.iter().map(|t| &t.1).cmp(b.tables.iter().map(|t| &t.1)));
        assert_eq!(models, sorted);
    }

    #[test]
    fn cap_refusal() {
        let err = enumerate_models_capped(&builtin::monoid(), 3, 100).unwrap_err();
        assert!(matches!(err, ModelError::CapExceeded { exponent: 10, .. }), "{err}");
    }

    #[test]
    fn countermodel_examples() {
        let sf = semifree_theory(&builtin::monoid());
        let t = |s: &str| parse_term(s, &sf.result.signature).unwrap();
        let cm = find_countermodel(&sf.result, &t("a x"), &t("x"), 2).unwrap();
        assert_eq!(cm.algebra.table("a"), Some(&[0, 0][..]));
        assert_eq!(cm.algebra.table("mul"), Some(&[0, 0, 0, 0][..]));
        assert_eq!(cm.assignment[&Name::new("x")], 1);

        let mon = builtin::monoid();
        let t = |s: &str| parse_term(s, &mon.signature).unwrap();
        let cm = find_countermodel(&mon, &t("mul(x, y)"), &t("mul(y, x)"), 3).unwrap();
        assert!(cm.algebra.check_theory(&mon).is_ok());
        assert!(find_countermodel(&mon, &t("x"), &t("x"), 3).is_none());
    }
}
