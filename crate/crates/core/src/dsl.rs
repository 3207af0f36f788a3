//! Text formats: `.theory` sources, terms, proof documents and reports.
//!
//! Theory grammar (whitespace, including line breaks, separates tokens):
//!
//! ```text
//! theory <Name>
//!   op <name> : <arity>
//!   eq <term> = <term>
//! end
//! ```
//!
//! `#` starts a comment running to the end of the line. Any identifier not
//! declared with `op` is a variable. Applications are written `f(x, y)`;
//! unary symbols also accept prefix juxtaposition, so `a a v` reads as
//! `a(a(v))`. Constants are written bare.
//!
//! Reports are JSON objects
//! `{"format": "semifree-lab/1", "kind", "theory", "verdict", "items": [], "metadata": {}}`.
//! Proofs are nested `{"rule", "children": [], "axiom"?, "subst"?, "term"?, "op"?}`
//! with `rule` one of `axiom`, `reflexivity`, `symmetry`, `transitivity`,
//! `congruence`, `substitution`; terms inside proofs are strings in the
//! term syntax above.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::proof::ProofTree;
use crate::term::{Equation, Name, OpSymbol, Signature, Substitution, Term, Theory};

/// Version tag carried by every JSON document.
pub const FORMAT: &str = "semifree-lab/1";

const KEYWORDS: [&str; 4] = ["theory", "op", "eq", "end"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: PathBuf,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file.display(), self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    Lexical(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{op}` expects {expected} argument(s), found {found}")]
    ArityMismatch { op: String, expected: usize, found: usize },
    #[error("operation `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("arity `{0}` is out of range")]
    BadArity(String),
    #[error("`{0}` is a keyword")]
    Keyword(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(s) => write!(f, "number `{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str, file: &Path) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut toks = Vec::new();
    let span = |line, column| SourceSpan { file: file.to_path_buf(), line, column };
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = span(line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
        } else if is_ident_start(c) || c.is_ascii_digit() {
            let ident = is_ident_start(c);
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                let ok = if ident { is_ident_char(c) } else { c.is_ascii_digit() };
                if !ok {
                    break;
                }
                s.push(c);
                chars.next();
                col += 1;
            }
            toks.push((if ident { Tok::Ident(s) } else { Tok::Num(s) }, here));
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '=' => Tok::Equals,
                other => return Err(ParseError { span: here, kind: ParseErrorKind::Lexical(other) }),
            };
            chars.next();
            col += 1;
            toks.push((tok, here));
        }
    }
    toks.push((Tok::Eof, span(line, col)));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1.clone()
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            span: self.span(),
            kind: ParseErrorKind::Unexpected { expected: expected.to_string(), found: self.peek().to_string() },
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.unexpected(expected)
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                Ok((s, self.bump().1))
            }
            Tok::Ident(s) => Err(ParseError { span: self.span(), kind: ParseErrorKind::Keyword(s.clone()) }),
            _ => self.unexpected(expected),
        }
    }

    fn at_term_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str())) || *self.peek() == Tok::LParen
    }

    fn term(&mut self, depth: usize) -> Result<Term, ParseError> {
        // Guards the recursion against adversarial nesting.
        if depth > 512 {
            return self.unexpected("a shallower term");
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let t = self.term(depth + 1)?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(t);
        }
        let (name, span) = self.ident("a term")?;
        let Some(arity) = self.sig.arity(&name) else {
            if *self.peek() == Tok::LParen {
                return Err(ParseError { span, kind: ParseErrorKind::UnknownSymbol(name) });
            }
            return Ok(Term::Var(Name::from(name)));
        };
        if *self.peek() == Tok::LParen {
            if arity == 1 {
                // `a(x)` and `a (x)` are both the application; prefix parses the
                // parenthesised operand the same way.
                let arg = self.term(depth + 1)?;
                return Ok(Term::App(Name::from(name), vec![arg]));
            }
            self.bump();
            let mut args = Vec::new();
            if *self.peek() != Tok::RParen {
                loop {
                    args.push(self.term(depth + 1)?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
            if args.len() != arity {
                return Err(ParseError {
                    span,
                    kind: ParseErrorKind::ArityMismatch { op: name, expected: arity, found: args.len() },
                });
            }
            return Ok(Term::App(Name::from(name), args));
        }
        match arity {
            0 => Ok(Term::App(Name::from(name), Vec::new())),
            1 if self.at_term_start() => {
                let arg = self.term(depth + 1)?;
                Ok(Term::App(Name::from(name), vec![arg]))
            }
            _ => Err(ParseError {
                span,
                kind: ParseErrorKind::ArityMismatch { op: name, expected: arity, found: 0 },
            }),
        }
    }
}

/// Parses a theory source. Errors carry the file name `<input>`.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    parse_theory_named(text, PathBuf::from("<input>"))
}

/// Parses a theory source, attributing spans to `file`.
pub fn parse_theory_named(text: &str, file: PathBuf) -> Result<Theory, ParseError> {
    let toks = lex(text, &file)?;
    // First pass: operation declarations, so equations may precede them.
    let mut sig = Signature::new();
    let mut i = 0;
    while i + 3 < toks.len() {
        if toks[i].0 == Tok::Ident("op".into()) {
            if let (Tok::Ident(name), Tok::Colon, Tok::Num(n)) = (&toks[i + 1].0, &toks[i + 2].0, &toks[i + 3].0) {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(ParseError { span: toks[i + 1].1.clone(), kind: ParseErrorKind::Keyword(name.clone()) });
                }
                let arity: usize = n
                    .parse()
                    .ok()
                    .filter(|&a| a <= 64)
                    .ok_or_else(|| ParseError { span: toks[i + 3].1.clone(), kind: ParseErrorKind::BadArity(n.clone()) })?;
                if sig.push(OpSymbol::new(name.as_str(), arity)).is_err() {
                    return Err(ParseError {
                        span: toks[i + 1].1.clone(),
                        kind: ParseErrorKind::DuplicateSymbol(name.clone()),
                    });
                }
                i += 4;
                continue;
            }
        }
        i += 1;
    }

    let mut p = Parser { toks, pos: 0, sig: &sig };
    p.expect(Tok::Ident("theory".into()), "`theory`")?;
    let (name, _) = p.ident("a theory name")?;
    let mut equations = Vec::new();
    loop {
        match p.peek().clone() {
            Tok::Ident(k) if k == "op" => {
                p.bump();
                p.ident("an operation name")?;
                p.expect(Tok::Colon, "`:`")?;
                match p.peek() {
                    Tok::Num(_) => {
                        p.bump();
                    }
                    _ => return p.unexpected("an arity"),
                }
            }
            Tok::Ident(k) if k == "eq" => {
                p.bump();
                let lhs = p.term(0)?;
                p.expect(Tok::Equals, "`=`")?;
                let rhs = p.term(0)?;
                equations.push(Equation::new(lhs, rhs));
            }
            Tok::Ident(k) if k == "end" => {
                p.bump();
                break;
            }
            _ => return p.unexpected("`op`, `eq` or `end`"),
        }
    }
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(Theory::new(name, sig, equations))
}

/// Parses a single term over `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let toks = lex(text, &PathBuf::from("<term>"))?;
    let mut p = Parser { toks, pos: 0, sig };
    let t = p.term(0)?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of term");
    }
    Ok(t)
}

/// Parses `s = t` over `sig`.
pub fn parse_equation(text: &str, sig: &Signature) -> Result<Equation, ParseError> {
    let toks = lex(text, &PathBuf::from("<equation>"))?;
    let mut p = Parser { toks, pos: 0, sig };
    let lhs = p.term(0)?;
    p.expect(Tok::Equals, "`=`")?;
    let rhs = p.term(0)?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of equation");
    }
    Ok(Equation::new(lhs, rhs))
}

/// Canonical source text: symbols then equations, both in declaration order.
pub fn print_theory(th: &Theory) -> String {
    let mut out = format!("theory {}\n", th.name);
    for s in th.signature.symbols() {
        out.push_str(&format!("  op {} : {}\n", s.name, s.arity));
    }
    for e in &th.equations {
        out.push_str(&format!("  eq {e}\n"));
    }
    out.push_str("end\n");
    out
}

/// A machine-readable result document.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub format: String,
    pub kind: String,
    pub theory: Option<String>,
    pub verdict: String,
    pub items: Vec<Value>,
    pub metadata: Map<String, Value>,
}

impl Report {
    pub fn new(kind: &str, theory: Option<&str>, verdict: &str) -> Self {
        Report {
            format: FORMAT.to_string(),
            kind: kind.to_string(),
            theory: theory.map(str::to_string),
            verdict: verdict.to_string(),
            items: Vec::new(),
            metadata: Map::new(),
        }
    }

    pub fn item(mut self, v: Value) -> Self {
        self.items.push(v);
        self
    }

    pub fn meta(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), v.into());
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFormatError {
    #[error("malformed proof document at {path}: {message}")]
    Shape { path: String, message: String },
    #[error("bad term in proof document at {path}: {source}")]
    Term { path: String, source: ParseError },
}

fn subst_json(f: &Substitution) -> Value {
    let m: Map<String, Value> = f.iter().map(|(v, t)| (v.to_string(), Value::String(t.to_string()))).collect();
    Value::Object(m)
}

/// Serializes a proof tree.
pub fn proof_to_json(p: &ProofTree) -> Value {
    match p {
        ProofTree::Axiom(i) => json!({"rule": "axiom", "axiom": i, "children": []}),
        ProofTree::Reflexivity(t) => json!({"rule": "reflexivity", "term": t.to_string(), "children": []}),
        ProofTree::Symmetry(q) => json!({"rule": "symmetry", "children": [proof_to_json(q)]}),
        ProofTree::Transitivity(a, b) => {
            json!({"rule": "transitivity", "children": [proof_to_json(a), proof_to_json(b)]})
        }
        ProofTree::Congruence(op, ps) => json!({
            "rule": "congruence",
            "op": op.name.to_string(),
            "children": ps.iter().map(proof_to_json).collect::<Vec<_>>(),
        }),
        ProofTree::SubstitutionStep(q, f) => {
            json!({"rule": "substitution", "subst": subst_json(f), "children": [proof_to_json(q)]})
        }
    }
}

/// Reads a proof tree written by [`proof_to_json`]; terms are parsed over `sig`.
pub fn proof_from_json(v: &Value, sig: &Signature) -> Result<ProofTree, ProofFormatError> {
    from_json_at(v, sig, "$")
}

fn from_json_at(v: &Value, sig: &Signature, path: &str) -> Result<ProofTree, ProofFormatError> {
    let shape = |message: &str| ProofFormatError::Shape { path: path.to_string(), message: message.to_string() };
    let obj = v.as_object().ok_or_else(|| shape("expected an object"))?;
    let rule = obj.get("rule").and_then(Value::as_str).ok_or_else(|| shape("missing `rule`"))?;
    let children: Vec<ProofTree> = match obj.get("children") {
        None => Vec::new(),
        Some(Value::Array(cs)) => cs
            .iter()
            .enumerate()
            .map(|(i, c)| from_json_at(c, sig, &format!("{path}.children[{i}]")))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(shape("`children` must be an array")),
    };
    let found = children.len();
    let arity = |n: usize| {
        if found == n {
            Ok(())
        } else {
            Err(shape(&format!("rule `{rule}` takes {n} child(ren), found {found}")))
        }
    };
    let term = |text: &str| {
        parse_term(text, sig).map_err(|source| ProofFormatError::Term { path: path.to_string(), source })
    };
    let mut children = children.into_iter();
    Ok(match rule {
        "axiom" => {
            arity(0)?;
            let i = obj.get("axiom").and_then(Value::as_u64).ok_or_else(|| shape("missing `axiom` index"))?;
            ProofTree::Axiom(i as usize)
        }
        "reflexivity" => {
            arity(0)?;
            let t = obj.get("term").and_then(Value::as_str).ok_or_else(|| shape("missing `term`"))?;
            ProofTree::Reflexivity(term(t)?)
        }
        "symmetry" => {
            arity(1)?;
            ProofTree::Symmetry(Box::new(children.next().unwrap()))
        }
        "transitivity" => {
            arity(2)?;
            let a = children.next().unwrap();
            let b = children.next().unwrap();
            ProofTree::Transitivity(Box::new(a), Box::new(b))
        }
        "congruence" => {
            let op = obj.get("op").and_then(Value::as_str).ok_or_else(|| shape("missing `op`"))?;
            let sym = sig.get(op).cloned().unwrap_or_else(|| OpSymbol::new(op, usize::MAX));
            ProofTree::Congruence(sym, children.collect())
        }
        "substitution" => {
            arity(1)?;
            let m = obj.get("subst").and_then(Value::as_object).ok_or_else(|| shape("missing `subst` object"))?;
            let mut map = BTreeMap::new();
            for (k, t) in m {
                let t = t.as_str().ok_or_else(|| shape("substitution images must be strings"))?;
                map.insert(Name::from(k.as_str()), term(t)?);
            }
            ProofTree::SubstitutionStep(Box::new(children.next().unwrap()), Substitution::from_map(map))
        }
        other => return Err(shape(&format!("unknown rule `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MONOID: &str = "\
# monoids
theory Monoid
  op e : 0
  op mul : 2
  eq mul(mul(x, y), z) = mul(x, mul(y, z))
  eq mul(e, x) = x
  eq mul(x, e) = x
end
";

    #[test]
    fn parses_monoid() {
        let th = parse_theory(MONOID).unwrap();
        assert_eq!(th.name, "Monoid");
        assert_eq!(th.signature.len(), 2);
        assert_eq!(th.signature.arity("mul"), Some(2));
        assert_eq!(th.equations.len(), 3);
        assert_eq!(th.equations[1].to_string(), "mul(e, x) = x");
    }

    #[test]
    fn empty_theory_on_one_line() {
        let th = parse_theory("theory Id end").unwrap();
        assert!(th.signature.is_empty());
        assert!(th.equations.is_empty());
    }

    #[test]
    fn arity_error_has_span() {
        let src = "theory M\nop mul : 2\neq mul(x) = x\nend\n";
        let err = parse_theory(src).unwrap_err();
        assert_eq!(err.span.line, 3);
        assert_eq!(err.span.column, 4);
        assert!(matches!(err.kind, ParseErrorKind::ArityMismatch { expected: 2, found: 1, .. }));
    }

    #[test]
    fn unknown_symbol_is_reported() {
        let err = parse_theory("theory T\neq f(x) = x\nend").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSymbol("f".into()));
        assert_eq!((err.span.line, err.span.column), (2, 4));
    }

    #[test]
    fn carriage_returns_tolerated() {
        let th = parse_theory(&MONOID.replace('\n', "\r\n")).unwrap();
        assert_eq!(th, parse_theory(MONOID).unwrap());
    }

    #[test]
    fn prefix_sugar() {
        let sig = Signature::from_symbols([OpSymbol::new("a", 1)]).unwrap();
        let t = parse_term("a a v", &sig).unwrap();
        assert_eq!(t, Term::unary("a", Term::unary("a", Term::var("v"))));
        assert_eq!(parse_term("a(a(v))", &sig).unwrap(), t);
    }

    #[test]
    fn term_examples() {
        let sig = Signature::from_symbols([OpSymbol::new("e", 0), OpSymbol::new("mul", 2)]).unwrap();
        assert_eq!(
            parse_term("mul(x, e)", &sig).unwrap(),
            Term::app("mul", vec![Term::var("x"), Term::constant("e")])
        );
        let st = Signature::from_symbols([OpSymbol::new("f", 2), OpSymbol::new("g1", 1), OpSymbol::new("g2", 1)])
            .unwrap();
        let t = parse_term("f(g1(x), g2(y))", &st).unwrap();
        assert_eq!(t.depth(), 2);
        assert!(parse_term("mul(x)", &sig).is_err());
        assert!(parse_term("h(x)", &sig).is_err());
    }

    #[test]
    fn round_trip() {
        let th = parse_theory(MONOID).unwrap();
        assert_eq!(parse_theory(&print_theory(&th)).unwrap(), th);
    }

    #[test]
    fn trailing_garbage_rejected() {
        assert!(parse_theory("theory T end end").is_err());
        assert!(parse_theory("theory T").is_err());
        assert!(parse_theory("theory T\neq x = \nend").is_err());
    }

    #[test]
    fn proof_json_round_trip() {
        let sig = Signature::from_symbols([OpSymbol::new("e", 0), OpSymbol::new("mul", 2)]).unwrap();
        let p = ProofTree::Transitivity(
            Box::new(ProofTree::SubstitutionStep(
                Box::new(ProofTree::Axiom(1)),
                Substitution::single("x".into(), Term::app("mul", vec![Term::constant("e"), Term::var("x")])),
            )),
            Box::new(ProofTree::Congruence(
                OpSymbol::new("mul", 2),
                vec![ProofTree::Reflexivity(Term::var("x")), ProofTree::Symmetry(Box::new(ProofTree::Axiom(0)))],
            )),
        );
        let v = proof_to_json(&p);
        assert_eq!(v["rule"], "transitivity");
        assert_eq!(proof_from_json(&v, &sig).unwrap(), p);
    }

    #[test]
    fn report_shape() {
        let r = Report::new("models", Some("T"), "ok").item(json!(1)).meta("carrier", 2);
        let v = r.to_json();
        assert_eq!(v["format"], FORMAT);
        assert_eq!(v["items"][0], 1);
        assert_eq!(v["metadata"]["carrier"], 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn never_panics(s in "\\PC{0,80}") {
                if let Err(e) = parse_theory(&s) {
                    prop_assert!(e.span.line >= 1 && e.span.column >= 1);
                }
            }

            #[test]
            fn never_panics_on_grammar_like_input(
                parts in proptest::collection::vec(
                    prop_oneof![
                        Just("theory"), Just("op"), Just("eq"), Just("end"), Just("a"), Just("mul"),
                        Just("x"), Just("("), Just(")"), Just(","), Just(":"), Just("="), Just("2"),
                        Just("1"), Just("\n"), Just("#"),
                    ],
                    0..40,
                )
            ) {
                let s = parts.join(" ");
                if let Err(e) = parse_theory(&s) {
                    prop_assert!(e.span.line >= 1 && e.span.column >= 1);
                }
            }
        }
    }
}
