//! Universal sentences rendered from forbidden diagrams, with a parser and a
//! model checker by quantifier expansion.
//!
//! Each sentence has the shape `∀x0 ∀x1 ¬(L1 ∧ L2 ∧ ...)` where the `Li`
//! are atomic or negated atomic formulas over terms in the variables.

use std::fmt;

use super::{DiagramType, ForbiddenBasis};
use crate::error::{Error, Result};
use crate::structures::{Elem, Structure, Tuples};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Rel {
        name: String,
        args: Vec<Term>,
        positive: bool,
    },
    Eq {
        lhs: Term,
        rhs: Term,
        positive: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub vars: usize,
    pub literals: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub scale: usize,
    pub sentences: Vec<Sentence>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                let items: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                write!(f, "{name}({})", items.join(","))
            }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Rel {
                name,
                args,
                positive,
            } => {
                let neg = if *positive { "" } else { "¬" };
                if args.is_empty() {
                    write!(f, "{neg}{name}")
                } else {
                    let items: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                    write!(f, "{neg}{name}({})", items.join(","))
                }
            }
            Literal::Eq { lhs, rhs, positive } => {
                write!(f, "{lhs}{}{rhs}", if *positive { "=" } else { "≠" })
            }
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.vars {
            write!(f, "∀x{i} ")?;
        }
        if self.literals.is_empty() {
            return write!(f, "¬(⊤)");
        }
        let items: Vec<String> = self.literals.iter().map(|l| l.to_string()).collect();
        write!(f, "¬({})", items.join(" ∧ "))
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# certified-scale: {}", self.scale)?;
        for s in &self.sentences {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// One term per element of the shape: point elements are variables, the
/// rest are reached by applying functions in vocabulary order to tuples of
/// already named elements.
fn element_terms(d: &DiagramType) -> Vec<Term> {
    let m = d.shape();
    let mut terms: Vec<Option<Term>> = vec![None; m.size()];
    for (i, &p) in d.point().iter().enumerate() {
        if terms[p].is_none() {
            terms[p] = Some(Term::Var(i));
        }
    }
    loop {
        let known: Vec<Elem> = (0..m.size()).filter(|&x| terms[x].is_some()).collect();
        if known.len() == m.size() {
            break;
        }
        let mut progress = false;
        for (fi, f) in m.vocab().functions.iter().enumerate() {
            for idx in Tuples::new(known.len(), f.arity) {
                let args: Vec<Elem> = idx.iter().map(|&i| known[i]).collect();
                let out = m.apply(fi, &args);
                if terms[out].is_none() {
                    let arg_terms = args
                        .iter()
                        .map(|&a| terms[a].clone().expect("known"))
                        .collect();
                    terms[out] = Some(Term::App(f.name.clone(), arg_terms));
                    progress = true;
                }
            }
        }
        assert!(progress, "the point generates the shape");
    }
    terms.into_iter().map(|t| t.expect("named")).collect()
}

/// The negated full diagram of `d`: relation facts and their failures,
/// function values and pairwise distinctness, sorted by rendering.
pub fn diagram_sentence(d: &DiagramType) -> Sentence {
    let m = d.shape();
    let n = m.size();
    let terms = element_terms(d);
    let mut literals = Vec::new();
    for (ri, r) in m.vocab().relations.iter().enumerate() {
        for t in Tuples::new(n, r.arity) {
            if r.irreflexive && t[0] == t[1] {
                continue;
            }
            literals.push(Literal::Rel {
                name: r.name.clone(),
                args: t.iter().map(|&x| terms[x].clone()).collect(),
                positive: m.holds(ri, &t),
            });
        }
    }
    for (fi, f) in m.vocab().functions.iter().enumerate() {
        for t in Tuples::new(n, f.arity) {
            let lhs = Term::App(f.name.clone(), t.iter().map(|&x| terms[x].clone()).collect());
            let rhs = terms[m.apply(fi, &t)].clone();
            if lhs != rhs {
                literals.push(Literal::Eq {
                    lhs,
                    rhs,
                    positive: true,
                });
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            literals.push(Literal::Eq {
                lhs: terms[a].clone(),
                rhs: terms[b].clone(),
                positive: false,
            });
        }
    }
    literals.sort_by_cached_key(|l| l.to_string());
    literals.dedup();
    Sentence {
        vars: d.point().len(),
        literals,
    }
}

pub fn universal_theory(basis: &ForbiddenBasis) -> Theory {
    Theory {
        scale: basis.scale,
        sentences: basis.gamma.iter().map(diagram_sentence).collect(),
    }
}

/// The theory document: header line, then one sentence per line.
pub fn emit_universal_theory(basis: &ForbiddenBasis) -> String {
    universal_theory(basis).to_string()
}

impl Term {
    fn eval(&self, m: &Structure, env: &[Elem]) -> Result<Elem> {
        match self {
            Term::Var(i) => env.get(*i).copied().ok_or_else(|| {
                Error::Diagnostic(format!("unbound variable x{i}"))
            }),
            Term::App(name, args) => {
                let fi = m.vocab().function_index(name).ok_or_else(|| {
                    Error::SymbolMismatch(format!("unknown function `{name}`"))
                })?;
                if m.vocab().functions[fi].arity != args.len() {
                    return Err(Error::SymbolMismatch(format!(
                        "`{name}` applied to {} arguments",
                        args.len()
                    )));
                }
                let vals = args
                    .iter()
                    .map(|t| t.eval(m, env))
                    .collect::<Result<Vec<_>>>()?;
                Ok(m.apply(fi, &vals))
            }
        }
    }
}

impl Literal {
    fn eval(&self, m: &Structure, env: &[Elem]) -> Result<bool> {
        match self {
            Literal::Rel {
                name,
                args,
                positive,
            } => {
                let ri = m.vocab().relation_index(name).ok_or_else(|| {
                    Error::SymbolMismatch(format!("unknown relation `{name}`"))
                })?;
                if m.vocab().relations[ri].arity != args.len() {
                    return Err(Error::SymbolMismatch(format!(
                        "`{name}` applied to {} arguments",
                        args.len()
                    )));
                }
                let vals = args
                    .iter()
                    .map(|t| t.eval(m, env))
                    .collect::<Result<Vec<_>>>()?;
                Ok(m.holds(ri, &vals) == *positive)
            }
            Literal::Eq { lhs, rhs, positive } => {
                Ok((lhs.eval(m, env)? == rhs.eval(m, env)?) == *positive)
            }
        }
    }
}

impl Sentence {
    /// Evaluates by running over every assignment of the variables.
    pub fn satisfied_by(&self, m: &Structure) -> Result<bool> {
        for env in Tuples::new(m.size(), self.vars) {
            let mut all = true;
            for l in &self.literals {
                if !l.eval(m, &env)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Theory {
    pub fn satisfied_by(&self, m: &Structure) -> Result<bool> {
        for s in &self.sentences {
            if !s.satisfied_by(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Forall,
    Not,
    And,
    Eq,
    Neq,
    Top,
    Open,
    Close,
    Comma,
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (_, c) = chars[i];
        let col = i + 1;
        let tok = match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '∀' => Tok::Forall,
            '¬' => Tok::Not,
            '∧' => Tok::And,
            '=' => Tok::Eq,
            '≠' => Tok::Neq,
            '⊤' => Tok::Top,
            '(' => Tok::Open,
            ')' => Tok::Close,
            ',' => Tok::Comma,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((Tok::Ident(word), start + 1));
                continue;
            }
            other => {
                return Err(Error::Diagnostic(format!(
                    "{lineno}:{col}: unexpected character `{other}`"
                )))
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct SentenceParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    vars: Vec<String>,
}

impl SentenceParser {
    fn err(&self, msg: &str) -> Error {
        let col = self.toks.get(self.pos).map_or(0, |t| t.1);
        Error::Diagnostic(format!("{}:{}: {msg}", self.line, col))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {tok:?}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    fn sentence(&mut self) -> Result<Sentence> {
        while self.peek() == Some(&Tok::Forall) {
            self.pos += 1;
            let v = self.ident()?;
            if v != format!("x{}", self.vars.len()) {
                return Err(self.err("variables must be x0, x1, ... in order"));
            }
            self.vars.push(v);
        }
        self.expect(Tok::Not)?;
        self.expect(Tok::Open)?;
        let mut literals = Vec::new();
        if self.peek() == Some(&Tok::Top) {
            self.pos += 1;
        } else {
            literals.push(self.literal()?);
            while self.peek() == Some(&Tok::And) {
                self.pos += 1;
                literals.push(self.literal()?);
            }
        }
        self.expect(Tok::Close)?;
        if self.pos != self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(Sentence {
            vars: self.vars.len(),
            literals,
        })
    }

    fn literal(&mut self) -> Result<Literal> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            let (name, args) = self.application()?;
            return Ok(Literal::Rel {
                name,
                args,
                positive: false,
            });
        }
        let head = self.term()?;
        let positive = match self.peek() {
            Some(Tok::Eq) => true,
            Some(Tok::Neq) => false,
            _ => {
                return match head {
                    Term::App(name, args) => Ok(Literal::Rel {
                        name,
                        args,
                        positive: true,
                    }),
                    Term::Var(_) => Err(self.err("a variable is not a formula")),
                }
            }
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Literal::Eq {
            lhs: head,
            rhs,
            positive,
        })
    }

    fn application(&mut self) -> Result<(String, Vec<Term>)> {
        let name = self.ident()?;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::Open) {
            self.pos += 1;
            args.push(self.term()?);
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.term()?);
            }
            self.expect(Tok::Close)?;
        }
        Ok((name, args))
    }

    fn term(&mut self) -> Result<Term> {
        let (name, args) = self.application()?;
        if args.is_empty() {
            if let Some(i) = self.vars.iter().position(|v| *v == name) {
                return Ok(Term::Var(i));
            }
        }
        Ok(Term::App(name, args))
    }
}

/// Parses a theory document produced by [`emit_universal_theory`].
pub fn parse_theory(text: &str) -> Result<Theory> {
    let mut scale = None;
    let mut sentences = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("certified-scale:") {
                let v = v.trim().parse::<usize>().map_err(|_| {
                    Error::Diagnostic(format!("{lineno}:1: malformed scale header"))
                })?;
                scale = Some(v);
            }
            continue;
        }
        let mut p = SentenceParser {
            toks: lex(trimmed, lineno)?,
            pos: 0,
            line: lineno,
            vars: Vec::new(),
        };
        sentences.push(p.sentence()?);
    }
    let scale =
        scale.ok_or_else(|| Error::Diagnostic("1:1: missing `# certified-scale:` header".into()))?;
    Ok(Theory { scale, sentences })
}
