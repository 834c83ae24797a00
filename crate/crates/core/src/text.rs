//! The problem-file format.
//!
//! ```text
//! % comment to end of line
//! domain a, b, c.
//! teaches(c1,n1).
//! ic :- teaches(X,Y), teaches(X,Z), Y != Z.
//! ic p(X) -> q(X) ; r(X).
//! ```
//!
//! Tokens starting with a lowercase letter or a digit are constants (or
//! predicate names), tokens starting with an uppercase letter or `_` are
//! variables. `ic :- L1, ..., Ln.` is a denial; `ic B1, ..., Bn -> H1 ; ... ; Hm.`
//! an implication whose body may be empty. Predicates get their arity from
//! first use.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::{Atom, Constant, Constraint, Database, GroundAtom, Literal, Term, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Const(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Arrow,
    Semi,
    Eq,
    Neq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Const(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (lineno + 1, i + 1);
            let mut emit = |tok, width| {
                out.push(Spanned { tok, line, column });
                width
            };
            i += match c {
                '%' => break,
                c if c.is_whitespace() => 1,
                '(' => emit(Tok::LParen, 1),
                ')' => emit(Tok::RParen, 1),
                ',' => emit(Tok::Comma, 1),
                '.' => emit(Tok::Dot, 1),
                ';' => emit(Tok::Semi, 1),
                '=' => emit(Tok::Eq, 1),
                ':' if chars.get(i + 1) == Some(&'-') => emit(Tok::If, 2),
                '-' if chars.get(i + 1) == Some(&'>') => emit(Tok::Arrow, 2),
                '!' if chars.get(i + 1) == Some(&'=') => emit(Tok::Neq, 2),
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let len = chars[i..]
                        .iter()
                        .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                        .count();
                    let word: String = chars[i..i + len].iter().collect();
                    let tok = if c.is_ascii_uppercase() || c == '_' {
                        Tok::Var(word)
                    } else {
                        Tok::Const(word)
                    };
                    emit(tok, len)
                }
                other => return Err(syntax(line, column, format!("unexpected character {other:?}"))),
            };
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    arities: BTreeMap<String, usize>,
    /// Position just past the last token, for end-of-input errors.
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.column))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.here();
        syntax(line, column, message)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        tok
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn record_arity(&mut self, name: &str, arity: usize, at: (usize, usize)) -> Result<()> {
        match self.arities.get(name) {
            Some(&seen) if seen != arity => Err(syntax(
                at.0,
                at.1,
                Error::ArityConflict {
                    name: name.to_owned(),
                    expected: seen,
                    found: arity,
                }
                .to_string(),
            )),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(name.to_owned(), arity);
                Ok(())
            }
        }
    }

    fn statement(&mut self, db: &mut Database) -> Result<()> {
        match (self.peek(), self.peek2()) {
            (Some(Tok::Const(k)), Some(Tok::Const(_))) if k == "domain" => {
                self.pos += 1;
                loop {
                    match self.bump() {
                        Some(Tok::Const(c)) => {
                            db.declared_domain.insert(Constant::new(c));
                        }
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("a constant"));
                        }
                    }
                    match self.peek() {
                        Some(Tok::Comma) => self.pos += 1,
                        _ => return self.expect(Tok::Dot),
                    }
                }
            }
            (Some(Tok::Const(k)), Some(next))
                if k == "ic" && !matches!(next, Tok::LParen | Tok::Dot) =>
            {
                let start = self.here();
                self.pos += 1;
                let constraint = if self.peek() == Some(&Tok::If) {
                    self.pos += 1;
                    let body = self.literals(Tok::Comma)?;
                    Constraint::denial(body)
                } else {
                    let body = if self.peek() == Some(&Tok::Arrow) {
                        Vec::new()
                    } else {
                        self.literals(Tok::Comma)?
                    };
                    self.expect(Tok::Arrow)?;
                    let head = self.literals(Tok::Semi)?;
                    Constraint::new(body, head)
                };
                self.expect(Tok::Dot)?;
                let constraint = constraint.map_err(|e| syntax(start.0, start.1, e.to_string()))?;
                db.constraints.insert(constraint);
                Ok(())
            }
            (Some(Tok::Const(_)), _) => {
                let at = self.here();
                let atom = self.atom()?;
                self.expect(Tok::Dot)?;
                let args = atom
                    .args
                    .into_iter()
                    .map(|t| match t {
                        Term::Const(c) => Ok(c),
                        Term::Var(v) => Err(syntax(at.0, at.1, format!("fact contains variable {v}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                db.instance.insert(GroundAtom::new(atom.predicate, args));
                Ok(())
            }
            _ => Err(self.unexpected("a fact, a domain declaration or a constraint")),
        }
    }

    fn literals(&mut self, sep: Tok) -> Result<Vec<Literal>> {
        let mut out = vec![self.literal()?];
        while self.peek() == Some(&sep) {
            self.pos += 1;
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn literal(&mut self) -> Result<Literal> {
        let is_atom = matches!(self.peek(), Some(Tok::Const(_)))
            && !matches!(self.peek2(), Some(Tok::Eq | Tok::Neq));
        if is_atom {
            return Ok(Literal::Atom(self.atom()?));
        }
        let left = self.term()?;
        let literal = match self.bump() {
            Some(Tok::Eq) => Literal::Eq(left, self.term()?),
            Some(Tok::Neq) => Literal::Neq(left, self.term()?),
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`=` or `!=`"));
            }
        };
        Ok(literal)
    }

    fn term(&mut self) -> Result<Term> {
        match self.bump() {
            Some(Tok::Const(c)) => Ok(Term::Const(Constant::new(c))),
            Some(Tok::Var(v)) => Ok(Term::Var(Variable::new(v))),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a term"))
            }
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let at = self.here();
        let name = match self.bump() {
            Some(Tok::Const(name)) => name,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a predicate name"));
            }
        };
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            args.push(self.term()?);
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
        }
        self.record_arity(&name, args.len(), at)?;
        Ok(Atom::new(name, args))
    }
}

/// Parses one problem file into a database.
pub fn parse_problem(text: &str) -> Result<Database> {
    let toks = lex(text)?;
    let end = toks.last().map_or((1, 1), |s| (s.line, s.column + 1));
    let mut parser = Parser {
        toks,
        pos: 0,
        arities: BTreeMap::new(),
        end,
    };
    let mut db = Database::default();
    while parser.peek().is_some() {
        parser.statement(&mut db)?;
    }
    Ok(db)
}

/// Canonical text: the domain declaration, then facts and constraints in
/// sorted order, one statement per line.
pub fn print_problem(db: &Database) -> String {
    let mut out = String::new();
    if !db.declared_domain.is_empty() {
        let names: Vec<&str> = db.declared_domain.iter().map(Constant::name).collect();
        writeln!(out, "domain {}.", names.join(", ")).unwrap();
    }
    for fact in &db.instance {
        writeln!(out, "{fact}.").unwrap();
    }
    for c in &db.constraints {
        writeln!(out, "{c}").unwrap();
    }
    out
}

impl FromStr for Database {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_problem(s)
    }
}

impl FromStr for GroundAtom {
    type Err = Error;

    /// Parses a single atom such as `teaches(c1,n1)`.
    fn from_str(s: &str) -> Result<Self> {
        let db = parse_problem(&format!("{s}."))?;
        match (db.instance.len(), db.constraints.is_empty(), db.declared_domain.is_empty()) {
            (1, true, true) => Ok(db.instance.into_iter().next().unwrap()),
            _ => Err(syntax(1, 1, format!("not a single ground atom: {s:?}"))),
        }
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let db = parse_problem(s)?;
        match (db.instance.is_empty(), db.constraints.len()) {
            (true, 1) => Ok(db.constraints.into_iter().next().unwrap()),
            _ => Err(syntax(1, 1, format!("not a single constraint: {s:?}"))),
        }
    }
}
