//! Syntactic objects shared by every other module: constants, atoms,
//! constraints in implication normal form, databases, and grounding over
//! the active domain.
//!
//! Quantifiers range over the active domain of a database (constants of the
//! instance, of the constraints, and any explicitly declared constants).
//! Equalities between ground terms are decided by name identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A domain element. Two constants are equal iff their names are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constant(String);

impl Constant {
    /// # Panics
    ///
    /// Panics if `name` is empty.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "constant names must be non-empty");
        Constant(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "variable names must be non-empty");
        Variable(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateSignature {
    pub name: String,
    pub arity: usize,
}

impl fmt::Display for PredicateSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Predicate name to arity. A schema never holds two arities for one name.
pub type Schema = BTreeMap<String, usize>;

/// A predicate applied to constants.
///
/// The derived ordering coincides with the lexicographic order of the
/// printed form `pred(c1,...,ck)` for identifier-shaped names, which is the
/// order used everywhere output is produced.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    predicate: String,
    args: Vec<Constant>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Constant>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }

    /// Shorthand for atoms whose arguments are given as names.
    pub fn of(predicate: &str, args: &[&str]) -> Self {
        GroundAtom::new(predicate, args.iter().map(|a| Constant::new(*a)).collect())
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn args(&self) -> &[Constant] {
        &self.args
    }

    pub fn signature(&self) -> PredicateSignature {
        PredicateSignature {
            name: self.predicate.clone(),
            arity: self.args.len(),
        }
    }
}

fn write_application<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    name: &str,
    args: &[T],
) -> fmt::Result {
    f.write_str(name)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, arg) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_application(f, &self.predicate, &self.args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Constant),
    Var(Variable),
}

impl Term {
    pub fn constant(name: &str) -> Self {
        Term::Const(Constant::new(name))
    }

    pub fn var(name: &str) -> Self {
        Term::Var(Variable::new(name))
    }

    fn substitute(&self, env: &BTreeMap<&Variable, &Constant>) -> Option<Constant> {
        match self {
            Term::Const(c) => Some(c.clone()),
            Term::Var(v) => env.get(v).map(|c| (*c).clone()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => c.fmt(f),
            Term::Var(v) => v.fmt(f),
        }
    }
}

/// A predicate applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn signature(&self) -> PredicateSignature {
        PredicateSignature {
            name: self.predicate.clone(),
            arity: self.args.len(),
        }
    }

    fn substitute(&self, env: &BTreeMap<&Variable, &Constant>) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| t.substitute(env))
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom::new(self.predicate.clone(), args))
    }

    fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_application(f, &self.predicate, &self.args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Atom(Atom),
    Eq(Term, Term),
    Neq(Term, Term),
}

impl Literal {
    fn terms(&self) -> Vec<&Term> {
        match self {
            Literal::Atom(a) => a.args.iter().collect(),
            Literal::Eq(l, r) | Literal::Neq(l, r) => vec![l, r],
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Atom(a) => a.fmt(f),
            Literal::Eq(l, r) => write!(f, "{l} = {r}"),
            Literal::Neq(l, r) => write!(f, "{l} != {r}"),
        }
    }
}

/// A universally closed implication `B1 ∧ … ∧ Bn → H1 ∨ … ∨ Hm`.
///
/// Body literals are atoms and (in)equalities, head literals are atoms and
/// equalities. An empty head is a denial. Every variable must occur in some
/// body atom, which makes satisfaction independent of the quantifier range.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    body: Vec<Literal>,
    head: Vec<Literal>,
}

impl Constraint {
    pub fn new(body: Vec<Literal>, head: Vec<Literal>) -> Result<Self> {
        if let Some(l) = head.iter().find(|l| matches!(l, Literal::Neq(..))) {
            return Err(Error::MalformedConstraint(format!(
                "disequality {l} is not allowed in a constraint head"
            )));
        }
        let bound: BTreeSet<&Variable> = body
            .iter()
            .filter_map(|l| match l {
                Literal::Atom(a) => Some(a.variables()),
                _ => None,
            })
            .flatten()
            .collect();
        for (side, lits) in [("head", &head), ("body", &body)] {
            for term in lits.iter().flat_map(Literal::terms) {
                if let Term::Var(v) = term {
                    if !bound.contains(v) {
                        return Err(Error::MalformedConstraint(format!(
                            "variable {v} in the {side} does not occur in any body atom"
                        )));
                    }
                }
            }
        }
        Ok(Constraint { body, head })
    }

    pub fn denial(body: Vec<Literal>) -> Result<Self> {
        Constraint::new(body, Vec::new())
    }

    pub fn body(&self) -> &[Literal] {
        &self.body
    }

    pub fn head(&self) -> &[Literal] {
        &self.head
    }

    pub fn is_denial(&self) -> bool {
        self.head.is_empty()
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&Variable> {
        let mut seen = Vec::new();
        for term in self.body.iter().chain(&self.head).flat_map(Literal::terms) {
            if let Term::Var(v) = term {
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        seen
    }

    pub fn constants(&self) -> BTreeSet<&Constant> {
        self.body
            .iter()
            .chain(&self.head)
            .flat_map(Literal::terms)
            .filter_map(|t| match t {
                Term::Const(c) => Some(c),
                Term::Var(_) => None,
            })
            .collect()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().chain(&self.head).filter_map(|l| match l {
            Literal::Atom(a) => Some(a),
            _ => None,
        })
    }

    /// The constraint as a closed first-order formula.
    pub fn to_formula(&self) -> Formula {
        let lit = |l: &Literal| match l {
            Literal::Atom(a) => Formula::Atom(a.clone()),
            Literal::Eq(x, y) => Formula::Eq(x.clone(), y.clone()),
            Literal::Neq(x, y) => Formula::negate(Formula::Eq(x.clone(), y.clone())),
        };
        let body = Formula::and(self.body.iter().map(lit).collect());
        let matrix = if self.head.is_empty() {
            Formula::negate(body)
        } else {
            Formula::implies(body, Formula::or(self.head.iter().map(lit).collect()))
        };
        let vars: Vec<Variable> = self.variables().into_iter().cloned().collect();
        if vars.is_empty() {
            matrix
        } else {
            Formula::Forall(vars, Box::new(matrix))
        }
    }

    /// Ground instances as clauses, one per assignment of `domain` constants
    /// to the variables, with equalities decided and tautologies dropped.
    pub fn ground_clauses(&self, domain: &BTreeSet<Constant>) -> BTreeSet<GroundClause> {
        let vars = self.variables();
        let consts: Vec<&Constant> = domain.iter().collect();
        let mut out = BTreeSet::new();
        if !vars.is_empty() && consts.is_empty() {
            return out;
        }
        let mut odometer = vec![0usize; vars.len()];
        loop {
            let env: BTreeMap<&Variable, &Constant> = vars
                .iter()
                .zip(&odometer)
                .map(|(v, &i)| (*v, consts[i]))
                .collect();
            if let Some(clause) = self.instantiate(&env) {
                out.insert(clause);
            }
            // advance the odometer; the last position varies fastest
            let mut pos = odometer.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < consts.len() {
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }

    /// The ground instances whose body atoms all occur in `facts`, found by
    /// joining the body against them instead of enumerating the domain.
    pub(crate) fn ground_within<'a>(
        &'a self,
        facts: &BTreeMap<&str, Vec<&'a GroundAtom>>,
        out: &mut BTreeSet<GroundClause>,
    ) {
        let atoms: Vec<&Atom> = self
            .body
            .iter()
            .filter_map(|l| match l {
                Literal::Atom(a) => Some(a),
                _ => None,
            })
            .collect();
        self.join(&atoms, facts, &mut BTreeMap::new(), out);
    }

    fn join<'a>(
        &'a self,
        atoms: &[&'a Atom],
        facts: &BTreeMap<&str, Vec<&'a GroundAtom>>,
        env: &mut BTreeMap<&'a Variable, &'a Constant>,
        out: &mut BTreeSet<GroundClause>,
    ) {
        let Some((first, rest)) = atoms.split_first() else {
            if let Some(clause) = self.instantiate(env) {
                out.insert(clause);
            }
            return;
        };
        for fact in facts.get(first.predicate.as_str()).into_iter().flatten() {
            if fact.args.len() != first.args.len() {
                continue;
            }
            let mut bound = Vec::new();
            let matches = first.args.iter().zip(&fact.args).all(|(t, c)| match t {
                Term::Const(k) => k == c,
                Term::Var(v) => match env.get(v) {
                    Some(&b) => b == c,
                    None => {
                        env.insert(v, c);
                        bound.push(v);
                        true
                    }
                },
            });
            if matches {
                self.join(rest, facts, env, out);
            }
            for v in bound {
                env.remove(v);
            }
        }
    }

    /// `None` when the instance reduces to `true`.
    fn instantiate(&self, env: &BTreeMap<&Variable, &Constant>) -> Option<GroundClause> {
        let mut body = BTreeSet::new();
        for lit in &self.body {
            match lit {
                Literal::Atom(a) => {
                    body.insert(a.substitute(env)?);
                }
                Literal::Eq(x, y) => {
                    if x.substitute(env)? != y.substitute(env)? {
                        return None;
                    }
                }
                Literal::Neq(x, y) => {
                    if x.substitute(env)? == y.substitute(env)? {
                        return None;
                    }
                }
            }
        }
        let mut head = BTreeSet::new();
        for lit in &self.head {
            match lit {
                Literal::Atom(a) => {
                    head.insert(a.substitute(env)?);
                }
                Literal::Eq(x, y) => {
                    if x.substitute(env)? == y.substitute(env)? {
                        return None;
                    }
                }
                Literal::Neq(..) => unreachable!("rejected by Constraint::new"),
            }
        }
        if body.iter().any(|a| head.contains(a)) {
            return None;
        }
        Some(GroundClause {
            body: body.into_iter().collect(),
            head: head.into_iter().collect(),
        })
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |lits: &[Literal], sep: &str| {
            lits.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(sep)
        };
        if self.head.is_empty() {
            write!(f, "ic :- {}.", join(&self.body, ", "))
        } else if self.body.is_empty() {
            write!(f, "ic -> {}.", join(&self.head, " ; "))
        } else {
            write!(
                f,
                "ic {} -> {}.",
                join(&self.body, ", "),
                join(&self.head, " ; ")
            )
        }
    }
}

/// A ground constraint instance: satisfied iff some body atom is false or
/// some head atom is true. Body and head are sorted, duplicate-free and
/// disjoint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundClause {
    pub body: Vec<GroundAtom>,
    pub head: Vec<GroundAtom>,
}

impl GroundClause {
    pub fn atoms(&self) -> impl Iterator<Item = &GroundAtom> {
        self.body.iter().chain(&self.head)
    }

    pub fn to_formula(&self) -> GroundFormula {
        let atoms = |xs: &[GroundAtom]| xs.iter().cloned().map(GroundFormula::Atom).collect();
        let body = GroundFormula::and(atoms(&self.body));
        match (self.body.is_empty(), self.head.is_empty()) {
            (true, true) => GroundFormula::False,
            (_, true) => GroundFormula::Not(Box::new(body)),
            (true, false) => GroundFormula::or(atoms(&self.head)),
            (false, false) => GroundFormula::Implies(
                Box::new(body),
                Box::new(GroundFormula::or(atoms(&self.head))),
            ),
        }
    }

    /// Classical satisfaction given the set of true atoms.
    pub fn holds_in(&self, true_atoms: &BTreeSet<GroundAtom>) -> bool {
        self.body.iter().any(|a| !true_atoms.contains(a))
            || self.head.iter().any(|a| true_atoms.contains(a))
    }
}

/// First-order formulas over atoms and equalities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<Variable>, Box<Formula>),
}

impl Formula {
    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Conjunction, unwrapping singletons.
    pub fn and(mut fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    /// Disjunction, unwrapping singletons.
    pub fn or(mut fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Variable>, out: &mut BTreeSet<Variable>) {
        let mut term = |t: &Term, bound: &Vec<Variable>| {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.args.iter().for_each(|t| term(t, bound)),
            Formula::Eq(x, y) => {
                term(x, bound);
                term(y, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(vs, f) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                f.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Grounds the universal closure of the formula: quantifiers become
    /// conjunctions over `domain` and equalities are decided by name.
    pub fn ground(&self, domain: &BTreeSet<Constant>) -> GroundFormula {
        let free: Vec<Variable> = self.free_variables().into_iter().collect();
        let closed;
        let target = if free.is_empty() {
            self
        } else {
            closed = Formula::Forall(free, Box::new(self.clone()));
            &closed
        };
        target.ground_in(domain, &mut BTreeMap::new())
    }

    fn ground_in(
        &self,
        domain: &BTreeSet<Constant>,
        env: &mut BTreeMap<Variable, Constant>,
    ) -> GroundFormula {
        let subst = |t: &Term, env: &BTreeMap<Variable, Constant>| match t {
            Term::Const(c) => c.clone(),
            Term::Var(v) => env
                .get(v)
                .cloned()
                .expect("variables are closed before grounding"),
        };
        match self {
            Formula::True => GroundFormula::True,
            Formula::False => GroundFormula::False,
            Formula::Atom(a) => GroundFormula::Atom(GroundAtom::new(
                a.predicate.clone(),
                a.args.iter().map(|t| subst(t, env)).collect(),
            )),
            Formula::Eq(x, y) => {
                if subst(x, env) == subst(y, env) {
                    GroundFormula::True
                } else {
                    GroundFormula::False
                }
            }
            Formula::Not(f) => GroundFormula::Not(Box::new(f.ground_in(domain, env))),
            Formula::And(fs) => {
                GroundFormula::And(fs.iter().map(|f| f.ground_in(domain, env)).collect())
            }
            Formula::Or(fs) => {
                GroundFormula::Or(fs.iter().map(|f| f.ground_in(domain, env)).collect())
            }
            Formula::Implies(a, b) => GroundFormula::Implies(
                Box::new(a.ground_in(domain, env)),
                Box::new(b.ground_in(domain, env)),
            ),
            Formula::Forall(vs, f) => {
                let mut parts = Vec::new();
                Self::expand(vs, f, domain, env, &mut parts);
                GroundFormula::And(parts)
            }
        }
    }

    fn expand(
        vars: &[Variable],
        body: &Formula,
        domain: &BTreeSet<Constant>,
        env: &mut BTreeMap<Variable, Constant>,
        out: &mut Vec<GroundFormula>,
    ) {
        match vars.split_first() {
            None => out.push(body.ground_in(domain, env)),
            Some((v, rest)) => {
                let shadowed = env.get(v).cloned();
                for c in domain {
                    env.insert(v.clone(), c.clone());
                    Self::expand(rest, body, domain, env, out);
                }
                match shadowed {
                    Some(c) => env.insert(v.clone(), c),
                    None => env.remove(v),
                };
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, fs: &[Formula], sep: &str| {
            f.write_str("(")?;
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => a.fmt(f),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Not(x) => write!(f, "¬{x}"),
            Formula::And(fs) => join(f, fs, " ∧ "),
            Formula::Or(fs) => join(f, fs, " ∨ "),
            Formula::Implies(a, b) => write!(f, "({a} → {b})"),
            Formula::Forall(vs, x) => {
                for v in vs {
                    write!(f, "∀{v} ")?;
                }
                write!(f, "{x}")
            }
        }
    }
}

/// Variable-free propositional formulas over ground atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundFormula {
    True,
    False,
    Atom(GroundAtom),
    Not(Box<GroundFormula>),
    And(Vec<GroundFormula>),
    Or(Vec<GroundFormula>),
    Implies(Box<GroundFormula>, Box<GroundFormula>),
}

impl GroundFormula {
    pub fn atom(a: GroundAtom) -> Self {
        GroundFormula::Atom(a)
    }

    pub fn negate(f: GroundFormula) -> Self {
        GroundFormula::Not(Box::new(f))
    }

    pub fn implies(a: GroundFormula, b: GroundFormula) -> Self {
        GroundFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(mut fs: Vec<GroundFormula>) -> Self {
        match fs.len() {
            0 => GroundFormula::True,
            1 => fs.pop().unwrap(),
            _ => GroundFormula::And(fs),
        }
    }

    pub fn or(mut fs: Vec<GroundFormula>) -> Self {
        match fs.len() {
            0 => GroundFormula::False,
            1 => fs.pop().unwrap(),
            _ => GroundFormula::Or(fs),
        }
    }

    pub fn atoms(&self) -> BTreeSet<&GroundAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a GroundAtom>) {
        match self {
            GroundFormula::True | GroundFormula::False => {}
            GroundFormula::Atom(a) => {
                out.insert(a);
            }
            GroundFormula::Not(f) => f.collect_atoms(out),
            GroundFormula::And(fs) | GroundFormula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_atoms(out))
            }
            GroundFormula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for GroundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, fs: &[GroundFormula], sep: &str| {
            f.write_str("(")?;
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            GroundFormula::True => f.write_str("true"),
            GroundFormula::False => f.write_str("false"),
            GroundFormula::Atom(a) => a.fmt(f),
            GroundFormula::Not(x) => write!(f, "¬{x}"),
            GroundFormula::And(fs) => join(f, fs, " ∧ "),
            GroundFormula::Or(fs) => join(f, fs, " ∨ "),
            GroundFormula::Implies(a, b) => write!(f, "({a} → {b})"),
        }
    }
}

/// A fact set paired with integrity constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Database {
    pub instance: BTreeSet<GroundAtom>,
    pub constraints: BTreeSet<Constraint>,
    /// Extra constants the quantifiers range over.
    pub declared_domain: BTreeSet<Constant>,
}

impl Database {
    pub fn new(
        instance: impl IntoIterator<Item = GroundAtom>,
        constraints: impl IntoIterator<Item = Constraint>,
    ) -> Self {
        Database {
            instance: instance.into_iter().collect(),
            constraints: constraints.into_iter().collect(),
            declared_domain: BTreeSet::new(),
        }
    }

    pub fn with_instance(&self, instance: BTreeSet<GroundAtom>) -> Self {
        Database {
            instance,
            constraints: self.constraints.clone(),
            declared_domain: self.declared_domain.clone(),
        }
    }

    /// Predicate signatures used by the instance and the constraints.
    pub fn schema(&self) -> Result<Schema> {
        let mut schema = Schema::new();
        let sigs = self
            .instance
            .iter()
            .map(GroundAtom::signature)
            .chain(self.constraints.iter().flat_map(|c| c.atoms().map(Atom::signature)));
        for sig in sigs {
            match schema.get(&sig.name) {
                Some(&arity) if arity != sig.arity => {
                    return Err(Error::ArityConflict {
                        name: sig.name,
                        expected: arity,
                        found: sig.arity,
                    })
                }
                Some(_) => {}
                None => {
                    schema.insert(sig.name, sig.arity);
                }
            }
        }
        Ok(schema)
    }
}

/// Constants of the instance, the constraints and the declared domain.
pub fn active_domain(db: &Database) -> BTreeSet<Constant> {
    let mut dom: BTreeSet<Constant> = db
        .instance
        .iter()
        .flat_map(|a| a.args().iter().cloned())
        .collect();
    dom.extend(db.constraints.iter().flat_map(|c| c.constants()).cloned());
    dom.extend(db.declared_domain.iter().cloned());
    dom
}

/// Ground formulas of a constraint over `domain`; instances that reduce to
/// `true` are dropped.
pub fn ground(c: &Constraint, domain: &BTreeSet<Constant>) -> BTreeSet<GroundFormula> {
    c.ground_clauses(domain)
        .iter()
        .map(GroundClause::to_formula)
        .collect()
}

/// All ground constraint instances of `db` over its active domain.
pub fn ground_constraints(db: &Database) -> BTreeSet<GroundClause> {
    let domain = active_domain(db);
    db.constraints
        .iter()
        .flat_map(|c| c.ground_clauses(&domain))
        .collect()
}

/// The instance plus every atom occurring in a ground constraint instance.
/// Repairs only ever flip atoms of this set.
pub fn candidate_universe(db: &Database) -> BTreeSet<GroundAtom> {
    let mut universe = db.instance.clone();
    for clause in ground_constraints(db) {
        universe.extend(clause.body);
        universe.extend(clause.head);
    }
    universe
}

/// The ground constraint instances that can be violated by a preferred
/// repair.
///
/// Atoms that are neither stored nor derivable as the head of such an
/// instance from the stored facts are false in every preferred repair:
/// turning them false in any repair keeps every constraint satisfied and
/// only shrinks the change. Instances with such an atom in the body are
/// therefore dropped, and the rest are found by joining bodies against the
/// derivable atoms.
pub(crate) fn ground_reachable(db: &Database) -> BTreeSet<GroundClause> {
    let mut possible = db.instance.clone();
    loop {
        let (clauses, fresh) = {
            let mut facts: BTreeMap<&str, Vec<&GroundAtom>> = BTreeMap::new();
            for atom in &possible {
                facts.entry(atom.predicate()).or_default().push(atom);
            }
            let mut clauses = BTreeSet::new();
            for c in &db.constraints {
                c.ground_within(&facts, &mut clauses);
            }
            let fresh: Vec<GroundAtom> = clauses
                .iter()
                .flat_map(|c| &c.head)
                .filter(|a| !possible.contains(*a))
                .cloned()
                .collect();
            (clauses, fresh)
        };
        if fresh.is_empty() {
            return clauses;
        }
        possible.extend(fresh);
    }
}
