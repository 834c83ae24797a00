//! Repairs, preference criteria and the preferred-repair search.
//!
//! A repair `(insert, retract)` of `(D, IC)` inserts atoms absent from `D`
//! and retracts atoms of `D` so that the result satisfies `IC`. Repairs are
//! in one-to-one correspondence with classical models of the ground
//! constraints over the candidate universe, so [`preferred_repairs`] searches
//! two-valued assignments and minimizes their distance to the instance.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::classical::{is_consistent, TwoValuation};
use crate::error::{Error, Result};
use crate::kernel::{
    candidate_universe, ground_constraints, ground_reachable, Database, GroundAtom, Schema,
};
use crate::search::{satisfiable, Clauses, Lit, Optimizer};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Repair {
    pub insert: BTreeSet<GroundAtom>,
    pub retract: BTreeSet<GroundAtom>,
}

impl Repair {
    pub fn new(insert: BTreeSet<GroundAtom>, retract: BTreeSet<GroundAtom>) -> Self {
        Repair { insert, retract }
    }

    pub fn size(&self) -> usize {
        self.insert.len() + self.retract.len()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// `insert ∪ retract`, the atoms whose truth value the repair flips.
    pub fn flipped(&self) -> BTreeSet<GroundAtom> {
        self.insert.union(&self.retract).cloned().collect()
    }
}

/// Canonical order: total size first, then the insert list, then the
/// retract list, each compared lexicographically.
impl Ord for Repair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.insert.iter().cmp(other.insert.iter()))
            .then_with(|| self.retract.iter().cmp(other.retract.iter()))
    }
}

impl PartialOrd for Repair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Repair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<GroundAtom>| {
            s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        };
        write!(f, "({{{}}}, {{{}}})", list(&self.insert), list(&self.retract))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PreferenceCriterion {
    /// Componentwise set inclusion.
    #[default]
    Inclusion,
    /// Total number of inserted and retracted atoms.
    Cardinality,
}

impl PreferenceCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            PreferenceCriterion::Inclusion => "inclusion",
            PreferenceCriterion::Cardinality => "cardinality",
        }
    }
}

impl fmt::Display for PreferenceCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PreferenceCriterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inclusion" => Ok(PreferenceCriterion::Inclusion),
            "cardinality" => Ok(PreferenceCriterion::Cardinality),
            other => Err(format!(
                "unknown criterion {other:?}, expected inclusion or cardinality"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Keep only the first `n` repairs in canonical order.
    pub max_solutions: Option<usize>,
    /// Maximum number of branching decisions before giving up.
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_solutions: None,
            node_budget: 1_000_000,
        }
    }
}

pub const DEFAULT_ORACLE_BOUND: usize = 16;

/// Unions the instances, constraints and declared domains of all sources.
pub fn merge<'a>(dbs: impl IntoIterator<Item = &'a Database>) -> Result<Database> {
    let mut merged = Database::default();
    let mut schema = Schema::new();
    for db in dbs {
        for (name, arity) in db.schema()? {
            match schema.get(&name) {
                Some(&seen) if seen != arity => {
                    return Err(Error::SchemaMismatch {
                        name,
                        left: seen,
                        right: arity,
                    })
                }
                _ => {
                    schema.insert(name, arity);
                }
            }
        }
        merged.instance.extend(db.instance.iter().cloned());
        merged.constraints.extend(db.constraints.iter().cloned());
        merged.declared_domain.extend(db.declared_domain.iter().cloned());
    }
    if !constraints_satisfiable(&merged) {
        return Err(Error::IcConflict);
    }
    Ok(merged)
}

/// Whether the ground constraints have a classical model over the candidate
/// universe.
pub fn constraints_satisfiable(db: &Database) -> bool {
    let (_, clauses) = encode(db);
    satisfiable(&clauses, &[])
}

pub fn is_repair(db: &Database, r: &Repair) -> bool {
    r.insert.is_disjoint(&db.instance)
        && r.retract.is_subset(&db.instance)
        && is_consistent(&db.with_instance(repaired_instance(db, r)))
}

fn repaired_instance(db: &Database, r: &Repair) -> BTreeSet<GroundAtom> {
    db.instance
        .union(&r.insert)
        .filter(|a| !r.retract.contains(*a))
        .cloned()
        .collect()
}

pub fn apply_repair(db: &Database, r: &Repair) -> Result<Database> {
    if !is_repair(db, r) {
        return Err(Error::InvalidRepair(r.to_string()));
    }
    Ok(db.with_instance(repaired_instance(db, r)))
}

/// Whether `r1` is strictly preferred to `r2`. A repair is preferred when no
/// other repair is strictly better than it.
pub fn strictly_better(criterion: PreferenceCriterion, r1: &Repair, r2: &Repair) -> bool {
    match criterion {
        PreferenceCriterion::Inclusion => {
            r1.insert.is_subset(&r2.insert) && r1.retract.is_subset(&r2.retract) && r1 != r2
        }
        PreferenceCriterion::Cardinality => r1.size() < r2.size(),
    }
}

/// Variables are the atoms of the candidate universe that occur in some
/// ground constraint, in lexicographic order.
fn encode(db: &Database) -> (Vec<GroundAtom>, Clauses) {
    let ground = ground_reachable(db);
    let atoms: Vec<GroundAtom> = ground
        .iter()
        .flat_map(|c| c.atoms().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&GroundAtom, usize> =
        atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut clauses = Clauses::new(atoms.len());
    for clause in &ground {
        clauses.add(
            clause
                .body
                .iter()
                .map(|a| Lit { var: index[a], value: false })
                .chain(clause.head.iter().map(|a| Lit { var: index[a], value: true }))
                .collect(),
        );
    }
    (atoms, clauses)
}

/// All preferred repairs of `db` in canonical order.
///
/// Cardinality runs a single branch and bound collecting every
/// minimum-distance model. Inclusion repeats that search, blocking every
/// superset of the repairs found so far: a minimum-size unblocked repair
/// has no strict sub-repair, since that would be smaller and itself either
/// unblocked or a superset of a blocked one. The loop ends when no unblocked
/// repair remains.
pub fn preferred_repairs(
    db: &Database,
    criterion: PreferenceCriterion,
    limits: SearchLimits,
) -> Result<Vec<Repair>> {
    let (atoms, mut clauses) = encode(db);
    let preferred: Vec<bool> = atoms.iter().map(|a| db.instance.contains(a)).collect();
    let to_repair = |assignment: &[bool]| {
        let mut r = Repair::default();
        for (atom, (&value, &was)) in atoms.iter().zip(assignment.iter().zip(&preferred)) {
            match (was, value) {
                (false, true) => {
                    r.insert.insert(atom.clone());
                }
                (true, false) => {
                    r.retract.insert(atom.clone());
                }
                _ => {}
            }
        }
        r
    };
    let finish = |mut repairs: Vec<Repair>| {
        repairs.sort();
        if let Some(n) = limits.max_solutions {
            repairs.truncate(n);
        }
        repairs
    };

    let mut found: Vec<Repair> = Vec::new();
    let mut budget = limits.node_budget;
    loop {
        let outcome = Optimizer::new(&clauses, &preferred, budget).run();
        let optimum = match outcome {
            Ok((optimum, nodes)) => {
                budget -= nodes;
                optimum
            }
            Err(best_so_far) => {
                if criterion == PreferenceCriterion::Cardinality {
                    found.extend(best_so_far.iter().map(|s| to_repair(s)));
                }
                return Err(Error::BudgetExhausted {
                    budget: limits.node_budget,
                    partial: finish(found),
                });
            }
        };
        let Some(optimum) = optimum else {
            break;
        };
        let round: Vec<Repair> = optimum.solutions.iter().map(|s| to_repair(s)).collect();
        if criterion == PreferenceCriterion::Cardinality || optimum.cost == 0 {
            found.extend(round);
            break;
        }
        for (r, solution) in round.iter().zip(&optimum.solutions) {
            clauses.add(
                (0..atoms.len())
                    .filter(|&v| solution[v] != preferred[v])
                    .map(|v| Lit { var: v, value: preferred[v] })
                    .collect(),
            );
            debug_assert!(!r.is_empty());
        }
        found.extend(round);
    }
    if found.is_empty() {
        return Err(Error::NoRepairPossible);
    }
    Ok(finish(found))
}

/// `R(DB, ≤)`: the databases obtained from the preferred repairs.
pub fn repaired_databases(
    db: &Database,
    criterion: PreferenceCriterion,
    limits: SearchLimits,
) -> Result<Vec<Database>> {
    preferred_repairs(db, criterion, limits)?
        .iter()
        .map(|r| apply_repair(db, r))
        .collect()
}

/// `(M^t \ D, D \ M^t)` for a classical model `M` of the constraints.
pub fn repair_from_model2(db: &Database, m: &TwoValuation) -> Result<Repair> {
    let t = m.true_set();
    let universe: BTreeSet<GroundAtom> = m.universe().cloned().collect();
    for clause in ground_constraints(db) {
        if let Some(stray) = clause.atoms().find(|a| !universe.contains(*a)) {
            return Err(Error::UniverseMismatch(stray.clone()));
        }
        if !clause.holds_in(&t) {
            return Err(Error::NotAModel);
        }
    }
    Ok(Repair::new(
        t.difference(&db.instance).cloned().collect(),
        db.instance.difference(&t).cloned().collect(),
    ))
}

/// The model true exactly on the repaired instance, over the candidate
/// universe extended with the inserted atoms.
pub fn model2_from_repair(db: &Database, r: &Repair) -> Result<TwoValuation> {
    if !is_repair(db, r) {
        return Err(Error::InvalidRepair(r.to_string()));
    }
    let mut universe = candidate_universe(db);
    universe.extend(r.insert.iter().cloned());
    TwoValuation::from_true_set(&universe, &repaired_instance(db, r))
}

/// Exhaustive reference for [`preferred_repairs`] with the default bound on
/// the candidate universe.
pub fn brute_force_preferred(db: &Database, criterion: PreferenceCriterion) -> Result<Vec<Repair>> {
    brute_force_preferred_bounded(db, criterion, DEFAULT_ORACLE_BOUND)
}

/// Enumerates every pair `insert ⊆ U \ D`, `retract ⊆ D`, keeps those that
/// are repairs and discards the strictly dominated ones.
pub fn brute_force_preferred_bounded(
    db: &Database,
    criterion: PreferenceCriterion,
    bound: usize,
) -> Result<Vec<Repair>> {
    let universe: Vec<GroundAtom> = candidate_universe(db).into_iter().collect();
    if universe.len() > bound {
        return Err(Error::OracleBound {
            size: universe.len(),
            bound,
        });
    }
    let mut repairs = Vec::new();
    for mask in 0u64..(1u64 << universe.len()) {
        let mut r = Repair::default();
        for (i, atom) in universe.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if db.instance.contains(atom) {
                    r.retract.insert(atom.clone());
                } else {
                    r.insert.insert(atom.clone());
                }
            }
        }
        if is_repair(db, &r) {
            repairs.push(r);
        }
    }
    if repairs.is_empty() {
        return Err(Error::NoRepairPossible);
    }
    let mut preferred: Vec<Repair> = repairs
        .iter()
        .filter(|r| !repairs.iter().any(|o| strictly_better(criterion, o, r)))
        .cloned()
        .collect();
    preferred.sort();
    Ok(preferred)
}
