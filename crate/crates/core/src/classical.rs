//! Two-valued Herbrand semantics under the closed world assumption.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{
    active_domain, candidate_universe, ground_constraints, Database, Formula, GroundAtom,
    GroundClause, GroundFormula,
};

/// A total assignment of `t`/`f` to a finite atom universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoValuation {
    values: BTreeMap<GroundAtom, bool>,
}

impl TwoValuation {
    /// The valuation over `universe` that is true exactly on `true_atoms`.
    pub fn from_true_set(
        universe: &BTreeSet<GroundAtom>,
        true_atoms: &BTreeSet<GroundAtom>,
    ) -> Result<Self> {
        if let Some(stray) = true_atoms.difference(universe).next() {
            return Err(Error::UniverseMismatch(stray.clone()));
        }
        Ok(TwoValuation {
            values: universe
                .iter()
                .map(|a| (a.clone(), true_atoms.contains(a)))
                .collect(),
        })
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<bool> {
        self.values.get(atom).copied()
    }

    pub fn universe(&self) -> impl Iterator<Item = &GroundAtom> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroundAtom, bool)> {
        self.values.iter().map(|(a, v)| (a, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Atoms mapped to `value`.
    pub fn val_set(&self, value: bool) -> BTreeSet<GroundAtom> {
        self.iter()
            .filter(|&(_, v)| v == value)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn true_set(&self) -> BTreeSet<GroundAtom> {
        self.val_set(true)
    }
}

impl FromIterator<(GroundAtom, bool)> for TwoValuation {
    fn from_iter<I: IntoIterator<Item = (GroundAtom, bool)>>(iter: I) -> Self {
        TwoValuation {
            values: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for TwoValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}:{}", if v { 't' } else { 'f' })?;
        }
        f.write_str("}")
    }
}

/// The valuation that is true exactly on the stored facts.
pub fn minimal_herbrand(
    instance: &BTreeSet<GroundAtom>,
    universe: &BTreeSet<GroundAtom>,
) -> Result<TwoValuation> {
    TwoValuation::from_true_set(universe, instance)
}

pub fn evaluate2(v: &TwoValuation, phi: &GroundFormula) -> Result<bool> {
    Ok(match phi {
        GroundFormula::True => true,
        GroundFormula::False => false,
        GroundFormula::Atom(a) => v
            .get(a)
            .ok_or_else(|| Error::UniverseMismatch(a.clone()))?,
        GroundFormula::Not(f) => !evaluate2(v, f)?,
        GroundFormula::And(fs) => {
            let mut acc = true;
            for f in fs {
                acc &= evaluate2(v, f)?;
            }
            acc
        }
        GroundFormula::Or(fs) => {
            let mut acc = false;
            for f in fs {
                acc |= evaluate2(v, f)?;
            }
            acc
        }
        GroundFormula::Implies(a, b) => !evaluate2(v, a)? || evaluate2(v, b)?,
    })
}

/// Whether the minimal Herbrand model of `instance` satisfies the universal
/// closure of `phi`, with quantifiers ranging over the active domain of `db`.
pub fn entails(instance: &BTreeSet<GroundAtom>, phi: &Formula, db: &Database) -> Result<bool> {
    let ground = phi.ground(&active_domain(db));
    let mut universe = candidate_universe(db);
    universe.extend(instance.iter().cloned());
    universe.extend(ground.atoms().into_iter().cloned());
    let h = minimal_herbrand(instance, &universe)?;
    evaluate2(&h, &ground)
}

/// Whether every constraint follows from the instance and the constraints
/// are classically satisfiable. The minimal Herbrand model itself witnesses
/// satisfiability whenever every constraint holds in it, so only the first
/// condition needs checking.
pub fn is_consistent(db: &Database) -> bool {
    ground_constraints(db)
        .iter()
        .all(|clause| clause.holds_in(&db.instance))
}

/// Every two-valued valuation of `universe` satisfying all `clauses`.
///
/// Models are produced in lexicographic order of their characteristic vector
/// (atoms in universe order, `f` before `t`).
pub fn classical_models(
    clauses: &BTreeSet<GroundClause>,
    universe: &BTreeSet<GroundAtom>,
) -> Result<ModelIter> {
    let atoms: Vec<GroundAtom> = universe.iter().cloned().collect();
    let index: BTreeMap<&GroundAtom, usize> =
        atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    // A clause is checked once, when the last of its atoms gets a value.
    let mut checks: Vec<Vec<(Vec<usize>, Vec<usize>)>> = vec![Vec::new(); atoms.len()];
    let mut always_false = false;
    for clause in clauses {
        let lookup = |xs: &[GroundAtom]| {
            xs.iter()
                .map(|a| {
                    index
                        .get(a)
                        .copied()
                        .ok_or_else(|| Error::UniverseMismatch(a.clone()))
                })
                .collect::<Result<Vec<_>>>()
        };
        let body = lookup(&clause.body)?;
        let head = lookup(&clause.head)?;
        match body.iter().chain(&head).max() {
            Some(&last) => checks[last].push((body, head)),
            None => always_false = true,
        }
    }
    Ok(ModelIter {
        atoms,
        checks,
        values: Vec::new(),
        done: always_false,
    })
}

/// Depth-first enumeration of classical models; see [`classical_models`].
pub struct ModelIter {
    atoms: Vec<GroundAtom>,
    checks: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
    values: Vec<bool>,
    done: bool,
}

impl ModelIter {
    fn consistent_at(&self, depth: usize) -> bool {
        self.checks[depth].iter().all(|(body, head)| {
            body.iter().any(|&i| !self.values[i]) || head.iter().any(|&i| self.values[i])
        })
    }

    /// Moves to the next partial assignment in depth-first order, skipping
    /// subtrees whose prefix already falsifies a clause.
    fn advance(&mut self, mut descend: bool) -> bool {
        loop {
            if descend && self.values.len() < self.atoms.len() {
                self.values.push(false);
            } else {
                // backtrack to the deepest `false` and flip it
                while let Some(last) = self.values.pop() {
                    if !last {
                        self.values.push(true);
                        break;
                    }
                }
                if self.values.is_empty() {
                    return false;
                }
            }
            let depth = self.values.len() - 1;
            descend = self.consistent_at(depth);
            if descend && self.values.len() == self.atoms.len() {
                return true;
            }
        }
    }
}

impl Iterator for ModelIter {
    type Item = TwoValuation;

    fn next(&mut self) -> Option<TwoValuation> {
        if self.done {
            return None;
        }
        let found = if self.atoms.is_empty() {
            // the single empty valuation
            self.done = true;
            true
        } else {
            let fresh = self.values.is_empty();
            let ok = self.advance(fresh);
            self.done = !ok;
            ok
        };
        found.then(|| {
            self.atoms
                .iter()
                .cloned()
                .zip(self.values.iter().copied())
                .collect()
        })
    }
}

/// Symmetric difference of two fact sets. Under the closed world assumption
/// the ground-atom theory of an instance is the instance itself.
pub fn dist(d1: &BTreeSet<GroundAtom>, d2: &BTreeSet<GroundAtom>) -> BTreeSet<GroundAtom> {
    d1.symmetric_difference(d2).cloned().collect()
}
