//! The three-valued structure with values `f`, `⊤`, `t`.
//!
//! Conjunction and disjunction are meet and join in the truth order
//! `f < ⊤ < t`; negation swaps `t` and `f` and fixes `⊤`. The designated
//! values are `t` and `⊤`. `⊕` is the least upper bound in the knowledge
//! order, where `⊤` sits above the incomparable `t` and `f`.
//!
//! Databases are characterized here by the valuations `N ≥k H ⊕ M` where `H`
//! is the minimal Herbrand model of the instance and `M` a classical model of
//! the constraints. The `⊤` atoms of such an `N` locate the inconsistency.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use crate::classical::{classical_models, minimal_herbrand, TwoValuation};
use crate::error::{Error, Result};
use crate::kernel::{candidate_universe, ground_constraints, Database, GroundAtom, GroundFormula};
use crate::repair::{is_repair, PreferenceCriterion, Repair};
use crate::search::{satisfiable, Clauses, Lit};

/// Declared in truth order, so the derived `Ord` is `≤t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Three {
    F,
    Top,
    T,
}

impl Three {
    pub const ALL: [Three; 3] = [Three::F, Three::Top, Three::T];

    pub fn and3(self, other: Three) -> Three {
        self.min(other)
    }

    pub fn or3(self, other: Three) -> Three {
        self.max(other)
    }

    pub fn neg3(self) -> Three {
        match self {
            Three::T => Three::F,
            Three::F => Three::T,
            Three::Top => Three::Top,
        }
    }

    /// Least upper bound in the knowledge order.
    pub fn oplus(self, other: Three) -> Three {
        if self == other {
            self
        } else {
            Three::Top
        }
    }

    pub fn leq_t(self, other: Three) -> bool {
        self <= other
    }

    pub fn leq_k(self, other: Three) -> bool {
        self == other || other == Three::Top
    }

    pub fn is_designated(self) -> bool {
        self != Three::F
    }

    pub fn symbol(self) -> char {
        match self {
            Three::T => 't',
            Three::F => 'f',
            Three::Top => '#',
        }
    }
}

impl From<bool> for Three {
    fn from(b: bool) -> Self {
        if b {
            Three::T
        } else {
            Three::F
        }
    }
}

impl Not for Three {
    type Output = Three;

    fn not(self) -> Three {
        self.neg3()
    }
}

impl BitAnd for Three {
    type Output = Three;

    fn bitand(self, rhs: Three) -> Three {
        self.and3(rhs)
    }
}

impl BitOr for Three {
    type Output = Three;

    fn bitor(self, rhs: Three) -> Three {
        self.or3(rhs)
    }
}

impl fmt::Display for Three {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Three::T => "t",
            Three::F => "f",
            Three::Top => "⊤",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThreeValuation {
    values: BTreeMap<GroundAtom, Three>,
}

impl ThreeValuation {
    pub fn get(&self, atom: &GroundAtom) -> Option<Three> {
        self.values.get(atom).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroundAtom, Three)> {
        self.values.iter().map(|(a, v)| (a, *v))
    }

    pub fn universe(&self) -> impl Iterator<Item = &GroundAtom> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn val_set(&self, value: Three) -> BTreeSet<GroundAtom> {
        self.iter()
            .filter(|&(_, v)| v == value)
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// The atoms valued `⊤`.
    pub fn top_set(&self) -> BTreeSet<GroundAtom> {
        self.val_set(Three::Top)
    }

    /// Pointwise `≥k`. Valuations over different universes are incomparable.
    pub fn geq_k(&self, other: &ThreeValuation) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|((a, x), (b, y))| a == b && y.leq_k(*x))
    }
}

impl From<&TwoValuation> for ThreeValuation {
    fn from(v: &TwoValuation) -> Self {
        v.iter().map(|(a, b)| (a.clone(), Three::from(b))).collect()
    }
}

impl FromIterator<(GroundAtom, Three)> for ThreeValuation {
    fn from_iter<I: IntoIterator<Item = (GroundAtom, Three)>>(iter: I) -> Self {
        ThreeValuation {
            values: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for ThreeValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}:{v}")?;
        }
        f.write_str("}")
    }
}

pub fn eval3(n: &ThreeValuation, phi: &GroundFormula) -> Result<Three> {
    Ok(match phi {
        GroundFormula::True => Three::T,
        GroundFormula::False => Three::F,
        GroundFormula::Atom(a) => n.get(a).ok_or_else(|| Error::UniverseMismatch(a.clone()))?,
        GroundFormula::Not(f) => !eval3(n, f)?,
        GroundFormula::And(fs) => {
            let mut acc = Three::T;
            for f in fs {
                acc = acc & eval3(n, f)?;
            }
            acc
        }
        GroundFormula::Or(fs) => {
            let mut acc = Three::F;
            for f in fs {
                acc = acc | eval3(n, f)?;
            }
            acc
        }
        GroundFormula::Implies(a, b) => !eval3(n, a)? | eval3(n, b)?,
    })
}

pub fn satisfies3(n: &ThreeValuation, phi: &GroundFormula) -> Result<bool> {
    Ok(eval3(n, phi)?.is_designated())
}

pub fn is_model3<'a>(
    n: &ThreeValuation,
    theory: impl IntoIterator<Item = &'a GroundFormula>,
) -> Result<bool> {
    for phi in theory {
        if !satisfies3(n, phi)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pointwise `H(p) ⊕ M(p)`.
pub fn knowledge_join(h: &TwoValuation, m: &TwoValuation) -> Result<ThreeValuation> {
    if let Some(stray) = m.universe().find(|a| h.get(a).is_none()) {
        return Err(Error::UniverseMismatch(stray.clone()));
    }
    h.iter()
        .map(|(a, x)| {
            let y = m.get(a).ok_or_else(|| Error::UniverseMismatch(a.clone()))?;
            Ok((a.clone(), Three::from(x).oplus(Three::from(y))))
        })
        .collect()
}

/// `⊤` atoms that are not stored facts.
pub fn insert_of(n: &ThreeValuation, instance: &BTreeSet<GroundAtom>) -> BTreeSet<GroundAtom> {
    n.top_set().difference(instance).cloned().collect()
}

/// `⊤` atoms that are stored facts.
pub fn retract_of(n: &ThreeValuation, instance: &BTreeSet<GroundAtom>) -> BTreeSet<GroundAtom> {
    n.top_set().intersection(instance).cloned().collect()
}

/// The repair read off a three-valued valuation.
pub fn repair_of(n: &ThreeValuation, instance: &BTreeSet<GroundAtom>) -> Repair {
    Repair::new(insert_of(n, instance), retract_of(n, instance))
}

/// Membership of `n` in the set of valuations dominating `H ⊕ M` for some
/// classical model `M` of the constraints. `n` must be defined exactly on
/// the candidate universe of `db`.
pub fn in_mdb(n: &ThreeValuation, db: &Database) -> Result<bool> {
    let universe = candidate_universe(db);
    if let Some(stray) = n.universe().find(|a| !universe.contains(*a)) {
        return Err(Error::UniverseMismatch(stray.clone()));
    }
    if let Some(missing) = universe.iter().find(|a| n.get(a).is_none()) {
        return Err(Error::UniverseMismatch(missing.clone()));
    }
    // Off the ⊤ atoms, H ⊕ M ≤k N forces H(p) = M(p) = N(p).
    for (atom, value) in n.iter() {
        if value != Three::Top && value != Three::from(db.instance.contains(atom)) {
            return Ok(false);
        }
    }
    let index: BTreeMap<&GroundAtom, usize> =
        universe.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut clauses = Clauses::new(universe.len());
    for clause in ground_constraints(db) {
        clauses.add(
            clause
                .body
                .iter()
                .map(|a| Lit { var: index[a], value: false })
                .chain(clause.head.iter().map(|a| Lit { var: index[a], value: true }))
                .collect(),
        );
    }
    let fixed: Vec<Lit> = n
        .iter()
        .filter(|&(_, v)| v != Three::Top)
        .map(|(a, v)| Lit {
            var: index[a],
            value: v == Three::T,
        })
        .collect();
    Ok(satisfiable(&clauses, &fixed))
}

/// The `≤`-maximally consistent members of the dominating-valuation set, as
/// canonical representatives that agree with the minimal Herbrand model off
/// their `⊤` atoms.
///
/// Every member dominates some `H ⊕ M`, and domination can only add `⊤`
/// atoms, so the candidates with the fewest contradictions are among the
/// joins `H ⊕ M` themselves. These are enumerated over all classical models
/// `M` of the ground constraints. Atoms that no ground constraint mentions
/// keep their Herbrand value, since `⊤` on them is never minimal.
pub fn maximally_consistent(
    db: &Database,
    criterion: PreferenceCriterion,
) -> Result<Vec<ThreeValuation>> {
    let universe = candidate_universe(db);
    let clauses = ground_constraints(db);
    let relevant: BTreeSet<GroundAtom> = clauses.iter().flat_map(|c| c.atoms().cloned()).collect();
    let h = minimal_herbrand(&db.instance, &universe)?;
    let h_relevant = minimal_herbrand(
        &db.instance.intersection(&relevant).cloned().collect(),
        &relevant,
    )?;

    let mut tops: BTreeSet<BTreeSet<GroundAtom>> = BTreeSet::new();
    let mut any_model = false;
    for m in classical_models(&clauses, &relevant)? {
        any_model = true;
        tops.insert(knowledge_join(&h_relevant, &m)?.top_set());
    }
    if !any_model {
        return Err(Error::NoModel);
    }

    let mut selected: Vec<BTreeSet<GroundAtom>> = match criterion {
        PreferenceCriterion::Inclusion => tops
            .iter()
            .filter(|t| !tops.iter().any(|s| s.len() < t.len() && s.is_subset(t)))
            .cloned()
            .collect(),
        PreferenceCriterion::Cardinality => {
            let min = tops.iter().map(BTreeSet::len).min().unwrap_or(0);
            tops.into_iter().filter(|t| t.len() == min).collect()
        }
    };
    selected.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    Ok(selected
        .into_iter()
        .map(|top| {
            h.iter()
                .map(|(a, v)| {
                    let value = if top.contains(a) { Three::Top } else { Three::from(v) };
                    (a.clone(), value)
                })
                .collect()
        })
        .collect())
}

/// The valuation that is `⊤` on the repaired atoms, `t` on the remaining
/// facts and `f` elsewhere, over the candidate universe plus the inserted
/// atoms.
pub fn repair_to_model3(db: &Database, r: &Repair) -> Result<ThreeValuation> {
    if !is_repair(db, r) {
        return Err(Error::InvalidRepair(r.to_string()));
    }
    let mut universe = candidate_universe(db);
    universe.extend(r.insert.iter().cloned());
    Ok(universe
        .into_iter()
        .map(|a| {
            let value = if r.insert.contains(&a) || r.retract.contains(&a) {
                Three::Top
            } else {
                Three::from(db.instance.contains(&a))
            };
            (a, value)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Three::{Top, F, T};

    fn a(name: &str) -> GroundAtom {
        GroundAtom::of(name, &[])
    }

    fn val(pairs: &[(&str, Three)]) -> ThreeValuation {
        pairs.iter().map(|(n, v)| (a(n), *v)).collect()
    }

    fn two(pairs: &[(&str, bool)]) -> TwoValuation {
        pairs.iter().map(|(n, v)| (a(n), *v)).collect()
    }

    fn atom(name: &str) -> GroundFormula {
        GroundFormula::atom(a(name))
    }

    fn set(names: &[&str]) -> BTreeSet<GroundAtom> {
        names.iter().map(|n| a(n)).collect()
    }

    fn db(text: &str) -> Database {
        text.parse().unwrap()
    }

    #[test]
    fn connective_examples() {
        assert_eq!(T.and3(Top), Top);
        assert_eq!(Top.neg3(), Top);
        assert_eq!(Top.or3(F), Top);
        assert_eq!(T.oplus(T), T);
        assert_eq!(T.oplus(F), Top);
        assert_eq!(Top.oplus(F), Top);
    }

    #[test]
    fn orders() {
        assert!(F.leq_t(Top) && Top.leq_t(T) && F.leq_t(T));
        assert!(T.leq_k(Top) && F.leq_k(Top));
        assert!(!T.leq_k(F) && !F.leq_k(T) && !Top.leq_k(T));
    }

    #[test]
    fn eval3_examples() {
        let n = val(&[("p", Top), ("q", F)]);
        assert_eq!(eval3(&n, &GroundFormula::implies(atom("p"), atom("q"))).unwrap(), Top);
        let n = val(&[("p", T), ("q", T)]);
        assert_eq!(eval3(&n, &GroundFormula::and(vec![atom("p"), atom("q")])).unwrap(), T);
        let n = val(&[("p", F)]);
        assert_eq!(eval3(&n, &GroundFormula::negate(atom("p"))).unwrap(), T);
        assert!(matches!(eval3(&n, &atom("z")), Err(Error::UniverseMismatch(_))));
    }

    #[test]
    fn designated_satisfaction() {
        assert!(satisfies3(&val(&[("p", Top)]), &atom("p")).unwrap());
        assert!(!satisfies3(&val(&[("p", F)]), &atom("p")).unwrap());
        let n1 = val(&[("p", T), ("q", Top), ("r", T)]);
        let theory = [atom("p"), atom("r"), GroundFormula::implies(atom("p"), atom("q"))];
        assert!(is_model3(&n1, &theory).unwrap());
    }

    #[test]
    fn knowledge_join_examples() {
        let h = two(&[("p", true), ("q", false), ("r", true)]);
        let m1 = two(&[("p", true), ("q", true), ("r", true)]);
        let m2 = two(&[("p", false), ("q", false), ("r", true)]);
        assert_eq!(knowledge_join(&h, &m1).unwrap(), val(&[("p", T), ("q", Top), ("r", T)]));
        assert_eq!(knowledge_join(&h, &m2).unwrap(), val(&[("p", Top), ("q", F), ("r", T)]));
        assert_eq!(knowledge_join(&h, &h).unwrap(), ThreeValuation::from(&h));
        let short = two(&[("p", true)]);
        assert!(matches!(knowledge_join(&h, &short), Err(Error::UniverseMismatch(_))));
    }

    #[test]
    fn insert_and_retract_extraction() {
        let d = set(&["p", "r"]);
        let n1 = val(&[("p", T), ("q", Top), ("r", T)]);
        let n2 = val(&[("p", Top), ("q", F), ("r", T)]);
        assert_eq!((insert_of(&n1, &d), retract_of(&n1, &d)), (set(&["q"]), set(&[])));
        assert_eq!((insert_of(&n2, &d), retract_of(&n2, &d)), (set(&[]), set(&["p"])));
        let n3 = val(&[("p", T), ("q", F)]);
        assert!(insert_of(&n3, &d).is_empty() && retract_of(&n3, &d).is_empty());
    }

    #[test]
    fn mdb_membership_of_small_example() {
        let d = db("p. r. ic p -> q.");
        // every N with N(q) = ⊤ and N(p), N(r) ≥k t
        for p in [T, Top] {
            for r in [T, Top] {
                assert!(in_mdb(&val(&[("p", p), ("q", Top), ("r", r)]), &d).unwrap());
            }
        }
        assert!(in_mdb(&val(&[("p", Top), ("q", F), ("r", T)]), &d).unwrap());
        assert!(!in_mdb(&val(&[("p", T), ("q", F), ("r", T)]), &d).unwrap());
        assert!(!in_mdb(&val(&[("p", F), ("q", F), ("r", T)]), &d).unwrap());
        assert!(in_mdb(&val(&[("p", Top), ("q", Top), ("r", Top)]), &d).unwrap());
        assert!(matches!(in_mdb(&val(&[("p", T)]), &d), Err(Error::UniverseMismatch(_))));
    }

    #[test]
    fn mdb_rejects_plain_herbrand_of_inconsistent_db() {
        let d = db("p. q. r. ic :- p.");
        assert!(!in_mdb(&val(&[("p", T), ("q", T), ("r", T)]), &d).unwrap());
    }

    #[test]
    fn maximally_consistent_small_example() {
        let d = db("p. r. ic p -> q.");
        for c in [PreferenceCriterion::Inclusion, PreferenceCriterion::Cardinality] {
            let got = maximally_consistent(&d, c).unwrap();
            assert_eq!(
                got,
                vec![val(&[("p", Top), ("q", F), ("r", T)]), val(&[("p", T), ("q", Top), ("r", T)])]
            );
        }
    }

    #[test]
    fn maximally_consistent_inclusion_example() {
        let d = db("p(a). p(b). q(a). q(c). ic p(X) -> q(X).");
        let got = maximally_consistent(&d, PreferenceCriterion::Inclusion).unwrap();
        let shown: Vec<String> = got.iter().map(ToString::to_string).collect();
        assert_eq!(
            shown,
            [
                "{p(a):t, p(b):⊤, p(c):f, q(a):t, q(b):f, q(c):t}",
                "{p(a):t, p(b):t, p(c):f, q(a):t, q(b):⊤, q(c):t}",
            ]
        );
    }

    #[test]
    fn maximally_consistent_of_consistent_db_is_herbrand() {
        let d = db("p. ic p -> q. q.");
        let got = maximally_consistent(&d, PreferenceCriterion::Inclusion).unwrap();
        assert_eq!(got, vec![val(&[("p", T), ("q", T)])]);
    }

    #[test]
    fn maximally_consistent_unsatisfiable() {
        let d = db("ic -> p. ic :- p.");
        assert_eq!(
            maximally_consistent(&d, PreferenceCriterion::Inclusion).unwrap_err(),
            Error::NoModel
        );
    }

    #[test]
    fn repair_to_model3_examples() {
        let d = db("p. r. ic p -> q.");
        let r = Repair::new(set(&["q"]), set(&[]));
        assert_eq!(repair_to_model3(&d, &r).unwrap(), val(&[("p", T), ("q", Top), ("r", T)]));
        let bad = Repair::new(set(&[]), set(&[]));
        assert!(matches!(repair_to_model3(&d, &bad), Err(Error::InvalidRepair(_))));

        let consistent = db("p. q. ic p -> q.");
        assert_eq!(
            repair_to_model3(&consistent, &Repair::default()).unwrap(),
            val(&[("p", T), ("q", T)])
        );

        let d2 = db("p(a). p(b). q(a). q(c). ic p(X) -> q(X).");
        let r = Repair::new(BTreeSet::new(), BTreeSet::from([GroundAtom::of("p", &["b"])]));
        let n = repair_to_model3(&d2, &r).unwrap();
        assert_eq!(n.top_set(), BTreeSet::from([GroundAtom::of("p", &["b"])]));
        assert_eq!(repair_of(&n, &d2.instance), r);
    }
}
