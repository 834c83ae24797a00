use std::collections::BTreeSet;

use dbrepair::*;
use proptest::prelude::*;

// Fixed schema: p/1, q/1, s/0, r/2 over constants {a, b}; the candidate
// universe never exceeds 9 atoms.
const PREDS: [(&str, usize); 4] = [("p", 1), ("q", 1), ("s", 0), ("r", 2)];
const VARS: [&str; 2] = ["X", "Y"];

fn arb_ground_atom() -> impl Strategy<Value = GroundAtom> {
    (0..PREDS.len(), prop::collection::vec(prop::sample::select(vec!["a", "b"]), 2)).prop_map(
        |(i, cs)| {
            let (name, arity) = PREDS[i];
            GroundAtom::of(name, &cs[..arity])
        },
    )
}

fn arb_atom(allow_consts: bool) -> impl Strategy<Value = Atom> {
    let term = if allow_consts {
        prop::sample::select(vec!["X", "Y", "a", "b"]).boxed()
    } else {
        prop::sample::select(VARS.to_vec()).boxed()
    };
    (0..PREDS.len(), prop::collection::vec(term, 2)).prop_map(|(i, ts)| {
        let (name, arity) = PREDS[i];
        let args = ts[..arity]
            .iter()
            .map(|t| {
                if t.starts_with(char::is_uppercase) {
                    Term::var(t)
                } else {
                    Term::constant(t)
                }
            })
            .collect();
        Atom::new(name, args)
    })
}

fn arb_constraint() -> impl Strategy<Value = Option<Constraint>> {
    (
        prop::collection::vec(arb_atom(true), 0..3),
        prop::option::of(any::<bool>()),
        prop::collection::vec(arb_atom(true), 0..3),
    )
        .prop_map(|(body, neq, head)| {
            let mut body: Vec<Literal> = body.into_iter().map(Literal::Atom).collect();
            if let Some(eq) = neq {
                let (x, y) = (Term::var("X"), Term::var("Y"));
                body.push(if eq { Literal::Eq(x, y) } else { Literal::Neq(x, y) });
            }
            let head = head.into_iter().map(Literal::Atom).collect::<Vec<_>>();
            if body.is_empty() && head.is_empty() {
                return None;
            }
            Constraint::new(body, head).ok()
        })
}

fn arb_db() -> impl Strategy<Value = Database> {
    (
        prop::collection::btree_set(arb_ground_atom(), 0..6),
        prop::collection::vec(arb_constraint(), 0..4),
    )
        .prop_map(|(instance, cs)| Database::new(instance, cs.into_iter().flatten()))
}

fn limits() -> SearchLimits {
    SearchLimits::default()
}

fn all_subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn active_domain_is_monotone(db in arb_db(), extra in arb_ground_atom()) {
        let before = active_domain(&db);
        let mut bigger = db.clone();
        bigger.instance.insert(extra);
        prop_assert!(before.is_subset(&active_domain(&bigger)));
    }

    #[test]
    fn grounding_stays_in_domain(c in arb_constraint(), dom in prop::collection::btree_set(prop::sample::select(vec!["a", "b", "c"]), 0..3)) {
        let Some(c) = c else { return Ok(()) };
        let dom: BTreeSet<Constant> = dom.into_iter().map(Constant::new).collect();
        let mut allowed = dom.clone();
        allowed.extend(c.constants().into_iter().cloned());
        for clause in c.ground_clauses(&dom) {
            for atom in clause.atoms() {
                prop_assert!(atom.args().iter().all(|k| allowed.contains(k)));
            }
        }
    }

    #[test]
    fn universe_contains_instance(db in arb_db()) {
        prop_assert!(db.instance.is_subset(&candidate_universe(&db)));
    }

    /// Clause grounding (equalities reduced early) agrees with grounding the
    /// closed formula and evaluating it, under arbitrary valuations.
    #[test]
    fn grounding_commutes_with_evaluation(db in arb_db(), seed in any::<u64>()) {
        let dom = active_domain(&db);
        let candidates: Vec<GroundAtom> = candidate_universe(&db).into_iter().collect();
        let truth: BTreeSet<GroundAtom> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| seed >> (i % 64) & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect();
        // tautological instances mention atoms outside the candidate universe
        let mut universe: BTreeSet<GroundAtom> = candidates.iter().cloned().collect();
        for c in &db.constraints {
            universe.extend(c.to_formula().ground(&dom).atoms().into_iter().cloned());
        }
        let v = TwoValuation::from_true_set(&universe, &truth).unwrap();
        for c in &db.constraints {
            let by_clauses = ground(c, &dom).iter().all(|g| evaluate2(&v, g).unwrap());
            let by_formula = evaluate2(&v, &c.to_formula().ground(&dom)).unwrap();
            prop_assert_eq!(by_clauses, by_formula);
            prop_assert_eq!(by_formula, entails(&truth, &c.to_formula(), &db).unwrap());
        }
    }

    #[test]
    fn herbrand_true_set_is_instance(db in arb_db()) {
        let h = minimal_herbrand(&db.instance, &candidate_universe(&db)).unwrap();
        prop_assert_eq!(h.true_set(), db.instance.clone());
    }

    /// The model stream equals filtering all valuations, in the same order.
    #[test]
    fn models_match_exhaustive_filter(db in arb_db()) {
        let universe = candidate_universe(&db);
        let clauses = ground_constraints(&db);
        let atoms: Vec<GroundAtom> = universe.iter().cloned().collect();
        let n = atoms.len();
        let expected: Vec<BTreeSet<GroundAtom>> = (0u32..1 << n)
            .map(|code| {
                // atom 0 is the most significant bit
                atoms.iter().enumerate().filter(|(i, _)| code >> (n - 1 - i) & 1 == 1).map(|(_, a)| a.clone()).collect::<BTreeSet<_>>()
            })
            .filter(|t| clauses.iter().all(|c| c.holds_in(t)))
            .collect();
        let got: Vec<BTreeSet<GroundAtom>> =
            classical_models(&clauses, &universe).unwrap().map(|m| m.true_set()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn dist_is_a_metric_kernel(a in prop::collection::btree_set(arb_ground_atom(), 0..5), b in prop::collection::btree_set(arb_ground_atom(), 0..5)) {
        prop_assert_eq!(dist(&a, &b), dist(&b, &a));
        prop_assert_eq!(dist(&a, &b).is_empty(), a == b);
    }

    #[test]
    fn consistency_iff_nothing_to_repair(db in arb_db()) {
        prop_assume!(constraints_satisfiable(&db));
        for criterion in [PreferenceCriterion::Inclusion, PreferenceCriterion::Cardinality] {
            let repairs = preferred_repairs(&db, criterion, limits()).unwrap();
            prop_assert_eq!(is_consistent(&db), repairs == vec![Repair::default()]);
        }
    }

    /// A repaired instance under inclusion is exactly one whose distance to
    /// the original is ⊆-minimal among instances over the universe that
    /// satisfy the constraints.
    #[test]
    fn inclusion_repairs_minimize_distance(db in arb_db()) {
        prop_assume!(constraints_satisfiable(&db));
        let universe: Vec<GroundAtom> = candidate_universe(&db).into_iter().collect();
        let dists: Vec<BTreeSet<GroundAtom>> = all_subsets(&universe)
            .into_iter()
            .filter(|d| is_consistent(&db.with_instance(d.clone())))
            .map(|d| dist(&d, &db.instance))
            .collect();
        let minimal: BTreeSet<BTreeSet<GroundAtom>> = dists
            .iter()
            .filter(|d| !dists.iter().any(|e| e.len() < d.len() && e.is_subset(d)))
            .cloned()
            .collect();
        let got: BTreeSet<BTreeSet<GroundAtom>> =
            repaired_databases(&db, PreferenceCriterion::Inclusion, limits())
                .unwrap()
                .iter()
                .map(|r| dist(&r.instance, &db.instance))
                .collect();
        prop_assert_eq!(got, minimal);
    }

    #[test]
    fn engine_matches_oracle_and_three_valued_route(db in arb_db()) {
        prop_assume!(constraints_satisfiable(&db));
        for criterion in [PreferenceCriterion::Inclusion, PreferenceCriterion::Cardinality] {
            let engine = preferred_repairs(&db, criterion, limits()).unwrap();
            let oracle = brute_force_preferred(&db, criterion).unwrap();
            prop_assert_eq!(&engine, &oracle);
            let mut three: Vec<Repair> = maximally_consistent(&db, criterion)
                .unwrap()
                .iter()
                .map(|n| repair_of(n, &db.instance))
                .collect();
            three.sort();
            prop_assert_eq!(&engine, &three);
            for n in maximally_consistent(&db, criterion).unwrap() {
                prop_assert!(in_mdb(&n, &db).unwrap());
            }
        }
    }

    #[test]
    fn unsatisfiable_constraints_fail_everywhere(mut db in arb_db(), forced in arb_ground_atom()) {
        let lit = Literal::Atom(Atom::new(
            forced.predicate(),
            forced.args().iter().cloned().map(Term::Const).collect(),
        ));
        db.constraints.insert(Constraint::new(vec![], vec![lit.clone()]).unwrap());
        db.constraints.insert(Constraint::denial(vec![lit]).unwrap());
        prop_assert!(!constraints_satisfiable(&db));
        prop_assert_eq!(preferred_repairs(&db, PreferenceCriterion::Inclusion, limits()), Err(Error::NoRepairPossible));
        prop_assert_eq!(brute_force_preferred(&db, PreferenceCriterion::Inclusion), Err(Error::NoRepairPossible));
        prop_assert_eq!(maximally_consistent(&db, PreferenceCriterion::Inclusion), Err(Error::NoModel));
        prop_assert_eq!(merge([&db]), Err(Error::IcConflict));
    }

    #[test]
    fn round_trips(db in arb_db()) {
        prop_assume!(constraints_satisfiable(&db));
        let clauses = ground_constraints(&db);
        let universe = candidate_universe(&db);
        for m in classical_models(&clauses, &universe).unwrap() {
            let r = repair_from_model2(&db, &m).unwrap();
            prop_assert!(is_repair(&db, &r));
            prop_assert_eq!(&model2_from_repair(&db, &r).unwrap(), &m);
            let n = repair_to_model3(&db, &r).unwrap();
            prop_assert_eq!(repair_of(&n, &db.instance), r.clone());
            prop_assert_eq!(knowledge_join(&minimal_herbrand(&db.instance, &universe).unwrap(), &m).unwrap(), n.clone());
            let theory: Vec<GroundFormula> = clauses.iter().map(GroundClause::to_formula)
                .chain(db.instance.iter().cloned().map(GroundFormula::Atom))
                .collect();
            prop_assert!(is_model3(&n, &theory).unwrap());
        }
    }

    #[test]
    fn cardinality_preferred_are_inclusion_preferred(db in arb_db()) {
        prop_assume!(constraints_satisfiable(&db));
        let inclusion = preferred_repairs(&db, PreferenceCriterion::Inclusion, limits()).unwrap();
        for r in preferred_repairs(&db, PreferenceCriterion::Cardinality, limits()).unwrap() {
            prop_assert!(inclusion.contains(&r));
        }
    }

    #[test]
    fn merge_is_commutative_and_associative(a in arb_db(), b in arb_db(), c in arb_db()) {
        let ab_c = merge([&a, &b]).and_then(|ab| merge([&ab, &c]));
        let a_bc = merge([&b, &c]).and_then(|bc| merge([&a, &bc]));
        let cba = merge([&c, &b, &a]);
        if let (Ok(x), Ok(y), Ok(z)) = (&ab_c, &a_bc, &cba) {
            prop_assert_eq!(x, y);
            prop_assert_eq!(x, z);
        }
        prop_assert_eq!(ab_c.is_ok(), cba.is_ok());
    }
}

#[test]
fn lattice_laws_hold_exhaustively() {
    let all = Three::ALL;
    for x in all {
        assert_eq!(x.neg3().neg3(), x);
        assert_eq!(x.and3(x), x);
        assert_eq!(x.or3(x), x);
        assert_eq!(x.oplus(x), x);
        assert_eq!(x.oplus(Three::Top), Three::Top);
        for y in all {
            assert_eq!(x.and3(y), y.and3(x));
            assert_eq!(x.or3(y), y.or3(x));
            assert_eq!(x.oplus(y), y.oplus(x));
            assert_eq!(x.and3(x.or3(y)), x);
            assert_eq!(x.or3(x.and3(y)), x);
            assert_eq!(x.and3(y).neg3(), x.neg3().or3(y.neg3()));
            assert_eq!(x.or3(y).neg3(), x.neg3().and3(y.neg3()));
            for z in all {
                assert_eq!(x.and3(y.and3(z)), x.and3(y).and3(z));
                assert_eq!(x.or3(y.or3(z)), x.or3(y).or3(z));
                assert_eq!(x.oplus(y.oplus(z)), x.oplus(y).oplus(z));
            }
        }
    }
}
