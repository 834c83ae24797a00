//! Coherent integration of databases under shared integrity constraints.
//!
//! Several fact bases are merged into one database, and the database is
//! repaired by inserting and retracting facts until every integrity
//! constraint holds. Preferred repairs (set-inclusion or cardinality
//! minimal) are computed by two independent routes:
//!
//! * [`repair::preferred_repairs`], a branch-and-bound search over
//!   two-valued models of the ground constraints;
//! * [`trivalent::maximally_consistent`], which reads repairs off the
//!   three-valued models with the fewest contradictory atoms.
//!
//! ```
//! use dbrepair::{preferred_repairs, PreferenceCriterion, SearchLimits, Database};
//!
//! let db: Database = "p(a). p(b). q(a). q(c). ic p(X) -> q(X).".parse().unwrap();
//! let repairs = preferred_repairs(&db, PreferenceCriterion::Inclusion, SearchLimits::default()).unwrap();
//! let shown: Vec<String> = repairs.iter().map(|r| r.to_string()).collect();
//! assert_eq!(shown, ["({}, {p(b)})", "({q(b)}, {})"]);
//! ```

pub mod classical;
pub mod error;
pub mod kernel;
pub mod repair;
mod search;
pub mod text;
pub mod trivalent;

pub use classical::{
    classical_models, dist, entails, evaluate2, is_consistent, minimal_herbrand, TwoValuation,
};
pub use error::{Error, Result};
pub use kernel::{
    active_domain, candidate_universe, ground, ground_constraints, Atom, Constant, Constraint,
    Database, Formula, GroundAtom, GroundClause, GroundFormula, Literal, PredicateSignature,
    Schema, Term, Variable,
};
pub use repair::{
    apply_repair, brute_force_preferred, brute_force_preferred_bounded, constraints_satisfiable,
    is_repair, merge, model2_from_repair, preferred_repairs, repair_from_model2,
    repaired_databases, strictly_better, PreferenceCriterion, Repair, SearchLimits,
    DEFAULT_ORACLE_BOUND,
};
pub use text::{parse_problem, print_problem};
pub use trivalent::{
    eval3, in_mdb, insert_of, is_model3, knowledge_join, maximally_consistent, repair_of,
    repair_to_model3, retract_of, satisfies3, Three, ThreeValuation,
};
