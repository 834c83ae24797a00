use thiserror::Error;

use crate::kernel::GroundAtom;
use crate::repair::Repair;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("atom {0} is outside the valuation universe")]
    UniverseMismatch(GroundAtom),

    #[error("malformed constraint: {0}")]
    MalformedConstraint(String),

    #[error("predicate {name} used with arity {found}, previously declared with arity {expected}")]
    ArityConflict {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("schema mismatch: predicate {name} has arity {left} in one source and {right} in another")]
    SchemaMismatch {
        name: String,
        left: usize,
        right: usize,
    },

    #[error("the merged integrity constraints are classically unsatisfiable")]
    IcConflict,

    #[error("the integrity constraints are unsatisfiable, no repair is possible")]
    NoRepairPossible,

    #[error("the integrity constraints have no classical model")]
    NoModel,

    /// The search ran out of nodes and the result is incomplete. Under
    /// inclusion `partial` holds repairs already proven preferred; under
    /// cardinality it holds the best repairs seen, not proven minimal.
    #[error("search budget of {budget} nodes exhausted ({} repairs found so far)", partial.len())]
    BudgetExhausted { budget: u64, partial: Vec<Repair> },

    #[error("not a repair of the database: {0}")]
    InvalidRepair(String),

    #[error("valuation is not a classical model of the integrity constraints")]
    NotAModel,

    #[error("candidate universe has {size} atoms, exceeding the oracle bound of {bound}")]
    OracleBound { size: usize, bound: usize },

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}
