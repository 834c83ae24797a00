//! Synthetic workloads for the benchmarks.

use std::fmt::Write as _;

use dbrepair::{parse_problem, Database};

/// A `teaches(course, teacher)` table under the one-teacher-per-course
/// dependency. Each of the first `conflicts` courses has two teachers, the
/// rest have one, so there are `2^conflicts` preferred repairs.
pub fn teachers_text(courses: usize, conflicts: usize) -> String {
    let mut s = String::from("ic :- teaches(X,Y), teaches(X,Z), Y != Z.\n");
    for c in 0..courses {
        let _ = writeln!(s, "teaches(c{c},n{c}).");
        if c < conflicts {
            let _ = writeln!(s, "teaches(c{c},m{c}).");
        }
    }
    s
}

pub fn teachers(courses: usize, conflicts: usize) -> Database {
    parse_problem(&teachers_text(courses, conflicts)).expect("generated text parses")
}

/// `p0 -> p1 -> ... -> p{n-1}` with `p0` stored and `p{n-1}` denied: the only
/// preferred repair retracts `p0`, while inserting along the chain is a
/// dead end the search has to rule out.
pub fn chain(n: usize) -> Database {
    let mut s = String::from("p0.\n");
    for i in 1..n {
        let _ = writeln!(s, "ic p{} -> p{i}.", i - 1);
    }
    let _ = writeln!(s, "ic :- p{}.", n - 1);
    parse_problem(&s).expect("generated text parses")
}

#[cfg(test)]
mod tests {
    use dbrepair::{preferred_repairs, PreferenceCriterion, SearchLimits};

    use super::*;

    #[test]
    fn workloads_have_the_advertised_repairs() {
        let r = preferred_repairs(&teachers(10, 3), PreferenceCriterion::Inclusion, SearchLimits::default()).unwrap();
        assert_eq!(r.len(), 8);
        let r = preferred_repairs(&chain(6), PreferenceCriterion::Cardinality, SearchLimits::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].to_string(), "({}, {p0})");
    }
}
