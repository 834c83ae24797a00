//! Propagating depth-first search over boolean variables.
//!
//! Each variable has a preferred value; the cost of an assignment is the
//! number of variables that deviate from it. [`Optimizer`] enumerates every
//! minimum-cost satisfying assignment by branch and bound, always trying the
//! preferred value first and deciding variables in index order.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Lit {
    pub var: usize,
    pub value: bool,
}

/// A clause is satisfied when at least one of its literals holds.
#[derive(Clone, Debug, Default)]
pub(crate) struct Clauses {
    clauses: Vec<Vec<Lit>>,
    occurs: Vec<Vec<usize>>,
}

impl Clauses {
    pub fn new(num_vars: usize) -> Self {
        Clauses {
            clauses: Vec::new(),
            occurs: vec![Vec::new(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.occurs.len()
    }

    pub fn add(&mut self, lits: Vec<Lit>) {
        let idx = self.clauses.len();
        for lit in &lits {
            if !self.occurs[lit.var].contains(&idx) {
                self.occurs[lit.var].push(idx);
            }
        }
        self.clauses.push(lits);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted;

/// Assignment state with an undo trail and a running deviation count.
struct State<'a> {
    clauses: &'a Clauses,
    preferred: &'a [bool],
    assign: Vec<Option<bool>>,
    trail: Vec<usize>,
    cost: usize,
}

impl<'a> State<'a> {
    fn new(clauses: &'a Clauses, preferred: &'a [bool]) -> Self {
        debug_assert_eq!(clauses.num_vars(), preferred.len());
        State {
            clauses,
            preferred,
            assign: vec![None; clauses.num_vars()],
            trail: Vec::new(),
            cost: 0,
        }
    }

    fn push(&mut self, var: usize, value: bool) {
        self.assign[var] = Some(value);
        self.trail.push(var);
        if value != self.preferred[var] {
            self.cost += 1;
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            if self.assign[var] != Some(self.preferred[var]) {
                self.cost -= 1;
            }
            self.assign[var] = None;
        }
    }

    /// Assigns and unit-propagates. `false` signals a conflict; the caller
    /// restores the trail either way.
    fn set(&mut self, var: usize, value: bool) -> bool {
        match self.assign[var] {
            Some(v) => return v == value,
            None => self.push(var, value),
        }
        let clauses = self.clauses;
        let mut head = self.trail.len() - 1;
        while head < self.trail.len() {
            let changed = self.trail[head];
            head += 1;
            for &ci in &clauses.occurs[changed] {
                match self.status(ci) {
                    Status::Satisfied | Status::Open => {}
                    Status::Conflict => return false,
                    Status::Unit(lit) => self.push(lit.var, lit.value),
                }
            }
        }
        true
    }

    fn status(&self, ci: usize) -> Status {
        let mut unassigned = None;
        let mut open = 0;
        for lit in &self.clauses.clauses[ci] {
            match self.assign[lit.var] {
                Some(v) if v == lit.value => return Status::Satisfied,
                Some(_) => {}
                None => {
                    open += 1;
                    unassigned = Some(*lit);
                }
            }
        }
        match open {
            0 => Status::Conflict,
            1 => Status::Unit(unassigned.unwrap()),
            _ => Status::Open,
        }
    }

    /// Propagates unit and empty clauses at the root.
    fn init(&mut self) -> bool {
        let clauses = self.clauses;
        for (ci, clause) in clauses.clauses.iter().enumerate() {
            match clause.len() {
                0 => return false,
                1 => {
                    if !self.set(clause[0].var, clause[0].value) {
                        return false;
                    }
                }
                _ => {
                    if self.status(ci) == Status::Conflict {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn next_unassigned(&self, from: usize) -> Option<usize> {
        (from..self.assign.len()).find(|&v| self.assign[v].is_none())
    }

    fn snapshot(&self) -> Vec<bool> {
        self.assign
            .iter()
            .map(|v| v.expect("complete assignment"))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Satisfied,
    Open,
    Conflict,
    Unit(Lit),
}

/// Whether some assignment extending `fixed` satisfies every clause.
pub(crate) fn satisfiable(clauses: &Clauses, fixed: &[Lit]) -> bool {
    let preferred = vec![false; clauses.num_vars()];
    let mut state = State::new(clauses, &preferred);
    if !state.init() || !fixed.iter().all(|l| state.set(l.var, l.value)) {
        return false;
    }
    fn dfs(state: &mut State<'_>, from: usize) -> bool {
        let Some(var) = state.next_unassigned(from) else {
            return true;
        };
        for value in [false, true] {
            let mark = state.trail.len();
            if state.set(var, value) && dfs(state, var + 1) {
                return true;
            }
            state.undo(mark);
        }
        false
    }
    dfs(&mut state, 0)
}

/// Branch and bound collecting all minimum-cost satisfying assignments.
pub(crate) struct Optimizer<'a> {
    state: State<'a>,
    best: Option<usize>,
    solutions: Vec<Vec<bool>>,
    nodes: u64,
    budget: u64,
}

pub(crate) struct Optimum {
    pub cost: usize,
    pub solutions: Vec<Vec<bool>>,
}

impl<'a> Optimizer<'a> {
    pub fn new(clauses: &'a Clauses, preferred: &'a [bool], budget: u64) -> Self {
        Optimizer {
            state: State::new(clauses, preferred),
            best: None,
            solutions: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    /// All minimum-cost solutions (`None` when unsatisfiable) and the number
    /// of nodes spent. On budget exhaustion the error carries the best
    /// solutions found so far, which are not proven optimal.
    pub fn run(mut self) -> Result<(Option<Optimum>, u64), Vec<Vec<bool>>> {
        if !self.state.init() {
            return Ok((None, self.nodes));
        }
        match self.dfs(0) {
            Ok(()) => {
                let optimum = self.best.map(|cost| Optimum {
                    cost,
                    solutions: std::mem::take(&mut self.solutions),
                });
                Ok((optimum, self.nodes))
            }
            Err(Exhausted) => Err(self.solutions),
        }
    }

    fn dfs(&mut self, from: usize) -> Result<(), Exhausted> {
        if matches!(self.best, Some(b) if self.state.cost > b) {
            return Ok(());
        }
        let Some(var) = self.state.next_unassigned(from) else {
            let cost = self.state.cost;
            if self.best.is_none_or(|b| cost < b) {
                self.best = Some(cost);
                self.solutions.clear();
            }
            self.solutions.push(self.state.snapshot());
            return Ok(());
        };
        let preferred = self.state.preferred[var];
        for value in [preferred, !preferred] {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Exhausted);
            }
            let mark = self.state.trail.len();
            if self.state.set(var, value) {
                self.dfs(var + 1)?;
            }
            self.state.undo(mark);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(var: usize, value: bool) -> Lit {
        Lit { var, value }
    }

    #[test]
    fn satisfiable_respects_fixed_literals() {
        let mut cs = Clauses::new(2);
        cs.add(vec![lit(0, false), lit(1, true)]);
        assert!(satisfiable(&cs, &[]));
        assert!(satisfiable(&cs, &[lit(0, true)]));
        assert!(!satisfiable(&cs, &[lit(0, true), lit(1, false)]));
    }

    #[test]
    fn empty_clause_is_unsatisfiable() {
        let mut cs = Clauses::new(1);
        cs.add(vec![]);
        assert!(!satisfiable(&cs, &[]));
        assert!(Optimizer::new(&cs, &[false], 100).run().unwrap().0.is_none());
    }

    #[test]
    fn optimizer_finds_all_minimum_deviations() {
        // p=0, q=1 both preferred true; clause ¬p ∨ ¬q
        let mut cs = Clauses::new(2);
        cs.add(vec![lit(0, false), lit(1, false)]);
        let opt = Optimizer::new(&cs, &[true, true], 1000).run().unwrap().0.unwrap();
        assert_eq!(opt.cost, 1);
        assert_eq!(opt.solutions, vec![vec![true, false], vec![false, true]]);
    }

    #[test]
    fn optimizer_reports_exhaustion() {
        let cs = Clauses::new(20);
        assert!(Optimizer::new(&cs, &[false; 20], 5).run().is_err());
    }
}
