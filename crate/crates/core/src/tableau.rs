//! Incremental Gauss-Jordan elimination over GF(2).
//!
//! A [`Tableau`] keeps a satisfiable conjunction of xor-constraints in reduced row
//! echelon form: every row is an equation `basic := rhs ⊕ parity` whose basic variable
//! occurs in no other row. Rows are stored twice, once row-major for row additions and
//! once column-major for finding the rows a pivot touches.
//!
//! An [`AssignedTableau`] adds a partial assignment on top. Assigning a non-basic
//! variable can only complete rows, never break them, so after every `assume` each row
//! either has its basic variable assigned together with all of its right-hand side, or
//! has at least two unassigned variables. Under that invariant the assignment is
//! consistent exactly when the constraints plus the assumptions are satisfiable, and the
//! assigned literals are exactly the implied ones.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::bits::BitVec;
use crate::formula::{Lit, Var, XorConstraint};

/// An input constraint reduced to `⊥ ≡ ⊤` against the ones before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("xor-constraint #{index} contradicts the constraints before it")]
pub struct Contradiction {
    pub index: usize,
}

/// `basic := rhs[0] ⊕ ... ⊕ rhs[k-1] ⊕ parity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub basic: Var,
    pub rhs: Vec<Var>,
    pub parity: bool,
}

impl Equation {
    pub fn new(basic: Var, rhs: &[Var], parity: bool) -> Equation {
        let mut rhs = rhs.to_vec();
        rhs.sort_unstable();
        Equation { basic, rhs, parity }
    }

    /// The equation read as `basic ⊕ rhs ≡ parity`.
    pub fn to_xor(&self) -> XorConstraint {
        XorConstraint::new(self.rhs.iter().copied().chain([self.basic]), self.parity)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :=", self.basic)?;
        for v in &self.rhs {
            write!(f, " {v} ⊕")?;
        }
        write!(f, " {}", if self.parity { "⊤" } else { "⊥" })
    }
}

#[derive(Debug, Clone)]
pub struct Tableau {
    vars: Vec<Var>,
    local: HashMap<Var, usize>,
    rows: Vec<BitVec>,
    cols: Vec<BitVec>,
    col_count: Vec<u32>,
    parity: BitVec,
    basic: Vec<usize>,
    row_of: Vec<Option<usize>>,
}

impl Tableau {
    /// Inserts the constraints one at a time: basic variables are substituted out, a
    /// residual `⊥ ≡ ⊥` is skipped, a residual `⊥ ≡ ⊤` is a contradiction, and otherwise
    /// the lowest-indexed residual variable becomes basic and is eliminated from the
    /// other rows.
    pub fn build(xors: &[XorConstraint]) -> Result<Tableau, Contradiction> {
        let mut vars: Vec<Var> = xors.iter().flat_map(|x| x.vars().iter().copied()).collect();
        vars.sort_unstable();
        vars.dedup();
        let local: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = vars.len();

        let mut rows: Vec<BitVec> = Vec::new();
        let mut parity = BitVec::zeros(0);
        let mut basic: Vec<usize> = Vec::new();
        let mut row_of: Vec<Option<usize>> = vec![None; n];
        let mut basic_mask = BitVec::zeros(n);

        for (index, x) in xors.iter().enumerate() {
            let mut row = BitVec::zeros(n);
            for v in x.vars() {
                row.set(local[v]);
            }
            let mut p = x.parity();
            for c in row.and(&basic_mask).iter_ones().collect::<Vec<_>>() {
                let r = row_of[c].expect("basic column has a row");
                row.xor_assign(&rows[r]);
                p ^= parity.get(r);
            }
            let Some(pivot) = row.first_one() else {
                if p {
                    return Err(Contradiction { index });
                }
                continue;
            };
            for (k, other) in rows.iter_mut().enumerate() {
                if other.get(pivot) {
                    other.xor_assign(&row);
                    if p {
                        parity.toggle(k);
                    }
                }
            }
            row_of[pivot] = Some(rows.len());
            basic.push(pivot);
            basic_mask.set(pivot);
            rows.push(row);
            parity.push(p);
        }

        let mut cols = vec![BitVec::zeros(rows.len()); n];
        for (r, row) in rows.iter().enumerate() {
            for c in row.iter_ones() {
                cols[c].set(r);
            }
        }
        let col_count = cols.iter().map(|c| c.count_ones() as u32).collect();
        Ok(Tableau {
            vars,
            local,
            rows,
            cols,
            col_count,
            parity,
            basic,
            row_of,
        })
    }

    /// Variables of the tableau in ascending order.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Dense matrix size (rows × columns) of one of the two matrices.
    pub fn elements(&self) -> usize {
        self.rows.len() * self.vars.len()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.local.contains_key(&v)
    }

    pub fn is_basic(&self, v: Var) -> bool {
        self.local.get(&v).is_some_and(|&c| self.row_of[c].is_some())
    }

    fn equation_at(&self, r: usize) -> Equation {
        let b = self.basic[r];
        Equation {
            basic: self.vars[b],
            rhs: self.rows[r]
                .iter_ones()
                .filter(|&c| c != b)
                .map(|c| self.vars[c])
                .collect(),
            parity: self.parity.get(r),
        }
    }

    pub fn equation_of(&self, basic: Var) -> Option<Equation> {
        let r = self.row_of[*self.local.get(&basic)?]?;
        Some(self.equation_at(r))
    }

    /// Equations in row order.
    pub fn equations(&self) -> Vec<Equation> {
        (0..self.rows.len()).map(|r| self.equation_at(r)).collect()
    }

    /// Equations as an order-independent set, for comparisons.
    pub fn equation_set(&self) -> BTreeSet<(Var, Vec<Var>, bool)> {
        self.equations()
            .into_iter()
            .map(|e| (e.basic, e.rhs, e.parity))
            .collect()
    }

    /// Makes `y` basic in place of `x`: the row of `x` is kept as the definition of `y`
    /// and added to every other row containing `y`.
    ///
    /// Panics unless `x` is basic and `y` is on the right-hand side of its equation.
    pub fn swap(&mut self, x: Var, y: Var) {
        let cx = self.local[&x];
        let cy = self.local[&y];
        let r = self.row_of[cx].unwrap_or_else(|| panic!("swap: {x} is not basic"));
        assert!(cx != cy && self.rows[r].get(cy), "swap: {y} is not in the equation of {x}");
        self.pivot(r, cy);
    }

    /// Rows touched by a pivot on column `cy` in row `r`.
    fn pivot(&mut self, r: usize, cy: usize) -> BitVec {
        let mut touched = self.cols[cy].clone();
        touched.clear(r);
        let (pivot_row, pivot_parity) = (self.rows[r].clone(), self.parity.get(r));
        for k in touched.iter_ones() {
            self.rows[k].xor_assign(&pivot_row);
            if pivot_parity {
                self.parity.toggle(k);
            }
        }
        for c in pivot_row.iter_ones() {
            self.cols[c].xor_assign(&touched);
            self.col_count[c] = self.cols[c].count_ones() as u32;
        }
        let cx = self.basic[r];
        self.row_of[cx] = None;
        self.row_of[cy] = Some(r);
        self.basic[r] = cy;
        touched
    }

    /// True when the row-major and column-major matrices agree cell for cell, the basic
    /// bookkeeping is reduced row echelon, and column counts are exact.
    pub fn check_coherence(&self) -> bool {
        for (r, row) in self.rows.iter().enumerate() {
            for c in 0..self.vars.len() {
                if row.get(c) != self.cols[c].get(r) {
                    return false;
                }
            }
            let b = self.basic[r];
            if self.row_of[b] != Some(r) || self.cols[b].count_ones() != 1 || !row.get(b) {
                return false;
            }
        }
        self.cols
            .iter()
            .zip(&self.col_count)
            .all(|(c, &n)| c.count_ones() == n as usize)
    }

    /// Rows read as xor-constraints.
    pub fn to_xors(&self) -> Vec<XorConstraint> {
        self.equations().iter().map(Equation::to_xor).collect()
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.equations().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A clause justifying a deduction. For an implied literal the literal comes first and
/// the remaining literals are negations of earlier assigned literals; for a conflict all
/// literals are negations of assigned literals (or of the offending assumption).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Explanation {
    lits: Vec<Lit>,
}

impl Explanation {
    pub fn new(lits: Vec<Lit>) -> Explanation {
        Explanation { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn into_lits(self) -> Vec<Lit> {
        self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeductionResult {
    pub status: Status,
    pub implied: Vec<(Lit, Explanation)>,
    pub conflict: Option<Explanation>,
}

impl DeductionResult {
    pub fn sat(implied: Vec<(Lit, Explanation)>) -> DeductionResult {
        DeductionResult {
            status: Status::Sat,
            implied,
            conflict: None,
        }
    }

    pub fn unsat(conflict: Explanation) -> DeductionResult {
        DeductionResult {
            status: Status::Unsat,
            implied: Vec::new(),
            conflict: Some(conflict),
        }
    }

    pub fn is_unsat(&self) -> bool {
        self.status == Status::Unsat
    }
}

/// How `assume` picks the variable that replaces an assigned basic variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwapPolicy {
    /// Unassigned right-hand side variable occurring in the fewest rows, lowest index on ties.
    #[default]
    FewestOccurrences,
    /// Lowest-indexed unassigned right-hand side variable.
    LowestIndex,
}

#[derive(Debug, Clone)]
pub struct AssignedTableau {
    tableau: Tableau,
    policy: SwapPolicy,
    value: Vec<Option<bool>>,
    unassigned: BitVec,
    count: Vec<u32>,
    reason: Vec<Option<Explanation>>,
    trail: Vec<usize>,
    swaps: u64,
}

impl AssignedTableau {
    /// Assigns the basic variable of every equation with an empty right-hand side and
    /// reports those literals as implied.
    pub fn init(tableau: Tableau, policy: SwapPolicy) -> (AssignedTableau, DeductionResult) {
        let n = tableau.vars.len();
        let count = tableau.rows.iter().map(|r| r.count_ones() as u32).collect();
        let mut at = AssignedTableau {
            tableau,
            policy,
            value: vec![None; n],
            unassigned: BitVec::ones(n),
            count,
            reason: vec![None; n],
            trail: Vec::new(),
            swaps: 0,
        };
        let mut implied = Vec::new();
        for r in 0..at.tableau.rows.len() {
            if at.count[r] == 1 {
                let b = at.tableau.basic[r];
                let lit = at.tableau.vars[b].lit(at.tableau.parity.get(r));
                let expl = Explanation::new(vec![lit]);
                at.value[b] = Some(lit.is_positive());
                at.unassigned.clear(b);
                at.count[r] = 0;
                at.reason[b] = Some(expl.clone());
                implied.push((lit, expl));
            }
        }
        (at, DeductionResult::sat(implied))
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn policy(&self) -> SwapPolicy {
        self.policy
    }

    pub fn swaps(&self) -> u64 {
        self.swaps
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.tableau.local.get(&v).and_then(|&c| self.value[c])
    }

    /// All assigned literals, including those fixed at initialization.
    pub fn assigned_lits(&self) -> BTreeSet<Lit> {
        self.value
            .iter()
            .enumerate()
            .filter_map(|(c, v)| v.map(|b| self.tableau.vars[c].lit(b)))
            .collect()
    }

    /// Current trail length, usable with [`backtrack_to`](Self::backtrack_to).
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    /// Literals assigned since initialization, in order.
    pub fn trail(&self) -> impl Iterator<Item = Lit> + '_ {
        self.trail
            .iter()
            .map(|&c| self.tableau.vars[c].lit(self.value[c].expect("trail entries are assigned")))
    }

    pub fn assume(&mut self, lit: Lit) -> DeductionResult {
        let Some(&cx) = self.tableau.local.get(&lit.var()) else {
            return DeductionResult::sat(Vec::new());
        };
        let v = lit.is_positive();
        match self.value[cx] {
            Some(old) if old == v => return DeductionResult::sat(Vec::new()),
            Some(_) => {
                let prior = !lit;
                let clause = match &self.reason[cx] {
                    Some(e) => e.clone(),
                    None => Explanation::new(vec![!prior, prior]),
                };
                return DeductionResult::unsat(clause);
            }
            None => {}
        }

        if let Some(r) = self.tableau.row_of[cx] {
            let cy = self.swap_partner(r, cx);
            let touched = self.tableau.pivot(r, cy);
            self.swaps += 1;
            for k in touched.iter_ones() {
                self.count[k] = self.tableau.rows[k].and_count(&self.unassigned) as u32;
            }
        }

        self.value[cx] = Some(v);
        self.unassigned.clear(cx);
        self.trail.push(cx);

        let rows: Vec<usize> = self.tableau.cols[cx].iter_ones().collect();
        let mut implied = Vec::new();
        for r in rows {
            self.count[r] -= 1;
            debug_assert!(self.count[r] >= 1, "row completed by a non-basic assignment");
            if self.count[r] != 1 {
                continue;
            }
            let b = self.tableau.basic[r];
            debug_assert!(self.value[b].is_none(), "assigned basic with unassigned rhs");
            let mut vb = self.tableau.parity.get(r);
            let mut lits = vec![Lit::new(Var(0), true)];
            for c in self.tableau.rows[r].iter_ones().filter(|&c| c != b) {
                let val = self.value[c].expect("row has one unassigned variable");
                vb ^= val;
                lits.push(self.tableau.vars[c].lit(!val));
            }
            let z = self.tableau.vars[b].lit(vb);
            lits[0] = z;
            let expl = Explanation::new(lits);
            self.value[b] = Some(vb);
            self.unassigned.clear(b);
            self.count[r] = 0;
            self.reason[b] = Some(expl.clone());
            self.trail.push(b);
            implied.push((z, expl));
        }
        DeductionResult::sat(implied)
    }

    fn swap_partner(&self, r: usize, cx: usize) -> usize {
        let free = self.tableau.rows[r].and(&self.unassigned);
        let candidates = free.iter_ones().filter(|&c| c != cx);
        let chosen = match self.policy {
            SwapPolicy::LowestIndex => candidates.min(),
            SwapPolicy::FewestOccurrences => candidates.min_by_key(|&c| (self.tableau.col_count[c], c)),
        };
        chosen.expect("an unassigned basic variable has an unassigned right-hand side")
    }

    /// Retracts every assignment made after `mark`. Only the per-row counters change.
    pub fn backtrack_to(&mut self, mark: usize) {
        assert!(mark <= self.trail.len(), "backtrack_to: mark beyond trail");
        while self.trail.len() > mark {
            let c = self.trail.pop().expect("nonempty trail");
            self.value[c] = None;
            self.reason[c] = None;
            self.unassigned.set(c);
            for r in self.tableau.cols[c].iter_ones() {
                self.count[r] += 1;
            }
        }
    }

    /// The clause recorded when `lit` was deduced.
    ///
    /// Panics if `lit` is not an assigned, implied literal.
    pub fn explain(&self, lit: Lit) -> Explanation {
        let c = self.tableau.local[&lit.var()];
        assert_eq!(self.value[c], Some(lit.is_positive()), "explain: {lit} is not assigned");
        self.reason[c]
            .clone()
            .unwrap_or_else(|| panic!("explain: {lit} was assumed, not implied"))
    }

    pub fn is_implied(&self, v: Var) -> bool {
        self.tableau
            .local
            .get(&v)
            .is_some_and(|&c| self.reason[c].is_some())
    }

    /// True when every row satisfies the saturation invariant and no row is violated.
    pub fn is_consistent_and_saturated(&self) -> bool {
        (0..self.tableau.rows.len()).all(|r| {
            let b = self.tableau.basic[r];
            let rhs_assigned = self.tableau.rows[r]
                .iter_ones()
                .filter(|&c| c != b)
                .all(|c| self.value[c].is_some());
            if self.value[b].is_some() != rhs_assigned {
                return false;
            }
            if !rhs_assigned {
                return true;
            }
            let sum = self.tableau.rows[r]
                .iter_ones()
                .fold(false, |acc, c| acc ^ self.value[c].unwrap_or(false));
            sum == self.tableau.parity.get(r)
        })
    }

    /// Recomputes every row's unassigned counter and compares with the maintained one.
    pub fn audit_counters(&self) -> bool {
        self.tableau
            .rows
            .iter()
            .zip(&self.count)
            .all(|(row, &n)| row.and_count(&self.unassigned) == n as usize)
    }

    /// Every `y ⊕ z ≡ p` entailed by the constraints and the current assignment.
    ///
    /// Pairs come from both variables being assigned, from a row whose only unassigned
    /// right-hand side variable is `z`, or from two rows whose unassigned right-hand sides
    /// coincide.
    pub fn implied_binary_xors(&self) -> Vec<XorConstraint> {
        let t = &self.tableau;
        let mut out = BTreeSet::new();
        let assigned: Vec<usize> = (0..t.vars.len()).filter(|&c| self.value[c].is_some()).collect();
        for (i, &a) in assigned.iter().enumerate() {
            for &b in &assigned[i + 1..] {
                let p = self.value[a].unwrap() ^ self.value[b].unwrap();
                out.insert(XorConstraint::new([t.vars[a], t.vars[b]], p));
            }
        }
        let mut groups: HashMap<BitVec, Vec<(usize, bool)>> = HashMap::new();
        for r in 0..t.rows.len() {
            let b = t.basic[r];
            if self.value[b].is_some() {
                continue;
            }
            let mut free = t.rows[r].and(&self.unassigned);
            free.clear(b);
            let p = t.rows[r]
                .iter_ones()
                .filter_map(|c| self.value[c])
                .fold(t.parity.get(r), |acc, v| acc ^ v);
            let mut ones = free.iter_ones();
            if let (Some(z), None) = (ones.next(), ones.next()) {
                out.insert(XorConstraint::new([t.vars[b], t.vars[z]], p));
            }
            groups.entry(free).or_default().push((b, p));
        }
        for members in groups.values() {
            for (i, &(y, py)) in members.iter().enumerate() {
                for &(z, pz) in &members[i + 1..] {
                    out.insert(XorConstraint::new([t.vars[y], t.vars[z]], py ^ pz));
                }
            }
        }
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor(vars: &[u32], p: bool) -> XorConstraint {
        XorConstraint::new(vars.iter().map(|&i| Var(i)), p)
    }

    fn eqs(t: &Tableau) -> BTreeSet<(Var, Vec<Var>, bool)> {
        t.equation_set()
    }

    fn eq(b: u32, rhs: &[u32], p: bool) -> (Var, Vec<Var>, bool) {
        let mut rhs: Vec<Var> = rhs.iter().map(|&i| Var(i)).collect();
        rhs.sort();
        (Var(b), rhs, p)
    }

    #[test]
    fn contradiction_carries_index() {
        let err = Tableau::build(&[xor(&[0, 1, 2], true), xor(&[0, 1, 2], false)]).unwrap_err();
        assert_eq!(err.index, 1);
    }

    #[test]
    fn linear_combinations_are_dropped() {
        let t = Tableau::build(&[xor(&[0, 1], true), xor(&[1, 2], true), xor(&[0, 2], false)]).unwrap();
        assert_eq!(t.num_rows(), 2);
        assert!(t.check_coherence());
    }

    #[test]
    fn empty_tableau() {
        let t = Tableau::build(&[]).unwrap();
        let (at, init) = AssignedTableau::init(t, SwapPolicy::default());
        assert!(init.implied.is_empty());
        assert!(at.assigned_lits().is_empty());
    }

    #[test]
    fn swap_is_an_involution_on_a_single_row() {
        // d := a ⊕ f ⊕ ⊤ with a, d, f = 0, 3, 5
        let mut t = Tableau::build(&[xor(&[3, 0, 5], true)]).unwrap();
        let before = eqs(&t);
        t.swap(Var(0), Var(3));
        assert_eq!(eqs(&t), BTreeSet::from([eq(3, &[0, 5], true)]));
        t.swap(Var(3), Var(0));
        assert_eq!(eqs(&t), before);
    }

    #[test]
    #[should_panic(expected = "not basic")]
    fn swap_requires_basic() {
        let mut t = Tableau::build(&[xor(&[0, 1], true)]).unwrap();
        t.swap(Var(1), Var(0));
    }

    #[test]
    fn repeated_assumption_is_a_no_op() {
        let t = Tableau::build(&[xor(&[0, 1, 2], true)]).unwrap();
        let (mut at, _) = AssignedTableau::init(t, SwapPolicy::default());
        let first = at.assume(Var(0).lit(true));
        assert_eq!(first.status, Status::Sat);
        let again = at.assume(Var(0).lit(true));
        assert_eq!(again, DeductionResult::sat(vec![]));
    }

    #[test]
    fn contradicting_an_assumption_gives_a_tautological_explanation() {
        let t = Tableau::build(&[xor(&[0, 1, 2], true)]).unwrap();
        let (mut at, _) = AssignedTableau::init(t, SwapPolicy::default());
        at.assume(Var(0).lit(true));
        let r = at.assume(Var(0).lit(false));
        assert!(r.is_unsat());
        let c = r.conflict.unwrap();
        assert_eq!(c.lits().len(), 2);
        assert_eq!(c.lits()[0], !c.lits()[1]);
    }

    #[test]
    fn contradicting_an_implied_literal_returns_its_reason() {
        // x0 ⊕ x1 ≡ ⊤; assume x0 → x1 = ⊥; then assume x1
        let t = Tableau::build(&[xor(&[0, 1], true)]).unwrap();
        let (mut at, _) = AssignedTableau::init(t, SwapPolicy::default());
        let r = at.assume(Var(0).lit(true));
        assert_eq!(r.implied.len(), 1);
        let (z, e) = &r.implied[0];
        let conflict = at.assume(!*z);
        assert_eq!(conflict.conflict.as_ref(), Some(e));
        assert_eq!(at.explain(*z), *e);
    }

    #[test]
    fn backtrack_restores_counters_only() {
        let t = Tableau::build(&[xor(&[0, 1, 2], true), xor(&[1, 2, 3], false), xor(&[0, 3, 4], true)])
            .unwrap();
        let (mut at, _) = AssignedTableau::init(t, SwapPolicy::default());
        let base = at.assigned_lits();
        let m = at.mark();
        at.assume(Var(0).lit(true));
        at.assume(Var(3).lit(false));
        let tableau_after = at.tableau().equation_set();
        at.backtrack_to(m);
        assert_eq!(at.assigned_lits(), base);
        assert!(at.audit_counters());
        assert_eq!(at.tableau().equation_set(), tableau_after);
        assert!(at.is_consistent_and_saturated());
    }

    #[test]
    fn all_assigned_binary_xors_are_pairwise_parities() {
        let t = Tableau::build(&[xor(&[0, 1], true), xor(&[1, 2], false)]).unwrap();
        let (mut at, _) = AssignedTableau::init(t, SwapPolicy::default());
        at.assume(Var(0).lit(true));
        let bins = at.implied_binary_xors();
        assert_eq!(
            bins,
            vec![xor(&[0, 1], true), xor(&[0, 2], true), xor(&[1, 2], false)]
        );
    }
}
