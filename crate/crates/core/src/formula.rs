//! Literals, clauses, xor-constraints and cnf-xor formulas.

use std::fmt;
use std::ops::Not;

/// A Boolean variable, 0-based internally and 1-based in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Var {
        Var(index as u32)
    }

    /// The literal `self ≡ value`.
    #[inline]
    pub fn lit(self, value: bool) -> Lit {
        Lit::new(self, value)
    }

    pub fn to_dimacs(self) -> i64 {
        self.0 as i64 + 1
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// A literal, encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | (!positive) as u32)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code usable as an array index (`2 * var + negated`).
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    /// Parses a nonzero DIMACS integer.
    pub fn from_dimacs(value: i64) -> Lit {
        assert!(value != 0, "0 is not a DIMACS literal");
        Lit::new(Var((value.unsigned_abs() - 1) as u32), value > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().to_dimacs();
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.var())
        } else {
            write!(f, "¬{}", self.var())
        }
    }
}

/// A disjunction of distinct, non-complementary literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Removes duplicate literals, keeping first occurrences. Returns `None` for a tautology.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if out.contains(&!l) {
                return None;
            }
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Some(Clause { lits: out })
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn eval(&self, a: &Assignment) -> Option<bool> {
        let mut undefined = false;
        for &l in &self.lits {
            match a.lit_value(l) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => undefined = true,
            }
        }
        if undefined {
            None
        } else {
            Some(false)
        }
    }
}

/// `x1 ⊕ ... ⊕ xk ≡ parity` over a sorted set of distinct variables.
///
/// The same type doubles as the right-hand side of a definition `v := x1 ⊕ ... ⊕ xk ⊕ parity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XorConstraint {
    vars: Vec<Var>,
    parity: bool,
}

impl XorConstraint {
    /// Builds a constraint from a multiset of variables; pairs cancel.
    pub fn new(vars: impl IntoIterator<Item = Var>, parity: bool) -> XorConstraint {
        normalize_xor(vars, parity)
    }

    /// The constraint `x ≡ value`.
    pub fn unit(lit: Lit) -> XorConstraint {
        XorConstraint {
            vars: vec![lit.var()],
            parity: lit.is_positive(),
        }
    }

    /// `⊥ ≡ ⊤`.
    pub fn contradiction() -> XorConstraint {
        XorConstraint {
            vars: Vec::new(),
            parity: true,
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn parity(&self) -> bool {
        self.parity
    }

    pub fn width(&self) -> usize {
        self.vars.len()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    pub fn is_tautology(&self) -> bool {
        self.vars.is_empty() && !self.parity
    }

    pub fn is_contradiction(&self) -> bool {
        self.vars.is_empty() && self.parity
    }

    /// The unit literal `x` for `x ≡ p`, if the constraint has width one.
    pub fn as_unit(&self) -> Option<Lit> {
        match self.vars[..] {
            [v] => Some(v.lit(self.parity)),
            _ => None,
        }
    }

    /// Linear combination `self + other`.
    pub fn add(&self, other: &XorConstraint) -> XorConstraint {
        xor_add(self, other)
    }

    pub fn eval(&self, a: &Assignment) -> Option<bool> {
        eval_xor(self, a)
    }

    /// Flips the parity.
    pub fn negated(&self) -> XorConstraint {
        XorConstraint {
            vars: self.vars.clone(),
            parity: !self.parity,
        }
    }
}

impl fmt::Display for XorConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            write!(f, "⊥")?;
        }
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, " ≡ {}", if self.parity { "⊤" } else { "⊥" })
    }
}

/// Sorts and removes every variable occurring an even number of times.
pub fn normalize_xor(vars: impl IntoIterator<Item = Var>, parity: bool) -> XorConstraint {
    let mut sorted: Vec<Var> = vars.into_iter().collect();
    sorted.sort_unstable();
    let mut out = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(sorted[i]);
        }
        i = j;
    }
    XorConstraint { vars: out, parity }
}

/// Symmetric difference of the variable sets, xor of the parities.
pub fn xor_add(d: &XorConstraint, e: &XorConstraint) -> XorConstraint {
    let (a, b) = (&d.vars, &e.vars);
    let mut vars = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                vars.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                vars.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    vars.extend_from_slice(&a[i..]);
    vars.extend_from_slice(&b[j..]);
    XorConstraint {
        vars,
        parity: d.parity ^ e.parity,
    }
}

/// `Some(satisfied)` when every variable is assigned, `None` otherwise.
pub fn eval_xor(c: &XorConstraint, a: &Assignment) -> Option<bool> {
    let mut acc = false;
    for &v in &c.vars {
        acc ^= a.get(v)?;
    }
    Some(acc == c.parity)
}

/// Replaces `v` in `c` by `definition` (read as `v := ⊕definition.vars ⊕ definition.parity`).
///
/// Panics if `v` does not occur in `c` or occurs in the definition.
pub fn substitute(c: &XorConstraint, v: Var, definition: &XorConstraint) -> XorConstraint {
    assert!(c.contains(v), "substitute: {v} does not occur in {c}");
    assert!(
        !definition.contains(v),
        "substitute: definition of {v} mentions {v}"
    );
    let mut eq = definition.clone();
    eq.vars.insert(eq.vars.partition_point(|&w| w < v), v);
    xor_add(c, &eq)
}

/// A possibly partial truth assignment over `0..num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(num_vars: usize) -> Assignment {
        Assignment {
            values: vec![None; num_vars],
        }
    }

    pub fn from_values(values: Vec<Option<bool>>) -> Assignment {
        Assignment { values }
    }

    /// Total assignment from a bit mask (bit `i` is the value of variable `i`).
    pub fn from_mask(num_vars: usize, mask: u64) -> Assignment {
        Assignment {
            values: (0..num_vars).map(|i| Some(mask >> i & 1 == 1)).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(v.index()).copied().flatten()
    }

    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.get(l.var()).map(|b| b == l.is_positive())
    }

    /// Panics if `v` already has a different value.
    pub fn set(&mut self, v: Var, value: bool) {
        if v.index() >= self.values.len() {
            self.values.resize(v.index() + 1, None);
        }
        let slot = &mut self.values[v.index()];
        assert!(
            slot.is_none_or(|old| old == value),
            "{v} is already assigned the opposite value"
        );
        *slot = Some(value);
    }

    /// Sets `v`, replacing any previous value.
    pub fn overwrite(&mut self, v: Var, value: bool) {
        if v.index() >= self.values.len() {
            self.values.resize(v.index() + 1, None);
        }
        self.values[v.index()] = Some(value);
    }

    pub fn unset(&mut self, v: Var) {
        if let Some(slot) = self.values.get_mut(v.index()) {
            *slot = None;
        }
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    /// Assigned literals in variable order.
    pub fn lits(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| Var::from_index(i).lit(b)))
    }
}

/// `φ_or ∧ φ_xor`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfXorFormula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    pub xors: Vec<XorConstraint>,
}

impl CnfXorFormula {
    pub fn new(num_vars: usize) -> CnfXorFormula {
        CnfXorFormula {
            num_vars,
            ..Default::default()
        }
    }

    fn cover(&mut self, v: Var) {
        self.num_vars = self.num_vars.max(v.index() + 1);
    }

    /// Adds a clause unless it is a tautology. Returns whether it was kept.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) -> bool {
        match Clause::new(lits) {
            Some(c) => {
                for l in c.lits() {
                    self.cover(l.var());
                }
                self.clauses.push(c);
                true
            }
            None => false,
        }
    }

    /// Adds a normalized constraint unless it is the tautology `⊥ ≡ ⊥`.
    pub fn add_xor(&mut self, xor: XorConstraint) -> bool {
        if xor.is_tautology() {
            return false;
        }
        for &v in xor.vars() {
            self.cover(v);
        }
        self.xors.push(xor);
        true
    }

    /// True when an empty clause or `⊥ ≡ ⊤` is present.
    pub fn is_trivially_unsat(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty) || self.xors.iter().any(|x| x.is_contradiction())
    }

    pub fn eval(&self, a: &Assignment) -> Option<bool> {
        let mut undefined = false;
        for c in &self.clauses {
            match c.eval(a) {
                Some(false) => return Some(false),
                None => undefined = true,
                _ => {}
            }
        }
        for x in &self.xors {
            match x.eval(a) {
                Some(false) => return Some(false),
                None => undefined = true,
                _ => {}
            }
        }
        if undefined {
            None
        } else {
            Some(true)
        }
    }

    /// True iff the total assignment satisfies every clause and xor-constraint.
    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.eval(a) == Some(true)
    }

    /// Formula with the xor-part only.
    pub fn xor_part(&self) -> CnfXorFormula {
        CnfXorFormula {
            num_vars: self.num_vars,
            clauses: Vec::new(),
            xors: self.xors.clone(),
        }
    }
}
