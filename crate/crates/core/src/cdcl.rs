//! A small CDCL solver acting as the master of the xor engine.
//!
//! Clauses use two watched literals. After the clause queue is empty, each new trail literal
//! over an xor variable is passed to the engine, and the literals it implies are enqueued
//! with their explanation clause as reason. Conflict analysis resolves through both kinds
//! of reason; explanations that take part in a conflict are added to the learned clauses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::decompose;
use crate::formula::{Assignment, CnfXorFormula, Lit, Var};
use crate::tableau::Explanation;
use crate::xorengine::{EngineConfig, EngineStats, XorEngine};

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub engine: EngineConfig,
    /// Split the xor-part into biconnected components, one reasoner each.
    pub decompose: bool,
    pub seed: u64,
    pub max_conflicts: Option<u64>,
    pub restart_base: u64,
    pub var_decay: f64,
    /// Learned clauses with at most this many decision levels are never deleted.
    pub keep_glue: u32,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            engine: EngineConfig::default(),
            decompose: true,
            seed: 0,
            max_conflicts: None,
            restart_base: 100,
            var_decay: 0.95,
            keep_glue: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Assignment),
    Unsat,
    /// The conflict budget ran out.
    Unknown,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub xor_conflicts: u64,
    pub cnf_propagations: u64,
    pub xor_propagations: u64,
    pub restarts: u64,
    pub learned: u64,
    pub deleted: u64,
    pub engine: EngineStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reason {
    Decision,
    Clause(usize),
    /// The explanation lives in `Solver::xor_reason` for the variable.
    Xor,
}

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learned: bool,
    lbd: u32,
    deleted: bool,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: usize,
    blocker: Lit,
}

/// Max-heap of variables keyed by activity.
#[derive(Debug, Clone, Default)]
struct VarOrder {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarOrder {
    fn new(n: usize) -> VarOrder {
        VarOrder {
            heap: Vec::with_capacity(n),
            pos: vec![None; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("nonempty heap");
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent]] >= act[v] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let mut child = 2 * i + 1;
            if child >= self.heap.len() {
                break;
            }
            if child + 1 < self.heap.len() && act[self.heap[child + 1]] > act[self.heap[child]] {
                child += 1;
            }
            if act[self.heap[child]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

/// `i`-th element (from 0) of the Luby sequence 1 1 2 1 1 2 4 ...
pub fn luby(i: u64) -> u64 {
    let mut size = 1;
    let mut seq = 0;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = i;
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

pub struct Solver {
    config: SolverConfig,
    num_vars: usize,
    clauses: Vec<ClauseData>,
    watches: Vec<Vec<Watcher>>,
    value: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    xor_reason: Vec<Vec<Lit>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    engine_lim: Vec<usize>,
    qhead: usize,
    xhead: usize,
    engine: XorEngine,
    activity: Vec<f64>,
    var_inc: f64,
    order: VarOrder,
    phase: Vec<bool>,
    seen: Vec<bool>,
    max_learned: usize,
    /// Set when the formula is found unsatisfiable at the root.
    root_conflict: bool,
    stats: SolverStats,
}

impl Solver {
    pub fn new(f: &CnfXorFormula, config: SolverConfig) -> Solver {
        let xor_vars = f.xors.iter().flat_map(|x| x.vars().iter().copied());
        let clause_vars = f.clauses.iter().flat_map(|c| c.lits().iter().map(|l| l.var()));
        let num_vars = xor_vars
            .chain(clause_vars)
            .map(|v| v.index() + 1)
            .fold(f.num_vars, usize::max);
        let d = config.decompose.then(|| decompose(&f.xors));
        let (engine, init) = XorEngine::init(&f.xors, d.as_ref(), config.engine);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let activity: Vec<f64> = (0..num_vars)
            .map(|_| if config.seed == 0 { 0.0 } else { rng.gen::<f64>() * 1e-5 })
            .collect();
        let mut order = VarOrder::new(num_vars);
        for v in 0..num_vars {
            order.insert(v, &activity);
        }
        let mut s = Solver {
            config,
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            value: vec![None; num_vars],
            level: vec![0; num_vars],
            reason: vec![Reason::Decision; num_vars],
            xor_reason: vec![Vec::new(); num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            engine_lim: Vec::new(),
            qhead: 0,
            xhead: 0,
            engine,
            activity,
            var_inc: 1.0,
            order,
            phase: vec![false; num_vars],
            seen: vec![false; num_vars],
            max_learned: (f.clauses.len() / 3).max(2000),
            root_conflict: false,
            stats: SolverStats::default(),
        };
        if init.is_unsat() {
            s.root_conflict = true;
            return s;
        }
        for (z, e) in init.implied {
            if !s.enqueue_xor(z, e) {
                s.root_conflict = true;
                return s;
            }
        }
        for c in &f.clauses {
            if !s.add_problem_clause(c.lits()) {
                s.root_conflict = true;
                return s;
            }
        }
        s
    }

    pub fn stats(&self) -> SolverStats {
        SolverStats {
            engine: self.engine.stats(),
            ..self.stats
        }
    }

    pub fn engine(&self) -> &XorEngine {
        &self.engine
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value[l.var().index()].map(|b| b == l.is_positive())
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn add_problem_clause(&mut self, lits: &[Lit]) -> bool {
        let mut lits: Vec<Lit> = lits.iter().copied().filter(|&l| self.lit_value(l) != Some(false)).collect();
        if lits.iter().any(|&l| self.lit_value(l) == Some(true)) {
            return true;
        }
        lits.sort();
        lits.dedup();
        match lits.len() {
            0 => false,
            1 => {
                self.assign(lits[0], Reason::Decision);
                true
            }
            _ => {
                self.attach(lits, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learned: bool, lbd: u32) -> usize {
        let cref = self.clauses.len();
        self.watches[lits[0].code()].push(Watcher { cref, blocker: lits[1] });
        self.watches[lits[1].code()].push(Watcher { cref, blocker: lits[0] });
        self.clauses.push(ClauseData {
            lits,
            learned,
            lbd,
            deleted: false,
        });
        cref
    }

    fn assign(&mut self, l: Lit, reason: Reason) {
        let v = l.var().index();
        debug_assert!(self.value[v].is_none());
        self.value[v] = Some(l.is_positive());
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Enqueues an xor-implied literal; false if it is already false.
    fn enqueue_xor(&mut self, z: Lit, e: Explanation) -> bool {
        match self.lit_value(z) {
            Some(true) => true,
            Some(false) => false,
            None => {
                self.xor_reason[z.var().index()] = e.into_lits();
                self.assign(z, Reason::Xor);
                self.stats.xor_propagations += 1;
                true
            }
        }
    }

    /// Clause propagation to fixpoint; returns a falsified clause on conflict.
    fn propagate_clauses(&mut self) -> Option<Vec<Lit>> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_value(w.blocker) == Some(true) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                if self.clauses[w.cref].deleted {
                    continue;
                }
                let c = &mut self.clauses[w.cref].lits;
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                let keep = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.value[first.var().index()].map(|b| b == first.is_positive()) == Some(true) {
                    ws[j] = keep;
                    j += 1;
                    continue;
                }
                let replacement = (2..c.len()).find(|&k| {
                    let l = c[k];
                    self.value[l.var().index()].map(|b| b == l.is_positive()) != Some(false)
                });
                if let Some(k) = replacement {
                    c.swap(1, k);
                    let new_watch = c[1];
                    self.watches[new_watch.code()].push(keep);
                    continue;
                }
                ws[j] = keep;
                j += 1;
                if self.lit_value(first) == Some(false) {
                    conflict = Some(self.clauses[w.cref].lits.clone());
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.assign(first, Reason::Clause(w.cref));
                    self.stats.cnf_propagations += 1;
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// Joint fixpoint of clause propagation and the xor engine.
    fn propagate(&mut self) -> Option<Vec<Lit>> {
        loop {
            if let Some(c) = self.propagate_clauses() {
                return Some(c);
            }
            if self.xhead >= self.trail.len() {
                return None;
            }
            let lit = self.trail[self.xhead];
            self.xhead += 1;
            if !self.engine.contains(lit.var()) {
                continue;
            }
            let res = self.engine.assume(lit);
            for (z, e) in res.implied {
                if self.lit_value(z) == Some(false) {
                    self.stats.xor_conflicts += 1;
                    return Some(e.into_lits());
                }
                self.enqueue_xor(z, e);
            }
            if let Some(c) = res.conflict {
                self.stats.xor_conflicts += 1;
                return Some(c.into_lits());
            }
        }
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for &l in &self.trail[start..] {
            let v = l.var().index();
            self.value[v] = None;
            self.phase[v] = l.is_positive();
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.engine.backtrack_to(self.engine_lim[level as usize]);
        self.engine_lim.truncate(level as usize);
        self.qhead = start;
        self.xhead = self.xhead.min(start);
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bumped(v, &self.activity);
    }

    /// Reason clause of an implied variable; xor explanations become learned clauses here.
    fn reason_lits(&mut self, v: usize) -> Vec<Lit> {
        match self.reason[v] {
            Reason::Clause(c) => self.clauses[c].lits.clone(),
            Reason::Xor => {
                let lits = std::mem::take(&mut self.xor_reason[v]);
                if lits.len() >= 2 {
                    // the implied literal first, then the latest-assigned antecedent
                    let mut w = lits.clone();
                    let k = (1..w.len())
                        .max_by_key(|&k| self.level[w[k].var().index()])
                        .expect("at least two literals");
                    w.swap(1, k);
                    let lbd = self.lbd(&w);
                    let cref = self.attach(w, true, lbd);
                    self.reason[v] = Reason::Clause(cref);
                    self.stats.learned += 1;
                } else {
                    self.xor_reason[v] = lits.clone();
                }
                lits
            }
            Reason::Decision => unreachable!("decisions have no reason"),
        }
    }

    fn lbd(&self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var().index()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    /// First-UIP learning; `conflict` must be falsified with a literal at the current level.
    fn analyze(&mut self, conflict: Vec<Lit>) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learned = vec![Lit::new(Var(0), true)];
        let mut path = 0;
        let mut index = self.trail.len();
        let mut lits = conflict;
        let mut p: Option<Lit> = None;
        loop {
            for &q in &lits {
                let v = q.var().index();
                if p.is_some_and(|p| p.var() == q.var()) || self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                self.bump(v);
                if self.level[v] >= current {
                    path += 1;
                } else {
                    learned.push(q);
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = lit.var().index();
            self.seen[v] = false;
            path -= 1;
            p = Some(lit);
            if path == 0 {
                break;
            }
            lits = self.reason_lits(v);
        }
        learned[0] = !p.expect("a current-level literal");
        for l in &learned[1..] {
            self.seen[l.var().index()] = false;
        }
        let mut back = 0;
        if learned.len() > 1 {
            let k = (1..learned.len())
                .max_by_key(|&k| self.level[learned[k].var().index()])
                .expect("nonempty tail");
            learned.swap(1, k);
            back = self.level[learned[1].var().index()];
        }
        (learned, back)
    }

    fn reduce_learned(&mut self) {
        let locked = |s: &Solver, c: usize| {
            let l = s.clauses[c].lits[0];
            s.reason[l.var().index()] == Reason::Clause(c) && s.lit_value(l) == Some(true)
        };
        let mut candidates: Vec<usize> = (0..self.clauses.len())
            .filter(|&c| {
                let d = &self.clauses[c];
                d.learned && !d.deleted && d.lbd > self.config.keep_glue
            })
            .filter(|&c| !locked(self, c))
            .collect();
        candidates.sort_by_key(|&c| std::cmp::Reverse((self.clauses[c].lbd, self.clauses[c].lits.len())));
        for &c in &candidates[..candidates.len() / 2] {
            self.clauses[c].deleted = true;
            self.clauses[c].lits.shrink_to_fit();
            self.stats.deleted += 1;
        }
        self.max_learned += self.max_learned / 10;
    }

    fn live_learned(&self) -> usize {
        (self.stats.learned - self.stats.deleted) as usize
    }

    fn decide(&mut self) -> Option<Lit> {
        while let Some(v) = self.order.pop(&self.activity) {
            if self.value[v].is_none() {
                return Some(Var::from_index(v).lit(self.phase[v]));
            }
        }
        None
    }

    pub fn solve(&mut self) -> SolveResult {
        if self.root_conflict {
            return SolveResult::Unsat;
        }
        let mut restart_index = 0;
        let mut restart_budget = luby(0) * self.config.restart_base;
        let mut conflicts_since_restart = 0;
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_since_restart += 1;
                let top = conflict
                    .iter()
                    .map(|l| self.level[l.var().index()])
                    .max()
                    .unwrap_or(0);
                if top == 0 {
                    self.root_conflict = true;
                    return SolveResult::Unsat;
                }
                self.backtrack(top);
                let (learned, back) = self.analyze(conflict);
                self.backtrack(back);
                if learned.len() == 1 {
                    self.assign(learned[0], Reason::Decision);
                } else {
                    let lbd = self.lbd(&learned);
                    let first = learned[0];
                    let cref = self.attach(learned, true, lbd);
                    self.stats.learned += 1;
                    self.assign(first, Reason::Clause(cref));
                }
                self.var_inc /= self.config.var_decay;
                if self.config.max_conflicts.is_some_and(|m| self.stats.conflicts >= m) {
                    return SolveResult::Unknown;
                }
            } else {
                if conflicts_since_restart >= restart_budget {
                    self.stats.restarts += 1;
                    restart_index += 1;
                    restart_budget = luby(restart_index) * self.config.restart_base;
                    conflicts_since_restart = 0;
                    self.backtrack(0);
                    continue;
                }
                if self.live_learned() > self.max_learned {
                    self.reduce_learned();
                }
                let Some(lit) = self.decide() else {
                    let model = Assignment::from_values(self.value.clone());
                    return SolveResult::Sat(model);
                };
                self.stats.decisions += 1;
                self.trail_lim.push(self.trail.len());
                self.engine_lim.push(self.engine.mark());
                self.assign(lit, Reason::Decision);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Learned clauses still in the database, including adopted explanations.
    pub fn learned_clauses(&self) -> impl Iterator<Item = &[Lit]> {
        self.clauses
            .iter()
            .filter(|c| c.learned && !c.deleted)
            .map(|c| c.lits.as_slice())
    }
}

/// Solves `f` with a fresh solver.
pub fn solve(f: &CnfXorFormula, config: SolverConfig) -> (SolveResult, SolverStats) {
    let mut s = Solver::new(f, config);
    let r = s.solve();
    (r, s.stats())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::XorConstraint;
    use crate::oracle::is_satisfiable;
    use crate::xorengine::Backend;

    fn xor(vars: &[u32], p: bool) -> XorConstraint {
        XorConstraint::new(vars.iter().map(|&i| Var(i)), p)
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn empty_formula_is_sat() {
        let (r, _) = solve(&CnfXorFormula::new(0), SolverConfig::default());
        assert!(r.is_sat());
    }

    #[test]
    fn forced_false_variable() {
        // x1 ⊕ x2 ⊕ x4, x2 ⊕ x3 ⊕ x5 ≡ ⊥, x3 ⊕ x4 ⊕ x5 sum to x1 ≡ ⊥, so the clause (x1) is unsat
        let mut f = CnfXorFormula::new(5);
        f.add_xor(xor(&[0, 1, 3], true));
        f.add_xor(xor(&[1, 2, 4], false));
        f.add_xor(xor(&[2, 3, 4], true));
        for backend in [Backend::UnitProp, Backend::GaussJordan, Backend::GaussJordanConflictsOnly] {
            let config = SolverConfig {
                engine: EngineConfig {
                    backend,
                    ..EngineConfig::default()
                },
                ..SolverConfig::default()
            };
            let (r, _) = solve(&f, config);
            let SolveResult::Sat(m) = r else { panic!("satisfiable without the clause") };
            assert!(f.is_satisfied_by(&m));
            assert_eq!(m.get(Var(0)), Some(false));
            let mut g = f.clone();
            g.add_clause([Var(0).lit(true)]);
            assert_eq!(solve(&g, config).0, SolveResult::Unsat);
        }
    }

    #[test]
    fn xor_implication_from_unit_clause() {
        let mut f = CnfXorFormula::new(2);
        f.add_clause([Var(0).lit(true)]);
        f.add_xor(xor(&[0, 1], true));
        let mut s = Solver::new(&f, SolverConfig::default());
        assert!(s.propagate().is_none());
        assert_eq!(s.value[1], Some(false));
        assert_eq!(s.xor_reason[1], vec![Var(1).lit(false), Var(0).lit(false)]);
    }

    #[test]
    fn conflict_budget_gives_unknown() {
        // pigeonhole 4 into 3 needs several conflicts
        let mut f = CnfXorFormula::new(12);
        let p = |i: u32, h: u32| Var(i * 3 + h);
        for i in 0..4 {
            f.add_clause((0..3).map(|h| p(i, h).lit(true)));
        }
        for h in 0..3 {
            for i in 0..4 {
                for j in i + 1..4 {
                    f.add_clause([p(i, h).lit(false), p(j, h).lit(false)]);
                }
            }
        }
        let config = SolverConfig {
            max_conflicts: Some(1),
            ..SolverConfig::default()
        };
        assert_eq!(solve(&f, config).0, SolveResult::Unknown);
        assert_eq!(solve(&f, SolverConfig::default()).0, SolveResult::Unsat);
        assert!(!is_satisfiable(&f, &[]).unwrap());
    }
}
