//! The xor-reasoning module seen by the CDCL master: one reasoner per component of the
//! xor-part, with implied cut-variable values relayed between components.

use std::collections::VecDeque;

use crate::decompose::Decomposition;
use crate::formula::{Lit, Var, XorConstraint};
use crate::tableau::{AssignedTableau, DeductionResult, Explanation, Status, SwapPolicy, Tableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Every xor-constraint is a watched parity constraint; no Gauss-Jordan.
    UnitProp,
    /// Gauss-Jordan tableaux reporting every implied literal.
    #[default]
    GaussJordan,
    /// Parity propagation per constraint, plus tableaux whose implications stay internal
    /// and only surface as conflicts.
    GaussJordanConflictsOnly,
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Backend, String> {
        match s {
            "unitprop" => Ok(Backend::UnitProp),
            "gj" => Ok(Backend::GaussJordan),
            "gj-conflicts-only" => Ok(Backend::GaussJordanConflictsOnly),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::UnitProp => "unitprop",
            Backend::GaussJordan => "gj",
            Backend::GaussJordanConflictsOnly => "gj-conflicts-only",
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EngineConfig {
    pub backend: Backend,
    pub swap_policy: SwapPolicy,
}

/// Propagation for a single xor-constraint by counting unassigned variables.
#[derive(Debug, Clone)]
pub struct ParityReasoner {
    vars: Vec<Var>,
    parity: bool,
    value: Vec<Option<bool>>,
    reason: Vec<Option<Explanation>>,
    unassigned: usize,
    sum: bool,
    trail: Vec<usize>,
}

impl ParityReasoner {
    pub fn init(x: &XorConstraint) -> (ParityReasoner, DeductionResult) {
        let n = x.width();
        let mut p = ParityReasoner {
            vars: x.vars().to_vec(),
            parity: x.parity(),
            value: vec![None; n],
            reason: vec![None; n],
            unassigned: n,
            sum: false,
            trail: Vec::new(),
        };
        if x.is_contradiction() {
            return (p, DeductionResult::unsat(Explanation::new(Vec::new())));
        }
        let mut implied = Vec::new();
        if n == 1 {
            let lit = p.vars[0].lit(p.parity);
            let expl = Explanation::new(vec![lit]);
            p.value[0] = Some(p.parity);
            p.reason[0] = Some(expl.clone());
            p.unassigned = 0;
            p.sum = p.parity;
            implied.push((lit, expl));
        }
        (p, DeductionResult::sat(implied))
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    fn set(&mut self, i: usize, v: bool, reason: Option<Explanation>) {
        self.value[i] = Some(v);
        self.reason[i] = reason;
        self.unassigned -= 1;
        self.sum ^= v;
        self.trail.push(i);
    }

    pub fn assume(&mut self, lit: Lit) -> DeductionResult {
        let Ok(i) = self.vars.binary_search(&lit.var()) else {
            return DeductionResult::sat(Vec::new());
        };
        let v = lit.is_positive();
        match self.value[i] {
            Some(old) if old == v => return DeductionResult::sat(Vec::new()),
            Some(_) => {
                let clause = self.reason[i]
                    .clone()
                    .unwrap_or_else(|| Explanation::new(vec![lit, !lit]));
                return DeductionResult::unsat(clause);
            }
            None => {}
        }
        self.set(i, v, None);
        match self.unassigned {
            1 => {
                let z = self.value.iter().position(Option::is_none).expect("one unassigned");
                let vz = self.parity ^ self.sum;
                let zl = self.vars[z].lit(vz);
                let mut lits = vec![zl];
                lits.extend(self.assigned_except(z).map(|l| !l));
                let expl = Explanation::new(lits);
                self.set(z, vz, Some(expl.clone()));
                DeductionResult::sat(vec![(zl, expl)])
            }
            0 if self.sum != self.parity => {
                DeductionResult::unsat(Explanation::new(self.assigned_except(usize::MAX).map(|l| !l).collect()))
            }
            _ => DeductionResult::sat(Vec::new()),
        }
    }

    fn assigned_except(&self, skip: usize) -> impl Iterator<Item = Lit> + '_ {
        (0..self.vars.len())
            .filter(move |&j| j != skip)
            .filter_map(|j| self.value[j].map(|b| self.vars[j].lit(b)))
    }

    pub fn backtrack_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().expect("nonempty trail");
            self.sum ^= self.value[i].expect("trail entries are assigned");
            self.value[i] = None;
            self.reason[i] = None;
            self.unassigned += 1;
        }
    }

    fn audit(&self) -> bool {
        self.value.iter().filter(|v| v.is_none()).count() == self.unassigned
            && self.value.iter().flatten().fold(false, |a, &b| a ^ b) == self.sum
    }
}

#[derive(Debug, Clone)]
pub enum Reasoner {
    Tableau(AssignedTableau),
    Parity(ParityReasoner),
}

impl Reasoner {
    fn assume(&mut self, lit: Lit) -> DeductionResult {
        match self {
            Reasoner::Tableau(t) => t.assume(lit),
            Reasoner::Parity(p) => p.assume(lit),
        }
    }

    fn mark(&self) -> usize {
        match self {
            Reasoner::Tableau(t) => t.mark(),
            Reasoner::Parity(p) => p.mark(),
        }
    }

    fn backtrack_to(&mut self, mark: usize) {
        match self {
            Reasoner::Tableau(t) => t.backtrack_to(mark),
            Reasoner::Parity(p) => p.backtrack_to(mark),
        }
    }

    fn vars(&self) -> &[Var] {
        match self {
            Reasoner::Tableau(t) => t.tableau().vars(),
            Reasoner::Parity(p) => p.vars(),
        }
    }

    /// (rows, columns) of the reasoner's matrix; a parity constraint is a single row.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Reasoner::Tableau(t) => (t.tableau().num_rows(), t.tableau().vars().len()),
            Reasoner::Parity(p) => (1, p.vars().len()),
        }
    }
}

#[derive(Debug, Clone)]
struct Slot {
    reasoner: Reasoner,
    /// Whether implied literals are passed on to the master.
    reports: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub assumes: u64,
    pub implied: u64,
    pub conflicts: u64,
}

#[derive(Debug, Clone)]
enum Entry {
    Assign(usize),
    /// The variable became visible to the master; holds its previous reason.
    Reveal(usize, Option<Explanation>),
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    trail_len: usize,
    touched_len: usize,
}

/// Multiplexes `init`/`assume`/`backtrack_to` over the component reasoners.
#[derive(Debug, Clone)]
pub struct XorEngine {
    config: EngineConfig,
    slots: Vec<Slot>,
    occurs: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    reason: Vec<Option<Explanation>>,
    visible: Vec<bool>,
    position: Vec<usize>,
    trail: Vec<Entry>,
    frames: Vec<Frame>,
    touched: Vec<(usize, usize)>,
    last_touch: Vec<u64>,
    serial: u64,
    queue: VecDeque<(Lit, usize)>,
    monolithic: bool,
    stats: EngineStats,
}

impl XorEngine {
    /// Builds the reasoners for `xors`. With a decomposition each non-singleton component
    /// gets its own tableau and singletons get parity propagation; without one a single
    /// tableau holds everything. Literals implied at this point are root-level and survive
    /// every backtrack.
    pub fn init(xors: &[XorConstraint], d: Option<&Decomposition>, config: EngineConfig) -> (XorEngine, DeductionResult) {
        let xors: Vec<XorConstraint> = xors.iter().filter(|x| !x.is_tautology()).cloned().collect();
        let groups: Vec<Vec<usize>> = match d {
            Some(d) if d.components.iter().map(Vec::len).sum::<usize>() == xors.len() => d.components.clone(),
            Some(_) => crate::decompose::decompose(&xors).components,
            None if xors.is_empty() => Vec::new(),
            None => vec![(0..xors.len()).collect()],
        };
        let mut pending: Vec<(usize, DeductionResult)> = Vec::new();
        let mut slots = Vec::new();
        let mut add = |slots: &mut Vec<Slot>, (reasoner, res): (Reasoner, DeductionResult), reports| {
            pending.push((slots.len(), res));
            slots.push(Slot { reasoner, reports });
        };
        let tableau = |members: &[usize]| -> (Reasoner, DeductionResult) {
            let rows: Vec<XorConstraint> = members.iter().map(|&i| xors[i].clone()).collect();
            match Tableau::build(&rows) {
                Ok(t) => {
                    let (at, res) = AssignedTableau::init(t, config.swap_policy);
                    (Reasoner::Tableau(at), res)
                }
                Err(_) => {
                    let empty = Tableau::build(&[]).expect("empty system is consistent");
                    let (at, _) = AssignedTableau::init(empty, config.swap_policy);
                    (Reasoner::Tableau(at), DeductionResult::unsat(Explanation::new(Vec::new())))
                }
            }
        };
        let parity = |i: usize| {
            let (p, res) = ParityReasoner::init(&xors[i]);
            (Reasoner::Parity(p), res)
        };
        match config.backend {
            Backend::UnitProp => {
                for i in 0..xors.len() {
                    add(&mut slots, parity(i), true);
                }
            }
            Backend::GaussJordan => {
                for g in &groups {
                    if g.len() == 1 && d.is_some() {
                        add(&mut slots, parity(g[0]), true);
                    } else {
                        add(&mut slots, tableau(g), true);
                    }
                }
            }
            Backend::GaussJordanConflictsOnly => {
                for i in 0..xors.len() {
                    add(&mut slots, parity(i), true);
                }
                for g in groups.iter().filter(|g| g.len() > 1 || d.is_none()) {
                    add(&mut slots, tableau(g), false);
                }
            }
        }

        let n = xors.iter().flat_map(|x| x.vars()).map(|v| v.index() + 1).max().unwrap_or(0);
        let mut occurs = vec![Vec::new(); n];
        for (id, s) in slots.iter().enumerate() {
            for v in s.reasoner.vars() {
                occurs[v.index()].push(id);
            }
        }
        let monolithic = config.backend == Backend::GaussJordan
            && slots.len() == 1
            && matches!(slots[0].reasoner, Reasoner::Tableau(_));
        let num_slots = slots.len();
        let mut engine = XorEngine {
            config,
            slots,
            occurs,
            value: vec![None; n],
            reason: vec![None; n],
            visible: vec![false; n],
            position: vec![0; n],
            trail: Vec::new(),
            frames: Vec::new(),
            touched: Vec::new(),
            last_touch: vec![0; num_slots],
            serial: 0,
            queue: VecDeque::new(),
            monolithic: monolithic || (xors.is_empty() && config.backend == Backend::GaussJordan),
            stats: EngineStats::default(),
        };
        let mut out = Vec::new();
        let mut outcome = Ok(());
        for (id, res) in pending {
            outcome = engine.absorb(id, res, &mut out);
            if outcome.is_err() {
                break;
            }
        }
        let outcome = outcome.and_then(|_| engine.run(&mut out));
        let result = engine.finish(out, outcome);
        (engine, result)
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    pub fn num_reasoners(&self) -> usize {
        self.slots.len()
    }

    pub fn reasoners(&self) -> impl Iterator<Item = &Reasoner> {
        self.slots.iter().map(|s| &s.reasoner)
    }

    /// Matrix (rows, columns) of every reasoner.
    pub fn component_dims(&self) -> Vec<(usize, usize)> {
        self.slots.iter().map(|s| s.reasoner.dims()).collect()
    }

    /// Total matrix elements over all reasoners.
    pub fn matrix_elements(&self) -> usize {
        self.component_dims().iter().map(|(r, c)| r * c).sum()
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn swaps(&self) -> u64 {
        self.slots
            .iter()
            .map(|s| match &s.reasoner {
                Reasoner::Tableau(t) => t.swaps(),
                Reasoner::Parity(_) => 0,
            })
            .sum()
    }

    /// True if `v` occurs in some xor-constraint.
    pub fn contains(&self, v: Var) -> bool {
        self.occurs.get(v.index()).is_some_and(|o| !o.is_empty())
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.value.get(v.index()).copied().flatten()
    }

    /// Every literal assigned in the engine, assumed or implied, including hidden ones.
    pub fn assigned_lits(&self) -> std::collections::BTreeSet<Lit> {
        self.value
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| Var::from_index(i).lit(b)))
            .collect()
    }

    /// The clause recorded for an implied literal.
    pub fn explain(&self, lit: Lit) -> Option<&Explanation> {
        let i = lit.var().index();
        (self.value.get(i).copied().flatten() == Some(lit.is_positive()))
            .then(|| self.reason[i].as_ref())
            .flatten()
    }

    /// Number of assumptions currently in force, usable with [`backtrack_to`](Self::backtrack_to).
    pub fn mark(&self) -> usize {
        self.frames.len()
    }

    /// Passes a master assignment to every reasoner containing its variable and relays the
    /// consequences to fixpoint.
    pub fn assume(&mut self, lit: Lit) -> DeductionResult {
        self.stats.assumes += 1;
        let i = lit.var().index();
        if !self.contains(lit.var()) {
            return DeductionResult::sat(Vec::new());
        }
        let v = lit.is_positive();
        match self.value[i] {
            Some(old) if old == v && self.visible[i] => return DeductionResult::sat(Vec::new()),
            Some(old) if old != v => {
                self.stats.conflicts += 1;
                let clause = match &self.reason[i] {
                    Some(e) => self.resolve_hidden(e.clone()),
                    None => Explanation::new(vec![lit, !lit]),
                };
                return DeductionResult::unsat(clause);
            }
            _ => {}
        }
        self.serial += 1;
        self.frames.push(Frame {
            trail_len: self.trail.len(),
            touched_len: self.touched.len(),
        });
        if self.value[i].is_some() {
            self.reveal(lit, None, None);
        } else {
            self.assign(lit, None, true);
            self.relay(lit, None, true);
        }
        let mut out = Vec::new();
        let outcome = self.run(&mut out);
        self.finish(out, outcome)
    }

    /// Retracts every assumption made after `mark` together with its consequences.
    pub fn backtrack_to(&mut self, mark: usize) {
        assert!(mark <= self.frames.len(), "backtrack_to: mark beyond trail");
        self.queue.clear();
        while self.frames.len() > mark {
            let f = self.frames.pop().expect("nonempty frames");
            for (id, m) in self.touched.drain(f.touched_len..).rev() {
                self.slots[id].reasoner.backtrack_to(m);
            }
            while self.trail.len() > f.trail_len {
                match self.trail.pop().expect("nonempty trail") {
                    Entry::Assign(i) => {
                        self.value[i] = None;
                        self.reason[i] = None;
                        self.visible[i] = false;
                    }
                    Entry::Reveal(i, old) => {
                        self.reason[i] = old;
                        self.visible[i] = false;
                    }
                }
            }
        }
    }

    /// Implied binary xor-constraints; only available with a single Gauss-Jordan tableau.
    pub fn implied_binary_xors(&self) -> Option<Vec<XorConstraint>> {
        if !self.monolithic {
            return None;
        }
        Some(match self.slots.first() {
            Some(Slot {
                reasoner: Reasoner::Tableau(t),
                ..
            }) => t.implied_binary_xors(),
            _ => Vec::new(),
        })
    }

    /// Recomputes every reasoner's counters and checks them against the maintained ones.
    pub fn audit(&self) -> bool {
        self.slots.iter().all(|s| match &s.reasoner {
            Reasoner::Tableau(t) => t.audit_counters(),
            Reasoner::Parity(p) => p.audit(),
        })
    }

    fn finish(&mut self, out: Vec<(Lit, Explanation)>, outcome: Result<(), Explanation>) -> DeductionResult {
        self.stats.implied += out.len() as u64;
        match outcome {
            Ok(()) => DeductionResult::sat(out),
            Err(conflict) => {
                self.queue.clear();
                self.stats.conflicts += 1;
                DeductionResult {
                    status: Status::Unsat,
                    implied: out,
                    conflict: Some(self.resolve_hidden(conflict)),
                }
            }
        }
    }

    fn assign(&mut self, lit: Lit, reason: Option<Explanation>, visible: bool) {
        let i = lit.var().index();
        self.value[i] = Some(lit.is_positive());
        self.reason[i] = reason;
        self.visible[i] = visible;
        self.position[i] = self.trail.len();
        self.trail.push(Entry::Assign(i));
    }

    /// Makes an internally known literal visible, optionally with a new reason, and hands it
    /// to the reporting reasoners.
    fn reveal(&mut self, lit: Lit, reason: Option<Explanation>, source: Option<usize>) {
        let i = lit.var().index();
        let old = match reason {
            Some(r) => self.reason[i].replace(r),
            None => self.reason[i].clone(),
        };
        self.visible[i] = true;
        self.trail.push(Entry::Reveal(i, old));
        for &id in &self.occurs[i] {
            if Some(id) != source && self.slots[id].reports {
                self.queue.push_back((lit, id));
            }
        }
    }

    /// Queues `lit` for every reasoner containing it except `source`; hidden literals only
    /// go to reasoners that do not report.
    fn relay(&mut self, lit: Lit, source: Option<usize>, visible: bool) {
        for &id in &self.occurs[lit.var().index()] {
            if Some(id) != source && (visible || !self.slots[id].reports) {
                self.queue.push_back((lit, id));
            }
        }
    }

    fn touch(&mut self, id: usize) {
        if !self.frames.is_empty() && self.last_touch[id] != self.serial {
            self.last_touch[id] = self.serial;
            self.touched.push((id, self.slots[id].reasoner.mark()));
        }
    }

    fn run(&mut self, out: &mut Vec<(Lit, Explanation)>) -> Result<(), Explanation> {
        while let Some((lit, id)) = self.queue.pop_front() {
            self.touch(id);
            let res = self.slots[id].reasoner.assume(lit);
            self.absorb(id, res, out)?;
        }
        Ok(())
    }

    fn absorb(&mut self, id: usize, res: DeductionResult, out: &mut Vec<(Lit, Explanation)>) -> Result<(), Explanation> {
        if let Some(conflict) = res.conflict {
            return Err(conflict);
        }
        let reports = self.slots[id].reports;
        for (z, expl) in res.implied {
            let i = z.var().index();
            match self.value[i] {
                None => {
                    self.assign(z, Some(expl.clone()), reports);
                    if reports {
                        out.push((z, expl));
                    }
                    self.relay(z, Some(id), reports);
                }
                Some(b) if b == z.is_positive() => {
                    if reports && !self.visible[i] {
                        out.push((z, expl.clone()));
                        self.reveal(z, Some(expl), Some(id));
                    }
                }
                Some(_) => return Err(expl),
            }
        }
        Ok(())
    }

    /// Resolves away literals the master has not seen, latest first, so the clause only
    /// mentions master assignments.
    fn resolve_hidden(&self, clause: Explanation) -> Explanation {
        let mut lits: Vec<Lit> = clause.into_lits();
        loop {
            let hidden = lits
                .iter()
                .enumerate()
                .filter(|(_, l)| {
                    let i = l.var().index();
                    i < self.visible.len() && self.value[i] == Some(!l.is_positive()) && !self.visible[i]
                })
                .max_by_key(|(_, l)| self.position[l.var().index()])
                .map(|(k, _)| k);
            let Some(k) = hidden else {
                break;
            };
            let l = lits.swap_remove(k);
            let reason = self.reason[l.var().index()]
                .as_ref()
                .expect("hidden literals are implied");
            for &r in reason.lits() {
                if r != !l && !lits.contains(&r) {
                    lits.push(r);
                }
            }
        }
        Explanation::new(lits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decompose;

    fn xor(vars: &[u32], p: bool) -> XorConstraint {
        XorConstraint::new(vars.iter().map(|&i| Var(i)), p)
    }

    fn cfg(backend: Backend) -> EngineConfig {
        EngineConfig {
            backend,
            swap_policy: SwapPolicy::default(),
        }
    }

    #[test]
    fn parity_reasoner_propagates_last_variable() {
        let (mut p, res) = ParityReasoner::init(&xor(&[0, 1, 2], true));
        assert!(res.implied.is_empty());
        assert!(p.assume(Var(0).lit(true)).implied.is_empty());
        let res = p.assume(Var(2).lit(true));
        assert_eq!(res.implied.len(), 1);
        let (z, e) = &res.implied[0];
        assert_eq!(*z, Var(1).lit(true));
        assert_eq!(e.lits(), &[Var(1).lit(true), Var(0).lit(false), Var(2).lit(false)]);
        assert!(p.assume(Var(1).lit(false)).is_unsat());
        p.backtrack_to(1);
        assert!(p.audit());
        assert_eq!(p.assume(Var(1).lit(false)).implied[0].0, Var(2).lit(false));
    }

    #[test]
    fn unit_constraint_implied_at_init() {
        for backend in [Backend::UnitProp, Backend::GaussJordan, Backend::GaussJordanConflictsOnly] {
            let xs = vec![xor(&[3], true), xor(&[3, 4], true)];
            let d = decompose(&xs);
            let (e, res) = XorEngine::init(&xs, Some(&d), cfg(backend));
            assert!(!res.is_unsat());
            assert_eq!(e.value(Var(3)), Some(true));
            assert_eq!(e.value(Var(4)), Some(false));
            assert!(res.implied.iter().any(|(l, _)| *l == Var(3).lit(true)));
        }
    }

    #[test]
    fn opposite_cut_values_are_unsat_at_init() {
        // two blocks sharing x0, one forcing x0 and one forcing ¬x0
        let xs = vec![
            xor(&[0, 1, 2], true),
            xor(&[1, 2], false),
            xor(&[0, 3, 4], false),
            xor(&[3, 4], false),
        ];
        let d = decompose(&xs);
        assert!(d.non_singleton_count() >= 2);
        let (_, res) = XorEngine::init(&xs, Some(&d), cfg(Backend::GaussJordan));
        assert!(res.is_unsat());
    }

    #[test]
    fn absent_variable_is_ignored() {
        let xs = vec![xor(&[0, 1], true)];
        let (mut e, _) = XorEngine::init(&xs, None, cfg(Backend::GaussJordan));
        let res = e.assume(Var(7).lit(true));
        assert!(!res.is_unsat() && res.implied.is_empty());
        assert_eq!(e.mark(), 0);
    }

    #[test]
    fn backtrack_restores_post_init_state() {
        let xs = vec![xor(&[0, 1, 2], true), xor(&[2, 3], false), xor(&[5], false)];
        let (mut e, _) = XorEngine::init(&xs, None, cfg(Backend::GaussJordan));
        let init = e.assigned_lits();
        e.assume(Var(0).lit(true));
        e.assume(Var(3).lit(true));
        assert!(e.assigned_lits().len() > init.len());
        e.backtrack_to(0);
        assert_eq!(e.assigned_lits(), init);
        assert!(e.audit());
    }

    #[test]
    fn conflicts_only_hides_implications_but_finds_conflicts() {
        // the two constraints entail x2 ≡ x3, which parity propagation alone cannot see
        let xs = vec![xor(&[0, 1, 2], true), xor(&[0, 1, 3], true)];
        let (mut e, _) = XorEngine::init(&xs, None, cfg(Backend::GaussJordanConflictsOnly));
        let res = e.assume(Var(2).lit(true));
        assert!(res.implied.is_empty());
        let res = e.assume(Var(3).lit(false));
        assert!(res.is_unsat());
        let mut c: Vec<Lit> = res.conflict.unwrap().into_lits();
        c.sort();
        assert_eq!(c, vec![Var(2).lit(false), Var(3).lit(true)]);
    }
}
