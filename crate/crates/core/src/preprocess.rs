//! Simplification before search: unit fixing, binary xor substitution, elimination of
//! xor-internal variables. Every removed variable leaves a record for model reconstruction.

use std::collections::BTreeSet;

use crate::decompose::{decompose, Decomposition, DecompositionStats};
use crate::eliminate::{eliminable_vars, eliminate_with, EliminationOptions, EliminationRecord};
use crate::formula::{Clause, CnfXorFormula, Lit, Var, XorConstraint};

#[derive(Debug, Clone, Copy)]
pub struct PreprocessOptions {
    pub eliminate: bool,
    /// Width cap for constraints produced by elimination.
    pub max_width: Option<usize>,
}

impl Default for PreprocessOptions {
    fn default() -> PreprocessOptions {
        PreprocessOptions {
            eliminate: true,
            max_width: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PreprocessStats {
    pub fixed: usize,
    pub substituted: usize,
    pub eliminated: usize,
    /// Decomposition of the xor-part before and after elimination.
    pub before_elimination: DecompositionStats,
    pub after_elimination: DecompositionStats,
    pub cut_vars: usize,
}

#[derive(Debug, Clone)]
pub enum Preprocessed {
    Unsat,
    Simplified {
        formula: CnfXorFormula,
        records: Vec<EliminationRecord>,
        decomposition: Decomposition,
        stats: PreprocessStats,
    },
}

struct State {
    num_vars: usize,
    clauses: Vec<Clause>,
    xors: Vec<XorConstraint>,
    records: Vec<EliminationRecord>,
}

impl State {
    fn record(&mut self, var: Var, definition: XorConstraint) {
        let order = self.records.len();
        self.records.push(EliminationRecord { var, definition, order });
    }

    /// Rewrites every constraint with `map`, which sends a variable to `(replacement, flip)`
    /// or, with `None` replacement, to the constant `flip`. Returns false on a contradiction.
    fn rewrite(&mut self, map: &[Option<(Option<Var>, bool)>]) -> bool {
        let image = |l: Lit| -> Result<Lit, bool> {
            match map[l.var().index()] {
                None => Ok(l),
                Some((Some(w), flip)) => Ok(w.lit(l.is_positive() ^ flip)),
                Some((None, value)) => Err(value == l.is_positive()),
            }
        };
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            let mut lits = Vec::with_capacity(c.len());
            let mut satisfied = false;
            for &l in c.lits() {
                match image(l) {
                    Ok(m) => lits.push(m),
                    Err(true) => satisfied = true,
                    Err(false) => {}
                }
            }
            if satisfied {
                continue;
            }
            match Clause::new(lits) {
                Some(c) if c.is_empty() => return false,
                Some(c) => clauses.push(c),
                None => {}
            }
        }
        let mut xors = Vec::with_capacity(self.xors.len());
        for x in &self.xors {
            let mut parity = x.parity();
            let mut vars = Vec::with_capacity(x.width());
            for &v in x.vars() {
                match map[v.index()] {
                    None => vars.push(v),
                    Some((Some(w), flip)) => {
                        vars.push(w);
                        parity ^= flip;
                    }
                    Some((None, value)) => parity ^= value,
                }
            }
            let y = XorConstraint::new(vars, parity);
            if y.is_contradiction() {
                return false;
            }
            if !y.is_tautology() {
                xors.push(y);
            }
        }
        self.clauses = clauses;
        self.xors = xors;
        true
    }

    /// Fixes variables of unit clauses and unit xors. Returns (progress, consistent).
    fn fix_units(&mut self) -> (bool, bool) {
        let mut map: Vec<Option<(Option<Var>, bool)>> = vec![None; self.num_vars];
        let mut progress = false;
        let units = self
            .clauses
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c.lits()[0])
            .chain(self.xors.iter().filter_map(XorConstraint::as_unit));
        for l in units {
            match map[l.var().index()] {
                Some((None, v)) if v != l.is_positive() => return (true, false),
                Some(_) => {}
                None => {
                    map[l.var().index()] = Some((None, l.is_positive()));
                    progress = true;
                }
            }
        }
        if !progress {
            return (false, true);
        }
        for (i, m) in map.iter().enumerate() {
            if let Some((None, value)) = *m {
                self.record(Var::from_index(i), XorConstraint::new([], value));
            }
        }
        (true, self.rewrite(&map))
    }

    /// Replaces every variable bound by binary xors with a representative of its class.
    fn substitute_binaries(&mut self) -> (bool, bool) {
        let n = self.num_vars;
        let mut parent: Vec<usize> = (0..n).collect();
        let mut flip = vec![false; n];
        fn root(parent: &mut [usize], flip: &mut [bool], x: usize) -> (usize, bool) {
            let mut path = Vec::new();
            let mut r = x;
            while parent[r] != r {
                path.push(r);
                r = parent[r];
            }
            // compress; flip[y] becomes the parity from y to the root
            let mut acc = false;
            for &y in path.iter().rev() {
                acc ^= flip[y];
                flip[y] = acc;
                parent[y] = r;
            }
            (r, if x == r { false } else { flip[x] })
        }
        let mut progress = false;
        for x in self.xors.iter().filter(|x| x.width() == 2) {
            let (a, b) = (x.vars()[0].index(), x.vars()[1].index());
            let (ra, pa) = root(&mut parent, &mut flip, a);
            let (rb, pb) = root(&mut parent, &mut flip, b);
            if ra == rb {
                if pa ^ pb != x.parity() {
                    return (true, false);
                }
                continue;
            }
            // the smaller index stays as representative
            let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[drop] = keep;
            flip[drop] = pa ^ pb ^ x.parity();
            progress = true;
        }
        if !progress {
            return (false, true);
        }
        let mut map: Vec<Option<(Option<Var>, bool)>> = vec![None; n];
        for y in 0..n {
            let (r, p) = root(&mut parent, &mut flip, y);
            if r != y {
                map[y] = Some((Some(Var::from_index(r)), p));
                self.record(Var::from_index(y), XorConstraint::new([Var::from_index(r)], p));
            }
        }
        (true, self.rewrite(&map))
    }
}

/// Unit fixing and binary substitution to fixpoint, then guarded elimination.
pub fn preprocess(f: &CnfXorFormula, options: &PreprocessOptions) -> Preprocessed {
    if f.is_trivially_unsat() {
        return Preprocessed::Unsat;
    }
    let num_vars = f
        .xors
        .iter()
        .flat_map(|x| x.vars().iter().copied())
        .chain(f.clauses.iter().flat_map(|c| c.lits().iter().map(|l| l.var())))
        .map(|v| v.index() + 1)
        .fold(f.num_vars, usize::max);
    let mut s = State {
        num_vars,
        clauses: f.clauses.clone(),
        xors: f.xors.iter().filter(|x| !x.is_tautology()).cloned().collect(),
        records: Vec::new(),
    };
    let mut stats = PreprocessStats::default();
    loop {
        let before = s.records.len();
        let (units, ok) = s.fix_units();
        stats.fixed += s.records.len() - before;
        if !ok {
            return Preprocessed::Unsat;
        }
        if units {
            continue;
        }
        let before = s.records.len();
        let (binaries, ok) = s.substitute_binaries();
        stats.substituted += s.records.len() - before;
        if !ok {
            return Preprocessed::Unsat;
        }
        if !binaries {
            break;
        }
    }

    let mut formula = CnfXorFormula {
        num_vars,
        clauses: s.clauses,
        xors: s.xors,
    };
    let d = decompose(&formula.xors);
    stats.before_elimination = d.stats(&formula.xors);
    stats.cut_vars = d.cut_vars.len();
    let mut records = s.records;
    if options.eliminate {
        let allowed: BTreeSet<Var> = eliminable_vars(&formula, &d);
        let e = eliminate_with(
            &formula,
            &allowed,
            &EliminationOptions {
                max_width: options.max_width,
            },
            Some(&d),
        );
        stats.eliminated = e.records.len();
        let offset = records.len();
        records.extend(e.records.into_iter().map(|r| EliminationRecord {
            order: r.order + offset,
            ..r
        }));
        formula = e.formula;
    }
    let decomposition = decompose(&formula.xors);
    stats.after_elimination = decomposition.stats(&formula.xors);
    Preprocessed::Simplified {
        formula,
        records,
        decomposition,
        stats,
    }
}
