//! Elimination of xor-internal variables by substitution.

use std::collections::BTreeSet;

use crate::decompose::{decompose, Decomposition};
use crate::formula::{Assignment, CnfXorFormula, Var, XorConstraint};

/// `var := ⊕definition.vars ⊕ definition.parity`, the `order`-th elimination step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationRecord {
    pub var: Var,
    pub definition: XorConstraint,
    pub order: usize,
}

impl EliminationRecord {
    /// Value of `var` under `a`; panics if a definition variable is unassigned.
    pub fn evaluate(&self, a: &Assignment) -> bool {
        self.definition.vars().iter().fold(self.definition.parity(), |acc, &w| {
            acc ^ a
                .get(w)
                .unwrap_or_else(|| panic!("definition of {} needs unassigned {w}", self.var))
        })
    }
}

/// Variables occurring in some xor-constraint and in no clause.
pub fn xor_internal_vars(f: &CnfXorFormula) -> BTreeSet<Var> {
    let in_clauses: BTreeSet<Var> = f
        .clauses
        .iter()
        .flat_map(|c| c.lits().iter().map(|l| l.var()))
        .collect();
    f.xors
        .iter()
        .flat_map(|x| x.vars().iter().copied())
        .filter(|v| !in_clauses.contains(v))
        .collect()
}

/// Xor-internal variables that are not cut variables of `d`.
pub fn eliminable_vars(f: &CnfXorFormula, d: &Decomposition) -> BTreeSet<Var> {
    xor_internal_vars(f)
        .into_iter()
        .filter(|v| !d.cut_vars.contains(v))
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct EliminationOptions {
    /// Skip a variable if substituting it would create a constraint wider than this.
    pub max_width: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Elimination {
    pub formula: CnfXorFormula,
    pub records: Vec<EliminationRecord>,
    /// Allowed variables left in place by the width cap or the decomposition guard.
    pub skipped: Vec<Var>,
}

struct Work {
    xors: Vec<Option<XorConstraint>>,
    occ: Vec<BTreeSet<usize>>,
}

impl Work {
    fn new(f: &CnfXorFormula) -> Work {
        let n = f
            .xors
            .iter()
            .flat_map(|x| x.vars().iter().map(|v| v.index() + 1))
            .fold(f.num_vars, usize::max);
        let mut occ = vec![BTreeSet::new(); n];
        for (i, x) in f.xors.iter().enumerate() {
            for v in x.vars() {
                occ[v.index()].insert(i);
            }
        }
        Work {
            xors: f.xors.iter().cloned().map(Some).collect(),
            occ,
        }
    }

    fn get(&self, i: usize) -> &XorConstraint {
        self.xors[i].as_ref().expect("live constraint")
    }

    /// Shortest constraint containing `v`, lowest index on ties.
    fn definition_site(&self, v: Var) -> Option<usize> {
        self.occ[v.index()].iter().copied().min_by_key(|&i| (self.get(i).width(), i))
    }

    fn replace(&mut self, i: usize, new: Option<XorConstraint>) {
        let old = self.xors[i].take().expect("live constraint");
        for v in old.vars() {
            self.occ[v.index()].remove(&i);
        }
        if let Some(x) = &new {
            for v in x.vars() {
                self.occ[v.index()].insert(i);
            }
        }
        self.xors[i] = new;
    }

    /// Substitutes `v` out using constraint `site`, which is removed.
    fn eliminate(&mut self, v: Var, site: usize) -> XorConstraint {
        let d = self.get(site).clone();
        let others: Vec<usize> = self.occ[v.index()].iter().copied().filter(|&i| i != site).collect();
        for i in others {
            let sum = self.get(i).add(&d);
            self.replace(i, (!sum.is_tautology()).then_some(sum));
        }
        self.replace(site, None);
        XorConstraint::new(d.vars().iter().copied().filter(|&w| w != v), d.parity())
    }
}

/// Eliminates every variable of `allowed` (ascending) that occurs in some constraint:
/// the shortest constraint containing it becomes its definition and is removed, and the
/// variable is substituted out of all other constraints.
pub fn eliminate_all(f: &CnfXorFormula, allowed: &BTreeSet<Var>) -> Elimination {
    eliminate_with(f, allowed, &EliminationOptions::default(), None)
}

/// Like [`eliminate_all`], but with a width cap and, when `guard` is the decomposition of
/// `f.xors`, refusing any step that would change the cut variables or the number of
/// non-singleton components.
pub fn eliminate_with(
    f: &CnfXorFormula,
    allowed: &BTreeSet<Var>,
    options: &EliminationOptions,
    guard: Option<&Decomposition>,
) -> Elimination {
    let mut work = Work::new(f);
    let mut component_of: Vec<usize> = guard.map(|d| d.component_of.clone()).unwrap_or_default();
    let mut members: Vec<BTreeSet<usize>> = guard
        .map(|d| d.components.iter().map(|c| c.iter().copied().collect()).collect())
        .unwrap_or_default();
    let mut records = Vec::new();
    let mut skipped = Vec::new();

    for &v in allowed {
        let Some(site) = work.definition_site(v) else {
            continue;
        };
        let d = work.get(site);
        let sums: Vec<(usize, XorConstraint)> = work.occ[v.index()]
            .iter()
            .filter(|&&i| i != site)
            .map(|&i| (i, work.get(i).add(d)))
            .collect();
        if let Some(cap) = options.max_width {
            if sums.iter().any(|(_, s)| s.width() > cap) {
                skipped.push(v);
                continue;
            }
        }
        if let Some(dec) = guard {
            let comp = &members[component_of[site]];
            let after: Vec<XorConstraint> = comp
                .iter()
                .filter(|&&i| i != site)
                .map(|&i| match sums.iter().find(|(j, _)| *j == i) {
                    Some((_, s)) => s.clone(),
                    None => work.get(i).clone(),
                })
                .filter(|x| !x.is_tautology())
                .collect();
            if !preserves_component(&dec.cut_vars, comp.len(), &comp_vars(&work, comp), &after) {
                skipped.push(v);
                continue;
            }
        }
        let definition = work.eliminate(v, site);
        if guard.is_some() {
            let c = component_of[site];
            members[c].retain(|&i| work.xors[i].is_some());
            component_of[site] = usize::MAX;
        }
        records.push(EliminationRecord {
            var: v,
            definition,
            order: records.len(),
        });
    }

    let formula = CnfXorFormula {
        num_vars: f.num_vars,
        clauses: f.clauses.clone(),
        xors: work.xors.into_iter().flatten().collect(),
    };
    Elimination {
        formula,
        records,
        skipped,
    }
}

fn comp_vars(work: &Work, comp: &BTreeSet<usize>) -> BTreeSet<Var> {
    comp.iter()
        .flat_map(|&i| work.get(i).vars().iter().copied())
        .collect()
}

/// A component with `before_len` constraints over `before_vars` may become `after` when it
/// keeps all of its cut variables and stays one block (or, for a singleton, when the
/// constraint touches no cut variable and simply disappears).
fn preserves_component(
    cut_vars: &BTreeSet<Var>,
    before_len: usize,
    before_vars: &BTreeSet<Var>,
    after: &[XorConstraint],
) -> bool {
    let cuts: Vec<&Var> = before_vars.iter().filter(|v| cut_vars.contains(v)).collect();
    if before_len == 1 {
        return cuts.is_empty() && after.is_empty();
    }
    if after.len() < 2 || after.iter().any(XorConstraint::is_contradiction) {
        return false;
    }
    let after_vars: BTreeSet<Var> = after.iter().flat_map(|x| x.vars().iter().copied()).collect();
    cuts.iter().all(|v| after_vars.contains(v)) && decompose(after).num_components() == 1
}

/// Extends `model` to the eliminated variables by replaying `records` in reverse order.
///
/// Values already present for eliminated variables are overwritten.
pub fn reconstruct_model(records: &[EliminationRecord], model: &Assignment) -> Assignment {
    let mut out = model.clone();
    for r in records.iter().rev() {
        let value = r.evaluate(&out);
        out.overwrite(r.var, value);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Lit;
    use crate::oracle::{enumerate_models, is_satisfiable, model_count};
    use rand::{Rng, SeedableRng};

    fn xor(vars: &[u32], p: bool) -> XorConstraint {
        XorConstraint::new(vars.iter().map(|&i| Var(i)), p)
    }

    fn vars(v: &[u32]) -> BTreeSet<Var> {
        v.iter().map(|&i| Var(i)).collect()
    }

    #[test]
    fn internal_vars() {
        let mut f = CnfXorFormula::new(3);
        f.add_clause([Lit::from_dimacs(1), Lit::from_dimacs(-2)]);
        f.add_xor(xor(&[0, 1, 2], true));
        assert_eq!(xor_internal_vars(&f), vars(&[2]));
        f.clauses.clear();
        assert_eq!(xor_internal_vars(&f), vars(&[0, 1, 2]));
        f.xors.clear();
        assert!(xor_internal_vars(&f).is_empty());
    }

    #[test]
    fn eliminates_by_substitution() {
        // x1 ⊕ x2 ⊕ x3 ≡ ⊤, x1 ⊕ x4 ≡ ⊥ ; eliminating x1 (shortest definition: x1 ⊕ x4)
        // gives x2 ⊕ x3 ⊕ x4 ≡ ⊤
        let f = CnfXorFormula {
            num_vars: 5,
            clauses: vec![],
            xors: vec![xor(&[1, 2, 3], true), xor(&[1, 4], false)],
        };
        let e = eliminate_all(&f, &vars(&[1]));
        assert_eq!(e.formula.xors, vec![xor(&[2, 3, 4], true)]);
        assert_eq!(e.records.len(), 1);
        assert_eq!(e.records[0].definition, xor(&[4], false));
    }

    #[test]
    fn single_occurrence_removes_the_constraint() {
        let f = CnfXorFormula {
            num_vars: 3,
            clauses: vec![],
            xors: vec![xor(&[0, 1, 2], true)],
        };
        let e = eliminate_all(&f, &vars(&[0]));
        assert!(e.formula.xors.is_empty());
    }

    #[test]
    fn reconstruct_evaluates_definitions() {
        let records = vec![EliminationRecord {
            var: Var(1),
            definition: xor(&[2, 3], true),
            order: 0,
        }];
        let mut m = Assignment::new(4);
        m.set(Var(0), false);
        m.set(Var(2), true);
        m.set(Var(3), true);
        assert_eq!(reconstruct_model(&records, &m).get(Var(1)), Some(true));
        assert_eq!(reconstruct_model(&[], &m), m);
    }

    #[test]
    #[should_panic(expected = "unassigned")]
    fn reconstruct_requires_definition_values() {
        let records = vec![EliminationRecord {
            var: Var(0),
            definition: xor(&[1], true),
            order: 0,
        }];
        reconstruct_model(&records, &Assignment::new(2));
    }

    #[test]
    fn width_cap_skips() {
        let f = CnfXorFormula {
            num_vars: 6,
            clauses: vec![],
            xors: vec![xor(&[0, 1, 2], true), xor(&[0, 3, 4, 5], false)],
        };
        let opts = EliminationOptions { max_width: Some(4) };
        let e = eliminate_with(&f, &vars(&[0]), &opts, None);
        assert_eq!(e.skipped, vec![Var(0)]);
        assert_eq!(e.formula.xors.len(), 2);
    }

    fn random_formula(rng: &mut impl Rng, n: u32) -> CnfXorFormula {
        let mut f = CnfXorFormula::new(n as usize);
        for _ in 0..rng.gen_range(1..8) {
            let w = rng.gen_range(1..5);
            f.add_xor(xor(&(0..w).map(|_| rng.gen_range(0..n)).collect::<Vec<_>>(), rng.gen()));
        }
        for _ in 0..rng.gen_range(0..4) {
            let w = rng.gen_range(1..4);
            f.add_clause((0..w).map(|_| Var(rng.gen_range(0..n)).lit(rng.gen())));
        }
        f
    }

    #[test]
    fn random_elimination_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n = rng.gen_range(2..=12);
            let f = random_formula(&mut rng, n);
            let allowed = xor_internal_vars(&f);
            let e = eliminate_all(&f, &allowed);
            let eliminated: BTreeSet<Var> = e.records.iter().map(|r| r.var).collect();
            for x in &e.formula.xors {
                assert!(x.vars().iter().all(|v| !eliminated.contains(v)));
            }
            assert_eq!(is_satisfiable(&f, &[]).unwrap(), is_satisfiable(&e.formula, &[]).unwrap());
            // eliminated variables are free in the result: one model of f per value
            assert_eq!(
                model_count(&e.formula, &[]).unwrap(),
                model_count(&f, &[]).unwrap() << eliminated.len()
            );
            for m in enumerate_models(&e.formula, &[]).unwrap() {
                assert!(f.is_satisfied_by(&reconstruct_model(&e.records, &m)));
            }
        }
    }

    #[test]
    fn guarded_elimination_preserves_decomposition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..400 {
            let n = rng.gen_range(2..=12);
            let f = random_formula(&mut rng, n);
            let d = decompose(&f.xors);
            let e = eliminate_with(&f, &eliminable_vars(&f, &d), &EliminationOptions::default(), Some(&d));
            let d2 = decompose(&e.formula.xors);
            assert_eq!(d2.cut_vars, d.cut_vars, "{f:?}");
            assert_eq!(d2.non_singleton_count(), d.non_singleton_count(), "{f:?}");
            assert!(d2.stats(&e.formula.xors).decomposed_elements <= d.stats(&f.xors).decomposed_elements);
            for m in enumerate_models(&e.formula, &[]).unwrap() {
                assert!(f.is_satisfied_by(&reconstruct_model(&e.records, &m)));
            }
        }
    }

    #[test]
    fn unguarded_elimination_can_collapse_a_component() {
        // v ⊕ a ⊕ b, v ⊕ a ⊕ c: eliminating v leaves the single constraint b ⊕ c
        let f = CnfXorFormula {
            num_vars: 4,
            clauses: vec![],
            xors: vec![xor(&[0, 1, 2], true), xor(&[0, 1, 3], false)],
        };
        let d = decompose(&f.xors);
        assert_eq!(d.non_singleton_count(), 1);
        let plain = eliminate_all(&f, &vars(&[0]));
        assert_eq!(decompose(&plain.formula.xors).non_singleton_count(), 0);
        let guarded = eliminate_with(&f, &vars(&[0]), &EliminationOptions::default(), Some(&d));
        assert_eq!(guarded.skipped, vec![Var(0)]);
    }
}
