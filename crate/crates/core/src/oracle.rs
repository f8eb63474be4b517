//! Reference semantics by exhaustive enumeration and plain Gaussian elimination.
//!
//! Nothing in here touches the tableau or the solver; tests use these functions
//! as ground truth. Enumeration is capped at [`MAX_ENUM_VARS`] variables.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{Assignment, CnfXorFormula, Lit, Var, XorConstraint};

pub const MAX_ENUM_VARS: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {0} variables; enumeration is limited to {MAX_ENUM_VARS}")]
    TooManyVars(usize),
}

/// Outcome of an entailment query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entailed<T> {
    Unsatisfiable,
    Holds(T),
}

impl<T> Entailed<T> {
    pub fn holds(self) -> Option<T> {
        match self {
            Entailed::Holds(t) => Some(t),
            Entailed::Unsatisfiable => None,
        }
    }
}

struct Compiled {
    num_vars: usize,
    clauses: Vec<(u64, u64)>,
    xors: Vec<(u64, bool)>,
    fixed_mask: u64,
    fixed_value: u64,
    contradictory_assumptions: bool,
}

impl Compiled {
    fn new(f: &CnfXorFormula, assumptions: &[Lit]) -> Result<Compiled, OracleError> {
        let n = f
            .clauses
            .iter()
            .flat_map(|c| c.lits().iter().map(|l| l.var().index() + 1))
            .chain(f.xors.iter().flat_map(|x| x.vars().iter().map(|v| v.index() + 1)))
            .chain(assumptions.iter().map(|l| l.var().index() + 1))
            .fold(f.num_vars, usize::max);
        if n > MAX_ENUM_VARS {
            return Err(OracleError::TooManyVars(n));
        }
        let clauses = f
            .clauses
            .iter()
            .map(|c| {
                c.lits().iter().fold((0u64, 0u64), |(p, q), l| {
                    let bit = 1u64 << l.var().index();
                    if l.is_positive() {
                        (p | bit, q)
                    } else {
                        (p, q | bit)
                    }
                })
            })
            .collect();
        let xors = f
            .xors
            .iter()
            .map(|x| (x.vars().iter().fold(0u64, |m, v| m | 1 << v.index()), x.parity()))
            .collect();
        let mut fixed_mask = 0u64;
        let mut fixed_value = 0u64;
        let mut contradictory_assumptions = false;
        for l in assumptions {
            let bit = 1u64 << l.var().index();
            let val = if l.is_positive() { bit } else { 0 };
            if fixed_mask & bit != 0 && fixed_value & bit != val {
                contradictory_assumptions = true;
            }
            fixed_mask |= bit;
            fixed_value |= val;
        }
        Ok(Compiled {
            num_vars: n,
            clauses,
            xors,
            fixed_mask,
            fixed_value,
            contradictory_assumptions,
        })
    }

    #[inline]
    fn satisfies(&self, m: u64) -> bool {
        self.xors
            .iter()
            .all(|&(mask, p)| ((m & mask).count_ones() & 1 == 1) == p)
            && self.clauses.iter().all(|&(p, q)| m & p != 0 || !m & q != 0)
    }

    /// Calls `f` on every model mask in increasing order; stops when `f` returns false.
    fn for_each(&self, mut f: impl FnMut(u64) -> bool) {
        if self.contradictory_assumptions {
            return;
        }
        let free: Vec<usize> = (0..self.num_vars)
            .filter(|i| self.fixed_mask >> i & 1 == 0)
            .collect();
        for k in 0..1u64 << free.len() {
            let mut m = self.fixed_value;
            for (j, &i) in free.iter().enumerate() {
                m |= (k >> j & 1) << i;
            }
            if self.satisfies(m) && !f(m) {
                return;
            }
        }
    }
}

/// All satisfying total assignments of `f ∧ assumptions`, ordered by their bit masks
/// (variable 0 is the least significant position).
pub fn enumerate_models(f: &CnfXorFormula, assumptions: &[Lit]) -> Result<Vec<Assignment>, OracleError> {
    let c = Compiled::new(f, assumptions)?;
    let mut out = Vec::new();
    c.for_each(|m| {
        out.push(Assignment::from_mask(c.num_vars, m));
        true
    });
    Ok(out)
}

pub fn model_count(f: &CnfXorFormula, assumptions: &[Lit]) -> Result<u64, OracleError> {
    let c = Compiled::new(f, assumptions)?;
    let mut n = 0;
    c.for_each(|_| {
        n += 1;
        true
    });
    Ok(n)
}

pub fn is_satisfiable(f: &CnfXorFormula, assumptions: &[Lit]) -> Result<bool, OracleError> {
    let c = Compiled::new(f, assumptions)?;
    let mut found = false;
    c.for_each(|_| {
        found = true;
        false
    });
    Ok(found)
}

/// Literals (over `0..num_vars`) true in every model of `f ∧ assumptions`.
pub fn implied_literals_bf(
    f: &CnfXorFormula,
    assumptions: &[Lit],
) -> Result<Entailed<BTreeSet<Lit>>, OracleError> {
    let c = Compiled::new(f, assumptions)?;
    let mut all_true = !0u64;
    let mut all_false = !0u64;
    let mut any = false;
    c.for_each(|m| {
        any = true;
        all_true &= m;
        all_false &= !m;
        true
    });
    if !any {
        return Ok(Entailed::Unsatisfiable);
    }
    let lits = (0..c.num_vars)
        .filter_map(|i| {
            let v = Var::from_index(i);
            if all_true >> i & 1 == 1 {
                Some(v.lit(true))
            } else if all_false >> i & 1 == 1 {
                Some(v.lit(false))
            } else {
                None
            }
        })
        .collect();
    Ok(Entailed::Holds(lits))
}

/// Every `y ⊕ z ≡ p` with `y < z` that holds in all models of `f ∧ assumptions`.
pub fn implied_binary_bf(
    f: &CnfXorFormula,
    assumptions: &[Lit],
) -> Result<Entailed<BTreeSet<XorConstraint>>, OracleError> {
    let c = Compiled::new(f, assumptions)?;
    let n = c.num_vars;
    // same[y] / diff[y]: bit z set while y ≡ z (resp. y ≢ z) held in every model so far
    let mut same = vec![!0u64; n];
    let mut diff = vec![!0u64; n];
    let mut any = false;
    c.for_each(|m| {
        any = true;
        for y in 0..n {
            let eq = if m >> y & 1 == 1 { m } else { !m };
            same[y] &= eq;
            diff[y] &= !eq;
        }
        true
    });
    if !any {
        return Ok(Entailed::Unsatisfiable);
    }
    let mut out = BTreeSet::new();
    for y in 0..n {
        for z in y + 1..n {
            let pair = [Var::from_index(y), Var::from_index(z)];
            if same[y] >> z & 1 == 1 {
                out.insert(XorConstraint::new(pair, false));
            }
            if diff[y] >> z & 1 == 1 {
                out.insert(XorConstraint::new(pair, true));
            }
        }
    }
    Ok(Entailed::Holds(out))
}

/// Decides `xors ⊨ e` by linear algebra: true iff `e` is a sum of a subset of `xors`,
/// or some subset sums to `⊥ ≡ ⊤`.
pub fn gf2_implies(xors: &[XorConstraint], e: &XorConstraint) -> bool {
    let width = xors
        .iter()
        .chain([e])
        .flat_map(|x| x.vars().iter().map(|v| v.index() + 1))
        .max()
        .unwrap_or(0);
    let words = width.div_ceil(64).max(1);
    let to_row = |x: &XorConstraint| -> (Vec<u64>, bool) {
        let mut r = vec![0u64; words];
        for v in x.vars() {
            r[v.index() / 64] ^= 1 << (v.index() % 64);
        }
        (r, x.parity())
    };
    let leading = |r: &[u64]| -> Option<usize> {
        r.iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    };
    // echelon basis keyed by leading (highest) variable
    let mut basis: Vec<Option<(Vec<u64>, bool)>> = vec![None; width + 1];
    let reduce = |basis: &Vec<Option<(Vec<u64>, bool)>>, (mut r, mut p): (Vec<u64>, bool)| {
        while let Some(lead) = leading(&r) {
            match &basis[lead] {
                Some((b, bp)) => {
                    for (x, y) in r.iter_mut().zip(b) {
                        *x ^= y;
                    }
                    p ^= bp;
                }
                None => return (r, p, Some(lead)),
            }
        }
        (r, p, None)
    };
    for x in xors {
        let (r, p, lead) = reduce(&basis, to_row(x));
        match lead {
            Some(l) => basis[l] = Some((r, p)),
            None if p => return true,
            None => {}
        }
    }
    let (_, p, lead) = reduce(&basis, to_row(e));
    lead.is_none() && !p
}

/// `xors ⊨ (l1 ∨ ... ∨ lk)`, decided as `xors ∧ ¬l1 ∧ ... ∧ ¬lk ⊨ (⊥ ≡ ⊤)`.
pub fn gf2_implies_clause(xors: &[XorConstraint], clause: &[Lit]) -> bool {
    let mut system: Vec<XorConstraint> = xors.to_vec();
    system.extend(clause.iter().map(|&l| XorConstraint::unit(!l)));
    gf2_implies(&system, &XorConstraint::contradiction())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xor(vars: &[u32], p: bool) -> XorConstraint {
        XorConstraint::new(vars.iter().map(|&i| Var(i)), p)
    }

    fn formula(n: usize, xors: Vec<XorConstraint>) -> CnfXorFormula {
        CnfXorFormula {
            num_vars: n,
            clauses: vec![],
            xors,
        }
    }

    fn row_echelon_example() -> CnfXorFormula {
        // x1 ⊕ x2 ⊕ x4 ≡ ⊤, x2 ⊕ x3 ⊕ x5 ≡ ⊥, x3 ⊕ x4 ⊕ x5 ≡ ⊤ with x1..x5 = 0..4
        formula(
            5,
            vec![xor(&[0, 1, 3], true), xor(&[1, 2, 4], false), xor(&[2, 3, 4], true)],
        )
    }

    #[test]
    fn enumerate_small() {
        let f = formula(2, vec![xor(&[0, 1], true)]);
        assert_eq!(enumerate_models(&f, &[]).unwrap().len(), 2);
        // a ⊕ c ⊕ e ≡ ⊤, a ⊕ b ⊕ d ⊕ e ≡ ⊤ : 2^(5-2) models
        let f = formula(5, vec![xor(&[0, 2, 4], true), xor(&[0, 1, 3, 4], true)]);
        assert_eq!(model_count(&f, &[]).unwrap(), 8);
    }

    #[test]
    fn refuses_large_instances() {
        let f = formula(25, vec![]);
        assert_eq!(enumerate_models(&f, &[]), Err(OracleError::TooManyVars(25)));
    }

    #[test]
    fn row_echelon_example_forces_x1_false() {
        let f = row_echelon_example();
        let implied = implied_literals_bf(&f, &[]).unwrap().holds().unwrap();
        assert_eq!(implied, BTreeSet::from([Var(0).lit(false)]));
        assert!(gf2_implies(&f.xors, &xor(&[0], false)));
        assert!(!gf2_implies(&f.xors, &xor(&[0], true)));
    }

    #[test]
    fn unsat_is_reported_distinctly() {
        let f = formula(3, vec![xor(&[0, 1, 2], true), xor(&[0, 1, 2], false)]);
        assert_eq!(implied_literals_bf(&f, &[]).unwrap(), Entailed::Unsatisfiable);
        assert!(gf2_implies(&f.xors, &xor(&[0], true)));
        let free = formula(3, vec![xor(&[0, 1, 2], true)]);
        assert!(implied_literals_bf(&free, &[]).unwrap().holds().unwrap().is_empty());
    }

    #[test]
    fn binary_implication_example() {
        // x1 := x3 ⊕ x4 ⊕ ⊤, x2 := x3 ⊕ x4 ⊕ x5 ⊕ ⊤ under x5 = ⊤
        let f = formula(5, vec![xor(&[0, 2, 3], true), xor(&[1, 2, 3, 4], true)]);
        let bins = implied_binary_bf(&f, &[Var(4).lit(true)]).unwrap().holds().unwrap();
        assert!(bins.contains(&xor(&[0, 1], true)));
    }

    #[test]
    fn members_are_implied() {
        let f = row_echelon_example();
        for d in &f.xors {
            assert!(gf2_implies(&f.xors, d));
        }
    }

    fn arb_system() -> impl Strategy<Value = (Vec<XorConstraint>, XorConstraint)> {
        let x = (proptest::collection::vec(0u32..10, 1..5), any::<bool>())
            .prop_map(|(v, p)| XorConstraint::new(v.into_iter().map(Var), p));
        (proptest::collection::vec(x.clone(), 0..8), x)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn gf2_agrees_with_enumeration((xors, e) in arb_system()) {
            let f = formula(10, xors.clone());
            let models = enumerate_models(&f, &[]).unwrap();
            let semantic = models.iter().all(|m| e.eval(m) == Some(true));
            prop_assert_eq!(gf2_implies(&xors, &e), semantic);
        }
    }
}
