//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

pub mod worked;

use rand::seq::SliceRandom;
use rand::Rng;
use xorsat::decompose::decompose;
use xorsat::{CnfXorFormula, Lit, Var, XorConstraint};

pub fn xor(vars: &[u32], parity: bool) -> XorConstraint {
    XorConstraint::new(vars.iter().map(|&i| Var(i)), parity)
}

/// `count` constraints of width `1..=max_width` over variables `offset..offset + n`.
pub fn random_xors(rng: &mut impl Rng, offset: u32, n: u32, count: usize, max_width: usize) -> Vec<XorConstraint> {
    (0..count)
        .map(|_| {
            let w = rng.gen_range(1..=max_width.min(n as usize));
            let mut pool: Vec<u32> = (offset..offset + n).collect();
            pool.shuffle(rng);
            XorConstraint::new(pool[..w].iter().map(|&i| Var(i)), rng.gen())
        })
        .filter(|x| !x.is_tautology())
        .collect()
}

/// Xor conjunction with 5 to 10 variables, 3 to 8 constraints and widths 1 to 4.
pub fn small_xor_formula(rng: &mut impl Rng) -> CnfXorFormula {
    let n = rng.gen_range(5..=10);
    let count = rng.gen_range(3..=8);
    let mut f = CnfXorFormula::new(n as usize);
    for x in random_xors(rng, 0, n, count, 4) {
        f.add_xor(x);
    }
    f
}

/// Two random blocks over disjoint variables, chained through one shared variable, kept
/// only once the result has at least two components.
pub fn chained_blocks(rng: &mut impl Rng) -> CnfXorFormula {
    loop {
        let n1 = rng.gen_range(3..=6);
        let n2 = rng.gen_range(3..=6);
        let (c1, c2) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let mut xs = random_xors(rng, 0, n1, c1, 3);
        let mut second = random_xors(rng, n1, n2, c2, 3);
        let shared = Var(rng.gen_range(0..n1));
        // the shared variable joins one constraint of the second block
        if let Some(x) = second.first_mut() {
            if !x.contains(shared) {
                *x = x.add(&XorConstraint::unit(shared.lit(true)));
            }
        }
        xs.extend(second);
        if decompose(&xs).num_components() >= 2 {
            let mut f = CnfXorFormula::new((n1 + n2) as usize);
            for x in xs {
                f.add_xor(x);
            }
            return f;
        }
    }
}

/// Mixed instance with at most `max_vars` variables.
pub fn random_cnf_xor(rng: &mut impl Rng, max_vars: u32) -> CnfXorFormula {
    let n = rng.gen_range(3..=max_vars);
    let mut f = CnfXorFormula::new(n as usize);
    let xors = rng.gen_range(1..=n as usize);
    for x in random_xors(rng, 0, n, xors, 4) {
        f.add_xor(x);
    }
    let clauses = rng.gen_range(n as usize / 2..=2 * n as usize);
    for _ in 0..clauses {
        let w = rng.gen_range(2..=3);
        let lits: Vec<Lit> = (0..w).map(|_| Var(rng.gen_range(0..n)).lit(rng.gen())).collect();
        f.add_clause(lits);
    }
    f
}

/// A random order of random-polarity literals over distinct variables of `0..n`.
pub fn assumption_sequence(rng: &mut impl Rng, n: usize, len: usize) -> Vec<Lit> {
    let mut vars: Vec<usize> = (0..n).collect();
    vars.shuffle(rng);
    vars.into_iter()
        .take(len)
        .map(|i| Var::from_index(i).lit(rng.gen()))
        .collect()
}

/// x1 ⊕ x2 ⊕ x4 ≡ ⊤, x2 ⊕ x3 ⊕ x5 ≡ ⊥, x3 ⊕ x4 ⊕ x5 ≡ ⊤ force ¬x1, so adding the clause
/// (x1) is unsatisfiable for every backend.
pub fn forced_false_instance() -> worked::Check {
    use xorsat::cdcl::{solve, SolveResult, SolverConfig};
    use xorsat::xorengine::{Backend, EngineConfig};
    let mut f = CnfXorFormula::new(5);
    f.add_xor(xor(&[0, 1, 3], true));
    f.add_xor(xor(&[1, 2, 4], false));
    f.add_xor(xor(&[2, 3, 4], true));
    f.add_clause([Var(0).lit(true)]);
    for backend in [Backend::UnitProp, Backend::GaussJordan, Backend::GaussJordanConflictsOnly] {
        let config = SolverConfig {
            engine: EngineConfig {
                backend,
                ..EngineConfig::default()
            },
            ..SolverConfig::default()
        };
        let (r, _) = solve(&f, config);
        if r != SolveResult::Unsat {
            return Err(format!("{backend}: {r:?}"));
        }
    }
    Ok(())
}
