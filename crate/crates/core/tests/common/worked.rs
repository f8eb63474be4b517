//! Small hand-checked instances with their exact expected results. Variables `a`..`o`
//! (or `x1`..`x5`) are numbered from 0.

use std::collections::BTreeSet;

use xorsat::decompose::{build_graph, cut_vertices, decompose, Vertex};
use xorsat::tableau::{AssignedTableau, SwapPolicy, Tableau};
use xorsat::xorengine::{Backend, EngineConfig, XorEngine};
use xorsat::{Lit, Var, XorConstraint};

use super::xor;

pub type Check = Result<(), String>;

type EqSet = BTreeSet<(Var, Vec<Var>, bool)>;

fn eqs(rows: &[(u32, &[u32], bool)]) -> EqSet {
    rows.iter()
        .map(|&(b, rhs, p)| (Var(b), rhs.iter().map(|&v| Var(v)).collect(), p))
        .collect()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

const A: u32 = 0;
const B: u32 = 1;
const C: u32 = 2;
const D: u32 = 3;
const E: u32 = 4;
const F: u32 = 5;

/// (a ⊕ c ⊕ e ≡ ⊤) ∧ (a ⊕ b ⊕ d ⊕ e ≡ ⊤)
pub fn two_row_system() -> Vec<XorConstraint> {
    vec![xor(&[A, C, E], true), xor(&[A, B, D, E], true)]
}

/// Building gives {a := c ⊕ e ⊕ ⊤, b := c ⊕ d ⊕ ⊥}.
pub fn build_two_rows() -> Check {
    let t = Tableau::build(&two_row_system()).map_err(|e| e.to_string())?;
    expect("tableau", t.equation_set(), eqs(&[(A, &[C, E], true), (B, &[C, D], false)]))
}

/// swap(b, c) on the two-row tableau gives {a := b ⊕ d ⊕ e ⊕ ⊤, c := b ⊕ d ⊕ ⊥}.
pub fn swap_two_rows() -> Check {
    let mut t = Tableau::build(&two_row_system()).map_err(|e| e.to_string())?;
    t.swap(Var(B), Var(C));
    expect("swapped", t.equation_set(), eqs(&[(A, &[B, D, E], true), (C, &[B, D], false)]))?;
    if !t.check_coherence() {
        return Err("row and column views disagree".into());
    }
    Ok(())
}

/// From {x1 := x3 ⊕ x4 ⊕ ⊤, x2 := x3 ⊕ x4 ⊕ x5 ⊕ ⊤} under x5 the binary x1 ⊕ x2 ≡ ⊤ is implied.
pub fn implied_binary_under_one_assignment() -> Check {
    let xs = [xor(&[0, 2, 3], true), xor(&[1, 2, 3, 4], true)];
    let t = Tableau::build(&xs).map_err(|e| e.to_string())?;
    expect("tableau", t.equation_set(), eqs(&[(0, &[2, 3], true), (1, &[2, 3, 4], true)]))?;
    let (mut at, _) = AssignedTableau::init(t, SwapPolicy::default());
    let res = at.assume(Var(4).lit(true));
    if res.is_unsat() || !res.implied.is_empty() {
        return Err(format!("unexpected deduction {res:?}"));
    }
    let bins = at.implied_binary_xors();
    if !bins.contains(&xor(&[0, 1], true)) {
        return Err(format!("x1 ⊕ x2 ≡ ⊤ missing from {bins:?}"));
    }
    Ok(())
}

/// Assuming a in {a := d ⊕ f ⊕ ⊤, b := d ⊕ e ⊕ ⊥, c := d ⊕ f ⊕ ⊥} swaps a with d, giving
/// {d := a ⊕ f ⊕ ⊤, b := a ⊕ e ⊕ f ⊕ ⊤, c := a ⊕ ⊤}, and implies ¬c because of (¬a ∨ ¬c).
pub fn assume_with_swap() -> Check {
    let xs = [xor(&[A, D, F], true), xor(&[B, D, E], false), xor(&[C, D, F], false)];
    let t = Tableau::build(&xs).map_err(|e| e.to_string())?;
    expect(
        "initial",
        t.equation_set(),
        eqs(&[(A, &[D, F], true), (B, &[D, E], false), (C, &[D, F], false)]),
    )?;
    let (mut at, init) = AssignedTableau::init(t, SwapPolicy::LowestIndex);
    expect("initial deductions", init.implied.len(), 0)?;
    let res = at.assume(Var(A).lit(true));
    expect(
        "after swap",
        at.tableau().equation_set(),
        eqs(&[(D, &[A, F], true), (B, &[A, E, F], true), (C, &[A], true)]),
    )?;
    let implied: Vec<Lit> = res.implied.iter().map(|(l, _)| *l).collect();
    expect("implied", implied, vec![Var(C).lit(false)])?;
    let clause: BTreeSet<Lit> = res.implied[0].1.lits().iter().copied().collect();
    expect("explanation", clause, [Var(A).lit(false), Var(C).lit(false)].into())?;
    expect(
        "assignment",
        at.assigned_lits(),
        [Var(A).lit(true), Var(C).lit(false)].into(),
    )
}

/// (x ⊕ y ⊕ z ≡ ⊤) ∧ (y ⊕ z ≡ ⊥) gives {x := ⊤, y := z ⊕ ⊥} and the initial assignment x.
pub fn initial_assignment() -> Check {
    let xs = [xor(&[0, 1, 2], true), xor(&[1, 2], false)];
    let t = Tableau::build(&xs).map_err(|e| e.to_string())?;
    expect("tableau", t.equation_set(), eqs(&[(0, &[], true), (1, &[2], false)]))?;
    let (at, res) = AssignedTableau::init(t, SwapPolicy::default());
    let implied: Vec<Lit> = res.implied.iter().map(|(l, _)| *l).collect();
    expect("implied", implied, vec![Var(0).lit(true)])?;
    expect("assignment", at.assigned_lits(), [Var(0).lit(true)].into())?;
    if !at.is_consistent_and_saturated() {
        return Err("not saturated".into());
    }
    Ok(())
}

/// Nine constraints over a..o with cut variables f, h, l.
pub fn fifteen_var_system() -> Vec<XorConstraint> {
    vec![
        xor(&[0, 1, 2], true),    // a b c
        xor(&[1, 3, 4], true),    // b d e
        xor(&[2, 4], true),       // c e
        xor(&[3, 4, 5], false),   // d e f
        xor(&[5, 6, 7], true),    // f g h
        xor(&[7, 8, 9], false),   // h i j
        xor(&[8, 9, 10], true),   // i j k
        xor(&[5, 11, 12], true),  // f l m
        xor(&[11, 13, 14], false), // l n o
    ]
}

pub fn components_of_fifteen_var_system() -> Check {
    let xs = fifteen_var_system();
    let d = decompose(&xs);
    expect("cut variables", d.cut_vars.clone(), [Var(5), Var(7), Var(11)].into())?;
    let comps: BTreeSet<Vec<usize>> = d.components.iter().cloned().collect();
    let want: BTreeSet<Vec<usize>> = [vec![0, 1, 2, 3], vec![4], vec![5, 6], vec![7], vec![8]].into();
    expect("components", comps, want)?;
    expect("non-singleton components", d.non_singleton_count(), 2)
}

pub fn cut_vertices_of_fifteen_var_graph() -> Check {
    let g = build_graph(&fifteen_var_system());
    expect("variable vertices", g.num_var_vertices(), 15)?;
    expect("constraint vertices", g.num_constraint_vertices(), 9)?;
    let want: BTreeSet<Vertex> = [
        Vertex::Constraint(0),
        Vertex::Constraint(3),
        Vertex::Var(Var(5)),
        Vertex::Constraint(4),
        Vertex::Var(Var(7)),
        Vertex::Constraint(5),
        Vertex::Constraint(6),
        Vertex::Constraint(7),
        Vertex::Var(Var(11)),
        Vertex::Constraint(8),
    ]
    .into();
    expect("cut vertices", cut_vertices(&g), want)
}

/// Under b, ¬g and o the decomposed engine derives ¬k, relaying ¬f and h through the cuts.
pub fn relay_across_components() -> Check {
    let xs = fifteen_var_system();
    let d = decompose(&xs);
    let (mut e, init) = XorEngine::init(&xs, Some(&d), EngineConfig::default());
    if init.is_unsat() || !init.implied.is_empty() {
        return Err(format!("unexpected initial deductions {init:?}"));
    }
    for lit in [Var(1).lit(true), Var(6).lit(false), Var(14).lit(true)] {
        if e.assume(lit).is_unsat() {
            return Err(format!("conflict on {lit}"));
        }
    }
    let got = e.assigned_lits();
    for want in [Var(5).lit(false), Var(7).lit(true), Var(10).lit(false)] {
        if !got.contains(&want) {
            return Err(format!("{want} not derived; have {got:?}"));
        }
    }
    let (mut mono, _) = XorEngine::init(
        &xs,
        None,
        EngineConfig {
            backend: Backend::GaussJordan,
            ..EngineConfig::default()
        },
    );
    for lit in [Var(1).lit(true), Var(6).lit(false), Var(14).lit(true)] {
        mono.assume(lit);
    }
    expect("monolithic agrees", mono.assigned_lits(), got)
}

pub const ALL: [(&str, fn() -> Check); 9] = [
    ("build two rows", build_two_rows),
    ("swap", swap_two_rows),
    ("implied binary xor", implied_binary_under_one_assignment),
    ("assume with swap", assume_with_swap),
    ("initial assignment", initial_assignment),
    ("components", components_of_fifteen_var_system),
    ("cut vertices", cut_vertices_of_fifteen_var_graph),
    ("relay across components", relay_across_components),
    ("forced-false solver instance", super::forced_false_instance),
];
