mod common;

use common::worked;

#[test]
fn build_two_rows() {
    worked::build_two_rows().unwrap();
}

#[test]
fn swap_two_rows() {
    worked::swap_two_rows().unwrap();
}

#[test]
fn implied_binary_under_one_assignment() {
    worked::implied_binary_under_one_assignment().unwrap();
}

#[test]
fn assume_with_swap() {
    worked::assume_with_swap().unwrap();
}

#[test]
fn initial_assignment() {
    worked::initial_assignment().unwrap();
}

#[test]
fn components_of_fifteen_var_system() {
    worked::components_of_fifteen_var_system().unwrap();
}

#[test]
fn cut_vertices_of_fifteen_var_graph() {
    worked::cut_vertices_of_fifteen_var_graph().unwrap();
}

#[test]
fn relay_across_components() {
    worked::relay_across_components().unwrap();
}

#[test]
fn forced_false_instance() {
    common::forced_false_instance().unwrap();
}

#[test]
fn fifteen_var_system_has_no_forced_variables() {
    use xorsat::oracle::{implied_literals_bf, Entailed};
    let mut f = xorsat::CnfXorFormula::new(15);
    for x in worked::fifteen_var_system() {
        f.add_xor(x);
    }
    match implied_literals_bf(&f, &[]).unwrap() {
        Entailed::Holds(s) => assert!(s.is_empty()),
        Entailed::Unsatisfiable => panic!("satisfiable system"),
    }
    let assumed = [xorsat::Var(1).lit(true), xorsat::Var(6).lit(false), xorsat::Var(14).lit(true)];
    let Entailed::Holds(s) = implied_literals_bf(&f, &assumed).unwrap() else {
        panic!("satisfiable under the assumptions");
    };
    assert!(s.contains(&xorsat::Var(10).lit(false)));
}
