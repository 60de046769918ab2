use ontomatch::{RunConfig, SolverChoice};
use ontomatch_bench::{random_problem, synthetic_task};

#[test]
fn synthetic_task_runs() {
    let out = synthetic_task(12).run(&RunConfig::default()).unwrap();
    assert!(out.assignment.feasible);
    assert!(!out.alignment.is_empty());
    let small = synthetic_task(3).run(&RunConfig { solver: SolverChoice::Exact, ..RunConfig::default() }).unwrap();
    assert!(small.assignment.feasible);
    assert!(synthetic_task(80).ground(&RunConfig::default()).unwrap().n_atoms() > 80);
}

#[test]
fn random_problem_shape() {
    let p = random_problem(3, 20, 60);
    assert_eq!((p.n_atoms(), p.clauses.len()), (20, 60));
}
