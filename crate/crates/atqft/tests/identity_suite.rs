use atqft::identities::{default_grid, run_suite, Tolerances, SUITE};

#[test]
fn default_suite_passes() {
    let reports = run_suite(SUITE, &default_grid(), &Tolerances::default());
    let mut failed = Vec::new();
    for r in &reports {
        println!(
            "{:<15} b={:.4} N={} res={:.2e} cf={:?} pts={} {}",
            r.name,
            r.params.b,
            r.params.n,
            r.max_residual,
            r.closed_form_residual,
            r.points_checked,
            if r.passed { "ok" } else { "FAIL" }
        );
        if !r.passed {
            failed.push(format!("{r:?}"));
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
