use twophase_qn::diagnostics::{fd_hessian, psi, ConvergenceDiagnostics, REFERENCE_TOL};
use twophase_qn::line_search::roundoff_floor;
use twophase_qn::objective::DEFAULT_FD_STEP;
use twophase_qn::suite::{manifest_csv, GRADIENT_CHECK_TOL};
use twophase_qn::*;

#[test]
fn known_optima_are_stationary() {
    let mut with_optimum = 0;
    for p in suite() {
        let Some(opt) = &p.known_optimum else { continue };
        with_optimum += 1;
        let g = p.objective.gradient(&opt.x);
        assert!(g.norm() <= 1e-8, "{}: |g(x*)| = {:e}", p.name(), g.norm());
        let f = p.objective.value(&opt.x);
        assert!((f - opt.f).abs() <= 1e-10 * opt.f.abs().max(1.0), "{}: f(x*) = {f}", p.name());
    }
    assert!(with_optimum >= 20, "{with_optimum}");
}

#[test]
fn solvers_reach_known_optima() {
    for p in suite() {
        let Some(opt) = &p.known_optimum else { continue };
        let r = solve_two_phase(&p.objective, &p.objective.standard_start(), &SolverConfig::default()).unwrap();
        assert!(r.final_f >= opt.f - 1e-8 * opt.f.abs().max(1.0), "{}: {} < {}", p.name(), r.final_f, opt.f);
    }
}

#[test]
fn gradients_pass_at_other_dimensions() {
    for p in suite() {
        for n in [2, 4, 12] {
            let Ok(q) = p.with_dimension(n) else { continue };
            let r = check_gradient(&q.objective, &q.gradient_probe_points(), DEFAULT_FD_STEP, GRADIENT_CHECK_TOL).unwrap();
            assert!(r.passed(), "{} at n = {n}: {r:?}", p.name());
        }
    }
}

#[test]
fn every_run_descends_and_keeps_spd() {
    let cfg = SolverConfig {
        record_operators: true,
        ..SolverConfig::default()
    };
    for p in suite() {
        for kind in SolverKind::ALL {
            let r = kind.solve(&p.objective, &p.objective.standard_start(), &cfg).unwrap();
            assert!(r.converged(), "{} / {kind}", p.name());
            for w in r.trace.windows(2) {
                let approx = w[1].searches.last().unwrap().status == SearchStatus::ApproximateWolfe;
                if approx {
                    assert!(w[1].f - w[0].f <= roundoff_floor(w[0].f), "{} / {kind}: k = {}", p.name(), w[1].k);
                } else {
                    assert!(w[1].f < w[0].f, "{} / {kind}: f rose at k = {}", p.name(), w[1].k);
                }
                assert!(w[1].grad_norm >= 0.0);
            }
            for op in &r.operators {
                let v = psi(&op.b_next).unwrap_or_else(|e| panic!("{} / {kind}: {e}", p.name()));
                assert!(v > 0.0);
            }
            assert_eq!(r.converged(), r.final_grad_norm <= cfg.tol);
        }
    }
}

#[test]
fn quadratic_ratio_minimum_is_late() {
    for name in ["DQDRTIC", "Quadratic QF1", "Tridia"] {
        let p = lookup(name).unwrap();
        let x_star = p.known_optimum.as_ref().unwrap().x.clone();
        let cfg = SolverConfig {
            tol: REFERENCE_TOL,
            record_operators: true,
            ..SolverConfig::default()
        };
        let r = solve_two_phase(&p.objective, &p.objective.standard_start(), &cfg).unwrap();
        let hess = fd_hessian(&p.objective, &x_star, 1e-4).unwrap();
        let d = ConvergenceDiagnostics::from_run(&r, &x_star, &hess).unwrap();
        let q = &d.q_ratios;
        let argmin = (0..q.len()).min_by(|&a, &b| q[a].total_cmp(&q[b])).unwrap();
        assert!(4 * argmin >= 3 * (q.len() - 1), "{name}: min at {argmin} of {}: {q:?}", q.len());
    }
}

#[test]
fn manifest_lists_the_suite() {
    let text = manifest_csv(suite()).unwrap();
    assert_eq!(text.lines().count(), 31);
    assert!(text.lines().nth(21).unwrap().starts_with("Hager,10,"));
}
