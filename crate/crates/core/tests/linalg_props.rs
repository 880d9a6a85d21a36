use proptest::prelude::*;
use twophase_qn::solvers::{bfgs_update_b, bfgs_update_h, combine_h_literal, two_phase_combine, UPDATE_SKIP_TOL};
use twophase_qn::{SymMatrix, Vector};

/// `MᵀM + nI` from a flat `n×n` matrix.
fn spd_from(n: usize, m: &[f64]) -> SymMatrix {
    let mut a = SymMatrix::zeros(n);
    for j in 0..n {
        for i in 0..=j {
            let v: f64 = (0..n).map(|k| m[k * n + i] * m[k * n + j]).sum();
            a.set(i, j, v + if i == j { n as f64 } else { 0.0 });
        }
    }
    a
}

fn spd() -> impl Strategy<Value = SymMatrix> {
    (1usize..=50).prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |m| spd_from(n, &m)))
}

fn spd_with_vec() -> impl Strategy<Value = (SymMatrix, Vector)> {
    (1usize..=50).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n * n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
            .prop_map(move |(m, b)| (spd_from(n, &m), Vector::from(b)))
    })
}

fn triple(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (SymMatrix, SymMatrix, Vector, f64)> {
    n.prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n * n),
            prop::collection::vec(-1.0f64..1.0, n * n),
            prop::collection::vec(-1.0f64..1.0, n).prop_filter("nonzero step", |s| s.iter().any(|v| v.abs() > 1e-3)),
            0.01f64..0.99,
        )
            .prop_map(move |(m1, m2, s, l)| (spd_from(n, &m1), spd_from(n, &m2), Vector::from(s), l))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cholesky_solve_residual((a, b) in spd_with_vec()) {
        let x = a.cholesky().unwrap().solve(&b).unwrap();
        let r = a.mul_vec(&x).sub(&b).norm();
        prop_assert!(r <= 1e-10 * b.norm().max(1.0), "residual {r}");
    }

    #[test]
    fn determinant_of_inverse(a in spd()) {
        let c = a.cholesky().unwrap();
        let inv = c.inverse();
        let prod = c.log_determinant() + inv.cholesky().unwrap().log_determinant();
        prop_assert!(prod.abs() <= 1e-9, "ln det A + ln det A⁻¹ = {prod}");
        if a.order() <= 10 {
            let d = c.determinant() * inv.cholesky().unwrap().determinant();
            prop_assert!((d - 1.0).abs() <= 1e-10, "{d}");
        }
    }

    #[test]
    fn factor_reconstructs(a in spd()) {
        let back = a.cholesky().unwrap().reconstruct();
        prop_assert!(back.sub(&a).unwrap().norm_inf() <= 1e-12 * a.norm_inf());
    }

    #[test]
    fn updates_keep_secant_and_spd((b, a, s, lambda) in triple(1..=12)) {
        let y = a.mul_vec(&s);
        let b_bar = bfgs_update_b(&b, &s, &y, UPDATE_SKIP_TOL).unwrap();
        prop_assert!(b_bar.mul_vec(&s).sub(&y).norm() <= 1e-10 * y.norm());
        prop_assert!(b_bar.cholesky().is_ok());
        let h_bar = bfgs_update_h(&b.cholesky().unwrap().inverse(), &s, &y, UPDATE_SKIP_TOL).unwrap();
        prop_assert!(h_bar.mul_vec(&y).sub(&s).norm() <= 1e-10 * s.norm());
        let next = two_phase_combine(&b, &b_bar, lambda).unwrap();
        prop_assert!(next.cholesky().is_ok());
    }

    #[test]
    fn literal_combine_matches_b_form((h, h_bar, _s, lambda) in triple(1..=10)) {
        let lit = combine_h_literal(&h, &h_bar, lambda).unwrap();
        let b = two_phase_combine(
            &h.cholesky().unwrap().inverse(),
            &h_bar.cholesky().unwrap().inverse(),
            lambda,
        ).unwrap();
        let via_b = b.cholesky().unwrap().inverse();
        prop_assert!(lit.sub(&via_b).unwrap().norm_inf() <= 1e-8 * via_b.norm_inf());
    }

    #[test]
    fn curvature_violations_are_refused((b, _a, s, _l) in triple(1..=6)) {
        let y = s.scaled(-1.0);
        prop_assert!(bfgs_update_b(&b, &s, &y, UPDATE_SKIP_TOL).is_err());
        prop_assert!(bfgs_update_h(&b, &s, &y, UPDATE_SKIP_TOL).is_err());
    }
}
