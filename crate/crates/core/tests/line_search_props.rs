use proptest::prelude::*;
use twophase_qn::line_search::{wolfe_search, SearchStatus, WolfeParams};
use twophase_qn::{FnObjective, Objective, Vector};

fn quartic() -> impl Objective {
    // Σ (xᵢ⁴/4 + xᵢ²/2 − xᵢ)
    FnObjective::new(
        "quartic",
        vec![0.0; 3],
        |x: &[f64]| x.iter().map(|v| v.powi(4) / 4.0 + v * v / 2.0 - v).sum(),
        |x: &[f64]| x.iter().map(|v| v.powi(3) + v - 1.0).collect(),
    )
}

proptest! {
    #[test]
    fn accepted_steps_satisfy_what_they_claim(
        x in prop::collection::vec(-3.0f64..3.0, 3),
        scale in 0.01f64..50.0,
        tilt in prop::collection::vec(-0.5f64..0.5, 3),
    ) {
        let f = quartic();
        let x = Vector::from(x);
        let g = f.gradient(&x);
        prop_assume!(g.norm() > 1e-6);
        // a descent direction: −scale·g plus a small tilt
        let p = g.scaled(-scale).add(&Vector::from(tilt).scaled(scale * g.norm() * 0.5));
        let slope = g.dot(&p);
        prop_assume!(slope < 0.0);
        let params = WolfeParams::default();
        let fx = f.value(&x);
        let out = wolfe_search(&f, &x, &p, fx, &g, &params).unwrap();
        prop_assert!(out.alpha > 0.0 && out.alpha <= 1.0);
        let xn = x.offset(out.alpha, &p);
        let fn_ = f.value(&xn);
        prop_assert_eq!(fn_, out.f_new);
        match out.status {
            SearchStatus::WolfeSatisfied => {
                prop_assert!(fn_ <= fx + params.c1 * out.alpha * slope && fn_ < fx);
                prop_assert!(f.gradient(&xn).dot(&p) >= params.c2 * slope);
            }
            SearchStatus::ArmijoOnly => prop_assert!(fn_ < fx),
            SearchStatus::ApproximateWolfe => prop_assert!(f.gradient(&xn).dot(&p) >= params.c2 * slope),
            SearchStatus::Exhausted => prop_assert!(false, "exhausted on a smooth quartic"),
        }
    }
}

#[test]
fn noise_floor_steps_use_the_gradient_test() {
    // f is constant to machine precision along p near x = 0, but the slope is not
    let f = FnObjective::new(
        "flat",
        [0.0],
        |x: &[f64]| 1e6 + 1e-12 * (x[0] - 1.0).powi(2),
        |x: &[f64]| vec![2e-12 * (x[0] - 1.0)],
    );
    let x = Vector::from([0.0]);
    let g = f.gradient(&x);
    let p = Vector::from([1.0]);
    let out = wolfe_search(&f, &x, &p, f.value(&x), &g, &WolfeParams::default()).unwrap();
    assert_eq!(out.status, SearchStatus::ApproximateWolfe);
    assert_eq!(out.alpha, 1.0);
}
