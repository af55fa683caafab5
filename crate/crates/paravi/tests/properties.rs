//! Property tests for the projection/step primitives and the inertial
//! update's convex structure.

use nalgebra::DVector;
use proptest::prelude::*;

use paravi::discrete::{smoothing_point_discrete, IterateWindow};
use paravi::model::{point, FeasibleSet, Operator, ProblemInstance, MEMBERSHIP_TOL};

fn coords(dim: usize, range: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-range..range, dim)
}

fn set_kinds() -> Vec<FeasibleSet> {
    vec![
        FeasibleSet::unit_ball(3),
        FeasibleSet::ball(point(&[0.5, -1.0, 2.0]), 0.7).unwrap(),
        FeasibleSet::hyper_box(point(&[-1.0, 0.0, 0.25]), point(&[1.0, 0.5, 0.25])).unwrap(),
        FeasibleSet::simplex(3, 1.0).unwrap(),
    ]
}

proptest! {
    #[test]
    fn projection_idempotent(xs in coords(3, 10.0)) {
        for set in set_kinds() {
            let x = point(&xs);
            let p1 = set.project(&x).unwrap();
            let p2 = set.project(&p1).unwrap();
            prop_assert!((&p1 - &p2).norm() <= 1e-12, "{set:?}");
            prop_assert!(set.violation(&p1).unwrap() <= MEMBERSHIP_TOL);
        }
    }

    #[test]
    fn projection_firmly_nonexpansive(xs in coords(3, 10.0), ys in coords(3, 10.0)) {
        for set in set_kinds() {
            let (x, y) = (point(&xs), point(&ys));
            let px = set.project(&x).unwrap();
            let py = set.project(&y).unwrap();
            let d = &px - &py;
            prop_assert!(d.norm_squared() <= d.dot(&(&x - &y)) + 1e-10, "{set:?}");
        }
    }

    #[test]
    fn forward_step_lands_in_set(xs in coords(3, 2.0), alpha in 0.0..5.0f64) {
        let op = Operator::linear_from_rows(
            3,
            &[1.0, -2.0, 1.0, 3.0, 1.0, 3.0, 1.0, -2.0, 1.0],
        )
        .unwrap();
        for set in set_kinds() {
            let prob = ProblemInstance::new(op.clone(), set, None).unwrap();
            let base = point(&xs);
            let out = prob.normalized_forward_step(&base, alpha).unwrap();
            prop_assert!(prob.set().violation(&out).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn inertial_coefficients_partition_unity(
        b1_frac in 0.0..=1.0f64,
        xi_frac in 0.0..=1.0f64,
    ) {
        // Any (beta1, xi) inside the convex window splits 1 into three
        // nonnegative coefficients.
        let b1 = 1.0 + b1_frac;
        let xi = (2.0 - b1) * xi_frac;
        let (c_curr, c_prev, c_w) = (2.0 - b1 - xi, b1 - 1.0, xi);
        prop_assert!((c_curr + c_prev + c_w - 1.0).abs() <= 1e-15);
        prop_assert!(c_curr >= -1e-15 && c_prev >= -1e-15 && c_w >= -1e-15);
        prop_assert!(c_curr <= 1.0 + 1e-15 && c_prev <= 1.0 + 1e-15 && c_w <= 1.0 + 1e-15);
    }

    #[test]
    fn smoothing_base_point_feasible_for_admissible_eta(
        za in coords(3, 1.0),
        zb in coords(3, 1.0),
        eta in -1.0..=0.0f64,
        beta0 in 0.0..2.0f64,
    ) {
        // With -1 <= eta <= 0 the pre-projection base point
        // z + eta (z - z_prev) is itself a convex combination of iterates.
        let op = Operator::identity(3);
        for set in set_kinds() {
            let prob = ProblemInstance::new(op.clone(), set, None).unwrap();
            let z_prev = prob.project(&point(&za)).unwrap();
            let z_curr = prob.project(&point(&zb)).unwrap();
            let base = &z_curr + (&z_curr - &z_prev) * eta;
            prop_assert!(prob.set().violation(&base).unwrap() <= 1e-10);

            // And the smoothing point itself is feasible by projection.
            let sched = paravi::DiscreteSchedule::custom(
                move |_| beta0,
                |_| 1.0,
                |_| 0.5,
                move |_| eta,
            );
            let window = IterateWindow::new(1, z_prev, z_curr);
            let w = smoothing_point_discrete(&prob, &sched, &window).unwrap();
            prop_assert!(prob.set().violation(&w).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn residual_zero_only_on_solution_segment(t in -0.7..0.7f64, eps in 1e-3..0.2f64) {
        // On the benchmark instance the solution set is {(t,0,-t)}; points on
        // it have zero residual, points pushed off it do not.
        let prob = paravi::problems::paper_sec5();
        let on = point(&[t, 0.0, -t]);
        prop_assert!(prob.natural_residual(&on).unwrap() <= 1e-12);
        let off = point(&[t, eps, -t]);
        let r = prob.natural_residual(&off).unwrap();
        prop_assert!(r > 1e-8, "residual {r} at eps {eps}");
    }
}

#[test]
fn projection_idempotence_bulk_per_set_kind() {
    // The deterministic 10^3-point sweep per set kind.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for set in set_kinds() {
        for _ in 0..1000 {
            let x = DVector::from_iterator(3, (0..3).map(|_| rng.gen_range(-5.0..5.0)));
            let p1 = set.project(&x).unwrap();
            let p2 = set.project(&p1).unwrap();
            assert!((&p1 - &p2).norm() <= 1e-12);
        }
    }
}
