//! Bundled problem instances used by the benchmark harness and the tests.

use nalgebra::DMatrix;

use crate::model::{point, FeasibleSet, Operator, ProblemInstance};

/// Identifiers accepted by `--problem` and [`by_id`].
pub const BUILTIN_IDS: [&str; 3] = ["paper-sec5", "remark-counterexample", "identity-ball"];

/// The 3-D benchmark: `U(x) = Ax` with a paramonotone (not strictly monotone)
/// matrix over the unit ball. The origin is a solution; the full solution set
/// is the segment `{(t,0,−t) : |t| ≤ 1/√2}`.
pub fn paper_sec5() -> ProblemInstance {
    let a = DMatrix::from_row_slice(
        3,
        3,
        &[
            1.0, -2.0, 1.0, //
            3.0, 1.0, 3.0, //
            1.0, -2.0, 1.0,
        ],
    );
    ProblemInstance::new(
        Operator::linear(a).expect("square finite matrix"),
        FeasibleSet::unit_ball(3),
        Some(point(&[0.0, 0.0, 0.0])),
    )
    .expect("valid instance")
}

/// The 1-D instance on `Ω = [1,2]` whose second-order flow with constant
/// coefficients `α₁ = δ = 2` and constant target `y ≡ 1` leaves the set on
/// `(π, 3π/2)`. The operator is zero, so the natural residual equals the
/// distance to `[1,2]`.
pub fn remark_counterexample() -> ProblemInstance {
    ProblemInstance::new(
        Operator::zero(1),
        FeasibleSet::interval(1.0, 2.0).expect("1<=2"),
        None,
    )
    .expect("valid instance")
}

/// Identity operator over the 3-D unit ball; the unique solution is the
/// origin. A strictly monotone sanity instance.
pub fn identity_ball() -> ProblemInstance {
    ProblemInstance::new(
        Operator::identity(3),
        FeasibleSet::unit_ball(3),
        Some(point(&[0.0, 0.0, 0.0])),
    )
    .expect("valid instance")
}

/// Look up a bundled instance by its CLI identifier.
pub fn by_id(id: &str) -> Option<ProblemInstance> {
    match id {
        "paper-sec5" => Some(paper_sec5()),
        "remark-counterexample" => Some(remark_counterexample()),
        "identity-ball" => Some(identity_ball()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_ids_resolve() {
        for id in BUILTIN_IDS {
            assert!(by_id(id).is_some(), "missing builtin {id}");
        }
        assert!(by_id("nope").is_none());
    }

    #[test]
    fn references_have_zero_residual() {
        for id in BUILTIN_IDS {
            let prob = by_id(id).unwrap();
            if let Some(r) = prob.reference_solution() {
                assert!(prob.natural_residual(r).unwrap() <= 1e-10);
            }
        }
    }
}
