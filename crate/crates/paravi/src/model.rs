//! Problem definition: operators, feasible sets with exact projections, the
//! normalized forward step shared by all solvers, and solution-quality
//! metrics.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of ℝᵈ.
pub type Point = DVector<f64>;

/// Membership tolerance for the exact-projection sets.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Inner-product floor of the paramonotonicity probe.
pub const PROBE_INNER_TOL: f64 = 1e-10;

/// Operator-difference floor of the paramonotonicity probe.
pub const PROBE_VALUE_TOL: f64 = 1e-6;

/// Convenience constructor for a [`Point`].
pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

fn ensure_finite(x: &Point, context: &str) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context.to_string()))
    }
}

fn ensure_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// The operator `U: ℝᵈ → ℝᵈ` of the variational inequality.
///
/// Linear operators are stored as a dense matrix; anything else is a callback.
/// Callbacks must be deterministic and reentrant — evaluation is pure and may
/// run concurrently. This is documented, not enforced.
#[derive(Clone)]
pub enum Operator {
    Linear(DMatrix<f64>),
    Callback {
        dim: usize,
        eval: Arc<dyn Fn(&Point) -> Point + Send + Sync>,
    },
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Linear(m) => write!(f, "Operator::Linear({}x{})", m.nrows(), m.ncols()),
            Operator::Callback { dim, .. } => write!(f, "Operator::Callback(dim={dim})"),
        }
    }
}

impl Operator {
    /// A linear operator `x ↦ Mx`. The matrix must be square and finite.
    pub fn linear(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::Parameter("operator dimension must be >= 1".into()));
        }
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("operator matrix".into()));
        }
        Ok(Operator::Linear(matrix))
    }

    /// A linear operator from a row-major coefficient slice.
    pub fn linear_from_rows(dim: usize, row_major: &[f64]) -> Result<Self> {
        if row_major.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: row_major.len() });
        }
        Self::linear(DMatrix::from_row_slice(dim, dim, row_major))
    }

    pub fn identity(dim: usize) -> Self {
        Operator::Linear(DMatrix::identity(dim, dim))
    }

    pub fn zero(dim: usize) -> Self {
        Operator::Linear(DMatrix::zeros(dim, dim))
    }

    /// Wrap an arbitrary evaluation map.
    pub fn from_fn(dim: usize, eval: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        Operator::Callback { dim, eval: Arc::new(eval) }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Operator::Linear(m) => m.nrows(),
            Operator::Callback { dim, .. } => *dim,
        }
    }

    /// Evaluate `U(x)`. For the linear kind this is the exact matrix-vector
    /// product; callback outputs are checked for finiteness.
    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        ensure_dim(self.dimension(), x.len())?;
        match self {
            Operator::Linear(m) => Ok(m * x),
            Operator::Callback { dim, eval } => {
                let out = eval(x);
                ensure_dim(*dim, out.len())?;
                ensure_finite(&out, "callback operator output")?;
                Ok(out)
            }
        }
    }
}

/// A nonempty, closed, convex subset of ℝᵈ with an exact Euclidean projection.
#[derive(Clone, Debug)]
pub enum FeasibleSet {
    /// `{x : ‖x − center‖ ≤ radius}`, projected by radial scaling.
    Ball { center: Point, radius: f64 },
    /// `{x : lower ≤ x ≤ upper}` componentwise, projected by clamping.
    Box { lower: Point, upper: Point },
    /// `{x ≥ 0 : Σxᵢ = scale}`, projected by the sorting-based exact algorithm.
    Simplex { dim: usize, scale: f64 },
    /// `[lo, hi] ⊂ ℝ` (one-dimensional box).
    Interval { lo: f64, hi: f64 },
}

impl FeasibleSet {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        ensure_finite(&center, "ball center")?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Parameter(format!("radius>0 (got radius={radius})")));
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    pub fn unit_ball(dim: usize) -> Self {
        FeasibleSet::Ball { center: DVector::zeros(dim), radius: 1.0 }
    }

    pub fn hyper_box(lower: Point, upper: Point) -> Result<Self> {
        ensure_finite(&lower, "box lower")?;
        ensure_finite(&upper, "box upper")?;
        ensure_dim(lower.len(), upper.len())?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::Parameter("lower<=upper componentwise".into()));
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    pub fn simplex(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("simplex dimension must be >= 1".into()));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Parameter(format!("scale>0 (got scale={scale})")));
        }
        Ok(FeasibleSet::Simplex { dim, scale })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Parameter(format!("lo<=hi (got lo={lo}, hi={hi})")));
        }
        Ok(FeasibleSet::Interval { lo, hi })
    }

    pub fn dimension(&self) -> usize {
        match self {
            FeasibleSet::Ball { center, .. } => center.len(),
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Simplex { dim, .. } => *dim,
            FeasibleSet::Interval { .. } => 1,
        }
    }

    /// The unique Euclidean nearest point of the set. Idempotent.
    pub fn project(&self, x: &Point) -> Result<Point> {
        ensure_dim(self.dimension(), x.len())?;
        ensure_finite(x, "projection input")?;
        Ok(match self {
            FeasibleSet::Ball { center, radius } => {
                let d = x - center;
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    center + d * (*radius / n)
                }
            }
            FeasibleSet::Box { lower, upper } => {
                Point::from_iterator(
                    x.len(),
                    x.iter()
                        .zip(lower.iter().zip(upper.iter()))
                        .map(|(&v, (&l, &u))| v.clamp(l, u)),
                )
            }
            FeasibleSet::Simplex { scale, .. } => project_simplex(x, *scale),
            FeasibleSet::Interval { lo, hi } => point(&[x[0].clamp(*lo, *hi)]),
        })
    }

    /// Distance from `x` to the set, `‖x − P(x)‖`. Zero exactly on members.
    pub fn violation(&self, x: &Point) -> Result<f64> {
        Ok((x - self.project(x)?).norm())
    }

    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(self.violation(x)? <= tol)
    }

    /// Draw a point of the set: boxes, intervals and simplices are sampled
    /// exactly; balls by projecting a uniform sample of the bounding cube.
    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        match self {
            FeasibleSet::Ball { center, radius } => {
                let d = center.len();
                let raw = Point::from_iterator(d, (0..d).map(|_| rng.gen_range(-1.0..=1.0)));
                let cand = center + raw * *radius;
                self.project(&cand).expect("finite candidate")
            }
            FeasibleSet::Box { lower, upper } => Point::from_iterator(
                lower.len(),
                lower
                    .iter()
                    .zip(upper.iter())
                    .map(|(&l, &u)| if l == u { l } else { rng.gen_range(l..=u) }),
            ),
            FeasibleSet::Simplex { dim, scale } => {
                // Uniform on the simplex via normalized exponentials.
                let e: Vec<f64> = (0..*dim)
                    .map(|_| -(rng.gen_range(f64::MIN_POSITIVE..1.0f64)).ln())
                    .collect();
                let total: f64 = e.iter().sum();
                Point::from_iterator(*dim, e.iter().map(|v| v / total * *scale))
            }
            FeasibleSet::Interval { lo, hi } => {
                point(&[if lo == hi { *lo } else { rng.gen_range(*lo..=*hi) }])
            }
        }
    }
}

/// Projection onto `{y ≥ 0 : Σyᵢ = scale}` by the sorting algorithm.
fn project_simplex(x: &Point, scale: f64) -> Point {
    let mut sorted: Vec<f64> = x.iter().copied().collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    let mut cumsum = 0.0;
    let mut tau = (sorted[0] - scale).min(0.0);
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - scale) / (j + 1) as f64;
        if u - candidate > 0.0 {
            tau = candidate;
        } else {
            break;
        }
    }
    Point::from_iterator(x.len(), x.iter().map(|&v| (v - tau).max(0.0)))
}

/// An operator paired with a feasible set, plus an optional known solution
/// used for diagnostics only.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    operator: Operator,
    set: FeasibleSet,
    reference_solution: Option<Point>,
}

impl ProblemInstance {
    pub fn new(
        operator: Operator,
        set: FeasibleSet,
        reference_solution: Option<Point>,
    ) -> Result<Self> {
        ensure_dim(operator.dimension(), set.dimension())?;
        let prob = ProblemInstance { operator, set, reference_solution: None };
        if let Some(r) = reference_solution {
            ensure_dim(prob.dimension(), r.len())?;
            ensure_finite(&r, "reference solution")?;
            if !prob.set.contains(&r, MEMBERSHIP_TOL)? {
                return Err(Error::Parameter("reference solution must lie in the feasible set".into()));
            }
            let res = prob.natural_residual(&r)?;
            if res > 1e-10 {
                return Err(Error::Parameter(format!(
                    "reference solution has natural residual {res:.3e} > 1e-10"
                )));
            }
            return Ok(ProblemInstance { reference_solution: Some(r), ..prob });
        }
        Ok(prob)
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn reference_solution(&self) -> Option<&Point> {
        self.reference_solution.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.set.dimension()
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        self.operator.evaluate(x)
    }

    pub fn project(&self, x: &Point) -> Result<Point> {
        self.set.project(x)
    }

    /// `P_Ω(base − α/max{1, ‖U(base)‖} · U(base))` — the normalized projected
    /// step both solvers are built from. With `alpha = 0` this is plain
    /// projection.
    pub fn normalized_forward_step(&self, base: &Point, alpha: f64) -> Result<Point> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Parameter(format!("alpha>=0 (got alpha={alpha})")));
        }
        let u = self.evaluate(base)?;
        let scale = alpha / u.norm().max(1.0);
        self.project(&(base - u * scale))
    }

    /// The natural residual `‖x − P_Ω(x − U(x))‖`; zero exactly on solutions.
    pub fn natural_residual(&self, x: &Point) -> Result<f64> {
        let u = self.evaluate(x)?;
        Ok((x - self.project(&(x - u))?).norm())
    }

    /// Load a problem from the JSON document described in the README.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ProblemJson = serde_json::from_str(text)?;
        spec.build()
    }

    pub fn from_json_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }
}

/// Outcome of the sampling-based monotonicity/paramonotonicity probe.
///
/// A clean probe is necessary evidence only, never proof.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub samples: u64,
    /// Minimum of `⟨U(a)−U(b), a−b⟩` over the sampled pairs.
    pub min_inner: f64,
    /// Pairs with `⟨U(a)−U(b), a−b⟩ < 1e−10` while `‖U(a)−U(b)‖ > 1e−6`.
    pub paramono_violations: u64,
}

impl MonotonicityReport {
    pub fn is_clean(&self) -> bool {
        self.min_inner >= -PROBE_INNER_TOL && self.paramono_violations == 0
    }
}

/// Draw `samples` pairs from the set (seeded) and report the worst monotonicity
/// inner product together with the count of paramonotonicity violations.
pub fn monotonicity_probe(
    op: &Operator,
    set: &FeasibleSet,
    samples: u64,
    seed: u64,
) -> Result<MonotonicityReport> {
    use rand::SeedableRng;
    if samples == 0 {
        return Err(Error::Parameter("samples>=1".into()));
    }
    ensure_dim(op.dimension(), set.dimension())?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut min_inner = f64::INFINITY;
    let mut violations = 0u64;
    for _ in 0..samples {
        let a = set.sample(&mut rng);
        let b = set.sample(&mut rng);
        let du = op.evaluate(&a)? - op.evaluate(&b)?;
        let inner = du.dot(&(&a - &b));
        min_inner = min_inner.min(inner);
        if inner < PROBE_INNER_TOL && du.norm() > PROBE_VALUE_TOL {
            violations += 1;
        }
    }
    Ok(MonotonicityReport { samples, min_inner, paramono_violations: violations })
}

#[derive(Serialize, Deserialize)]
struct ProblemJson {
    dimension: usize,
    operator: OperatorJson,
    set: SetJson,
    #[serde(default)]
    reference_solution: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum OperatorJson {
    /// Row-major coefficients of a square matrix.
    Linear { matrix: Vec<f64> },
    Identity,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SetJson {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Simplex { scale: f64 },
    Interval { lo: f64, hi: f64 },
}

impl ProblemJson {
    fn build(self) -> Result<ProblemInstance> {
        let d = self.dimension;
        let operator = match self.operator {
            OperatorJson::Linear { matrix } => Operator::linear_from_rows(d, &matrix)?,
            OperatorJson::Identity => Operator::identity(d),
        };
        let set = match self.set {
            SetJson::Ball { center, radius } => FeasibleSet::ball(point(&center), radius)?,
            SetJson::Box { lower, upper } => {
                FeasibleSet::hyper_box(point(&lower), point(&upper))?
            }
            SetJson::Simplex { scale } => FeasibleSet::simplex(d, scale)?,
            SetJson::Interval { lo, hi } => FeasibleSet::interval(lo, hi)?,
        };
        ProblemInstance::new(operator, set, self.reference_solution.map(|r| point(&r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    #[allow(unused_imports)]
    use rand::Rng as _;

    #[test]
    fn sec5_operator_columns() {
        let prob = problems::paper_sec5();
        let u = prob.evaluate(&point(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(u.as_slice(), &[1.0, 3.0, 1.0]);
        let u = prob.evaluate(&point(&[0.0, 0.0, 0.0])).unwrap();
        assert_eq!(u.as_slice(), &[0.0, 0.0, 0.0]);
        let u = prob.evaluate(&point(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(u.as_slice(), &[-2.0, 1.0, -2.0]);
    }

    #[test]
    fn operator_dimension_mismatch() {
        let prob = problems::paper_sec5();
        assert!(matches!(
            prob.evaluate(&point(&[1.0, 0.0])),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn callback_nonfinite_output_rejected() {
        let op = Operator::from_fn(1, |_| point(&[f64::NAN]));
        assert!(matches!(op.evaluate(&point(&[1.0])), Err(Error::NonFinite(_))));
    }

    #[test]
    fn ball_projection() {
        let ball = FeasibleSet::unit_ball(3);
        let p = ball.project(&point(&[2.0, 0.0, 0.0])).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 0.0]);
        let p = ball.project(&point(&[0.3, 0.4, 0.0])).unwrap();
        assert_eq!(p.as_slice(), &[0.3, 0.4, 0.0]);
    }

    #[test]
    fn box_projection_clamps() {
        let set = FeasibleSet::hyper_box(point(&[0.0, 0.0]), point(&[1.0, 1.0])).unwrap();
        let p = set.project(&point(&[-1.0, 0.5])).unwrap();
        assert_eq!(p.as_slice(), &[0.0, 0.5]);
    }

    #[test]
    fn simplex_projection_matches_sorting_oracle() {
        let set = FeasibleSet::simplex(3, 1.0).unwrap();
        let p = set.project(&point(&[0.5, 0.8, -0.2])).unwrap();
        assert_abs_diff_eq!(p.as_slice(), [0.35, 0.65, 0.0].as_slice(), epsilon = 1e-15);
        let set = FeasibleSet::simplex(2, 1.0).unwrap();
        let p = set.project(&point(&[2.0, 0.0])).unwrap();
        assert_abs_diff_eq!(p.as_slice(), [1.0, 0.0].as_slice(), epsilon = 1e-15);
        // Interior point of the hyperplane is fixed.
        let p = set.project(&point(&[0.25, 0.75])).unwrap();
        assert_abs_diff_eq!(p.as_slice(), [0.25, 0.75].as_slice(), epsilon = 1e-15);
    }

    #[test]
    fn normalized_forward_step_frozen_values() {
        let prob = problems::paper_sec5();
        // U(0)=0 makes the origin a fixed point.
        let out = prob.normalized_forward_step(&point(&[0.0; 3]), 1.0).unwrap();
        assert_eq!(out.as_slice(), &[0.0, 0.0, 0.0]);

        // base=(1,0,0), alpha=1: ‖U‖=√11>1 activates the normalization. The
        // expected value is frozen from direct evaluation:
        //   step = (1,0,0) − (1,3,1)/√11, then radial projection.
        let out = prob.normalized_forward_step(&point(&[1.0, 0.0, 0.0]), 1.0).unwrap();
        let frozen = [
            0.5909689735604723,
            -0.7652973964806059,
            -0.25509913216020197,
        ];
        assert_abs_diff_eq!(out.as_slice(), frozen.as_slice(), epsilon = 1e-15);
        // Recompute the oracle inline as a second route.
        let s11 = 11.0f64.sqrt();
        let pre = point(&[1.0 - 1.0 / s11, -3.0 / s11, -1.0 / s11]);
        let oracle = &pre / pre.norm();
        assert_abs_diff_eq!(out.as_slice(), oracle.as_slice(), epsilon = 1e-15);
    }

    #[test]
    fn normalized_forward_step_small_operator_divisor_is_one() {
        // ‖U(base)‖ = 0.5 ≤ 1, so the step is base − alpha·U(base) before
        // projection: (0.5 − 0.25·0.5, 0, 0) = (0.375, 0, 0), interior.
        let prob = problems::identity_ball();
        let out = prob.normalized_forward_step(&point(&[0.5, 0.0, 0.0]), 0.25).unwrap();
        assert_abs_diff_eq!(out.as_slice(), [0.375, 0.0, 0.0].as_slice(), epsilon = 1e-16);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn natural_residual_values() {
        let prob = problems::paper_sec5();
        assert_eq!(prob.natural_residual(&point(&[0.0; 3])).unwrap(), 0.0);
        // x=(1,0,0): ‖(1,0,0) − (0,−3,−1)/√10‖ = √2, frozen from direct
        // evaluation (the literal is the frozen oracle value, deliberately
        // not the library constant).
        let r = prob.natural_residual(&point(&[1.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(r, 1.4142135623730951, epsilon = 1e-15);

        let prob = problems::identity_ball();
        assert_eq!(prob.natural_residual(&point(&[0.0; 3])).unwrap(), 0.0);
    }

    #[test]
    fn probe_flags_rotation_but_not_sec5() {
        let prob = problems::paper_sec5();
        let report = monotonicity_probe(prob.operator(), prob.set(), 1000, 7).unwrap();
        assert!(report.min_inner >= -PROBE_INNER_TOL);
        assert_eq!(report.paramono_violations, 0);
        assert!(report.is_clean());

        let identity = problems::identity_ball();
        let report =
            monotonicity_probe(identity.operator(), identity.set(), 1000, 7).unwrap();
        assert!(report.min_inner >= 0.0);
        assert_eq!(report.paramono_violations, 0);

        // 90° rotation: ⟨U(a)−U(b), a−b⟩ ≡ 0 but U(a) ≠ U(b).
        let rot = Operator::from_fn(2, |x| point(&[-x[1], x[0]]));
        let report = monotonicity_probe(&rot, &FeasibleSet::unit_ball(2), 1000, 7).unwrap();
        assert!(report.paramono_violations > 0);
        assert!(!report.is_clean());
    }

    #[test]
    fn sec5_quadratic_form_nonnegative() {
        // <A s, s> >= 0 up to roundoff for 10^4 random directions.
        let prob = problems::paper_sec5();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10_000 {
            let s = Point::from_iterator(3, (0..3).map(|_| rng.gen_range(-1.0..1.0)));
            let quad = prob.evaluate(&s).unwrap().dot(&s);
            assert!(quad >= -1e-12, "quadratic form {quad} at {s:?}");
        }
    }

    #[test]
    fn reference_solution_is_checked() {
        let op = Operator::identity(2);
        let set = FeasibleSet::unit_ball(2);
        // (1,0) is feasible but not a solution of the identity VI.
        assert!(ProblemInstance::new(op.clone(), set.clone(), Some(point(&[1.0, 0.0]))).is_err());
        assert!(ProblemInstance::new(op, set, Some(point(&[0.0, 0.0]))).is_ok());
    }

    #[test]
    fn json_round_trip_matches_builtin() {
        let text = r#"{
            "dimension": 3,
            "operator": {"kind": "linear", "matrix": [1,-2,1, 3,1,3, 1,-2,1]},
            "set": {"kind": "ball", "center": [0,0,0], "radius": 1.0},
            "reference_solution": [0,0,0]
        }"#;
        let prob = ProblemInstance::from_json_str(text).unwrap();
        let x = point(&[0.2, -0.1, 0.4]);
        let builtin = problems::paper_sec5();
        assert_eq!(
            prob.natural_residual(&x).unwrap(),
            builtin.natural_residual(&x).unwrap()
        );
    }

    #[test]
    fn json_bad_kind_is_named() {
        let text = r#"{"dimension": 2, "operator": {"kind": "quadratic"}, "set": {"kind": "ball", "center": [0,0], "radius": 1}}"#;
        let err = ProblemInstance::from_json_str(text).unwrap_err();
        assert!(err.to_string().contains("quadratic"), "got: {err}");
    }

    #[test]
    fn samples_land_in_their_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let sets = [
            FeasibleSet::unit_ball(4),
            FeasibleSet::hyper_box(point(&[-1.0, 0.0]), point(&[1.0, 2.0])).unwrap(),
            FeasibleSet::simplex(5, 2.0).unwrap(),
            FeasibleSet::interval(1.0, 2.0).unwrap(),
        ];
        for set in &sets {
            for _ in 0..200 {
                let s = set.sample(&mut rng);
                assert!(set.violation(&s).unwrap() <= MEMBERSHIP_TOL);
            }
        }
    }
}
