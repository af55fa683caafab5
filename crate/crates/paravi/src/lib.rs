//! Projection-type solvers for paramonotone variational inequalities.
//!
//! The problem: find `x*` in a closed convex set `Ω ⊂ ℝᵈ` such that
//! `⟨U(x*), a − x*⟩ ≥ 0` for all `a ∈ Ω`, where `U` is a paramonotone,
//! continuous (not necessarily Lipschitz) operator. The toolkit provides
//!
//! * [`model`] — operators, feasible sets with exact Euclidean projections,
//!   the normalized forward step shared by all solvers, the natural-residual
//!   merit function, and a sampling-based monotonicity probe;
//! * [`schedule`] — the coefficient functions/sequences steering the dynamics
//!   (power-law families plus tabulated custom schedules);
//! * [`validate`] — checkers for the admissibility conditions the convergence
//!   theory imposes on those schedules;
//! * [`continuous`] — fixed-step integration of the second-order smoothed
//!   flow, its Riccati-based coupled reformulation that provably stays inside
//!   `Ω`, a first-order baseline flow, and the closed-form counterexample
//!   showing why the coefficient condition is needed;
//! * [`discrete`] — the inertial projection-type iteration obtained by
//!   discretizing the flow, and the direct projected-step baseline;
//! * [`diagnostics`] — energy series, CSV/JSON writers, and side-by-side
//!   method comparison;
//! * [`config`] — serde types for the run configuration consumed by the
//!   `paravi` command-line binary.
//!
//! Everything is deterministic: fixed integration grids, seeded sampling, and
//! 17-significant-digit CSV output.

pub mod config;
pub mod continuous;
pub mod diagnostics;
pub mod discrete;
mod error;
pub mod model;
pub mod problems;
pub mod schedule;
pub mod validate;

pub use error::{Error, Result};
pub use model::{FeasibleSet, MonotonicityReport, Operator, Point, ProblemInstance};
pub use schedule::{ContinuousSchedule, DiscreteSchedule};
