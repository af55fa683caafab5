//! Coefficient schedules steering the continuous flow and the discrete
//! iteration: the power-law families with their admissible parameter boxes,
//! plus custom schedules given as closures or tabulated CSV values.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type IndexFn = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// Central-difference step for derivatives of custom schedules.
pub const DERIVATIVE_STEP: f64 = 1e-4;

fn require(cond: bool, inequality: &str, got: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{inequality} (got {got})")))
    }
}

/// The coefficient functions `(α₀, α₁, δ, λ)` of the second-order flow,
/// defined for `t ≥ t0`.
#[derive(Clone)]
pub struct ContinuousSchedule {
    t0: f64,
    family: ContinuousFamily,
}

#[derive(Clone)]
pub enum ContinuousFamily {
    /// `α₀ = (t+1)^{−q}`, `α₁ = h + (t+1)^{−s}`, `δ = (t+1)^{−p}`, `λ = 0`.
    PowerLawA { h: f64, s: f64, p: f64, q: f64 },
    /// `α₀ = (t+1)^{−q}`, `α₁ = h + (t+1)^{−s}`, `δ = u` constant, `λ = 0`.
    PowerLawB { h: f64, s: f64, q: f64, u: f64 },
    Custom { alpha0: TimeFn, alpha1: TimeFn, delta: TimeFn, lambda: TimeFn },
}

impl fmt::Debug for ContinuousSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContinuousSchedule({}, t0={})", self.family_label(), self.t0)
    }
}

impl ContinuousSchedule {
    /// Build the vanishing-`δ` power-law family. Admissible box:
    /// `h>2`, `0<s<1/2`, `s<p<1`, `(1−p)/2<q≤1−p`.
    pub fn power_law_a(h: f64, s: f64, p: f64, q: f64, t0: f64) -> Result<Self> {
        for (v, name) in [(h, "h"), (s, "s"), (p, "p"), (q, "q"), (t0, "t0")] {
            require(v.is_finite(), &format!("{name} finite"), format!("{name}={v}"))?;
        }
        require(t0 > -1.0, "t0>-1", format!("t0={t0}"))?;
        require(h > 2.0, "h>2", format!("h={h}"))?;
        require(s > 0.0 && s < 0.5, "0<s<1/2", format!("s={s}"))?;
        require(p > s && p < 1.0, "s<p<1", format!("s={s}, p={p}"))?;
        require(
            q > 0.5 * (1.0 - p) && q <= 1.0 - p,
            "(1-p)/2<q<=1-p",
            format!("p={p}, q={q}"),
        )?;
        Ok(ContinuousSchedule { t0, family: ContinuousFamily::PowerLawA { h, s, p, q } })
    }

    /// Build the constant-`δ` power-law family. Admissible box:
    /// `u>0`, `h>2√u`, `0<s<1/2`, `1/2<q≤1`.
    pub fn power_law_b(h: f64, s: f64, q: f64, u: f64, t0: f64) -> Result<Self> {
        for (v, name) in [(h, "h"), (s, "s"), (q, "q"), (u, "u"), (t0, "t0")] {
            require(v.is_finite(), &format!("{name} finite"), format!("{name}={v}"))?;
        }
        require(t0 > -1.0, "t0>-1", format!("t0={t0}"))?;
        require(u > 0.0, "u>0", format!("u={u}"))?;
        require(h > 2.0 * u.sqrt(), "h>2*sqrt(u)", format!("h={h}, u={u}"))?;
        require(s > 0.0 && s < 0.5, "0<s<1/2", format!("s={s}"))?;
        require(q > 0.5 && q <= 1.0, "1/2<q<=1", format!("q={q}"))?;
        Ok(ContinuousSchedule { t0, family: ContinuousFamily::PowerLawB { h, s, q, u } })
    }

    pub fn custom(
        alpha0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        alpha1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        delta: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lambda: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t0: f64,
    ) -> Self {
        ContinuousSchedule {
            t0,
            family: ContinuousFamily::Custom {
                alpha0: Arc::new(alpha0),
                alpha1: Arc::new(alpha1),
                delta: Arc::new(delta),
                lambda: Arc::new(lambda),
            },
        }
    }

    /// Constant coefficient functions.
    pub fn constants(alpha0: f64, alpha1: f64, delta: f64, lambda: f64, t0: f64) -> Self {
        Self::custom(
            move |_| alpha0,
            move |_| alpha1,
            move |_| delta,
            move |_| lambda,
            t0,
        )
    }

    /// Custom schedule backed by a tabulated CSV, piecewise-linear in `t` and
    /// clamped outside the tabulated range.
    pub fn from_table(table: ScheduleTable, t0: f64) -> Self {
        let t = Arc::new(table);
        let (t0_, t1_, t2_, t3_) = (t.clone(), t.clone(), t.clone(), t);
        ContinuousSchedule {
            t0,
            family: ContinuousFamily::Custom {
                alpha0: Arc::new(move |x| t0_.interpolate(x, 0)),
                alpha1: Arc::new(move |x| t1_.interpolate(x, 1)),
                delta: Arc::new(move |x| t2_.interpolate(x, 2)),
                lambda: Arc::new(move |x| t3_.interpolate(x, 3)),
            },
        }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn family(&self) -> &ContinuousFamily {
        &self.family
    }

    pub fn alpha0(&self, t: f64) -> f64 {
        match &self.family {
            ContinuousFamily::PowerLawA { q, .. } | ContinuousFamily::PowerLawB { q, .. } => {
                (t + 1.0).powf(-q)
            }
            ContinuousFamily::Custom { alpha0, .. } => alpha0(t),
        }
    }

    pub fn alpha1(&self, t: f64) -> f64 {
        match &self.family {
            ContinuousFamily::PowerLawA { h, s, .. }
            | ContinuousFamily::PowerLawB { h, s, .. } => h + (t + 1.0).powf(-s),
            ContinuousFamily::Custom { alpha1, .. } => alpha1(t),
        }
    }

    pub fn delta(&self, t: f64) -> f64 {
        match &self.family {
            ContinuousFamily::PowerLawA { p, .. } => (t + 1.0).powf(-p),
            ContinuousFamily::PowerLawB { u, .. } => *u,
            ContinuousFamily::Custom { delta, .. } => delta(t),
        }
    }

    pub fn lambda(&self, t: f64) -> f64 {
        match &self.family {
            ContinuousFamily::PowerLawA { .. } | ContinuousFamily::PowerLawB { .. } => 0.0,
            ContinuousFamily::Custom { lambda, .. } => lambda(t),
        }
    }

    /// `α₁′(t)`: closed form for the families, central differences otherwise.
    pub fn alpha1_derivative(&self, t: f64) -> f64 {
        match &self.family {
            ContinuousFamily::PowerLawA { s, .. } | ContinuousFamily::PowerLawB { s, .. } => {
                -s * (t + 1.0).powf(-s - 1.0)
            }
            ContinuousFamily::Custom { alpha1, .. } => {
                central_difference(alpha1.as_ref(), t, self.t0)
            }
        }
    }

    /// `d/dt [α₁(t) − δ(t)λ(t)]`: closed form for the families (`λ ≡ 0`),
    /// central differences otherwise.
    pub fn damping_gap_derivative(&self, t: f64) -> f64 {
        match &self.family {
            ContinuousFamily::PowerLawA { .. } | ContinuousFamily::PowerLawB { .. } => {
                self.alpha1_derivative(t)
            }
            ContinuousFamily::Custom { alpha1, delta, lambda, .. } => {
                let f = |x: f64| alpha1(x) - delta(x) * lambda(x);
                central_difference(&f, t, self.t0)
            }
        }
    }

    /// `λ ≡ 0` by construction (both families)?
    pub fn lambda_is_zero(&self) -> bool {
        matches!(
            self.family,
            ContinuousFamily::PowerLawA { .. } | ContinuousFamily::PowerLawB { .. }
        )
    }

    /// The `(C₁, C₂)` constants the family's admissibility argument produces:
    /// `(2h, 2)` for the vanishing-`δ` family and `(h/u, h)` for the
    /// constant-`δ` family. `None` for custom schedules.
    pub fn family_constants(&self) -> Option<(f64, f64)> {
        match &self.family {
            ContinuousFamily::PowerLawA { h, .. } => Some((2.0 * h, 2.0)),
            ContinuousFamily::PowerLawB { h, u, .. } => Some((h / u, *h)),
            ContinuousFamily::Custom { .. } => None,
        }
    }

    pub fn family_label(&self) -> String {
        match &self.family {
            ContinuousFamily::PowerLawA { h, s, p, q } => {
                format!("powerlawA(h={h},s={s},p={p},q={q})")
            }
            ContinuousFamily::PowerLawB { h, s, q, u } => {
                format!("powerlawB(h={h},s={s},q={q},u={u})")
            }
            ContinuousFamily::Custom { .. } => "custom".to_string(),
        }
    }
}

fn central_difference(f: &dyn Fn(f64) -> f64, t: f64, t_min: f64) -> f64 {
    let h = DERIVATIVE_STEP;
    if t - h >= t_min {
        (f(t + h) - f(t - h)) / (2.0 * h)
    } else {
        (f(t + h) - f(t)) / h
    }
}

/// The coefficient sequences `(β₀, β₁, ξ, η)` of the inertial iteration,
/// defined for `n ≥ 0`.
#[derive(Clone)]
pub struct DiscreteSchedule {
    family: DiscreteFamily,
}

#[derive(Clone)]
pub enum DiscreteFamily {
    /// `β₀ = (n+ω)^{−q}`, `β₁ = 1 + δ(n+ω)^{−p}`, `ξ = (n+ω)^{−p}`,
    /// `η = −θ(n+ω)^{−λ}`.
    PowerLawD { p: f64, q: f64, delta: f64, theta: f64, lambda: f64, omega: f64 },
    Custom { beta0: IndexFn, beta1: IndexFn, xi: IndexFn, eta: IndexFn },
}

impl fmt::Debug for DiscreteSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiscreteSchedule({})", self.family_label())
    }
}

/// Constants entering the discrete contraction condition for the power-law
/// family: `Q₁ = 1 − (θ/ω^λ)²`, `Q₂ = 1 − (δ+1)/ω^p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QConstants {
    pub q1: f64,
    pub q2: f64,
}

impl DiscreteSchedule {
    /// Lower bound the shift `ω` must exceed: `max{(δ+1)^{1/p}, θ^{1/λ}}`.
    pub fn omega_lower_bound(p: f64, delta: f64, theta: f64, lambda: f64) -> f64 {
        ((delta + 1.0).powf(1.0 / p)).max(theta.powf(1.0 / lambda))
    }

    /// Build the power-law family. Admissible box: `0<p<1`,
    /// `(1−p)/2<q≤1−p`, `δ>0`, `θ>0`, `λ>0`, and `ω` strictly above
    /// [`Self::omega_lower_bound`]. When `omega` is absent the bound plus one
    /// is used.
    pub fn power_law_d(
        p: f64,
        q: f64,
        delta: f64,
        theta: f64,
        lambda: f64,
        omega: Option<f64>,
    ) -> Result<Self> {
        for (v, name) in [(p, "p"), (q, "q"), (delta, "deltaP"), (theta, "thetaP"), (lambda, "lambdaP")]
        {
            require(v.is_finite(), &format!("{name} finite"), format!("{name}={v}"))?;
        }
        require(p > 0.0 && p < 1.0, "0<p<1", format!("p={p}"))?;
        require(
            q > 0.5 * (1.0 - p) && q <= 1.0 - p,
            "(1-p)/2<q<=1-p",
            format!("p={p}, q={q}"),
        )?;
        require(delta > 0.0, "deltaP>0", format!("deltaP={delta}"))?;
        require(theta > 0.0, "thetaP>0", format!("thetaP={theta}"))?;
        require(lambda > 0.0, "lambdaP>0", format!("lambdaP={lambda}"))?;
        let bound = Self::omega_lower_bound(p, delta, theta, lambda);
        let omega = match omega {
            Some(w) => {
                require(
                    w.is_finite() && w > bound,
                    "omega>max{(deltaP+1)^(1/p),thetaP^(1/lambdaP)}",
                    format!("omega={w}, bound={bound}"),
                )?;
                w
            }
            None => bound + 1.0,
        };
        Ok(DiscreteSchedule {
            family: DiscreteFamily::PowerLawD { p, q, delta, theta, lambda, omega },
        })
    }

    pub fn custom(
        beta0: impl Fn(u64) -> f64 + Send + Sync + 'static,
        beta1: impl Fn(u64) -> f64 + Send + Sync + 'static,
        xi: impl Fn(u64) -> f64 + Send + Sync + 'static,
        eta: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DiscreteSchedule {
            family: DiscreteFamily::Custom {
                beta0: Arc::new(beta0),
                beta1: Arc::new(beta1),
                xi: Arc::new(xi),
                eta: Arc::new(eta),
            },
        }
    }

    /// Custom schedule backed by a tabulated CSV, exact row lookup in `n`
    /// (clamped to the last row beyond the table).
    pub fn from_table(table: ScheduleTable) -> Self {
        let t = Arc::new(table);
        let (t0_, t1_, t2_, t3_) = (t.clone(), t.clone(), t.clone(), t);
        DiscreteSchedule {
            family: DiscreteFamily::Custom {
                beta0: Arc::new(move |n| t0_.row_value(n, 0)),
                beta1: Arc::new(move |n| t1_.row_value(n, 1)),
                xi: Arc::new(move |n| t2_.row_value(n, 2)),
                eta: Arc::new(move |n| t3_.row_value(n, 3)),
            },
        }
    }

    pub fn family(&self) -> &DiscreteFamily {
        &self.family
    }

    pub fn beta0(&self, n: u64) -> f64 {
        match &self.family {
            DiscreteFamily::PowerLawD { q, omega, .. } => (n as f64 + omega).powf(-q),
            DiscreteFamily::Custom { beta0, .. } => beta0(n),
        }
    }

    pub fn beta1(&self, n: u64) -> f64 {
        match &self.family {
            DiscreteFamily::PowerLawD { p, delta, omega, .. } => {
                1.0 + delta * (n as f64 + omega).powf(-p)
            }
            DiscreteFamily::Custom { beta1, .. } => beta1(n),
        }
    }

    pub fn xi(&self, n: u64) -> f64 {
        match &self.family {
            DiscreteFamily::PowerLawD { p, omega, .. } => (n as f64 + omega).powf(-p),
            DiscreteFamily::Custom { xi, .. } => xi(n),
        }
    }

    pub fn eta(&self, n: u64) -> f64 {
        match &self.family {
            DiscreteFamily::PowerLawD { theta, lambda, omega, .. } => {
                -theta * (n as f64 + omega).powf(-lambda)
            }
            DiscreteFamily::Custom { eta, .. } => eta(n),
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match &self.family {
            DiscreteFamily::PowerLawD { omega, .. } => Some(*omega),
            DiscreteFamily::Custom { .. } => None,
        }
    }

    /// The `(Q₁, Q₂)` constants of the power-law family's contraction
    /// argument. Errors on custom schedules.
    pub fn family_constants(&self) -> Result<QConstants> {
        match &self.family {
            DiscreteFamily::PowerLawD { p, delta, theta, lambda, omega, .. } => Ok(QConstants {
                q1: 1.0 - (theta / omega.powf(*lambda)).powi(2),
                q2: 1.0 - (delta + 1.0) / omega.powf(*p),
            }),
            DiscreteFamily::Custom { .. } => Err(Error::Unsupported(
                "family constants are defined for power-law schedules only".into(),
            )),
        }
    }

    pub fn family_label(&self) -> String {
        match &self.family {
            DiscreteFamily::PowerLawD { p, q, delta, theta, lambda, omega } => format!(
                "powerlawD(p={p},q={q},deltaP={delta},thetaP={theta},lambdaP={lambda},omega={omega})"
            ),
            DiscreteFamily::Custom { .. } => "custom".to_string(),
        }
    }
}

/// Tabulated schedule values read from CSV with columns
/// `n_or_t, alpha0/beta0, alpha1/beta1, delta/xi, lambda/eta`.
#[derive(Clone, Debug)]
pub struct ScheduleTable {
    rows: Vec<[f64; 5]>,
}

impl ScheduleTable {
    pub fn new(rows: Vec<[f64; 5]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Csv("schedule table is empty".into()));
        }
        if rows.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::Csv("first column must be strictly increasing".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Csv("schedule table has non-finite entries".into()));
        }
        Ok(ScheduleTable { rows })
    }

    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            if record.len() != 5 {
                return Err(Error::Csv(format!(
                    "row {}: expected 5 columns, got {}",
                    i + 1,
                    record.len()
                )));
            }
            // A header row is allowed; skip it.
            if i == 0 && record.iter().any(|f| f.parse::<f64>().is_err()) {
                continue;
            }
            let mut row = [0.0; 5];
            for (j, field) in record.iter().enumerate() {
                row[j] = field
                    .parse::<f64>()
                    .map_err(|_| Error::Csv(format!("row {}: bad number {field:?}", i + 1)))?;
            }
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }

    /// Piecewise-linear interpolation of column `col+1` at abscissa `x`,
    /// clamped to the tabulated range.
    pub fn interpolate(&self, x: f64, col: usize) -> f64 {
        let c = col + 1;
        if x <= self.rows[0][0] {
            return self.rows[0][c];
        }
        if x >= self.rows[self.rows.len() - 1][0] {
            return self.rows[self.rows.len() - 1][c];
        }
        let idx = self.rows.partition_point(|r| r[0] <= x);
        let (lo, hi) = (&self.rows[idx - 1], &self.rows[idx]);
        let w = (x - lo[0]) / (hi[0] - lo[0]);
        lo[c] + w * (hi[c] - lo[c])
    }

    /// Value of column `col+1` at the row with first entry `n` (or the last
    /// row when `n` runs past the table).
    pub fn row_value(&self, n: u64, col: usize) -> f64 {
        let c = col + 1;
        let x = n as f64;
        match self.rows.binary_search_by(|r| r[0].partial_cmp(&x).unwrap()) {
            Ok(i) => self.rows[i][c],
            Err(i) => self.rows[i.min(self.rows.len() - 1)][c],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn power_law_a_box() {
        assert!(ContinuousSchedule::power_law_a(3.0, 0.3, 0.5, 0.4, 0.0).is_ok());
        let err = ContinuousSchedule::power_law_a(2.0, 0.3, 0.5, 0.4, 0.0).unwrap_err();
        assert!(err.to_string().contains("h>2"), "got {err}");
        let err = ContinuousSchedule::power_law_a(3.0, 0.3, 0.5, 0.6, 0.0).unwrap_err();
        assert!(err.to_string().contains("(1-p)/2<q<=1-p"), "got {err}");
    }

    #[test]
    fn power_law_b_box() {
        assert!(ContinuousSchedule::power_law_b(2.5, 0.35, 0.71, 1.0, 0.0).is_ok());
        let err = ContinuousSchedule::power_law_b(1.0, 0.35, 0.71, 1.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("h>2*sqrt(u)"), "got {err}");
        let err = ContinuousSchedule::power_law_b(2.5, 0.35, 0.4, 1.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("1/2<q<=1"), "got {err}");
    }

    #[test]
    fn power_law_b_values() {
        let s = ContinuousSchedule::power_law_b(2.5, 0.35, 0.71, 1.0, 0.0).unwrap();
        assert_eq!(s.alpha0(0.0), 1.0);
        assert_eq!(s.alpha1(0.0), 3.5);
        assert_eq!(s.delta(17.0), 1.0);
        assert_eq!(s.lambda(3.0), 0.0);
        assert_eq!(s.family_constants(), Some((2.5, 2.5)));
        let a = ContinuousSchedule::power_law_a(3.0, 0.3, 0.5, 0.4, 0.0).unwrap();
        assert_eq!(a.family_constants(), Some((6.0, 2.0)));
    }

    #[test]
    fn exact_derivative_matches_difference() {
        let s = ContinuousSchedule::power_law_b(2.5, 0.35, 0.71, 1.0, 0.0).unwrap();
        let c = ContinuousSchedule::custom(
            |t| (t + 1.0).powf(-0.71),
            |t| 2.5 + (t + 1.0).powf(-0.35),
            |_| 1.0,
            |_| 0.0,
            0.0,
        );
        for t in [1.0, 10.0, 250.0] {
            assert_abs_diff_eq!(s.alpha1_derivative(t), c.alpha1_derivative(t), epsilon = 1e-7);
        }
        // At t0 the custom path falls back to a one-sided difference.
        assert_abs_diff_eq!(s.alpha1_derivative(0.0), c.alpha1_derivative(0.0), epsilon = 1e-4);
    }

    #[test]
    fn power_law_d_default_omega() {
        // (deltaP+1)^{1/p} = 2^2 = 4, thetaP^{1/lambdaP} = 1, so omega = 5.
        let s = DiscreteSchedule::power_law_d(0.5, 0.5, 1.0, 1.0, 0.5, None).unwrap();
        assert_eq!(s.omega(), Some(5.0));
        assert_abs_diff_eq!(s.beta0(1), 1.0 / 6.0f64.sqrt(), epsilon = 1e-16);
        assert_abs_diff_eq!(s.eta(1), -1.0 / 6.0f64.sqrt(), epsilon = 1e-16);
        assert_abs_diff_eq!(s.beta1(0), 1.0 + 1.0 / 5.0f64.sqrt(), epsilon = 1e-16);
    }

    #[test]
    fn power_law_d_box() {
        let err = DiscreteSchedule::power_law_d(0.5, 0.6, 1.0, 1.0, 0.5, None).unwrap_err();
        assert!(err.to_string().contains("(1-p)/2<q<=1-p"), "got {err}");
        let err = DiscreteSchedule::power_law_d(0.5, 0.5, 1.0, 1.0, 0.5, Some(3.0)).unwrap_err();
        assert!(err.to_string().contains("omega>"), "got {err}");
        // The bound itself is rejected (strict inequality), just above passes.
        assert!(DiscreteSchedule::power_law_d(0.5, 0.5, 1.0, 1.0, 0.5, Some(4.0)).is_err());
        assert!(DiscreteSchedule::power_law_d(0.5, 0.5, 1.0, 1.0, 0.5, Some(4.0 + 1e-6)).is_ok());
    }

    #[test]
    fn q_constants() {
        let s = DiscreteSchedule::power_law_d(0.5, 0.5, 1.0, 1.0, 0.5, None).unwrap();
        let q = s.family_constants().unwrap();
        assert_abs_diff_eq!(q.q1, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(q.q2, 1.0 - 2.0 / 5.0f64.sqrt(), epsilon = 1e-15);

        // Vanishing theta pushes Q1 toward 1.
        let s = DiscreteSchedule::power_law_d(0.5, 0.5, 0.1, 1e-9, 1.0, Some(2.0)).unwrap();
        assert_abs_diff_eq!(s.family_constants().unwrap().q1, 1.0, epsilon = 1e-15);

        let c = DiscreteSchedule::custom(|_| 0.1, |_| 1.0, |_| 0.5, |_| 0.0);
        assert!(matches!(c.family_constants(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn table_lookup() {
        let table = ScheduleTable::new(vec![
            [0.0, 1.0, 2.0, 3.0, 0.0],
            [1.0, 0.5, 1.5, 2.0, -0.5],
            [2.0, 0.25, 1.0, 1.0, -1.0],
        ])
        .unwrap();
        assert_eq!(table.interpolate(0.5, 0), 0.75);
        assert_eq!(table.interpolate(-3.0, 1), 2.0);
        assert_eq!(table.interpolate(9.0, 2), 1.0);
        assert_eq!(table.row_value(1, 3), -0.5);
        assert_eq!(table.row_value(100, 3), -1.0);
    }

    #[test]
    fn table_from_csv_with_header() {
        let text = "n,beta0,beta1,xi,eta\n0,1.0,1.5,0.5,0.0\n1,0.5,1.25,0.25,-0.1\n";
        let table = ScheduleTable::from_csv_reader(text.as_bytes()).unwrap();
        let sched = DiscreteSchedule::from_table(table);
        assert_eq!(sched.beta1(0), 1.5);
        assert_eq!(sched.eta(1), -0.1);
    }
}
