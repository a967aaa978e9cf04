//! Classical dynamics engine: adaptive integration of the equations of
//! motion, period measurement, isochronicity and first-integral checks, the
//! linearizing transform, phase portraits, and the MEE momentum map.
//!
//! Charts: most type-I models integrate in velocity form (x, ẋ). POWER_LAW
//! with an odd-reciprocal exponent integrates in the linearizing chart
//! u = sgn(x)|x|^(1/q), an exact diffeomorphism under which the dynamics is
//! harmonic — the velocity form is singular at the origin crossings of those
//! solutions. The 3D systems integrate in reduced (r, ṙ, θ, θ̇) form with φ̇
//! eliminated through the conserved C₁ = μ(r) sin²θ φ̇. Backward runs (t_end
//! < 0) integrate y′ = −F(y) in internal time and are stored reversed.

use crate::catalog::{CatalogError, Interval, ModelName, OscillatorModel};
use crate::exprdsl::{self, Expr, ExprError};
use crate::numdiff::DerivOrder;
use crate::quadrature::{self, QuadratureError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    /// The initial state lies outside (or on the edge of) the model domain.
    #[error("state left the domain at t = {t}: x = {x}")]
    DomainExit { t: f64, x: f64 },
    /// The step controller could not meet the tolerance.
    #[error("integration step failed near t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },
    /// Argument outside the documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Fewer full oscillations than period estimation requires.
    #[error("too few full cycles for a period estimate (found {found})")]
    TooFewCycles { found: usize },
    /// The signal never crosses its mean.
    #[error("trajectory is non-oscillatory")]
    NonOscillatory,
    /// An isochronicity-grid evaluation produced a non-finite value.
    #[error("non-finite value on the grid at x = {x}")]
    NonFinite { x: f64 },
    /// No first integral besides the Hamiltonian is registered.
    #[error("model {0} has no registered first integral besides H")]
    NoFirstIntegral(ModelName),
    /// The requested energy admits no bounded orbit.
    #[error("no bounded orbit at energy {energy}")]
    NoBoundedOrbit { energy: f64 },
    /// The MEE Legendre leg kẋ + k²x²/3 + 3ω² vanished.
    #[error("singular Legendre leg at (x, ẋ) = ({x}, {v})")]
    SingularLeg { x: f64, v: f64 },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Phase-space sample: 1D (x, ẋ) or reduced 3D (r, ṙ, θ, θ̇, φ̇).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum State {
    One { x: f64, v: f64 },
    Three { r: f64, rdot: f64, theta: f64, thetadot: f64, phidot: f64 },
}

impl State {
    /// The oscillating coordinate (x, or r for radial systems).
    pub fn coordinate(&self) -> f64 {
        match *self {
            State::One { x, .. } => x,
            State::Three { r, .. } => r,
        }
    }

    /// Its time derivative.
    pub fn coordinate_rate(&self) -> f64 {
        match *self {
            State::One { v, .. } => v,
            State::Three { rdot, .. } => rdot,
        }
    }
}

/// Why a run stopped before reaching t_end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExitReason {
    /// Came within the margin of a domain-piece endpoint.
    DomainBoundary,
    /// |x| exceeded 1e6 (singular blow-up).
    SingularGrowth,
    /// |x| fell below 1e-6 on a δ-type half-line (collapse onto the pole).
    SingularCollapse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitEvent {
    pub t: f64,
    pub x: f64,
    pub reason: ExitReason,
}

/// Integrator bookkeeping attached to every trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub integrator: String,
    pub tol: f64,
    pub steps_accepted: u64,
    pub steps_rejected: u64,
    /// max |H(tᵢ) − H(t₀)| / max(|H(t₀)|, 1e-12) over the samples.
    pub max_energy_drift: f64,
    pub exit: Option<ExitEvent>,
}

/// Sampled solution of one initial-value problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Strictly increasing sample times (backward runs are stored reversed so
    /// this invariant holds for them too).
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Hamiltonian per sample.
    pub energy: Vec<f64>,
    pub meta: RunMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodEstimate {
    pub period: f64,
    /// Sample standard error of the per-cycle periods.
    pub uncertainty: f64,
    pub crossings_used: usize,
}

/// Result of evaluating g′ + f·g on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsochronyReport {
    pub isochronous: bool,
    /// The grid mean of g′ + f·g, reported only when constant.
    pub omega0_sq: Option<f64>,
    /// sup |g′ + f·g − mean| over the grid.
    pub max_deviation: f64,
}

/// One constant-energy curve of a phase portrait.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitCurve {
    pub energy: f64,
    /// Closed polyline in the (x, p) plane.
    pub points: Vec<(f64, f64)>,
}

// ---------------------------------------------------------------------------
// Charts and vector fields
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    /// y = (x, ẋ); ẍ = −f ẋ² − g.
    Velocity,
    /// y = (u, u̇) with u = sgn(x)|x|^(1/q); ü = −ω₀²u exactly.
    Linearizing { q: i32 },
    /// y = (x, ẋ); ẍ = −f ẋ − g (linear velocity coupling).
    TypeTwo,
    /// y = (r, ṙ, θ, θ̇) with φ̇ = C₁/(μ sin²θ).
    Radial,
}

fn chart_for(model: &OscillatorModel) -> Chart {
    match model.name() {
        // Odd-reciprocal exponents cross the origin, where the velocity form
        // breaks down; generic exponents live on x > 0 where it is fine.
        ModelName::PowerLaw => match crate::catalog::odd_integer_exponent(model.params()["nu"]) {
            Some(q) => Chart::Linearizing { q },
            None => Chart::Velocity,
        },
        ModelName::Mee => Chart::TypeTwo,
        ModelName::Mlo3d | ModelName::Higgs3d | ModelName::KNonpoly3d => Chart::Radial,
        _ => Chart::Velocity,
    }
}

/// Angular metric coefficient μ(r) of the reduced 3D kinetic term
/// ½μ(θ̇² + sin²θ φ̇²); flat (r²) for MLO, r²/(1+kr²) for the Higgs family.
fn angular_metric(model: &OscillatorModel, r: f64) -> f64 {
    match model.name() {
        ModelName::Mlo3d => r * r,
        ModelName::Higgs3d | ModelName::KNonpoly3d => {
            let k = model.params()["k"];
            r * r / (1.0 + k * r * r)
        }
        _ => unreachable!("angular metric queried for a 1D model"),
    }
}

struct System<'m> {
    model: &'m OscillatorModel,
    chart: Chart,
    dim: usize,
    /// C₁ = μ sin²θ φ̇ for radial runs, 0 otherwise.
    c1: f64,
    /// Forward (+1) or backward (−1): the internal ODE is y′ = sign·F(y),
    /// with y the physical state throughout.
    sign: f64,
    /// Cached parameters for the per-stage hot path.
    w0sq: f64,
    asq: f64,
    kr: f64,
}

impl<'m> System<'m> {
    fn new(model: &'m OscillatorModel, chart: Chart, dim: usize, c1: f64, sign: f64) -> Self {
        let p = model.params();
        let w0sq = p.get("omega0").map(|w| w * w).unwrap_or(0.0);
        let asq = p.get("a").map(|a| a * a).unwrap_or(0.0);
        let kr = match model.name() {
            ModelName::Higgs3d | ModelName::KNonpoly3d => p["k"],
            _ => 0.0,
        };
        System { model, chart, dim, c1, sign, w0sq, asq, kr }
    }

    fn mu(&self, r: f64) -> f64 {
        r * r / (1.0 + self.kr * r * r)
    }

    fn mu_prime(&self, r: f64) -> f64 {
        let d = 1.0 + self.kr * r * r;
        2.0 * r / (d * d)
    }

    fn rhs(&self, y: &[f64; 4], dy: &mut [f64; 4]) {
        let m = self.model;
        match self.chart {
            Chart::Velocity => {
                let (x, v) = (y[0], y[1]);
                dy[0] = v;
                dy[1] = -m.f_coeff(x) * v * v - m.g_restoring(x);
            }
            Chart::TypeTwo => {
                let (x, v) = (y[0], y[1]);
                dy[0] = v;
                dy[1] = -m.f_coeff(x) * v - m.g_restoring(x);
            }
            Chart::Linearizing { .. } => {
                dy[0] = y[1];
                dy[1] = -self.w0sq * y[0];
            }
            Chart::Radial => {
                let (r, rdot, theta, thetadot) = (y[0], y[1], y[2], y[3]);
                let mu = self.mu(r);
                let mu_p = self.mu_prime(r);
                let sin = theta.sin();
                let phidot = if self.c1 == 0.0 { 0.0 } else { self.c1 / (mu * sin * sin) };
                let ang = thetadot * thetadot + sin * sin * phidot * phidot;
                dy[0] = rdot;
                dy[1] = -m.f_coeff(r) * rdot * rdot - m.g_restoring(r)
                    + 0.5 * mu_p / m.mass(r) * ang;
                dy[2] = thetadot;
                dy[3] = -mu_p / mu * rdot * thetadot + sin * theta.cos() * phidot * phidot;
            }
        }
        for d in dy.iter_mut().take(self.dim) {
            *d *= self.sign;
        }
    }

    fn energy(&self, y: &[f64; 4]) -> f64 {
        let m = self.model;
        match self.chart {
            Chart::Velocity => {
                let (x, v) = (y[0], y[1]);
                0.5 * m.mass(x) * v * v + m.potential(x)
            }
            // H pulled back through x = u^q collapses to the harmonic form.
            Chart::Linearizing { .. } => {
                0.5 * self.asq * (y[1] * y[1] + self.w0sq * y[0] * y[0])
            }
            Chart::TypeTwo => {
                let (x, v) = (y[0], y[1]);
                match mee_momentum(m, x, v) {
                    Ok(p) => m.hamiltonian(x, p),
                    Err(_) => f64::NAN,
                }
            }
            Chart::Radial => {
                let (r, rdot, theta, thetadot) = (y[0], y[1], y[2], y[3]);
                let mu = self.mu(r);
                let sin = theta.sin();
                let phidot = if self.c1 == 0.0 { 0.0 } else { self.c1 / (mu * sin * sin) };
                let ang = thetadot * thetadot + sin * sin * phidot * phidot;
                0.5 * m.mass(r) * rdot * rdot + 0.5 * mu * ang + m.potential(r)
            }
        }
    }

    /// Public-facing state at internal phase-space point y.
    fn sample(&self, y: &[f64; 4]) -> State {
        match self.chart {
            Chart::Velocity | Chart::TypeTwo => State::One { x: y[0], v: y[1] },
            Chart::Linearizing { q } => {
                let (u, udot) = (y[0], y[1]);
                State::One {
                    x: u.powi(q),
                    // q − 1 is even, so u^(q−1) = |u|^(q−1) as required.
                    v: q as f64 * u.powi(q - 1) * udot,
                }
            }
            Chart::Radial => {
                let (r, rdot, theta, thetadot) = (y[0], y[1], y[2], y[3]);
                let mu = self.mu(r);
                let sin = theta.sin();
                let phidot = if self.c1 == 0.0 { 0.0 } else { self.c1 / (mu * sin * sin) };
                State::Three { r, rdot, theta, thetadot, phidot }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Dormand–Prince 5(4) with PI step control
// ---------------------------------------------------------------------------

// Stage times are omitted: every system here is autonomous.
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One trial step of length h from y; returns (y5, scaled error norm).
fn dp_step(sys: &System, y: &[f64; 4], h: f64, tol: f64, dim: usize) -> ([f64; 4], f64) {
    let mut k = [[0.0f64; 4]; 7];
    sys.rhs(y, &mut k[0]);
    for stage in 0..6 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(stage + 1) {
            let a = DP_A[stage][j];
            if a != 0.0 {
                for i in 0..dim {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        let mut knext = [0.0f64; 4];
        sys.rhs(&ys, &mut knext);
        k[stage + 1] = knext;
    }
    let mut y5 = *y;
    let mut err = 0.0f64;
    for i in 0..dim {
        let mut s5 = 0.0;
        let mut s4 = 0.0;
        for j in 0..7 {
            s5 += DP_B5[j] * k[j][i];
            s4 += DP_B4[j] * k[j][i];
        }
        y5[i] += h * s5;
        let sc = tol + tol * y[i].abs().max(y5[i].abs());
        let e = h * (s5 - s4) / sc;
        err += e * e;
    }
    (y5, (err / dim as f64).sqrt())
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

/// Integrate the model's equation of motion from t = 0 to t_end (either
/// sign). Samples land on a uniform grid dense enough for period estimation;
/// backward runs are stored with times reversed so `times` stays increasing.
pub fn integrate(
    model: &OscillatorModel,
    initial: State,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory, ClassicalError> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(ClassicalError::InvalidInput(format!(
            "tol = {tol} outside [1e-12, 1e-6]"
        )));
    }
    if t_end == 0.0 || !t_end.is_finite() {
        return Err(ClassicalError::InvalidInput("t_end must be finite and nonzero".into()));
    }
    let chart = chart_for(model);
    let sign = t_end.signum();
    let span = t_end.abs();

    // Internal phase-space vector and the domain piece the orbit lives in.
    let (mut y, dim, c1, x0) = match (chart, initial) {
        (Chart::Radial, State::Three { r, rdot, theta, thetadot, phidot }) => {
            let mu = angular_metric(model, r);
            let c1 = mu * theta.sin().powi(2) * phidot;
            if c1 != 0.0 && (theta <= 0.0 || theta >= std::f64::consts::PI) {
                return Err(ClassicalError::InvalidInput(
                    "polar initial angle with nonzero angular momentum".into(),
                ));
            }
            ([r, rdot, theta, thetadot], 4, c1, r)
        }
        (Chart::Radial, State::One { .. }) => {
            return Err(ClassicalError::InvalidInput(
                "3D model requires a (r, ṙ, θ, θ̇, φ̇) initial state".into(),
            ));
        }
        (Chart::Linearizing { q }, State::One { x, v }) => {
            if x == 0.0 {
                return Err(ClassicalError::InvalidInput(
                    "POWER_LAW initial state at the origin is ambiguous".into(),
                ));
            }
            let qf = q as f64;
            let u = x.signum() * x.abs().powf(1.0 / qf);
            let udot = v * x.abs().powf((1.0 - qf) / qf) / qf;
            ([u, udot, 0.0, 0.0], 2, 0.0, x)
        }
        (_, State::One { x, v }) => ([x, v, 0.0, 0.0], 2, 0.0, x),
        (_, State::Three { .. }) => {
            return Err(ClassicalError::InvalidInput(
                "1D model requires a (x, ẋ) initial state".into(),
            ));
        }
    };

    let domain = model.domain();
    let piece = *domain
        .piece_of(x0)
        .ok_or(ClassicalError::DomainExit { t: 0.0, x: x0 })?;
    let delta_type = matches!(model.name(), ModelName::Delta | ModelName::DeltaIsotonic);

    let sys = System::new(model, chart, dim, c1, sign);

    // Output grid: ~1000 samples per nominal period 2π/ω₀ (tripled for the
    // Higgs-family models whose frequency grows with amplitude), or a flat
    // 4000 samples for the aperiodic δ-type systems.
    let nominal = match model.name() {
        ModelName::Delta | ModelName::DeltaIsotonic => f64::NAN,
        ModelName::Mee => model.params()["omega"],
        _ => model.params()["omega0"],
    };
    let per_period = match model.name() {
        ModelName::Higgs
        | ModelName::KNonpoly
        | ModelName::HiggsIsotonic
        | ModelName::KNonpolyIsotonic
        | ModelName::Higgs3d
        | ModelName::KNonpoly3d => 3000.0,
        _ => 1000.0,
    };
    let mut n_out = if nominal.is_finite() {
        (span / (2.0 * std::f64::consts::PI / nominal) * per_period).ceil() as usize
    } else {
        4000
    };
    n_out = n_out.clamp(400, 2_000_000);
    let dt = span / n_out as f64;

    let mut times = Vec::with_capacity(n_out + 1);
    let mut states = Vec::with_capacity(n_out + 1);
    let mut energy = Vec::with_capacity(n_out + 1);
    let mut meta = RunMeta {
        integrator: "dopri5(4)-pi".to_string(),
        tol,
        steps_accepted: 0,
        steps_rejected: 0,
        max_energy_drift: 0.0,
        exit: None,
    };

    let e0 = sys.energy(&y);
    times.push(0.0);
    states.push(sys.sample(&y));
    energy.push(e0);

    // Margins for boundary-approach detection.
    let lo_margin = if piece.lo.is_finite() { 1e-9 * piece.lo.abs().max(1.0) } else { 0.0 };
    let hi_margin = if piece.hi.is_finite() { 1e-9 * piece.hi.abs().max(1.0) } else { 0.0 };
    let check_state = |q: f64| -> Option<ExitReason> {
        if piece.lo.is_finite() && q < piece.lo + lo_margin {
            return Some(ExitReason::DomainBoundary);
        }
        if piece.hi.is_finite() && q > piece.hi - hi_margin {
            return Some(ExitReason::DomainBoundary);
        }
        if q.abs() > 1e6 {
            return Some(ExitReason::SingularGrowth);
        }
        if delta_type && q.abs() < 1e-6 {
            return Some(ExitReason::SingularCollapse);
        }
        None
    };

    let mut t = 0.0f64; // internal (unsigned) time
    let mut h = dt / 8.0;
    let mut err_old: f64 = 1e-4;
    let mut rejects_in_row = 0u32;
    'outer: for i in 1..=n_out {
        let target = if i == n_out { span } else { i as f64 * dt };
        while t < target {
            let clipped = h.min(target - t);
            let (y_new, err) = dp_step(&sys, &y, clipped, tol, dim);
            let finite = y_new.iter().take(dim).all(|v| v.is_finite());
            if err <= 1.0 && finite {
                t += clipped;
                y = y_new;
                meta.steps_accepted += 1;
                rejects_in_row = 0;
                // PI controller: grow from this step's error with damping
                // from the previous accepted one.
                let fac = 0.9 * err.max(1e-10).powf(-0.14) * err_old.max(1e-10).powf(0.08);
                h = (clipped * fac.clamp(0.2, 5.0)).min(dt * 50.0);
                err_old = err.max(1e-10);
                let xq = match chart {
                    Chart::Linearizing { q } => y[0].powi(q),
                    _ => y[0],
                };
                if let Some(reason) = check_state(xq) {
                    let s = sys.sample(&y);
                    let e = sys.energy(&y);
                    times.push(sign * t);
                    states.push(s);
                    energy.push(e);
                    meta.exit = Some(ExitEvent { t: sign * t, x: xq, reason });
                    break 'outer;
                }
            } else {
                meta.steps_rejected += 1;
                rejects_in_row += 1;
                h = clipped * (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.1, 0.9);
                if rejects_in_row > 60 || h < 1e-13 * t.max(1.0) {
                    return Err(ClassicalError::StepFailure {
                        t: sign * t,
                        reason: "tolerance unreachable (step size underflow)".into(),
                    });
                }
            }
        }
        if meta.exit.is_some() {
            break;
        }
        times.push(sign * t);
        states.push(sys.sample(&y));
        energy.push(sys.energy(&y));
    }

    // Energy drift over the stored samples, against the initial value.
    let scale = e0.abs().max(1e-12);
    meta.max_energy_drift = energy
        .iter()
        .filter(|e| e.is_finite())
        .map(|e| (e - e0).abs() / scale)
        .fold(0.0, f64::max);

    if sign < 0.0 {
        times.reverse();
        states.reverse();
        energy.reverse();
    }
    Ok(Trajectory { times, states, energy, meta })
}

// ---------------------------------------------------------------------------
// measure_period
// ---------------------------------------------------------------------------

/// Root of the cubic Hermite interpolant of (q − level) on [t0, t1], given
/// endpoint values and slopes with opposite-sign endpoint values. Bisection:
/// exact for cubic signals (covers the triple-zero crossings of the
/// odd-power solutions), and equal to linear interpolation plus a curvature
/// correction on generic crossings.
fn hermite_crossing(t0: f64, q0: f64, v0: f64, t1: f64, q1: f64, v1: f64) -> f64 {
    let h = t1 - t0;
    let eval = |u: f64| -> f64 {
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * q0
            + (u3 - 2.0 * u2 + u) * h * v0
            + (-2.0 * u3 + 3.0 * u2) * q1
            + (u3 - u2) * h * v1
    };
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut fa = q0;
    // The Hermite cubic can wiggle; fall back to the linear-interpolation
    // point if it fails to change sign across the bracket.
    if (eval(1.0) > 0.0) == (fa > 0.0) {
        return t0 + h * (q0 / (q0 - q1));
    }
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let fm = eval(mid);
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    t0 + 0.5 * (a + b) * h
}

/// Estimate the oscillation period from mean-crossing times, averaged over
/// all full cycles in the trajectory.
pub fn measure_period(traj: &Trajectory) -> Result<PeriodEstimate, ClassicalError> {
    let n = traj.times.len();
    if n < 8 {
        return Err(ClassicalError::TooFewCycles { found: 0 });
    }
    let q: Vec<f64> = traj.states.iter().map(|s| s.coordinate()).collect();
    let qd: Vec<f64> = traj.states.iter().map(|s| s.coordinate_rate()).collect();

    // Time-weighted mean of the signal (trapezoid / span).
    let span = traj.times[n - 1] - traj.times[0];
    if span <= 0.0 {
        return Err(ClassicalError::InvalidInput("degenerate time span".into()));
    }
    let mut area = 0.0;
    for i in 0..n - 1 {
        area += 0.5 * (q[i] + q[i + 1]) * (traj.times[i + 1] - traj.times[i]);
    }
    let mean = area / span;

    let mut ups: Vec<f64> = Vec::new();
    let mut downs: Vec<f64> = Vec::new();
    for i in 0..n - 1 {
        let s0 = q[i] - mean;
        let s1 = q[i + 1] - mean;
        if s0 == 0.0 || s1 == 0.0 || (s0 > 0.0) == (s1 > 0.0) {
            continue;
        }
        let tc = hermite_crossing(traj.times[i], s0, qd[i], traj.times[i + 1], s1, qd[i + 1]);
        if s1 > 0.0 {
            ups.push(tc);
        } else {
            downs.push(tc);
        }
    }
    if ups.len() + downs.len() < 2 {
        return Err(ClassicalError::NonOscillatory);
    }
    let mut cycles: Vec<f64> = Vec::new();
    for list in [&ups, &downs] {
        for w in list.windows(2) {
            cycles.push(w[1] - w[0]);
        }
    }
    if cycles.len() < 4 {
        return Err(ClassicalError::TooFewCycles { found: cycles.len() });
    }
    let k = cycles.len() as f64;
    let period = cycles.iter().sum::<f64>() / k;
    let var = cycles.iter().map(|c| (c - period) * (c - period)).sum::<f64>() / (k - 1.0);
    Ok(PeriodEstimate {
        period,
        uncertainty: (var / k).sqrt(),
        crossings_used: ups.len() + downs.len(),
    })
}

// ---------------------------------------------------------------------------
// check_isochronicity
// ---------------------------------------------------------------------------

/// Evaluate the isochronicity combination g′(x) + f(x)·g(x) on a uniform
/// grid; the motion is isochronous exactly when it is constant (= ω₀²).
pub fn check_isochronicity(
    f: &Expr,
    g: &Expr,
    x_lo: f64,
    x_hi: f64,
    n: usize,
) -> Result<IsochronyReport, ClassicalError> {
    if n < 100 {
        return Err(ClassicalError::InvalidInput("grid needs n ≥ 100".into()));
    }
    if !(x_lo.is_finite() && x_hi.is_finite()) || x_lo >= x_hi {
        return Err(ClassicalError::InvalidInput("bad grid interval".into()));
    }
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let x = x_lo + (x_hi - x_lo) * i as f64 / (n - 1) as f64;
        let binds = exprdsl::bindings(&[("x", x)]);
        let fv = f.eval(&binds)?;
        let gv = g.eval(&binds)?;
        let (gp, _) = exprdsl::numeric_derivative(g, "x", &binds, DerivOrder::First)?;
        let h = gp + fv * gv;
        if !h.is_finite() {
            return Err(ClassicalError::NonFinite { x });
        }
        values.push(h);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_deviation = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let isochronous = (max - min) < 1e-6 * mean.abs().max(1.0);
    Ok(IsochronyReport {
        isochronous,
        omega0_sq: if isochronous { Some(mean) } else { None },
        max_deviation,
    })
}

// ---------------------------------------------------------------------------
// linearizing_transform
// ---------------------------------------------------------------------------

/// The point transform X(x) = ∫₀ˣ exp(∫₀ᵘ f) du + g₂/g₁ that maps the
/// type-I equation with iso-condition constant g₁ = ω₀² onto Ẍ + ω₀²X = 0.
pub fn linearizing_transform(
    f: &Expr,
    g1: f64,
    g2: f64,
    x: f64,
) -> Result<f64, ClassicalError> {
    if g1 <= 0.0 {
        return Err(ClassicalError::InvalidInput("g1 = ω₀² must be positive".into()));
    }
    let inner = |u: f64| -> f64 {
        quadrature::integrate(
            |s| {
                f.eval(&exprdsl::bindings(&[("x", s)]))
                    .unwrap_or(f64::NAN)
            },
            0.0,
            u,
            1e-12,
        )
        .unwrap_or(f64::NAN)
    };
    let outer = quadrature::integrate(|u| inner(u).exp(), 0.0, x, 1e-10)?;
    Ok(outer + g2 / g1)
}

// ---------------------------------------------------------------------------
// first integrals
// ---------------------------------------------------------------------------

fn sup_relative_drift(series: impl Iterator<Item = f64>, reference: f64) -> f64 {
    let scale = reference.abs().max(1e-12);
    series.map(|v| (v - reference).abs() / scale).fold(0.0, f64::max)
}

/// Residual of the model's registered non-Hamiltonian first integral along a
/// trajectory: the corrected ε for K_NONPOLY_ISOTONIC, and max of the C₁/C₂²
/// drifts for the 3D systems.
pub fn first_integral_residual(
    model: &OscillatorModel,
    traj: &Trajectory,
) -> Result<f64, ClassicalError> {
    match model.name() {
        ModelName::KNonpolyIsotonic => {
            let (_, corrected) = knp_isotonic_variant_residuals(model, traj)?;
            Ok(corrected)
        }
        ModelName::Mlo3d | ModelName::Higgs3d | ModelName::KNonpoly3d => {
            let eval = |s: &State| -> (f64, f64) {
                match *s {
                    State::Three { r, thetadot, theta, phidot, .. } => {
                        let mu = angular_metric(model, r);
                        let sin = theta.sin();
                        let c1 = mu * sin * sin * phidot;
                        let c2sq =
                            mu * mu * (thetadot * thetadot + sin * sin * phidot * phidot);
                        (c1, c2sq)
                    }
                    State::One { .. } => (f64::NAN, f64::NAN),
                }
            };
            let (c1_0, c2_0) = eval(&traj.states[0]);
            let d1 = sup_relative_drift(traj.states.iter().map(|s| eval(s).0), c1_0);
            let d2 = sup_relative_drift(traj.states.iter().map(|s| eval(s).1), c2_0);
            Ok(d1.max(d2))
        }
        other => Err(ClassicalError::NoFirstIntegral(other)),
    }
}

/// Residuals of both candidate forms of the K_NONPOLY_ISOTONIC first
/// integral ε along a trajectory, returned as (printed, corrected):
/// the printed second term is ω₀²x/(1+kx²)², the corrected one
/// ω₀²x²/(1+kx²)². Exactly one of them is conserved; callers report which.
pub fn knp_isotonic_variant_residuals(
    model: &OscillatorModel,
    traj: &Trajectory,
) -> Result<(f64, f64), ClassicalError> {
    if model.name() != ModelName::KNonpolyIsotonic {
        return Err(ClassicalError::NoFirstIntegral(model.name()));
    }
    let w2 = model.params()["omega0"].powi(2);
    let k = model.params()["k"];
    let g = model.params()["g"];
    let eval = |s: &State, corrected: bool| -> f64 {
        let (x, v) = (s.coordinate(), s.coordinate_rate());
        let d = 1.0 + k * x * x;
        let second = if corrected { w2 * x * x } else { w2 * x };
        (v * v + second) / (d * d) + g / (x * x)
    };
    let p0 = eval(&traj.states[0], false);
    let c0 = eval(&traj.states[0], true);
    let printed = sup_relative_drift(traj.states.iter().map(|s| eval(s, false)), p0);
    let corrected = sup_relative_drift(traj.states.iter().map(|s| eval(s, true)), c0);
    Ok((printed, corrected))
}

// ---------------------------------------------------------------------------
// phase_portrait
// ---------------------------------------------------------------------------

/// Sample closed constant-energy curves in the (x, p) plane.
///
/// For type-I models the curve is p = ±√(2m(x)(E − V(x))) between the zeros
/// of that radicand; a zero coming from m → 0 (the exponential-mass tail) is
/// clipped where p² falls below 1e-9 of its peak, which closes the curve to
/// plotting accuracy. MEE orbits are sampled the same way with the roles of
/// x and p exchanged. The radial systems are excluded: their (r, p_r)
/// sections depend on an angular-momentum slice that this operation does not
/// parametrize — sample them through `integrate` instead.
pub fn phase_portrait(
    model: &OscillatorModel,
    energy_levels: &[f64],
    samples_per_orbit: usize,
) -> Result<Vec<OrbitCurve>, ClassicalError> {
    if samples_per_orbit < 8 {
        return Err(ClassicalError::InvalidInput("need ≥ 8 samples per orbit".into()));
    }
    if model.dimension() == 3 {
        return Err(ClassicalError::InvalidInput(
            "phase portraits of radial systems need an angular-momentum slice".into(),
        ));
    }
    let mee = model.name() == ModelName::Mee;
    // Abscissa domain: x for type-I, the momentum half-line for MEE.
    let piece = if mee {
        let om = model.params()["omega"];
        let k = model.params()["k"];
        Interval {
            lo: f64::NEG_INFINITY,
            hi: 1.5 * om * om / k,
            lo_kind: crate::catalog::EndpointKind::Infinite,
            hi_kind: crate::catalog::EndpointKind::Singular,
        }
    } else {
        let domain = model.domain();
        // Portrait the piece containing the best-sampled well: choose the
        // piece whose clipped interior minimizes V.
        let mut best: Option<(Interval, f64)> = None;
        for p in &domain.pieces {
            let (lo, hi) = clip_interval(p);
            let mut vmin = f64::INFINITY;
            for i in 0..2001 {
                let x = lo + (hi - lo) * i as f64 / 2000.0;
                let v = model.potential(x);
                if v.is_finite() {
                    vmin = vmin.min(v);
                }
            }
            if best.as_ref().map(|&(_, bv)| vmin < bv).unwrap_or(true) {
                best = Some((*p, vmin));
            }
        }
        best.expect("domains are non-empty").0
    };
    let (lo, hi) = clip_interval(&piece);
    // For MEE, `mass` and `potential` already act on the momentum axis, so
    // the same radicand gives x²; otherwise it gives p².
    let radicand = |s: f64, e: f64| -> f64 { 2.0 * model.mass(s) * (e - model.potential(s)) };

    let mut curves = Vec::with_capacity(energy_levels.len());
    for &e in energy_levels {
        let ngrid = 40_001usize;
        let grid = |i: usize| lo + (hi - lo) * i as f64 / (ngrid - 1) as f64;
        let mut vals = Vec::with_capacity(ngrid);
        let mut peak = f64::NEG_INFINITY;
        let mut peak_idx = 0usize;
        for i in 0..ngrid {
            let v = radicand(grid(i), e);
            if v.is_finite() && v > peak {
                peak = v;
                peak_idx = i;
            }
            vals.push(v);
        }
        if !(peak > 0.0) {
            return Err(ClassicalError::NoBoundedOrbit { energy: e });
        }
        let floor = 1e-9 * peak;
        // Expand from the peak to both ends of the positive component.
        let refine = |i_in: usize, i_out: usize| -> Result<f64, ClassicalError> {
            // Bisect radicand = 0 between grid(i_in) (positive) and
            // grid(i_out) (negative).
            let (mut a, mut b) = (grid(i_in), grid(i_out));
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if radicand(m, e) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            Ok(0.5 * (a + b))
        };
        let mut i = peak_idx;
        let s_hi;
        loop {
            if i + 1 >= ngrid {
                // Reached the scan edge with the radicand still positive.
                if vals[i] > floor {
                    return Err(ClassicalError::NoBoundedOrbit { energy: e });
                }
                s_hi = grid(i);
                break;
            }
            if !vals[i + 1].is_finite() || vals[i + 1] <= 0.0 {
                s_hi = refine(i, i + 1)?;
                break;
            }
            if vals[i + 1] < floor && vals[i + 1] < vals[i] {
                s_hi = grid(i + 1);
                break;
            }
            i += 1;
        }
        let mut i = peak_idx;
        let s_lo;
        loop {
            if i == 0 {
                if vals[i] > floor {
                    return Err(ClassicalError::NoBoundedOrbit { energy: e });
                }
                s_lo = grid(i);
                break;
            }
            if !vals[i - 1].is_finite() || vals[i - 1] <= 0.0 {
                s_lo = refine(i, i - 1)?;
                break;
            }
            if vals[i - 1] < floor && vals[i - 1] < vals[i] {
                s_lo = grid(i - 1);
                break;
            }
            i -= 1;
        }

        // Upper branch left→right, lower branch right→left: a closed curve.
        let half = samples_per_orbit / 2;
        let mut points = Vec::with_capacity(2 * half);
        for j in 0..half {
            let s = s_lo + (s_hi - s_lo) * j as f64 / (half - 1) as f64;
            let w = radicand(s, e).max(0.0).sqrt();
            points.push(if mee { (w, s) } else { (s, w) });
        }
        for j in (0..half).rev() {
            let s = s_lo + (s_hi - s_lo) * j as f64 / (half - 1) as f64;
            let w = radicand(s, e).max(0.0).sqrt();
            points.push(if mee { (-w, s) } else { (s, -w) });
        }
        curves.push(OrbitCurve { energy: e, points });
    }
    Ok(curves)
}

/// Clip a domain piece to a finite scan window with small insets off
/// singular endpoints.
fn clip_interval(p: &Interval) -> (f64, f64) {
    let lo = if p.lo.is_finite() {
        p.lo + 1e-9 * p.lo.abs().max(1.0)
    } else {
        -1e4
    };
    let hi = if p.hi.is_finite() {
        p.hi - 1e-9 * p.hi.abs().max(1.0)
    } else {
        1e4
    };
    (lo, hi)
}

// ---------------------------------------------------------------------------
// mee_momentum
// ---------------------------------------------------------------------------

/// The MEE conjugate momentum p(x, ẋ) = 3ω²/2k − 27ω⁶/(2k (kẋ + k²x²/3 + 3ω²)²),
/// always ≤ 3ω²/(2k).
pub fn mee_momentum(model: &OscillatorModel, x: f64, xdot: f64) -> Result<f64, ClassicalError> {
    if model.name() != ModelName::Mee {
        return Err(ClassicalError::InvalidInput(format!(
            "mee_momentum applies to MEE, not {}",
            model.name()
        )));
    }
    let om = model.params()["omega"];
    let k = model.params()["k"];
    let leg = k * xdot + k * k * x * x / 3.0 + 3.0 * om * om;
    if leg.abs() < 1e-12 * (3.0 * om * om).max(1.0) {
        return Err(ClassicalError::SingularLeg { x, v: xdot });
    }
    Ok(3.0 * om * om / (2.0 * k) - 27.0 * om.powi(6) / (2.0 * k * leg * leg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{get_model, SolutionConstants};
    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    fn model(name: ModelName, kv: &[(&str, f64)]) -> OscillatorModel {
        get_model(name, &params(kv)).expect("valid model")
    }

    #[test]
    fn harmonic_limit_reproduces_cosine() {
        let m = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.0)]);
        let traj = integrate(&m, State::One { x: 1.0, v: 0.0 }, 20.0 * PI, 1e-12).unwrap();
        let mut worst: f64 = 0.0;
        for (t, s) in traj.times.iter().zip(&traj.states) {
            worst = worst.max((s.coordinate() - t.cos()).abs());
        }
        assert!(worst < 1e-9, "harmonic deviation {worst}");
        assert!(traj.meta.max_energy_drift < 1e-9);
        assert!(traj.meta.exit.is_none());
    }

    #[test]
    fn exponential_run_matches_oracle() {
        let w0 = 0.1f64.sqrt();
        let m = model(ModelName::Exponential, &[("omega0", w0), ("lambda", 1.0)]);
        let c = SolutionConstants::new(0.5, 0.0);
        let (x0, v0) = m.closed_form(&c, 0.0).unwrap();
        let t_end = 10.0 * 2.0 * PI / w0;
        let traj = integrate(&m, State::One { x: x0, v: v0 }, t_end, 1e-12).unwrap();
        let mut sq = 0.0;
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let x_ref = m.closed_form_position(&c, *t).unwrap();
            sq += (s.coordinate() - x_ref).powi(2);
        }
        let rms = (sq / traj.times.len() as f64).sqrt();
        assert!(rms < 1e-6, "RMS {rms}");
    }

    #[test]
    fn delta_blowup_is_flagged_backward_in_time() {
        // λ = −0.25, C₁ = C₂ = 1: x(t) = [−0.25 + (1+t)²]^{−1/2} blows up at
        // t = −1/2; the backward run must stop there with a growth flag.
        let m = model(ModelName::Delta, &[("lambda", -0.25)]);
        let mut c = SolutionConstants::new(0.0, 0.0);
        c.c1 = 1.0;
        c.c2 = 1.0;
        let (x0, v0) = m.closed_form(&c, 0.0).unwrap();
        let traj = integrate(&m, State::One { x: x0, v: v0 }, -0.6, 1e-10).unwrap();
        let exit = traj.meta.exit.expect("blow-up must be flagged");
        assert_eq!(exit.reason, ExitReason::SingularGrowth);
        assert!(
            (exit.t + 0.5).abs() < 0.02,
            "blow-up flagged at {} instead of −0.5",
            exit.t
        );
        // Backward storage keeps times increasing.
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn measured_periods_match_frequency_laws() {
        let harmonic = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.0)]);
        let traj = integrate(&harmonic, State::One { x: 1.0, v: 0.0 }, 16.0 * PI, 1e-12).unwrap();
        let est = measure_period(&traj).unwrap();
        assert!((est.period - 2.0 * PI).abs() < 1e-9, "harmonic period {}", est.period);
        assert!(est.uncertainty < 1e-8 * est.period);

        let mlo = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 1.0)]);
        let c = SolutionConstants::new(1.0, 0.0);
        let (x0, v0) = mlo.closed_form(&c, 0.0).unwrap();
        let traj = integrate(&mlo, State::One { x: x0, v: v0 }, 12.0 * 2.0 * PI * 2.0f64.sqrt(), 1e-12)
            .unwrap();
        let est = measure_period(&traj).unwrap();
        let expect = 2.0 * PI * 2.0f64.sqrt();
        assert!(
            (est.period - expect).abs() < 1e-6 * expect,
            "MLO period {} vs {expect}",
            est.period
        );

        let higgs = model(ModelName::Higgs, &[("omega0", 1.0), ("k", 0.5)]);
        let c = SolutionConstants::new(1.0, 0.0);
        let (x0, v0) = higgs.closed_form(&c, 0.0).unwrap();
        let traj = integrate(&higgs, State::One { x: x0, v: v0 }, 40.0, 1e-12).unwrap();
        let est = measure_period(&traj).unwrap();
        let expect = 2.0 * PI / 2.0f64.sqrt();
        assert!(
            (est.period - expect).abs() < 1e-6 * expect,
            "HIGGS period {} vs {expect}",
            est.period
        );
    }

    #[test]
    fn isochronicity_condition_examples() {
        // f = λ, g = (ω₀²/λ)(1 − e^{−λx}) with λ = 1, ω₀² = 0.1.
        let f = exprdsl::parse("1").unwrap();
        let g = exprdsl::parse("0.1*(1 - exp(-x))").unwrap();
        let rep = check_isochronicity(&f, &g, -1.0, 1.0, 200).unwrap();
        assert!(rep.isochronous);
        assert!((rep.omega0_sq.unwrap() - 0.1).abs() < 1e-9);

        // MLO with λ = 0.1 is not isochronous.
        let f = exprdsl::parse("-0.1*x/(1 + 0.1*x^2)").unwrap();
        let g = exprdsl::parse("x/(1 + 0.1*x^2)").unwrap();
        let rep = check_isochronicity(&f, &g, -1.0, 1.0, 200).unwrap();
        assert!(!rep.isochronous);
        assert!(rep.omega0_sq.is_none());
        assert!(rep.max_deviation > 1e-3);

        // Pure harmonic recovers ω₀² exactly.
        let f = exprdsl::parse("0").unwrap();
        let g = exprdsl::parse("2.25*x").unwrap();
        let rep = check_isochronicity(&f, &g, -2.0, 2.0, 150).unwrap();
        assert!(rep.isochronous);
        assert!((rep.omega0_sq.unwrap() - 2.25).abs() < 1e-10);
    }

    #[test]
    fn linearizing_transform_examples() {
        let f0 = exprdsl::parse("0").unwrap();
        let x = linearizing_transform(&f0, 1.0, 0.0, 0.7).unwrap();
        assert!((x - 0.7).abs() < 1e-10);

        // Constant f = λ: X = (e^{λx} − 1)/λ + g₂/g₁.
        let f = exprdsl::parse("0.5").unwrap();
        let got = linearizing_transform(&f, 2.0, 1.0, 1.3).unwrap();
        let expect = ((0.5f64 * 1.3).exp() - 1.0) / 0.5 + 0.5;
        assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
    }

    #[test]
    fn linearized_coordinate_oscillates_harmonically() {
        // Along an EXPONENTIAL orbit, X(x(t)) obeys Ẍ + ω₀²X = 0 with a
        // constant offset from the g₂ anchoring (the oracle phase absorbs it).
        let w0 = 0.1f64.sqrt();
        let m = model(ModelName::Exponential, &[("omega0", w0), ("lambda", 1.0)]);
        let c = SolutionConstants::new(0.5, 0.4);
        let f = exprdsl::parse("1").unwrap();
        let xt = |t: f64| {
            let x = m.closed_form_position(&c, t).unwrap();
            linearizing_transform(&f, w0 * w0, 0.0, x).unwrap()
        };
        for i in 0..12 {
            let t = 0.3 + i as f64 * 1.7;
            let (acc, _) = crate::numdiff::derivative(&xt, t, DerivOrder::Second);
            let residual = acc + w0 * w0 * xt(t);
            assert!(residual.abs() < 1e-6, "residual {residual} at t = {t}");
        }
    }

    #[test]
    fn knp_isotonic_corrected_integral_is_the_conserved_one() {
        let m = model(
            ModelName::KNonpolyIsotonic,
            &[("omega0", 1.0), ("k", 0.25), ("g", 0.7)],
        );
        // Start between the turning points of a generic bound orbit.
        let traj = integrate(&m, State::One { x: 1.1, v: 0.3 }, 30.0, 1e-12).unwrap();
        let (printed, corrected) = knp_isotonic_variant_residuals(&m, &traj).unwrap();
        assert!(corrected < 1e-8, "corrected form drift {corrected}");
        assert!(printed > 1e-3, "printed form should not be conserved: {printed}");
        assert!((first_integral_residual(&m, &traj).unwrap() - corrected).abs() < 1e-15);
    }

    #[test]
    fn radial_first_integrals_are_conserved() {
        let m = model(ModelName::Mlo3d, &[("omega0", 1.0), ("lambda", 0.4)]);
        let init = State::Three {
            r: 1.2,
            rdot: 0.1,
            theta: 1.1,
            thetadot: 0.2,
            phidot: 0.5,
        };
        let traj = integrate(&m, init, 40.0, 1e-12).unwrap();
        let drift = first_integral_residual(&m, &traj).unwrap();
        assert!(drift < 1e-9, "C1/C2 drift {drift}");
        assert!(traj.meta.max_energy_drift < 1e-9);

        // Planar initial data: C₂² = C₁².
        let planar = State::Three {
            r: 1.2,
            rdot: 0.0,
            theta: PI / 2.0,
            thetadot: 0.0,
            phidot: 0.5,
        };
        let mu = 1.2f64 * 1.2;
        let c1 = mu * planar_phidot(&planar);
        let c2sq = mu * mu * planar_phidot(&planar).powi(2);
        assert!((c2sq - c1 * c1).abs() < 1e-15);
        let traj = integrate(&m, planar, 20.0, 1e-12).unwrap();
        // The orbit stays planar: θ remains π/2.
        for s in &traj.states {
            if let State::Three { theta, .. } = s {
                assert!((theta - PI / 2.0).abs() < 1e-10);
            }
        }
    }

    fn planar_phidot(s: &State) -> f64 {
        match *s {
            State::Three { phidot, .. } => phidot,
            State::One { .. } => unreachable!(),
        }
    }

    #[test]
    fn phase_portraits_lie_on_energy_level_sets() {
        // Harmonic circle.
        let m = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.0)]);
        let curves = phase_portrait(&m, &[0.5], 64).unwrap();
        for &(x, p) in &curves[0].points {
            assert!((x * x + p * p - 1.0).abs() < 1e-8, "({x}, {p}) off the circle");
        }

        // Exponential-mass levels: curves close (the m → 0 tail pinches) and
        // nest with energy.
        let m = model(
            ModelName::Exponential,
            &[("omega0", 0.1f64.sqrt()), ("lambda", 1.0)],
        );
        let curves = phase_portrait(&m, &[0.1, 0.2, 0.3, 0.4], 256).unwrap();
        let mut last_pmax = 0.0;
        for curve in &curves {
            let pmax = curve.points.iter().map(|q| q.1.abs()).fold(0.0, f64::max);
            assert!(pmax > last_pmax, "curves must nest");
            last_pmax = pmax;
            for &(x, p) in &curve.points {
                let h = m.hamiltonian(x, p);
                assert!(
                    (h - curve.energy).abs() < 1e-9 * curve.energy.max(1.0),
                    "H = {h} at ({x}, {p}) for E = {}",
                    curve.energy
                );
            }
            let first = curve.points.first().unwrap();
            let last = curve.points.last().unwrap();
            assert!(
                (first.1 - last.1).abs() < 1e-3 * pmax,
                "curve should close: endpoints {first:?} vs {last:?}"
            );
        }

        // MEE orbit at the energy of (x, p) = (1, 0): p stays below 3ω²/2k.
        let m = model(ModelName::Mee, &[("omega", 1.0), ("k", 1.0)]);
        let e = m.hamiltonian(1.0, 0.0);
        let curves = phase_portrait(&m, &[e], 128).unwrap();
        for &(x, p) in &curves[0].points {
            assert!(p <= 1.5, "momentum bound violated at ({x}, {p})");
            let h = m.hamiltonian(x, p);
            assert!((h - e).abs() < 1e-9);
        }

        // An energy above any barrier has no bounded orbit.
        let m = model(ModelName::Mee, &[("omega", 1.0), ("k", 1.0)]);
        assert!(matches!(
            phase_portrait(&m, &[100.0], 64),
            Err(ClassicalError::NoBoundedOrbit { .. })
        ));
    }

    #[test]
    fn mee_momentum_examples() {
        let m = model(ModelName::Mee, &[("omega", 1.0), ("k", 1.0)]);
        assert_eq!(mee_momentum(&m, 0.0, 0.0).unwrap(), 0.0);
        let p = mee_momentum(&m, 1.0, 0.0).unwrap();
        assert!((p - 0.285).abs() < 1e-15, "p = {p}");
        for i in 0..100 {
            let x = -3.0 + 0.06 * i as f64;
            let v = (i as f64 * 0.9137).sin() * 4.0;
            if let Ok(p) = mee_momentum(&m, x, v) {
                assert!(p < 1.5 + 1e-12);
            }
        }
    }

    #[test]
    fn integrate_rejects_bad_input() {
        let m = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", -0.25)]);
        // Outside the λ < 0 domain |x| < 2.
        assert!(matches!(
            integrate(&m, State::One { x: 2.5, v: 0.0 }, 10.0, 1e-10),
            Err(ClassicalError::DomainExit { .. })
        ));
        assert!(matches!(
            integrate(&m, State::One { x: 0.5, v: 0.0 }, 10.0, 1e-3),
            Err(ClassicalError::InvalidInput(_))
        ));
        let m3 = model(ModelName::Mlo3d, &[("omega0", 1.0), ("lambda", 0.4)]);
        assert!(matches!(
            integrate(&m3, State::One { x: 1.0, v: 0.0 }, 10.0, 1e-10),
            Err(ClassicalError::InvalidInput(_))
        ));
    }

    #[test]
    fn power_law_crosses_the_origin() {
        // ν = −2/3: the oracle x = ((A/a) sin θ)³ passes through x = 0 where
        // the velocity chart is singular; the momentum chart must sail
        // through and track the closed form.
        let m = model(
            ModelName::PowerLaw,
            &[("omega0", 1.0), ("a", 1.3), ("nu", -2.0 / 3.0)],
        );
        let c = SolutionConstants::new(0.9, 0.3);
        let (x0, v0) = m.closed_form(&c, 0.0).unwrap();
        let traj = integrate(&m, State::One { x: x0, v: v0 }, 6.0 * 2.0 * PI, 1e-12).unwrap();
        assert!(traj.meta.exit.is_none(), "run must not exit: {:?}", traj.meta.exit);
        let mut sq = 0.0;
        let mut crossed = false;
        let mut prev = x0;
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let x_ref = m.closed_form_position(&c, *t).unwrap();
            sq += (s.coordinate() - x_ref).powi(2);
            if prev * s.coordinate() < 0.0 {
                crossed = true;
            }
            prev = s.coordinate();
        }
        let rms = (sq / traj.times.len() as f64).sqrt();
        assert!(crossed, "orbit never crossed the origin");
        assert!(rms < 1e-6, "RMS {rms}");

        let est = measure_period(&traj).unwrap();
        assert!(
            (est.period - 2.0 * PI).abs() < 1e-6 * 2.0 * PI,
            "POWER_LAW period {} should be 2π",
            est.period
        );
    }

    #[test]
    fn non_oscillatory_trajectories_are_detected() {
        let m = model(ModelName::Delta, &[("lambda", 0.3)]);
        let mut c = SolutionConstants::new(0.0, 0.0);
        c.c1 = 1.0;
        c.c2 = 0.5;
        let (x0, v0) = m.closed_form(&c, 0.0).unwrap();
        let traj = integrate(&m, State::One { x: x0, v: v0 }, 3.0, 1e-10).unwrap();
        assert!(matches!(
            measure_period(&traj),
            Err(ClassicalError::NonOscillatory) | Err(ClassicalError::TooFewCycles { .. })
        ));
    }
}
