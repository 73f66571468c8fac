use super::schedule::StepSchedule;
use super::trajectory::{Provenance, Sample, Trajectory};
use crate::error::{Error, Result};
use crate::operators::OperatorHandle;
use crate::point::Point;

/// Hard cap on stored samples per run (memory guard).
pub const MAX_STEPS: usize = 1_000_000;
/// Resolvent-composition budget for the exponential-formula reference flow.
pub const FLOW_MAX_M: usize = 1 << 20;

fn provenance(scheme: &str, op: &OperatorHandle, schedule_id: &str) -> Provenance {
    Provenance {
        scheme: scheme.to_string(),
        operator_id: op.id().to_string(),
        schedule_id: schedule_id.to_string(),
        seed: None,
    }
}

fn check_steps(n_steps: usize) -> Result<()> {
    if n_steps == 0 {
        return Err(Error::ValidationError("n_steps must be >= 1".into()));
    }
    if n_steps > MAX_STEPS {
        return Err(Error::ValidationError(format!(
            "n_steps {n_steps} exceeds the memory budget of {MAX_STEPS} samples"
        )));
    }
    Ok(())
}

/// Proximal sequence x_n = J_{lambda_n} x_{n-1}, sampled at times sigma_n
/// with velocities y_n = (x_n - x_{n-1}) / lambda_n.
pub fn run_proximal(
    op: &OperatorHandle,
    x0: &Point,
    schedule: &StepSchedule,
    n_steps: usize,
) -> Result<Trajectory> {
    check_steps(n_steps)?;
    // constant schedules keep one prefactorized resolvent for the whole run
    let fixed = match schedule.kind() {
        crate::schemes::schedule::ScheduleKind::Constant { c } => Some(op.resolvent_map(*c)?),
        _ => None,
    };
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(Sample { index: 0, time: 0.0, point: x0.clone(), velocity: None });
    let mut x = x0.clone();
    let mut sigma = 0.0;
    for n in 1..=n_steps {
        let lambda = schedule.step(n)?;
        let next = match &fixed {
            Some(res) => res.apply(&x)?,
            None => op.resolvent(lambda, &x)?,
        };
        let velocity = next.sub(&x).scale(1.0 / lambda);
        sigma += lambda;
        samples.push(Sample { index: n, time: sigma, point: next.clone(), velocity: Some(velocity) });
        x = next;
    }
    Trajectory::new(samples, provenance("proximal", op, schedule.id()), false)
}

/// Euler sequence z_n = z_{n-1} - lambda_n A z_{n-1}; the velocity stored at
/// sample n is w_n = (z_{n+1} - z_n) / lambda_{n+1} = -A z_n.
pub fn run_euler(
    op: &OperatorHandle,
    z0: &Point,
    schedule: &StepSchedule,
    n_steps: usize,
) -> Result<Trajectory> {
    check_steps(n_steps)?;
    if !op.flags().forward_capable {
        return Err(Error::NotForwardCapable(format!(
            "euler scheme requires a forward-capable operator, got {}",
            op.id()
        )));
    }
    let mut raw: Vec<(Point, Point)> = Vec::with_capacity(n_steps + 1); // (z_n, -A z_n)
    let mut z = z0.clone();
    for n in 1..=n_steps {
        let w = op.forward_eval(&z)?.neg();
        raw.push((z.clone(), w.clone()));
        let lambda = schedule.step(n)?;
        z = z.axpy(lambda, &w);
    }
    let final_w = op.forward_eval(&z)?.neg();
    raw.push((z, final_w));

    let mut samples = Vec::with_capacity(raw.len());
    let mut sigma = 0.0;
    for (n, (point, w)) in raw.into_iter().enumerate() {
        if n > 0 {
            sigma += schedule.step(n)?;
        }
        samples.push(Sample { index: n, time: sigma, point, velocity: Some(w) });
    }
    Trajectory::new(samples, provenance("euler", op, schedule.id()), false)
}

/// u_m(t) = (I + (t/m) A)^{-m} x.
pub fn crandall_liggett_point(
    op: &OperatorHandle,
    x: &Point,
    t: f64,
    m: usize,
) -> Result<Point> {
    if m == 0 {
        return Err(Error::ValidationError("m must be >= 1".into()));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::ValidationError(format!("t must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(x.clone());
    }
    let res = op.resolvent_map(t / m as f64)?;
    let mut u = x.clone();
    for _ in 0..m {
        u = res.apply(&u)?;
    }
    Ok(u)
}

/// Classical RK4 integration of du/dt = -A_lambda(u) with a fixed step.
/// The step is rejected when dt * (2/lambda) > 1: A_lambda is Lipschitz with
/// constant at most 2/lambda and larger steps leave the stable regime.
pub fn run_yosida_flow(
    op: &OperatorHandle,
    x0: &Point,
    lambda: f64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(lambda > 0.0) {
        return Err(Error::ValidationError("lambda must be > 0".into()));
    }
    if !(dt > 0.0) || !(t_end > 0.0) {
        return Err(Error::ValidationError("dt and t_end must be > 0".into()));
    }
    let stiffness = dt * 2.0 / lambda;
    if stiffness > 1.0 {
        return Err(Error::StepTooLarge(stiffness));
    }
    let n_full = (t_end / dt + 1e-12).floor() as usize;
    let rem = t_end - n_full as f64 * dt;
    let total = n_full + if rem > 1e-12 { 1 } else { 0 };
    if total > MAX_STEPS {
        return Err(Error::ValidationError(format!(
            "{total} integration steps exceed the memory budget of {MAX_STEPS}"
        )));
    }

    let res = op.resolvent_map(lambda)?;
    let f = |u: &Point| -> Result<Point> {
        let j = res.apply(u)?;
        Ok(j.sub(u).scale(1.0 / lambda)) // -A_lambda(u)
    };

    let mut samples = Vec::with_capacity(total + 1);
    let mut u = x0.clone();
    samples.push(Sample { index: 0, time: 0.0, point: u.clone(), velocity: Some(f(&u)?) });
    for k in 1..=total {
        let h = if k <= n_full { dt } else { rem };
        let t = if k <= n_full { k as f64 * dt } else { t_end };
        let k1 = f(&u)?;
        let k2 = f(&u.axpy(0.5 * h, &k1))?;
        let k3 = f(&u.axpy(0.5 * h, &k2))?;
        let k4 = f(&u.axpy(h, &k3))?;
        let incr = k1.add(&k4).add(&k2.add(&k3).scale(2.0)).scale(h / 6.0);
        u = u.add(&incr);
        samples.push(Sample { index: k, time: t, point: u.clone(), velocity: Some(f(&u)?) });
    }
    Trajectory::new(
        samples,
        provenance("yosida_flow", op, &format!("lambda={lambda},dt={dt}")),
        true,
    )
}

/// Target number of stored samples for exponential-formula flows.
const FLOW_SAMPLE_TARGET: usize = 2048;

fn exponential_flow(
    op: &OperatorHandle,
    x0: &Point,
    t_end: f64,
    tol: f64,
    m_cap: usize,
) -> Result<Trajectory> {
    if !(tol > 0.0) {
        return Err(Error::ValidationError("tol must be > 0".into()));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::ValidationError(format!("t_end must be >= 0, got {t_end}")));
    }
    let a0 = op.minimal_section_norm(x0)?;
    if t_end == 0.0 {
        let samples = vec![Sample { index: 0, time: 0.0, point: x0.clone(), velocity: None }];
        let mut traj =
            Trajectory::new(samples, provenance("reference_flow", op, "t=0"), true)?;
        traj.flow_error_bound = Some(0.0);
        return Ok(traj);
    }
    let bound = |m: usize| 3.0 * a0 * t_end / (m as f64).sqrt();
    let mut m = 64usize;
    while bound(m) > tol {
        if m >= m_cap {
            if m_cap < FLOW_MAX_M {
                // capped caller accepts the achieved bound
                break;
            }
            return Err(Error::BudgetExceeded);
        }
        m *= 2;
    }

    // One constant-step proximal pass: the k-th iterate is exactly the
    // Crandall-Liggett point (I + (t_k/k) A)^{-k} x0 at t_k = k * (t_end/m),
    // and its own bound 3*a0*t_k/sqrt(k) is no larger than the one at t_end.
    let lambda = t_end / m as f64;
    let stride = m.div_ceil(FLOW_SAMPLE_TARGET).max(1);
    let res = op.resolvent_map(lambda)?;
    let mut samples = Vec::with_capacity(m / stride + 2);
    samples.push(Sample { index: 0, time: 0.0, point: x0.clone(), velocity: None });
    let mut u = x0.clone();
    for k in 1..=m {
        let next = res.apply(&u)?;
        if k % stride == 0 || k == m {
            let velocity = next.sub(&u).scale(1.0 / lambda);
            samples.push(Sample {
                index: k,
                time: k as f64 * lambda,
                point: next.clone(),
                velocity: Some(velocity),
            });
        }
        u = next;
    }
    let mut traj = Trajectory::new(
        samples,
        provenance("reference_flow", op, &format!("m={m},tol={tol}")),
        true,
    )?;
    traj.flow_error_bound = Some(bound(m));
    Ok(traj)
}

/// The trajectory of du/dt in -A u from x0, realized by the exponential
/// formula with m chosen so that the a-priori bound 3 ||A^0 x0|| t / sqrt(m)
/// is below `tol` (m doubled from 64, hard budget 2^20).
///
/// This is the oracle flow used by all flow-comparing certificates; its
/// certified error bound is recorded on the trajectory.
pub fn reference_flow(
    op: &OperatorHandle,
    x0: &Point,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory> {
    exponential_flow(op, x0, t_end, tol, FLOW_MAX_M)
}

/// Like `reference_flow` but saturates the composition count at `m_cap`
/// instead of failing; the achieved bound is recorded on the trajectory.
pub fn reference_flow_capped(
    op: &OperatorHandle,
    x0: &Point,
    t_end: f64,
    tol: f64,
    m_cap: usize,
) -> Result<Trajectory> {
    exponential_flow(op, x0, t_end, tol, m_cap.min(FLOW_MAX_M))
}

/// Perturbations of the proximal iteration.
#[derive(Debug, Clone)]
pub enum Perturbation {
    /// y_n = J_{lambda_n}(y_{n-1} - phi_n)
    Additive(Vec<Point>),
    /// y_n = J_{lambda_n/(1+eps_n)}(y_{n-1}/(1+eps_n)) — the exact reduction
    /// of y_{n-1} - y_n in lambda_n A y_n + eps_n y_n.
    Tikhonov(Vec<f64>),
}

pub fn run_perturbed_proximal(
    op: &OperatorHandle,
    x0: &Point,
    schedule: &StepSchedule,
    perturbation: &Perturbation,
    n_steps: usize,
) -> Result<Trajectory> {
    check_steps(n_steps)?;
    let available = match perturbation {
        Perturbation::Additive(phi) => phi.len(),
        Perturbation::Tikhonov(eps) => eps.len(),
    };
    if available < n_steps {
        return Err(Error::PerturbationTooShort { needed: n_steps, available });
    }
    if let Perturbation::Tikhonov(eps) = perturbation {
        if eps.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::ValidationError(
                "tikhonov factors must be finite and >= 0".into(),
            ));
        }
    }
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(Sample { index: 0, time: 0.0, point: x0.clone(), velocity: None });
    let mut y = x0.clone();
    let mut sigma = 0.0;
    for n in 1..=n_steps {
        let lambda = schedule.step(n)?;
        let next = match perturbation {
            Perturbation::Additive(phi) => op.resolvent(lambda, &y.sub(&phi[n - 1]))?,
            Perturbation::Tikhonov(eps) => {
                let scale = 1.0 / (1.0 + eps[n - 1]);
                op.resolvent(lambda * scale, &y.scale(scale))?
            }
        };
        let velocity = next.sub(&y).scale(1.0 / lambda);
        sigma += lambda;
        samples.push(Sample { index: n, time: sigma, point: next.clone(), velocity: Some(velocity) });
        y = next;
    }
    Trajectory::new(samples, provenance("perturbed_proximal", op, schedule.id()), false)
}

/// Time-dependent Tikhonov factor epsilon(t).
#[derive(Debug, Clone)]
pub enum EpsFunction {
    Constant(f64),
    /// a / (b + t)^p
    PowerDecay { a: f64, b: f64, p: f64 },
}

impl EpsFunction {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            EpsFunction::Constant(c) => c.is_finite() && *c >= 0.0,
            EpsFunction::PowerDecay { a, b, p } => {
                a.is_finite() && *a >= 0.0 && *b > 0.0 && p.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ValidationError("malformed epsilon function".into()))
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            EpsFunction::Constant(c) => *c,
            EpsFunction::PowerDecay { a, b, p } => a / (b + t).powf(*p),
        }
    }
}

/// Implicit discretization of -dv/dt in A v + eps(t) v:
/// v_{k+1} = J_{dt/(1+dt eps_k)} ( v_k / (1+dt eps_k) ), eps sampled at step
/// midpoints. When `dt` is absent it defaults to min(0.1, 1/(10 eps(0))).
pub fn run_tikhonov_flow(
    op: &OperatorHandle,
    x0: &Point,
    eps: &EpsFunction,
    t_end: f64,
    dt: Option<f64>,
) -> Result<Trajectory> {
    eps.validate()?;
    if !(t_end > 0.0) {
        return Err(Error::ValidationError("t_end must be > 0".into()));
    }
    let dt = match dt {
        Some(dt) if dt > 0.0 => dt,
        Some(dt) => return Err(Error::ValidationError(format!("dt must be > 0, got {dt}"))),
        None => {
            let e0 = eps.eval(0.0);
            if e0 > 0.0 {
                (1.0 / (10.0 * e0)).min(0.1)
            } else {
                0.1
            }
        }
    };
    let n_full = (t_end / dt + 1e-12).floor() as usize;
    let rem = t_end - n_full as f64 * dt;
    let total = n_full + if rem > 1e-12 { 1 } else { 0 };
    if total > MAX_STEPS {
        return Err(Error::ValidationError(format!(
            "{total} steps exceed the memory budget of {MAX_STEPS}"
        )));
    }
    let mut samples = Vec::with_capacity(total + 1);
    samples.push(Sample { index: 0, time: 0.0, point: x0.clone(), velocity: None });
    let mut v = x0.clone();
    for k in 1..=total {
        let (h, t) = if k <= n_full {
            (dt, k as f64 * dt)
        } else {
            (rem, t_end)
        };
        let e = eps.eval(t - 0.5 * h);
        let scale = 1.0 / (1.0 + h * e);
        let next = op.resolvent(h * scale, &v.scale(scale))?;
        let velocity = next.sub(&v).scale(1.0 / h);
        samples.push(Sample { index: k, time: t, point: next.clone(), velocity: Some(velocity) });
        v = next;
    }
    Trajectory::new(
        samples,
        provenance("tikhonov_flow", op, &format!("dt={dt},eps={eps:?}")),
        true,
    )
}
