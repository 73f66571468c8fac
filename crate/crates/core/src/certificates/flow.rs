use super::{sample, Certificate};
use crate::error::{Error, Result};
use crate::operators::{Kind, OperatorHandle};
use crate::point::Point;
use crate::schemes::{crandall_liggett_point, reference_flow, Trajectory};

/// Feasible flow tolerance for the 2^20 composition budget, with 5% headroom.
fn budget_tol(section_norm: f64, horizon: f64, floor: f64) -> f64 {
    (3.0 * section_norm * horizon / 1024.0 * 1.05).max(floor)
}

/// Chernoff estimate for A = I - T: the solution of v' = -(1/lambda)(I-T)v
/// stays within ||v'(0)|| sqrt(lambda t + (n lambda - t)^2) of T^n x.
/// The flow is realized as the reference flow of I - T rescaled in time.
pub fn certify_chernoff_grid(
    op: &OperatorHandle,
    lambda: f64,
    x: &Point,
    ts: &[f64],
    ns: &[usize],
) -> Result<Certificate> {
    let Kind::Residual { map } = op.kind() else {
        return Err(Error::WrongOperatorKind(format!(
            "chernoff needs a residual operator, got {}",
            op.id()
        )));
    };
    if !(lambda > 0.0) {
        return Err(Error::ValidationError("lambda must be > 0".into()));
    }
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    let speed0 = x.sub(&map.apply(x)?).norm() / lambda;
    let horizon = t_max / lambda;
    let tol = budget_tol(speed0 * lambda, horizon, 1e-3);
    let flow = reference_flow(op, x, horizon, tol)?;
    let slack = 1e-9 + 2.0 * flow.flow_error_bound.unwrap_or(tol);

    let n_max = ns.iter().cloned().max().unwrap_or(0);
    let mut powers = Vec::with_capacity(n_max + 1);
    powers.push(x.clone());
    for _ in 0..n_max {
        let prev = powers.last().expect("non-empty");
        powers.push(map.apply(prev)?);
    }

    let mut out = Vec::new();
    for &t in ts {
        let v_t = flow.interpolate(t / lambda)?;
        for &n in ns {
            let lhs = v_t.dist(&powers[n]);
            let drift = n as f64 * lambda - t;
            let rhs = speed0 * (lambda * t + drift * drift).sqrt();
            out.push(sample(format!("t={t},n={n}"), lhs, rhs));
        }
    }
    Certificate::from_samples("chernoff", slack, out)
}

pub fn certify_chernoff(
    op: &OperatorHandle,
    lambda: f64,
    x: &Point,
    t: f64,
    n: usize,
) -> Result<Certificate> {
    certify_chernoff_grid(op, lambda, x, &[t], &[n])
}

/// Exponential-formula error bound: || (I + (t/m) A)^{-m} x - u(t) || is at
/// most 3 ||A^0 x|| t / sqrt(m). The reference is a flow at a tolerance one
/// order below the tightest bound in the list.
pub fn certify_exponential_formula(
    op: &OperatorHandle,
    x: &Point,
    t: f64,
    m_list: &[usize],
) -> Result<Certificate> {
    if m_list.is_empty() {
        return Err(Error::EmptyInput);
    }
    let a0 = op.minimal_section_norm(x)?;
    let m_max = m_list.iter().cloned().max().expect("non-empty");
    let tightest = 3.0 * a0 * t / (m_max as f64).sqrt();
    // reference one order below the tightest asserted bound; for x in S the
    // flow is constant and any tolerance is exact
    let tol = if tightest > 0.0 { tightest / 10.0 } else { 1.0 };
    let reference = if t > 0.0 {
        reference_flow(op, x, t, tol)?.last().point.clone()
    } else {
        x.clone()
    };
    let slack = 1e-9 + tol;
    let mut out = Vec::new();
    for &m in m_list {
        let um = crandall_liggett_point(op, x, t, m)?;
        let rhs = 3.0 * a0 * t / (m as f64).sqrt();
        out.push(sample(format!("m={m}"), um.dist(&reference), rhs));
    }
    Certificate::from_samples("exponential_formula", slack, out)
}

/// Proximal iterates against the continuous flow: at t = sigma_n,
/// ||x_n - u(sigma_n)|| <= ||x0-z|| + ||u(0)-z|| + ||A^0 z|| sqrt(tau_n)
/// for any z in D(A) (the flow starts at x0, so sigma_n - t vanishes).
pub fn certify_flow_vs_prox(
    op: &OperatorHandle,
    traj: &Trajectory,
    z: &Point,
    flow_tol: f64,
) -> Result<Certificate> {
    if traj.provenance.operator_id != op.id() {
        return Err(Error::OperatorMismatch(
            op.id().to_string(),
            traj.provenance.operator_id.clone(),
        ));
    }
    if traj.provenance.scheme != "proximal" {
        return Err(Error::ValidationError(format!(
            "flow-vs-prox needs a proximal trajectory, got {}",
            traj.provenance.scheme
        )));
    }
    let section_z = op.minimal_section_norm(z)?;
    let s = traj.samples();
    let x0 = &s[0].point;
    let horizon = traj.last().time;
    let flow = reference_flow(op, x0, horizon, flow_tol)?;
    let slack = 1e-9 + 2.0 * flow.flow_error_bound.unwrap_or(flow_tol);
    let base = 2.0 * x0.dist(z);
    let mut tau = 0.0;
    let mut out = Vec::with_capacity(s.len() - 1);
    for k in 1..s.len() {
        let lambda = s[k].time - s[k - 1].time;
        tau += lambda * lambda;
        let u = flow.interpolate(s[k].time)?;
        let lhs = s[k].point.dist(&u);
        let rhs = base + section_z * tau.sqrt();
        out.push(sample(format!("n={}", s[k].index), lhs, rhs));
    }
    Certificate::from_samples("flow_vs_prox", slack, out)
}

/// Bénilan integral-solution residuals: for graph probes [x, y] and sample
/// times s < t the flow must satisfy
/// (||u(t)-x||^2 - ||u(s)-x||^2) / 2 <= ∫_s^t <y, x - u> dtau.
pub fn certify_integral_solution(
    op: &OperatorHandle,
    traj: &Trajectory,
    probes: &[(Point, Point)],
    windows: &[(f64, f64)],
) -> Result<Certificate> {
    if !traj.continuous {
        return Err(Error::ValidationError(
            "integral-solution certificate needs a flow trajectory".into(),
        ));
    }
    // probe validation: either the forward map reproduces y, or the
    // resolvent characterization x = J_1(x + y) holds
    for (x, y) in probes {
        let fwd_ok = op
            .forward_eval(x)
            .map(|f| f.dist(y) <= 1e-8)
            .unwrap_or(false);
        if !fwd_ok {
            let residual = op.resolvent(1.0, &x.add(y))?.dist(x);
            if residual > 1e-8 {
                return Err(Error::InvalidProbe(residual));
            }
        }
    }
    let s = traj.samples();
    let h_max = (1..s.len())
        .map(|k| s[k].time - s[k - 1].time)
        .fold(0.0, f64::max);
    let r_max = s.iter().map(|p| p.point.norm()).fold(0.0, f64::max);
    let a0 = op.minimal_section_norm(&s[0].point)?;
    let delta = traj.flow_error_bound.unwrap_or(0.0);

    let mut out = Vec::new();
    for (pi, (x, y)) in probes.iter().enumerate() {
        for &(t0, t1) in windows {
            if !(t0 < t1) {
                return Err(Error::ValidationError(format!(
                    "window needs s < t, got ({t0}, {t1})"
                )));
            }
            let u0 = traj.interpolate(t0)?;
            let u1 = traj.interpolate(t1)?;
            let lhs = 0.5 * (u1.dist(x).powi(2) - u0.dist(x).powi(2));
            // trapezoid of <y, x - u(tau)> over stored samples in [t0, t1]
            let g = |p: &Point| y.dot(&x.sub(p));
            let mut integral = 0.0;
            let mut prev_t = t0;
            let mut prev_g = g(&u0);
            for smp in s.iter().filter(|smp| smp.time > t0 && smp.time < t1) {
                let cur = g(&smp.point);
                integral += 0.5 * (prev_g + cur) * (smp.time - prev_t);
                prev_t = smp.time;
                prev_g = cur;
            }
            integral += 0.5 * (prev_g + g(&u1)) * (t1 - prev_t);
            out.push(sample(format!("probe={pi},s={t0:.4},t={t1:.4}"), lhs, integral));
        }
    }
    let probe_norm = probes.iter().map(|(_, y)| y.norm()).fold(0.0, f64::max);
    let probe_dist = probes.iter().map(|(x, _)| x.norm()).fold(0.0, f64::max) + r_max;
    let span = windows
        .iter()
        .map(|(a, b)| b - a)
        .fold(0.0, f64::max);
    // trapezoid error for the Lipschitz integrand plus flow-error leakage
    // into both sides
    let slack = 1e-9
        + 0.25 * span * h_max * probe_norm * a0
        + delta * (2.0 * probe_dist + span * probe_norm);
    Certificate::from_samples("integral_solution", slack, out)
}
