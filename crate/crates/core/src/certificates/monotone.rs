use super::{sample, Certificate};
use crate::error::{Error, Result};
use crate::operators::{ObjectiveValue, OperatorHandle};
use crate::point::Point;
use crate::schemes::Trajectory;

fn validate_solution(op: &OperatorHandle, p: &Point) -> Result<()> {
    let residual = op.resolvent(1.0, p)?.dist(p);
    if residual > 1e-8 {
        return Err(Error::NotASolution(residual));
    }
    Ok(())
}

/// Fejér monotonicity of distances to a solution. Proximal and flow runs
/// check the plain decrease of ||x_n - p||^2; Euler runs check the
/// quasi-Fejér form with the step correction lambda^2 ||w_n||^2.
pub fn certify_fejer(op: &OperatorHandle, traj: &Trajectory, p: &Point) -> Result<Certificate> {
    validate_solution(op, p)?;
    let slack = 1e-9 + 2.0 * traj.flow_error_bound.unwrap_or(0.0);
    let s = traj.samples();
    let mut out = Vec::with_capacity(s.len());
    if traj.provenance.scheme == "euler" {
        for k in 0..s.len() - 1 {
            let lambda = s[k + 1].time - s[k].time;
            let w = s[k]
                .velocity
                .as_ref()
                .ok_or_else(|| Error::NoVelocities("euler run lost velocities".into()))?;
            let lhs = s[k + 1].point.dist(p).powi(2);
            let rhs = s[k].point.dist(p).powi(2) + lambda * lambda * w.norm_sq();
            out.push(sample(format!("n={}", s[k + 1].index), lhs, rhs));
        }
        Certificate::from_samples("fejer_euler", slack, out)
    } else {
        for k in 1..s.len() {
            let lhs = s[k].point.dist(p).powi(2);
            let rhs = s[k - 1].point.dist(p).powi(2);
            out.push(sample(format!("n={}", s[k].index), lhs, rhs));
        }
        Certificate::from_samples("fejer", slack, out)
    }
}

/// Monotone decay of the velocity norms ||y_n|| (proximal) or of the flow
/// difference quotients. Euler runs are rejected: no such monotonicity
/// holds for the forward scheme.
pub fn certify_velocity(traj: &Trajectory) -> Result<Certificate> {
    if traj.provenance.scheme == "euler" {
        return Err(Error::NoVelocities(
            "velocity decay does not hold for euler sequences".into(),
        ));
    }
    let norms: Vec<(usize, f64)> = traj
        .samples()
        .iter()
        .filter_map(|s| s.velocity.as_ref().map(|v| (s.index, v.norm())))
        .collect();
    if norms.len() < 2 {
        return Err(Error::NoVelocities("trajectory stores no velocities".into()));
    }
    let slack = if traj.continuous {
        1e-10 + 2.0 * traj.flow_error_bound.unwrap_or(0.0)
    } else {
        1e-10
    };
    let mut out = Vec::with_capacity(norms.len() - 1);
    for w in norms.windows(2) {
        out.push(sample(format!("n={}", w[1].0), w[1].1, w[0].1));
    }
    Certificate::from_samples("velocity_decay", slack, out)
}

fn objective(op: &OperatorHandle, x: &Point) -> Result<f64> {
    match op.objective_value(x)? {
        ObjectiveValue::Finite(v) => Ok(v),
        ObjectiveValue::PlusInfinity => Err(Error::NoObjective(
            "objective is +infinity on a trajectory point".into(),
        )),
    }
}

/// Value-convergence certificates for subdifferential operators.
///
/// Proximal runs produce three sub-certificates: the descent-rate bound
/// f(x_n) - f(u) <= ||u-x0||^2/(2 sigma_n) - ||u-x_n||^2/(2 sigma_n)
/// - (sigma_n/2)||y_n||^2 at u = P_S x0, the velocity rate
/// ||y_n|| <= d(x0,S)/sigma_n, and plain monotonicity of f.
/// Flow runs check f(u(t)) + ||u(t)-z||^2/(2t) <= f(z) + ||u0-z||^2/(2t)
/// at z = P_S x0 plus monotonicity. Euler runs report the running minimum
/// of f against f* (the liminf regime).
pub fn certify_value_rates(op: &OperatorHandle, traj: &Trajectory) -> Result<Vec<Certificate>> {
    let s = traj.samples();
    let x0 = &s[0].point;
    let u = op.project_solutions(x0)?;
    let f_star = objective(op, &u)?;
    let d0 = op.distance_to_solutions(x0)?;
    let mut certs = Vec::new();

    let monotone = {
        let mut out = Vec::with_capacity(s.len() - 1);
        let mut prev = objective(op, &s[0].point)?;
        for k in 1..s.len() {
            let cur = objective(op, &s[k].point)?;
            out.push(sample(format!("n={}", s[k].index), cur, prev));
            prev = cur;
        }
        let slack = 1e-9
            + traj.flow_error_bound.unwrap_or(0.0) * 4.0 * (1.0 + x0.norm() + u.norm());
        Certificate::from_samples("value_monotone", slack, out)?
    };

    match traj.provenance.scheme.as_str() {
        "euler" => {
            let mut out = Vec::with_capacity(s.len());
            let mut running = f64::INFINITY;
            for smp in s {
                running = running.min(objective(op, &smp.point)?);
                out.push(sample(format!("n={}", smp.index), f_star, running));
            }
            certs.push(Certificate::from_samples("value_euler_running_min", 1e-9, out)?);
        }
        "proximal" | "perturbed_proximal" => {
            let mut guler = Vec::with_capacity(s.len() - 1);
            let mut speed = Vec::with_capacity(s.len() - 1);
            for k in 1..s.len() {
                let sigma = s[k].time;
                let y = s[k]
                    .velocity
                    .as_ref()
                    .ok_or_else(|| Error::NoVelocities("proximal run lost velocities".into()))?;
                let fx = objective(op, &s[k].point)?;
                let rhs = f_star + u.dist(x0).powi(2) / (2.0 * sigma)
                    - u.dist(&s[k].point).powi(2) / (2.0 * sigma)
                    - 0.5 * sigma * y.norm_sq();
                guler.push(sample(format!("n={}", s[k].index), fx, rhs));
                speed.push(sample(format!("n={}", s[k].index), y.norm(), d0 / sigma));
            }
            certs.push(Certificate::from_samples("value_guler", 1e-9, guler)?);
            certs.push(Certificate::from_samples("value_proxspeed", 1e-9, speed)?);
        }
        _ if traj.continuous => {
            let delta = traj.flow_error_bound.unwrap_or(0.0);
            let r = s.iter().map(|p| p.point.norm()).fold(0.0, f64::max);
            let slack = 1e-9 + delta * 4.0 * (1.0 + r + u.norm());
            let mut out = Vec::new();
            for smp in s.iter().skip(1) {
                let t = smp.time;
                let lhs = objective(op, &smp.point)? + smp.point.dist(&u).powi(2) / (2.0 * t);
                let rhs = f_star + x0.dist(&u).powi(2) / (2.0 * t);
                out.push(sample(format!("t={t:.6}"), lhs, rhs));
            }
            certs.push(Certificate::from_samples("value_flow", slack, out)?);
        }
        other => {
            return Err(Error::ValidationError(format!(
                "value rates are not defined for scheme {other}"
            )))
        }
    }
    certs.push(monotone);
    Ok(certs)
}
