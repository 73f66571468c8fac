//! Convergence classification, asymptotic centers via minimum enclosing
//! balls, and the closed-form rotation oracle.

pub mod meb;

pub use meb::{min_enclosing_ball, Ball};

use crate::error::{Error, Result};
use crate::operators::ConvexSet;
use crate::point::Point;
use crate::schemes::{Provenance, Sample, StepSchedule, Trajectory};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Converges { limit: Vec<f64> },
    BoundedNonconvergent,
    NormDivergent,
    Undetermined,
}

impl Verdict {
    pub fn is_convergent(&self) -> bool {
        matches!(self, Verdict::Converges { .. })
    }
}

/// Classification thresholds; every report echoes the values used.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyTolerances {
    /// tail diameter below which the run counts as convergent
    pub tol_conv: f64,
    /// norm growth factor that flags divergence
    pub divergence_factor: f64,
    /// fraction of the run treated as the tail window
    pub tail_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub verdict: Verdict,
    pub average_verdict: Verdict,
    /// max over m <= M of ||x_{n+m} - x_n|| on the final window
    pub asymptotic_regularity: f64,
    pub tolerances: ClassifyTolerances,
    /// distance from the claimed limit to the known solution set
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_distance_to_solutions: Option<f64>,
}

fn tail_window(traj: &Trajectory, fraction: f64) -> &[Sample] {
    let n = traj.len();
    let k = ((n as f64 * fraction).ceil() as usize).clamp(1, n);
    &traj.samples()[n - k..]
}

fn tail_diameter(tail: &[Sample]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..tail.len() {
        for j in i + 1..tail.len() {
            d = d.max(tail[i].point.dist(&tail[j].point));
        }
    }
    d
}

fn classify_samples(traj: &Trajectory, tol: &ClassifyTolerances, scale: f64) -> Verdict {
    let tail = tail_window(traj, 0.1);
    let diameter = tail_diameter(tail);
    if diameter < tol.tol_conv {
        let mut mean = Point::zeros(traj.dim());
        for s in tail {
            mean = mean.add(&s.point);
        }
        let mean = mean.scale(1.0 / tail.len() as f64);
        return Verdict::Converges { limit: mean.coords().to_vec() };
    }
    let final_norm = traj.last().point.norm();
    if final_norm > tol.divergence_factor * scale {
        let window = tail_window(traj, 0.1);
        let increasing = window
            .windows(2)
            .all(|w| w[1].point.norm() >= w[0].point.norm() - 1e-12);
        if increasing {
            return Verdict::NormDivergent;
        }
    }
    let max_norm = traj.samples().iter().map(|s| s.point.norm()).fold(0.0, f64::max);
    if diameter > 10.0 * tol.tol_conv && max_norm <= tol.divergence_factor * scale {
        return Verdict::BoundedNonconvergent;
    }
    Verdict::Undetermined
}

/// Deterministic verdict rules over the tail of the run:
/// convergent when the last 10% of samples has pairwise diameter below
/// tol_conv (default 1e-4 x initial norm scale, limit = tail mean);
/// norm-divergent when the final norm exceeds 10^3 x scale and grows
/// monotonically across the window; bounded-nonconvergent when the tail
/// diameter stays an order of magnitude above tol_conv with bounded norms.
pub fn classify_convergence(
    traj: &Trajectory,
    solutions: Option<&ConvexSet>,
) -> Result<ConvergenceReport> {
    if traj.len() < 100 {
        return Err(Error::TooShort { has: traj.len(), needs: 100 });
    }
    let scale = {
        let n0 = traj.first().point.norm();
        if n0 > 0.0 {
            n0
        } else {
            1.0
        }
    };
    let tolerances = ClassifyTolerances {
        tol_conv: 1e-4 * scale,
        divergence_factor: 1e3,
        tail_fraction: 0.1,
    };
    let verdict = classify_samples(traj, &tolerances, scale);
    let averaged = if traj.continuous {
        traj.average_continuous()?
    } else {
        traj.average_discrete()
    };
    let average_verdict = classify_samples(&averaged, &tolerances, scale);

    let tail = tail_window(traj, 0.1);
    let m_max = (tail.len() / 2).clamp(1, 20);
    let mut regularity: f64 = 0.0;
    for i in 0..tail.len() {
        for m in 1..=m_max.min(tail.len() - 1 - i) {
            regularity = regularity.max(tail[i].point.dist(&tail[i + m].point));
        }
    }

    let limit_distance_to_solutions = match (&verdict, solutions) {
        (Verdict::Converges { limit }, Some(set)) => {
            Some(set.distance(&Point::new(limit.clone())?))
        }
        _ => None,
    };

    Ok(ConvergenceReport {
        verdict,
        average_verdict,
        asymptotic_regularity: regularity,
        tolerances,
        limit_distance_to_solutions,
    })
}

/// Chebyshev center of the trajectory tail: the finite-window surrogate of
/// the minimizer of limsup ||x_n - y||^2.
pub fn asymptotic_center(traj: &Trajectory, tail_fraction: f64) -> Result<Point> {
    if traj.len() < 10 {
        return Err(Error::TooShort { has: traj.len(), needs: 10 });
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::ValidationError(format!(
            "tail_fraction must be in (0, 1], got {tail_fraction}"
        )));
    }
    let tail = tail_window(traj, tail_fraction);
    let pts: Vec<Point> = tail.iter().map(|s| s.point.clone()).collect();
    Ok(min_enclosing_ball(&pts)?.center)
}

/// Independent minimum-enclosing-ball oracle for small instances (n <= 20):
/// enumerate every support subset of size <= d+1, place the smallest sphere
/// through it (min-norm least-squares circumcenter, which stays in the
/// subset's affine hull), and take the smallest one that covers all points.
/// The true minimum ball is the circumball of its own support set, so it is
/// always among the candidates. Used only as a cross-check oracle; the
/// production path is `min_enclosing_ball`.
pub fn brute_force_meb_radius(points: &[Point]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if points.len() > 20 {
        return Err(Error::ValidationError(
            "brute-force oracle is limited to 20 points".into(),
        ));
    }
    let dim = points[0].dim();
    let n = points.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > dim + 1 {
            continue;
        }
        let subset: Vec<&Point> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &points[i]).collect();
        let p0 = subset[0];
        let center = if size == 1 {
            p0.clone()
        } else {
            let rows = size - 1;
            let mut a = nalgebra::DMatrix::zeros(rows, dim);
            let mut rhs = nalgebra::DVector::zeros(rows);
            for (r, p) in subset[1..].iter().enumerate() {
                let d = p.sub(p0);
                for c in 0..dim {
                    a[(r, c)] = 2.0 * d.coords()[c];
                }
                rhs[r] = d.norm_sq();
            }
            let svd = a.svd(true, true);
            match svd.solve(&rhs, 1e-10) {
                Ok(x) => p0.add(&Point::from_dvector(&x)),
                Err(_) => continue,
            }
        };
        let radius = subset.iter().map(|p| p.dist(&center)).fold(0.0, f64::max);
        if radius < best && points.iter().all(|p| p.dist(&center) <= radius + 1e-9) {
            best = radius;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationScheme {
    Proximal,
    Euler,
}

/// Closed-form orbit of the plane-rotation operator (A = -R, R the
/// counterclockwise pi/2 rotation): per step the proximal radius contracts
/// by (1+lambda^2)^{-1/2} and the Euler radius grows by (1+lambda^2)^{1/2};
/// both advance the angle by arctan(lambda).
pub fn rotation_closed_form(
    r0: f64,
    theta0: f64,
    schedule: &StepSchedule,
    n: usize,
    scheme: RotationScheme,
) -> Result<Trajectory> {
    let mut samples = Vec::with_capacity(n + 1);
    let mut r = r0;
    let mut theta = theta0;
    let mut sigma = 0.0;
    let cart = |r: f64, th: f64| Point::new(vec![r * th.cos(), r * th.sin()]).expect("finite");
    samples.push(Sample { index: 0, time: 0.0, point: cart(r, theta), velocity: None });
    for k in 1..=n {
        let lambda = schedule.step(k)?;
        let factor = (1.0 + lambda * lambda).sqrt();
        match scheme {
            RotationScheme::Proximal => r /= factor,
            RotationScheme::Euler => r *= factor,
        }
        theta += lambda.atan();
        sigma += lambda;
        let point = cart(r, theta);
        let velocity = samples
            .last()
            .map(|prev: &Sample| point.sub(&prev.point).scale(1.0 / lambda));
        samples.push(Sample { index: k, time: sigma, point, velocity });
    }
    Trajectory::new(
        samples,
        Provenance {
            scheme: format!("rotation_closed_form({scheme:?})"),
            operator_id: "rotation-oracle".into(),
            schedule_id: schedule.id().to_string(),
            seed: None,
        },
        false,
    )
}

#[cfg(test)]
mod tests;
