use super::{sample, Certificate};
use crate::error::{Error, Result};
use crate::operators::{Kind, OperatorHandle};
use crate::point::Point;
use crate::schemes::Trajectory;

/// Index pairs on which the two-sequence inequality is evaluated.
#[derive(Debug, Clone, Copy)]
pub enum PairGrid {
    /// k x k log-spaced indices into each trajectory (default 10 x 10).
    LogSpaced(usize),
    Full,
}

impl Default for PairGrid {
    fn default() -> Self {
        PairGrid::LogSpaced(10)
    }
}

fn grid_indices(len: usize, grid: PairGrid) -> Vec<usize> {
    match grid {
        PairGrid::Full => (0..len).collect(),
        PairGrid::LogSpaced(k) => {
            let mut idx: Vec<usize> = (0..k)
                .map(|i| {
                    let f = (len as f64 - 1.0).powf(i as f64 / (k.max(2) - 1) as f64);
                    f.round() as usize
                })
                .collect();
            idx.push(len - 1);
            idx.sort_unstable();
            idx.dedup();
            idx
        }
    }
}

/// Cumulative (sigma, tau) recovered from sample times.
fn sums(traj: &Trajectory) -> (Vec<f64>, Vec<f64>) {
    let times: Vec<f64> = traj.times().collect();
    let mut tau = vec![0.0; times.len()];
    for k in 1..times.len() {
        let lambda = times[k] - times[k - 1];
        tau[k] = tau[k - 1] + lambda * lambda;
    }
    (times, tau)
}

fn check_scheme(traj: &Trajectory, expected: &str) -> Result<()> {
    if traj.provenance.scheme != expected {
        return Err(Error::ValidationError(format!(
            "certificate needs a {expected} trajectory, got {}",
            traj.provenance.scheme
        )));
    }
    Ok(())
}

fn check_operator(op: &OperatorHandle, traj: &Trajectory) -> Result<()> {
    if traj.provenance.operator_id != op.id() {
        return Err(Error::OperatorMismatch(
            op.id().to_string(),
            traj.provenance.operator_id.clone(),
        ));
    }
    Ok(())
}

fn two_sequence_bound(
    name: &str,
    traj_a: &Trajectory,
    traj_b: &Trajectory,
    u: &Point,
    section_norm: f64,
    grid: PairGrid,
) -> Result<Certificate> {
    let (sigma_a, tau_a) = sums(traj_a);
    let (sigma_b, tau_b) = sums(traj_b);
    let base = traj_a.first().point.dist(u) + traj_b.first().point.dist(u);
    let mut out = Vec::new();
    for &k in &grid_indices(traj_a.len(), grid) {
        for &l in &grid_indices(traj_b.len(), grid) {
            let lhs = traj_a.samples()[k].point.dist(&traj_b.samples()[l].point);
            let spread = (sigma_a[k] - sigma_b[l]).powi(2) + tau_a[k] + tau_b[l];
            let rhs = base + section_norm * spread.sqrt();
            out.push(sample(format!("k={k},l={l}"), lhs, rhs));
        }
    }
    Certificate::from_samples(name, 1e-9, out)
}

/// Distance between two proximal sequences of the same operator against the
/// a-priori bound ||x0-u|| + ||x̂0-u|| + ||A^0 u|| sqrt((sigma_k-sigma_l)^2
/// + tau_k + tau_l).
pub fn certify_kobayashi(
    op: &OperatorHandle,
    traj_a: &Trajectory,
    traj_b: &Trajectory,
    u: &Point,
    grid: PairGrid,
) -> Result<Certificate> {
    check_operator(op, traj_a)?;
    check_operator(op, traj_b)?;
    check_scheme(traj_a, "proximal")?;
    check_scheme(traj_b, "proximal")?;
    let section_norm = op.minimal_section_norm(u)?;
    two_sequence_bound("kobayashi", traj_a, traj_b, u, section_norm, grid)
}

/// The Euler-scheme variant for A = I - T, where the section norm is
/// replaced by ||u - T u|| and u may be any point.
pub fn certify_euler_kobayashi(
    op: &OperatorHandle,
    traj_a: &Trajectory,
    traj_b: &Trajectory,
    u: &Point,
    grid: PairGrid,
) -> Result<Certificate> {
    let Kind::Residual { .. } = op.kind() else {
        return Err(Error::WrongOperatorKind(format!(
            "euler kobayashi needs a residual operator, got {}",
            op.id()
        )));
    };
    check_operator(op, traj_a)?;
    check_operator(op, traj_b)?;
    check_scheme(traj_a, "euler")?;
    check_scheme(traj_b, "euler")?;
    let residual_norm = op.forward_eval(u)?.norm();
    two_sequence_bound("euler_kobayashi", traj_a, traj_b, u, residual_norm, grid)
}
