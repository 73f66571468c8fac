use crate::error::{Error, Result};
use crate::operators::OperatorHandle;
use crate::schemes::{reference_flow_capped, StepSchedule, Trajectory};

/// An evolution system that can be relaunched from arbitrary states, used to
/// measure how far a trajectory drifts from the system's own orbits.
#[derive(Debug, Clone)]
pub enum SystemDescriptor {
    /// The continuous flow, launched by the exponential formula. The
    /// per-launch tolerance is max(floor_tol, rel_tol * ||A^0 z|| * h_max)
    /// and the composition count saturates at m_cap: the relative component
    /// keeps the launch cost flat at (3/rel_tol)^2 steps while the actual
    /// accuracy of the formula stays far below the certified bound on the
    /// smooth catalog operators.
    ReferenceFlow {
        rel_tol: f64,
        floor_tol: f64,
        m_cap: usize,
    },
    /// The proximal evolution system on the global clock of `schedule`:
    /// restarting at time t applies the resolvents with indices after
    /// nu(t) = max{ n : sigma_n <= t }.
    Proximal { schedule: StepSchedule },
}

impl Default for SystemDescriptor {
    fn default() -> Self {
        SystemDescriptor::ReferenceFlow {
            rel_tol: 0.02,
            floor_tol: 1e-4,
            m_cap: 1 << 18,
        }
    }
}

/// gap(t) = max over h in h_grid of || u(t+h) - V(t+h, t) u(t) ||, where V
/// relaunches the named system from the trajectory point u(t). Vanishing
/// gaps as t grows certify that u is an almost-orbit of V.
pub fn almost_orbit_gap(
    op: &OperatorHandle,
    traj: &Trajectory,
    system: &SystemDescriptor,
    t_grid: &[f64],
    h_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if t_grid.is_empty() || h_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let h_max = h_grid.iter().cloned().fold(0.0, f64::max);
    if h_grid.iter().any(|&h| h < 0.0) {
        return Err(Error::ValidationError("h_grid entries must be >= 0".into()));
    }
    let mut series = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let z = traj.interpolate(t)?;
        // launch the system at u(t)
        let relaunched: Box<dyn Fn(f64) -> Result<crate::point::Point>> = match system {
            SystemDescriptor::ReferenceFlow { rel_tol, floor_tol, m_cap } => {
                let a0 = op.minimal_section_norm(&z)?;
                let tol = (rel_tol * a0 * h_max).max(*floor_tol);
                let flow = reference_flow_capped(op, &z, h_max, tol, *m_cap)?;
                Box::new(move |h: f64| flow.interpolate(h))
            }
            SystemDescriptor::Proximal { schedule } => {
                // walk the global clock to nu(t), then iterate resolvents,
                // recording the state at each sigma_n in (t, t + h_max]
                let mut sigma = 0.0;
                let mut n = 0usize;
                loop {
                    let lambda = schedule.step(n + 1)?;
                    if sigma + lambda > t + 1e-12 {
                        break;
                    }
                    sigma += lambda;
                    n += 1;
                }
                let mut states = vec![(0.0f64, z.clone())];
                let mut x = z.clone();
                while sigma <= t + h_max + 1e-12 {
                    n += 1;
                    let lambda = schedule.step(n)?;
                    sigma += lambda;
                    if sigma > t + h_max + 1e-12 {
                        break;
                    }
                    x = op.resolvent(lambda, &x)?;
                    states.push((sigma - t, x.clone()));
                }
                Box::new(move |h: f64| {
                    let state = states
                        .iter()
                        .rev()
                        .find(|(dt, _)| *dt <= h + 1e-12)
                        .expect("starts at 0");
                    Ok(state.1.clone())
                })
            }
        };
        let mut gap: f64 = 0.0;
        for &h in h_grid {
            let ours = traj.interpolate(t + h)?;
            let theirs = relaunched(h)?;
            gap = gap.max(ours.dist(&theirs));
        }
        series.push((t, gap));
    }
    Ok(series)
}
