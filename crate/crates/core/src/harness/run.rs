//! Experiment execution: build the configured operator and scheme, run the
//! trajectory, evaluate the requested certificates, and emit CSV / JSON /
//! SVG artifacts.

use super::config::{CertificateSpec, ExperimentConfig, PerturbationSpec, SchemeSpec};
use super::plot::{render_plot, PlotOptions};
use super::report::to_json_g17;
use super::series::series_from_trajectory;
use crate::analysis::{classify_convergence, ConvergenceReport};
use crate::certificates::{
    certify_chernoff_grid, certify_euler_kobayashi, certify_exponential_formula,
    certify_fejer, certify_flow_vs_prox, certify_integral_solution, certify_kobayashi,
    certify_value_rates, certify_velocity, Certificate, PairGrid,
};
use crate::error::{Error, Result};
use crate::operators::OperatorHandle;
use crate::point::Point;
use crate::schemes::{
    make_schedule, run_euler, run_perturbed_proximal, run_proximal, run_tikhonov_flow,
    run_yosida_flow, reference_flow, Perturbation, StepSchedule, Trajectory,
};
use crate::util::gauss;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub struct RunArtifacts {
    pub series_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub plot_paths: Vec<PathBuf>,
    pub convergence: Option<ConvergenceReport>,
    pub certificates: Vec<Certificate>,
    pub wall_clock: std::time::Duration,
}

#[derive(Serialize)]
struct Report<'a> {
    name: &'a str,
    seed: u64,
    config: &'a ExperimentConfig,
    scheme: &'a str,
    samples: usize,
    convergence: Option<&'a ConvergenceReport>,
    certificates: &'a [Certificate],
    series: Option<String>,
    plots: Vec<String>,
}

fn run_scheme(
    config: &ExperimentConfig,
    op: &OperatorHandle,
    schedule: Option<&StepSchedule>,
    start: &Point,
) -> Result<Trajectory> {
    let n_steps = config.horizon.n_steps.unwrap_or(0);
    let t_end = config.horizon.t_end.unwrap_or(0.0);
    match &config.scheme {
        SchemeSpec::Proximal => run_proximal(op, start, schedule.expect("validated"), n_steps),
        SchemeSpec::Euler => run_euler(op, start, schedule.expect("validated"), n_steps),
        SchemeSpec::CrandallLiggett { m } => {
            // the constant-step composition is exactly a proximal run
            let sched = StepSchedule::constant(t_end / *m as f64)?;
            run_proximal(op, start, &sched, *m)
        }
        SchemeSpec::YosidaFlow { lambda, dt } => {
            run_yosida_flow(op, start, *lambda, t_end, *dt)
        }
        SchemeSpec::ReferenceFlow { tol } => reference_flow(op, start, t_end, *tol),
        SchemeSpec::PerturbedProximal { perturbation } => {
            let pert = match perturbation {
                PerturbationSpec::Additive { phi } => Perturbation::Additive(
                    phi.iter()
                        .map(|v| Point::new(v.clone()))
                        .collect::<Result<_>>()?,
                ),
                PerturbationSpec::Tikhonov { eps } => Perturbation::Tikhonov(eps.clone()),
                PerturbationSpec::TikhonovDecay { a, b, p } => Perturbation::Tikhonov(
                    (1..=n_steps).map(|n| a / (b + n as f64).powf(*p)).collect(),
                ),
            };
            run_perturbed_proximal(op, start, schedule.expect("validated"), &pert, n_steps)
        }
        SchemeSpec::TikhonovFlow { eps, dt } => {
            run_tikhonov_flow(op, start, &eps.build(), t_end, *dt)
        }
    }
}

fn pair_grid(pairs: usize) -> PairGrid {
    if pairs == 0 {
        PairGrid::Full
    } else {
        PairGrid::LogSpaced(pairs)
    }
}

fn run_certificates(
    config: &ExperimentConfig,
    op: &OperatorHandle,
    start: &Point,
    traj: &Trajectory,
    seed: u64,
) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for spec in &config.certificates {
        match spec {
            CertificateSpec::Fejer { p } => {
                let p = match p {
                    Some(p) => Point::new(p.clone())?,
                    None => op.project_solutions(start)?,
                };
                out.push(certify_fejer(op, traj, &p)?);
            }
            CertificateSpec::Velocity => out.push(certify_velocity(traj)?),
            CertificateSpec::ValueRates => out.extend(certify_value_rates(op, traj)?),
            CertificateSpec::Kobayashi { second_schedule, u, pairs } => {
                let second = make_schedule(second_schedule.clone())?;
                let other = run_proximal(op, start, &second, traj.len() - 1)?;
                let u = match u {
                    Some(u) => Point::new(u.clone())?,
                    None => start.clone(),
                };
                out.push(certify_kobayashi(op, traj, &other, &u, pair_grid(*pairs))?);
            }
            CertificateSpec::EulerKobayashi { second_schedule, u, pairs } => {
                let second = make_schedule(second_schedule.clone())?;
                let other = run_euler(op, start, &second, traj.len() - 1)?;
                let u = match u {
                    Some(u) => Point::new(u.clone())?,
                    None => start.clone(),
                };
                out.push(certify_euler_kobayashi(op, traj, &other, &u, pair_grid(*pairs))?);
            }
            CertificateSpec::Chernoff { lambda, ts, ns } => {
                out.push(certify_chernoff_grid(op, *lambda, start, ts, ns)?);
            }
            CertificateSpec::ExponentialFormula { t, m_list } => {
                out.push(certify_exponential_formula(op, start, *t, m_list)?);
            }
            CertificateSpec::FlowVsProx { z, flow_tol } => {
                let z = match z {
                    Some(z) => Point::new(z.clone())?,
                    None => start.clone(),
                };
                out.push(certify_flow_vs_prox(op, traj, &z, *flow_tol)?);
            }
            CertificateSpec::IntegralSolution { probes, windows } => {
                let (probe_pts, window_pairs) =
                    auto_probes(op, traj, *probes, *windows, seed)?;
                out.push(certify_integral_solution(op, traj, &probe_pts, &window_pairs)?);
            }
        }
    }
    Ok(out)
}

/// Probes near the trajectory hull (forward-capable kinds only) and evenly
/// spread (s, t) windows, all derived from the run seed.
fn auto_probes(
    op: &OperatorHandle,
    traj: &Trajectory,
    n_probes: usize,
    n_windows: usize,
    seed: u64,
) -> Result<(Vec<(Point, Point)>, Vec<(f64, f64)>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let samples = traj.samples();
    let mut probes = Vec::with_capacity(n_probes);
    for _ in 0..n_probes {
        let anchor = &samples[rng.random_range(0..samples.len())].point;
        let jitter = Point::new(
            (0..anchor.dim()).map(|_| 0.2 * gauss(&mut rng)).collect(),
        )?;
        let x = anchor.add(&jitter);
        let y = op.forward_eval(&x)?;
        probes.push((x, y));
    }
    let t0 = traj.first().time;
    let t1 = traj.last().time;
    let mut windows = Vec::with_capacity(n_windows);
    for k in 0..n_windows {
        let a = t0 + (t1 - t0) * k as f64 / (n_windows as f64 + 1.0);
        let b = a + (t1 - t0) / (n_windows as f64 + 1.0);
        windows.push((a, b));
    }
    Ok((probes, windows))
}

/// Execute one experiment and write its artifacts under `out_dir`.
/// Deterministic for a fixed (config, seed): identical bytes on re-run.
pub fn run_experiment(
    config: &ExperimentConfig,
    name: &str,
    out_dir: &Path,
) -> Result<RunArtifacts> {
    let started = std::time::Instant::now();
    let prepared = super::config::validate(config)?;
    let op = prepared.operator;
    let schedule = prepared.schedule;
    let start = prepared.start;

    let traj = run_scheme(config, &op, schedule.as_ref(), &start)?;
    let convergence = match classify_convergence(&traj, op.solutions().known()) {
        Ok(report) => Some(report),
        Err(Error::TooShort { .. }) => None,
        Err(e) => return Err(e),
    };
    let certificates = run_certificates(config, &op, &start, &traj, config.seed)?;

    std::fs::create_dir_all(out_dir)?;
    let series = series_from_trajectory(&op, &traj, config.outputs.stride);

    let mut series_path = None;
    if config.outputs.csv {
        let path = out_dir.join(format!("{name}.csv"));
        std::fs::write(&path, series.to_csv())?;
        series_path = Some(path);
    }

    let mut plot_paths = Vec::new();
    for (x, y) in &config.outputs.plots {
        let svg = render_plot(&series, x, y, name, PlotOptions::default())?;
        let path = out_dir.join(format!("{name}-{x}-{y}.svg"));
        std::fs::write(&path, svg)?;
        plot_paths.push(path);
    }

    let mut report_path = None;
    if config.outputs.report {
        let report = Report {
            name,
            seed: config.seed,
            config,
            scheme: &traj.provenance.scheme,
            samples: traj.len(),
            convergence: convergence.as_ref(),
            certificates: &certificates,
            series: series_path
                .as_ref()
                .map(|p| p.file_name().unwrap().to_string_lossy().into_owned()),
            plots: plot_paths
                .iter()
                .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
                .collect(),
        };
        let path = out_dir.join(format!("{name}.json"));
        std::fs::write(&path, to_json_g17(&report)?)?;
        report_path = Some(path);
    }

    Ok(RunArtifacts {
        series_path,
        report_path,
        plot_paths,
        convergence,
        certificates,
        wall_clock: started.elapsed(),
    })
}
