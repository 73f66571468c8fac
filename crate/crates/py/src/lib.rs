//! Python bindings: operators, schedules, scheme runners, certificates and
//! the analysis helpers, mirroring the Rust API one-to-one.

use monoflow_core::analysis;
use monoflow_core::certificates;
use monoflow_core::harness;
use monoflow_core::operators::{build_operator, ObjectiveValue, OperatorHandle, OperatorSpec};
use monoflow_core::point::Point;
use monoflow_core::schemes::{self, EpsFunction, StepSchedule};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn pyerr(e: monoflow_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn point(coords: Vec<f64>) -> PyResult<Point> {
    Point::new(coords).map_err(pyerr)
}

#[pyclass(frozen)]
struct Operator {
    inner: OperatorHandle,
}

#[pymethods]
impl Operator {
    /// Build from a TOML operator description (same schema as the
    /// `[operator]` table in experiment configs).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let spec: OperatorSpec =
            toml::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Operator { inner: build_operator(&spec).map_err(pyerr)? })
    }

    #[staticmethod]
    #[pyo3(signature = (q, b=None))]
    fn quadratic(q: Vec<Vec<f64>>, b: Option<Vec<f64>>) -> PyResult<Self> {
        Ok(Operator { inner: build_operator(&OperatorSpec::Quadratic { q, b }).map_err(pyerr)? })
    }

    #[staticmethod]
    fn skew(m: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Operator { inner: build_operator(&OperatorSpec::Skew { m }).map_err(pyerr)? })
    }

    #[staticmethod]
    fn soft_abs(dim: usize) -> PyResult<Self> {
        Ok(Operator { inner: build_operator(&OperatorSpec::SoftAbs { dim }).map_err(pyerr)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id().to_string()
    }

    #[getter]
    fn forward_capable(&self) -> bool {
        self.inner.flags().forward_capable
    }

    fn resolvent(&self, lam: f64, y: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self
            .inner
            .resolvent(lam, &point(y)?)
            .map_err(pyerr)?
            .into_coords())
    }

    fn yosida(&self, lam: f64, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self
            .inner
            .yosida_eval(lam, &point(x)?)
            .map_err(pyerr)?
            .into_coords())
    }

    fn forward(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.inner.forward_eval(&point(x)?).map_err(pyerr)?.into_coords())
    }

    fn minimal_section_norm(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.minimal_section_norm(&point(x)?).map_err(pyerr)
    }

    fn distance_to_solutions(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.distance_to_solutions(&point(x)?).map_err(pyerr)
    }

    /// f(x) for subdifferential kinds; returns +inf outside indicator
    /// domains.
    fn objective(&self, x: Vec<f64>) -> PyResult<f64> {
        Ok(match self.inner.objective_value(&point(x)?).map_err(pyerr)? {
            ObjectiveValue::Finite(v) => v,
            ObjectiveValue::PlusInfinity => f64::INFINITY,
        })
    }

    fn moreau(&self, lam: f64, y: Vec<f64>) -> PyResult<f64> {
        self.inner.moreau_value(lam, &point(y)?).map_err(pyerr)
    }
}

#[pyclass(frozen)]
struct Schedule {
    inner: StepSchedule,
}

#[pymethods]
impl Schedule {
    #[staticmethod]
    fn constant(c: f64) -> PyResult<Self> {
        Ok(Schedule { inner: StepSchedule::constant(c).map_err(pyerr)? })
    }

    #[staticmethod]
    fn power(c: f64, p: f64) -> PyResult<Self> {
        Ok(Schedule { inner: StepSchedule::power(c, p).map_err(pyerr)? })
    }

    #[staticmethod]
    fn custom(values: Vec<f64>) -> PyResult<Self> {
        Ok(Schedule { inner: StepSchedule::custom(values).map_err(pyerr)? })
    }

    fn step(&self, n: usize) -> PyResult<f64> {
        self.inner.step(n).map_err(pyerr)
    }

    /// (sigma_n, tau_n)
    fn cumulative(&self, n: usize) -> PyResult<(f64, f64)> {
        self.inner.cumulative(n).map_err(pyerr)
    }

    /// ("yes"|"no"|"unknown") for (l1, l2) membership.
    fn classify(&self) -> (String, String) {
        let flags = self.inner.classify();
        let s = |t: monoflow_core::operators::Tri| {
            match t {
                monoflow_core::operators::Tri::Yes => "yes",
                monoflow_core::operators::Tri::No => "no",
                monoflow_core::operators::Tri::Unknown => "unknown",
            }
            .to_string()
        };
        (s(flags.in_l1), s(flags.in_l2))
    }
}

#[pyclass(frozen)]
struct Trajectory {
    inner: schemes::Trajectory,
}

#[pymethods]
impl Trajectory {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.times().collect()
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner
            .samples()
            .iter()
            .map(|s| s.point.coords().to_vec())
            .collect()
    }

    fn velocity_norms(&self) -> Vec<Option<f64>> {
        self.inner
            .samples()
            .iter()
            .map(|s| s.velocity.as_ref().map(|v| v.norm()))
            .collect()
    }

    fn interpolate(&self, t: f64) -> PyResult<Vec<f64>> {
        Ok(self.inner.interpolate(t).map_err(pyerr)?.into_coords())
    }

    /// Step-weighted average for discrete runs, trapezoid running average
    /// for flows.
    fn average(&self) -> PyResult<Trajectory> {
        let inner = if self.inner.continuous {
            self.inner.average_continuous().map_err(pyerr)?
        } else {
            self.inner.average_discrete()
        };
        Ok(Trajectory { inner })
    }

    #[getter]
    fn scheme(&self) -> String {
        self.inner.provenance.scheme.clone()
    }

    #[getter]
    fn flow_error_bound(&self) -> Option<f64> {
        self.inner.flow_error_bound
    }
}

#[pyclass(frozen)]
struct Certificate {
    #[pyo3(get)]
    name: String,
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    min_margin: f64,
    #[pyo3(get)]
    slack: f64,
    samples: Vec<(String, f64, f64, f64)>,
}

impl From<certificates::Certificate> for Certificate {
    fn from(c: certificates::Certificate) -> Self {
        Certificate {
            name: c.name,
            passed: c.passed,
            min_margin: c.min_margin,
            slack: c.slack,
            samples: c
                .per_sample
                .into_iter()
                .map(|s| (s.at, s.lhs, s.rhs, s.margin))
                .collect(),
        }
    }
}

#[pymethods]
impl Certificate {
    /// (at, lhs, rhs, margin) rows.
    fn samples(&self) -> Vec<(String, f64, f64, f64)> {
        self.samples.clone()
    }
}

#[pyfunction]
fn run_proximal(
    op: &Operator,
    x0: Vec<f64>,
    schedule: &Schedule,
    n_steps: usize,
) -> PyResult<Trajectory> {
    Ok(Trajectory {
        inner: schemes::run_proximal(&op.inner, &point(x0)?, &schedule.inner, n_steps)
            .map_err(pyerr)?,
    })
}

#[pyfunction]
fn run_euler(
    op: &Operator,
    z0: Vec<f64>,
    schedule: &Schedule,
    n_steps: usize,
) -> PyResult<Trajectory> {
    Ok(Trajectory {
        inner: schemes::run_euler(&op.inner, &point(z0)?, &schedule.inner, n_steps)
            .map_err(pyerr)?,
    })
}

#[pyfunction]
fn crandall_liggett_point(op: &Operator, x: Vec<f64>, t: f64, m: usize) -> PyResult<Vec<f64>> {
    Ok(schemes::crandall_liggett_point(&op.inner, &point(x)?, t, m)
        .map_err(pyerr)?
        .into_coords())
}

#[pyfunction]
fn reference_flow(op: &Operator, x0: Vec<f64>, t_end: f64, tol: f64) -> PyResult<Trajectory> {
    Ok(Trajectory {
        inner: schemes::reference_flow(&op.inner, &point(x0)?, t_end, tol).map_err(pyerr)?,
    })
}

#[pyfunction]
fn run_yosida_flow(
    op: &Operator,
    x0: Vec<f64>,
    lam: f64,
    t_end: f64,
    dt: f64,
) -> PyResult<Trajectory> {
    Ok(Trajectory {
        inner: schemes::run_yosida_flow(&op.inner, &point(x0)?, lam, t_end, dt).map_err(pyerr)?,
    })
}

/// Implicit Tikhonov flow with factor eps(t) = a / (b + t)^p.
#[pyfunction]
#[pyo3(signature = (op, x0, a, b, p, t_end, dt=None))]
fn run_tikhonov_flow(
    op: &Operator,
    x0: Vec<f64>,
    a: f64,
    b: f64,
    p: f64,
    t_end: f64,
    dt: Option<f64>,
) -> PyResult<Trajectory> {
    let eps = EpsFunction::PowerDecay { a, b, p };
    Ok(Trajectory {
        inner: schemes::run_tikhonov_flow(&op.inner, &point(x0)?, &eps, t_end, dt)
            .map_err(pyerr)?,
    })
}

#[pyfunction]
fn min_enclosing_ball(points: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, f64)> {
    let pts: Vec<Point> = points
        .into_iter()
        .map(point)
        .collect::<PyResult<_>>()?;
    let ball = analysis::min_enclosing_ball(&pts).map_err(pyerr)?;
    Ok((ball.center.into_coords(), ball.radius))
}

#[pyfunction]
fn asymptotic_center(traj: &Trajectory, tail_fraction: f64) -> PyResult<Vec<f64>> {
    Ok(analysis::asymptotic_center(&traj.inner, tail_fraction)
        .map_err(pyerr)?
        .into_coords())
}

/// (verdict, limit_or_None, average_verdict, asymptotic_regularity)
#[pyfunction]
fn classify(traj: &Trajectory) -> PyResult<(String, Option<Vec<f64>>, String, f64)> {
    let report = analysis::classify_convergence(&traj.inner, None).map_err(pyerr)?;
    let describe = |v: &analysis::Verdict| match v {
        analysis::Verdict::Converges { .. } => "converges".to_string(),
        analysis::Verdict::BoundedNonconvergent => "bounded_nonconvergent".to_string(),
        analysis::Verdict::NormDivergent => "norm_divergent".to_string(),
        analysis::Verdict::Undetermined => "undetermined".to_string(),
    };
    let limit = match &report.verdict {
        analysis::Verdict::Converges { limit } => Some(limit.clone()),
        _ => None,
    };
    Ok((
        describe(&report.verdict),
        limit,
        describe(&report.average_verdict),
        report.asymptotic_regularity,
    ))
}

#[pyfunction]
fn certify_fejer(op: &Operator, traj: &Trajectory, p: Vec<f64>) -> PyResult<Certificate> {
    Ok(certificates::certify_fejer(&op.inner, &traj.inner, &point(p)?)
        .map_err(pyerr)?
        .into())
}

#[pyfunction]
fn certify_velocity(traj: &Trajectory) -> PyResult<Certificate> {
    Ok(certificates::certify_velocity(&traj.inner).map_err(pyerr)?.into())
}

#[pyfunction]
#[pyo3(signature = (op, traj_a, traj_b, u, pairs=10))]
fn certify_kobayashi(
    op: &Operator,
    traj_a: &Trajectory,
    traj_b: &Trajectory,
    u: Vec<f64>,
    pairs: usize,
) -> PyResult<Certificate> {
    let grid = if pairs == 0 {
        certificates::PairGrid::Full
    } else {
        certificates::PairGrid::LogSpaced(pairs)
    };
    Ok(
        certificates::certify_kobayashi(&op.inner, &traj_a.inner, &traj_b.inner, &point(u)?, grid)
            .map_err(pyerr)?
            .into(),
    )
}

#[pyfunction]
fn certify_value_rates(op: &Operator, traj: &Trajectory) -> PyResult<Vec<Certificate>> {
    Ok(certificates::certify_value_rates(&op.inner, &traj.inner)
        .map_err(pyerr)?
        .into_iter()
        .map(Certificate::from)
        .collect())
}

#[pyfunction]
fn certify_exponential_formula(
    op: &Operator,
    x: Vec<f64>,
    t: f64,
    m_list: Vec<usize>,
) -> PyResult<Certificate> {
    Ok(
        certificates::certify_exponential_formula(&op.inner, &point(x)?, t, &m_list)
            .map_err(pyerr)?
            .into(),
    )
}

/// Validate a TOML experiment config; raises ValueError on any problem.
#[pyfunction]
fn load_config(text: &str) -> PyResult<()> {
    harness::load_config(text).map(|_| ()).map_err(pyerr)
}

/// Run one experiment; returns the emitted file paths.
#[pyfunction]
#[pyo3(signature = (text, name, out_dir, seed=None))]
fn run_experiment(
    text: &str,
    name: &str,
    out_dir: &str,
    seed: Option<u64>,
) -> PyResult<Vec<String>> {
    let mut config = harness::load_config(text).map_err(pyerr)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let artifacts =
        harness::run_experiment(&config, name, std::path::Path::new(out_dir)).map_err(pyerr)?;
    Ok(artifacts
        .series_path
        .into_iter()
        .chain(artifacts.report_path)
        .chain(artifacts.plot_paths)
        .map(|p| p.display().to_string())
        .collect())
}

#[pyfunction]
fn preset(name: &str) -> Option<&'static str> {
    harness::presets::preset(name)
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    harness::presets::PRESET_NAMES.to_vec()
}

/// Run the acceptance suite ("fast" or "full"); returns
/// (id, name, passed, detail) rows.
#[pyfunction]
fn run_suite(name: &str) -> PyResult<Vec<(usize, String, bool, String)>> {
    let suite = harness::Suite::parse(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown suite {name:?}")))?;
    Ok(harness::run_suite(suite)
        .results
        .into_iter()
        .map(|r| (r.id, r.name.to_string(), r.passed, r.detail))
        .collect())
}

#[pymodule]
fn monoflow(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Operator>()?;
    m.add_class::<Schedule>()?;
    m.add_class::<Trajectory>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(run_proximal, m)?)?;
    m.add_function(wrap_pyfunction!(run_euler, m)?)?;
    m.add_function(wrap_pyfunction!(crandall_liggett_point, m)?)?;
    m.add_function(wrap_pyfunction!(reference_flow, m)?)?;
    m.add_function(wrap_pyfunction!(run_yosida_flow, m)?)?;
    m.add_function(wrap_pyfunction!(run_tikhonov_flow, m)?)?;
    m.add_function(wrap_pyfunction!(min_enclosing_ball, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_center, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(certify_fejer, m)?)?;
    m.add_function(wrap_pyfunction!(certify_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(certify_kobayashi, m)?)?;
    m.add_function(wrap_pyfunction!(certify_value_rates, m)?)?;
    m.add_function(wrap_pyfunction!(certify_exponential_formula, m)?)?;
    m.add_function(wrap_pyfunction!(load_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
