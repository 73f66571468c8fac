//! Declarative experiment configuration (TOML) and its validation rules.

use crate::error::{Error, Result};
use crate::operators::{build_operator, OperatorHandle, OperatorSpec};
use crate::point::Point;
use crate::schemes::{make_schedule, EpsFunction, ScheduleKind, StepSchedule};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub operator: OperatorSpec,
    pub scheme: SchemeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleKind>,
    pub horizon: Horizon,
    pub start: StartSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateSpec>,
    #[serde(default)]
    pub outputs: OutputSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchemeSpec {
    Proximal,
    Euler,
    /// Constant-step resolvent composition u_m(t_end) with m steps.
    CrandallLiggett { m: usize },
    YosidaFlow { lambda: f64, dt: f64 },
    ReferenceFlow { tol: f64 },
    PerturbedProximal { perturbation: PerturbationSpec },
    TikhonovFlow {
        eps: EpsSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dt: Option<f64>,
    },
}

impl SchemeSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SchemeSpec::Proximal => "proximal",
            SchemeSpec::Euler => "euler",
            SchemeSpec::CrandallLiggett { .. } => "crandall_liggett",
            SchemeSpec::YosidaFlow { .. } => "yosida_flow",
            SchemeSpec::ReferenceFlow { .. } => "reference_flow",
            SchemeSpec::PerturbedProximal { .. } => "perturbed_proximal",
            SchemeSpec::TikhonovFlow { .. } => "tikhonov_flow",
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            SchemeSpec::Proximal | SchemeSpec::Euler | SchemeSpec::PerturbedProximal { .. }
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationSpec {
    Additive { phi: Vec<Vec<f64>> },
    Tikhonov { eps: Vec<f64> },
    /// eps_n = a / (b + n)^p, generated for any run length.
    TikhonovDecay { a: f64, b: f64, p: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EpsSpec {
    Constant { c: f64 },
    PowerDecay { a: f64, b: f64, p: f64 },
}

impl EpsSpec {
    pub fn build(&self) -> EpsFunction {
        match self {
            EpsSpec::Constant { c } => EpsFunction::Constant(*c),
            EpsSpec::PowerDecay { a, b, p } => EpsFunction::PowerDecay { a: *a, b: *b, p: *p },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Horizon {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    /// named start: "zero", "unit_x" or "ones"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
}

impl StartSpec {
    pub fn build(&self, dim: usize) -> Result<Point> {
        match (&self.point, &self.preset) {
            (Some(p), None) => {
                let p = Point::new(p.clone())?;
                if p.dim() != dim {
                    return Err(Error::ValidationError(format!(
                        "start point has dimension {}, operator needs {dim}",
                        p.dim()
                    )));
                }
                Ok(p)
            }
            (None, Some(name)) => match name.as_str() {
                "zero" => Ok(Point::zeros(dim)),
                "unit_x" => {
                    let mut c = vec![0.0; dim];
                    c[0] = 1.0;
                    Point::new(c)
                }
                "ones" => Point::new(vec![1.0; dim]),
                other => Err(Error::ValidationError(format!(
                    "unknown start preset {other:?} (known: zero, unit_x, ones)"
                ))),
            },
            _ => Err(Error::ValidationError(
                "start needs exactly one of `point` or `preset`".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum CertificateSpec {
    Fejer {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<Vec<f64>>,
    },
    Velocity,
    ValueRates,
    Kobayashi {
        second_schedule: ScheduleKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<Vec<f64>>,
        /// log-spaced grid size per axis; 0 selects the full grid
        #[serde(default)]
        pairs: usize,
    },
    EulerKobayashi {
        second_schedule: ScheduleKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<Vec<f64>>,
        #[serde(default)]
        pairs: usize,
    },
    Chernoff {
        lambda: f64,
        ts: Vec<f64>,
        ns: Vec<usize>,
    },
    ExponentialFormula {
        t: f64,
        m_list: Vec<usize>,
    },
    FlowVsProx {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<Vec<f64>>,
        flow_tol: f64,
    },
    IntegralSolution {
        #[serde(default = "default_probes")]
        probes: usize,
        #[serde(default = "default_windows")]
        windows: usize,
    },
}

fn default_probes() -> usize {
    5
}

fn default_windows() -> usize {
    10
}

impl CertificateSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateSpec::Fejer { .. } => "fejer",
            CertificateSpec::Velocity => "velocity",
            CertificateSpec::ValueRates => "value_rates",
            CertificateSpec::Kobayashi { .. } => "kobayashi",
            CertificateSpec::EulerKobayashi { .. } => "euler_kobayashi",
            CertificateSpec::Chernoff { .. } => "chernoff",
            CertificateSpec::ExponentialFormula { .. } => "exponential_formula",
            CertificateSpec::FlowVsProx { .. } => "flow_vs_prox",
            CertificateSpec::IntegralSolution { .. } => "integral_solution",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_true")]
    pub csv: bool,
    #[serde(default = "default_true")]
    pub report: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plots: Vec<(String, String)>,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_true() -> bool {
    true
}

fn default_stride() -> usize {
    1
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { csv: true, report: true, plots: Vec::new(), stride: 1 }
    }
}

/// Parse and validate a config document. Unknown keys are rejected by the
/// parser with a position-annotated message; cross-field rules (capability
/// compatibility, horizon/scheme agreement) are checked here.
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig =
        toml::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    validate(&config)?;
    Ok(config)
}

/// The validated building blocks of a run.
pub struct Prepared {
    pub operator: OperatorHandle,
    pub schedule: Option<StepSchedule>,
    pub start: Point,
}

pub fn validate(config: &ExperimentConfig) -> Result<Prepared> {
    let operator = build_operator(&config.operator)?;
    let schedule = config.schedule.clone().map(make_schedule).transpose()?;
    let start = config.start.build(operator.dim())?;

    if config.scheme.is_discrete() {
        if schedule.is_none() {
            return Err(Error::ValidationError(format!(
                "{} scheme requires a schedule",
                config.scheme.kind_name()
            )));
        }
        match config.horizon.n_steps {
            Some(n) if n >= 1 => {}
            Some(_) => return Err(Error::ValidationError("n_steps must be >= 1".into())),
            None => {
                return Err(Error::ValidationError(
                    "discrete schemes need horizon.n_steps".into(),
                ))
            }
        }
        if config.horizon.t_end.is_some() {
            return Err(Error::ValidationError(
                "discrete schemes take horizon.n_steps, not t_end".into(),
            ));
        }
    } else {
        match config.horizon.t_end {
            Some(t) if t > 0.0 => {}
            Some(_) => return Err(Error::ValidationError("t_end must be > 0".into())),
            None => {
                return Err(Error::ValidationError(
                    "continuous schemes need horizon.t_end".into(),
                ))
            }
        }
        if config.horizon.n_steps.is_some() {
            return Err(Error::ValidationError(
                "continuous schemes take horizon.t_end, not n_steps".into(),
            ));
        }
    }

    if matches!(config.scheme, SchemeSpec::Euler) && !operator.flags().forward_capable {
        return Err(Error::ValidationError(
            "euler scheme requires a forward-capable operator".into(),
        ));
    }
    if let SchemeSpec::CrandallLiggett { m } = config.scheme {
        if m == 0 {
            return Err(Error::ValidationError("crandall_liggett needs m >= 1".into()));
        }
    }
    if let SchemeSpec::YosidaFlow { lambda, dt } = config.scheme {
        if !(lambda > 0.0) || !(dt > 0.0) {
            return Err(Error::ValidationError(
                "yosida_flow needs lambda > 0 and dt > 0".into(),
            ));
        }
        if dt * 2.0 / lambda > 1.0 {
            return Err(Error::StepTooLarge(dt * 2.0 / lambda));
        }
    }
    if let SchemeSpec::TikhonovFlow { eps, .. } = &config.scheme {
        eps.build().validate()?;
    }

    for cert in &config.certificates {
        match cert {
            CertificateSpec::Chernoff { .. } | CertificateSpec::EulerKobayashi { .. } => {
                if !matches!(operator.kind(), crate::operators::Kind::Residual { .. }) {
                    return Err(Error::ValidationError(format!(
                        "{} certificate requires a residual operator",
                        cert.name()
                    )));
                }
            }
            CertificateSpec::Kobayashi { .. } | CertificateSpec::FlowVsProx { .. } => {
                if !matches!(config.scheme, SchemeSpec::Proximal) {
                    return Err(Error::ValidationError(format!(
                        "{} certificate requires the proximal scheme",
                        cert.name()
                    )));
                }
            }
            CertificateSpec::IntegralSolution { .. } => {
                if config.scheme.is_discrete() {
                    return Err(Error::ValidationError(
                        "integral_solution certificate requires a flow scheme".into(),
                    ));
                }
            }
            CertificateSpec::ValueRates => {
                use crate::operators::Kind;
                let subdiff = matches!(
                    operator.kind(),
                    Kind::Quadratic { .. }
                        | Kind::DistSquared { .. }
                        | Kind::SoftAbs
                        | Kind::NormalCone { .. }
                        | Kind::Shifted { .. }
                        | Kind::Yosida { .. }
                );
                if !subdiff {
                    return Err(Error::ValidationError(
                        "value_rates certificate requires a subdifferential operator".into(),
                    ));
                }
            }
            _ => {}
        }
    }
    if config.outputs.stride == 0 {
        return Err(Error::ValidationError("outputs.stride must be >= 1".into()));
    }

    Ok(Prepared { operator, schedule, start })
}
