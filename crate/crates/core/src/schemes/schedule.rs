use crate::error::{Error, Result};
use crate::operators::Tri;
use serde::{Deserialize, Serialize};

/// Step-size sequence lambda_n, n >= 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleKind {
    Constant {
        c: f64,
    },
    /// lambda_n = c * n^{-p}
    Power {
        c: f64,
        p: f64,
    },
    Custom {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        in_l1: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        in_l2: Option<bool>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SummabilityFlags {
    pub in_l1: Tri,
    pub in_l2: Tri,
}

#[derive(Debug, Clone)]
pub struct StepSchedule {
    kind: ScheduleKind,
    id: String,
}

pub fn make_schedule(kind: ScheduleKind) -> Result<StepSchedule> {
    match &kind {
        ScheduleKind::Constant { c } => {
            if !(*c > 0.0) || !c.is_finite() {
                return Err(Error::MalformedSchedule(format!(
                    "constant step must be positive and finite, got {c}"
                )));
            }
        }
        ScheduleKind::Power { c, p } => {
            if !(*c > 0.0) || !c.is_finite() || !p.is_finite() {
                return Err(Error::MalformedSchedule(format!(
                    "power schedule needs finite c > 0 and finite p, got c={c}, p={p}"
                )));
            }
        }
        ScheduleKind::Custom { values, in_l1, in_l2 } => {
            if values.is_empty() {
                return Err(Error::MalformedSchedule("custom schedule is empty".into()));
            }
            if values.iter().any(|v| !(*v > 0.0) || !v.is_finite() ) {
                return Err(Error::MalformedSchedule(
                    "custom schedule has a non-positive or non-finite step".into(),
                ));
            }
            // a sequence summable in l1 with bounded terms is summable in l2
            if *in_l1 == Some(true) && *in_l2 == Some(false) {
                return Err(Error::MalformedSchedule(
                    "declared flags violate l1 => l2".into(),
                ));
            }
        }
    }
    let id = match &kind {
        ScheduleKind::Constant { c } => format!("constant({c})"),
        ScheduleKind::Power { c, p } => format!("power({c},{p})"),
        ScheduleKind::Custom { values, .. } => format!("custom(len={})", values.len()),
    };
    Ok(StepSchedule { kind, id })
}

impl StepSchedule {
    pub fn constant(c: f64) -> Result<Self> {
        make_schedule(ScheduleKind::Constant { c })
    }

    pub fn power(c: f64, p: f64) -> Result<Self> {
        make_schedule(ScheduleKind::Power { c, p })
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        make_schedule(ScheduleKind::Custom { values, in_l1: None, in_l2: None })
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// lambda_n for n >= 1.
    pub fn step(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::MalformedSchedule("steps are indexed from 1".into()));
        }
        match &self.kind {
            ScheduleKind::Constant { c } => Ok(*c),
            ScheduleKind::Power { c, p } => Ok(c * (n as f64).powf(-p)),
            ScheduleKind::Custom { values, .. } => values.get(n - 1).copied().ok_or(
                Error::ScheduleExhausted { requested: n, available: values.len() },
            ),
        }
    }

    /// (sigma_n, tau_n) = (sum of lambda_k, sum of lambda_k^2) for k <= n.
    pub fn cumulative(&self, n: usize) -> Result<(f64, f64)> {
        let mut sigma = 0.0;
        let mut tau = 0.0;
        for k in 1..=n {
            let l = self.step(k)?;
            sigma += l;
            tau += l * l;
        }
        Ok((sigma, tau))
    }

    pub fn classify(&self) -> SummabilityFlags {
        match &self.kind {
            ScheduleKind::Constant { .. } => SummabilityFlags { in_l1: Tri::No, in_l2: Tri::No },
            ScheduleKind::Power { p, .. } => SummabilityFlags {
                in_l1: if *p > 1.0 { Tri::Yes } else { Tri::No },
                in_l2: if *p > 0.5 { Tri::Yes } else { Tri::No },
            },
            ScheduleKind::Custom { in_l1, in_l2, .. } => {
                let tri = |d: &Option<bool>| match d {
                    Some(true) => Tri::Yes,
                    Some(false) => Tri::No,
                    None => Tri::Unknown,
                };
                SummabilityFlags { in_l1: tri(in_l1), in_l2: tri(in_l2) }
            }
        }
    }
}
