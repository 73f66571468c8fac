use crate::error::{Error, Result};
use crate::point::Point;

/// One recorded state of a scheme run.
#[derive(Debug, Clone)]
pub struct Sample {
    pub index: usize,
    pub time: f64,
    pub point: Point,
    pub velocity: Option<Point>,
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub scheme: String,
    pub operator_id: String,
    pub schedule_id: String,
    pub seed: Option<u64>,
}

/// Ordered samples from one scheme run. Discrete runs carry times
/// sigma_n; flow runs carry physical time.
#[derive(Debug, Clone)]
pub struct Trajectory {
    samples: Vec<Sample>,
    pub provenance: Provenance,
    pub continuous: bool,
    /// A-priori sup-norm error bound when the trajectory approximates a
    /// continuous flow (set by `reference_flow`).
    pub flow_error_bound: Option<f64>,
}

impl Trajectory {
    pub fn new(samples: Vec<Sample>, provenance: Provenance, continuous: bool) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        for w in samples.windows(2) {
            if !(w[1].time > w[0].time) {
                return Err(Error::MalformedSpec(format!(
                    "sample times not strictly increasing: {} then {}",
                    w[0].time, w[1].time
                )));
            }
        }
        Ok(Trajectory { samples, provenance, continuous, flow_error_bound: None })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("non-empty")
    }

    pub fn dim(&self) -> usize {
        self.samples[0].point.dim()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.time)
    }

    /// Step length that produced sample k (time difference to the previous
    /// sample); k = 0 has no step.
    pub fn step_len(&self, k: usize) -> Option<f64> {
        if k == 0 || k >= self.samples.len() {
            return None;
        }
        Some(self.samples[k].time - self.samples[k - 1].time)
    }

    /// Piecewise-linear interpolation between bracketing samples. Queries
    /// within one part in 1e9 of the endpoints are clamped.
    pub fn interpolate(&self, t: f64) -> Result<Point> {
        let first = self.first().time;
        let last = self.last().time;
        let slop = 1e-9 * (last - first).abs().max(1.0);
        let t = if t > last && t <= last + slop {
            last
        } else if t < first && t >= first - slop {
            first
        } else {
            t
        };
        if t < first || t > last {
            return Err(Error::OutOfRange(t, first, last));
        }
        // binary search for the bracketing pair
        let idx = self
            .samples
            .partition_point(|s| s.time <= t);
        if idx == 0 {
            return Ok(self.samples[0].point.clone());
        }
        if idx >= self.samples.len() {
            return Ok(self.last().point.clone());
        }
        let a = &self.samples[idx - 1];
        let b = &self.samples[idx];
        let w = (t - a.time) / (b.time - a.time);
        Ok(a.point.lerp(&b.point, w))
    }

    /// Step-weighted running means  x̄_n = sigma_n^{-1} sum lambda_k x_k,
    /// with weights read off the stored times. Piecewise-constant
    /// interpolation of the run reproduces exactly this average.
    pub fn average_discrete(&self) -> Trajectory {
        let mut samples = Vec::with_capacity(self.samples.len().saturating_sub(1));
        let t0 = self.first().time;
        let mut weighted = Point::zeros(self.dim());
        for k in 1..self.samples.len() {
            let lambda = self.samples[k].time - self.samples[k - 1].time;
            weighted = weighted.axpy(lambda, &self.samples[k].point);
            let sigma = self.samples[k].time - t0;
            samples.push(Sample {
                index: self.samples[k].index,
                time: self.samples[k].time,
                point: weighted.scale(1.0 / sigma),
                velocity: None,
            });
        }
        if samples.is_empty() {
            // single-sample trajectory: its average is itself
            samples.push(self.samples[0].clone());
        }
        Trajectory {
            samples,
            provenance: Provenance {
                scheme: format!("average_discrete({})", self.provenance.scheme),
                ..self.provenance.clone()
            },
            continuous: self.continuous,
            flow_error_bound: None,
        }
    }

    /// Trapezoid-rule running averages (1/t) ∫ u over the sampled range.
    pub fn average_continuous(&self) -> Result<Trajectory> {
        if self.samples.len() < 2 {
            return Err(Error::TooShort { has: self.samples.len(), needs: 2 });
        }
        let t0 = self.first().time;
        let mut integral = Point::zeros(self.dim());
        let mut samples = Vec::with_capacity(self.samples.len() - 1);
        for k in 1..self.samples.len() {
            let h = self.samples[k].time - self.samples[k - 1].time;
            let mid = self.samples[k - 1]
                .point
                .add(&self.samples[k].point)
                .scale(0.5 * h);
            integral = integral.add(&mid);
            let span = self.samples[k].time - t0;
            samples.push(Sample {
                index: self.samples[k].index,
                time: self.samples[k].time,
                point: integral.scale(1.0 / span),
                velocity: None,
            });
        }
        Ok(Trajectory {
            samples,
            provenance: Provenance {
                scheme: format!("average_continuous({})", self.provenance.scheme),
                ..self.provenance.clone()
            },
            continuous: true,
            flow_error_bound: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn traj_1d(times: &[f64], values: &[f64]) -> Trajectory {
        let samples = times
            .iter()
            .zip(values)
            .enumerate()
            .map(|(i, (&t, &v))| Sample { index: i, time: t, point: pt(&[v]), velocity: None })
            .collect();
        Trajectory::new(
            samples,
            Provenance {
                scheme: "test".into(),
                operator_id: "none".into(),
                schedule_id: "none".into(),
                seed: None,
            },
            false,
        )
        .unwrap()
    }

    #[test]
    fn interpolation_examples() {
        let t = traj_1d(&[0.0, 1.0], &[0.0, 2.0]);
        assert_eq!(t.interpolate(0.5).unwrap().coords()[0], 1.0);
        assert_eq!(t.interpolate(0.25).unwrap().coords()[0], 0.5);
        assert_eq!(t.interpolate(1.0).unwrap().coords()[0], 2.0);
        assert!(matches!(t.interpolate(1.5), Err(Error::OutOfRange(..))));
        assert!(matches!(t.interpolate(-0.1), Err(Error::OutOfRange(..))));
    }

    #[test]
    fn rejects_non_increasing_times() {
        let samples = vec![
            Sample { index: 0, time: 0.0, point: pt(&[0.0]), velocity: None },
            Sample { index: 1, time: 0.0, point: pt(&[1.0]), velocity: None },
        ];
        assert!(Trajectory::new(
            samples,
            Provenance {
                scheme: "test".into(),
                operator_id: "none".into(),
                schedule_id: "none".into(),
                seed: None,
            },
            false,
        )
        .is_err());
    }

    #[test]
    fn discrete_average_examples() {
        // constant trajectory averages to itself
        let t = traj_1d(&[0.0, 1.0, 2.0, 3.0], &[4.0, 4.0, 4.0, 4.0]);
        for s in t.average_discrete().samples() {
            assert!((s.point.coords()[0] - 4.0).abs() < 1e-15);
        }
        // points (1, -1) with unit steps average to 0 at n = 2
        let t = traj_1d(&[0.0, 1.0, 2.0], &[9.0, 1.0, -1.0]);
        let avg = t.average_discrete();
        assert!((avg.samples()[1].point.coords()[0]).abs() < 1e-15);
    }

    #[test]
    fn continuous_average_of_constant_flow() {
        let t = traj_1d(&[0.0, 0.5, 1.0, 2.0], &[3.0, 3.0, 3.0, 3.0]);
        for s in t.average_continuous().unwrap().samples() {
            assert!((s.point.coords()[0] - 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn continuous_average_of_linear_ramp() {
        // u(s) = s on [0, 2]: running average at t = 2 is 1
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.1).collect();
        let vals = times.clone();
        let t = traj_1d(&times, &vals);
        let avg = t.average_continuous().unwrap();
        let last = avg.last();
        assert!((last.time - 2.0).abs() < 1e-12);
        assert!((last.point.coords()[0] - 1.0).abs() < 1e-12);
    }
}
