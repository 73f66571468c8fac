use super::*;
use crate::operators::{build_operator, OperatorSpec};
use crate::schemes::{run_euler, run_proximal, StepSchedule};

fn pt(c: &[f64]) -> Point {
    Point::new(c.to_vec()).unwrap()
}

fn quad2() -> crate::operators::OperatorHandle {
    build_operator(&OperatorSpec::Quadratic {
        q: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        b: None,
    })
    .unwrap()
}

fn skew() -> crate::operators::OperatorHandle {
    build_operator(&OperatorSpec::Skew { m: vec![vec![0.0, 1.0], vec![-1.0, 0.0]] }).unwrap()
}

#[test]
fn rotation_closed_form_matches_runners() {
    let op = skew();
    let x0 = pt(&[1.0, 0.0]);
    for sched in [
        StepSchedule::constant(1.0).unwrap(),
        StepSchedule::power(1.0, 1.0).unwrap(),
        StepSchedule::power(1.0, 0.5).unwrap(),
        StepSchedule::custom(vec![0.5, 1.5, 0.25, 2.0]).unwrap(),
    ] {
        let (n_prox, n_euler) = match sched.kind() {
            crate::schemes::ScheduleKind::Custom { values, .. } => (values.len(), values.len()),
            // constant unit steps double the Euler norm every other step;
            // keep n below the overflow horizon there
            crate::schemes::ScheduleKind::Constant { .. } => (2_000, 500),
            _ => (2_000, 2_000),
        };
        let prox = run_proximal(&op, &x0, &sched, n_prox).unwrap();
        let oracle =
            rotation_closed_form(1.0, 0.0, &sched, n_prox, RotationScheme::Proximal).unwrap();
        for (a, b) in prox.samples().iter().zip(oracle.samples()) {
            assert!(a.point.dist(&b.point) <= 1e-12, "prox {} {:?}", sched.id(), a.index);
        }
        let euler = run_euler(&op, &x0, &sched, n_euler).unwrap();
        let oracle =
            rotation_closed_form(1.0, 0.0, &sched, n_euler, RotationScheme::Euler).unwrap();
        for (a, b) in euler.samples().iter().zip(oracle.samples()) {
            // growing orbits accumulate angle-rounding drift of order
            // k * ulp(theta_k) in the direction, so the tolerance is
            // relative and grows with k * sigma_k
            let drift = 2.0 * a.index as f64 * (1.0 + a.time) * f64::EPSILON;
            let tol = (1e-12 + drift) * (1.0 + a.point.norm());
            assert!(a.point.dist(&b.point) <= tol, "euler {} {:?}", sched.id(), a.index);
        }
    }
}

#[test]
fn rotation_examples() {
    let sched = StepSchedule::constant(1.0).unwrap();
    let t = rotation_closed_form(1.0, 0.0, &sched, 1, RotationScheme::Proximal).unwrap();
    assert!(t.last().point.dist(&pt(&[0.5, 0.5])) < 1e-15);
    let t = rotation_closed_form(1.0, 0.0, &sched, 2, RotationScheme::Euler).unwrap();
    assert!(t.last().point.dist(&pt(&[0.0, 2.0])) < 1e-14);
    // lambda_n = 1/sqrt(n): the radii telescope to r0 / sqrt(n+1)
    let sched = StepSchedule::power(1.0, 0.5).unwrap();
    let t = rotation_closed_form(1.0, 0.0, &sched, 400, RotationScheme::Proximal).unwrap();
    for s in t.samples() {
        let expected = 1.0 / ((s.index + 1) as f64).sqrt();
        assert!((s.point.norm() - expected).abs() < 1e-12);
    }
}

#[test]
fn classify_quadratic_proximal_converges() {
    // weighted averages of a geometric run decay like 1/n, so the run must
    // be long enough for the average tail to fall below the tolerance
    let op = quad2();
    let sched = StepSchedule::constant(0.5).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 0.7]), &sched, 4_000).unwrap();
    let report = classify_convergence(&traj, op.solutions().known()).unwrap();
    match &report.verdict {
        Verdict::Converges { limit } => {
            assert!(Point::new(limit.clone()).unwrap().norm() < 1e-4)
        }
        v => panic!("expected convergence, got {v:?}"),
    }
    assert!(report.average_verdict.is_convergent());
    assert!(report.limit_distance_to_solutions.unwrap() < 1e-3);
}

#[test]
fn classify_rotation_dichotomy() {
    let op = skew();
    let sched = StepSchedule::power(1.0, 1.0).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 0.0]), &sched, 10_000).unwrap();
    let report = classify_convergence(&traj, None).unwrap();
    assert_eq!(report.verdict, Verdict::BoundedNonconvergent);

    let euler = run_euler(&op, &pt(&[1.0, 0.0]), &StepSchedule::constant(1.0).unwrap(), 100)
        .unwrap();
    let report = classify_convergence(&euler, None).unwrap();
    assert_eq!(report.verdict, Verdict::NormDivergent);
}

#[test]
fn classifier_soundness() {
    // whenever the verdict is convergent, every tail sample is near the limit
    let op = quad2();
    for c in [0.1, 0.5, 2.0] {
        let sched = StepSchedule::constant(c).unwrap();
        let traj = run_proximal(&op, &pt(&[2.0, -1.0]), &sched, 200).unwrap();
        let report = classify_convergence(&traj, None).unwrap();
        if let Verdict::Converges { limit } = &report.verdict {
            let limit = Point::new(limit.clone()).unwrap();
            let n = traj.len();
            for s in &traj.samples()[n - n / 10..] {
                assert!(s.point.dist(&limit) <= report.tolerances.tol_conv);
            }
        }
    }
}

#[test]
fn asymptotic_center_of_convergent_run() {
    let op = quad2();
    let sched = StepSchedule::constant(1.0).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 1.0]), &sched, 200).unwrap();
    let ac = asymptotic_center(&traj, 0.5).unwrap();
    assert!(ac.norm() < 1e-6);
}

#[test]
fn asymptotic_center_of_rotation_tail() {
    // Harmonic steps advance the angle by log(n/m) over a window [m, n]:
    // a half-length tail subtends only log(2) ~ 40 degrees of arc and its
    // Chebyshev center sits near the chord at distance r cos(arc/2) ~ 0.49
    // from the origin. A window covering at least one full revolution
    // (m <= n e^{-2pi}) is needed before the center approaches the origin.
    let op = skew();
    let sched = StepSchedule::power(1.0, 1.0).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 0.0]), &sched, 10_000).unwrap();

    // r cos(arc/2) = 0.5216 * cos(0.3466) ~ 0.4906
    let half_window = asymptotic_center(&traj, 0.5).unwrap();
    assert!((half_window.norm() - 0.4906).abs() < 0.02, "{half_window:?}");

    let full_turn = asymptotic_center(&traj, 0.999).unwrap();
    assert!(full_turn.norm() <= 0.05, "{full_turn:?}");
}

#[test]
fn asymptotic_center_two_point_tail() {
    // alternating tail collapses to the midpoint
    let samples: Vec<crate::schemes::Sample> = (0..40)
        .map(|k| crate::schemes::Sample {
            index: k,
            time: k as f64,
            point: if k % 2 == 0 { pt(&[1.0, 0.0]) } else { pt(&[-1.0, 0.0]) },
            velocity: None,
        })
        .collect();
    let traj = Trajectory::new(
        samples,
        Provenance {
            scheme: "test".into(),
            operator_id: "none".into(),
            schedule_id: "none".into(),
            seed: None,
        },
        false,
    )
    .unwrap();
    let ac = asymptotic_center(&traj, 0.5).unwrap();
    assert!(ac.norm() < 1e-9);
}

#[test]
fn asymptotic_center_input_validation() {
    let op = quad2();
    let sched = StepSchedule::constant(1.0).unwrap();
    let short = run_proximal(&op, &pt(&[1.0, 0.0]), &sched, 5).unwrap();
    assert!(matches!(
        asymptotic_center(&short, 0.5),
        Err(Error::TooShort { .. })
    ));
    let traj = run_proximal(&op, &pt(&[1.0, 0.0]), &sched, 50).unwrap();
    assert!(matches!(
        asymptotic_center(&traj, 0.0),
        Err(Error::ValidationError(_))
    ));
    assert!(matches!(
        asymptotic_center(&traj, 1.5),
        Err(Error::ValidationError(_))
    ));
}

#[test]
fn classify_requires_enough_samples() {
    let op = quad2();
    let sched = StepSchedule::constant(1.0).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 0.0]), &sched, 10).unwrap();
    assert!(matches!(
        classify_convergence(&traj, None),
        Err(Error::TooShort { .. })
    ));
}
