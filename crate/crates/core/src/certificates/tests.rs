use super::*;
use crate::error::Error;
use crate::operators::{build_operator, MapSpec, OperatorSpec, SetSpec};
use crate::point::Point;
use crate::schemes::{run_euler, run_proximal, reference_flow, StepSchedule};

fn pt(c: &[f64]) -> Point {
    Point::new(c.to_vec()).unwrap()
}

fn quad(d: usize) -> crate::operators::OperatorHandle {
    let q = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    build_operator(&OperatorSpec::Quadratic { q, b: None }).unwrap()
}

fn skew() -> crate::operators::OperatorHandle {
    build_operator(&OperatorSpec::Skew { m: vec![vec![0.0, 1.0], vec![-1.0, 0.0]] }).unwrap()
}

fn rot_residual() -> crate::operators::OperatorHandle {
    build_operator(&OperatorSpec::Residual {
        map: MapSpec::Rotation { angle: std::f64::consts::FRAC_PI_2 },
    })
    .unwrap()
}

#[test]
fn kobayashi_identical_runs_from_solution() {
    let op = quad(2);
    let sched = StepSchedule::power(1.0, 1.0).unwrap();
    let x0 = Point::zeros(2);
    let a = run_proximal(&op, &x0, &sched, 50).unwrap();
    let b = run_proximal(&op, &x0, &sched, 50).unwrap();
    let cert = certify_kobayashi(&op, &a, &b, &x0, PairGrid::default()).unwrap();
    assert!(cert.passed);
    for s in &cert.per_sample {
        assert!(s.lhs <= 1e-12);
    }
}

#[test]
fn kobayashi_rhs_collapses_when_u_solves() {
    // u in S kills the section term: rhs = ||x0-u|| + ||x̂0-u|| exactly
    let op = quad(2);
    let a = run_proximal(&op, &pt(&[1.0, 0.0]), &StepSchedule::constant(0.5).unwrap(), 40)
        .unwrap();
    let b = run_proximal(&op, &pt(&[0.0, 1.0]), &StepSchedule::power(1.0, 1.0).unwrap(), 40)
        .unwrap();
    let u = Point::zeros(2);
    let cert = certify_kobayashi(&op, &a, &b, &u, PairGrid::default()).unwrap();
    assert!(cert.passed);
    for s in &cert.per_sample {
        assert!((s.rhs - 2.0).abs() < 1e-12, "{}", s.rhs);
    }
}

#[test]
fn kobayashi_skew_random_probe() {
    let op = skew();
    let a = run_proximal(&op, &pt(&[1.0, 0.0]), &StepSchedule::power(1.0, 1.0).unwrap(), 100)
        .unwrap();
    let b = run_proximal(&op, &pt(&[1.0, 0.0]), &StepSchedule::constant(0.1).unwrap(), 100)
        .unwrap();
    let cert = certify_kobayashi(&op, &a, &b, &pt(&[0.3, 0.2]), PairGrid::Full).unwrap();
    assert!(cert.passed, "min margin {}", cert.min_margin);
    assert!(cert.min_margin >= 0.0);
}

#[test]
fn kobayashi_rejects_mismatched_operator() {
    let op = quad(2);
    let other = skew();
    let sched = StepSchedule::constant(0.5).unwrap();
    let a = run_proximal(&op, &pt(&[1.0, 0.0]), &sched, 10).unwrap();
    let b = run_proximal(&other, &pt(&[1.0, 0.0]), &sched, 10).unwrap();
    assert!(matches!(
        certify_kobayashi(&op, &a, &b, &pt(&[0.0, 0.0]), PairGrid::default()),
        Err(Error::OperatorMismatch(..))
    ));
}

#[test]
fn euler_kobayashi_on_rotation_residual() {
    let op = rot_residual();
    let x0 = pt(&[1.0, 0.0]);
    let a = run_euler(&op, &x0, &StepSchedule::constant(0.5).unwrap(), 100).unwrap();
    let b = run_euler(&op, &x0, &StepSchedule::power(1.0, 1.0).unwrap(), 100).unwrap();
    let cert = certify_euler_kobayashi(&op, &a, &b, &pt(&[0.3, 0.2]), PairGrid::Full).unwrap();
    assert!(cert.passed, "min margin {}", cert.min_margin);

    // u a fixed point of T: rhs reduces to the two start distances
    let u = Point::zeros(2);
    let cert = certify_euler_kobayashi(&op, &a, &b, &u, PairGrid::default()).unwrap();
    for s in &cert.per_sample {
        assert!((s.rhs - 2.0).abs() < 1e-12);
    }

    assert!(matches!(
        certify_euler_kobayashi(&quad(2), &a, &b, &u, PairGrid::default()),
        Err(Error::WrongOperatorKind(_))
    ));
}

#[test]
fn chernoff_worked_example() {
    // T = J_1 of the 1-d identity quadratic (Tx = x/2), lambda = 1:
    // the flow is exp(-t/2) x, so at t = 2, n = 2 the two sides are
    // |e^{-1} - 1/4| ~ 0.1179 and 0.5 sqrt(2) ~ 0.7071.
    let op = build_operator(&OperatorSpec::Residual {
        map: MapSpec::ResolventOf {
            operator: Box::new(OperatorSpec::Quadratic { q: vec![vec![1.0]], b: None }),
            lambda: 1.0,
        },
    })
    .unwrap();
    let cert = certify_chernoff(&op, 1.0, &pt(&[1.0]), 2.0, 2).unwrap();
    assert!(cert.passed);
    let s = &cert.per_sample[0];
    assert!((s.lhs - ((-1.0f64).exp() - 0.25).abs()).abs() < 5e-3, "lhs {}", s.lhs);
    assert!((s.rhs - 0.5 * 2.0f64.sqrt()).abs() < 1e-12, "rhs {}", s.rhs);

    // fixed point: lhs vanishes
    let cert = certify_chernoff(&op, 1.0, &Point::zeros(1), 2.0, 2).unwrap();
    assert!(cert.per_sample[0].lhs < 1e-9);

    // t = n lambda kills the drift term: rhs = ||v'(0)|| sqrt(lambda t)
    let cert = certify_chernoff(&op, 1.0, &pt(&[1.0]), 2.0, 2).unwrap();
    assert!((cert.per_sample[0].rhs - 0.5 * 2.0f64.sqrt()).abs() < 1e-12);
}

#[test]
fn exponential_formula_examples() {
    let op = quad(1);
    let cert = certify_exponential_formula(&op, &pt(&[1.0]), 1.0, &[1]).unwrap();
    assert!(cert.passed);
    let s = &cert.per_sample[0];
    assert!((s.lhs - (0.5 - (-1.0f64).exp()).abs()).abs() < 1e-2);
    assert!((s.rhs - 3.0).abs() < 1e-12);

    // start in S: every side vanishes
    let cert = certify_exponential_formula(&op, &Point::zeros(1), 1.0, &[1, 4]).unwrap();
    for s in &cert.per_sample {
        assert!(s.lhs < 1e-12 && s.rhs == 0.0);
    }

    // skew: margins hold and the error decreases in m
    let cert =
        certify_exponential_formula(&skew(), &pt(&[1.0, 0.0]), 1.0, &[4, 16, 64, 256]).unwrap();
    assert!(cert.passed, "min margin {}", cert.min_margin);
    let errs: Vec<f64> = cert.per_sample.iter().map(|s| s.lhs).collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0], "{errs:?}");
    }
}

#[test]
fn flow_vs_prox_quadratic() {
    let op = quad(1);
    let x0 = pt(&[1.0]);
    let sched = StepSchedule::constant(0.1).unwrap();
    let traj = run_proximal(&op, &x0, &sched, 100).unwrap();
    let cert = certify_flow_vs_prox(&op, &traj, &x0, 0.05).unwrap();
    assert!(cert.passed, "min margin {}", cert.min_margin);
}

#[test]
fn flow_vs_prox_solution_probe_gives_constant_rhs() {
    let op = skew();
    let traj = run_proximal(&op, &pt(&[1.0, 0.0]), &StepSchedule::power(1.0, 1.0).unwrap(), 60)
        .unwrap();
    let cert = certify_flow_vs_prox(&op, &traj, &Point::zeros(2), 0.05).unwrap();
    assert!(cert.passed);
    for s in &cert.per_sample {
        assert!((s.rhs - 2.0).abs() < 1e-12); // 2 ||x0 - z||, section term zero
    }
}

#[test]
fn fejer_constant_trajectory() {
    let op = quad(2);
    let p = Point::zeros(2);
    let traj = run_proximal(&op, &p, &StepSchedule::constant(1.0).unwrap(), 20).unwrap();
    let cert = certify_fejer(&op, &traj, &p).unwrap();
    assert!(cert.passed);
    for s in &cert.per_sample {
        assert!(s.margin.abs() < 1e-15);
    }
}

#[test]
fn fejer_rotation_proximal_and_euler() {
    let p = Point::zeros(2);
    let op = skew();
    let traj = run_proximal(&op, &pt(&[1.0, 0.0]), &StepSchedule::power(1.0, 1.0).unwrap(), 200)
        .unwrap();
    let cert = certify_fejer(&op, &traj, &p).unwrap();
    assert!(cert.passed);
    assert!(cert.min_margin > 0.0, "strict decrease for rotation");

    // euler: plain Fejér fails (norms grow), the quasi form holds with
    // equality; keep the run short so eps * ||z||^2 stays inside the
    // absolute 1e-9 slack
    let traj = run_euler(&op, &pt(&[1.0, 0.0]), &StepSchedule::constant(1.0).unwrap(), 20)
        .unwrap();
    let s = traj.samples();
    assert!(s[1].point.dist(&p) > s[0].point.dist(&p), "plain Fejér violated");
    let cert = certify_fejer(&op, &traj, &p).unwrap();
    assert_eq!(cert.name, "fejer_euler");
    assert!(cert.passed, "min margin {}", cert.min_margin);
}

#[test]
fn fejer_rejects_non_solution() {
    let op = quad(2);
    let traj = run_proximal(&op, &pt(&[1.0, 0.0]), &StepSchedule::constant(1.0).unwrap(), 10)
        .unwrap();
    assert!(matches!(
        certify_fejer(&op, &traj, &pt(&[0.5, 0.5])),
        Err(Error::NotASolution(_))
    ));
}

#[test]
fn velocity_decay_examples() {
    let op = quad(1);
    let traj = run_proximal(&op, &pt(&[1.0]), &StepSchedule::constant(1.0).unwrap(), 20).unwrap();
    let cert = certify_velocity(&traj).unwrap();
    assert!(cert.passed);
    // ||y_n|| = 2^{-n}
    for (k, s) in cert.per_sample.iter().enumerate() {
        assert!((s.lhs - 0.5f64.powi(k as i32 + 2)).abs() < 1e-15);
    }

    let traj = run_proximal(&skew(), &pt(&[1.0, 0.0]), &StepSchedule::power(1.0, 1.0).unwrap(), 500)
        .unwrap();
    assert!(certify_velocity(&traj).unwrap().passed);

    let traj = run_euler(&skew(), &pt(&[1.0, 0.0]), &StepSchedule::constant(1.0).unwrap(), 10)
        .unwrap();
    assert!(matches!(certify_velocity(&traj), Err(Error::NoVelocities(_))));
}

#[test]
fn value_rates_one_step_arithmetic() {
    let op = quad(1);
    let traj = run_proximal(&op, &pt(&[1.0]), &StepSchedule::constant(1.0).unwrap(), 1).unwrap();
    let certs = certify_value_rates(&op, &traj).unwrap();
    let guler = certs.iter().find(|c| c.name == "value_guler").unwrap();
    assert!((guler.per_sample[0].lhs - 0.125).abs() < 1e-15);
    assert!((guler.per_sample[0].rhs - 0.25).abs() < 1e-15);
    let speed = certs.iter().find(|c| c.name == "value_proxspeed").unwrap();
    assert!((speed.per_sample[0].lhs - 0.5).abs() < 1e-15);
    assert!((speed.per_sample[0].rhs - 1.0).abs() < 1e-15);
    assert!(certs.iter().all(|c| c.passed));
}

#[test]
fn value_rates_from_argmin_all_zero() {
    let op = quad(2);
    let traj = run_proximal(&op, &Point::zeros(2), &StepSchedule::constant(0.5).unwrap(), 10)
        .unwrap();
    let certs = certify_value_rates(&op, &traj).unwrap();
    for c in certs {
        assert!(c.passed);
        for s in &c.per_sample {
            assert!(s.lhs.abs() < 1e-15, "{} at {}", c.name, s.at);
        }
    }
}

#[test]
fn value_rates_on_flow_and_euler() {
    let op = quad(2);
    let x0 = pt(&[1.0, -0.5]);
    let flow = reference_flow(&op, &x0, 2.0, 1e-2).unwrap();
    let certs = certify_value_rates(&op, &flow).unwrap();
    assert!(certs.iter().any(|c| c.name == "value_flow"));
    assert!(certs.iter().all(|c| c.passed), "{certs:?}");

    let ball = build_operator(&OperatorSpec::DistSquared {
        set: SetSpec::Ball { center: vec![0.0, 0.0], radius: 1.0 },
    })
    .unwrap();
    let euler = run_euler(&ball, &pt(&[2.0, 0.0]), &StepSchedule::power(1.0, 1.0).unwrap(), 200)
        .unwrap();
    let certs = certify_value_rates(&ball, &euler).unwrap();
    let running = certs.iter().find(|c| c.name == "value_euler_running_min").unwrap();
    assert!(running.passed);
    assert!(running.per_sample.last().unwrap().rhs < 1e-8, "running min reaches f*");

    let skew_flow = reference_flow(&skew(), &pt(&[1.0, 0.0]), 1.0, 1e-2).unwrap();
    assert!(matches!(
        certify_value_rates(&skew(), &skew_flow),
        Err(Error::NoObjective(_))
    ));
}

#[test]
fn integral_solution_examples() {
    let op = quad(1);
    let flow = reference_flow(&op, &pt(&[1.0]), 1.0, 5e-3).unwrap();
    // probe on the graph: y = A x = x
    let cert = certify_integral_solution(
        &op,
        &flow,
        &[(pt(&[0.5]), pt(&[0.5]))],
        &[(0.0, 1.0), (0.25, 0.75)],
    )
    .unwrap();
    assert!(cert.passed, "min margin {}", cert.min_margin);
    // closed form at (s,t) = (0,1): margin = rhs - lhs ~ 0.0503
    let first = &cert.per_sample[0];
    assert!((first.margin - 0.0503).abs() < 5e-3, "{}", first.margin);

    // solution probe with zero image: rhs = 0, lhs <= 0 by Fejér
    let cert =
        certify_integral_solution(&op, &flow, &[(Point::zeros(1), Point::zeros(1))], &[(0.0, 1.0)])
            .unwrap();
    assert!(cert.passed);
    assert!(cert.per_sample[0].rhs.abs() < 1e-12);

    // off-graph probe is rejected
    assert!(matches!(
        certify_integral_solution(&op, &flow, &[(pt(&[0.5]), pt(&[0.9]))], &[(0.0, 1.0)]),
        Err(Error::InvalidProbe(_))
    ));
}

#[test]
fn integral_solution_skew_margins_within_slack() {
    // skew pairing <M(u-x), u-x> vanishes: margins are zero up to numerics,
    // the certified slack must absorb them
    let op = skew();
    let flow = reference_flow(&op, &pt(&[1.0, 0.0]), 2.0, 2e-2).unwrap();
    let probes = vec![
        (pt(&[0.5, 0.2]), op.forward_eval(&pt(&[0.5, 0.2])).unwrap()),
        (pt(&[-0.3, 0.4]), op.forward_eval(&pt(&[-0.3, 0.4])).unwrap()),
    ];
    let cert = certify_integral_solution(&op, &flow, &probes, &[(0.0, 1.0), (0.5, 2.0)]).unwrap();
    assert!(cert.passed, "min margin {} slack {}", cert.min_margin, cert.slack);
}

#[test]
fn almost_orbit_self_gap_vanishes() {
    let op = quad(2);
    let sched = StepSchedule::constant(0.5).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 0.3]), &sched, 40).unwrap();
    let system = SystemDescriptor::Proximal { schedule: sched };
    // probe at sample times with sample-aligned offsets
    let series = almost_orbit_gap(&op, &traj, &system, &[0.5, 5.0], &[0.5, 2.0, 5.0]).unwrap();
    for (t, gap) in series {
        assert!(gap <= 1e-10, "gap {gap} at t={t}");
    }
}

#[test]
fn almost_orbit_rejects_out_of_range_offsets() {
    let op = quad(2);
    let sched = StepSchedule::constant(0.5).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 0.3]), &sched, 10).unwrap();
    let system = SystemDescriptor::Proximal { schedule: sched };
    // horizon is sigma_10 = 5.0; t + h = 6 falls outside
    assert!(matches!(
        almost_orbit_gap(&op, &traj, &system, &[2.0], &[4.0]),
        Err(Error::OutOfRange(..))
    ));
}

#[test]
fn almost_orbit_proximal_vs_flow_gap_decays() {
    let op = quad(2);
    let sched = StepSchedule::power(1.0, 0.75).unwrap();
    let traj = run_proximal(&op, &pt(&[1.0, 0.5]), &sched, 4000).unwrap();
    let system = SystemDescriptor::default();
    let series =
        almost_orbit_gap(&op, &traj, &system, &[1.0, 10.0, 20.0], &[0.5, 1.0, 2.0, 4.0]).unwrap();
    assert!(series[2].1 < series[0].1, "{series:?}");
    assert!(series[2].1 <= 0.1 * series[0].1 + 1e-6, "{series:?}");
}

#[test]
fn tampered_trajectory_fails_certification() {
    // fault injection: scaling one sequence breaks the two-sequence bound,
    // so a broken resolvent could not slip through the certificate
    let op = quad(2);
    let sched = StepSchedule::power(1.0, 1.0).unwrap();
    let x0 = pt(&[1.0, 0.0]);
    let a = run_proximal(&op, &x0, &sched, 60).unwrap();
    let mut samples: Vec<crate::schemes::Sample> = a.samples().to_vec();
    for s in samples.iter_mut().skip(1) {
        s.point = s.point.scale(3.0).add(&pt(&[2.0, 2.0]));
    }
    let tampered = crate::schemes::Trajectory::new(
        samples,
        a.provenance.clone(),
        false,
    )
    .unwrap();
    let cert = certify_kobayashi(&op, &a, &tampered, &Point::zeros(2), PairGrid::Full).unwrap();
    assert!(!cert.passed, "tampered run must violate the bound");
    assert!(cert.min_margin < -1e-3);

    let vel = certify_fejer(&op, &tampered, &Point::zeros(2)).unwrap();
    assert!(!vel.passed, "tampered run is not Fejér monotone");
}

#[test]
fn certificates_are_deterministic() {
    let op = skew();
    let a = run_proximal(&op, &pt(&[1.0, 0.0]), &StepSchedule::power(1.0, 1.0).unwrap(), 80)
        .unwrap();
    let b = run_proximal(&op, &pt(&[0.5, 0.5]), &StepSchedule::constant(0.2).unwrap(), 80)
        .unwrap();
    let u = pt(&[0.1, -0.2]);
    let c1 = certify_kobayashi(&op, &a, &b, &u, PairGrid::default()).unwrap();
    let c2 = certify_kobayashi(&op, &a, &b, &u, PairGrid::default()).unwrap();
    assert_eq!(c1.per_sample.len(), c2.per_sample.len());
    for (x, y) in c1.per_sample.iter().zip(&c2.per_sample) {
        assert_eq!(x.margin.to_bits(), y.margin.to_bits());
    }
}
