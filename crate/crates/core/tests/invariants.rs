//! Cross-module property tests: randomized inputs against the algebraic
//! guarantees that every catalog operator and scheme must satisfy.

use monoflow_core::analysis::{brute_force_meb_radius, min_enclosing_ball};
use monoflow_core::operators::{build_operator, MapSpec, OperatorSpec, SetSpec};
use monoflow_core::point::Point;
use monoflow_core::schemes::{run_proximal, StepSchedule};
use proptest::prelude::*;

fn pt(c: &[f64]) -> Point {
    Point::new(c.to_vec()).unwrap()
}

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn lambda() -> impl Strategy<Value = f64> {
    prop_oneof![0.01..0.1f64, 0.1..1.0f64, 1.0..10.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolvents_are_nonexpansive(
        lam in lambda(),
        x in prop::array::uniform2(coord()),
        y in prop::array::uniform2(coord()),
        q00 in 0.1..3.0f64,
        q11 in 0.0..3.0f64,
        q01 in -0.3..0.3f64,
    ) {
        // symmetric PSD by diagonal dominance
        let q = vec![vec![q00 + 0.3, q01], vec![q01, q11 + 0.3]];
        let ops = vec![
            build_operator(&OperatorSpec::Quadratic { q, b: None }).unwrap(),
            build_operator(&OperatorSpec::Skew { m: vec![vec![0.0, 1.0], vec![-1.0, 0.0]] })
                .unwrap(),
            build_operator(&OperatorSpec::Residual {
                map: MapSpec::Rotation { angle: 1.1 },
            })
            .unwrap(),
            build_operator(&OperatorSpec::SoftAbs { dim: 2 }).unwrap(),
        ];
        let (x, y) = (pt(&x), pt(&y));
        for op in ops {
            let res = op.resolvent_map(lam).unwrap();
            let d = res.apply(&x).unwrap().dist(&res.apply(&y).unwrap());
            prop_assert!(d <= x.dist(&y) + 1e-10, "{} lambda={lam}", op.id());
        }
    }

    #[test]
    fn proximal_is_fejer_monotone_toward_solutions(
        x0 in prop::array::uniform2(coord()),
        c in 0.05..2.0f64,
        p in 0.0..1.0f64,
    ) {
        let op = build_operator(&OperatorSpec::Quadratic {
            q: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            b: None,
        })
        .unwrap();
        let sched = StepSchedule::power(c, p).unwrap();
        let traj = run_proximal(&op, &pt(&x0), &sched, 40).unwrap();
        let s = traj.samples();
        for k in 1..s.len() {
            prop_assert!(s[k].point.norm() <= s[k - 1].point.norm() + 1e-12);
        }
    }

    #[test]
    fn interpolation_stays_on_segment(
        t in 0.0..1.0f64,
        a in prop::array::uniform2(coord()),
        b in prop::array::uniform2(coord()),
    ) {
        let op = build_operator(&OperatorSpec::Quadratic {
            q: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            b: None,
        })
        .unwrap();
        let _ = op;
        let samples = vec![
            monoflow_core::schemes::Sample { index: 0, time: 0.0, point: pt(&a), velocity: None },
            monoflow_core::schemes::Sample { index: 1, time: 1.0, point: pt(&b), velocity: None },
        ];
        let traj = monoflow_core::schemes::Trajectory::new(
            samples,
            monoflow_core::schemes::Provenance {
                scheme: "test".into(),
                operator_id: "t".into(),
                schedule_id: "t".into(),
                seed: None,
            },
            false,
        )
        .unwrap();
        let z = traj.interpolate(t).unwrap();
        // on the segment: dist(a, z) + dist(z, b) = dist(a, b)
        let (a, b) = (pt(&a), pt(&b));
        prop_assert!((a.dist(&z) + z.dist(&b) - a.dist(&b)).abs() <= 1e-9);
    }

    #[test]
    fn meb_covers_and_matches_oracle(
        pts in prop::collection::vec(prop::array::uniform2(-5.0..5.0f64), 1..10),
    ) {
        let points: Vec<Point> = pts.iter().map(|c| pt(c)).collect();
        let ball = min_enclosing_ball(&points).unwrap();
        for p in &points {
            prop_assert!(p.dist(&ball.center) <= ball.radius + 1e-9);
        }
        let oracle = brute_force_meb_radius(&points).unwrap();
        prop_assert!((ball.radius - oracle).abs() <= 1e-6 * (1.0 + oracle));
    }

    #[test]
    fn schedule_sums_grow_and_match_direct_sums(
        c in 0.1..2.0f64,
        p in 0.0..1.5f64,
        n in 1usize..40,
    ) {
        let sched = StepSchedule::power(c, p).unwrap();
        let (sigma, tau) = sched.cumulative(n).unwrap();
        let direct: f64 = (1..=n).map(|k| c * (k as f64).powf(-p)).sum();
        prop_assert!((sigma - direct).abs() <= 1e-12 * (1.0 + direct));
        prop_assert!(tau > 0.0 && sigma > 0.0);
        if n > 1 {
            let (s_prev, t_prev) = sched.cumulative(n - 1).unwrap();
            prop_assert!(sigma > s_prev && tau > t_prev);
        }
    }

    #[test]
    fn normal_cone_resolvent_is_lambda_free(
        x in prop::array::uniform2(coord()),
        l1 in lambda(),
        l2 in lambda(),
    ) {
        let op = build_operator(&OperatorSpec::NormalCone {
            set: SetSpec::Ball { center: vec![0.0, 0.0], radius: 1.0 },
        })
        .unwrap();
        let x = pt(&x);
        let a = op.resolvent(l1, &x).unwrap();
        let b = op.resolvent(l2, &x).unwrap();
        prop_assert!(a.dist(&b) <= 1e-14);
    }
}
