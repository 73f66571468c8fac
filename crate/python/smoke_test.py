#!/usr/bin/env python3
"""Smoke test for the monoflow Python extension.

Builds nothing itself: it locates the compiled cdylib under target/, exposes
it as an importable module, and exercises the main types and operations.

    cargo build --release -p monoflow-py
    python3 python/smoke_test.py
"""

import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def import_monoflow():
    candidates = [
        ROOT / "target" / "release" / "libmonoflow.so",
        ROOT / "target" / "debug" / "libmonoflow.so",
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        sys.exit("build the extension first: cargo build --release -p monoflow-py")
    stage = Path(tempfile.mkdtemp(prefix="monoflow-py-"))
    shutil.copy2(lib, stage / "monoflow.so")
    sys.path.insert(0, str(stage))
    import monoflow

    return monoflow


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    mf = import_monoflow()

    # operators: resolvent, Yosida, objective, Moreau envelope
    quad = mf.Operator.quadratic([[1.0, 0.0], [0.0, 1.0]])
    assert quad.dim == 2 and quad.forward_capable
    approx(quad.resolvent(1.0, [2.0, 0.0])[0], 1.0)
    approx(quad.yosida(1.0, [2.0, 0.0])[0], 1.0)
    approx(quad.objective([1.0, 0.0]), 0.5)
    approx(quad.moreau(1.0, [2.0, 0.0]), 1.0)
    approx(quad.minimal_section_norm([3.0, 4.0]), 5.0)
    approx(quad.distance_to_solutions([3.0, 4.0]), 5.0)

    cone = mf.Operator.parse(
        'kind = "normal_cone"\nset = { kind = "ball", center = [0.0, 0.0], radius = 1.0 }'
    )
    approx(cone.resolvent(3.7, [0.0, 3.0])[1], 1.0)
    assert cone.objective([0.0, 3.0]) == math.inf

    # proximal run: x_n = 2^-n for unit steps on the identity quadratic
    sched = mf.Schedule.constant(1.0)
    traj = mf.run_proximal(quad, [1.0, 0.0], sched, 3)
    approx(traj.points()[-1][0], 0.125, 1e-12)
    assert len(traj) == 4
    assert mf.Schedule.power(1.0, 1.0).classify() == ("no", "yes")

    # the rotation dichotomy: iterates stall, averages shrink
    skew = mf.Operator.skew([[0.0, 1.0], [-1.0, 0.0]])
    rot = mf.run_proximal(skew, [1.0, 0.0], mf.Schedule.power(1.0, 1.0), 10_000)
    last = rot.points()[-1]
    avg = rot.average().points()[-1]
    assert math.hypot(*last) > 0.5
    assert math.hypot(*avg) < 0.2
    verdict, _, _, _ = mf.classify(rot)
    assert verdict == "bounded_nonconvergent", verdict

    # certificates
    fejer = mf.certify_fejer(skew, rot, [0.0, 0.0])
    assert fejer.passed and fejer.min_margin >= 0.0
    vel = mf.certify_velocity(rot)
    assert vel.passed
    other = mf.run_proximal(skew, [1.0, 0.0], mf.Schedule.constant(0.1), 10_000)
    kob = mf.certify_kobayashi(skew, rot, other, [0.3, 0.2])
    assert kob.passed and len(kob.samples()) > 0
    expo = mf.certify_exponential_formula(quad, [1.0, 0.0], 1.0, [4, 16, 64])
    assert expo.passed

    # flows: exponential formula endpoint and Tikhonov selection
    flow = mf.reference_flow(quad, [1.0, 0.0], 1.0, 3e-3)
    approx(flow.interpolate(1.0)[0], math.exp(-1.0), 1e-3)
    assert flow.flow_error_bound <= 3e-3
    rank1 = mf.Operator.quadratic([[1.0, 0.0], [0.0, 0.0]])
    tik = mf.run_tikhonov_flow(rank1, [1.0, 1.0], 1.0, 1.0, 1.0, 1000.0, 0.1)
    assert math.hypot(*tik.points()[-1]) < 1e-2

    # analysis: minimum enclosing ball of an equilateral triangle
    center, radius = mf.min_enclosing_ball(
        [[1.0, 0.0], [-0.5, math.sqrt(3) / 2], [-0.5, -math.sqrt(3) / 2]]
    )
    approx(radius, 1.0, 1e-9)
    assert math.hypot(*center) < 1e-9
    long_run = mf.run_proximal(quad, [1.0, 0.7], sched, 200)
    ac = mf.asymptotic_center(long_run, 0.5)
    assert math.hypot(*ac) < 1e-6

    # harness: validation errors and a full experiment round trip
    try:
        mf.load_config("nonsense = true")
        sys.exit("expected a config validation error")
    except ValueError:
        pass
    assert "rotation-average" in mf.preset_names()
    out = Path(tempfile.mkdtemp(prefix="monoflow-exp-"))
    files = mf.run_experiment(mf.preset("cl-convergence"), "cl-convergence", str(out))
    paths = [Path(f) for f in files]
    assert all(p.exists() for p in paths), files
    report = json.loads((out / "cl-convergence.json").read_text())
    certs = {c["name"]: c["passed"] for c in report["certificates"]}
    assert certs == {"exponential_formula": True}

    print("monoflow python smoke test: all checks passed")


if __name__ == "__main__":
    main()
