#!/usr/bin/env python3
"""Smoke test for the _bardyn extension module.

Builds are found in target/release or target/debug (run
`cargo build -p bardyn-python [--release]` first); the cdylib is staged into
a temp directory under the importable name.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def stage_module() -> None:
    candidates = [
        ROOT / "target" / "release" / "lib_bardyn.so",
        ROOT / "target" / "debug" / "lib_bardyn.so",
        ROOT / "target" / "release" / "lib_bardyn.dylib",
        ROOT / "target" / "debug" / "lib_bardyn.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("cdylib not found; run `cargo build -p bardyn-python` first")
    stage = Path(tempfile.mkdtemp(prefix="bardyn-py-"))
    shutil.copy(built, stage / "_bardyn.so")
    sys.path.insert(0, str(stage))


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main() -> None:
    stage_module()
    import _bardyn as bd

    # the four-critical-value sphere: bars (0, inf), (1, 2], (3, inf)
    sphere = bd.F2Complex.sphere_demo()
    bars = sphere.barcode().bars()
    assert bars == [(0.0, None, 1), (1.0, 2.0, 1), (3.0, None, 1)], bars
    assert sphere.barcode().beta_max() == 1.0
    # the rank-formula route agrees
    assert sphere.rank_formula_barcode().bars() == bars
    # perturbation moves the barcode by at most the realized shift; use a
    # complex with action gaps (lower-star ties leave no room to move)
    pair = bd.F2Complex.from_json(
        '{"coefficients": "F2",'
        ' "generators": [{"id": "b", "action": 1.0}, {"id": "a", "action": 5.0}],'
        ' "boundary": [{"from": "a", "to": "b"}]}'
    )
    perturbed, shift = pair.perturb_actions(0.01, seed=5)
    d = pair.barcode().bottleneck(perturbed.barcode())
    assert d <= shift + 1e-12, (d, shift)
    print(f"sphere barcode ok; perturbation bottleneck {d:.2e} <= shift {shift:.2e}")

    # a Novikov pair: d(a) = b + T^2 c at actions 3, 1, 0
    text = (ROOT / "demos" / "novikov_pair.json").read_text()
    nov = bd.NovikovComplex.from_json(text)
    bc = nov.unpinned_barcode()
    assert bc.lengths() == [2.0] and bc.infinite == 1, repr(bc)
    assert nov.dual().unpinned_barcode().lengths() == [2.0]
    assert nov.isolated_count(1.5) == 3  # arrows have lengths 2 and 5
    assert bc.b_eps(1.5) == 2 and bc.b_eps(2.0) == 1
    # tensor pairing: {2} x {2} gives {2, 2} plus cross terms with infinity
    tensor_bc = nov.tensor(nov).unpinned_barcode()
    assert tensor_bc.lengths() == [2.0, 2.0, 2.0, 2.0] and tensor_bc.infinite == 1
    print("novikov barcode, duality, tensor ok")

    # exact counts
    cat = '{"kind": "linear_torus", "matrix": [[2, 1], [1, 1]]}'
    count, exact = bd.periodic_count(cat, 2)
    assert exact and count == 5.0, (count, exact)
    assert bd.ellipsoid_generator_count([1.0, math.sqrt(2.0)], 10.0) == 17
    assert bd.flat_torus_count([1.0, 0.0], [0.0, 1.0], 1.5) == 12
    print("periodic / ellipsoid / lattice counts ok")

    # a quick rotation entropy estimate is near zero
    value, per_eps = bd.htop_estimate(
        '{"kind": "rotation", "alpha": 0.37461}', [0.05], k_max=6, budget=4096, seed=3
    )
    assert value <= 0.05, value
    assert len(per_eps) == 1
    print(f"rotation h_top estimate {value:.4f} ok")

    # Cauchy-Crofton for the unit segment: integral of N over lines = 2L
    integral, stderr, ok = bd.crofton_lines(
        [[-0.5, 0.0], [0.5, 0.0]], samples=40000, seed=11
    )
    assert ok and abs(integral - 2.0) < 0.1, (integral, stderr)
    print(f"crofton integral {integral:.3f} (expect 2) ok")

    # the fast acceptance suite
    results = bd.run_verify("fast", seed=17)
    for cid, name, passed, details in results:
        status = "PASS" if passed else "FAIL"
        print(f"  {status} {cid:>2} {name}: {details}")
    assert all(passed for _, _, passed, _ in results)
    print(f"fast verify suite ok ({len(results)} criteria)")
    print("smoke test passed")


if __name__ == "__main__":
    main()
