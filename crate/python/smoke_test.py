#!/usr/bin/env python3
"""Smoke test for the gdiscord_py extension module.

Build the extension first:

    cargo build -p gdiscord-py            # or --release

then run this script from anywhere inside the repository:

    python3 python/smoke_test.py
"""

import math
import os
import shutil
import sys
import tempfile


def load_module():
    here = os.path.dirname(os.path.abspath(__file__))
    root = os.path.dirname(here)
    candidates = [
        os.path.join(root, "target", profile, name)
        for profile in ("release", "debug")
        for name in ("libgdiscord_py.so", "gdiscord_py.so", "libgdiscord_py.dylib")
    ]
    built = next((c for c in candidates if os.path.exists(c)), None)
    if built is None:
        sys.exit("extension not built; run `cargo build -p gdiscord-py` first")
    stage = tempfile.mkdtemp(prefix="gdiscord-py-")
    shutil.copy(built, os.path.join(stage, "gdiscord_py.so"))
    sys.path.insert(0, stage)
    import gdiscord_py

    return gdiscord_py


def approx(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    gd = load_module()

    # Bell state: both bounds and both oracles give 1/2.
    bell = gd.DensityMatrix.bell()
    rep = gd.bounds_report(bell)
    approx(rep.tight, 0.5, 1e-12)
    approx(rep.luo_fu, 0.5, 1e-12)
    assert rep.dominance_ok
    approx(gd.dakic_two_qubit(bell), 0.5, 1e-12)
    value, evals = gd.qubit_measurement_min(bell, grid=500, refine=20)
    approx(value, 0.5, 1e-9)
    assert evals >= 500

    # Werner family: discord p^2/2.
    for p in (0.0, 0.3, 0.7, 1.0):
        w = gd.DensityMatrix.werner(p)
        approx(gd.dakic_two_qubit(w), p * p / 2.0, 1e-12)

    # Two-qutrit family: dominance plus sane spectra.
    rho = gd.DensityMatrix.eq52(0.8)
    rep = gd.bounds_report(rho)
    assert rep.tight >= rep.luo_fu - 1e-10
    assert len(rep.eta) == 8 and len(rep.lam) == 9
    x, y, t = gd.decompose(rho)
    assert len(x) == 8 and len(y) == 8
    assert len(t) == 8 and len(t[0]) == 8

    # Monte-Carlo upper bound sandwiches the tight bound and is seeded.
    up1 = gd.measurement_upper_bound(rho, 200, 7)
    up2 = gd.measurement_upper_bound(rho, 200, 7)
    assert up1 == up2
    assert up1 >= rep.tight - 1e-9

    # Exactness on a random 2x3 state.
    r = gd.DensityMatrix.random(2, 3, 4, 99)
    rep = gd.bounds_report(r)
    value, _ = gd.qubit_measurement_min(r)
    approx(value, rep.tight, 1e-5)

    # State file round trip.
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "state.dat")
        r.save(path)
        back = gd.DensityMatrix.from_file(path)
        assert back.bipartition() == (2, 3)
        for i in range(6):
            for j in range(6):
                a = r.entry(i, j)
                b = back.entry(i, j)
                assert a == b, f"entry ({i},{j}) changed in round trip"

    # CSV sweep comes back with header and rows.
    csv = gd.sweep_csv("werner", steps=5)
    lines = csv.strip().split("\n")
    assert lines[0] == "p,tight_raw,tight,luo_fu"
    assert len(lines) == 6

    # Validation errors surface as ValueError.
    try:
        gd.DensityMatrix.eq52(1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range p accepted")

    print("gdiscord_py smoke test: OK")
    assert not math.isnan(rep.tight)


if __name__ == "__main__":
    main()
