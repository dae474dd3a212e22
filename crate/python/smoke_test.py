#!/usr/bin/env python3
"""Smoke test for the pyfibpell extension module.

Builds the cdylib if needed, loads it, and exercises the main surfaces:
certified intervals, sequence terms, the stage-1 bound, the reduction
campaign, and the exhaustive search.

Run from the repository root:  python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import sysconfig
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_import():
    try:
        import pyfibpell  # noqa: F401

        return pyfibpell
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "-p", "pyfibpell", "--release"], cwd=ROOT, check=True
    )
    built = ROOT / "target" / "release" / "libpyfibpell.so"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = ROOT / "python" / f"pyfibpell{suffix}"
    shutil.copyfile(built, target)
    sys.path.insert(0, str(ROOT / "python"))
    import pyfibpell

    return pyfibpell


def main():
    fp = build_and_import()

    # Sequence terms are exact integers.
    fib = fp.Recurrence.fibonacci()
    pell = fp.Recurrence.pell()
    assert fib.term(10) == 55
    assert fib.term(12) == 144
    assert pell.term(7) == 169
    assert pell.term(100) == pell.term(99) * 2 + pell.term(98)
    print("sequence terms: ok")

    # Certified constants carry the expected digits.
    c1, c1_radius = fp.constant_digits("c1", 50)
    assert c1.startswith("1.83157"), c1
    c2, _ = fp.constant_digits("c2", 50)
    assert c2.startswith("5.45979"), c2  # 0.545979… in scientific form
    print(f"constants: c1 = {c1[:12]}..., radius {c1_radius}")

    # Interval arithmetic: log(alpha)/log(gamma) nests inside c2.
    alpha = fp.Interval.constant("alpha", 60)
    gamma = fp.Interval.constant("gamma", 60)
    ratio = alpha.log().div(gamma.log())
    c2_interval = fp.Interval.constant("c2", 40)
    assert c2_interval.contains(ratio)
    assert ratio.nearest_int_distance().approx(6).startswith("4.5402")  # ‖τ‖ = 0.4540…
    print("interval arithmetic: ok")

    # Division by an interval containing zero must raise.
    zero = fp.Interval.from_int(0)
    try:
        alpha.div(zero)
        raise AssertionError("division by zero interval must fail")
    except ZeroDivisionError:
        pass
    print("error paths: ok")

    # Stage-1 absolute bounds match the certified caps.
    assert fp.absolute_bound("fpp") <= 5 * 10**30
    assert fp.absolute_bound("ffp") <= 7 * 10**30
    print("stage-1 bounds: ok")

    # The replayed convergent is reproduced bit-exactly.
    convs = fp.tau_convergents(3 * 10**36)
    p74, q74 = convs[fp.REPLAY_CONVERGENT_INDEX]
    assert p74 == 2037068391552562960855777461929676271
    assert q74 == 3731035235978315437343082205475618926
    print("convergent 74: ok")

    # One reduction campaign end to end.
    idx, q, eps, bound, effective = fp.reduce_stage("fpp", "lambda1")
    assert idx == fp.REPLAY_CONVERGENT_INDEX and q == q74
    assert eps.startswith("4.06"), eps
    assert bound == 49 and effective == 49
    print(f"reduction: eps = {eps}, m <= {bound}")

    # Exhaustive search: the solution lists.
    fpp = fp.search("fpp", 400, 100)
    assert (12, 4, 4, 144) in fpp
    assert (3, 1, 2, 2) in fpp  # F_3 = 2 = P_1 · P_2
    assert sorted({k for k, _, _, _ in fpp}) == [1, 2, 3, 5, 12]
    ffp = fp.search("ffp", 400, 100)
    assert (7, 7, 7, 169) in ffp
    assert sorted({k for k, _, _, _ in ffp}) == [1, 2, 3, 7]
    print("search: ok")

    # Full verification emits a parseable certificate.
    cert = json.loads(fp.verify("ffp"))
    assert cert["stage2"]["m_bound_reduced"] == "90"
    assert cert["stage2"]["n_bound_reduced"] == "94"
    assert cert["stage3"]["k_set"] == [1, 2, 3, 7]
    print("verify: certificate ok")

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
