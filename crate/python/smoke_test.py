"""Build the extension, import it and exercise the main entry points.

    python3 python/smoke_test.py
"""

import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]


def load():
    subprocess.run(
        ["cargo", "build", "-p", "jacobian-bounds-py", "--features", "extension-module", "--release"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libjacobian_bounds_py.so"
    tmp = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "jacobian_bounds.so")
    sys.path.insert(0, str(tmp))
    import jacobian_bounds

    return jacobian_bounds


def main():
    jb = load()

    assert jb.min_poly_2cos_str(7) == "x^3 + x^2 - 2x - 1"
    assert jb.min_poly_2cos(7, negate=True) == ["1", "-2", "-1", "1"]

    content, factors = jb.factor([-2, 0, 2])
    assert content == "2"
    assert sorted(factors) == [(["-1", "1"], 1), (["1", "1"], 1)]

    k = jb.NumberField.sophie(11)
    assert k.degree == 5
    assert k.is_square([4]) and not k.is_square([2])
    root = k.sqrt(k.mul([0, 1], [0, 1]))
    assert root in (["0", "1", "0", "0", "0"], ["0", "-1", "0", "0", "0"])
    assert k.norm([0, 1]) in ("1", "-1")
    assert len(k.signature([0, 1])) == 5
    assert k.independence_rank([[2], [3], [6]]) == 2

    cubic = jb.NumberField([1, -4, 1, 1])
    assert cubic.discriminant == "169"

    assert jb.two_inert_in_real_cyclotomic(5)
    assert not jb.two_inert_in_real_cyclotomic(41)

    q, p, _, ok = jb.certify_rho(23)
    assert (q, p, ok) == (23, 11, True)
    scan = jb.scan_rho(100, threads=2)
    assert [row[0] for row in scan] == [7, 11, 23, 47, 59, 83]
    assert all(row[3] for row in scan)

    line, upper, lower = jb.washington_bound(143)
    assert upper == 5 and lower is None and line.startswith("curve=wash:143 ")

    for q, up, lo in [(7, 1, 1), (11, 2, 2), (23, 5, 4), (47, 11, 6)]:
        assert jb.sophie_upper_bound(q)[1] == up, q
        assert jb.sophie_lower_bound(q) == (lo, False), q

    _, upper, _ = jb.sophie_upper_bound(83, scan_bound=0)
    assert upper == 40

    assert jb.lower_bound_from_points([1, -2, -1, 1], y0=1) == (1, 3, False)

    try:
        jb.washington_bound(3)
    except ValueError:
        pass
    else:
        raise AssertionError("m=3 is outside the family")

    print("smoke test ok")


if __name__ == "__main__":
    main()
