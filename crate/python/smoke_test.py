"""Smoke test for the `chaoslab` extension module.

Build the module and put it on the path first, e.g.

    cargo build --release -p chaoslab-py --features extension-module
    cp target/release/libchaoslab.so python/chaoslab.so
    python3 python/smoke_test.py
"""

import math

import chaoslab


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    p = chaoslab.Params()
    assert p.to_list() == [1.0, 1.0, 2.3, 2.0, 1.0, 6.0, 1.0, -0.25]
    assert chaoslab.Params.multistable().a8 == 1.2

    s = [0.3, -1.2, 2.0]
    f = chaoslab.vector_field(p, s)
    g = chaoslab.vector_field(p, [-s[0], -s[1], s[2]])
    assert f[0] == -g[0] and f[1] == -g[1] and f[2] == g[2]
    j = chaoslab.jacobian(p, s)
    assert close(chaoslab.divergence(p, s), j[0][0] + j[1][1] + j[2][2], 1e-12)

    eq = chaoslab.equilibria(p)
    assert close(eq["r_minus"], -1.4637, 1e-4)
    e6 = chaoslab.stability(p.with_a8(1.2), "E6")
    assert e6["max_re"] <= 1e-6, e6

    times, states, escaped = chaoslab.simulate(
        chaoslab.Params.multistable(), [-1.0, -1.0, 0.0], 100.0, transient=20.0
    )
    assert not escaped and len(times) == len(states) > 1000
    assert all(x < 0 for x, _, _ in states)

    run = chaoslab.lyapunov_spectrum(p, iterations=50_000, transient=50.0)
    assert run["L1"] > 0.2 and run["L3"] < -4.0, run
    assert close(chaoslab.kaplan_yorke([0.475, 0.0, -5.509]), 2.086, 1e-3)

    label = chaoslab.classify_ic(chaoslab.Params.multistable(), [1.0, -1.0, -1.4637])
    assert label in ("chaotic-1", "chaotic-2", "fixed-point-1", "fixed-point-2"), label

    radii = [10.0 ** k for k in range(1, 7)]
    fit = chaoslab.fit_power_law(radii, [0.38 * r ** -0.051 for r in radii])
    assert close(fit["gamma"], 0.051, 1e-9) and fit["class"] == 3

    bom = chaoslab.synthesize(p)
    assert [r / 1e3 for r in bom["resistors"][:8]] == [1000, 100, 130, 500, 33, 166, 33, 400]
    assert chaoslab.synthesize(p.with_a8(1.2))["resistors"][7] == 83e3

    rows = chaoslab.bifurcation(p, a8_start=-0.3, a8_end=-0.2, n_points=3, t_end=60.0, transient=20.0)
    assert rows and all(-0.3 - 1e-12 <= a8 <= -0.2 + 1e-12 for a8, _ in rows)

    nav = chaoslab.navigate(p, t_end=20.0, xmax=31.6)
    assert 0.0 < nav["coverage"] <= 1.0
    assert all(0.0 <= st[3] <= 10.0 and 0.0 <= st[4] <= 10.0 for st in nav["states"])

    try:
        chaoslab.stability(p, "E9")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown equilibrium accepted")
    assert math.isfinite(run["dky"])
    print("python smoke test passed")


if __name__ == "__main__":
    main()
