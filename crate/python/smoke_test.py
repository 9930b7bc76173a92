"""Smoke test for the fqnm extension module.

Build first, e.g. `maturin develop -m crates/python/Cargo.toml`, then run
`python python/smoke_test.py`.
"""

import math

import fqnm


def main():
    scale = fqnm.QuantScale(1e-3)
    u = [0.0, 0.0005, 0.0015, -0.0015, 1.2345678]
    q = scale.quantize(u)
    assert q == [0, 1, 2, -2, 1235], q
    assert scale.check_bound(u) <= 0.5e-3 + 1e-15

    n = 64
    dx = 1.0 / n
    adv = fqnm.Stepper(dt=dx, dx=dx, delta=1e-3, model=fqnm.FluxModel.advection(1.0))
    q0 = scale.quantize([math.sin(2 * math.pi * i / n) for i in range(n)])
    q1, _ = adv.step(q0)
    assert q1 == q0[-1:] + q0[:-1], "CFL=1 advection must shift by one cell"
    q_end, masses = adv.run(q0, n)
    assert q_end == q0
    assert len(set(masses)) == 1

    burgers = fqnm.Stepper(dt=0.9 * dx, dx=dx, delta=1e-3, model=fqnm.FluxModel.burgers())
    q_b, masses_b = burgers.run(q0, 200)
    assert set(masses_b) == {fqnm.total_mass(q0)}
    assert max(q_b) <= max(q0) and min(q_b) >= min(q0)

    assert abs(fqnm.hopf_lax(0.3, 0.1) + fqnm.hopf_lax(0.7, 0.1)) < 1e-8

    report = fqnm.verify_monotone_stencil(fqnm.FluxModel.burgers(), 0.4, 0.02, 20)
    assert report["passed"] and report["counterexample"] is None, report

    shu = fqnm.shu_osher(n_cells=200, t_final=0.2)
    assert min(shu["rho"]) > 0 and min(shu["p"]) > 0

    print("fqnm python smoke test: ok")


if __name__ == "__main__":
    main()
