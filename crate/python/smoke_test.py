"""Smoke test for the proplab_py extension: python python/smoke_test.py"""
import math

import proplab_py as pl

xs = pl.grid_points(64, 8.0)
assert len(xs) == 64 and xs[0] == -8.0
h = xs[1] - xs[0]
assert abs(xs[-1] - (-8.0 + 63 * h)) < 1e-12

cfg = {"grid.n": 256, "grid.L": 20, "R": 4, "M": 3, "potential.kind": "lorentzian"}
v = pl.potential([0.0, 1.0, 2.0], cfg)
assert all(abs(a - b) < 1e-15 for a, b in zip(v, [1.0, 0.5, 0.2])), v
vb = pl.v_beta([1.0], 0.3, cfg)[0]
# Lorentzian closed form: sin(2β) x² / |1 + e^{2iβ} x²|²
exact = math.sin(0.6) / abs(1 + complex(math.cos(0.6), math.sin(0.6))) ** 2
assert abs(vb - exact) < 1e-14, (vb, exact)

rep = pl.certify(cfg)
tanh = [c for c in rep["certificates"] if c["name"] == "commutator_tanh"]
assert tanh and tanh[0]["passed"], rep["summary"]

bad = pl.certify(dict(cfg, R=0.5, allow_subcritical=True))
assert not bad["passed"]

try:
    pl.certify(dict(cfg, R=0.5))
except ValueError as e:
    assert "2/pi" in str(e), e
else:
    raise AssertionError("subcritical R accepted")

mono = pl.run({"grid.n": 256, "grid.L": 40, "R": 4, "M": 3, "initial.x0": 10, "initial.k0": -2, "time.steps": 100})
assert mono["passed"] and mono["kind"] == "monotonic_decay", mono["summary"]
m = mono["series"]["m"]
assert len(m) == 101 and m[-1] < m[0]

print("proplab_py smoke test ok")
