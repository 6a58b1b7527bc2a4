import cmath
import math
import random

import pytest

import bohrgap


def test_primes_and_lattice():
    assert [bohrgap.prime_at(k) for k in range(1, 6)] == [2, 3, 5, 7, 11]
    lat = bohrgap.build_level(2, "1,1", 2)
    assert lat["r"] == [4, 4]
    assert len(lat["n"]) == 16
    assert lat["n"] == sorted(lat["n"])
    blocks = lat["prime_blocks"]
    for n, (i, j) in zip(lat["n"], lat["index"]):
        assert n == blocks[0][i] * blocks[1][j]
    assert max(blocks[0]) < min(blocks[1])


def test_structure_checks_clean():
    counts = bohrgap.structure_checks(3, "1,1,1", 3)
    assert set(counts) >= {"lattice_ordering", "block_disjointness", "index_bijection"}
    assert all(v == 0 for v in counts.values())


def test_cascade_matches_direct():
    rng = random.Random(4)
    r = [4, 8]
    blocks = [[cmath.exp(1j * rng.uniform(0, 2 * math.pi)) for _ in range(k)] for k in r]
    a = bohrgap.evaluate(r, blocks, cascade=True)
    b = bohrgap.evaluate(r, blocks, cascade=False)
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_norms():
    n = bohrgap.norms([4, 8])
    assert n["wiener"] == 32
    w = bohrgap.sup_norm_lower([4, 8], budget=50, seed=1)
    assert w["value"] <= n["sup_upper"] + 1e-9
    assert abs(bohrgap.walsh_norm_identity_check(4, 8, [1, 2j, -1, 0.5]) - 1) < 1e-12


def test_bounds_exact():
    b = bohrgap.bounds(2, [1, 1])
    assert b["exact"]["sigmaA_lower"] == "1/4"
    assert b["exact"]["sigmaC_upper"] == "-1/4"
    g = bohrgap.bounds(3, "3/4,1,1")
    assert g["valid"]


def test_experiments_run():
    assert bohrgap.verify(Lmax=3)["passed"]
    assert bohrgap.bounded(Lmax=3, samples=10)["passed"]
    assert bohrgap.diverge(Lmax=8, sigma=0.2)["passed"]
    conv = bohrgap.converge(Lmax=4)
    assert conv["epsilon"] == pytest.approx(0.25)
    rep = bohrgap.kronecker(L_K=1, delta=0.2, t_max=1e5)
    assert rep["achieved"]
    assert math.hypot(*rep["partialSum"]) >= rep["bound"]


def test_partial_sum_boundaries():
    vals = bohrgap.partial_sum(2, "1,1", 2, 2.0)
    assert len(vals) == 2
    assert abs(vals[0]) > 0


def test_errors():
    with pytest.raises(ValueError):
        bohrgap.bounds(2, "1,1/2")
    with pytest.raises(bohrgap.NonPositiveEpsilon):
        bohrgap.epsilon(3, "1,1,1")
    with pytest.raises(ValueError):
        bohrgap.kronecker(mode="other")
