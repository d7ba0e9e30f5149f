import math

import numpy as np
import pytest

from cubeqmc import measures
from cubeqmc.cbc import Cube
from cubeqmc.dyadic import DyadicPoint, DyadicPointSet
from cubeqmc.errors import ConfigError, NumericValidationError
from cubeqmc.lattice import PolyLatticeRule, plps
from cubeqmc.measures import (
    Integrand,
    builtin_integrand,
    builtin_measure,
    haar_coeff,
    integration_error,
    lambda_jm,
    lemma1_bound,
    map_points,
    qmc_estimate,
)
from cubeqmc.walsh import HaarIndex, haar


def all_builtins(tmp_path):
    table = tmp_path / "cdf.txt"
    xs = np.linspace(0.0, 2.0, 201)
    cs = (xs / 2.0) ** 2  # quadratic CDF on [0, 2]
    table.write_text("\n".join(f"{x} {c}" for x, c in zip(xs, cs)))
    return [
        builtin_measure("uniform", a=0, b=1),
        builtin_measure("uniform", a=-1, b=3),
        builtin_measure("linear"),
        builtin_measure("trunc_exp", rate=1, a=0, b=1),
        builtin_measure("trunc_exp", rate=2.5, a=-1, b=2),
        builtin_measure("table", path=table),
    ]


X1 = Integrand(lambda x: np.asarray(x)[..., 0], lambda u: 1.0 if u == (1,) else 0.0)


class TestBuiltinMeasures:
    def test_uniform(self):
        m = builtin_measure("uniform", a=2, b=4)
        assert m.inv_cdf(0.5) == 3

    def test_linear(self):
        m = builtin_measure("linear")
        assert m.inv_cdf(0.25) == 0.5

    def test_trunc_exp(self):
        m = builtin_measure("trunc_exp", rate=1, a=0, b=1)
        assert m.inv_cdf(0.5) == pytest.approx(0.379885, abs=1e-6)
        # cross-check closed-form inverse against the bisection oracle
        from cubeqmc.measures import _bisect_inverse

        bis = _bisect_inverse(m.cdf, 0.0, 1.0)
        for y in (0.1, 0.5, 0.9):
            assert m.inv_cdf(y) == pytest.approx(bis(y), abs=1e-12)

    def test_bad_params(self):
        with pytest.raises(ConfigError):
            builtin_measure("uniform", a=1, b=1)
        with pytest.raises(ConfigError):
            builtin_measure("trunc_exp", rate=0, a=0, b=1)
        with pytest.raises(ConfigError):
            builtin_measure("nope")

    def test_flat_table_rejected(self, tmp_path):
        path = tmp_path / "flat.txt"
        path.write_text("0 0\n0.5 0.5\n0.6 0.5\n1 1\n")
        with pytest.raises(NumericValidationError):
            builtin_measure("table", path=path)

    def test_roundtrip_all(self, tmp_path):
        for m in all_builtins(tmp_path):
            grid = np.linspace(m.a, m.b, 257)
            for x in grid:
                assert m.inv_cdf(m.cdf(float(x))) == pytest.approx(float(x), abs=1e-10)

    def test_measure_json(self):
        m = measures.measure_from_json({"kind": "trunc_exp", "rate": 1, "a": 0, "b": 1})
        assert m.kind == "trunc_exp"


class TestMapPoints:
    def test_uniform_identity(self):
        pts = plps(PolyLatticeRule(0b111, (1, 2)))
        mes = [builtin_measure("uniform", a=0, b=1)] * 2
        assert np.array_equal(map_points(pts, mes), pts.values())

    def test_linear_sqrt(self):
        pts = DyadicPointSet(np.array([[1]], dtype=np.uint64), 2)
        out = map_points(pts, [builtin_measure("linear")])
        assert out[0, 0] == 0.5

    def test_zero_maps_to_a(self):
        pts = DyadicPointSet(np.zeros((1, 2), dtype=np.uint64), 4)
        mes = [builtin_measure("uniform", a=-3, b=1), builtin_measure("trunc_exp", rate=2, a=5, b=9)]
        assert map_points(pts, mes)[0].tolist() == [-3.0, 5.0]

    def test_dimension_mismatch(self):
        pts = DyadicPointSet(np.zeros((1, 2), dtype=np.uint64), 4)
        with pytest.raises(ConfigError):
            map_points(pts, [builtin_measure("linear")])


class TestQmcEstimate:
    def test_constant_exact(self):
        F = builtin_integrand("constant", Cube.unit(3))
        nodes = np.random.default_rng(0).random((17, 3))
        assert qmc_estimate(F, nodes) == 1.0

    def test_linear_measure_lattice(self):
        pts = plps(PolyLatticeRule(0b111, (1, 2)))
        lin = builtin_measure("linear")
        nodes = map_points(pts, [lin, lin])
        expected = (0 + math.sqrt(0.25) + math.sqrt(0.75) + math.sqrt(0.5)) / 4
        assert qmc_estimate(X1, nodes) == pytest.approx(expected, abs=1e-15)
        err = integration_error(X1, [lin, lin], pts, 2 / 3)
        assert err == pytest.approx(expected - 2 / 3, abs=1e-15)

    def test_error_constant_zero(self):
        pts = plps(PolyLatticeRule(0b111, (1, 2)))
        lin = builtin_measure("linear")
        F = builtin_integrand("constant", Cube.unit(2))
        assert integration_error(F, [lin, lin], pts, 1.0) == 0.0

    def test_full_grid_closed_form(self):
        for m in (2, 5, 8):
            grid = DyadicPointSet(np.arange(1 << m, dtype=np.uint64).reshape(-1, 1), m)
            unif = builtin_measure("uniform", a=0, b=1)
            err = integration_error(X1, [unif], grid, 0.5)
            assert err == pytest.approx(-(2.0 ** (-m - 1)), abs=1e-15)


class TestLambda:
    def test_uniform(self):
        unif = builtin_measure("uniform", a=0, b=1)
        for j in range(6):
            for m in range(1 << j):
                assert lambda_jm(unif, j, m) == pytest.approx(2.0 ** (-j - 1), abs=1e-15)

    def test_linear(self):
        lin = builtin_measure("linear")
        assert lambda_jm(lin, 1, 0) == pytest.approx(0.5 * math.sqrt(0.5), abs=1e-12)

    def test_row_sums(self, tmp_path):
        for mes in all_builtins(tmp_path):
            for j in range(0, 11):
                total = math.fsum(lambda_jm(mes, j, m) for m in range(1 << j))
                assert total == pytest.approx((mes.b - mes.a) / 2, abs=1e-10)


class TestHaarCoeff:
    def test_constant_orthogonal(self):
        unif = builtin_measure("uniform", a=0, b=1)
        F = builtin_integrand("constant", Cube.unit(1))
        for j, m in ((0, 0), (2, 1), (3, 7)):
            assert haar_coeff(F, [unif], [j], [m], [1], 8) == pytest.approx(0, abs=1e-12)

    def test_linear_0_0(self):
        unif = builtin_measure("uniform", a=0, b=1)
        assert haar_coeff(X1, [unif], [0], [0], [1], 10) == pytest.approx(-0.25, abs=1e-3)

    def test_bound_product_integrand(self):
        lin = builtin_measure("linear")
        unif = builtin_measure("uniform", a=0, b=1)
        for mes in ([unif, unif], [lin, lin]):
            F = builtin_integrand("product", Cube.unit(2))
            for j1 in range(5):
                for m1 in (0, (1 << j1) - 1):
                    coeff = haar_coeff(F, mes, [j1], [m1], [1], 9)
                    bound = lemma1_bound(F, mes, [j1], [m1], [1])
                    assert abs(coeff) <= bound + 1e-3

    def test_composition_identity(self):
        # h(cdf-inverse-transported dyadic points) equals plain Haar at y
        for mes in (
            builtin_measure("linear"),
            builtin_measure("trunc_exp", rate=1.5, a=0, b=2),
        ):
            for j in range(4):
                for m in range(1 << j):
                    idx = HaarIndex(j, m)
                    # odd numerators at precision j+3 lie strictly inside the
                    # constant pieces of h_{j,m}, away from its jumps
                    for num in range(1, 1 << (j + 3), 2):
                        y = DyadicPoint(num, j + 3).value
                        x = mes.inv_cdf(y)
                        rt = mes.cdf(x)
                        assert rt == pytest.approx(y, abs=1e-12)
                        assert haar(idx, rt) == haar(idx, y)

    def test_quad_level_guard(self):
        unif = builtin_measure("uniform", a=0, b=1)
        with pytest.raises(ConfigError, match="quad_level"):
            haar_coeff(X1, [unif], [5], [0], [1], 6)


class TestLemma1Bound:
    def test_linear_example(self):
        unif = builtin_measure("uniform", a=0, b=1)
        assert lemma1_bound(X1, [unif], [0], [0], [1]) == pytest.approx(0.5, abs=1e-15)

    def test_doubling_sup(self):
        unif = builtin_measure("uniform", a=0, b=1)
        X2 = Integrand(X1.eval, lambda u: 2.0 if u == (1,) else 0.0)
        assert lemma1_bound(X2, [unif], [0], [0], [1]) == pytest.approx(1.0, abs=1e-15)

    def test_decay_rate(self):
        unif = builtin_measure("uniform", a=0, b=1)
        b4 = lemma1_bound(X1, [unif], [4], [0], [1])
        b6 = lemma1_bound(X1, [unif], [6], [0], [1])
        assert b6 / b4 == pytest.approx(2.0 ** (-3), abs=1e-12)

    def test_missing_sup(self):
        F = Integrand(X1.eval)
        unif = builtin_measure("uniform", a=0, b=1)
        with pytest.raises(ConfigError, match="derivative_sup"):
            lemma1_bound(F, [unif], [0], [0], [1])
