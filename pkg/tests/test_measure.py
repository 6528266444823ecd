import json
import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from conftest import random_pd, rel, scipy_mean
from opmean.errors import DomainError, LinearMean, SpecParseError
from opmean.hermitian import HermitianMatrix
from opmean.means import arithmetic, evaluate_mean, harmonic, transpose
from opmean.measure import (
    BorelMeasure,
    arithmetic_measure,
    check_density_accuracy,
    dirac,
    f_from_measure,
    geometric_measure,
    load_measure,
    mean_from_measure,
    measure_f,
    measure_from_json,
    measure_k,
    table_density,
    tau_measure_form,
)

MUS = (0.1, 0.3, 0.5, 0.7, 0.9)
GRID = np.geomspace(1e-3, 1e3, 121)


class TestGeometricMeasure:
    @pytest.mark.parametrize("mu", MUS)
    def test_mass_against_adaptive_quadrature(self, mu):
        # Oracle: QUADPACK with algebraic endpoint weights, independent of Gauss-Jacobi.
        c = math.sin(mu * math.pi) / math.pi
        mass, _ = integrate.quad(lambda x: c, 0, 1, weight="alg", wvar=(mu - 1, -mu))
        assert mass == pytest.approx(1.0, abs=1e-12)
        assert geometric_measure(mu).total_mass == pytest.approx(mass, abs=1e-12)

    @pytest.mark.parametrize("mu", MUS)
    def test_moments(self, mu):
        # int lam dm = mu and -2 int lam(1-lam) dm = mu(mu - 1), from t^mu at t = 1.
        mass, first, second = geometric_measure(mu).moments()
        assert first == pytest.approx(mu, abs=1e-13)
        assert -2 * second == pytest.approx(mu * (mu - 1), abs=1e-13)

    @pytest.mark.parametrize("mu", MUS)
    def test_function_matches_power(self, mu):
        f = f_from_measure(geometric_measure(mu))
        err = np.max(np.abs(f(GRID) / GRID**mu - 1))
        assert err <= 1e-8

    @pytest.mark.parametrize("mu", (0.2, 0.6))
    def test_function_wide_range(self, mu):
        t = np.geomspace(1e-8, 1e8, 33)
        assert np.max(np.abs(measure_f(geometric_measure(mu), t) / t**mu - 1)) <= 1e-12

    @pytest.mark.parametrize("mu", (0.3, 0.8))
    @pytest.mark.parametrize("t", (1e-4, 0.02, 1.0, 7.0, 3e5))
    def test_kernel_against_adaptive_quadrature(self, mu, t):
        c = math.sin(mu * math.pi) / math.pi
        ref, _ = integrate.quad(lambda lam: c / ((1 - lam) * t + lam), 0, 1, weight="alg",
                                wvar=(mu, 1 - mu), epsabs=0, epsrel=1e-13, limit=200)
        assert measure_k(geometric_measure(mu), np.array([t]))[0] == pytest.approx(ref, rel=1e-10)

    def test_endpoints_rejected(self):
        for mu in (0.0, 1.0, -0.1):
            with pytest.raises(DomainError):
                geometric_measure(mu)

    def test_f_at_zero(self):
        assert measure_f(geometric_measure(0.4), np.array([0.0]))[0] == 0.0
        assert measure_f(dirac(0.0, 0.3), np.array([0.0]))[0] == pytest.approx(0.3)


class TestAtoms:
    @pytest.mark.parametrize("mu", MUS)
    def test_dirac_is_harmonic(self, mu):
        f = f_from_measure(dirac(mu))
        h = harmonic(mu)
        assert np.allclose(f(GRID), h(GRID), rtol=1e-14)
        assert f.second_at_one == pytest.approx(h.second_at_one, rel=1e-14)

    @pytest.mark.parametrize("mu", (0.0, 0.4, 1.0))
    def test_endpoint_atoms_are_arithmetic(self, mu):
        m = arithmetic_measure(mu)
        assert m.supported_on_endpoints()
        f = f_from_measure(m)
        assert f.is_linear
        assert np.allclose(f(GRID), arithmetic(mu)(GRID), rtol=1e-14)

    def test_validation(self):
        with pytest.raises(DomainError):
            BorelMeasure(((1.5, 1.0),))
        with pytest.raises(DomainError):
            BorelMeasure(((0.5, 0.0),))
        with pytest.raises(DomainError):
            dirac(0.5) * -1

    def test_algebra(self):
        m = dirac(0.2, 0.25) + geometric_measure(0.5) * 0.75
        assert m.is_probability()
        assert "delta" in m.describe() and "geometric" in m.describe()
        with pytest.raises(ValueError):
            geometric_measure(0.3) + geometric_measure(0.4)

    def test_second_moment_zero_iff_endpoints(self):
        assert arithmetic_measure(0.3).moments()[2] == 0.0
        assert dirac(0.5).moments()[2] > 0


class TestReflection:
    @pytest.mark.parametrize("mu", (0.2, 0.7))
    def test_reflected_measure_is_transpose(self, mu):
        m = dirac(mu, 0.4) + geometric_measure(mu) * 0.6
        f = f_from_measure(m)
        g = f_from_measure(m.reflected())
        assert np.allclose(g(GRID), transpose(f)(GRID), rtol=1e-12)


class TestOperatorForms:
    @pytest.mark.parametrize("mu", MUS)
    def test_mean_from_measure_matches_closed_form(self, mu):
        rng = np.random.default_rng(int(mu * 100))
        for n in (1, 3, 6):
            a, b = random_pd(rng, n, 50.0), random_pd(rng, n, 50.0)
            ref = scipy_mean(a.data, b.data, lambda t: t**mu)
            assert rel(mean_from_measure(geometric_measure(mu), a, b).data, ref) <= 1e-8

    def test_mean_from_measure_matches_evaluate_for_mixture(self, rng):
        m = dirac(0.3, 0.5) + geometric_measure(0.6) * 0.5
        f = f_from_measure(m)
        for n in (2, 5, 8):
            a, b = random_pd(rng, n, 100.0), random_pd(rng, n, 100.0)
            assert rel(mean_from_measure(m, a, b).data, evaluate_mean(f, a, b).data) <= 1e-8

    def test_atoms_at_endpoints(self, rng):
        a, b = random_pd(rng, 3), random_pd(rng, 3)
        m = arithmetic_measure(0.25)
        assert rel(mean_from_measure(m, a, b).data, (0.75 * a + 0.25 * b).data) <= 1e-14

    @pytest.mark.parametrize("mu", (0.25, 0.5))
    def test_tau_direct_and_spectral_agree(self, mu):
        # The direct form integrates ((1 - lam) B + lam A)^{-1} node by node;
        # agreement with the congruence form pins the argument order.
        rng = np.random.default_rng(7)
        f = f_from_measure(dirac(0.4, 0.5) + geometric_measure(mu) * 0.5)
        a, b = random_pd(rng, 4, 5.0), random_pd(rng, 4, 5.0)
        direct = tau_measure_form(f, a, b, method="direct")
        spectral = tau_measure_form(f, a, b, method="spectral")
        assert rel(direct.data, spectral.data) <= 1e-8
        swapped = tau_measure_form(f, b, a, method="spectral")
        assert rel(direct.data, swapped.data) > 1e-3

    def test_tau_half_geometric_closed_form(self, rng):
        # For t^{1/2} the companion mean is (nabla + #)/2.
        f = f_from_measure(geometric_measure(0.5))
        a, b = random_pd(rng, 3, 20.0), random_pd(rng, 3, 20.0)
        ref = 0.5 * ((a.data + b.data) / 2 + scipy_mean(a.data, b.data, np.sqrt))
        assert rel(tau_measure_form(f, a, b).data, ref) <= 1e-10

    def test_tau_refuses_linear(self):
        f = f_from_measure(arithmetic_measure(0.5))
        with pytest.raises(LinearMean):
            tau_measure_form(f, HermitianMatrix.identity(2), HermitianMatrix.identity(2))


class TestTableDensity:
    def test_uniform_table_mass(self):
        d = table_density([1.0, 1.0, 1.0])
        m = BorelMeasure((), d)
        mass, first, second = m.moments()
        assert mass == pytest.approx(1.0, rel=1e-13)
        assert first == pytest.approx(0.5, rel=1e-13)
        assert second == pytest.approx(1 / 6, rel=1e-13)

    def test_uniform_table_function(self):
        # int_0^1 t / ((1 - lam) t + lam) dlam = t log(t) / (t - 1)
        f = f_from_measure(BorelMeasure((), table_density([1.0, 1.0], nodes=128)))
        t = np.array([0.1, 0.5, 2.0, 10.0])
        assert np.allclose(f(t), t * np.log(t) / (t - 1), rtol=1e-10)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            table_density([1.0, -1.0])

    def test_accuracy_warning(self):
        rough = table_density(np.r_[np.zeros(10), np.ones(10)], nodes=4)
        with pytest.warns(RuntimeWarning):
            check_density_accuracy(rough)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            check_density_accuracy(table_density([1.0, 2.0]))


class TestJson:
    def test_geometric_with_atom(self, tmp_path):
        spec = {"atoms": [{"lambda": 0.3, "w": 0.5}], "density": {"kind": "geometric", "mu": 0.4, "weight": 0.5}}
        path = tmp_path / "m.json"
        path.write_text(json.dumps(spec))
        m = load_measure(path)
        assert m.is_probability()
        f = f_from_measure(m)
        t = np.array([0.5, 2.0])
        ref = 0.5 * t / (0.7 * t + 0.3) + 0.5 * t**0.4
        assert np.allclose(f(t), ref, rtol=1e-12)

    def test_table(self):
        m = measure_from_json({"density": {"kind": "table", "values": [1, 1]}})
        assert m.total_mass == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "text",
        [
            "{",
            "[1]",
            '{"atoms": [{"w": 1}]}',
            '{"density": {"kind": "cauchy"}}',
            '{"density": {"kind": "geometric", "mu": 1.5}}',
        ],
    )
    def test_errors(self, text):
        with pytest.raises(SpecParseError):
            measure_from_json(text)
