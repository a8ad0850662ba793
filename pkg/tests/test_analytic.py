import math
from fractions import Fraction

import pytest

from bsdlab.analytic import (
    check_st_integrals,
    expected_xi_moments,
    moment_identity,
    moment_identity_checks,
    quadrature,
    st_density,
    xi_moment_checks,
)
from bsdlab.errors import DomainError, NonConvergenceError


class TestQuadrature:
    def test_sin_over_period(self):
        assert quadrature(math.sin, 0.0, math.pi, 1e-12) == pytest.approx(
            2.0, abs=1e-10)

    def test_constant_exact(self):
        assert quadrature(lambda t: 1.0, 0.0, 1.0, 1e-12) == 1.0

    def test_paper_quartic(self):
        v = quadrature(lambda t: 2.0 * (math.cos(t) * math.sin(t)) ** 2,
                       0.0, math.pi, 1e-12)
        assert v == pytest.approx(math.pi / 4, abs=1e-10)

    def test_tol_floor(self):
        with pytest.raises(DomainError):
            quadrature(math.sin, 0.0, 1.0, 1e-14)

    def test_divergence_detected(self):
        with pytest.raises(NonConvergenceError):
            quadrature(lambda t: 1.0 / math.sqrt(t) if t > 0 else 1e12,
                       0.0, 1.0, 1e-12)

    def test_halving_tol_is_self_consistent(self):
        f = lambda t: math.exp(math.sin(3 * t))
        for tol in (1e-8, 1e-10, 1e-12):
            a = quadrature(f, 0.0, math.pi, tol)
            b = quadrature(f, 0.0, math.pi, tol / 2)
            assert abs(a - b) <= tol


class TestStIntegrals:
    def test_all_within_tolerance(self):
        for chk in check_st_integrals():
            assert chk.abs_error < 1e-10, chk.name

    def test_expected_values(self):
        by_name = {c.name: c for c in check_st_integrals()}
        assert by_name["int 2cos(t)sin^2(t) dt, 0..pi"].expected == 0.0
        assert by_name["int 2cos^2(t)sin^2(t) dt, 0..pi"].expected == math.pi / 4
        assert by_name["int cos(t) dt, 0..pi"].expected == 0.0
        assert by_name["int 2cos^2(t) dt, 0..pi"].expected == math.pi
        assert by_name["semicircle mean of cos"].expected == 0.0
        assert by_name["semicircle mean of cos^2"].expected == 0.25

    def test_density_normalized(self):
        total = quadrature(st_density, 0.0, math.pi, 1e-12)
        assert total == pytest.approx(1.0, abs=1e-10)


class TestMomentIdentity:
    def test_small_values(self):
        assert moment_identity(0) == Fraction(1)
        assert moment_identity(1) == Fraction(1, 2)
        assert moment_identity(2) == Fraction(1, 4)

    def test_exact_rational_up_to_64(self):
        for n in range(65):
            v = moment_identity(n)
            assert isinstance(v, Fraction)
            assert v == Fraction(1, 2**n)

    def test_domain(self):
        with pytest.raises(DomainError):
            moment_identity(-1)
        with pytest.raises(DomainError):
            moment_identity(65)

    def test_check_rows(self):
        rows = moment_identity_checks(20)
        assert len(rows) == 21
        assert all(r.abs_error == 0.0 for r in rows)


class TestXiMoments:
    def test_p2(self):
        e1, e2 = expected_xi_moments(2)
        assert e1 == pytest.approx(0.5, abs=1e-10)
        assert e2 == pytest.approx(0.75, abs=1e-10)

    def test_p5_second_moment(self):
        _, e2 = expected_xi_moments(5)
        assert e2 == pytest.approx(0.24, abs=1e-10)

    def test_rows_match_closed_form(self):
        for row in xi_moment_checks((2, 3, 5)):
            assert row.abs_error < 1e-10, row.name

    def test_domain(self):
        with pytest.raises(DomainError):
            expected_xi_moments(1)
