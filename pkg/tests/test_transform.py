from types import SimpleNamespace

import numpy as np
import pytest

from quadlin.catalog import exp_family, harmonic, linear, multiplicative_negative
from quadlin.errors import CertificationFailure, SignChange
from quadlin.linearize import check_conditions
from quadlin.transform import (build_psi, fit_linear_model, recover_alpha,
                               roundtrip_verify)


def pipeline(eq, seed=1):
    rep = check_conditions(eq, seed=seed)
    table = recover_alpha(eq, rep)
    psi = build_psi(table)
    model = fit_linear_model(eq, psi, seed=seed + 1)
    return rep, table, psi, model


class TestRecoverAlpha:
    def test_linear_alpha_is_one(self):
        rep = check_conditions(linear(), seed=0)
        table = recover_alpha(linear(), rep)
        assert np.abs(table.alphas - 1.0).max() <= 1e-12

    def test_exp_alpha_matches_exponential(self):
        eq = exp_family(1, 1, 1)
        rep = check_conditions(eq, seed=0)
        table = recover_alpha(eq, rep)
        # alpha(x) * e^(x - x_ref) == 1 on every knot
        assert np.abs(table.alphas * np.exp(table.xs - table.x_ref) - 1).max() <= 1e-8

    def test_harmonic_alpha_is_quadratic(self):
        eq = harmonic()
        rep = check_conditions(eq, seed=0)
        table = recover_alpha(eq, rep)
        assert np.abs(table.alphas / (table.xs / table.x_ref) ** 2 - 1).max() <= 1e-10

    def test_frozen_pair_independence(self):
        eq = harmonic()
        rep = check_conditions(eq, seed=0)
        t1 = recover_alpha(eq, rep)
        t2 = recover_alpha(eq, rep, frozen=(0.6, 1.3))
        assert np.abs(t2.alphas / t1.alphas - 1.0).max() <= 1e-6

    def test_refuses_failed_report_without_force(self):
        eq = multiplicative_negative()
        rep = check_conditions(eq, seed=0)
        with pytest.raises(CertificationFailure):
            recover_alpha(eq, rep)
        assert recover_alpha(eq, rep, force=True) is not None

    def test_sign_change_detected(self):
        # F_u00 = 2*u00 flips sign on the box, so alpha ~ 1/(2x) does too
        from quadlin.errors import DegenerateDerivative
        from quadlin.linearize import QuadEquation
        eq = QuadEquation("u00^2 + u10 + u01", sample_box=(-1.0, 1.0))
        rep = check_conditions(eq, seed=0)
        with pytest.raises((SignChange, DegenerateDerivative)):
            recover_alpha(eq, rep, force=not rep.passed)


class TestBuildPsi:
    def test_identity_for_constant_alpha(self):
        rep = check_conditions(linear(), seed=0)
        psi = build_psi(recover_alpha(linear(), rep))
        xs = np.linspace(*psi.interval, 33)
        assert np.abs(psi.psi(xs) - (xs - psi.x_ref)).max() <= 1e-10
        assert psi.monotone

    def test_exp_psi_affine_image_of_exp(self):
        eq = exp_family(1, 1, 1)
        rep = check_conditions(eq, seed=0)
        psi = build_psi(recover_alpha(eq, rep))
        xs = np.linspace(*psi.interval, 57)
        expected = np.exp(xs - psi.x_ref) - 1.0
        assert np.abs(psi.psi(xs) - expected).max() <= 1e-9

    def test_harmonic_psi_affine_image_of_reciprocal(self):
        eq = harmonic()
        rep = check_conditions(eq, seed=0)
        psi = build_psi(recover_alpha(eq, rep))
        xs = psi.table.xs
        expected = psi.x_ref - psi.x_ref ** 2 / xs
        rel = np.abs(psi.psis - expected) / (1.0 + np.abs(expected))
        assert rel.max() <= 1e-6

    def test_gauge_normalization(self):
        eq = exp_family(2, 1, 3)
        rep = check_conditions(eq, seed=0)
        psi = build_psi(recover_alpha(eq, rep))
        assert psi.psi(psi.x_ref) == pytest.approx(0.0, abs=1e-12)
        h = 1e-6
        deriv = (psi.psi(psi.x_ref + h) - psi.psi(psi.x_ref - h)) / (2 * h)
        assert deriv == pytest.approx(1.0, rel=1e-6)


class TestFit:
    def test_linear_fit_exact(self):
        _, _, psi, model = pipeline(linear())
        p, q, r, s = model.coefficients()
        assert (p, q, r) == pytest.approx((1.0, 1.0, 1.0), abs=1e-10)
        assert s == pytest.approx(2 * psi.x_ref, abs=1e-9)
        assert model.fit_residual <= 1e-12
        assert model.certified

    def test_exp_213_proportional_coefficients(self):
        _, _, _, model = pipeline(exp_family(2, 1, 3))
        p, q, r, s = model.coefficients()
        assert p / q == pytest.approx(2.0, rel=1e-8)
        assert r / q == pytest.approx(3.0, rel=1e-8)
        assert model.fit_residual <= 1e-8

    def test_coefficients_match_report_ratios(self):
        for eq in (exp_family(2, 1, 3), harmonic()):
            rep, _, _, model = pipeline(eq)
            assert model.p / model.q == pytest.approx(rep.A, rel=1e-5)
            assert model.p / model.r == pytest.approx(rep.B, rel=1e-5)

    def test_gauge_invariance_of_fit(self):
        eq = exp_family(1, 1, 1)
        rep = check_conditions(eq, seed=0)
        psi = build_psi(recover_alpha(eq, rep))
        base = fit_linear_model(eq, psi, seed=5)
        lam, mu = 2.0, 3.0
        shim = SimpleNamespace(interval=psi.interval,
                               psi=lambda xs: lam * psi.psi(xs) + mu)
        moved = fit_linear_model(eq, shim, seed=5)
        assert moved.p == pytest.approx(base.p, abs=1e-9)
        assert moved.q == pytest.approx(base.q, abs=1e-9)
        assert moved.r == pytest.approx(base.r, abs=1e-9)
        expected_s = lam * base.s + mu * (1.0 - base.p - base.q - base.r)
        assert moved.s == pytest.approx(expected_s, rel=1e-9, abs=1e-9)

    def test_forced_fit_fails_certification(self):
        eq = multiplicative_negative()
        rep = check_conditions(eq, seed=0)
        psi = build_psi(recover_alpha(eq, rep, force=True))
        model = fit_linear_model(eq, psi, seed=0)
        assert not model.certified
        assert model.fit_residual > 1e-2


class TestRoundtrip:
    def test_linear_is_exact(self):
        _, _, psi, model = pipeline(linear())
        assert roundtrip_verify(linear(), psi, model, 20, 20, seed=5) <= 1e-12

    def test_exp_equation(self):
        eq = exp_family(1, 1, 1)
        _, _, psi, model = pipeline(eq)
        assert roundtrip_verify(eq, psi, model, 30, 30, seed=7) <= 1e-6

    def test_harmonic_equation(self):
        eq = harmonic()
        _, _, psi, model = pipeline(eq)
        assert roundtrip_verify(eq, psi, model, 20, 20, seed=7) <= 1e-6

    def test_uncertified_model_rejected(self):
        eq = multiplicative_negative()
        rep = check_conditions(eq, seed=0)
        psi = build_psi(recover_alpha(eq, rep, force=True))
        model = fit_linear_model(eq, psi, seed=0)
        with pytest.raises(CertificationFailure):
            roundtrip_verify(eq, psi, model, 10, 10, seed=1)

    def test_psi_monotone_for_certified(self):
        for eq in (linear(), harmonic(), exp_family(2, 1, 3)):
            _, _, psi, model = pipeline(eq)
            assert psi.monotone
            assert model.certified
