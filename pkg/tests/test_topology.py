"""Euler/signature integrands, quadrature, Weyl split, and block sums."""

import itertools
import math
from types import SimpleNamespace

import numpy as np
import numpy.testing as npt
import pytest

from curvforms.complex_forms import adapted_frame, complex_case_matrix, tensor_from_complex_form
from curvforms.curvature import space_form, validate_curvature
from curvforms.exceptions import DegenerateMetricError, DimensionError
from curvforms.normal_forms import NormalForm4
from curvforms.topology import (
    BUILDING_BLOCKS,
    BuildingBlock,
    chi_tau_densities,
    connected_sum,
    hypersurface_block,
    integrate_samples,
    parse_block_expression,
    weyl_split_check,
)

RNG = np.random.default_rng(20260701)


def levi_civita_4():
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        sign = 1
        q = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if q[i] > q[j]:
                    sign = -sign
        eps[perm] = sign
    return eps


EPS4 = levi_civita_4()


def set_component(r, i, j, k, l, value):
    for (a, b, c, d), sign in (
        ((i, j, k, l), 1), ((j, i, k, l), -1), ((i, j, l, k), -1), ((j, i, l, k), 1),
        ((k, l, i, j), 1), ((l, k, i, j), -1), ((k, l, j, i), -1), ((l, k, j, i), 1),
    ):
        r[a, b, c, d] = sign * value


def pattern_tensor(lambdas, mus, kappas=None):
    """Dense normal-form components; ``kappas`` defaults to ``lambdas``."""
    if kappas is None:
        kappas = lambdas
    r = np.zeros((4, 4, 4, 4))
    set_component(r, 0, 1, 0, 1, lambdas[0])
    set_component(r, 0, 2, 0, 2, lambdas[1])
    set_component(r, 0, 3, 0, 3, lambdas[2])
    set_component(r, 2, 3, 2, 3, kappas[0])
    set_component(r, 1, 3, 1, 3, kappas[1])
    set_component(r, 1, 2, 1, 2, kappas[2])
    set_component(r, 2, 3, 0, 1, mus[0])
    set_component(r, 3, 1, 0, 2, mus[1])
    set_component(r, 1, 2, 0, 3, mus[2])
    return r


def chi_curvature_form_integrand(r, ginv):
    """Euler integrand per unit frame volume from the curvature 2-forms."""
    total = np.einsum(
        "ijkl,mnpq,si,rk,mnjs,pqlr->", EPS4, EPS4, ginv, ginv, r, r, optimize=True
    )
    return total / (2.0**7 * math.pi**2)


def tau_curvature_form_integrand(r, ginv):
    """Signature integrand per unit frame volume from tr(Omega ^ Omega)."""
    total = np.einsum(
        "mnpq,si,jr,mnjs,pqir->", EPS4, ginv, ginv, r, r, optimize=True
    )
    return -total / (3.0 * 2.0**5 * math.pi**2)


def random_lambda_mu(rng):
    lam = rng.normal(size=3)
    mu = rng.normal(size=3)
    mu[2] = -mu[0] - mu[1]  # cyclic sum must vanish
    return lam, mu


def nf_of(lambdas, mus):
    return NormalForm4(
        frame=np.eye(4), lambdas=np.asarray(lambdas, float), mus=np.asarray(mus, float), h=np.eye(4)
    )


def random_spd(rng, dim):
    a = rng.normal(size=(dim, dim))
    return a @ a.T + dim * np.eye(dim)


# ---- densities ----


class TestChiTauDensities:
    def test_orthonormal_reduction(self):
        for _ in range(10):
            lam, mu = random_lambda_mu(RNG)
            value = chi_tau_densities(nf_of(lam, mu), np.eye(4))
            npt.assert_allclose(
                value.chi_density,
                float(np.sum(lam**2) + np.sum(mu**2)) / (4 * math.pi**2),
                rtol=1e-13,
                err_msg="orthonormal Euler integrand is the sum of squares",
            )
            npt.assert_allclose(
                value.tau_density,
                float(np.sum(lam * mu)) / (3 * math.pi**2),
                rtol=1e-13,
                err_msg="orthonormal signature integrand is the lambda-mu pairing",
            )
            assert value.orthogonal
            npt.assert_allclose(value.sqrt_det_g, 1.0, rtol=1e-13)

    def test_flat_vanishes(self):
        value = chi_tau_densities(nf_of(np.zeros(3), np.zeros(3)), np.diag([1.0, 2.0, 3.0, 4.0]))
        assert value.chi_density == 0.0
        assert value.tau_density == 0.0
        assert value.chi_density_gvol == 0.0
        assert value.ht_correction_density == 0.0

    def test_matches_curvature_form_expansion(self):
        # the closed-form coefficients reproduce the unexpanded 2-form sum
        for _ in range(10):
            lam, mu = random_lambda_mu(RNG)
            ginv = np.linalg.inv(random_spd(RNG, 4))
            value = chi_tau_densities(nf_of(lam, mu), ginv)
            r = pattern_tensor(lam, mu)
            npt.assert_allclose(
                value.chi_density,
                chi_curvature_form_integrand(r, ginv),
                rtol=1e-11,
                atol=1e-13,
                err_msg="expanded Euler integrand disagrees with the 2-form sum",
            )
            npt.assert_allclose(
                value.tau_density,
                tau_curvature_form_integrand(r, ginv),
                rtol=1e-11,
                atol=1e-13,
                err_msg="expanded signature integrand disagrees with tr(Omega^2)",
            )
            assert not value.orthogonal
            assert value.chi_density_gvol is None
            assert value.ht_correction_density is None

    def test_diagonal_specialization(self):
        # collapsed orthogonal form agrees with the general coefficients
        for _ in range(10):
            lam, mu = random_lambda_mu(RNG)
            ginv = np.diag(RNG.uniform(0.2, 3.0, size=4))
            value = chi_tau_densities(nf_of(lam, mu), ginv)
            assert value.orthogonal
            npt.assert_allclose(
                value.chi_density,
                value.chi_density_reduced,
                rtol=1e-12,
                err_msg="diagonal inverse metric must collapse the minor sums",
            )

    def test_scaled_chi_is_the_orthonormal_pfaffian(self):
        # rescaling the frame to g-orthonormal must reproduce chi per dV_g
        for _ in range(10):
            lam, mu = random_lambda_mu(RNG)
            ginv = np.diag(RNG.uniform(0.2, 3.0, size=4))
            value = chi_tau_densities(nf_of(lam, mu), ginv)
            s = value.scaled
            r_ortho = pattern_tensor(s.lambdas_scaled, s.mus_scaled, s.kappas_scaled)
            npt.assert_allclose(
                value.chi_density_gvol,
                chi_curvature_form_integrand(r_ortho, np.eye(4)),
                rtol=1e-11,
                err_msg="per-volume Euler density must match the orthonormal frame",
            )
            npt.assert_allclose(
                value.tau_density_gvol,
                tau_curvature_form_integrand(r_ortho, np.eye(4)),
                rtol=1e-11,
                atol=1e-14,
                err_msg="per-volume signature density must match the orthonormal frame",
            )

    def test_tau_per_volume_is_frame_invariant(self):
        # whitening a general frame leaves the signature density unchanged
        for _ in range(5):
            lam, mu = random_lambda_mu(RNG)
            gf = random_spd(RNG, 4)
            value = chi_tau_densities(nf_of(lam, mu), np.linalg.inv(gf))
            low = np.linalg.cholesky(gf)
            white = np.linalg.inv(low).T  # columns of an orthonormal frame
            r = pattern_tensor(lam, mu)
            r_white = np.einsum("abcd,ai,bj,ck,dl->ijkl", r, white, white, white, white)
            npt.assert_allclose(
                value.tau_density_gvol,
                tau_curvature_form_integrand(r_white, np.eye(4)),
                rtol=1e-10,
                atol=1e-14,
                err_msg="tr(Omega^2) is basis independent",
            )

    def test_orthogonal_positivity(self):
        for _ in range(10):
            lam, mu = random_lambda_mu(RNG)
            if np.max(np.abs(lam)) + np.max(np.abs(mu)) == 0.0:
                continue
            ginv = np.diag(RNG.uniform(0.2, 3.0, size=4))
            value = chi_tau_densities(nf_of(lam, mu), ginv)
            assert value.chi_density > 0.0

    def test_identity_holds_pointwise(self):
        # chi = (3/2) tau + correction, per unit metric volume
        for _ in range(10):
            lam, mu = random_lambda_mu(RNG)
            ginv = np.diag(RNG.uniform(0.2, 3.0, size=4))
            value = chi_tau_densities(nf_of(lam, mu), ginv)
            residual = abs(
                value.chi_density_gvol
                - 1.5 * value.tau_density_gvol
                - value.ht_correction_density
            )
            assert residual <= 1e-13 * max(1.0, abs(value.chi_density_gvol))

    def test_rejects_bad_inverse_metric(self):
        nf = nf_of(np.ones(3), np.zeros(3))
        with pytest.raises(DimensionError):
            chi_tau_densities(nf, np.eye(3))
        with pytest.raises(DegenerateMetricError):
            bad = np.eye(4)
            bad[0, 1] = 0.5  # not symmetric
            chi_tau_densities(nf, bad)
        with pytest.raises(DegenerateMetricError):
            chi_tau_densities(nf, np.diag([1.0, 1.0, 1.0, -1.0]))


# ---- quadrature ----


def make_sample(rm, g, h, weight):
    return SimpleNamespace(rm=rm, g=g, h=h, weight=weight)


class TestIntegrateSamples:
    def test_constant_curvature_sphere_total(self):
        rm = space_form(4, 1.0)
        eye = np.eye(4)
        volume = 8 * math.pi**2 / 3
        samples = [
            make_sample(rm, eye, None, 0.25 * volume),
            make_sample(rm, eye, None, 0.75 * volume),
        ]
        result = integrate_samples(samples)
        npt.assert_allclose(result.chi_estimate, 2.0, rtol=1e-12,
                            err_msg="round-sphere volume times density must give 2")
        npt.assert_allclose(result.tau_estimate, 0.0, atol=1e-15)
        assert result.ht_identity_residual <= 1e-12
        assert result.points == 2
        assert result.skipped_points == 0
        npt.assert_allclose(result.total_weight, volume, rtol=1e-15)

    def test_skips_points_without_normal_form(self):
        rm_good = space_form(4, 1.0)
        rows = rm_good.to_sparse()
        rows.append([1, 2, 1, 3, 0.3])  # breaks the commuting block structure
        rm_bad = validate_curvature(rows, dim=4)
        eye = np.eye(4)
        samples = [
            make_sample(rm_good, eye, None, 1.0),
            make_sample(rm_bad, eye, None, 1.0),
        ]
        result = integrate_samples(samples)
        assert result.points == 2
        assert result.skipped_points == 1
        npt.assert_allclose(
            result.chi_estimate, 3.0 / (4 * math.pi**2), rtol=1e-12,
            err_msg="only the commuting point may contribute",
        )

    def test_orthogonal_field_identity(self):
        samples = []
        expected_chi = []
        for _ in range(5):
            lam, mu = random_lambda_mu(RNG)
            rm = validate_curvature(pattern_tensor(lam, mu), dim=4)
            ginv_diag = RNG.uniform(0.2, 3.0, size=4)
            g = np.diag(1.0 / ginv_diag)
            weight = float(RNG.uniform(0.5, 2.0))
            samples.append(make_sample(rm, g, np.eye(4), weight))
            value = chi_tau_densities(nf_of(lam, mu), np.diag(ginv_diag))
            expected_chi.append(weight * value.chi_density_gvol)
        result = integrate_samples(samples)
        assert result.general_frame_points == 0
        assert result.ht_identity_residual <= 1e-9
        npt.assert_allclose(result.chi_estimate, math.fsum(expected_chi), rtol=1e-10,
                            err_msg="weighted per-volume Euler densities must add up")

    def test_general_frame_point_is_counted(self):
        lam, mu = random_lambda_mu(RNG)
        rm = validate_curvature(pattern_tensor(lam, mu), dim=4)
        g = random_spd(RNG, 4)
        result = integrate_samples([make_sample(rm, g, np.eye(4), 1.0)])
        assert result.general_frame_points == 1
        assert math.isnan(result.ht_identity_residual)

    def test_weight_validation(self):
        rm = space_form(4, 1.0)
        with pytest.raises(ValueError):
            integrate_samples([SimpleNamespace(rm=rm, g=np.eye(4), h=None, weight=None)])
        with pytest.raises(ValueError):
            integrate_samples([make_sample(rm, np.eye(4), None, -1.0)])

    def test_dimension_guard(self):
        rm = space_form(3, 1.0)
        with pytest.raises(DimensionError):
            integrate_samples([make_sample(rm, np.eye(3), None, 1.0)])

    def test_deterministic(self):
        rm = space_form(4, -1.0)
        eye = np.eye(4)
        samples = [make_sample(rm, eye, None, 0.1 * k) for k in range(1, 20)]
        first = integrate_samples(samples)
        second = integrate_samples(samples)
        assert first.chi_estimate == second.chi_estimate
        assert first.tau_estimate == second.tau_estimate


# ---- Weyl split ----


class TestWeylSplitCheck:
    @pytest.mark.parametrize("case_id", [1, 2, 3, 4])
    def test_lorentz_commuting_instances(self, case_id):
        c = complex_case_matrix(case_id, RNG)
        rm = tensor_from_complex_form(c)
        report = weyl_split_check(rm, np.eye(4), np.eye(4)[:, 0])
        assert report.commutes
        assert abs(report.scal) <= 1e-10
        assert report.relation_residual <= 1e-10, \
            "commuting with the Lorentz star must force w_plus = -w_minus"
        assert report.lorentz_trace_residual <= 1e-9

    def test_general_metric_and_direction(self):
        c = complex_case_matrix(1, RNG)
        g = random_spd(RNG, 4)
        t = RNG.normal(size=4)
        t = t / math.sqrt(float(t @ g @ t))
        rm = tensor_from_complex_form(c, frame=adapted_frame(g, t))
        report = weyl_split_check(rm, g, t)
        scale = max(1.0, float(np.linalg.norm(c)))
        assert report.commutes
        assert abs(report.scal) <= 1e-9 * scale
        assert report.relation_residual <= 1e-9 * scale

    def test_space_form_reports_failure(self):
        report = weyl_split_check(space_form(4, 1.0), np.eye(4), np.eye(4)[:, 0])
        assert not report.commutes
        npt.assert_allclose(report.scal, 12.0, rtol=1e-12)
        assert report.lorentz_trace_residual > 0.1
        # constant curvature has no Weyl part, so the block relation is vacuous
        assert report.relation_residual <= 1e-12

    def test_flat_is_trivial(self):
        report = weyl_split_check(space_form(4, 0.0), np.eye(4), np.eye(4)[:, 0])
        assert report.commutes
        assert report.scal == 0.0
        npt.assert_allclose(report.w_plus, 0.0, atol=1e-15)
        npt.assert_allclose(report.w_minus, 0.0, atol=1e-15)


# ---- connected sums ----


class TestConnectedSum:
    @pytest.mark.parametrize(
        "name, chi, tau",
        [("S4", 2, 0), ("CP2", 3, 1), ("S1xS3", 0, 0), ("K3", 24, -16), ("T4", 0, 0)],
    )
    def test_single_blocks(self, name, chi, tau):
        result = connected_sum(name)
        assert (result.chi, result.tau) == (chi, tau)

    def test_example_sum_is_obstructed(self):
        result = connected_sum("CP2 # CP2 # S1xS3 # S1xS3")
        assert (result.chi, result.tau) == (0, 2)
        assert result.verdict is not None
        assert "cannot admit" in result.verdict

    def test_k3_alone_has_no_verdict(self):
        result = connected_sum("K3")
        assert (result.chi, result.tau) == (24, -16)
        assert result.verdict is None

    @pytest.mark.parametrize(
        "degree, chi, tau", [(1, 3, 1), (3, 9, -5), (4, 24, -16), (5, 55, -35)]
    )
    def test_hypersurface_degrees(self, degree, chi, tau):
        block = hypersurface_block(degree)
        assert (block.chi, block.tau) == (chi, tau)
        result = connected_sum(f"HYP({degree})")
        assert (result.chi, result.tau) == (chi, tau)

    def test_degree_four_matches_k3(self):
        assert hypersurface_block(4).chi == BUILDING_BLOCKS["K3"].chi
        assert hypersurface_block(4).tau == BUILDING_BLOCKS["K3"].tau

    def test_associative_and_order_independent(self):
        names = ["CP2", "K3", "S1xS3", "T4", "HYP(3)"]
        base = connected_sum(names)
        shuffled = connected_sum(list(reversed(names)))
        assert (base.chi, base.tau) == (shuffled.chi, shuffled.tau)
        left = connected_sum(["CP2", "K3"])
        merged = connected_sum(
            [BuildingBlock("left", left.chi, left.tau), "S1xS3", "T4", "HYP(3)"]
        )
        assert (merged.chi, merged.tau) == (base.chi, base.tau)

    def test_rejects_unknown_and_malformed(self):
        with pytest.raises(ValueError, match="unknown building block"):
            connected_sum("CP3")
        with pytest.raises(ValueError):
            connected_sum("CP2 # ")
        with pytest.raises(ValueError):
            connected_sum([])
        with pytest.raises(ValueError):
            parse_block_expression("HYP(2.5)")
        with pytest.raises(ValueError):
            hypersurface_block(0)
        with pytest.raises(ValueError):
            hypersurface_block(2.0)
