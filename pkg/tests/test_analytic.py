"""Closed-form evaluators against independent numerical oracles.

Expected values below were produced by the oracle functions in this file
(quadrature of the jump-measure integrals, tensor quadrature of transforms,
high-precision special-function identities) and frozen; the oracles are also
re-run at test time where they are cheap.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, special

from anisub import analytic
from anisub.errors import DomainError, SingularInputError
from anisub.models import (CommonFactor, IndependentStable, SpectralMeasure,
                           SpectralStable, StableTerm, single_atom_model)

ATOM = single_atom_model(0.5)                      # bisector atom, weight 1
INDEP = IndependentStable(0.5)
CF = CommonFactor(StableTerm(0.5), StableTerm(0.5), StableTerm(0.5))
MODELS = [ATOM, INDEP, CF]

ROOT2 = math.sqrt(2.0)

# frozen oracle values (see oracle functions below)
S_ATOM_11 = 1.189207115002721            # 2**(1/4)
T_ATOM_1 = 0.8408964152537145            # 2**(-1/4)
TAIL_TRANSFORM_ATOM_11 = 0.492585715504708       # 2**(3/4) - 2**(1/4)
COV_LT_ATOM_11 = 0.5857864376269049      # 2 - sqrt(2)
ML_HALF_AT_M1 = 0.42758357615580705      # exp(1) * erfc(1)
DIAG_LT_ATOM_X1 = 0.14997391396907356    # tail transform * exp(-2**(1/4))
HH_ATOM_T12 = 0.13132192465214598        # exp(-2**(1/4) - 2**(-1/4))
PAIR_LT_ATOM = 0.4245589743891779        # full-law transform at xi=(.5,.5)


def levy_integral_oracle(angle, weight, c, alpha, eta1, eta2):
    """Joint exponent by direct quadrature of the jump integral along one
    angular atom: c * w * Int (1 - e^{-r(eta1 cos + eta2 sin)}) alpha r^{-1-alpha} dr."""
    proj = eta1 * math.cos(angle) + eta2 * math.sin(angle)
    f = lambda r: (1 - np.exp(-r * proj)) * alpha * r ** (-1 - alpha)
    v, _ = integrate.quad(f, 0, np.inf, epsabs=1e-12)
    return c * weight * v


def tail_ray_oracle(angle, weight, c, alpha, t1, t2):
    """Upper-tail mass by quadrature of the radial power law over the part
    of the ray inside (t1, inf) x (t2, inf)."""
    ca, sa = math.cos(angle), math.sin(angle)
    if ca <= 0 or sa <= 0:
        return 0.0
    r0 = max(t1 / ca, t2 / sa)
    v, _ = integrate.quad(lambda r: alpha * r ** (-1 - alpha), r0, np.inf,
                          epsabs=1e-12)
    return c * weight * v


class TestExponents:
    def test_marginal_atom_matches_quadrature(self):
        got = analytic.marginal_exponent(ATOM, 1, 1.0)
        oracle = levy_integral_oracle(math.pi / 4, 1.0, ATOM.intensity, 0.5, 1.0, 0.0)
        assert got == pytest.approx(T_ATOM_1, abs=1e-12)
        assert got == pytest.approx(oracle, abs=1e-8)

    def test_joint_atom_matches_quadrature(self):
        got = analytic.laplace_exponent(ATOM, 1.0, 1.0)
        oracle = levy_integral_oracle(math.pi / 4, 1.0, ATOM.intensity, 0.5, 1.0, 1.0)
        assert got == pytest.approx(S_ATOM_11, abs=1e-12)
        assert got == pytest.approx(oracle, abs=1e-8)

    def test_independent_is_additive(self):
        assert analytic.laplace_exponent(INDEP, 1.0, 1.0) == pytest.approx(2.0)
        assert analytic.marginal_exponent(INDEP, 1, 1.0) == pytest.approx(1.0)

    def test_common_factor_value(self):
        # unit-scale terms: 1 + 1 + sqrt(2)
        assert analytic.laplace_exponent(CF, 1.0, 1.0) == pytest.approx(2 + ROOT2)
        assert analytic.marginal_exponent(CF, 2, 1.0) == pytest.approx(2.0)

    @pytest.mark.parametrize("model", MODELS)
    def test_zero_at_origin(self, model):
        assert analytic.laplace_exponent(model, 0.0, 0.0) == 0.0

    @pytest.mark.parametrize("model", MODELS)
    @pytest.mark.parametrize("eta", [0.25, 0.5, 1.0, 2.0, 4.0])
    def test_marginal_consistency(self, model, eta):
        assert analytic.laplace_exponent(model, eta, 0.0) == pytest.approx(
            analytic.marginal_exponent(model, 1, eta), rel=1e-14)
        assert analytic.laplace_exponent(model, 0.0, eta) == pytest.approx(
            analytic.marginal_exponent(model, 2, eta), rel=1e-14)

    @pytest.mark.parametrize("model", MODELS)
    def test_nondecreasing_and_concave_shape(self, model):
        etas = np.linspace(0.0, 5.0, 21)
        vals = [analytic.marginal_exponent(model, 1, e) for e in etas]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        diffs = np.diff(vals)
        assert all(b <= a + 1e-12 for a, b in zip(diffs, diffs[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            analytic.laplace_exponent(ATOM, -1.0, 1.0)
        with pytest.raises(DomainError):
            analytic.marginal_exponent(ATOM, 3, 1.0)


class TestLevyTail:
    def test_independent_tail_is_zero(self):
        for t1, t2 in [(0.5, 0.5), (1.0, 2.0), (3.0, 0.1)]:
            assert analytic.levy_tail(INDEP, t1, t2) == 0.0

    def test_atom_tail_value_and_oracle(self):
        model = single_atom_model(0.5, c=1.0)
        got = analytic.levy_tail(model, 1.0, 1.0)
        assert got == pytest.approx(2 ** -0.25, abs=1e-12)
        assert got == pytest.approx(
            tail_ray_oracle(math.pi / 4, 1.0, 1.0, 0.5, 1.0, 1.0), abs=1e-8)

    @pytest.mark.parametrize("t1,t2", [(0.5, 0.5), (0.5, 1.5), (1.0, 1.0),
                                       (2.0, 0.7), (3.0, 3.0)])
    def test_quadrature_grid(self, t1, t2):
        # mixed measure with an axis atom (which must contribute nothing)
        m = SpectralMeasure(atoms=((0.0, 0.5), (math.pi / 4, 0.3),
                                   (math.pi / 3, 0.7)))
        model = SpectralStable(0.4, m, c=1.3)
        oracle = sum(tail_ray_oracle(a, w, 1.3, 0.4, t1, t2)
                     for a, w in m.atoms)
        assert analytic.levy_tail(model, t1, t2) == pytest.approx(oracle, rel=1e-6)

    def test_monotone_in_each_argument(self):
        for model in (ATOM, CF):
            assert analytic.levy_tail(model, 2.0, 1.0) <= analytic.levy_tail(model, 1.0, 1.0)
            assert analytic.levy_tail(model, 1.0, 2.0) <= analytic.levy_tail(model, 1.0, 1.0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            analytic.levy_tail(ATOM, 0.0, 1.0)


class TestTailTransform:
    def test_independent_vanishes(self):
        assert analytic.levy_tail_transform(INDEP, 1.0, 1.0) == 0.0

    def test_atom_value(self):
        assert analytic.levy_tail_transform(ATOM, 1.0, 1.0) == pytest.approx(
            TAIL_TRANSFORM_ATOM_11, abs=1e-12)

    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    def test_tensor_quadrature_oracle(self):
        # transform the closed-form tail directly: both routes must agree
        c = ATOM.intensity
        tail = lambda t2, t1: np.exp(-t1 - t2) * c * (max(t1, t2) * ROOT2) ** -0.5
        oracle, _ = integrate.dblquad(tail, 0, np.inf, 0, np.inf, epsabs=1e-9)
        assert oracle == pytest.approx(TAIL_TRANSFORM_ATOM_11, abs=1e-3)

    @pytest.mark.parametrize("model", MODELS)
    def test_nonnegative_on_grid(self, model):
        for e1 in (0.25, 1.0, 4.0):
            for e2 in (0.25, 1.0, 4.0):
                assert analytic.levy_tail_transform(model, e1, e2) >= 0.0


def ml_oracle(alpha, x):
    """High-precision reference: exact identities at alpha in {1/2, 1},
    otherwise tanh-sinh quadrature of the complete-monotonicity
    representation at 30 significant digits."""
    if x == 0:
        return 1.0
    if alpha == 1.0:
        return float(mpmath.exp(x))
    if alpha == 0.5:
        mpmath.mp.dps = 50
        z = mpmath.mpf(-x)
        return float(mpmath.exp(z * z) * mpmath.erfc(z))
    mpmath.mp.dps = 30
    a, r = mpmath.mpf(alpha), mpmath.mpf(-x)
    ca, sa = mpmath.cos(a * mpmath.pi), mpmath.sin(a * mpmath.pi)
    g = lambda u: mpmath.exp(-((u * r) ** (1 / a))) / (u * u + 2 * ca * u + 1)
    v = mpmath.quad(g, [0, float(1 / r), 1, mpmath.inf])
    return float(sa / (a * mpmath.pi) * v)


class TestMittagLeffler:
    def test_at_zero(self):
        assert analytic.mittag_leffler(0.7, 0.0) == 1.0

    def test_reduces_to_exponential(self):
        for x in np.linspace(-20.0, 0.0, 11):
            assert analytic.mittag_leffler(1.0, x) == pytest.approx(
                math.exp(x), abs=1e-8)

    def test_half_at_minus_one(self):
        assert analytic.mittag_leffler(0.5, -1.0) == pytest.approx(
            ML_HALF_AT_M1, abs=1e-10)

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9])
    @pytest.mark.parametrize("x", [0.0, -0.5, -1.0, -2.0, -5.0, -10.0,
                                   -20.0, -50.0])
    def test_accuracy_against_oracle(self, alpha, x):
        assert analytic.mittag_leffler(alpha, x) == pytest.approx(
            ml_oracle(alpha, x), abs=1e-8)

    @pytest.mark.parametrize("alpha", [0.2, 0.4, 0.6, 0.8])
    def test_series_and_integral_agree_where_both_work(self, alpha):
        # internal consistency of the two evaluation routes
        x = -1.5
        assert analytic._ml_series(alpha, x) == pytest.approx(
            analytic._ml_integral(alpha, x), abs=1e-10)

    def test_monotone_nonincreasing(self):
        xs = np.linspace(0.0, -30.0, 40)
        vals = [analytic.mittag_leffler(0.6, x) for x in xs]
        assert all(b <= a + 1e-14 for a, b in zip(vals, vals[1:]))
        assert all(0.0 < v <= 1.0 for v in vals)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            analytic.mittag_leffler(1.5, -1.0)
        with pytest.raises(DomainError):
            analytic.mittag_leffler(0.5, 0.5)


class TestBiparamLaplace:
    def test_independent_at_equal_times(self):
        got = analytic.biparam_laplace(INDEP, 1.0, 1.0, 1.0, 1.0)
        assert got == pytest.approx(math.exp(-2.0), abs=1e-14)

    def test_atom_asymmetric_times(self):
        got = analytic.biparam_laplace(ATOM, 1.0, 2.0, 1.0, 1.0)
        assert got == pytest.approx(HH_ATOM_T12, abs=1e-12)

    def test_marginal_reduction(self):
        t1, e1 = 1.7, 0.8
        got = analytic.biparam_laplace(ATOM, t1, 0.4, e1, 0.0)
        want = math.exp(-0.4 * analytic.laplace_exponent(ATOM, e1, 0.0)
                        - (t1 - 0.4) * analytic.marginal_exponent(ATOM, 1, e1))
        assert got == pytest.approx(want, rel=1e-14)

    @pytest.mark.parametrize("model", MODELS)
    @pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
    def test_equal_times_collapse(self, model, t):
        want = math.exp(-t * analytic.laplace_exponent(model, 0.7, 1.3))
        assert analytic.biparam_laplace(model, t, t, 0.7, 1.3) == want


class TestInverseLaplaceLaw:
    def test_diagonal_at_origin_equals_tail_transform(self):
        for model in MODELS:
            assert analytic.inverse_time_laplace(model, "diagonal", 0.0, 1.0, 1.0) \
                == pytest.approx(analytic.levy_tail_transform(model, 1.0, 1.0), rel=1e-14)

    def test_diagonal_vanishes_for_independent(self):
        assert analytic.inverse_time_laplace(INDEP, "diagonal", 1.0, 1.0, 1.0) == 0.0

    def test_diagonal_atom_value(self):
        got = analytic.inverse_time_laplace(ATOM, "diagonal", 1.0, 1.0, 1.0)
        assert got == pytest.approx(DIAG_LT_ATOM_X1, abs=1e-12)

    @pytest.mark.parametrize("model", [ATOM, CF])
    def test_space_integral_is_normalized(self, model):
        # quadrature of the three pieces over space must give the transform
        # of the constant one: 1/(eta1*eta2)
        e1, e2 = 0.9, 1.4
        below, _ = integrate.dblquad(
            lambda x1, x2: analytic.inverse_time_laplace(
                model, "below-diagonal", (x1, x2), e1, e2),
            0, np.inf, 0, lambda x2: x2, epsabs=1e-11)
        above, _ = integrate.dblquad(
            lambda x2, x1: analytic.inverse_time_laplace(
                model, "above-diagonal", (x1, x2), e1, e2),
            0, np.inf, 0, lambda x1: x1, epsabs=1e-11)
        diag, _ = integrate.quad(
            lambda x: analytic.inverse_time_laplace(model, "diagonal", x, e1, e2),
            0, np.inf, epsabs=1e-11)
        assert below + above + diag == pytest.approx(1.0 / (e1 * e2), rel=1e-6)

    def test_region_validation(self):
        with pytest.raises(DomainError):
            analytic.inverse_time_laplace(ATOM, "below-diagonal", (2.0, 1.0), 1.0, 1.0)
        with pytest.raises(DomainError):
            analytic.inverse_time_laplace(ATOM, "above-diagonal", (1.0, 2.0), 1.0, 1.0)
        with pytest.raises(DomainError):
            analytic.inverse_time_laplace(ATOM, "sideways", 1.0, 1.0, 1.0)


class TestMomentTransforms:
    def test_independent_covariance_vanishes(self):
        for e1, e2 in [(0.5, 0.5), (1.0, 2.0), (3.0, 0.25)]:
            assert analytic.covariance_laplace(INDEP, e1, e2) == 0.0

    def test_atom_covariance_value(self):
        assert analytic.covariance_laplace(ATOM, 1.0, 1.0) == pytest.approx(
            COV_LT_ATOM_11, abs=1e-12)

    @pytest.mark.parametrize("model", MODELS)
    def test_mixed_moment_dominates_covariance(self, model):
        for e1, e2 in [(0.5, 1.0), (1.0, 1.0), (2.0, 3.0)]:
            assert analytic.mixed_moment_laplace(model, e1, e2) >= \
                analytic.covariance_laplace(model, e1, e2)

    def test_full_law_transform_value(self):
        assert analytic.inverse_pair_laplace(ATOM, 0.5, 0.5, 1.0, 1.0) == \
            pytest.approx(PAIR_LT_ATOM, abs=1e-12)

    def test_full_law_reduces_to_product_when_independent(self):
        xi1, xi2, e1, e2 = 0.7, 1.1, 0.9, 1.6
        got = analytic.inverse_pair_laplace(INDEP, xi1, xi2, e1, e2)
        t1 = analytic.marginal_exponent(INDEP, 1, e1)
        t2 = analytic.marginal_exponent(INDEP, 2, e2)
        want = (t1 / (e1 * (xi1 + t1))) * (t2 / (e2 * (xi2 + t2)))
        assert got == pytest.approx(want, rel=1e-12)

    def test_singular_input(self):
        with pytest.raises(SingularInputError):
            # zero-rate marginal: a model whose component-2 mass is absent
            m = SpectralMeasure(atoms=((0.0, 1.0),))
            analytic.covariance_laplace(SpectralStable(0.5, m), 1.0, 1.0)


class TestSubdiffusionTransform:
    def test_total_mass_at_zero_frequency(self):
        got = analytic.subdiffusion_charfn_laplace(0.5, ATOM.m, 0.0, 0.0, 2.0, 3.0)
        assert got == pytest.approx(1.0 / 6.0, rel=1e-12)

    def test_independent_case_factorizes(self):
        # two axis atoms weighted for unit marginal scales
        m = SpectralMeasure(atoms=((0.0, 1.0), (math.pi / 2, 1.0)))
        xi1, xi2, e1, e2 = 1.0, 0.5, 0.8, 1.2
        got = analytic.subdiffusion_charfn_laplace(0.5, m, xi1, xi2, e1, e2)
        f1 = e1 ** -0.5 / (e1 ** 0.5 + xi1 ** 2 / 2) * 1.0
        f2 = e2 ** -0.5 / (e2 ** 0.5 + xi2 ** 2 / 2)
        assert got == pytest.approx(f1 * f2, rel=1e-12)

    def test_matches_full_law_transform_at_half_squared(self):
        # cos-transform frequencies map onto the law transform at xi**2/2
        got = analytic.subdiffusion_charfn_laplace(0.5, ATOM.m, 1.0, 1.0, 1.0, 1.0)
        assert got == pytest.approx(PAIR_LT_ATOM, rel=1e-12)
