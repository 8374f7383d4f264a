import math

import pytest

from conftest import close, profile_value_fn, wavy_kappa
from meridian.curves import Geometry, SphericalCurve, circle_curve
from meridian.errors import (FamilyDomainError, MisuseError,
                             ProfileDomainError)
from meridian.families import (FamilyKind, FamilySpec, build_family_surface,
                               chen_ode_residual, chen_slope,
                               cmc_ode_residual, constant_gauss_profile,
                               constant_k_ode_residual, constant_k_slope,
                               constant_mean_slope, family_profile,
                               max_ode_residual, parallel_b_ode_residual,
                               parallel_profile_case_a, parallel_slope_case_b,
                               verify_family)
from meridian.jets import fd_jet2
from meridian.surfaces import (MeridianSurface, allied_coefficient,
                               eight_invariants)

E, H = Geometry.ELLIPTIC, Geometry.HYPERBOLIC


def spec(kind, geometry, eps=None, scale=1.0, **params):
    return FamilySpec(FamilyKind(kind), geometry, params=params,
                      epsilon_branch=eps, slope_scale=scale)


# -- constant Gauss curvature -------------------------------------------------


def test_constant_gauss_elliptic_negative():
    rep = verify_family(spec("constant_gauss", E, K0=-1.0, alpha=0.0,
                             beta=1.0, u_min=0.5, u_max=2.0, b=1.0),
                        tol=1e-8)
    assert rep.passed


def test_constant_gauss_hyperbolic_positive():
    rep = verify_family(spec("constant_gauss", H, K0=1.0, alpha=1.0, beta=0.0,
                             u_min=0.3, u_max=1.2, b=1.0), tol=1e-8)
    assert rep.passed


def test_constant_gauss_elliptic_positive_inadmissible():
    # fdot = -sin has fdot^2 <= 1: elliptic normalization cannot hold
    with pytest.raises(FamilyDomainError) as err:
        constant_gauss_profile(1.0, 1.0, 0.0, E, (0.3, 1.2))
    assert "fdot^2 > 1" in str(err.value)


def test_constant_gauss_rejects_zero():
    with pytest.raises(FamilyDomainError):
        constant_gauss_profile(0.0, 1.0, 0.0, E, (0.5, 2.0))


def test_constant_gauss_echoes_admissible_domain():
    p = constant_gauss_profile(-1.0, 0.0, 1.0, E, (0.5, 2.0))
    assert p.domain == (0.5, 2.0)  # fully admissible: no shrink


# -- constant mean curvature --------------------------------------------------


def test_cmc_elliptic_ode_and_invariant():
    s = spec("constant_mean", E, a=1.0, b=4.0, C=0.0, f0=0.5, u_span=0.5)
    prof = family_profile(s)
    assert max_ode_residual(cmc_ode_residual(prof, 1.0, 4.0, plus_sign=False),
                            prof.domain) <= 1e-7
    rep = verify_family(s, tol=1e-6)
    assert rep.passed and rep.n_samples > 500


def test_cmc_hyperbolic_arcsinh_branch():
    s = spec("constant_mean", H, eps=1, a=0.5, b=1.0, C=-0.6, f0=0.8,
             u_span=2.0)
    prof = family_profile(s)
    assert max_ode_residual(cmc_ode_residual(prof, 0.5, 1.0, plus_sign=True),
                            prof.domain) <= 1e-7
    rep = verify_family(s, tol=1e-6)
    assert rep.passed
    surf = build_family_surface(s)
    u = 0.5 * (prof.domain[0] + prof.domain[1])
    assert eight_invariants(surf, u, 1.0).epsilon == 1


def test_cmc_hyperbolic_arcsin_branch():
    s = spec("constant_mean", H, eps=-1, a=0.5, b=1.0, C=0.0, f0=0.5,
             u_span=2.0)
    prof = family_profile(s)
    # the arcsin slope solves the minus-sign ODE ...
    assert max_ode_residual(cmc_ode_residual(prof, 0.5, 1.0, plus_sign=False),
                            prof.domain) <= 1e-7
    # ... and misses the plus-sign one by a wide margin
    assert max_ode_residual(cmc_ode_residual(prof, 0.5, 1.0, plus_sign=True),
                            prof.domain) > 1e-2
    rep = verify_family(s, tol=1e-6)
    assert rep.passed
    surf = build_family_surface(s)
    u = 0.5 * (prof.domain[0] + prof.domain[1])
    assert eight_invariants(surf, u, 1.0).epsilon == -1


def test_cmc_mismatched_branch_documented_failure():
    rep = verify_family(spec("constant_mean", H, eps="printed-vs-eq18",
                             a=0.5, b=1.0, C=0.0, f0=0.5, u_span=2.0),
                        tol=1e-7)
    assert not rep.passed
    assert rep.max_abs_residual > 1e-2


def test_cmc_rejects_degenerate_parameters():
    with pytest.raises(FamilyDomainError):
        constant_mean_slope(0.0, 1.0, 0.0, E)
    with pytest.raises(FamilyDomainError):
        constant_mean_slope(1.0, 1.0, 0.0, E, epsilon_branch=-1)


# -- constant invariant k -----------------------------------------------------


def test_constant_k_elliptic():
    s = spec("constant_k", E, a=1.0, b=1.0, C=0.0, f0=1.0, u_span=1.0)
    prof = family_profile(s)
    assert max_ode_residual(constant_k_ode_residual(prof, 1.0, 1.0),
                            prof.domain) <= 1e-8
    rep = verify_family(s, tol=1e-6)
    assert rep.passed


def test_constant_k_hyperbolic():
    s = spec("constant_k", H, a=1.0, b=2.0, C=0.0, f0=0.5, u_span=0.7)
    prof = family_profile(s)
    assert max_ode_residual(constant_k_ode_residual(prof, 1.0, 2.0),
                            prof.domain) <= 1e-8
    rep = verify_family(s, tol=1e-6)
    assert rep.passed


# -- Chen surfaces ------------------------------------------------------------


def test_chen_elliptic_lambda_and_allied():
    s = spec("chen", E, a=-1.0, b=1.0, f0=1.2, u_span=0.8)
    prof = family_profile(s)
    assert max_ode_residual(chen_ode_residual(prof, 1.0), prof.domain) <= 1e-8
    rep = verify_family(s, tol=1e-6)
    assert rep.passed
    surf = build_family_surface(s)
    for u in (0.2, 0.5):
        for v in (0.4, 1.9):
            assert abs(allied_coefficient(surf, u, v)) <= 1e-7


def test_chen_hyperbolic():
    s = spec("chen", H, a=-1.0, b=0.5, f0=0.7, u_span=1.2)
    prof = family_profile(s)
    assert max_ode_residual(chen_ode_residual(prof, 0.5), prof.domain) <= 1e-8
    rep = verify_family(s, tol=1e-6)
    assert rep.passed


def test_chen_elliptic_positive_a_inadmissible():
    # a > 0 puts y^2 below 1: the elliptic slope constraint cannot hold
    with pytest.raises(ProfileDomainError):
        family_profile(spec("chen", E, a=1.0, b=1.0, f0=1.2, u_span=0.5))


# -- parallel normal bundle ---------------------------------------------------


def test_parallel_a_elliptic_closed_form_g():
    g0 = 0.3
    p = parallel_profile_case_a(0.0, -1.0, E, (1.1, 3.0), g0=g0)
    assert p.domain == (1.1, 3.0)
    ref = math.log(1.1 + math.sqrt(1.1 ** 2 - 1.0))
    for u in (1.3, 2.0, 2.9):
        expected = math.log(u + math.sqrt(u * u - 1.0)) - ref + g0
        assert abs(p.g(u) - expected) <= 1e-8
    for u in (1.2, 2.5):
        assert abs(p.phi(u)) <= 1e-12


def test_parallel_a_betas_vanish_for_wavy_kappa():
    rep = verify_family(spec("parallel_a", E, c=0.0, d=-1.0,
                             u_min=1.1, u_max=3.0), tol=1e-8)
    assert rep.passed
    rep = verify_family(spec("parallel_a", H, c=0.0, d=1.0,
                             u_min=0.1, u_max=0.9), tol=1e-8)
    assert rep.passed


def test_parallel_a_constraint_checked():
    with pytest.raises(FamilyDomainError):
        parallel_profile_case_a(0.0, 1.0, E, (1.1, 3.0))   # needs c^2 > d
    with pytest.raises(FamilyDomainError):
        parallel_profile_case_a(0.0, -1.0, H, (0.1, 0.9))  # needs d > c^2


def test_parallel_a_hyperbolic_scan_keeps_admissible_domain():
    p = parallel_profile_case_a(0.0, 1.0, H, (0.1, 0.9))
    assert p.domain == (0.1, 0.9)


def test_parallel_b_elliptic_simple_slope():
    y = parallel_slope_case_b(1.0, 0.0, E)
    assert abs(y(2.0) - math.sqrt(2.0)) <= 1e-12  # sqrt(2 t^2) / t


def test_parallel_b_elliptic_family():
    s = spec("parallel_b", E, a=1.0, c=1.0, b=2.0, f0=2.0, u_span=1.0)
    prof = family_profile(s)
    assert max_ode_residual(parallel_b_ode_residual(prof, 1.0),
                            prof.domain) <= 1e-8
    rep = verify_family(s, tol=1e-7)
    assert rep.passed


def test_parallel_b_hyperbolic_truncates_at_boundary():
    s = spec("parallel_b", H, a=0.5, c=0.1, b=1.0, f0=0.1, u_span=0.25)
    prof = family_profile(s)
    # fdot^2 -> 1 as f -> c/a = 0.2: integration must stop short of it
    assert prof.f_jet(prof.domain[1]).v < 0.2
    assert max_ode_residual(parallel_b_ode_residual(prof, 0.5),
                            prof.domain) <= 1e-8
    rep = verify_family(s, tol=1e-8)
    assert rep.passed


def test_parallel_b_rejects_nonconstant_kappa():
    s = spec("parallel_b", E, a=1.0, c=1.0, b=2.0, f0=2.0, u_span=1.0)
    curve = SphericalCurve(wavy_kappa(), E)
    with pytest.raises(MisuseError):
        build_family_surface(s, curve=curve)


def test_parallel_b_fails_for_nonconstant_kappa():
    prof = family_profile(spec("parallel_b", E, a=1.0, c=1.0, b=2.0,
                               f0=2.0, u_span=1.0))
    surf = MeridianSurface(prof, SphericalCurve(wavy_kappa(), E))
    inv = eight_invariants(surf, 0.5, 1.0)
    assert max(abs(inv.beta1), abs(inv.beta2)) > 1e-6


# -- verifier behavior --------------------------------------------------------


SLOPE_SPECS = [
    spec("constant_mean", E, a=1.0, b=4.0, C=0.0, f0=0.5, u_span=0.5),
    spec("constant_k", E, a=1.0, b=1.0, C=0.0, f0=1.0, u_span=1.0),
    spec("chen", E, a=-1.0, b=1.0, f0=1.2, u_span=0.8),
    spec("parallel_b", E, a=1.0, c=1.0, b=2.0, f0=2.0, u_span=1.0),
]


@pytest.mark.parametrize("base", SLOPE_SPECS,
                         ids=[s.kind.value for s in SLOPE_SPECS])
def test_perturbed_slope_fails_verification(base):
    perturbed = FamilySpec(base.kind, base.geometry, params=dict(base.params),
                           epsilon_branch=base.epsilon_branch,
                           slope_scale=1.001)
    rep = verify_family(perturbed, tol=1e-6)
    assert not rep.passed


def test_all_trapped_sweep_reports_failure():
    # kappa^2 = a^2 makes <H,H> vanish identically for case (b)
    rep = verify_family(spec("parallel_b", E, a=1.0, c=1.0, b=1.0,
                             f0=2.0, u_span=1.0), tol=1e-8)
    assert not rep.passed
    assert rep.n_samples == 0
    assert rep.skipped > 0


def test_missing_parameter_reported():
    with pytest.raises(FamilyDomainError) as err:
        verify_family(spec("constant_k", E, a=1.0, b=1.0))
    assert "f0" in str(err.value)


def test_slope_ode_second_derivative_matches_fd():
    s = spec("constant_k", E, a=1.0, b=1.0, C=0.0, f0=1.0, u_span=1.0)
    prof = family_profile(s)
    fn = profile_value_fn(prof)
    for frac in (0.1, 0.3, 0.5):
        u = prof.domain[0] + frac * (prof.domain[1] - prof.domain[0])
        fd = fd_jet2(fn, u, 1e-3)
        assert close(fd.d2, prof.f_jet(u).d2, 1e-6)
