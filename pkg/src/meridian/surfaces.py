"""Meridian surfaces and their invariants.

A surface is assembled from a meridian profile and a directing spherical
curve of matching geometry.  Closed-form invariants are computed from the
profile jets and the curve's curvature; an independent finite-difference
route through the fundamental forms is provided as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .curves import Geometry, MeridianProfile, SphericalCurve
from .errors import (FlatPointError, MisuseError, NotSpacelikeError,
                     TrappedPointError)
from .jets import fd_partials2
from .mink4 import Vec4, inner

SQRT2 = math.sqrt(2.0)

#: |kappa| or |kappa_m| at or below this marks a flat point (case I / II);
#: the geometric frame's denominators degenerate there.
FLAT_TOL = 1e-9

#: |<H,H>| at or below this marks a marginally trapped point, which is
#: rejected rather than approximated.
TRAPPED_TOL = 1e-10

#: Default step for the finite-difference fundamental forms: wide enough
#: that quadrature jitter in g stays far below the stencil's truncation.
FORMS_STEP = 5e-4


class MeridianSurface:
    """z(u,v) = f(u) l(v) + g(u) axis, with axis e4 (elliptic) or e1
    (hyperbolic)."""

    def __init__(self, profile: MeridianProfile, curve: SphericalCurve):
        if profile.geometry is not curve.geometry:
            raise MisuseError(
                f"profile geometry {profile.geometry.value} does not match "
                f"curve geometry {curve.geometry.value}")
        self.profile = profile
        self.curve = curve
        self.geometry = profile.geometry

    def position(self, u: float, v: float) -> Vec4:
        f = self.profile.f_jet(u).v
        g = self.profile.g(u)
        l = self.curve.frame(v).l
        coords = [f * c for c in l.coords()]
        coords[self.geometry.axis_slot] += g
        return Vec4(*coords)


def position(surface: MeridianSurface, u: float, v: float) -> Vec4:
    return surface.position(u, v)


@dataclass(frozen=True)
class AdaptedFrame:
    """Orthonormal frame {X, Y, n1, n2} with Gram diag(1, 1, 1, -1)."""

    X: Vec4
    Y: Vec4
    n1: Vec4
    n2: Vec4


@dataclass(frozen=True)
class GeometricFrame:
    """Canonical frame {x, y, b, l} with b collinear to H and Gram
    diag(1, 1, epsilon, -epsilon)."""

    x: Vec4
    y: Vec4
    b: Vec4
    l: Vec4
    epsilon: int


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    L: float
    M: float
    N: float


@dataclass(frozen=True)
class BasicInvariants:
    k: float
    varkappa: float
    gaussK: float
    H2: float
    meanH: float


@dataclass(frozen=True)
class InvariantSet:
    """The eight frame invariants plus the derived scalar invariants at a
    point (lam is the invariant the surrounding literature calls lambda)."""

    gamma1: float
    gamma2: float
    nu1: float
    nu2: float
    lam: float
    mu: float
    beta1: float
    beta2: float
    epsilon: int
    k: float
    varkappa: float
    gaussK: float
    meanH: float
    H2: float


class PointTag(Enum):
    FLAT_CASE_I = "flat_case_I"     # kappa = 0: planar
    FLAT_CASE_II = "flat_case_II"   # kappa_m = 0: developable ruled
    GENERAL = "general"


class KType(Enum):
    ELLIPTIC_PT = "elliptic_pt"
    PARABOLIC_PT = "parabolic_pt"
    HYPERBOLIC_PT = "hyperbolic_pt"


@dataclass(frozen=True)
class PointClass:
    tag: PointTag
    ktype: KType
    trapped: bool
    minimal: bool


@dataclass(frozen=True)
class _PointData:
    f: float
    fdot: float
    fddot: float
    V: float          # fdot^2-1 (elliptic) or 1-fdot^2 (hyperbolic), > 0
    sqV: float
    phi: float        # f fddot + fdot^2 - 1
    kappa: float
    dkappa: float
    kappa_m: float
    D: float          # signed discriminant; <H,H> = D / (4 f^2 V)
    H2: float


def _point_data(s: MeridianSurface, u: float, v: float) -> _PointData:
    j = s.profile.f_jet(u)
    V = s.profile.normalization(u)
    sqV = math.sqrt(V)
    phi = j.v * j.d2 + j.d1 * j.d1 - 1.0
    kj = s.curve.kappa_jet(v)
    kappa_m = s.geometry.normalization_sign * j.d2 / sqV
    if s.geometry is Geometry.ELLIPTIC:
        D = kj.v * kj.v * V - phi * phi
    else:
        D = phi * phi - kj.v * kj.v * V
    H2 = D / (4.0 * j.v * j.v * V)
    return _PointData(j.v, j.d1, j.d2, V, sqV, phi, kj.v, kj.d1,
                      kappa_m, D, H2)


def _require_general(p: _PointData) -> None:
    if abs(p.kappa) <= FLAT_TOL:
        raise FlatPointError(
            "kappa = 0: flat point of case I (planar surface)")
    if abs(p.kappa_m) <= FLAT_TOL:
        raise FlatPointError(
            "kappa_m = 0: flat point of case II (developable ruled surface)")


def _require_untrapped(p: _PointData, tol: float = TRAPPED_TOL) -> None:
    if abs(p.H2) <= tol:
        raise TrappedPointError(
            f"<H,H> = {p.H2:.3e} is lightlike within tolerance; marginally "
            "trapped points are outside the invariant frame construction")


def _require_plus_orientation(s: MeridianSurface) -> None:
    if s.profile.g_orientation != 1:
        raise MisuseError(
            "invariant formulas assume the gdot >= 0 representative; "
            "rebuild the profile with g_orientation=+1")


def adapted_frame(s: MeridianSurface, u: float, v: float) -> AdaptedFrame:
    """{X = z_u, Y = z_v / f, n1, n2} per the construction of each geometry."""
    j = s.profile.f_jet(u)
    gd = s.profile.gdot(u)
    fr = s.curve.frame(v)
    if s.geometry is Geometry.ELLIPTIC:
        X = j.d1 * fr.l + Vec4(0.0, 0.0, 0.0, gd)
        n1 = fr.n
        n2 = gd * fr.l + Vec4(0.0, 0.0, 0.0, j.d1)
    else:
        X = j.d1 * fr.l + Vec4(gd, 0.0, 0.0, 0.0)
        n1 = gd * fr.l - Vec4(j.d1, 0.0, 0.0, 0.0)
        n2 = fr.n
    return AdaptedFrame(X, fr.t, n1, n2)


def fundamental_forms_numeric(s: MeridianSurface, u: float, v: float,
                              h: Optional[float] = None) -> FundamentalForms:
    """E, F, G, L, M, N from central-difference partials of the position map.

    This is the oracle route: first/second partials are finite differences;
    only the normal directions n1, n2 come from the closed-form frame.
    """
    if h is None:
        h = FORMS_STEP
    part = fd_partials2(s.position, u, v, h)
    zu, zv = part["z_u"], part["z_v"]
    E = inner(zu, zu)
    F = inner(zu, zv)
    G = inner(zv, zv)
    w2 = E * G - F * F
    if w2 <= 0.0:
        raise NotSpacelikeError(
            f"degenerate induced metric at (u,v)=({u},{v}): EG - F^2 = {w2!r}")
    W = math.sqrt(w2)
    fr = adapted_frame(s, u, v)
    c1 = {key: inner(part[key], fr.n1) for key in ("z_uu", "z_uv", "z_vv")}
    c2 = {key: inner(part[key], fr.n2) for key in ("z_uu", "z_uv", "z_vv")}
    L = 2.0 / W * (c1["z_uu"] * c2["z_uv"] - c1["z_uv"] * c2["z_uu"])
    M = 1.0 / W * (c1["z_uu"] * c2["z_vv"] - c1["z_vv"] * c2["z_uu"])
    N = 2.0 / W * (c1["z_uv"] * c2["z_vv"] - c1["z_vv"] * c2["z_uv"])
    return FundamentalForms(E, F, G, L, M, N)


def invariants_from_forms(forms: FundamentalForms) -> tuple[float, float]:
    """(k, varkappa) from fundamental forms: the numeric route."""
    denom = forms.E * forms.G - forms.F * forms.F
    k = (forms.L * forms.N - forms.M * forms.M) / denom
    varkappa = (forms.E * forms.N + forms.G * forms.L
                - 2.0 * forms.F * forms.M) / (2.0 * denom)
    return k, varkappa


def basic_invariants(s: MeridianSurface, u: float, v: float) -> BasicInvariants:
    """Closed forms: k = -kappa_m^2 kappa^2 / f^2, varkappa = 0,
    K = -fddot/f, plus <H,H> and its norm."""
    p = _point_data(s, u, v)
    k = -(p.fddot * p.fddot / p.V) * p.kappa * p.kappa / (p.f * p.f)
    gaussK = -p.fddot / p.f
    return BasicInvariants(k=k, varkappa=0.0, gaussK=gaussK, H2=p.H2,
                           meanH=math.sqrt(abs(p.H2)))


def mean_curvature_vector(s: MeridianSurface, u: float, v: float) -> Vec4:
    """The mean curvature vector in the adapted normal frame.

    Requires a general point: the reduced coefficients assume case III.
    """
    p = _point_data(s, u, v)
    _require_general(p)
    fr = adapted_frame(s, u, v)
    o = s.profile.g_orientation
    if s.geometry is Geometry.ELLIPTIC:
        return (p.kappa / (2.0 * p.f)) * fr.n1 \
            + (o * p.phi / (2.0 * p.f * p.sqV)) * fr.n2
    return (o * p.phi / (2.0 * p.f * p.sqV)) * fr.n1 \
        - (p.kappa / (2.0 * p.f)) * fr.n2


def geometric_frame(s: MeridianSurface, u: float, v: float,
                    tol_trapped: float = TRAPPED_TOL) -> GeometricFrame:
    """Principal tangents x, y and the normal pair b, l with b collinear
    (same orientation for epsilon = +1) with H."""
    _require_plus_orientation(s)
    p = _point_data(s, u, v)
    _require_general(p)
    _require_untrapped(p, tol_trapped)
    eps = 1 if p.H2 > 0.0 else -1
    fr = adapted_frame(s, u, v)
    x = (fr.X + fr.Y) / SQRT2
    y = (-1.0 * fr.X + fr.Y) / SQRT2
    norm = math.sqrt(eps * p.D)
    if s.geometry is Geometry.ELLIPTIC:
        pb = (p.kappa * p.sqV, p.phi)
    else:
        pb = (p.phi, -p.kappa * p.sqV)
    b = (eps / norm) * (pb[0] * fr.n1 + pb[1] * fr.n2)
    l = (1.0 / norm) * (pb[1] * fr.n1 + pb[0] * fr.n2)
    return GeometricFrame(x=x, y=y, b=b, l=l, epsilon=eps)


def eight_invariants(s: MeridianSurface, u: float, v: float) -> InvariantSet:
    """The eight invariants of the geometric frame, by their closed forms,
    with dkappa/dv taken from the curve's jet."""
    _require_plus_orientation(s)
    p = _point_data(s, u, v)
    _require_general(p)
    _require_untrapped(p)
    eps = 1 if p.H2 > 0.0 else -1
    absD = eps * p.D
    sqD = math.sqrt(absD)
    f = p.f

    gamma = -p.fdot / (SQRT2 * f)
    nu = sqD / (2.0 * f * p.sqV)
    lam_core = (p.kappa * p.kappa * p.V + f * f * p.fddot * p.fddot
                - p.V * p.V)
    lam_sign = 1.0 if s.geometry is Geometry.ELLIPTIC else -1.0
    lam = eps * lam_sign * lam_core / (2.0 * f * p.sqV * sqD)
    mu = p.kappa * p.fddot / sqD

    P = p.phi / p.sqV
    Pdu = s.profile.curvature_term_rate(u)
    beta1 = -p.V * (p.kappa * Pdu - p.dkappa * P / f) / (SQRT2 * absD)
    beta2 = p.V * (p.kappa * Pdu + p.dkappa * P / f) / (SQRT2 * absD)

    k = -(p.fddot * p.fddot / p.V) * p.kappa * p.kappa / (f * f)
    return InvariantSet(
        gamma1=gamma, gamma2=gamma, nu1=nu, nu2=nu, lam=lam, mu=mu,
        beta1=beta1, beta2=beta2, epsilon=eps, k=k, varkappa=0.0,
        gaussK=-p.fddot / f, meanH=math.sqrt(abs(p.H2)), H2=p.H2)


def allied_coefficient(s: MeridianSurface, u: float, v: float) -> float:
    """Magnitude coefficient of the allied mean curvature field along l:
    sqrt(varkappa^2 - k)/2 * lambda, which vanishes exactly on Chen
    surfaces."""
    inv = eight_invariants(s, u, v)
    return math.sqrt(inv.varkappa * inv.varkappa - inv.k) / 2.0 * inv.lam


def classify_point(s: MeridianSurface, u: float, v: float,
                   tol: float = FLAT_TOL) -> PointClass:
    """Flat-case tag, point type by the sign of k, and trapped/minimal flags."""
    p = _point_data(s, u, v)
    if abs(p.kappa) <= tol:
        tag = PointTag.FLAT_CASE_I
    elif abs(p.kappa_m) <= tol:
        tag = PointTag.FLAT_CASE_II
    else:
        tag = PointTag.GENERAL
    k = -(p.fddot * p.fddot / p.V) * p.kappa * p.kappa / (p.f * p.f)
    if k > tol:
        ktype = KType.ELLIPTIC_PT
    elif abs(k) <= tol:
        ktype = KType.PARABOLIC_PT
    else:
        ktype = KType.HYPERBOLIC_PT
    trapped = abs(p.H2) <= TRAPPED_TOL
    minimal = (tag is PointTag.GENERAL and not trapped
               and math.sqrt(abs(p.H2)) <= tol)
    return PointClass(tag=tag, ktype=ktype, trapped=trapped, minimal=minimal)
