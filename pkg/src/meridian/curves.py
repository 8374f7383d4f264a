"""Ingredient curves for meridian surfaces.

Two objects live here: the directing curve c on the unit sphere (elliptic
geometry) or the unit de Sitter sphere (hyperbolic geometry), realized by
RK4 integration of its Frenet system, and the meridian profile m = (f, g)
with its normalization constraint and curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from . import jets
from .errors import (DomainError, FrameError, ProfileDomainError,
                     UnsupportedGeometryError)
from .jets import Jet2, ScalarFn
from .mink4 import Vec4, gram
from .quadrature import adaptive_simpson

#: Profiles keep |normalization quantity| at or above this margin so that
#: kappa_m and every square-root denominator stays finite.
ADMISSIBILITY_MARGIN = 1e-8

#: Fixed RK4 step shared by the Frenet and slope integrators.
DEFAULT_STEP = 1e-3

_MAX_ARC = 1e4  # runaway guard for lazy Frenet table extension


class Geometry(Enum):
    """Meridian surface type: rotation axis timelike (elliptic, curve on
    S^2(1) in span{e1,e2,e3}) or spacelike (hyperbolic, curve on S^2_1(1)
    in span{e2,e3,e4})."""

    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"

    @property
    def sphere_slots(self) -> tuple[int, int, int]:
        """Coordinate slots carrying the directing curve."""
        return (0, 1, 2) if self is Geometry.ELLIPTIC else (1, 2, 3)

    @property
    def axis_slot(self) -> int:
        """Coordinate slot of the rotation axis (e4 resp. e1)."""
        return 3 if self is Geometry.ELLIPTIC else 0

    @property
    def frenet_sign(self) -> float:
        """Sign s in the tangent equation t' = s*kappa*n - l."""
        return 1.0 if self is Geometry.ELLIPTIC else -1.0

    @property
    def curve_signature(self) -> tuple[float, float, float]:
        """Expected Gram diagonal of the frame {l, t, n}."""
        return (1.0, 1.0, 1.0) if self is Geometry.ELLIPTIC else (1.0, 1.0, -1.0)

    @property
    def normalization_sign(self) -> float:
        """+1 when the profile constraint reads fdot^2 - 1 > 0 (elliptic),
        -1 when it reads 1 - fdot^2 > 0 (hyperbolic)."""
        return 1.0 if self is Geometry.ELLIPTIC else -1.0


def _embed(geometry: Geometry, triple: Sequence[float]) -> Vec4:
    coords = [0.0, 0.0, 0.0, 0.0]
    for slot, value in zip(geometry.sphere_slots, triple):
        coords[slot] = value
    return Vec4(*coords)


def _project(geometry: Geometry, vec: Vec4) -> tuple[float, float, float]:
    c = vec.coords()
    i, j, k = geometry.sphere_slots
    return (c[i], c[j], c[k])


@dataclass(frozen=True)
class FrenetFrame:
    l: Vec4
    t: Vec4
    n: Vec4


def _default_initial_frame(geometry: Geometry) -> tuple[Vec4, Vec4, Vec4]:
    if geometry is Geometry.ELLIPTIC:
        return (Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0))
    return (Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0), Vec4(0, 0, 0, 1))


def _validate_initial_frame(geometry: Geometry, l0: Vec4, t0: Vec4, n0: Vec4,
                            tol: float = 1e-9) -> None:
    axis = geometry.axis_slot
    for name, vec in (("l0", l0), ("t0", t0), ("n0", n0)):
        if abs(vec.coords()[axis]) > tol:
            raise FrameError(
                f"{name} must have zero component along the rotation axis")
    expected = geometry.curve_signature
    g = gram([l0, t0, n0])
    for i in range(3):
        for j in range(3):
            want = expected[i] if i == j else 0.0
            if abs(g[i][j] - want) > tol:
                raise FrameError(
                    f"initial frame Gram entry ({i},{j}) = {g[i][j]!r}, "
                    f"expected {want!r}")


class SphericalCurve:
    """Arc-length curve on S^2(1) or S^2_1(1) given by its spherical
    curvature kappa(v) and an initial frame, realized by Frenet integration.

    The frame table is integrated lazily with fixed-step classical RK4 and
    cached, so repeated evaluations are cheap and deterministic.  Extending
    the table counts as construction: evaluate from a single thread until
    the v-range of interest has been visited once; reads of covered ranges
    are safe to share.
    """

    def __init__(self, kappa, geometry: Geometry,
                 l0: Optional[Vec4] = None, t0: Optional[Vec4] = None,
                 n0: Optional[Vec4] = None, step: float = DEFAULT_STEP):
        if step <= 0.0:
            raise ValueError("step must be positive")
        if not isinstance(kappa, ScalarFn):
            kappa = ScalarFn.constant(float(kappa), name="kappa")
        self.kappa = kappa
        self.geometry = geometry
        self.step = step
        if l0 is None and t0 is None and n0 is None:
            l0, t0, n0 = _default_initial_frame(geometry)
        elif l0 is None or t0 is None or n0 is None:
            raise FrameError("supply all of l0, t0, n0 or none of them")
        _validate_initial_frame(geometry, l0, t0, n0)
        self._state0 = (_project(geometry, l0) + _project(geometry, t0)
                        + _project(geometry, n0))
        self._fwd = [self._state0]   # states at v = j*step
        self._bwd = [self._state0]   # states at v = -j*step
        self._closed_frame = None    # optional exact realization

    # -- integration --------------------------------------------------------

    def _rhs(self, v: float, s: Sequence[float]) -> list[float]:
        k = self.kappa(v)
        sk = self.geometry.frenet_sign * k
        return [
            s[3], s[4], s[5],
            sk * s[6] - s[0], sk * s[7] - s[1], sk * s[8] - s[2],
            -k * s[3], -k * s[4], -k * s[5],
        ]

    def _rk4_step(self, v: float, s: Sequence[float], h: float) -> list[float]:
        k1 = self._rhs(v, s)
        k2 = self._rhs(v + 0.5 * h, [si + 0.5 * h * ki for si, ki in zip(s, k1)])
        k3 = self._rhs(v + 0.5 * h, [si + 0.5 * h * ki for si, ki in zip(s, k2)])
        k4 = self._rhs(v + h, [si + h * ki for si, ki in zip(s, k3)])
        return [si + h / 6.0 * (a + 2.0 * b + 2.0 * c + d)
                for si, a, b, c, d in zip(s, k1, k2, k3, k4)]

    def _state_at(self, v: float) -> Sequence[float]:
        if abs(v) > _MAX_ARC:
            raise DomainError(f"curve parameter {v!r} exceeds supported range")
        h = self.step if v >= 0.0 else -self.step
        table = self._fwd if v >= 0.0 else self._bwd
        j = int(abs(v) / self.step)
        while len(table) <= j:
            i = len(table) - 1
            table.append(self._rk4_step(i * h, table[i], h))
        rem = v - j * h if v >= 0.0 else v + j * self.step
        state = table[j]
        if abs(rem) > 1e-15:
            state = self._rk4_step(j * h, state, rem)
        return state

    # -- public surface ------------------------------------------------------

    def frame(self, v: float) -> FrenetFrame:
        """Frenet frame {l, t, n} at arc length v."""
        if self._closed_frame is not None:
            l, t, n = self._closed_frame(v)
            return FrenetFrame(l, t, n)
        s = self._state_at(v)
        g = self.geometry
        return FrenetFrame(_embed(g, s[0:3]), _embed(g, s[3:6]), _embed(g, s[6:9]))

    def kappa_jet(self, v: float) -> Jet2:
        return self.kappa.jet2(v)

    def is_constant_kappa(self, tol: float = 1e-12,
                          samples: int = 32) -> bool:
        vs = [2.0 * math.pi * i / (samples - 1) for i in range(samples)]
        k0 = self.kappa(vs[0])
        return all(abs(self.kappa(v) - k0) <= tol * max(1.0, abs(k0))
                   for v in vs)


def frenet_frame(curve: SphericalCurve, v: float) -> FrenetFrame:
    """Frame of the directing curve at v (see SphericalCurve.frame)."""
    return curve.frame(v)


def circle_curve(b: float, geometry: Geometry) -> SphericalCurve:
    """Constant-curvature curve with kappa(v) = b, arc-length parameterized.

    Elliptic: the latitude circle of spherical radius rho with cot(rho) = b,
    realized in closed form.  Hyperbolic: realized by Frenet integration from
    the standard frame; arc-length parameterization forces the tangent to be
    spacelike, so every finite b yields a supported (spacelike) orbit.
    """
    if not math.isfinite(b):
        raise UnsupportedGeometryError("constant curvature b must be finite")
    kappa = ScalarFn.constant(float(b), name="kappa")
    curve = SphericalCurve(kappa, geometry)
    if geometry is Geometry.ELLIPTIC:
        sr = 1.0 / math.sqrt(1.0 + b * b)      # sin(rho)
        cr = b / math.sqrt(1.0 + b * b)        # cos(rho)

        def closed(v: float):
            w = v / sr
            cw, sw = math.cos(w), math.sin(w)
            l = Vec4(sr * cw, sr * sw, cr, 0.0)
            t = Vec4(-sw, cw, 0.0, 0.0)
            n = Vec4(-cr * cw, -cr * sw, sr, 0.0)
            return l, t, n

        curve._closed_frame = closed
    return curve


# ---------------------------------------------------------------------------
# Meridian profiles
# ---------------------------------------------------------------------------


class MeridianProfile:
    """Meridian curve m = (f, g): 2-jets of f, quadrature for g, and the
    meridian curvature.

    The normalization constraint fixes g up to its additive constant g0:
    gdot = sqrt(fdot^2 - 1) in the elliptic case, sqrt(1 - fdot^2) in the
    hyperbolic case, with gdot >= 0 by convention.  g values are memoized;
    as with the curve tables, first evaluation of a new u counts as
    construction and belongs on one thread.
    """

    def __init__(self, geometry: Geometry, domain: tuple[float, float],
                 g0: float = 0.0, g_orientation: int = 1):
        if domain[1] <= domain[0]:
            raise ProfileDomainError(f"empty profile domain {domain!r}")
        if g_orientation not in (1, -1):
            raise ValueError("g_orientation must be +1 or -1")
        self.geometry = geometry
        self.domain = (float(domain[0]), float(domain[1]))
        self.g0 = float(g0)
        self.g_orientation = g_orientation
        self._g_cache: dict[float, float] = {}
        self._g_panels: list[float] = [0.0]  # cumulative quadrature anchors

    # subclasses supply these two
    def _f_jet(self, u: float) -> Jet2:
        raise NotImplementedError

    def _f3(self, u: float) -> float:
        raise NotImplementedError

    def _check(self, u: float) -> None:
        lo, hi = self.domain
        if not lo <= u <= hi:
            raise DomainError(f"u = {u!r} outside profile domain [{lo}, {hi}]")

    def f_jet(self, u: float) -> Jet2:
        self._check(u)
        return self._f_jet(u)

    def f3(self, u: float) -> float:
        self._check(u)
        return self._f3(u)

    def normalization(self, u: float) -> float:
        """The positive quantity fdot^2 - 1 (elliptic) or 1 - fdot^2
        (hyperbolic)."""
        j = self.f_jet(u)
        return self.geometry.normalization_sign * (j.d1 * j.d1 - 1.0)

    def gdot(self, u: float) -> float:
        V = self.normalization(u)
        if V <= 0.0:
            raise ProfileDomainError(
                f"normalization violated at u = {u!r}", u=u)
        return self.g_orientation * math.sqrt(V)

    def gddot(self, u: float) -> float:
        j = self.f_jet(u)
        V = self.normalization(u)
        return (self.g_orientation * self.geometry.normalization_sign
                * j.d1 * j.d2 / math.sqrt(V))

    _G_PANEL = 0.25  # fixed anchor spacing for the cumulative quadrature

    def g(self, u: float) -> float:
        """g(u) = g0 + integral of gdot from the domain's left endpoint.

        The integral accumulates over fixed panels plus a short adaptive
        Simpson tail, so nearby evaluations share their anchors and stay
        usable inside finite-difference stencils.
        """
        self._check(u)
        cached = self._g_cache.get(u)
        if cached is None:
            j = int((u - self.domain[0]) / self._G_PANEL)
            while len(self._g_panels) <= j:
                i = len(self._g_panels) - 1
                a = self.domain[0] + i * self._G_PANEL
                self._g_panels.append(
                    self._g_panels[i]
                    + adaptive_simpson(self.gdot, a, a + self._G_PANEL,
                                       tol=1e-15))
            anchor = self.domain[0] + j * self._G_PANEL
            cached = self.g0 + self._g_panels[j] + adaptive_simpson(
                self.gdot, anchor, u, tol=1e-15)
            self._g_cache[u] = cached
        return cached

    def phi(self, u: float) -> float:
        """f*fddot + fdot^2 - 1, the quantity steering H and the betas."""
        j = self.f_jet(u)
        return j.v * j.d2 + j.d1 * j.d1 - 1.0

    def curvature_term(self, u: float) -> float:
        """phi / sqrt(normalization)."""
        return self.phi(u) / math.sqrt(self.normalization(u))

    def curvature_term_rate(self, u: float) -> float:
        """d/du of curvature_term, using the exact third derivative of f."""
        j = self.f_jet(u)
        V = self.normalization(u)
        sqV = math.sqrt(V)
        phi = j.v * j.d2 + j.d1 * j.d1 - 1.0
        dphi = 3.0 * j.d1 * j.d2 + j.v * self.f3(u)
        dV = self.geometry.normalization_sign * 2.0 * j.d1 * j.d2
        return dphi / sqV - 0.5 * phi * dV / (V * sqV)

    def kappa_m(self, u: float) -> float:
        """Curvature of the meridian: fddot/sqrt(fdot^2-1) (elliptic) or
        -fddot/sqrt(1-fdot^2) (hyperbolic), with the mirrored sign when
        g_orientation is -1."""
        j = self.f_jet(u)
        V = self.normalization(u)
        if V <= 0.0:
            raise ProfileDomainError(
                f"normalization violated at u = {u!r}", u=u)
        reduced = (self.g_orientation * self.geometry.normalization_sign
                   * j.d2 / math.sqrt(V))
        cross = j.d1 * self.gddot(u) - self.gdot(u) * j.d2
        assert abs(reduced - cross) <= 1e-7 * max(1.0, abs(reduced)), \
            f"kappa_m forms disagree at u={u}: {reduced} vs {cross}"
        return reduced


def kappa_m(profile: MeridianProfile, u: float) -> float:
    """Meridian curvature at u (see MeridianProfile.kappa_m)."""
    return profile.kappa_m(u)


class _ExplicitProfile(MeridianProfile):
    def __init__(self, f: ScalarFn, geometry, domain, g0=0.0, g_orientation=1):
        super().__init__(geometry, domain, g0, g_orientation)
        self._f = f

    def _f_jet(self, u):
        return self._f.jet2(u)

    def _f3(self, u):
        return jets.third_derivative(self._f, u)


def _sample_violation(f_jet, geometry: Geometry, u: float) -> Optional[str]:
    """Message describing why u is inadmissible, or None when it is fine."""
    try:
        j = f_jet(u)
    except DomainError as exc:
        return str(exc)
    if j.v <= 0.0:
        return f"profile requires f(u) > 0, violated at u = {u:.9g}"
    V = geometry.normalization_sign * (j.d1 * j.d1 - 1.0)
    if V < ADMISSIBILITY_MARGIN:
        if geometry is Geometry.ELLIPTIC:
            return ("elliptic normalization requires fdot^2 > 1, "
                    f"violated at u = {u:.9g}")
        return ("hyperbolic normalization requires fdot^2 < 1, "
                f"violated at u = {u:.9g}")
    return None


def _admissibility_failure(f_jet, geometry: Geometry, lo: float, hi: float,
                           n: int = 512):
    """First sample in [lo, hi] violating f > 0 or the normalization margin.

    Returns (u, message) or None.
    """
    for i in range(n):
        u = lo if n == 1 else lo + (hi - lo) * i / (n - 1)
        msg = _sample_violation(f_jet, geometry, u)
        if msg is not None:
            return u, msg
    return None


def profile_from_f(f: ScalarFn, geometry: Geometry, g0: float,
                   domain: tuple[float, float],
                   g_orientation: int = 1) -> MeridianProfile:
    """Profile from an explicit f with g supplied by adaptive Simpson
    quadrature of gdot.  The domain is scanned at 512 points; any
    admissibility violation raises ProfileDomainError naming the offending u.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if hi <= lo:
        raise ProfileDomainError(f"empty profile domain {domain!r}")
    bad = _admissibility_failure(f.jet2, geometry, lo, hi)
    if bad is not None:
        raise ProfileDomainError(bad[1], u=bad[0])
    return _ExplicitProfile(f, geometry, (lo, hi), g0, g_orientation)


class _SlopeProfile(MeridianProfile):
    """Profile integrated from fdot = y(f); f is tabulated on the RK4 grid
    and interpolated by cubic Hermite, while fdot, fddot, and the third
    derivative come exactly from the jets of y."""

    def __init__(self, y: ScalarFn, geometry, g0, step,
                 us: list[float], fs: list[float], ds: list[float]):
        super().__init__(geometry, (us[0], us[-1]), g0)
        self.y = y
        self._step = step
        self._us = us
        self._fs = fs
        self._ds = ds

    def _f_value(self, u: float) -> float:
        i = min(int((u - self._us[0]) / self._step), len(self._us) - 2)
        i = max(i, 0)
        h = self._us[i + 1] - self._us[i]
        s = (u - self._us[i]) / h
        s2, s3 = s * s, s * s * s
        return ((2.0 * s3 - 3.0 * s2 + 1.0) * self._fs[i]
                + (s3 - 2.0 * s2 + s) * h * self._ds[i]
                + (-2.0 * s3 + 3.0 * s2) * self._fs[i + 1]
                + (s3 - s2) * h * self._ds[i + 1])

    def _f_jet(self, u):
        fv = self._f_value(u)
        yj = self.y.jet2(fv)
        return Jet2(fv, yj.v, yj.v * yj.d1)

    def _f3(self, u):
        fv = self._f_value(u)
        yj = self.y.jet2(fv)
        return yj.v * yj.d1 * yj.d1 + yj.v * yj.v * yj.d2


def _slope_admissible(y: ScalarFn, t: float, geometry: Geometry) -> float:
    """Value y(t) if the slope keeps the profile admissible there, else NaN."""
    try:
        yv = y(t)
    except (DomainError, ValueError, ZeroDivisionError):
        return math.nan
    if t <= 0.0 or not math.isfinite(yv):
        return math.nan
    V = geometry.normalization_sign * (yv * yv - 1.0)
    if V < ADMISSIBILITY_MARGIN or (geometry is Geometry.HYPERBOLIC and yv <= 0.0):
        return math.nan
    return yv


def _step_dips_inadmissible(y: ScalarFn, geometry: Geometry,
                            t_lo: float, t_hi: float) -> bool:
    """Whether the normalization margin is violated strictly inside
    [t_lo, t_hi] even though both endpoints are admissible.

    The margin quantity V(t) can dip through zero inside a single step (it
    is quadratic near a simple root of 1 - y^2); catch that by locating an
    interior extremum of V via a sign change of dV/dt and testing it.
    """
    def dV(t: float) -> float:
        j = y.jet2(t)
        return geometry.normalization_sign * 2.0 * j.v * j.d1

    try:
        da, db = dV(t_lo), dV(t_hi)
    except (DomainError, ValueError, ZeroDivisionError):
        return True
    if da == 0.0 or db == 0.0 or (da < 0.0) == (db < 0.0):
        return False
    a, b = t_lo, t_hi
    for _ in range(60):
        mid = 0.5 * (a + b)
        try:
            dm = dV(mid)
        except (DomainError, ValueError, ZeroDivisionError):
            return True
        if (dm < 0.0) == (da < 0.0):
            a = mid
        else:
            b = mid
    return math.isnan(_slope_admissible(y, 0.5 * (a + b), geometry))


def profile_from_slope_ode(y: ScalarFn, f0: float, geometry: Geometry,
                           g0: float, u_span: float,
                           step: float = DEFAULT_STEP) -> MeridianProfile:
    """Profile from the substitution fdot = y(f), integrated by fixed-step RK4.

    fddot is supplied exactly as y(f)*y'(f).  Integration stops early with a
    truncated domain as soon as admissibility fails; y(f0) itself must be
    admissible for the geometry (y > 1 elliptic, 0 < y < 1 hyperbolic).
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if u_span <= 0.0:
        raise ValueError("u_span must be positive")
    if math.isnan(_slope_admissible(y, f0, geometry)):
        kind = "y(f0) > 1" if geometry is Geometry.ELLIPTIC else "0 < y(f0) < 1"
        raise ProfileDomainError(
            f"slope inadmissible at f0 = {f0!r}: geometry requires {kind}")

    n_steps = max(1, round(u_span / step))
    us, fs, ds = [0.0], [f0], [_slope_admissible(y, f0, geometry)]
    f = f0
    for i in range(n_steps):
        k1 = _slope_admissible(y, f, geometry)
        k2 = _slope_admissible(y, f + 0.5 * step * k1, geometry)
        k3 = _slope_admissible(y, f + 0.5 * step * k2, geometry)
        k4 = _slope_admissible(y, f + step * k3, geometry)
        if any(map(math.isnan, (k1, k2, k3, k4))):
            break
        f_next = f + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        d_next = _slope_admissible(y, f_next, geometry)
        if math.isnan(d_next):
            break
        if _step_dips_inadmissible(y, geometry, min(f, f_next), max(f, f_next)):
            break
        f = f_next
        us.append((i + 1) * step)
        fs.append(f)
        ds.append(d_next)
    if len(us) < 2:
        raise ProfileDomainError(
            f"slope trajectory from f0 = {f0!r} leaves the admissible set "
            "within one step")
    return _SlopeProfile(y, geometry, g0, step, us, fs, ds)
