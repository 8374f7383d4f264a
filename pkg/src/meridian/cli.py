"""Command-line front end: build surfaces from config, sweep invariants to
CSV, run family verifications, and export sampled geometry.

Exit codes: 0 success / verification passed, 1 verification failed,
2 invalid input/domain/admissibility, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

from . import jets
from .curves import (Geometry, SphericalCurve, circle_curve, profile_from_f,
                     profile_from_slope_ode)
from .errors import MeridianError, NotSpacelikeError
from .families import (FamilyKind, FamilySpec, build_family_surface,
                       constant_gauss_profile, family_profile,
                       harmonic_fn, hyperbolic_harmonic_fn,
                       parallel_profile_case_a, sqrt_quadratic_fn,
                       verify_family)
from .jets import ScalarFn
from .surfaces import (MeridianSurface, PointTag, basic_invariants,
                       classify_point, eight_invariants)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

CSV_HEADER = ("u,v,E,F,G,k,varkappa,K,H2,normH,epsilon,gamma1,gamma2,"
              "nu1,nu2,lambda,mu,beta1,beta2,pointclass")


class ConfigError(MeridianError):
    """Configuration is missing fields or holds unusable values."""


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _round9(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round9(v) for v in obj]
    return obj


def _require(cfg: dict, key: str, where: str = ""):
    if key not in cfg:
        path = f"{where}.{key}" if where else key
        raise ConfigError(f"missing field: {path}")
    return cfg[key]


# ---------------------------------------------------------------------------
# Config -> surface
# ---------------------------------------------------------------------------

_EXPLICIT_FAMILIES = {
    "sinh": lambda p: ScalarFn(jets.sinh, name="sinh", d3=math.cosh),
    "cosh": lambda p: ScalarFn(jets.cosh, name="cosh", d3=math.sinh),
    "cos": lambda p: ScalarFn(jets.cos, name="cos", d3=math.sin),
    "linear": lambda p: ScalarFn(
        lambda t: p.get("a0", 0.0) + p.get("a1", 1.0) * t,
        name="linear", d3=lambda u: 0.0),
    "harmonic": lambda p: harmonic_fn(p["alpha"], p["beta"],
                                      p.get("omega", 1.0)),
    "hyperbolic_harmonic": lambda p: hyperbolic_harmonic_fn(
        p["alpha"], p["beta"], p.get("omega", 1.0)),
    "sqrt_quadratic": lambda p: sqrt_quadratic_fn(p["c"], p["d"]),
}

_SLOPE_KINDS = {"constant_mean", "constant_k", "chen", "parallel_b"}
_FAMILY_KINDS = {"constant_gauss", "parallel_a"}


def _geometry(cfg: dict) -> Geometry:
    name = _require(cfg, "geometry")
    try:
        return Geometry(name)
    except ValueError:
        raise ConfigError(f"unknown geometry {name!r}") from None


def _curve_from_config(cfg: dict, geometry: Geometry) -> SphericalCurve:
    spec = _require(cfg, "curve")
    kind = _require(spec, "kind", "curve")
    if kind == "constant":
        return circle_curve(float(_require(spec, "b", "curve")), geometry)
    if kind == "function":
        rows = _require(spec, "samples", "curve")
        if len(rows) < 2 or any(len(r) != 3 for r in rows):
            raise ConfigError(
                "curve.samples must be >= 2 rows of [v, kappa, dkappa/dv]")
        xs = [float(r[0]) for r in rows]
        ys = [float(r[1]) for r in rows]
        ds = [float(r[2]) for r in rows]
        return SphericalCurve(jets.hermite_fn(xs, ys, ds, name="kappa"),
                              geometry)
    raise ConfigError(f"unknown curve kind {kind!r}")


def _u_domain(cfg: dict) -> tuple[float, float]:
    dom = _require(cfg, "domain")
    u = _require(dom, "u", "domain")
    if len(u) != 2:
        raise ConfigError("domain.u must be [lo, hi]")
    return float(u[0]), float(u[1])


def _v_domain(cfg: dict) -> tuple[float, float]:
    v = cfg.get("domain", {}).get("v", [0.0, 2.0 * math.pi])
    if len(v) != 2:
        raise ConfigError("domain.v must be [lo, hi]")
    return float(v[0]), float(v[1])


def _profile_from_config(cfg: dict, geometry: Geometry):
    spec = _require(cfg, "profile")
    kind = _require(spec, "kind", "profile")
    params = {k: v for k, v in spec.items() if k not in ("kind", "family")}
    g0 = float(params.pop("g0", 0.0))
    if kind == "explicit_f":
        family = _require(spec, "family", "profile")
        builder = _EXPLICIT_FAMILIES.get(family)
        if builder is None:
            raise ConfigError(f"unknown explicit_f family {family!r}")
        try:
            f = builder(params)
        except KeyError as exc:
            raise ConfigError(
                f"missing field: profile.{exc.args[0]}") from None
        return profile_from_f(f, geometry, g0, _u_domain(cfg))
    if kind == "slope_ode":
        family = _require(spec, "family", "profile")
        if family not in _SLOPE_KINDS:
            raise ConfigError(f"unknown slope_ode family {family!r}")
        fspec = FamilySpec(FamilyKind(family), geometry, params=params,
                           epsilon_branch=params.pop("epsilon_branch", None))
        return family_profile(fspec)
    if kind == "family":
        family = _require(spec, "family", "profile")
        if family not in _FAMILY_KINDS:
            raise ConfigError(f"unknown profile family {family!r}")
        u_lo, u_hi = _u_domain(cfg)
        if family == "constant_gauss":
            return constant_gauss_profile(
                float(_require(spec, "K0", "profile")),
                float(params.get("alpha", 0.0)),
                float(params.get("beta", 0.0)),
                geometry, (u_lo, u_hi), g0=g0)
        return parallel_profile_case_a(
            float(_require(spec, "c", "profile")),
            float(_require(spec, "d", "profile")),
            geometry, (u_lo, u_hi),
            g_sign=int(params.get("g_sign", 1)), g0=g0)
    raise ConfigError(f"unknown profile kind {kind!r}")


def surface_from_config(cfg: dict) -> MeridianSurface:
    geometry = _geometry(cfg)
    curve = _curve_from_config(cfg, geometry)
    profile = _profile_from_config(cfg, geometry)
    return MeridianSurface(profile, curve)


def _grid(cfg: dict, override: Optional[str]) -> tuple[int, int]:
    if override:
        try:
            nu, nv = (int(p) for p in override.split(","))
        except ValueError:
            raise ConfigError(f"--grid expects NU,NV, got {override!r}") from None
    else:
        g = cfg.get("grid", {})
        nu, nv = int(g.get("nu", 33)), int(g.get("nv", 33))
    if nu < 1 or nv < 1:
        raise ConfigError("grid sizes must be >= 1")
    return nu, nv


def _grid_points(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [0.5 * (lo + hi)]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_build(args) -> int:
    cfg = _load_config(args.config)
    surface = surface_from_config(cfg)
    resolved = dict(cfg)
    dom = dict(cfg.get("domain", {}))
    dom["u"] = list(surface.profile.domain)
    dom["v"] = list(_v_domain(cfg))
    resolved["domain"] = dom
    g = cfg.get("grid", {})
    resolved["grid"] = {"nu": int(g.get("nu", 33)), "nv": int(g.get("nv", 33))}
    resolved["validated"] = True
    text = json.dumps(_round9(resolved), indent=2, sort_keys=True)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text + "\n")
    print(f"built surface descriptor: {args.out} "
          f"(u domain [{_fmt(surface.profile.domain[0])}, "
          f"{_fmt(surface.profile.domain[1])}])")
    return EXIT_OK


def _invariant_row(surface: MeridianSurface, u: float, v: float,
                   flat_tol: float) -> list[str]:
    f = surface.profile.f_jet(u).v
    basic = basic_invariants(surface, u, v)
    cls = classify_point(surface, u, v, tol=flat_tol)
    cells = [_fmt(u), _fmt(v), _fmt(1.0), _fmt(0.0), _fmt(f * f),
             _fmt(basic.k), _fmt(basic.varkappa), _fmt(basic.gaussK),
             _fmt(basic.H2), _fmt(basic.meanH)]
    if cls.tag is PointTag.GENERAL and not cls.trapped:
        inv = eight_invariants(surface, u, v)
        cells += [str(inv.epsilon), _fmt(inv.gamma1), _fmt(inv.gamma2),
                  _fmt(inv.nu1), _fmt(inv.nu2), _fmt(inv.lam), _fmt(inv.mu),
                  _fmt(inv.beta1), _fmt(inv.beta2), "general"]
    else:
        tag = "trapped" if cls.tag is PointTag.GENERAL else cls.tag.value
        cells += [""] * 9 + [tag]
    return cells


def cmd_invariants(args) -> int:
    cfg = _load_config(args.config)
    surface = surface_from_config(cfg)
    nu, nv = _grid(cfg, args.grid)
    flat_tol = float(cfg.get("tolerances", {}).get("flat", 1e-9))
    u_lo, u_hi = surface.profile.domain
    v_lo, v_hi = _v_domain(cfg)
    lines = [CSV_HEADER]
    for u in _grid_points(u_lo, u_hi, nu):
        for v in _grid_points(v_lo, v_hi, nv):
            lines.append(",".join(_invariant_row(surface, u, v, flat_tol)))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {nu * nv} invariant rows to {args.out}")
    return EXIT_OK


def cmd_export(args) -> int:
    cfg = _load_config(args.config)
    surface = surface_from_config(cfg)
    nu, nv = _grid(cfg, args.grid)
    u_lo, u_hi = surface.profile.domain
    v_lo, v_hi = _v_domain(cfg)
    us = _grid_points(u_lo, u_hi, nu)
    vs = _grid_points(v_lo, v_hi, nv)
    if args.format == "csv4":
        lines = ["u,v,x1,x2,x3,x4"]
        for u in us:
            for v in vs:
                z = surface.position(u, v)
                lines.append(",".join(
                    [_fmt(u), _fmt(v)] + [_fmt(c) for c in z.coords()]))
    elif args.format == "obj3":
        drop = surface.geometry.axis_slot
        keep = [i for i in range(4) if i != drop]
        lines = []
        for u in us:
            for v in vs:
                c = surface.position(u, v).coords()
                lines.append("v " + " ".join(_fmt(c[i]) for i in keep))
        for i in range(nu - 1):
            for j in range(nv - 1):
                a = i * nv + j + 1
                lines.append(f"f {a} {a + nv} {a + nv + 1} {a + 1}")
    else:
        raise ConfigError(f"unknown export format {args.format!r}")
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {args.format} geometry ({nu}x{nv} grid) to {args.out}")
    return EXIT_OK


_VERIFY_PARAM_FLAGS = ("a", "b", "C", "c", "d", "K0", "alpha", "beta", "f0",
                       "u_span", "step", "u_min", "u_max", "g0")


def cmd_verify(args) -> int:
    try:
        kind = FamilyKind(args.family)
    except ValueError:
        raise ConfigError(f"unknown family {args.family!r}") from None
    try:
        geometry = Geometry(args.geometry)
    except ValueError:
        raise ConfigError(f"unknown geometry {args.geometry!r}") from None
    params = {}
    for key in _VERIFY_PARAM_FLAGS:
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    for key, flag in (("branch", args.branch), ("sign", args.sign),
                      ("g_sign", args.g_sign)):
        if flag is not None:
            params[key] = int(flag)
    eps_branch = args.epsilon_branch
    if eps_branch not in (None, "printed-vs-eq18"):
        eps_branch = int(eps_branch)
    spec = FamilySpec(kind, geometry, params=params,
                      epsilon_branch=eps_branch,
                      slope_scale=args.slope_scale)
    nu, nv = _grid({}, args.grid)
    report = verify_family(spec, grid=(nu, nv), tol=args.tol)
    verdict = "PASS" if report.passed else "FAIL"
    print(f"{verdict} family={kind.value} geometry={geometry.value} "
          f"property=\"{report.property}\" "
          f"max_residual={_fmt(report.max_abs_residual)} tol={_fmt(report.tol)} "
          f"n={report.n_samples} skipped={report.skipped} "
          f"argmax=({_fmt(report.argmax[0])},{_fmt(report.argmax[1])})")
    record = {
        "family": kind.value,
        "geometry": geometry.value,
        "property": report.property,
        "max_abs_residual": _round9(report.max_abs_residual),
        "argmax_u": _round9(report.argmax[0]),
        "argmax_v": _round9(report.argmax[1]),
        "n_samples": report.n_samples,
        "skipped": report.skipped,
        "tol": _round9(report.tol),
        "pass": report.passed,
    }
    line = json.dumps(record, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(line + "\n")
    else:
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meridian",
        description="Meridian surfaces in Minkowski 4-space: build, sweep "
                    "invariants, verify classification families, export "
                    "geometry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="validate a config and write a "
                             "surface descriptor")
    p_build.add_argument("--config", required=True)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(func=cmd_build)

    p_inv = sub.add_parser("invariants", help="sweep the invariant set to CSV")
    p_inv.add_argument("--config", required=True)
    p_inv.add_argument("--out", required=True)
    p_inv.add_argument("--grid", default=None, metavar="NU,NV")
    p_inv.set_defaults(func=cmd_invariants)

    p_ver = sub.add_parser("verify", help="verify a classification family")
    p_ver.add_argument("--family", required=True,
                       choices=[k.value for k in FamilyKind])
    p_ver.add_argument("--geometry", required=True,
                       choices=[g.value for g in Geometry])
    for key in _VERIFY_PARAM_FLAGS:
        p_ver.add_argument(f"--{key.replace('_', '-')}", dest=key,
                           type=float, default=None)
    p_ver.add_argument("--branch", type=int, default=None)
    p_ver.add_argument("--sign", type=int, default=None)
    p_ver.add_argument("--g-sign", dest="g_sign", type=int, default=None)
    p_ver.add_argument("--epsilon-branch", dest="epsilon_branch", default=None)
    p_ver.add_argument("--slope-scale", dest="slope_scale", type=float,
                       default=1.0)
    p_ver.add_argument("--tol", type=float, default=1e-6)
    p_ver.add_argument("--grid", default=None, metavar="NU,NV")
    p_ver.add_argument("--out", default=None)
    p_ver.set_defaults(func=cmd_verify)

    p_exp = sub.add_parser("export", help="export sampled geometry")
    p_exp.add_argument("--config", required=True)
    p_exp.add_argument("--format", required=True, choices=["csv4", "obj3"])
    p_exp.add_argument("--out", required=True)
    p_exp.add_argument("--grid", default=None, metavar="NU,NV")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        return args.func(args)
    except NotSpacelikeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MeridianError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, ZeroDivisionError, OverflowError, KeyError) as exc:
        print(f"numerical failure: {exc!r}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
