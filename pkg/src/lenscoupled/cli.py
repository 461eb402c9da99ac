"""Command-line surface wiring the physics modules into data pipelines.

Subcommands emit machine-readable CSV/JSON for external plotting; identical
configuration produces byte-identical files.  Exit codes: 0 success,
1 runtime or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import coupling, dynamics, trap
from .errors import DomainError, LensCoupledError, PhysicalityError
from .greens import LensSpec, effective_coords, g_matrix, psf_integrals
from .numerics import QuadratureSpec

_CONFIG_SCHEMA = 1
_TOP_KEYS = {"schema", "lens", "quadrature", "drive", "species_presets"}
_LENS_KEYS = {"theta_max", "focal_length", "wavelength"}
_QUAD_KEYS = {"rel_tol", "abs_tol", "max_refinements"}
_DRIVE_KEYS = {"delta_over_gamma", "saturation"}
_SPECIES_KEYS = {"dipole_moment", "lambda0", "gamma", "mass"}


class UsageError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("config root must be a JSON object")
    if cfg.get("schema") != _CONFIG_SCHEMA:
        raise UsageError(
            f"config schema must be {_CONFIG_SCHEMA}, got {cfg.get('schema')!r}"
        )
    unknown = set(cfg) - _TOP_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for section, allowed in (("lens", _LENS_KEYS), ("quadrature", _QUAD_KEYS),
                             ("drive", _DRIVE_KEYS)):
        extra = set(cfg.get(section, {})) - allowed
        if extra:
            raise UsageError(f"unknown keys in config[{section!r}]: {sorted(extra)}")
    for label, data in cfg.get("species_presets", {}).items():
        extra = set(data) - _SPECIES_KEYS
        if extra:
            raise UsageError(
                f"unknown keys in species preset {label!r}: {sorted(extra)}"
            )
        trap.register_species(trap.AtomSpecies(label=label, **data))
    return cfg


def _quad_spec(cfg: dict, args) -> QuadratureSpec:
    quad = dict(cfg.get("quadrature", {}))
    if "rel_tol" not in quad:
        env = os.environ.get("LENSCOUPLED_QUAD_TOL")
        if env is not None:
            try:
                quad["rel_tol"] = float(env)
            except ValueError:
                raise UsageError(
                    f"LENSCOUPLED_QUAD_TOL must be a float, got {env!r}"
                ) from None
    return QuadratureSpec(**quad)


def _lens_spec(cfg: dict, args) -> LensSpec:
    lens = dict(cfg.get("lens", {}))
    if getattr(args, "theta_max", None) is not None:
        lens["theta_max"] = args.theta_max
    if "theta_max" not in lens:
        raise UsageError("theta_max required (flag --theta-max or config)")
    return LensSpec(**lens)


def _parse_vec(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected 'x,y,z', got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise UsageError(f"non-numeric coordinate in {text!r}") from None


def _check_finite(command: str, params: dict, **arrays) -> None:
    for name, arr in arrays.items():
        a = np.asarray(arr)
        if not np.all(np.isfinite(a)):
            raise LensCoupledError(
                f"{command}: column {name!r} contains non-finite values "
                f"(params {params}); aborting without writing"
            )


def _write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    rows = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join("%.10e" % c[i] for c in columns) + "\n")


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _c(value: complex) -> dict:
    return {"re": float(np.real(value)), "im": float(np.imag(value))}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_psf(args, cfg) -> None:
    lens = _lens_spec(cfg, args)
    quad = _quad_spec(cfg, args)
    r_i = _parse_vec(args.ri)
    r_j = _parse_vec(args.rj)
    fc = effective_coords(r_i, r_j)
    ints = psf_integrals(fc, lens.k, lens.theta_max, quad)
    g = g_matrix(fc, lens.k, lens.theta_max, quad)
    g_psf = (lens.k / (8.0 * math.pi)) * g
    out = {
        "lambda_units": True,
        "theta_max": lens.theta_max,
        "r_i": list(map(float, r_i)),
        "r_j": list(map(float, r_j)),
        "I1": _c(ints.i1),
        "I2": _c(ints.i2),
        "I3": _c(ints.i3),
        "I4": _c(ints.i4),
        "g_matrix": [[_c(g[r, c]) for c in range(3)] for r in range(3)],
        "g_psf": [[_c(g_psf[r, c]) for c in range(3)] for r in range(3)],
    }
    _check_finite("psf", {"theta_max": lens.theta_max}, g=g.view(float))
    _write_json(args.out, out)


def cmd_gamma_sweep(args, cfg) -> None:
    lens_defaults = cfg.get("lens", {})
    quad = _quad_spec(cfg, args)
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if not (0.0 < args.theta_min <= args.theta_max <= math.pi / 2 + 1e-15):
        raise UsageError("need 0 < theta-min <= theta-max <= pi/2")
    del lens_defaults  # sweep varies theta_max itself
    if args.steps == 1:
        thetas = np.array([args.theta_max])
    else:
        thetas = np.linspace(args.theta_min, args.theta_max, args.steps)
    _, gam = coupling.gamma_max_sweep(args.orientation, thetas, quad)
    _check_finite("gamma-sweep", {"orientation": args.orientation},
                  gamma12_over_gamma=gam)
    _write_csv(args.out, ["theta_max", "gamma12_over_gamma"], [thetas, gam])


def cmd_coupling_map(args, cfg) -> None:
    lens = _lens_spec(cfg, args)
    quad = _quad_spec(cfg, args)
    orientations = (args.orientation, args.orientation2 or args.orientation)
    ax1, ax2, jmap, gmap = coupling.coupling_map(
        orientations=orientations, plane=args.plane, extent=args.extent,
        resolution=args.resolution, lens=lens, spec=quad,
    )
    _check_finite("coupling-map",
                  {"plane": args.plane, "theta_max": lens.theta_max},
                  J_over_hGamma=jmap, Gamma12_over_Gamma=gmap)
    second = "z" if args.plane == "xz" else "y"
    a, b = np.meshgrid(ax1, ax2, indexing="ij")
    _write_csv(args.out, ["x", second, "J_over_hGamma", "Gamma12_over_Gamma"],
               [a.ravel(), b.ravel(), jmap.ravel(), gmap.ravel()])


def cmd_spectrum(args, cfg) -> None:
    quad = _quad_spec(cfg, args)
    if (args.j12 is None) != (args.gamma12 is None):
        raise UsageError("--j12 and --gamma12 must be given together")
    if (args.j12 is None) == (args.position is None):
        raise UsageError("give either --j12/--gamma12 or --position")
    if args.position is not None:
        lens = _lens_spec(cfg, args)
        j_arr, g_arr = coupling.coupling_on_axis(
            np.array([args.position]), args.orientation, lens, quad)
        j12, gamma12 = float(j_arr[0]), float(g_arr[0])
    else:
        j12, gamma12 = args.j12, args.gamma12
    g12 = j12 + 0.5j * gamma12  # units of Gamma
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    deltas = np.linspace(args.delta_min, args.delta_max, args.steps)
    _, n1, xi = dynamics.excitation_spectrum(g12, args.saturation, deltas, 1.0)
    baseline = np.ones_like(deltas)
    _check_finite("spectrum", {"j12": j12, "gamma12": gamma12,
                               "s": args.saturation},
                  n1_over_s2=n1, xi_over_s2=xi)
    _write_csv(args.out,
               ["delta_over_Gamma", "n1_over_s2", "n1_over_s2_nocoupling",
                "xi_over_s2"],
               [deltas, n1, baseline, xi])


def cmd_trap(args, cfg) -> None:
    lens = _lens_spec(cfg, args)
    quad = _quad_spec(cfg, args)
    species = trap.get_species(args.species)
    drive_cfg = cfg.get("drive", {})
    s = args.saturation if args.saturation is not None else drive_cfg.get(
        "saturation", 0.1)
    delta_over_gamma = (args.delta_over_gamma
                        if args.delta_over_gamma is not None
                        else drive_cfg.get("delta_over_gamma", 10.0))
    drive = dynamics.DriveSpec(delta_d=delta_over_gamma * species.gamma,
                               saturation=s)
    profile = trap.trap_profile(
        species, lens, drive, orientation=args.orientation,
        z_range=(args.z_min, args.z_max), n_z=args.steps,
        n_driven=args.n_driven, spec=quad,
    )
    _check_finite("trap", {"species": args.species, "s": s},
                  U_dd_J=profile.u_dd, U_g_J=profile.u_g,
                  U_total_J=profile.u_total, heating_W=profile.heating)
    _write_csv(args.out,
               ["z_over_lambda", "U_dd_J", "U_g_J", "U_total_J", "heating_W"],
               [profile.z_over_lambda, profile.u_dd, profile.u_g,
                profile.u_total, profile.heating])
    lm = profile.landmarks
    summary = {
        "z_min": lm.get("z_min"),
        "depth_over_Er": lm.get("depth_dd_over_er"),
        "Gamma_tot_over_Gamma": lm.get("gamma_tot_over_gamma"),
        "t_trap_s": lm.get("t_trap_s"),
        "t_trap_over_Gamma_inv": lm.get("t_trap_over_gamma_inv"),
    }
    root, _ = os.path.splitext(args.out)
    _write_json(root + ".summary.json", summary)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lenscoupled",
        description="Lens-mediated dipole-dipole interaction pipelines",
    )
    parser.add_argument("--config", help="JSON config file (schema 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psf", help="point-spread tensor at one coordinate pair")
    p.add_argument("--ri", default="0,0,0", help="atom i position x,y,z "
                   "(wavelength units)")
    p.add_argument("--rj", default="0,0,0", help="atom j position x,y,z")
    p.add_argument("--theta-max", type=float, help="angular aperture (rad)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_psf)

    p = sub.add_parser("gamma-sweep", help="max dissipative coupling vs aperture")
    p.add_argument("--orientation", choices=("x", "z"), default="x")
    p.add_argument("--theta-min", type=float, default=0.05)
    p.add_argument("--theta-max", type=float, default=math.pi / 2)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gamma_sweep)

    p = sub.add_parser("coupling-map", help="spatial maps of J12 and Gamma12")
    p.add_argument("--orientation", choices=("x", "y", "z"), default="x")
    p.add_argument("--orientation2", choices=("x", "y", "z"),
                   help="second atom orientation (defaults to --orientation)")
    p.add_argument("--plane", choices=("xz", "xy"), default="xz")
    p.add_argument("--extent", type=float, default=3.0)
    p.add_argument("--resolution", type=int, default=201)
    p.add_argument("--theta-max", type=float, help="angular aperture (rad)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_coupling_map)

    p = sub.add_parser("spectrum", help="excitation spectrum vs detuning")
    p.add_argument("--j12", type=float, help="J12/(hbar Gamma)")
    p.add_argument("--gamma12", type=float, help="Gamma12/Gamma")
    p.add_argument("--position", type=float,
                   help="on-axis separation (wavelengths) to read the "
                        "working point from the map instead")
    p.add_argument("--orientation", choices=("x", "y", "z"), default="x")
    p.add_argument("--theta-max", type=float, help="aperture for --position")
    p.add_argument("--saturation", type=float, default=0.05)
    p.add_argument("--delta-min", type=float, default=-4.0)
    p.add_argument("--delta-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=401)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("trap", help="on-axis trap potential and lifetime")
    p.add_argument("--species", default="Cs133-D2")
    p.add_argument("--orientation", choices=("x", "y", "z"), default="x")
    p.add_argument("--theta-max", type=float, help="angular aperture (rad)")
    p.add_argument("--saturation", type=float)
    p.add_argument("--delta-over-gamma", type=float,
                   help="drive detuning in units of Gamma (default 10)")
    p.add_argument("--z-min", type=float, default=0.05)
    p.add_argument("--z-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=601)
    p.add_argument("--n-driven", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trap)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
    except (UsageError, DomainError, PhysicalityError, OSError,
            json.JSONDecodeError, TypeError) as exc:
        print(f"lenscoupled: config error: {exc}", file=sys.stderr)
        return 2
    try:
        args.func(args, cfg)
    except (UsageError, DomainError) as exc:
        print(f"lenscoupled: usage error: {exc}", file=sys.stderr)
        return 2
    except (LensCoupledError, OSError) as exc:
        print(f"lenscoupled: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
