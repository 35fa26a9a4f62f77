"""Command-line driver: scenario configs, presets, runs and sweeps.

A run writes ``residuals.csv``, ``rcs.csv`` and ``run.json`` in its output
directory; a sweep adds ``sweep.csv`` with one row per (axis value, variant).

Mesh sources
------------
``file:PATH``                      mesh file (``ddm-mesh 1`` format)
``uvsphere:RADIUS:NLON:NBANDS``    latitude-longitude sphere, all interface
``icosphere:RADIUS:LEVEL[:CAP]``   icosphere, optionally open above latitude ``CAP``
``hollow:N``                       the ``hollow<N>`` sphere (radius 1, cap at 45 deg)
``box:M``                          unit open box, ``M`` divisions per edge
"""

import argparse
import configparser
import csv
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from . import __version__
from .admittance import InnerSolver, InnerSolveError, ResonanceError
from .bem.kernel import WaveContext
from .bem.quadrature import QuadratureRule
from .ddm import DdmVariant, build_system, recover_traces, solve, with_variant
from .excitation import PlaneWave
from .linalg import GmresConfig
from .mesh import build_spaces, generate_open_box, generate_sphere, generate_uv_sphere, hollow_sphere, load_mesh
from .mesh.core import MeshError
from .postprocess.farfield import bistatic_cut, ddm_far_field, rcs, write_rcs_csv

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_INPUT = 2

RESIDUAL_NORM = {
    "left-preconditioned": "||P (U0 - A U)|| / ||P U0|| with P the left preconditioner (Y1, Y2)",
    "unpreconditioned": "||U0 - A U|| / ||U0|| (Y0, and Y3 where U = P Y)",
}


@dataclass
class RunConfig:
    """Everything that determines a run; ``run.json`` echoes it in full."""

    mesh: str = "uvsphere:0.5:8:8"
    frequency_mhz: float = 68.0
    variants: tuple = ("Y2",)
    tolerance: float = 1e-6
    max_iterations: int = 500
    restart: int = None
    inner: str = "direct"
    inner_tolerance: float = 1e-8
    theta_deg: float = 180.0
    phi_deg: float = 0.0
    polarization: str = "theta"
    rcs_phi_deg: float = 0.0
    rcs_points: int = 181
    threads: int = None
    out: str = "ddm-out"
    sweep_axis: str = None
    sweep_values: tuple = ()

    def __post_init__(self):
        self.variants = tuple(DdmVariant.parse(v).value for v in _as_list(self.variants))
        self.sweep_values = tuple(_as_list(self.sweep_values))
        if not self.frequency_mhz > 0:
            raise ValueError("frequency must be positive")
        if not 0 < self.tolerance < 1:
            raise ValueError("tolerance must be in (0, 1)")
        if self.sweep_axis not in (None, "frequency_mhz", "mesh", "variant"):
            raise ValueError("sweep axis must be frequency_mhz, mesh or variant")


PRESETS = {
    "artificial-sphere-168": dict(
        mesh="uvsphere:0.5:8:8", frequency_mhz=68.0, variants=("Y0", "Y1", "Y2", "Y3"), tolerance=1e-6,
        sweep_axis="variant",
    ),
    "sphere-3072-sweep": dict(
        mesh="uvsphere:0.5:32:33", variants=("Y0", "Y2"), tolerance=1e-5, sweep_axis="frequency_mhz",
        sweep_values=(50, 68, 100, 150, 200, 250, 300, 360), frequency_mhz=50.0,
    ),
    "open-box-102": dict(
        mesh="box:6", frequency_mhz=100.0, variants=("Y0", "Y1", "Y2", "Y3"), tolerance=1e-6,
        theta_deg=90.0, phi_deg=180.0, sweep_axis="variant",
    ),
    "hollow-sphere-family": dict(
        mesh="hollow:12", frequency_mhz=400.0, variants=("Y0", "Y1", "Y2", "Y3"), tolerance=1e-4,
        sweep_axis="mesh", sweep_values=("hollow:12", "hollow:15"), max_iterations=1000,
    ),
}


def _as_list(v):
    if v is None:
        return []
    if isinstance(v, str):
        return [s.strip() for s in v.split(",") if s.strip()]
    return list(v)


def _coerce(name, raw):
    """Parse a config-file string into the type of the RunConfig field."""
    if name in ("variants", "sweep_values"):
        return _as_list(raw)
    default = RunConfig.__dataclass_fields__[name].default
    if raw in ("", "none", "None"):
        return None
    if name in ("max_iterations", "restart", "rcs_points", "threads"):
        return int(raw)
    if isinstance(default, float) or name in ("frequency_mhz", "tolerance", "inner_tolerance"):
        return float(raw)
    return raw


def read_config(path):
    """``[run]`` section of ``key = value`` pairs named after :class:`RunConfig` fields.

    ``preset = NAME`` loads a preset first; ``variant`` is accepted for ``variants``.
    """
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise FileNotFoundError(path)
    sec = cp["run"] if cp.has_section("run") else cp[cp.default_section]
    values = {}
    known = {f.name for f in fields(RunConfig)}
    for key, raw in sec.items():
        key = {"variant": "variants"}.get(key, key)
        if key == "preset":
            values = {**PRESETS[raw], **values}
            continue
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def make_mesh(source):
    """Build or load the mesh named by a mesh-source string (see module docstring)."""
    kind, _, rest = str(source).partition(":")
    args = rest.split(":") if rest else []
    if kind == "file":
        if not os.path.isfile(rest):
            raise FileNotFoundError(f"mesh file not found: {rest}")
        return load_mesh(rest)
    if kind == "uvsphere":
        return generate_uv_sphere(float(args[0]), int(args[1]), int(args[2]))
    if kind == "icosphere":
        cap = float(args[2]) if len(args) > 2 else None
        return generate_sphere(float(args[0]), int(args[1]), cap)
    if kind == "hollow":
        return hollow_sphere(int(args[0]))
    if kind == "box":
        return generate_open_box(resolution=1.0 / int(args[0]))
    if os.path.isfile(source):
        return load_mesh(source)
    raise FileNotFoundError(f"unknown mesh source {source!r}")


def _limit_threads(n):
    if not n:
        return None
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        os.environ["OMP_NUM_THREADS"] = str(n)
        return None
    return threadpool_limits(limits=int(n))


def _write_residuals(path, history):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["iteration", "relative_residual"])
        for i, r in enumerate(history):
            wr.writerow([i, f"{r:.15g}"])


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=str)
        fh.write("\n")


class _Problem:
    """Mesh, spaces and assembled system for one (mesh, frequency); variants share it."""

    def __init__(self, config):
        t0 = time.perf_counter()
        self.mesh = make_mesh(config.mesh)
        self.maps = build_spaces(self.mesh)
        self.ctx = WaveContext.from_mhz(config.frequency_mhz)
        self.wave = PlaneWave.from_angles(config.theta_deg, config.phi_deg, config.polarization, self.ctx)
        self.quad = QuadratureRule()
        inner = InnerSolver(config.inner, config.inner_tolerance)
        t1 = time.perf_counter()
        self.system = build_system(self.maps, self.ctx, self.wave, self.quad, config.variants[0], inner)
        self.timings = dict(mesh=t1 - t0, assembly=time.perf_counter() - t1, **self.system.timings)


def _solve_one(problem, config, variant, out):
    """Solve one variant and write its three files into ``out``; returns the run record."""
    os.makedirs(out, exist_ok=True)
    system = with_variant(problem.system, variant)
    t0 = time.perf_counter()
    e, report = solve(system, GmresConfig(config.tolerance, config.max_iterations, config.restart))
    t1 = time.perf_counter()
    traces = recover_traces(system, e)
    theta, phi, dirs = bistatic_cut(config.rcs_points, config.rcs_phi_deg)
    pattern = ddm_far_field(system, traces, problem.ctx, dirs, problem.quad.regular_order)
    t2 = time.perf_counter()
    _write_residuals(os.path.join(out, "residuals.csv"), report.residual_history)
    write_rcs_csv(os.path.join(out, "rcs.csv"), theta, phi, rcs(pattern))
    record = {
        "version": __version__,
        "config": {**asdict(config), "variants": [variant]},
        "variant": variant,
        "mesh_name": problem.mesh.name,
        "interface_dofs": problem.maps.n_interface,
        "shell_dofs": [problem.maps.plus_space.dof_count, problem.maps.minus_space.dof_count],
        "iterations": report.iterations,
        "converged": bool(report.converged),
        "final_residual": float(report.final_residual),
        "residual_norm": report.residual_norm,
        "residual_norm_definition": RESIDUAL_NORM[report.residual_norm],
        "transmission_residual": traces["transmission_residual"],
        "timings": {**problem.timings, "outer_solve": t1 - t0, "postprocess": t2 - t1},
    }
    _write_json(os.path.join(out, "run.json"), record)
    return record


def _fail(out, config, err, code):
    os.makedirs(out, exist_ok=True)
    _write_json(os.path.join(out, "run.json"), {
        "version": __version__, "config": asdict(config), "converged": False,
        "error": type(err).__name__, "message": str(err),
    })
    return code


def _check_mesh_source(source):
    kind, _, rest = str(source).partition(":")
    if kind == "file" and not os.path.isfile(rest):
        raise FileNotFoundError(f"mesh file not found: {rest}")


def run_scenario(config):
    """Run every variant of ``config`` on one mesh and frequency.

    With one variant the files go straight into ``config.out``; with several,
    into ``config.out/<variant>``. Returns the exit status: 0 when every
    variant converged, 1 on solver failure or non-convergence, 2 on bad
    input (nothing is written).
    """
    try:
        _check_mesh_source(config.mesh)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    limiter = _limit_threads(config.threads)
    try:
        try:
            problem = _Problem(config)
        except (FileNotFoundError, MeshError) as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_INPUT
        except (ResonanceError, InnerSolveError) as err:
            print(f"error: {err}", file=sys.stderr)
            return _fail(config.out, config, err, EXIT_SOLVER)
        status = EXIT_OK
        for v in config.variants:
            out = config.out if len(config.variants) == 1 else os.path.join(config.out, v)
            rec = _solve_one(problem, config, v, out)
            print(f"{v}: {rec['iterations']} iterations, converged={rec['converged']}, "
                  f"residual {rec['final_residual']:.3e}")
            if not rec["converged"]:
                status = EXIT_SOLVER
        return status
    finally:
        if limiter is not None:
            limiter.unregister()


def _slug(value):
    return str(value).replace(":", "-").replace("/", "_")


def run_sweep(base, axis=None, values=None):
    """Run ``base`` for each value along ``axis`` and every variant; writes ``sweep.csv``.

    ``axis`` is ``frequency_mhz``, ``mesh`` or ``variant``. Individual failures
    are recorded (``converged`` false, ``iterations`` empty) and the sweep
    continues. Returns the list of rows.
    """
    axis = axis or base.sweep_axis
    values = list(values if values is not None else base.sweep_values)
    if axis == "variant":
        values = values or list(base.variants)
    if not values:
        values = [getattr(base, axis)]
    if axis == "mesh":
        for v in values:
            try:
                _check_mesh_source(v)
            except FileNotFoundError as err:
                print(f"error: {err}", file=sys.stderr)
                return None
    os.makedirs(base.out, exist_ok=True)
    rows = []
    path = os.path.join(base.out, "sweep.csv")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow([axis, "variant", "iterations", "converged"])
        if axis == "variant":
            # one assembly shared by all variants
            groups = [(None, replace(base, variants=tuple(values)))]
        else:
            groups = [(v, replace(base, **{axis: float(v) if axis == "frequency_mhz" else v})) for v in values]
        for value, cfg in groups:
            sub = cfg.out if value is None else os.path.join(base.out, f"{axis}={_slug(value)}")
            cfg = replace(cfg, out=sub)
            status = run_scenario(cfg)
            for v in cfg.variants:
                rec_path = os.path.join(sub, v, "run.json") if len(cfg.variants) > 1 else os.path.join(sub, "run.json")
                rec = {}
                if os.path.isfile(rec_path):
                    with open(rec_path) as f:
                        rec = json.load(f)
                row = [v if value is None else value, v, rec.get("iterations", ""), bool(rec.get("converged", False))]
                rows.append(row)
                wr.writerow(row)
                fh.flush()
            if status == EXIT_INPUT:
                print(f"warning: run {value} rejected its input", file=sys.stderr)
    return rows


def build_parser():
    p = argparse.ArgumentParser(
        prog="ddmbem",
        description="Interface domain-decomposition BEM solver for PEC scattering (variants Y0-Y3).",
        epilog="Presets: " + ", ".join(PRESETS) + ". Mesh sources: file:PATH, uvsphere:R:NLON:NBANDS, "
        "icosphere:R:LEVEL[:CAP], hollow:N, box:M.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--config", help="config file with a [run] section of RunConfig keys")
    p.add_argument("--preset", choices=sorted(PRESETS), help="bundled scenario")
    p.add_argument("--mesh", help="mesh source (default uvsphere:0.5:8:8)")
    p.add_argument("--variant", help="y0|y1|y2|y3, or a comma list (default y2)")
    p.add_argument("--freq-mhz", type=float, help="frequency in MHz (default 68)")
    p.add_argument("--tol", type=float, help="outer GMRES relative tolerance (default 1e-6)")
    p.add_argument("--max-iter", type=int, help="outer iteration cap (default 500)")
    p.add_argument("--restart", type=int, help="GMRES restart length (default: full GMRES)")
    p.add_argument("--inner", choices=["direct", "gmres"], help="inner EFIE solver (default direct)")
    p.add_argument("--inner-tol", type=float, help="inner GMRES tolerance (default 1e-8)")
    p.add_argument("--theta", type=float, help="incidence direction polar angle, deg (default 180)")
    p.add_argument("--phi", type=float, help="incidence direction azimuth, deg (default 0)")
    p.add_argument("--pol", choices=["theta", "phi"], help="incident polarization (default theta)")
    p.add_argument("--threads", type=int, help="BLAS/LAPACK threads (default: library default)")
    p.add_argument("--sweep", choices=["frequency_mhz", "mesh", "variant"], help="sweep axis")
    p.add_argument("--values", help="comma list of sweep values")
    p.add_argument("--out", help="output directory (default ddm-out)")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


_FLAG_FIELDS = {
    "mesh": "mesh", "variant": "variants", "freq_mhz": "frequency_mhz", "tol": "tolerance",
    "max_iter": "max_iterations", "restart": "restart", "inner": "inner", "inner_tol": "inner_tolerance",
    "theta": "theta_deg", "phi": "phi_deg", "pol": "polarization", "threads": "threads",
    "sweep": "sweep_axis", "values": "sweep_values", "out": "out",
}


def config_from_args(args):
    """Preset, then config file, then flags, each overriding the previous."""
    values = dict(PRESETS[args.preset]) if args.preset else {}
    if args.config:
        values.update(read_config(args.config))
    for flag, name in _FLAG_FIELDS.items():
        v = getattr(args, flag)
        if v is not None:
            values[name] = v
    if args.variant is not None and "," not in args.variant and values.get("sweep_axis") == "variant":
        values["sweep_axis"] = None
    return RunConfig(**values)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (ValueError, KeyError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    if config.sweep_axis:
        rows = run_sweep(config)
        if rows is None:
            return EXIT_INPUT
        return EXIT_OK if all(r[3] for r in rows) else EXIT_SOLVER
    return run_scenario(config)


if __name__ == "__main__":
    sys.exit(main())
