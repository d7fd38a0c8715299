"""Command-line harness running the verification suites.

Commands: check, mess, dual, extend, rigidity, fuchsian, version.  Options
come from an optional flat key=value config file plus command-line flags
(flags win).  Exit codes: 0 all checks pass, 1 at least one check failed,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from . import constructions as con
from . import embedding as emb
from . import fuchsian as fuc
from . import mess_metrics as mes
from . import rigidity as rig
from .errors import AdsGeoError, ConfigError
from .fd import DiffConfig
from .report import FORMATS, CheckReport, emit_report

# default tolerances per check family; --tolerance overrides all of them
DEFAULT_TOLS = {
    "gauss_residual": 1e-6,
    "codazzi_residual": 1e-6,
    "left_curvature": 1e-6,
    "left_curvature_bump": 1e-5,
    "metric_match": 1e-6,
    "dual_curvature": 1e-6,
    "dual_metric_third_form": 1e-8,
    "dual_involution": 1e-8,
    "extension_riemann": 1e-4,
    "extension_riemann_bump": 1e-3,
    "relator_residual": 1e-8,
    "generator_trace": 1e-9,
    "euler_characteristic": 0.0,
    "octagon_area": 1e-10,
    "element_area": 1e-2,
    "kernel_dimension": 0.0,
    "min_abs_eigenvalue": 1.8,
    "constant_image": 1e-10,
    "phi_k_metric": 1e-6,
    "phi_k_parameter": 1e-12,
}


@dataclass
class RunConfig:
    command: str = ""
    fixture: str = "fuchsian_family"
    s: float = -0.7
    s2: float | None = None
    amplitude: float = 0.05
    width: float = 1.0
    base: float = -0.7
    samples: int = 100
    points: int = 20
    s_list: str = "-1.2,-0.7,-0.2"
    mesh_level: int = 3
    k_curvature: float = -2.0
    seed: int = 0
    tolerance: float | None = None
    fd_step: float | None = None
    output: str = "table"
    out_file: str | None = None
    export_mesh: str | None = None

    def validate(self):
        if self.fixture not in emb.CATALOG:
            raise ConfigError(f"unknown fixture: {self.fixture!r} "
                              f"(catalog: {', '.join(emb.CATALOG)})")
        if not -np.pi / 2 < self.s <= 0.0:
            raise ConfigError(f"s must lie in (-pi/2, 0], got {self.s}")
        if self.s2 is not None and not -np.pi / 2 < self.s2 <= 0.0:
            raise ConfigError(f"s2 must lie in (-pi/2, 0], got {self.s2}")
        if not 1 <= self.samples <= 100000:
            raise ConfigError(f"samples must lie in [1, 100000], got {self.samples}")
        if not 1 <= self.points <= 10000:
            raise ConfigError(f"points must lie in [1, 10000], got {self.points}")
        if not 0 <= self.mesh_level <= fuc.MAX_MESH_LEVEL:
            raise ConfigError(f"mesh-level must lie in [0, {fuc.MAX_MESH_LEVEL}]")
        if not self.k_curvature < -1.0:
            raise ConfigError(f"K must be < -1, got {self.k_curvature}")
        if self.tolerance is not None and not self.tolerance > 0.0:
            raise ConfigError("tolerance must be positive")
        if self.fd_step is not None and not 1e-6 <= self.fd_step <= 0.1:
            raise ConfigError("fd-step must lie in [1e-6, 0.1]")
        if self.output not in FORMATS:
            raise ConfigError(f"output must be one of {FORMATS}")

    def tol(self, name: str) -> float:
        if self.tolerance is not None:
            return self.tolerance
        return DEFAULT_TOLS[name]

    def diff(self) -> DiffConfig:
        if self.fd_step is None:
            return DiffConfig()
        return DiffConfig(immersion_step=self.fd_step,
                          immersion_step2=4.0 * self.fd_step)

    def immersion(self) -> emb.Immersion:
        if self.fixture == "totally_geodesic":
            return emb.make_immersion("totally_geodesic")
        if self.fixture == "fuchsian_family":
            return emb.make_immersion("fuchsian_family", s=self.s)
        return emb.make_immersion("graph_bump", amplitude=self.amplitude,
                                  width=self.width, base=self.base)

    def provenance(self) -> dict:
        out = {"version": __version__, "command": self.command}
        for f in fields(self):
            if f.name in ("command", "out_file"):
                continue
            out[f.name.replace("_", "-")] = str(getattr(self, f.name))
        return out


_CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"command"}


def parse_config_file(path: str) -> dict:
    """Flat key=value file; '#' starts a comment; unknown keys rejected."""
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val.strip()
    return values


def _coerce(cfg: RunConfig, key: str, raw: str):
    template = {f.name: f for f in fields(RunConfig)}[key]
    if key in ("s2", "tolerance", "fd_step"):
        return float(raw)
    kind = template.type
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


# ---------------------------------------------------------------------------
# command implementations

def _sample_points(rng, n, box=0.8):
    return rng.uniform(-box, box, size=(n, 2))


def run_check(cfg: RunConfig) -> CheckReport:
    report = CheckReport(provenance=cfg.provenance())
    rng = np.random.default_rng(cfg.seed)
    immersion = cfg.immersion()
    diff = cfg.diff()
    for u in _sample_points(rng, cfg.samples):
        gauss, codazzi = emb.structure_residuals(immersion, u, cfg=diff)
        loc = f"u=({u[0]:+.4f},{u[1]:+.4f})"
        report.add("gauss_residual", loc, gauss, cfg.tol("gauss_residual"))
        report.add("codazzi_residual", loc, codazzi, cfg.tol("codazzi_residual"))
    return report


def run_mess(cfg: RunConfig) -> CheckReport:
    report = CheckReport(provenance=cfg.provenance())
    rng = np.random.default_rng(cfg.seed)
    immersion = cfg.immersion()
    diff = cfg.diff()
    tol_name = ("left_curvature_bump" if cfg.fixture == "graph_bump"
                else "left_curvature")
    pts = _sample_points(rng, cfg.samples)
    rows, _ = mes.verify_left_metric_hyperbolic(immersion, pts, cfg=diff)
    for u, _ks, resid in rows:
        loc = f"u=({u[0]:+.4f},{u[1]:+.4f})"
        report.add("left_curvature", loc, resid, cfg.tol(tol_name))
    if cfg.s2 is not None and cfg.fixture == "fuchsian_family":
        other = emb.make_immersion("fuchsian_family", s=cfg.s2)
        for u in pts:
            a = mes.mess_metric(emb.embedding_data_at(immersion, u, cfg=diff), +1)
            b = mes.mess_metric(emb.embedding_data_at(other, u, cfg=diff), +1)
            loc = f"u=({u[0]:+.4f},{u[1]:+.4f})"
            report.add("metric_match", loc, float(np.abs(a - b).max()),
                       cfg.tol("metric_match"))
    return report


def run_dual(cfg: RunConfig) -> CheckReport:
    report = CheckReport(provenance=cfg.provenance())
    rng = np.random.default_rng(cfg.seed)
    immersion = cfg.immersion()
    diff = cfg.diff()
    for u in _sample_points(rng, cfg.samples):
        _, diag = con.dual_surface(immersion, u, cfg=diff)
        loc = f"u=({u[0]:+.4f},{u[1]:+.4f})"
        report.add("dual_curvature", loc, diag["curvature_consistency"],
                   cfg.tol("dual_curvature"))
        report.add("dual_metric_third_form", loc, diag["metric_vs_third_form"],
                   cfg.tol("dual_metric_third_form"))
        report.add("dual_involution", loc, diag["involution"],
                   cfg.tol("dual_involution"))
    return report


def run_extend(cfg: RunConfig) -> CheckReport:
    report = CheckReport(provenance=cfg.provenance())
    rng = np.random.default_rng(cfg.seed)
    immersion = cfg.immersion()
    diff = cfg.diff()
    try:
        s_values = [float(x) for x in cfg.s_list.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad s-list: {cfg.s_list!r}") from exc
    for sv in s_values:
        if not -np.pi / 2 + 0.05 < sv <= 0.0:
            raise ConfigError(f"extension sample s={sv} outside (-pi/2+0.05, 0]")
    ext = con.extension_metric(immersion, cfg=diff, slack=0.1)
    tol_name = ("extension_riemann_bump" if cfg.fixture == "graph_bump"
                else "extension_riemann")
    for sv in s_values:
        for u in _sample_points(rng, cfg.points, box=0.7):
            p = np.array([u[0], u[1], sv])
            resid = con.extension_curvature(ext, p)
            loc = f"(u1,u2,s)=({u[0]:+.3f},{u[1]:+.3f},{sv:+.3f})"
            report.add("extension_riemann", loc, resid, cfg.tol(tol_name))
    return report


def run_rigidity(cfg: RunConfig) -> CheckReport:
    report = CheckReport(provenance=cfg.provenance())
    if cfg.s == 0.0:
        raise ConfigError("rigidity fixture needs s strictly inside (-pi/2, 0)")
    mesh = fuc.genus2_mesh(cfg.mesh_level)
    op = rig.rigidity_operator(mesh, cfg.s)
    loc = f"level={cfg.mesh_level},s={cfg.s:+.4f}"
    spectrum = rig.rigidity_spectrum(op, k=6, seed=cfg.seed)
    for i, lam in enumerate(spectrum):
        report.add(f"eigenvalue_{i}", loc, float(lam), float("inf"), passed=True)
    dim = rig.kernel_dimension(spectrum)
    report.add("kernel_dimension", loc, float(dim), cfg.tol("kernel_dimension"),
               passed=dim <= cfg.tol("kernel_dimension"))
    min_abs = float(np.min(np.abs(spectrum))) / op.tan_abs_s
    report.add("min_abs_eigenvalue", loc, min_abs, cfg.tol("min_abs_eigenvalue"),
               passed=min_abs >= cfg.tol("min_abs_eigenvalue"))
    report.add("constant_image", loc, rig.constant_function_check(op),
               cfg.tol("constant_image"))
    return report


def run_fuchsian(cfg: RunConfig) -> CheckReport:
    report = CheckReport(provenance=cfg.provenance())
    hol = fuc.octagon_generators()
    report.add("relator_residual", "commutator",
               hol.commutator_relator_residual(), cfg.tol("relator_residual"))
    report.add("relator_residual", "octagon_word",
               hol.octagon_relator_residual(), cfg.tol("relator_residual"))
    for name, tr in zip(("a1", "b1", "a2", "b2"), hol.traces()):
        report.add("generator_trace", name, abs(tr) - fuc.GENERATOR_TRACE,
                   cfg.tol("generator_trace"))
    mesh = fuc.genus2_mesh(cfg.mesh_level)
    loc = f"level={cfg.mesh_level}"
    report.add("euler_characteristic", loc,
               float(mesh.euler_characteristic() + 2), cfg.tol("euler_characteristic"),
               passed=mesh.euler_characteristic() == -2)
    area = mesh.area_angle_defect()
    report.add("octagon_area", loc, area / (4.0 * np.pi) - 1.0,
               cfg.tol("octagon_area"))
    report.add("element_area", loc, mesh.area_elementwise() / (4.0 * np.pi) - 1.0,
               cfg.tol("element_area"))
    if cfg.export_mesh:
        with open(cfg.export_mesh, "w", encoding="utf-8") as fh:
            fh.write(fuc.export_mesh(mesh))
    return report


def run_phi_k(cfg: RunConfig) -> CheckReport:
    """phi_K rows appended by the fuchsian command when K is supplied."""
    report = CheckReport(provenance=cfg.provenance())
    rng = np.random.default_rng(cfg.seed)
    result = con.phi_k_fuchsian(cfg.k_curvature, cfg=cfg.diff())
    report.add("phi_k_parameter", f"K={cfg.k_curvature}",
               -1.0 / np.cos(result.s) ** 2 - cfg.k_curvature,
               cfg.tol("phi_k_parameter"))
    for u in _sample_points(rng, max(cfg.samples // 10, 3)):
        g = emb.hyperbolic_metric(u)
        loc = f"u=({u[0]:+.4f},{u[1]:+.4f})"
        report.add("phi_k_metric", loc,
                   float(np.abs(result.left_metric(u) - g).max()),
                   cfg.tol("phi_k_metric"))
        report.add("phi_k_metric", loc + "/surface",
                   float(np.abs(result.surface_metric(u) - g).max()),
                   cfg.tol("phi_k_metric"))
    return report


COMMANDS = {
    "check": run_check,
    "mess": run_mess,
    "dual": run_dual,
    "extend": run_extend,
    "rigidity": run_rigidity,
    "fuchsian": run_fuchsian,
    "phik": run_phi_k,
}


def run(cfg: RunConfig) -> CheckReport:
    """Dispatch a validated configuration to its command."""
    cfg.validate()
    return COMMANDS[cfg.command](cfg)


# ---------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adsgeo",
        description="verification harness for spacelike-surface geometry in AdS3")
    parser.add_argument("--config", help="flat key=value configuration file")
    sub = parser.add_subparsers(dest="command")

    def add_common(p):
        p.add_argument("--tolerance", type=float, default=None,
                       help="override every check tolerance")
        p.add_argument("--fd-step", dest="fd_step", type=float, default=None,
                       help="immersion differentiation step")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--output", choices=FORMATS, default=None)
        p.add_argument("--out-file", dest="out_file", default=None)

    def add_fixture(p):
        p.add_argument("--fixture", choices=emb.CATALOG, default=None)
        p.add_argument("--s", type=float, default=None)
        p.add_argument("--amplitude", type=float, default=None)
        p.add_argument("--width", type=float, default=None)
        p.add_argument("--base", type=float, default=None)

    p = sub.add_parser("check", help="Gauss and Codazzi residuals")
    add_fixture(p)
    p.add_argument("--samples", type=int, default=None)
    add_common(p)

    p = sub.add_parser("mess", help="left/right metric checks")
    add_fixture(p)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--s2", type=float, default=None,
                   help="second family parameter for surface-independence rows")
    add_common(p)

    p = sub.add_parser("dual", help="duality checks")
    add_fixture(p)
    p.add_argument("--samples", type=int, default=None)
    add_common(p)

    p = sub.add_parser("extend", help="equidistant extension curvature checks")
    add_fixture(p)
    p.add_argument("--s-list", dest="s_list", default=None,
                   help="comma-separated extension parameters")
    p.add_argument("--points", type=int, default=None)
    add_common(p)

    p = sub.add_parser("rigidity", help="discrete kernel verdict")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--mesh-level", dest="mesh_level", type=int, default=None)
    add_common(p)

    p = sub.add_parser("fuchsian", help="octagon group and mesh checks")
    p.add_argument("--mesh-level", dest="mesh_level", type=int, default=None)
    p.add_argument("--export-mesh", dest="export_mesh", default=None)
    add_common(p)

    p = sub.add_parser("phik", help="constant-curvature slice map on the family")
    p.add_argument("--k", dest="k_curvature", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    add_common(p)

    sub.add_parser("version", help="print version and exit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.command == "version":
        sys.stdout.write(f"adsgeo {__version__}\n")
        return 0

    try:
        cfg = RunConfig(command=args.command)
        if args.config:
            for key, raw in parse_config_file(args.config).items():
                try:
                    setattr(cfg, key, _coerce(cfg, key, raw))
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key}: {raw!r}") from exc
        for key, value in vars(args).items():
            if key in ("config", "command") or value is None:
                continue
            setattr(cfg, key, value)
        report = run(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"adsgeo: config error: {exc}\n")
        return 2
    except AdsGeoError as exc:
        sys.stderr.write(f"adsgeo: error: {exc}\n")
        return 2

    payload = emit_report(report, cfg.output)
    if cfg.out_file:
        with open(cfg.out_file, "wb") as fh:
            fh.write(payload)
        sys.stdout.write(f"report written to {cfg.out_file}: {report.summary}\n")
    else:
        sys.stdout.buffer.write(payload)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
