"""Command-line front end: ``fracclifft {kernel,transform,basis,verify}``.

Angles are radians unless ``--pi-fraction`` is given, in which case they are
read as rational multiples of pi (``--alpha 1/2``).  Tables are CSV with 17
significant digits; ``--format json`` writes multivector JSON instead.
"""

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

import numpy as np

from . import gaussian_poly as gp
from .clifford import Multivector, algebra
from .kernel import KernelParams, UnvalidatedRegimeWarning, kernel_closed, kernel_series
from .transform import psi, run_manifest
from .verification import SuiteConfig, run_suite

__all__ = ["RunConfig", "build_parser", "main"]


@dataclass
class RunConfig:
    """Parsed command line; round-trips through JSON."""

    subcommand: str
    alpha: str = "1.5707963267948966"
    beta: str = "0"
    m: int = 2
    pi_fraction: bool = False
    truncation: int = None
    beta_small_threshold: float = 1e-6
    box_radius: float = 8.0
    nodes_per_axis: int = None
    input: str = None
    output: str = None
    seed: int = 0
    format: str = "csv"
    threads: int = None
    options: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def angle(self, name):
        raw = getattr(self, name)
        if self.pi_fraction:
            return float(Fraction(raw)) * math.pi
        return float(raw)

    def kernel_params(self):
        return KernelParams(self.angle("alpha"), self.angle("beta"), self.m, self.truncation, self.beta_small_threshold)


_COMMON = ("alpha", "beta", "m", "pi_fraction", "truncation", "beta_small_threshold", "box_radius", "nodes_per_axis", "input", "output", "seed", "format", "threads")


def _add_common(p):
    p.add_argument("--m", type=int, default=2, help="dimension (1..8)")
    p.add_argument("--alpha", default="1.5707963267948966", help="transform angle alpha (radians, or a fraction of pi with --pi-fraction)")
    p.add_argument("--beta", default="0", help="Gamma angle beta (radians, or a fraction of pi with --pi-fraction)")
    p.add_argument("--pi-fraction", action="store_true", help="read --alpha/--beta as rational multiples of pi, e.g. 1/2")
    p.add_argument("--truncation", type=int, default=None, help="series truncation K (default adapts to |x||y|/sin alpha)")
    p.add_argument("--beta-small-threshold", type=float, default=1e-6, help="|beta| below this uses the exact beta=0 kernel")
    p.add_argument("--box-radius", type=float, default=8.0, help="quadrature box half-width R")
    p.add_argument("--nodes-per-axis", type=int, default=None, help="Gauss-Legendre nodes per axis (default 160 for m=2, 48 for m=4)")
    p.add_argument("--input", "-i", default=None, help="input file (UTF-8)")
    p.add_argument("--output", "-o", default=None, help="output file (UTF-8); stdout when omitted")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--threads", type=int, default=None, help="worker threads (fallback: FRACCLIFFT_THREADS, then 1)")
    p.add_argument("--config", default=None, help="read a RunConfig JSON file; explicit flags are ignored")
    p.add_argument("--dump-config", action="store_true", help="print the parsed RunConfig JSON and exit")


def build_parser():
    parser = argparse.ArgumentParser(prog="fracclifft", description="Fractional Clifford-Fourier transform toolkit.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    k = sub.add_parser("kernel", help="evaluate the kernel on a grid or on explicit point pairs")
    _add_common(k)
    k.add_argument("--route", choices=("series", "closed", "both"), default="closed", help="evaluation route; 'both' adds a discrepancy column")
    k.add_argument("--grid-n", type=int, default=11, help="grid points per axis for x in the e1-e2 plane")
    k.add_argument("--grid-radius", type=float, default=2.0, help="x grid half-width")
    k.add_argument("--y", default=None, help="fixed second argument, comma separated (default e2, or e1 when m=1)")

    t = sub.add_parser("transform", help="apply the transform to a basis function or a manifest")
    _add_common(t)
    t.add_argument("--function", default="psi:even:0:0:0", help="psi:PARITY:J:K[:ELL]")
    t.add_argument("--points", default="0.5,0.25", help="output points 'y1,y2;y1,y2;...'")
    t.add_argument("--manifest", default=None, help="batch manifest JSON (overrides other transform flags)")

    b = sub.add_parser("basis", help="construct a basis function psi and print its polynomial JSON")
    _add_common(b)
    b.add_argument("--parity", choices=("even", "odd"), default="even")
    b.add_argument("--j", type=int, default=0)
    b.add_argument("--k", type=int, default=0)
    b.add_argument("--ell", type=int, default=0)

    v = sub.add_parser("verify", help="run the verification suite (exit 0 iff every check passes)")
    _add_common(v)
    v.add_argument("--only", default=None, help="run only checks whose name starts with this prefix, e.g. pde")
    v.add_argument("--json", action="store_true", help="emit JSON lines")
    v.add_argument("--full", action="store_true", help="full sample counts instead of the quick profile")
    return parser


def _config_from_args(args):
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            return RunConfig.from_json(fh.read())
    common = {name: getattr(args, name) for name in _COMMON}
    skip = set(_COMMON) | {"subcommand", "config", "dump_config"}
    options = {k: v for k, v in vars(args).items() if k not in skip}
    return RunConfig(subcommand=args.subcommand, options=options, **common)


def _fmt(v):
    return format(float(v), ".17g")


def _blade_names(m):
    return ["".join(f"e{i + 1}" for i in range(m) if mask >> i & 1) or "1" for mask in range(1 << m)]


def _write(cfg, text):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_vec(text, m):
    vals = [float(v) for v in text.split(",")]
    if len(vals) != m:
        raise ValueError(f"expected {m} coordinates, got {len(vals)}")
    return vals


def cmd_kernel(cfg):
    opt = cfg.options
    p = cfg.kernel_params()
    m = p.m
    if cfg.input:
        data = np.loadtxt(cfg.input, delimiter=",", ndmin=2, encoding="utf-8")
        xs, ys = data[:, :m], data[:, m:2 * m]
    else:
        n, radius = int(opt.get("grid_n", 11)), float(opt.get("grid_radius", 2.0))
        axis = np.linspace(-radius, radius, n)
        grids = np.meshgrid(*([axis] * min(m, 2)), indexing="ij")
        xs = np.zeros((grids[0].size, m))
        for i, g in enumerate(grids):
            xs[:, i] = g.ravel()
        y0 = opt.get("y") or ",".join("1" if i == min(1, m - 1) else "0" for i in range(m))
        ys = np.tile(_parse_vec(y0, m), (len(xs), 1))
    route = opt.get("route", "closed")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnvalidatedRegimeWarning)
        if route in ("closed", "both"):
            primary = kernel_closed(xs, ys, p)
        if route in ("series", "both"):
            series = kernel_series(xs, ys, p)
    if route == "series":
        primary = series
    coeffs = primary.coeffs()
    alg = algebra(m)
    disc = None
    if route == "both":
        disc = (primary - series).norm() / np.maximum(primary.norm(), 1.0)
        sys.stderr.write(f"max discrepancy {_fmt(np.max(disc))}\n")
    if cfg.format == "json":
        rows = [
            {"x": list(map(float, x)), "y": list(map(float, y)), "value": Multivector(m, c).to_dict()}
            | ({"discrepancy": float(d)} if disc is not None else {})
            for x, y, c, d in zip(xs, ys, coeffs, disc if disc is not None else [None] * len(xs))
        ]
        _write(cfg, json.dumps(rows) + "\n")
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = [n for mask, n in enumerate(_blade_names(m)) if alg.grades[mask] == 2]
    head = [f"x{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(m)] + ["scalar_re", "scalar_im"]
    head += [f"{n}_{part}" for n in names for part in ("re", "im")]
    if disc is not None:
        head.append("discrepancy")
    w.writerow(head)
    blades = [mask for mask in range(alg.dim) if alg.grades[mask] == 2]
    for r in range(len(xs)):
        row = [_fmt(v) for v in xs[r]] + [_fmt(v) for v in ys[r]]
        row += [_fmt(coeffs[r, 0].real), _fmt(coeffs[r, 0].imag)]
        for mask in blades:
            row += [_fmt(coeffs[r, mask].real), _fmt(coeffs[r, mask].imag)]
        if disc is not None:
            row.append(_fmt(disc[r]))
        w.writerow(row)
    _write(cfg, buf.getvalue())
    return 0


def _manifest_from_cfg(cfg):
    opt = cfg.options
    if opt.get("manifest"):
        with open(opt["manifest"], encoding="utf-8") as fh:
            return json.load(fh)
    parts = opt.get("function", "psi:even:0:0:0").split(":")
    if parts[0] != "psi" or len(parts) not in (4, 5):
        raise ValueError("function must look like psi:PARITY:J:K[:ELL]")
    func = {"kind": "psi", "parity": parts[1], "j": int(parts[2]), "k": int(parts[3]), "ell": int(parts[4]) if len(parts) == 5 else 0}
    points = [_parse_vec(p, cfg.m) for p in opt.get("points", "").split(";") if p.strip()]
    quad = {"box_radius": cfg.box_radius}
    if cfg.nodes_per_axis:
        quad["nodes_per_axis"] = cfg.nodes_per_axis
    return {
        "params": {"alpha": cfg.angle("alpha"), "beta": cfg.angle("beta"), "m": cfg.m},
        "quadrature": quad,
        "function": func,
        "output_points": points,
    }


def cmd_transform(cfg):
    manifest = _manifest_from_cfg(cfg)
    m = int(manifest["params"]["m"])
    ys, values, ratio, meta = run_manifest(manifest, threads=cfg.threads)
    if cfg.format == "json":
        out = {
            "meta": {k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in meta.items()},
            "results": [
                {"y": list(map(float, y)), "value": Multivector(m, v).to_dict()} | ({"ratio": [float(r.real), float(r.imag)]} if ratio is not None else {})
                for y, v, r in zip(ys, values, ratio if ratio is not None else [None] * len(ys))
            ],
        }
        _write(cfg, json.dumps(out) + "\n")
        return 0
    buf = io.StringIO()
    for key, val in meta.items():
        if isinstance(val, complex):
            val = f"{_fmt(val.real)}{'+' if val.imag >= 0 else '-'}{_fmt(abs(val.imag))}j"
        buf.write(f"# {key}={val}\n")
    w = csv.writer(buf, lineterminator="\n")
    names = _blade_names(m)
    head = [f"y{i + 1}" for i in range(m)] + [f"{n}_{part}" for n in names for part in ("re", "im")]
    if ratio is not None:
        head += ["ratio_re", "ratio_im", "eigenvalue_re", "eigenvalue_im"]
    w.writerow(head)
    for r in range(len(ys)):
        row = [_fmt(v) for v in ys[r]]
        for c in values[r]:
            row += [_fmt(c.real), _fmt(c.imag)]
        if ratio is not None:
            ev = meta["eigenvalue"]
            row += [_fmt(ratio[r].real), _fmt(ratio[r].imag), _fmt(ev.real), _fmt(ev.imag)]
        w.writerow(row)
    _write(cfg, buf.getvalue())
    if meta.get("under_resolved"):
        sys.stderr.write("warning: quadrature under-resolved (see under_resolved in the output metadata)\n")
    return 0


def cmd_basis(cfg):
    opt = cfg.options
    f = psi(opt.get("parity", "even"), int(opt.get("j", 0)), int(opt.get("k", 0)), int(opt.get("ell", 0)), cfg.m)
    h, g = gp.harmonic_eigenvalues(opt.get("parity", "even"), int(opt.get("j", 0)), int(opt.get("k", 0)), cfg.m)
    data = f.to_dict()
    data["eigenvalues"] = {"H": h, "Gamma": g}
    _write(cfg, json.dumps(data) + "\n")
    return 0


def cmd_verify(cfg):
    opt = cfg.options
    reports = run_suite(SuiteConfig(seed=cfg.seed, only=opt.get("only"), quick=not opt.get("full", False), threads=cfg.threads))
    lines = []
    for r in reports:
        if opt.get("json"):
            lines.append(r.to_json())
        else:
            lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name} residual={r.max_residual:.3e} tol={r.tolerance:.1e}")
    _write(cfg, "\n".join(lines) + ("\n" if lines else ""))
    return 0 if all(r.passed for r in reports) else 1


_COMMANDS = {"kernel": cmd_kernel, "transform": cmd_transform, "basis": cmd_basis, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.dump_config:
            sys.stdout.write(cfg.to_json() + "\n")
            return 0
        return _COMMANDS[cfg.subcommand](cfg)
    except (ValueError, TypeError, OSError) as exc:
        sys.stderr.write(f"fracclifft: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
