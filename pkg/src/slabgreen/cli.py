"""``slabgreen`` command line: kernels, profiles, Fig.-2 data, roots, checks, timing.

Settings are resolved in this order (later wins): built-in defaults, the
``SLABGREEN_TOL`` environment variable, a flat ``key = value`` file given by
``--config``, explicit flags.

Biot number convention: ``Bi = L * lambda / 2``, so ``--bi 10`` on a unit
layer means ``lambda = 20``.  This differs from the common ``Bi = lambda L``.

Exit codes: 0 success, 1 a validation check failed, 2 usage error,
3 numerical or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .eigen_oracle import MIN_T_OVER_TAU, basis_for, eigen_green_z, find_roots, modes_needed
from .errors import CapacityError, DomainError, SlabGreenError, ValidityError
from .image_kernel import SlabConfig, TruncationPolicy, green_z
from .temp_field import temp
from .validation import SUITES, run_suite

__all__ = ["GridSpec", "RunConfig", "BenchRow", "run", "run_bench", "main"]

ENV_TOL = "SLABGREEN_TOL"
FIG2_DEFAULT_BI = "inf,100,10,1,0.1"
BENCH_DEFAULT = "1e-4,1e-3,0.01,0.03,0.1,0.3,1,3,10"
BOUND_SLACK = 1e-9
SYMMETRY_TOL = 1e-9


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class GridSpec:
    nz: int = 51
    nt: int = 60
    t_max_over_tau: float = 1.0

    def __post_init__(self):
        if self.nz < 2:
            raise UsageError(f"--nz must be > 1, got {self.nz}")
        if self.nt < 1:
            raise UsageError(f"--nt must be > 0, got {self.nt}")
        if not (math.isfinite(self.t_max_over_tau) and self.t_max_over_tau > 0.0):
            raise UsageError(f"--t-max-over-tau must be positive, got {self.t_max_over_tau}")


@dataclass(frozen=True)
class RunConfig:
    slab: SlabConfig
    policy: TruncationPolicy
    grid: GridSpec
    output_path: str | None
    format: str


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _number(text):
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _number_list(text):
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty list")
    return [_number(p) for p in parts]


def _common(parser):
    g = parser.add_argument_group("slab and tolerance")
    g.add_argument("--L", type=_number, default=1.0, help="layer thickness (default 1)")
    g.add_argument("--kappa", type=_number, default=1.0, help="thermal diffusivity (default 1)")
    g.add_argument("--bi", default=None, help="Biot number Bi = L*lambda/2 ('inf' for fixed-temperature walls)")
    g.add_argument("--lambda", dest="lam", type=_number, default=None, help="Robin coefficient lambda")
    g.add_argument("--robin", choices=["inf"], default=None, help="'inf' selects fixed-temperature walls")
    g.add_argument("--tol", type=_number, default=1e-10, help="absolute series tolerance (env SLABGREEN_TOL)")
    g.add_argument("--n-max", type=int, default=64, help="largest image ring allowed")
    g.add_argument("--safety", type=_number, default=2.0, help="safety factor on the tail bound")
    g.add_argument("--config", default=None, help="flat 'key = value' settings file")
    g.add_argument("--out", default=None, help="output file (directory for fig2); stdout if omitted")
    g.add_argument("--format", choices=["csv", "json"], default="csv")


def _build_parser():
    parser = _Parser(prog="slabgreen", description="Heat kernel of a slab with symmetric Robin walls.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("greens", help="axial Green's function G1(z, z', t)")
    _common(p)
    p.add_argument("--z", type=_number_list, default=[0.5])
    p.add_argument("--zp", type=_number_list, default=[0.5])
    p.add_argument("--t", type=_number_list, default=None, help="times")
    p.add_argument("--t-over-tau", type=_number_list, default=None, help="times in units of tau = L^2/4 kappa")

    p = sub.add_parser("profile", help="temperature of an initially uniform layer")
    _common(p)
    p.add_argument("--z", type=_number_list, default=None, help="heights (default: --nz points on [0, L])")
    p.add_argument("--nz", type=int, default=11)
    p.add_argument("--t", type=_number_list, default=None)
    p.add_argument("--t-over-tau", type=_number_list, default=None)

    p = sub.add_parser("fig2", help="temperature fields on [0, L/2] for several Biot numbers")
    _common(p)
    p.set_defaults(bi=FIG2_DEFAULT_BI)
    p.add_argument("--nz", type=int, default=51)
    p.add_argument("--nt", type=int, default=60)
    p.add_argument("--t-max-over-tau", type=_number, default=1.0)
    p.add_argument("--svg", action="store_true", help="also write a line chart per Biot number")

    p = sub.add_parser("roots", help="eigenvalues and mode norms")
    _common(p)
    p.add_argument("--count", type=int, default=10)

    p = sub.add_parser("validate", help="run self-checks")
    _common(p)
    p.add_argument("--suite", choices=sorted(SUITES), default="all")

    p = sub.add_parser("bench", help="image series vs spectral sum, cost per t/tau")
    _common(p)
    p.add_argument("--t-over-tau", type=_number_list, default=BENCH_DEFAULT)
    p.add_argument("--z", type=_number, default=None, help="observation height (default L/2)")
    p.add_argument("--zp", type=_number, default=None, help="source height (default L/4)")
    p.add_argument("--repeat", type=int, default=20)
    return parser, sub


def _read_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _parse(argv):
    parser, sub = _build_parser()
    args = parser.parse_args(argv)

    overrides = {}
    env_tol = os.environ.get(ENV_TOL)
    if env_tol:
        overrides["tol"] = env_tol
    if args.config:
        overrides.update(_read_config(args.config))
    if not overrides:
        return args

    child = sub.choices[args.command]
    dests = {a.dest for a in child._actions} - {"help", "config"}
    mapped = {}
    for key, value in overrides.items():
        dest = "lam" if key == "lambda" else key
        if dest not in dests:
            raise UsageError(f"unknown setting {key!r} for {args.command}")
        mapped[dest] = value
    # string defaults pass through each argument's type converter; flags still win
    child.set_defaults(**mapped)
    return parser.parse_args(argv)


def _parse_bi(text):
    text = str(text).strip().lower()
    if text in ("inf", "infinity"):
        return math.inf
    value = _number(text)
    if not value >= 0.0:
        raise UsageError(f"Biot number must be >= 0, got {text}")
    return value


def _slab(args, bi=None):
    chosen = [n for n, v in (("--bi", args.bi if bi is None else bi), ("--lambda", args.lam), ("--robin", args.robin)) if v is not None]
    if len(chosen) > 1:
        raise UsageError(f"choose one of {', '.join(chosen)}")
    try:
        if args.robin == "inf":
            return SlabConfig.dirichlet(L=args.L, kappa=args.kappa)
        if bi is not None:
            return SlabConfig.from_biot(bi, L=args.L, kappa=args.kappa)
        if args.bi is not None:
            return SlabConfig.from_biot(_parse_bi(args.bi), L=args.L, kappa=args.kappa)
        lam = 0.0 if args.lam is None else args.lam
        return SlabConfig(L=args.L, kappa=args.kappa, lam=lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _run_config(args, grid=None, bi=None):
    try:
        policy = TruncationPolicy(abs_tol=args.tol, n_max=args.n_max, safety=args.safety)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(
        slab=_slab(args, bi),
        policy=policy,
        grid=grid or GridSpec(),
        output_path=args.out,
        format=args.format,
    )


# ---------------------------------------------------------------- output


def _render(header, rows, fmt):
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def atomic_write(path, text):
    """Write ``text`` to ``path`` via a sibling temp file and ``os.replace``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _emit(cfg: RunConfig, header, rows):
    text = _render(header, rows, cfg.format)
    if cfg.output_path:
        atomic_write(cfg.output_path, text)
    else:
        sys.stdout.write(text)


def _times(args, tau):
    if args.t is not None and args.t_over_tau is not None:
        raise UsageError("give --t or --t-over-tau, not both")
    if args.t is not None:
        return list(args.t)
    return [r * tau for r in (args.t_over_tau or [1.0])]


# ---------------------------------------------------------------- commands


def _cmd_greens(args):
    cfg = _run_config(args)
    rows = []
    for t in _times(args, cfg.slab.tau):
        for z in args.z:
            for zp in args.zp:
                sv = green_z(z, zp, t, cfg.slab, cfg.policy)
                rows.append((z, zp, t, sv.value, sv.terms_used, sv.remainder_bound))
    _emit(cfg, ("z", "zp", "t", "G1", "terms_used", "remainder_bound"), rows)
    return 0


def _cmd_profile(args):
    cfg = _run_config(args)
    L = cfg.slab.L
    zs = args.z if args.z is not None else [L * i / (args.nz - 1) for i in range(args.nz)]
    if args.z is None and args.nz < 2:
        raise UsageError(f"--nz must be > 1, got {args.nz}")
    rows = [(z, t, temp(z, t, cfg.slab)) for t in _times(args, cfg.slab.tau) for z in zs]
    _emit(cfg, ("z", "t", "T_over_T0"), rows)
    return 0


def _bi_label(bi):
    return "inf" if math.isinf(bi) else f"{bi:g}"


def _svg(rows, L, label, t_nodes, width=640, height=400, curves=6):
    """Line chart of T vs z for a handful of the emitted times."""
    pad = 40
    pick = sorted({t_nodes[round(i * (len(t_nodes) - 1) / (curves - 1))] for i in range(curves)})
    lines = []
    for t in pick:
        pts = [(z, v) for z, tt, v in rows if tt == t]
        coords = " ".join(
            f"{pad + (width - 2 * pad) * z / (0.5 * L):.2f},{height - pad - (height - 2 * pad) * v:.2f}"
            for z, v in pts
        )
        lines.append(f'<polyline fill="none" stroke="black" stroke-width="1" points="{coords}"/>')
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
        f'fill="none" stroke="gray"/>\n'
        f'<text x="{pad}" y="{pad - 10}">Bi = {label}: T/T0 vs z on [0, L/2]</text>\n'
        + "\n".join(lines)
        + "\n</svg>\n"
    )


def _cmd_fig2(args):
    grid = GridSpec(nz=args.nz, nt=args.nt, t_max_over_tau=args.t_max_over_tau)
    bis = [_parse_bi(b) for b in str(args.bi).split(",") if b.strip()]
    if not bis:
        raise UsageError("--bi needs at least one value")
    out_dir = Path(args.out or ".")
    if not out_dir.is_dir():
        raise OSError(f"output directory does not exist: {out_dir}")
    failures = []
    for bi in bis:
        cfg = _run_config(args, grid=grid, bi=bi)
        slab = cfg.slab
        L, tau = slab.L, slab.tau
        z_nodes = [0.5 * L * i / (grid.nz - 1) for i in range(grid.nz)]
        t_nodes = [grid.t_max_over_tau * tau * j / grid.nt for j in range(1, grid.nt + 1)]
        rows = []
        for t in t_nodes:
            for z in z_nodes:
                v = temp(z, t, slab)
                mirror = temp(L - z, t, slab)
                if not (0.0 <= v <= 1.0 + BOUND_SLACK):
                    failures.append(f"Bi={_bi_label(bi)} T({z!r}, {t!r}) = {v!r} outside [0, 1]")
                if abs(v - mirror) > SYMMETRY_TOL:
                    failures.append(f"Bi={_bi_label(bi)} asymmetric at z={z!r}, t={t!r}: {v!r} vs {mirror!r}")
                rows.append((z, t, v))
        label = _bi_label(bi)
        atomic_write(out_dir / f"fig2_bi_{label}.{cfg.format}", _render(("z", "t", "T_over_T0"), rows, cfg.format))
        if args.svg:
            atomic_write(out_dir / f"fig2_bi_{label}.svg", _svg(rows, L, label, t_nodes))
    if failures:
        print(f"fig2: {len(failures)} check failure(s); first: {failures[0]}", file=sys.stderr)
        return 1
    return 0


def _cmd_roots(args):
    cfg = _run_config(args)
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    basis = find_roots(cfg.slab.L, cfg.slab.lam, args.count, cfg.slab.kappa)
    rows = [(i + 1, a, nrm) for i, (a, nrm) in enumerate(zip(basis.alphas, basis.norms))]
    _emit(cfg, ("index", "alpha", "norm"), rows)
    return 0


def _cmd_validate(args):
    cfg = _run_config(args)
    results = run_suite(args.suite, cfg.policy)
    for r in results:
        print(r.line())
    return 0 if all(r.ok for r in results) else 1


@dataclass(frozen=True)
class BenchRow:
    t_over_tau: float
    image_terms: int
    image_seconds: float
    spectral_modes: int | None
    spectral_setup_seconds: float | None
    spectral_seconds: float | None
    cheaper: str

    def cells(self):
        blank = ("", "", "")
        spec = (
            blank
            if self.spectral_modes is None
            else (self.spectral_modes, self.spectral_setup_seconds, self.spectral_seconds)
        )
        return (self.t_over_tau, self.image_terms, self.image_seconds, *spec, self.cheaper)


BENCH_HEADER = (
    "t_over_tau",
    "image_terms",
    "image_seconds",
    "spectral_modes",
    "spectral_setup_seconds",
    "spectral_seconds",
    "cheaper",
)


def _best_time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run_bench(t_over_tau, cfg: SlabConfig, policy: TruncationPolicy = TruncationPolicy(), z=None, zp=None, repeat=20):
    """Cost of one kernel evaluation by images and by modes for each ``t / tau``.

    The spectral route needs the eigenvalues first: ``spectral_setup_seconds``
    times :func:`find_roots` for the :func:`modes_needed` count at
    ``policy.abs_tol`` and ``spectral_seconds`` the truncated sum itself.  The
    cheaper route is judged on setup plus evaluation, since a single
    evaluation pays both.  Below ``t / tau = 1e-3`` the spectral route is
    reported as ``oracle unavailable``.  Returns ``(rows, crossover)`` where
    ``crossover`` is the first ``t / tau`` at which the spectral route is
    cheaper after the image route was, or ``None``.
    """
    z = 0.5 * cfg.L if z is None else z
    zp = 0.25 * cfg.L if zp is None else zp
    rows = []
    for r in t_over_tau:
        if not 1e-4 <= r <= 10.0:
            raise UsageError(f"bench t/tau must lie in [1e-4, 10], got {r!r}")
        t = r * cfg.tau
        sv = green_z(z, zp, t, cfg, policy)
        t_img = _best_time(lambda: green_z(z, zp, t, cfg, policy), repeat)
        if r < MIN_T_OVER_TAU:
            rows.append(BenchRow(r, sv.terms_used, t_img, None, None, None, "image (oracle unavailable)"))
            continue
        modes = max(1, modes_needed(basis_for(cfg, t), t, policy.abs_tol))
        t_setup = _best_time(lambda: find_roots(cfg.L, cfg.lam, modes, cfg.kappa), max(1, repeat // 4))
        basis = find_roots(cfg.L, cfg.lam, modes, cfg.kappa)
        t_spec = _best_time(lambda: eigen_green_z(z, zp, t, basis, modes), repeat)
        cheaper = "image" if t_img <= t_setup + t_spec else "spectral"
        rows.append(BenchRow(r, sv.terms_used, t_img, modes, t_setup, t_spec, cheaper))
    crossover = None
    for prev, cur in zip(rows, rows[1:]):
        if prev.cheaper.startswith("image") and cur.cheaper == "spectral":
            crossover = cur.t_over_tau
            break
    return rows, crossover


def _cmd_bench(args):
    cfg = _run_config(args)
    ratios = args.t_over_tau if isinstance(args.t_over_tau, list) else _number_list(args.t_over_tau)
    rows, crossover = run_bench(ratios, cfg.slab, cfg.policy, args.z, args.zp, max(1, args.repeat))
    _emit(cfg, BENCH_HEADER, [r.cells() for r in rows])
    where = "none in range" if crossover is None else f"t/tau = {crossover:g}"
    print(f"crossover (spectral becomes cheaper): {where}", file=sys.stderr)
    return 0


_COMMANDS = {
    "greens": _cmd_greens,
    "profile": _cmd_profile,
    "fig2": _cmd_fig2,
    "roots": _cmd_roots,
    "validate": _cmd_validate,
    "bench": _cmd_bench,
}


def _one_line(exc):
    return " ".join(str(exc).split()) or type(exc).__name__


def run(argv=None) -> int:
    """Execute one subcommand and return its exit code (never raises for expected failures)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    except (UsageError, argparse.ArgumentTypeError, DomainError, CapacityError, ValidityError) as exc:
        print(f"slabgreen: usage error: {_one_line(exc)}", file=sys.stderr)
        return 2
    except (SlabGreenError, ArithmeticError, OSError) as exc:
        print(f"slabgreen: {type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
