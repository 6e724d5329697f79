"""
ratcheb - Command Line Module

Usage:
    ratcheb solve --set "[-1,1]" --poles "2:1" --xstar 2
    ratcheb green --set "[-1,1]" --pole inf --eval "2;3"
    ratcheb verify --set "[-1,1]" --poles "inf:3" --xstar inf
    ratcheb asymptotics --set "[-1,-0.2];[0.3,1]" --atoms "2:1/2,-2:1/2" --mode periodic --nmax 40 --eval "2i"
    ratcheb selftest

Exit codes: 0 success, 1 usage or argument error, 2 numeric failure
(non-convergence or failed checks; the report is still written).
"""

import argparse
import logging
import math
import re
import sys
from typing import Dict, List, Optional

import numpy as np

from .asymptotics import (
    MODES,
    AsymptoticsOptions,
    AsymptoticsRow,
    PoleSequenceSpec,
    format_complex,
    run_root_asymptotics,
    szego_widom_modulus,
)
from .csv_handler import GREEN_COLUMNS, CSVHandler
from .errors import ArgumentError, ConvergenceError, DomainError, NumericError, UsageError
from .extension import GapBehavior, band_measure_check, bernstein_walsh_check, n_extension, representation_check
from .geometry import INF, CompactSet, PoleDivisor, ext_point, format_point, gap_of, is_inf
from .json_handler import JsonHandler
from .potential import DEFAULT_CACHE
from .selftest import CHECKS, run_selftest
from .solver import Problem, SolveOptions, gap_structure_report, solve, verify_alternation

logger = logging.getLogger(__name__)

PROG = "ratcheb"
SUBCOMMANDS = ("solve", "green", "verify", "asymptotics", "selftest")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2


class RatchebArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises UsageError instead of exiting."""

    def error(self, message: str):
        match = re.search(r"(--[\w-]+)", message)
        raise UsageError(message, match.group(1) if match else None)


def parse_points(text: str) -> List[complex]:
    """
    Parses "2;3;2i;1-0.5i;inf" into evaluation points.

    Examples:
        >>> parse_points("2;2i")
        [(2+0j), 2j]
    """
    points = []
    for token in (t.strip() for t in text.split(";")):
        if not token:
            continue
        if token.lower() in ("inf", "+inf", "-inf", "infinity"):
            points.append(complex(INF, 0.0))
            continue
        try:
            points.append(complex(token.replace(" ", "").replace("i", "j")))
        except ValueError as exc:
            raise ArgumentError(f"malformed point {token!r}") from exc
    if not points:
        raise ArgumentError("no evaluation points given")
    return points


def _render_points(points: List[complex]) -> str:
    return ";".join("inf" if math.isinf(z.real) else format_complex(z) for z in points)


class RunConfig:
    """
    A validated command line configuration.

    Attributes:
        subcommand (str): One of solve, green, verify, asymptotics, selftest.
        set (str): Canonical set literal.
        poles (str): Canonical divisor literal (solve, verify).
        x_star (str): Extremal point ('inf' or a decimal).
        pole (str): Green function pole (green).
        eval (list): Evaluation points.
        atoms (str): Pole distribution literal (asymptotics).
        mode (str): Pole sequence mode (asymptotics).
        kind (str): 'root' or 'szego' (asymptotics).
        nmax (int): Largest n (asymptotics).
        nlist (list): Explicit n values for root runs (asymptotics).
        residue (int): Residue class for szego runs.
        tol (float): Remez tolerance.
        max_iterations (int): Remez iteration cap.
        init (str): Initial reference rule.
        samples (int): Random Bernstein-Walsh points (verify).
        checks (list): Selftest check names.
        format (str): 'json' or 'csv'.
        output (str): Output path, None for stdout.
        seed (int): Seed of randomized batteries.
        verbose (bool): DEBUG logging.
    """

    FIELDS = ("subcommand", "set", "poles", "x_star", "pole", "eval", "atoms", "mode", "kind", "nmax",
              "nlist", "residue", "tol", "max_iterations", "init", "samples", "checks", "format",
              "output", "seed", "verbose")

    def __init__(self, subcommand: str):
        self.subcommand = subcommand
        self.set = None
        self.poles = None
        self.x_star = None
        self.pole = None
        self.eval = None
        self.atoms = None
        self.mode = None
        self.kind = None
        self.nmax = None
        self.nlist = None
        self.residue = None
        self.tol = None
        self.max_iterations = None
        self.init = None
        self.samples = None
        self.checks = None
        self.format = "json"
        self.output = None
        self.seed = 0
        self.verbose = False

    def solve_options(self) -> SolveOptions:
        options = SolveOptions()
        if self.tol is not None:
            options.tol = self.tol
        if self.max_iterations is not None:
            options.max_iterations = self.max_iterations
        if self.init is not None:
            options.init = self.init
        return options

    def problem(self) -> Problem:
        return Problem(self.set, self.poles, self.x_star)

    def to_argv(self) -> List[str]:
        """Renders the configuration as canonical argv (parse_args(to_argv()) == self)."""
        argv = [self.subcommand]
        flags = [("set", "--set"), ("poles", "--poles"), ("x_star", "--xstar"), ("pole", "--pole"),
                 ("atoms", "--atoms"), ("mode", "--mode"), ("kind", "--kind"), ("nmax", "--nmax"),
                 ("residue", "--residue"), ("tol", "--tol"), ("max_iterations", "--max-iterations"),
                 ("init", "--init"), ("samples", "--samples")]
        for attr, flag in flags:
            value = getattr(self, attr)
            if value is not None:
                argv.append(f"{flag}={value!r}" if isinstance(value, float) else f"{flag}={value}")
        if self.eval is not None:
            argv.append(f"--eval={_render_points(self.eval)}")
        if self.nlist is not None:
            argv.append("--nlist=" + ",".join(str(n) for n in self.nlist))
        for name in self.checks or []:
            argv.append(f"--check={name}")
        argv.extend([f"--format={self.format}", f"--seed={self.seed}"])
        if self.output is not None:
            argv.append(f"--output={self.output}")
        if self.verbose:
            argv.append("--verbose")
        return argv

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunConfig):
            return NotImplemented
        return all(getattr(self, f) == getattr(other, f) for f in self.FIELDS)

    def __repr__(self) -> str:
        return f"RunConfig({' '.join(self.to_argv())!r})"


def _common(parser: argparse.ArgumentParser, formats: List[str], default: str) -> None:
    parser.add_argument("--format", choices=formats, default=default, help=f"output format (default: {default})")
    parser.add_argument("--output", default=None, help="output path (default: stdout)")
    parser.add_argument("--seed", type=int, default=0, help="seed of randomized batteries (default: 0)")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")


def _remez(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help="equioscillation tolerance (default: 1e-10)")
    parser.add_argument("--max-iterations", type=int, default=None, help="Remez iteration cap (default: 200)")
    parser.add_argument("--init", choices=["harmonic", "length", "equal"], default=None,
                        help="initial reference apportioning (default: harmonic)")


def build_parser() -> RatchebArgumentParser:
    parser = RatchebArgumentParser(prog=PROG, description="Extremal rational functions with prescribed real poles "
                                                   "on finite unions of real intervals.")
    sub = parser.add_subparsers(dest="subcommand", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True

    p = sub.add_parser("solve", help="compute the extremal function", description="Compute the extremal function.")
    p.add_argument("--set", required=True, help='set literal, e.g. "[-2,-1];[0,1]"')
    p.add_argument("--poles", required=True, help='pole divisor, e.g. "inf:3,2:1"')
    p.add_argument("--xstar", required=True, help="extremal point (decimal or inf)")
    _remez(p)
    _common(p, ["json"], "json")

    p = sub.add_parser("green", help="evaluate a Green function", description="Evaluate G_E(z, pole).")
    p.add_argument("--set", required=True, help="set literal")
    p.add_argument("--pole", required=True, help="pole (decimal or inf)")
    p.add_argument("--eval", required=True, help='points, e.g. "2;3;2i"')
    _common(p, ["csv", "json"], "csv")

    p = sub.add_parser("verify", help="solve and run every certificate",
                       description="Solve and check alternation, structure, bands and growth bounds.")
    p.add_argument("--set", required=True, help="set literal")
    p.add_argument("--poles", required=True, help="pole divisor")
    p.add_argument("--xstar", required=True, help="extremal point (decimal or inf)")
    p.add_argument("--samples", type=int, default=100, help="random Bernstein-Walsh points (default: 100)")
    _remez(p)
    _common(p, ["json"], "json")

    p = sub.add_parser("asymptotics", help="run an asymptotics battery",
                       description="Root or Szego-Widom asymptotics along a pole sequence.")
    p.add_argument("--set", required=True, help="set literal")
    p.add_argument("--atoms", required=True, help='limit measure, e.g. "2:1/2,-2:1/2"')
    p.add_argument("--mode", choices=list(MODES), default="weighted-rotation",
                   help="pole sequence rule (default: weighted-rotation)")
    p.add_argument("--xstar", default="inf", help="extremal point (default: inf)")
    p.add_argument("--kind", choices=["root", "szego"], default="root", help="experiment (default: root)")
    p.add_argument("--nmax", type=int, required=True, help="largest n")
    p.add_argument("--nlist", default=None, help='n values of a root run, e.g. "10,20,40" (default: 1..nmax)')
    p.add_argument("--residue", type=int, default=None, help="residue class of a szego run (default: nmax mod p)")
    p.add_argument("--eval", required=True, help="evaluation points off the set")
    _remez(p)
    _common(p, ["csv", "json"], "csv")

    p = sub.add_parser("selftest", help="run the invariant battery", description="Run the invariant battery.")
    p.add_argument("--check", action="append", choices=list(CHECKS), default=None,
                   help="run only this check (repeatable)")
    _common(p, ["json"], "json")
    return parser


VALUE_FLAGS = ("--set", "--poles", "--xstar", "--pole", "--eval", "--atoms", "--nlist")

_NEGATIVE_LITERAL = re.compile(r"^-(\d|\.\d|inf)", re.IGNORECASE)


def join_negative_values(argv: List[str]) -> List[str]:
    """
    Rewrites "--poles -0.5:1" as "--poles=-0.5:1" for the literal-valued flags.

    Examples:
        >>> join_negative_values(["solve", "--poles", "-0.5:1", "--xstar", "inf"])
        ['solve', '--poles=-0.5:1', '--xstar', 'inf']
    """
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in VALUE_FLAGS and i + 1 < len(argv) and _NEGATIVE_LITERAL.match(argv[i + 1]):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def flag_inventory(subcommand: str) -> List[str]:
    """Sorted option strings of a subcommand, as listed by --help."""
    parser = build_parser()
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return sorted(s for action in sub.choices[subcommand]._actions for s in action.option_strings)


def _canonical_set(text: str, flag: str) -> str:
    try:
        return CompactSet.from_literal(text).to_literal()
    except (ArgumentError, DomainError) as exc:
        raise UsageError(f"{flag}: {exc}", flag) from exc


def _canonical_point(text: str, flag: str) -> str:
    try:
        return format_point(ext_point(text))
    except (ArgumentError, DomainError, ValueError) as exc:
        raise UsageError(f"{flag}: {exc}", flag) from exc


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    """
    Parses argv into a validated RunConfig.

    Raises:
        UsageError: For unknown flags or malformed literals (the offending flag is attached).

    Examples:
        >>> parse_args(["solve", "--set", "[-1,1]", "--poles", "2:1", "--xstar", "2"]).poles
        '2.0:1'
    """
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(join_negative_values(list(argv)))
    cfg = RunConfig(args.subcommand)
    cfg.format = args.format
    cfg.output = args.output
    cfg.seed = args.seed
    cfg.verbose = args.verbose
    if args.subcommand != "selftest":
        cfg.set = _canonical_set(args.set, "--set")
    if args.subcommand in ("solve", "verify", "asymptotics"):
        cfg.tol, cfg.max_iterations, cfg.init = args.tol, args.max_iterations, args.init
        if cfg.tol is not None and not cfg.tol > 0:
            raise UsageError("--tol must be positive", "--tol")
        if cfg.max_iterations is not None and cfg.max_iterations < 1:
            raise UsageError("--max-iterations must be at least 1", "--max-iterations")
        cfg.x_star = _canonical_point(args.xstar, "--xstar")
    if args.subcommand in ("solve", "verify"):
        try:
            cfg.poles = PoleDivisor.from_literal(args.poles).to_literal()
        except (ArgumentError, DomainError) as exc:
            raise UsageError(f"--poles: {exc}", "--poles") from exc
    if args.subcommand == "verify":
        if args.samples < 0:
            raise UsageError("--samples must be non-negative", "--samples")
        cfg.samples = args.samples
    if args.subcommand == "green":
        cfg.pole = _canonical_point(args.pole, "--pole")
    if args.subcommand in ("green", "asymptotics"):
        try:
            cfg.eval = parse_points(args.eval)
        except ArgumentError as exc:
            raise UsageError(f"--eval: {exc}", "--eval") from exc
    if args.subcommand == "asymptotics":
        try:
            spec = PoleSequenceSpec.from_literal(args.atoms, args.mode)
        except (ArgumentError, DomainError) as exc:
            raise UsageError(f"--atoms: {exc}", "--atoms") from exc
        cfg.atoms = ",".join(f"{format_point(c)}:{w!r}" for c, w in spec.atoms)
        cfg.mode, cfg.kind, cfg.nmax, cfg.residue = args.mode, args.kind, args.nmax, args.residue
        if cfg.nmax < 1:
            raise UsageError("--nmax must be at least 1", "--nmax")
        if args.nlist is not None:
            try:
                cfg.nlist = sorted({int(t) for t in args.nlist.split(",") if t.strip()})
            except ValueError as exc:
                raise UsageError(f"--nlist: {exc}", "--nlist") from exc
            if not cfg.nlist or cfg.nlist[0] < 1 or cfg.nlist[-1] > cfg.nmax:
                raise UsageError("--nlist values must lie in [1, nmax]", "--nlist")
    if args.subcommand == "selftest":
        cfg.checks = args.check
    return cfg


# ----------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------

def _run_solve(cfg: RunConfig):
    sol = solve(cfg.problem(), cfg.solve_options())
    payload = {"command": "solve", "solution": sol.to_dict(), "structure": gap_structure_report(sol).to_dict()}
    return payload, None, EXIT_OK


def _run_green(cfg: RunConfig):
    E = CompactSet.from_literal(cfg.set)
    model = DEFAULT_CACHE.get(E, ext_point(cfg.pole))
    rows = []
    for z in cfg.eval:
        if math.isinf(z.real):
            value = model.eval(INF)
        elif z.imag == 0.0:
            value = model.eval(z.real)
        else:
            value = model.eval(z)
        rows.append([z.real, z.imag, value])
    payload = {"command": "green", "set": cfg.set, "pole": cfg.pole,
               "columns": list(GREEN_COLUMNS), "rows": rows}
    return payload, (list(GREEN_COLUMNS), rows), EXIT_OK


def _verify_points(E: CompactSet, count: int, seed: int) -> List[complex]:
    rng = np.random.default_rng(seed)
    if E.is_bounded:
        lo, hi = E.hull
        center, radius = 0.5 * (lo + hi), max(hi - lo, 1.0)
    else:
        center, radius = 0.0, 1.0
    re = center + radius * rng.uniform(-1.5, 1.5, count)
    im = radius * rng.uniform(-1.5, 1.5, count)
    return [complex(a, b) for a, b in zip(re, im) if b != 0.0]


def _run_verify(cfg: RunConfig):
    p = cfg.problem()
    options = cfg.solve_options()
    sol = solve(p, options)
    checks: Dict[str, object] = {}
    alternation = verify_alternation(sol.F, p, options=options)
    structure = gap_structure_report(sol)
    checks["alternation"] = alternation.to_dict()
    checks["structure"] = structure.to_dict()
    passed = alternation.passed and structure.passed and sol.defect <= 10 * options.tol
    if not sol.constant_case:
        bands = n_extension(sol.F, p.set)
        star = next(c for c in bands.classifications if c.gap == gap_of(p.set, p.x_star))
        band_ok = (bands.covers_base() and all(bands.monotone_on_bands())
                   and bands.open_band_count == bands.degree and star.behavior == GapBehavior.UNCHANGED)
        sums = band_measure_check(sol.F, bands)
        sums_ok = all(abs(s - 1.0) <= 1e-6 for s in sums)
        real_points = []
        for gap in bands.extension.gaps():
            real_points.extend(x for x in gap.sample(3) if not is_inf(x) and x not in sol.F.pole_divisor.atoms)
        points = real_points + _verify_points(p.set, 5, cfg.seed)
        representation = representation_check(sol.F, bands, points)
        growth = bernstein_walsh_check(sol.F, p.set, _verify_points(p.set, cfg.samples, cfg.seed + 1))
        checks["bands"] = dict(bands.to_dict(), passed=band_ok)
        checks["band_measures"] = {"sums": sums, "passed": sums_ok}
        checks["representation"] = representation.to_dict()
        checks["bernstein_walsh"] = growth.to_dict()
        passed = passed and band_ok and sums_ok and representation.passed and growth.passed
    payload = {"command": "verify", "solution": sol.to_dict(), "checks": checks, "passed": passed}
    return payload, None, EXIT_OK if passed else EXIT_NUMERIC


def _run_asymptotics(cfg: RunConfig):
    E = CompactSet.from_literal(cfg.set)
    spec = PoleSequenceSpec.from_literal(cfg.atoms, cfg.mode, cfg.x_star)
    options = AsymptoticsOptions()
    options.solve_options = cfg.solve_options()
    options.strict_bound = False
    if cfg.kind == "szego":
        report = szego_widom_modulus(E, spec, cfg.eval, cfg.nmax, residue=cfg.residue, options=options)
    else:
        n_list = cfg.nlist or list(range(1, cfg.nmax + 1))
        report = run_root_asymptotics(E, spec, n_list, cfg.eval, options)
    payload = {"command": "asymptotics", "spec": spec.to_dict(), "report": report.to_dict(),
               "bound_violations": len(report.bound_violations(options.bound_tol))}
    ok = report.complete and not report.bound_violations(options.bound_tol)
    return payload, (list(AsymptoticsRow.COLUMNS), report.table()), EXIT_OK if ok else EXIT_NUMERIC


def _run_selftest(cfg: RunConfig):
    report = run_selftest(cfg.checks)
    return {"command": "selftest", **report.to_dict()}, None, EXIT_OK if report.passed else EXIT_NUMERIC


RUNNERS = {
    "solve": _run_solve,
    "green": _run_green,
    "verify": _run_verify,
    "asymptotics": _run_asymptotics,
    "selftest": _run_selftest,
}


def _emit(cfg: RunConfig, payload, table) -> None:
    if cfg.format == "csv" and table is not None:
        header, rows = table
        text = CSVHandler.save_csv_to_string(header, rows)
    else:
        text = JsonHandler.save_json_to_string(payload)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def run(cfg: RunConfig) -> int:
    """
    Executes a configuration and writes its artifact.

    Returns:
        int: 0 on success, 1 for argument errors, 2 for numeric failures.
    """
    try:
        payload, table, code = RUNNERS[cfg.subcommand](cfg)
    except ConvergenceError as exc:
        logger.error("%s", exc)
        payload = {"command": cfg.subcommand, "error": {"type": "convergence", "message": str(exc),
                                                        "defect": exc.defect, "iterations": exc.iterations}}
        _emit(cfg, payload, None)
        return EXIT_NUMERIC
    except NumericError as exc:
        logger.error("%s", exc)
        _emit(cfg, {"command": cfg.subcommand, "error": {"type": "numeric", "message": str(exc)}}, None)
        return EXIT_NUMERIC
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        _emit(cfg, {"command": cfg.subcommand,
                    "error": {"type": "numeric", "message": f"{type(exc).__name__}: {exc}"}}, None)
        return EXIT_NUMERIC
    except (ArgumentError, DomainError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(cfg, payload, table)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if cfg.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
