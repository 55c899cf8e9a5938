"""Command-line front end. Every command writes CSV.

Exit codes: 0 success, 1 usage or parameter error, 2 data or parse error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path as FilePath

import numpy as np

from . import analysis
from .errors import FitError, ParameterError, PreconditionError
from .optics import DetectionPattern
from .wavepacket import DEFAULT_DELTA_OMEGA, DEFAULT_OMEGA0, WavepacketSpec

FS = 1e-15

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

# (n, m, pattern) per panel; 3f takes n and pattern from the command line.
FIGURES = {
    "2e": (1, 0, DetectionPattern(0, 1)),
    "2j": (2, 1, DetectionPattern(2, 1)),
    "3a": (1, 0, DetectionPattern(0, 1)),
    "3b": (2, 1, DetectionPattern(2, 1)),
    "3c": (3, 1, DetectionPattern(2, 2)),
    "3d": (3, 2, DetectionPattern(4, 1)),
    "3e": (5, 3, DetectionPattern(6, 2)),
    "3f": None,
}
VISIBILITY_FIGURES = {"2e", "2j"}
QUARTZ_GRID_FS = (0.0, 770.0, 110.0)
SURFACE_GRID_FS = (0.0, 1250.0, 25.0)


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    n: int | None = None
    m: int | None = None
    pattern: DetectionPattern | None = None
    tau_fs: float = 0.0
    omega0: float = DEFAULT_OMEGA0
    delta_omega: float = DEFAULT_DELTA_OMEGA
    theta_samples: int = 256
    tau_grid: tuple[float, float, float] | None = None
    output_path: str | None = None

    @property
    def spec(self) -> WavepacketSpec:
        return WavepacketSpec(self.omega0, self.delta_omega)

    def taus_fs(self) -> list[float]:
        start, stop, step = self.tau_grid
        if step <= 0 or stop < start or start < 0:
            raise ParameterError("tau grid needs 0 <= start <= stop and step > 0")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]


def _pattern(text):
    try:
        return DetectionPattern.parse(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _common(p, needs_state=True):
    if needs_state:
        p.add_argument("--n", type=int, required=True, help="photons in the larger branch")
        p.add_argument("--m", type=int, required=True, help="photons in the smaller branch")
        p.add_argument("--pattern", type=_pattern, required=True, help="detection pattern m,n")
    p.add_argument("--omega0", type=float, default=DEFAULT_OMEGA0, help="rad/s")
    p.add_argument("--delta-omega", type=float, default=DEFAULT_DELTA_OMEGA, help="rad/s")
    p.add_argument("--theta-samples", type=int, default=256)
    p.add_argument("--output", "-o", help="write CSV here instead of stdout")


def _grid(p, default):
    p.add_argument("--tau-start", type=float, default=default[0], help="fs")
    p.add_argument("--tau-stop", type=float, default=default[1], help="fs")
    p.add_argument("--tau-step", type=float, default=default[2], help="fs")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockfringe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fringe", help="detection probability versus interferometer phase")
    _common(p)
    p.add_argument("--tau-fs", type=float, default=0.0)
    p.add_argument("--theta", type=float, help="evaluate a single phase (rad)")

    p = sub.add_parser("vis-curve", help="visibility versus delay")
    _common(p)
    _grid(p, QUARTZ_GRID_FS)

    p = sub.add_parser("figure", help="reproduce a theory panel")
    p.add_argument("figure_id", choices=sorted(FIGURES))
    p.add_argument("--n", type=int, help="photon number (required for 3f)")
    p.add_argument("--pattern", type=_pattern, help="detection pattern (required for 3f)")
    _common(p, needs_state=False)
    _grid(p, (None, None, None))

    p = sub.add_parser("fit", help="least-squares sinusoid fit of theta_rad,counts[,stddev]")
    p.add_argument("input")
    p.add_argument("--harmonic", type=int, default=1)
    p.add_argument("--output", "-o", help="fitted-curve CSV (default: <input>_fit.csv)")
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(
        n=getattr(args, "n", None), m=getattr(args, "m", None),
        pattern=getattr(args, "pattern", None), tau_fs=getattr(args, "tau_fs", 0.0),
        omega0=getattr(args, "omega0", DEFAULT_OMEGA0),
        delta_omega=getattr(args, "delta_omega", DEFAULT_DELTA_OMEGA),
        theta_samples=getattr(args, "theta_samples", 256), output_path=args.output)
    if hasattr(args, "tau_step"):
        cfg.tau_grid = (args.tau_start, args.tau_stop, args.tau_step)
    return cfg


def _write_csv(path, header, rows, stdout):
    if path is None:
        writer = csv.writer(stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _f(x) -> float:
    # plain float: csv writes repr, the shortest string that round-trips
    return float(x)


def cmd_fringe(cfg: RunConfig, theta: float | None = None):
    spec, tau = cfg.spec, cfg.tau_fs * FS
    if theta is not None:
        p = analysis.probability_at(cfg.n, cfg.m, cfg.pattern, tau, theta, spec)
        return ["theta_rad", "probability"], [[_f(theta), _f(p)]]
    scan = analysis.fringe_scan(cfg.n, cfg.m, cfg.pattern, tau, spec, cfg.theta_samples)
    return (["theta_rad", "probability"],
            [[_f(t), _f(p)] for t, p in zip(scan.thetas, scan.probabilities)])


def cmd_vis_curve(cfg: RunConfig):
    taus = cfg.taus_fs()
    points = analysis.visibility_curve(cfg.n, cfg.m, cfg.pattern, [t * FS for t in taus],
                                       cfg.spec, cfg.theta_samples)
    rows = [[_f(t), _f(p.visibility), _f(p.signed_contrast), p.dominant_harmonic]
            for t, p in zip(taus, points)]
    return ["tau_fs", "visibility", "signed_contrast", "dominant_harmonic"], rows


def cmd_figure(figure_id: str, cfg: RunConfig):
    preset = FIGURES.get(figure_id, ())
    if preset == ():
        raise ParameterError(f"unknown figure {figure_id!r}")
    if preset is None:
        if cfg.n is None or cfg.pattern is None:
            raise ParameterError("figure 3f needs --n and --pattern")
        preset = (cfg.n, 0, cfg.pattern)
    cfg.n, cfg.m, cfg.pattern = preset
    default = QUARTZ_GRID_FS if figure_id in VISIBILITY_FIGURES else SURFACE_GRID_FS
    given = cfg.tau_grid or (None, None, None)
    cfg.tau_grid = tuple(d if g is None else g for g, d in zip(given, default))
    if figure_id in VISIBILITY_FIGURES:
        return cmd_vis_curve(cfg)
    rows = []
    for t in cfg.taus_fs():
        scan = analysis.fringe_scan(cfg.n, cfg.m, cfg.pattern, t * FS, cfg.spec,
                                    cfg.theta_samples)
        rows.extend([_f(t), _f(th), _f(p)] for th, p in zip(scan.thetas, scan.probabilities))
    return ["tau_fs", "theta_rad", "probability"], rows


def read_fit_csv(path):
    """Parse ``theta_rad,counts[,stddev]``; raises :class:`DataError` on bad input."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header[:2] != ["theta_rad", "counts"] or len(header) > 3 or \
                    (len(header) == 3 and header[2] != "stddev"):
                raise DataError(f"expected header theta_rad,counts[,stddev], got {header}")
            rows = [r for r in reader if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(str(exc)) from None
    try:
        data = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise DataError(f"non-numeric value: {exc}") from None
    if data.ndim != 2 or len(rows) < 4 or data.shape[1] != len(header):
        raise DataError(f"need at least 4 complete rows of {len(header)} columns")
    if not np.all(np.isfinite(data)):
        raise DataError("non-finite value in input")
    stddev = data[:, 2] if data.shape[1] == 3 else None
    return data[:, 0], data[:, 1], stddev


def cmd_fit(path: str, harmonic: int = 1, output: str | None = None):
    """Fit the file; return the text report and the path of the fitted-curve CSV."""
    thetas, counts, stddev = read_fit_csv(path)
    try:
        fit = analysis.fit_sinusoid(thetas, counts, stddev, harmonic)
    except FitError as exc:
        raise DataError(f"degenerate fit: {exc}") from None
    src = FilePath(path)
    out = FilePath(output) if output else src.with_name(src.stem + "_fit.csv")
    _write_csv(out, ["theta_rad", "counts", "fitted"],
               [[_f(t), _f(c), _f(fit(t))] for t, c in zip(thetas, counts)], None)
    lines = [
        f"harmonic: {harmonic}",
        f"offset: {fit.offset!r}",
        f"amplitude: {fit.amplitude!r}",
        f"phase: {fit.phase!r}",
        f"visibility: {fit.visibility!r}",
        f"residual: {fit.residual!r}",
    ]
    if fit.negative_offset:
        lines.append("warning: fitted offset is negative")
    return "\n".join(lines) + "\n", out


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fit":
            report, _ = cmd_fit(args.input, args.harmonic, args.output)
            stdout.write(report)
            return EXIT_OK
        cfg = _config(args)
        if cfg.theta_samples < analysis.MIN_SCAN_SAMPLES:
            raise ParameterError(f"--theta-samples must be >= {analysis.MIN_SCAN_SAMPLES}")
        if args.command == "fringe":
            header, rows = cmd_fringe(cfg, args.theta)
        elif args.command == "vis-curve":
            header, rows = cmd_vis_curve(cfg)
        else:
            header, rows = cmd_figure(args.figure_id, cfg)
        _write_csv(cfg.output_path, header, rows, stdout)
    except (ParameterError, PreconditionError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except DataError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
