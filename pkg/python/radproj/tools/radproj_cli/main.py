# -*- coding: utf-8 -*-

# This code is part of radproj.
#
# (C) Copyright 2026 The radproj authors. All Rights Reserved.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""radproj - Command to compute moment and tail bounds of Rademacher projections"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from logging import DEBUG, ERROR, INFO, getLogger

from dotenv import load_dotenv
from radproj import Settings
from radproj.bounds import check_eps_grid, compare_curves
from radproj.dataio import DataFormatError, read_vectors, vector_stats, write_csv
from radproj.majorization import WeightProfile
from radproj.moments import chaos_moment_table, sparse_distortion_moment
from radproj.projections import (
    SWEEP_QUANTILES,
    Scheme,
    dataset_distortion_sweep,
    empirical_ccdf,
    flat_vector,
    scheme_for_density,
)
from radproj.verify import VerifyConfig, run_verification

load_dotenv()

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _get_loglevel() -> int:
    """Converts RADPROJ_DEBUG to python logging level. Default is INFO."""
    radproj_debug = os.environ.get("RADPROJ_DEBUG")
    if radproj_debug is None:
        return INFO

    level = INFO
    try:
        level_ivalue = int(radproj_debug)
    except ValueError:
        return level

    if level_ivalue == 2:
        # quiet
        level = ERROR
    elif level_ivalue >= 4:
        level = DEBUG

    return level


logging.basicConfig(
    stream=sys.stderr,
    level=_get_loglevel(),
    format="%(asctime)s %(levelname)s %(message)s",
)
logger = getLogger(__name__)


def parse_eps_grid(text: str) -> list[Fraction]:
    """Parse ``a:b:step`` into ``a, a + step, ...`` up to and including ``b``.

    Endpoints are read as exact rationals so decimal steps do not drift.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:step, got {text!r}")
    try:
        start, stop, step = (Fraction(part) for part in parts)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"invalid eps grid {text!r}") from err
    if step <= 0:
        raise argparse.ArgumentTypeError("eps grid step must be positive")
    if stop < start:
        raise argparse.ArgumentTypeError("eps grid end is below its start")
    count = int((stop - start) / step)
    return [start + k * step for k in range(count + 1)]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from err


@dataclass
class RunConfig:
    """Everything a subcommand needs, resolved from the command line."""

    subcommand: str
    seed: int = 0
    m: int | None = None
    K: list[int] = field(default_factory=list)
    q: list[int] = field(default_factory=list)
    qmax: int | None = None
    eps_grid: list[Fraction] = field(default_factory=list)
    trials: int = 1000
    densities: list[float] = field(default_factory=list)
    scheme: str | None = None
    n: int | None = None
    pairs: int = 200
    profiles: int = 50
    input: str | None = None
    output: str | None = None
    exact: bool = False
    has_header: bool = False
    by_rows: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Collect parsed arguments, merging ``--eps-grid`` and ``--eps``."""
        eps = list(getattr(args, "eps_grid", None) or []) + list(getattr(args, "eps", None) or [])
        if eps:
            eps = sorted(set(eps))
        return cls(
            subcommand=args.subcommand,
            seed=args.seed,
            m=getattr(args, "m", None),
            K=list(getattr(args, "K", None) or []),
            q=list(getattr(args, "q", None) or []),
            qmax=getattr(args, "qmax", None),
            eps_grid=eps,
            trials=getattr(args, "trials", 1000),
            densities=list(getattr(args, "density", None) or []),
            scheme=getattr(args, "scheme", None),
            n=getattr(args, "n", None),
            pairs=getattr(args, "pairs", 200),
            profiles=getattr(args, "profiles", 50),
            input=getattr(args, "input", None),
            output=args.output,
            exact=getattr(args, "exact", False),
            has_header=getattr(args, "has_header", False),
            by_rows=getattr(args, "by_rows", False),
        )


class App:
    """Application running one radproj subcommand"""

    def __init__(self, config: RunConfig, settings: Settings):
        """Constructs an application.

        Args:
            config(RunConfig): Resolved command line.
            settings(Settings): Resource limits, already overridden by flags.
        """
        self._config = config
        self._settings = settings

    def _comments(self, **extra) -> list[str]:
        config = self._config
        lines = [f"radproj {config.subcommand}", f"seed={config.seed}"]
        lines.extend(f"{key}={value}" for key, value in extra.items())
        return lines

    def _require(self, name: str):
        value = getattr(self._config, name)
        if value is None or value == []:
            raise ValueError(f"--{name.replace('_', '-')} is required for {self._config.subcommand}")
        return value

    def cmd_moments(self) -> int:
        """One row per K, one column per q of the extreme chaos moments.

        With ``--density`` the rows run over (p, K) and hold the distortion
        moments of an ``--m``-row sparse projection of a flat K-sparse input.
        """
        config = self._config
        Ks, qs = self._require("K"), self._require("q")
        if any(K < 1 for K in Ks) or any(q < 0 for q in qs):
            raise ValueError("K must be positive and q nonnegative")
        if config.densities:
            return self._density_moments(Ks, qs)
        rows = []
        exact_flags = set()
        for K in Ks:
            table = chaos_moment_table(K, max(max(qs), 1), True if config.exact else None)
            exact_flags.add(table.exact)
            rows.append([K, *(table[q] for q in qs)])
        mode = "exact" if all(exact_flags) else "float"
        write_csv(
            rows,
            config.output,
            header=["n", *(str(q) for q in qs)],
            comments=self._comments(mode=mode),
            exact=config.exact,
        )
        return EXIT_OK

    def _density_moments(self, Ks: list[int], qs: list[int]) -> int:
        config = self._config
        m = 1 if config.m is None else config.m
        if m < 1:
            raise ValueError("m must be positive")
        rows = []
        for p in config.densities:
            for K in Ks:
                profile = WeightProfile.flat(K)
                values = [sparse_distortion_moment(m, p, profile, q) for q in qs]
                rows.append([float(p), K, *values])
        write_csv(
            rows,
            config.output,
            header=["p", "n", *(str(q) for q in qs)],
            comments=self._comments(m=m, mode="exact"),
            exact=config.exact,
        )
        return EXIT_OK

    def cmd_tail(self) -> int:
        """Sharp bounds per K next to the reference curves."""
        config = self._config
        m, Ks = self._require("m"), self._require("K")
        grid = check_eps_grid(self._require("eps_grid"))
        qmax = config.qmax or self._settings.qmax
        exact = True if config.exact else None
        sharp_curves = []
        reference = None
        for K in Ks:
            curves = compare_curves(m, K, grid, qmax, exact)
            sharp_curves.append(curves[0])
            reference = curves[1:]
        curves = sharp_curves + reference
        rows = [
            [float(eps), *(curve.values[k] for curve in curves)] for k, eps in enumerate(grid)
        ]
        mode = "exact" if all(c.metadata["exact"] for c in sharp_curves) else "float"
        write_csv(
            rows,
            config.output,
            header=["eps", *(curve.label for curve in curves)],
            comments=self._comments(m=m, qmax=qmax, mode=mode),
        )
        return EXIT_OK

    def _schemes(self) -> list[tuple[Scheme, float]]:
        config = self._config
        if config.densities:
            densities = config.densities
        elif config.scheme is not None and Scheme.parse(config.scheme) is Scheme.SPARSE:
            densities = [0.1]
        else:
            densities = list(self._settings.densities)
        if config.scheme is None:
            return [(scheme_for_density(p), p) for p in densities]
        return [(Scheme.parse(config.scheme), p) for p in densities]

    def cmd_simulate(self) -> int:
        """Empirical CCDF of a flat vector, or a summary sweep over dataset columns."""
        config = self._config
        m = self._require("m")
        schemes = self._schemes()
        if config.input:
            return self._simulate_dataset(m, schemes)
        n, Ks = self._require("n"), self._require("K")
        if len(Ks) > 1:
            raise ValueError("simulate takes a single --K")
        grid = check_eps_grid(self._require("eps_grid"))
        x = flat_vector(n, Ks[0])
        curves = [
            empirical_ccdf(
                n,
                Ks[0],
                m,
                scheme,
                p,
                config.trials,
                grid,
                config.seed,
                x=x,
                workers=self._settings.workers,
            )
            for scheme, p in schemes
        ]
        rows = [
            [float(eps), *(curve.values[k] for curve in curves)] for k, eps in enumerate(grid)
        ]
        write_csv(
            rows,
            config.output,
            header=["eps", *(f"p_{p!r}" for _, p in schemes)],
            comments=self._comments(n=n, K=Ks[0], m=m, trials=config.trials),
        )
        return EXIT_OK

    def _simulate_dataset(self, m: int, schemes: list[tuple[Scheme, float]]) -> int:
        config = self._config
        for scheme, p in schemes:
            if scheme != scheme_for_density(p):
                raise ValueError(f"density {p} does not match scheme {scheme.value}")
        vectors = read_vectors(config.input, config.has_header, config.by_rows)
        sweep = dataset_distortion_sweep(
            vectors,
            m,
            [p for _, p in schemes],
            config.trials,
            config.seed,
            self._settings.workers,
        )
        rows = [
            [row.column, row.K, row.scheme.value, row.p, row.mean_abs, row.rms, *row.quantiles]
            for row in sweep.rows
        ]
        write_csv(
            rows,
            config.output,
            header=[
                "column",
                "K",
                "scheme",
                "p",
                "mean_abs",
                "rms",
                *(f"q{round(level * 100)}" for level in SWEEP_QUANTILES),
            ],
            comments=self._comments(
                input=config.input, m=m, trials=config.trials, skipped=sweep.skipped
            ),
        )
        return EXIT_OK

    def cmd_dataset_stats(self) -> int:
        """Per-vector K, norm and flatness ratio."""
        config = self._config
        vectors = read_vectors(self._require("input"), config.has_header, config.by_rows)
        rows = [[s.column, s.K, s.norm, s.flatness] for s in vector_stats(vectors)]
        write_csv(
            rows,
            config.output,
            header=["column", "K", "norm", "flatness"],
            comments=self._comments(input=config.input),
        )
        return EXIT_OK

    def cmd_verify(self) -> int:
        """Run the oracle suites; exit code 1 when any check fails."""
        config = self._config
        verify_config = VerifyConfig(
            kmax=max(config.K) if config.K else 12,
            qmax=max(config.q) if config.q else 10,
            pairs=config.pairs,
            profiles=config.profiles,
            seed=config.seed,
        )
        report = run_verification(verify_config, self._settings)
        lines = [f"# {line}" for line in self._comments()] + report.lines()
        text = "\n".join(lines) + "\n"
        if config.output:
            with open(config.output, "w", encoding="utf-8") as output_file:
                output_file.write(text)
        else:
            sys.stdout.write(text)
        if not report.ok:
            logger.error("verification failed")
            return EXIT_VERIFY_FAILED
        return EXIT_OK

    def run(self) -> int:
        """app main()"""
        handlers = {
            "moments": self.cmd_moments,
            "tail": self.cmd_tail,
            "simulate": self.cmd_simulate,
            "dataset-stats": self.cmd_dataset_stats,
            "verify": self.cmd_verify,
        }
        return handlers[self._config.subcommand]()


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Base random seed")
    common.add_argument("--output", help="Write CSV to <file> instead of stdout")
    common.add_argument("--enum-cap", type=int, help="Largest support size enumerated")
    common.add_argument("--atom-cap", type=int, help="Largest exact law size")
    common.add_argument("--workers", type=int, help="Worker threads")

    parser = argparse.ArgumentParser(
        prog="radproj",
        description="radproj - Command to compute moment and tail bounds of Rademacher projections",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    moments = sub.add_parser("moments", parents=[common], help="Extreme chaos moments")
    moments.add_argument("--K", type=int, action="append", help="Sparsity (repeatable)")
    moments.add_argument("--q", type=int, action="append", help="Moment order (repeatable)")
    moments.add_argument("--exact", action="store_true", help="Add exact p/q columns")
    moments.add_argument(
        "--density", type=_fraction, action="append", help="Sparse projection density (repeatable)"
    )
    moments.add_argument("--m", type=int, help="Rows averaged with --density, 1 by default")

    tail = sub.add_parser("tail", parents=[common], help="Tail-bound comparison")
    tail.add_argument("--m", type=int, help="Embedding dimension")
    tail.add_argument("--K", type=int, action="append", help="Sparsity (repeatable)")
    tail.add_argument("--eps-grid", type=parse_eps_grid, help="Grid a:b:step")
    tail.add_argument("--eps", type=_fraction, action="append", help="Threshold (repeatable)")
    tail.add_argument("--qmax", type=int, help="Largest even moment order")
    tail.add_argument("--exact", action="store_true", help="Force exact moment tables")

    simulate = sub.add_parser("simulate", parents=[common], help="Monte Carlo distortion")
    simulate.add_argument("--n", type=int, help="Input dimension")
    simulate.add_argument("--K", type=int, action="append", help="Sparsity of the flat input")
    simulate.add_argument("--m", type=int, help="Embedding dimension")
    simulate.add_argument("--trials", type=int, default=1000, help="Number of matrices")
    simulate.add_argument("--density", type=float, action="append", help="Density p (repeatable)")
    simulate.add_argument("--scheme", choices=["dense", "sparse"], help="Entry distribution")
    simulate.add_argument("--eps-grid", type=parse_eps_grid, help="Grid a:b:step")
    simulate.add_argument("--eps", type=_fraction, action="append", help="Threshold (repeatable)")
    simulate.add_argument("--input", help="Dataset file (.mtx or CSV) for the column sweep")
    simulate.add_argument("--has-header", action="store_true", help="CSV has a header row")
    simulate.add_argument("--by-rows", action="store_true", help="CSV vectors are rows")

    stats = sub.add_parser("dataset-stats", parents=[common], help="Sparsity and spread")
    stats.add_argument("--input", help="Dataset file (.mtx or CSV)")
    stats.add_argument("--has-header", action="store_true", help="CSV has a header row")
    stats.add_argument("--by-rows", action="store_true", help="CSV vectors are rows")

    verify = sub.add_parser("verify", parents=[common], help="Exact oracle checks")
    verify.add_argument("--K", type=int, action="append", help="Largest sparsity checked")
    verify.add_argument("--q", type=int, action="append", help="Largest moment order checked")
    verify.add_argument("--pairs", type=int, default=200, help="Robin-Hood pairs")
    verify.add_argument("--profiles", type=int, default=50, help="Domination profiles")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    args = build_parser().parse_args(argv)
    try:
        settings = Settings.from_env().override(
            enum_cap=args.enum_cap, atom_cap=args.atom_cap, workers=args.workers
        )
        config = RunConfig.from_args(args)
        return App(config, settings).run()
    except DataFormatError as err:
        logger.error("%s", err)
        return EXIT_IO
    except OSError as err:
        logger.error("%s", err)
        return EXIT_IO
    except ValueError as err:
        logger.error("%s", err)
        return EXIT_USAGE


def run() -> None:
    """Entrypoint of the radproj command"""
    sys.exit(main())


if __name__ == "__main__":
    run()
