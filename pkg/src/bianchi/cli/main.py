"""Command-line driver for the Bianchi pipeline.

Subcommands:
 - polyhedron: compute (or load) the fundamental polyhedron of one field and store it.
 - homology: run the full pipeline for one field and print its table row.
 - table: print the result table for every field up to a discriminant bound.

Results are cached in a directory database (``--db``, default from the
``BIANCHI_DB`` environment variable). Batch runs resume from valid records
and can spread fields over a pool of worker processes.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from tqdm import tqdm

from bianchi.arithmetic.field import FieldCtx, fields_up_to
from bianchi.core.models import PRUNE_RULES, RunConfig, TableRow, default_db_path
from bianchi.exporters.base import ExporterFactory
from bianchi.geometry.swan import Polyhedron, compute_polyhedron
from bianchi.homology.invariants import audit_polyhedron, run_pipeline
from bianchi.storage.database import Database
from bianchi.storage.paths import POLYHEDRON_FILE, artifact_path
from bianchi.utils.exceptions import (
    GeometryError,
    IdentificationError,
    InvalidFieldError,
    InvariantViolationError,
    UnmatchedCellError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_INTERNAL_ASSERTION = 3

FILE_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

INTERNAL_ERRORS = (GeometryError, IdentificationError, UnmatchedCellError, InvariantViolationError)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--db", type=Path, default=None, help="Database directory (default: $BIANCHI_DB or ./bianchi-db)")
    common.add_argument(
        "--prune-rule", choices=PRUNE_RULES, default="three-vertex", help="Erasure rule for hemisphere cells"
    )
    common.add_argument("--no-cache", action="store_true", help="Recompute even if a valid record exists")
    common.add_argument("--log-file", type=Path, help="Path to log file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Increase verbosity (can repeat)")
    common.add_argument("-q", "--quiet", action="store_true", help="Quiet mode: only warnings/errors")

    parser = argparse.ArgumentParser(
        prog="bianchi", description="Fundamental polyhedra and homology of Bianchi groups SL2(O_-m)"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    polyhedron = subparsers.add_parser("polyhedron", parents=[common], help="Compute and store the polyhedron of one field")
    polyhedron.add_argument("--m", type=int, required=True, help="Square-free m defining Q(sqrt(-m))")

    homology = subparsers.add_parser("homology", parents=[common], help="Compute the table row of one field")
    homology.add_argument("--m", type=int, required=True, help="Square-free m defining Q(sqrt(-m))")
    homology.add_argument("--json", action="store_true", help="Print JSON instead of a text table")

    table = subparsers.add_parser("table", parents=[common], help="Compute the table for all fields up to |Δ| <= DMAX")
    table.add_argument("--dmax", type=int, required=True, help="Largest absolute discriminant")
    table.add_argument("--json", action="store_true", help="Print JSON instead of a text table")
    table.add_argument("--jobs", type=int, default=1, help="Worker processes (1 runs in-process)")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def setup_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.quiet:
        level = logging.WARNING
    elif args.verbose >= 2:
        level = logging.DEBUG

    handlers: list[logging.Handler] = [
        RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True, markup=False)
    ]
    if args.log_file:
        args.log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(args.log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(FILE_LOG_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(level=level, format="%(message)s", datefmt="[%X]", handlers=handlers, force=True)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Build and validate the run configuration.

    Raises:
        InvalidFieldError: If an m value is excluded or not square-free
        ValueError: If another option is out of range
    """
    if args.command == "table":
        if args.dmax < 0:
            raise ValueError(f"--dmax must be nonnegative, got {args.dmax}")
        m_values = tuple(fields_up_to(args.dmax))
    else:
        m_values = (args.m,)
    return RunConfig(
        m_values=m_values,
        db_path=args.db or default_db_path(),
        prune_rule=args.prune_rule,
        jobs=getattr(args, "jobs", 1),
        use_cache=not args.no_cache,
        output_format="json" if getattr(args, "json", False) else "text",
    )


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, (InvalidFieldError, ValueError)):
        return EXIT_INVALID_INPUT
    if isinstance(error, INTERNAL_ERRORS):
        return EXIT_INTERNAL_ASSERTION
    return EXIT_FAILURE


def _load_or_compute_polyhedron(db: Database, ctx: FieldCtx, prune_rule: str, use_cache: bool) -> Polyhedron:
    """Stored polyhedron whose hash matches the field's record, else a fresh one."""
    if use_cache:
        record = db.load_record(ctx.m)
        stored = None if record is None else db.load_polyhedron(ctx.m, expected_sha256=record.polyhedron_sha256)
        if stored is not None and stored.prune_rule == prune_rule:
            logger.info(f"m={ctx.m}: reusing stored polyhedron")
            return stored
        if record is not None and stored is None:
            logger.warning(f"m={ctx.m}: stored polyhedron does not match its record, recomputing")
    return compute_polyhedron(ctx, prune_rule)


def cmd_polyhedron(config: RunConfig) -> Path:
    """Compute, audit and store the polyhedron of one field.

    Returns:
        Path of the polyhedron file
    """
    (m,) = config.m_values
    ctx = FieldCtx(m)
    db = Database(config.db_path)
    polyhedron = _load_or_compute_polyhedron(db, ctx, config.prune_rule, config.use_cache)
    audit_polyhedron(polyhedron)
    digest = db.store_polyhedron(polyhedron)
    stats = polyhedron.stats()
    logger.info(
        f"m={m}: {stats.hemispheres} hemispheres, {stats.vertices} vertices, "
        f"max norm {stats.max_norm}, min height^2 {stats.min_sq_height} (sha256 {digest[:12]})"
    )
    return artifact_path(config.db_path, m, POLYHEDRON_FILE)


def compute_row(m: int, db_path: Path, prune_rule: str, use_cache: bool, update_index: bool = True) -> TableRow:
    """Table row of one field, from a valid record or a fresh pipeline run.

    Runs in worker processes, so it takes plain arguments and opens its own
    database handle.
    """
    db = Database(db_path)
    if use_cache:
        record = db.valid_record(m, prune_rule)
        if record is not None:
            logger.info(f"m={m}: using cached record")
            return record.row
    ctx = FieldCtx(m)
    polyhedron = _load_or_compute_polyhedron(db, ctx, prune_rule, use_cache)
    result = run_pipeline(ctx, prune_rule, polyhedron=polyhedron)
    db.store_result(result, update_index=update_index)
    timings = ", ".join(f"{stage} {seconds:.2f}s" for stage, seconds in result.timings.items())
    logger.info(f"m={m}: finished ({timings})")
    return result.row


def cmd_homology(config: RunConfig) -> TableRow:
    (m,) = config.m_values
    return compute_row(m, config.db_path, config.prune_rule, config.use_cache)


def _row_task(m: int, db_path: Path, prune_rule: str, use_cache: bool) -> tuple[int, TableRow | None, str | None, int]:
    try:
        return m, compute_row(m, db_path, prune_rule, use_cache, update_index=False), None, EXIT_OK
    except Exception as e:
        logger.debug(f"m={m}: failed", exc_info=True)
        return m, None, f"{type(e).__name__}: {e}", exit_code_for(e)


def cmd_table(config: RunConfig, show_progress: bool = True) -> tuple[list[TableRow], dict[int, str], int]:
    """Rows for every configured field; a failing field does not stop the batch.

    Returns:
        Rows, error message per failed m, and the worst exit code of any field
    """
    rows: list[TableRow] = []
    failures: dict[int, str] = {}
    worst = EXIT_OK
    tasks = [(m, config.db_path, config.prune_rule, config.use_cache) for m in config.m_values]

    if config.jobs == 1 or len(tasks) <= 1:
        outcomes = (_row_task(*task) for task in tasks)
        wrapper = tqdm(outcomes, total=len(tasks), desc="Fields", unit="field") if show_progress else outcomes
        results = list(wrapper)
    else:
        results = []
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(_row_task, *task) for task in tasks]
            done = as_completed(futures)
            wrapper = tqdm(done, total=len(futures), desc="Fields", unit="field") if show_progress else done
            for future in wrapper:
                results.append(future.result())

    for m, row, error, code in results:
        if row is not None:
            rows.append(row)
        else:
            failures[m] = error or "unknown error"
            worst = max(worst, code)
            logger.error(f"m={m}: {failures[m]}")

    computed = [row.m for row in rows]
    if computed:
        Database(config.db_path).add_to_index(computed)
    logger.info(f"Table: {len(rows)} rows, {len(failures)} failures")
    return rows, failures, worst


def run(args: argparse.Namespace) -> int:
    """Runs one subcommand with the given arguments."""
    setup_logging(args)
    try:
        config = config_from_args(args)
        if args.command == "polyhedron":
            path = cmd_polyhedron(config)
            sys.stdout.write(f"{path}\n")
            return EXIT_OK

        exporter = ExporterFactory.create_exporter(config.output_format)
        if args.command == "homology":
            sys.stdout.write(exporter.export([cmd_homology(config)]))
            return EXIT_OK

        rows, failures, code = cmd_table(config, show_progress=not args.quiet)
        sys.stdout.write(exporter.export(rows, failures))
        return code
    except (InvalidFieldError, ValueError) as e:
        logger.error(str(e))
        return EXIT_INVALID_INPUT
    except INTERNAL_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INTERNAL_ASSERTION
    except Exception as e:
        logger.exception(f"Unhandled error: {e}")
        return EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    return run(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
