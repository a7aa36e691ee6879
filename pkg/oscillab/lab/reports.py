"""
Report files.

- ``bounds.csv``: one row per (band, k) report, header
  ``band_lo,band_hi,k,empirical,theoretical,std_err,verdict``
- ``reports.csv``: every bound report with its name and direction
- ``summary.json``: the run summary, keys sorted, no wall time
- ``tallies.csv`` (optional): ``path_id,band_lo,band_hi,upcrossings,alternations``

Floats are written with ``repr`` so identical summaries give identical bytes.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence

from ..mdl import MdlExperimentResult
from .summary import RunSummary

logger = logging.getLogger(__name__)

BOUNDS_HEADER = ("band_lo", "band_hi", "k", "empirical", "theoretical", "std_err", "verdict")
REPORTS_HEADER = (
    "name", "direction", "band_lo", "band_hi", "k",
    "empirical", "theoretical", "std_err", "n", "verdict", "tolerance",
)
TALLY_HEADER = ("path_id", "band_lo", "band_hi", "upcrossings", "alternations")
FLIPS_HEADER = ("trial", "flips")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report: {exc.strerror}", str(path)) from exc
    logger.debug("Wrote %s (%d bytes)", path, len(text))
    return path


def _json_text(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"


def bounds_rows(summary: RunSummary) -> List[List[Any]]:
    return [
        [r.band[0], r.band[1], r.k, r.empirical, r.theoretical, r.std_err, r.verdict.value]
        for r in summary.reports
        if r.band is not None and r.k is not None
    ]


def tally_rows(summary: RunSummary) -> List[List[Any]]:
    """Per-path tallies; alternations use the first α when one is configured."""
    paths = summary.paths
    if paths is None:
        return []
    rows = []
    n = paths.final.size
    for i, band in enumerate(summary.bands):
        for path_id in range(n):
            alternations = int(paths.alternations[0, path_id]) if paths.alternations.shape[0] else None
            rows.append([path_id, band.lo, band.hi, int(paths.upcrossings[i, path_id]), alternations])
    return rows


def emit_reports(summary: RunSummary, out_dir, tallies: bool = False) -> List[Path]:
    """Write the report files for ``summary`` under ``out_dir``.

    Raises:
        OSError: A file cannot be written; the message names the path.
    """
    out = Path(out_dir)
    written = [
        _write(out / "bounds.csv", _csv_text(BOUNDS_HEADER, bounds_rows(summary))),
        _write(out / "reports.csv", _csv_text(REPORTS_HEADER, (
            [r.name, r.direction.value,
             None if r.band is None else r.band[0], None if r.band is None else r.band[1], r.k,
             r.empirical, r.theoretical, r.std_err, r.n, r.verdict.value, r.tolerance]
            for r in summary.reports
        ))),
        _write(out / "summary.json", _json_text(summary.to_dict())),
    ]
    if tallies:
        written.append(_write(out / "tallies.csv", _csv_text(TALLY_HEADER, tally_rows(summary))))
    logger.info("Wrote %d report files to %s", len(written), out)
    return written


def emit_mdl_reports(result: MdlExperimentResult, out_dir) -> List[Path]:
    """``flips.csv`` (trial, flips) and ``mdl_summary.json``."""
    out = Path(out_dir)
    return [
        _write(out / "flips.csv", _csv_text(FLIPS_HEADER, ([i, int(f)] for i, f in enumerate(result.flips)))),
        _write(out / "mdl_summary.json", _json_text(result.to_summary())),
    ]
