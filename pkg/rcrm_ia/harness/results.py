#!/usr/bin/env python3

"""
Result Table Module

This module writes aggregated result rows as CSV or JSON and reads them
back. Reals are written with 12 significant digits.
"""

import csv
import io
import json
import logging
import os
from typing import List, Sequence

from rcrm_ia.errors import InvalidConfig, PreconditionViolation
from rcrm_ia.schemas.experiment import RESULT_COLUMNS, ResultRow
from rcrm_ia.utils.logging_utils import log_file_operation

logger = logging.getLogger(__name__)

_REAL_COLUMNS = ("P_db", "mean_sum_rate", "std_sum_rate", "mean_user_dims")


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _record(row: ResultRow) -> dict:
    data = row.model_dump()
    return {k: (_fmt(data[k]) if k in _REAL_COLUMNS else data[k]) for k in RESULT_COLUMNS}


def render_results(rows: Sequence[ResultRow], fmt: str) -> str:
    """Render rows as CSV (header first) or as a JSON array."""
    if not rows:
        raise PreconditionViolation("no result rows to emit")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(RESULT_COLUMNS), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(_record(row))
        return buf.getvalue()
    if fmt == "json":
        # Numbers stay numbers; 12-digit rounding goes through the string form.
        records = []
        for row in rows:
            rec = _record(row)
            for k in _REAL_COLUMNS:
                rec[k] = float(rec[k])
            records.append(rec)
        return json.dumps(records, indent=2) + "\n"
    raise InvalidConfig(f"unknown result format {fmt!r}")


def emit_results(rows: Sequence[ResultRow], fmt: str, path: str) -> None:
    """Write the result table to ``path``.

    Raises:
        PreconditionViolation: if ``rows`` is empty.
        OSError: if the file cannot be written; the message names the path.
    """
    text = render_results(rows, fmt)
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as exc:
        log_file_operation("write", path, False, {"error": str(exc)})
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    log_file_operation("write", path, True, {"rows": len(rows), "format": fmt})


def parse_results(path: str) -> List[ResultRow]:
    """Read a table written by :func:`emit_results`; the format is sniffed from the content.

    Raises:
        FileNotFoundError: if ``path`` does not exist.
        InvalidConfig: if the content is not a result table.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"result file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        if text.lstrip().startswith("["):
            records = json.loads(text)
        else:
            reader = csv.DictReader(io.StringIO(text))
            if tuple(reader.fieldnames or ()) != RESULT_COLUMNS:
                raise ValueError(f"unexpected header {reader.fieldnames}")
            records = list(reader)
        return [ResultRow.model_validate(r) for r in records]
    except (ValueError, TypeError) as exc:
        raise InvalidConfig(f"{path} is not a result table: {exc}") from exc
