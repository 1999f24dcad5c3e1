"""CSV ingestion for samples, score columns and rank files."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptySample, ParseError


@dataclass(frozen=True)
class Column:
    values: list[float]
    scores: list[float] | None
    header: list[str] | None
    lines: list[int]  # 1-based file line of each data row


def _parse_float(text: str) -> float:
    v = float(text.strip())
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {text!r}")
    return v


def read_column(path, *, want_scores: bool = False) -> Column:
    """Read a numeric CSV: values in column 1, optional scores in column 2.

    A first row whose first field is not numeric is taken as a header.
    Blank lines are skipped.
    """
    path = Path(path)
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=path) from None
    values: list[float] = []
    scores: list[float] = []
    lines: list[int] = []
    header = None
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            try:
                v = _parse_float(row[0])
            except ValueError:
                if header is None and not values:
                    header = [f.strip() for f in row]
                    continue
                raise ParseError(f"not a number: {row[0]!r}", path=path, line=lineno) from None
            if want_scores:
                if len(row) < 2 or not row[1].strip():
                    raise ParseError("missing score column", path=path, line=lineno)
                try:
                    scores.append(_parse_float(row[1]))
                except ValueError:
                    raise ParseError(f"score is not a number: {row[1]!r}", path=path, line=lineno) from None
            values.append(v)
            lines.append(lineno)
    if not values:
        raise EmptySample(f"{path}: no data rows")
    return Column(values, scores if want_scores else None, header, lines)


def read_rank_file(path) -> list[int]:
    """One 0-based test-row index per line, most preferred first."""
    path = Path(path)
    out = []
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=path) from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        try:
            out.append(int(s))
        except ValueError:
            raise ParseError(f"not an integer row index: {s!r}", path=path, line=lineno) from None
    return out
