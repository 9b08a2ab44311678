"""RFC-4180-style CSV reading and writing.

Double-quoted cells may contain commas, newlines, and doubled quotes
(which unescape to one quote). Line endings may be LF, CRLF, or CR.
Cells are plain text; nothing is type-sniffed here. Fully blank lines
are skipped, which is why the writer quotes a lone empty cell: a
one-column row holding "" must not serialize to an empty line.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import DataError
from .model import RawTable


def parse_csv(text) -> RawTable:
    """Parse CSV text (a string or a readable file object) into a RawTable.

    The first record is the header; every data record must match its
    width or a DataError naming the offending line is raised.
    """
    if hasattr(text, "read"):
        text = text.read()
    records = _split_records(text)
    if not records:
        raise DataError("empty input: expected a header line")
    _, header = records[0]
    rows = []
    for line_no, cells in records[1:]:
        if len(cells) != len(header):
            raise DataError(
                f"ragged row at line {line_no}: expected "
                f"{len(header)} cells, found {len(cells)}"
            )
        rows.append(tuple(cells))
    return RawTable(tuple(header), tuple(rows))


def _split_records(text: str) -> list[tuple[int, list[str]]]:
    """Split text into (starting line number, cells) records."""
    records: list[tuple[int, list[str]]] = []
    cells: list[str] = []
    buf: list[str] = []
    in_quotes = False
    cell_started = False  # a quoted empty cell is a real cell
    line = 1
    start_line = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if in_quotes:
            if ch == '"':
                if i + 1 < n and text[i + 1] == '"':
                    buf.append('"')
                    i += 2
                    continue
                in_quotes = False
            else:
                if ch == "\n":
                    line += 1
                buf.append(ch)
            i += 1
            continue
        if ch == '"':
            in_quotes = True
            cell_started = True
            i += 1
            continue
        if ch == ",":
            cells.append("".join(buf))
            buf.clear()
            cell_started = False
            i += 1
            continue
        if ch in "\r\n":
            if ch == "\r" and i + 1 < n and text[i + 1] == "\n":
                i += 1
            _end_record(records, cells, buf, cell_started, start_line)
            cells, buf = [], []
            cell_started = False
            line += 1
            start_line = line
            i += 1
            continue
        buf.append(ch)
        i += 1
    if in_quotes:
        raise DataError(f"unterminated quote in cell starting at line {start_line}")
    _end_record(records, cells, buf, cell_started, start_line)
    return records


def _end_record(records, cells, buf, cell_started, start_line) -> None:
    # a record with no separators and no text is a blank line: skip it
    if not cells and not buf and not cell_started:
        return
    cells = cells + ["".join(buf)]
    records.append((start_line, cells))


def write_csv(table: RawTable) -> str:
    """Serialize a RawTable with minimal quoting; parse_csv inverts it."""
    lines = [_format_row(table.header)]
    lines.extend(_format_row(row) for row in table.rows)
    return "\n".join(lines) + "\n"


def _format_row(row: Sequence[str]) -> str:
    if len(row) == 1 and row[0] == "":
        return '""'
    return ",".join(_format_cell(c) for c in row)


def _format_cell(cell: str) -> str:
    if any(ch in cell for ch in ',"\r\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def rows_to_csv(header: Iterable[str], rows: Iterable[Sequence[str]]) -> str:
    """Convenience wrapper building the RawTable then serializing it."""
    return write_csv(RawTable(tuple(header), tuple(tuple(r) for r in rows)))
