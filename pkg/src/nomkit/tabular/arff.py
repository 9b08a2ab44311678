"""ARFF reading and writing for nominal and numeric attributes.

Supported dialect: ``@relation``, ``@attribute`` (nominal value lists or
the numeric/real/integer keywords), ``@data``, '%' comment lines, bare
``?`` as the missing marker, and single-quoted names/values with
backslash escapes. ``string`` and ``date`` attributes are rejected with
a clear error. The writer emits exactly the layout the parser reads
back, so ``parse_arff(write_arff(d))`` reproduces ``d`` (the designated
target is not part of the format and is not round-tripped).
"""

from __future__ import annotations

from ..errors import DataError, FormatError
from .model import AttributeSpec, CellValue, Dataset, format_number

_QUOTE_TRIGGERS = set("{},%'\"\\")


def parse_arff(text) -> Dataset:
    """Parse ARFF text (a string or a readable file object) into a Dataset."""
    if hasattr(text, "read"):
        text = text.read()
    relation = None
    attributes: list[AttributeSpec] = []
    instances: list[tuple[CellValue, ...]] = []
    in_data = False
    # Split on newline only: str.splitlines() would also break on
    # form feeds and the unicode separators, which are legal inside
    # quoted names and values.
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        lowered = line.lower()
        if in_data:
            instances.append(_parse_row(line, line_no, attributes))
        elif lowered.startswith("@relation"):
            relation = _parse_relation(line, line_no)
        elif lowered.startswith("@attribute"):
            if relation is None:
                raise FormatError(f"line {line_no}: @attribute before @relation")
            attributes.append(_parse_attribute(line, line_no))
        elif lowered == "@data":
            if relation is None:
                raise FormatError(f"line {line_no}: @data before @relation")
            if not attributes:
                raise FormatError(f"line {line_no}: @data with no attributes")
            in_data = True
        else:
            raise FormatError(f"line {line_no}: unrecognized directive {line!r}")
    if not in_data:
        raise FormatError("missing @data section")
    return Dataset(relation, tuple(attributes), tuple(instances))


def _parse_relation(line: str, line_no: int) -> str:
    rest = line[len("@relation"):].strip()
    if not rest:
        raise FormatError(f"line {line_no}: @relation needs a name")
    name, trailing = _take_token(rest, line_no)
    if trailing.strip():
        raise FormatError(f"line {line_no}: unexpected text after relation name")
    return name


def _parse_attribute(line: str, line_no: int) -> AttributeSpec:
    rest = line[len("@attribute"):].strip()
    if not rest:
        raise FormatError(f"line {line_no}: @attribute needs a name and a type")
    name, rest = _take_token(rest, line_no)
    rest = rest.strip()
    if not rest:
        raise FormatError(f"line {line_no}: attribute {name!r} has no type")
    if rest.startswith("{"):
        if not rest.endswith("}"):
            raise FormatError(f"line {line_no}: unterminated nominal value list")
        values = [v for v, _ in _split_quoted(rest[1:-1], line_no)]
        if values == [""]:
            raise FormatError(f"line {line_no}: empty nominal value list")
        if len(set(values)) != len(values):
            raise FormatError(
                f"line {line_no}: duplicate value in nominal list for "
                f"attribute {name!r}"
            )
        return AttributeSpec(name, tuple(values))
    kind = rest.lower().split()[0]
    if kind in ("numeric", "real", "integer"):
        return AttributeSpec(name, None)
    if kind in ("string", "date"):
        raise FormatError(
            f"line {line_no}: attribute {name!r} has unsupported type "
            f"{kind!r} (only nominal and numeric are supported)"
        )
    raise FormatError(f"line {line_no}: unrecognized attribute type {rest!r}")


def _take_token(text: str, line_no: int) -> tuple[str, str]:
    """Read one name token: single-quoted (backslash escapes) or bare."""
    if text.startswith("'"):
        buf = []
        i = 1
        while i < len(text):
            ch = text[i]
            if ch == "\\" and i + 1 < len(text):
                buf.append(text[i + 1])
                i += 2
                continue
            if ch == "'":
                return "".join(buf), text[i + 1:]
            buf.append(ch)
            i += 1
        raise FormatError(f"line {line_no}: unterminated quoted name")
    for i, ch in enumerate(text):
        if ch in " \t":
            return text[:i], text[i:]
    return text, ""


def _split_quoted(text: str, line_no: int) -> list[tuple[str, bool]]:
    """Split comma-separated cells, honoring single-quoted segments.

    Returns (value, was_quoted) pairs. Unquoted cells are stripped of
    surrounding whitespace; quoted cells keep their exact content and
    unescape backslash sequences. The flag matters to callers because a
    bare ? is the missing marker while a quoted '?' is a literal value.
    """
    cells: list[tuple[str, bool]] = []
    buf: list[str] = []
    quoted = False
    in_quotes = False
    i = 0
    n = len(text)
    while i <= n:
        if i == n or (text[i] == "," and not in_quotes):
            cells.append(("".join(buf) if quoted else "".join(buf).strip(), quoted))
            buf = []
            quoted = False
            i += 1
            continue
        ch = text[i]
        if in_quotes:
            if ch == "\\" and i + 1 < n:
                buf.append(text[i + 1])
                i += 2
                continue
            if ch == "'":
                in_quotes = False
                i += 1
                continue
            buf.append(ch)
            i += 1
            continue
        if ch == "'" and not buf and not quoted:
            in_quotes = True
            quoted = True
            i += 1
            continue
        if ch in " \t" and (not buf or quoted):
            # leading whitespace, or padding after a closing quote
            i += 1
            continue
        buf.append(ch)
        i += 1
    if in_quotes:
        raise DataError(f"line {line_no}: unterminated quoted value")
    return cells


def _parse_row(
    line: str, line_no: int, attributes: list[AttributeSpec]
) -> tuple[CellValue, ...]:
    cells = _split_quoted(line, line_no)
    if len(cells) != len(attributes):
        raise DataError(
            f"line {line_no}: expected {len(attributes)} values, "
            f"found {len(cells)}"
        )
    row: list[CellValue] = []
    for (text, was_quoted), attr in zip(cells, attributes):
        if text == "?" and not was_quoted:
            row.append(None)
        elif attr.is_nominal:
            idx = attr.index_of(text)
            if idx is None:
                raise DataError(
                    f"line {line_no}: undeclared value {text!r} for "
                    f"attribute {attr.name}"
                )
            row.append(idx)
        else:
            try:
                row.append(float(text))
            except ValueError:
                raise DataError(
                    f"line {line_no}: bad numeric value {text!r} for "
                    f"attribute {attr.name}"
                ) from None
    return tuple(row)


def write_arff(d: Dataset) -> str:
    """Serialize a Dataset to ARFF text.

    Layout: the @relation line, a blank line, one @attribute line per
    column in schema order (nominal values in declared order, no spaces
    inside the braces), a blank line, @data, then one row per instance
    with missing cells as ?.
    """
    out = [f"@relation {quote_name(d.relation)}", ""]
    for attr in d.attributes:
        if attr.is_nominal:
            spec = "{" + ",".join(quote_name(v) for v in attr.values) + "}"
        else:
            spec = "numeric"
        out.append(f"@attribute {quote_name(attr.name)} {spec}")
    out.append("")
    out.append("@data")
    for row in d.instances:
        out.append(",".join(_format_cell(cell, attr)
                            for cell, attr in zip(row, d.attributes)))
    return "\n".join(out) + "\n"


def _format_cell(cell: CellValue, attr: AttributeSpec) -> str:
    if cell is None:
        return "?"
    if attr.is_nominal:
        return quote_name(attr.values[cell])
    return format_number(float(cell))


def quote_name(text: str) -> str:
    """Single-quote a name or value when the dialect requires it.

    Quoting triggers: any whitespace character, any of ``{},%'"\\``,
    the bare missing marker, and the empty string. Backslash and single
    quote are escaped. Newline and carriage return cannot be
    represented in this line-based format and are rejected; other
    exotic whitespace (form feed, the separator control codes) is fine
    once quoted because the parser only breaks lines on newline.
    """
    if "\n" in text or "\r" in text:
        raise DataError(f"line break in name or value {text!r} is not representable")
    if text == "" or text == "?" or any(
        ch.isspace() or ch in _QUOTE_TRIGGERS for ch in text
    ):
        body = text.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{body}'"
    return text
