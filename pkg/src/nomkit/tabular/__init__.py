"""Tabular data model plus CSV and ARFF readers/writers."""

from .model import (
    AttributeSpec,
    CellValue,
    Dataset,
    RawTable,
    column_mode,
    format_number,
    parse_ranges,
    remove_attributes,
)
from .csvio import parse_csv, rows_to_csv, write_csv
from .arff import parse_arff, quote_name, write_arff

__all__ = [
    "AttributeSpec",
    "CellValue",
    "Dataset",
    "RawTable",
    "column_mode",
    "format_number",
    "parse_ranges",
    "remove_attributes",
    "parse_csv",
    "rows_to_csv",
    "write_csv",
    "parse_arff",
    "quote_name",
    "write_arff",
]
