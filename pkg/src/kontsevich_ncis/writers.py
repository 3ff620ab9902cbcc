"""Report file writers."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import polars as pl
import polars.selectors as cs


@dataclass
class NamedReport:
    """Tabular report with the name used for its file."""

    name: str
    frame: pl.DataFrame

    @property
    def file_stem(self) -> str:
        """Name with whitespace replaced by underscores."""
        return re.sub(r"\s+", "_", self.name)


def _drop_null_columns(df: pl.DataFrame) -> pl.DataFrame:
    return df.select([s.name for s in df if not (s.null_count() == df.height)])


class ReportWriter(Protocol):
    """Protocol for report writers."""

    NAME: str

    WRITERS: dict[str, type[ReportWriter]] = {}

    def __init_subclass__(cls, **kwargs):
        """Register writer subclasses."""
        super().__init_subclass__(**kwargs)
        cls.WRITERS[cls.NAME] = cls

    def write(
        self,
        report: NamedReport,
        output_dir: Path,
        *,
        drop_null_columns: bool = False,
        create_dir: bool = True,
    ) -> Path:
        """Write the report to the output directory and return the file path."""
        ...

    @classmethod
    def create(cls, name: str) -> ReportWriter:
        """Create a report writer by name."""
        return cls.WRITERS[name]()


class JsonWriter(ReportWriter):
    """Write reports as a JSON array of row objects."""

    NAME = "json"

    def write(
        self,
        report: NamedReport,
        output_dir: Path,
        *,
        drop_null_columns: bool = False,
        create_dir: bool = True,
    ) -> Path:
        """Write the report to the output directory and return the file path."""
        df = report.frame
        if drop_null_columns:
            df = _drop_null_columns(df)
        if create_dir:
            output_dir.mkdir(parents=True, exist_ok=True)
        path = (output_dir / report.file_stem).with_suffix(".json")
        path.write_text(json.dumps(df.to_dicts(), indent=2, default=str))
        return path


class CsvWriter(ReportWriter):
    """Write reports to CSV."""

    NAME = "csv"

    def write(
        self,
        report: NamedReport,
        output_dir: Path,
        *,
        drop_null_columns: bool = False,
        create_dir: bool = True,
    ) -> Path:
        """Write the report to the output directory and return the file path."""
        df = report.frame
        if drop_null_columns:
            df = _drop_null_columns(df)

        if create_dir:
            output_dir.mkdir(parents=True, exist_ok=True)
        path = (output_dir / report.file_stem).with_suffix(".csv")
        df.write_csv(path)
        return path


class ExcelWriter(ReportWriter):
    """Write reports to Excel, highlighting pass/fail cells."""

    NAME = "excel"

    def write(
        self,
        report: NamedReport,
        output_dir: Path,
        *,
        drop_null_columns: bool = False,
        create_dir: bool = True,
    ) -> Path:
        """Write the report to the output directory and return the file path."""
        df = report.frame
        if drop_null_columns:
            df = _drop_null_columns(df)

        if create_dir:
            output_dir.mkdir(parents=True, exist_ok=True)
        path = (output_dir / report.file_stem).with_suffix(".xlsx")
        df.write_excel(
            path,
            worksheet=report.file_stem[:31],
            conditional_formats={
                cs.boolean(): [
                    {
                        "type": "cell",
                        "criteria": "==",
                        "value": False,
                        "format": {"bg_color": "#FFC7CE"},
                    },
                    {
                        "type": "cell",
                        "criteria": "==",
                        "value": True,
                        "format": {"bg_color": "#C6EFCE"},
                    },
                ]
            },
        )
        return path


class ParquetWriter(ReportWriter):
    """Write reports to Parquet."""

    NAME = "parquet"

    def write(
        self,
        report: NamedReport,
        output_dir: Path,
        *,
        drop_null_columns: bool = False,
        create_dir: bool = True,
    ) -> Path:
        """Write the report to the output directory and return the file path."""
        df = report.frame
        if drop_null_columns:
            df = _drop_null_columns(df)

        if create_dir:
            output_dir.mkdir(parents=True, exist_ok=True)
        path = (output_dir / report.file_stem).with_suffix(".parquet")
        df.write_parquet(path)
        return path
