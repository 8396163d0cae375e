import logging
import sys
from pathlib import Path
from typing import Optional

from ..experiment import Report
from .csv_formatter import CsvReportFormatter
from .json_formatter import JsonReportFormatter

logger = logging.getLogger(__name__)

FORMATTERS = {
    'json': JsonReportFormatter,
    'csv': CsvReportFormatter,
}


def write_report(report: Report, format: str = "json", output: Optional[str] = None) -> str:
    """Render the report and write it to ``output``, or to stdout when no path is given"""
    if format not in FORMATTERS:
        raise ValueError(f"Unknown report format {format!r}; expected one of {sorted(FORMATTERS)}")
    text = FORMATTERS[format]().format_report(report)
    if output:
        Path(output).write_text(text)
        logger.info(f"Report written to {output}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return text
