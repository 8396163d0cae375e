import csv
import io
import json
import logging
from typing import Any, Dict, List

from ..experiment import Report
from .json_formatter import to_serializable

logger = logging.getLogger(__name__)

# result arrays projected to rows, in order of preference
ROW_KEYS = ('records', 'per_j', 'near_words')


def _cell(value: Any) -> Any:
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, default=to_serializable, sort_keys=True)
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    return to_serializable(value)


class CsvReportFormatter:
    """Formats the results array of a report as CSV rows"""

    def __init__(self, settings=None):
        self.settings = settings

    def rows(self, report: Report) -> List[Dict[str, Any]]:
        results = report.results
        for key in ROW_KEYS:
            if isinstance(results.get(key), list):
                return [row if isinstance(row, dict) else {'value': row} for row in results[key]]
        scalars = {k: v for k, v in results.items() if not isinstance(v, (dict, list))}
        return [scalars] if scalars else []

    def format_report(self, report: Report) -> str:
        """Format a report as CSV; failed reports give a single error row"""
        if report.error is not None:
            rows = [{'code': report.error['code'], 'message': report.error['message']}]
        else:
            rows = self.rows(report)
        columns = sorted({key for row in rows for key in row})
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(row.get(key)) for key in columns})
        logger.debug(f"CSV projection with {len(rows)} rows and {len(columns)} columns")
        return buffer.getvalue()
