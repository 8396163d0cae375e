import json
import logging
from fractions import Fraction
from typing import Any

import numpy as np

from ...algebra.quadratic import QuadraticScalar, format_rational, format_scalar
from ..experiment import Report

logger = logging.getLogger(__name__)


def to_serializable(value: Any) -> Any:
    """JSON-ready form of exact scalars, numpy values and objects exposing to_dict."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, QuadraticScalar):
        return format_scalar(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [to_serializable(x) for x in value.tolist()]
    if isinstance(value, (set, frozenset)):
        return sorted(to_serializable(x) for x in value)
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not serializable")


class JsonReportFormatter:
    """Formats reports as JSON with sorted keys"""

    def __init__(self, settings=None):
        self.settings = settings

    def format_report(self, report: Report) -> str:
        """Format a report as a JSON document"""
        return json.dumps(report.to_dict(), default=to_serializable, sort_keys=True, indent=2) + "\n"
