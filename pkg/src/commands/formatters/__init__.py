from .json_formatter import JsonReportFormatter, to_serializable
from .csv_formatter import CsvReportFormatter
from .writer import FORMATTERS, write_report

__all__ = ['JsonReportFormatter', 'CsvReportFormatter', 'FORMATTERS', 'to_serializable', 'write_report']
