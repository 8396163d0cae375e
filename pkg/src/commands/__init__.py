from .command_processor import CommandProcessor, CommandResult
from .experiment import ExperimentConfig, Report, SCHEMA_VERSION
from .formatters import CsvReportFormatter, JsonReportFormatter, write_report

__all__ = [
    'CommandProcessor', 'CommandResult', 'ExperimentConfig', 'Report', 'SCHEMA_VERSION',
    'CsvReportFormatter', 'JsonReportFormatter', 'write_report'
]
