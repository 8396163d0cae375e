import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .. import __version__

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# argparse destinations shared by every command; the rest are command parameters
COMMON_ARGUMENTS = ('command', 'seed', 'format', 'output', 'env_file', 'log_level', 'log_file', 'timings')


@dataclass
class ExperimentConfig:
    """Replayable description of one command run"""
    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: int = 12345
    output: Optional[str] = None
    format: str = "json"
    timings: bool = False

    @classmethod
    def from_args(cls, args, settings) -> "ExperimentConfig":
        """Build a config from parsed command-line arguments"""
        values = vars(args)
        parameters = {key: value for key, value in values.items()
                      if key not in COMMON_ARGUMENTS and not key.startswith('_')}
        return cls(
            command=values['command'],
            parameters=parameters,
            seed=settings.default_seed if values.get('seed') is None else values['seed'],
            output=values.get('output'),
            format=values.get('format') or settings.report_format,
            timings=bool(values.get('timings', False))
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'parameters': dict(self.parameters),
            'seed': self.seed,
            'output': self.output,
            'format': self.format,
            'timings': self.timings
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        if 'command' not in data or 'seed' not in data:
            raise ValueError("Experiment config needs 'command' and 'seed'")
        return cls(
            command=data['command'],
            parameters=dict(data.get('parameters', {})),
            seed=int(data['seed']),
            output=data.get('output'),
            format=data.get('format', "json"),
            timings=bool(data.get('timings', False))
        )


@dataclass
class Report:
    """Schema-versioned result of a command, echoing the config and settings it ran with"""
    config: ExperimentConfig
    settings: Dict[str, Any]
    results: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None
    exit_code: int = 0
    timings: Optional[Dict[str, float]] = None
    schema_version: int = SCHEMA_VERSION
    tool_version: str = __version__

    @property
    def success(self) -> bool:
        return self.exit_code == 0

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'schema_version': self.schema_version,
            'tool_version': self.tool_version,
            'config': self.config.to_dict(),
            'settings': self.settings,
            'results': self.results,
            'warnings': self.warnings
        }
        if self.error is not None:
            data['error'] = self.error
        if self.timings is not None:
            data['timings'] = self.timings
        return data
