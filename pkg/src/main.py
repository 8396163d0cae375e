import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .commands import CommandProcessor, ExperimentConfig, Report, write_report
from .config import Settings
from .errors import InvalidMeasureFile, UsageError, WorkbenchError

logger = logging.getLogger(__name__)


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class Workbench:
    """Settings, command processor and report writing for one CLI invocation"""

    def __init__(self, env_file: str = ".env"):
        self.settings = Settings(env_file)
        self.processor = CommandProcessor(self.settings)

    def run(self, config: ExperimentConfig) -> Report:
        logger.info(f"Running {config.command} with seed {config.seed}")
        report = self.processor.run(config)
        write_report(report, config.format, config.output)
        return report

    def load_config(self, path: str) -> ExperimentConfig:
        """Read an experiment config saved from the 'config' block of an earlier report"""
        path = Path(path)
        if not path.is_file():
            raise InvalidMeasureFile(f"Config file not found: {path}", details={'path': str(path)})
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise InvalidMeasureFile(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                                     details={'path': str(path), 'line': e.lineno, 'column': e.colno})
        data = data.get('config', data)
        try:
            return ExperimentConfig.from_dict(data)
        except (TypeError, ValueError) as e:
            raise UsageError(f"{path}: {e}", details={'path': str(path)}, module="cli")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help='Random seed (default: DEFAULT_SEED)')
    common.add_argument('--format', choices=['json', 'csv'], default=None,
                        help='Report format (default: REPORT_FORMAT)')
    common.add_argument('--output', default=None,
                        help='Report path (default: stdout)')
    common.add_argument('--env-file', default='.env',
                        help='Environment file path')
    common.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default: LOG_LEVEL)')
    common.add_argument('--log-file', default=None,
                        help='Also write logs to this file')
    common.add_argument('--timings', action='store_true',
                        help='Add wall-clock timings to the report')
    return common


def _add_families(parser: argparse.ArgumentParser, max_rank: int):
    parser.add_argument('--family', dest='families', action='append',
                        choices=['A', 'B', 'C', 'D', 'E', 'F', 'G'],
                        help='Root system family, repeatable (default: all)')
    parser.add_argument('--max-rank', type=int, default=max_rank)
    parser.add_argument('--min-rank', type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = WorkbenchArgumentParser(description='Spectral gap workbench for compact Lie groups')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=WorkbenchArgumentParser)

    p = sub.add_parser('faces-verify', parents=[common], help='Verify the face lemma over Weyl chamber faces')
    _add_families(p, 6)

    p = sub.add_parser('tilde-classify', parents=[common], help='Classify the highest root of each type')
    _add_families(p, 8)

    p = sub.add_parser('wedge-build', parents=[common], help='Build the exterior power subrepresentation of a face')
    p.add_argument('--family', required=True, choices=['A', 'B', 'C', 'D', 'E', 'F', 'G'])
    p.add_argument('--rank', type=int, required=True)
    p.add_argument('--support', type=int, nargs='+', help='1-based simple roots of the face (default: all)')
    p.add_argument('--include-basis', action='store_true')

    p = sub.add_parser('harm-gap', parents=[common], help='Estimate the spectral radius per spin')
    p.add_argument('--measure', required=True)
    p.add_argument('--jmax', type=float, default=5.0)
    p.add_argument('--n', type=int, default=64)
    p.add_argument('--deltas', type=float, nargs='+', help='Also sweep the smoothing kernel over these scales')

    p = sub.add_parser('parseval', parents=[common], help='Check the Parseval identity')
    p.add_argument('--jmax', type=float, default=5.0)
    p.add_argument('--trials', type=int, default=50)
    p.add_argument('--measure', help='Check the coefficients of this measure instead of random functions')

    p = sub.add_parser('dio-profile', parents=[common], help='Profile subgroup neighborhoods along the walk')
    p.add_argument('--measure', required=True)
    p.add_argument('--c1', type=float, default=0.1)
    p.add_argument('--n-min', type=int, default=5)
    p.add_argument('--n-max', type=int, default=40)
    p.add_argument('--n-step', type=int, default=5)
    p.add_argument('--samples', type=int, default=10000)

    p = sub.add_parser('kesten', parents=[common], help='Free group return probabilities against Kesten')
    p.add_argument('--generators', type=int, default=2)
    p.add_argument('--nmax', type=int, default=30)

    p = sub.add_parser('flatten', parents=[common], help='L2 flattening ratios over a scale sweep')
    p.add_argument('--measure', required=True)
    p.add_argument('--deltas', type=float, nargs='+')
    p.add_argument('--n', type=int, default=8)
    p.add_argument('--samples', type=int, default=2000)
    p.add_argument('--alpha', type=float, help='Also square the walk until the norm drops below delta^-alpha')
    p.add_argument('--rounds', type=int, default=4)

    p = sub.add_parser('energy', parents=[common], help='Multiplicative energy of delta-discretized sets')
    p.add_argument('--measure', required=True)
    p.add_argument('--delta', type=float, required=True)
    p.add_argument('--measure-b', help='Second set (default: the first)')
    p.add_argument('--n', type=int, default=0, help='Use samples of the n-step walk instead of the support')
    p.add_argument('--samples', type=int, default=1000)
    p.add_argument('--fit', action='store_true', help='Also fit a subgroup neighborhood to the first set')

    p = sub.add_parser('decay', parents=[common], help='Probability that g v lands near a hyperplane')
    p.add_argument('--ensemble', required=True)
    p.add_argument('--vector', nargs='+', required=True)
    p.add_argument('--normal', nargs='+', required=True)
    p.add_argument('--eps', type=float, default=0.0)
    p.add_argument('--n-min', type=int, default=0)
    p.add_argument('--n-max', type=int, default=12)
    p.add_argument('--samples', type=int, default=10000)
    p.add_argument('--exact', action='store_true', help='Enumerate the exact law instead of sampling')

    p = sub.add_parser('cert', parents=[common], help='Certify a common invariant subspace of near words')
    p.add_argument('--generators', required=True)
    p.add_argument('--radius', type=int, default=3)
    p.add_argument('--threshold', type=float, default=0.01)
    p.add_argument('--basis', help='Subspace guess, rows separated by ";" (default: from the file, else from the commutant)')
    p.add_argument('--ledger', action='store_true', help='Also check the height ledger of the ball')

    p = sub.add_parser('replay', parents=[common], help='Rerun the config of an earlier report')
    p.add_argument('--config', dest='config_path', required=True)
    return parser


def setup_logging(level: str, log_file: Optional[str] = None):
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)

    try:
        workbench = Workbench(env_file=args.env_file)
    except ValueError as e:
        setup_logging(args.log_level or 'INFO', args.log_file)
        logger.error(f"Invalid configuration: {e}")
        return 1
    setup_logging(args.log_level or workbench.settings.log_level, args.log_file)

    try:
        if args.command == 'replay':
            config = workbench.load_config(args.config_path)
        else:
            config = ExperimentConfig.from_args(args, workbench.settings)
        report = workbench.run(config)
    except WorkbenchError as e:
        logger.error(f"[{e.code}] {e.message}")
        return e.exit_code
    except Exception as e:
        logger.error(f"Workbench run failed: {e}")
        return 2

    if not report.success:
        logger.error(f"{config.command} failed: {report.error['message']}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
