import inspect
import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..algebra.quadratic import parse_rational
from ..algebra.subspace import SubspaceModel
from ..errors import UnknownCommand, WorkbenchError
from ..faces import FaceVerifier, admissible_types, face_of
from ..measures import load_measure
from ..multiscale import EnergyCounter, FlatteningAnalyzer, PointCloud, SubgroupFitter, covering_number
from ..proxdecay import Hyperplane, ProductAnalyzer, load_ensemble
from ..rootsys import classification_record, root_system, weyl_dimension
from ..stabcert import SubspaceCertifier, describe_ball, load_generators
from ..su2harm import FourierSpectrum, HarmonicAnalyzer
from ..walkdio import DiophantineProfiler, WalkSampler, kesten_baseline
from ..wedge import chevalley_basis, commutant_invariant_subspace, generate_subrep, xi_vector
from .experiment import ExperimentConfig, Report

logger = logging.getLogger(__name__)

ALL_FAMILIES = ("A", "B", "C", "D", "E", "F", "G")


@dataclass
class CommandResult:
    """Result of executing a command"""
    success: bool
    data: Dict[str, Any]
    message: str = ""
    error: Optional[str] = None


def _two_j(j: float) -> int:
    two_j = round(2 * j)
    if two_j < 0 or abs(two_j - 2 * j) > 1e-9:
        raise ValueError(f"Spin must be a nonnegative half-integer, got {j}")
    return two_j


def parse_vector(entries: Sequence[Any]) -> List:
    """Exact vector from "p/q" strings; entries with a decimal point stay floats."""
    vector = []
    for x in entries:
        if isinstance(x, str) and ('.' in x or 'e' in x.lower()):
            vector.append(float(x))
        else:
            vector.append(parse_rational(x))
    return vector


def parse_basis(text: str) -> List[List]:
    """Rows separated by ';', entries by ','; e.g. "1,0,0,0;0,1,0,0"."""
    return [[parse_rational(x.strip()) for x in row.split(',')] for row in text.split(';') if row.strip()]


class CommandProcessor:
    """Centralized command processor handling all business logic"""

    def __init__(self, settings):
        self.settings = settings
        self.commands: Dict[str, Callable[..., CommandResult]] = {
            'faces-verify': self.execute_faces_verify,
            'tilde-classify': self.execute_tilde_classify,
            'wedge-build': self.execute_wedge_build,
            'harm-gap': self.execute_harm_gap,
            'parseval': self.execute_parseval,
            'dio-profile': self.execute_dio_profile,
            'kesten': self.execute_kesten,
            'flatten': self.execute_flatten,
            'energy': self.execute_energy,
            'decay': self.execute_decay,
            'cert': self.execute_cert,
        }

    def _invalid(self, e: ValueError) -> CommandResult:
        logger.error(f"Invalid parameter: {e}")
        return CommandResult(
            success=False,
            data={'code': "cli.InvalidParameter", 'module': "cli", 'details': {}, 'exit_code': 1},
            error=f"Invalid parameter: {e}"
        )

    def _failure(self, e: Exception, action: str) -> CommandResult:
        if isinstance(e, WorkbenchError):
            logger.error(f"Error {action}: [{e.code}] {e.message}")
            return CommandResult(
                success=False,
                data={'code': e.code, 'module': e.module, 'details': e.details, 'exit_code': e.exit_code},
                error=f"Error {action}: {e.message}"
            )
        logger.error(f"Error {action}: {e}")
        return CommandResult(
            success=False,
            data={'code': "cli.UnexpectedError", 'module': "cli", 'details': {}, 'exit_code': 2},
            error=f"Error {action}: {e}"
        )

    def execute_faces_verify(self, families: Optional[List[str]] = None, max_rank: int = 6,
                             min_rank: int = 1) -> CommandResult:
        """Execute face lemma verification command"""
        try:
            families = families or list(ALL_FAMILIES)
            records = FaceVerifier(self.settings).verify_all_faces(families, max_rank, min_rank)
            covered = [r for r in records if r['hypothesis_met']]
            all_hold = all(r['holds'] for r in covered)
            return CommandResult(
                success=True,
                data={
                    'results': {
                        'records': records,
                        'faces': len(records),
                        'hypothesis_faces': len(covered),
                        'all_hold': all_hold
                    },
                    'warnings': [] if all_hold else ["Face lemma fails on a face satisfying the hypothesis"]
                },
                message=f"Verified {len(records)} faces, all hold: {all_hold}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "verifying faces")

    def execute_tilde_classify(self, families: Optional[List[str]] = None, max_rank: int = 8,
                               min_rank: int = 1) -> CommandResult:
        """Execute highest root classification command"""
        try:
            types = admissible_types(families or list(ALL_FAMILIES), max_rank, min_rank)
            records = [classification_record(root_system(family, rank)) for family, rank in types]
            distinct = [r['type'] for r in records if r['distinct_dual']]
            return CommandResult(
                success=True,
                data={'results': {'records': records, 'types': len(records), 'distinct_dual_types': distinct},
                      'warnings': []},
                message=f"Classified the highest root of {len(records)} types"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "classifying highest roots")

    def execute_wedge_build(self, family: str, rank: int, support: Optional[List[int]] = None,
                            include_basis: bool = False) -> CommandResult:
        """Execute exterior power subrepresentation command"""
        try:
            rs = root_system(family, rank)
            support = sorted(set(support)) if support else list(range(1, rank + 1))
            if any(not 1 <= i <= rank for i in support):
                raise ValueError(f"Support indices must lie in 1..{rank}, got {support}")
            alg = chevalley_basis(rs, self.settings.wedge_rank_cap)
            data = face_of(rs, rs.from_fw_coords([1 if i + 1 in support else 0 for i in range(rank)]))
            subrep = generate_subrep(alg, xi_vector(alg, data.extremal_roots))
            lie_dimension = len(rs.all_roots) + rs.rank
            results = {
                'type': rs.name,
                'support': support,
                'm_X': data.m,
                'omega_X': [str(c) for c in data.omega_X.fw_coords],
                'subrepresentation': subrep.to_dict(alg, include_basis),
                'weyl_dimension': weyl_dimension(rs, subrep.highest_weight),
                'lie_algebra_dimension': lie_dimension,
                'adjoint_dimension': subrep.dim == lie_dimension
            }
            return CommandResult(
                success=True,
                data={'results': results, 'warnings': []},
                message=f"{rs.name}: degree {subrep.degree} subrepresentation of dimension {subrep.dim}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "building the wedge subrepresentation")

    def execute_harm_gap(self, measure: str, jmax: float = 5.0, n: int = 64,
                         deltas: Optional[List[float]] = None) -> CommandResult:
        """Execute spectral radius estimation command"""
        try:
            law = load_measure(measure)
            analyzer = HarmonicAnalyzer(self.settings)
            results = analyzer.spectral_radius_estimate(law, _two_j(jmax), n)
            if deltas:
                results['smoothing'] = analyzer.smoothing_sweep(deltas, _two_j(jmax))
            return CommandResult(
                success=True,
                data={'results': results, 'warnings': []},
                message=f"Spectral radius estimate {results['sup']:.6f} at n = {n}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "estimating the spectral gap")

    def execute_parseval(self, jmax: float = 5.0, trials: int = 50, measure: Optional[str] = None,
                         seed: Optional[int] = None) -> CommandResult:
        """Execute Parseval identity check command"""
        try:
            analyzer = HarmonicAnalyzer(self.settings)
            two_j_max = _two_j(jmax)
            if measure is not None:
                spectra = [analyzer.fourier_spectrum(load_measure(measure), two_j_max)]
            else:
                rng = np.random.default_rng(self.settings.default_seed if seed is None else seed)
                spectra = [FourierSpectrum.random(two_j_max, rng) for _ in range(trials)]
            records = []
            for trial, spectrum in enumerate(spectra):
                check = analyzer.parseval_check(spectrum)
                check['trial'] = trial
                records.append(check)
            worst = max(r['relative_error'] for r in records)
            all_hold = all(r['holds'] for r in records)
            return CommandResult(
                success=True,
                data={'results': {'records': records, 'max_relative_error': worst, 'all_hold': all_hold},
                      'warnings': [] if all_hold else [f"Parseval relative error reaches {worst:.3e}"]},
                message=f"Parseval check on {len(records)} functions, worst relative error {worst:.3e}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "checking Parseval")

    def execute_dio_profile(self, measure: str, c1: float = 0.1, n_min: int = 5, n_max: int = 40,
                            n_step: int = 5, samples: int = 10000, seed: Optional[int] = None) -> CommandResult:
        """Execute Diophantine profile command"""
        try:
            law = load_measure(measure)
            profile = DiophantineProfiler(self.settings).diophantine_profile(
                law, c1, range(n_min, n_max + 1, n_step), samples, seed
            )
            return CommandResult(
                success=True,
                data={'results': profile.to_dict(), 'warnings': profile.warnings},
                message=f"Diophantine profile over {len(profile.rows)} lengths, c2_hat = {profile.c2_hat}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "profiling the measure")

    def execute_kesten(self, generators: int = 2, nmax: int = 30) -> CommandResult:
        """Execute free group baseline command"""
        try:
            if generators < 1 or nmax < 1:
                raise ValueError(f"Need generators >= 1 and nmax >= 1, got {generators} and {nmax}")
            results = kesten_baseline(generators, nmax)
            return CommandResult(
                success=True,
                data={'results': results, 'warnings': []},
                message=f"Kesten radius {results['theory']:.4f}, empirical {results['empirical']:.4f}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "computing the Kesten baseline")

    def execute_flatten(self, measure: str, deltas: Optional[List[float]] = None, n: int = 8,
                        samples: int = 2000, alpha: Optional[float] = None, rounds: int = 4,
                        seed: Optional[int] = None) -> CommandResult:
        """Execute L2 flattening command"""
        try:
            law = load_measure(measure)
            deltas = deltas or [2.0 ** -k for k in range(4, 9)]
            analyzer = FlatteningAnalyzer(self.settings)
            results = analyzer.flattening_sweep(law, deltas, n, samples, seed)
            warnings = results.pop('warnings')
            if alpha is not None:
                iterated = analyzer.iterated_flattening(law, min(deltas), n, alpha, rounds, samples, seed)
                results['iterated'] = iterated
                if not iterated['reached']:
                    warnings.append(f"No flattening below delta^-{alpha} after {rounds} rounds")
            return CommandResult(
                success=True,
                data={'results': results, 'warnings': warnings},
                message=f"Flattening exponent eps_hat = {results['epsilon_hat']}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "measuring flattening")

    def _cloud(self, measure: str, n: int, samples: int, seed: Optional[int]) -> PointCloud:
        law = load_measure(measure)
        if n == 0:
            return PointCloud.from_measure(law)
        walk = WalkSampler(self.settings).sample_walk(law, n, samples, seed)
        return PointCloud(walk.quaternions)

    def execute_energy(self, measure: str, delta: float, measure_b: Optional[str] = None, n: int = 0,
                       samples: int = 1000, fit: bool = False, seed: Optional[int] = None) -> CommandResult:
        """Execute multiplicative energy command"""
        try:
            a = self._cloud(measure, n, samples, seed)
            b = a if measure_b is None else self._cloud(measure_b, n, samples, seed)
            report = EnergyCounter(self.settings).multiplicative_energy(a, b, delta)
            results = report.to_dict()
            results['covering'] = covering_number(a, delta, self.settings.spectra_threads).to_dict()
            if fit:
                subgroup_fit = SubgroupFitter(self.settings).subgroup_fit(a, delta)
                subgroup_fit.pop('H')
                results['subgroup_fit'] = subgroup_fit
            warnings = [] if report.bounds_hold else ["Energy lies outside [N_A N_B, (N_A N_B)^2]"]
            return CommandResult(
                success=True,
                data={'results': results, 'warnings': warnings},
                message=f"Multiplicative energy {report.energy} at delta = {delta}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "counting multiplicative energy")

    def execute_decay(self, ensemble: str, vector: List[str], normal: List[str], eps: float = 0.0,
                      n_min: int = 0, n_max: int = 12, samples: int = 10000, exact: bool = False,
                      seed: Optional[int] = None) -> CommandResult:
        """Execute hyperplane hitting decay command"""
        try:
            ens = load_ensemble(ensemble)
            v = parse_vector(vector)
            hyperplane = Hyperplane.from_normal(parse_vector(normal))
            analyzer = ProductAnalyzer(self.settings)
            if exact:
                report = analyzer.exact_hit_probabilities(ens, v, hyperplane, eps, n_max)
            else:
                report = analyzer.decay_estimate(ens, v, hyperplane, eps, range(n_min, n_max + 1), samples, seed)
            results = report.to_dict()
            results['place'] = "real" if ens.place is None else ens.place
            results['expanding_places'] = analyzer.expanding_places(ens)
            if ens.dimension >= 2:
                results['proximality'] = analyzer.proximality_check(
                    ens, range(1, max(n_max, 2) + 1), min(samples, 2000), seed
                )
            return CommandResult(
                success=True,
                data={'results': results, 'warnings': report.warnings},
                message=f"Decay rate kappa_hat = {report.kappa_hat}"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "estimating hyperplane decay")

    def execute_cert(self, generators: str, radius: int = 3, threshold: float = 0.01,
                     basis: Optional[str] = None, ledger: bool = False) -> CommandResult:
        """Execute invariant subspace certification command"""
        try:
            generator_set = load_generators(generators)
            if basis:
                guess, source = SubspaceModel.from_basis(parse_basis(basis)), "basis"
            elif generator_set.subspace:
                guess, source = SubspaceModel.from_basis(generator_set.subspace), "file"
            else:
                guess = commutant_invariant_subspace(generator_set.generators, self.settings.commutant_max_degree)
                source = "commutant"
                if guess is None:
                    raise ValueError("No subspace guess (--basis or 'subspace' in the file) "
                                     "and the commutant of the generators gives none")
            certifier = SubspaceCertifier(self.settings)
            ball = certifier.word_ball(generator_set.generators, radius)
            certificate = certifier.certify_common_invariant_subspace(ball, guess, threshold)
            results = certificate.to_dict()
            results['subspace_source'] = source
            results['ball'] = describe_ball(ball, limit=0)
            if ledger:
                results['ledger'] = certifier.height_ledger(ball, ell=guess.dim).to_dict()
            return CommandResult(
                success=True,
                data={'results': results, 'warnings': list(certificate.warnings)},
                message=f"Certified: {certificate.certified} ({len(certificate.near_set)} near words)"
            )
        except ValueError as e:
            return self._invalid(e)
        except Exception as e:
            return self._failure(e, "certifying the invariant subspace")

    def run(self, config: ExperimentConfig) -> Report:
        """Dispatch a config to its command and wrap the outcome in a report"""
        handler = self.commands.get(config.command)
        if handler is None:
            raise UnknownCommand(f"Unknown command {config.command!r}",
                                 details={'known': sorted(self.commands)})
        kwargs = dict(config.parameters)
        if 'seed' in inspect.signature(handler).parameters:
            kwargs['seed'] = config.seed

        started = time.perf_counter()
        result = handler(**kwargs)
        elapsed = time.perf_counter() - started

        report = Report(config=config, settings=self.settings.to_dict())
        if result.success:
            report.results = result.data['results']
            report.warnings = list(result.data.get('warnings', []))
            logger.info(result.message)
        else:
            report.error = {'code': result.data['code'], 'module': result.data['module'],
                            'message': result.error, 'details': result.data['details']}
            report.exit_code = result.data['exit_code']
        for warning in report.warnings:
            logger.warning(warning)
        if config.timings:
            report.timings = {'total_seconds': elapsed}
        return report
