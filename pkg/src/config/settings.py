import os
import logging
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

class Settings:
    def __init__(self, env_file: str = ".env"):
        load_dotenv(env_file)
        self._validate_settings()

    def _validate_settings(self):
        positive_integers = {
            "SPECTRA_THREADS": self.spectra_threads,
            "WEYL_GROUP_LIMIT": self.weyl_group_limit,
            "WEDGE_RANK_CAP": self.wedge_rank_cap,
            "EXACT_HEIGHT_BITS": self.exact_height_bits,
            "PADIC_PRECISION": self.padic_precision,
            "QUADRATURE_REFINEMENTS": self.quadrature_refinements,
            "ENERGY_BUDGET": self.energy_budget,
            "COMMUTANT_MAX_DEGREE": self.commutant_max_degree,
            "FINITE_SUBGROUP_MAX_ORDER": self.finite_subgroup_max_order,
            "AXIS_CLUSTERS": self.axis_clusters,
            "ENUMERATION_MAX_N": self.enumeration_max_n,
        }

        invalid = [name for name, value in positive_integers.items() if value < 1]

        if not 0 < self.fit_r2_threshold <= 1:
            invalid.append("FIT_R2_THRESHOLD")
        if self.smoothing_delta_max <= 0:
            invalid.append("SMOOTHING_DELTA_MAX")
        if self.parseval_tolerance <= 0:
            invalid.append("PARSEVAL_TOLERANCE")
        if self.report_format not in ("json", "csv"):
            invalid.append("REPORT_FORMAT")
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            invalid.append("LOG_LEVEL")

        if invalid:
            raise ValueError(f"Invalid environment variables: {', '.join(invalid)}")

    @property
    def spectra_threads(self) -> int:
        return int(os.getenv("SPECTRA_THREADS", "1"))

    @property
    def weyl_group_limit(self) -> int:
        return int(os.getenv("WEYL_GROUP_LIMIT", "1000000"))

    @property
    def wedge_rank_cap(self) -> int:
        return int(os.getenv("WEDGE_RANK_CAP", "4"))

    @property
    def exact_height_bits(self) -> int:
        return int(os.getenv("EXACT_HEIGHT_BITS", "4096"))

    @property
    def padic_precision(self) -> int:
        return int(os.getenv("PADIC_PRECISION", "64"))

    @property
    def default_seed(self) -> int:
        return int(os.getenv("DEFAULT_SEED", "12345"))

    @property
    def smoothing_delta_max(self) -> float:
        return float(os.getenv("SMOOTHING_DELTA_MAX", "1.0"))

    @property
    def parseval_tolerance(self) -> float:
        return float(os.getenv("PARSEVAL_TOLERANCE", "1e-8"))

    @property
    def quadrature_refinements(self) -> int:
        return int(os.getenv("QUADRATURE_REFINEMENTS", "2"))

    @property
    def energy_budget(self) -> int:
        return int(os.getenv("ENERGY_BUDGET", "3000"))

    @property
    def fit_r2_threshold(self) -> float:
        return float(os.getenv("FIT_R2_THRESHOLD", "0.9"))

    @property
    def proximality_min_slope(self) -> float:
        return float(os.getenv("PROXIMALITY_MIN_SLOPE", "0.01"))

    @property
    def commutant_max_degree(self) -> int:
        return int(os.getenv("COMMUTANT_MAX_DEGREE", "2"))

    @property
    def finite_subgroup_max_order(self) -> int:
        return int(os.getenv("FINITE_SUBGROUP_MAX_ORDER", "6"))

    @property
    def axis_clusters(self) -> int:
        return int(os.getenv("AXIS_CLUSTERS", "4"))

    @property
    def enumeration_max_n(self) -> int:
        return int(os.getenv("ENUMERATION_MAX_N", "12"))

    @property
    def report_format(self) -> str:
        return os.getenv("REPORT_FORMAT", "json").lower()

    @property
    def log_level(self) -> str:
        return os.getenv("LOG_LEVEL", "INFO").upper()

    def to_dict(self) -> dict:
        return {
            "spectra_threads": self.spectra_threads,
            "weyl_group_limit": self.weyl_group_limit,
            "wedge_rank_cap": self.wedge_rank_cap,
            "exact_height_bits": self.exact_height_bits,
            "padic_precision": self.padic_precision,
            "default_seed": self.default_seed,
            "smoothing_delta_max": self.smoothing_delta_max,
            "parseval_tolerance": self.parseval_tolerance,
            "quadrature_refinements": self.quadrature_refinements,
            "energy_budget": self.energy_budget,
            "fit_r2_threshold": self.fit_r2_threshold,
            "proximality_min_slope": self.proximality_min_slope,
            "commutant_max_degree": self.commutant_max_degree,
            "finite_subgroup_max_order": self.finite_subgroup_max_order,
            "axis_clusters": self.axis_clusters,
            "enumeration_max_n": self.enumeration_max_n,
            "report_format": self.report_format,
            "log_level": self.log_level
        }
