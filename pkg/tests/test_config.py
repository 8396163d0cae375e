import os
import pytest

from src.config.settings import Settings

VARIABLES = [
    'SPECTRA_THREADS', 'WEYL_GROUP_LIMIT', 'WEDGE_RANK_CAP', 'EXACT_HEIGHT_BITS', 'PADIC_PRECISION',
    'DEFAULT_SEED', 'SMOOTHING_DELTA_MAX', 'PARSEVAL_TOLERANCE', 'QUADRATURE_REFINEMENTS', 'ENERGY_BUDGET',
    'FIT_R2_THRESHOLD', 'PROXIMALITY_MIN_SLOPE', 'COMMUTANT_MAX_DEGREE', 'FINITE_SUBGROUP_MAX_ORDER',
    'AXIS_CLUSTERS', 'ENUMERATION_MAX_N', 'REPORT_FORMAT', 'LOG_LEVEL'
]


class TestSettings:

    def setup_method(self):
        # Save and clear every variable the settings read
        self.original_env = {}
        for var in VARIABLES:
            if var in os.environ:
                self.original_env[var] = os.environ.pop(var)

    def teardown_method(self):
        for var in VARIABLES:
            if var in self.original_env:
                os.environ[var] = self.original_env[var]
            elif var in os.environ:
                del os.environ[var]

    def test_defaults(self, tmp_path):
        settings = Settings(env_file=str(tmp_path / "absent.env"))
        assert settings.spectra_threads == 1
        assert settings.weyl_group_limit == 1000000
        assert settings.wedge_rank_cap == 4
        assert settings.default_seed == 12345
        assert settings.parseval_tolerance == 1e-8
        assert settings.energy_budget == 3000
        assert settings.fit_r2_threshold == 0.9
        assert settings.report_format == "json"
        assert settings.log_level == "INFO"

    def test_environment_file(self, tmp_path):
        env_file = tmp_path / "workbench.env"
        env_file.write_text("SPECTRA_THREADS=4\nDEFAULT_SEED=7\nREPORT_FORMAT=CSV\nLOG_LEVEL=debug\n")
        settings = Settings(env_file=str(env_file))
        assert settings.spectra_threads == 4
        assert settings.default_seed == 7
        assert settings.report_format == "csv"
        assert settings.log_level == "DEBUG"

    def test_environment_wins_over_file(self, tmp_path):
        env_file = tmp_path / "workbench.env"
        env_file.write_text("ENERGY_BUDGET=10\n")
        os.environ['ENERGY_BUDGET'] = '20'
        assert Settings(env_file=str(env_file)).energy_budget == 20

    def test_invalid_values_are_listed(self, tmp_path):
        os.environ['SPECTRA_THREADS'] = '0'
        os.environ['FIT_R2_THRESHOLD'] = '1.5'
        os.environ['REPORT_FORMAT'] = 'xml'
        with pytest.raises(ValueError) as exc:
            Settings(env_file=str(tmp_path / "absent.env"))
        message = str(exc.value)
        assert "SPECTRA_THREADS" in message
        assert "FIT_R2_THRESHOLD" in message
        assert "REPORT_FORMAT" in message

    def test_invalid_log_level(self, tmp_path):
        os.environ['LOG_LEVEL'] = 'chatty'
        with pytest.raises(ValueError, match="LOG_LEVEL"):
            Settings(env_file=str(tmp_path / "absent.env"))

    def test_to_dict(self, tmp_path):
        data = Settings(env_file=str(tmp_path / "absent.env")).to_dict()
        assert len(data) == len(VARIABLES)
        assert set(data) == {var.lower() for var in VARIABLES}
        assert data['padic_precision'] == 64


if __name__ == "__main__":
    pytest.main([__file__])
