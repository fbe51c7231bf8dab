from fractions import Fraction
import time

import pytest

from app.schemas import CampaignConfig, CheckRow
from app.services.campaign_service import (
    QUANTUM,
    CampaignCell,
    CampaignResult,
    campaign_service,
    cell_rng,
    convergence_suite,
    elementary_suite,
    extremal_profile_suite,
    oracle_suite,
    random_values,
    run_trial,
    special_function_suite,
)
from app.services.export_service import CHECK_COLUMNS, export_service
from app.services.tree_service import dyadic_tree


def make_config(**overrides) -> CampaignConfig:
    data = {
        "seed": 7,
        "trials": 2,
        "q_values": [0.25, 0.75],
        "min_depth": 1,
        "max_depth": 3,
        "lambdas": 4,
        "subsets": 3,
        "workers": 1,
    }
    data.update(overrides)
    return CampaignConfig(**data)


class TestCampaignConfig:
    def test_q_range(self):
        with pytest.raises(ValueError):
            make_config(q_values=[1.0])

    def test_depth_order(self):
        with pytest.raises(ValueError):
            make_config(min_depth=4, max_depth=2)

    def test_from_settings_ignores_none(self):
        config = CampaignConfig.from_settings(seed=5, trials=None)
        assert config.seed == 5
        assert config.trials == CampaignConfig.from_settings().trials


class TestRandomValues:
    def test_exact_quantized(self):
        values = random_values(cell_rng(1, 0), 256, exact=True)
        assert all(isinstance(v, Fraction) for v in values)
        assert all((v * QUANTUM).denominator == 1 for v in values)
        assert any(v == 0 for v in values) and any(v > 10 for v in values)

    def test_never_all_zero(self):
        rng = cell_rng(3, 0)
        assert all(any(random_values(rng, 2, exact=False)) for _ in range(200))

    def test_cell_streams_are_independent(self):
        first = random_values(cell_rng(11, 0), 8, exact=False)
        second = random_values(cell_rng(11, 1), 8, exact=False)
        again = random_values(cell_rng(11, 0), 8, exact=False)
        assert first == again and first != second


class TestCampaign:
    def test_cells(self):
        cells = campaign_service.cells(make_config())
        assert [(c.index, c.q, c.depth) for c in cells] == [
            (0, 0.25, 1), (1, 0.25, 2), (2, 0.25, 3),
            (3, 0.75, 1), (4, 0.75, 2), (5, 0.75, 3),
        ]

    def test_zero_trials(self):
        result = campaign_service.run(make_config(trials=0))
        assert result.rows == [] and result.status == 0

    def test_row_count_and_status(self):
        config = make_config()
        result = campaign_service.run(config)
        assert len(result.rows) == 6 * config.trials * (config.lambdas + config.subsets + 8)
        assert result.violations == []
        assert result.status == 0

    @pytest.mark.parametrize("exact", [True, False])
    def test_deterministic(self, exact):
        config = make_config(exact=exact)
        first = export_service.render_checks(campaign_service.run(config).rows)
        second = export_service.render_checks(campaign_service.run(config).rows)
        assert first == second

    def test_seed_changes_output(self):
        first = export_service.render_checks(campaign_service.run(make_config(seed=1)).rows)
        second = export_service.render_checks(campaign_service.run(make_config(seed=2)).rows)
        assert first != second

    @pytest.mark.slow
    def test_workers_do_not_change_output(self):
        sequential = campaign_service.run(make_config(workers=1)).rows
        parallel = campaign_service.run(make_config(workers=2)).rows
        assert export_service.render_checks(sequential) == export_service.render_checks(parallel)

    @pytest.mark.slow
    def test_default_grid_fits_time_budget(self):
        # Двадцатая часть испытаний по умолчанию должна укладываться в двадцатую часть двух минут
        config = CampaignConfig.from_settings(trials=50, workers=1, suites=False, exact=True)
        assert len(campaign_service.cells(config)) == 24
        start = time.perf_counter()
        result = campaign_service.run(config)
        elapsed = time.perf_counter() - start
        assert result.status == 0
        assert elapsed < 120 / 20

    def test_trial_checks(self):
        config = make_config(lambdas=2, subsets=1)
        cell = CampaignCell(index=0, q=0.5, depth=2)
        rows = run_trial(config, cell, 0, dyadic_tree(2), cell_rng(0, 0))
        assert [row.check for row in rows] == [
            "weak_type", "weak_type", "kolmogorov",
            "upper_bound", "distribution_chain", "holder_chain", "bellman_reduction",
            "layer_cake", "symmetrization", "holder_product", "holder_split",
        ]
        assert all(row.holds for row in rows)

    def test_violation_sets_status(self):
        result = CampaignResult(rows=[CheckRow(check="x", lhs=2.0, rhs=1.0, holds=False)])
        assert result.status == 1
        assert result.violations[0].slack == -1.0


class TestSuites:
    def test_special_functions(self):
        rows = special_function_suite()
        assert len(rows) == 101
        assert all(row.holds for row in rows)

    def test_extremal_profiles(self):
        rows = extremal_profile_suite(cell_rng(0, 10_000), 20)
        assert len(rows) == 40 and all(row.holds for row in rows)

    def test_oracle(self):
        rows = oracle_suite(cell_rng(0, 10_001), 5)
        assert len(rows) == 10 and all(row.holds for row in rows)

    def test_elementary(self):
        rows = elementary_suite(cell_rng(0, 10_002), 200)
        assert len(rows) == 400 and all(row.holds for row in rows)

    @pytest.mark.slow
    def test_convergence(self):
        rows = convergence_suite()
        failed = [row.check for row in rows if not row.holds]
        assert failed == []


class TestExport:
    def test_header_and_cells(self):
        rows = [
            CheckRow(check="upper_bound", q=0.5, depth=2, cell=0, trial=1, lhs=1.0, rhs=1.5, holds=True),
            CheckRow(check="omega_closed_form", lhs=0.1, rhs=0.3, holds=False),
        ]
        lines = export_service.render_checks(rows).split("\n")
        assert lines[0] == ",".join(CHECK_COLUMNS)
        assert lines[1] == "upper_bound,0.5,2,0,1,,1,1.5,0.5,true"
        assert lines[2].startswith("omega_closed_form,,,,,,0.10000000000000001,0.29999999999999999,")
        assert lines[2].endswith(",false")
        assert lines[3] == ""

    def test_empty_models(self):
        assert export_service.render_models([]) == ""

    def test_models_include_computed_fields(self):
        rows = [CheckRow(check="a", lhs=1.0, rhs=3.0, holds=True)]
        header = export_service.render_models(rows).split("\n")[0]
        assert header.split(",")[-1] == "slack"

    def test_write_creates_directories(self, tmp_path):
        target = export_service.write("a,b\n", tmp_path / "nested" / "out.csv")
        assert target.read_text(encoding="utf-8") == "a,b\n"

    def test_write_failure(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(OSError):
            export_service.write("a", blocker / "out.csv")
