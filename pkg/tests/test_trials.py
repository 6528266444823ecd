import csv
import io
import json

import pytest

from opmean.trials import DEFAULT_TOLERANCES, SUITES, RunConfig, mixture_mean, pool_mean, run

FIELDS = {"seed", "trial", "dim", "mean_spec", "check_id", "slack", "gap", "verdict"}


def _small(**kw):
    base = dict(seed=7, trials=6, dims=(1, 4))
    base.update(kw)
    return RunConfig(**base)


@pytest.fixture(scope="module")
def full_run():
    return run(_small())


class TestRun:
    def test_every_suite_passes(self, full_run):
        assert full_run.failures == 0
        prefixes = {r.check_id.split("_")[0] for r in full_run.reports}
        assert prefixes >= {"counterexample", "equality"}

    def test_sorted(self, full_run):
        keys = [(r.check_id, r.trial) for r in full_run.reports]
        assert keys == sorted(keys)

    def test_jsonl_fields(self, full_run):
        lines = full_run.jsonl().splitlines()
        assert len(lines) == len(full_run.reports)
        for line in lines:
            d = json.loads(line)
            assert FIELDS <= set(d)
            assert d["seed"] == 7

    def test_witness_only_on_operator_failures(self, full_run):
        for r in full_run.reports:
            if r.witness is not None:
                assert r.check_id.startswith("counterexample_loewner")

    def test_csv_summary(self, full_run):
        rows = list(csv.reader(io.StringIO(full_run.csv())))
        assert rows[0] == ["check_id", "trials", "min_slack", "failures"]
        assert {r[0] for r in rows[1:]} == {r.check_id for r in full_run.reports}
        assert all(r[3] == "0" for r in rows[1:])

    def test_crossing_reported_as_expected(self, full_run):
        (c,) = [r for r in full_run.reports if r.check_id == "equality_crossing_means"]
        assert c.verdict == "equality_expected"
        assert not c.failed

    def test_deterministic_across_workers(self):
        cfg = dict(suites=("identities", "reciprocal", "scalar"), trials=8)
        a = run(_small(**cfg)).jsonl()
        b = run(_small(workers=3, **cfg)).jsonl()
        assert a == b

    def test_seed_changes_output(self):
        a = run(_small(suites=("additive",))).jsonl()
        b = run(_small(suites=("additive",), seed=8)).jsonl()
        assert a != b

    def test_suite_selection(self):
        res = run(_small(suites=("sandwich",)))
        assert res.reports and all(r.check_id.startswith("sandwich") for r in res.reports)

    def test_dims_respected(self):
        res = run(_small(suites=("additive",), dims=(3, 3)))
        assert {r.dim for r in res.reports} == {3}

    def test_fixed_mean(self):
        res = run(_small(suites=("additive",), mean_spec="harmonic:0.3"))
        assert {r.mean_spec for r in res.reports} == {"harmonic:0.3"}

    def test_zero_tolerance_fails_identities(self):
        res = run(_small(suites=("identities",), trials=4, dims=(3, 5), tolerances={"identity": 0.0}))
        assert res.failures > 0

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run(_small(suites=("bogus",)))


def test_default_tolerances_cover_suites():
    assert set(DEFAULT_TOLERANCES) >= {"identity", "loewner", "eigen", "scalar"}
    assert "counterexample" in SUITES


def test_pool_means():
    assert pool_mean("geometric", 0.3).label == "geometric:0.3"
    assert mixture_mean(0.4).measure.is_probability()
    with pytest.raises(ValueError):
        pool_mean("cubic", 0.5)
