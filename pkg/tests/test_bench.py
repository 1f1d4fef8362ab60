import csv
import gzip
import io
import json
import math

import pytest

from olcanneal.bench import (CSV_COLUMNS, TIMING_COLUMNS, UNSOLVED, CampaignSpec, TtsReport,
                             campaign_csv, campaign_json, estimate_theta, generate_corpus, r99,
                             run_campaign, summarize, tts, write_campaign_json)
from olcanneal.errors import InvalidArgument
from olcanneal.formulation import IsingProblem
from olcanneal.solvers import AttemptRecord, SimCimParams, SolveResult, simcim_solve
from oracles import ham_paths_by_permutation


def result_with(energies, wall=1e-5):
    return SolveResult((1,), min(energies), [AttemptRecord(e, wall) for e in energies])


def strip_timing(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return [{k: v for k, v in row.items() if k not in TIMING_COLUMNS} for row in rows]


class TestTheta:
    def test_ratio(self):
        assert estimate_theta(result_with([0, 0, 0, 0, 1, 1, 1, 1, 1, 1]), 0) == 0.4

    def test_all_hit(self):
        assert estimate_theta(result_with([2.0, 2.0]), 2.0) == 1.0

    def test_tolerance(self):
        assert estimate_theta(result_with([1 + 1e-10, 1 + 1e-6]), 1.0) == 0.5

    def test_ferromagnetic_double_entry(self):
        m = IsingProblem(2, {}, {(0, 1): -1})
        r = simcim_solve(m, SimCimParams(attempts=100, iterations=50, noise_sigma=0.3, seed=9), -1.0)
        independent = len([e for e in r.energies if abs(e - (-1.0)) < 1e-12]) / 100
        assert estimate_theta(r, -1.0) == independent
        assert independent == sum(a.hit_ground for a in r.attempts) / 100

    def test_empty_rejected(self):
        with pytest.raises(InvalidArgument):
            estimate_theta(SolveResult((), 0.0, []), 0.0)


class TestR99:
    def test_examples(self):
        assert r99(0.99) == 1.0
        assert r99(0.9) == 2.0
        assert r99(0.5) == pytest.approx(6.6438561897747, abs=1e-3)

    def test_boundaries(self):
        assert r99(1.0) == 1.0
        assert r99(0.0) == UNSOLVED
        with pytest.raises(InvalidArgument):
            r99(1.5)

    def test_monotone(self):
        thetas = [i / 100 for i in range(1, 100)]
        vals = [r99(t) for t in thetas]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert all(v >= 1 for t, v in zip(thetas, vals) if t <= 0.99)

    def test_agrees_with_direct_probability(self):
        # after r99(theta) runs the miss probability is 0.01
        for theta in (0.05, 0.3, 0.77):
            assert (1 - theta) ** r99(theta) == pytest.approx(0.01, rel=1e-12)


class TestTts:
    def test_examples(self):
        assert tts(0.99, 20) == 20.0
        assert tts(0.5, 20) == pytest.approx(132.877, abs=0.1)
        assert tts(0.9, 20) == 40.0
        assert tts(0.0, 20) == UNSOLVED

    def test_linear_in_t_a(self):
        assert tts(0.3, 50) == pytest.approx(2.5 * tts(0.3, 20))

    def test_report_from_result(self):
        rep = TtsReport.from_result(result_with([0, 1, 0, 1], wall=2e-6), 0.0)
        assert (rep.runs, rep.hits, rep.theta) == (4, 2, 0.5)
        assert rep.t_a_microseconds == pytest.approx(2.0)
        assert rep.tts_microseconds == pytest.approx(2.0 * math.log(0.01) / math.log(0.5))
        fixed = TtsReport.from_result(result_with([0, 1]), 0.0, t_a_us=20)
        assert fixed.tts_microseconds == pytest.approx(132.877, abs=0.1)


def test_summarize():
    s = summarize([1.0, 2.0, 3.0, 4.0, UNSOLVED])
    assert s["count"] == 4 and s["mean"] == 2.5 and s["min"] == 1.0 and s["max"] == 4.0
    assert s["p90"] == pytest.approx(3.7)
    assert summarize([UNSOLVED])["mean"] is None


SMALL = dict(lengths=(5, 6), instances_per_length=3,
             solver=SimCimParams(attempts=60, iterations=300), master_seed=11)


class TestCorpus:
    def test_filters(self):
        spec = CampaignSpec(lengths=(5, 6, 7), instances_per_length=10, master_seed=4)
        corpus = generate_corpus(spec)
        assert len(corpus) == 30
        sigs = set()
        for inst in corpus:
            g = inst.graph
            assert g.n == inst.length - 2
            pairs = [(e.u, e.v) for e in g.edges]
            assert ham_paths_by_permutation(g.n, pairs)
            assert g.m > g.n - 1 or not _is_chain(g.n, pairs)
            sig = (tuple(g.labels()), tuple(pairs))
            assert sig not in sigs
            sigs.add(sig)

    def test_edge_encoding_only_acyclic(self):
        corpus = generate_corpus(CampaignSpec(lengths=(6,), instances_per_length=5,
                                              encoding="edge"))
        assert all(inst.graph.is_acyclic() for inst in corpus)

    def test_bad_spec(self):
        with pytest.raises(InvalidArgument):
            CampaignSpec(lengths=(2,))
        with pytest.raises(InvalidArgument):
            CampaignSpec(encoding="bogus")


def _is_chain(n, pairs):
    outs = [u for u, _ in pairs]
    ins = [v for _, v in pairs]
    return len(pairs) == n - 1 and len(set(outs)) == len(outs) and len(set(ins)) == len(ins)


@pytest.fixture(scope="module")
def reports():
    return run_campaign(CampaignSpec(**SMALL))


class TestCampaign:
    def test_csv_shape(self, reports):
        text = campaign_csv(reports)
        rows = list(csv.DictReader(io.StringIO(text)))
        assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 6
        assert [r["n_vars"] for r in rows] == ["9"] * 3 + ["16"] * 3
        assert [(r["length"], r["instance"]) for r in rows] == \
            [("5", "0"), ("5", "1"), ("5", "2"), ("6", "0"), ("6", "1"), ("6", "2")]

    def test_theta_reproducible_from_energies(self, reports):
        for rep in reports:
            assert rep.certification == "oracle"
            ref = rep.ground_energy_reference
            hits = len([e for e in rep.energies if e - ref <= 1e-9])
            assert min(rep.energies) >= ref - 1e-9
            assert hits == rep.report.hits and rep.report.theta == hits / len(rep.energies)

    def test_deterministic_modulo_timing(self, reports):
        again = run_campaign(CampaignSpec(**SMALL))
        assert strip_timing(campaign_csv(reports)) == strip_timing(campaign_csv(again))
        assert [r.energies for r in reports] == [r.energies for r in again]

    def test_json(self, reports, tmp_path):
        data = campaign_json(reports, {"tool": "olcanneal"})
        assert set(data["summary"]) == {"5", "6"}
        path = write_campaign_json(tmp_path / "c.json", data)
        assert path.suffix == ".json"
        assert json.loads(path.read_text())["instances"][0]["length"] == 5

    def test_json_gzip(self, tmp_path):
        data = {"blob": "x" * (11 * 1024 * 1024)}
        path = write_campaign_json(tmp_path / "c.json", data)
        assert path.name == "c.json.gz"
        with gzip.open(path) as fh:
            assert json.load(fh) == data
