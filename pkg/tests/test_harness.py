import csv
import io
import json

import numpy as np
import pytest

from polybound import (
    CapExceeded,
    EnclosureViolation,
    Family,
    InstanceSpec,
    MatrixPolynomial,
    ParseError,
    generate_instance,
    render,
    run_campaign,
    run_experiment,
    write_instance,
)
from polybound import harness
from polybound.core import AnnulusBound, BoundId


def test_generation_is_deterministic():
    spec = InstanceSpec(n=5, m=9, family=Family.SCALED_RANDOM, seed=42)
    assert generate_instance(spec) == generate_instance(spec)
    assert generate_instance(spec) != generate_instance(spec.with_seed(43))


def test_symmetric_family_is_exactly_symmetric():
    P = generate_instance(InstanceSpec(family=Family.SYMMETRIC_RANDOM, seed=3))
    for a in P.coefficients:
        assert np.array_equal(a, a.conj().T)
    np.testing.assert_array_equal(P[0], P[1])
    np.testing.assert_array_equal(P.leading, np.eye(5))


def test_scaled_family_is_graded():
    # A_i = 10^(i-3) R_i: ||A8|| is of order 1e5 and ||A8|| / ||A0|| of order 1e8
    for seed in range(1, 21):
        P = generate_instance(InstanceSpec(seed=seed))
        top = np.linalg.norm(P[8], 2)
        assert 1e4 < top < 1e7
        assert 1e6 < top / np.linalg.norm(P[0], 2) < 1e10
        np.testing.assert_array_equal(P.leading, np.eye(5))


def test_normal_draws_look_standard():
    z = harness._Draws(1).normal(200_001)
    assert len(z) == 200_001
    assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01


def test_uniform_switch():
    P = generate_instance(InstanceSpec(n=3, m=2, distribution="uniform", scale_offset=0, scale_base=1.0, seed=5))
    for a in P.coefficients[:-1]:
        assert np.all((a.real >= 0) & (a.real < 1))


def test_file_family(tmp_path):
    P = MatrixPolynomial((np.eye(2), 2 * np.eye(2)))
    path = tmp_path / "inst.json"
    path.write_text(write_instance(P))
    assert generate_instance(InstanceSpec(family=Family.FILE, path=str(path))) == P
    path.write_text("{}")
    with pytest.raises(ParseError):
        generate_instance(InstanceSpec(family=Family.FILE, path=str(path)))


def test_spec_validation(monkeypatch):
    with pytest.raises(ValueError):
        InstanceSpec(n=0)
    with pytest.raises(ValueError):
        InstanceSpec(seed=-1)
    with pytest.raises(ValueError):
        InstanceSpec(family=Family.FILE)
    monkeypatch.setenv("POLYBOUND_EIG_CAP", "40")
    with pytest.raises(CapExceeded):
        InstanceSpec(n=5, m=9)


def test_experiment_on_cyclotomic_quadratic():
    P = MatrixPolynomial(tuple(np.array([[1.0]]) for _ in range(3)))
    rep = run_experiment(P)
    r = rep.report
    assert r.true_max_modulus == pytest.approx(1.0, abs=1e-12)
    for b in r.bounds:
        if b.applicable and b.upper is not None:
            assert b.upper >= 1.0 - 1e-12
    names = [b.name for b in r.bounds]
    assert names.index("jlr_base_upper") in rep.upper_ranks
    assert r.all_enclosed


def test_experiment_on_non_hermitian_instance():
    rep = run_experiment(generate_instance(InstanceSpec(n=3, m=4, seed=11)))
    for b in rep.report.bounds:
        if b.source.value.startswith("ek_"):
            assert not b.applicable and "Hermitian" in b.reason
    assert all(v is None or v for v in rep.report.verdicts)
    assert rep.eigenvalue_count == 12


def test_ranks_are_permutations():
    rep = run_experiment(generate_instance(InstanceSpec(seed=2)), holder_ps=(2.0, 1e6))
    bounds = rep.report.bounds
    uppers = [i for i, b in enumerate(bounds) if b.applicable and b.upper is not None]
    lowers = [i for i, b in enumerate(bounds) if b.applicable and b.lower is not None]
    assert sorted(rep.upper_ranks) == uppers and sorted(rep.upper_ranks.values()) == list(range(1, len(uppers) + 1))
    assert sorted(rep.lower_ranks) == lowers and sorted(rep.lower_ranks.values()) == list(range(1, len(lowers) + 1))
    best = min(uppers, key=lambda i: bounds[i].upper)
    assert rep.upper_ranks[best] == 1


def test_campaign_of_one_matches_experiment():
    spec = InstanceSpec(n=3, m=3, seed=9)
    summary = run_campaign(spec, 1, seed0=9, keep_reports=True)
    direct = run_experiment(generate_instance(spec), spec=spec)
    assert summary.reports[0].to_dict() == direct.to_dict()
    for s in summary.stats:
        assert s.runs == 1


def test_campaign_scaled_100_runs():
    summary = run_campaign(InstanceSpec(), 100, seed0=1)
    assert summary.violations == 0
    doc = summary.to_dict()
    assert sum(b["sharpest_upper_fraction"] for b in doc["bounds"]) == pytest.approx(1.0)
    assert sum(b["sharpest_lower_fraction"] for b in doc["bounds"]) == pytest.approx(1.0)


def test_campaign_reports_offending_seed(monkeypatch):
    real = harness.all_bounds

    def broken(P, *args, **kwargs):
        return real(P, *args, **kwargs) + [AnnulusBound(BoundId.RATIO, upper=1e-9)]

    monkeypatch.setattr(harness, "all_bounds", broken)
    with pytest.raises(EnclosureViolation) as info:
        run_campaign(InstanceSpec(n=2, m=2), 5, seed0=100)
    assert info.value.seed == 100  # lowest offending seed
    with pytest.raises(ValueError):
        run_campaign(InstanceSpec(), 0)


def test_render_table_rows():
    P = MatrixPolynomial((np.eye(1), np.eye(1)))
    rep = run_experiment(P)
    text = render(rep, "table")
    assert "ratio" in text and "cauchy_r3" in text
    rows = [line for line in text.splitlines() if line.startswith(("dominance", "ek_", "cauchy", "jlr", "datt", "ratio", "holder"))]
    assert len(rows) == len(rep.report.bounds)


def test_render_single_applicable_bound():
    P = MatrixPolynomial((np.eye(1), np.eye(1)))
    rep = run_experiment(P)
    one = AnnulusBound(BoundId.RATIO, lower=0.5, upper=2.0)
    r = rep.report
    trimmed = harness.ExperimentReport(
        spec=None,
        report=type(r)(r.instance, r.norm, (one,), r.true_min_modulus, r.true_max_modulus, (True,), "ratio", "ratio"),
        upper_ranks={0: 1}, lower_ranks={0: 1}, eigenvalue_count=1, residual_flags=0, max_residual=0.0,
    )
    rows = list(csv.reader(io.StringIO(render(trimmed, "csv"))))
    assert len(rows) == 2 and rows[0][0] == "bound"


def test_render_csv_quotes_commas():
    rep = run_experiment(generate_instance(InstanceSpec(n=2, m=2, seed=4)))
    text = render(rep, "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["bound", "lower", "upper", "applicable", "enclosed", "upper_rank", "lower_rank", "comment"]
    assert len(rows) == len(rep.report.bounds) + 1
    # the ratio row has a two-part strictness comment containing a comma
    ratio = next(line for line in text.split("\r\n") if line.startswith("ratio"))
    assert ratio.endswith('"lower strict, upper strict"')
    assert float(next(r for r in rows if r[0] == "ratio")[2]) == next(
        b.upper for b in rep.report.bounds if b.name == "ratio")


def test_render_json_round_trip():
    spec = InstanceSpec(n=2, m=3, seed=8)
    rep = run_experiment(generate_instance(spec), holder_ps=(2.0, 3.5), spec=spec)
    text = render(rep, "json")
    doc = json.loads(text)
    assert doc == rep.to_dict()
    assert doc["instance"]["seed"] == 8 and "enclosure_tol" in doc["tolerances"]
    assert json.dumps(doc, indent=2, sort_keys=True) + "\n" == text


def test_render_campaign_formats():
    summary = run_campaign(InstanceSpec(n=2, m=2), 3, seed0=1)
    assert json.loads(render(summary, "json"))["seeds"] == [1, 3]
    assert "enclosure violations: 0" in render(summary, "table")
    rows = list(csv.reader(io.StringIO(render(summary, "csv"))))
    assert len(rows) == 1 + len(summary.stats)
    with pytest.raises(ValueError):
        render(summary, "xml")
