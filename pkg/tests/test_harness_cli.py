"""Crosscheck reports, bench CSV/figures, and the CLI end to end."""

from __future__ import annotations

import csv
import json
import io

import pytest

from medianecc.cli import main
from medianecc.harness import bench, crosscheck, fit_slopes, rows_to_csv, \
    render_bench_figures
from medianecc.generators import cogwheel, hypercube, mulder_random, parse_spec

from conftest import k23_graph


def test_crosscheck_green_instances():
    for g, label in ((hypercube(4), "Q4"), (cogwheel(5), "KC5"),
                     (mulder_random(60, 2), "mulder60")):
        report = crosscheck(g, instance_label=label)
        assert report.ok, [c.as_dict() for c in report.checks
                           if c.status == "fail"]
        payload = report.as_dict()
        assert payload["schema"] == 1
        assert payload["ok"] is True


def test_crosscheck_k23_short_circuits():
    report = crosscheck(k23_graph(), instance_label="K23")
    assert not report.ok
    assert report.checks[0].name == "verify-median"
    assert report.checks[0].status == "fail"
    assert len(report.checks) == 1


def test_bench_row_contract(tmp_path):
    specs = [parse_spec(f"hypercube:d={d}") for d in range(3, 6)]
    rows = bench(specs, ["oracle", "split"])
    timing = [r for r in rows if r["row"] == "timing"]
    slopes = [r for r in rows if r["row"] == "slope"]
    assert len(timing) == 6
    assert {r["algo"] for r in slopes} == {"oracle", "split"}
    text = rows_to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == len(rows)
    figures = render_bench_figures(rows, tmp_path / "figs")
    assert figures and all(path.endswith(".png") for path in figures)


def test_bench_empty_is_header_only():
    text = rows_to_csv(bench([], ["oracle"]))
    assert text.count("\n") == 1


def test_fit_slopes_needs_two_sizes():
    rows = bench([parse_spec("hypercube:d=3")], ["oracle"])
    assert fit_slopes(rows) == []


def test_cli_gen_theta_stats_roundtrip(tmp_path):
    path = tmp_path / "g.txt"
    assert main(["gen", "hypercube:d=3", "--output", str(path)]) == 0
    out = tmp_path / "stats.json"
    assert main(["stats", "--input", str(path), "--output", str(out)]) == 0
    stats = json.loads(out.read_text())
    assert stats == {"n": 8, "m": 12, "q": 3, "d": 3, "pofs": 8,
                     "hypercubes": 19, "mops": 7, "maximal_pofs": 1}
    assert main(["theta", "--input", str(path), "--output",
                 str(tmp_path / "t.txt")]) == 0


def test_cli_ecc_and_reach(tmp_path):
    path = tmp_path / "g.txt"
    main(["gen", "mulder-random:n=40", "--seed", "5", "--output", str(path)])
    for algo in ("oracle", "fpt-naive", "fpt-mop", "fpt-minpar", "split"):
        out = tmp_path / f"ecc_{algo}.json"
        assert main(["ecc", "--input", str(path), "--algo", algo,
                     "--output", str(out)]) == 0
    payloads = [json.loads((tmp_path / f"ecc_{a}.json").read_text())
                for a in ("oracle", "fpt-naive", "fpt-mop", "fpt-minpar", "split")]
    assert all(p["ecc"] == payloads[0]["ecc"] for p in payloads)
    assert payloads[0]["diameter"] == max(payloads[0]["ecc"])
    assert payloads[0]["radius"] == min(payloads[0]["ecc"])

    for algo in ("oracle", "labels"):
        out = tmp_path / f"rc_{algo}.json"
        assert main(["reach", "--input", str(path), "--algo", algo,
                     "--output", str(out)]) == 0
    rc1 = json.loads((tmp_path / "rc_oracle.json").read_text())["rc"]
    rc2 = json.loads((tmp_path / "rc_labels.json").read_text())["rc"]
    assert rc1 == rc2


def test_cli_wopp(tmp_path):
    path = tmp_path / "kc5.txt"
    main(["gen", "cogwheel:k=5", "--output", str(path)])
    out = tmp_path / "wopp.json"
    assert main(["wopp", "--input", str(path), "--output", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["central"] == 0
    hub = next(e for e in payload["opposites"] if e["vertex"] == 0)
    assert hub["pof"] == [] and hub["weight"] == 2
    singles = [e for e in payload["opposites"] if len(e["pof"]) == 1]
    assert all(e["weight"] == 2 for e in singles)

    # custom weights: make one pair heavy, opposites follow the weights
    weights = tmp_path / "w.txt"
    g_lines = "\n".join(f"{v} {1 if v != 10 else 50}" for v in range(11))
    weights.write_text(g_lines + "\n")
    out2 = tmp_path / "wopp2.json"
    assert main(["wopp", "--input", str(path), "--weights", str(weights),
                 "--output", str(out2)]) == 0
    payload2 = json.loads(out2.read_text())
    hub2 = next(e for e in payload2["opposites"] if e["vertex"] == 0)
    assert hub2["weight"] == 50


def test_cli_wopp_rejects_non_simplex(tmp_path):
    path = tmp_path / "p4.txt"
    path.write_text("0 1\n1 2\n2 3\n")
    assert main(["wopp", "--input", str(path)]) == 1


def test_cli_verify_exit_codes(tmp_path):
    ok_path = tmp_path / "q2.txt"
    main(["gen", "hypercube:d=2", "--output", str(ok_path)])
    assert main(["verify", "--input", str(ok_path)]) == 0
    bad_path = tmp_path / "k23.txt"
    bad_path.write_text(k23_graph().to_edge_list())
    assert main(["verify", "--input", str(bad_path)]) == 1


def test_cli_crosscheck_exit_codes(tmp_path):
    assert main(["crosscheck", "--spec", "hypercube:d=3"]) == 0
    bad_path = tmp_path / "k23.txt"
    bad_path.write_text(k23_graph().to_edge_list())
    assert main(["crosscheck", "--input", str(bad_path)]) == 1


def test_cli_usage_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 zero\n")
    assert main(["ecc", "--input", str(bad)]) == 2
    assert main(["gen", "nosuchfamily:d=1"]) == 2
    assert main(["ecc", "--input", str(tmp_path / "missing.txt")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["ecc", "--algo", "nonsense"])
    assert exc.value.code == 2


def test_cli_bench_with_plot(tmp_path):
    out = tmp_path / "bench.csv"
    figdir = tmp_path / "figs"
    assert main(["bench", "hypercube:d=3", "hypercube:d=4",
                 "--algos", "oracle,fpt-minpar", "--output", str(out),
                 "--plot", str(figdir)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len([r for r in rows if r["row"] == "timing"]) == 4
    assert list(figdir.glob("*.png"))
