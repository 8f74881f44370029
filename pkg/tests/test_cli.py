import json
from fractions import Fraction

import pytest

from secs.cli import EXIT_EMPTY, EXIT_ERROR, EXIT_OK, main

from .strategies import FIXTURES

FIG1 = str(FIXTURES / "fig1.txt")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_query_fig1(capsys):
    code, out, _ = run(capsys, "query", "--input", FIG1, "--query", "0", "--k", "2", "--format", "jsonl")
    assert code == EXIT_OK
    (rec,) = jsonl(out)
    assert Fraction(rec["el_exact"]) >= Fraction(1, 3)
    assert 0 in rec["vertices"] and rec["found"]


def test_query_table_format(capsys):
    code, out, _ = run(capsys, "query", "--input", FIG1, "--query", "0", "--algo", "tdgp")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("algorithm")


def test_query_no_community(capsys):
    code, out, err = run(capsys, "query", "--input", FIG1, "--query", "0", "--k", "999", "--format", "jsonl")
    assert code == EXIT_EMPTY
    assert jsonl(out)[0]["found"] is False
    assert "no community" in err


def test_query_deterministic_except_timing(capsys):
    recs = []
    for _ in range(2):
        _, out, _ = run(capsys, "query", "--input", FIG1, "--query", "3", "--format", "jsonl")
        rec = jsonl(out)[0]
        rec.pop("elapsed_us")
        recs.append(rec)
    assert recs[0] == recs[1]


def test_unknown_vertex(capsys):
    code, _, err = run(capsys, "query", "--input", FIG1, "--query", "77")
    assert code == EXIT_ERROR and "77" in err


def test_missing_file_and_bad_format(capsys, tmp_path):
    code, _, err = run(capsys, "stats", "--input", str(tmp_path / "nope.txt"))
    assert code == EXIT_ERROR
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2\n0 x 3\n")
    code, _, err = run(capsys, "stats", "--input", str(bad))
    assert code == EXIT_ERROR and "line 2" in err


def test_stats(capsys):
    code, out, _ = run(capsys, "stats", "--input", FIG1, "--format", "jsonl")
    assert code == EXIT_OK
    (row,) = jsonl(out)
    assert row["n"] == 7 and row["temporal_edges"] == 27 and row["timestamps"] == 5


def test_bench_rows(capsys):
    code, out, _ = run(capsys, "bench", "--input", FIG1, "--queries", "5", "--threads", "1",
                       "--algo", "tdgp", "buls", "buls+", "buls*", "--format", "jsonl")
    assert code == EXIT_OK
    rows = jsonl(out)
    assert len([r for r in rows if not r.get("summary")]) == 20
    assert len([r for r in rows if r.get("summary")]) == 4


def test_bench_oracle_column(capsys):
    code, out, _ = run(capsys, "bench", "--input", FIG1, "--queries", "3", "--threads", "1",
                       "--oracle", "--details")
    assert code == EXIT_OK
    assert "dominated" in out and "dominance_ok" in out


def test_bench_vns_is_seeded(capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "bench", "--input", FIG1, "--queries", "3", "--threads", "1",
                        "--vns", "0.5", "--seed", "7", "--format", "jsonl")
        rows = jsonl(out)
        for r in rows:
            r.pop("elapsed_us", None)
            r.pop("mean_runtime_us", None)
        outs.append(rows)
    assert outs[0] == outs[1]


def test_bench_records_file(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, _, _ = run(capsys, "bench", "--input", FIG1, "--queries", "2", "--threads", "1", "--records", str(path))
    assert code == EXIT_OK
    assert len(path.read_text().splitlines()) == 2 * 4


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--input", FIG1, "--trials", "20")
    assert code == EXIT_OK
    assert "all checks passed" in out


def test_generate_roundtrip(capsys, tmp_path):
    path = tmp_path / "g.txt"
    code, _, _ = run(capsys, "generate", "--n", "100", "--m", "400", "--timestamps", "4", "--output", str(path))
    assert code == EXIT_OK
    code, out, _ = run(capsys, "stats", "--input", str(path), "--format", "jsonl")
    assert code == EXIT_OK and jsonl(out)[0]["timestamps"] <= 4


def test_time_scale_buckets(capsys, tmp_path):
    path = tmp_path / "raw.txt"
    path.write_text("1 2 100\n2 3 160\n1 3 250\n")
    code, out, _ = run(capsys, "stats", "--input", str(path), "--time-scale", "100", "--format", "jsonl")
    assert jsonl(out)[0]["timestamps"] == 2


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["query"])
    assert exc.value.code == 2


def test_stats_on_empty_file(capsys, tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("# only a comment\n\n")
    code, _, err = run(capsys, "stats", "--input", str(path))
    assert code == EXIT_ERROR and err


def test_stats_recount(capsys, tmp_path):
    import random

    rng = random.Random(1)
    lines = {(rng.randint(0, 30), rng.randint(0, 30), rng.randint(0, 9)) for _ in range(200)}
    lines = {(a, b, t) for a, b, t in lines if a != b}
    path = tmp_path / "r.txt"
    path.write_text("".join(f"{a} {b} {t}\n" for a, b, t in lines))
    _, out, _ = run(capsys, "stats", "--input", str(path), "--format", "jsonl")
    row = jsonl(out)[0]
    triples = {(min(a, b), max(a, b), t) for a, b, t in lines}
    assert row["temporal_edges"] == len(triples)
    assert row["static_edges"] == len({(a, b) for a, b, _ in triples})
    assert row["n"] == len({x for a, b, _ in triples for x in (a, b)})
    assert row["timestamps"] == len({t for *_, t in triples})


def test_table_and_jsonl_agree(capsys):
    _, out, _ = run(capsys, "query", "--input", FIG1, "--query", "0", "--format", "jsonl")
    rec = jsonl(out)[0]
    _, out, _ = run(capsys, "query", "--input", FIG1, "--query", "0")
    table = dict(line.split(None, 1) for line in out.splitlines())
    for key in ("el", "td", "tc", "vertices", "interval", "el_exact"):
        assert table[key].strip() == str(rec[key])
