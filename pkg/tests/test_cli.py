import json

from isovolc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_graph_json_golden(capsys):
    code, out, _ = run(capsys, "graph", "--p", "1009", "--ell", "3",
                       "--format", "json", "--no-meta")
    assert code == 0
    doc = json.loads(out)
    assert doc["p"] == 1009 and doc["ell"] == 3
    assert doc["supersingular"] == [149, 155, 157, 529, 602, 605, 838, 890, 897, 905]
    assert "meta" not in doc
    assert all(check["passed"] for check in doc["audits"])


def test_graph_dot_triple_edge(capsys):
    code, out, _ = run(capsys, "graph", "--p", "7", "--ell", "3",
                       "--format", "dot", "--no-meta")
    assert code == 0
    assert out.count("0 -> 3;") == 3


def test_graph_rejects_bad_p(capsys):
    code, _, err = run(capsys, "graph", "--p", "4", "--ell", "3")
    assert code == 1
    assert "prime" in err


def test_graph_rejects_bad_ell(capsys):
    code, _, err = run(capsys, "graph", "--p", "11", "--ell", "9")
    assert code == 1


def test_graph_cap_exceeded_is_usage_error(capsys):
    code, _, err = run(capsys, "graph", "--p", "1009", "--ell", "3",
                       "--graph-cap", "100")
    assert code == 1


def test_output_deterministic_with_no_meta(capsys):
    code1, out1, _ = run(capsys, "graph", "--p", "103", "--ell", "2",
                         "--format", "json", "--no-meta")
    code2, out2, _ = run(capsys, "graph", "--p", "103", "--ell", "2",
                         "--format", "json", "--no-meta")
    assert code1 == code2 == 0
    assert out1 == out2


def test_out_file_written_atomically(tmp_path, capsys):
    path = tmp_path / "graph.json"
    code, out, _ = run(capsys, "graph", "--p", "103", "--ell", "2",
                       "--format", "json", "--no-meta", "--out", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert doc["p"] == 103
    leftovers = [f for f in tmp_path.iterdir() if f.name.startswith(".isovolc-")]
    assert not leftovers


def test_atlas_tally_1009(capsys):
    code, out, _ = run(capsys, "atlas", "--p", "1009", "--ell", "3", "--no-meta")
    assert code == 0
    assert out.rstrip().endswith("tally 10+37+44+211+430+85+192 = 1009 = p")


def test_atlas_trace_7321(capsys):
    code, out, _ = run(capsys, "atlas", "--p", "7321", "--ell", "2",
                       "--trace", "22", "--no-meta")
    assert code == 0
    assert "belt m=1: order disc -1800 h=12" in out
    assert "belt m=15: order disc -8 h=1" in out


def test_audit_1009(capsys):
    code, out, _ = run(capsys, "audit", "--p", "1009", "--ell", "3", "--no-meta")
    assert code == 0
    assert "tally 10+37+44+211+430+85+192 = 1009 = p" in out
    assert "FAIL" not in out


def test_order_split(capsys):
    code, out, _ = run(capsys, "order", "--disc", "-39", "--ell", "2")
    assert code == 0
    assert out.strip() == "split, order 4"


def test_order_inert(capsys):
    code, out, _ = run(capsys, "order", "--disc", "-4027", "--ell", "3")
    assert code == 0
    assert out.strip() == "inert"


def test_order_non_invertible(capsys):
    code, out, _ = run(capsys, "order", "--disc", "-12", "--ell", "2")
    assert code == 0
    assert "non-invertible" in out


def test_order_invalid_disc(capsys):
    code, _, err = run(capsys, "order", "--disc", "5", "--ell", "2")
    assert code == 1


def test_inverse_cycle6(capsys):
    code, out, _ = run(capsys, "inverse", "--crater", "cycle:6", "--ell", "2",
                       "--depth", "1", "--strategy", "minimal")
    assert code == 0
    first = json.loads(out.splitlines()[0])
    assert first["D"] == -87 and first["p"] == 103 and first["verified"]


def test_inverse_point_depth0(capsys):
    code, out, _ = run(capsys, "inverse", "--crater", "point", "--depth", "0")
    assert code == 0
    cert = json.loads(out.splitlines()[0])
    assert cert["verified"] and cert["ell"] % 2 == 1


def test_inverse_jsonlines_count(capsys):
    code, out, _ = run(capsys, "inverse", "--crater", "cycle:6", "--ell", "2",
                       "--depth", "1", "--count", "3")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    primes = [json.loads(line)["p"] for line in lines]
    assert len(set(primes)) == 3 and primes == sorted(primes)


def test_inverse_rejects_cycle2(capsys):
    code, _, err = run(capsys, "inverse", "--crater", "cycle:2")
    assert code == 1
    assert "cycle" in err


def test_inverse_rejects_ell2_depth0(capsys):
    code, _, err = run(capsys, "inverse", "--crater", "doubleselfloop",
                       "--ell", "2", "--depth", "0")
    assert code == 1


def test_inverse_search_exhausted_exit3(capsys):
    code, _, err = run(capsys, "inverse", "--crater", "cycle:6", "--ell", "2",
                       "--depth", "1", "--count", "50",
                       "--search-bound", "200")
    assert code == 3


def test_threads_flag_validated(capsys):
    code, _, err = run(capsys, "graph", "--p", "103", "--ell", "2",
                       "--threads", "0")
    assert code == 1


def test_usage_error_on_unknown_command(capsys):
    code, _, err = run(capsys, "volcano")
    assert code == 1
