import json

import pytest

from rulingset.cli import main


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_generate_grid(tmp_path, capsys):
    out = str(tmp_path / "g.txt")
    code, text = run(["generate", "grid", "--rows", "3", "--cols", "3", "--out", out], capsys)
    assert code == 0 and "n=9 m=12" in text


def test_generate_star_cluster_degree(tmp_path, capsys):
    out = str(tmp_path / "s.txt")
    code, text = run(["generate", "star-cluster", "--hubs", "3", "--degree", "7", "--out", out], capsys)
    assert code == 0 and "max_degree=7" in text


def test_generate_is_deterministic(tmp_path, capsys):
    a, b = str(tmp_path / "a.txt"), str(tmp_path / "b.txt")
    for out in (a, b):
        main(["generate", "gnp-capped", "--n", "50", "--p", "0.2", "--cap", "6", "--seed", "9", "--out", out])
    capsys.readouterr()
    assert open(a).read() == open(b).read()


def test_run_edgeless(tmp_path, capsys):
    g = write(tmp_path, "e.txt", "# n = 4\n")
    code, text = run(["run", g, "--json"], capsys)
    rep = json.loads(text)
    assert code == 0
    assert (rep["u_size"], rep["iterations"], rep["verified"]) == (4, 0, True)


def test_run_five_cycle_and_verify(tmp_path, capsys):
    g = write(tmp_path, "c5.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n")
    out = str(tmp_path / "u.txt")
    code, text = run(["run", g, "--json", "--set-out", out], capsys)
    rep = json.loads(text)
    assert code == 0 and rep["iterations"] == 0 and rep["verified"]
    assert open(out).read().split() == ["0", "2"]
    code, text = run(["verify", g, out], capsys)
    assert code == 0 and "independent: True" in text and "ruled: True" in text


def test_report_keys(tmp_path, capsys):
    g = write(tmp_path, "c5.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n")
    _, text = run(["run", g, "--json"], capsys)
    rep = json.loads(text)
    for key in ("n", "m", "delta0", "iterations", "per_iteration", "total_rounds", "u_size", "verified"):
        assert key in rep
    assert list(rep) == sorted(rep)


def test_verify_examples(tmp_path, capsys):
    k13 = write(tmp_path, "k13.txt", "0 1\n0 2\n0 3\n")
    center = write(tmp_path, "c.txt", "0\n")
    assert run(["verify", k13, center], capsys)[0] == 0
    p5 = write(tmp_path, "p5.txt", "0 1\n1 2\n2 3\n3 4\n")
    code, text = run(["verify", p5, center], capsys)
    assert code == 1 and "ruled: False" in text and "violating vertex: 4" in text
    both = write(tmp_path, "both.txt", "0\n1\n")
    code, text = run(["verify", k13, both], capsys)
    assert code == 1 and "independent: False" in text and "violating edge: 0 1" in text


def test_labels_survive_round_trip(tmp_path, capsys):
    g = write(tmp_path, "lab.txt", "hub a\nhub b\nhub c\n")
    out = str(tmp_path / "u.txt")
    assert run(["run", g, "--set-out", out], capsys)[0] == 0
    assert open(out).read().split() == ["hub"]
    assert run(["verify", g, out], capsys)[0] == 0


def test_precondition_exit_code(tmp_path, capsys):
    g = str(tmp_path / "d.txt")
    main(["generate", "gnp-capped", "--n", "200", "--p", "0.2", "--cap", "24", "--seed", "3", "--out", g])
    capsys.readouterr()
    code, text = run(["run", g, "--json", "--k-override", "2", "--degree-floor-const", "0"], capsys)
    assert code == 2
    assert json.loads(text)["error"] == "precondition"


def test_budget_exit_code(tmp_path, capsys):
    g = str(tmp_path / "s.txt")
    main(["generate", "star-cluster", "--hubs", "2", "--degree", "20", "--out", g])
    capsys.readouterr()
    code, _ = run(["run", g, "--k-override", "2", "--degree-floor-const", "0", "--budget", "8"], capsys)
    assert code == 2


def test_parse_errors(tmp_path, capsys):
    bad = write(tmp_path, "bad.txt", "0 1 2\n")
    assert main(["run", bad]) == 64
    assert main(["run", str(tmp_path / "missing.txt")]) == 64
    good = write(tmp_path, "g.txt", "0 1\n")
    unknown = write(tmp_path, "u.txt", "7\n")
    assert main(["verify", good, unknown]) == 64


def test_bad_flag_value_is_usage_error(tmp_path):
    g = write(tmp_path, "g.txt", "0 1\n")
    with pytest.raises(SystemExit) as err:
        main(["run", g, "--mode", "ring"])
    assert err.value.code == 64
    assert main(["run", g, "--epsilon", "2"]) == 64
    assert main(["run", g, "--epsilon", "abc"]) == 64


def test_generate_rejects_bad_parameters(tmp_path):
    out = str(tmp_path / "x.txt")
    assert main(["generate", "regular-ish", "--n", "5", "--d", "9", "--out", out]) == 64
    assert main(["generate", "grid", "--rows", "0", "--out", out]) == 64


def test_emitted_sets_pass_verify(tmp_path, capsys):
    g = str(tmp_path / "s.txt")
    main(["generate", "star-cluster", "--hubs", "4", "--degree", "24", "--seed", "2", "--out", g])
    capsys.readouterr()
    for mode in ("mpc", "clique"):
        out = str(tmp_path / f"{mode}.set")
        code = main(["run", g, "--mode", mode, "--k-override", "2", "--degree-floor-const", "0", "--set-out", out, "--json"])
        rep = json.loads(capsys.readouterr().out)
        assert code == 0 and rep["verified"] and rep["iterations"] == 1
        assert main(["verify", g, out]) == 0
        capsys.readouterr()
