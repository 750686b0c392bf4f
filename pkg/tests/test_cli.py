import pytest

from walkprove.cli import RunConfig, dump_config, main, parse_prime_range, read_config
from walkprove.exactarith import prime_pool

from kreweras_data import P_TEXT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("steps,n,want", [("E,W,NE,SW", 8, "782"), ("W,S,NE", 0, "1"),
                                          ("W,S,NE", 9, "192")])
def test_count_endpoint(capsys, steps, n, want):
    code, out, _ = run(capsys, "count", "--steps", steps, "--n", str(n), "--end", "0,0")
    assert code == 0 and out.strip() == want


def test_count_slice_and_bad_steps(capsys):
    code, out, _ = run(capsys, "count", "--steps", "N,E", "--n", "2")
    assert code == 0 and out.split("\n")[0].split() == ["0", "0", "1"]
    code, _, err = run(capsys, "count", "--steps", "W,S,X", "--n", "3")
    assert code == 2 and "unknown step" in err
    code, _, _ = run(capsys, "count", "--steps", "W,S,NE", "--n", "3", "--end", "1")
    assert code == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "guess", "--steps", "NE,NE")[0] == 2


def test_guess_kreweras_summary(capsys, tmp_path):
    out_file = tmp_path / "P.txt"
    code, out, _ = run(capsys, "guess", "--steps", "W,S,NE", "--N", "80", "--out", str(out_file))
    assert code == 0
    assert "degT=6 degt=10 degx=6" in out
    assert "candidate: " in out_file.read_text()


def test_guess_failure_reports_precision(capsys):
    code, _, err = run(capsys, "guess", "--steps", "W,S,NE", "--N", "30")
    assert code == 1 and "30" in err


def test_guess_operator_and_pcurv(capsys, tmp_path):
    f = tmp_path / "L00.txt"
    code, out, _ = run(capsys, "guess", "--steps", "W,S,NE", "--section", "00", "--kind",
                       "differential", "--N", "100", "--max-main-degree", "3",
                       "--max-t-degree", "6", "--out", str(f))
    assert code == 0 and "order=3" in out
    code, out, _ = run(capsys, "pcurv", "--operator", str(f), "--primes", "5-13")
    assert code == 0
    rows = out.strip().split("\n")[1:]
    assert [r.split()[1] for r in rows] == ["zero"] * 4


def test_modular_operator_images(capsys):
    code, out, _ = run(capsys, "guess", "--steps", "W,S,NE", "--kind", "differential", "--x0",
                       "1", "--N", "400", "--primes", "1", "--max-main-degree", "6",
                       "--max-t-degree", "12")
    assert code == 0 and "gcrd order=" in out


def test_pcurv_tables(capsys, tmp_path):
    sq = tmp_path / "sqrt.op"
    sq.write_text("4 + 2*(1 - 4*t)*Dt\n")
    ex = tmp_path / "exp.op"
    ex.write_text("# e^t\nDt - 1\n")
    code, out, _ = run(capsys, "pcurv", "--operator", str(sq), "--primes", "3,5,7")
    assert code == 0 and out.count("zero") == 3 and "nonzero" not in out
    code, out, _ = run(capsys, "pcurv", "--operator", str(ex), "--primes", "3,5,7")
    assert out.count("nonzero") == 3
    code, out, _ = run(capsys, "pcurv", "--operator", str(ex))
    assert code == 0 and len(out.strip().split("\n")) == 1
    bad = tmp_path / "bad.op"
    bad.write_text("Dt^^2")
    assert run(capsys, "pcurv", "--operator", str(bad), "--primes", "3")[0] == 2


def test_prime_range_parsing():
    assert parse_prime_range("3-30") == [3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert parse_prime_range("") == []
    with pytest.raises(ValueError):
        parse_prime_range("4")


@pytest.fixture(scope="module")
def kreweras_cert_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cert") / "k.cert"
    assert main(["prove", "--steps", "W,S,NE", "--mode", "exact", "--out", str(path)]) == 0
    return path


def test_prove_exact_certificate(kreweras_cert_file):
    text = kreweras_cert_file.read_text()
    assert "status: verified" in text
    assert "resultant = P^2 * (" in text


def test_prove_recheck_and_corruption(capsys, kreweras_cert_file, tmp_path):
    code, out, _ = run(capsys, "prove", "--steps", "W,S,NE", "--candidate", str(kreweras_cert_file))
    assert code == 0 and "FAILED" not in out
    bad = tmp_path / "bad.cert"
    bad.write_text(kreweras_cert_file.read_text().replace("candidate.P: ", "candidate.P: t^7*T + "))
    code, out, _ = run(capsys, "prove", "--steps", "W,S,NE", "--candidate", str(bad))
    assert code == 1 and "FAILED" in out


def test_prove_with_polynomial_candidate(capsys, tmp_path):
    good = tmp_path / "P.poly"
    good.write_text(P_TEXT)
    assert run(capsys, "prove", "--steps", "W,S,NE", "--candidate", str(good))[0] == 0
    bad = tmp_path / "Pbad.poly"
    bad.write_text(P_TEXT.replace("-2*t+x", "-2*t+x+t^5"))
    code, out, _ = run(capsys, "prove", "--steps", "W,S,NE", "--candidate", str(bad))
    assert code == 1 and "status: failed" in out


def test_config_file_and_prime_include(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("WALKPROVE_PRIMES", raising=False)
    ps = prime_pool(3)
    (tmp_path / "primes.txt").write_text(f"# fixed list\n{ps[2]}\n{ps[1]}\n")
    conf = tmp_path / "run.conf"
    conf.write_text("steps = E,W,NE,SW\nN = 40\nprimes = 2\ninclude = primes.txt\n")
    cfg = read_config(conf)
    assert cfg.steps == "E,W,NE,SW" and cfg.N == 40
    assert cfg.prime_list() == [ps[2], ps[1]]
    code, out, _ = run(capsys, "--config", str(conf), "--dump-config")
    assert code == 0 and "steps = E,W,NE,SW" in out and "primes.txt" in out
    code, out, _ = run(capsys, "--config", str(conf), "count", "--n", "4", "--end", "0,0")
    assert out.strip() == "11"
    conf.write_text("colour = blue\n")
    assert run(capsys, "--config", str(conf), "count", "--n", "1")[0] == 2


def test_environment_prime_file_overrides(tmp_path, monkeypatch):
    ps = prime_pool(4)
    f = tmp_path / "env_primes.txt"
    f.write_text(f"{ps[3]}, {ps[0]}  # two primes\n")
    monkeypatch.setenv("WALKPROVE_PRIMES", str(f))
    assert prime_pool(2) == [ps[3], ps[0]]
    assert RunConfig(primes=2, prime_file="ignored").prime_list() == [ps[3], ps[0]]
    monkeypatch.setenv("WALKPROVE_PRIMES", f"{ps[1]},{ps[2]}")
    assert prime_pool(1) == [ps[1]]


def test_dump_config_lists_every_key():
    text = dump_config(RunConfig())
    for key in ("steps", "N", "primes", "prime_file", "points", "mode", "threads"):
        assert f"\n{key} = " in "\n" + text


def test_guess_with_point_range(capsys):
    # Kreweras is symmetric: G(t; 0, y) satisfies the same equation as G(t; x, 0)
    code, out, _ = run(capsys, "guess", "--steps", "W,S,NE", "--section", "0y", "--N", "80",
                       "--points", "1-40")
    assert code == 0 and "degT=6 degt=10 degx=6" in out
