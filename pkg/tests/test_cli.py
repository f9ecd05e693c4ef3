import json

import pytest

from qdaha.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_identities_a_mode(capsys):
    code, out, _ = run(capsys, "identities", "--a", "1", "--k", "1")
    assert code == 0
    ids = {r["id"] for r in json.loads(out)["records"]}
    assert {"eq5", "eq6", "eq9"} <= ids


def test_identities_root_mode(capsys):
    code, out, _ = run(capsys, "identities", "--rootN", "5", "--k", "1")
    assert code == 0
    recs = json.loads(out)["records"]
    assert any(r["id"] == "eq11" and r["pass"] for r in recs)


def test_identities_q_mode_with_seed(capsys):
    code, out, _ = run(capsys, "identities", "--q", "0.3", "--k", "0.7", "--seed", "4")
    assert code == 0
    recs = json.loads(out)["records"]
    assert sum(r["id"] == "eq24-gamma" for r in recs) == 3
    _, again, _ = run(capsys, "identities", "--q", "0.3", "--k", "0.7", "--seed", "4")
    assert again == out


@pytest.mark.parametrize("argv", [
    ["identities", "--rootN", "5", "--k", "3"],
    ["identities", "--rootN", "5", "--k", "1/2"],
    ["identities", "--rootN", "5", "--m", "2", "--k", "1"],
    ["identities", "--a", "1", "--q", "0.5", "--k", "1"],
    ["identities", "--a", "1", "--k", "1", "--digits", "10"],
    ["identities", "--a", "1", "--k", "1", "--format", "csv"],
    ["zeros", "--re", "-0.7,0", "--im", "1,2"],
    ["zeros", "--mode", "q"],
    ["no-such-command"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_macdonald_table(capsys):
    code, out, _ = run(capsys, "macdonald", "--range", "2")
    assert code == 0
    table = json.loads(out)
    assert len(table["records"]) == 5
    dual = table["duality"]
    assert all(dual[i][j] == dual[j][i] for i in range(5) for j in range(5))
    zero = next(r for r in table["records"] if r["b"] == [0])
    assert zero["coefficients"] == [{"exponent": [0], "value": "1"}]


def test_macdonald_orthogonality_flag(capsys):
    code, out, _ = run(capsys, "macdonald", "--range", "1", "--k", "2", "--order", "20")
    assert code == 0
    assert all(all(row) for row in json.loads(out)["orthogonality"])


def test_macdonald_numeric_a2(capsys):
    code, out, _ = run(capsys, "macdonald", "--type", "A", "--rank", "2", "--range", "1", "--q", "0.3", "--k", "0.6")
    assert code == 0
    assert all(float(r["eigen_residual"]) < 1e-20 for r in json.loads(out)["records"])


def test_zeros_classical(capsys):
    code, out, _ = run(capsys, "zeros", "--im", "0,20")
    assert code == 0
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 1 and rows[0].startswith("0.0000000000,14.1347251417")


def test_zeros_empty_region(capsys):
    code, out, _ = run(capsys, "zeros", "--im", "1,2")
    assert code == 0
    assert out.strip().splitlines() == ["k_re,k_im,a,residual,partner_re,partner_im,distance"]


def test_gauss_selberg_and_verlinde_are_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["gauss-selberg", "--max-N", "8", "--out", str(a)]) == 0
    assert main(["gauss-selberg", "--max-N", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(capsys, "verlinde", "--rootN", "5", "--k", "1")
    assert code == 0 and json.loads(out)["N"] == 5
    assert run(capsys, "verlinde", "--rootN", "5", "--k", "1")[1] == out


def test_failed_identity_exits_1(capsys, monkeypatch):
    from qdaha import rootsofunity

    real = rootsofunity.gauss_selberg

    def broken(N, k):
        r = real(N, k)
        r.rhs = r.rhs + 1
        return r

    monkeypatch.setattr(rootsofunity, "gauss_selberg", broken)
    code, out, _ = run(capsys, "identities", "--rootN", "5", "--k", "1")
    assert code == 1
    assert not next(r for r in json.loads(out)["records"] if r["id"] == "eq11")["pass"]
