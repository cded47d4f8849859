import json
import pathlib

import pytest

import fibext

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def load(name, **overrides):
    cfg = json.loads((CONFIGS / f"{name}.json").read_text())
    cfg.update(overrides)
    return cfg


def test_words():
    assert fibext.fib_word(4) == "abaab"
    assert fibext.palindrome_prefix(3) == "abaaba"
    assert fibext.palindrome_length(5) == fibext.fib_length(7) - 2


def test_rho_and_decompose():
    assert fibext.rho("rational-integers", 3, 4) == "2"
    assert fibext.degenerate_decompose("rational-integers", [-4, -6, -9]) == ("-1", "2", "3")
    assert fibext.degenerate_decompose("poly-over-prime-field", [[0, 0, 1], [0, 1, 1], [1, 0, 1]], p=2) == (
        "1",
        "u",
        "u+1",
    )


def test_construct_f2():
    run = fibext.construct(load("f2", N=12))
    assert run.exit_code() == 0
    rep = fibext.report(run)
    lam = [int(r["lambda"][0]) for r in rep["records"]]
    assert lam[:5] == [1, 3, 6, 11, 19]
    assert rep["constants"]["log_theta"] == ["2", "2"]
    rows = run.csv().splitlines()
    assert rows[0].startswith("i,lambda_lo,lambda_hi")
    assert len(rows) == 13


def test_oracle_and_determinism(tmp_path):
    cfg = load("f2", N=10)
    a = fibext.oracle(cfg, threads=1)
    b = fibext.oracle(cfg, threads=3)
    assert a.json() == b.json()
    assert a.scan_dat() == b.scan_dat()
    rep = fibext.report(a)
    assert [int(l["X"][0]) for l in rep["oracle"]["ladder"]] == [0, 2, 3, 6]
    files = a.export(str(tmp_path))
    assert {pathlib.Path(f).name for f in files} == {"trace.csv", "report.json", "ell_scan.dat"}


def test_errors():
    with pytest.raises(fibext.FibextError, match="a == b"):
        fibext.construct(load("z", b=3))
    with pytest.raises(fibext.FibextError, match="unsupported-domain"):
        fibext.oracle(load("zs5", N=8, oracle={"max_abs": 10, "primitive_only": True}))
    empty = fibext.oracle(load("z", N=8, oracle={"max_log_height": -1}))
    assert empty.exit_code() == 0
    assert fibext.report(empty)["oracle"]["empty"] is True
