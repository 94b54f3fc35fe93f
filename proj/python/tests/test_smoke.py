import math

import pytest

import kahlerdyn

CAT = {"type": "torus", "A": [[2, 1], [1, 1]]}


def test_commands_listed():
    assert "degrees" in kahlerdyn.commands
    assert kahlerdyn.thread_count() >= 1


def test_catmap_degrees():
    d = [float(x) for x in kahlerdyn.degrees(CAT)]
    golden = (3 + math.sqrt(5)) / 2
    assert d[0] == 1.0 and d[2] == 1.0
    assert d[1] == pytest.approx(golden**2, rel=1e-14)


def test_jordan_block():
    r = kahlerdyn.jordan([["2", "1"], ["0", "2"]])
    assert r["m"] == 2
    assert float(r["lambda"]) == 2.0


def test_exact_decimal_resolves():
    c = kahlerdyn.resolve_config({"model": {"type": "torus", "A": [["1.5", "0.1+0.2i"], [1, 1]]}})
    assert c["model"]["A"][0] == ["3/2", "1/10+1/5i"]


def test_zero_frequency_error():
    cfg = {"model": CAT, "mixing": {"m": [0, 0, 0, 0], "m_prime": [1, 0, 0, 0]}}
    with pytest.raises(kahlerdyn.KdynError) as err:
        kahlerdyn.run(cfg, "mixing")
    assert err.value.code == "ZeroFrequency"
    record = kahlerdyn.run(cfg, "mixing", check=False)
    assert record["status"] == "error"


def test_unknown_field_rejected():
    with pytest.raises(kahlerdyn.KdynError) as err:
        kahlerdyn.resolve_config({"model": CAT, "colour": "blue"})
    assert err.value.code == "ValidationError"


def test_mixing_record_is_deterministic():
    cfg = {"model": CAT, "mixing": {"m": [1, 0, 0, 0], "m_prime": [0, 1, 0, 0], "n_hi": 20}}
    a = kahlerdyn.run(cfg, "mixing")
    b = kahlerdyn.run(cfg, "mixing")
    assert a == b
    assert all(x == "0" for x in a["result"]["exact"])
