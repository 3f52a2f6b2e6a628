from fractions import Fraction

import pytest

import ccrelay


def test_ndt_spot_values():
    assert ccrelay.ndt(3, 1, 2) == (Fraction(2, 3), Fraction(2, 3))
    assert ccrelay.ndt(5, 2, 3) == (Fraction(3, 5), Fraction(3, 5))
    assert ccrelay.ndt(10, 2, 4, "B")[0] == Fraction(8, 3)


def test_sweep_at_gamma_0_2():
    rows = [r for r in ccrelay.gamma_sweep(10, 4) if abs(r["gamma"] - 0.2) < 1e-12]
    got = {r["strategy"]: r["T_ul"] for r in rows}
    assert got["A"] == pytest.approx(2.0, abs=1e-6)
    assert got["B"] == pytest.approx(8 / 3, abs=1e-6)
    assert got["proposed"] == pytest.approx(4 / 3, abs=1e-6)


def test_noiseless_run_recovers_everything():
    result = ccrelay.run(K=5, L=3, t=2, mode="noiseless", seed=4)
    assert len(result["users"]) == 5
    assert all(u["recovered"] for u in result["users"])
    assert {u["decoded_subpackets"] for u in result["users"]} == {6}


def test_noisy_run_is_deterministic():
    a = ccrelay.run(K=3, L=2, t=1, mode="noisy", snr_db=[0, 30], trials=5, seed=9)
    b = ccrelay.run(K=3, L=2, t=1, mode="noisy", snr_db=[0, 30], trials=5, seed=9, workers=2)
    assert a["ber"] == b["ber"]


def test_invalid_config_raises():
    with pytest.raises(ccrelay.ConfigError, match="K ≥ t\\+L violated"):
        ccrelay.run(K=3, L=3, t=1)
    with pytest.raises(ValueError):
        ccrelay.SystemParams(K=2, L=2, t=1)


def test_library_round_trip(tmp_path):
    params = ccrelay.SystemParams(K=4, L=2, t=1, f=12)
    lib = ccrelay.generate_library(params, seed=3)
    assert len(lib.file(1)) == params.file_bits
    path = tmp_path / "lib.bin"
    lib.save(path)
    assert ccrelay.FileLibrary.load(path) == lib


def test_modulation_round_trip():
    bits = [0, 1, 1, 0, 1, 1, 0, 0]
    assert list(ccrelay.demodulate(ccrelay.modulate(bits))) == bits
    assert list(ccrelay.demodulate(ccrelay.modulate(bits, 4), 4)) == bits
