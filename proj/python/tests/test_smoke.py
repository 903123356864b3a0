import math

import pytest

import ptspectra as pts

DDDP = {"family": "double_delta", "u": 2, "g": 0.1, "a": 4}
BOUND = (-4, -1e-4, -2, 2)


def test_double_delta_real_doublet_before_the_ep():
    rows = pts.eigenvalues(dict(DDDP, a=2), BOUND)
    assert len(rows) == 2
    for r in rows:
        assert r["classification"] == "real"
        assert r["energy"].imag == 0
        assert r["residual"] < 1e-8
    assert rows[0]["energy"].real < -1 < rows[1]["energy"].real


def test_scarf_ground_state():
    rows = pts.eigenvalues({"family": "scarf_ii", "v1": 2, "v2": 0}, (-2, -0.1, -0.1, 0.1))
    assert len(rows) == 1
    assert rows[0]["energy"] == pytest.approx(-1, abs=1e-7)


def test_conjugate_pairs_past_the_ep():
    rows = pts.eigenvalues({"family": "double_delta", "u": 2, "g": 0.1, "a": 6}, BOUND)
    assert len(rows) == 2
    a, b = (r["energy"] for r in rows)
    assert abs(a - b.conjugate()) < 1e-8
    assert rows[0]["pair_id"] == 1 and rows[1]["pair_id"] == 0


def test_oracle_matches_closed_form():
    spec = {"family": "double_delta", "u": 2, "g": 0, "a": 3}
    exact = sorted(r["energy"].real for r in pts.eigenvalues(spec, BOUND))
    approx = sorted(r["energy"].real for r in pts.oracle_eigenvalues(spec, BOUND, n=2000))
    assert len(approx) == len(exact)
    for e, o in zip(exact, approx):
        assert abs(e - o) < 5e-3


def test_scarf_ep_threshold():
    ep = pts.find_ep({"family": "scarf_ii", "v1": 4, "v2": 3.5}, "v2",
                     {"start": 3.5, "stop": 5, "num": 16}, (-3, -0.01, -2, 2))
    assert ep is not None
    assert ep["param_star"] == pytest.approx(4.25, abs=1e-3)
    assert 0.4 < ep["splitting_exponent"] < 0.6


def test_hermitian_sweep_merges():
    doc = pts.sweep({"family": "double_delta", "u": 2, "g": 0, "a": 0.5}, "a",
                    [0.5 + 0.25 * k for k in range(31)], BOUND)
    assert doc["transition"]["kind"] == "merging"
    assert all(r["im_E"] == 0 for r in doc["rows"])
    assert pts.find_ep({"family": "double_delta", "u": 2, "g": 0, "a": 0.5}, "a",
                       [0.5 + 0.25 * k for k in range(31)], BOUND) is None


def test_potential_and_characteristic():
    sdw = {"family": "square_double_well", "u": 50, "g": 5, "b": 1, "w": 1}
    assert pts.potential(sdw, 1.5) == complex(-50, 5)
    assert pts.potential(sdw, -1.5) == complex(-50, -5)
    e = pts.eigenvalues(DDDP, BOUND)[0]["energy"]
    assert abs(pts.characteristic(DDDP, e)) < 1e-8
    assert math.isinf(pts.potential({"family": "linear_box", "g": 1}, 2).real)


def test_presets():
    assert pts.preset_names() == ["fig2a", "fig2b", "fig2c", "fig3", "fig4", "fig5"]
    jobs = pts.preset_jobs("fig3")
    assert [j["label"] for j in jobs] == ["g0", "g0.1", "g1"]
    assert pts.config_hash({"x": 1, "y": 2}) == pts.config_hash({"y": 2, "x": 1})


def test_errors():
    with pytest.raises(pts.ConfigError):
        pts.eigenvalues({"family": "morse"}, BOUND)
    with pytest.raises(pts.ConfigError):
        pts.eigenvalues(DDDP, (1, 0, 0, 0))
    with pytest.raises(pts.Error):
        pts.preset_jobs("fig9")
    assert issubclass(pts.UnboundedBelow, pts.Error)
