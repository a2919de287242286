import numpy as np
import pytest

from qguess.errors import InvalidMeasurement, InvalidP, OddNUnsupported, OutOfRange
from qguess.polygon import (
    UNIT,
    ZERO,
    advantage_scan,
    extremal_binary_measurements,
    gpt_brute_force,
    gpt_brute_force_argmax,
    gpt_prob,
    gpt_success,
    hexagon_nc_bound,
    hexagon_scenario,
    polygon_scenario,
    polygon_theory,
    table1,
    table1_pattern,
)

TOL = 1e-12


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_polygon_invariants(n):
    th = polygon_theory(n)
    assert th.k == pytest.approx(np.sqrt(1 / np.cos(np.pi / n)))
    assert np.allclose(th.states[:, 2], 1)
    assert np.allclose(th.effects[:, 2], 0.5)
    probs = th.probability_matrix()
    assert probs.min() >= -TOL and probs.max() <= 1 + TOL
    for j in range(1, n + 1):
        assert gpt_prob(th.effect(j), th.state(j)) == pytest.approx(1, abs=TOL)
        assert gpt_prob(th.effect(j), th.state(j - 1)) == pytest.approx(1, abs=TOL)
        assert gpt_prob(th.unit, th.state(j)) == pytest.approx(1, abs=TOL)
        assert np.max(np.abs(th.effect(j) + th.effect(j + n // 2) - UNIT)) <= TOL


def test_square_and_hexagon_constants():
    sq = polygon_theory(4)
    assert gpt_prob(sq.effect(1), sq.state(1)) == pytest.approx(1)
    hexa = polygon_theory(6)
    assert hexa.k == pytest.approx(1.0746, abs=1e-4)
    assert gpt_prob(hexa.effect(1), hexa.state(5)) == pytest.approx(0.5, abs=TOL)


def test_polygon_rejects_bad_n():
    with pytest.raises(OddNUnsupported):
        polygon_theory(5)
    with pytest.raises(OutOfRange):
        polygon_theory(2)
    with pytest.raises(OutOfRange):
        polygon_theory(66)


def test_gpt_prob_examples():
    hexa = polygon_theory(6)
    for j in range(1, 7):
        assert gpt_prob(UNIT, hexa.state(j)) == 1.0
        assert gpt_prob(ZERO, hexa.state(j)) == 0.0
    sc = hexagon_scenario(0.4)
    assert gpt_prob(hexa.effect(1), sc.sigma2) == pytest.approx(0.8, abs=TOL)
    with pytest.raises(OutOfRange):
        gpt_prob(2 * UNIT, hexa.state(1), strict=True)


def test_hexagon_scenario_examples():
    hexa = polygon_theory(6)
    sc = hexagon_scenario(0.0)
    assert np.allclose(sc.sigma1, hexa.state(6)) and np.allclose(sc.sigma2, hexa.state(6))
    sc = hexagon_scenario(1.0)
    assert np.allclose(sc.sigma1, hexa.state(1)) and np.allclose(sc.sigma2, hexa.state(5))
    sc = hexagon_scenario(0.5)
    assert sc.c_value == 0.75 and sc.s_value == 0.75
    with pytest.raises(InvalidP):
        hexagon_scenario(1.5)


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_mixtures_of_perp_pairs_coincide(p):
    sc = hexagon_scenario(p)
    m1 = 0.5 * sc.sigma1 + 0.5 * sc.sigma1_perp
    m2 = 0.5 * sc.sigma2 + 0.5 * sc.sigma2_perp
    assert np.max(np.abs(m1 - UNIT)) <= TOL
    assert np.max(np.abs(m1 - m2)) <= TOL


def test_table1_examples():
    assert np.allclose(table1(1.0)[0], [1, 0.5, 0, 0.5], atol=TOL)
    assert np.allclose(table1(0.0)[2], [0.5] * 4, atol=TOL)
    for p in (0.0, 0.25, 0.7, 1.0):
        assert table1(p)[0, 0] == pytest.approx(1, abs=TOL)


def test_table1_closed_form_grid():
    for p in np.linspace(0, 1, 101):
        assert np.max(np.abs(table1(p) - table1_pattern(p))) <= TOL


def test_gpt_success_examples():
    for p1 in (0.1, 0.5, 0.8):
        for p in (0.0, 0.3, 1.0):
            sc = hexagon_scenario(p)
            assert gpt_success(sc, p1, sc.measurements["M3"]) == pytest.approx((1 + p) / 2, abs=TOL)
    sc = hexagon_scenario(0.6)
    assert gpt_success(sc, 0.3, (UNIT, ZERO)) == pytest.approx(0.3)
    sc = hexagon_scenario(1.0)
    assert gpt_success(sc, 0.5, sc.measurements["M1"]) == pytest.approx(0.75, abs=TOL)
    with pytest.raises(InvalidMeasurement):
        gpt_success(sc, 0.5, (UNIT, UNIT))


def test_nc_bound_examples():
    assert hexagon_nc_bound(1.0, 0.5) == pytest.approx(0.75)
    for p1 in (0.1, 0.5, 0.9):
        assert hexagon_nc_bound(0.0, p1) == pytest.approx(max(p1, 1 - p1))
    assert hexagon_nc_bound(0.5, 0.5) == pytest.approx(0.625)
    with pytest.raises(InvalidP):
        hexagon_nc_bound(0.5, 1.5)


def test_brute_force_examples():
    sc = hexagon_scenario(0.6)
    assert gpt_brute_force(sc, 0.5) == pytest.approx(0.8, abs=TOL)
    assert gpt_brute_force_argmax(sc, 0.5)[0] == "e2"
    for p1 in (0.2, 0.5, 0.7):
        assert gpt_brute_force(hexagon_scenario(0.0), p1) == pytest.approx(max(p1, 1 - p1), abs=TOL)


def test_brute_force_hexagon_grid():
    for p in np.linspace(0, 1, 101):
        sc = hexagon_scenario(p)
        assert gpt_brute_force(sc, 0.5) == pytest.approx((1 + p) / 2, abs=TOL)
        assert gpt_brute_force(sc, 0.5) >= gpt_success(sc, 0.5, sc.measurements["M3"]) - TOL


def test_extremal_measurements_are_complete():
    th = polygon_theory(8)
    ms = extremal_binary_measurements(th)
    assert len(ms) == th.n + 2
    for _, (e, ebar) in ms:
        assert np.max(np.abs(e + ebar - UNIT)) <= TOL


def test_mixed_measurements_do_not_beat_extremal_ones():
    """Random convex mixtures of extremal effects never exceed the brute-force optimum."""
    rng = np.random.default_rng(0)
    for n in (6, 8):
        th = polygon_theory(n)
        for p in (0.3, 0.8):
            sc = polygon_scenario(n, p)
            best = gpt_brute_force(sc, 0.5, th)
            for _ in range(200):
                w = rng.dirichlet(np.ones(n + 2))
                pool = [th.effect(j) for j in range(1, n + 1)] + [UNIT, ZERO]
                e = sum(wi * ei for wi, ei in zip(w, pool))
                assert gpt_success(sc, 0.5, (e, UNIT - e)) <= best + TOL


def test_octagon_scenario():
    th = polygon_theory(8)
    sc = polygon_scenario(8, 1.0)
    assert np.allclose(sc.sigma1, th.state(1)) and np.allclose(sc.sigma2, th.state(7))
    assert np.allclose(polygon_scenario(8, 0.0).sigma1, th.state(8))
    # distinct pure states one step apart from the shared vertex: success above 1/2, below 1
    value = gpt_brute_force(sc, 0.5)
    assert 0.5 < value < 1


def test_advantage_scan_examples():
    (row,) = advantage_scan([1.0], [0.5])
    assert row.success == pytest.approx(1.0) and row.nc_bound == pytest.approx(0.75)
    assert row.advantage == pytest.approx(0.25, abs=TOL)
    (row,) = advantage_scan([0.5], [0.5])
    assert row.advantage == pytest.approx(0.125, abs=TOL)
    for p1 in (0.2, 0.5, 0.8):
        (row,) = advantage_scan([0.0], [p1])
        assert row.advantage == pytest.approx(0.5 - max(p1, 1 - p1), abs=TOL)
    (row,) = advantage_scan([0.5], [0.5], n=8)
    assert row.nc_bound is None and row.advantage is None


def test_equal_prior_advantage_is_quarter_p():
    rows = advantage_scan(np.linspace(0, 1, 101), [0.5])
    for r in rows:
        assert abs(r.advantage - r.p / 4) <= TOL
        if r.p > 0:
            assert r.success > r.nc_bound
