import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lightsout_grover.errors import LengthMismatch, OddOrTooSmall, ParseError, ZeroDimension
from lightsout_grover.lightsout import (
    LightsOutInstance,
    apply_clicks,
    bits_from_set,
    build_grid,
    build_mobius,
    single_click_solutions,
    solve_exhaustive,
    solve_gf2,
)


def test_grid_neighbors():
    g = build_grid(2, 2)
    assert g.neighbors(0) == {1, 2}
    assert g.effect_set(3) == {1, 2, 3}
    assert build_grid(1, 1).neighbors(0) == frozenset()


def test_grid_zero_dimension():
    with pytest.raises(ZeroDimension):
        build_grid(0, 3)


def test_mobius_neighbors():
    m = build_mobius(6)
    assert m.neighbors(1) == {0, 2, 4}
    for lamp in (1, 3, 5):
        assert m.effect_set(lamp) == {0, 2, 4}
    assert all(len(m.neighbors(a)) == 3 for a in range(6))


@pytest.mark.parametrize("n", [4, 5, 7])
def test_mobius_rejects_bad_size(n):
    with pytest.raises(OddOrTooSmall):
        build_mobius(n)


def test_apply_clicks_examples():
    grid = build_grid(2, 2, (0, 1, 1, 1))
    assert apply_clicks(grid, (0, 0, 0, 0)) == (0, 1, 1, 1)
    assert apply_clicks(grid, (0, 0, 0, 1)) == (0, 0, 0, 0)
    mob = build_mobius(6, (1, 0, 1, 0, 1, 0))
    assert apply_clicks(mob, bits_from_set({1}, 6)) == (0,) * 6


def test_apply_clicks_length():
    with pytest.raises(LengthMismatch):
        apply_clicks(build_grid(2, 2), (1, 0))


def test_single_click_examples():
    assert single_click_solutions(build_grid(2, 2, (0, 1, 1, 1))) == {3}
    assert single_click_solutions(build_mobius(6, (1, 0, 1, 0, 1, 0))) == {1, 3, 5}
    assert single_click_solutions(build_grid(2, 2)) == set()


def test_homogeneous_system_contains_zero():
    sols = solve_gf2(build_mobius(6))
    assert (0,) * 6 in sols
    assert len(sols) & (len(sols) - 1) == 0


@given(st.lists(st.integers(0, 1), min_size=6, max_size=6),
       st.lists(st.integers(0, 1), min_size=6, max_size=6))
def test_clicks_are_an_involution(config, clicks):
    inst = build_mobius(6, config)
    once = apply_clicks(inst, clicks)
    assert apply_clicks(inst.with_initial(once), clicks) == tuple(config)


@given(st.lists(st.integers(0, 5), max_size=10), st.randoms())
def test_clicks_order_independent(presses, rnd):
    inst = build_mobius(6, (1, 1, 0, 0, 1, 0))
    shuffled = list(presses)
    rnd.shuffle(shuffled)

    def one_by_one(seq):
        state = inst
        for lamp in seq:
            state = state.with_initial(apply_clicks(state, bits_from_set({lamp}, 6)))
        return state.initial_config

    assert one_by_one(presses) == one_by_one(shuffled)


@pytest.mark.parametrize("rows, cols", [(2, 2), (2, 3), (3, 3), (1, 4)])
def test_gf2_matches_exhaustive_grids(rows, cols):
    n = rows * cols
    for config in itertools.islice(itertools.product((0, 1), repeat=n), 0, 2 ** n, 3):
        inst = build_grid(rows, cols, config)
        assert solve_gf2(inst) == solve_exhaustive(inst)


def test_gf2_matches_exhaustive_mobius():
    for config in itertools.product((0, 1), repeat=6):
        inst = build_mobius(6, config)
        assert solve_gf2(inst) == solve_exhaustive(inst)


def test_mobius_rotation_symmetry():
    def rot(bits, k):
        return tuple(bits[(i - k) % 6] for i in range(6))

    for config in itertools.product((0, 1), repeat=6):
        sols = solve_gf2(build_mobius(6, config))
        rotated = solve_gf2(build_mobius(6, rot(config, 2)))
        assert rotated == {rot(x, 2) for x in sols}


def test_instance_json_round_trip():
    inst = build_mobius(6, (1, 0, 1, 0, 1, 0))
    again = LightsOutInstance.from_json(inst.to_json())
    assert again == inst
    assert inst.to_dict()["initial"] == "101010"


def test_instance_json_errors():
    with pytest.raises(ParseError):
        LightsOutInstance.from_json('{"num_lamps": 2, "initial": "1x"}')
    with pytest.raises(ParseError):
        LightsOutInstance.from_json("{")


def test_gf2_too_large():
    from lightsout_grover.errors import TooLarge
    with pytest.raises(TooLarge):
        solve_gf2(build_grid(5, 5))
