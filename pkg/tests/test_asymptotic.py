from fractions import Fraction

import numpy as np
import pytest

from multiorder.errors import (
    FloorsMismatchError,
    OutOfWindowError,
    PairNotDistinctError,
)
from multiorder.groups import Z, Z2, FiniteSubset
from multiorder.orders import integer_order_window
from multiorder.tilings import instance_from_anchor, z2_dyadic_spec, z_odometer_spec
from multiorder.tiling_orders import induced_order
from multiorder.arrays import ArrayPoint, make_point, shift
from multiorder.asymptotic import (
    AGREEING_TAIL,
    ORDERS_DIFFER,
    SEPARATED_BEYOND,
    array_distance,
    detect,
    distality_floor,
    phi_asymptotic_check,
    tail_pair,
)


def zpoint(radius=20, fn=lambda f, c: (c[0] * 3 + 1) % 2, floors=1):
    return make_point(Z, floors, [(i,) for i in range(-radius, radius + 1)], fn)


def flip_at(x, cell, floor=1):
    bits = x.bits.copy()
    bits[floor - 1, x.index[cell]] ^= 1
    return ArrayPoint(x.group, x.floors, x.window, bits, x.mask)


def test_distance_identical_zero():
    x = zpoint()
    assert array_distance(x, x) == 0


def test_distance_anchor_disagreement_is_one():
    x = zpoint()
    assert array_distance(x, flip_at(x, (0,))) == 1


def test_distance_first_disagreement_radius_three():
    x = zpoint()
    assert array_distance(x, flip_at(x, (3,))) == Fraction(1, 8)
    assert array_distance(x, flip_at(x, (-3,))) == Fraction(1, 8)


def test_distance_floor_weighting():
    x = zpoint(floors=2)
    y = flip_at(x, (0,), floor=2)
    # a floor-2 disagreement is invisible at radius 0
    assert array_distance(x, y) == Fraction(1, 2)


def test_distance_window_edge_cap():
    x = zpoint(radius=4)
    y = zpoint(radius=6)
    # no disagreement on the common window, but windows differ
    assert array_distance(x, y) == Fraction(1, 2 ** 5)


def test_distance_floors_mismatch():
    with pytest.raises(FloorsMismatchError):
        array_distance(zpoint(floors=1), zpoint(floors=2))


def test_distance_symmetry_and_ultrametric():
    x = zpoint()
    y = flip_at(x, (2,))
    z = flip_at(y, (5,))
    assert array_distance(x, y) == array_distance(y, x)
    assert array_distance(x, z) <= max(array_distance(x, y), array_distance(y, z))


def test_detect_forward_tail_agreeing_from_zero():
    w = integer_order_window(50)
    x = zpoint(50)
    y = flip_at(x, (-1,))
    v = detect(x, y, w, 0, 50)
    assert v.kind == AGREEING_TAIL and v.from_k == 0


def test_detect_forward_flip_agrees_after_passing_it():
    w = integer_order_window(50)
    x = zpoint(50)
    y = flip_at(x, (3,))
    v = detect(x, y, w, 0, 50)
    assert v.kind == AGREEING_TAIL and v.from_k == 4


def test_detect_syndetic_flips_separated():
    w = integer_order_window(100)
    x = zpoint(100)
    y = x
    for i in range(-100, 101, 5):
        y = flip_at(y, (i,))
    v = detect(x, y, w, 0, 100)
    assert v.kind == SEPARATED_BEYOND
    assert v.last_exceedance == 100 and v.exceedance_count == 21


def test_detect_pair_not_distinct():
    w = integer_order_window(10)
    x = zpoint(10)
    with pytest.raises(PairNotDistinctError):
        detect(x, x, w, 0, 10)


def test_detect_horizon_exceeds_radius():
    w = integer_order_window(10)
    x = zpoint(10)
    with pytest.raises(OutOfWindowError):
        detect(x, flip_at(x, (0,)), w, 0, 11)


def test_phi_check_delegates_on_shared_order():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    w = induced_order(inst, 3)
    x = zpoint(80)
    y = tail_pair(x, w, 0, (-2,))
    v = phi_asymptotic_check(x, y, w, w, 0, w.radius)
    assert v.kind == AGREEING_TAIL


def test_phi_check_orders_differ():
    spec = z2_dyadic_spec(3)
    a = induced_order(instance_from_anchor(spec, 3, anchor_position=21), 3)
    b = induced_order(instance_from_anchor(spec, 3, anchor_position=22), 3)
    cells = [(i, j) for i in range(-2, 3) for j in range(-2, 3)]
    x = make_point(Z2, 1, cells, lambda f, c: 0)
    v = phi_asymptotic_check(x, flip_at(x, (0, 0)), a, b, 0, 3)
    assert v.kind == ORDERS_DIFFER


def test_tail_pair_classical():
    w = integer_order_window(30)
    x = zpoint(30)
    y = tail_pair(x, w, 0, (-1,))
    assert y.bit(1, (-1,)) == 1 - x.bit(1, (-1,))
    assert detect(x, y, w, 0, 30).kind == AGREEING_TAIL


def test_tail_pair_on_z2_tiling_order():
    spec = z2_dyadic_spec(3)
    inst = instance_from_anchor(spec, 3, anchor_position=30)
    w = induced_order(inst, 3)
    cells = FiniteSubset.make(Z2, w.points)
    x = make_point(Z2, 1, cells, lambda f, c: (c[0] + c[1]) % 2)
    flip = w.at_position(-3)
    y = tail_pair(x, w, 0, flip)
    v = detect(x, y, w, 0, w.radius)
    assert v.kind == AGREEING_TAIL and v.from_k == 0


def test_tail_pair_rejects_forward_flip():
    w = integer_order_window(10)
    x = zpoint(10)
    with pytest.raises(OutOfWindowError):
        tail_pair(x, w, 0, (4,))


def test_detect_shift_consistency():
    w = integer_order_window(60)
    x = zpoint(60)
    y = tail_pair(x, w, 0, (-2,))
    for k in (1, 4, 9):
        g = w.at_position(k)
        wv = w.act(g)
        v = detect(shift(x, g), shift(y, g), wv, 0, wv.radius)
        assert v.kind == AGREEING_TAIL


def test_distality_equal_points_zero():
    x = zpoint(10)
    assert distality_floor(x, x, [(0,)]) == 0


def test_distality_even_vs_odd_centers():
    cells = [(i,) for i in range(-20, 21)]
    even = make_point(Z, 1, cells, lambda f, c: 1 - abs(c[0]) % 2)
    odd = make_point(Z, 1, cells, lambda f, c: abs(c[0]) % 2)
    shifts = [(i,) for i in range(-8, 9)]
    assert distality_floor(even, odd, shifts) >= Fraction(1, 2)


def test_distality_single_shift_is_distance():
    x = zpoint(10)
    y = flip_at(x, (2,))
    assert distality_floor(x, y, [(0,)]) == array_distance(x, y)


def test_verdict_record_shape():
    w = integer_order_window(20)
    x = zpoint(20)
    rec = detect(x, flip_at(x, (-1,)), w, 0, 20).to_record()
    assert rec["kind"] == AGREEING_TAIL
    assert rec["k_range"] == [0, 20]
