import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiorder.errors import (
    BadRegionError,
    FloorsMismatchError,
    OutOfWindowError,
    RegionTooSmallError,
)
from multiorder.groups import H3, Z, Z2, FiniteSubset
from multiorder.orders import integer_order_window
from multiorder.tilings import instance_from_anchor, z_odometer_spec
from multiorder.tiling_orders import induced_order
from multiorder.arrays import (
    CONSTANT_ZERO,
    FULL_SHIFT,
    THUE_MORSE,
    Z2_XOR,
    ArrayPoint,
    de_bruijn_binary,
    entropy_bound_check,
    generate_sample,
    make_point,
    point_universe,
    restrict,
    shift,
    stack_floors,
    successor_iterate,
    successor_step,
    thue_morse_bit,
)


def bars(group, cells, floors=1, fn=None):
    fn = fn or (lambda f, c: (sum(c) + f) % 2)
    return make_point(group, floors, cells, fn)


def test_shift_identity_noop():
    x = bars(Z, [(i,) for i in range(-3, 4)])
    y = shift(x, (0,))
    assert y.window.elements == x.window.elements
    assert (y.bits == x.bits).all()


def test_shift_reads_forward_cell():
    x = bars(Z, [(i,) for i in range(-3, 4)])
    y = shift(x, (1,))
    for g in range(-4, 3):
        assert y.bit(1, (g,)) == x.bit(1, (g + 1,))


@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
@settings(max_examples=40, deadline=None)
def test_shift_composition_z2(h1, h2, v1, v2):
    x = bars(Z2, [(i, j) for i in range(-4, 5) for j in range(-4, 5)])
    h, hp = (h1, v1), (h2, v2)
    lhs = shift(shift(x, h), hp)
    rhs = shift(x, Z2.mul(hp, h))
    common = [c for c in lhs.window if c in rhs.window]
    assert common
    for c in common:
        assert lhs.bit(1, c) == rhs.bit(1, c)


def test_shift_composition_h3_order_matters():
    x = bars(H3, H3.ball(3))
    h, hp = (1, 0, 0), (0, 1, 0)
    lhs = shift(shift(x, h), hp)
    rhs = shift(x, H3.mul(hp, h))
    common = [c for c in lhs.window if c in rhs.window]
    assert common
    for c in common:
        assert lhs.bit(1, c) == rhs.bit(1, c)


def test_thue_morse_prefix_and_mirror():
    assert [thue_morse_bit(i) for i in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    for n in range(50):
        assert thue_morse_bit(-n - 1) == thue_morse_bit(n)


def test_generate_constant_zero():
    s = generate_sample(CONSTANT_ZERO, 0, {"kind": "ball", "radius": 2}, group=H3)
    assert s.point.bits.sum() == 0


def test_generate_z2_xor_value():
    s = generate_sample(Z2_XOR, 0, {"kind": "rect", "lo": -4, "hi": 4})
    assert s.point.bit(1, (1, 2)) == (thue_morse_bit(1) ^ thue_morse_bit(2)) == 0


def test_generate_full_shift_plants_complete_words():
    s = generate_sample(
        FULL_SHIFT, 9, {"kind": "interval", "lo": -300, "hi": 300}, complete_up_to=6
    )
    census = s.census(1, [(i,) for i in range(6)])
    assert census.count == 64


def test_full_shift_region_too_small():
    with pytest.raises(RegionTooSmallError):
        generate_sample(
            FULL_SHIFT, 1, {"kind": "interval", "lo": 0, "hi": 10}, complete_up_to=8
        )


def test_bad_region():
    with pytest.raises(BadRegionError):
        generate_sample(THUE_MORSE, 0, {"kind": "rect", "lo": 0, "hi": 3})
    with pytest.raises(BadRegionError):
        generate_sample("nope", 0, {"kind": "interval", "lo": 0, "hi": 3})


def test_de_bruijn_window_counts():
    for m in (3, 8):
        seq = de_bruijn_binary(m)
        windows = {tuple(seq[i : i + m]) for i in range(len(seq) - m + 1)}
        assert len(windows) == 2 ** m


def test_census_full_shift_three_cells():
    s = generate_sample(
        FULL_SHIFT, 4, {"kind": "interval", "lo": -200, "hi": 200}, complete_up_to=8
    )
    assert s.census(1, [(0,), (1,), (2,)]).count == 8


def test_census_thue_morse_matches_substring_oracle(tm_sample):
    bits = "".join(str(tm_sample.point.bit(1, (i,))) for i in range(-1500, 1501))
    for length in (3, 8, 16):
        oracle = len({bits[i : i + length] for i in range(len(bits) - length + 1)})
        got = tm_sample.census(1, [(i,) for i in range(length)]).count
        assert got == oracle
    assert tm_sample.census(1, [(0,), (1,), (2,)]).count == 6


def test_census_z2_xor_region_oracle():
    s = generate_sample(Z2_XOR, 0, {"kind": "rect", "lo": -20, "hi": 20})
    F = [(0, 0), (1, 0), (0, 1), (1, 1)]
    seen = set()
    for a in range(-20, 20):
        for b in range(-20, 20):
            seen.add(
                tuple(
                    thue_morse_bit(a + f[0]) ^ thue_morse_bit(b + f[1]) for f in F
                )
            )
    assert s.census(1, F).count == len(seen)


def test_census_translation_relation():
    s = generate_sample(THUE_MORSE, 0, {"kind": "interval", "lo": -800, "hi": 800})
    F = [(i,) for i in range(5)]
    Fh = [(i + 37,) for i in range(5)]
    a, b = s.census(1, F), s.census(1, Fh)
    assert a.count == b.count and a.blocks == b.blocks


def test_census_requires_floors():
    s = generate_sample(THUE_MORSE, 0, {"kind": "interval", "lo": 0, "hi": 50})
    with pytest.raises(FloorsMismatchError):
        s.census(2, [(0,), (1,)])


def test_entropy_bound_constant_zero_passes():
    s = generate_sample(CONSTANT_ZERO, 0, {"kind": "interval", "lo": -50, "hi": 50})
    report = entropy_bound_check(s, 1, [([(i,) for i in range(8)], 8)])
    assert report.passed and report.rows[0].count == 1


def test_entropy_bound_full_shift_fails():
    s = generate_sample(
        FULL_SHIFT, 2, {"kind": "interval", "lo": -300, "hi": 300}, complete_up_to=8
    )
    report = entropy_bound_check(s, 1, [([(i,) for i in range(8)], 8)])
    assert not report.passed
    assert report.rows[0].count == 256 and report.rows[0].bound == 16


def test_entropy_bound_thue_morse_passes(tm_sample):
    cells = [(i,) for i in range(16)]
    report = entropy_bound_check(tm_sample, 1, [(cells, 16)])
    assert report.passed and report.rows[0].count < 256


def test_successor_iterate_natural_order():
    w = integer_order_window(20)
    x = bars(Z, [(i,) for i in range(-25, 26)])
    y = successor_iterate(x, w, 3)
    ref = shift(x, (3,))
    assert y.window.elements == ref.window.elements
    assert (y.bits == ref.bits).all()
    z0 = successor_iterate(x, w, 0)
    assert (z0.bits == x.bits).all()
    with pytest.raises(OutOfWindowError):
        successor_iterate(x, w, 21)


def test_successor_path_equals_jump_on_tiling_order():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    w = induced_order(inst, 3)
    x = bars(Z, [(i,) for i in range(-80, 81)])
    cur, order = x, w
    for _ in range(7):
        cur, order = successor_step(cur, order)
    jump = successor_iterate(x, w, 7)
    common = [c for c in cur.window if c in jump.window]
    assert common
    for c in common:
        assert cur.bit(1, c) == jump.bit(1, c)


def test_point_serialization_roundtrip():
    x = bars(Z2, [(i, j) for i in range(-2, 3) for j in range(-2, 3)], floors=2)
    mask = np.zeros_like(x.bits)
    mask[1, 3] = 1
    masked = ArrayPoint(Z2, 2, x.window, x.bits, mask)
    rec = masked.to_record()
    again = ArrayPoint.from_record(rec)
    assert again.window.elements == masked.window.elements
    assert (again.bits == masked.bits).all()
    assert (again.mask == masked.mask).all()


def test_restrict_and_stack():
    x = bars(Z, [(i,) for i in range(-5, 6)], floors=2)
    sub = restrict(x, [(0,), (1,)])
    assert sub.window.elements == ((0,), (1,))
    top = bars(Z, [(i,) for i in range(-3, 4)])
    stacked = stack_floors(top, x)
    assert stacked.floors == 3
    assert stacked.bit(1, (0,)) == top.bit(1, (0,))
    assert stacked.bit(2, (0,)) == x.bit(1, (0,))


def test_point_universe_extra_points_union():
    x = bars(Z, [(i,) for i in range(-10, 11)], fn=lambda f, c: 0)
    u = point_universe(x)
    assert u.census(1, [(0,), (1,)]).count == 1
    y = bars(Z, [(i,) for i in range(-10, 11)], fn=lambda f, c: int(c[0] == 0))
    u.extra_points.append(y)
    u.clear_census_cache()
    assert u.census(1, [(0,), (1,)]).count == 3  # 00, 01, 10
