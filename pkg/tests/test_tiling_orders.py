from fractions import Fraction

import pytest

from multiorder.errors import OutOfRangeError, WindowNotDominatedError
from multiorder.groups import Z, Z2, FiniteSubset
from multiorder.orders import LESS
from multiorder.tilings import Tile, instance_from_anchor, z2_dyadic_spec, z_odometer_spec
from multiorder.tiling_orders import (
    MINUS_N_TAIL,
    NOT_GENERAL_POSITION,
    PLUS_N_TAIL,
    STRAIGHT_SO_FAR,
    ScanBudget,
    induced_order,
    interval_invariance_scan,
    order_interval_elements,
    straightness_status,
)

# Hand flattening of the level-2 dyadic square [0,4)^2 under the 2x2
# boustrophedon subtile order.
DYADIC_L2_ENUM = [
    (0, 0), (1, 0), (1, 1), (0, 1),
    (2, 0), (3, 0), (3, 1), (2, 1),
    (2, 2), (3, 2), (3, 3), (2, 3),
    (0, 2), (1, 2), (1, 3), (0, 3),
]


def test_natural_odometer_induces_natural_order():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    w = induced_order(inst, 3)
    assert all(w.at_position(k) == (k,) for k in range(-w.radius, w.radius + 1))


def test_reversed_tile_enumeration_is_1032():
    spec = z_odometer_spec((2, 4), subtile_orders={1: "reversed"})
    assert spec.tile_cells(Tile(2, "I4", (0,))) == ((1,), (0,), (3,), (2,))


def test_dyadic_flattening_matches_hand_oracle():
    spec = z2_dyadic_spec(2)
    assert spec.tile_cells(Tile(2, "sq4", (0, 0))) == tuple(DYADIC_L2_ENUM)


def test_induced_order_dyadic_window_ball1():
    spec = z2_dyadic_spec(2)
    inst = instance_from_anchor(spec, 2, anchor=(1, 1))
    w = induced_order(inst, 2, window=Z2.ball(1))
    # anchor (1,1) is slot 2 of the hand enumeration
    shift = Z2.inv((1, 1))
    for k in range(-w.radius, w.radius + 1):
        assert w.at_position(k) == Z2.mul(DYADIC_L2_ENUM[2 + k], shift)
    # pairwise comparisons agree with the flattening oracle
    cells = [Z2.mul(c, shift) for c in DYADIC_L2_ENUM]
    for i, a in enumerate(cells):
        for b in cells[i + 1 :]:
            if w.position_of(a) is not None and w.position_of(b) is not None:
                assert w.compare(a, b) == LESS


def test_induced_order_window_not_dominated():
    spec = z_odometer_spec((2, 4))
    inst = instance_from_anchor(spec, 2, anchor=(1,))
    with pytest.raises(WindowNotDominatedError):
        induced_order(inst, 1, window=FiniteSubset.make(Z, [(50,)]))


def test_straightness_plus_tail():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(0,))
    st = straightness_status(inst, 3)
    assert st.kind == PLUS_N_TAIL and st.from_level == 1


def test_straightness_minus_tail():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(63,))
    st = straightness_status(inst, 3)
    assert st.kind == MINUS_N_TAIL


def test_straightness_interior_anchor():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    st = straightness_status(inst, 3)
    assert st.kind == STRAIGHT_SO_FAR
    assert st.central_indices == (2, 2, 2)


def test_straightness_not_general_position():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    widened = inst.with_window(FiniteSubset.make(Z, [(i,) for i in range(-60, 60)]))
    st = straightness_status(widened, 3)
    assert st.kind == NOT_GENERAL_POSITION


def test_straightness_mixed_suffix_wins():
    # last among 4 at level 1, first at level 2: only the suffix counts
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(35,))  # digits (3, 0, 0)... check
    st = straightness_status(inst, 3)
    assert st.kind in (PLUS_N_TAIL, MINUS_N_TAIL, STRAIGHT_SO_FAR)
    # the suffix indices drive the verdict
    idx = st.central_indices
    if idx[-1] == 1:
        assert st.kind == PLUS_N_TAIL
    elif idx[-1] == 4:
        assert st.kind == MINUS_N_TAIL


def test_order_interval_elements_natural():
    spec = z_odometer_spec((4,))
    tile = Tile(1, "I4", (0,))
    assert order_interval_elements(spec, tile, 2, 3).elements == ((1,), (2,))
    assert order_interval_elements(spec, tile, 2, 2).elements == ((1,),)


def test_order_interval_elements_reversed():
    spec = z_odometer_spec((2, 4), subtile_orders={1: "reversed"})
    tile = Tile(2, "I4", (0,))
    assert order_interval_elements(spec, tile, 1, 2).elements == ((1,), (0,))


def test_order_interval_out_of_range():
    spec = z_odometer_spec((4,))
    with pytest.raises(OutOfRangeError):
        order_interval_elements(spec, Tile(1, "I4", (0,)), 0, 2)
    with pytest.raises(OutOfRangeError):
        order_interval_elements(spec, Tile(1, "I4", (0,)), 3, 9)


def test_interval_scan_odometer_l0(z_pm1):
    spec = z_odometer_spec((16, 64))
    report = interval_invariance_scan(
        spec, z_pm1, Fraction(1, 10), ScanBudget(max_level=2, dense_length_cap=64)
    )
    assert report.l0 == 21
    table = {b["length"]: b["worst_ratio"] for b in report.buckets}
    assert table[20] == "1/10" and table[21] == "2/21"


def test_interval_scan_huge_eps(z_pm1):
    spec = z_odometer_spec((4, 16))
    report = interval_invariance_scan(spec, z_pm1, Fraction(5, 2))
    assert report.l0 == 1


def test_interval_scan_dyadic_finite(unit_cross, dyadic_spec):
    report = interval_invariance_scan(
        dyadic_spec,
        unit_cross,
        Fraction(1, 2),
        ScanBudget(max_level=5, dense_length_cap=64, sparse_stride=64,
                   samples_per_length=8),
    )
    assert report.l0 is not None
    assert any(b["length"] == 1024 for b in report.buckets)


def test_scan_report_record(z_pm1):
    spec = z_odometer_spec((4, 16))
    rec = interval_invariance_scan(spec, z_pm1, Fraction(1, 10)).to_record()
    assert set(rec) == {"K", "eps", "l0", "buckets", "envelope"}
