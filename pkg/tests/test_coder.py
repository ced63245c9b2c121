import numpy as np
import pytest

from multiorder.errors import (
    AlignmentViolationError,
    CodeOverflowError,
    DivisibilityViolationError,
    GroupMismatchError,
    NotStraightError,
    PairEqualError,
    UnknownBlockError,
    WindowTooSmallError,
)
from multiorder.groups import Z, Z2, FiniteSubset
from multiorder.tilings import instance_from_anchor, z2_dyadic_spec, z_odometer_spec
from multiorder.tiling_orders import induced_order
from multiorder.arrays import (
    CONSTANT_ZERO,
    FULL_SHIFT,
    THUE_MORSE,
    ArrayPoint,
    generate_sample,
    make_point,
    point_universe,
)
from multiorder.asymptotic import SEPARATED_BEYOND, detect
from multiorder.coder import (
    build_code_table,
    encode_point,
    partition_intervals,
    product_pipeline,
    product_point,
    tower_compose,
    verify_separation,
)


def odometer_coder(base=(16, 64, 256), anchor=88, kind=THUE_MORSE, seed=5,
                   lo=-800, hi=800, **kw):
    spec = z_odometer_spec(base)
    inst = instance_from_anchor(spec, len(base), anchor=(anchor,))
    sample = generate_sample(kind, seed, {"kind": "interval", "lo": lo, "hi": hi}, **kw)
    return product_pipeline(sample, inst)


def test_partition_natural_alignment():
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    order = induced_order(inst, 3)
    part = partition_intervals(order, inst, 1)
    # centers sit at -21 mod 4 = 3, so range 0 is [-1, 3)
    assert part.p == 4
    assert part.start(0) <= 0 < part.start(0) + 4
    assert (part.start(0) - (-21)) % 4 == 0
    for i in part.indices():
        cells = part.cells(i)
        assert len(cells) == 4


def test_partition_level2_unions_of_level1():
    spec = z_odometer_spec((4, 8, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    order = induced_order(inst, 3)
    p1 = partition_intervals(order, inst, 1)
    p2 = partition_intervals(order, inst, 2)
    assert p2.p == 8 and (p2.start0 - p1.start0) % 4 == 0


def test_partition_requires_straight():
    spec = z_odometer_spec((4, 16))
    inst = instance_from_anchor(spec, 2, anchor=(0,))
    order = induced_order(inst, 2)
    with pytest.raises(NotStraightError):
        partition_intervals(order, inst, 1)


def test_partition_dyadic_square_ranges():
    spec = z2_dyadic_spec(3)
    inst = instance_from_anchor(spec, 3, anchor_position=21)
    order = induced_order(inst, 3)
    part = partition_intervals(order, inst, 1)
    assert part.p == 4
    cells = part.cells(0)
    # a range is a 2x2 tile read in boustrophedon order
    assert len(set(cells)) == 4


def test_build_code_table_counter_words():
    x = make_point(Z, 1, [(i,) for i in range(-20, 21)], lambda f, c: c[0] % 4 == 0)
    u = point_universe(x)
    cells = [(0,), (1,)]
    # blocks on two cells: 00, 01, 10 appear; pad universe to exactly 4
    u.extra_points.append(
        make_point(Z, 1, [(0,), (1,)], lambda f, c: 1)
    )
    u.clear_census_cache()
    table = build_code_table(u, 1, cells, 4)
    assert table.length == 2
    words = ["".join(map(str, table.words[b].tolist())) for b in table.blocks]
    assert words == ["00", "01", "10", "11"][: len(words)]


def test_build_code_table_overflow():
    x = make_point(Z, 1, [(i,) for i in range(-40, 41)],
                   lambda f, c: (abs(c[0]) % 5) in (0, 2))
    u = point_universe(x)
    cells = [(i,) for i in range(4)]
    with pytest.raises(CodeOverflowError):
        build_code_table(u, 1, cells, 4)  # L=2 but >4 blocks realized


def test_build_code_table_divisibility():
    x = make_point(Z, 1, [(i,) for i in range(-8, 9)], lambda f, c: 0)
    with pytest.raises(DivisibilityViolationError):
        build_code_table(point_universe(x), 2, [(0,), (1,)], 6)


def test_encode_constant_zero_all_zero_rows():
    # plain all-zero array: one block per level, code word 0...0, fill zeros
    spec = z_odometer_spec((16, 64, 256))
    inst = instance_from_anchor(spec, 3, anchor=(88,))
    data = make_point(Z, 2, inst.window, lambda f, c: 0)
    coded = encode_point(data, inst, 2, point_universe(data))
    assert coded.row_mask.sum() == 0
    assert coded.row_bits.sum() == 0


def test_encode_mask_densities_thue_morse():
    coder = odometer_coder()
    coded = coder.encode(2)
    for audit in coded.mask_audit:
        assert audit["exact"]
        assert audit["ranges"], "no complete ranges audited"
    assert coded.mask_audit[0]["expected"] == 8
    assert coded.mask_audit[1]["expected"] == 16


def test_encode_skips_edge_ranges():
    coder = odometer_coder()
    coded = coder.encode(1)
    statuses = {s.status for s in coded.steps}
    assert "coded" in statuses and "skipped-target-incomplete" in statuses


def test_encode_requires_enough_floors():
    coder = odometer_coder(kind=CONSTANT_ZERO, lo=-400, hi=400)
    data = ArrayPoint(Z, 1, coder.point.window, coder.point.bits[:1])
    from multiorder.errors import FloorsMismatchError

    with pytest.raises(FloorsMismatchError):
        encode_point(data, coder.instance, 2, point_universe(data))


def test_encode_unknown_block_provenance():
    coder = odometer_coder(kind=CONSTANT_ZERO, lo=-400, hi=400)
    foreign = ArrayPoint(
        Z,
        coder.point.floors,
        coder.point.window,
        1 - coder.point.bits,
    )
    with pytest.raises(UnknownBlockError):
        encode_point(foreign, coder.instance, 1, coder.universe)


def test_encode_enumerate_family():
    spec = z_odometer_spec((4, 16))
    inst = instance_from_anchor(spec, 2, anchor=(5,))
    window = inst.window
    data = make_point(Z, 1, window, lambda f, c: 0)
    u = point_universe(data)
    fam = encode_point(data, inst, 1, u, fill="enumerate")
    assert isinstance(fam, list) and len(fam) >= 2
    assert len({bytes(c.row_bits) for c in fam}) == len(fam)
    assert all(c.row_mask.sum() == 0 for c in fam)


def test_encode_deterministic():
    a = odometer_coder().encode(2).to_record()
    b = odometer_coder().encode(2).to_record()
    assert a == b


def test_verify_separation_witnesses_and_detect():
    coder = odometer_coder(base=(16, 64, 256, 1024), anchor=344, lo=-1500, hi=1500)
    x = coder.point
    for cell in [(5,), (-30,), (111,)]:
        bits = x.bits.copy()
        bits[0, x.index[cell]] ^= 1
        x2 = ArrayPoint(x.group, x.floors, x.window, bits)
        y = coder.encode(2)
        y2 = coder.encode_variant(x2, 2)
        rep = verify_separation(x, x2, y, y2, 2)
        assert rep.ok and {r.level for r in rep.rows} == {1, 2}
        # witnesses distinct and strictly after the flip position
        positions = [r.witness_position for r in rep.rows]
        assert len(set(positions)) == len(positions)
        assert all(p > rep.first_position for p in positions)
        horizon = max(positions)
        v = detect(y.combined(), y2.combined(), y.order,
                   min(0, rep.first_position), horizon)
        assert v.kind == SEPARATED_BEYOND


def test_verify_separation_pair_equal():
    coder = odometer_coder(kind=CONSTANT_ZERO, lo=-400, hi=400)
    y = coder.encode(1)
    with pytest.raises(PairEqualError):
        verify_separation(coder.point, coder.point, y, y, 1)


def test_verify_separation_window_too_small():
    coder = odometer_coder(kind=CONSTANT_ZERO, lo=-400, hi=400)
    x = coder.point
    # flip at the very last window cell: its successor range is incomplete
    last = max(x.window.elements)
    bits = x.bits.copy()
    bits[0, x.index[last]] ^= 1
    x2 = ArrayPoint(x.group, x.floors, x.window, bits)
    y = coder.encode(1)
    y2 = coder.encode_variant(x2, 1)
    with pytest.raises(WindowTooSmallError):
        verify_separation(x, x2, y, y2, 1)


def test_tower_compose_single_stage_matches_encode():
    coder = odometer_coder(kind=CONSTANT_ZERO, lo=-400, hi=400)
    stages = tower_compose(coder.point, coder.instance, [1], coder.universe)
    direct = coder.encode(1)
    assert (stages[0].row_bits == direct.row_bits).all()


def test_tower_compose_two_stages_densities():
    coder = odometer_coder(kind=CONSTANT_ZERO, lo=-400, hi=400)
    stages = tower_compose(coder.point, coder.instance, [1, 1], coder.universe)
    assert len(stages) == 2
    for st in stages:
        assert st.mask_audit[0]["exact"]
    # stage 2 input gained one floor
    assert stages[1].base.floors == coder.point.floors + 1
    assert stages[1].row_point().bits.sum() == 0


def test_product_point_floor_layout():
    spec = z_odometer_spec((4, 16))
    inst = instance_from_anchor(spec, 2, anchor=(5,))
    sample = generate_sample(
        THUE_MORSE, 0, {"kind": "interval", "lo": -100, "hi": 100}
    )
    pt = product_point(sample, inst)
    assert pt.floors == 1 + 2  # data + one indicator floor per level
    # floor 2 marks level-1 tile centers (every 4th cell, phase -5 mod 4)
    for c in pt.window.elements:
        want = 1 if (c[0] + 5) % 4 == 0 else 0
        assert pt.bit(2, c) == want


def test_product_pipeline_group_mismatch():
    spec = z2_dyadic_spec(2)
    inst = instance_from_anchor(spec, 2, anchor_position=5)
    sample = generate_sample(THUE_MORSE, 0, {"kind": "interval", "lo": -50, "hi": 50})
    with pytest.raises(GroupMismatchError):
        product_pipeline(sample, inst)


def test_product_pipeline_full_shift_overflows():
    # the planted de Bruijn segment makes every in-window 16-block distinct,
    # deterministically exceeding the 2^(16/2) capacity
    coder = odometer_coder(
        base=(16, 64, 256, 1024),
        anchor=344,
        kind=FULL_SHIFT,
        lo=-2100,
        hi=2100,
        complete_up_to=12,
        floors=2,
    )
    with pytest.raises(CodeOverflowError):
        coder.encode(1)


def test_capacity_rows_thue_morse():
    coder = odometer_coder()
    rows = coder.capacity_rows(2)
    assert all(r["ok"] for r in rows)
    assert rows[0]["p"] == 16 and rows[1]["p"] == 64


def test_partition_alignment_violation_detect():
    # an instance window showing centers off-phase must be rejected: fabricate
    # by lying about the base (claim p=3 which divides nothing here)
    spec = z_odometer_spec((4, 16))
    inst = instance_from_anchor(spec, 2, anchor=(5,))
    order = induced_order(inst, 2)
    with pytest.raises(AlignmentViolationError):
        partition_intervals(order, inst, 1, p=8)
