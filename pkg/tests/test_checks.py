import pytest

from multiorder.checks import CHECKS, run_checks
from multiorder.checks import action_law_holds
from multiorder.orders import integer_order_window


@pytest.mark.parametrize("name", sorted(CHECKS))
def test_registered_check_passes(name):
    result = CHECKS[name]()
    assert result.passed, f"{name}: {result.details}"


def test_run_checks_scope_filter():
    results = run_checks({"orders"})
    assert results and all(r.name.startswith("orders.") for r in results)


def test_action_law_rejects_broken_double():
    # translating on the wrong side is invisible on abelian groups but must
    # be caught on the Heisenberg spiral
    from multiorder.groups import H3
    from multiorder.orders import OrderWindow, spiral_order_window

    def broken_act(w, g):
        k = w.position_of(g)
        n2 = w.radius - abs(k)
        mid = w.radius
        ginv = w.group.inv(g)
        pts = tuple(
            w.group.mul(ginv, w.points[i + k + mid])  # left instead of right
            for i in range(-n2, n2 + 1)
        )
        return OrderWindow(w.group, pts)

    w = spiral_order_window(H3, 30)
    pairs = []
    for kg in (1, 2, 3, 5):
        g = w.at_position(kg)
        inner = broken_act(w, g)
        for kh in (1, 2, 3):
            h = inner.at_position(kh)
            if h is not None and w.position_of(w.group.mul(h, g)) is not None:
                pairs.append((g, h))
    bad = [(g, h) for g, h in pairs if not action_law_holds(broken_act, w, g, h)]
    assert bad, "broken action double was not detected"
