"""Orders of type Z on countable amenable groups, at finite window scale.

Core surfaces:
  groups        concrete groups (Z, Z2, Heisenberg), enumeration, invariance
  orders        anchored-bijection order windows and the group action on them
  tilings       hierarchical tiling systems, centering, the odometric form
  tiling_orders induced orders, straightness, interval Folner scans
  arrays        binary array points, shifts, block censuses, sample generators
  asymptotic    the dyadic metric, pair detection, tail pairs, distality
  coder         the interval-coding extension and its separation checks
  pipeline/cli  experiment driver and verification runner
"""

from .groups import (
    H3,
    Z,
    Z2,
    FiniteSubset,
    Group,
    check_invariance,
    folner_threshold,
    group_by_name,
)
from .orders import OrderWindow, integer_order_window, spiral_order_window
from .tilings import (
    Shape,
    Tile,
    TilingInstance,
    TilingSystemSpec,
    center_normalize,
    decompose,
    instance_from_anchor,
    is_odometric,
    odometrize,
    spec_from_json,
    spec_to_json,
    symbolic_encode,
    validate_system,
    z2_dyadic_spec,
    z_odometer_spec,
)
from .tiling_orders import (
    induced_order,
    interval_invariance_scan,
    order_interval_elements,
    straightness_status,
)
from .arrays import (
    ArrayPoint,
    SampleUniverse,
    entropy_bound_check,
    generate_sample,
    make_point,
    restrict,
    shift,
    successor_iterate,
)
from .asymptotic import (
    Verdict,
    array_distance,
    detect,
    distality_floor,
    phi_asymptotic_check,
    tail_pair,
)
from .coder import (
    CodedPoint,
    CodeTable,
    IntervalPartition,
    build_code_table,
    encode_point,
    partition_intervals,
    product_pipeline,
    tower_compose,
    verify_separation,
)

__version__ = "0.1.0"
