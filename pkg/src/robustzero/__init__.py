"""Certified zeros of characteristic functions of finite discrete distributions."""

from .charfn import (
    DiscreteDistribution,
    TrigPolynomial,
    char_poly,
    constant,
    embed,
    eval_point,
    load_distribution,
    make_distribution,
    multiply,
    parse_distribution,
)
from .enclosure import (
    Box2,
    Inconclusive,
    Patch,
    Segment,
    SignCertificate,
    certify_sign,
    enclose,
    modulus_lower_bound,
)
from .errors import *  # noqa: F401,F403
from .interval import ComplexBox, Interval, range_cos, range_sin
from .miranda import (
    AffineSquareMap,
    MirandaCertificate,
    Orientation,
    SearchConfig,
    certified_margin,
    certify_miranda,
    make_affine_map,
    search_box,
)
from .winding import (
    PathConstraint,
    PolyPath,
    WindingCertificate,
    verify_path_constraints,
    winding_number,
    zero_search,
)

__version__ = "0.1.0"
