"""Built-in distributions, maps and paths used by the CLI and the reproduction suite."""

from __future__ import annotations

import math

from .charfn import DiscreteDistribution, make_distribution
from .miranda import AffineSquareMap, make_affine_map
from .winding import PathConstraint, PolyPath

PI = math.pi

# atoms (0,1), (1,0), (1,1) with equal mass; its characteristic function is
# (e^{iy} + e^{ix} + e^{i(x+y)}) / 3
MU_ATOMS = ((0.0, 1.0), (1.0, 0.0), (1.0, 1.0))

# zeros of that characteristic function in [-pi, pi]^2
MU_ZEROS = ((2 * PI / 3, -2 * PI / 3), (-2 * PI / 3, 2 * PI / 3))


def mu(weights=("1/3", "1/3", "1/3")) -> DiscreteDistribution:
    return make_distribution(2, MU_ATOMS, list(weights))


def point_mass(dim: int = 2) -> DiscreteDistribution:
    return make_distribution(dim, [(0.0,) * dim], [1])


BUILTIN_DISTRIBUTIONS = {
    "paper-mu": mu,
    "point-mass": point_mass,
}


def psi() -> AffineSquareMap:
    return make_affine_map((5 * PI / 8, -7 * PI / 8), (PI / 4, PI / 4), (-PI / 2, PI / 2))


def identity_square() -> AffineSquareMap:
    return make_affine_map((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


BUILTIN_MAPS = {
    "paper-psi": psi,
    "identity": identity_square,
}

# the two L-shaped paths from (0,0) to (pi,-pi)
GAMMA_DOWN = PolyPath(((0.0, 0.0), (0.0, -PI), (PI, -PI)))
GAMMA_RIGHT = PolyPath(((0.0, 0.0), (PI, 0.0), (PI, -PI)))

LEVEL = 0.1


def gamma_down_constraints(level: float = LEVEL) -> list[PathConstraint]:
    return [
        PathConstraint((0.0, 0.25), "re", level, "ge"),
        PathConstraint((0.25, 0.375), "im", -level, "le"),
        PathConstraint((0.375, 1.0), "re", -level, "le"),
    ]


def gamma_right_constraints(level: float = LEVEL) -> list[PathConstraint]:
    return [
        PathConstraint((0.0, 0.25), "re", level, "ge"),
        PathConstraint((0.25, 0.375), "im", level, "ge"),
        PathConstraint((0.375, 1.0), "re", -level, "le"),
    ]


def edge_margin_oracle(poly, amap: AffineSquareMap, samples: int = 10_001) -> float:
    """Smallest sampled signed edge value for the classical sign pattern.

    Sampling over-estimates the true minimum, so any certified margin must
    stay below this value.
    """
    from .charfn import eval_point

    worst = math.inf
    for k in range(samples):
        r = k / (samples - 1)
        worst = min(
            worst,
            -eval_point(poly, amap(r, 0.0)).real,
            eval_point(poly, amap(r, 1.0)).real,
            -eval_point(poly, amap(0.0, r)).imag,
            eval_point(poly, amap(1.0, r)).imag,
        )
    return worst


def mu_edge_margin_closed_form() -> float:
    """Minimum over the four edges of psi for mu, in closed form.

    On x=1 the imaginary part is (2/3) sin(pi/8) cos((3-2y) pi/4) + 1/(3 sqrt 2),
    smallest at the corners, where it equals (1 - 2 sin(pi/8)) / (3 sqrt 2).
    The x=0 edge mirrors this with the opposite sign; both y-edges stay
    well above it.
    """
    return (1 - 2 * math.sin(PI / 8)) / (3 * math.sqrt(2))
