"""Test-function classes and the constructive companions of the evaluators.

Builds the bounded / bounded-Lipschitz / vanishing-near-the-marked-point
function families, the 1-Lipschitz ramp used as the canonical
limit-at-infinity family, the closed-shrink search that produces an inner
closed neighbourhood losing less than a prescribed mass, and a level-set
quadrature whose grid provably avoids every function value carrying atom
mass.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import geometry as geo
from .errors import (
    ContinuityRadiusNotFound,
    GridConstructionError,
    NotInterior,
    ShrinkSearchExceeded,
    UnboundedRegion,
)
from .geometry import (
    ClosedBall,
    Complement,
    Intersection,
    OpenBall,
    Point,
    Real,
    SetExpr,
    contains,
    distance,
)
from .measures import AtomicMeasure, boundary_mass, mass_of

CLASS_C = "C"
CLASS_C_X0 = "C_x0"
CLASS_BL_X0 = "BL_x0"
CLASS_C_X0_U = "C_x0_u"
CLASS_C2 = "C2"

_VALID_TAGS = (CLASS_C, CLASS_C_X0, CLASS_BL_X0, CLASS_C_X0_U, CLASS_C2)


@dataclass(frozen=True)
class TestFunction:
    """A bounded test function with declared metadata.

    ``vanish_radius`` > 0 certifies f = 0 on the open ball of that radius
    around the marked point; 0 means no such certificate. The Lipschitz
    constant and the limit at infinity are declared, then spot-checked by
    the property suites, never inferred.
    """

    evaluator: Callable[[Point], Real]
    bound: Real
    vanish_radius: Real = 0
    lipschitz_const: Optional[Real] = None
    class_tag: str = CLASS_C
    limit_at_infinity: Optional[Real] = None
    name: str = ""

    def __post_init__(self):
        if not (self.bound > 0):
            raise ValueError("bound must be positive")
        if self.vanish_radius < 0:
            raise ValueError("vanish radius cannot be negative")
        if self.class_tag not in _VALID_TAGS:
            raise ValueError(f"unknown class tag {self.class_tag!r}")
        if self.class_tag in (CLASS_C_X0, CLASS_BL_X0, CLASS_C_X0_U, CLASS_C2):
            if not (self.vanish_radius > 0):
                raise ValueError(f"{self.class_tag} requires a positive vanish radius")
        if self.class_tag == CLASS_BL_X0 and self.lipschitz_const is None:
            raise ValueError("BL_x0 requires a Lipschitz constant")
        if self.class_tag == CLASS_C2 and self.limit_at_infinity is None:
            raise ValueError("C2 requires a declared limit at infinity")

    def __call__(self, p: Point) -> Real:
        return self.evaluator(p)


def constant_one() -> TestFunction:
    return TestFunction(lambda p: 1, bound=1, lipschitz_const=0, class_tag=CLASS_C,
                        name="const_one")


def capped_distance(x0: Point, cap: Real = 2) -> TestFunction:
    """min(d(x, x0), cap): bounded, 1-Lipschitz, no vanish certificate."""
    return TestFunction(
        lambda p: min(distance(p, x0), cap),
        bound=cap,
        lipschitz_const=1,
        class_tag=CLASS_C,
        name=f"capped_dist(cap={geo.format_real(cap)})",
    )


def capped_polynomial(coeffs, cap: Real = 1) -> TestFunction:
    """A clamped polynomial of the single coordinate (one dimension only)."""
    coeffs = tuple(coeffs)

    def ev(p: Point) -> Real:
        x = p.coords[0]
        acc = 0
        for c in reversed(coeffs):
            acc = acc * x + c
        return min(cap, max(-cap, acc))

    label = ",".join(geo.format_real(c) for c in coeffs)
    return TestFunction(ev, bound=cap, class_tag=CLASS_C,
                        name=f"capped_poly([{label}],cap={geo.format_real(cap)})")


def bump(U_eps: SetExpr, n0: Real, x0: Point) -> TestFunction:
    """The ramp min(1, n0 * d(x, U_eps)) off a closed set around x0.

    Zero on U_eps, one wherever d(x, U_eps) >= 1/n0, values in [0, 1], with
    Lipschitz constant n0. The vanish radius is the interior radius of
    U_eps around x0, which must be positive.
    """
    if not (n0 > 0):
        raise ValueError("slope must be positive")
    _require_closed(U_eps)
    outside = Complement(U_eps)
    rho_info = geo.dist_to_set_detailed(x0, outside)
    if not rho_info.exact:
        raise geo.InexactFragment("bump needs an exact interior radius")
    rho = rho_info.value
    if not (rho > 0):
        raise NotInterior("the marked point is not interior to the given set")

    def ev(p: Point) -> Real:
        return min(1, n0 * geo.dist_to_set(p, U_eps))

    return TestFunction(
        ev,
        bound=1,
        vanish_radius=rho,
        lipschitz_const=n0,
        class_tag=CLASS_BL_X0,
        name=f"bump({geo.describe_set(U_eps)},n0={geo.format_real(n0)})",
    )


def _require_closed(S: SetExpr) -> None:
    dim = geo.dimension_of(S)
    if dim in (None, 1):
        for piece in geo.normalize_1d(S):
            if piece.lo != geo.NEG_INF and not piece.lo_closed:
                raise ValueError("set is not closed")
            if piece.hi != geo.POS_INF and not piece.hi_closed:
                raise ValueError("set is not closed")
        return
    core = S
    flips = 0
    while isinstance(core, Complement):
        core = core.inner
        flips ^= 1
    if isinstance(core, ClosedBall) and flips == 0:
        return
    if isinstance(core, OpenBall) and flips == 1:
        return
    raise geo.InexactFragment("closedness is only decided on the exact fragment")


def c2_ramp(a: Real, x0: Point) -> TestFunction:
    """min(1, max(0, d(x, x0) - a)): vanishes within a, tends to 1 far out."""
    if not (a > 0):
        raise ValueError("inner radius must be positive")

    def ev(p: Point) -> Real:
        return min(1, max(0, distance(p, x0) - a))

    return TestFunction(
        ev,
        bound=1,
        vanish_radius=a,
        lipschitz_const=1,
        class_tag=CLASS_C2,
        limit_at_infinity=1,
        name=f"c2(a={geo.format_real(a)})",
    )


# ---------------------------------------------------------------------------
# Closed shrink of an open neighbourhood
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShrinkResult:
    closed_set: SetExpr
    n0: int
    gap_mass: Real

    def __iter__(self):
        yield self.closed_set
        yield self.n0


def _inner_closed_set(U: SetExpr, n: int, rational: bool) -> Optional[SetExpr]:
    """{x : d(x, complement of U) >= 1/n}, exactly, or None when empty/degenerate."""
    step = Fraction(1, n) if rational else 1.0 / n
    dim = geo.dimension_of(U)
    if dim in (None, 1):
        comp = geo.normalize_1d(Complement(U))
        grown = []
        for p in comp:
            lo = geo.NEG_INF if p.lo == geo.NEG_INF else p.lo - step
            hi = geo.POS_INF if p.hi == geo.POS_INF else p.hi + step
            grown.append(geo.Interval(lo, hi, False, False))
        inner = Complement(geo.Union(tuple(grown)))
        pieces = geo.normalize_1d(inner)
        if not pieces:
            return None
        return geo.Union(tuple(
            geo.Interval(p.lo, p.hi, p.lo_closed, p.hi_closed) for p in pieces
        ))
    if isinstance(U, OpenBall):
        r = U.radius - step
        if not (r > 0):
            return None
        return ClosedBall(U.center, r)
    raise geo.InexactFragment("closed shrink needs the exact open fragment")


def shrink_neighbourhood(
    eta0: AtomicMeasure,
    U: SetExpr,
    eps: Real,
    *,
    max_n: int = 10**6,
    rational: bool = False,
) -> ShrinkResult:
    """Smallest n whose inner closed set loses less than ``eps`` mass.

    Searches F_n = complement of the open 1/n-thickening of the complement
    of U, n = 1, 2, ...; returns the first F_n that is closed, has x0 in its
    interior and satisfies eta0(U \\ F_n) < eps. The F_n are nested, so the
    first hit is the smallest witness.
    """
    if not (eps > 0):
        raise ValueError("eps must be positive")
    if not contains(U, eta0.x0):
        raise NotInterior("U must contain the marked point")
    _require_open(U)

    best_gap = None
    best_n = None
    for n in range(1, max_n + 1):
        inner = _inner_closed_set(U, n, rational)
        if inner is None:
            continue
        interior_rad = geo.dist_to_set_detailed(eta0.x0, Complement(inner))
        if not interior_rad.exact or not (interior_rad.value > 0):
            continue
        gap_set = Intersection((U, Complement(inner)))
        try:
            gap = mass_of(eta0, gap_set)
        except UnboundedRegion:
            continue
        if best_gap is None or gap < best_gap:
            best_gap, best_n = gap, n
        if gap < eps:
            return ShrinkResult(inner, n, gap)
    raise ShrinkSearchExceeded(
        f"no inner closed set with mass gap below {eps} within {max_n} steps "
        f"(best gap {best_gap} at n={best_n})",
        best_n=best_n,
        achieved_gap=best_gap,
    )


def _require_open(S: SetExpr) -> None:
    dim = geo.dimension_of(S)
    if dim in (None, 1):
        for piece in geo.normalize_1d(S):
            if (piece.lo != geo.NEG_INF and piece.lo_closed) or (
                piece.hi != geo.POS_INF and piece.hi_closed
            ):
                raise ValueError("set is not open")
        return
    if isinstance(S, OpenBall):
        return
    raise geo.InexactFragment("openness is only decided on the exact fragment")


# ---------------------------------------------------------------------------
# Continuity radii
# ---------------------------------------------------------------------------


def _atom_distances_in(eta0: AtomicMeasure, lo: Real, hi: Real):
    k_max = eta0.tail_index(lo) if not eta0.finite else eta0.n_atoms
    ds = set()
    for k in range(k_max):
        d = distance(eta0.atom_fn(k).location, eta0.x0)
        if lo < d < hi:
            ds.add(d)
    return sorted(ds)


def continuity_radius(eta0: AtomicMeasure, lo: Real, hi: Real,
                      *, max_sweep: int = 256) -> Real:
    """A radius in (lo, hi) whose sphere carries zero mass, verified exactly.

    Candidates are the midpoints of the gaps between atom distances inside
    the window, widest gap first; if float degeneracy defeats every
    midpoint, a deterministic golden-ratio sweep takes over.
    """
    if not (0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    ds = _atom_distances_in(eta0, lo, hi)
    edges = [lo] + ds + [hi]
    gaps = sorted(
        ((edges[i + 1] - edges[i], i) for i in range(len(edges) - 1)),
        key=lambda t: (-t[0], t[1]),
    )
    half = Fraction(1, 2) if isinstance(lo, (int, Fraction)) and isinstance(hi, (int, Fraction)) else 0.5
    for width, i in gaps:
        if width <= 0:
            continue
        mid = edges[i] + width * half
        if not (lo < mid < hi):
            continue
        if boundary_mass(eta0, OpenBall(eta0.x0, mid)) == 0:
            return mid

    # Low-discrepancy fallback sweep.
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    nearest, nearest_mass = None, None
    for j in range(1, max_sweep + 1):
        cand = lo + ((j * golden) % 1.0) * (hi - lo)
        m = boundary_mass(eta0, OpenBall(eta0.x0, cand))
        if m == 0:
            return cand
        if nearest_mass is None or m < nearest_mass:
            nearest, nearest_mass = cand, m
    raise ContinuityRadiusNotFound(
        f"every candidate in ({lo}, {hi}) hits an atom distance",
        nearest_miss=nearest,
        miss_mass=nearest_mass,
    )


# ---------------------------------------------------------------------------
# Level-set quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelQuadrature:
    value: Real
    mesh: Real
    grid: tuple
    forbidden: tuple  # function values with positive mass, all avoided

    def __iter__(self):
        yield self.value
        yield self.mesh


def level_partition_integrate(f: TestFunction, eta: AtomicMeasure, eps: Real) -> LevelQuadrature:
    """Integrate by mass-weighted level sets with a mesh below ``eps``.

    The grid spans [-M, M] just above the declared bound, avoids exactly
    the finite set of function values carrying atom mass, and the result
    satisfies |value - sum f*mass| <= mesh * (mass outside the vanish
    ball). Requires a positive vanish radius.
    """
    if not (eps > 0):
        raise ValueError("eps must be positive")
    rho = f.vanish_radius
    if not (rho > 0):
        raise ValueError("level quadrature needs a positive vanish radius")
    atoms = eta.atoms_outside(rho)
    images = [f(a.location) for a in atoms]
    for v in images:
        if abs(v) > f.bound:
            raise GridConstructionError(
                f"function exceeds its declared bound: |{v}| > {f.bound}"
            )
    forbidden = sorted(set(images))

    quarter = Fraction(1, 4) if isinstance(eps, (int, Fraction)) else 0.25
    m_grid = f.bound + eps * quarter
    k = max(1, math.ceil(float(4 * m_grid / eps)))  # spacing <= eps/2
    h = 2 * m_grid / k
    grid = [-m_grid + i * h for i in range(k)] + [m_grid]

    forb = set(forbidden)
    for i in range(1, len(grid) - 1):
        if grid[i] in forb:
            shift = h * quarter
            for _ in range(64):
                cand = grid[i] + shift
                if cand not in forb and grid[i - 1] < cand < grid[i + 1]:
                    grid[i] = cand
                    break
                shift = shift / 2
            else:
                raise GridConstructionError("could not nudge a grid value off the atom images")
    if grid[0] in forb or grid[-1] in forb:
        raise GridConstructionError("grid endpoints collide with atom images")

    mesh = max(grid[i + 1] - grid[i] for i in range(len(grid) - 1))
    if not (mesh < eps):
        raise GridConstructionError(f"mesh {mesh} did not drop below {eps}")

    value = 0
    for a, v in zip(atoms, images):
        i = bisect_right(grid, v) - 1
        # images satisfy -M < v < M strictly, so i indexes a real bin
        value += grid[i] * a.mass
    return LevelQuadrature(value, mesh, tuple(grid), tuple(forbidden))


# ---------------------------------------------------------------------------
# Lipschitz spot check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LipschitzReport:
    ok: bool
    worst_ratio: float
    pairs_checked: int

    def __iter__(self):
        yield self.ok
        yield self.worst_ratio


def lipschitz_check(
    f: TestFunction,
    pairs: int,
    seed: int,
    *,
    x0: Optional[Point] = None,
    region_radius: Optional[float] = None,
    slack: float = 1e-12,
    dim: int = 1,
) -> LipschitzReport:
    """Deterministic sampled check of the declared Lipschitz constant.

    Samples ``pairs`` point pairs from a box around x0 (half long-range,
    half short-range to stress local ratios) and accepts iff every ratio
    |f(x)-f(y)| / d(x,y) stays within L * (1 + slack).
    """
    if f.lipschitz_const is None:
        raise ValueError("function declares no Lipschitz constant")
    L = f.lipschitz_const
    center = x0.coords if x0 is not None else (0.0,) * dim
    dim = len(center)
    if region_radius is None:
        reach = 1.0 / float(L) if L else 1.0
        region_radius = max(2.0, 2.0 * (float(f.vanish_radius) + reach))
    rng = random.Random(seed)

    def sample() -> Point:
        return Point(tuple(c + rng.uniform(-region_radius, region_radius) for c in center))

    worst = 0.0
    checked = 0
    for i in range(pairs):
        p = sample()
        if i % 2 == 0:
            q = sample()
        else:
            step = region_radius * 1e-6
            q = Point(tuple(c + rng.uniform(-step, step) for c in p.coords))
        d = distance(p, q)
        if d == 0:
            continue
        ratio = abs(f(p) - f(q)) / d
        worst = max(worst, float(ratio))
        checked += 1
    ok = worst <= float(L) * (1.0 + slack) if L else worst == 0.0
    return LipschitzReport(ok, worst, checked)
