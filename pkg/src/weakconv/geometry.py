"""Concrete metric spaces and a small exact set algebra.

Points live in R^d with the Euclidean metric; coordinates may be ints,
floats or Fractions, and every one-dimensional computation stays in the
input's arithmetic (Fractions in, Fractions out). Set expressions are trees
over ball and interval leaves closed under complement and finite
union/intersection. The one-dimensional fragment normalizes to a canonical
finite union of disjoint intervals, on which membership, boundaries and
distances are computed exactly. In d >= 2 only single balls, their
complements and spheres have exact boundaries; anything else yields a
conservative boundary superset (union of leaf spheres), which can only
over-report boundary mass, never under-report it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, Union as TUnion

from .errors import DimensionMismatch, EmptySetError, InexactFragment

Real = TUnion[int, float, Fraction]

NEG_INF = float("-inf")
POS_INF = float("inf")

#: Tolerance used when classifying a point against a boundary in float mode.
#: Exact (rational) inputs are unaffected: comparisons against 0 are exact.
DEFAULT_GEOM_TOL = 1e-12

INTERIOR = "INTERIOR"
EXTERIOR = "EXTERIOR"
BOUNDARY = "BOUNDARY"


def _is_finite_number(x) -> bool:
    if isinstance(x, bool):
        return False
    if isinstance(x, float):
        return math.isfinite(x)
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class Point:
    """A point of R^d, d >= 1. Coordinates must be finite."""

    coords: tuple

    def __post_init__(self):
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) < 1:
            raise DimensionMismatch("points need at least one coordinate")
        for c in self.coords:
            if not _is_finite_number(c):
                raise ValueError(f"non-finite coordinate {c!r}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        inner = ", ".join(format_real(c) for c in self.coords)
        return f"Point({inner})"


def pt(*coords) -> Point:
    """Convenience constructor: ``pt(2)`` is the point 2 on the line."""
    return Point(tuple(coords))


def distance(p: Point, q: Point) -> Real:
    """Euclidean distance. Exact (type-preserving) in one dimension."""
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimension {p.dim} vs {q.dim}")
    if p.dim == 1:
        return abs(p.coords[0] - q.coords[0])
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(p.coords, q.coords)))


# ---------------------------------------------------------------------------
# Set expressions
# ---------------------------------------------------------------------------


class SetExpr:
    """Base class for set-expression nodes. All nodes are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class OpenBall(SetExpr):
    center: Point
    radius: Real

    def __post_init__(self):
        if not (self.radius > 0):
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True)
class ClosedBall(SetExpr):
    center: Point
    radius: Real

    def __post_init__(self):
        if not (self.radius > 0):
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True)
class Interval(SetExpr):
    """A one-dimensional interval leaf; endpoints may be +-inf (open there)."""

    lo: Real
    hi: Real
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")
        if self.lo == NEG_INF and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if self.hi == POS_INF and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)


@dataclass(frozen=True)
class Complement(SetExpr):
    inner: SetExpr


@dataclass(frozen=True)
class Union(SetExpr):
    parts: tuple

    def __post_init__(self):
        if not isinstance(self.parts, tuple):
            object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Intersection(SetExpr):
    parts: tuple

    def __post_init__(self):
        if not isinstance(self.parts, tuple):
            object.__setattr__(self, "parts", tuple(self.parts))


EMPTY = Union(())


def empty_set() -> SetExpr:
    return EMPTY


def full_space() -> SetExpr:
    return Complement(EMPTY)


def closed_interval(lo, hi) -> Interval:
    return Interval(lo, hi, True, True)


def open_interval(lo, hi) -> Interval:
    return Interval(lo, hi, False, False)


def point_set(*xs) -> SetExpr:
    """Finite set of points on the line, as a union of degenerate intervals."""
    return Union(tuple(Interval(x, x, True, True) for x in xs))


def dimension_of(expr: SetExpr) -> Optional[int]:
    """Dimension forced by the leaves, or None for leafless expressions."""
    dims = set()

    def walk(e):
        if isinstance(e, Interval):
            dims.add(1)
        elif isinstance(e, (OpenBall, ClosedBall)):
            dims.add(e.center.dim)
        elif isinstance(e, Complement):
            walk(e.inner)
        elif isinstance(e, (Union, Intersection)):
            for p in e.parts:
                walk(p)
        else:
            raise TypeError(f"unknown set expression node {e!r}")

    walk(expr)
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed leaf dimensions {sorted(dims)}")
    return dims.pop() if dims else None


def contains(expr: SetExpr, p: Point) -> bool:
    """Exact membership by tree evaluation; works in every dimension."""
    if isinstance(expr, Interval):
        if p.dim != 1:
            raise DimensionMismatch("interval leaves live on the line")
        x = p.coords[0]
        lo_ok = x > expr.lo or (expr.lo_closed and x == expr.lo)
        hi_ok = x < expr.hi or (expr.hi_closed and x == expr.hi)
        return lo_ok and hi_ok
    if isinstance(expr, OpenBall):
        return distance(p, expr.center) < expr.radius
    if isinstance(expr, ClosedBall):
        return distance(p, expr.center) <= expr.radius
    if isinstance(expr, Complement):
        return not contains(expr.inner, p)
    if isinstance(expr, Union):
        return any(contains(part, p) for part in expr.parts)
    if isinstance(expr, Intersection):
        return all(contains(part, p) for part in expr.parts)
    raise TypeError(f"unknown set expression node {expr!r}")


# ---------------------------------------------------------------------------
# One-dimensional canonical form
# ---------------------------------------------------------------------------
#
# A canonical set is a sorted tuple of disjoint pieces that cannot be merged:
# two adjacent pieces never touch "closably". Degenerate pieces [a,a] are
# single points. Endpoints at +-infinity are always open.


@dataclass(frozen=True)
class _Piece:
    lo: Real
    lo_closed: bool
    hi: Real
    hi_closed: bool


def _piece(lo, lo_closed, hi, hi_closed) -> Optional[_Piece]:
    if lo == NEG_INF:
        lo_closed = False
    if hi == POS_INF:
        hi_closed = False
    if lo > hi:
        return None
    if lo == hi:
        if lo == NEG_INF or lo == POS_INF:
            return None
        if not (lo_closed and hi_closed):
            return None
    return _Piece(lo, lo_closed, hi, hi_closed)


_FULL_PIECES = (_Piece(NEG_INF, False, POS_INF, False),)


def _merge(pieces: Iterable[_Piece]) -> tuple:
    items = sorted(pieces, key=lambda p: (p.lo, 0 if p.lo_closed else 1))
    out: list = []
    for p in items:
        if out:
            q = out[-1]
            touches = p.lo < q.hi or (p.lo == q.hi and (p.lo_closed or q.hi_closed))
            if touches:
                hi, hic = q.hi, q.hi_closed
                if p.hi > hi:
                    hi, hic = p.hi, p.hi_closed
                elif p.hi == hi:
                    hic = hic or p.hi_closed
                out[-1] = _Piece(q.lo, q.lo_closed, hi, hic)
                continue
        out.append(p)
    return tuple(out)


def _complement_pieces(pieces: Sequence[_Piece]) -> tuple:
    out = []
    cur_lo, cur_loc = NEG_INF, False
    for p in pieces:
        cand = _piece(cur_lo, cur_loc, p.lo, not p.lo_closed)
        if cand is not None:
            out.append(cand)
        cur_lo, cur_loc = p.hi, not p.hi_closed
    tail = _piece(cur_lo, cur_loc, POS_INF, False)
    if tail is not None:
        out.append(tail)
    return tuple(out)


def _intersect_pieces(a: Sequence[_Piece], b: Sequence[_Piece]) -> tuple:
    out = []
    for x in a:
        for y in b:
            lo, loc = x.lo, x.lo_closed
            if y.lo > lo:
                lo, loc = y.lo, y.lo_closed
            elif y.lo == lo:
                loc = loc and y.lo_closed
            hi, hic = x.hi, x.hi_closed
            if y.hi < hi:
                hi, hic = y.hi, y.hi_closed
            elif y.hi == hi:
                hic = hic and y.hi_closed
            cand = _piece(lo, loc, hi, hic)
            if cand is not None:
                out.append(cand)
    return _merge(out)


@lru_cache(maxsize=8192)
def normalize_1d(expr: SetExpr) -> tuple:
    """Canonical disjoint-interval form of a one-dimensional expression."""
    dim = dimension_of(expr)
    if dim not in (None, 1):
        raise DimensionMismatch("normalize_1d needs one-dimensional leaves")
    return _normalize(expr)


def _normalize(expr: SetExpr) -> tuple:
    if isinstance(expr, Interval):
        cand = _piece(expr.lo, expr.lo_closed, expr.hi, expr.hi_closed)
        return (cand,) if cand is not None else ()
    if isinstance(expr, OpenBall):
        c = expr.center.coords[0]
        cand = _piece(c - expr.radius, False, c + expr.radius, False)
        return (cand,) if cand is not None else ()
    if isinstance(expr, ClosedBall):
        c = expr.center.coords[0]
        cand = _piece(c - expr.radius, True, c + expr.radius, True)
        return (cand,) if cand is not None else ()
    if isinstance(expr, Complement):
        return _complement_pieces(_normalize(expr.inner))
    if isinstance(expr, Union):
        acc: list = []
        for part in expr.parts:
            acc.extend(_normalize(part))
        return _merge(acc)
    if isinstance(expr, Intersection):
        acc = _FULL_PIECES
        for part in expr.parts:
            acc = _intersect_pieces(acc, _normalize(part))
        return acc
    raise TypeError(f"unknown set expression node {expr!r}")


def _pieces_contain(pieces: Sequence[_Piece], x) -> bool:
    for p in pieces:
        lo_ok = x > p.lo or (p.lo_closed and x == p.lo)
        hi_ok = x < p.hi or (p.hi_closed and x == p.hi)
        if lo_ok and hi_ok:
            return True
    return False


def _endpoints_1d(pieces: Sequence[_Piece]) -> tuple:
    pts = set()
    for p in pieces:
        if p.lo != NEG_INF:
            pts.add(p.lo)
        if p.hi != POS_INF:
            pts.add(p.hi)
    return tuple(sorted(pts))


def is_empty_1d(expr: SetExpr) -> bool:
    return len(normalize_1d(expr)) == 0


def pieces_subset(inner: Sequence[_Piece], outer: Sequence[_Piece]) -> bool:
    """Exact containment test between canonical forms."""
    leftover = _intersect_pieces(inner, _complement_pieces(outer))
    return len(leftover) == 0


# ---------------------------------------------------------------------------
# Boundaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Boundary:
    """Boundary of a set expression.

    ``exact`` is False only for nested expressions in d >= 2, in which case
    ``expr``/``spheres`` describe a conservative superset (all leaf spheres).
    ``points`` is populated in the exact one-dimensional case, ``spheres``
    whenever sphere geometry is involved.
    """

    expr: SetExpr
    exact: bool
    points: Optional[tuple] = None  # tuple[Point, ...]
    spheres: Optional[tuple] = None  # tuple[(Point, Real), ...]


def _sphere_expr(center: Point, radius) -> SetExpr:
    return Intersection((ClosedBall(center, radius), Complement(OpenBall(center, radius))))


def _sphere_pattern(expr: SetExpr):
    """Recognize the canonical sphere encoding; returns (center, radius) or None."""
    if isinstance(expr, Intersection) and len(expr.parts) == 2:
        a, b = expr.parts
        if (
            isinstance(a, ClosedBall)
            and isinstance(b, Complement)
            and isinstance(b.inner, OpenBall)
            and a.center == b.inner.center
            and a.radius == b.inner.radius
        ):
            return a.center, a.radius
    return None


def _ball_leaves(expr: SetExpr) -> list:
    out = []

    def walk(e):
        if isinstance(e, (OpenBall, ClosedBall)):
            out.append((e.center, e.radius))
        elif isinstance(e, Complement):
            walk(e.inner)
        elif isinstance(e, (Union, Intersection)):
            for p in e.parts:
                walk(p)

    walk(expr)
    return out


def boundary(expr: SetExpr) -> Boundary:
    """Topological boundary, exact on the supported fragment.

    d = 1: exact finite endpoint set of the canonical form.
    d >= 2: exact sphere for a single ball or its (iterated) complement;
    otherwise a conservative superset made of every leaf sphere.
    """
    dim = dimension_of(expr)
    if dim in (None, 1):
        pieces = normalize_1d(expr)
        values = _endpoints_1d(pieces)
        pts = tuple(Point((v,)) for v in values)
        return Boundary(expr=point_set(*values), exact=True, points=pts)

    core = expr
    while isinstance(core, Complement):
        core = core.inner
    if isinstance(core, (OpenBall, ClosedBall)):
        sphere = (core.center, core.radius)
        return Boundary(expr=_sphere_expr(*sphere), exact=True, spheres=(sphere,))
    sp = _sphere_pattern(core)
    if sp is not None:
        # The boundary of a sphere is the sphere itself.
        return Boundary(expr=_sphere_expr(*sp), exact=True, spheres=(sp,))
    spheres = tuple(_ball_leaves(core))
    superset = Union(tuple(_sphere_expr(c, r) for c, r in spheres))
    return Boundary(expr=superset, exact=False, spheres=spheres)


def classify(p: Point, expr: SetExpr, tol: Real = DEFAULT_GEOM_TOL) -> str:
    """INTERIOR / EXTERIOR / BOUNDARY relative to the exact fragment.

    In float mode a point within ``tol`` of the boundary is reported as
    BOUNDARY; with exact (rational) data pass tol=0 for strict answers.
    """
    dim = dimension_of(expr)
    if dim in (None, 1):
        if p.dim != 1:
            raise DimensionMismatch("point dimension does not match the expression")
        x = p.coords[0]
        pieces = normalize_1d(expr)
        for v in _endpoints_1d(pieces):
            if abs(x - v) <= tol:
                return BOUNDARY
        return INTERIOR if _pieces_contain(pieces, x) else EXTERIOR

    if p.dim != dim:
        raise DimensionMismatch("point dimension does not match the expression")
    flips = 0
    core = expr
    while isinstance(core, Complement):
        core = core.inner
        flips ^= 1
    if isinstance(core, (OpenBall, ClosedBall)):
        d = distance(p, core.center)
        if abs(d - core.radius) <= tol:
            return BOUNDARY
        inside = d < core.radius
        if flips:
            inside = not inside
        return INTERIOR if inside else EXTERIOR
    sp = _sphere_pattern(core)
    if sp is not None:
        d = distance(p, sp[0])
        if abs(d - sp[1]) <= tol:
            return BOUNDARY
        return EXTERIOR if not flips else INTERIOR
    raise InexactFragment(
        "exact classification supports interval algebra and single balls only"
    )


# ---------------------------------------------------------------------------
# Distance to a set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetDistance:
    value: Real
    exact: bool
    gap: Real = 0  # sampled mode only: resolution of the candidate scheme


def _dist_1d(x, pieces: Sequence[_Piece]) -> Real:
    if not pieces:
        raise EmptySetError("distance to the empty set")
    best = None
    for p in pieces:
        d = 0
        if x < p.lo:
            d = p.lo - x
        elif x > p.hi:
            d = x - p.hi
        if best is None or d < best:
            best = d
        if best == 0:
            break
    return best


def _sample_directions(dim: int, samples: int) -> list:
    # Deterministic unit directions; golden-angle fan in 2d, seeded
    # Gaussian directions beyond.
    dirs = []
    if dim == 2:
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        for k in range(samples):
            a = 2.0 * math.pi * ((k * golden) % 1.0)
            dirs.append((math.cos(a), math.sin(a)))
        return dirs
    rng = random.Random(0xD15C)
    while len(dirs) < samples:
        v = [rng.gauss(0.0, 1.0) for _ in range(dim)]
        norm = math.sqrt(sum(c * c for c in v))
        if norm > 1e-9:
            dirs.append(tuple(c / norm for c in v))
    return dirs


def dist_to_set_detailed(p: Point, expr: SetExpr, samples: int = 64) -> SetDistance:
    """Distance from a point to the closure of a set.

    Exact on the interval algebra, single balls/complements and unions of
    exact parts. Otherwise falls back to a documented candidate scheme: the
    radial projections onto every leaf sphere plus a deterministic fan of
    sphere points, filtered by exact membership; the reported gap is the
    chord resolution of that fan.
    """
    dim = dimension_of(expr)
    if dim in (None, 1):
        if p.dim != 1:
            raise DimensionMismatch("point dimension does not match the expression")
        return SetDistance(_dist_1d(p.coords[0], normalize_1d(expr)), True)

    if p.dim != dim:
        raise DimensionMismatch("point dimension does not match the expression")

    if isinstance(expr, OpenBall) or isinstance(expr, ClosedBall):
        d = distance(p, expr.center)
        return SetDistance(max(0, d - expr.radius), True)
    if isinstance(expr, Complement):
        inner = expr.inner
        if isinstance(inner, Complement):
            return dist_to_set_detailed(p, inner.inner, samples)
        if isinstance(inner, (OpenBall, ClosedBall)):
            d = distance(p, inner.center)
            return SetDistance(max(0, inner.radius - d), True)
    sp = _sphere_pattern(expr)
    if sp is not None:
        return SetDistance(abs(distance(p, sp[0]) - sp[1]), True)
    if isinstance(expr, Union):
        if not expr.parts:
            raise EmptySetError("distance to the empty set")
        results = [dist_to_set_detailed(p, part, samples) for part in expr.parts]
        value = min(r.value for r in results)
        return SetDistance(
            value,
            all(r.exact for r in results),
            max(r.gap for r in results),
        )

    # Sampled fallback for nested d >= 2 expressions.
    leaves = _ball_leaves(expr)
    if not leaves:
        raise EmptySetError("no ball leaves to sample from")
    candidates = []
    if contains(expr, p):
        return SetDistance(0, True)
    max_r = 0.0
    for center, radius in leaves:
        max_r = max(max_r, float(radius))
        candidates.append(center)
        d = distance(p, center)
        if d > 0:
            proj = tuple(
                c + (a - c) * (radius / d) for a, c in zip(p.coords, center.coords)
            )
            candidates.append(Point(proj))
        for direction in _sample_directions(dim, samples):
            for scale in (0.999999, 1.0, 1.000001):
                q = tuple(
                    c + u * radius * scale for c, u in zip(center.coords, direction)
                )
                candidates.append(Point(q))
    hits = [distance(p, q) for q in candidates if contains(expr, q)]
    if not hits:
        raise EmptySetError("sampling found no witness point in the set")
    gap = max_r * (2.0 * math.pi / max(samples, 1)) + 1e-6 * max_r
    return SetDistance(min(hits), False, gap)


def dist_to_set(p: Point, expr: SetExpr, samples: int = 64) -> Real:
    return dist_to_set_detailed(p, expr, samples).value


# ---------------------------------------------------------------------------
# Boundary inclusion lemma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InclusionCheck:
    ok: bool
    mode: str
    tested: int

    def __bool__(self):
        return self.ok


def boundary_inclusion_check(B: SetExpr, U: SetExpr, samples: int = 0) -> InclusionCheck:
    """Check bd(B \\ U) subset (bd(B) \\ U) union bd(U).

    Exact by endpoint enumeration on the one-dimensional fragment. In higher
    dimensions a sampled mode probes candidate points near every leaf sphere
    and reports how many were tested.
    """
    dim_b = dimension_of(B)
    dim_u = dimension_of(U)
    dims = {d for d in (dim_b, dim_u) if d is not None}
    if len(dims) > 1:
        raise DimensionMismatch("operands live in different dimensions")
    dim = dims.pop() if dims else 1

    if dim == 1:
        lhs = Intersection((B, Complement(U)))
        lhs_points = _endpoints_1d(normalize_1d(lhs))
        bnd_b = set(_endpoints_1d(normalize_1d(B)))
        bnd_u = set(_endpoints_1d(normalize_1d(U)))
        ok = True
        for x in lhs_points:
            if x in bnd_u:
                continue
            if x in bnd_b and not contains(U, Point((x,))):
                continue
            ok = False
            break
        return InclusionCheck(ok, "exact", len(lhs_points))

    # Sampled mode: probe near the leaf spheres of both operands.
    if samples <= 0:
        samples = 128
    leaves = _ball_leaves(B) + _ball_leaves(U)
    if not leaves:
        return InclusionCheck(True, "sampled", 0)
    lhs = Intersection((B, Complement(U)))
    delta = 1e-6 * max(float(r) for _, r in leaves)
    dirs = _sample_directions(dim, 8)
    tested = 0
    ok = True
    for center, radius in leaves:
        for direction in _sample_directions(dim, samples):
            x = Point(tuple(c + u * radius for c, u in zip(center.coords, direction)))
            near = [
                Point(tuple(xc + dd * delta for xc, dd in zip(x.coords, d2)))
                for d2 in dirs
            ]
            inside = any(contains(lhs, q) for q in near + [x])
            outside = any(not contains(lhs, q) for q in near + [x])
            if not (inside and outside):
                continue  # not an empirical boundary point of the left side
            tested += 1
            on_bd_b = any(
                abs(distance(x, c2) - r2) <= delta for c2, r2 in _ball_leaves(B)
            )
            on_bd_u = any(
                abs(distance(x, c2) - r2) <= delta for c2, r2 in _ball_leaves(U)
            )
            if on_bd_u or (on_bd_b and not contains(U, x)):
                continue
            ok = False
    return InclusionCheck(ok, "sampled", tested)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def format_real(x: Real) -> str:
    """Deterministic short rendering used in probe labels and reports."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _num_to_json(x: Real):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf"
    return x


def _num_from_json(v) -> Real:
    if isinstance(v, str):
        if v == "inf":
            return POS_INF
        if v == "-inf":
            return NEG_INF
        return Fraction(v)
    if isinstance(v, (int, float, Fraction)):
        return v
    raise ValueError(f"not a number: {v!r}")


def set_to_json(expr: SetExpr):
    if isinstance(expr, OpenBall):
        return {"open_ball": {"center": [_num_to_json(c) for c in expr.center.coords],
                              "radius": _num_to_json(expr.radius)}}
    if isinstance(expr, ClosedBall):
        return {"closed_ball": {"center": [_num_to_json(c) for c in expr.center.coords],
                                "radius": _num_to_json(expr.radius)}}
    if isinstance(expr, Interval):
        return {"interval": {"lo": _num_to_json(expr.lo), "hi": _num_to_json(expr.hi),
                             "lo_closed": expr.lo_closed, "hi_closed": expr.hi_closed}}
    if isinstance(expr, Complement):
        return {"complement": set_to_json(expr.inner)}
    if isinstance(expr, Union):
        return {"union": [set_to_json(p) for p in expr.parts]}
    if isinstance(expr, Intersection):
        return {"intersection": [set_to_json(p) for p in expr.parts]}
    raise TypeError(f"unknown set expression node {expr!r}")


def set_from_json(obj) -> SetExpr:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"a set expression is a single-key object, got {obj!r}")
    (tag, body), = obj.items()
    if tag == "open_ball":
        return OpenBall(Point(tuple(_num_from_json(c) for c in body["center"])),
                        _num_from_json(body["radius"]))
    if tag == "closed_ball":
        return ClosedBall(Point(tuple(_num_from_json(c) for c in body["center"])),
                          _num_from_json(body["radius"]))
    if tag == "interval":
        return Interval(_num_from_json(body["lo"]), _num_from_json(body["hi"]),
                        bool(body.get("lo_closed", True)), bool(body.get("hi_closed", True)))
    if tag == "complement":
        return Complement(set_from_json(body))
    if tag == "union":
        return Union(tuple(set_from_json(p) for p in body))
    if tag == "intersection":
        return Intersection(tuple(set_from_json(p) for p in body))
    raise ValueError(f"unknown set expression tag {tag!r}")


def describe_set(expr: SetExpr) -> str:
    """Human-oriented rendering; one-dimensional sets print as intervals."""
    dim = dimension_of(expr)
    if dim in (None, 1):
        pieces = normalize_1d(expr)
        if not pieces:
            return "{}"
        parts = []
        for p in pieces:
            if p.lo == p.hi:
                parts.append("{%s}" % format_real(p.lo))
                continue
            lb = "[" if p.lo_closed else "("
            rb = "]" if p.hi_closed else ")"
            lo = "-inf" if p.lo == NEG_INF else format_real(p.lo)
            hi = "inf" if p.hi == POS_INF else format_real(p.hi)
            parts.append(f"{lb}{lo}, {hi}{rb}")
        return " u ".join(parts)
    if isinstance(expr, OpenBall):
        return f"open_ball(c={expr.center!r}, r={format_real(expr.radius)})"
    if isinstance(expr, ClosedBall):
        return f"closed_ball(c={expr.center!r}, r={format_real(expr.radius)})"
    if isinstance(expr, Complement):
        return f"complement({describe_set(expr.inner)})"
    if isinstance(expr, (Union, Intersection)):
        op = " u " if isinstance(expr, Union) else " n "
        return "(" + op.join(describe_set(p) for p in expr.parts) + ")"
    return repr(expr)
