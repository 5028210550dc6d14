"""Countable atomic measures with certified tails near a marked point.

A measure is a (possibly infinite) enumeration of positive point masses
together with a tail locator K: for every radius r > 0, all atoms with index
>= K(r) lie strictly within distance r of the marked point x0. That
certificate is exactly what makes "mass outside any neighbourhood of x0" a
finite, exactly computable sum even when the total mass is infinite.
Infinite families are never materialized; every tail-touching operation
states the radius it works outside of.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import geometry as geo
from .errors import (
    MissingTailBound,
    MissingTailLocator,
    UnboundedIntegral,
    UnboundedRegion,
)
from .geometry import (
    Complement,
    Intersection,
    OpenBall,
    Point,
    Real,
    SetExpr,
    contains,
    distance,
)

#: Default absolute tolerance for comparing measure values in float mode.
DEFAULT_MASS_TOL = 1e-9


@dataclass(frozen=True)
class Atom:
    location: Point
    mass: Real

    def __post_init__(self):
        if not (self.mass > 0):
            raise ValueError(f"atom mass must be positive, got {self.mass!r}")


@dataclass(frozen=True)
class AtomicMeasure:
    """Atomic measure with a tail certificate around ``x0``.

    ``atom_fn`` maps an index k = 0, 1, ... to an Atom; ``n_atoms`` is None
    for infinite families. ``tail_locator`` is K(r); it must be
    non-increasing in r. ``tail_square_bound(K)`` optionally bounds
    sum_{k>=K} mass_k * min(d_k^2, 1), the certificate consumed by
    jump-intensity validity checks on infinite families.
    """

    x0: Point
    atom_fn: Callable[[int], Atom]
    n_atoms: Optional[int]
    tail_locator: Optional[Callable[[Real], int]] = None
    tail_square_bound: Optional[Callable[[int], Real]] = None
    center_atom_ok: bool = False
    name: str = ""

    @staticmethod
    def from_atoms(x0: Point, atoms, *, center_atom_ok: bool = False, name: str = "") -> "AtomicMeasure":
        """Finite measure from an explicit atom list."""
        fixed = []
        for a in atoms:
            atom = a if isinstance(a, Atom) else Atom(Point(tuple(a[0])) if not isinstance(a[0], Point) else a[0], a[1])
            if atom.location.dim != x0.dim:
                raise geo.DimensionMismatch("atom dimension differs from x0")
            if atom.location == x0 and not center_atom_ok:
                raise ValueError("atom at the marked point needs center_atom_ok=True")
            fixed.append(atom)
        atoms_t = tuple(fixed)
        return AtomicMeasure(
            x0=x0,
            atom_fn=atoms_t.__getitem__,
            n_atoms=len(atoms_t),
            tail_locator=lambda r: len(atoms_t),
            center_atom_ok=center_atom_ok,
            name=name,
        )

    @staticmethod
    def from_enumerator(
        x0: Point,
        atom_fn: Callable[[int], Atom],
        tail_locator: Optional[Callable[[Real], int]],
        *,
        tail_square_bound: Optional[Callable[[int], Real]] = None,
        name: str = "",
    ) -> "AtomicMeasure":
        """Infinite family; atoms must never sit exactly at x0."""
        return AtomicMeasure(
            x0=x0,
            atom_fn=atom_fn,
            n_atoms=None,
            tail_locator=tail_locator,
            tail_square_bound=tail_square_bound,
            name=name,
        )

    @property
    def finite(self) -> bool:
        return self.n_atoms is not None

    def atom(self, k: int) -> Atom:
        return self.atom_fn(k)

    def iter_atoms(self, limit: Optional[int] = None):
        stop = self.n_atoms if self.n_atoms is not None else limit
        if stop is None:
            raise MissingTailLocator("cannot iterate an infinite family without a limit")
        for k in range(stop):
            yield self.atom_fn(k)

    def tail_index(self, r: Real) -> int:
        """K(r): all atoms with index >= K(r) are strictly within r of x0."""
        if not (r > 0):
            raise ValueError("radius must be positive")
        if self.n_atoms is not None:
            return self.n_atoms
        if self.tail_locator is None:
            raise MissingTailLocator(
                f"measure {self.name or '<anonymous>'} has no tail locator"
            )
        return int(self.tail_locator(r))

    def atoms_outside(self, r: Real, *, strict: bool = False):
        """Atoms at distance >= r (or > r when strict) from x0, a finite list."""
        out = []
        for k in range(self.tail_index(r)):
            a = self.atom_fn(k)
            d = distance(a.location, self.x0)
            if d > r or (not strict and d == r):
                out.append(a)
        return out

    def mass_outside(self, r: Real, *, strict: bool = False) -> Real:
        """Mass of the complement of the open (closed, when strict) ball.

        Atoms exactly at distance r belong to the complement of the open
        ball and are included by default; ``strict=True`` excludes them.
        """
        total = 0
        for a in self.atoms_outside(r, strict=strict):
            total += a.mass
        return total

    def mass_at(self, p: Point) -> Real:
        """Exact mass of the single point p."""
        if p == self.x0:
            if self.n_atoms is None:
                # Constructor contract: infinite families never place an atom
                # exactly at x0, so the mass there is zero.
                return 0
            return sum((a.mass for a in self.iter_atoms() if a.location == p), 0)
        d = distance(p, self.x0)
        total = 0
        for k in range(self.tail_index(d)):
            a = self.atom_fn(k)
            if a.location == p:
                total += a.mass
        return total

    def total_mass(self) -> Real:
        if self.n_atoms is None:
            raise UnboundedRegion("total mass of an infinite family is not a finite sum")
        return sum((a.mass for a in self.iter_atoms()), 0)


def mass_of(eta: AtomicMeasure, S: SetExpr) -> Real:
    """Exact mass of a set expression.

    Needs either finitely many atoms or a set whose closure excludes some
    ball around x0 (certified through the exact distance from x0 to S).
    Atoms exactly on the boundary of S are assigned by membership of S
    itself.
    """
    if eta.finite:
        return sum((a.mass for a in eta.iter_atoms() if contains(S, a.location)), 0)
    dim = geo.dimension_of(S)
    if dim in (None, 1) and geo.is_empty_1d(S):
        return 0
    dist = geo.dist_to_set_detailed(eta.x0, S)
    if not dist.exact or not (dist.value > 0):
        raise UnboundedRegion(
            "set closure reaches the marked point of an infinite family"
        )
    rho = dist.value
    total = 0
    for k in range(eta.tail_index(rho)):
        a = eta.atom_fn(k)
        if contains(S, a.location):
            total += a.mass
    return total


def boundary_mass(eta: AtomicMeasure, S: SetExpr, *, conservative: bool = False,
                  tol: Real = 0) -> Real:
    """Mass carried by the topological boundary of S.

    Exact wherever boundary(S) is exact. For conservative boundaries the
    result is an upper bound and requires ``conservative=True``. ``tol``
    widens sphere membership for float data in d >= 2.
    """
    bd = geo.boundary(S)
    if not bd.exact and not conservative:
        raise geo.InexactFragment(
            "boundary is a conservative superset; pass conservative=True for an upper bound"
        )
    if bd.points is not None:
        return sum((eta.mass_at(p) for p in bd.points), 0)

    total = 0
    seen = set()
    for center, radius in bd.spheres or ():
        rho = abs(distance(eta.x0, center) - radius)
        if eta.finite:
            k_max = eta.n_atoms
        else:
            if not (rho > 0):
                raise UnboundedRegion("sphere passes through the marked point")
            k_max = eta.tail_index(rho)
        for k in range(k_max):
            a = eta.atom_fn(k)
            if k in seen:
                continue
            if abs(distance(a.location, center) - radius) <= tol:
                total += a.mass
                seen.add(k)
    return total


@dataclass(frozen=True)
class RestrictedMeasure:
    """The measure A |-> eta(window n A)."""

    base: AtomicMeasure
    window: SetExpr

    @property
    def x0(self) -> Point:
        return self.base.x0

    def mass_of(self, S: SetExpr) -> Real:
        return mass_of(self.base, Intersection((self.window, S)))

    def finite_atoms(self):
        """The atoms inside the window, when provably finitely many."""
        if self.base.finite:
            return [a for a in self.base.iter_atoms() if contains(self.window, a.location)]
        dim = geo.dimension_of(self.window)
        if dim in (None, 1) and geo.is_empty_1d(self.window):
            return []
        dist = geo.dist_to_set_detailed(self.base.x0, self.window)
        if not dist.exact or not (dist.value > 0):
            raise UnboundedRegion(
                "window closure reaches the marked point of an infinite family"
            )
        out = []
        for k in range(self.base.tail_index(dist.value)):
            a = self.base.atom_fn(k)
            if contains(self.window, a.location):
                out.append(a)
        return out

    def total_mass(self) -> Real:
        return sum((a.mass for a in self.finite_atoms()), 0)


def restrict(eta: AtomicMeasure, window: SetExpr) -> RestrictedMeasure:
    return RestrictedMeasure(eta, window)


def integrate(f, mu) -> Real:
    """Integral of a test function against an atomic or restricted measure.

    Legal whenever the function carries a positive vanish radius, or the
    measure (window) has provably finitely many atoms; otherwise raises
    UnboundedIntegral. The result is the exact finite atom sum.
    """
    vanish = getattr(f, "vanish_radius", 0)
    if isinstance(mu, RestrictedMeasure):
        try:
            atoms = mu.finite_atoms()
        except UnboundedRegion:
            if not (vanish and vanish > 0):
                raise UnboundedIntegral(
                    "no vanish radius and the window does not exclude a ball around x0"
                )
            atoms = [
                a
                for a in mu.base.atoms_outside(vanish)
                if contains(mu.window, a.location)
            ]
        return _atom_sum(f, atoms)
    if isinstance(mu, AtomicMeasure):
        if vanish and vanish > 0:
            return _atom_sum(f, mu.atoms_outside(vanish))
        if mu.finite:
            return _atom_sum(f, list(mu.iter_atoms()))
        raise UnboundedIntegral(
            "function has no vanish radius and the measure has an infinite tail"
        )
    raise TypeError(f"cannot integrate against {mu!r}")


def _atom_sum(f, atoms) -> Real:
    total = 0
    for a in atoms:
        v = f(a.location)
        if v:
            total += v * a.mass
    return total


@dataclass(frozen=True)
class LevyCheck:
    valid: bool
    value: Real
    error_bound: Real
    reason: str = ""

    def __iter__(self):  # unpack like a tuple
        yield self.valid
        yield self.value
        yield self.error_bound


def is_levy_measure(eta: AtomicMeasure, cutoff: int) -> LevyCheck:
    """Jump-intensity validity: no mass at x0 and finite clamped-square mass.

    The value is the partial sum of mass * min(d^2, 1) over the first
    ``cutoff`` atoms (all atoms, for finite families, taken exactly); the
    error bound comes from the declared tail certificate. Infinite families
    without a tail_square_bound raise MissingTailBound.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    center_mass = eta.mass_at(eta.x0)

    if eta.finite:
        value = 0
        for a in eta.iter_atoms():
            if a.location == eta.x0:
                continue
            d = distance(a.location, eta.x0)
            value += a.mass * min(d * d, 1)
        if center_mass > 0:
            return LevyCheck(False, value, 0, "mass at the marked point")
        return LevyCheck(True, value, 0)

    if eta.tail_square_bound is None:
        raise MissingTailBound(
            "infinite family needs a declared clamped-square tail bound"
        )
    value = 0
    for k in range(cutoff):
        a = eta.atom_fn(k)
        d = distance(a.location, eta.x0)
        value += a.mass * min(d * d, 1)
    bound = eta.tail_square_bound(cutoff)
    if not (bound < math.inf):
        return LevyCheck(False, value, math.inf, "clamped-square tail diverges")
    return LevyCheck(True, value, bound)
