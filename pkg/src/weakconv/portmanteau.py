"""Probe-based evaluators for the six convergence characterizations.

Each evaluator turns one characterization of convergence of a measure
family into a finite battery of probes (radii, sets, test functions),
computes the per-member statistic on a geometric index grid, and judges the
residual series against the limit value. Verdicts are probe-based, not
proofs: HOLDS means "consistent with convergence on every probe at the
largest index, within tolerance and with a plausible trend"; FAILS requires
a concrete witness probe whose residual stays large.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import geometry as geo
from .errors import UnboundedRegion
from .geometry import (
    ClosedBall,
    Complement,
    OpenBall,
    Point,
    Real,
    SetExpr,
    format_real,
)
from .measures import AtomicMeasure, boundary_mass, integrate, mass_of, restrict
from .testfuncs import TestFunction, continuity_radius

HOLDS = "HOLDS"
FAILS = "FAILS"
INDETERMINATE = "INDETERMINATE"

CONDITION_KEYS = ("i", "ii", "iii", "iv", "v", "vi_a", "vi_b")


@dataclass(frozen=True)
class MeasureFamily:
    """A family n -> measure plus its limit, sharing one marked point."""

    x0: Point
    member_fn: Callable[[int], AtomicMeasure]
    limit: AtomicMeasure
    n_max: int
    name: str = ""
    bounded: bool = True  # finite total mass per member (enables the
    # classical full-space open/closed probes)

    def member(self, n: int) -> AtomicMeasure:
        if not (1 <= n <= self.n_max):
            raise ValueError(f"index {n} outside 1..{self.n_max}")
        return self.member_fn(n)


@dataclass(frozen=True)
class CheckConfig:
    n_max: int = 2**16
    tol: Real = 1e-9
    fail_threshold: Real = 1e-3
    trend_window: int = 5
    contraction_ratio: float = 0.8
    geom_tol: Real = geo.DEFAULT_GEOM_TOL

    def grid(self) -> tuple:
        ns = []
        n = 1
        while n <= self.n_max:
            ns.append(n)
            n *= 2
        if ns[-1] != self.n_max:
            ns.append(self.n_max)
        return tuple(ns)


@dataclass(frozen=True)
class Estimates:
    last: Real
    limsup_est: Real
    liminf_est: Real
    trend: str


def limit_estimators(series: Sequence[Real], window: int) -> Estimates:
    """Tail-window estimators: max/min over the last ``window`` grid points
    plus a monotonicity classification of the series there."""
    if window < 1 or window > len(series):
        raise ValueError("window must be between 1 and the grid size")
    tail = list(series[-window:])
    diffs = [tail[i + 1] - tail[i] for i in range(len(tail) - 1)]
    if all(d == 0 for d in diffs):
        trend = "constant"
    elif all(d <= 0 for d in diffs):
        trend = "decreasing"
    elif all(d >= 0 for d in diffs):
        trend = "increasing"
    else:
        trend = "oscillating"
    return Estimates(series[-1], max(tail), min(tail), trend)


def classify_residuals(residuals: Sequence[Real], cfg: CheckConfig) -> tuple:
    """Judge a residual series: (status, reason).

    HOLDS: final residual within tolerance and non-increasing over the
    window, or geometrically contracting toward zero below the failure
    threshold. FAILS: the residual stagnates above the failure threshold.
    Everything else is INDETERMINATE.
    """
    w = min(cfg.trend_window, len(residuals))
    tail = list(residuals[-w:])
    last = tail[-1]

    if last <= cfg.tol and all(tail[i + 1] <= tail[i] + cfg.tol for i in range(len(tail) - 1)):
        return HOLDS, "converged"

    contracting = all(
        b <= cfg.tol or (a > 0 and b <= cfg.contraction_ratio * a)
        for a, b in zip(tail, tail[1:])
    )
    if contracting and last <= cfg.fail_threshold:
        return HOLDS, "contracting"

    if min(tail) > cfg.fail_threshold and last >= max(tail) / 2:
        return FAILS, "stagnant residual"

    return INDETERMINATE, "no clear trend"


@dataclass(frozen=True)
class ProbeResult:
    probe_id: str
    s_limit: Real
    series: tuple  # tuple[(n, value), ...]
    residuals: tuple
    status: str
    reason: str
    estimates: Estimates


@dataclass(frozen=True)
class Witness:
    probe_id: str
    value_at_n_max: Real
    limit_value: Real
    limsup_est: Real
    liminf_est: Real
    residual: Real


@dataclass(frozen=True)
class Verdict:
    status: str
    probes: tuple  # tuple[ProbeResult, ...]
    witness: Optional[Witness] = None
    skipped: tuple = ()  # tuple[str, ...]: probes dropped with a reason


@dataclass(frozen=True)
class Report:
    conditions: dict  # key -> Verdict, keys from CONDITION_KEYS
    consistent: bool
    combined: dict  # "i".."vi" -> status, with vi = vi_a AND vi_b
    stats: dict


def _aggregate(probes: Sequence[ProbeResult], skipped=()) -> Verdict:
    failing = [p for p in probes if p.status == FAILS]
    if failing:
        worst = max(failing, key=lambda p: (p.residuals[-1], ))
        w = Witness(
            probe_id=worst.probe_id,
            value_at_n_max=worst.series[-1][1],
            limit_value=worst.s_limit,
            limsup_est=worst.estimates.limsup_est,
            liminf_est=worst.estimates.liminf_est,
            residual=worst.residuals[-1],
        )
        return Verdict(FAILS, tuple(probes), w, tuple(skipped))
    if any(p.status == INDETERMINATE for p in probes) or not probes:
        return Verdict(INDETERMINATE, tuple(probes), None, tuple(skipped))
    return Verdict(HOLDS, tuple(probes), None, tuple(skipped))


class _Stats:
    def __init__(self):
        self.statistic_evaluations = 0
        self.probes = 0
        self.skipped_probes = 0

    def as_dict(self) -> dict:
        return {
            "statistic_evaluations": self.statistic_evaluations,
            "probes": self.probes,
            "skipped_probes": self.skipped_probes,
        }


def _probe_series(
    fam: MeasureFamily,
    cfg: CheckConfig,
    probe_id: str,
    stat: Callable[[AtomicMeasure], Real],
    stats: Optional[_Stats] = None,
) -> ProbeResult:
    grid = cfg.grid()
    s_limit = stat(fam.limit)
    series = []
    for n in grid:
        v = stat(fam.member(n))
        if stats is not None:
            stats.statistic_evaluations += 1
        series.append((n, v))
    residuals = tuple(abs(v - s_limit) for _, v in series)
    status, reason = classify_residuals(residuals, cfg)
    est = limit_estimators([v for _, v in series], min(cfg.trend_window, len(series)))
    if stats is not None:
        stats.probes += 1
    return ProbeResult(probe_id, s_limit, tuple(series), residuals, status, reason, est)


def nearest_continuity_radius(limit: AtomicMeasure, r: Real, rel: float = 0.5) -> Real:
    """r itself when its sphere is massless for the limit, else the closest
    verified gap midpoint inside a relative window around r."""
    if boundary_mass(limit, OpenBall(limit.x0, r)) == 0:
        return r
    lo = r - r * (Fraction(1, 2) if isinstance(r, (int, Fraction)) else rel)
    hi = r + r * (Fraction(1, 2) if isinstance(r, (int, Fraction)) else rel)
    from .testfuncs import _atom_distances_in  # local: shares the enumeration

    ds = _atom_distances_in(limit, lo, hi)
    edges = [lo] + ds + [hi]
    half = Fraction(1, 2) if isinstance(r, (int, Fraction)) else 0.5
    candidates = []
    for i in range(len(edges) - 1):
        width = edges[i + 1] - edges[i]
        if width > 0:
            candidates.append(edges[i] + width * half)
    verified = [
        c for c in candidates if boundary_mass(limit, OpenBall(limit.x0, c)) == 0
    ]
    if not verified:
        return continuity_radius(limit, lo, hi)
    return min(verified, key=lambda c: (abs(c - r), c))


def _mapped_radii(fam: MeasureFamily, radii: Sequence[Real]) -> list:
    out = []
    for r in radii:
        m = nearest_continuity_radius(fam.limit, r)
        if m not in out:
            out.append(m)
    return out


def check_iii(fam: MeasureFamily, radii: Sequence[Real], cfg: CheckConfig,
              stats: Optional[_Stats] = None) -> Verdict:
    """Mass outside shrinking-ball complements converges to the limit's."""
    probes = []
    for r in _mapped_radii(fam, radii):
        probes.append(_probe_series(
            fam, cfg, f"tail_mass[r={format_real(r)}]",
            lambda eta, r=r: eta.mass_outside(r), stats,
        ))
    return _aggregate(probes)


def check_i(fam: MeasureFamily, funcs: Sequence[TestFunction],
            radii: Sequence[Real], cfg: CheckConfig,
            stats: Optional[_Stats] = None) -> Verdict:
    """Integrals of bounded continuous functions over window complements."""
    probes = []
    for r in _mapped_radii(fam, radii):
        window = Complement(OpenBall(fam.x0, r))
        for f in funcs:
            probes.append(_probe_series(
                fam, cfg, f"restricted_integral[{f.name},r={format_real(r)}]",
                lambda eta, f=f, w=window: integrate(f, restrict(eta, w)), stats,
            ))
    return _aggregate(probes)


def check_ii(fam: MeasureFamily, radii: Sequence[Real],
             probe_sets: Sequence[SetExpr], cfg: CheckConfig,
             stats: Optional[_Stats] = None) -> Verdict:
    """Set masses of the window-restricted measures; probes whose boundary
    carries restricted-limit mass are skipped and reported."""
    probes = []
    skipped = []
    for r in _mapped_radii(fam, radii):
        window = Complement(OpenBall(fam.x0, r))
        for A in probe_sets:
            bmass = _restricted_boundary_mass(fam.limit, window, A)
            label = f"restricted_mass[{geo.describe_set(A)},r={format_real(r)}]"
            if bmass != 0:
                skipped.append(f"{label}: boundary carries limit mass {format_real(bmass)}")
                if stats is not None:
                    stats.skipped_probes += 1
                continue
            probes.append(_probe_series(
                fam, cfg, label,
                lambda eta, w=window, A=A: restrict(eta, w).mass_of(A), stats,
            ))
    return _aggregate(probes, skipped)


def _restricted_boundary_mass(limit: AtomicMeasure, window: SetExpr, A: SetExpr) -> Real:
    bd = geo.boundary(A)
    if bd.points is None:
        raise geo.InexactFragment("probe sets must come from the exact fragment")
    total = 0
    for p in bd.points:
        if geo.contains(window, p):
            total += limit.mass_at(p)
    return total


def check_iv(fam: MeasureFamily, funcs: Sequence[TestFunction], cfg: CheckConfig,
             stats: Optional[_Stats] = None) -> Verdict:
    """Full-space integrals of functions vanishing near the marked point."""
    probes = []
    for f in funcs:
        if not (f.vanish_radius > 0):
            raise ValueError(f"{f.name or 'corpus function'} lacks a vanish radius")
        probes.append(_probe_series(
            fam, cfg, f"vanishing_integral[{f.name}]",
            lambda eta, f=f: integrate(f, eta), stats,
        ))
    return _aggregate(probes)


def check_v(fam: MeasureFamily, funcs: Sequence[TestFunction], cfg: CheckConfig,
            stats: Optional[_Stats] = None) -> Verdict:
    """As check_iv, restricted to the Lipschitz-certified corpus."""
    lip = [f for f in funcs if f.lipschitz_const is not None and f.vanish_radius > 0]
    probes = []
    for f in lip:
        probes.append(_probe_series(
            fam, cfg, f"lipschitz_integral[{f.name}]",
            lambda eta, f=f: integrate(f, eta), stats,
        ))
    return _aggregate(probes)


def check_vi(fam: MeasureFamily, radii: Sequence[Real], cfg: CheckConfig,
             stats: Optional[_Stats] = None) -> tuple:
    """One-sided neighbourhood inequalities; radii are taken as given
    because these probes need no boundary-mass restriction.

    (a) open balls U: the tail-window limsup of member mass outside U must
    not exceed the limit's. (b) closed balls V: the tail-window liminf of
    member mass outside V must not fall below the limit's.
    """
    probes_a = []
    probes_b = []
    for r in radii:
        pr = _probe_series(
            fam, cfg, f"open_nbhd_excess[r={format_real(r)}]",
            lambda eta, r=r: eta.mass_outside(r), stats,
        )
        excess = tuple(max(0, v - pr.s_limit) for _, v in pr.series)
        status, reason = classify_residuals(excess, cfg)
        probes_a.append(replace(pr, residuals=excess, status=status, reason=reason))

        pr = _probe_series(
            fam, cfg, f"closed_nbhd_deficit[r={format_real(r)}]",
            lambda eta, r=r: eta.mass_outside(r, strict=True), stats,
        )
        deficit = tuple(max(0, pr.s_limit - v) for _, v in pr.series)
        status, reason = classify_residuals(deficit, cfg)
        probes_b.append(replace(pr, residuals=deficit, status=status, reason=reason))
    return _aggregate(probes_a), _aggregate(probes_b)


def check_open_liminf(fam: MeasureFamily, open_probes: Sequence[SetExpr],
                      cfg: CheckConfig, stats: Optional[_Stats] = None) -> Verdict:
    """Bounded-measure half: limit mass of every open probe must not exceed
    the tail-window liminf of the member masses."""
    _require_bounded(fam)
    probes = []
    for A in open_probes:
        pr = _probe_series(
            fam, cfg, f"open_liminf[{geo.describe_set(A)}]",
            lambda eta, A=A: mass_of(eta, A), stats,
        )
        deficit = tuple(max(0, pr.s_limit - v) for _, v in pr.series)
        status, reason = classify_residuals(deficit, cfg)
        probes.append(replace(pr, residuals=deficit, status=status, reason=reason))
    return _aggregate(probes)


def check_closed_limsup(fam: MeasureFamily, closed_probes: Sequence[SetExpr],
                        cfg: CheckConfig, stats: Optional[_Stats] = None) -> Verdict:
    """Bounded-measure half: the tail-window limsup of member masses of every
    closed probe must not exceed the limit mass."""
    _require_bounded(fam)
    probes = []
    for F in closed_probes:
        pr = _probe_series(
            fam, cfg, f"closed_limsup[{geo.describe_set(F)}]",
            lambda eta, F=F: mass_of(eta, F), stats,
        )
        excess = tuple(max(0, v - pr.s_limit) for _, v in pr.series)
        status, reason = classify_residuals(excess, cfg)
        probes.append(replace(pr, residuals=excess, status=status, reason=reason))
    return _aggregate(probes)


def _require_bounded(fam: MeasureFamily) -> None:
    if not fam.bounded:
        raise UnboundedRegion(
            "the classical full-space probes need bounded family members"
        )


@dataclass(frozen=True)
class ProbeCorpus:
    """Shared probe material for a cross-check run."""

    radii: tuple
    probe_sets: tuple  # SetExpr probes for the restricted-mass evaluator
    funcs_c: tuple  # bounded continuous corpus (no vanish certificate needed)
    funcs_vanishing: tuple  # corpus with positive vanish radii
    open_probes: tuple = ()
    closed_probes: tuple = ()


def cross_check(fam: MeasureFamily, corpus: ProbeCorpus, cfg: CheckConfig,
                *, run_classical: Optional[bool] = None) -> Report:
    """Run all six evaluators with shared probes and collate agreement.

    The combined verdict for the paired condition vi is the conjunction of
    its halves. The consistency flag is true iff every non-INDETERMINATE
    combined condition shares one status.
    """
    stats = _Stats()
    conditions = {}
    conditions["i"] = check_i(fam, corpus.funcs_c, corpus.radii, cfg, stats)
    conditions["ii"] = check_ii(fam, corpus.radii, corpus.probe_sets, cfg, stats)
    conditions["iii"] = check_iii(fam, corpus.radii, cfg, stats)
    conditions["iv"] = check_iv(fam, corpus.funcs_vanishing, cfg, stats)
    conditions["v"] = check_v(fam, corpus.funcs_vanishing, cfg, stats)
    via, vib = check_vi(fam, corpus.radii, cfg, stats)
    conditions["vi_a"] = via
    conditions["vi_b"] = vib

    combined = {k: conditions[k].status for k in ("i", "ii", "iii", "iv", "v")}
    combined["vi"] = _combine_pair(via.status, vib.status)
    decided = {s for s in combined.values() if s != INDETERMINATE}
    consistent = len(decided) <= 1

    if run_classical is None:
        run_classical = fam.bounded and bool(corpus.open_probes or corpus.closed_probes)
    if run_classical:
        conditions["open_liminf"] = check_open_liminf(fam, corpus.open_probes, cfg, stats)
        conditions["closed_limsup"] = check_closed_limsup(fam, corpus.closed_probes, cfg, stats)

    return Report(conditions=conditions, consistent=consistent,
                  combined=combined, stats=stats.as_dict())


def _combine_pair(a: str, b: str) -> str:
    if FAILS in (a, b):
        return FAILS
    if INDETERMINATE in (a, b):
        return INDETERMINATE
    return HOLDS
