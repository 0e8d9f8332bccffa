"""Potential-function analysis for the collinear (second) phase of the
oblivious line-stretching dynamics.

Everything here works on gap vectors, not on robot objects, and is independent
of the simulator: for n robots sorted bottom-up on one vertical column, the
gaps are w_2..w_n (w_i between robots i-1 and i), with virtual boundary gaps
w_1 = w_{n+1} = 1 representing the outward unit stretch of the endpoint rule.

The midpoint/stretch dynamics act on gaps as an averaging step: for an
activation vector tau (tau_i = robot i active), gap w_i is pulled toward its
neighbors' gaps from whichever sides moved,

    w_i' = 1/2 * (w_{i-1} if tau_{i-1} else w_i)
         + 1/2 * (w_{i+1} if tau_i     else w_i).

The potential Phi = sum_i (w_i - 1)^2 never increases, and its per-round drop
dominates a quadratic form in neighboring gap differences; per epoch the drop
is at least 1/4 of the sum of squared adjacent differences of the sorted gap
values, which yields a relative drop of at least 1/(8 n^2). These are the
facts the acceptance suite certifies numerically; this module computes the
exact bounds being certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import TAU_GEO, all_collinear_vertical
from .world import GlobalConfiguration

# Numerical slack for certified inequalities, and the floor below which
# relative-drop ratios stop being meaningful.
SLACK = 1e-9
PHI_GUARD = 1e-12
ORACLE_TOL = 1e-12


# ---------------------------------------------------------------------------
# gap vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapVector:
    """The n-1 consecutive vertical gaps of a column of n robots, bottom-up."""

    gaps: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.gaps) + 1

    def w(self, i: int) -> float:
        """w_i with the virtual boundary convention w_1 = w_{n+1} = 1."""
        if i == 1 or i == self.n + 1:
            return 1.0
        if 2 <= i <= self.n:
            return self.gaps[i - 2]
        raise IndexError(f"gap index {i} out of range 1..{self.n + 1}")

    @property
    def length(self) -> float:
        return sum(self.gaps)


def gaps_from_config(config: GlobalConfiguration,
                     tol: float = TAU_GEO) -> tuple[list[int], GapVector]:
    """Bottom-up robot id order and gap vector of a collinear configuration.

    Raises if the configuration is not a single vertical column.
    """
    if not all_collinear_vertical(config.positions(), tol):
        raise ValueError("configuration is not collinear")
    order = sorted(config.robots, key=lambda r: (r.pos.y, r.id))
    gaps = tuple(order[i + 1].pos.y - order[i].pos.y for i in range(len(order) - 1))
    return [r.id for r in order], GapVector(gaps)


def phi(g: GapVector) -> float:
    """Line potential: squared deviation of every real gap from 1."""
    return sum((w - 1.0) ** 2 for w in g.gaps)


# ---------------------------------------------------------------------------
# one-round oracle
# ---------------------------------------------------------------------------

def w_update_oracle(g: GapVector, active: Sequence[bool]) -> GapVector:
    """Gap vector after one synchronous step in which robots with
    active[i-1] = True (robot i, bottom-up) execute the midpoint/stretch rule.

    Independent of the simulator: derived directly from the update
    y_i' = (y_{i-1} + y_{i+1}) / 2 with virtual neighbors at distance 1
    beyond the endpoints.
    """
    n = g.n
    if len(active) != n:
        raise ValueError(f"activation vector has length {len(active)}, expected {n}")
    new = []
    for i in range(2, n + 1):
        below_active = active[i - 2]   # robot i-1
        above_active = active[i - 1]   # robot i
        left = g.w(i - 1) if below_active else g.w(i)
        right = g.w(i + 1) if above_active else g.w(i)
        new.append(0.5 * (left + right))
    return GapVector(tuple(new))


# ---------------------------------------------------------------------------
# per-round drop decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DropCheck:
    drop: float              # phi(before) - phi(after)
    bound: float             # 1/4 * sum of the decomposition terms
    residual: float          # drop - bound; >= -SLACK always, ~0 if no endpoint moved
    endpoint_active: bool


def phi_drop_bound_check(g_before: GapVector, active: Sequence[bool],
                         g_after: GapVector) -> DropCheck:
    """Verify g_after against the one-round oracle and evaluate the drop
    decomposition

        d_i^- = mu_i^- (w_i - w_{i-1})^2,   mu_i^- = tau_{i-1}(tau_{i-1}-tau_i)
        d_i   = tau_i tau_{i-1} (w_{i-1} - w_{i+1})^2
        d_i^+ = mu_i^+ (w_i - w_{i+1})^2,   mu_i^+ = tau_i(tau_i-tau_{i-1})

    (at most one of the three is nonzero for each i). The claimed bound is
    drop >= 1/4 * sum_i (d_i^- + d_i + d_i^+), with equality when neither
    endpoint robot is active.
    """
    n = g_before.n
    expected = w_update_oracle(g_before, active)
    for got, want in zip(g_after.gaps, expected.gaps):
        if abs(got - want) > ORACLE_TOL:
            raise ValueError(
                f"gap vector does not match the one-round oracle: {g_after.gaps} "
                f"vs {expected.gaps}")
    total = 0.0
    for i in range(2, n + 1):
        t_below = 1 if active[i - 2] else 0
        t_above = 1 if active[i - 1] else 0
        mu_minus = t_below * (t_below - t_above)
        mu_plus = t_above * (t_above - t_below)
        d_minus = mu_minus * (g_before.w(i) - g_before.w(i - 1)) ** 2
        d_mid = t_above * t_below * (g_before.w(i - 1) - g_before.w(i + 1)) ** 2
        d_plus = mu_plus * (g_before.w(i) - g_before.w(i + 1)) ** 2
        if sum(1 for d in (mu_minus, t_above * t_below, mu_plus) if d) > 1:
            raise AssertionError("drop decomposition terms not mutually exclusive")
        total += d_minus + d_mid + d_plus
    drop = phi(g_before) - phi(expected)
    bound = 0.25 * total
    return DropCheck(drop=drop, bound=bound, residual=drop - bound,
                     endpoint_active=bool(active[0] or active[n - 1]))


# ---------------------------------------------------------------------------
# per-epoch bounds
# ---------------------------------------------------------------------------

def sorted_difference_bound(g: GapVector) -> float:
    """Per-epoch drop bound: 1/4 of the sum of squared adjacent differences of
    the values (w_1 = 1, w_2, ..., w_n) sorted in descending order."""
    values = sorted((1.0, *g.gaps), reverse=True)
    return 0.25 * sum((values[i] - values[i + 1]) ** 2 for i in range(len(values) - 1))


def relative_drop_bound(n: int) -> float:
    """Per-epoch relative potential drop guaranteed for n robots."""
    return 1.0 / (8.0 * n * n)


@dataclass(frozen=True)
class EpochDrop:
    epoch: int
    phi_start: float
    phi_next: float
    drop: float
    sorted_bound: float
    sorted_ok: bool
    ratio: float | None       # drop / phi_start, None when phi_start <= guard
    ratio_bound: float
    ratio_ok: bool


@dataclass(frozen=True)
class EpochReport:
    n: int
    entries: tuple[EpochDrop, ...]
    violations: int
    first_approx_epoch: int | None   # first epoch whose start length reaches
                                     # the (1-eps) target, None if never


def epoch_bound_checks(n: int,
                       epoch_gaps: Sequence[tuple[int, GapVector]],
                       epsilon: float = 0.01,
                       c: float = 1.0) -> EpochReport:
    """Certify the per-epoch drop bounds over a run's collinear phase.

    ``epoch_gaps`` holds (epoch index, gap vector at that epoch's start) for
    consecutive observed epochs. Both the sorted-difference bound and the
    relative 1/(8 n^2) bound are checked with SLACK tolerance; ratios are only
    evaluated above the PHI_GUARD floor.
    """
    entries = []
    violations = 0
    first_approx = None
    target = (1.0 - epsilon) * (n - 1) * c
    for idx, (epoch, g) in enumerate(epoch_gaps):
        if first_approx is None and g.length >= target:
            first_approx = epoch
        if idx + 1 >= len(epoch_gaps):
            break
        nxt = epoch_gaps[idx + 1][1]
        p0, p1 = phi(g), phi(nxt)
        drop = p0 - p1
        sbound = sorted_difference_bound(g)
        sorted_ok = drop >= sbound - SLACK
        rbound = relative_drop_bound(n)
        if p0 > PHI_GUARD:
            ratio = drop / p0
            ratio_ok = ratio >= rbound - SLACK
        else:
            ratio, ratio_ok = None, True
        if not (sorted_ok and ratio_ok):
            violations += 1
        entries.append(EpochDrop(epoch=epoch, phi_start=p0, phi_next=p1, drop=drop,
                                 sorted_bound=sbound, sorted_ok=sorted_ok,
                                 ratio=ratio, ratio_bound=rbound, ratio_ok=ratio_ok))
    return EpochReport(n=n, entries=tuple(entries), violations=violations,
                       first_approx_epoch=first_approx)


# ---------------------------------------------------------------------------
# line metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineMetrics:
    is_line: bool
    length: float | None   # y extent; None when the robots are not collinear
    n: int

    def is_approx(self, epsilon: float, c: float = 1.0) -> bool:
        if not self.is_line or self.length is None:
            return False
        return self.length >= (1.0 - epsilon) * (self.n - 1) * c


def line_metrics(config: GlobalConfiguration, tol: float = TAU_GEO) -> LineMetrics:
    positions = config.positions()
    if not all_collinear_vertical(positions, tol):
        return LineMetrics(is_line=False, length=None, n=config.n)
    ys = [p.y for p in positions]
    return LineMetrics(is_line=True, length=max(ys) - min(ys), n=config.n)


def epsilon_approx(config: GlobalConfiguration, epsilon: float,
                   tol: float = TAU_GEO) -> bool:
    """The configuration is a vertical line of length >= (1-eps)(n-1)c, where
    c is the configuration's connectivity radius."""
    return line_metrics(config, tol).is_approx(epsilon, config.range_model.radius)


def exact_line_solved(config: GlobalConfiguration, tol: float = SLACK) -> bool:
    """Collinear with every consecutive gap equal to the connectivity radius
    (within tol) -- the exact target of the luminous variants."""
    if not all_collinear_vertical(config.positions(), TAU_GEO):
        return False
    c = config.range_model.radius
    ys = sorted(p.y for p in config.positions())
    if len(ys) < 2:
        return True
    return all(abs((ys[i + 1] - ys[i]) - c) <= tol for i in range(len(ys) - 1))


def ln_epoch_budget(n: int, epsilon: float) -> int:
    """Default epoch budget for the averaging dynamics: 20 n^2 ln(n/eps)."""
    return math.ceil(20.0 * n * n * math.log(n / epsilon))
