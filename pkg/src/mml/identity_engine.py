"""Gap functions, the boundary-length series, and its differentiated form.

The boundary length of a one-holed hyperbolic torus equals the sum over
simple closed curves gamma of D(l_bdry, l_gamma, l_gamma); differentiating
term by term turns the identity into a linear relation between the length
derivatives (Margulis invariants) with coefficients H and K.  Truncation
tails are certified from the exponential summand bounds together with an
empirically fitted bin-count constant, inflated by a safety factor and
labeled as such in reports.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import NonConvergence, NotHyperbolic
from .sl2grp import dual_trace, margulis_from_trace, translation_length
from .torus_curves import (CurveBin, ImportedTerm, bin_curves, enumerate_up_to,
                           fit_bin_constant, make_tables)

#: Safety inflation applied to the fitted bin constant and kappa estimate.
SAFETY_FACTOR = 2.0

#: Boundary traces within this of +-2 run the cusp-limit form of the sum.
PARABOLIC_TOL = 1e-9

_GROW_START = 16
_GROW_STEP = 8


class KahanSum:
    """Compensated accumulator; add order is the determinism contract."""

    __slots__ = ("total", "_c")

    def __init__(self):
        self.total = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


def gap_D(x: float, y: float, z: float) -> float:
    """2 log((e^{x/2} + e^{(y+z)/2}) / (e^{-x/2} + e^{(y+z)/2})).

    Evaluated as 2 log1p(2 sinh(x/2) / (e^{-x/2} + e^{(y+z)/2})) so that
    large y + z does not cancel.
    """
    u = 2.0 * math.sinh(x / 2.0) / (math.exp(-x / 2.0) + math.exp((y + z) / 2.0))
    return 2.0 * math.log1p(u)


def cusp_gap(ell: float) -> float:
    """Limit of gap_D(x, ell, ell)/x as x -> 0: the cusped summand 2/(1+e^ell)."""
    return 2.0 / (1.0 + math.exp(ell))


def coeff_H(u: float, v: float) -> float:
    return 1.0 / (1.0 + math.exp((u + v) / 2.0)) + 1.0 / (1.0 + math.exp((u - v) / 2.0))


def coeff_K(u: float, v: float) -> float:
    """-sinh(v/2) / (cosh(u/2) + cosh(v/2)); equals the difference form of H."""
    return -math.sinh(v / 2.0) / (math.cosh(u / 2.0) + math.cosh(v / 2.0))


def term_derivative(ell1: float, ell2: float, ell_bdry: float,
                    alpha1: float, alpha2: float, alpha_bdry: float) -> float:
    """d/dt of one gap term, by the chain rule on (H, K)."""
    u = ell1 + ell2
    return coeff_H(u, ell_bdry) * alpha_bdry + coeff_K(u, ell_bdry) * (alpha1 + alpha2)


def bound_D(x: float, y: float, z: float) -> float:
    """Exponential summand bound 4 sinh(x/2) e^{-(y+z)/2}."""
    return 4.0 * math.sinh(x / 2.0) * math.exp(-(y + z) / 2.0)


def bound_HK(u: float, v: float) -> float:
    """Shared exponential bound 2 cosh(|v|/2) e^{-u/2} for |H| and |K| at (u, v)."""
    return 2.0 * math.cosh(abs(v) / 2.0) * math.exp(-u / 2.0)


@dataclass(frozen=True)
class BinStat:
    n: int
    count: int
    sum_d: float
    sum_deriv: float


@dataclass(frozen=True)
class SeriesReport:
    """Verification verdict for one truncated series."""

    target: float
    partial_sum: float
    residual: float
    n_max: int
    tail_bound: float
    m_hat: float
    kappa_hat: float
    h_partial_sum: float
    h_threshold_n: int | None
    bins: tuple[BinStat, ...]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "partial_sum": self.partial_sum,
            "residual": self.residual,
            "n_max": self.n_max,
            "tail_bound": self.tail_bound,
            "m_hat": self.m_hat,
            "kappa_hat": self.kappa_hat,
            "h_partial_sum": self.h_partial_sum,
            "h_threshold_n": self.h_threshold_n,
            "bins": [{"n": b.n, "count": b.count,
                      "sum_d": b.sum_d, "sum_deriv": b.sum_deriv}
                     for b in self.bins],
            "passed": self.passed,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _tail_sum(n_max: int, term) -> float:
    """Sum term(N) for N > n_max until increments vanish."""
    acc = 0.0
    n = n_max + 1
    while True:
        t = term(n)
        acc += t
        n += 1
        if t <= 1e-22 * max(acc, 1e-300) or n > n_max + 4000:
            return acc


def tail_bound_identity(n_max: int, m_hat: float, ell_bdry: float) -> float:
    """Certified remainder of the length sum beyond bin n_max.

    Uses the fitted (and inflated) bin constant; 2/(1+e^l) <= 2 e^{-N/2}
    replaces the sinh factor in the cusp limit.
    """
    m = SAFETY_FACTOR * m_hat
    coef = 4.0 * math.sinh(ell_bdry / 2.0) if ell_bdry > 0 else 2.0
    return _tail_sum(n_max, lambda n: m * coef * (n + 1) ** 2 * math.exp(-n / 2.0))


def tail_bound_derivative(n_max: int, m_hat: float, ell_bdry: float,
                          kappa_hat: float, alpha_bdry: float) -> float:
    """Certified remainder of the differentiated sum beyond bin n_max."""
    m = SAFETY_FACTOR * m_hat
    k = SAFETY_FACTOR * kappa_hat
    c = 4.0 * math.cosh(ell_bdry / 2.0)
    return _tail_sum(
        n_max,
        lambda n: m * c * (2.0 * k * n + abs(alpha_bdry)) * (n + 1) ** 2 * math.exp(-n / 2.0))


def _boundary_values(rep) -> tuple[float, float, bool]:
    """(length, margulis invariant, is_cusp) of the boundary element."""
    t = dual_trace(rep.boundary)
    if abs(abs(t.re) - 2.0) <= PARABOLIC_TOL:
        return 0.0, 0.0, True
    if abs(t.re) < 2.0:
        raise NotHyperbolic(f"boundary trace {t.re} is elliptic")
    return translation_length(t.re), margulis_from_trace(t), False


def _grown_bins(rep, tables, n_max: int) -> tuple[list[CurveBin], float]:
    curves = enumerate_up_to(rep, n_max + 1, tables)
    bins = bin_curves(curves, n_max)
    return bins, fit_bin_constant(bins)


def choose_truncation(rep, tail_tolerance: float, n_ceiling: int = 200,
                      tail=None) -> tuple[int, list[CurveBin], float]:
    """Smallest enumerated depth whose certified tail is below tolerance.

    tail(n_max, bins, m_hat) defaults to the identity tail; raises
    NonConvergence at the bin ceiling.
    """
    if tail_tolerance <= 0:
        raise ValueError("tail_tolerance must be positive")
    if tail is None:
        ell_bdry, _, _ = _boundary_values(rep)
        tail = lambda n_max, bins, m_hat: tail_bound_identity(n_max, m_hat, ell_bdry)
    tables = make_tables(rep)
    n_max = min(_GROW_START, n_ceiling)
    while True:
        bins, m_hat = _grown_bins(rep, tables, n_max)
        if tail(n_max, bins, m_hat) <= tail_tolerance:
            return n_max, bins, m_hat
        if n_max >= n_ceiling:
            raise NonConvergence(
                f"tail {tail(n_max, bins, m_hat)} > {tail_tolerance} at bin ceiling {n_ceiling}")
        n_max = min(n_max + _GROW_STEP, n_ceiling)


def _h_running(bins: list[CurveBin], ell_bdry: float) -> tuple[float, int | None]:
    """Running sum of the H coefficients and the first bin where it tops 1."""
    acc = KahanSum()
    threshold = None
    for b in bins:
        for c in b.members:
            acc.add(coeff_H(2.0 * c.length, ell_bdry))
        if threshold is None and acc.total > 1.0:
            threshold = b.index
    return acc.total, threshold


def _bin_stats(bins: list[CurveBin], ell_bdry: float, alpha_bdry: float,
               cusp: bool) -> list[BinStat]:
    stats = []
    for b in bins:
        sd = KahanSum()
        sv = KahanSum()
        for c in b.members:
            if cusp:
                sd.add(cusp_gap(c.length))
            else:
                sd.add(gap_D(ell_bdry, c.length, c.length))
                sv.add(term_derivative(c.length, c.length, ell_bdry,
                                       c.alpha, c.alpha, alpha_bdry))
        stats.append(BinStat(b.index, len(b.members), sd.total, sv.total))
    return stats


def _combine(stats: list[BinStat], attr: str) -> float:
    acc = KahanSum()
    for s in stats:  # fixed index order: the deterministic combine contract
        acc.add(getattr(s, attr))
    return acc.total


def kappa_from_bins(bins: list[CurveBin], ell_bdry: float, alpha_bdry: float) -> float:
    """max |alpha| / length over enumerated curves and the boundary."""
    k = abs(alpha_bdry) / ell_bdry if ell_bdry > 0 else 0.0
    for b in bins:
        for c in b.members:
            k = max(k, abs(c.alpha) / c.length)
    return k


def mcshane_sum(rep, tail_tolerance: float = 1e-6, n_ceiling: int = 200) -> SeriesReport:
    """Verify that the gap terms sum to the boundary length.

    A parabolic boundary (trace +-2) switches to the cusp-limit summand
    2/(1+e^l) with target 1.
    """
    ell_bdry, alpha_bdry, cusp = _boundary_values(rep)
    tail = lambda n_max, bins, m_hat: tail_bound_identity(n_max, m_hat, ell_bdry)
    n_max, bins, m_hat = choose_truncation(rep, tail_tolerance, n_ceiling, tail)
    stats = _bin_stats(bins, ell_bdry, alpha_bdry, cusp)
    partial = _combine(stats, "sum_d")
    target = 1.0 if cusp else ell_bdry
    residual = target - partial
    bound = tail_bound_identity(n_max, m_hat, ell_bdry)
    h_sum, h_thresh = _h_running(bins, ell_bdry)
    return SeriesReport(
        target=target, partial_sum=partial, residual=residual, n_max=n_max,
        tail_bound=bound, m_hat=m_hat,
        kappa_hat=kappa_from_bins(bins, ell_bdry, alpha_bdry),
        h_partial_sum=h_sum, h_threshold_n=h_thresh, bins=tuple(stats),
        passed=abs(residual) <= max(bound, tail_tolerance))


def margulis_residual(rep, tail_tolerance: float = 1e-6, n_ceiling: int = 200) -> SeriesReport:
    """Verify the differentiated identity for a deformed representation.

    The summed series of per-term derivatives converges to alpha(bdry);
    the residual target - partial_sum equals the difference between
    (1 - sum H) alpha(bdry) and sum K (alpha1 + alpha2).
    """
    ell_bdry, alpha_bdry, cusp = _boundary_values(rep)
    if cusp:
        raise NotHyperbolic("differentiated identity needs a hyperbolic boundary")

    def tail(n_max, bins, m_hat):
        kappa = kappa_from_bins(bins, ell_bdry, alpha_bdry)
        return tail_bound_derivative(n_max, m_hat, ell_bdry, kappa, alpha_bdry)

    n_max, bins, m_hat = choose_truncation(rep, tail_tolerance, n_ceiling, tail)
    stats = _bin_stats(bins, ell_bdry, alpha_bdry, cusp=False)
    partial = _combine(stats, "sum_deriv")
    residual = alpha_bdry - partial
    kappa = kappa_from_bins(bins, ell_bdry, alpha_bdry)
    bound = tail_bound_derivative(n_max, m_hat, ell_bdry, kappa, alpha_bdry)
    h_sum, h_thresh = _h_running(bins, ell_bdry)
    return SeriesReport(
        target=alpha_bdry, partial_sum=partial, residual=residual, n_max=n_max,
        tail_bound=bound, m_hat=m_hat, kappa_hat=kappa,
        h_partial_sum=h_sum, h_threshold_n=h_thresh, bins=tuple(stats),
        passed=abs(residual) <= max(bound, tail_tolerance))


def mirzakhani_threshold(rep, n_ceiling: int = 200) -> tuple[list[float], int | None]:
    """Running bin sums of the H coefficients and the first bin where they exceed 1."""
    ell_bdry, _, cusp = _boundary_values(rep)
    if cusp:
        raise NotHyperbolic("threshold needs a hyperbolic boundary")
    tables = make_tables(rep)
    n_max = _GROW_START
    while True:
        bins, _ = _grown_bins(rep, tables, n_max)
        running = []
        acc = KahanSum()
        threshold = None
        for b in bins:
            for c in b.members:
                acc.add(coeff_H(2.0 * c.length, ell_bdry))
            running.append(acc.total)
            if threshold is None and acc.total > 1.0:
                threshold = b.index
        if threshold is not None or n_max >= n_ceiling:
            return running, threshold
        n_max = min(n_max + _GROW_STEP, n_ceiling)


def kappa_estimate(rep, max_total_length: float = 40.0) -> float:
    """Empirical bound max |alpha(gamma)| / l(gamma) over enumerated curves."""
    ell_bdry, alpha_bdry, cusp = _boundary_values(rep)
    curves = enumerate_up_to(rep, max_total_length)
    bins = bin_curves(curves, int(max_total_length))
    return kappa_from_bins(bins, 0.0 if cusp else ell_bdry, alpha_bdry)


def _imported_stats(terms: list[ImportedTerm], ell_bdry: float,
                    alpha_bdry: float) -> list[BinStat]:
    n_top = max((int(t.ell_gamma1 + t.ell_gamma2) for t in terms), default=0)
    by_bin: dict[int, list[ImportedTerm]] = {}
    for t in terms:
        by_bin.setdefault(int(t.ell_gamma1 + t.ell_gamma2), []).append(t)
    stats = []
    for n in range(n_top + 1):
        sd = KahanSum()
        sv = KahanSum()
        for t in by_bin.get(n, []):
            sd.add(gap_D(ell_bdry, t.ell_gamma1, t.ell_gamma2))
            sv.add(term_derivative(t.ell_gamma1, t.ell_gamma2, ell_bdry,
                                   t.alpha_gamma1, t.alpha_gamma2, alpha_bdry))
        stats.append(BinStat(n, len(by_bin.get(n, [])), sd.total, sv.total))
    return stats


def mcshane_sum_imported(ell_bdry: float, terms: list[ImportedTerm],
                         tolerance: float = 1e-6) -> SeriesReport:
    """Length identity over an externally supplied pair list (genus >= 2).

    No tail certification: coverage is the caller's contract, so the
    report passes purely on the tolerance.
    """
    stats = _imported_stats(terms, ell_bdry, 0.0)
    partial = _combine(stats, "sum_d")
    residual = ell_bdry - partial
    h = KahanSum()
    for t in terms:
        h.add(coeff_H(t.ell_gamma1 + t.ell_gamma2, ell_bdry))
    return SeriesReport(
        target=ell_bdry, partial_sum=partial, residual=residual,
        n_max=stats[-1].n if stats else 0, tail_bound=0.0, m_hat=0.0,
        kappa_hat=0.0, h_partial_sum=h.total, h_threshold_n=None,
        bins=tuple(stats), passed=abs(residual) <= tolerance)


def margulis_residual_imported(ell_bdry: float, alpha_bdry: float,
                               terms: list[ImportedTerm],
                               tolerance: float = 1e-6) -> SeriesReport:
    """Differentiated identity over an externally supplied pair list."""
    stats = _imported_stats(terms, ell_bdry, alpha_bdry)
    partial = _combine(stats, "sum_deriv")
    residual = alpha_bdry - partial
    h = KahanSum()
    for t in terms:
        h.add(coeff_H(t.ell_gamma1 + t.ell_gamma2, ell_bdry))
    return SeriesReport(
        target=alpha_bdry, partial_sum=partial, residual=residual,
        n_max=stats[-1].n if stats else 0, tail_bound=0.0, m_hat=0.0,
        kappa_hat=0.0, h_partial_sum=h.total, h_threshold_n=None,
        bins=tuple(stats), passed=abs(residual) <= tolerance)
