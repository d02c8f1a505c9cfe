"""2x2 matrices over the dual numbers with unit determinant.

A matrix M = M0 + eps*M1 packages an SL(2,R) element M0 together with a
tangent vector M1 to SL(2,R) at M0; products of such matrices propagate
the deformation by the Leibniz rule.  Hyperbolic elements carry a
translation length, and the eps part of the trace gives the derivative
of that length along the deformation (the Margulis invariant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dualnum import DualScalar
from .errors import NotHyperbolic

#: Tolerance for det = 1 + 0*eps on construction.
GROUP_TOL = 1e-10

#: |trace| <= 2 + this is treated as non-hyperbolic.
HYPERBOLIC_TOL = 1e-9


@dataclass(frozen=True)
class DualMatrix2:
    """Element of SL(2, R[eps]) stored as value and eps matrix parts."""

    val: np.ndarray
    eps: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        val = np.asarray(self.val, dtype=float)
        eps = np.zeros((2, 2)) if self.eps is None else np.asarray(self.eps, dtype=float)
        if val.shape != (2, 2) or eps.shape != (2, 2):
            raise ValueError("DualMatrix2 parts must be 2x2")
        val.setflags(write=False)
        eps.setflags(write=False)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "eps", eps)

    @property
    def entries(self) -> list[list[DualScalar]]:
        """The matrix as a 2x2 nested list of dual scalars."""
        return [[DualScalar(self.val[i, j], self.eps[i, j]) for j in range(2)]
                for i in range(2)]

    def det(self) -> DualScalar:
        v = self.val
        e = self.eps
        d0 = v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0]
        d1 = (v[0, 0] * e[1, 1] + e[0, 0] * v[1, 1]
              - v[0, 1] * e[1, 0] - e[0, 1] * v[1, 0])
        return DualScalar(d0, d1)

    def in_group(self, tol: float = GROUP_TOL) -> bool:
        d = self.det()
        return abs(d.re - 1.0) <= tol and abs(d.inf) <= tol

    def renormalized(self) -> "DualMatrix2":
        """Project back onto det = 1 + 0*eps (divide by sqrt(det), then
        remove the trace component of the eps part violating tangency)."""
        d = self.det()
        val = self.val / math.sqrt(d.re)
        # d(det)/deps = tr(adj(val) @ eps) = tr(val^-1 eps) at det 1
        c = float(np.trace(_adjugate(val) @ self.eps))
        eps = (self.eps - 0.5 * c * val) / math.sqrt(d.re)
        return DualMatrix2(val, eps)


def _adjugate(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def identity() -> DualMatrix2:
    return DualMatrix2(np.eye(2))


def compose(*ms: DualMatrix2) -> DualMatrix2:
    """Product of group elements; value M0*N0, eps M0*N1 + M1*N0."""
    out = identity()
    for n in ms:
        out = DualMatrix2(out.val @ n.val, out.val @ n.eps + out.eps @ n.val)
    return out


def inverse(m: DualMatrix2) -> DualMatrix2:
    """Inverse via the adjugate; exact at unit determinant, and the
    adjugate is entrywise linear for 2x2 so it passes to the eps part."""
    return DualMatrix2(_adjugate(m.val), _adjugate(m.eps))


def dual_trace(m: DualMatrix2) -> DualScalar:
    return DualScalar(float(np.trace(m.val)), float(np.trace(m.eps)))


def commutator(a: DualMatrix2, b: DualMatrix2) -> DualMatrix2:
    """a b a^-1 b^-1."""
    return compose(a, b, inverse(a), inverse(b))


def translation_length(t: float, tol: float = HYPERBOLIC_TOL) -> float:
    """Geodesic length 2*arccosh(|t|/2) of a hyperbolic element of trace t."""
    if abs(t) <= 2.0 + tol:
        raise NotHyperbolic(f"trace {t} is not hyperbolic (|t| <= 2)")
    return 2.0 * math.acosh(abs(t) / 2.0)


def margulis_from_trace(t: DualScalar, tol: float = HYPERBOLIC_TOL) -> float:
    """d/deps of the translation length of an element with dual trace t.

    Differentiating 2*arccosh(|t|/2) gives 2*t_eps*sign(t)/sqrt(t^2-4).
    """
    if abs(t.re) <= 2.0 + tol:
        raise NotHyperbolic(f"trace {t.re} is not hyperbolic (|t| <= 2)")
    return 2.0 * t.inf * math.copysign(1.0, t.re) / math.sqrt(t.re * t.re - 4.0)


def margulis_invariant_dual(m: DualMatrix2, tol: float = HYPERBOLIC_TOL) -> float:
    """Margulis invariant of a dual group element, via its dual trace."""
    return margulis_from_trace(dual_trace(m), tol)
