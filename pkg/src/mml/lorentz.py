"""Lorentzian oracle for the Margulis invariant.

The traceless 2x2 matrices carry the quadratic form <X,Y> = tr(XY)/2 of
signature (+,+,-); conjugation by SL(2,R) acts as SO(2,1).  An affine
isometry of Minkowski space is a linear part in SO(2,1) plus a
translation vector; pairing the translation against the unit spacelike
fixed vector of a hyperbolic linear part yields the Lorentzian
displacement along the invariant axis.  This route never differentiates
anything, so it is independent of the dual-trace computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHyperbolic
from .sl2grp import DualMatrix2

# Orthonormal basis of sl(2,R) for <X,Y> = tr(XY)/2: two spacelike, one timelike.
E1 = np.array([[1.0, 0.0], [0.0, -1.0]])
E2 = np.array([[0.0, 1.0], [1.0, 0.0]])
E3 = np.array([[0.0, 1.0], [-1.0, 0.0]])

J = np.diag([1.0, 1.0, -1.0])

ISOMETRY_TOL = 1e-10


def minkowski(u: np.ndarray, v: np.ndarray) -> float:
    """Signature (+,+,-) inner product."""
    return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2])


def sl2_to_vec(x: np.ndarray) -> np.ndarray:
    """Coordinates of a traceless 2x2 matrix in the basis (E1, E2, E3)."""
    return np.array([x[0, 0],
                     0.5 * (x[0, 1] + x[1, 0]),
                     0.5 * (x[0, 1] - x[1, 0])])


def vec_to_sl2(v: np.ndarray) -> np.ndarray:
    return v[0] * E1 + v[1] * E2 + v[2] * E3


@dataclass(frozen=True)
class LorentzIsometry:
    """Affine isometry x -> linear @ x + translation of R^{2,1}."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float)
        tra = np.asarray(self.translation, dtype=float)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tra)

    def is_isometry(self, tol: float = ISOMETRY_TOL) -> bool:
        gram_ok = np.allclose(self.linear.T @ J @ self.linear, J, atol=tol)
        return gram_ok and abs(np.linalg.det(self.linear) - 1.0) <= tol

    def compose(self, other: "LorentzIsometry") -> "LorentzIsometry":
        return LorentzIsometry(self.linear @ other.linear,
                               self.linear @ other.translation + self.translation)


def adjoint_of(m: DualMatrix2) -> LorentzIsometry:
    """Linearize a dual group element as an affine Lorentz isometry.

    The linear part is conjugation by the value part on sl(2,R); the
    translation is the left-logarithmic derivative eps_part @ val^{-1},
    which is traceless when the group invariant holds.
    """
    m0 = m.val
    m0_inv = np.array([[m0[1, 1], -m0[0, 1]], [-m0[1, 0], m0[0, 0]]])
    cols = [sl2_to_vec(m0 @ e @ m0_inv) for e in (E1, E2, E3)]
    u = m.eps @ m0_inv
    u = u - 0.5 * np.trace(u) * np.eye(2)  # project out rounding in the trace
    return LorentzIsometry(np.column_stack(cols), sl2_to_vec(u))


def neutral_vector(a: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Unit spacelike fixed vector of a hyperbolic element of SO(2,1).

    The direction comes from the cross product of two rows of A - I
    (the most robust pair), the orientation from the future-pointing
    null eigenvectors: x0 is aligned with J (v_plus x v_minus), which
    matches the sign of the length derivative on the calibration case.
    """
    a = np.asarray(a, dtype=float)
    evals, evecs = np.linalg.eig(a)
    if np.max(np.abs(evals.imag)) > 1e-6:
        raise NotHyperbolic("complex eigenvalues: elliptic linear part")
    evals = evals.real
    order = np.argsort(evals)
    lam_min, lam_mid, lam_max = evals[order]
    if lam_max <= 1.0 + tol or lam_min >= 1.0 - tol:
        raise NotHyperbolic(
            f"eigenvalues {sorted(evals)} lack lambda > 1 > 1/lambda")

    # Axis direction: best-conditioned cross product of rows of A - I.
    r = a - np.eye(3)
    pairs = [(0, 1), (0, 2), (1, 2)]
    crosses = [np.cross(r[i], r[j]) for i, j in pairs]
    d = max(crosses, key=np.linalg.norm)
    if np.linalg.norm(d) < 1e-12 * max(1.0, np.linalg.norm(r)):
        d = evecs[:, order[1]].real  # near-parallel rows: fall back to eig
    norm2 = minkowski(d, d)
    if norm2 <= tol * float(d @ d):
        raise NotHyperbolic("fixed vector is not spacelike")

    v_plus = evecs[:, order[2]].real
    v_minus = evecs[:, order[0]].real
    if v_plus[2] < 0:
        v_plus = -v_plus
    if v_minus[2] < 0:
        v_minus = -v_minus
    oriented = J @ np.cross(v_plus, v_minus)
    if float(oriented @ d) < 0:
        d = -d
    return d / np.sqrt(norm2)


def margulis_invariant_lorentz(g: LorentzIsometry) -> float:
    """Displacement of g along its invariant spacelike axis.

    The factor 2 folds the scale of the identification of sl(2,R) with
    R^{2,1} into the pairing, so the result equals the length derivative
    computed from dual traces.
    """
    x0 = neutral_vector(g.linear)
    return 2.0 * minkowski(g.translation, x0)
