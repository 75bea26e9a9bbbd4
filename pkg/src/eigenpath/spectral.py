"""Principal spectrum of the linearization: left eigenpairs and classification."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectiveMatrix, NotHurwitz

HYPERBOLICITY_TOL = 1e-8
_COND_LIMIT = 1e12

STABLE = "stable"
ANTI_STABLE = "anti_stable"
SADDLE = "saddle"
NON_HYPERBOLIC = "non_hyperbolic"


@dataclass(frozen=True)
class PrincipalEigenpair:
    """Eigenvalue of A together with its left eigenvector (w^T A = lam w^T)."""

    lam: complex
    w: np.ndarray


@dataclass(frozen=True)
class EquilibriumClass:
    kind: str      # stable | anti_stable | saddle | non_hyperbolic
    margin: float  # min_i |Re(lam_i)|


def _canonicalize(w: np.ndarray) -> np.ndarray:
    """Unit norm with the first nonzero component rotated to the positive real axis."""
    w = w / np.linalg.norm(w)
    mags = np.abs(w)
    k = int(np.argmax(mags > 1e-12 * mags.max()))
    w = w * (np.conj(w[k]) / abs(w[k]))
    if abs(w.imag).max() < 1e-14:
        w = w.real.astype(complex)
    return w


def left_eigenpairs(A: np.ndarray) -> list[PrincipalEigenpair]:
    """All left eigenpairs of A, canonically scaled, conjugates adjacent.

    Left eigenvectors are obtained as right eigenvectors of A^T. Raises
    DefectiveMatrix when the eigenvector basis is numerically rank-deficient.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if not np.all(np.isfinite(A)):
        raise ValueError("A must have finite entries")
    vals, vecs = np.linalg.eig(A.T)
    if np.linalg.cond(vecs) > _COND_LIMIT:
        raise DefectiveMatrix(
            f"left eigenvector basis condition {np.linalg.cond(vecs):.3e} exceeds {_COND_LIMIT:.0e}")
    # Sort so complex-conjugate pairs sit next to each other (+Im first).
    order = sorted(range(len(vals)),
                   key=lambda i: (vals[i].real, abs(vals[i].imag), -vals[i].imag))
    pairs = []
    for i in order:
        lam = complex(vals[i])
        if abs(lam.imag) < 1e-14 * max(1.0, abs(lam.real)):
            lam = complex(lam.real, 0.0)
        pairs.append(PrincipalEigenpair(lam=lam, w=_canonicalize(vecs[:, i].astype(complex))))
    return pairs


def spectral_condition(lam: complex, spectrum) -> bool:
    """True iff -Re(lam) + 2 Re(lam_max) < 0, lam_max the slowest eigenvalue.

    Defined for Hurwitz spectra only; raises NotHurwitz otherwise. This is
    the sufficient condition for the boundary term of the infinite-horizon
    path integral to vanish.
    """
    spectrum = [complex(s) for s in spectrum]
    if any(s.real >= 0 for s in spectrum):
        raise NotHurwitz("spectral condition requires all Re(lambda) < 0")
    lam_max = max(s.real for s in spectrum)
    return -complex(lam).real + 2.0 * lam_max < 0.0


def classify_equilibrium(A: np.ndarray) -> EquilibriumClass:
    """Stability class of the equilibrium from the eigenvalues of A."""
    vals = np.linalg.eigvals(np.asarray(A, dtype=float))
    re = vals.real
    margin = float(np.min(np.abs(re)))
    if margin < HYPERBOLICITY_TOL:
        kind = NON_HYPERBOLIC
    elif np.all(re < 0):
        kind = STABLE
    elif np.all(re > 0):
        kind = ANTI_STABLE
    else:
        kind = SADDLE
    return EquilibriumClass(kind=kind, margin=margin)
