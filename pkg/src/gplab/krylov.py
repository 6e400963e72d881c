"""Lanczos evaluation of exp(-i t H) v for Hermitian operators.

The Krylov subspace is grown with full reorthogonalization until the
standard residual estimate beta_m |exp(-i t T_m)[m, 0]| drops below the
tolerance; if the subspace cap is hit first, the step is split in half and
the halves are propagated recursively.  Everything is deterministic.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = ["expm_hermitian_apply", "expm_generator_apply"]


def _expm_tridiag_column(alphas, betas, t):
    """First column of exp(-i t T) for the real symmetric tridiagonal T."""
    if len(alphas) == 1:
        return np.array([np.exp(-1j * t * alphas[0])])
    w, q = eigh_tridiagonal(np.asarray(alphas), np.asarray(betas))
    return (q * np.exp(-1j * t * w)) @ q[0].conj()


def expm_hermitian_apply(matvec, v, t, tol=1e-12, m_max=64, _depth=0):
    """exp(-i t H) v with H Hermitian, given only the matvec.

    Parameters
    ----------
    matvec : callable
        H @ x for a complex vector x.
    v : ndarray
        Start vector.
    t : float
        Time (may be 0 or negative).
    tol : float
        Relative accuracy of the Krylov approximation per step.
    m_max : int
        Subspace cap before the step is split.

    Raises
    ------
    RuntimeError
        If the recursion depth indicates t·||H|| far beyond what splitting
        can handle (guards against a non-Hermitian matvec).
    """
    v = np.asarray(v, dtype=complex)
    beta0 = np.linalg.norm(v)
    if beta0 == 0.0 or t == 0.0:
        return v.copy()
    if _depth > 40:
        raise RuntimeError("Krylov step splitting did not converge; is the operator Hermitian?")

    basis = [v / beta0]
    alphas, betas = [], []
    col = None
    for j in range(m_max):
        w = matvec(basis[j])
        alpha = float(np.real(np.vdot(basis[j], w)))
        w = w - alpha * basis[j]
        if j > 0:
            w = w - betas[-1] * basis[j - 1]
        # full reorthogonalization; subspaces are small and robustness wins
        for b in basis:
            w = w - np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))
        alphas.append(alpha)
        col = _expm_tridiag_column(alphas, betas, t)
        if beta <= 1e-14 * max(abs(alpha), 1.0):
            break  # invariant subspace: the expansion is exact
        err = beta * abs(t) * abs(col[-1])
        if err < tol:
            break
        betas.append(beta)
        basis.append(w / beta)
    else:
        half = expm_hermitian_apply(matvec, v, 0.5 * t, tol=tol, m_max=m_max, _depth=_depth + 1)
        return expm_hermitian_apply(matvec, half, 0.5 * t, tol=tol, m_max=m_max, _depth=_depth + 1)

    out = np.zeros_like(v)
    for coeff, b in zip(col, basis):
        out += coeff * b
    return beta0 * out


def expm_generator_apply(generator_matvec, v, tol=1e-12, m_max=64):
    """exp(A) v for an anti-Hermitian generator A, via H = iA in the Lanczos core.

    Weyl and Bogoliubov generators are exactly anti-Hermitian on the
    truncated space, so the result is unitary to roundoff.
    """
    matvec = lambda x: 1j * generator_matvec(x)
    return expm_hermitian_apply(matvec, v, t=1.0, tol=tol, m_max=m_max)
