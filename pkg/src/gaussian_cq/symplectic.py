"""Linear algebra over skew-symmetric forms.

Conventions: a phase space of ``s`` modes has coordinates ordered
``(q_1, p_1, ..., q_s, p_s)`` and the canonical form is the block-diagonal
matrix of ``s`` blocks ``[[0, 1], [-1, 0]]``. Linear canonical maps act on
row vectors of canonical variables, ``R' = R T``, so ``T`` is symplectic
from ``form_in`` to ``form_out`` when ``T^t form_in T = form_out``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .errors import (
    DegenerateForm,
    DimensionMismatch,
    NotIsotropic,
    PairingError,
    RankDeficient,
)

DEFAULT_TOL = 1e-9
PAIRING_RTOL = 1e-8


def canonical_form(modes: int) -> np.ndarray:
    """Block-diagonal canonical skew form on ``modes`` modes."""
    if int(modes) != modes or modes < 1:
        raise ValueError(f"modes must be a positive integer, got {modes!r}")
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return block_diag(*([block] * int(modes)))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    """A ``2s``-dimensional real space carrying a nondegenerate skew form."""

    modes: int
    form: np.ndarray = field(default=None)

    def __post_init__(self):
        if int(self.modes) != self.modes or self.modes < 1:
            raise ValueError(f"modes must be a positive integer, got {self.modes!r}")
        form = canonical_form(self.modes) if self.form is None else self.form
        form = np.asarray(form, dtype=float)
        n = 2 * int(self.modes)
        if form.shape != (n, n):
            raise DimensionMismatch(f"form must be {n}x{n}, got {form.shape}")
        scale = max(1.0, np.abs(form).max())
        if np.abs(form + form.T).max() > DEFAULT_TOL * scale:
            raise ValueError("form is not skew-symmetric")
        if np.linalg.cond(form) > 1e12:
            raise DegenerateForm("form is degenerate")
        object.__setattr__(self, "modes", int(self.modes))
        object.__setattr__(self, "form", _frozen(form))

    @classmethod
    def canonical(cls, modes: int) -> "SymplecticSpace":
        return cls(modes)

    @property
    def dim(self) -> int:
        return 2 * self.modes

    def direct_sum(self, *others: "SymplecticSpace") -> "SymplecticSpace":
        spaces = (self,) + others
        return SymplecticSpace(
            sum(sp.modes for sp in spaces), block_diag(*[sp.form for sp in spaces])
        )

    def __eq__(self, other):
        if not isinstance(other, SymplecticSpace):
            return NotImplemented
        return self.modes == other.modes and np.array_equal(self.form, other.form)

    def __hash__(self):
        return hash((self.modes, self.form.tobytes()))

    def __repr__(self):
        return f"SymplecticSpace(modes={self.modes})"


@dataclass(frozen=True)
class SymplecticBasisSplit:
    """Adapted basis ``{e, h, g}`` for an isotropic subspace spanned by ``e``.

    Columns satisfy ``e^t D e = h^t D h = 0``, ``e^t D h = I`` and ``g`` is
    D-orthogonal to both ``e`` and ``h``; ``g^t D g`` is canonical.
    """

    e_block: np.ndarray
    h_block: np.ndarray
    g_block: np.ndarray

    @property
    def basis(self) -> np.ndarray:
        """Columns ``[e, h, g]`` as one square matrix."""
        return np.hstack([self.e_block, self.h_block, self.g_block])


def _as_form(space) -> np.ndarray:
    if isinstance(space, SymplecticSpace):
        return space.form
    return np.asarray(space, dtype=float)


def is_symplectic(T, form_in, form_out, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max|T^t form_in T - form_out| <= tol``."""
    T = np.asarray(T, dtype=float)
    d_in, d_out = _as_form(form_in), _as_form(form_out)
    if T.ndim != 2 or T.shape != (d_in.shape[0], d_out.shape[0]):
        raise DimensionMismatch(
            f"T has shape {T.shape}, forms require {(d_in.shape[0], d_out.shape[0])}"
        )
    return bool(np.abs(T.T @ d_in @ T - d_out).max() <= tol)


def symplectic_eigenvalues(alpha, space, rtol: float = PAIRING_RTOL) -> np.ndarray:
    """Symplectic eigenvalues of a symmetric matrix, sorted descending.

    The eigenvalues of ``form^{-1} alpha`` come in pairs ``+-i nu``; one
    ``nu`` per pair is returned. Raises :class:`PairingError` when the
    spectrum does not have that structure (``alpha`` far from positive).
    """
    alpha = np.asarray(alpha, dtype=float)
    form = _as_form(space)
    n = form.shape[0]
    if alpha.shape != (n, n):
        raise DimensionMismatch(f"alpha must be {n}x{n}, got {alpha.shape}")
    scale = max(1.0, np.abs(alpha).max())
    if np.abs(alpha - alpha.T).max() > DEFAULT_TOL * scale:
        raise ValueError("alpha is not symmetric")

    lam = np.linalg.eigvals(np.linalg.solve(form, alpha))
    spread = max(np.abs(lam).max(initial=0.0), np.finfo(float).tiny)
    if np.abs(lam.real).max() > rtol * max(spread, 1.0):
        raise PairingError(
            f"eigenvalues have real parts up to {np.abs(lam.real).max():.3e}"
        )
    im = np.sort(lam.imag)
    s = n // 2
    upper = im[s:][::-1]
    lower = -im[:s]
    if np.abs(upper - lower).max() > rtol * max(spread, 1.0):
        raise PairingError("eigenvalues do not pair as +-i*nu")
    return np.clip(0.5 * (upper + lower), 0.0, None)


def canonicalize_skew(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``S`` with ``S^t M S`` equal to the canonical form.

    Symplectic Gram-Schmidt; each step pairs the two remaining vectors with
    the largest ``|u^t M v|``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"M must be square, got {M.shape}")
    n = M.shape[0]
    scale = max(1.0, np.abs(M).max())
    if np.abs(M + M.T).max() > tol * scale:
        raise ValueError("M is not skew-symmetric")
    if n % 2:
        raise DegenerateForm("odd-dimensional skew forms are degenerate")

    rest = np.eye(n)
    cols = []
    while rest.shape[1]:
        G = rest.T @ M @ rest
        i, j = np.unravel_index(np.argmax(np.abs(G)), G.shape)
        pivot = G[i, j]
        if abs(pivot) <= tol * scale:
            raise DegenerateForm(f"form is degenerate (pivot {pivot:.3e})")
        e = rest[:, i]
        f = rest[:, j] / pivot
        rest = np.delete(rest, [i, j], axis=1)
        # two passes keep the complement D-orthogonal to roundoff level
        for _ in range(2):
            fm = f @ M @ rest
            em = e @ M @ rest
            rest = rest + np.outer(e, fm) - np.outer(f, em)
        cols.extend([e, f])
    return np.column_stack(cols)


def complete_isotropic_basis(N_basis, space, tol: float = DEFAULT_TOL) -> SymplecticBasisSplit:
    """Extend a basis of an isotropic subspace to a full adapted basis.

    ``e`` is an orthonormal basis of ``span(N_basis)``; the dual partners
    ``h`` are the minimum-norm solution of ``e^t D h = I`` corrected so that
    ``h^t D h = 0``; ``g`` spans the D-orthogonal complement of
    ``span(e, h)`` in canonical coordinates.
    """
    form = _as_form(space)
    N = np.asarray(N_basis, dtype=float)
    if N.ndim == 1:
        N = N[:, None]
    n = form.shape[0]
    if N.shape[0] != n:
        raise DimensionMismatch(f"N_basis must have {n} rows, got {N.shape[0]}")
    k = N.shape[1]
    if k == 0:
        raise RankDeficient("empty basis")

    u, sv, _ = np.linalg.svd(N, full_matrices=False)
    if sv[-1] <= tol * max(1.0, sv[0]):
        raise RankDeficient(f"N_basis has rank < {k}")
    if np.abs(N.T @ form @ N).max() > tol * max(1.0, sv[0] ** 2):
        raise NotIsotropic("N_basis does not span an isotropic subspace")
    e = u[:, :k]

    h0 = np.linalg.lstsq(e.T @ form, np.eye(k), rcond=None)[0]
    h = h0 + e @ (0.5 * (h0.T @ form @ h0))

    proj = np.eye(n) + e @ (h.T @ form) - h @ (e.T @ form)
    m = n - 2 * k
    if m:
        uu, _, _ = np.linalg.svd(proj)
        v = uu[:, :m]
        g = v @ canonicalize_skew(v.T @ form @ v, tol)
    else:
        g = np.zeros((n, 0))
    return SymplecticBasisSplit(e, h, g)
