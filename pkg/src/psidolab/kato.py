"""Kato's dominance relation, phase-space averaging and the synthesis identity.

``b{G} = int b(xi) W(xi) G W(-xi) d xi`` is evaluated as a quadrature over every
node of the phase lattice, so each ``W(xi_k)`` is an exact lattice operator.
The sum over momenta is done first by one inverse transform per position
node; the remaining accumulation is a compiled kernel.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import PreconditionError, ResourceError, ShapeError, TagError
from .fourier import centered_dft, convolve, symplectic_fourier
from .grid import GridSpec, SampledFunction
from .quantize import OperatorKernel, kernel_from_symbol
from .weyl import PhasePoint, matrix_coefficient, shift_values, weyl_matrix

__all__ = [
    "check_psd",
    "dominance_defect",
    "abs_parts",
    "translate_symbol",
    "kato_average",
    "synthesis_defect",
    "kato_identity_defect",
    "KATO_BUDGET",
]

# largest admissible node count times kernel entries for kato_average
KATO_BUDGET = 2**31


def _as_matrix(T) -> np.ndarray:
    if isinstance(T, OperatorKernel):
        return T.matrix
    return np.asarray(T, dtype=complex)


def check_psd(A, tol: float = 1e-10) -> None:
    """Raise :class:`PreconditionError` unless ``A`` is Hermitian positive semidefinite."""
    M = _as_matrix(A)
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    if np.abs(M - M.conj().T).max() > tol * scale:
        raise PreconditionError("operator is not Hermitian")
    lo = float(np.linalg.eigvalsh(0.5 * (M + M.conj().T)).min())
    if lo < -tol * scale:
        raise PreconditionError(f"operator is not positive semidefinite (min eigenvalue {lo:.3e})")


def dominance_defect(T, A, B, trials: int = 1000, seed: int = 0) -> float:
    """Largest violation of ``|(u, T v)|^2 <= (u, A u)(v, B v)`` over random pairs.

    Vectors are seeded complex Gaussians normalized to unit length; the defect
    is clamped below at 0.
    """
    Tm, Am, Bm = _as_matrix(T), _as_matrix(A), _as_matrix(B)
    if not (Tm.shape == Am.shape == Bm.shape) or Tm.shape[0] != Tm.shape[1]:
        raise ShapeError("T, A, B must be square matrices of equal size")
    check_psd(Am)
    check_psd(Bm)
    D = Tm.shape[0]
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((D, trials)) + 1j * rng.standard_normal((D, trials))
    V = rng.standard_normal((D, trials)) + 1j * rng.standard_normal((D, trials))
    U /= np.linalg.norm(U, axis=0)
    V /= np.linalg.norm(V, axis=0)
    lhs = np.abs(np.einsum("it,it->t", U.conj(), Tm @ V)) ** 2
    qa = np.einsum("it,it->t", U.conj(), Am @ U).real
    qb = np.einsum("it,it->t", V.conj(), Bm @ V).real
    return float(max(0.0, (lhs - qa * qb).max()))


def abs_parts(T):
    """``(|T*|, |T|)`` from one SVD ``T = U S V*``: ``|T*| = U S U*``, ``|T| = V S V*``."""
    Tm = _as_matrix(T)
    U, s, Vh = np.linalg.svd(Tm)
    left = (U * s) @ U.conj().T
    right = (Vh.conj().T * s) @ Vh
    if isinstance(T, OperatorKernel):
        return OperatorKernel.from_matrix(T.grid, left), OperatorKernel.from_matrix(T.grid, right)
    return left, right


def translate_symbol(a: SampledFunction, xi: PhasePoint) -> SampledFunction:
    """``(T_xi a)(eta) = a(eta - xi)`` with periodic wrap; interpolated off-lattice."""
    if a.tag.kind != "Phase":
        raise TagError("translate_symbol needs a Phase symbol")
    g = a.grid
    n = g.dim
    vals = shift_values(a.values, g, xi.x, axes=range(n))
    vals = shift_values(vals, g.dual(), xi.p, axes=range(n, 2 * n))
    return a.with_values(vals)


def _node_indices(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    N, n = grid.N, grid.dim
    multi = np.indices((N,) * n).reshape(n, -1).T
    dims = (N,) * n
    # shift[m, i]: index of z_i - x_m; diff[i, j]: index of z_i - z_j
    s = (multi[None, :, :] - (multi[:, None, :] - N // 2)) % N
    d = (multi[:, None, :] - multi[None, :, :] + N // 2) % N
    shift = np.ravel_multi_index(tuple(np.moveaxis(s, -1, 0)), dims)
    diff = np.ravel_multi_index(tuple(np.moveaxis(d, -1, 0)), dims)
    return shift, diff


def kato_average(b: SampledFunction, G: OperatorKernel, quad_grid: GridSpec | None = None,
                 backend: str | None = None) -> OperatorKernel:
    """Quadrature of ``b{G} = int b(xi) W(xi) G W(-xi) d xi`` over all lattice nodes.

    Parameters
    ----------
    b : SampledFunction
        Weight on the phase lattice of ``G.grid``.
    G : OperatorKernel
        The seed operator.
    quad_grid : GridSpec, optional
        Quadrature lattice; it must coincide with ``G.grid``.

    Raises
    ------
    ResourceError
        If the node count times the kernel size exceeds :data:`KATO_BUDGET`.
    """
    if b.tag.kind != "Phase":
        raise TagError("the weight b must be a Phase function")
    g = G.grid
    if quad_grid is not None and quad_grid != g:
        raise ShapeError("the quadrature lattice must be the phase lattice of G's grid")
    if b.grid != g:
        raise ShapeError("b is sampled on a different grid than G")
    n, D = g.dim, g.size
    if D * D * D > KATO_BUDGET:
        raise ResourceError(f"kato_average needs {D ** 3} node-entry products > {KATO_BUDGET}")
    ps = tuple(range(n, 2 * n))
    coef = centered_dft(b.values, ps, +1) * b.weight
    shift, diff = _node_indices(g)
    out = _kernels.kato_accumulate(coef.reshape(D, D), G.matrix, shift, diff, backend=backend)
    return OperatorKernel.from_matrix(g, out)


def synthesis_defect(b: SampledFunction, g: SampledFunction, tau: float) -> float:
    """Relative operator-norm gap between ``Op_tau(b * g)`` and ``b{Op_tau(g)}``."""
    lhs = kernel_from_symbol(convolve(b, g), tau).matrix
    rhs = kato_average(b, kernel_from_symbol(g, tau)).matrix
    ref = np.linalg.norm(lhs, 2)
    gap = np.linalg.norm(lhs - rhs, 2)
    return float(gap / ref) if ref > 0 else float(gap)


def _reflect(values: np.ndarray) -> np.ndarray:
    # f(-xi) on the centered periodic lattice
    axes = tuple(range(values.ndim))
    return np.roll(np.flip(values, axes), 1, axes)


def kato_identity_defect(a: SampledFunction, phi: SampledFunction, psi: SampledFunction) -> float:
    """Relative max gap in ``(phi, W(xi) Op(a) W(-xi) psi) = (a * w_hat)(-xi)``.

    ``Op`` is the Weyl quantization and ``w_hat`` the symplectic Fourier
    transform of the matrix coefficient ``(phi, W(.) psi)``.
    """
    g = a.grid
    A = kernel_from_symbol(a, 0.5).matrix
    h = g.spacing**g.dim
    xs, ps = g.axis(), g.dual().axis()
    n = g.dim
    lhs = np.empty(a.values.shape, dtype=complex)
    for idx in np.ndindex(*a.values.shape):
        xi = PhasePoint(xs[list(idx[:n])], ps[list(idx[n:])])
        Wm = weyl_matrix(xi, g)
        lhs[idx] = h * np.vdot(phi.flat, Wm @ (A @ (Wm.conj().T @ psi.flat)))
    w_hat = symplectic_fourier(matrix_coefficient(phi, psi))
    rhs = _reflect(convolve(a, w_hat).values)
    scale = np.abs(rhs).max()
    return float(np.abs(lhs - rhs).max() / scale) if scale > 0 else float(np.abs(lhs).max())
