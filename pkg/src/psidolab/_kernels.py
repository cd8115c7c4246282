"""Hot loops with a numba implementation and a pure-numpy fallback.

Each public function takes ``backend=None`` (use the active backend), or
``"numba"`` / ``"numpy"`` to force one; the benchmark compares both.
"""

from __future__ import annotations

import numpy as np

from ._accel import HAVE_NUMBA, njit

__all__ = ["lattice_convolution", "kato_accumulate", "phase_table"]


def phase_table(N: int) -> np.ndarray:
    """``exp(i pi r / N)`` for ``r = 0..2N-1``; exact lattice half-phases."""
    r = np.arange(2 * N)
    return np.exp(1j * np.pi * r / N)


def _resolve(backend: str | None) -> str:
    if backend is None:
        return "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# Direct (twisted) convolution on a phase lattice.
#
# idx[a, k] is the array index along axis k of flat point a; the first n axes
# are positions, the last n momenta. The half-phase of the twisted product is
# exp(i pi m / N) with m = <c_y, c_p> - <c_x, c_k> on centered integer labels,
# reduced mod 2N, so it is evaluated exactly from the lookup table.


@njit(cache=True)
def _lattice_convolution_numba(f, g, idx, strides, N, n, twisted, table, weight):
    M = f.shape[0]
    D = idx.shape[1]
    half = N // 2
    out = np.zeros(M, dtype=np.complex128)
    for a in range(M):
        acc = 0.0 + 0.0j
        for b in range(M):
            flat = 0
            for k in range(D):
                flat += ((idx[a, k] - idx[b, k] + half) % N) * strides[k]
            term = f[flat] * g[b]
            if twisted:
                m = 0
                for d in range(n):
                    m += (idx[b, d] - half) * (idx[a, n + d] - half) - (idx[a, d] - half) * (idx[b, n + d] - half)
                term *= table[m % (2 * N)]
            acc += term
        out[a] = acc * weight
    return out


def _lattice_convolution_numpy(f, g, idx, strides, N, n, twisted, table, weight):
    M = f.shape[0]
    half = N // 2
    c = idx - half
    out = np.empty(M, dtype=np.complex128)
    for a in range(M):
        flat = (((idx[a] - idx + half) % N) * strides).sum(axis=1)
        term = f[flat] * g
        if twisted:
            m = c[:, :n] @ c[a, n:] - c[:, n:] @ c[a, :n]
            term = term * table[m % (2 * N)]
        out[a] = term.sum() * weight
    return out


def lattice_convolution(f, g, N: int, D: int, weight: float, twisted: bool, backend: str | None = None):
    """Direct O(M^2) periodic convolution of two flat lattice arrays.

    Parameters
    ----------
    f, g : ndarray
        Flat complex arrays of length ``M = N**D`` in row-major order.
    D : int
        Number of lattice axes; for ``twisted`` it must be even (phase space).
    twisted : bool
        Include the symplectic half-phase ``exp((i/2) sigma(xi, eta))``.

    Returns
    -------
    ndarray
        ``out[xi] = weight * sum_eta phase * f[xi - eta] * g[eta]``.
    """
    n = D // 2
    idx = np.indices((N,) * D).reshape(D, -1).T.astype(np.int64).copy()
    strides = (N ** np.arange(D - 1, -1, -1)).astype(np.int64)
    table = phase_table(N)
    f = np.ascontiguousarray(f, dtype=np.complex128)
    g = np.ascontiguousarray(g, dtype=np.complex128)
    impl = _lattice_convolution_numba if _resolve(backend) == "numba" else _lattice_convolution_numpy
    return impl(f, g, idx, strides, N, n, bool(twisted), table, float(weight))


# Kato averaging over all lattice nodes.
#
# For a node xi = (x_m, p) the conjugate W(xi) G W(-xi) has entries
# exp(i (z_i - z_j) p) G[i - m, j - m]; summing over p first gives the
# coefficients coef[m, (i - j) mod N], so that
#     out[i, j] = sum_m coef[m, diff[i, j]] * G[shift[m, i], shift[m, j]].


@njit(cache=True)
def _kato_accumulate_numba(coef, G, shift, diff):
    S = coef.shape[0]
    D = G.shape[0]
    out = np.zeros((D, D), dtype=np.complex128)
    for m in range(S):
        for i in range(D):
            si = shift[m, i]
            for j in range(D):
                out[i, j] += coef[m, diff[i, j]] * G[si, shift[m, j]]
    return out


def _kato_accumulate_numpy(coef, G, shift, diff):
    out = np.zeros(G.shape, dtype=np.complex128)
    for m in range(coef.shape[0]):
        s = shift[m]
        out += coef[m][diff] * G[np.ix_(s, s)]
    return out


def kato_accumulate(coef, G, shift, diff, backend: str | None = None):
    """Sum of node-wise conjugated copies of ``G`` weighted by ``coef``."""
    coef = np.ascontiguousarray(coef, dtype=np.complex128)
    G = np.ascontiguousarray(G, dtype=np.complex128)
    shift = np.ascontiguousarray(shift, dtype=np.int64)
    diff = np.ascontiguousarray(diff, dtype=np.int64)
    impl = _kato_accumulate_numba if _resolve(backend) == "numba" else _kato_accumulate_numpy
    return impl(coef, G, shift, diff)
