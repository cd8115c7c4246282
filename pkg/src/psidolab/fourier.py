"""Discrete Fourier transforms on X, X* and phase space, and phase-space products.

All transforms use the centered layout: array index ``j`` stands for the
lattice point ``(j - N/2) h``, so ``fftshift(fft(ifftshift(u)))`` evaluates
``sum_j exp(-i x_j p_k) u_j`` exactly on the dual lattice.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
import scipy.fft as sfft

from . import _kernels
from .errors import NonFiniteError, ResourceError, ShapeError, TagError
from .grid import XSTAR, GridSpec, SampledFunction, X, _check_same, lattice_coordinates

__all__ = [
    "centered_dft",
    "fourier_X",
    "fourier_Xstar",
    "inv_fourier_X",
    "symplectic_fourier",
    "phase_multiplier",
    "twisted_convolution",
    "convolve",
    "direct_convolve",
    "symplectic_form",
    "lattice_frequency",
    "TWISTED_BUDGET",
]

# largest admissible M**2 for the direct twisted convolution, M = N**(2n)
TWISTED_BUDGET = 2**26


def centered_dft(arr: np.ndarray, axes, sign: int) -> np.ndarray:
    """Unweighted ``sum_j exp(sign * i x_j p_k) arr_j`` over ``axes``.

    Both index sets are centered lattices of even length, so the result is the
    exact lattice sum for ``sign = -1`` and ``sign = +1``.
    """
    axes = tuple(axes)
    if not axes:
        return np.asarray(arr, dtype=complex)
    a = sfft.ifftshift(arr, axes=axes)
    if sign < 0:
        a = sfft.fftn(a, axes=axes)
    else:
        a = sfft.ifftn(a, axes=axes, norm="forward")
    return sfft.fftshift(a, axes=axes)


def _require(f: SampledFunction, kind: str) -> None:
    if f.tag.kind != kind:
        raise TagError(f"expected a function on {kind}, got {f.tag.kind}")


def _sign(sign) -> int:
    if sign in ("forward", -1):
        return -1
    if sign in ("conjugate", 1, +1):
        return 1
    raise ValueError(f"sign must be 'forward' or 'conjugate', got {sign!r}")


def fourier_X(u: SampledFunction, sign="forward") -> SampledFunction:
    """``F_X u(p) = int exp(-i<x,p>) u(x) dx`` on the dual lattice.

    ``sign="conjugate"`` uses ``exp(+i<x,p>)`` instead.
    """
    _require(u, "X")
    n = u.grid.dim
    out = centered_dft(u.values, range(n), _sign(sign)) * u.grid.spacing**n
    return SampledFunction(XSTAR, u.grid.dual(), out)


def fourier_Xstar(v: SampledFunction, sign="forward") -> SampledFunction:
    """``F_{X*} v(x) = int exp(-i<x,p>) v(p) dp / (2 pi)^n`` on the X lattice."""
    _require(v, "Xstar")
    n = v.grid.dim
    out = centered_dft(v.values, range(n), _sign(sign)) * (v.grid.spacing / (2 * math.pi)) ** n
    return SampledFunction(X, v.grid.dual(), out)


def inv_fourier_X(v: SampledFunction) -> SampledFunction:
    """Inverse of :func:`fourier_X`, i.e. the conjugate transform on X*."""
    return fourier_Xstar(v, "conjugate")


def lattice_frequency(axis, step: float) -> np.ndarray:
    """``(2/step) sin(axis * step / 2)``: the lattice Laplacian with spacing ``step`` has symbol ``-(this)^2``."""
    return (2.0 / step) * np.sin(0.5 * step * np.asarray(axis, dtype=float))


def symplectic_form(x, p, y, k) -> float:
    """``sigma((x, p), (y, k)) = <y, p> - <x, k>``."""
    return float(np.dot(np.ravel(y), np.ravel(p)) - np.dot(np.ravel(x), np.ravel(k)))


def symplectic_fourier(a: SampledFunction) -> SampledFunction:
    """``F_S a(xi) = int exp(-i sigma(xi, eta)) a(eta) d eta``.

    Realized as the forward transform over the position axes, the conjugate
    transform over the momentum axes and a swap of the two slots. The result is
    involutive and unitary on the phase lattice up to rounding.
    """
    _require(a, "Phase")
    g = a.grid
    n = g.dim
    xs, ps = tuple(range(n)), tuple(range(n, 2 * n))
    # integrate y -> p (forward) and k -> x (conjugate); weight is 1/N^n
    b = centered_dft(a.values, xs, -1)
    b = centered_dft(b, ps, +1) * a.weight
    b = np.moveaxis(b, xs + ps, ps + xs)
    return SampledFunction(a.tag, g, b)


def _multiplier_values(f, grid: GridSpec, tag) -> np.ndarray:
    if isinstance(f, SampledFunction):
        if f.grid != grid or f.tag.kind != tag.kind:
            raise ShapeError("multiplier sampled on a different lattice")
        vals = f.values
    elif callable(f):
        with np.errstate(all="ignore"):
            vals = np.broadcast_to(np.asarray(f(*lattice_coordinates(grid, tag)), dtype=complex),
                                   (grid.N,) * (2 * grid.dim))
    else:
        vals = np.broadcast_to(np.asarray(f, dtype=complex), (grid.N,) * (2 * grid.dim))
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("multiplier is not finite on the phase lattice")
    return vals


def phase_multiplier(a: SampledFunction, f: Callable | SampledFunction | np.ndarray) -> SampledFunction:
    """Apply ``f(P_S) = F_S M_f F_S`` to ``a``.

    ``f`` may be a callable ``f(x1..xn, p1..pn)``, a sampled Phase function or
    an array broadcastable to the phase lattice.
    """
    _require(a, "Phase")
    vals = _multiplier_values(f, a.grid, a.tag)
    b = symplectic_fourier(a)
    return symplectic_fourier(b.with_values(b.values * vals))


def twisted_convolution(mu: SampledFunction, nu: SampledFunction, backend: str | None = None) -> SampledFunction:
    """``(mu x nu)(xi) = int exp((i/2) sigma(xi, eta)) mu(xi - eta) nu(eta) d eta``.

    Direct quadrature over all ``M = N**(2n)`` lattice points with exact
    integer phases; ``xi - eta`` wraps periodically.

    Raises
    ------
    ResourceError
        If ``M**2`` exceeds :data:`TWISTED_BUDGET`.
    """
    _require(mu, "Phase")
    _check_same(mu, nu)
    g = mu.grid
    M = g.N ** (2 * g.dim)
    if M * M > TWISTED_BUDGET:
        n_ok = int(math.floor(TWISTED_BUDGET ** (1.0 / (4 * g.dim))))
        n_ok -= n_ok % 2
        raise ResourceError(f"twisted convolution needs M^2 = {M * M} > {TWISTED_BUDGET}; use N <= {n_ok}")
    out = _kernels.lattice_convolution(mu.flat, nu.flat, g.N, 2 * g.dim, mu.weight, True, backend=backend)
    return mu.with_values(out)


def convolve(b: SampledFunction, c: SampledFunction) -> SampledFunction:
    """Periodic convolution ``(b * c)(xi) = int b(xi - eta) c(eta) d eta`` via FFT."""
    _check_same(b, c)
    axes = tuple(range(b.values.ndim))
    B = sfft.fftn(sfft.ifftshift(b.values), axes=axes)
    C = sfft.fftn(sfft.ifftshift(c.values), axes=axes)
    out = sfft.fftshift(sfft.ifftn(B * C, axes=axes)) * b.weight
    return b.with_values(out)


def direct_convolve(b: SampledFunction, c: SampledFunction, backend: str | None = None) -> SampledFunction:
    """Reference O(M^2) convolution quadrature, the oracle for :func:`convolve`."""
    _check_same(b, c)
    out = _kernels.lattice_convolution(b.flat, c.flat, b.grid.N, b.values.ndim, b.weight, False, backend=backend)
    return b.with_values(out)
