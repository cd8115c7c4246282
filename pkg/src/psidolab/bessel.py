"""Bessel potential kernels and Cordes trace-class symbols.

``psi_s`` is the inverse Fourier transform of ``<p>^-s`` on X and ``chi_s`` the
Fourier transform of ``<x>^-s`` on X*. Both are computed spectrally, so they
have unit mass and their transforms are exactly the bracket power on the
lattice.

By default the bracket is that of the lattice Laplacian,
``<p>_h^2 = 1 + (2/h)^2 sin^2(p h / 2)``, so ``(1 - Lap_h)^{s/2} psi_s = delta``
holds exactly on the lattice. The resulting kernels are positive and
decreasing along rays (mixtures of lattice heat kernels), whereas cutting the
continuum bracket ``(1 + |p|^2)^(1/2)`` off at the Nyquist frequency makes them
ring. ``laplacian="continuum"`` selects the continuum bracket. Near the origin
either sampled kernel only approximates the singular continuum kernel.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ShapeError
from .fourier import centered_dft, lattice_frequency
from .grid import XSTAR, GridSpec, SampledFunction, X, phase_tag
from .quantize import kernel_from_symbol
from .schatten import singular_values

__all__ = [
    "bracket",
    "lattice_frequency",
    "block_bracket_power",
    "bessel_kernel",
    "cordes_symbol",
    "assemble_blocks",
    "trace_class_probe",
    "cordes_threshold",
    "check_cordes_exponents",
    "CORDES_KN_FACTOR",
    "CORDES_GENERAL_FACTOR",
    "CORDES_BLOCK_FACTOR",
]

# g = psi_t (x) chi_s quantizes to a trace-class operator when t, s > factor * n:
CORDES_KN_FACTOR = 0.5  # tau = 0
CORDES_GENERAL_FACTOR = 1.0  # any real tau
# block version: t_j, s_j > dim X_j / 4 with g = psi_{2t} (x) chi_{2s} (tau = 0),
# or g = psi_{4t} (x) chi_{4s} for general tau
CORDES_BLOCK_FACTOR = 0.25


def bracket(v) -> np.ndarray:
    """``<v> = sqrt(1 + |v|^2)`` for arrays of scalars."""
    return np.sqrt(1.0 + np.square(v))


def _split(values, blocks: Sequence[int], name: str) -> tuple[float, ...]:
    vals = np.atleast_1d(np.asarray(values, dtype=float))
    if vals.size == 1:
        vals = np.repeat(vals, len(blocks))
    if vals.size != len(blocks):
        raise ShapeError(f"{name} has {vals.size} entries for {len(blocks)} blocks")
    return tuple(float(v) for v in vals)


def _laplacian_axis(axis: np.ndarray, step: float, laplacian: str) -> np.ndarray:
    if laplacian == "lattice":
        return lattice_frequency(axis, step)
    if laplacian == "continuum":
        return axis
    raise ValueError(f"laplacian must be 'lattice' or 'continuum', got {laplacian!r}")


def block_bracket_power(axis: np.ndarray, blocks: Sequence[int], powers: Sequence[float]) -> np.ndarray:
    """``prod_j <v_j>^{powers_j}`` on the lattice ``axis^n``, ``v_j`` the block-j coordinates."""
    n = sum(blocks)
    coords = np.meshgrid(*([axis] * n), indexing="ij")
    out = np.ones((axis.size,) * n)
    start = 0
    for nb, pw in zip(blocks, powers):
        r2 = sum(coords[d] ** 2 for d in range(start, start + nb))
        out = out * (1.0 + r2) ** (pw / 2.0)
        start += nb
    return out


def bessel_kernel(s, grid: GridSpec, which: str = "X", blocks: Sequence[int] | None = None,
                  laplacian: str = "lattice") -> SampledFunction:
    """Bessel potential kernel of order ``s``.

    Parameters
    ----------
    s : float or sequence of float
        Order (per block for a tensor-product kernel).
    grid : GridSpec
        The X grid of the experiment; ``which="Xstar"`` returns ``chi_s`` on
        ``grid.dual()``.
    which : {"X", "Xstar"}
        ``psi_s`` on X or ``chi_s`` on X*.
    blocks : sequence of int, optional
        Orthogonal decomposition; the kernel is the tensor product of the
        block kernels.
    laplacian : {"lattice", "continuum"}
        Bracket of the lattice Laplacian (default) or of the continuum one.

    Returns
    -------
    SampledFunction
        Real-valued samples (stored as complex).
    """
    blocks = tuple(blocks) if blocks is not None else (grid.dim,)
    if sum(blocks) != grid.dim:
        raise ShapeError(f"blocks {blocks} do not sum to dim {grid.dim}")
    orders = _split(s, blocks, "s")
    if any(not (o > 0) for o in orders):
        raise DomainError(f"Bessel order must be positive, got {s!r}")
    n = grid.dim
    if which == "X":
        dual = grid.dual()
        mult = block_bracket_power(_laplacian_axis(dual.axis(), grid.spacing, laplacian), blocks,
                                   [-o for o in orders])
        vals = centered_dft(mult, range(n), +1) * (dual.spacing / (2 * math.pi)) ** n
        return SampledFunction(X, grid, vals.real)
    if which == "Xstar":
        mult = block_bracket_power(_laplacian_axis(grid.axis(), grid.dual_spacing, laplacian), blocks,
                                   [-o for o in orders])
        vals = centered_dft(mult, range(n), -1) * grid.spacing**n
        return SampledFunction(XSTAR, grid.dual(), vals.real)
    raise ValueError(f"which must be 'X' or 'Xstar', got {which!r}")


def assemble_blocks(factors: Sequence[np.ndarray], blocks: Sequence[int]) -> np.ndarray:
    """Tensor product of per-block phase arrays in the ``x``-first layout.

    ``factors[j]`` has axes ``(x_j..., p_j...)``. The plain outer product has
    interleaved axes ``(x_1, p_1, x_2, p_2, ...)``; the transpose back to
    ``(x_1, x_2, ..., p_1, p_2, ...)`` is the block isometry ``J``.
    """
    out = np.ones(())
    for f in factors:
        out = np.multiply.outer(out, f)
    order_x, order_p, pos = [], [], 0
    for nb in blocks:
        order_x.extend(range(pos, pos + nb))
        order_p.extend(range(pos + nb, pos + 2 * nb))
        pos += 2 * nb
    return np.transpose(out, order_x + order_p)


def cordes_symbol(t, s, grid: GridSpec, decomposition: Sequence[int] | None = None,
                  laplacian: str = "lattice") -> SampledFunction:
    """``g(x, p) = prod_j psi_{t_j}(x_j) chi_{s_j}(p_j)`` on the phase lattice."""
    blocks = tuple(decomposition) if decomposition is not None else (grid.dim,)
    if sum(blocks) != grid.dim:
        raise ShapeError(f"decomposition {blocks} does not match dim {grid.dim}")
    ts, ss = _split(t, blocks, "t"), _split(s, blocks, "s")
    factors = []
    for nb, tj, sj in zip(blocks, ts, ss):
        gb = GridSpec(nb, grid.N, grid.L)
        psi = bessel_kernel(tj, gb, "X", laplacian=laplacian).values
        chi = bessel_kernel(sj, gb, "Xstar", laplacian=laplacian).values
        factors.append(np.multiply.outer(psi, chi))
    return SampledFunction(phase_tag(decomposition), grid, assemble_blocks(factors, blocks))


def cordes_threshold(blocks: Sequence[int], tau: float, block_form: bool = False) -> tuple[float, ...]:
    """Per-block lower bounds the Bessel orders of ``g`` must exceed.

    Without ``block_form`` the bounds are ``n/2`` for ``tau = 0`` and ``n``
    otherwise, applied to the whole space. With ``block_form`` the orders
    of ``g = psi_{2t} (x) chi_{2s}`` (``tau = 0``) or ``psi_{4t} (x) chi_{4s}``
    must exceed ``2 * dim X_j / 4`` or ``4 * dim X_j / 4`` respectively.
    """
    if block_form:
        mult = 2.0 if tau == 0 else 4.0
        return tuple(mult * CORDES_BLOCK_FACTOR * nb for nb in blocks)
    n = sum(blocks)
    f = CORDES_KN_FACTOR if tau == 0 else CORDES_GENERAL_FACTOR
    return (f * n,)


def check_cordes_exponents(t, s, blocks: Sequence[int], tau: float, block_form: bool = False) -> bool:
    """Warn and return False if ``(t, s)`` fail the trace-class threshold."""
    blocks = tuple(blocks)
    if block_form:
        ts, ss = _split(t, blocks, "t"), _split(s, blocks, "s")
        lim = cordes_threshold(blocks, tau, True)
    else:
        ts = (float(np.min(t)),)
        ss = (float(np.min(s)),)
        lim = cordes_threshold(blocks, tau, False)
    ok = all(a > b for a, b in zip(ts, lim)) and all(a > b for a, b in zip(ss, lim))
    if not ok:
        warnings.warn(f"Bessel orders t={t}, s={s} do not exceed the trace-class threshold {lim} for tau={tau}",
                      stacklevel=2)
    return ok


def trace_class_probe(g: Callable[[GridSpec], SampledFunction] | SampledFunction, tau: float,
                      refinements: Sequence[GridSpec] | None = None) -> list[float]:
    """Schatten-1 norms of ``Op_tau(g)`` on each refinement grid.

    ``g`` is either a factory ``grid -> SampledFunction`` (e.g. a partial of
    :func:`cordes_symbol`) or a fixed sampled symbol, which is then probed on
    its own grid only.
    """
    if isinstance(g, SampledFunction):
        if refinements and any(r != g.grid for r in refinements):
            raise ShapeError("a sampled symbol can only be probed on its own grid; pass a factory")
        symbols = [g]
    else:
        if not refinements:
            raise ShapeError("refinements are required with a symbol factory")
        symbols = [g(r) for r in refinements]
    return [float(np.sum(singular_values(kernel_from_symbol(a, tau)))) for a in symbols]
