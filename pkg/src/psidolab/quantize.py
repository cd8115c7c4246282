"""Symbol <-> kernel maps for the (X, tau)-quantization.

The kernel of ``Op_tau(a)`` is ``K(x, y) = A(x - tau (x - y), x - y)`` where
``A(u, v)`` is the inverse Fourier transform of ``a(u, p)`` in ``p``. On the
lattice, ``v = x - y`` is taken as the minimal periodic image and the
fractional first argument is reached by a unitary per-``v`` Fourier shift in
``u``. Every step is invertible, so the symbol map and its inverse agree to
rounding for every real ``tau``, and the Hilbert-Schmidt norm does not depend
on ``tau``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError, TagError
from .fourier import centered_dft, phase_multiplier
from .grid import GridSpec, SampledFunction, phase_tag

__all__ = [
    "QuantizationParams",
    "OperatorKernel",
    "kernel_from_symbol",
    "symbol_from_kernel",
    "convert_tau",
    "compose_symbols",
    "identity_kernel",
    "rank_one_kernel",
]


@dataclass(frozen=True)
class QuantizationParams:
    """Quantization context: scalar ``tau``, X grid and block decomposition.

    ``tau = 0`` is the Kohn-Nirenberg and ``tau = 1/2`` the Weyl quantization.
    """

    tau: float
    grid: GridSpec
    decomposition: tuple[int, ...] | None = None

    def __post_init__(self):
        if not math.isfinite(float(self.tau)):
            raise DomainError(f"tau must be finite, got {self.tau!r}")
        object.__setattr__(self, "tau", float(self.tau))
        if self.decomposition is not None:
            dec = tuple(int(b) for b in self.decomposition)
            if any(b <= 0 for b in dec) or sum(dec) != self.grid.dim:
                raise ShapeError(f"decomposition {dec} does not split dim {self.grid.dim}")
            object.__setattr__(self, "decomposition", dec)


class OperatorKernel:
    """Kernel values ``K(x_i, y_j)`` of an operator on ``L^2(X)``.

    The operator acts as ``u -> h**n * K @ u``; :attr:`matrix` is that weighted
    matrix, which represents the operator in the orthonormal lattice basis.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: GridSpec, values):
        D = grid.size
        arr = np.asarray(values, dtype=complex)
        if arr.shape != (D, D):
            raise ShapeError(f"kernel must be {D}x{D}, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("kernel contains non-finite entries")
        arr = arr.copy()
        arr.setflags(write=False)
        self.grid = grid
        self.values = arr

    @property
    def weight(self) -> float:
        return self.grid.spacing**self.grid.dim

    @property
    def matrix(self) -> np.ndarray:
        return self.weight * self.values

    @classmethod
    def from_matrix(cls, grid: GridSpec, matrix) -> "OperatorKernel":
        return cls(grid, np.asarray(matrix, dtype=complex) / grid.spacing**grid.dim)

    def apply(self, u: SampledFunction) -> SampledFunction:
        if u.tag.kind != "X" or u.grid != self.grid:
            raise ShapeError("operand must be a function on the kernel's X grid")
        return u.with_values(self.matrix @ u.flat)

    def adjoint(self) -> "OperatorKernel":
        return OperatorKernel(self.grid, self.values.conj().T)

    def trace(self) -> complex:
        return complex(self.weight * np.trace(self.values))

    def _check(self, other: "OperatorKernel") -> None:
        if not isinstance(other, OperatorKernel) or other.grid != self.grid:
            raise ShapeError("kernels live on different grids")

    def __matmul__(self, other: "OperatorKernel") -> "OperatorKernel":
        self._check(other)
        return OperatorKernel(self.grid, self.weight * (self.values @ other.values))

    def __add__(self, other: "OperatorKernel") -> "OperatorKernel":
        self._check(other)
        return OperatorKernel(self.grid, self.values + other.values)

    def __sub__(self, other: "OperatorKernel") -> "OperatorKernel":
        self._check(other)
        return OperatorKernel(self.grid, self.values - other.values)

    def __mul__(self, c) -> "OperatorKernel":
        return OperatorKernel(self.grid, self.values * c)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"OperatorKernel({self.grid!r})"

    def to_csv(self) -> str:
        """Long-format CSV: row index, column index, re, im."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "re", "im"])
        D = self.values.shape[0]
        for i in range(D):
            for j in range(D):
                v = self.values[i, j]
                w.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()


def identity_kernel(grid: GridSpec) -> OperatorKernel:
    return OperatorKernel.from_matrix(grid, np.eye(grid.size))


def rank_one_kernel(phi: SampledFunction, psi: SampledFunction) -> OperatorKernel:
    """Kernel of ``u -> phi (psi, u)``."""
    if phi.grid != psi.grid:
        raise ShapeError("phi and psi must share a grid")
    return OperatorKernel(phi.grid, np.outer(phi.flat, np.conj(psi.flat)))


def _params(a_grid: GridSpec, params) -> QuantizationParams:
    if isinstance(params, QuantizationParams):
        if params.grid != a_grid:
            raise ShapeError("symbol grid does not match the quantization grid")
        return params
    return QuantizationParams(float(params), a_grid)


def _offset_index(grid: GridSpec) -> np.ndarray:
    # jflat[i, m]: column index y_j with x_i - y_j equal to the lattice offset v_m
    N, n = grid.N, grid.dim
    multi = np.indices((N,) * n).reshape(n, -1).T
    j = (multi[:, None, :] - multi[None, :, :] + N // 2) % N
    return np.ravel_multi_index(tuple(np.moveaxis(j, -1, 0)), (N,) * n)


def _shift_phase(grid: GridSpec, tau: float, sign: int) -> np.ndarray:
    # exp(sign * i tau <k, v>) on (k..., v...) with k dual and v position labels
    n = grid.dim
    c = np.meshgrid(*([grid.integer_axis()] * (2 * n)), indexing="ij")
    m = sum(c[d] * c[n + d] for d in range(n))
    return np.exp(sign * 2j * np.pi * tau * m / grid.N)


def kernel_from_symbol(a: SampledFunction, params) -> OperatorKernel:
    """Kernel of ``Op_tau(a)``; ``params`` is a :class:`QuantizationParams` or ``tau``."""
    if a.tag.kind != "Phase":
        raise TagError("kernel_from_symbol needs a Phase symbol")
    prm = _params(a.grid, params)
    g = a.grid
    n, N, D = g.dim, g.N, g.size
    us, vs = tuple(range(n)), tuple(range(n, 2 * n))
    A = centered_dft(a.values, vs, +1) * (g.dual_spacing / (2 * math.pi)) ** n
    if prm.tau != 0.0:
        spec = centered_dft(A, us, -1) * _shift_phase(g, prm.tau, -1)
        A = centered_dft(spec, us, +1) / N**n
    K = np.zeros((D, D), dtype=complex)
    K[np.arange(D)[:, None], _offset_index(g)] = A.reshape(D, D)
    return OperatorKernel(g, K)


def symbol_from_kernel(K: OperatorKernel, params, blocks=None) -> SampledFunction:
    """Inverse of :func:`kernel_from_symbol`: the ``tau``-symbol of ``K``."""
    prm = _params(K.grid, params)
    g = K.grid
    n, N, D = g.dim, g.N, g.size
    us, vs = tuple(range(n)), tuple(range(n, 2 * n))
    A = K.values[np.arange(D)[:, None], _offset_index(g)].reshape((N,) * (2 * n))
    if prm.tau != 0.0:
        spec = centered_dft(A, us, -1) * _shift_phase(g, prm.tau, +1)
        A = centered_dft(spec, us, +1) / N**n
    a = centered_dft(A, vs, -1) * g.spacing**n
    dec = blocks if blocks is not None else prm.decomposition
    return SampledFunction(phase_tag(dec), g, a)


def convert_tau(a: SampledFunction, tau_from: float, tau_to: float) -> SampledFunction:
    """The ``tau_to``-symbol of the operator whose ``tau_from``-symbol is ``a``.

    Implemented as the phase-space multiplier ``exp(i (tau_to - tau_from) <x, p>)``.
    """
    if not (math.isfinite(tau_from) and math.isfinite(tau_to)):
        raise DomainError("tau values must be finite")
    c = float(tau_to) - float(tau_from)
    if c == 0.0:
        return a
    g = a.grid
    n = g.dim
    ci = np.meshgrid(*([g.integer_axis()] * (2 * n)), indexing="ij")
    m = sum(ci[d] * ci[n + d] for d in range(n))
    return phase_multiplier(a, np.exp(2j * np.pi * c * m / g.N))


def compose_symbols(a: SampledFunction, b: SampledFunction, params) -> SampledFunction:
    """``tau``-symbol of ``Op_tau(a) Op_tau(b)``, computed through kernels."""
    prm = _params(a.grid, params)
    Ka = kernel_from_symbol(a, prm)
    Kb = kernel_from_symbol(b, prm)
    return symbol_from_kernel(Ka @ Kb, prm, blocks=a.tag.blocks)
