"""The Schroedinger-representation Weyl system on sampled functions.

``W(x, p) psi(z) = exp(i <z - x/2, p>) psi(z - x)``. Position shifts by lattice
multiples are circular shifts; other shifts use band-limited (Fourier)
interpolation, which is exact for band-limited vectors and unitary on the
lattice. The half-phase is applied in the position domain after shifting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError, TagError
from .fourier import centered_dft, symplectic_form
from .grid import GridSpec, SampledFunction, inner, lattice_coordinates, lp_norm, phase_tag

__all__ = [
    "PhasePoint",
    "shift_values",
    "weyl_apply",
    "weyl_matrix",
    "composition_defect",
    "matrix_coefficient",
    "parseval_defect",
    "parseval_pairing",
]

_LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class PhasePoint:
    """Phase-space point ``xi = (x, p)`` with position and momentum n-vectors."""

    x: tuple[float, ...]
    p: tuple[float, ...]

    def __init__(self, x, p):
        x = tuple(float(v) for v in np.atleast_1d(np.asarray(x, dtype=float)))
        p = tuple(float(v) for v in np.atleast_1d(np.asarray(p, dtype=float)))
        if len(x) != len(p):
            raise ShapeError("x and p must have the same length")
        if not all(math.isfinite(v) for v in x + p):
            raise DomainError("phase point must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return len(self.x)

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(np.add(self.x, other.x), np.add(self.p, other.p))

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(np.negative(self.x), np.negative(self.p))

    def lattice_indices(self, grid: GridSpec) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """Integer labels ``(x/h, p/dp)`` if the point is on the lattice, else None."""
        ix = np.asarray(self.x) / grid.spacing
        ip = np.asarray(self.p) / grid.dual_spacing
        rx, rp = np.rint(ix), np.rint(ip)
        if np.all(np.abs(ix - rx) < _LATTICE_TOL) and np.all(np.abs(ip - rp) < _LATTICE_TOL):
            return tuple(int(v) for v in rx), tuple(int(v) for v in rp)
        return None

    def on_lattice(self, grid: GridSpec) -> bool:
        return self.lattice_indices(grid) is not None


def shift_values(values: np.ndarray, grid: GridSpec, shift, axes=None) -> np.ndarray:
    """Return samples of ``f(z - shift)`` given samples of ``f`` on ``grid``.

    Lattice shifts are circular; fractional shifts multiply every centered
    frequency (Nyquist included) by ``exp(-i k s)``, a unitary operation.
    """
    shift = np.atleast_1d(np.asarray(shift, dtype=float))
    if axes is None:
        axes = range(len(shift))
    out = np.asarray(values, dtype=complex)
    k = grid.dual().axis()
    for ax, s in zip(axes, shift):
        m = s / grid.spacing
        if abs(m - round(m)) < _LATTICE_TOL:
            if round(m) % grid.N:
                out = np.roll(out, int(round(m)), axis=ax)
            continue
        shape = [1] * out.ndim
        shape[ax] = -1
        spec = centered_dft(out, (ax,), -1) * np.exp(-1j * k * s).reshape(shape)
        out = centered_dft(spec, (ax,), +1) / grid.N
    return out


def weyl_apply(xi: PhasePoint, psi: SampledFunction) -> SampledFunction:
    """Apply ``W(xi)`` to a function on X."""
    if psi.tag.kind != "X":
        raise TagError("weyl_apply needs a function on X")
    g = psi.grid
    if xi.dim != g.dim:
        raise ShapeError("phase point dimension does not match the grid")
    shifted = shift_values(psi.values, g, xi.x)
    idx = xi.lattice_indices(g)
    if idx is not None:
        phase = _lattice_phase(g, idx[0], idx[1])
    else:
        z = lattice_coordinates(g, "X")
        arg = sum((z[d] - xi.x[d] / 2) * xi.p[d] for d in range(g.dim))
        phase = np.exp(1j * arg)
    return psi.with_values(shifted * phase)


def _lattice_phase(g: GridSpec, ix, ip) -> np.ndarray:
    # exp(i <z - x/2, p>) = exp(i pi (2 <c_z, b> - <a, b>) / N) with integer labels
    N = g.N
    c = np.meshgrid(*([g.integer_axis()] * g.dim), indexing="ij")
    m = sum(2 * c[d] * ip[d] - ix[d] * ip[d] for d in range(g.dim))
    return np.exp(1j * np.pi * np.mod(m, 2 * N) / N)


def weyl_matrix(xi: PhasePoint, grid: GridSpec) -> np.ndarray:
    """Dense unitary matrix of ``W(xi)`` acting on value vectors."""
    D = grid.size
    eye = np.eye(D, dtype=complex).reshape((D,) + (grid.N,) * grid.dim)
    cols = [weyl_apply(xi, SampledFunction("X", grid, e)).flat for e in eye]
    return np.stack(cols, axis=1)


def composition_defect(xi: PhasePoint, eta: PhasePoint, psi: SampledFunction) -> float:
    """``||W(xi)W(eta)psi - exp((i/2) sigma(xi, eta)) W(xi+eta) psi|| / ||psi||``."""
    nrm = lp_norm(psi, 2)
    if nrm == 0:
        raise DomainError("test vector must be nonzero")
    lhs = weyl_apply(xi, weyl_apply(eta, psi))
    ph = np.exp(0.5j * symplectic_form(xi.x, xi.p, eta.x, eta.p))
    rhs = weyl_apply(xi + eta, psi)
    return lp_norm(lhs - rhs * ph, 2) / nrm


def _momentum_matrix(z_axis: np.ndarray, p_axis: np.ndarray, grid: GridSpec) -> np.ndarray:
    # E[k, j] = exp(i z_j p_k), exact integer phases when p is on the dual lattice
    b = p_axis / grid.dual_spacing
    if np.all(np.abs(b - np.rint(b)) < _LATTICE_TOL):
        m = np.outer(np.rint(b).astype(np.int64), grid.integer_axis())
        return np.exp(2j * np.pi * np.mod(m, grid.N) / grid.N)
    return np.exp(1j * np.outer(p_axis, z_axis))


def matrix_coefficient(phi: SampledFunction, psi: SampledFunction, phase_grid: GridSpec | None = None) -> SampledFunction:
    """Sample ``w(xi) = (phi, W(xi) psi)`` on the lattice of ``phase_grid``.

    ``phase_grid`` defaults to the grid of ``phi``; it may be coarser or
    narrower, in which case its nodes are evaluated by interpolated shifts and
    dense momentum phases.
    """
    if phi.tag.kind != "X" or psi.tag.kind != "X" or phi.grid != psi.grid:
        raise ShapeError("phi and psi must live on the same X grid")
    g = phi.grid
    pg = g if phase_grid is None else phase_grid
    if pg.dim != g.dim:
        raise ShapeError("phase grid dimension does not match")
    n = g.dim
    xs = pg.axis()
    ps = pg.dual().axis()
    E = _momentum_matrix(g.axis(), ps, g)
    cphi = np.conj(phi.values)
    out = np.empty((pg.N,) * (2 * n), dtype=complex)
    for node in np.ndindex(*(pg.N,) * n):
        x = xs[list(node)]
        q = cphi * shift_values(psi.values, g, x)
        for d in range(n):
            q = np.moveaxis(np.tensordot(E, q, axes=([1], [d])), 0, d)
        out[node] = q * g.spacing**n
    # half-phase exp(-i <x, p> / 2)
    coords = lattice_coordinates(pg, "Phase")
    xp = sum(coords[d] * coords[n + d] for d in range(n))
    out *= np.exp(-0.5j * xp)
    return SampledFunction(phase_tag(), pg, out)


def parseval_defect(phi: SampledFunction, psi: SampledFunction, phase_grid: GridSpec | None = None) -> float:
    """Relative defect of ``int |(phi, W(xi) psi)|^2 d xi = ||phi||^2 ||psi||^2``.

    The phase-space integral runs over the truncated lattice of
    ``phase_grid``; truncation is the dominant error source.
    """
    a, b = lp_norm(phi, 2), lp_norm(psi, 2)
    if a == 0 or b == 0:
        raise DomainError("phi and psi must be nonzero")
    w = matrix_coefficient(phi, psi, phase_grid)
    ref = (a * b) ** 2
    return abs(lp_norm(w, 2) ** 2 - ref) / ref


def parseval_pairing(phi, psi, phi2, psi2, phase_grid: GridSpec | None = None) -> tuple[complex, complex]:
    """Both sides of ``int conj(w_{phi2,psi2}) w_{phi,psi} = (phi, phi2)(psi2, psi)``."""
    w1 = matrix_coefficient(phi, psi, phase_grid)
    w2 = matrix_coefficient(phi2, psi2, phase_grid)
    return inner(w2, w1), inner(phi, phi2) * inner(psi2, psi)
