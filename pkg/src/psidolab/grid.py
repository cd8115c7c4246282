"""Uniform periodic lattices for X, its dual X* and phase space X x X*.

A :class:`GridSpec` with ``N`` samples on ``[-L, L)`` per axis has spacing
``h = 2L/N``. Its dual lattice has spacing ``pi/L`` and half-width
``N*pi/(2L)``, so that lattice phases ``exp(i x p)`` are exactly periodic on
both lattices. Point 0 is always on the lattice.

Quadrature weights fold the ``(2 pi)^-n`` factor of the dual measure into the
X* weight::

    X      : h**n
    Xstar  : (dp / (2 pi))**n
    Phase  : (h * dp / (2 pi))**n = N**-n

With these weights the discrete Fourier transforms below are exact isometries.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonFiniteError, ShapeError, TagError

__all__ = [
    "GridSpec",
    "SpaceTag",
    "SampledFunction",
    "X",
    "XSTAR",
    "phase_tag",
    "sample",
    "lp_norm",
    "inner",
    "grid_to_json",
    "grid_from_json",
    "function_to_csv",
    "function_from_csv",
]


@dataclass(frozen=True)
class GridSpec:
    """Periodic lattice ``{-L + j h : j = 0..N-1}^n``.

    Parameters
    ----------
    dim : int
        Dimension ``n`` of the underlying space.
    samples_per_axis : int
        Even number ``N >= 4`` of lattice points per axis.
    half_width : float
        Half-width ``L > 0``; the domain is ``[-L, L)`` per axis.
    """

    dim: int
    samples_per_axis: int
    half_width: float
    _dual_of: "GridSpec | None" = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")
        N = self.samples_per_axis
        if int(N) != N or N < 4 or N % 2:
            raise DomainError(f"samples_per_axis must be an even integer >= 4, got {N!r}")
        L = float(self.half_width)
        if not (math.isfinite(L) and L > 0):
            raise DomainError(f"half_width must be positive and finite, got {self.half_width!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "samples_per_axis", int(N))
        object.__setattr__(self, "half_width", L)

    @property
    def n(self) -> int:
        return self.dim

    @property
    def N(self) -> int:
        return self.samples_per_axis

    @property
    def L(self) -> float:
        return self.half_width

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.samples_per_axis

    @property
    def dual_spacing(self) -> float:
        return math.pi / self.half_width

    @property
    def size(self) -> int:
        return self.samples_per_axis**self.dim

    def axis(self) -> np.ndarray:
        """One-dimensional lattice coordinates ``-L + j h``."""
        N = self.samples_per_axis
        return (np.arange(N) - N // 2) * self.spacing

    def integer_axis(self) -> np.ndarray:
        """Centered integer labels ``j - N/2`` of the lattice points."""
        N = self.samples_per_axis
        return np.arange(N) - N // 2

    def dual(self) -> "GridSpec":
        """The reciprocal lattice; ``g.dual().dual()`` returns ``g`` itself."""
        if self._dual_of is not None:
            return self._dual_of
        N = self.samples_per_axis
        return GridSpec(self.dim, N, N * math.pi / (2.0 * self.half_width), _dual_of=self)

    def refine(self, factor: int = 2, width_factor: float = 1.0) -> "GridSpec":
        """Grid with ``factor`` times the samples and ``width_factor`` times the width."""
        return GridSpec(self.dim, self.samples_per_axis * factor, self.half_width * width_factor)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "samples_per_axis": self.samples_per_axis, "half_width": self.half_width}

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        extra = set(d) - {"dim", "samples_per_axis", "half_width"}
        if extra:
            raise ShapeError(f"unknown grid keys: {sorted(extra)}")
        return cls(d["dim"], d["samples_per_axis"], d["half_width"])


@dataclass(frozen=True)
class SpaceTag:
    """Which space a sampled function lives on.

    ``kind`` is one of ``"X"``, ``"Xstar"``, ``"Phase"``. Phase functions
    carry an orthogonal decomposition ``X = X_1 + ... + X_k`` as block
    dimensions; ``None`` means a single block.
    """

    kind: str
    blocks: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("X", "Xstar", "Phase"):
            raise TagError(f"unknown space kind {self.kind!r}")
        if self.blocks is not None:
            blocks = tuple(int(b) for b in self.blocks)
            if not blocks or any(b <= 0 for b in blocks):
                raise ShapeError(f"block dimensions must be positive, got {self.blocks!r}")
            if self.kind != "Phase":
                raise TagError("only Phase tags carry a block decomposition")
            object.__setattr__(self, "blocks", blocks)

    def resolved_blocks(self, dim: int) -> tuple[int, ...]:
        blocks = self.blocks if self.blocks is not None else (dim,)
        if sum(blocks) != dim:
            raise ShapeError(f"blocks {blocks} do not sum to dim {dim}")
        return blocks


X = SpaceTag("X")
XSTAR = SpaceTag("Xstar")


def phase_tag(blocks: Sequence[int] | None = None) -> SpaceTag:
    return SpaceTag("Phase", None if blocks is None else tuple(blocks))


def _as_tag(tag) -> SpaceTag:
    if isinstance(tag, SpaceTag):
        return tag
    return SpaceTag(str(tag))


class SampledFunction:
    """Complex samples of a function on a lattice.

    ``values`` has shape ``(N,)*d`` with ``d = n`` on X/Xstar and ``d = 2n`` on
    Phase (x axes first, then p axes). For Xstar functions ``grid`` is the
    X* lattice itself; for Phase functions ``grid`` is the X lattice and the
    momentum axes use ``grid.dual()``.
    """

    __slots__ = ("tag", "grid", "values")

    def __init__(self, tag, grid: GridSpec, values):
        tag = _as_tag(tag)
        d = 2 * grid.dim if tag.kind == "Phase" else grid.dim
        shape = (grid.N,) * d
        arr = np.asarray(values, dtype=complex)
        if arr.size != grid.N**d:
            raise ShapeError(f"expected {grid.N**d} values for {tag.kind} on {grid}, got {arr.size}")
        arr = np.array(arr.reshape(shape), dtype=complex, copy=True)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("sampled values contain non-finite entries")
        arr.setflags(write=False)
        if tag.kind == "Phase":
            tag.resolved_blocks(grid.dim)
        self.tag = tag
        self.grid = grid
        self.values = arr

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def weight(self) -> float:
        return quadrature_weight(self.tag, self.grid)

    @property
    def blocks(self) -> tuple[int, ...]:
        return self.tag.resolved_blocks(self.grid.dim)

    def axes_coordinates(self) -> list[np.ndarray]:
        """One-dimensional coordinate arrays for every axis of ``values``."""
        g = self.grid
        if self.tag.kind == "Phase":
            return [g.axis()] * g.dim + [g.dual().axis()] * g.dim
        return [g.axis()] * g.dim

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.tag, self.grid, values)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        _check_same(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        _check_same(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c) -> "SampledFunction":
        if isinstance(c, SampledFunction):
            _check_same(self, c)
            return self.with_values(self.values * c.values)
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    def __neg__(self) -> "SampledFunction":
        return self.with_values(-self.values)

    def __repr__(self) -> str:
        return f"SampledFunction({self.tag.kind}, {self.grid!r})"


def quadrature_weight(tag: SpaceTag, grid: GridSpec) -> float:
    n = grid.dim
    if tag.kind == "X":
        return grid.spacing**n
    if tag.kind == "Xstar":
        return (grid.spacing / (2.0 * math.pi)) ** n
    return (grid.spacing * grid.dual_spacing / (2.0 * math.pi)) ** n


def _check_same(f: SampledFunction, g: SampledFunction) -> None:
    if f.tag.kind != g.tag.kind or f.grid != g.grid or f.values.shape != g.values.shape:
        raise ShapeError(f"mismatched operands: {f!r} vs {g!r}")


def lattice_coordinates(grid: GridSpec, tag) -> list[np.ndarray]:
    """Broadcast coordinate arrays (``indexing='ij'``) for every lattice axis."""
    tag = _as_tag(tag)
    axes = [grid.axis()] * grid.dim
    if tag.kind == "Phase":
        axes = axes + [grid.dual().axis()] * grid.dim
    return np.meshgrid(*axes, indexing="ij")


def sample(f: Callable[..., object], grid: GridSpec, tag) -> SampledFunction:
    """Evaluate ``f`` on every lattice point.

    ``f`` receives one broadcast coordinate array per axis: ``f(x1, .., xn)``
    on X or Xstar and ``f(x1, .., xn, p1, .., pn)`` on Phase. Scalars are
    broadcast. For Xstar pass the X* lattice as ``grid``.

    Raises
    ------
    NonFiniteError
        If ``f`` returns NaN or infinity; the message names the first offending
        lattice point.
    """
    tag = _as_tag(tag)
    coords = lattice_coordinates(grid, tag)
    with np.errstate(all="ignore"):
        vals = np.broadcast_to(np.asarray(f(*coords), dtype=complex), coords[0].shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        point = tuple(float(c[idx]) for c in coords)
        raise NonFiniteError(f"evaluator not finite at lattice index {idx}, point {point}")
    return SampledFunction(tag, grid, vals)


def lp_norm(f: SampledFunction, p: float) -> float:
    """Quadrature ``L^p`` norm ``(sum w |f_j|^p)^(1/p)``; ``p = inf`` gives the max."""
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p!r}")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max()) if a.size else 0.0
    if p == 1:
        return float(f.weight * a.sum())
    if p == 2:
        return float(math.sqrt(f.weight * np.sum(a * a)))
    m = a.max()
    if m == 0:
        return 0.0
    return float(m * (f.weight * np.sum((a / m) ** p)) ** (1.0 / p))


def inner(f: SampledFunction, g: SampledFunction) -> complex:
    """Weighted inner product, antilinear in the first argument."""
    _check_same(f, g)
    return complex(f.weight * np.vdot(f.values.reshape(-1), g.values.reshape(-1)))


def grid_to_json(grid: GridSpec) -> str:
    return json.dumps(grid.to_dict(), sort_keys=True)


def grid_from_json(text: str) -> GridSpec:
    return GridSpec.from_dict(json.loads(text))


def function_to_csv(f: SampledFunction) -> str:
    """CSV with one row per lattice point: indices, coordinates, re, im."""
    d = f.values.ndim
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"i{k}" for k in range(d)] + [f"c{k}" for k in range(d)] + ["re", "im"])
    axes = f.axes_coordinates()
    for idx in np.ndindex(*f.values.shape):
        v = f.values[idx]
        w.writerow(list(idx) + [repr(float(axes[k][i])) for k, i in enumerate(idx)] + [repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def function_from_csv(text: str, grid: GridSpec, tag) -> SampledFunction:
    tag = _as_tag(tag)
    d = 2 * grid.dim if tag.kind == "Phase" else grid.dim
    vals = np.zeros((grid.N,) * d, dtype=complex)
    rows = list(csv.reader(io.StringIO(text)))
    for row in rows[1:]:
        idx = tuple(int(c) for c in row[:d])
        vals[idx] = float(row[-2]) + 1j * float(row[-1])
    return SampledFunction(tag, grid, vals)
