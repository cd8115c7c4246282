"""Symbol classes: derivative seminorms, Sobolev norms, Bessel smoothing, random symbols.

All derivatives and multipliers act spectrally on the periodic phase lattice.
Along a position axis the frequencies are the dual lattice; along a momentum
axis they are the position lattice. Odd derivatives drop the Nyquist mode, so
differentiation is exact for band-limited symbols.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ShapeError, TagError
from .fourier import centered_dft, lattice_frequency
from .grid import GridSpec, SampledFunction, lp_norm, phase_tag

__all__ = [
    "SeminormSpec",
    "default_orders",
    "spectral_derivative",
    "seminorm",
    "sobolev_norm",
    "bessel_smooth",
    "random_symbol",
    "windowed_random_symbol",
    "symbol_manifest",
    "symbol_from_manifest",
    "GENERATOR",
    "DEFAULT_MU",
]

GENERATOR = "numpy.random.PCG64"
DEFAULT_MU = 1.01


def default_orders(blocks: Sequence[int], tau: float = 0.0) -> tuple[int, ...]:
    """``m_j = floor(n_j / 2) + 1``, doubled for ``tau != 0``."""
    m = tuple(nb // 2 + 1 for nb in blocks)
    return m if tau == 0 else tuple(2 * v for v in m)


@dataclass(frozen=True)
class SeminormSpec:
    """Caps on per-block derivative orders for ``|a|_{p, m}``.

    ``orders_x[j]`` bounds ``|alpha_j|`` on the position block ``X_j`` and
    ``orders_p[j]`` bounds ``|beta_j|`` on ``X_j*``; ``orders_p`` defaults to
    ``orders_x``.
    """

    p: float
    orders_x: tuple[int, ...]
    orders_p: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.p >= 1:
            raise DomainError(f"p must be >= 1, got {self.p!r}")
        ox = tuple(int(v) for v in self.orders_x)
        op = ox if self.orders_p is None else tuple(int(v) for v in self.orders_p)
        if any(v < 0 for v in ox + op) or len(ox) != len(op):
            raise DomainError("orders must be nonnegative and given per block")
        object.__setattr__(self, "orders_x", ox)
        object.__setattr__(self, "orders_p", op)


def _require_phase(a: SampledFunction) -> None:
    if a.tag.kind != "Phase":
        raise TagError("expected a Phase symbol")


def _frequency_axes(grid: GridSpec) -> list[np.ndarray]:
    # spectral variable for each phase axis: dual lattice for x, X lattice for p
    n = grid.dim
    return [grid.dual().axis()] * n + [grid.axis()] * n


def _spectrum(a: SampledFunction) -> np.ndarray:
    return centered_dft(a.values, range(a.values.ndim), -1)


def _from_spectrum(spec: np.ndarray, a: SampledFunction) -> np.ndarray:
    return centered_dft(spec, range(spec.ndim), +1) / spec.size


def _axis_factor(freq: np.ndarray, order: int) -> np.ndarray:
    f = (1j * freq) ** order
    if order % 2:
        f = f.copy()
        f[0] = 0.0  # Nyquist mode
    return f


def _monomial(grid: GridSpec, orders: Sequence[int]) -> np.ndarray:
    freqs = _frequency_axes(grid)
    out = np.ones(())
    for f, k in zip(freqs, orders):
        out = np.multiply.outer(out, _axis_factor(f, k))
    return out


def spectral_derivative(a: SampledFunction, alpha: Sequence[int], beta: Sequence[int]) -> SampledFunction:
    """``d_x^alpha d_p^beta a`` with ``alpha, beta`` multi-indices of length n."""
    _require_phase(a)
    n = a.grid.dim
    if len(alpha) != n or len(beta) != n:
        raise ShapeError("multi-indices must have length dim")
    orders = list(alpha) + list(beta)
    if not any(orders):
        return a
    return a.with_values(_from_spectrum(_spectrum(a) * _monomial(a.grid, orders), a))


def _block_multi_indices(blocks: Sequence[int], caps: Sequence[int]):
    per_block = []
    for nb, cap in zip(blocks, caps):
        per_block.append([m for m in itertools.product(range(cap + 1), repeat=nb) if sum(m) <= cap])
    for combo in itertools.product(*per_block):
        yield tuple(v for m in combo for v in m)


def seminorm(a: SampledFunction, spec: SeminormSpec) -> float:
    """``max ||d_x^alpha d_p^beta a||_{L^p}`` over ``|alpha_j| <= m_j``, ``|beta_j| <= m_j``."""
    _require_phase(a)
    blocks = a.blocks
    if len(spec.orders_x) != len(blocks):
        raise ShapeError(f"orders given for {len(spec.orders_x)} blocks, symbol has {len(blocks)}")
    if not np.any(a.values):
        return 0.0
    S = _spectrum(a)
    best = 0.0
    for alpha in _block_multi_indices(blocks, spec.orders_x):
        for beta in _block_multi_indices(blocks, spec.orders_p):
            orders = list(alpha) + list(beta)
            vals = a.values if not any(orders) else _from_spectrum(S * _monomial(a.grid, orders), a)
            best = max(best, lp_norm(a.with_values(vals), spec.p))
    return best


def sobolev_norm(a: SampledFunction, s: float, p: float) -> float:
    """``|| <zeta>^s a ||_{L^p}`` with the multiplier over all ``2n`` phase axes."""
    _require_phase(a)
    if s == 0:
        return lp_norm(a, p)
    freqs = _frequency_axes(a.grid)
    r2 = np.zeros(())
    for f in freqs:
        r2 = np.add.outer(r2, f**2)
    vals = _from_spectrum(_spectrum(a) * (1.0 + r2) ** (s / 2.0), a)
    return lp_norm(a.with_values(vals), p)


def _block_bracket(freqs: Sequence[np.ndarray], blocks: Sequence[int], powers: Sequence[float]) -> np.ndarray:
    out = np.ones(())
    start = 0
    for nb, pw in zip(blocks, powers):
        r2 = np.zeros(())
        for f in freqs[start:start + nb]:
            r2 = np.add.outer(r2, f**2)
        out = np.multiply.outer(out, (1.0 + r2) ** (pw / 2.0))
        start += nb
    return out


def _per_block(v, blocks) -> tuple[float, ...]:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.size == 1:
        arr = np.repeat(arr, len(blocks))
    if arr.size != len(blocks):
        raise ShapeError(f"expected {len(blocks)} block exponents, got {arr.size}")
    return tuple(float(x) for x in arr)


def bessel_smooth(a: SampledFunction, t, s, laplacian: str = "lattice") -> SampledFunction:
    """Apply ``(1 - Lap_{X_1})^{t_1} ... (1 - Lap_{X_k*})^{s_k}`` spectrally.

    The multiplier is ``prod_j <k_j>^{2 t_j} <y_j>^{2 s_j}`` with ``k_j`` the
    block-j frequencies dual to ``x_j`` and ``y_j`` those dual to ``p_j``.
    With the default ``laplacian="lattice"`` the brackets are those of the
    lattice Laplacian, matching :func:`psidolab.bessel.cordes_symbol`, so
    smoothing followed by convolution with the matching Cordes symbol is the
    identity.
    """
    _require_phase(a)
    blocks = a.blocks
    ts, ss = _per_block(t, blocks), _per_block(s, blocks)
    if not any(ts) and not any(ss):
        return a
    g = a.grid
    n = g.dim
    freqs = _frequency_axes(g)
    if laplacian == "lattice":
        freqs = ([lattice_frequency(f, g.spacing) for f in freqs[:n]]
                 + [lattice_frequency(f, g.dual_spacing) for f in freqs[n:]])
    elif laplacian != "continuum":
        raise ValueError(f"laplacian must be 'lattice' or 'continuum', got {laplacian!r}")
    mx = _block_bracket(freqs[:n], blocks, [2 * v for v in ts])
    mp = _block_bracket(freqs[n:], blocks, [2 * v for v in ss])
    return a.with_values(_from_spectrum(_spectrum(a) * np.multiply.outer(mx, mp), a))


def _hermitian_flip(c: np.ndarray) -> np.ndarray:
    # c[-k] on centered arrays: index j -> (N - j) mod N along every axis
    axes = tuple(range(c.ndim))
    return np.roll(np.flip(c, axes), 1, axes)


def _random_coefficients(seed: int, band_fraction: float, envelope_decay: float, grid: GridSpec) -> np.ndarray:
    if not (0 < band_fraction <= 1):
        raise DomainError(f"band_fraction must lie in (0, 1], got {band_fraction!r}")
    N, n = grid.N, grid.dim
    shape = (N,) * (2 * n)
    rng = np.random.Generator(np.random.PCG64(seed))
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    ints = np.meshgrid(*([grid.integer_axis()] * (2 * n)), indexing="ij")
    inside = np.ones(shape, dtype=bool)
    for ci in ints:
        inside &= np.abs(ci) < band_fraction * N / 2
    freqs = _frequency_axes(grid)
    r2 = np.zeros(())
    for f in freqs:
        r2 = np.add.outer(r2, f**2)
    c = np.where(inside, c * (1.0 + r2) ** (-envelope_decay / 2.0), 0.0)
    c = 0.5 * (c + np.conj(_hermitian_flip(c)))
    count = max(int(inside.sum()), 1)
    return c / math.sqrt(count)


def random_symbol(seed: int, band_fraction: float, envelope_decay: float, grid: GridSpec,
                  blocks: Sequence[int] | None = None) -> SampledFunction:
    """Real band-limited random symbol on the phase lattice of ``grid``.

    Independent seeded complex Gaussian coefficients on the centered frequency
    lattice, zero outside ``|index| < band_fraction * N / 2`` on every axis,
    damped by ``<zeta>^-envelope_decay`` and Hermitian-symmetrized.
    """
    c = _random_coefficients(seed, band_fraction, envelope_decay, grid)
    vals = centered_dft(c, range(c.ndim), +1)
    return SampledFunction(phase_tag(blocks), grid, vals.real)


def _trig_eval(c: np.ndarray, base: GridSpec, target: GridSpec) -> np.ndarray:
    # evaluate sum_k c_k exp(i <zeta_k, eta>) at the target phase lattice
    n = base.dim
    fb = _frequency_axes(base)
    pts = [target.axis()] * n + [target.dual().axis()] * n
    out = c
    for ax in range(2 * n):
        E = np.exp(1j * np.outer(pts[ax], fb[ax]))
        out = np.moveaxis(np.tensordot(E, out, axes=([1], [ax])), 0, ax)
    return out


def windowed_random_symbol(seed: int, grid: GridSpec, base_grid: GridSpec, band_fraction: float = 0.25,
                           envelope_decay: float = 2.0, window: float = 0.2) -> SampledFunction:
    """A fixed smooth, rapidly decaying random symbol sampled on ``grid``.

    The trigonometric polynomial of :func:`random_symbol` on ``base_grid`` is
    multiplied by a Gaussian window of widths ``window * L`` in position and
    ``window * P`` in momentum (``L``, ``P`` the base half-widths). The result
    is a continuum function, so it can be sampled consistently on refined
    grids.
    """
    c = _random_coefficients(seed, band_fraction, envelope_decay, base_grid)
    vals = _trig_eval(c, base_grid, grid).real
    n = grid.dim
    sx, sp = window * base_grid.L, window * base_grid.dual().L
    coords = np.meshgrid(*([grid.axis()] * n + [grid.dual().axis()] * n), indexing="ij")
    q = sum((coords[d] / sx) ** 2 + (coords[n + d] / sp) ** 2 for d in range(n))
    return SampledFunction(phase_tag(), grid, vals * np.exp(-0.5 * q))


def symbol_manifest(seed: int, band_fraction: float, envelope_decay: float, grid: GridSpec) -> dict:
    """JSON-ready description of a random symbol."""
    return {"seed": int(seed), "band_fraction": float(band_fraction), "envelope_decay": float(envelope_decay),
            "grid": grid.to_dict(), "generator": GENERATOR}


def symbol_from_manifest(manifest: dict) -> SampledFunction:
    allowed = {"seed", "band_fraction", "envelope_decay", "grid", "generator"}
    extra = set(manifest) - allowed
    if extra:
        raise ShapeError(f"unknown manifest keys: {sorted(extra)}")
    for key in ("seed", "band_fraction", "envelope_decay", "grid"):
        if key not in manifest:
            raise ShapeError(f"manifest is missing key {key!r}")
    if manifest.get("generator", GENERATOR) != GENERATOR:
        raise ShapeError(f"unsupported generator {manifest['generator']!r}")
    grid = GridSpec.from_dict(manifest["grid"])
    return random_symbol(int(manifest["seed"]), float(manifest["band_fraction"]),
                         float(manifest["envelope_decay"]), grid)
