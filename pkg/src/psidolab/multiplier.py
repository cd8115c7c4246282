"""Fourier multipliers on a product space R^{n1} x R^{n2}.

Mixed Bessel symbols, pointwise symbol-degree envelopes, the dyadic
decomposition ``1 = phi(xi) + int_1^inf psi(xi/t) dt/t`` and ``L^p`` probes of
the multiplier operators ``a(P) f = F^-1 [a F f]``.

Multiplier symbols are not periodic, so their derivatives are taken by
high-order central differences of the exact evaluator instead of spectrally.
Functions the multipliers act on live on an X grid of dimension ``n1 + n2``;
the symbol is sampled on its dual lattice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ShapeError
from .fourier import centered_dft, fourier_X, fourier_Xstar
from .grid import XSTAR, GridSpec, SampledFunction, X, lattice_coordinates, lp_norm, sample

__all__ = [
    "MixedSymbolSpec",
    "mixed_bessel_symbol",
    "bump",
    "bump_psi",
    "envelope_check",
    "log_nodes",
    "DyadicResult",
    "dyadic_decompose",
    "inverse_transform_l1",
    "apply_multiplier",
    "default_test_family",
    "multiplier_bound_probe",
    "tcp5_factor_check",
    "probe_stability",
    "pieces_to_csv",
    "STEP_SHARPNESS",
]


@dataclass(frozen=True)
class MixedSymbolSpec:
    """Symbol ``a(xi_1, xi_2)`` on ``R^{n1} x R^{n2}`` of degree ``(m1, m2)``.

    ``evaluator`` receives ``n1 + n2`` broadcast coordinate arrays, block 1
    first.
    """

    n1: int
    n2: int
    m1: float
    m2: float
    evaluator: Callable[..., np.ndarray]
    name: str = "symbol"
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.n1 + self.n2

    def envelope_order(self) -> int:
        """``M = 1 + max(0, m1 + n1, m2 + n2)`` rounded up to an integer."""
        return int(math.ceil(1 + max(0.0, self.m1 + self.n1, self.m2 + self.n2)))

    def __call__(self, *coords) -> np.ndarray:
        return np.asarray(self.evaluator(*coords), dtype=float)


def _bracket_sq(coords) -> np.ndarray:
    return 1.0 + sum(np.square(c) for c in coords)


def mixed_bessel_symbol(s1: float, s2: float, eps: float, n1: int = 1, n2: int = 1) -> MixedSymbolSpec:
    """``<xi_1>^{s1} <xi_2>^{s2} <(xi_1, xi_2)>^{-s1-s2-eps}`` of degree ``(-eps/2, -eps/2)``."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    if s1 < 0 or s2 < 0:
        raise DomainError("s1 and s2 must be nonnegative")

    def ev(*c):
        b1 = _bracket_sq(c[:n1])
        b2 = _bracket_sq(c[n1:])
        b = _bracket_sq(c)
        return b1 ** (s1 / 2) * b2 ** (s2 / 2) * b ** (-(s1 + s2 + eps) / 2)

    return MixedSymbolSpec(n1, n2, -eps / 2, -eps / 2, ev, "mixed_bessel",
                           {"s1": float(s1), "s2": float(s2), "eps": float(eps)})


# Cutoff phi(xi) = S(log2(2 / |xi|)) with the smooth step S(u) = f(u) / (f(u) + f(1-u)),
# f(u) = exp(-STEP_SHARPNESS / u) for u > 0: phi = 1 on |xi| <= 1 and 0 on |xi| >= 2.
# Stepping in log|xi| makes psi(xi e^-s) a fixed profile in s, which is what the
# t-quadrature integrates.
STEP_SHARPNESS = 1.5


def _f(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-STEP_SHARPNESS / u[pos])
    return out


def _fprime(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = STEP_SHARPNESS * np.exp(-STEP_SHARPNESS / u[pos]) / u[pos] ** 2
    return out


def _step(u):
    a, b = _f(u), _f(1.0 - np.asarray(u, dtype=float))
    return a / (a + b)


def _step_prime(u):
    u = np.asarray(u, dtype=float)
    a, b = _f(u), _f(1.0 - u)
    da, db = _fprime(u), _fprime(1.0 - u)
    return (da * b + a * db) / (a + b) ** 2


def _radius(coords) -> np.ndarray:
    return np.sqrt(sum(np.square(c) for c in coords))


def _log_arg(r):
    with np.errstate(divide="ignore"):
        return np.log2(2.0 / r)


def bump(*coords) -> np.ndarray:
    """Radial cutoff equal to 1 on the unit ball and 0 outside radius 2."""
    return _step(_log_arg(_radius(coords)))


def bump_psi(*coords) -> np.ndarray:
    """``psi(xi) = -xi . grad phi(xi)``; supported in ``1 <= |xi| <= 2``."""
    return _step_prime(_log_arg(_radius(coords))) / math.log(2.0)


def _fd_weights(order: int, half: int) -> np.ndarray:
    # central-difference weights on offsets -half..half for d^order/dx^order
    offs = np.arange(-half, half + 1, dtype=float)
    V = np.vander(offs, increasing=True).T
    rhs = np.zeros(offs.size)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(V, rhs)


def _derivative(spec: MixedSymbolSpec, coords, orders, step: float, half: int = 4) -> np.ndarray:
    active = [(d, k) for d, k in enumerate(orders) if k > 0]
    if not active:
        return spec(*coords)
    weights = [_fd_weights(k, half) for _, k in active]
    offs = range(-half, half + 1)
    out = np.zeros(np.broadcast(*coords).shape)
    for combo in itertools.product(range(2 * half + 1), repeat=len(active)):
        w = 1.0
        shifted = list(coords)
        for (d, _), j, wt in zip(active, combo, weights):
            w *= wt[j]
            shifted[d] = coords[d] + offs[j] * step
        if w != 0.0:
            out = out + w * spec(*shifted)
    return out / step ** sum(k for _, k in active)


def _multi_indices(n: int, max_order: int):
    return [m for m in itertools.product(range(max_order + 1), repeat=n) if sum(m) <= max_order]


def envelope_check(spec: MixedSymbolSpec, max_order: int, grid: GridSpec, step: float = 0.05) -> dict:
    """Empirical constants ``C_{alpha1, alpha2}`` of the symbol-degree envelope.

    ``grid`` is a lattice of dimension ``n1 + n2`` whose points are used
    directly as frequencies. For every pair with ``|alpha_j| <= max_order``
    the result maps ``(alpha1, alpha2)`` to
    ``max |d^alpha a| / (<xi_1>^{m1-|alpha1|} <xi_2>^{m2-|alpha2|})``.
    """
    if grid.dim != spec.dim:
        raise ShapeError(f"grid dimension {grid.dim} does not match symbol dimension {spec.dim}")
    coords = np.meshgrid(*([grid.axis()] * grid.dim), indexing="ij")
    b1 = np.sqrt(_bracket_sq(coords[:spec.n1]))
    b2 = np.sqrt(_bracket_sq(coords[spec.n1:]))
    out = {}
    for a1 in _multi_indices(spec.n1, max_order):
        for a2 in _multi_indices(spec.n2, max_order):
            der = _derivative(spec, coords, a1 + a2, step)
            env = b1 ** (spec.m1 - sum(a1)) * b2 ** (spec.m2 - sum(a2))
            out[(a1, a2)] = float(np.max(np.abs(der) / env))
    return out


def _end_corrections(count: int, order: int) -> np.ndarray:
    # weight corrections on the first and last `order` nodes making the rule
    # exact for polynomials of degree < 2 * order
    x = np.arange(count, dtype=float) / (count - 1)
    idx = list(range(order)) + list(range(count - order, count))
    A = np.array([[x[j] ** q for j in idx] for q in range(2 * order)])
    b = np.array([(count - 1) / (q + 1) - np.sum(x**q) for q in range(2 * order)])
    return np.linalg.solve(A, b)


def log_nodes(t_max: float, count: int = 64, rule: str = "corrected", order: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Log-uniform nodes on ``[1, t_max]`` and weights for ``int f(t) dt/t``.

    ``rule="left"`` uses plain left-endpoint weights ``d log t``. Its error is
    about ``d log t * psi(xi) / 2`` because ``psi(xi/t)`` jumps at ``t = 1``.
    The default ``"corrected"`` adjusts the ``order`` weights at each end so
    the rule integrates polynomials of degree ``< 2 * order`` exactly.
    """
    if count < 4 * order:
        raise DomainError(f"need at least {4 * order} nodes")
    t_max = max(float(t_max), 2.0)
    s = np.linspace(0.0, math.log(t_max), count)
    ds = s[1] - s[0]
    w = np.full(count, ds)
    if rule == "left":
        w[-1] = 0.0
    elif rule == "corrected":
        c = _end_corrections(count, order)
        w[:order] += ds * c[:order]
        w[-order:] += ds * c[order:]
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return np.exp(s), w


@dataclass
class DyadicResult:
    """Output of :func:`dyadic_decompose`.

    Attributes
    ----------
    nodes1, nodes2, weights1, weights2 : ndarray
        ``t``-quadrature per block.
    pieces : dict
        ``"base"`` -> ``a_0`` on the reference lattice; ``"psi_phi"`` and
        ``"phi_psi"`` -> arrays indexed by node; ``"psi_psi"`` -> arrays
        indexed by node pairs. All pieces are rescaled to unit frequency.
    reference : GridSpec
        Lattice the rescaled pieces are sampled on.
    reconstruction_defect : float
        ``max |a_reconstructed - a|`` over the input lattice.
    partition_defect : float
        ``max |phi + sum w psi(xi/t) - 1|`` over both blocks.
    support_violation : float
        Largest ``|piece|`` outside the annulus ``1 <= |eta_j| <= 2``; zero by
        construction.
    seminorms : ndarray
        Schwartz seminorm of every ``psi_psi`` piece.
    advisory : str or None
        Set when the reconstruction defect exceeds the requested tolerance.
    """

    nodes1: np.ndarray
    nodes2: np.ndarray
    weights1: np.ndarray
    weights2: np.ndarray
    pieces: dict
    reference: GridSpec
    reconstruction_defect: float
    partition_defect: float
    support_violation: float
    seminorms: np.ndarray
    advisory: str | None = None


def _block_radius(coords, lo, hi):
    return _radius(coords[lo:hi])


def _schwartz_seminorm(values: np.ndarray, ref: GridSpec, weight_order: int = 2) -> float:
    # max over |alpha| <= 1 of sup <eta>^k |d^alpha f| via spectral derivatives
    coords = np.meshgrid(*([ref.axis()] * ref.dim), indexing="ij")
    w = _bracket_sq(coords) ** (weight_order / 2)
    best = float(np.max(w * np.abs(values)))
    spec = centered_dft(values, range(values.ndim), -1)
    k = ref.dual().axis()
    for ax in range(values.ndim):
        shape = [1] * values.ndim
        shape[ax] = -1
        fac = (1j * k).copy()
        fac[0] = 0.0
        der = centered_dft(spec * fac.reshape(shape), range(values.ndim), +1) / values.size
        best = max(best, float(np.max(w * np.abs(der))))
    return best


def dyadic_decompose(spec: MixedSymbolSpec, t_nodes: int, grid: GridSpec, tol: float = 1e-3,
                     rule: str = "corrected", reference: GridSpec | None = None) -> DyadicResult:
    """Dyadic decomposition of ``a`` and its quadrature reconstruction.

    ``grid`` (dimension ``n1 + n2``) supplies the frequencies on which the
    reconstruction is compared with ``a``. Pieces are rescaled to unit
    frequency, ``(psi_1 (x) psi_2) a_{t1,t2}`` with
    ``a_{t1,t2}(eta) = t1^-m1 t2^-m2 a(t1 eta_1, t2 eta_2)``, and sampled on
    ``reference``.
    """
    if grid.dim != spec.dim:
        raise ShapeError("grid dimension does not match the symbol")
    n1, n2 = spec.n1, spec.n2
    coords = np.meshgrid(*([grid.axis()] * grid.dim), indexing="ij")
    r1 = _block_radius(coords, 0, n1)
    r2 = _block_radius(coords, n1, n1 + n2)
    t1, w1 = log_nodes(float(r1.max()), t_nodes, rule)
    t2, w2 = log_nodes(float(r2.max()), t_nodes, rule)

    def partition(block_coords, t, w):
        total = bump(*block_coords)
        for tk, wk in zip(t, w):
            total = total + wk * bump_psi(*[c / tk for c in block_coords])
        return total

    P1 = partition(coords[:n1], t1, w1)
    P2 = partition(coords[n1:], t2, w2)
    a = spec(*coords)
    recon = a * P1 * P2
    rec_defect = float(np.max(np.abs(recon - a)))
    part_defect = float(max(np.max(np.abs(P1 - 1)), np.max(np.abs(P2 - 1))))

    ref = reference or GridSpec(spec.dim, 32, 2.5)
    rc = np.meshgrid(*([ref.axis()] * ref.dim), indexing="ij")
    phi1, phi2 = bump(*rc[:n1]), bump(*rc[n1:])
    psi1, psi2 = bump_psi(*rc[:n1]), bump_psi(*rc[n1:])
    q1 = _block_radius(rc, 0, n1)
    q2 = _block_radius(rc, n1, n1 + n2)
    outside1 = (q1 < 1) | (q1 > 2)
    outside2 = (q2 < 1) | (q2 > 2)

    def scaled(s1, s2):
        sc = [c * s1 for c in rc[:n1]] + [c * s2 for c in rc[n1:]]
        return s1 ** (-spec.m1) * s2 ** (-spec.m2) * spec(*sc)

    base = phi1 * phi2 * spec(*rc)
    psi_phi = np.stack([psi1 * phi2 * scaled(tk, 1.0) for tk in t1])
    phi_psi = np.stack([phi1 * psi2 * scaled(1.0, tk) for tk in t2])
    psi_psi = np.empty((t1.size, t2.size) + rc[0].shape)
    for i, ti in enumerate(t1):
        for j, tj in enumerate(t2):
            psi_psi[i, j] = psi1 * psi2 * scaled(ti, tj)
    violation = max(float(np.abs(psi_phi[:, outside1]).max(initial=0.0)),
                    float(np.abs(phi_psi[:, outside2]).max(initial=0.0)),
                    float(np.abs(psi_psi[:, :, outside1 | outside2]).max(initial=0.0)))
    semis = np.array([[_schwartz_seminorm(psi_psi[i, j], ref) for j in range(t2.size)] for i in range(t1.size)])
    advisory = None
    if rec_defect > tol:
        advisory = f"t-quadrature too coarse: reconstruction defect {rec_defect:.3e} > {tol:.1e}"
    return DyadicResult(t1, t2, w1, w2, {"base": base, "psi_phi": psi_phi, "phi_psi": phi_psi, "psi_psi": psi_psi},
                        ref, rec_defect, part_defect, violation, semis, advisory)


def _symbol_on_dual(spec: MixedSymbolSpec, grid: GridSpec) -> np.ndarray:
    return spec(*lattice_coordinates(grid.dual(), "Xstar"))


def inverse_transform_l1(spec: MixedSymbolSpec, refinements: Sequence[GridSpec],
                         envelope_orders: Sequence[int] = (1, 2)) -> dict:
    """``||F^-1 a||_{L^1}`` on each X grid, plus the off-axis envelope constants.

    Returns
    -------
    dict
        ``"l1"``: list of norms (``None`` entries in envelope-only mode),
        ``"envelope"``: per grid, ``{N: C_N}`` with ``C_N`` the largest ratio
        of ``|F^-1 a(x)|`` to
        ``<x1>^-N <x2>^-N (1 + |x1|^{-m1-n1})(1 + |x2|^{-m2-n2})`` over lattice
        points with ``x1 != 0`` and ``x2 != 0``, and ``"advisory"``.
    """
    advisory = None
    l1_mode = spec.m1 < 0 and spec.m2 < 0
    if not l1_mode:
        advisory = "degrees are not both negative: envelope-only mode, no L1 claim"
    l1, env = [], []
    for g in refinements:
        if g.dim != spec.dim:
            raise ShapeError("refinement grid dimension does not match the symbol")
        v = SampledFunction(XSTAR, g.dual(), _symbol_on_dual(spec, g))
        k = fourier_Xstar(v, "conjugate")
        l1.append(lp_norm(k, 1) if l1_mode else None)
        c = lattice_coordinates(g, "X")
        r1 = _radius(c[:spec.n1])
        r2 = _radius(c[spec.n1:])
        off = (r1 > 0) & (r2 > 0)
        sing = (1 + np.where(off, r1, 1.0) ** (-spec.m1 - spec.n1)) * (1 + np.where(off, r2, 1.0) ** (-spec.m2 - spec.n2))
        row = {}
        for Nn in envelope_orders:
            envl = (1 + r1**2) ** (-Nn / 2) * (1 + r2**2) ** (-Nn / 2) * sing
            row[int(Nn)] = float(np.max(np.abs(k.values)[off] / envl[off]))
        env.append(row)
    return {"l1": l1, "envelope": env, "advisory": advisory}


def apply_multiplier(symbol_values: np.ndarray, f: SampledFunction) -> SampledFunction:
    """``F^-1 [a F f]`` with ``a`` sampled on the dual lattice of ``f``."""
    fh = fourier_X(f)
    return fourier_Xstar(fh.with_values(fh.values * symbol_values), "conjugate")


def default_test_family(grid: GridSpec, seed: int = 0, count: int = 6) -> list[SampledFunction]:
    """Gaussians, smooth bumps and seeded band-limited random functions on ``grid``."""
    rng = np.random.default_rng(seed)
    L = grid.L
    fam = []
    for width in (0.5, 1.0, 2.0):
        c = rng.uniform(-L / 4, L / 4, grid.dim)
        fam.append(sample(lambda *x, c=c, w=width: np.exp(-sum((xi - ci) ** 2 for xi, ci in zip(x, c)) / (2 * w * w)),
                          grid, X))
    fam.append(sample(lambda *x: bump(*[xi / 2.0 for xi in x]), grid, X))
    for _ in range(max(0, count - 4)):
        spec = np.zeros((grid.N,) * grid.dim, dtype=complex)
        band = tuple(slice(grid.N // 2 - grid.N // 8, grid.N // 2 + grid.N // 8) for _ in range(grid.dim))
        spec[band] = rng.standard_normal(spec[band].shape) + 1j * rng.standard_normal(spec[band].shape)
        vals = centered_dft(spec, range(grid.dim), +1) / grid.size
        env = sample(lambda *x: np.exp(-sum(xi**2 for xi in x) / (2 * (L / 4) ** 2)), grid, X).values
        fam.append(SampledFunction(X, grid, vals * env))
    return fam


def _ratios(symbol_values: np.ndarray, family: Sequence[SampledFunction], p: float) -> list[float]:
    out = []
    for f in family:
        nf = lp_norm(f, p)
        if nf == 0:
            continue
        out.append(lp_norm(apply_multiplier(symbol_values, f), p) / nf)
    return out


def multiplier_bound_probe(spec: MixedSymbolSpec, p: float, test_family: Sequence[SampledFunction]) -> dict:
    """Ratios ``||a(P) f||_p / ||f||_p`` over a test family on one X grid.

    Returns ``ratios``, ``max_ratio``, ``sup_a`` (largest ``|a|`` on the dual
    lattice) and ``l1_bound`` (``||F^-1 a||_{L^1}`` on the same grid).
    """
    if not test_family:
        raise DomainError("empty test family")
    g = test_family[0].grid
    if any(f.grid != g for f in test_family) or g.dim != spec.dim:
        raise ShapeError("test functions must share one grid of the symbol's dimension")
    vals = _symbol_on_dual(spec, g)
    ratios = _ratios(vals, test_family, p)
    k = fourier_Xstar(SampledFunction(XSTAR, g.dual(), vals), "conjugate")
    return {"p": p, "ratios": ratios, "max_ratio": max(ratios), "sup_a": float(np.abs(vals).max()),
            "l1_bound": lp_norm(k, 1), "grid": g.to_dict()}


def _tcp5_factor(blocks: Sequence[int], l: int, s_l: float, eps: float) -> Callable:
    k = len(blocks)
    lo = sum(blocks[:l])
    hi = lo + blocks[l]

    def ev(*c):
        return _bracket_sq(c[lo:hi]) ** (s_l / 2) * _bracket_sq(c) ** (-(s_l + eps / k) / 2)

    return ev


def tcp5_factor_check(s: Sequence[float], eps: float, p: float, test_family: Sequence[SampledFunction],
                      blocks: Sequence[int] | None = None) -> dict:
    """Probe the factorization ``T_1 ... T_k`` of the mixed Bessel multiplier.

    ``T_l`` has symbol ``<xi_l>^{s_l} <xi>^{-s_l - eps/k}``, so the product has
    symbol ``prod_l <xi_l>^{s_l} <xi>^{-sum s - eps}``.

    Returns
    -------
    dict
        ``factor_max`` (max ratio per factor), ``composed_max``,
        ``direct_max`` (the product symbol applied at once) and
        ``composition_defect`` (largest relative gap between composing the
        factors and applying the product symbol). For ``k = 2`` the product is
        :func:`mixed_bessel_symbol`.
    """
    if not test_family:
        raise DomainError("empty test family")
    g = test_family[0].grid
    blocks = tuple(blocks) if blocks is not None else (1,) * g.dim
    k = len(blocks)
    if k < 2:
        raise DomainError("need at least two blocks")
    if sum(blocks) != g.dim:
        raise ShapeError("blocks do not match the grid dimension")
    s = tuple(float(v) for v in s)
    if len(s) != k:
        raise ShapeError("one exponent per block required")
    coords = lattice_coordinates(g.dual(), "Xstar")
    factors = [_tcp5_factor(blocks, l, s[l], eps)(*coords) for l in range(k)]
    if k == 2:
        direct = mixed_bessel_symbol(s[0], s[1], eps, blocks[0], blocks[1])(*coords)
    else:
        direct = np.prod(factors, axis=0)
    factor_max = [max(_ratios(fv, test_family, p)) for fv in factors]
    composed_max, direct_max, defect = 0.0, 0.0, 0.0
    for f in test_family:
        nf = lp_norm(f, p)
        if nf == 0:
            continue
        u = f
        for fv in factors:
            u = apply_multiplier(fv, u)
        v = apply_multiplier(direct, f)
        composed_max = max(composed_max, lp_norm(u, p) / nf)
        direct_max = max(direct_max, lp_norm(v, p) / nf)
        defect = max(defect, lp_norm(u - v, p) / max(lp_norm(v, p), 1e-300))
    return {"p": p, "factor_max": factor_max, "composed_max": composed_max, "direct_max": direct_max,
            "composition_defect": defect}


def probe_stability(spec: MixedSymbolSpec, p: float, grids: Sequence[GridSpec],
                    family: Callable[[GridSpec], Sequence[SampledFunction]] = default_test_family,
                    rtol: float = 0.2) -> dict:
    """Max probe ratio on each refinement grid and whether they agree within ``rtol``."""
    maxima = [multiplier_bound_probe(spec, p, family(g))["max_ratio"] for g in grids]
    ref = maxima[-1]
    stable = all(abs(m - ref) <= rtol * abs(ref) for m in maxima)
    return {"p": p, "max_ratios": maxima, "stable": stable}


def pieces_to_csv(result: DyadicResult) -> str:
    """One row per piece (node indices, scales, type, Schwartz seminorm), then the defects."""
    ref = result.reference
    lines = ["node1,node2,t1,t2,piece,value"]
    for i, t in enumerate(result.nodes1):
        lines.append(f"{i},,{float(t)!r},1.0,psi_phi,{_schwartz_seminorm(result.pieces['psi_phi'][i], ref)!r}")
    for j, t in enumerate(result.nodes2):
        lines.append(f",{j},1.0,{float(t)!r},phi_psi,{_schwartz_seminorm(result.pieces['phi_psi'][j], ref)!r}")
    for i, t1 in enumerate(result.nodes1):
        for j, t2 in enumerate(result.nodes2):
            lines.append(f"{i},{j},{float(t1)!r},{float(t2)!r},psi_psi,{float(result.seminorms[i, j])!r}")
    lines.append(f",,,,reconstruction_defect,{result.reconstruction_defect!r}")
    lines.append(f",,,,support_violation,{result.support_violation!r}")
    return "\n".join(lines) + "\n"
