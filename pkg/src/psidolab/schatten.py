"""Singular values, Schatten norms and empirical bound reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericalError
from .grid import GridSpec, SampledFunction, lp_norm
from .quantize import kernel_from_symbol
from .symclass import SeminormSpec, bessel_smooth, default_orders, seminorm, sobolev_norm

__all__ = [
    "SchattenReport",
    "BoundParams",
    "BoundRecord",
    "singular_values",
    "schatten_norm",
    "norm_from_singular_values",
    "schatten_report",
    "bound_report",
    "bound_reports",
    "hypothesis_norm",
    "tau_continuity_report",
    "records_to_json",
    "records_to_csv",
]

HYPOTHESES = ("seminorm", "sobolev", "smoothed")


def singular_values(K) -> np.ndarray:
    """Descending singular values of the weighted matrix ``h**n K``."""
    M = K.matrix if hasattr(K, "matrix") else np.asarray(K)
    if not np.all(np.isfinite(M)):
        raise NumericalError("kernel contains non-finite entries")
    try:
        s = scipy.linalg.svdvals(M)
    except (np.linalg.LinAlgError, ValueError):
        try:
            s = scipy.linalg.svd(M, compute_uv=False, lapack_driver="gesvd")
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalError(f"SVD did not converge: {exc}") from exc
    return np.sort(np.abs(s))[::-1]


def norm_from_singular_values(sv: np.ndarray, p: float) -> float:
    """``(sum s^p)^(1/p)``, or ``max s`` for ``p = inf``."""
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p!r}")
    if sv.size == 0:
        return 0.0
    top = float(sv[0])
    if math.isinf(p) or top == 0.0:
        return top
    return top * float(np.sum((sv / top) ** p)) ** (1.0 / p)


def schatten_norm(K, p: float) -> float:
    """Schatten ``p``-norm of the operator with kernel ``K``."""
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p!r}")
    return norm_from_singular_values(singular_values(K), p)


@dataclass
class SchattenReport:
    """Singular values and selected Schatten norms of one operator."""

    singular_values: np.ndarray
    norms: dict
    grid: GridSpec
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "singular_values": [float(v) for v in self.singular_values],
            "norms": {str(k): float(v) for k, v in self.norms.items()},
            "grid": self.grid.to_dict(),
            "metadata": dict(self.metadata),
        }


def schatten_report(K, ps: Sequence[float] = (1, 2, 4, math.inf), symbol_id: str = "", tau=None) -> SchattenReport:
    sv = singular_values(K)
    norms = {p: norm_from_singular_values(sv, p) for p in ps}
    return SchattenReport(sv, norms, K.grid, {"symbol_id": symbol_id, "tau": tau})


@dataclass(frozen=True)
class BoundParams:
    """Exponents for the right-hand sides of the boundedness theorems.

    Attributes
    ----------
    orders : tuple of int, optional
        Seminorm caps per block; default ``floor(n_j/2) + 1`` (doubled for
        ``tau != 0``). The maximum always includes the zeroth-order term.
    mu : float
        Interpolation exponent factor; the Sobolev order is
        ``mu * n * |1 - 2/p|`` (doubled for ``tau != 0``).
    sobolev_order : float, optional
        Explicit Sobolev order overriding the ``mu`` preset.
    t, s : float or tuple, optional
        Bessel smoothing exponents per block; default ``mu * n_j / 4``, with
        the doubled exponents used for ``tau != 0``.
    """

    orders: tuple[int, ...] | None = None
    mu: float = 1.01
    sobolev_order: float | None = None
    t: object = None
    s: object = None


@dataclass
class BoundRecord:
    symbol_id: str
    tau: float
    p: float
    hypothesis: str
    lhs: float
    rhs: float
    ratio: float
    grid: dict
    flagged: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p"] = "inf" if math.isinf(self.p) else self.p
        d["ratio"] = "inf" if math.isinf(self.ratio) else self.ratio
        return d


def hypothesis_norm(a: SampledFunction, tau: float, p: float, hypothesis: str, params: BoundParams | None = None) -> float:
    """Right-hand side quantity of the selected boundedness hypothesis."""
    prm = params or BoundParams()
    blocks = a.blocks
    if hypothesis == "seminorm":
        orders = prm.orders or default_orders(blocks, tau)
        return seminorm(a, SeminormSpec(p, orders))
    if hypothesis == "sobolev":
        if prm.sobolev_order is not None:
            order = prm.sobolev_order
        else:
            frac = 1.0 if math.isinf(p) else abs(1.0 - 2.0 / p)
            order = prm.mu * a.grid.dim * frac * (1.0 if tau == 0 else 2.0)
        return sobolev_norm(a, order, p)
    if hypothesis == "smoothed":
        t = prm.t if prm.t is not None else tuple(prm.mu * nb / 4.0 for nb in blocks)
        s = prm.s if prm.s is not None else tuple(prm.mu * nb / 4.0 for nb in blocks)
        if tau != 0:
            t = tuple(2.0 * v for v in np.atleast_1d(t))
            s = tuple(2.0 * v for v in np.atleast_1d(s))
        return lp_norm(bessel_smooth(a, t, s), p)
    raise DomainError(f"unknown hypothesis {hypothesis!r}; choose from {HYPOTHESES}")


def _record(symbol_id, tau, p, hypothesis, lhs, rhs, grid) -> BoundRecord:
    flagged = False
    if rhs == 0.0:
        ratio = 0.0 if lhs == 0.0 else math.inf
        flagged = lhs > 0.0
    else:
        ratio = lhs / rhs
    return BoundRecord(symbol_id, float(tau), float(p), hypothesis, float(lhs), float(rhs), float(ratio),
                       grid.to_dict(), flagged)


def bound_reports(a: SampledFunction, tau: float, ps: Sequence[float], hypotheses: Sequence[str],
                  params: BoundParams | None = None, symbol_id: str = "") -> list[BoundRecord]:
    """All ``(p, hypothesis)`` records for one symbol from a single SVD."""
    sv = singular_values(kernel_from_symbol(a, tau))
    out = []
    for hyp in hypotheses:
        for p in ps:
            lhs = norm_from_singular_values(sv, p)
            rhs = hypothesis_norm(a, tau, p, hyp, params)
            out.append(_record(symbol_id, tau, p, hyp, lhs, rhs, a.grid))
    return out


def bound_report(a: SampledFunction, tau: float, p: float, hypothesis: str, params: BoundParams | None = None,
                 symbol_id: str = "") -> BoundRecord:
    """Empirical constant ``||Op_tau(a)||_p / rhs`` for one boundedness hypothesis.

    ``hypothesis`` is ``"seminorm"`` (derivative seminorm ``|a|_{p,m}``),
    ``"sobolev"`` (``H^s_p`` norm) or ``"smoothed"`` (``L^p`` norm of the
    Bessel-smoothed symbol). ``p = inf`` uses the operator norm.
    """
    return bound_reports(a, tau, [p], [hypothesis], params, symbol_id)[0]


def tau_continuity_report(a: SampledFunction, taus: Sequence[float], p: float) -> list[dict]:
    """``||Op_tau(a) - Op_tau'(a)||_p`` for adjacent entries of ``taus``."""
    taus = list(taus)
    if len(taus) < 2:
        raise DomainError("need at least two tau values")
    kernels = [kernel_from_symbol(a, t) for t in taus]
    rows = []
    for (t0, K0), (t1, K1) in zip(zip(taus, kernels), zip(taus[1:], kernels[1:])):
        rows.append({"tau": float(t0), "tau_next": float(t1), "defect": schatten_norm(K1 - K0, p)})
    return rows


def records_to_json(records: Sequence[BoundRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], sort_keys=True, indent=1)


def records_to_csv(records: Sequence[BoundRecord]) -> str:
    buf = io.StringIO()
    cols = ["symbol_id", "tau", "p", "hypothesis", "lhs", "rhs", "ratio", "grid", "flagged"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        d = r.to_dict()
        g = d["grid"]
        d["grid"] = f"{g['dim']}x{g['samples_per_axis']}@{g['half_width']!r}"
        w.writerow([repr(d[c]) if isinstance(d[c], float) else d[c] for c in cols])
    return buf.getvalue()
