"""One test per acceptance criterion, each at its stated tolerance.

Every test prints a ``criterion N: PASS/FAIL`` line (run with ``-s`` to see
them inline); the same lines are repeated in the terminal summary. Advisory
refinement-trend checks are required to pass here even though the command
line runner only records them.
"""

import math
from functools import lru_cache

import pytest
from conftest import ACCEPTANCE_LINES

from psidolab.suites import run_suite


@lru_cache(maxsize=None)
def _suite(name):
    return {c.name: c for c in run_suite(name)}


def _select(suite, key):
    # a trailing underscore selects every check with that prefix
    if key.endswith("_"):
        checks = [c for name, c in _suite(suite).items() if name.startswith(key)]
    else:
        checks = [_suite(suite)[key]] if key in _suite(suite) else []
    assert checks, f"no {suite} check matching {key}"
    return checks


def _criterion(number, title, wanted):
    """``wanted``: (suite, check name or ``prefix_``, expected threshold or None)."""
    checks, problems = [], []
    for suite, prefix, threshold in wanted:
        for c in _select(suite, prefix):
            checks.append(c)
            if threshold is not None and c.threshold != threshold:
                problems.append(f"{c.name} threshold {c.threshold!r} != {threshold!r}")
            if not c.passed:
                problems.append(f"{c.name}={c.value!r} vs {c.threshold!r}")
    status = "PASS" if not problems else "FAIL"
    worst = "; ".join(problems) if problems else ", ".join(f"{c.name}={_short(c.value)}" for c in checks[:4])
    if len(checks) > 4 and not problems:
        worst += f", ... ({len(checks)} checks)"
    line = f"criterion {number:2d} [{title}]: {status} ({worst})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not problems, line


def _short(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_short(x)}" for k, x in v.items()) + "}"
    return repr(v)


def test_criterion_01_weyl_composition():
    _criterion(1, "Weyl composition law", [("weyl", "composition_on_lattice", 1e-12),
                                           ("weyl", "composition_off_lattice", 1e-8)])
    assert _suite("weyl")["composition_on_lattice"].detail["pairs"] == 50


def test_criterion_02_symplectic_fourier():
    _criterion(2, "symplectic Fourier", [("weyl", "symplectic_fourier_involution", 1e-12),
                                         ("weyl", "symplectic_fourier_unitarity", 1e-12)])


def test_criterion_03_parseval():
    _criterion(3, "Parseval lemma", [("weyl", "parseval_defect", 1e-2), ("weyl", "parseval_refinement", None)])
    coarse = _suite("weyl")["parseval_defect"].detail["grid"]
    fine = _suite("weyl")["parseval_refinement"].detail["grid"]
    assert (coarse["samples_per_axis"], coarse["half_width"]) == (64, 8.0)
    assert (fine["samples_per_axis"], fine["half_width"]) == (128, pytest.approx(8 * math.sqrt(2)))


def test_criterion_04_roundtrip():
    _criterion(4, "quantization roundtrip", [("quantize", "roundtrip", 1e-10)])
    assert _suite("quantize")["roundtrip"].detail["taus"] == [0.0, 0.25, 0.5, 1.0]


def test_criterion_05_tau_conversion():
    _criterion(5, "tau conversion", [("quantize", "convert_tau_kernel", 1e-8),
                                     ("quantize", "multiplication_tau_invariance", 1e-10)])


def test_criterion_06_hilbert_schmidt():
    _criterion(6, "Hilbert-Schmidt isometry", [("quantize", "hilbert_schmidt_isometry", 1e-6),
                                               ("quantize", "hilbert_schmidt_tau_spread", 1e-10)])


def test_criterion_07_kato_averaging():
    _criterion(7, "Kato averaging", [("kato", "kato_identity", 5e-2), ("kato", "kato_identity_refinement", None),
                                     ("kato", "kato_positivity", -1e-10)])
    assert _suite("kato")["kato_identity"].detail["N"] == 32


def test_criterion_08_kato_synthesis():
    _criterion(8, "Kato synthesis", [("kato", "synthesis_tau0", 5e-2), ("kato", "synthesis_tau0.5", 5e-2),
                                     ("kato", "synthesis_tau0_refinement", None),
                                     ("kato", "synthesis_tau0.5_refinement", None)])
    assert _suite("kato")["synthesis_tau0"].detail["N"] == 32


def test_criterion_09_dominance():
    _criterion(9, "dominance calculus", [("kato", "dominance_polar", 1e-12), ("kato", "dominance_sum", 1e-12)])


def test_criterion_10_schatten_sweeps():
    _criterion(10, "Schatten bound sweeps", [("schatten", "spread_", 10.0), ("schatten", "refinement_", 0.2),
                                             ("schatten", "hs_seminorm_ratio_", 1 + 1e-6)])
    ps = {name.rsplit("_p", 1)[1] for name in _suite("schatten") if name.startswith("spread_")}
    assert ps == {"1", "2", "4", "inf"}


def test_criterion_11_tau_continuity():
    _criterion(11, "tau continuity", [("quantize", "tau_continuity_halving", None)])


def test_criterion_12_bessel_kernels():
    _criterion(12, "Bessel kernels", [("bessel", "unit_mass", 1e-8), ("bessel", "bessel2_exponential_pair", 1e-3)])


def test_criterion_13_cordes_trace_probe():
    _criterion(13, "Cordes trace probe", [("bessel", "trace_probe_tau0", 0.1), ("bessel", "trace_probe_tau0.5", 0.1)])


def test_criterion_14_multiplier_suite():
    _criterion(14, "multiplier suite", [("multiplier", "partition_of_unity", 1e-3),
                                        ("multiplier", "dyadic_reconstruction", 1e-3),
                                        ("multiplier", "support_annulus", 0.0),
                                        ("multiplier", "l1_cauchy", None),
                                        ("multiplier", "probe_p1_vs_l1", 1e-3),
                                        ("multiplier", "probe_p2_vs_sup", 1e-6),
                                        ("multiplier", "tcp5_factorization", 1e-8)])
    assert _suite("multiplier")["partition_of_unity"].detail["nodes"] == 64
    assert len(_suite("multiplier")["l1_cauchy"].value) == 3
