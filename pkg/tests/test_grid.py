import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psidolab import (DomainError, GridSpec, NonFiniteError, SampledFunction, ShapeError, SpaceTag, TagError, X,
                      XSTAR, inner, lp_norm, phase_tag, sample)
from psidolab.grid import function_from_csv, function_to_csv, grid_from_json, grid_to_json, quadrature_weight


def test_sample_zero_function():
    f = sample(lambda x: 0.0, GridSpec(1, 16, 3.0), X)
    assert not np.any(f.values)


def test_sample_constant():
    f = sample(lambda x: 1.0, GridSpec(1, 4, 1.0), X)
    np.testing.assert_array_equal(f.values, [1, 1, 1, 1])


def test_sample_lattice_coordinates():
    f = sample(lambda x: x, GridSpec(1, 4, 1.0), X)
    np.testing.assert_array_equal(f.values.real, [-1.0, -0.5, 0.0, 0.5])


def test_sample_phase_orders_x_before_p():
    g = GridSpec(1, 4, 1.0)
    f = sample(lambda x, p: x + 10j * p, g, "Phase")
    np.testing.assert_array_equal(f.values.real[:, 0], g.axis())
    np.testing.assert_array_equal(f.values.imag[0, :], 10 * g.dual().axis())


def test_sample_rejects_nonfinite_and_names_point():
    with pytest.raises(NonFiniteError, match=r"\(0\.0,\)"):
        sample(lambda x: 1.0 / x, GridSpec(1, 8, 1.0), X)


@pytest.mark.parametrize("N, L", [(3, 1.0), (2, 1.0), (8, 0.0), (8, -1.0), (8, math.inf)])
def test_gridspec_rejects_bad_parameters(N, L):
    with pytest.raises(DomainError):
        GridSpec(1, N, L)


def test_space_tag_validation():
    with pytest.raises(TagError):
        SpaceTag("Y")
    with pytest.raises(ShapeError):
        phase_tag([1, 0])
    with pytest.raises(ShapeError):
        SampledFunction(phase_tag([1, 1]), GridSpec(1, 4, 1.0), np.zeros((4, 4)))


def test_shape_and_finiteness_checks():
    g = GridSpec(1, 8, 1.0)
    with pytest.raises(ShapeError):
        SampledFunction(X, g, np.zeros(7))
    with pytest.raises(NonFiniteError):
        SampledFunction(X, g, np.full(8, np.nan))


def test_values_are_read_only():
    f = sample(lambda x: x, GridSpec(1, 8, 1.0), X)
    with pytest.raises(ValueError):
        f.values[0] = 1.0


@pytest.mark.parametrize("N, L", [(4, 1.0), (16, 2.5), (64, 8.0), (10, 0.3)])
def test_dual_spacing_and_duality(N, L):
    g = GridSpec(1, N, L)
    d = g.dual()
    assert d.spacing == pytest.approx(math.pi / L, rel=1e-15)
    assert d.L == pytest.approx(N * math.pi / (2 * L), rel=1e-15)
    assert d.dual() == g
    assert d.dual() is g
    # a dual grid built from scratch returns the original up to rounding
    fresh = GridSpec(1, N, N * math.pi / (2 * L)).dual()
    assert fresh.N == N and fresh.L == pytest.approx(L, rel=1e-15)


def test_quadrature_weights():
    g = GridSpec(2, 8, 2.0)
    h = g.spacing
    assert quadrature_weight(X, g) == pytest.approx(h**2)
    assert quadrature_weight(XSTAR, g.dual()) == pytest.approx((g.dual_spacing / (2 * math.pi)) ** 2)
    assert quadrature_weight(phase_tag(), g) == pytest.approx((h * g.dual_spacing / (2 * math.pi)) ** 2)
    # phase weight is 1/N^n: the symplectic transform needs no extra constants
    assert quadrature_weight(phase_tag(), g) == pytest.approx(1 / 8**2)


def test_lp_norm_constant_integral():
    f = sample(lambda x: 1.0, GridSpec(1, 32, 1.0), X)
    assert lp_norm(f, 1) == pytest.approx(2.0, rel=1e-15)


def test_lp_norm_gaussian_against_analytic_integral():
    # int exp(-2x^2) dx = sqrt(pi/2)
    f = sample(lambda x: np.exp(-x**2), GridSpec(1, 256, 10.0), X)
    assert abs(lp_norm(f, 2) - (math.pi / 2) ** 0.25) < 1e-6


def test_lp_norm_sup_and_domain(rng):
    vals = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    f = SampledFunction(X, GridSpec(1, 16, 2.0), vals)
    assert lp_norm(f, math.inf) == np.abs(vals).max()
    with pytest.raises(DomainError):
        lp_norm(f, 0.5)


def test_lp_norm_general_p_matches_definition(rng):
    g = GridSpec(2, 8, 1.5)
    f = SampledFunction(X, g, rng.standard_normal((8, 8)))
    for p in (1.5, 3.0, 7.0):
        ref = (g.spacing**2 * np.sum(np.abs(f.values) ** p)) ** (1 / p)
        assert lp_norm(f, p) == pytest.approx(ref, rel=1e-13)


def test_inner_product_identities(rng):
    g = GridSpec(1, 32, 4.0)
    f = SampledFunction(X, g, rng.standard_normal(32) + 1j * rng.standard_normal(32))
    h = SampledFunction(X, g, rng.standard_normal(32) + 1j * rng.standard_normal(32))
    assert inner(f, f).real == pytest.approx(lp_norm(f, 2) ** 2, rel=1e-14)
    assert abs(inner(f, f).imag) < 1e-14
    assert inner(f, h) == pytest.approx(np.conj(inner(h, f)), rel=1e-14)
    # antilinear in the first slot
    assert inner(2j * f, h) == pytest.approx(-2j * inner(f, h), rel=1e-14)


def test_inner_disjoint_bumps_orthogonal():
    g = GridSpec(1, 16, 2.0)
    x = g.axis()
    f = SampledFunction(X, g, (x < -0.5).astype(float))
    h = SampledFunction(X, g, (x > 0.5).astype(float))
    assert inner(f, h) == 0


def test_inner_mismatched_grids():
    with pytest.raises(ShapeError):
        inner(sample(lambda x: x, GridSpec(1, 8, 1.0), X), sample(lambda x: x, GridSpec(1, 8, 2.0), X))


def test_grid_json_and_function_csv_roundtrip(rng):
    g = GridSpec(2, 4, 1.25)
    assert grid_from_json(grid_to_json(g)) == g
    assert json.loads(grid_to_json(g)) == {"dim": 2, "samples_per_axis": 4, "half_width": 1.25}
    f = SampledFunction(phase_tag(), g, rng.standard_normal((4,) * 4) + 1j * rng.standard_normal((4,) * 4))
    back = function_from_csv(function_to_csv(f), g, "Phase")
    np.testing.assert_array_equal(back.values, f.values)


def test_grid_from_dict_rejects_unknown_keys():
    with pytest.raises(ShapeError):
        GridSpec.from_dict({"dim": 1, "samples_per_axis": 8, "half_width": 1.0, "extra": 0})


_vectors = st.lists(st.floats(-1e3, 1e3), min_size=16, max_size=16)
# scale parts near the subnormal range underflow when raised to the p-th power
_scales = st.one_of(st.just(0.0), st.floats(1e-6, 50), st.floats(-50, -1e-6))


@given(_vectors, _vectors, _scales, _scales, st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]))
def test_norm_homogeneity(re, im, cr, ci, p):
    f = SampledFunction(X, GridSpec(1, 16, 2.0), np.array(re) + 1j * np.array(im))
    c = complex(cr, ci)
    assert lp_norm(c * f, p) == pytest.approx(abs(c) * lp_norm(f, p), rel=1e-12, abs=1e-300)


@given(_vectors, _vectors, st.floats(1.01, 20.0))
def test_holder_inequality(a, b, p):
    g = GridSpec(1, 16, 2.0)
    f, h = SampledFunction(X, g, a), SampledFunction(X, g, b)
    q = p / (p - 1)
    assert abs(inner(f, h)) <= lp_norm(f, p) * lp_norm(h, q) * (1 + 1e-12) + 1e-300


@given(_vectors, _vectors)
def test_holder_endpoint(a, b):
    g = GridSpec(1, 16, 2.0)
    f, h = SampledFunction(X, g, a), SampledFunction(X, g, b)
    assert abs(inner(f, h)) <= lp_norm(f, 1) * lp_norm(h, math.inf) * (1 + 1e-12) + 1e-300
