import math
import warnings

import numpy as np
import pytest
from conftest import balanced
from hypothesis import given
from hypothesis import strategies as st

from psidolab import (DomainError, GridSpec, ShapeError, X, bessel_kernel, cordes_symbol, fourier_X, lp_norm, sample,
                      symbol_from_kernel, trace_class_probe)
from psidolab.bessel import (CORDES_BLOCK_FACTOR, assemble_blocks, check_cordes_exponents, cordes_threshold,
                             lattice_frequency)
from psidolab.quantize import rank_one_kernel


def _mass(f):
    return (f.values.sum() * f.grid.spacing**f.grid.dim).real


def _lattice_green(g):
    # periodic Green's function of (1 - Lap_h) with a unit-mass source: C (r^j + r^(N-j)) / (1 - r^N),
    # r the root below one of r + 1/r = 2 + h^2 and C = h / (1/r - r)
    h, N = g.spacing, g.N
    b = 2 + h * h
    r = (b - math.sqrt(b * b - 4)) / 2
    j = np.abs(g.integer_axis())
    return h / (1 / r - r) * (r**j + r ** (N - j)) / (1 - r**N)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.5])
@pytest.mark.parametrize("N, L", [(32, 4.0), (64, 8.0), (128, 6.0)])
def test_unit_mass(s, N, L):
    g = GridSpec(1, N, L)
    assert abs(_mass(bessel_kernel(s, g)) - 1) < 1e-12
    chi = bessel_kernel(s, g, "Xstar")
    assert abs(chi.values.sum().real * g.dual_spacing / (2 * math.pi) - 1) < 1e-12


@pytest.mark.parametrize("N, L", [(16, 3.0), (64, 8.0), (256, 16.0)])
def test_order_two_is_the_lattice_green_function(N, L):
    g = GridSpec(1, N, L)
    assert np.abs(bessel_kernel(2.0, g).values.real - _lattice_green(g)).max() < 1e-12


def test_order_two_against_exponential():
    g = GridSpec(1, 512, 16.0)
    x = g.axis()
    sel = (np.abs(x) >= 0.5) & (np.abs(x) <= 8.0)
    err = np.abs(bessel_kernel(2.0, g).values.real[sel] - 0.5 * np.exp(-np.abs(x[sel]))).max()
    assert err < 1e-3


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 4.0])
@pytest.mark.parametrize("N", [32, 64, 256])
def test_positive_and_decreasing_along_rays(s, N):
    g = balanced(1, N)
    v = bessel_kernel(s, g).values.real
    assert v.min() >= -1e-10
    c = N // 2
    right, left = v[c:], v[c::-1][: N // 2]
    assert np.all(np.diff(right) <= 1e-14) and np.all(np.diff(left) <= 1e-14)


def test_positive_in_two_dimensions():
    g = GridSpec(2, 32, 5.0)
    v = bessel_kernel(1.5, g).values.real
    assert v.min() >= -1e-10
    c = 16
    assert np.all(np.diff(v[c, c:]) <= 1e-14) and np.all(np.diff(np.diag(v)[c:]) <= 1e-14)


@pytest.mark.parametrize("s", [0.7, 2.0, 3.0])
def test_transform_inverts_the_bracket(s):
    g = GridSpec(1, 64, 6.0)
    p = g.dual().axis()
    br = np.sqrt(1 + lattice_frequency(p, g.spacing) ** 2)
    out = br**s * fourier_X(bessel_kernel(s, g)).values
    assert np.abs(out - 1).max() < 1e-12


def test_continuum_bracket_option():
    g = GridSpec(1, 64, 6.0)
    p = g.dual().axis()
    out = np.sqrt(1 + p**2) ** 2 * fourier_X(bessel_kernel(2.0, g, laplacian="continuum")).values
    assert np.abs(out - 1).max() < 1e-12
    with pytest.raises(ValueError):
        bessel_kernel(2.0, g, laplacian="spectral")


def test_lattice_frequency_low_mode_limit():
    p = np.linspace(-0.5, 0.5, 11)
    assert np.abs(lattice_frequency(p, 1e-4) - p).max() < 1e-8


def test_block_kernel_is_tensor_product():
    g = GridSpec(2, 16, 3.0)
    g1 = GridSpec(1, 16, 3.0)
    k = bessel_kernel([1.0, 2.5], g, blocks=(1, 1)).values
    ref = np.multiply.outer(bessel_kernel(1.0, g1).values, bessel_kernel(2.5, g1).values)
    assert np.abs(k - ref).max() < 1e-14
    with pytest.raises(ShapeError):
        bessel_kernel(1.0, g, blocks=(1,))


@pytest.mark.parametrize("s", [0.0, -1.0, math.nan])
def test_order_must_be_positive(s):
    with pytest.raises(DomainError):
        bessel_kernel(s, GridSpec(1, 8, 1.0))


def test_cordes_symbol_mass_and_symmetry():
    g = GridSpec(1, 32, 4.0)
    c = cordes_symbol(2.0, 3.0, g)
    assert abs(c.values.sum().real / g.N - 1) < 1e-12
    v = c.values.real
    # even in x and in p (index 0 is the unpaired Nyquist row)
    assert np.array_equal(v[1:, :], v[1:, :][::-1, :])
    assert np.array_equal(v[:, 1:], v[:, 1:][:, ::-1])
    assert v.min() >= -1e-12


def test_cordes_symbol_single_block_is_product():
    g = GridSpec(1, 16, 3.0)
    c = cordes_symbol(1.5, 2.5, g).values
    ref = np.multiply.outer(bessel_kernel(1.5, g).values, bessel_kernel(2.5, g, "Xstar").values)
    assert np.abs(c - ref).max() < 1e-15


def test_cordes_symbol_blocks_follow_x_first_layout():
    g = GridSpec(2, 8, 2.0)
    g1 = GridSpec(1, 8, 2.0)
    c = cordes_symbol([1.0, 2.0], [1.5, 3.0], g, decomposition=(1, 1)).values
    f1 = np.multiply.outer(bessel_kernel(1.0, g1).values, bessel_kernel(1.5, g1, "Xstar").values)
    f2 = np.multiply.outer(bessel_kernel(2.0, g1).values, bessel_kernel(3.0, g1, "Xstar").values)
    ref = np.einsum("ac,bd->abcd", f1, f2)
    assert np.abs(c - ref).max() < 1e-15
    np.testing.assert_array_equal(assemble_blocks([f1, f2], (1, 1)), c)


def test_thresholds_and_warning():
    assert cordes_threshold((3,), 0.0) == (1.5,)
    assert cordes_threshold((1, 2), 0.5) == (3.0,)
    assert cordes_threshold((1, 2), 0.0, block_form=True) == (2 * CORDES_BLOCK_FACTOR, 4 * CORDES_BLOCK_FACTOR)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_cordes_exponents(2.0, 2.0, (1,), 0.5)
    with pytest.warns(UserWarning, match="threshold"):
        assert not check_cordes_exponents(0.6, 2.0, (1,), 0.5)


def test_trace_probe_zero_symbol():
    g = balanced(1, 16)
    zero = cordes_symbol(2.0, 2.0, g) * 0
    assert trace_class_probe(zero, 0.5) == [0.0]


def test_trace_probe_rank_one_is_stable():
    # the Weyl symbol of a normalized Gaussian projection has trace norm one on every grid
    def wigner(gr):
        phi = sample(lambda x: np.exp(-x**2 / 2), gr, X)
        phi = phi * (1 / lp_norm(phi, 2))
        return symbol_from_kernel(rank_one_kernel(phi, phi), 0.5)

    sums = trace_class_probe(wigner, 0.5, [balanced(1, N) for N in (16, 32, 64)])
    assert max(abs(s - 1) for s in sums) < 1e-10


def test_trace_probe_cordes_symbol_is_bounded():
    sums = trace_class_probe(lambda gr: cordes_symbol(2.0, 2.0, gr), 0.0, [balanced(1, N) for N in (16, 32, 64)])
    assert all(0 < s < 10 for s in sums)
    assert max(abs(b - a) / a for a, b in zip(sums, sums[1:])) < 1e-2


def test_trace_probe_argument_errors():
    g = balanced(1, 16)
    c = cordes_symbol(2.0, 2.0, g)
    with pytest.raises(ShapeError):
        trace_class_probe(c, 0.0, [balanced(1, 32)])
    with pytest.raises(ShapeError):
        trace_class_probe(lambda gr: cordes_symbol(2.0, 2.0, gr), 0.0)


@given(st.floats(0.3, 5.0), st.integers(3, 7))
def test_mass_and_positivity_property(s, log_n):
    g = balanced(1, 2**log_n)
    k = bessel_kernel(s, g)
    assert abs(_mass(k) - 1) < 1e-12
    assert k.values.real.min() >= -1e-10


@given(st.floats(0.3, 4.0), st.floats(0.3, 4.0))
def test_orders_add_under_convolution(s1, s2):
    # the transforms multiply exactly, so psi_s1 * psi_s2 = psi_(s1 + s2) on the periodic lattice
    g = GridSpec(1, 32, 4.0)
    a, b = fourier_X(bessel_kernel(s1, g)).values, fourier_X(bessel_kernel(s2, g)).values
    assert np.abs(a * b - fourier_X(bessel_kernel(s1 + s2, g)).values).max() < 1e-12
