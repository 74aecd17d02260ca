import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from circlaw import kernels
from circlaw.errors import InvalidArgument, InvalidDimension, UnsupportedEnsemble
from circlaw.kernels import EnsembleSpec, ProjectionKernel


def test_radial_moments():
    assert kernels.radial_moment_exact("ginibre", 7, 0) == 1
    assert kernels.radial_moment_exact("ginibre", 7, 2) == Fraction(1, 7)
    assert kernels.radial_moment_exact("bergman", 7, 6) == Fraction(1, 4)
    assert kernels.radial_moment_exact("unitary", 7, 10) == 1
    assert kernels.radial_moment("ginibre", 5, 4) == pytest.approx(math.log(2 / 25))
    assert math.copysign(1, kernels.radial_moment("bergman", 3, 0)) == 1


def test_radial_moment_bad_order():
    with pytest.raises(InvalidArgument):
        kernels.radial_moment("ginibre", 3, 3)
    with pytest.raises(UnsupportedEnsemble):
        kernels.radial_moment("iid_disk", 3, 2)


def test_spec_validation():
    with pytest.raises(UnsupportedEnsemble):
        EnsembleSpec("gue", 3)
    with pytest.raises(InvalidDimension):
        EnsembleSpec("ginibre", 0)


def test_moment_table_json():
    rec = json.loads(kernels.RadialMomentTable.build("bergman", 4, 3).to_json())
    assert rec["schema"] == 1
    assert np.allclose(np.exp(rec["log_M_even"]), [1, 1 / 2, 1 / 3, 1 / 4])


@pytest.mark.parametrize("family,n", [("ginibre", 1), ("ginibre", 128), ("bergman", 32)])
def test_density_mass(family, n):
    val, tail = kernels.density_mass(family, n)
    assert abs(val + tail - 1) < 1e-10


def test_density_at_origin():
    assert np.pi * kernels.kernel_diag_density("ginibre", 50, 0) == pytest.approx(1.0, abs=1e-12)
    # only the constant mode survives at 0: K(0, 0) / (n pi) for the uniform reference
    assert np.pi * kernels.kernel_diag_density("bergman", 50, 0) == pytest.approx(1 / 50)


def test_density_edge_half():
    v = np.pi * kernels.kernel_diag_density("ginibre", 400, 1.0)
    assert 0.45 < v < 0.55


def test_ginibre_density_matches_gamma_tail():
    n = 30
    r = np.linspace(0, 1.6, 17)
    expect = special.gammaincc(n, n * r ** 2) / np.pi
    assert np.allclose(kernels.kernel_diag_density("ginibre", n, r), expect, rtol=1e-10)


def test_reproducing_kernel_diagonal():
    spec = EnsembleSpec("ginibre", 9)
    K = ProjectionKernel(spec)
    z = np.array([0.3 + 0.2j, -0.7j])
    # K(z, z) dmu = n * density
    mu = 9 / np.pi * np.exp(-9 * np.abs(z) ** 2)
    assert np.allclose(np.real(K(z, z)) * mu / 9, kernels.kernel_diag_density("ginibre", 9, z))
    assert np.allclose(np.exp(K.log_diag(z)), np.real(K(z, z)))
    u = K.unit_features(z)
    assert np.allclose(np.linalg.norm(u, axis=1), 1)


@given(st.sampled_from(["ginibre", "bergman", "unitary"]), st.integers(-5, 5),
       st.lists(st.integers(3, 40), min_size=1, max_size=4))
def test_moment_condition_closed_forms(family, m, ns):
    got = kernels.check_moment_condition(family, m, ns)
    for n, g in zip(ns, got):
        if family == "ginibre":
            expect = Fraction(math.factorial(n + m), math.factorial(n) * n ** m) if m >= 0 \
                else Fraction(math.factorial(n + m) * n ** (-m), math.factorial(n))
        elif family == "bergman":
            expect = Fraction(n + 1, n + m + 1)
        else:
            expect = Fraction(1)
        assert g == expect


def test_moment_condition_negative_order():
    with pytest.raises(InvalidArgument):
        kernels.check_moment_condition("bergman", -5, [2])
