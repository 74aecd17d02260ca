import numpy as np
import pytest
from hypothesis import given, strategies as st

from circlaw import testfunc
from circlaw.errors import CapabilityError, DomainError, InvalidArgument

Z = np.array([0.3 + 0.4j, -0.2 + 0.1j, 0.9j])


@pytest.mark.parametrize("expr,fn", [
    ("Re z", lambda z: z.real),
    ("Im z", lambda z: z.imag),
    ("|z|^2", lambda z: np.abs(z) ** 2),
    ("z^2*zbar", lambda z: z ** 2 * np.conj(z)),
    ("(1+2i)*z - 3", lambda z: (1 + 2j) * z - 3),
    ("Re z^2", lambda z: (z ** 2).real),
    ("conj(z)**3", lambda z: np.conj(z) ** 3),
    ("2.5", lambda z: 2.5 + 0 * z),
])
def test_parse_values(expr, fn):
    assert np.allclose(testfunc.parse(expr)(Z), fn(Z))


def test_real_valued_detection():
    assert testfunc.parse("Re z").real_valued
    assert testfunc.parse("|z|^2").real_valued
    assert not testfunc.parse("z").real_valued


@pytest.mark.parametrize("bad", ["", "z +", "|z|", "sin(z)", "z^-1", "z^0.5", "w"])
def test_parse_errors(bad):
    with pytest.raises(InvalidArgument):
        testfunc.parse(bad)


def test_wirtinger_derivatives():
    f = testfunc.parse("z^2*zbar + 3*zbar")
    assert np.allclose(f.d(Z), 2 * Z * np.conj(Z))
    assert np.allclose(f.dbar(Z), Z ** 2 + 3)
    assert np.allclose(f.laplacian(Z), 8 * Z)


def test_bump_builtin():
    f = testfunc.parse("bump")
    assert f.support_radius == 0.8 and f.real_valued
    assert f(np.array([0j]))[0] == pytest.approx(1.0)
    assert f(np.array([0.85 + 0j]))[0] == 0
    # Laplacian against a centred five-point stencil
    h = 1e-4
    z = np.array([0.31 + 0.17j])
    lap = (f(z + h) + f(z - h) + f(z + 1j * h) + f(z - 1j * h) - 4 * f(z)) / h ** 2
    assert f.laplacian(z)[0] == pytest.approx(lap[0], rel=1e-5)
    g = testfunc.parse("bump:0.6")
    assert g.support_radius == 0.6


def test_blackbox_capabilities():
    f = testfunc.TestFunction("blackbox", value=lambda z: z, domain_radius=1.0)
    assert not f.has_derivatives
    with pytest.raises(CapabilityError):
        f.dbar(Z)
    with pytest.raises(DomainError):
        f(np.array([2.0 + 0j]))


def test_conj_and_describe():
    f = testfunc.parse("z^2*zbar")
    assert np.allclose(f.conj()(Z), np.conj(f(Z)))
    assert testfunc.monomial(1, 0).is_analytic
    assert testfunc.parse("7").is_constant


coef = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False).map(
    lambda c: complex(round(c.real, 3), round(c.imag, 3)))


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coef, max_size=4))
def test_format_parse_roundtrip(terms):
    f = testfunc.poly(terms)
    g = testfunc.parse(testfunc.format_poly(f.terms))
    assert np.allclose(f(Z), g(Z), atol=1e-9)
