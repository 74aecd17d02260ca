import numpy as np
import pytest
from hypothesis import given, strategies as st

from circlaw import backend, eigensolver
from circlaw.errors import InvalidArgument, NonConvergence
from oracles import charpoly, cubic_roots, match_roots, quartic_roots

BACKENDS = backend.available()


def _random(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


@pytest.mark.parametrize("kernel", BACKENDS)
def test_one_by_one(kernel):
    assert eigensolver.eigvals([[2 - 3j]], kernel=kernel)[0] == 2 - 3j


@pytest.mark.parametrize("kernel", BACKENDS)
def test_hessenberg_shape_and_similarity(kernel):
    A = _random(12, 0)
    H = eigensolver.hessenberg_reduce(A, kernel)
    assert np.all(np.tril(H, -2) == 0)
    assert abs(np.trace(H) - np.trace(A)) <= 1e-12 * 12 * np.abs(A).max()
    assert abs(np.linalg.norm(H) - np.linalg.norm(A)) <= 1e-12 * 12 * np.linalg.norm(A)


@pytest.mark.parametrize("kernel", BACKENDS)
def test_upper_triangular_spectrum(kernel):
    A = np.triu(_random(6, 1))
    ev = eigensolver.eigvals(A, kernel=kernel)
    assert match_roots(ev, np.diag(A)) < 1e-12


@pytest.mark.parametrize("kernel", BACKENDS)
def test_diagonal(kernel):
    d = np.array([3, -1j, 0.5, 2 + 2j])
    assert match_roots(eigensolver.eigvals(np.diag(d), kernel=kernel), d) < 1e-14


@pytest.mark.parametrize("kernel", BACKENDS)
def test_companion_z2_minus_1(kernel):
    C = np.array([[0, 1], [1, 0]], dtype=complex)
    ev = eigensolver.eigvals(C, kernel=kernel)
    assert match_roots(ev, [1, -1]) < 1e-12


@pytest.mark.parametrize("kernel", BACKENDS)
@pytest.mark.parametrize("seed", range(10))
def test_cubic_oracle(kernel, seed):
    A = _random(3, 100 + seed)
    ev = eigensolver.eigvals(A, kernel=kernel)
    assert match_roots(ev, cubic_roots(*charpoly(A))) < 1e-9


@pytest.mark.parametrize("kernel", BACKENDS)
@pytest.mark.parametrize("seed", range(10))
def test_quartic_oracle(kernel, seed):
    A = _random(4, 200 + seed)
    ev = eigensolver.eigvals(A, kernel=kernel)
    assert match_roots(ev, quartic_roots(*charpoly(A))) < 1e-8


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("compiled core not built")
    A = _random(40, 3)
    e1 = eigensolver.eigvals(A, kernel="cython")
    e2 = eigensolver.eigvals(A, kernel="python")
    assert match_roots(e1, e2) < 1e-10


def test_nonconvergence_reports_partial_spectrum():
    A = _random(20, 4)
    H = eigensolver.hessenberg_reduce(A)
    with pytest.raises(NonConvergence) as info:
        eigensolver.qr_eigenvalues(H, max_sweeps=3)
    err = info.value
    assert err.remaining + len(err.partial) == 20
    assert err.remaining > 0


def test_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        eigensolver.eigvals(np.ones((2, 3)))
    with pytest.raises(InvalidArgument):
        eigensolver.eigvals([[np.nan]])
    with pytest.raises(InvalidArgument):
        eigensolver.qr_eigenvalues(np.ones((3, 3)))


def test_backward_stability():
    A = _random(16, 5)
    rng = np.random.default_rng(6)
    E = 1e-12 * (rng.standard_normal(A.shape) + 1j * rng.standard_normal(A.shape))
    assert match_roots(eigensolver.eigvals(A), eigensolver.eigvals(A + E)) < 1e-6


@given(st.integers(1, 24), st.integers(0, 2 ** 32 - 1))
def test_trace_invariants(n, seed):
    A = _random(n, seed)
    lam = eigensolver.eigvals(A)
    scale = np.abs(A).max()
    assert abs(lam.sum() - np.trace(A)) <= 1e-8 * n * scale
    assert abs((lam ** 2).sum() - np.trace(A @ A)) <= 1e-8 * n * n * scale ** 2
    sign, logdet = np.linalg.slogdet(A)
    det = sign * np.exp(logdet)
    assert abs(np.prod(lam) - det) <= 1e-6 * abs(det)


def test_dump_matrix_csv(tmp_path):
    A = _random(3, 7)
    p = tmp_path / "a.csv"
    eigensolver.dump_matrix_csv(A, str(p))
    assert p.read_text().strip()
