import io

import numpy as np
import pytest
from scipy import special

from circlaw import ensembles, gff, testfunc
from circlaw.errors import DomainError, UnsupportedEnsemble
from circlaw.kernels import EnsembleSpec


@pytest.mark.parametrize("family,n", [("ginibre", 12), ("bergman", 9)])
@pytest.mark.parametrize("z", [0.0, 0.35, 0.99 + 0.1j, 1.4j, 3.0])
def test_expected_log_closed_form_vs_quadrature(family, n, z):
    spec = EnsembleSpec(family, n)
    assert gff.expected_log_abs_pn(z, spec) == pytest.approx(
        gff.expected_log_abs_pn_quad(z, spec), abs=1e-8)


def test_expected_log_at_origin_digamma():
    n = 20
    want = 0.5 * sum(special.digamma(k + 1) - np.log(n) for k in range(n))
    assert gff.expected_log_abs_pn(0.0, "ginibre", n) == pytest.approx(want, abs=1e-12)


def test_expected_log_far_field():
    v = gff.expected_log_abs_pn(1e6, "ginibre", 30)
    assert v / (30 * np.log(1e6)) == pytest.approx(1.0, abs=1e-9)


def test_expected_log_array_shape():
    z = np.array([[0.1, 0.2], [1.5j, 2.0]])
    out = gff.expected_log_abs_pn(z, EnsembleSpec("bergman", 4))
    assert out.shape == (2, 2)


def test_expected_log_unsupported():
    with pytest.raises(UnsupportedEnsemble):
        gff.expected_log_abs_pn(0.5, EnsembleSpec("unitary", 4))


def test_expected_log_monte_carlo():
    vals = gff.pointwise_field_samples([1.5], EnsembleSpec("ginibre", 64), 2000, 17)[:, 0]
    assert abs(vals.mean()) <= 3 * vals.std(ddof=1) / np.sqrt(len(vals))


def test_field_far_away_small():
    s = ensembles.sample(EnsembleSpec("ginibre", 64), 3)
    g = gff.field_grid(s, gff.GridSpec(10.0 + 0j, 0.5, 4))
    assert np.abs(g.values).max() < 0.5


def test_empty_grid():
    s = ensembles.sample(EnsembleSpec("ginibre", 8), 3)
    g = gff.field_grid(s, gff.GridSpec(0j, 1.0, 0))
    assert g.values.size == 0
    buf = io.StringIO()
    g.to_csv(buf)
    assert buf.getvalue().splitlines()[1] == "x,y,value,mask"


def test_field_harmonic_outside_spectrum():
    s = ensembles.sample(EnsembleSpec("ginibre", 64), 4)
    assert np.abs(s.points).max() < 1.3
    h = 1e-3
    z0 = 1.6 + 0.4j
    pts = np.array([z0, z0 + h, z0 - h, z0 + 1j * h, z0 - 1j * h])
    vals = gff.log_abs_pn(pts, s.points) - gff.expected_log_abs_pn(pts, s.ensemble)
    lap = (vals[1:].sum() - 4 * vals[0]) / h ** 2
    assert abs(lap) < 1e-3


def test_field_grid_csv_deterministic(tmp_path):
    spec = EnsembleSpec("ginibre", 16)
    out = []
    for _ in range(2):
        g = gff.field_grid(ensembles.sample(spec, 5), gff.GridSpec(0j, 1.2, 6))
        buf = io.StringIO()
        g.to_csv(buf)
        out.append(buf.getvalue())
    assert out[0] == out[1]
    assert len(out[0].splitlines()) == 2 + 36
    g.write_sidecar(str(tmp_path / "s.json"))
    assert (tmp_path / "s.json").exists()


def test_backends_agree_on_field():
    from circlaw import backend
    if len(backend.available()) < 2:
        pytest.skip("compiled core not built")
    s = ensembles.sample(EnsembleSpec("ginibre", 32), 6)
    W = np.linspace(-1, 1, 7) + 0.3j
    assert np.allclose(gff.log_abs_pn(W, s.points, "cython"),
                       gff.log_abs_pn(W, s.points, "python"), atol=1e-12)


def test_pairing_needs_compact_support():
    with pytest.raises(DomainError):
        gff.pair_with_test_function(testfunc.parse("Re z"), EnsembleSpec("ginibre", 8), 10, 0)


def test_pairing_zero_function():
    zero = testfunc.TestFunction("blackbox", value=lambda z: 0 * z, d_cb=lambda z: 0 * z,
                                 dbar_cb=lambda z: 0 * z, laplacian_cb=lambda z: 0 * z.real,
                                 support_radius=0.5, real_valued=True)
    res = gff.pair_with_test_function(zero, EnsembleSpec("ginibre", 16), 20, 1, resolution=16)
    assert res.variance.value == 0 and res.predicted == 0


def test_pairing_two_routes_agree():
    res = gff.pair_with_test_function(testfunc.radial_bump(0.8), EnsembleSpec("ginibre", 48),
                                      40, 2, resolution=256)
    assert res.max_route_gap < 1e-2
    assert res.predicted == pytest.approx(0.3)
    assert np.std(res.direct_values) > 0.1


def test_pairing_bergman():
    res = gff.pair_with_test_function(testfunc.radial_bump(0.6), EnsembleSpec("bergman", 24),
                                      30, 3, resolution=192)
    assert res.max_route_gap < 1e-2
