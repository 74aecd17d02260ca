"""Log-potential fluctuation field ``h_n(z) = log|p_n(z)| - E log|p_n(z)|`` with
``p_n(z) = prod_k (z - z_k)``, and its pairing with test functions.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from . import backend, ensembles
from .errors import DomainError, InvalidArgument, UnsupportedEnsemble
from .kernels import EnsembleSpec, radial_integral
from .stats import MCEstimate, linear_statistic, sample_covariance


def _t(z):
    return np.abs(np.asarray(z, dtype=complex)) ** 2


def expected_log_abs_pn(z, ensemble, n=None):
    """``E log|p_n(z)| = sum_k E log max(|z|, R_k)`` with independent radii ``R_k``.

    Uses that the angular average of ``log|z - r e^{i theta}|`` is
    ``log max(|z|, r)``; the per-radius expectations are summed in closed form.
    """
    fam = getattr(ensemble, "family", ensemble)
    n = getattr(ensemble, "n", n)
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    t = np.atleast_1d(_t(z)).astype(float).ravel()
    if fam == "ginibre":
        out = np.empty_like(t)
        j = np.arange(1, n)
        for i, ti in enumerate(t):
            x = n * ti
            head = 0.5 * n * (-np.euler_gamma - np.log(n)) if x == 0 else \
                0.5 * n * (np.log(ti) + special.exp1(x))
            out[i] = head + 0.5 * np.sum((n - j) / j * special.gammaincc(j, x))
    elif fam == "bergman":
        k = np.arange(n)[None, :]
        tt = t[:, None]
        with np.errstate(divide="ignore"):
            inside = -(1.0 - tt ** (k + 1)) / (k + 1)
            outside = np.log(np.where(tt > 0, tt, 1.0)) * np.ones_like(k)
        out = 0.5 * np.where(tt < 1.0, inside, outside).sum(axis=1)
    else:
        raise UnsupportedEnsemble(f"no independent-radii law for {fam!r}")
    return float(out[0]) if scalar else out.reshape(z.shape)


def expected_log_abs_pn_quad(z, ensemble, n=None, tol=1e-10):
    """Same quantity by adaptive 1-D quadrature over each radius law."""
    fam = getattr(ensemble, "family", ensemble)
    n = getattr(ensemble, "n", n)
    t = float(_t(z))
    total = 0.0
    for k in range(n):
        if fam == "ginibre":
            def dens(x, k=k):
                return np.exp((k + 1) * np.log(n) + special.xlogy(k, x) - n * x
                              - special.gammaln(k + 1))
            upper = np.inf
        elif fam == "bergman":
            def dens(x, k=k):
                return (k + 1) * x ** k
            upper = 1.0
        else:
            raise UnsupportedEnsemble(f"no independent-radii law for {fam!r}")

        def g(x):
            return 0.5 * np.log(max(t, x)) * dens(x) if max(t, x) > 0 else 0.0

        cuts = sorted({0.0, min(t, upper), upper} | ({k / n} if fam == "ginibre" else set()))
        pieces = list(zip(cuts[:-1], cuts[1:]))
        for a, b in pieces:
            if b > a:
                val, _ = integrate.quad(g, a, b, epsabs=tol, epsrel=tol, limit=200)
                total += val
    return total


@dataclass
class GridSpec:
    center: complex = 0j
    half_width: float = 1.5
    resolution: int = 64

    def __post_init__(self):
        if self.resolution < 0 or self.half_width <= 0:
            raise InvalidArgument("grid needs resolution >= 0 and half_width > 0")

    @property
    def spacing(self):
        return 2 * self.half_width / self.resolution if self.resolution else 0.0

    def axes(self):
        """Cell-centre coordinates along x and y."""
        h = self.spacing
        c = complex(self.center)
        off = -self.half_width + (np.arange(self.resolution) + 0.5) * h
        return c.real + off, c.imag + off

    def points(self):
        x, y = self.axes()
        X, Y = np.meshgrid(x, y)  # row index = y
        return X, Y

    def to_dict(self):
        c = complex(self.center)
        return {"center": [c.real, c.imag], "half_width": self.half_width,
                "resolution": self.resolution}


@dataclass
class FieldGrid:
    grid: GridSpec
    values: np.ndarray
    mask: np.ndarray
    n: int
    seed: int
    meta: dict = field(default_factory=dict)

    @property
    def mask_fraction(self):
        return float(self.mask.mean()) if self.mask.size else 0.0

    def to_csv(self, target):
        """Write ``x,y,value,mask`` rows to a path or an open text stream."""
        if isinstance(target, str):
            with open(target, "w") as fh:
                return self.to_csv(fh)
        X, Y = self.grid.points() if self.values.size else (np.zeros(0), np.zeros(0))
        header = json.dumps({"schema": 1, **self.sidecar()}, sort_keys=True)
        target.write(f"# {header}\n")
        target.write("x,y,value,mask\n")
        for x, y, v, m in zip(np.ravel(X), np.ravel(Y), self.values.ravel(), self.mask.ravel()):
            target.write(f"{float(x)!r},{float(y)!r},{0.0 if m else float(v)!r},{int(m)}\n")

    def sidecar(self):
        return {"grid": self.grid.to_dict(), "n": self.n, "seed": self.seed,
                "mask_fraction": self.mask_fraction, **self.meta}

    def write_sidecar(self, path):
        with open(path, "w") as fh:
            json.dump({"schema": 1, **self.sidecar()}, fh, indent=2, sort_keys=True)


def log_abs_pn(points, zeros, kernel=None):
    """``sum_k log|w - z_k|`` at each of ``points``."""
    w = np.ascontiguousarray(np.asarray(points, dtype=complex).ravel())
    out = np.empty(len(w))
    backend.get(kernel).log_abs_charpoly(
        np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag),
        np.ascontiguousarray(np.asarray(zeros, dtype=complex)), out)
    return out.reshape(np.shape(points))


def field_grid(sample, grid, kernel=None):
    """``h_n`` on the cell centres of ``grid``; points hitting an eigenvalue are masked."""
    spec = sample.ensemble
    if grid.resolution == 0:
        empty = np.zeros((0, 0))
        return FieldGrid(grid, empty, empty.astype(bool), spec.n, sample.seed,
                         {"ensemble": spec.family})
    X, Y = grid.points()
    W = X + 1j * Y
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = log_abs_pn(W, sample.points, kernel) - expected_log_abs_pn(W, spec)
    mask = ~np.isfinite(vals)
    vals = np.where(mask, 0.0, vals)
    return FieldGrid(grid, vals, mask, spec.n, sample.seed, {"ensemble": spec.family})


def _check_support(f):
    if f.support_radius is None or f.support_radius >= 1.0:
        raise DomainError("pairing needs a test function supported strictly inside the unit disk")


def pairing_weights(f, resolution):
    """Midpoint-rule weights ``Delta f * cell area`` on the square covering the support."""
    _check_support(f)
    grid = GridSpec(0j, float(f.support_radius), int(resolution))
    X, Y = grid.points()
    W = X + 1j * Y
    lap = np.asarray(f.laplacian(W), dtype=float)
    return grid, W, lap * grid.spacing ** 2


def grid_pairing(weights_pts, weights, zeros, spec, expected_part, kernel=None):
    """``<Delta f, h_n>`` on the grid for one configuration."""
    keep = weights != 0.0
    x = np.ascontiguousarray(weights_pts.real[keep])
    y = np.ascontiguousarray(weights_pts.imag[keep])
    w = np.ascontiguousarray(weights[keep])
    z = np.ascontiguousarray(np.asarray(zeros, dtype=complex))
    return backend.get(kernel).log_potential_pairing(x, y, w, z) - expected_part


def expected_statistic(f, spec):
    """``E X_n(f) = n int f(z) rho(z) d^2 z`` for a radial test function."""
    if spec.family not in ("ginibre", "bergman", "iid_disk"):
        raise UnsupportedEnsemble(f"no planar density for {spec.family!r}")
    val, _ = radial_integral(lambda r: np.real(f(r.astype(complex))), spec.family, spec.n,
                             nodes=max(512, spec.n + 8))
    return spec.n * val


@dataclass
class PairingResult:
    variance: MCEstimate
    predicted: float
    direct_variance: MCEstimate
    max_route_gap: float
    grid_values: np.ndarray
    direct_values: np.ndarray

    @property
    def ratio(self):
        return float(np.real(self.variance.value)) / self.predicted if self.predicted else np.nan

    def to_dict(self):
        return {"mc_variance": self.variance.to_dict(), "predicted": self.predicted,
                "ratio": self.ratio, "direct_variance": self.direct_variance.to_dict(),
                "max_route_gap": self.max_route_gap}


def pair_with_test_function(f, ensemble, replicas, seed, resolution=256, threads=1,
                            kernel=None):
    """Variance of ``(1/2 pi) <Delta f, h_n>`` over replicas, with the direct
    statistic ``X_n(f) - E X_n(f)`` computed from the same eigenvalues."""
    from .limits import predict_variance

    _check_support(f)
    spec = ensemble if isinstance(ensemble, EnsembleSpec) else EnsembleSpec(*ensemble)
    grid, W, wts = pairing_weights(f, resolution)
    keep = wts != 0.0
    expected_part = float(np.sum(wts[keep] * expected_log_abs_pn(W[keep], spec)))
    pts = ensembles.sample_batch(spec, replicas, seed, threads=threads)
    pts = pts[~np.isnan(pts).any(axis=1)]
    grid_vals = np.array([grid_pairing(W, wts, row, spec, expected_part, kernel)
                          for row in pts]) / (2 * np.pi)
    direct = np.real(linear_statistic(f, pts)) - expected_statistic(f, spec)
    var = sample_covariance(grid_vals, grid_vals)
    dvar = sample_covariance(direct, direct)
    var = MCEstimate(float(np.real(var.value)), var.std_error, var.replicas)
    dvar = MCEstimate(float(np.real(dvar.value)), dvar.std_error, dvar.replicas)
    gap = float(np.max(np.abs(grid_vals - direct))) if len(direct) else 0.0
    return PairingResult(var, predict_variance(f).total, dvar, gap, grid_vals, direct)


def pointwise_field_samples(z, ensemble, replicas, seed, threads=1):
    """``h_n(z)`` at fixed points for each replica, shape ``(replicas, len(z))``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    pts = ensembles.sample_batch(ensemble, replicas, seed, threads=threads)
    pts = pts[~np.isnan(pts).any(axis=1)]
    mean = expected_log_abs_pn(z, ensemble)
    return np.array([log_abs_pn(z, row) for row in pts]) - mean[None, :]


__all__ = ["expected_log_abs_pn", "expected_log_abs_pn_quad", "GridSpec", "FieldGrid",
           "field_grid", "pair_with_test_function", "PairingResult", "expected_statistic",
           "pointwise_field_samples", "log_abs_pn"]
