"""Monte Carlo estimators for linear statistics ``X(f) = sum_k f(z_k)``.

Every estimator draws replica ``r`` from seed ``derive(seed, r)`` and reduces
in replica order, so results do not depend on the worker count.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import ensembles
from .errors import CapabilityError, InvalidArgument


@dataclass
class MCEstimate:
    value: complex
    std_error: float
    replicas: int

    def to_dict(self):
        v = complex(self.value)
        value = v.real if v.imag == 0 else [v.real, v.imag]
        return {"value": value, "se": float(self.std_error), "replicas": int(self.replicas)}


def linear_statistic(f, s):
    """``sum_k f(z_k)`` for a PointSample (or an array of points, last axis summed)."""
    pts = s.points if hasattr(s, "points") else np.asarray(s, dtype=complex)
    return np.sum(f(pts), axis=-1)


def statistic_values(f, ensemble, replicas, seed, threads=1):
    """Per-replica values of ``X(f)``; failed replicas are dropped."""
    pts = ensembles.sample_batch(ensemble, replicas, seed, threads=threads)
    ok = ~np.isnan(pts).any(axis=1)
    return linear_statistic(f, pts[ok])


def _centered(x):
    return x - np.mean(x)


def sample_covariance(x, y):
    """Unbiased ``E[(X - EX) conj(Y - EY)]`` with a leave-one-out jackknife SE."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    R = len(x)
    if R < 3:
        raise InvalidArgument("need at least 3 replicas")
    xc, yc = _centered(x), _centered(y)
    prod = xc * np.conj(yc)
    cov = np.sum(prod) / (R - 1)
    # leave-one-out estimates in closed form: drop i, recentre
    sx, sy, sxy = np.sum(xc), np.sum(yc), np.sum(prod)
    loo = (sxy - prod - (sx - xc) * np.conj(sy - yc) / (R - 1)) / (R - 2)
    se = np.sqrt((R - 1) / R * np.sum(np.abs(loo - np.mean(loo)) ** 2))
    return MCEstimate(cov, float(se), R)


def mc_covariance(f, g, ensemble, replicas, seed, threads=1):
    """Sample covariance of ``X(f)`` and ``X(g)``, conjugate-linear in ``g``."""
    if replicas < 100:
        raise InvalidArgument("mc_covariance needs at least 100 replicas")
    pts = ensembles.sample_batch(ensemble, replicas, seed, threads=threads)
    pts = pts[~np.isnan(pts).any(axis=1)]
    return sample_covariance(linear_statistic(f, pts), linear_statistic(g, pts))


def _kstats_from_sums(R, s1, s2, s3, s4):
    k1 = s1 / R
    k2 = (R * s2 - s1 ** 2) / (R * (R - 1))
    k3 = (2 * s1 ** 3 - 3 * R * s1 * s2 + R ** 2 * s3) / (R * (R - 1) * (R - 2))
    k4 = (-6 * s1 ** 4 + 12 * R * s1 ** 2 * s2 - 3 * R * (R - 1) * s2 ** 2
          - 4 * R * (R + 1) * s1 * s3 + R ** 2 * (R + 1) * s4) / (R * (R - 1) * (R - 2) * (R - 3))
    return k1, k2, k3, k4


def kstatistics(x, max_order=4):
    """Unbiased k-statistics ``k_1..k_max_order`` of real data with jackknife SEs."""
    x = np.asarray(x, dtype=float)
    R = len(x)
    if max_order < 1 or max_order > 4:
        raise InvalidArgument("max_order must be in 1..4")
    if R < max(10 * max_order, 5):
        raise InvalidArgument(f"need at least {10 * max_order} replicas for order {max_order}")
    mean = np.mean(x)
    if np.all(x == x[0]):
        vals = [x[0]] + [0.0] * (max_order - 1)
        return [MCEstimate(v, 0.0, R) for v in vals]
    xc = x - mean
    pw = [xc ** p for p in range(1, 5)]
    sums = [np.sum(p) for p in pw]
    full = _kstats_from_sums(R, *sums)
    loo = _kstats_from_sums(R - 1, *[s - p for s, p in zip(sums, pw)])
    out = []
    for p in range(max_order):
        value = full[p] + (mean if p == 0 else 0.0)
        se = np.sqrt((R - 1) / R * np.sum((loo[p] - np.mean(loo[p])) ** 2))
        out.append(MCEstimate(float(value), float(se), R))
    return out


def mc_kstatistics(f, ensemble, replicas, seed, max_order=4, threads=1):
    """k-statistics of the real statistic ``X(f)``; complex ``f`` only up to order 2."""
    if not f.real_valued and max_order > 2:
        raise CapabilityError("cumulants beyond order 2 need a real-valued statistic")
    x = statistic_values(f, ensemble, replicas, seed, threads)
    if f.real_valued:
        return kstatistics(np.real(x), max_order)
    mean = MCEstimate(np.mean(x), float(np.std(x, ddof=1) / np.sqrt(len(x))), len(x))
    return [mean, sample_covariance(x, x)][:max_order]


def record(statistic, ensemble, est, **extra):
    rec = {"schema": 1, "statistic": statistic, "ensemble": ensemble.family, "n": ensemble.n}
    rec.update(est.to_dict())
    rec.update(extra)
    return rec


def write_replica_csv(path, values, meta):
    """Per-replica statistic values, header comment carries the config."""
    values = np.asarray(values, dtype=complex)
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(["replica", "re", "im"])
        for r, v in enumerate(values):
            w.writerow([r, repr(float(v.real)), repr(float(v.imag))])


def running_sums(f, sample):
    """Partial sums of ``f`` over the points ordered by modulus."""
    pts = np.asarray(sample.points if hasattr(sample, "points") else sample, dtype=complex)
    order = np.argsort(np.abs(pts), kind="stable")
    return np.cumsum(f(pts[order]))


def write_running_sums_csv(path, f, sample, meta):
    sums = np.asarray(running_sums(f, sample), dtype=complex)
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(["k", "re", "im"])
        for k, v in enumerate(sums, 1):
            w.writerow([k, repr(float(v.real)), repr(float(v.imag))])


__all__ = ["MCEstimate", "linear_statistic", "statistic_values", "sample_covariance",
           "mc_covariance", "kstatistics", "mc_kstatistics", "record", "write_replica_csv",
           "running_sums", "write_running_sums_csv"]
