"""CSV / JSON serialization of point samples and reports."""

import json

import numpy as np

from .ensembles import PointSample
from .kernels import EnsembleSpec

SCHEMA = 1


def sample_header(spec, seed, **extra):
    meta = {"schema": SCHEMA, "ensemble": spec.family, "n": int(spec.n), "seed": int(seed)}
    meta.update(extra)
    return meta


def write_points_csv(fh, samples, meta):
    """``re,im`` rows (plus a ``replica`` column when several samples are written)."""
    fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    multi = len(samples) > 1
    fh.write("replica,re,im\n" if multi else "re,im\n")
    for r, s in enumerate(samples):
        for z in s.points:
            prefix = f"{r}," if multi else ""
            fh.write(f"{prefix}{float(z.real)!r},{float(z.imag)!r}\n")


def samples_to_json(samples, meta):
    out = dict(meta)
    out["samples"] = [{"seed": int(s.seed),
                       "points": [[float(z.real), float(z.imag)] for z in s.points]}
                      for s in samples]
    return out


def read_points_csv(path):
    """Inverse of :func:`write_points_csv` for a single sample."""
    with open(path) as fh:
        first = fh.readline()
        meta = json.loads(first[1:]) if first.startswith("#") else {}
        cols = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if cols[0] == "replica":
        data = data[:, 1:]
    pts = data[:, 0] + 1j * data[:, 1]
    spec = EnsembleSpec(meta["family"] if "family" in meta else meta["ensemble"], int(meta["n"]))
    return PointSample(pts[:spec.n], spec, int(meta.get("seed", 0)), meta)


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)
