"""Test functions f(z, zbar) for linear statistics.

Two kinds: polynomials ``sum c * z^a * zbar^b`` with exact Wirtinger
derivatives, and black boxes given by callbacks. ``d`` is ``d/dz`` and
``dbar`` is ``d/dzbar = (d/dx + i d/dy) / 2``.
"""

import ast
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CapabilityError, DomainError, InvalidArgument


def _clean(terms):
    return {k: complex(v) for k, v in terms.items() if v != 0}


@dataclass
class TestFunction:
    """A test function with optional Wirtinger derivatives and Laplacian.

    For ``kind == "poly"`` everything is derived from ``terms``, a map
    ``(a, b) -> c`` for the monomial ``c z^a zbar^b``.
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str
    terms: dict = field(default_factory=dict)
    value: Optional[Callable] = None
    d_cb: Optional[Callable] = None
    dbar_cb: Optional[Callable] = None
    laplacian_cb: Optional[Callable] = None
    domain_radius: float = np.inf
    support_radius: Optional[float] = None
    real_valued: Optional[bool] = None
    name: str = ""

    def __post_init__(self):
        if self.kind == "poly":
            self.terms = _clean(self.terms)
            for a, b in self.terms:
                if a < 0 or b < 0:
                    raise InvalidArgument(f"negative exponent in term {(a, b)}")
            if self.real_valued is None:
                self.real_valued = all(
                    np.isclose(c, np.conj(self.terms.get((b, a), 0)), rtol=0, atol=1e-14)
                    for (a, b), c in self.terms.items())
        elif self.kind == "blackbox":
            if self.value is None:
                raise InvalidArgument("blackbox test function needs a value callback")
            if self.real_valued is None:
                self.real_valued = False
        else:
            raise InvalidArgument(f"unknown test-function kind {self.kind!r}")

    # -- evaluation -------------------------------------------------------

    def _check_domain(self, z):
        if np.isfinite(self.domain_radius) and np.any(np.abs(z) > self.domain_radius):
            raise DomainError(f"{self.name or 'f'}: point outside |z| <= {self.domain_radius}")

    def _poly(self, terms, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        out = np.zeros(z.shape, dtype=complex)
        for (a, b), c in terms.items():
            out = out + c * z ** a * zb ** b
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "poly":
            out = self._poly(self.terms, z)
        else:
            self._check_domain(z)
            out = np.asarray(self.value(z), dtype=complex)
        return out.real if self.real_valued else out

    @property
    def has_derivatives(self):
        return self.kind == "poly" or (self.d_cb is not None and self.dbar_cb is not None)

    def d(self, z):
        if self.kind == "poly":
            return self._poly({(a - 1, b): a * c for (a, b), c in self.terms.items() if a}, z)
        if self.d_cb is None:
            raise CapabilityError(f"{self.name or 'f'} has no d/dz callback")
        return np.asarray(self.d_cb(np.asarray(z, dtype=complex)), dtype=complex)

    def dbar(self, z):
        if self.kind == "poly":
            return self._poly({(a, b - 1): b * c for (a, b), c in self.terms.items() if b}, z)
        if self.dbar_cb is None:
            raise CapabilityError(f"{self.name or 'f'} has no d/dzbar callback")
        return np.asarray(self.dbar_cb(np.asarray(z, dtype=complex)), dtype=complex)

    def laplacian(self, z):
        """``4 d dbar f``."""
        if self.kind == "poly":
            return self._poly({(a - 1, b - 1): 4 * a * b * c
                               for (a, b), c in self.terms.items() if a and b}, z)
        if self.laplacian_cb is None:
            raise CapabilityError(f"{self.name or 'f'} has no Laplacian callback")
        return np.asarray(self.laplacian_cb(np.asarray(z, dtype=complex)))

    def boundary(self, theta):
        """Restriction to the unit circle, ``theta -> f(e^{i theta})``."""
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    # -- structure --------------------------------------------------------

    @property
    def is_analytic(self):
        return self.kind == "poly" and all(b == 0 for (_, b) in self.terms)

    @property
    def is_constant(self):
        return self.kind == "poly" and all(k == (0, 0) for k in self.terms)

    def conj(self):
        if self.kind != "poly":
            raise CapabilityError("conjugation only implemented for polynomials")
        return poly({(b, a): np.conj(c) for (a, b), c in self.terms.items()})

    def describe(self):
        if self.name:
            return self.name
        if self.kind == "poly":
            return format_poly(self.terms)
        return "blackbox"


def poly(terms, name=""):
    return TestFunction("poly", terms=dict(terms), name=name)


def monomial(a, b, c=1.0):
    return poly({(a, b): c})


def format_poly(terms):
    if not terms:
        return "0"
    parts = []
    for (a, b), c in sorted(terms.items()):
        c = complex(c)
        coef = f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}i)"
        factors = [coef]
        if a:
            factors.append("z" if a == 1 else f"z^{a}")
        if b:
            factors.append("zbar" if b == 1 else f"zbar^{b}")
        parts.append("*".join(factors))
    return " + ".join(parts)


# -- builtins -------------------------------------------------------------

def radial_bump(a=0.8):
    """``(1 - |z|^2/a^2)^3`` inside ``|z| < a``, zero outside; C^2 across ``|z| = a``."""
    if not 0 < a:
        raise InvalidArgument("bump radius must be positive")
    a2 = a * a

    def u(z):
        return np.abs(z) ** 2 / a2

    def inside(z):
        return u(z) < 1.0

    def value(z):
        w = 1.0 - u(z)
        return np.where(inside(z), w ** 3, 0.0)

    def dbar(z):
        w = 1.0 - u(z)
        return np.where(inside(z), -3.0 * w ** 2 * z / a2, 0.0)

    def d(z):
        w = 1.0 - u(z)
        return np.where(inside(z), -3.0 * w ** 2 * np.conj(z) / a2, 0.0)

    def lap(z):
        uu = u(z)
        return np.where(uu < 1.0, -12.0 / a2 * (1.0 - uu) * (1.0 - 3.0 * uu), 0.0)

    return TestFunction("blackbox", value=value, d_cb=d, dbar_cb=dbar, laplacian_cb=lap,
                        support_radius=a, real_valued=True, name=f"bump:{a:g}")


BUILTINS = {"bump": radial_bump}


# -- parser ---------------------------------------------------------------

class _Poly:
    """Polynomial in (z, zbar) used while parsing."""

    def __init__(self, terms):
        self.terms = _clean(terms)

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    def __add__(self, o):
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return _Poly(out)

    def __neg__(self):
        return _Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        out = {}
        for (a, b), c in self.terms.items():
            for (p, q), d in o.terms.items():
                key = (a + p, b + q)
                out[key] = out.get(key, 0) + c * d
        return _Poly(out)

    def __pow__(self, k):
        out = _Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self):
        return _Poly({(b, a): np.conj(c) for (a, b), c in self.terms.items()})

    def scalar(self):
        if set(self.terms) - {(0, 0)}:
            return None
        return self.terms.get((0, 0), 0)


_VARS = {"z": _Poly({(1, 0): 1}), "zbar": _Poly({(0, 1): 1}), "i": _Poly.const(1j)}
_FUNCS = {
    "Re": lambda p: (p + p.conj()) * _Poly.const(0.5),
    "Im": lambda p: (p - p.conj()) * _Poly.const(-0.5j),
    "conj": lambda p: p.conj(),
}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return _Poly.const(node.value)
    if isinstance(node, ast.Name) and node.id in _VARS:
        return _VARS[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left, right = _eval(node.left), _eval(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            c = right.scalar()
            if c is None or c == 0:
                raise InvalidArgument("division only by nonzero constants")
            return left * _Poly.const(1 / c)
        if isinstance(node.op, ast.Pow):
            k = right.scalar()
            if k is None or complex(k).imag != 0 or int(complex(k).real) != complex(k).real \
                    or complex(k).real < 0:
                raise InvalidArgument("exponents must be nonnegative integers")
            return left ** int(complex(k).real)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise InvalidArgument(f"unsupported syntax in test function: {ast.dump(node)[:80]}")


def _preprocess(expr):
    s = expr.strip()
    s = re.sub(r"\|\s*z\s*\|\s*(\^|\*\*)\s*2\b", "(z*zbar)", s)
    if "|" in s:
        raise InvalidArgument("|z| is only supported as |z|^2")
    s = s.replace("z̄", "zbar").replace("^", "**")
    # imaginary literals: 2i, 0.5i, 1e-3i
    s = re.sub(r"(\d(?:[\d.]*)(?:[eE][+-]?\d+)?)i\b", r"\1j", s)
    # function application without parentheses: "Re z**2" -> "Re(z**2)"
    s = re.sub(r"\b(Re|Im|conj)\s+([A-Za-z0-9_.]+(?:\s*\*\*\s*\d+)?)", r"\1(\2)", s)
    return s


def parse(expr):
    """Parse ``"Re z"``, ``"z^2*zbar"``, ``"(1+2i)*z - 3"``, ``"|z|^2"`` or a builtin
    name such as ``"bump"`` / ``"bump:0.6"``."""
    if not isinstance(expr, str) or not expr.strip():
        raise InvalidArgument("empty test-function expression")
    head, _, arg = expr.strip().partition(":")
    if head in BUILTINS:
        try:
            return BUILTINS[head](float(arg)) if arg else BUILTINS[head]()
        except ValueError as exc:
            raise InvalidArgument(f"bad builtin parameter in {expr!r}") from exc
    try:
        tree = ast.parse(_preprocess(expr), mode="eval")
    except SyntaxError as exc:
        raise InvalidArgument(f"cannot parse test function {expr!r}: {exc.msg}") from exc
    p = _eval(tree)
    f = poly(p.terms, name=expr.strip())
    return f
