"""Catalog of Schoenberg transformations.

A Schoenberg transformation is a Bernstein function vanishing at zero: applied
entrywise to a matrix of squared Euclidean distances it yields another such
matrix, embeddable in a (usually higher dimensional) Euclidean space.

Members are represented by closed forms with analytic first and second
derivatives. ``g`` denotes the mixing density behind each closed form::

    kind          phi(D)                       g(lambda)                 bounded  rectifiable
    identity      D                            delta(lambda)             no       yes
    scaledexp a   (1 - exp(-a D)) / a, a >= 0  delta(lambda - a)         a > 0    yes
    truncsine     D (D + exp(-pi D/2))/(1+D^2) lambda sin(lambda), <pi/2 yes      yes
    log a         ln(1 + D/a)                  exp(-a lambda)            no       yes
    rational a    D / (a (a + D))              lambda exp(-a lambda)     yes      yes
    power a       D^a, 0 < a <= 1              ~ lambda^(-a)             no       a = 1
    powrational a D^a / (1 + D^a), 0 < a < 1   -                         yes      no
    gaussian a    1 - exp(-a D)                a delta(lambda - a)       yes      yes

The class is closed under composition; :func:`compose` builds
``outer(inner(D))`` with chain-rule derivatives.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distgeom import as_squared_distances
from .errors import InternalError, NonRectifiableError, ParseError, UndefinedAngleError, ValidationError
from .spectral import DEFAULT_TOL, is_cnd

_HALF_PI = 0.5 * math.pi

PARAMETRIC = ("gaussian", "power", "log", "rational", "powrational", "scaledexp")
PLAIN = ("identity", "truncsine")
KINDS = PARAMETRIC + PLAIN + ("compose",)


@dataclass(frozen=True)
class SchoenbergTransform:
    kind: str
    param: Optional[float] = None
    outer: Optional["SchoenbergTransform"] = None
    inner: Optional["SchoenbergTransform"] = None

    def __post_init__(self):
        _validate(self)

    def __call__(self, D):
        return value(self, D)

    def __str__(self):
        if self.kind == "compose":
            return f"compose({self.outer},{self.inner})"
        if self.kind in PLAIN:
            return self.kind
        return f"{self.kind}:a={self.param!r}"


@dataclass(frozen=True)
class TransformClassification:
    rectifiable: bool
    bounded: bool
    phi_prime_at_zero: float  # math.inf when not rectifiable
    phi_at_infinity: float  # math.inf when not bounded


def _validate(t):
    k, a = t.kind, t.param
    if k not in KINDS:
        raise ValidationError(f"unknown transform kind {k!r}")
    if k == "compose":
        if not (isinstance(t.outer, SchoenbergTransform) and isinstance(t.inner, SchoenbergTransform)):
            raise ValidationError("compose needs outer and inner transforms")
        return
    if k in PLAIN:
        if a is not None:
            raise ValidationError(f"{k} takes no parameter")
        return
    if a is None or not math.isfinite(a):
        raise ValidationError(f"{k} needs a finite parameter a")
    ok = {
        "gaussian": a > 0,
        "log": a > 0,
        "rational": a > 0,
        "power": 0 < a <= 1,
        "powrational": 0 < a < 1,
        "scaledexp": a >= 0,
    }[k]
    if not ok:
        raise ValidationError(f"parameter a={a!r} outside the valid range for {k}")


# Constructors -------------------------------------------------------------

def identity():
    return SchoenbergTransform("identity")


def gaussian(a):
    return SchoenbergTransform("gaussian", float(a))


def power(a):
    return SchoenbergTransform("power", float(a))


def log(a):
    return SchoenbergTransform("log", float(a))


def rational(a):
    return SchoenbergTransform("rational", float(a))


def truncsine():
    return SchoenbergTransform("truncsine")


def powrational(a):
    return SchoenbergTransform("powrational", float(a))


def scaledexp(a):
    return SchoenbergTransform("scaledexp", float(a))


def compose(outer, inner):
    """``D -> outer(inner(D))``."""
    return SchoenbergTransform("compose", outer=outer, inner=inner)


# Evaluation ---------------------------------------------------------------

def _truncsine_parts(D):
    e = np.exp(-_HALF_PI * D)
    N = D * D + D * e
    N1 = 2 * D + e - _HALF_PI * D * e
    N2 = 2 - 2 * _HALF_PI * e + _HALF_PI**2 * D * e
    M = 1 + D * D
    return N, N1, N2, M


def _raw(t, D, order):
    """Order-th derivative (0, 1 or 2) of ``t`` at the nonnegative array ``D``."""
    k, a = t.kind, t.param
    if k == "identity":
        return (D.copy(), np.ones_like(D), np.zeros_like(D))[order]
    if k == "gaussian":
        if order == 0:
            return -np.expm1(-a * D)
        return (a if order == 1 else -a * a) * np.exp(-a * D)
    if k == "scaledexp":
        if a == 0:
            return _raw(identity(), D, order)
        if order == 0:
            return -np.expm1(-a * D) / a
        return (1.0 if order == 1 else -a) * np.exp(-a * D)
    if k == "log":
        return (np.log1p(D / a), 1 / (a + D), -1 / (a + D) ** 2)[order]
    if k == "rational":
        return (D / (a * (a + D)), 1 / (a + D) ** 2, -2 / (a + D) ** 3)[order]
    if k == "power":
        if a == 1:
            return _raw(identity(), D, order)
        return (D**a, a * D ** (a - 1), a * (a - 1) * D ** (a - 2))[order]
    if k == "powrational":
        u = D**a
        if order == 0:
            return u / (1 + u)
        u1 = a * D ** (a - 1)
        if order == 1:
            return u1 / (1 + u) ** 2
        u2 = a * (a - 1) * D ** (a - 2)
        return u2 / (1 + u) ** 2 - 2 * u1 * u1 / (1 + u) ** 3
    if k == "truncsine":
        N, N1, N2, M = _truncsine_parts(D)
        if order == 0:
            return N / M
        if order == 1:
            return (N1 * M - 2 * D * N) / M**2
        return N2 / M - 4 * D * N1 / M**2 - 2 * N / M**2 + 8 * D * D * N / M**3
    # compose
    y = _raw(t.inner, D, 0)
    if order == 0:
        return _raw(t.outer, y, 0)
    g1 = _raw(t.inner, D, 1)
    if order == 1:
        return _raw(t.outer, y, 1) * g1
    return _raw(t.outer, y, 2) * g1 * g1 + _raw(t.outer, y, 1) * _raw(t.inner, D, 2)


def _evaluate(t, D, order):
    arr = np.asarray(D, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise ValidationError("transforms are defined on nonnegative arguments only")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray(_raw(t, arr, order), dtype=float)
    if order and not is_rectifiable(t):
        out = np.where(arr == 0, math.inf if order == 1 else -math.inf, out)
    return float(out) if out.ndim == 0 else out


def value(t: SchoenbergTransform, D):
    """``phi(D)`` for a scalar or array of nonnegative arguments."""
    return _evaluate(t, D, 0)


def derivative(t: SchoenbergTransform, D):
    """``phi'(D)``; ``math.inf`` at zero for non-rectifiable transforms."""
    return _evaluate(t, D, 1)


def second_derivative(t: SchoenbergTransform, D):
    """``phi''(D)``; ``-math.inf`` at zero for non-rectifiable transforms."""
    return _evaluate(t, D, 2)


def is_rectifiable(t) -> bool:
    if t.kind == "compose":
        return is_rectifiable(t.outer) and is_rectifiable(t.inner)
    if t.kind == "power":
        return t.param == 1
    return t.kind != "powrational"


def _limit_at_infinity(t) -> float:
    k, a = t.kind, t.param
    if k == "compose":
        y = _limit_at_infinity(t.inner)
        return _limit_at_infinity(t.outer) if math.isinf(y) else float(value(t.outer, y))
    if k in ("gaussian", "truncsine", "powrational"):
        return 1.0
    if k == "rational":
        return 1.0 / a
    if k == "scaledexp" and a > 0:
        return 1.0 / a
    return math.inf


def classify(t: SchoenbergTransform) -> TransformClassification:
    """Rectifiable iff ``phi'(0) < inf``; bounded iff ``phi(inf) < inf``."""
    d0 = derivative(t, 0.0)
    lim = _limit_at_infinity(t)
    return TransformClassification(
        rectifiable=not math.isinf(d0),
        bounded=not math.isinf(lim),
        phi_prime_at_zero=d0,
        phi_at_infinity=lim,
    )


def apply(t: SchoenbergTransform, D, check: bool = True, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Entrywise ``phi(D_ij)``.

    The result is again a squared Euclidean distance matrix whenever ``D``
    is one. With ``check`` the c.n.d. property of the output is verified and
    a failure raises :class:`InternalError`.
    """
    D = as_squared_distances(D)
    Dt = value(t, D)
    Dt = np.atleast_2d(Dt)
    np.fill_diagonal(Dt, 0.0)
    Dt = 0.5 * (Dt + Dt.T)
    if check and not is_cnd(Dt, tol):
        raise InternalError(f"{t} produced a non-Euclidean matrix")
    return Dt


def gaussian_kernel(D, lam: float) -> np.ndarray:
    """``exp(-lam D_ij)``; p.d. for every ``lam >= 0`` when ``D`` is Euclidean."""
    if lam < 0:
        raise ValidationError("kernel exponent must be nonnegative")
    return np.exp(-lam * np.asarray(D, dtype=float))


def transformed_right_angle(t: SchoenbergTransform, D1: float, D2: float) -> float:
    """Image of a right angle whose legs have squared lengths ``D1`` and ``D2``.

    Subadditivity of ``phi`` makes the transformed angle acute.
    """
    if not (D1 > 0 and D2 > 0):
        raise ValidationError("leg lengths must be positive")
    p1, p2, p12 = value(t, D1), value(t, D2), value(t, D1 + D2)
    if p1 <= 0 or p2 <= 0:
        raise UndefinedAngleError(f"{t} maps a leg to zero length; angle undefined")
    cos = (p1 + p2 - p12) / (2.0 * math.sqrt(p1 * p2))
    return math.acos(min(1.0, max(-1.0, cos)))


def curvature(t: SchoenbergTransform) -> float:
    """Menger curvature ``sqrt(-6 phi''(0)) / phi'(0)`` of a transformed straight line."""
    if not is_rectifiable(t):
        raise NonRectifiableError(f"{t} is not rectifiable (phi'(0) is infinite); curvature undefined")
    d1 = derivative(t, 0.0)
    d2 = second_derivative(t, 0.0)
    return math.sqrt(max(0.0, -6.0 * d2)) / d1


# Specification strings ----------------------------------------------------

_TOKEN = re.compile(r"\s*(compose\(|[(),]|[^(),\s]+)")


def _tokenize(spec):
    pos, out = 0, []
    while pos < len(spec):
        if spec[pos:].strip() == "":
            break
        m = _TOKEN.match(spec, pos)
        out.append(m.group(1))
        pos = m.end()
    return out


def _parse_atom(tok):
    name, _, rest = tok.partition(":")
    if name not in PARAMETRIC + PLAIN:
        raise ParseError(f"unknown transform {name!r} in token {tok!r}")
    if name in PLAIN:
        if rest:
            raise ParseError(f"{name} takes no parameter (token {tok!r})")
        return SchoenbergTransform(name)
    key, eq, num = rest.partition("=")
    if key != "a" or not eq:
        raise ParseError(f"expected '{name}:a=<number>', got token {tok!r}")
    try:
        a = float(num)
    except ValueError:
        raise ParseError(f"bad number {num!r} in token {tok!r}") from None
    try:
        return SchoenbergTransform(name, a)
    except ValidationError as exc:
        raise ParseError(f"{exc} (token {tok!r})") from None


def parse_transform(spec: str) -> SchoenbergTransform:
    """Parse ``identity``, ``gaussian:a=0.65``, ``compose(outer,inner)`` and friends."""
    tokens = _tokenize(spec)
    if not tokens:
        raise ParseError("empty transform specification")
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"expected {tok!r} at end of {spec!r}")
        if tokens[pos] != tok:
            raise ParseError(f"expected {tok!r}, got token {tokens[pos]!r}")
        pos += 1

    def node():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of {spec!r}")
        tok = tokens[pos]
        pos += 1
        if tok == "compose(":
            outer = node()
            expect(",")
            inner = node()
            expect(")")
            return compose(outer, inner)
        if tok in "(),":
            raise ParseError(f"unexpected token {tok!r}")
        return _parse_atom(tok)

    t = node()
    if pos != len(tokens):
        raise ParseError(f"unexpected trailing token {tokens[pos]!r}")
    return t
