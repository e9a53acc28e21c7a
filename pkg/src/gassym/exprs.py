"""Exact symbolic expression layer.

Expressions are plain immutable sympy objects over exact rationals.  This
module pins down the handful of operations the rest of the package relies
on: differentiation, a canonical form strong enough to reduce every
residual we care about to a literal 0, numeric evaluation with explicit
bindings, and a zero test with a seeded numeric fallback.

Conventions:
  * ``log`` always means ``ln|.|``; numeric evaluation applies ``abs`` to
    the argument, and ``d log(x) = dx/x`` holds on each branch.
  * Opaque function symbols (the state function ``f`` and its derivatives)
    are created with :func:`opaque`; differentiation produces the next
    derivative order via the chain rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np
import sympy as sp
from sympy.core.sorting import default_sort_key

__all__ = [
    "Assignment",
    "DomainError",
    "UnboundSymbolError",
    "ZeroVerdict",
    "canonicalize",
    "differentiate",
    "evaluate",
    "is_zero",
    "opaque",
    "to_sexpr",
]

DEFAULT_ZERO_TOL = 1e-9
DEFAULT_NUM_POINTS = 100


class UnboundSymbolError(KeyError):
    """A free symbol of the expression has no binding."""


class DomainError(ValueError):
    """Evaluation hit a singular point (division by zero, log of zero)."""


# --------------------------------------------------------------------------
# opaque function symbols


class _Opaque(sp.Function):
    base_name: str = ""
    diff_order: int = 0

    def fdiff(self, argindex=1):
        return opaque(self.base_name, self.diff_order + 1)(self.args[0])


_opaque_cache: dict[tuple[str, int], type] = {}


def opaque(name: str, order: int = 0):
    """Unary opaque function symbol ``name`` differentiated ``order`` times.

    ``opaque("f")(rho)`` stands for f(rho) with f arbitrary;
    ``opaque("f", 1)`` is f'.  Chain rule is wired in, so
    ``diff(f(g), x) == f'(g) * diff(g, x)``.
    """
    key = (name, order)
    cls = _opaque_cache.get(key)
    if cls is None:
        display = name + "'" * order
        cls = type(display, (_Opaque,), {"base_name": name, "diff_order": order})
        _opaque_cache[key] = cls
    return cls


# --------------------------------------------------------------------------
# core operations


def canonicalize(e) -> sp.Expr:
    """Canonical form: flatten/sort/fold, rational normal form, and the
    Pythagorean reduction sin^2 + cos^2 -> 1.

    Trig arguments are first expanded to single angles; even powers of
    sine are then rewritten through cosine, which is a confluent reduction
    modulo the Pythagorean ideal.  Idempotent; two expressions equal under
    ring axioms plus the Pythagorean relation map to the same tree.
    """
    e = sp.sympify(e)
    if e.has(sp.sin, sp.cos):
        e = sp.expand_trig(e)
        num, den = sp.fraction(sp.together(e))
        e = sp.cancel(_sin_reduce(num) / _sin_reduce(den))
    else:
        e = sp.cancel(sp.expand(e))
    return e


def _sin_reduce(p: sp.Expr) -> sp.Expr:
    """Rewrite sin(x)**n (n >= 2) as (1 - cos(x)**2)**(n//2) * sin(x)**(n%2)."""
    p = sp.expand(p)
    repl = {}
    for pw in p.atoms(sp.Pow):
        if (
            isinstance(pw.base, sp.sin)
            and pw.exp.is_Integer
            and pw.exp >= 2
        ):
            x = pw.base.args[0]
            k, r = divmod(int(pw.exp), 2)
            repl[pw] = (1 - sp.cos(x) ** 2) ** k * sp.sin(x) ** r
    if repl:
        p = sp.expand(p.xreplace(repl))
    return p


def differentiate(e, v) -> sp.Expr:
    """Canonical derivative of ``e`` with respect to variable ``v``.

    Symbols other than ``v`` are treated as constants (parameters
    differentiate to zero); opaque f(g) differentiates to f'(g)*g'.
    """
    e = sp.sympify(e)
    v = sp.Symbol(v) if isinstance(v, str) else v
    return canonicalize(sp.diff(e, v))


@dataclass(frozen=True)
class Assignment:
    """Numeric bindings for evaluation.

    ``values`` maps symbol names to floats; ``functions`` maps
    ``(base_name, derivative_order)`` to numeric callbacks.
    """

    values: Mapping[str, float]
    functions: Mapping[tuple[str, int], Callable[[float], float]] = field(
        default_factory=dict
    )


def evaluate(e, a: Assignment) -> float:
    """IEEE-double evaluation of ``e`` under ``a``.

    ``log`` is applied to the absolute value of its argument.  Raises
    :class:`UnboundSymbolError` naming the missing symbol, and
    :class:`DomainError` on division by zero or log/sqrt domain hits.
    """
    return _eval(sp.sympify(e), a)


def _eval(e, a: Assignment) -> float:
    if e.is_Number:
        return float(e)
    if e.is_Symbol:
        name = e.name
        if name not in a.values:
            raise UnboundSymbolError(f"unbound symbol {name!r}")
        return float(a.values[name])
    if e.is_Add:
        return math.fsum(_eval(t, a) for t in e.args)
    if e.is_Mul:
        out = 1.0
        for t in e.args:
            out *= _eval(t, a)
        return out
    if e.is_Pow:
        base = _eval(e.base, a)
        exp = _eval(e.exp, a)
        if base == 0.0 and exp < 0:
            raise DomainError(f"division by zero in {e}")
        if base < 0 and not float(exp).is_integer():
            raise DomainError(f"fractional power of negative base in {e}")
        return base**exp
    if isinstance(e, sp.log):
        arg = _eval(e.args[0], a)
        if arg == 0.0:
            raise DomainError(f"log of zero in {e}")
        return math.log(abs(arg))
    if isinstance(e, sp.sin):
        return math.sin(_eval(e.args[0], a))
    if isinstance(e, sp.cos):
        return math.cos(_eval(e.args[0], a))
    if isinstance(e, sp.atan2):
        y = _eval(e.args[0], a)
        x = _eval(e.args[1], a)
        if x == 0.0 and y == 0.0:
            raise DomainError(f"atan2(0, 0) in {e}")
        return math.atan2(y, x)
    if isinstance(e, sp.acos):
        return math.acos(_eval(e.args[0], a))
    if isinstance(e, sp.Abs):
        return abs(_eval(e.args[0], a))
    if isinstance(e, _Opaque):
        key = (e.base_name, e.diff_order)
        fn = a.functions.get(key)
        if fn is None:
            raise UnboundSymbolError(
                f"unbound opaque function {e.base_name!r} of order {e.diff_order}"
            )
        return float(fn(_eval(e.args[0], a)))
    raise TypeError(f"cannot evaluate node {type(e).__name__}: {e}")


class ZeroVerdict:
    """Outcome of :func:`is_zero`."""

    SYMBOLIC_ZERO = "SymbolicZero"
    NUMERIC_ZERO = "NumericZero"
    NON_ZERO = "NonZero"

    def __init__(self, kind: str, witness: dict | None = None):
        self.kind = kind
        self.witness = witness

    def __bool__(self) -> bool:
        return self.kind != self.NON_ZERO

    def __eq__(self, other):
        if isinstance(other, str):
            return self.kind == other
        return isinstance(other, ZeroVerdict) and self.kind == other.kind

    def __repr__(self):
        if self.witness is not None:
            return f"ZeroVerdict({self.kind}, witness={self.witness})"
        return f"ZeroVerdict({self.kind})"


def is_zero(
    e,
    dom: Mapping[str, tuple[float, float]] | None = None,
    *,
    functions: Mapping[tuple[str, int], Callable[[float], float]] | None = None,
    n_points: int = DEFAULT_NUM_POINTS,
    tol: float = DEFAULT_ZERO_TOL,
    seed: int = 0,
) -> ZeroVerdict:
    """Three-valued zero test: symbolic first, seeded sampling fallback.

    ``dom`` gives one interval per free symbol, chosen off the singular
    locus.  The fallback evaluates at ``n_points`` pseudo-random points and
    returns NumericZero if all |values| < ``tol``, else NonZero with a
    witness point.
    """
    e = canonicalize(e)
    if e == 0:
        return ZeroVerdict(ZeroVerdict.SYMBOLIC_ZERO)
    if e.is_Number:
        return ZeroVerdict(ZeroVerdict.NON_ZERO, witness={"value": float(e)})
    if dom is None:
        dom = {}
    free = sorted(e.free_symbols, key=lambda s: s.name)
    rng = np.random.default_rng(seed)
    funcs = dict(functions or {})
    if any(isinstance(n, _Opaque) for n in e.atoms(sp.Function)):
        funcs.setdefault(("f", 0), lambda r: r * r)
        funcs.setdefault(("f", 1), lambda r: 2.0 * r)
        funcs.setdefault(("f", 2), lambda r: 2.0)
    for _ in range(n_points):
        point = {}
        for s in free:
            lo, hi = dom.get(s.name, (0.5, 1.5))
            point[s.name] = float(rng.uniform(lo, hi))
        try:
            val = evaluate(e, Assignment(point, funcs))
        except DomainError:
            continue
        if abs(val) >= tol:
            return ZeroVerdict(
                ZeroVerdict.NON_ZERO, witness={"point": point, "value": val}
            )
    return ZeroVerdict(ZeroVerdict.NUMERIC_ZERO)


# --------------------------------------------------------------------------
# serialization


def to_sexpr(e) -> str:
    """Deterministic S-expression text form (for report embedding)."""
    return _sexpr(canonicalize(e))


def _sexpr(e) -> str:
    if e.is_Symbol:
        return e.name
    if e.is_Integer:
        return str(int(e))
    if e.is_Rational:
        return f"{e.p}/{e.q}"
    if e.is_Float:
        return repr(float(e))
    if e.is_Add or e.is_Mul:
        op = "+" if e.is_Add else "*"
        parts = sorted((_sexpr(t) for t in e.args), key=str)
        return f"({op} " + " ".join(parts) + ")"
    if e.is_Pow:
        return f"(^ {_sexpr(e.base)} {_sexpr(e.exp)})"
    if isinstance(e, sp.log):
        return f"(ln {_sexpr(e.args[0])})"
    if isinstance(e, (sp.sin, sp.cos)):
        return f"({type(e).__name__} {_sexpr(e.args[0])})"
    if isinstance(e, sp.atan2):
        return f"(atan2 {_sexpr(e.args[0])} {_sexpr(e.args[1])})"
    if isinstance(e, _Opaque):
        return f"({e.base_name}^({e.diff_order}) {_sexpr(e.args[0])})"
    raise TypeError(f"cannot serialize node {type(e).__name__}: {e}")


def rational(p, q=1) -> sp.Rational:
    """Exact rational constant in lowest terms."""
    if isinstance(p, Fraction):
        return sp.Rational(p.numerator, p.denominator)
    return sp.Rational(p, q)
