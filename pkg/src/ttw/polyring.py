"""Exact polynomials in t, u and the parameters a, b, w over the rationals.

Storage is delegated to FLINT's ``fmpq_mpoly`` in graded-lex order with
variable priority t > u > a > b > w, so canonical term order, equality and
hashing all follow from the underlying representation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

import flint

VARS = ("t", "u", "a", "b", "w")
PARAMS = ("a", "b", "w")
CTX = flint.fmpq_mpoly_ctx.get(VARS, "deglex")

#: hard per-variable exponent cap
EXP_CAP = 2**15

_INDEX = {name: i for i, name in enumerate(VARS)}
_ZERO = CTX.from_dict({})


class ExponentCapError(OverflowError):
    """An exponent exceeded :data:`EXP_CAP`."""


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def to_fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def check_cap(raw) -> None:
    if not raw.is_zero() and max(raw.degrees()) > EXP_CAP:
        raise ExponentCapError(f"exponent above {EXP_CAP}: degrees {raw.degrees()}")


class ParamPoly:
    """Immutable polynomial in t, u, a, b, w with rational coefficients."""

    __slots__ = ("raw",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        if terms is None:
            raw = _ZERO
        else:
            data = {}
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != 5 or min(exp) < 0:
                    raise ValueError(f"bad exponent vector {exp!r}")
                if max(exp) > EXP_CAP:
                    raise ExponentCapError(f"exponent above {EXP_CAP}: {exp}")
                c = to_fmpq(c)
                if c != 0:
                    data[exp] = data.get(exp, 0) + c
            raw = CTX.from_dict({e: c for e, c in data.items() if c != 0})
        self.raw = raw

    @classmethod
    def from_raw(cls, raw) -> ParamPoly:
        obj = cls.__new__(cls)
        obj.raw = raw
        return obj

    @classmethod
    def const(cls, c) -> ParamPoly:
        return cls({(0, 0, 0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> ParamPoly:
        exp = [0] * 5
        exp[_INDEX[name]] = 1
        return cls({tuple(exp): 1})

    # -- inspection -------------------------------------------------------
    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in canonical (descending graded-lex) order."""
        return [(tuple(int(e) for e in m), to_fraction(c)) for m, c in self.raw.terms()]

    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def __bool__(self) -> bool:
        return not self.raw.is_zero()

    def __len__(self) -> int:
        return len(self.raw)

    def degree(self, var: str) -> int:
        if self.raw.is_zero():
            return -1
        return int(self.raw.degrees()[_INDEX[var]])

    def total_degree(self) -> int:
        return -1 if self.raw.is_zero() else int(self.raw.total_degree())

    def free_of(self, names: Iterable[str]) -> bool:
        return all(self.degree(n) <= 0 for n in names)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            return other.raw
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return CTX.from_dict({(0, 0, 0, 0, 0): to_fmpq(other)}) if other != 0 else _ZERO
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ParamPoly.from_raw(self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ParamPoly.from_raw(self.raw - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ParamPoly.from_raw(o - self.raw)

    def __neg__(self):
        return ParamPoly.from_raw(-self.raw)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = self.raw * o
        check_cap(out)
        return ParamPoly.from_raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.raw**n
        check_cap(out)
        return ParamPoly.from_raw(out)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.raw == o

    def __hash__(self):
        return hash(tuple(self.raw.terms()))

    def diff(self, var: str) -> ParamPoly:
        if var not in ("t", "u"):
            raise ValueError(f"can only differentiate in t or u, not {var!r}")
        return ParamPoly.from_raw(self.raw.derivative(_INDEX[var]))

    def subs(self, bind: Mapping[str, object]) -> ParamPoly:
        if not bind:
            return self
        return ParamPoly.from_raw(self.raw.subs({k: to_fmpq(v) for k, v in bind.items()}))

    def eval_params(self, bind: Mapping[str, object]) -> ParamPoly:
        bad = set(bind) - set(PARAMS)
        if bad:
            raise ValueError(f"only a, b, w can be bound, got {sorted(bad)}")
        return self.subs(bind)

    def __call__(self, **values) -> Fraction:
        """Evaluate at a full point, e.g. ``p(t=1, u=2, a=0, b=0, w=3)``."""
        args = [to_fmpq(values.get(v, 0)) for v in VARS]
        return to_fraction(self.raw(*args))

    # -- text / json ------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"ParamPoly({format_poly(self)!r})"

    def to_json(self) -> list[dict]:
        return [
            {
                "num": str(c.numerator),
                "den": str(c.denominator),
                "exp": dict(zip(VARS, exp)),
            }
            for exp, c in self.terms()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> ParamPoly:
        terms = {}
        for item in data:
            exp = tuple(int(item["exp"].get(v, 0)) for v in VARS)
            extra = set(item["exp"]) - set(VARS)
            if extra:
                raise ValueError(f"unknown variables in term: {sorted(extra)}")
            c = Fraction(int(item["num"]), int(item["den"]))
            if c == 0:
                raise ValueError("zero coefficient in term list")
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp}")
            terms[exp] = c
        return cls(terms)


def _monomial_text(exp) -> str:
    parts = []
    for name, e in zip(VARS, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _abs_term_text(exp, c: Fraction) -> str:
    mono = _monomial_text(exp)
    c = abs(c)
    cs = str(c)
    if not mono:
        return cs
    return mono if c == 1 else f"{cs}*{mono}"


def format_poly(p: ParamPoly) -> str:
    """Render in canonical order using the expression-language syntax."""
    terms = p.terms()
    if not terms:
        return "0"
    out = []
    for i, (exp, c) in enumerate(terms):
        text = _abs_term_text(exp, c)
        if i == 0:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append((" - " if c < 0 else " + ") + text)
    return "".join(out)


def poly_add(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    return p + q


def poly_mul(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    return p * q


def poly_diff(p: ParamPoly, var: str) -> ParamPoly:
    return p.diff(var)


def poly_eval_params(p: ParamPoly, bind: Mapping[str, object]) -> ParamPoly:
    return p.eval_params(bind)


ZERO = ParamPoly()
ONE = ParamPoly.const(1)
t, u, a, b, w = (ParamPoly.var(n) for n in VARS)
