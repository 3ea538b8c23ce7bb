"""Polynomials in the ordered monomials H^n I1^m I2^p I12^q.

Coefficients are polynomials in a, b, w only.  A monomial is a plain
4-tuple ``(n, m, p, q)``; the operator it stands for is the composition
H^n . I1^m . I2^p . I12^q in that order.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, NamedTuple

from .polyring import ParamPoly

GEN_NAMES = ("H", "I1", "I2", "I12")


class GenMonomial(NamedTuple):
    n: int = 0
    m: int = 0
    p: int = 0
    q: int = 0

    @property
    def degree(self) -> int:
        return self.n + self.m + self.p + self.q

    def __str__(self) -> str:
        parts = []
        for name, e in zip(GEN_NAMES, self):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"


def _order_key(mono: GenMonomial):
    return (-mono.degree, tuple(-e for e in mono))


class GenPolynomial:
    """Immutable map GenMonomial -> ParamPoly(a, b, w) without zero entries."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        out: dict[GenMonomial, ParamPoly] = {}
        for mono, c in (terms or {}).items():
            mono = GenMonomial(*mono)
            if min(mono) < 0:
                raise ValueError(f"negative exponent in {tuple(mono)}")
            if not isinstance(c, ParamPoly):
                c = ParamPoly.const(c)
            if not c.free_of(("t", "u")):
                raise ValueError(f"coefficient of {mono} depends on t or u")
            c = out[mono] + c if mono in out else c
            out[mono] = c
        self._terms = {k: v for k, v in out.items() if not v.is_zero()}

    def items(self) -> list[tuple[GenMonomial, ParamPoly]]:
        return [(k, self._terms[k]) for k in sorted(self._terms, key=_order_key)]

    def monomials(self) -> list[GenMonomial]:
        return sorted(self._terms, key=_order_key)

    def coeff(self, mono: Iterable[int]) -> ParamPoly:
        return self._terms.get(GenMonomial(*mono), ParamPoly())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Largest n+m+p+q; -1 for the zero polynomial."""
        return max((m.degree for m in self._terms), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other: GenPolynomial) -> GenPolynomial:
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out[k] + v if k in out else v
        return GenPolynomial(out)

    def __neg__(self) -> GenPolynomial:
        return GenPolynomial({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: GenPolynomial) -> GenPolynomial:
        return self + (-other)

    def scale(self, s) -> GenPolynomial:
        return GenPolynomial({k: v * s for k, v in self._terms.items()})

    def eval_params(self, bind: Mapping[str, object]) -> GenPolynomial:
        return GenPolynomial({k: v.eval_params(bind) for k, v in self._terms.items()})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            text = str(c)
            if len(c) > 1:
                text = f"({text})"
            if mono.degree:
                text = str(mono) if text == "1" else f"{text}*{mono}"
            parts.append(text)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"GenPolynomial({str(self)[:200]!r})"

    def to_json(self) -> dict:
        return {
            "format": "genpoly-v1",
            "monomials": [
                {**dict(zip(GEN_NAMES, mono)), "coeff": c.to_json()} for mono, c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> GenPolynomial:
        if data.get("format") != "genpoly-v1":
            raise ValueError(f"expected format genpoly-v1, got {data.get('format')!r}")
        terms = {}
        for item in data["monomials"]:
            mono = GenMonomial(*(int(item.get(name, 0)) for name in GEN_NAMES))
            if mono in terms:
                raise ValueError(f"duplicate monomial {mono}")
            terms[mono] = ParamPoly.from_json(item["coeff"])
        return cls(terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> GenPolynomial:
        return cls.from_json(json.loads(text))
