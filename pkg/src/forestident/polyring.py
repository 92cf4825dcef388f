"""Sparse multivariate polynomials with integer coefficients over edge variables.

A monomial is packed into a single Python int: the exponent of variable ``i``
occupies bits ``[FIELD*i, FIELD*(i+1))``.  Multiplying monomials is then integer
addition, which keeps forest-polynomial products cheap.  Callers never see the
packing; :meth:`Poly.terms` yields ``{var: exponent}`` maps.
"""

from __future__ import annotations

import re
from functools import cached_property
from typing import Iterable, Iterator, Mapping

FIELD = 16
_MASK = (1 << FIELD) - 1
MAX_EXPONENT = _MASK


class MissingVariable(KeyError):
    """Raised when an evaluation assignment omits a variable of the polynomial."""


def pack(exponents: Mapping[int, int]) -> int:
    key = 0
    for var, exp in exponents.items():
        if var < 0:
            raise ValueError(f"variable id must be nonnegative, got {var}")
        if exp < 0 or exp > MAX_EXPONENT:
            raise ValueError(f"exponent {exp} out of range")
        key |= exp << (FIELD * var)
    return key


def unpack(key: int) -> dict[int, int]:
    out = {}
    var = 0
    while key:
        exp = key & _MASK
        if exp:
            out[var] = exp
        key >>= FIELD
        var += 1
    return out


def _exponent_tuple(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (FIELD * v)) & _MASK for v in range(nvars))


def _degree(key: int) -> int:
    total = 0
    while key:
        total += key & _MASK
        key >>= FIELD
    return total


class Poly:
    """Immutable polynomial: a map from monomials to nonzero integer coefficients."""

    def __init__(self, terms: Mapping[int, int] | None = None):
        # Internal constructor: keys are packed monomials.
        self._terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> Poly:
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls) -> Poly:
        return cls._raw({})

    @classmethod
    def const(cls, c: int) -> Poly:
        return cls._raw({0: int(c)} if c else {})

    @classmethod
    def var(cls, i: int) -> Poly:
        return cls._raw({pack({i: 1}): 1})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Mapping[int, int], int]]) -> Poly:
        acc: dict[int, int] = {}
        for exps, c in terms:
            k = pack({v: e for v, e in exps.items() if e})
            acc[k] = acc.get(k, 0) + int(c)
        return cls({k: c for k, c in acc.items() if c})

    @classmethod
    def monomial(cls, variables: Iterable[int], coeff: int = 1) -> Poly:
        exps: dict[int, int] = {}
        for v in variables:
            exps[v] = exps.get(v, 0) + 1
        return cls.from_terms([(exps, coeff)])

    # ------------------------------------------------------------------ views

    def __iter__(self) -> Iterator[tuple[dict[int, int], int]]:
        return iter(self.terms())

    def terms(self) -> list[tuple[dict[int, int], int]]:
        """Terms in canonical (graded lexicographic) order."""
        return [(unpack(k), self._terms[k]) for k in self._sorted_keys()]

    def _sorted_keys(self) -> list[int]:
        nv = self.nvars
        return sorted(
            self._terms,
            key=lambda k: (-_degree(k), tuple(-e for e in _exponent_tuple(k, nv))),
        )

    @cached_property
    def nvars(self) -> int:
        """One more than the largest variable id present (0 for constants)."""
        top = 0
        for k in self._terms:
            top = max(top, (k.bit_length() + FIELD - 1) // FIELD)
        return top

    @cached_property
    def max_exponent(self) -> int:
        best = 0
        for k in self._terms:
            while k:
                best = max(best, k & _MASK)
                k >>= FIELD
        return best

    def variables(self) -> set[int]:
        out: set[int] = set()
        for k in self._terms:
            out.update(unpack(k))
        return out

    def degree(self) -> int:
        return max((_degree(k) for k in self._terms), default=0)

    def is_squarefree(self) -> bool:
        return self.max_exponent <= 1

    def coefficient(self, exponents: Mapping[int, int]) -> int:
        return self._terms.get(pack(exponents), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # ------------------------------------------------------------ arithmetic

    def __add__(self, other: Poly | int) -> Poly:
        if isinstance(other, int):
            other = Poly.const(other)
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for k, c in small.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Poly | int) -> Poly:
        if isinstance(other, int):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other: int) -> Poly:
        return Poly.const(other) - self

    def __mul__(self, other: Poly | int) -> Poly:
        if isinstance(other, int):
            if not other:
                return Poly.zero()
            return Poly._raw({k: c * other for k, c in self._terms.items()})
        if not self._terms or not other._terms:
            return Poly.zero()
        if self.max_exponent + other.max_exponent > MAX_EXPONENT:
            raise OverflowError("exponent exceeds packed field width")
        out: dict[int, int] = {}
        get = out.get
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
        return Poly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------ evaluation

    def eval(self, assignment: Mapping[int, int]) -> int:
        return poly_eval(self, assignment)

    def eval_mod(self, assignment: Mapping[int, int], p: int) -> int:
        total = 0
        for k, c in self._terms.items():
            term = c
            var = 0
            while k:
                e = k & _MASK
                if e:
                    term = term * pow(assignment[var], e, p) % p
                k >>= FIELD
                var += 1
            total += term
        return total % p

    def complement(self, variables: Iterable[int]) -> Poly:
        """Swap each squarefree monomial for its complement within ``variables``.

        Forest edges are traded for non-forest edges this way: the Laplacian minor
        sums over forest-edge monomials, forest polynomials over the others.
        """
        full = pack({v: 1 for v in variables})
        if not self.is_squarefree():
            raise ValueError("complement requires a squarefree polynomial")
        out = {}
        for k, c in self._terms.items():
            if k & ~full:
                raise ValueError("polynomial uses a variable outside the complement set")
            out[full - k] = c
        return Poly._raw(out)

    # ------------------------------------------------------------------ text

    def to_text(self, names: Mapping[int, str] | None = None) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for key in self._sorted_keys():
            c = self._terms[key]
            factors = []
            for v, e in sorted(unpack(key).items()):
                name = names[v] if names is not None else f"a{v}"
                factors.append(name if e == 1 else f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, names: Mapping[str, int] | None = None) -> Poly:
        """Inverse of :meth:`to_text`.

        ``names`` maps variable names to ids; without it names must look like ``a7``.
        """
        s = text.replace(" ", "")
        if s == "0":
            return cls.zero()
        if not s:
            raise ValueError("empty polynomial text")
        if s[0] not in "+-":
            s = "+" + s
        acc: dict[int, int] = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coeff = 1
            exps: dict[int, int] = {}
            for factor in body.split("*"):
                if factor.isdigit():
                    coeff *= int(factor)
                    continue
                name, _, power = factor.partition("^")
                if names is not None:
                    if name not in names:
                        raise ValueError(f"unknown variable {name!r}")
                    var = names[name]
                else:
                    m = re.fullmatch(r"a(\d+)", name)
                    if not m:
                        raise ValueError(f"bad variable {name!r}")
                    var = int(m.group(1))
                exps[var] = exps.get(var, 0) + (int(power) if power else 1)
            k = pack(exps)
            acc[k] = acc.get(k, 0) + (-coeff if sign == "-" else coeff)
        return cls(acc)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_eval(p: Poly, assignment: Mapping[int, int]) -> int:
    total = 0
    for k, c in p._terms.items():
        term = c
        var = 0
        while k:
            e = k & _MASK
            if e:
                try:
                    x = assignment[var]
                except KeyError:
                    raise MissingVariable(var) from None
                term *= x**e
            k >>= FIELD
            var += 1
        total += term
    return total


def poly_sum(polys: Iterable[Poly]) -> Poly:
    acc: dict[int, int] = {}
    for p in polys:
        for k, c in p._terms.items():
            acc[k] = acc.get(k, 0) + c
    return Poly._raw({k: c for k, c in acc.items() if c})
