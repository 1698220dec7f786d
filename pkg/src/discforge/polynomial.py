"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .exactnum import as_fraction, format_rational, int_content


class Polynomial:
    """Polynomial in named variables; terms map exponent tuples to coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | Iterable = ()):
        self.variables = tuple(variables)
        data: dict[tuple[int, ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        nv = len(self.variables)
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} does not match {nv} variables")
            v = data.get(exp, 0) + as_fraction(c)
            if v:
                data[exp] = v
            else:
                data.pop(exp, None)
        self.terms = dict(sorted(data.items(), key=_term_order))

    # -- construction ---------------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise KeyError(name)
        return cls(variables, {exp: 1})

    @classmethod
    def linear(cls, variables: Sequence[str], coeffs: Sequence) -> "Polynomial":
        nv = len(variables)
        return cls(variables, {tuple(int(i == j) for j in range(nv)): c
                               for i, c in enumerate(coeffs)})

    # -- arithmetic -----------------------------------------------------------

    def _same(self, other: "Polynomial"):
        if other.variables != self.variables:
            raise ValueError("polynomials over different variable sets")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._same(other)
            return other
        return Polynomial.constant(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.variables, other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- queries --------------------------------------------------------------

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        return {sum(a * w for a, w in zip(e, weights)) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def content(self) -> int:
        return int_content(self.terms.values())

    def scale(self, c) -> "Polynomial":
        c = as_fraction(c)
        return Polynomial(self.variables, {e: c * v for e, v in self.terms.items()})

    def evaluate(self, values: Mapping[str, object] | Sequence) -> object:
        """Evaluate at a point; values may be any ring elements supporting ``*`` and ``+``."""
        if isinstance(values, Mapping):
            missing = [v for v in self.variables if v not in values]
            if missing:
                raise KeyError(f"missing values for {missing}")
            vals = [values[v] for v in self.variables]
        else:
            vals = list(values)
            if len(vals) != len(self.variables):
                raise ValueError("wrong number of values")
        powers: list[dict[int, object]] = [{} for _ in vals]
        total = 0
        for exp, c in self.terms.items():
            term = c
            for i, e in enumerate(exp):
                if e:
                    p = powers[i].get(e)
                    if p is None:
                        p = powers[i][e] = vals[i] ** e
                    term = term * p
            total = total + term
        return total

    def evaluate_mod(self, values: Sequence[int], p: int) -> int:
        total = 0
        for exp, c in self.terms.items():
            term = c.numerator * pow(c.denominator, -1, p)
            for v, e in zip(values, exp):
                if e:
                    term = term * pow(v, e, p) % p
            total += term
        return total % p

    def substitute(self, mapping: Mapping[str, "str | int | Polynomial | None"],
                   variables: Sequence[str] | None = None) -> "Polynomial":
        """Formal substitution into a polynomial over ``variables``.

        Each image is a variable name, ``0``/``None``, a constant, or a polynomial.
        Variables missing from ``mapping`` keep their name.
        """
        if variables is None:
            names = []
            for v in self.variables:
                img = mapping.get(v, v)
                if isinstance(img, str) and img not in names:
                    names.append(img)
                elif isinstance(img, Polynomial):
                    for w in img.variables:
                        if w not in names:
                            names.append(w)
            variables = names
        variables = tuple(variables)
        images = []
        for v in self.variables:
            img = mapping.get(v, v)
            if img is None:
                img = 0
            if isinstance(img, str):
                img = Polynomial.variable(variables, img)
            elif isinstance(img, Polynomial):
                if img.variables != variables:
                    img = img.rename(variables)
            else:
                img = Polynomial.constant(variables, img)
            images.append(img)
        result = Polynomial(variables)
        cache: list[dict[int, Polynomial]] = [{} for _ in images]
        for exp, c in self.terms.items():
            term = Polynomial.constant(variables, c)
            for i, e in enumerate(exp):
                if e:
                    p = cache[i].get(e)
                    if p is None:
                        p = cache[i][e] = images[i] ** e
                    term = term * p
                    if not term:
                        break
            result = result + term
        return result

    def rename(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over a superset of the variables (by name)."""
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        out = {}
        for exp, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exp):
                if e:
                    if v not in index:
                        raise KeyError(f"variable {v} not in target set")
                    new[index[v]] += e
            out[tuple(new)] = c
        return Polynomial(variables, out)

    def map_variables(self, perm: Callable[[tuple[int, ...]], tuple[tuple[int, ...], int]]) -> "Polynomial":
        out = {}
        for exp, c in self.terms.items():
            new, sign = perm(exp)
            out[new] = out.get(new, 0) + sign * c
        return Polynomial(self.variables, out)

    def __repr__(self):
        return f"Polynomial({self.to_string()})"

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.terms.items():
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(self.variables, exp) if e)
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _term_order(item):
    exp = item[0]
    return (-sum(exp), tuple(-e for e in exp))


# ---------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``+ - * / ^ ( )`` expressions over integers and the given variables."""
    variables = tuple(variables)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:pos + 20]!r}")
        num, name, op = m.groups()
        tokens.append(("num", int(num)) if num else ("name", name) if name else ("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        result = term() if sign == 1 else -term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            result = result + t if op == "+" else result - t
        return result

    def term():
        result = factor()
        while True:
            tok = peek()
            if tok == ("op", "*"):
                take()
                result = result * factor()
            elif tok == ("op", "/"):
                take()
                f = factor()
                if len(f.terms) != 1 or any(next(iter(f.terms))):
                    raise ValueError("division only by constants")
                result = result.scale(1 / next(iter(f.terms.values())))
            elif tok[0] in ("num", "name") or tok == ("op", "("):
                result = result * factor()
            else:
                return result

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, e = take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            base = base ** e
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return Polynomial.constant(variables, val)
        if kind == "name":
            if val not in variables:
                raise ValueError(f"unknown variable {val!r}")
            return Polynomial.variable(variables, val)
        if (kind, val) == ("op", "("):
            r = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return r
        if (kind, val) == ("op", "-"):
            return -factor()
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input at token {peek()[1]!r}")
    return result


def multinomial(exp: Sequence[int]) -> int:
    out = factorial(sum(exp))
    for e in exp:
        out //= factorial(e)
    return out


def exponent_vectors(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree, lexicographically descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for first in range(degree, -1, -1):
        for rest in exponent_vectors(nvars - 1, degree - first):
            out.append((first, *rest))
    return out
