"""Stored polynomial expressions: invariant expressions and coordinate polynomials.

Both kinds share one plain-text format::

    generators: f12:12 f18:18 f24:24 f30:30
    degree: 120
    10 0 0 0 1
    8 0 1 0 -188875/1526823

The header lists each generator with its weight (coordinate polynomials use
weight 1), then one term per line: exponents followed by an exact rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .exactnum import as_fraction, format_rational, parse_rational, reduce_mod
from .exterior import HypercubeTensor, Multivector, permutation_sign
from .polynomial import Polynomial

__all__ = [
    "ExpressionError", "InvariantExpression", "CoordinatePolynomialEntry",
    "builtin", "builtin_names", "evaluate", "substitute", "load", "save",
    "parse_expression", "load_coordinate_polynomial",
    "projection_gr36_to_222", "symmetrization_222", "GR48_ANCHORS",
]


class ExpressionError(ValueError):
    pass


def _canonical(terms: Mapping) -> dict[tuple[int, ...], Fraction]:
    out = {}
    for exp, c in sorted(terms.items(), key=lambda kv: tuple(-e for e in kv[0])):
        c = as_fraction(c)
        if c:
            out[tuple(int(e) for e in exp)] = c
    return out


@dataclass(frozen=True, eq=False)
class _Stored:
    names: tuple[str, ...]
    weights: tuple[int, ...]
    terms: dict[tuple[int, ...], Fraction]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise ExpressionError("generator names and weights differ in length")
        terms = _canonical(self.terms)
        for exp in terms:
            if len(exp) != len(self.names) or min(exp, default=0) < 0:
                raise ExpressionError(f"bad exponent vector {exp}")
        object.__setattr__(self, "terms", terms)
        degs = {self._weighted(exp) for exp in terms}
        if len(degs) > 1:
            raise ExpressionError(f"expression is not homogeneous: weighted degrees {sorted(degs)}")

    def _weighted(self, exp) -> int:
        return sum(w * e for w, e in zip(self.weights, exp))

    @property
    def degree(self) -> int:
        return self._weighted(next(iter(self.terms))) if self.terms else 0

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (type(self) is type(other) and self.names == other.names
                and self.weights == other.weights and self.terms == other.terms)

    def __hash__(self):
        return hash((self.names, tuple(self.terms.items())))

    def coefficient(self, exp: Sequence[int] | Mapping[str, int]) -> Fraction:
        if isinstance(exp, Mapping):
            exp = tuple(exp.get(n, 0) for n in self.names)
        return self.terms.get(tuple(exp), Fraction(0))

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.names, self.terms)

    def _values(self, values) -> list:
        raise NotImplementedError

    def evaluate(self, values) -> Fraction:
        vals = self._values(values)
        total = 0
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(vals, exp):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def evaluate_mod(self, values: Sequence[int], p: int) -> int:
        vals = [int(v) % p for v in values]
        total = 0
        for exp, c in self.terms.items():
            term = reduce_mod(c, p)
            for v, e in zip(vals, exp):
                if e:
                    term = term * pow(v, e, p) % p
            total += term
        return total % p

    def format(self) -> str:
        lines = ["generators: " + " ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights)),
                 f"degree: {self.degree}"]
        lines += [" ".join(map(str, exp)) + " " + format_rational(c) for exp, c in self.terms.items()]
        return "\n".join(lines) + "\n"


class InvariantExpression(_Stored):
    """A weighted-homogeneous polynomial in named fundamental invariants.

    Evaluation accepts a mapping keyed by generator name (``"f12"``) or by
    degree (``12``), or anything with a ``values`` dict keyed by degree.
    """

    def __init__(self, names: Sequence[str], degrees: Sequence[int], terms: Mapping):
        super().__init__(tuple(names), tuple(degrees), dict(terms))

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.weights

    def _values(self, values) -> list:
        if hasattr(values, "values") and isinstance(getattr(values, "values"), Mapping):
            values = values.values
        if not isinstance(values, Mapping):
            values = list(values)
            if len(values) != len(self.names):
                raise ExpressionError(f"expected {len(self.names)} invariant values")
            return [as_fraction(v) for v in values]
        out = []
        for name, d in zip(self.names, self.weights):
            if name in values:
                out.append(as_fraction(values[name]))
            elif d in values:
                out.append(as_fraction(values[d]))
            else:
                raise ExpressionError(f"no value for generator {name}")
        return out

    def __repr__(self):
        return f"InvariantExpression({len(self)} terms, degree {self.degree})"


class CoordinatePolynomialEntry(_Stored):
    """An explicit polynomial in tensor coordinates (all variables weight 1).

    Variables are named after basis elements: ``p123`` for the exterior
    coordinate on e1^e2^e3, ``x010`` for a hypercube entry, ``s001`` for a
    binary-form coefficient.
    """

    def __init__(self, names: Sequence[str], terms: Mapping):
        super().__init__(tuple(names), (1,) * len(names), dict(terms))

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "CoordinatePolynomialEntry":
        return cls(poly.variables, poly.terms)

    def _values(self, values) -> list:
        if isinstance(values, Mapping):
            try:
                return [as_fraction(values[n]) for n in self.names]
            except KeyError as exc:
                raise ExpressionError(f"no value for variable {exc.args[0]}") from None
        values = list(values)
        if len(values) != len(self.names):
            raise ExpressionError(f"expected {len(self.names)} coordinates")
        return [as_fraction(v) for v in values]

    def evaluate_tensor(self, t) -> Fraction:
        """Evaluate on a Multivector (``p``-variables) or HypercubeTensor (``x``/``s``)."""
        if isinstance(t, Multivector):
            entries = dict(t.items())
            vals = {n: entries.get(tuple(int(ch) for ch in n[1:]), 0) for n in self.names}
        elif isinstance(t, HypercubeTensor):
            vals = {n: t.entries.get(tuple(int(ch) for ch in n[1:]), 0) for n in self.names}
        else:
            raise TypeError("expected a Multivector or HypercubeTensor")
        return self.evaluate(vals)

    def __repr__(self):
        return f"CoordinatePolynomialEntry({self.as_polynomial().to_string()})"


def evaluate(expr: _Stored, values) -> Fraction:
    return expr.evaluate(values)


def substitute(poly: CoordinatePolynomialEntry,
               mapping: Mapping[str, str | int | None]) -> CoordinatePolynomialEntry:
    """Replace each variable by another variable, ``0`` or ``None`` (zero).

    ``mapping`` must cover every variable.  Images may also be
    ``(coefficient, name)`` pairs for signed or scaled substitutions.
    """
    missing = [n for n in poly.names if n not in mapping]
    if missing:
        raise ExpressionError(f"substitution map misses {missing[:5]}")
    images = []
    targets: list[str] = []
    for n in poly.names:
        img = mapping[n]
        if img is None or (not isinstance(img, (str, tuple)) and img == 0):
            images.append(None)
            continue
        c, name = (Fraction(1), img) if isinstance(img, str) else (as_fraction(img[0]), img[1])
        if name not in targets:
            targets.append(name)
        images.append((c, name))
    targets.sort()
    index = {n: i for i, n in enumerate(targets)}
    out: dict[tuple[int, ...], Fraction] = {}
    for exp, coeff in poly.terms.items():
        new = [0] * len(targets)
        c = coeff
        for img, e in zip(images, exp):
            if not e:
                continue
            if img is None:
                break
            c *= img[0] ** e
            new[index[img[1]]] += e
        else:
            key = tuple(new)
            out[key] = out.get(key, 0) + c
    return CoordinatePolynomialEntry(targets, out)


def projection_gr36_to_222() -> dict[str, tuple[int, str] | None]:
    """Map from exterior coordinates of a 3-form on 6-space to a 2x2x2 cube.

    The 6-space splits into pairs (1,4), (2,5), (3,6); a Pluecker coordinate
    survives only if it picks one index from each pair.  The cube entry
    ``x_abc`` is the coefficient of the wedge taken in pair order, hence the
    permutation sign.
    """
    mapping: dict[str, tuple[int, str] | None] = {}
    for key in itertools.combinations(range(1, 7), 3):
        name = "p" + "".join(map(str, key))
        pairs = [(i - 1) % 3 for i in key]
        if sorted(pairs) != [0, 1, 2]:
            mapping[name] = None
            continue
        bits = {pair: 0 if i <= 3 else 1 for pair, i in zip(pairs, key)}
        mapping[name] = (permutation_sign(pairs), "x" + "".join(str(bits[a]) for a in range(3)))
    return mapping


def symmetrization_222() -> dict[str, str]:
    return {"x" + "".join(b): "s" + "".join(sorted(b))
            for b in itertools.product("01", repeat=3)}


# ---------------------------------------------------------------------------
# files


def parse_expression(text: str, source: str = "<string>", kind: str = "invariant") -> _Stored:
    names: list[str] = []
    weights: list[int] = []
    degree = None
    terms: dict[tuple[int, ...], Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        if line.startswith("generators:"):
            for item in line.split(":", 1)[1].split():
                name, _, w = item.partition(":")
                try:
                    weights.append(int(w) if w else 1)
                except ValueError:
                    raise ExpressionError(f"{where}: bad generator weight {item!r}") from None
                names.append(name)
            continue
        if line.startswith("degree:"):
            try:
                degree = int(line.split(":", 1)[1])
            except ValueError:
                raise ExpressionError(f"{where}: bad degree line") from None
            continue
        if not names:
            raise ExpressionError(f"{where}: term before the generators header")
        parts = line.split()
        if len(parts) != len(names) + 1:
            raise ExpressionError(f"{where}: expected {len(names)} exponents and a coefficient")
        try:
            exp = tuple(int(x) for x in parts[:-1])
        except ValueError:
            raise ExpressionError(f"{where}: bad exponent in {line!r}") from None
        try:
            coeff = parse_rational(parts[-1])
        except (ValueError, ZeroDivisionError):
            raise ExpressionError(f"{where}: malformed rational literal {parts[-1]!r}") from None
        if exp in terms:
            raise ExpressionError(f"{where}: repeated monomial {exp}")
        terms[exp] = coeff
    if not names:
        raise ExpressionError(f"{source}: missing generators header")
    try:
        if kind == "invariant":
            expr = InvariantExpression(names, weights, terms)
        else:
            expr = CoordinatePolynomialEntry(names, terms)
    except ExpressionError as exc:
        raise ExpressionError(f"{source}: {exc}") from None
    if degree is not None and expr.terms and expr.degree != degree:
        raise ExpressionError(f"{source}: header degree {degree} but terms have degree {expr.degree}")
    return expr


def load(path: str | Path) -> InvariantExpression:
    path = Path(path)
    return parse_expression(path.read_text(), str(path))


def load_coordinate_polynomial(path: str | Path) -> CoordinatePolynomialEntry:
    path = Path(path)
    return parse_expression(path.read_text(), str(path), kind="coordinate")


def save(expr: _Stored, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(expr.format())
    return path


# ---------------------------------------------------------------------------
# built-in expressions

_INVARIANT = ("gr39_discriminant", "hd2222", "f10_relation", "f14_relation", "f18_relation")
_COORDINATE = ("delta222", "gr36_dual", "binary_cubic_disc")

# Two known coefficients of the Gr(4,8) discriminant, over generators
# f2 f6 f8 f10 f12 f14 f18.
GR48_ANCHORS = {
    (63, 0, 0, 0, 0, 0, 0): Fraction(
        -11228550634163820692582736367065066800237662227759449345598861374381270810701586235392,
        1900359976262346454474448419809074880484088763429831167939681466204604687770731158447265625),
    (0, 0, 0, 0, 0, 0, 7): Fraction(3, 1690514664168754070821429178618909),
}


def builtin_names() -> tuple[str, ...]:
    return _INVARIANT + _COORDINATE


@lru_cache(maxsize=None)
def builtin(name: str):
    if name not in _INVARIANT + _COORDINATE:
        raise ExpressionError(f"unknown built-in expression {name!r}; known: {', '.join(builtin_names())}")
    text = resources.files("discforge").joinpath("data", f"{name}.txt").read_text()
    return parse_expression(text, f"<builtin {name}>",
                            kind="invariant" if name in _INVARIANT else "coordinate")
