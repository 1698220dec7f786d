"""Readers for the hand-transcribed reference data in tests/data."""

from fractions import Fraction
from pathlib import Path
import random

from discforge.exactnum import EisensteinRational
from discforge.polynomial import parse_polynomial

DATA = Path(__file__).with_name("data")

Z = ["z1", "z2", "z3", "z4"]
Y = [f"y{i}" for i in range(1, 8)]
T = ["t1", "t2", "t3", "t4"]
BCD = ["b", "c", "d"]

# omega and its conjugate as written in the factor tables
OMEGA_LITERAL = (EisensteinRational(0, 1), EisensteinRational(-1, -1))
# the same symbols read as -omega and -omega_bar
OMEGA_NEGATED = (EisensteinRational(0, -1), EisensteinRational(1, 1))


def factor_table(name, variables):
    out = []
    for line in (DATA / f"{name}.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        exponent, body = line.split(" ", 1)
        out.append((int(exponent), parse_polynomial(body, list(variables) + ["w", "wb"])))
    return out


def evaluate_factors(table, point, omega=OMEGA_LITERAL):
    values = [EisensteinRational(Fraction(x), 0) for x in point] + list(omega)
    acc = EisensteinRational(1, 0)
    for exponent, poly in table:
        acc = acc * poly.evaluate(values) ** exponent
    return acc


def rational(x):
    if isinstance(x, EisensteinRational):
        assert x.is_rational(), x
        return Fraction(x.a)
    return Fraction(x)


def reference_terms():
    rows = {}
    for line in (DATA / "reference_terms.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        family, degree, coeff, *exps = line.split()
        rows.setdefault((family, int(degree)), []).append((tuple(map(int, exps)), Fraction(int(coeff))))
    return rows


def random_rational(rng, size=40):
    """Nonzero rational with small numerator and denominator."""
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, size), rng.randint(1, 7))


def random_point(rng, n, size=40):
    return [random_rational(rng, size) for _ in range(n)]


def seeded(seed):
    return random.Random(seed)
