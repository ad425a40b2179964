"""Scalar backends and functions on the finite space.

Two backends are supported: exact rationals (``fractions.Fraction``) and
complex floats compared with a tolerance.  All higher layers are generic
over the backend; values are plain Python scalars, the backend object only
supplies comparison, parsing and serialization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import BackendMismatch

RATIONAL = "rational"
COMPLEX = "complex"


@dataclass(frozen=True)
class Backend:
    """Scalar field tag plus the comparison tolerance for the float case."""

    name: str
    eps: float = 1e-9

    @staticmethod
    def rational() -> "Backend":
        return Backend(RATIONAL, 0.0)

    @staticmethod
    def complex(eps: float = 1e-9) -> "Backend":
        return Backend(COMPLEX, eps)

    @property
    def exact(self) -> bool:
        return self.name == RATIONAL

    def zero(self):
        return Fraction(0) if self.exact else 0j

    def one(self):
        return Fraction(1) if self.exact else 1 + 0j

    def coerce(self, value):
        """Coerce a Python number into this backend's scalar type."""
        if self.exact:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, int):
                return Fraction(value)
            if isinstance(value, str):
                return Fraction(value)
            raise BackendMismatch(f"cannot coerce {value!r} to a rational scalar")
        if isinstance(value, complex):
            return value
        if isinstance(value, (int, float, Fraction)):
            return complex(value)
        if isinstance(value, str):
            return complex(Fraction(value))
        raise BackendMismatch(f"cannot coerce {value!r} to a complex scalar")

    def eq(self, a, b) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.eps * (1 + max(abs(a), abs(b)))

    def is_zero(self, a) -> bool:
        if self.exact:
            return a == 0
        return abs(a) <= self.eps

    def parse(self, obj):
        """Parse a scalar from problem-file JSON ("p/q" string or [re, im])."""
        if isinstance(obj, str):
            return self.coerce(Fraction(obj))
        if isinstance(obj, bool):
            raise BackendMismatch(f"not a scalar: {obj!r}")
        if isinstance(obj, int):
            return self.coerce(obj)
        if isinstance(obj, (list, tuple)) and len(obj) == 2:
            if self.exact:
                raise BackendMismatch("complex literal in a rational problem")
            return complex(float(obj[0]), float(obj[1]))
        if isinstance(obj, float):
            if self.exact:
                raise BackendMismatch("float literal in a rational problem")
            return complex(obj)
        raise BackendMismatch(f"not a scalar: {obj!r}")

    def serialize(self, a):
        if self.exact:
            return str(a)
        return [a.real, a.imag]

    def random(self, rng: random.Random):
        """Small random scalar, nonzero-biased; used for seeded searches."""
        if self.exact:
            return Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        return complex(rng.randint(-4, 4), rng.randint(-2, 2))

    def check_same(self, other: "Backend") -> None:
        if self.name != other.name:
            raise BackendMismatch(f"{self.name} vs {other.name}")


@dataclass(frozen=True)
class Fn:
    """An element of k = F(S): one scalar per point of the space."""

    values: tuple
    backend: Backend

    @staticmethod
    def constant(c, size: int, backend: Backend) -> "Fn":
        c = backend.coerce(c)
        return Fn((c,) * size, backend)

    @staticmethod
    def zero(size: int, backend: Backend) -> "Fn":
        return Fn.constant(0, size, backend)

    @staticmethod
    def one(size: int, backend: Backend) -> "Fn":
        return Fn.constant(1, size, backend)

    @staticmethod
    def delta(x: int, size: int, backend: Backend) -> "Fn":
        vals = [backend.zero()] * size
        vals[x] = backend.one()
        return Fn(tuple(vals), backend)

    @staticmethod
    def from_values(values: Sequence[Any], backend: Backend) -> "Fn":
        return Fn(tuple(backend.coerce(v) for v in values), backend)

    def __len__(self) -> int:
        return len(self.values)

    def __add__(self, other: "Fn") -> "Fn":
        self.backend.check_same(other.backend)
        return Fn(tuple(a + b for a, b in zip(self.values, other.values)), self.backend)

    def __sub__(self, other: "Fn") -> "Fn":
        self.backend.check_same(other.backend)
        return Fn(tuple(a - b for a, b in zip(self.values, other.values)), self.backend)

    def __mul__(self, other: "Fn") -> "Fn":
        self.backend.check_same(other.backend)
        return Fn(tuple(a * b for a, b in zip(self.values, other.values)), self.backend)

    def __neg__(self) -> "Fn":
        return Fn(tuple(-a for a in self.values), self.backend)

    def scale(self, c) -> "Fn":
        c = self.backend.coerce(c)
        return Fn(tuple(c * a for a in self.values), self.backend)

    def translate(self, ginv_image: Sequence[int]) -> "Fn":
        """(g.f)(x) = f(g^{-1}x); caller supplies the image array of g^{-1}."""
        return Fn(tuple(self.values[ginv_image[x]] for x in range(len(self.values))), self.backend)

    def is_zero(self) -> bool:
        return all(self.backend.is_zero(v) for v in self.values)

    def eq(self, other: "Fn") -> bool:
        return all(self.backend.eq(a, b) for a, b in zip(self.values, other.values))

    def is_constant(self) -> bool:
        """Pointwise spread within tolerance of a single value."""
        first = self.values[0]
        return all(self.backend.eq(v, first) for v in self.values)
