"""Exact finitely supported sequences over the rationals.

Scalars are :class:`fractions.Fraction` throughout.  A :class:`SparseVec`
maps 1-based coordinates to nonzero Fractions and is immutable; the same
class doubles as a coefficient map in basis coordinates (``CoeffMap``).
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Union

Rational = Fraction
Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?\Z")


def as_rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats (they are inexact)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact scalar {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse the ``p`` / ``p/q`` grammar used by every serialized record."""
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"malformed rational {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class SparseVec(Mapping):
    """Immutable mapping index (>= 1) -> nonzero Fraction.

    Zeros are dropped on construction, so two vectors compare equal exactly
    when they agree coordinatewise.
    """

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping | Iterable[tuple[int, Scalar]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        coords: dict[int, Fraction] = {}
        for key, value in items:
            if isinstance(key, bool) or not isinstance(key, int):
                raise TypeError(f"index must be an int, got {key!r}")
            if key < 1:
                raise ValueError(f"indices are 1-based, got {key}")
            value = as_rational(value)
            total = coords.get(key, 0) + value
            if total:
                coords[key] = total
            else:
                coords.pop(key, None)
        self._data = dict(sorted(coords.items()))
        self._hash = None

    @classmethod
    def _trusted(cls, coords: dict[int, Fraction]) -> SparseVec:
        # caller guarantees int keys >= 1, nonzero Fraction values
        out = cls.__new__(cls)
        out._data = dict(sorted(coords.items()))
        out._hash = None
        return out

    def __getitem__(self, index: int) -> Fraction:
        return self._data[index]

    def get(self, index, default=Fraction(0)):
        return self._data.get(index, default)

    def __iter__(self) -> Iterator[int]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseVec):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == SparseVec(other)._data
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {format_rational(v)}" for k, v in self._data.items())
        return f"SparseVec({{{inner}}})"

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._data)

    @property
    def max_index(self) -> int:
        """Largest index in the support, 0 for the empty vector."""
        return max(self._data, default=0)

    def __add__(self, other: SparseVec) -> SparseVec:
        return linear_combine([(1, self), (1, other)])

    def __sub__(self, other: SparseVec) -> SparseVec:
        return linear_combine([(1, self), (-1, other)])

    def __neg__(self) -> SparseVec:
        return SparseVec._trusted({k: -v for k, v in self._data.items()})

    def __mul__(self, scalar: Scalar) -> SparseVec:
        scalar = as_rational(scalar)
        if not scalar:
            return SparseVec()
        return SparseVec._trusted({k: scalar * v for k, v in self._data.items()})

    __rmul__ = __mul__

    def restrict(self, indices: Iterable[int]) -> SparseVec:
        return restrict(self, indices)

    def to_json(self) -> str:
        return dumps_vec(self)


CoeffMap = SparseVec


def l1_norm(v: Mapping[int, Fraction]) -> Fraction:
    return sum((abs(t) for t in v.values()), Fraction(0))


def sup_norm(v: Mapping[int, Fraction]) -> Fraction:
    return max((abs(t) for t in v.values()), default=Fraction(0))


def pair(f: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Fraction:
    """Duality pairing sum_j f(j) v(j)."""
    if len(f) > len(v):
        f, v = v, f
    total = Fraction(0)
    for j, t in f.items():
        s = v.get(j)
        if s:
            total += t * s
    return total


def linear_combine(terms: Iterable[tuple[Scalar, Mapping[int, Fraction]]]) -> SparseVec:
    acc: dict[int, Fraction] = {}
    for c, vec in terms:
        c = as_rational(c)
        if not c:
            continue
        for j, t in vec.items():
            acc[j] = acc.get(j, 0) + c * t
    return SparseVec._trusted({j: t for j, t in acc.items() if t})


def restrict(v: Mapping[int, Fraction], indices: Iterable[int]) -> SparseVec:
    """Coordinate projection onto ``indices``."""
    keep = indices if isinstance(indices, (set, frozenset)) else set(indices)
    return SparseVec._trusted({j: t for j, t in v.items() if j in keep})


def vec_to_obj(v: Mapping[int, Fraction]) -> dict[str, str]:
    return {str(k): format_rational(v[k]) for k in sorted(v)}


def vec_from_obj(obj: Mapping[str, str]) -> SparseVec:
    if not isinstance(obj, Mapping):
        raise ValueError("vector must be a JSON object")
    items = []
    for key, value in obj.items():
        if not re.fullmatch(r"[1-9]\d*", key):
            raise ValueError(f"malformed index {key!r}")
        if not isinstance(value, str):
            raise ValueError(f"coordinate {key} must be a rational string")
        items.append((int(key), parse_rational(value)))
    return SparseVec(items)


def dumps_vec(v: Mapping[int, Fraction]) -> str:
    return json.dumps(vec_to_obj(v), separators=(",", ":"))


def loads_vec(text: str) -> SparseVec:
    return vec_from_obj(json.loads(text))
