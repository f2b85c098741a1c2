"""Sparse complex amplitudes and probability masses on the integer lattice."""

from __future__ import annotations

import cmath
import math
import operator
from typing import Iterable, Iterator, Mapping, Tuple

__all__ = [
    "PRUNE_TOLERANCE",
    "MASS_TOLERANCE",
    "AmplitudeField",
    "Distribution",
    "norm_sq",
    "support",
    "superpose",
    "to_distribution",
    "max_difference",
]

# Entries whose modulus falls below this are treated as exact zeros; keeps
# floating-point dust from growing supports without ever touching the
# 1e-12 working tolerances.
PRUNE_TOLERANCE = 1e-15
MASS_TOLERANCE = 1e-12

_Entries = Mapping[int, complex] | Iterable[Tuple[int, complex]]


class AmplitudeField:
    """Finitely supported map from lattice sites to complex amplitudes.

    Zero entries are never stored: values with modulus below
    ``PRUNE_TOLERANCE`` are dropped at construction, so the stored keys are
    exactly the support.  Instances are immutable values; every operation
    returns a new field.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: _Entries = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        pruned: dict[int, complex] = {}
        for site, value in items:
            z = complex(value)
            if not cmath.isfinite(z):
                raise ValueError(f"non-finite amplitude {z!r} at site {site}")
            if abs(z) >= PRUNE_TOLERANCE:
                pruned[operator.index(site)] = z
        self._entries = pruned

    @classmethod
    def delta(cls, site: int, amplitude: complex = 1.0) -> "AmplitudeField":
        """Field concentrated on a single site."""
        return cls({site: amplitude})

    def __getitem__(self, site: int) -> complex:
        return self._entries.get(site, 0j)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def __contains__(self, site: int) -> bool:
        return site in self._entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AmplitudeField):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v!r}" for k, v in sorted(self._entries.items()))
        return f"AmplitudeField({{{inner}}})"

    def items(self):
        return self._entries.items()

    def support(self) -> set[int]:
        return set(self._entries)

    def shifted(self, offset: int) -> "AmplitudeField":
        """Same amplitudes translated by ``offset`` sites."""
        offset = operator.index(offset)
        return _field_from_pruned({k + offset: v for k, v in self._entries.items()})


def _field_from_pruned(entries: dict[int, complex]) -> AmplitudeField:
    """Internal fast path: wrap an already pruned/validated entry dict."""
    field = AmplitudeField.__new__(AmplitudeField)
    field._entries = entries
    return field


class Distribution:
    """Finitely supported nonnegative masses on the integer lattice."""

    __slots__ = ("_masses",)

    def __init__(self, masses: Mapping[int, float] | Iterable[Tuple[int, float]] = ()):
        items = masses.items() if isinstance(masses, Mapping) else masses
        stored: dict[int, float] = {}
        for site, value in items:
            m = float(value)
            if not math.isfinite(m):
                raise ValueError(f"non-finite mass {m!r} at site {site}")
            if m < 0.0:
                raise ValueError(f"negative mass {m!r} at site {site}")
            if m > 0.0:
                stored[operator.index(site)] = m
        self._masses = stored

    def __getitem__(self, site: int) -> float:
        return self._masses.get(site, 0.0)

    def __len__(self) -> int:
        return len(self._masses)

    def __iter__(self) -> Iterator[int]:
        return iter(self._masses)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self._masses == other._masses

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v!r}" for k, v in sorted(self._masses.items()))
        return f"Distribution({{{inner}}})"

    def items(self):
        return self._masses.items()

    def support(self) -> set[int]:
        return set(self._masses)

    def total(self) -> float:
        """Total mass, summed exactly."""
        return math.fsum(self._masses.values())


def norm_sq(field: AmplitudeField) -> float:
    """Sum of squared moduli over the whole lattice."""
    return math.fsum(z.real * z.real + z.imag * z.imag for z in field._entries.values())


def support(field: AmplitudeField) -> set[int]:
    """Sites carrying a nonzero entry."""
    return field.support()


def superpose(
    f: AmplitudeField,
    g: AmplitudeField,
    alpha: complex,
    beta: complex,
) -> AmplitudeField:
    """Pointwise combination ``alpha*f + beta*g`` with zeros pruned."""
    alpha = complex(alpha)
    beta = complex(beta)
    out: dict[int, complex] = {k: alpha * v for k, v in f.items()}
    for k, v in g.items():
        out[k] = out.get(k, 0j) + beta * v
    return AmplitudeField(out)


def to_distribution(field: AmplitudeField) -> Distribution:
    """Squared-modulus masses of a field; total equals ``norm_sq(field)``."""
    return Distribution(
        {k: z.real * z.real + z.imag * z.imag for k, z in field.items()}
    )


def max_difference(f: AmplitudeField, g: AmplitudeField) -> float:
    """Largest pointwise amplitude difference between two fields."""
    worst = 0.0
    for k in f.support() | g.support():
        diff = abs(f[k] - g[k])
        if diff > worst:
            worst = diff
    return worst
