"""Parabolic subgroup data: root splits, dominance, grading, vertex order.

A parabolic subgroup of the semisimple group is specified by the set Sigma
of simple roots whose *negatives* are removed: the parabolic contains every
negative root space plus the positive root spaces supported away from Sigma.
The split of the roots:

  - Levi positives:       positive roots supported on the complement of Sigma
  - nilradical roots:     negative roots with some Sigma coordinate nonzero
  - opposite positives:   negatives of the nilradical roots

Weights stay in fundamental-weight coordinates.  Dominance for the parabolic
only constrains the Levi directions, so it is a coordinate sign check away
from Sigma.  The Sigma-height of a weight is the sum of its Sigma
coordinates in the simple-root expansion; it grades every construction
downstream (arrows strictly drop it).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import DomainError
from .rootsys import Coords, Root, RootSystem


def parse_sigma(rs: RootSystem, text) -> frozenset[int]:
    """Parse a Sigma specification into a set of 0-based simple root indices.

    Accepts an iterable of indices, or a string of comma separated labels
    like ``"a1,a3"`` (1-based, matching the usual alpha_i numbering), plain
    1-based integers like ``"1,3"``, ``"all"``, or ``""`` for the empty set.
    """
    if isinstance(text, str):
        s = text.strip().lower()
        if s in ("", "none"):
            return frozenset()
        if s == "all":
            return frozenset(range(rs.rank))
        out = set()
        for tok in s.split(","):
            tok = tok.strip()
            m = re.fullmatch(r"(?:a|alpha)?(\d+)", tok)
            if not m:
                raise DomainError(f"bad simple root label {tok!r}")
            i = int(m.group(1)) - 1
            if not 0 <= i < rs.rank:
                raise DomainError(f"simple root index {tok!r} out of range")
            out.add(i)
        return frozenset(out)
    out = set()
    for i in text:
        if not isinstance(i, int) or not 0 <= i < rs.rank:
            raise DomainError(f"simple root index {i!r} out of range")
        out.add(i)
    return frozenset(out)


class ParabolicDatum:
    """Root split and weight combinatorics for one parabolic subgroup."""

    def __init__(self, rs: RootSystem, sigma):
        self.rs = rs
        self.sigma = parse_sigma(rs, sigma) if not isinstance(sigma, frozenset) else sigma
        for i in self.sigma:
            if not 0 <= i < rs.rank:
                raise DomainError(f"sigma index {i} out of range")
        self.is_group_itself = not self.sigma  # Sigma empty: parabolic = whole group
        self.is_borel = self.sigma == frozenset(range(rs.rank))
        self.levi_positive = [r for r in rs.positive_roots
                              if all(r.simple[i] == 0 for i in self.sigma)]
        self.opposite_positive = [r for r in rs.positive_roots
                                  if any(r.simple[i] != 0 for i in self.sigma)]
        self.nilradical = [-r for r in self.opposite_positive]
        self.levi_simple = [i for i in range(rs.rank) if i not in self.sigma]
        two_rho = [0] * rs.rank
        for r in self.levi_positive:
            for i in range(rs.rank):
                two_rho[i] += r.fw[i]
        self.rho_levi = tuple(Fraction(x, 2) for x in two_rho)

    def __repr__(self):
        names = ",".join(f"a{i + 1}" for i in sorted(self.sigma)) or "(none)"
        return f"ParabolicDatum({self.rs.series}, sigma={names})"

    # ----- weights -----------------------------------------------------------

    def is_dominant(self, weight: Coords) -> bool:
        """Dominance for the parabolic: Levi coordinates nonnegative, integral."""
        w = self.rs.check_integral(weight)
        return all(w[i] >= 0 for i in self.levi_simple)

    def check_vertex(self, weight: Coords) -> tuple[int, ...]:
        w = self.rs.check_integral(weight)
        if not all(w[i] >= 0 for i in self.levi_simple):
            raise DomainError(f"weight {tuple(weight)} is not dominant for the parabolic")
        return w

    def sigma_height(self, weight: Coords) -> Fraction:
        """Sum of the Sigma coordinates of the simple-root expansion."""
        coords = self.rs.simple_coords(weight)
        return sum((coords[i] for i in self.sigma), Fraction(0))

    def levi_height(self, weight: Coords) -> Fraction:
        coords = self.rs.simple_coords(weight)
        return sum((coords[i] for i in self.levi_simple), Fraction(0))

    def vertex_key(self, weight: Coords):
        """Sort key for the vertex order: Sigma-height first, then lex."""
        return (self.sigma_height(weight), tuple(weight))

    def vertex_compare(self, w1: Coords, w2: Coords) -> int:
        k1, k2 = self.vertex_key(w1), self.vertex_key(w2)
        return (k1 > k2) - (k1 < k2)


def build_parabolic(rs: RootSystem, sigma) -> ParabolicDatum:
    return ParabolicDatum(rs, sigma)
