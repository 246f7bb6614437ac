"""Irreducible reduced crystallographic root systems, exactly.

Roots are integer coordinate vectors in the simple-root basis; the Cartan
matrix carries all pairings, so no floating point or ambient embedding is
ever needed.  Node numbering follows Bourbaki for every family.

Convention: cartan[i][j] = <alpha_j, alpha_i> = 2(alpha_j, alpha_i)/(alpha_i, alpha_i),
so the simple reflection r_i changes only coordinate i of a vector:
    r_i(v)_i = v_i - sum_j cartan[i][j] v_j.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import prod

log = logging.getLogger(__name__)

UNTWISTED_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 3,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

TWISTED_RANKS = {
    "A": lambda n: n >= 2,
    "D": lambda n: n >= 3,
    "E": lambda n: n == 6,
}

ROOT_COUNTS = {
    "A": lambda n: n * n + n,
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * n - 2 * n,
    "E": lambda n: {6: 72, 7: 126, 8: 240}[n],
    "F": lambda n: 48,
    "G": lambda n: 12,
}


@dataclass(frozen=True)
class LieTypeLabel:
    family: str
    rank: int
    twisted: bool = False

    def __str__(self) -> str:
        return f"{'2' if self.twisted else ''}{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "LieTypeLabel":
        s = text.strip()
        twisted = s.startswith("2")
        if twisted:
            s = s[1:]
        if not s or s[0].upper() not in UNTWISTED_RANKS:
            raise ValueError(f"bad type label {text!r}")
        family = s[0].upper()
        try:
            rank = int(s[1:])
        except ValueError:
            raise ValueError(f"bad type label {text!r}") from None
        return cls(family, rank, twisted)

    def is_admissible(self) -> bool:
        table = TWISTED_RANKS if self.twisted else UNTWISTED_RANKS
        rule = table.get(self.family)
        return bool(rule and rule(self.rank))


def canonicalize_label(label: LieTypeLabel) -> LieTypeLabel:
    """Identify 2A3 with 2D3; all other labels pass through."""
    if label.twisted and label.family == "A" and label.rank == 3:
        canon = LieTypeLabel("D", 3, True)
        log.info("identifying %s with %s", label, canon)
        return canon
    return label


def _diagram(family: str, rank: int):
    """Edges (0-indexed pairs) and squared-length halves d per node."""
    n = rank
    chain = [(i, i + 1) for i in range(n - 1)]
    if family == "A":
        return chain, [1] * n
    if family == "B":
        return chain, [2] * (n - 1) + [1]
    if family == "C":
        return chain, [1] * (n - 1) + [2]
    if family == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return edges, [1] * n
    if family == "E":
        # Bourbaki: node 2 hangs off node 4; chain 1-3-4-5-6(-7)(-8)
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        if n >= 7:
            edges.append((5, 6))
        if n == 8:
            edges.append((6, 7))
        return edges, [1] * n
    if family == "F":
        return chain, [2, 2, 1, 1]
    if family == "G":
        return chain, [1, 3]
    raise ValueError(f"unknown family {family!r}")


def cartan_from_diagram(edges, d):
    n = len(d)
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
    for i, j in edges:
        # (alpha_i, alpha_j) = -max(d_i, d_j) under short-root-length-2 scaling
        b = -max(d[i], d[j])
        c[i][j] = b // d[i]
        c[j][i] = b // d[j]
    return tuple(tuple(row) for row in c)


class RootSystem:
    """A root system generated by closing a base under simple reflections.

    Constructed from Cartan data alone; ``build`` supplies the classical
    families.  Immutable after construction.
    """

    def __init__(self, name: str, cartan, d, label: LieTypeLabel | None = None):
        self.name = name
        self.label = label
        self.cartan = tuple(tuple(row) for row in cartan)
        self.d = tuple(d)
        self.rank = len(self.d)
        self.roots = self._close()
        self.index = {r: i for i, r in enumerate(self.roots)}
        self.base_indices = tuple(
            self.index[tuple(int(i == j) for j in range(self.rank))]
            for i in range(self.rank)
        )
        self.neg_index = tuple(
            self.index[tuple(-x for x in r)] for r in self.roots
        )
        self._coroot_cache = tuple(self._coroot(r) for r in self.roots)
        self._edge_sets = tuple(
            frozenset(
                j for j in range(self.rank) if j != i and self.cartan[i][j]
            )
            for i in range(self.rank)
        )

    # -- construction ------------------------------------------------------

    def _close(self):
        base = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        seen = set(base)
        frontier = list(base)
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(self.rank):
                    w = self.reflect(i, v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        seen.update(tuple(-x for x in v) for v in list(seen))
        roots = sorted(seen)
        assert all(any(x for x in r) for r in roots), "zero vector closed in"
        return tuple(roots)

    # -- linear data -------------------------------------------------------

    def pairing(self, v, i: int) -> int:
        """<v, alpha_i> for a lattice vector v in simple-root coordinates."""
        return sum(self.cartan[i][j] * v[j] for j in range(self.rank))

    def reflect(self, i: int, v) -> tuple:
        """Simple reflection r_i applied to a lattice vector (0-indexed i)."""
        out = list(v)
        out[i] -= self.pairing(v, i)
        return tuple(out)

    def length_sq(self, v) -> int:
        """Squared length; short roots have squared length 2."""
        # (v, v) with (alpha_i, alpha_j) = d_i * cartan[i][j]
        return sum(
            self.d[i] * self.cartan[i][j] * v[i] * v[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def _coroot(self, alpha) -> tuple:
        half = self.length_sq(alpha) // 2
        out = []
        for i in range(self.rank):
            num = alpha[i] * self.d[i]
            assert num % half == 0, "non-integral coroot coordinate"
            out.append(num // half)
        return tuple(out)

    def coroot(self, alpha) -> tuple:
        """Coordinates of alpha-vee in the simple co-root basis."""
        a = tuple(alpha)
        idx = self.index.get(a)
        if idx is None:
            raise ValueError(f"{alpha} is not a root of {self.name}")
        return self._coroot_cache[idx]

    def coroot_by_index(self, idx: int) -> tuple:
        return self._coroot_cache[idx]

    def is_positive(self, alpha) -> bool:
        return all(x >= 0 for x in alpha)

    @property
    def positive_roots(self):
        return tuple(r for r in self.roots if self.is_positive(r))

    def height(self, alpha) -> int:
        return sum(alpha)

    # -- support -----------------------------------------------------------

    def support(self, alpha):
        """Base indices with nonzero coefficient plus diagram connectivity."""
        a = tuple(alpha)
        if a not in self.index:
            raise ValueError(f"{alpha} is not a root of {self.name}")
        supp = frozenset(i for i, x in enumerate(a) if x)
        return supp, self._connected(supp)

    def _connected(self, nodes: frozenset) -> bool:
        if not nodes:
            return False
        todo = [next(iter(nodes))]
        seen = {todo[0]}
        while todo:
            i = todo.pop()
            for j in self._edge_sets[i] & nodes:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return seen == nodes

    # -- serialization -----------------------------------------------------

    def to_doc(self) -> dict:
        return {
            "label": self.name,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "roots": [list(r) for r in self.roots],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, separators=(",", ":"))

    def __repr__(self) -> str:
        return f"RootSystem({self.name}, {len(self.roots)} roots)"


class DualSystem:
    """The co-root system of rs, with the root <-> co-root bijection."""

    def __init__(self, rs: RootSystem):
        self.primal = rs
        maxd = max(rs.d)
        dual_d = tuple(maxd // di for di in rs.d)
        dual_cartan = tuple(tuple(row) for row in zip(*rs.cartan))
        self.system = RootSystem(_dual_name(rs), dual_cartan, dual_d)
        covec = {rs.coroot_by_index(i) for i in range(len(rs.roots))}
        assert covec == set(self.system.roots), "co-roots do not close correctly"
        # index map: root index in primal -> root index of its co-root in dual
        self.coroot_index = tuple(
            self.system.index[rs.coroot_by_index(i)] for i in range(len(rs.roots))
        )

    def coroot(self, alpha) -> tuple:
        return self.primal.coroot(alpha)

    def __repr__(self) -> str:
        return f"DualSystem({self.system.name} of {self.primal.name})"


def _dual_name(rs: RootSystem) -> str:
    if rs.label is not None and not rs.label.twisted:
        fam = {"B": "C", "C": "B"}.get(rs.label.family, rs.label.family)
        return f"{fam}{rs.label.rank}^"
    return f"{rs.name}^"


@lru_cache(maxsize=None)
def _build_family(family: str, rank: int) -> RootSystem:
    edges, d = _diagram(family, rank)
    label = LieTypeLabel(family, rank)
    return RootSystem(str(label), cartan_from_diagram(edges, d), d, label=label)


def build(label: LieTypeLabel) -> RootSystem:
    """Root system for an untwisted admissible label."""
    if label.twisted or not label.is_admissible():
        raise ValueError(f"label {label} is not an admissible untwisted type")
    return _build_family(label.family, label.rank)


def build_ambient(family: str, rank: int) -> RootSystem:
    """Ambient system for twisted setups; allows D3 (= A3 renumbered)."""
    if family == "D" and rank == 3:
        return _build_family("D", 3)
    return build(LieTypeLabel(family, rank))


_DUAL_CACHE: dict = {}


def dual_of(rs: RootSystem) -> DualSystem:
    ds = _DUAL_CACHE.get(id(rs))
    if ds is None:
        ds = DualSystem(rs)
        _DUAL_CACHE[id(rs)] = ds
    return ds


_ROOTS_MOD_CACHE: dict = {}


def is_root_mod(ds: DualSystem, v, m: int) -> bool:
    """Whether v is congruent to a co-root modulo m * (co-root lattice)."""
    if m < 3:
        raise ValueError(f"modulus must be >= 3, got {m}")
    key = (id(ds), m)
    table = _ROOTS_MOD_CACHE.get(key)
    if table is None:
        table = frozenset(
            tuple(x % m for x in r) for r in ds.system.roots
        )
        _ROOTS_MOD_CACHE[key] = table
    return tuple(x % m for x in v) in table


def expected_root_count(label: LieTypeLabel) -> int:
    return ROOT_COUNTS[label.family](label.rank)


def expected_weyl_order(label: LieTypeLabel) -> int:
    n = label.rank
    fact = prod(range(1, n + 1))
    if label.family == "A":
        return fact * (n + 1)
    if label.family in ("B", "C"):
        return (1 << n) * fact
    if label.family == "D":
        return (1 << (n - 1)) * fact
    if label.family == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[n]
    return {"G": 12, "F": 1152}[label.family]
