"""Diagram isometries and order-2 twisted setups.

A twisted setup folds an ambient system along its order-2 diagram flip rho:
the fixed space V0 of the induced isometry carries a root system Sigma-hat
whose base classes are the rho-orbits on the ambient base.  Only |rho| = 2
foldings appear here (2A_n, 2D_n, 2E6); the very twisted Suzuki/Ree setups
are out of scope.  For 2A_n with n even the folded system is non-reduced,
so no hat system is materialized; the sigma-fixed torus model is all that
is ever needed for those types.

Hat co-roots follow the folding rule for orbits of orthogonal roots:
a singleton {a} contributes alpha_a-vee, a pair {a, b} contributes
alpha_a-vee + alpha_b-vee.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

from .rootsys import (
    DualSystem,
    LieTypeLabel,
    RootSystem,
    build,
    build_ambient,
    canonicalize_label,
    dual_of,
)
from .weyl import WeylElement, generators

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagramAuto:
    """A Cartan-preserving permutation of the base, extended to the roots."""

    perm: tuple  # base index permutation, 0-indexed
    matrix: tuple  # permutation matrix on co-root coordinates
    root_perm: tuple  # induced permutation of root indices

    @property
    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def order(self) -> int:
        n = 1
        cur = self.perm
        ident = tuple(range(len(self.perm)))
        while cur != ident:
            cur = tuple(self.perm[c] for c in cur)
            n += 1
        return n


def _extend_to_roots(rs: RootSystem, perm) -> tuple:
    """Root-index permutation of the map alpha_i -> alpha_perm[i]."""
    out = []
    for r in rs.roots:
        img = [0] * rs.rank
        for i, c in enumerate(r):
            img[perm[i]] = c
        out.append(rs.index[tuple(img)])
    return tuple(out)


def _auto_from_perm(rs: RootSystem, perm) -> DiagramAuto:
    n = rs.rank
    mat = tuple(
        tuple(int(i == perm[j]) for j in range(n)) for i in range(n)
    )
    return DiagramAuto(tuple(perm), mat, _extend_to_roots(rs, perm))


def diagram_autos(rs: RootSystem) -> list:
    """All Cartan-preserving base permutations, identity first."""
    n = rs.rank
    found = []
    for perm in itertools.permutations(range(n)):
        if all(
            rs.cartan[perm[i]][perm[j]] == rs.cartan[i][j]
            for i in range(n)
            for j in range(n)
        ):
            found.append(perm)
    found.sort()
    return [_auto_from_perm(rs, p) for p in found]


def _flip_perm(family: str, rank: int) -> tuple:
    if family == "A":
        return tuple(rank - 1 - i for i in range(rank))
    if family == "D":
        perm = list(range(rank))
        perm[rank - 2], perm[rank - 1] = perm[rank - 1], perm[rank - 2]
        return tuple(perm)
    if family == "E" and rank == 6:
        return (5, 1, 4, 3, 2, 0)
    raise ValueError(f"no order-2 flip for {family}{rank}")


def _folded_label(label: LieTypeLabel):
    if label.family == "D":
        return LieTypeLabel("B", label.rank - 1)
    if label.family == "E":
        return LieTypeLabel("F", 4)
    if label.family == "A" and label.rank % 2 == 1:
        return LieTypeLabel("C", (label.rank + 1) // 2)
    return None  # 2A_{2m}: non-reduced folding, not materialized


@dataclass
class TwistedSetup:
    label: LieTypeLabel
    ambient: RootSystem
    rho: DiagramAuto
    v0_projection: tuple  # rational matrix on root coordinates
    hat_classes: tuple  # ordered rho-orbits on base indices (0-indexed)
    hat_system: RootSystem | None
    hat_dual: DualSystem | None
    hat_coroot_in_ambient: tuple | None  # per class, ambient co-root vector
    w0_class_words: tuple  # ambient generator word lifting each class reflection

    @property
    def hat_rank(self) -> int:
        return len(self.hat_classes)

    def w0_generators(self) -> list:
        """Ambient WeylElements generating W0 = C_W(rho)."""
        gens = generators(self.ambient)
        out = []
        for word in self.w0_class_words:
            elem = gens[word[0]]
            for i in word[1:]:
                elem = elem * gens[i]
            out.append(elem)
        return out

    def to_doc(self) -> dict:
        doc = self.ambient.to_doc()
        doc["label"] = str(self.label)
        doc["rho"] = list(self.rho.perm)
        doc["hat_base"] = [sorted(c) for c in self.hat_classes]
        if self.hat_coroot_in_ambient is not None:
            doc["hat_coroots"] = [list(v) for v in self.hat_coroot_in_ambient]
        return doc


def _projection_matrix(rs: RootSystem, rho: DiagramAuto) -> tuple:
    n = rs.rank
    return tuple(
        tuple(
            Fraction(int(i == j) + int(i == rho.perm[j]), 2) for j in range(n)
        )
        for i in range(n)
    )


def _sym_form(rs: RootSystem):
    """(alpha_i, alpha_j) under the short-root-squared-length-2 scaling."""
    return [
        [rs.d[i] * rs.cartan[i][j] for j in range(rs.rank)] for i in range(rs.rank)
    ]


def _pair(form, x, y) -> Fraction:
    return sum(
        x[i] * form[i][j] * y[j] for i in range(len(x)) for j in range(len(x))
    )


def _hat_cartan(rs: RootSystem, proj, classes):
    """Exact Cartan pairings of the projected class representatives."""
    form = _sym_form(rs)
    n = rs.rank
    reps = []
    for cls in classes:
        e = [Fraction(0)] * n
        e[cls[0]] = Fraction(1)
        reps.append([sum(proj[i][j] * e[j] for j in range(n)) for i in range(n)])
    m = len(classes)
    cartan = []
    for i in range(m):
        row = []
        norm = _pair(form, reps[i], reps[i])
        for j in range(m):
            val = 2 * _pair(form, reps[j], reps[i]) / norm
            assert val.denominator == 1, "non-integral folded Cartan entry"
            row.append(int(val))
        cartan.append(tuple(row))
    return tuple(cartan), reps


def _match_numbering(target: RootSystem, hat_cartan) -> tuple:
    """Bijection target node -> class index preserving the Cartan matrix."""
    m = target.rank
    for perm in itertools.permutations(range(m)):
        if all(
            hat_cartan[perm[i]][perm[j]] == target.cartan[i][j]
            for i in range(m)
            for j in range(m)
        ):
            return perm
    raise AssertionError("folded system does not match its expected type")


def build_twisted(label: LieTypeLabel) -> TwistedSetup:
    """Folded setup for an order-2 twisted label (2A canonicalizes 2A3 to 2D3)."""
    label = canonicalize_label(label)
    if not (label.twisted and label.is_admissible()):
        raise ValueError(f"label {label} is not an admissible twisted type")
    rs = build_ambient(label.family, label.rank)
    flip = _flip_perm(label.family, label.rank)
    rho = _auto_from_perm(rs, flip)
    assert rho.order() == 2

    orbits = []
    seen = set()
    for i in range(rs.rank):
        if i in seen:
            continue
        orb = tuple(sorted({i, flip[i]}))
        orbits.append(orb)
        seen.update(orb)

    proj = _projection_matrix(rs, rho)
    folded = _folded_label(label)
    if folded is None:
        classes = tuple(orbits)
        hat_system = hat_dual = hat_coroots = None
    else:
        hat_cartan, _ = _hat_cartan(rs, proj, orbits)
        hat_system = build(folded)
        numbering = _match_numbering(hat_system, hat_cartan)
        classes = tuple(orbits[numbering[i]] for i in range(len(orbits)))
        hat_dual = dual_of(hat_system)
        hat_coroots = tuple(
            tuple(int(i in cls) for i in range(rs.rank)) for cls in classes
        )

    words = []
    for cls in classes:
        if len(cls) == 1:
            words.append((cls[0],))
        elif rs.cartan[cls[0]][cls[1]] == 0:
            words.append((cls[0], cls[1]))
        else:
            # adjacent orbit (middle of 2A_{2m}): longest element of its A2
            words.append((cls[0], cls[1], cls[0]))

    return TwistedSetup(
        label=label,
        ambient=rs,
        rho=rho,
        v0_projection=proj,
        hat_classes=classes,
        hat_system=hat_system,
        hat_dual=hat_dual,
        hat_coroot_in_ambient=hat_coroots,
        w0_class_words=tuple(words),
    )


def enumerate_w0(setup: TwistedSetup, cap: int = 100_000) -> list:
    """All elements of W0 as ambient WeylElements (closure of class lifts)."""
    gens = setup.w0_generators()
    ident_perm = tuple(range(len(setup.ambient.roots)))
    ident = WeylElement(
        tuple(
            tuple(int(i == j) for j in range(setup.ambient.rank))
            for i in range(setup.ambient.rank)
        ),
        ident_perm,
        (),
    )
    seen = {ident_perm: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                e = w * g
                if e.perm not in seen:
                    if len(seen) >= cap:
                        raise RuntimeError("W0 closure exceeded cap")
                    seen[e.perm] = e
                    nxt.append(e)
        frontier = nxt
    return [seen[p] for p in sorted(seen)]
