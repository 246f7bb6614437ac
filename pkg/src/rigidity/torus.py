"""Finite models of torus 2-torsion and the maps acting on them.

A model is a direct product of cyclic 2-groups recording the Sylow
2-subgroup A of the fixed maximal torus: one coordinate per generator,
coordinates being exponents of the chosen generators.  Untwisted groups
give n generators of order 2^k (the co-root lattice mod 2^k); twisted
groups give mixed orders, with each generator remembered as a vector in
the ambient co-root lattice mod 2^(k+1), so that every isometry action is
induced honestly from the lattice.

Central subgroups come from the classical center tables, but the table
formulas are treated as claims: candidates are validated by the
fixed-point test against the Weyl action, falling back to the computed
fixed subgroup when a formula and the computation disagree.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import intlinalg as la
from .arith import val2
from .rootsys import DualSystem, LieTypeLabel, build, dual_of, canonicalize_label
from .twist import DiagramAuto, TwistedSetup
from .weyl import WeylElement, generators

log = logging.getLogger(__name__)

BASIS_AMBIENT = "ambient"
BASIS_HAT = "hat"
BASIS_SIGMA = "sigma"
BASIS_QUOTIENT = "quotient"


def default_q_mod(k: int) -> int:
    """Canonical residue of q modulo 2^(k+1) under the hypotheses."""
    return (1 << k) + 1


@dataclass(frozen=True)
class TorusModel:
    orders: tuple  # per-generator orders, each a power of 2 and >= 2
    basis: str
    k: int
    ambient_mod: int | None = None  # modulus of the ambient lattice carrier
    embedding: tuple | None = None  # columns = generators as ambient vectors
    transform: tuple | None = None  # quotient record: (u_rows, parent_orders)

    def __post_init__(self):
        for o in self.orders:
            if o < 2 or o & (o - 1):
                raise ValueError(f"generator orders must be powers of 2 >= 2: {o}")

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def exponent(self) -> int:
        return max(self.orders)

    @property
    def group_order(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def reduce(self, coords) -> tuple:
        return tuple(c % o for c, o in zip(coords, self.orders))

    def elements(self, guard: int = 1 << 22):
        if self.group_order > guard:
            raise ValueError("model too large to enumerate")
        return itertools.product(*(range(o) for o in self.orders))

    def to_doc(self) -> dict:
        doc = {"orders": list(self.orders), "basis": self.basis}
        if self.transform is not None:
            doc["transform"] = [list(r) for r in self.transform[0]]
        return doc


@dataclass(frozen=True)
class TorusElement:
    coords: tuple

    @classmethod
    def of(cls, model: TorusModel, coords) -> "TorusElement":
        return cls(model.reduce(coords))


@dataclass(frozen=True)
class ActionMap:
    """An endomorphism of a model, as an integer matrix on coordinates.

    Construction asserts well-definedness with respect to the mixed moduli
    (matrix[i][j] * orders[j] ≡ 0 mod orders[i]) and invertibility (odd
    determinant); both are hard errors, not test-only checks.
    """

    matrix: tuple
    orders: tuple
    kind: str = "composite"

    def __post_init__(self):
        n = len(self.orders)
        mat = self.matrix
        assert len(mat) == n and all(len(r) == n for r in mat)
        for i in range(n):
            for j in range(n):
                if mat[i][j] * self.orders[j] % self.orders[i]:
                    raise ValueError(
                        f"matrix not well-defined on mixed moduli at ({i},{j})"
                    )
        if not la.det_is_odd([list(r) for r in mat]):
            raise ValueError("action matrix is not invertible (even determinant)")

    @classmethod
    def of(cls, model: TorusModel, matrix, kind: str = "composite") -> "ActionMap":
        canon = la.mat_mod_rows([list(r) for r in matrix], list(model.orders))
        return cls(canon, tuple(model.orders), kind)

    def apply(self, coords) -> tuple:
        return tuple(
            sum(self.matrix[i][j] * coords[j] for j in range(len(coords)))
            % self.orders[i]
            for i in range(len(self.orders))
        )

    def compose(self, other: "ActionMap") -> "ActionMap":
        assert self.orders == other.orders
        prod = la.mat_mul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        canon = la.mat_mod_rows(prod, list(self.orders))
        return ActionMap(canon, self.orders, "composite")

    @property
    def is_identity(self) -> bool:
        n = len(self.orders)
        return all(
            self.matrix[i][j] == (1 if i == j else 0) % self.orders[i]
            for i in range(n)
            for j in range(n)
        )


def untwisted_model(ds: DualSystem, k: int) -> TorusModel:
    """A = (co-root lattice) tensor Z/2^k, one order-2^k generator per node."""
    if k < 2:
        raise ValueError(f"hypotheses force k >= 2, got {k}")
    n = ds.system.rank
    emb = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return TorusModel(
        orders=(1 << k,) * n,
        basis=BASIS_AMBIENT,
        k=k,
        ambient_mod=1 << k,
        embedding=emb,
    )


def twisted_model(ts: TwistedSetup, k: int, q_mod: int | None = None) -> TorusModel:
    """Mixed-moduli model of A for a Steinberg group.

    2D_n: n-2 pure generators of order 2^k plus one mixed generator of
    order 2^(k+1); 2A_{2m-1}: m-1 mixed generators of order 2^(k+1) plus a
    middle generator of order 2^k.  2A_{2m} and 2E6 delegate to the
    sigma-fixed computation, which is all those cases need.
    """
    if k < 2:
        raise ValueError(f"hypotheses force k >= 2, got {k}")
    big = 1 << (k + 1)
    q = default_q_mod(k) if q_mod is None else q_mod % big
    lab = ts.label
    n = ts.ambient.rank
    if lab.family == "D":
        cols = [
            tuple(2 * int(i == j) for i in range(n)) for j in range(n - 2)
        ]
        cols.append(
            tuple(
                (1 if i == n - 2 else 0) + (q if i == n - 1 else 0)
                for i in range(n)
            )
        )
        orders = (1 << k,) * (n - 2) + (big,)
    elif lab.family == "A" and lab.rank % 2 == 1:
        m = (n + 1) // 2
        cols = [
            tuple(
                (1 if i == j else 0) + (q if i == n - 1 - j else 0)
                for i in range(n)
            )
            for j in range(m - 1)
        ]
        cols.append(tuple(2 * int(i == m - 1) for i in range(n)))
        orders = (big,) * (m - 1) + (1 << k,)
    else:
        return sigma_fixed(dual_of(ts.ambient), ts.rho, q, k)
    emb = tuple(tuple(col[i] for col in cols) for i in range(n))
    return TorusModel(
        orders=orders,
        basis=BASIS_HAT,
        k=k,
        ambient_mod=big,
        embedding=emb,
    )


def sigma_fixed(
    ds: DualSystem, rho: DiagramAuto, q_mod: int, k: int
) -> TorusModel:
    """Fixed points of x -> q * rho(x) on the co-root lattice mod 2^(k+1).

    Solved by Smith normal form of (q * P_rho - I); the result carries its
    own generator orders and the embedding back into ambient coordinates.
    """
    if k < 2:
        raise ValueError(f"hypotheses force k >= 2, got {k}")
    n = ds.system.rank
    big = 1 << (k + 1)
    b = [
        [q_mod * rho.matrix[i][j] - int(i == j) for j in range(n)]
        for i in range(n)
    ]
    gens = la.kernel_mod(b, big)
    if not gens:
        raise ValueError("sigma-fixed subgroup has no 2-torsion")
    emb = tuple(tuple(vec[i] for vec, _ in gens) for i in range(n))
    return TorusModel(
        orders=tuple(order for _, order in gens),
        basis=BASIS_SIGMA,
        k=k,
        ambient_mod=big,
        embedding=emb,
    )


# -- induced actions ---------------------------------------------------------


class _EmbeddingSolver:
    """Solve emb * y ≡ v (mod ambient_mod) for models embedded in the lattice."""

    def __init__(self, model: TorusModel):
        assert model.embedding is not None and model.ambient_mod is not None
        self.model = model
        self.mat = [list(row) for row in model.embedding]
        self.mod = model.ambient_mod

    def pull(self, v) -> tuple:
        y = la.solve_mod(self.mat, list(v), self.mod)
        if y is None:
            raise ValueError("vector does not lie in the embedded subgroup")
        return self.model.reduce(y)

    def push(self, coords) -> tuple:
        return tuple(
            sum(self.mat[i][j] * coords[j] for j in range(len(coords))) % self.mod
            for i in range(len(self.mat))
        )


_SOLVERS: dict = {}


def _solver(model: TorusModel) -> _EmbeddingSolver:
    s = _SOLVERS.get(id(model))
    if s is None:
        s = _EmbeddingSolver(model)
        _SOLVERS[id(model)] = s
    return s


def induce_action(model: TorusModel, source) -> ActionMap:
    """ActionMap induced by a Weyl element, diagram automorphism, or odd scalar.

    Weyl and graph sources act on the ambient co-root lattice; for embedded
    (twisted or sigma-fixed) models the matrix is re-expressed on model
    coordinates through the embedding, which is where the q-twist on mixed
    generators comes from.
    """
    if isinstance(source, int):
        if source % 2 == 0:
            raise ValueError("field exponents must be odd")
        n = model.rank
        mat = [[source * int(i == j) for j in range(n)] for i in range(n)]
        return ActionMap.of(model, mat, kind=f"field-scalar({source})")
    if isinstance(source, WeylElement):
        amb, kind = source.matrix, "weyl"
    elif isinstance(source, DiagramAuto):
        amb, kind = source.matrix, "graph"
    else:
        raise TypeError(f"cannot induce an action from {source!r}")

    if model.basis == BASIS_AMBIENT:
        return ActionMap.of(model, amb, kind=kind)
    if model.embedding is None:
        raise ValueError("cannot induce lattice actions on a bare quotient model")
    solver = _solver(model)
    n_amb = len(model.embedding)
    assert len(amb) == n_amb, "source acts on a different lattice"
    cols = []
    for j in range(model.rank):
        gen = tuple(model.embedding[i][j] for i in range(n_amb))
        image = tuple(
            sum(amb[i][t] * gen[t] for t in range(n_amb)) % model.ambient_mod
            for i in range(n_amb)
        )
        cols.append(solver.pull(image))
    mat = [[cols[j][i] for j in range(model.rank)] for i in range(model.rank)]
    return ActionMap.of(model, mat, kind=kind)


# -- centers -----------------------------------------------------------------


@dataclass(frozen=True)
class CentralData:
    model: TorusModel
    generators: tuple  # coordinate tuples
    claimed_order: int
    validated_by: str = "table"
    elements: tuple = field(init=False)

    def __post_init__(self):
        elems = {tuple(0 for _ in self.model.orders)}
        frontier = list(elems)
        while frontier:
            nxt = []
            for e in frontier:
                for g in self.generators:
                    s = self.model.reduce(tuple(a + b for a, b in zip(e, g)))
                    if s not in elems:
                        elems.add(s)
                        nxt.append(s)
            frontier = nxt
        object.__setattr__(self, "elements", tuple(sorted(elems)))
        if len(self.elements) != self.claimed_order:
            raise ValueError(
                f"central subgroup has order {len(self.elements)}, "
                f"claimed {self.claimed_order}"
            )

    @property
    def nontrivial(self) -> tuple:
        zero = tuple(0 for _ in self.model.orders)
        return tuple(e for e in self.elements if e != zero)


def claimed_center_order(label: LieTypeLabel, k: int) -> int:
    """O2-part of the center order from the classical tables."""
    n = label.rank
    if label.twisted:
        if label.family == "A":
            return 2 if n % 2 == 1 else 1  # gcd(n+1, q+1) with (q+1)_2 = 2
        if label.family == "D":
            return 2  # gcd(4, q^n + 1) has 2-part 2 for q ≡ 1 mod 4
        return 1  # 2E6: gcd(3, q+1) is odd
    if label.family == "A":
        return 1 << min(val2(n + 1), k)
    if label.family in ("B", "C"):
        return 2
    if label.family == "D":
        return 4  # Z2 x Z2 (n even) or Z4 (n odd); k >= 2 realizes both
    if label.family == "E" and n == 7:
        return 2
    return 1  # E6 (order 3), E8, F4, G2


def _untwisted_candidates(label: LieTypeLabel, k: int):
    """Generator coordinate tuples claimed by the center tables."""
    n = label.rank
    half = 1 << (k - 1)
    if label.family == "A":
        w = min(val2(n + 1), k)
        if w == 0:
            return [[]]
        scale = 1 << (k - w)
        return [[tuple((i + 1) * scale % (1 << k) for i in range(n))]]
    if label.family == "B":
        return [[tuple(half * int(i == n - 1) for i in range(n))]]
    if label.family == "C":
        # Table reading: odd indices up to 2*floor((n-1)/2)+1
        t = 2 * ((n - 1) // 2) + 1
        cand = [tuple(half * int((i + 1) % 2 == 1 and i + 1 <= t) for i in range(n))]
        # section-4 reading with t' = 2*floor((n+1)/2)+1 exceeds the rank; the
        # validated in-range variant is all odd indices
        alt = [tuple(half * int((i + 1) % 2 == 1) for i in range(n))]
        return [cand, alt]
    if label.family == "D":
        if n % 2 == 0:
            z1 = tuple(half * int((i + 1) % 2 == 1) for i in range(n))
            z2 = tuple(half * int(i >= n - 2) for i in range(n))
            return [[z1, z2]]
        quarter = 1 << (k - 2)
        z = [half * int((i + 1) % 2 == 1 and i < n - 2) for i in range(n)]
        z[n - 2] = quarter
        z[n - 1] = 3 * quarter
        return [[tuple(z)]]
    if label.family == "E" and n == 7:
        paper = tuple(half * int(i + 1 in (4, 5, 7)) for i in range(7))
        bourbaki = tuple(half * int(i + 1 in (2, 5, 7)) for i in range(7))
        return [[paper], [bourbaki]]
    return [[]]


def _twisted_candidates(ts: TwistedSetup, model: TorusModel, k: int):
    lab = ts.label
    n = lab.rank
    if lab.family == "D":
        z = [0] * model.rank
        z[model.rank - 1] = 1 << k  # square of the mixed generator's 2^(k-1) power
        return [[tuple(z)]]
    if lab.family == "A" and n % 2 == 1:
        m = (n + 1) // 2
        z = [(1 << k) * int((j + 1) % 2 == 1) for j in range(m - 1)]
        z.append((1 << (k - 1)) * int(m % 2 == 1))
        return [[tuple(z)]]
    return [[]]


def _is_fixed(gen_maps, vec, model: TorusModel) -> bool:
    return all(m.apply(vec) == model.reduce(vec) for m in gen_maps)


def center_subgroup(
    label: LieTypeLabel,
    k: int,
    ts: TwistedSetup | None = None,
    model: TorusModel | None = None,
) -> CentralData:
    """Generators of the 2-part of the center, in the matching torus model.

    Candidates from the tables are validated by centrality (fixed by every
    Weyl action generator); on failure the fixed subgroup is computed
    directly and used instead.  2A_{2m} types skip validation: their
    center 2-part is trivial but their fixed subgroup is not.
    """
    label = canonicalize_label(label)
    claimed = claimed_center_order(label, k)
    if label.twisted:
        assert ts is not None, "twisted center needs its TwistedSetup"
        if model is None:
            model = twisted_model(ts, k)
        if claimed == 1:
            return CentralData(model, (), 1)
        gen_maps = [induce_action(model, w) for w in ts.w0_generators()]
        candidates = _twisted_candidates(ts, model, k)
    else:
        if model is None:
            model = untwisted_model(dual_of(build(label)), k)
        if claimed == 1:
            return CentralData(model, (), 1)
        gen_maps = [induce_action(model, g) for g in generators(build(label))]
        candidates = _untwisted_candidates(label, k)

    for cand in candidates:
        gens = tuple(model.reduce(v) for v in cand)
        if all(_is_fixed(gen_maps, v, model) for v in gens):
            try:
                return CentralData(model, gens, claimed)
            except ValueError:
                continue
    # fall back to the computed fixed subgroup (uniform-modulus models only)
    if len(set(model.orders)) != 1:
        raise AssertionError(
            f"no valid center candidate for {label} and mixed moduli bar the fallback"
        )
    mod = model.orders[0]
    stacked = []
    for m in gen_maps:
        for i in range(model.rank):
            stacked.append(
                [m.matrix[i][j] - int(i == j) for j in range(model.rank)]
            )
    gens = tuple(vec for vec, _ in la.kernel_mod(stacked, mod))
    data = CentralData(model, gens, claimed, validated_by="fixed-subgroup")
    log.info("center of %s at k=%d taken from fixed subgroup", label, k)
    return data


# -- quotients ---------------------------------------------------------------


def _quotient_snf(model: TorusModel, central: CentralData):
    n = model.rank
    rel = [
        [model.orders[j] * int(i == j) for j in range(n)]
        + [g[i] for g in central.generators]
        for i in range(n)
    ]
    d, u, _ = la.smith_normal_form(rel)
    kept = [i for i in range(n) if d[i] > 1]
    u_rows = tuple(tuple(u[i][j] for j in range(n)) for i in kept)
    quot = TorusModel(
        orders=tuple(d[i] for i in kept),
        basis=BASIS_QUOTIENT,
        k=model.k,
        transform=(u_rows, tuple(model.orders)),
    )
    return quot, u, kept


def quotient(model: TorusModel, central: CentralData) -> TorusModel:
    """Quotient model re-presented by Smith normal form, with its transform."""
    if central.model.orders != model.orders:
        raise ValueError("central data does not live in this model")
    for g in central.generators:
        if model.reduce(g) != tuple(g):
            raise ValueError(f"generator {g} not reduced in the model")
    if not central.generators:
        return model
    return _quotient_snf(model, central)[0]


def quotient_with_maps(model: TorusModel, central: CentralData, maps):
    """Quotient model plus the pushforwards of the given ActionMaps.

    The full unimodular SNF transform makes the pushforward exact:
    the quotient coordinates are y = U x, so a map M becomes U M U^(-1)
    restricted to the coordinates of order > 1.
    """
    if not central.generators:
        return model, list(maps)
    quot, u, kept = _quotient_snf(model, central)
    u_inv = _integer_inverse(u)
    pushed = []
    for amap in maps:
        full = la.mat_mul(la.mat_mul(u, [list(r) for r in amap.matrix]), u_inv)
        mat = [[full[i][j] for j in kept] for i in kept]
        pushed.append(ActionMap.of(quot, mat, kind=amap.kind))
    return quot, pushed


def _integer_inverse(u):
    """Exact inverse of a unimodular integer matrix."""
    n = len(u)
    aug = [[Fraction(u[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            assert aug[i][j].denominator == 1, "matrix is not unimodular"
            row.append(int(aug[i][j]))
        out.append(row)
    return out
