"""Weyl group generation: permutations of roots plus co-root matrices.

Elements are generated by a breadth-first walk of the weak right order:
multiplying by a simple reflection changes length by exactly one, so the
layer at distance d is exactly the set of elements of length d, and new
candidates only need deduplication inside their own layer.  Layers are kept
as numpy arrays of root permutations; the co-root matrix of any element is
recovered from its permutation via the co-root table, since
w(alpha-vee) = (w(alpha))-vee.

Deduplication keys on the root permutation, which is a faithful and compact
encoding.  The object interface (``generators``, ``enumerate_weyl``,
``longest_element``) wraps the same walk; large-scale consumers use the raw
layer arrays.
"""

from __future__ import annotations

import io
import json
import logging
import os
from dataclasses import dataclass

import numpy as np

from .rootsys import RootSystem

log = logging.getLogger(__name__)

DEFAULT_CAP = 5_000_000
CACHE_ENV = "RIGIDITY_CACHE_DIR"
CACHE_FORMAT_VERSION = 1


class CapExceeded(Exception):
    """Raised when a group walk grows past the configured cap."""

    def __init__(self, cap: int, reached: int):
        super().__init__(f"group exceeds cap {cap} (reached {reached})")
        self.cap = cap
        self.reached = reached


@dataclass(frozen=True)
class WeylElement:
    """One isometry: co-root matrix, root permutation, and a witness word."""

    matrix: tuple  # rows, acting on co-root coordinates
    perm: tuple  # permutation of root indices
    word: tuple  # simple-reflection indices, applied left to right

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (self * other)(x) = self(other(x))
        perm = tuple(self.perm[p] for p in other.perm)
        mat = tuple(
            tuple(
                sum(self.matrix[i][t] * other.matrix[t][j] for t in range(len(self.matrix)))
                for j in range(len(self.matrix))
            )
            for i in range(len(self.matrix))
        )
        return WeylElement(mat, perm, other.word + self.word)

    @property
    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def order(self) -> int:
        n = 1
        p = self.perm
        ident = tuple(range(len(p)))
        cur = p
        while cur != ident:
            cur = tuple(p[c] for c in cur)
            n += 1
        return n


class _WeylData:
    """Per-root-system arrays shared by all walks."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        nroots = len(rs.roots)
        self.perm_dtype = np.uint8 if nroots < 256 else np.uint16
        gen_perms = []
        for i in range(rs.rank):
            perm = [rs.index[rs.reflect(i, r)] for r in rs.roots]
            gen_perms.append(perm)
        self.gen_perms = np.array(gen_perms, dtype=self.perm_dtype)
        self.base_idx = np.array(rs.base_indices, dtype=np.int64)
        self.coroots = np.array(
            [rs.coroot_by_index(i) for i in range(nroots)], dtype=np.int16
        )
        self.positive = np.array(
            [all(x >= 0 for x in r) for r in rs.roots], dtype=bool
        )
        self.gen_mats = [
            _matrix_from_perm_single(self, self.gen_perms[i]) for i in range(rs.rank)
        ]


_DATA_CACHE: dict = {}


def _data(rs: RootSystem) -> _WeylData:
    d = _DATA_CACHE.get(id(rs))
    if d is None:
        d = _WeylData(rs)
        _DATA_CACHE[id(rs)] = d
    return d


def _matrix_from_perm_single(data: _WeylData, perm) -> tuple:
    cols = [data.coroots[perm[b]] for b in data.base_idx]
    n = len(cols)
    return tuple(tuple(int(cols[j][i]) for j in range(n)) for i in range(n))


def matrices_from_perms(rs: RootSystem, perms: np.ndarray) -> np.ndarray:
    """Batch of co-root matrices, shape (N, n, n), from permutation rows."""
    data = _data(rs)
    img = perms[:, data.base_idx].astype(np.int64)  # (N, n) image root indices
    cols = data.coroots[img]  # (N, n_base, n_coord)
    return cols.transpose(0, 2, 1)  # matrix[i][j] = coord i of image of base j


def perm_layers(rs: RootSystem, cap: int = DEFAULT_CAP):
    """Yield numpy arrays of root permutations, one per length layer.

    Rows inside a layer are lexicographically sorted; the stream is fully
    deterministic.  Raises CapExceeded as soon as the running total passes
    the cap.  Results are served from the on-disk cache when configured.
    """
    cached = _cache_load(rs)
    if cached is not None:
        total = 0
        for layer in cached:
            total += len(layer)
            if total > cap:
                raise CapExceeded(cap, total)
            yield layer
        return

    collected = []
    caching = _cache_dir() is not None
    data = _data(rs)
    nroots = len(rs.roots)
    cur = np.arange(nroots, dtype=data.perm_dtype)[None, :]
    total = 1
    yield cur
    if caching:
        collected.append(cur)
    while True:
        parts = []
        for i in range(rs.rank):
            # ascent: w(alpha_i) positive means w*s_i has length d+1
            asc = data.positive[cur[:, data.base_idx[i]]]
            if asc.any():
                parts.append(cur[asc][:, data.gen_perms[i]])
        if not parts:
            break
        cand = np.unique(np.concatenate(parts), axis=0)
        total += len(cand)
        if total > cap:
            raise CapExceeded(cap, total)
        yield cand
        if caching:
            collected.append(cand)
        cur = cand
    if caching:
        _cache_store(rs, collected)


def weyl_order(rs: RootSystem, cap: int = DEFAULT_CAP) -> int:
    """Exact order of the Weyl group via full layer enumeration."""
    return sum(len(layer) for layer in perm_layers(rs, cap))


def generators(rs: RootSystem) -> list:
    """Simple reflections as WeylElements."""
    data = _data(rs)
    out = []
    for i in range(rs.rank):
        perm = tuple(int(x) for x in data.gen_perms[i])
        out.append(WeylElement(data.gen_mats[i], perm, (i,)))
    return out


def _word_from_perm(rs: RootSystem, perm) -> tuple:
    """A reduced word for the element with the given root permutation."""
    data = _data(rs)
    cur = list(perm)
    word = []
    while True:
        for i in range(rs.rank):
            if not data.positive[cur[data.base_idx[i]]]:
                # descent: strip s_i from the right
                g = data.gen_perms[i]
                cur = [cur[g[r]] for r in range(len(cur))]
                word.append(i)
                break
        else:
            assert all(i == p for i, p in enumerate(cur)), "peeling did not terminate"
            return tuple(reversed(word))


def element_from_perm(rs: RootSystem, perm) -> WeylElement:
    data = _data(rs)
    perm_arr = np.asarray(perm, dtype=data.perm_dtype)
    mat = _matrix_from_perm_single(data, perm_arr)
    return WeylElement(mat, tuple(int(x) for x in perm), _word_from_perm(rs, perm))


def enumerate_weyl(rs: RootSystem, cap: int = DEFAULT_CAP):
    """Stream every WeylElement exactly once (BFS layer, then lex order)."""
    for layer in perm_layers(rs, cap):
        for row in layer:
            yield element_from_perm(rs, row)


def longest_element(rs: RootSystem) -> WeylElement:
    """The unique element sending all positive roots to negative ones."""
    data = _data(rs)
    cur = list(range(len(rs.roots)))
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(rs.rank):
            if data.positive[cur[data.base_idx[i]]]:
                g = data.gen_perms[i]
                cur = [cur[g[r]] for r in range(len(cur))]
                word.append(i)
                changed = True
                break
    w0 = element_from_perm(rs, cur)
    assert len(w0.word) == sum(1 for r in rs.roots if rs.is_positive(r))
    return w0


def sample_elements(rs: RootSystem, count: int, seed: int = 0x5EED, word_length: int = 64):
    """Deterministic random elements as (perms, matrices) for sampled checks.

    Not deduplicated; meant for statistical certification of large groups
    where exhaustive enumeration is out of budget.
    """
    data = _data(rs)
    rng = np.random.default_rng(seed)
    nroots = len(rs.roots)
    perms = np.tile(np.arange(nroots, dtype=data.perm_dtype), (count, 1))
    for _ in range(word_length):
        picks = rng.integers(0, rs.rank, size=count)
        for i in range(rs.rank):
            mask = picks == i
            if mask.any():
                perms[mask] = perms[mask][:, data.gen_perms[i]]
    return perms, matrices_from_perms(rs, perms)


# -- optional on-disk layer cache -------------------------------------------


def _cache_dir():
    return os.environ.get(CACHE_ENV) or None


def _cache_path(rs: RootSystem) -> str:
    return os.path.join(_cache_dir(), f"weyl-{rs.name.replace('^', 'v')}.bin")


def _cache_store(rs: RootSystem, layers) -> None:
    path = _cache_path(rs)
    header = {
        "format": CACHE_FORMAT_VERSION,
        "label": rs.name,
        "rank": rs.rank,
        "nroots": len(rs.roots),
        "count": int(sum(len(l) for l in layers)),
        "layer_sizes": [int(len(l)) for l in layers],
        "dtype": str(layers[0].dtype),
    }
    buf = io.BytesIO()
    buf.write(json.dumps(header, sort_keys=True).encode() + b"\n")
    for layer in layers:
        buf.write(np.ascontiguousarray(layer).tobytes())
    os.makedirs(_cache_dir(), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(buf.getvalue())
    os.replace(tmp, path)
    log.info("cached %s Weyl layers at %s", rs.name, path)


def _cache_load(rs: RootSystem):
    if _cache_dir() is None:
        return None
    path = _cache_path(rs)
    if not os.path.exists(path):
        return None
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        if header.get("format") != CACHE_FORMAT_VERSION or header.get("label") != rs.name:
            log.warning("stale Weyl cache at %s ignored", path)
            return None
        nroots = header["nroots"]
        dtype = np.dtype(header["dtype"])
        layers = []
        for size in header["layer_sizes"]:
            raw = fh.read(size * nroots * dtype.itemsize)
            layers.append(
                np.frombuffer(raw, dtype=dtype).reshape(size, nroots).copy()
            )
    return layers
