"""Exact integer linear algebra on small matrices.

Plain lists of Python ints throughout; matrices here never exceed a few
dozen rows, so clarity wins over speed.  Smith normal form is computed
over Z with both transform matrices, then specialized to questions about
finite quotients (Z/m)^n.
"""

from __future__ import annotations

from math import gcd

Matrix = list  # list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    assert len(a[0]) == inner, "dimension mismatch"
    bt = list(zip(*b))
    return [[sum(ra[t] * cb[t] for t in range(inner)) for cb in bt] for ra in a]


def mat_vec(a: Matrix, v: list) -> list:
    assert len(a[0]) == len(v), "dimension mismatch"
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_mod_rows(a: Matrix, row_mods: list) -> tuple:
    """Reduce entry (i, j) modulo row_mods[i]; returns a hashable tuple form."""
    return tuple(
        tuple(x % row_mods[i] for x in row) for i, row in enumerate(a)
    )


def det_is_odd(a: Matrix) -> bool:
    """Determinant parity via elimination over GF(2)."""
    n = len(a)
    m = [[x & 1 for x in row] for row in a]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return False
        m[col], m[piv] = m[piv], m[col]
        for r in range(col + 1, n):
            if m[r][col]:
                m[r] = [(x ^ y) for x, y in zip(m[r], m[col])]
    return True


def smith_normal_form(a: Matrix) -> tuple:
    """Smith normal form with transforms: returns (d, u, v), u·a·v diagonal.

    d is the list of min(m, n) diagonal entries with d[i] | d[i+1] and
    d[i] >= 0; u (m×m) and v (n×n) are unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    A = [list(row) for row in a]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in A:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block into the pivot slot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

        dirty = False
        for i in range(t + 1, m):
            if A[i][t]:
                q = A[i][t] // A[t][t]
                row_op(i, t, q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if A[t][j]:
                q = A[t][j] // A[t][t]
                col_op(j, t, q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue  # remainders left; re-pick a smaller pivot

        # pivot must divide the rest of the block, else fold a row in and redo
        stray = next(
            (
                i
                for i in range(t + 1, m)
                for j in range(t + 1, n)
                if A[i][j] % A[t][t]
            ),
            None,
        )
        if stray is not None:
            row_op(t, stray, -1)  # row_t += row_stray
            continue
        t += 1

    d = [A[i][i] for i in range(min(m, n))]
    return d, U, V


def kernel_mod(a: Matrix, mod: int) -> list:
    """Generators of {x in (Z/mod)^n : a·x ≡ 0 (mod mod)} as (vector, order).

    Vectors are independent: the subgroup is the direct sum of the cyclic
    groups they generate.  Order-1 generators are dropped.
    """
    n = len(a[0])
    d, _, v = smith_normal_form(a)
    out = []
    for j in range(n):
        dj = d[j] if j < len(d) else 0
        g = gcd(dj, mod) if dj else mod
        if g == 1:
            continue
        scale = mod // g
        vec = tuple(v[i][j] * scale % mod for i in range(n))
        out.append((vec, g))
    return out


def solve_mod(a: Matrix, b: list, mod: int):
    """One solution x of a·x ≡ b (mod mod), or None if inconsistent."""
    m = len(a)
    n = len(a[0]) if m else 0
    d, u, v = smith_normal_form(a)
    c = [sum(u[i][j] * b[j] for j in range(m)) % mod for i in range(m)]
    y = [0] * n
    for i in range(m):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] % mod:
                return None
            continue
        g = gcd(di, mod)
        if c[i] % g:
            return None
        # di/g is a unit mod mod/g
        sub = mod // g
        yi = (c[i] // g) * pow(di // g, -1, sub) % sub if sub > 1 else 0
        if i < n:
            y[i] = yi
    x = [sum(v[i][j] * y[j] for j in range(n)) % mod for i in range(n)]
    # ints only certify consistency; verify since rectangular cases vary
    for i in range(m):
        if (sum(a[i][j] * x[j] for j in range(n)) - b[i]) % mod:
            return None
    return x


def columns_matrix(vectors: list) -> Matrix:
    """Stack vectors as the columns of a matrix."""
    n = len(vectors[0])
    return [[vec[i] for vec in vectors] for i in range(n)]


def subgroup_order_mod(vectors: list, mod: int, n: int) -> int:
    """Order of the subgroup of (Z/mod)^n generated by the given vectors."""
    if not vectors:
        return 1
    a = columns_matrix(list(vectors))
    for i in range(n):
        a[i].extend(mod * int(i == j) for j in range(n))
    d, _, _ = smith_normal_form(a)
    index = 1
    for i in range(n):
        index *= d[i]
    assert index != 0
    return mod**n // index


def subgroup_contains(vectors: list, target: list, mod: int) -> bool:
    """Whether target lies in the subgroup of (Z/mod)^n spanned by vectors."""
    if all(x % mod == 0 for x in target):
        return True
    if not vectors:
        return False
    return solve_mod(columns_matrix(list(vectors)), list(target), mod) is not None
