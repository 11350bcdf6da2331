"""Exact integer and rational linear algebra on plain Python ints.

Everything in here is deliberately float-free: lattice invariants (signature,
determinant, Smith divisors, kernels) must be exact, and the matrices involved
are small (rank <= 22), so simple cubic algorithms on list-of-list matrices
are both fast enough and easy to audit.

Matrices are lists of rows of ints unless a function says otherwise.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegenerateLatticeError, InputError


def to_int_matrix(obj) -> list[list[int]]:
    """Coerce a nested sequence / numpy array to list-of-rows of Python ints.

    Raises InputError on ragged input or entries that are not integral.
    """
    rows = []
    width = None
    for row in obj:
        out = []
        for x in row:
            xi = int(x)
            if xi != x:
                raise InputError("matrix entry %r is not an integer" % (x,))
            out.append(xi)
        if width is None:
            width = len(out)
        elif len(out) != width:
            raise InputError("ragged matrix rows")
        rows.append(out)
    if width == 0 and rows:
        raise InputError("matrix rows must be nonempty")
    return rows


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def matmul(a, b):
    """Exact product of two int (or Fraction) matrices."""
    if not a or not b:
        return []
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def is_symmetric(a) -> bool:
    n = len(a)
    return all(len(r) == n for r in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i)
    )


def det_bareiss(a) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inertia(gram) -> tuple[int, int]:
    """Signature (n_plus, n_minus) of a symmetric matrix, exactly.

    Symmetric congruence diagonalization over Fraction. Even lattices have
    zero diagonals, so when no nonzero diagonal pivot is available we first
    add row/column j into row/column i (a congruence), which makes the new
    diagonal entry 2*a_ij != 0. Raises DegenerateLatticeError if the form is
    singular.
    """
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and m[i][j] != 0),
                None,
            )
            if pair is None:
                raise DegenerateLatticeError(
                    "gram matrix is singular (rank %d of %d)" % (n - len(active), n)
                )
            i, j = pair
            # v_i += v_j: new a_ii = a_ii + 2 a_ij + a_jj = 2 a_ij here
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        d = m[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for j in active:
            f = m[piv][j] / d
            if f == 0:
                continue
            for k in range(n):
                m[j][k] -= f * m[piv][k]
            for k in range(n):
                m[k][j] -= f * m[k][piv]
    return pos, neg


def _columns(a):
    return [list(col) for col in zip(*a)]


def column_hnf(basis_columns: list[list[int]]) -> list[list[int]]:
    """Canonical Hermite form of an integer column span.

    Input and output are lists of columns. The output basis is the unique
    one with positive pivots (scanning rows top down), zeros to the right of
    each pivot, and reduced entries to the left; zero columns are dropped.
    Two column spans are equal iff their forms are equal, which is how
    sublattice equality is decided.
    """
    cols = [c[:] for c in basis_columns if any(c)]
    if not cols:
        return []
    m = len(cols[0])
    lead = 0
    for r in range(m):
        # shrink row r to a single nonzero among columns >= lead
        while True:
            live = [j for j in range(lead, len(cols)) if cols[j][r] != 0]
            if not live:
                break
            j0 = min(live, key=lambda j: abs(cols[j][r]))
            cols[lead], cols[j0] = cols[j0], cols[lead]
            if len(live) == 1:
                break
            p = cols[lead][r]
            for j in range(lead + 1, len(cols)):
                if cols[j][r] != 0:
                    q = cols[j][r] // p
                    if q:
                        cols[j] = [x - q * y for x, y in zip(cols[j], cols[lead])]
        if lead >= len(cols) or cols[lead][r] == 0:
            continue
        if cols[lead][r] < 0:
            cols[lead] = [-x for x in cols[lead]]
        p = cols[lead][r]
        for j in range(lead):
            q = cols[j][r] // p
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[lead])]
        lead += 1
        if lead == len(cols):
            break
    return [c for c in cols[:lead] if any(c)]


def integer_kernel(a) -> list[list[int]]:
    """Basis (list of columns, Hermite-canonical) of {x : a @ x = 0} over Z.

    Kernels of integer maps are saturated subgroups by construction, so the
    returned basis always spans a primitive sublattice of Z^n.
    """
    if not a:
        raise InputError("empty matrix has no well-defined kernel here")
    n = len(a[0])
    cols = _columns(a)
    u = _columns(identity(n))
    lead = 0
    for r in range(len(a)):
        while True:
            live = [j for j in range(lead, n) if cols[j][r] != 0]
            if not live:
                break
            j0 = min(live, key=lambda j: abs(cols[j][r]))
            cols[lead], cols[j0] = cols[j0], cols[lead]
            u[lead], u[j0] = u[j0], u[lead]
            if len(live) == 1:
                break
            p = cols[lead][r]
            for j in range(lead + 1, n):
                if cols[j][r] != 0:
                    q = cols[j][r] // p
                    if q:
                        cols[j] = [x - q * y for x, y in zip(cols[j], cols[lead])]
                        u[j] = [x - q * y for x, y in zip(u[j], u[lead])]
        if lead < n and cols[lead][r] != 0:
            lead += 1
            if lead == n:
                break
    kernel = [u[j] for j in range(lead, n)]
    assert all(all(x == 0 for x in matvec(a, k)) for k in kernel)
    return column_hnf(kernel) if kernel else []


def smith_divisors(a) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix (positive,
    one per rank). Transforms are not tracked, only the divisors."""
    m = [row[:] for row in a]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    divisors = []
    t = 0
    while t < min(rows, cols):
        entries = [
            (abs(m[i][j]), i, j)
            for i in range(t, rows)
            for j in range(t, cols)
            if m[i][j] != 0
        ]
        if not entries:
            break
        _, pi, pj = min(entries)
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = m[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    q = m[i][t] // p
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                    if m[i][t] != 0:
                        m[t], m[i] = m[i], m[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    q = m[t][j] // p
                    for i in range(rows):
                        m[i][j] -= q * m[i][t]
                    if m[t][j] != 0:
                        for i in range(rows):
                            m[i][t], m[i][j] = m[i][j], m[i][t]
                        dirty = True
                        break
            if dirty:
                continue
            p = m[t][t]
            bad = next(
                (
                    i
                    for i in range(t + 1, rows)
                    if any(m[i][j] % p for j in range(t + 1, cols))
                ),
                None,
            )
            if bad is not None:
                m[t] = [x + y for x, y in zip(m[t], m[bad])]
                continue
            break
        divisors.append(abs(m[t][t]))
        t += 1
    return divisors
