"""Cayley-table loops.

A loop of order n is stored as an n x n Latin square over 0..n-1 with the
identity pinned at index 0.  All heavy scans (associativity, the commutative
Moufang law x^2(yz) = (xy)(xz), associator tensors) are vectorised with
numpy and chunked so that order-1024 tables stay within memory.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from .errors import (
    BadDimension,
    CrossLoop,
    NoIdentity,
    NotLatinSquare,
    NotNormal,
    OrderOverflow,
    ParseError,
)

MAX_ORDER_DEFAULT = 1024

# n^3 tensors are cached as int16; 300^3 is ~54 MB which is the ceiling we
# accept for cached associator / inner-mapping tables.
_TENSOR_LIMIT = 300

# row-block size for chunked n^3 scans
def _chunk_rows(n):
    return max(1, (1 << 24) // max(1, n * n))


@dataclass(frozen=True)
class LoopDiagnostics:
    """Outcome of the structural scans over a multiplication table.

    ``first_violation`` is the lexicographically least triple violating the
    strongest failed triple law: the commutative Moufang identity if it has
    violations, otherwise associativity.  Structural failures (Latin or
    identity defects, bare non-commutativity) leave it as None.
    """

    is_latin: bool
    has_identity: bool
    is_commutative: bool
    is_cml: bool
    is_associative: bool
    first_violation: Optional[Tuple[int, int, int]]


class CayleyLoop:
    """Immutable finite loop given by its multiplication table.

    The constructor validates the table: square shape, entries in range,
    Latin rows and columns, and element 0 acting as two-sided identity.
    Derived tables (inverses, left division, associators) are computed
    lazily and cached; the instance itself is never mutated afterwards.
    """

    def __init__(self, table, name=None):
        arr = np.asarray(table)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise BadDimension(f"expected a non-empty square table, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise ParseError("table entries must be integers")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            bad = arr.min() if arr.min() < 0 else arr.max()
            raise ParseError(f"value {bad} out of range 0..{n - 1}")
        arr = arr.astype(np.int16 if n <= (1 << 15) else np.int32)
        _check_latin(arr)
        if not (np.array_equal(arr[0], np.arange(n)) and np.array_equal(arr[:, 0], np.arange(n))):
            raise NoIdentity("element 0 is not a two-sided identity")
        arr.setflags(write=False)
        self.table = arr
        self.n = n
        self.name = name if name is not None else f"loop{n}"
        self._inv = None
        self._ldiv = None
        self._assoc = None
        self._inner = None
        self._diag = None

    # -- basic arithmetic on element indices --------------------------------

    def mul(self, i, j):
        return int(self.table[i, j])

    def inverse_array(self):
        if self._inv is None:
            inv = np.argmin(self.table, axis=1).astype(self.table.dtype)
            inv.setflags(write=False)
            self._inv = inv
        return self._inv

    def inv(self, i):
        return int(self.inverse_array()[i])

    def ldiv_table(self):
        """ldiv[u, w] is the unique k with u * k = w."""
        if self._ldiv is None:
            n = self.n
            ld = np.empty((n, n), dtype=self.table.dtype)
            ld[np.arange(n)[:, None], self.table] = np.arange(n, dtype=self.table.dtype)
            ld.setflags(write=False)
            self._ldiv = ld
        return self._ldiv

    def ldiv(self, i, j):
        return int(self.ldiv_table()[i, j])

    def power(self, i, k):
        """k-th power of element i, evaluated as a left-iterated product.

        Unambiguous whenever single elements generate groups, which holds
        in every diassociative loop and in particular in every CML.
        """
        if k < 0:
            return self.power(self.inv(i), -k)
        acc = 0
        for _ in range(k):
            acc = int(self.table[i, acc])
        return acc

    def element_order(self, i):
        k, acc = 1, i
        while acc != 0:
            acc = int(self.table[i, acc])
            k += 1
        return k

    def assoc(self, a, b, c):
        """Associator index k solving (a(bc)) * k = (ab)c, read off the table."""
        t = self.table
        left = t[t[a, b], c]
        right = t[a, t[b, c]]
        return int(self.ldiv_table()[right, left])

    # -- cached tensors ------------------------------------------------------

    def associator_table(self):
        """Full tensor A[a, b, c] = index of the associator (a, b, c)."""
        if self._assoc is None:
            self._require_tensor("associator table")
            t = self.table
            a_bc = t[:, t]          # a * (b c)
            ab_c = t[t]             # (a b) * c
            self._assoc = self.ldiv_table()[a_bc, ab_c]
            self._assoc.setflags(write=False)
        return self._assoc

    def inner_mapping_table(self):
        """Tensor I[x, y, z] = image of z under L(xy)^-1 L(x) L(y).

        Computed directly from translation composition, independently of
        the associator tensor, so the two can cross-check each other.
        """
        if self._inner is None:
            self._require_tensor("inner mapping table")
            t = self.table
            x_yz = t[:, t]                       # x * (y z), indexed [x, y, z]
            self._inner = self.ldiv_table()[t[:, :, None], x_yz]
            self._inner.setflags(write=False)
        return self._inner

    def _require_tensor(self, what):
        if self.n > _TENSOR_LIMIT:
            raise OrderOverflow(what, _TENSOR_LIMIT, self.n)

    # -- misc ----------------------------------------------------------------

    def element(self, i):
        if not 0 <= i < self.n:
            raise ParseError(f"element index {i} out of range 0..{self.n - 1}")
        return LoopElement(self, int(i))

    def elements(self):
        return [LoopElement(self, i) for i in range(self.n)]

    def diagnostics(self):
        if self._diag is None:
            self._diag = diagnose(self.table)
        return self._diag

    def exponent(self):
        out = 1
        for i in range(self.n):
            out = int(np.lcm(out, self.element_order(i)))
        return out

    def serialize(self):
        lines = [f"# name: {self.name}", str(self.n)]
        for row in self.table:
            lines.append(" ".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"CayleyLoop({self.name!r}, n={self.n})"

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class LoopElement:
    loop: CayleyLoop
    index: int

    def _join(self, other):
        if not isinstance(other, LoopElement):
            raise TypeError(f"cannot combine LoopElement with {type(other).__name__}")
        if self.loop is not other.loop:
            raise CrossLoop("operands belong to different loops")
        return other

    def __mul__(self, other):
        other = self._join(other)
        return LoopElement(self.loop, self.loop.mul(self.index, other.index))

    def inv(self):
        return LoopElement(self.loop, self.loop.inv(self.index))

    def __pow__(self, k):
        return LoopElement(self.loop, self.loop.power(self.index, k))

    def order(self):
        return self.loop.element_order(self.index)

    def __repr__(self):
        return f"<{self.index} in {self.loop.name}>"


def mul(a, b):
    return a * b


def inv(a):
    return a.inv()


def power(a, k):
    return a ** k


def associator(a, b, c):
    b = a._join(b)
    c = a._join(c)
    return LoopElement(a.loop, a.loop.assoc(a.index, b.index, c.index))


# -- validation and diagnostics ---------------------------------------------


def _check_latin(arr):
    n = arr.shape[0]
    ref = np.arange(n)
    for axis, mat in (("row", arr), ("col", arr.T)):
        ok = (np.sort(mat, axis=1) == ref).all(axis=1)
        if not ok.all():
            idx = int(np.argmin(ok))
            counts = np.bincount(np.asarray(mat[idx], dtype=np.int64), minlength=n)
            value = int(np.argmax(counts > 1))
            raise NotLatinSquare(axis, idx, value)


def diagnose(loop_or_table):
    """Run the structural scans and return a LoopDiagnostics.

    Accepts a CayleyLoop or a raw square table; raw tables let callers
    inspect material that the validating constructor would reject.
    """
    if isinstance(loop_or_table, CayleyLoop):
        t = loop_or_table.table
    else:
        t = np.asarray(loop_or_table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise BadDimension(f"expected a non-empty square table, got shape {t.shape}")
        if not np.issubdtype(t.dtype, np.integer):
            raise ParseError("table entries must be integers")
        if t.min() < 0 or t.max() >= t.shape[0]:
            raise ParseError("table entry out of range")
    n = t.shape[0]
    ref = np.arange(n)

    is_latin = bool(
        (np.sort(t, axis=1) == ref).all() and (np.sort(t, axis=0) == ref[:, None]).all()
    )
    has_identity = bool(np.array_equal(t[0], ref) and np.array_equal(t[:, 0], ref))
    is_commutative = bool(np.array_equal(t, t.T))

    sq = t[ref, ref]
    first_cml = None
    first_assoc = None
    block = _chunk_rows(n)
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        rows = np.arange(lo, hi)
        # associativity: (xy)z vs x(yz)
        if first_assoc is None:
            bad = t[t[rows], :] != t[rows][:, t]
            if bad.any():
                off = int(np.argmax(bad))
                x, y, z = np.unravel_index(off, bad.shape)
                first_assoc = (int(x) + lo, int(y), int(z))
        # Moufang law: x^2 (yz) vs (xy)(xz)
        if first_cml is None:
            lhs = t[sq[rows]][:, t]
            rhs = t[t[rows][:, :, None], t[rows][:, None, :]]
            bad = lhs != rhs
            if bad.any():
                off = int(np.argmax(bad))
                x, y, z = np.unravel_index(off, bad.shape)
                first_cml = (int(x) + lo, int(y), int(z))
        if first_assoc is not None and first_cml is not None:
            break

    is_associative = first_assoc is None
    is_cml = is_commutative and first_cml is None
    violation = first_cml if first_cml is not None else first_assoc
    return LoopDiagnostics(
        is_latin=is_latin,
        has_identity=has_identity,
        is_commutative=is_commutative,
        is_cml=is_cml,
        is_associative=is_associative,
        first_violation=violation,
    )


# -- parsing and generation --------------------------------------------------


def parse_loop(text, name=None):
    """Parse the plain text format: optional # comments, order line, n rows.

    A ``# name: <label>`` header names the loop; *name* is the fallback used
    when the text carries no header.
    """
    header_name = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("name:"):
                header_name = body[5:].strip()
            continue
        rows.append((lineno, line))
    if not rows:
        raise ParseError("empty input")
    lineno, head = rows[0]
    try:
        n = int(head)
    except ValueError:
        raise ParseError(f"line {lineno}: order is not an integer: {head!r}") from None
    if n <= 0:
        raise BadDimension(f"declared order {n} is not positive")
    body = rows[1:]
    if len(body) != n:
        raise BadDimension(f"declared order {n} but found {len(body)} table rows")
    table = []
    for lineno, line in body:
        toks = line.split()
        if len(toks) != n:
            raise BadDimension(f"line {lineno}: expected {n} entries, found {len(toks)}")
        try:
            table.append([int(tok) for tok in toks])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token in table row") from None
    return CayleyLoop(np.array(table), name=header_name if header_name is not None else name)


def _guard_order(n, max_order):
    limit = MAX_ORDER_DEFAULT if max_order is None else max_order
    if n > limit:
        raise OrderOverflow("max-order", limit, n)


def gen_abelian(moduli, max_order=None, name=None):
    """Direct sum of cyclic groups, mixed-radix encoded most significant first."""
    moduli = list(moduli)
    if any(m < 1 for m in moduli):
        raise BadDimension(f"moduli must be positive: {moduli}")
    n = 1
    for m in moduli:
        n *= m
    _guard_order(n, max_order)
    if not moduli:
        moduli = [1]
    digits = np.zeros((n, len(moduli)), dtype=np.int64)
    strides = np.ones(len(moduli), dtype=np.int64)
    for k in range(len(moduli) - 2, -1, -1):
        strides[k] = strides[k + 1] * moduli[k + 1]
    idx = np.arange(n)
    for k, m in enumerate(moduli):
        digits[:, k] = (idx // strides[k]) % m
    sums = (digits[:, None, :] + digits[None, :, :]) % np.array(moduli)
    table = (sums * strides).sum(axis=2)
    label = name if name is not None else "abelian:" + ",".join(str(m) for m in moduli)
    return CayleyLoop(table, name=label)


def gen_zassenhaus81():
    """The order-81 commutative Moufang loop on 4-tuples over Z_3.

    Product: coordinatewise addition except the last coordinate, which
    picks up the twist (x3 - y3)(x1 y2 - x2 y1).  Base-3 encoded with the
    first coordinate most significant, so e1=27, e2=9, e3=3, e4=1.
    """
    idx = np.arange(81)
    d = np.stack([(idx // 27) % 3, (idx // 9) % 3, (idx // 3) % 3, idx % 3], axis=1)
    x = d[:, None, :]
    y = d[None, :, :]
    twist = (x[..., 2] - y[..., 2]) * (x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0])
    coords = (x + y) % 3
    last = (x[..., 3] + y[..., 3] + twist) % 3
    table = coords[..., 0] * 27 + coords[..., 1] * 9 + coords[..., 2] * 3 + last
    return CayleyLoop(table, name="zassenhaus81")


def direct_product(a, b, max_order=None, name=None):
    """Componentwise product on pairs, encoded as i * order(b) + j."""
    n = a.n * b.n
    _guard_order(n, max_order)
    ta = a.table.astype(np.int64)
    tb = b.table.astype(np.int64)
    table = (ta[:, None, :, None] * b.n + tb[None, :, None, :]).reshape(n, n)
    label = name if name is not None else f"{a.name}x{b.name}"
    return CayleyLoop(table, name=label)


def quotient(loop, subloop):
    """Quotient loop by a normal subloop, with the coset projection.

    Returns (Q, proj) where proj[x] is the index in Q of the coset of x.
    Coset representatives are the least member of each coset and the
    identity coset always lands at index 0.
    """
    from .structure import coerce_subloop, is_normal, normality_witness

    h = coerce_subloop(loop, subloop)
    if not is_normal(loop, h):
        raise NotNormal(normality_witness(loop, h))
    t = loop.table
    members = np.array(sorted(h.elements), dtype=np.int64)
    cos = np.full(loop.n, -1, dtype=np.int64)
    reps = []
    for x in range(loop.n):
        if cos[x] == -1:
            cos[np.asarray(t[x, members], dtype=np.int64)] = len(reps)
            reps.append(x)
    reps = np.array(reps, dtype=np.int64)
    qtable = cos[np.asarray(t[np.ix_(reps, reps)], dtype=np.int64)]
    q = CayleyLoop(qtable, name=f"{loop.name}/{len(members)}")
    return q, tuple(int(c) for c in cos)
