"""Subloop structure: generation, normality, lattices, central series, Frattini.

Subloops are element sets of a parent CayleyLoop.  Closures and the full
lattice run on numpy boolean masks; the lattice is the join-closure of the
cyclic subloops, which is provably complete (every subloop is the join of
the cyclic subloops of its elements).
"""

import random
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (
    NotASubloop,
    NotCML,
    NotNested,
    OrderOverflow,
    ParseError,
)
from .loop_core import CayleyLoop, quotient

LATTICE_GUARD_DEFAULT = 128


class Subloop:
    """A validated subloop: closed under product, contains the identity.

    Finite product-closure forces identity and inverse closure, but the
    constructor checks all three anyway and raises NotASubloop with the
    first offending pair.
    """

    def __init__(self, parent, elements):
        self.parent = parent
        elems = sorted({int(e) for e in elements})
        if not elems:
            raise NotASubloop("a subloop cannot be empty")
        if elems[0] < 0 or elems[-1] >= parent.n:
            raise ParseError(f"element index out of range 0..{parent.n - 1}")
        if 0 not in elems:
            raise NotASubloop("missing identity element 0")
        members = np.array(elems, dtype=np.int64)
        prods = np.asarray(parent.table[np.ix_(members, members)], dtype=np.int64)
        inside = np.zeros(parent.n, dtype=bool)
        inside[members] = True
        if not inside[prods].all():
            i, j = np.unravel_index(int(np.argmin(inside[prods])), prods.shape)
            raise NotASubloop(
                f"not closed: {elems[i]} * {elems[j]} = {int(prods[i, j])} escapes"
            )
        if not inside[np.asarray(parent.inverse_array(), dtype=np.int64)[members]].all():
            raise NotASubloop("not closed under inverses")
        self.elements = frozenset(elems)
        self.members = tuple(elems)
        self._mask = inside
        self._mask.setflags(write=False)

    @property
    def size(self):
        return len(self.members)

    @property
    def is_full(self):
        return len(self.members) == self.parent.n

    @property
    def is_trivial(self):
        return len(self.members) == 1

    def mask(self):
        return self._mask

    def __contains__(self, i):
        return int(i) in self.elements

    def __le__(self, other):
        return self.parent is other.parent and self.elements <= other.elements

    def __eq__(self, other):
        return (
            isinstance(other, Subloop)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def serialize(self):
        return ",".join(str(m) for m in self.members)

    def __repr__(self):
        return f"Subloop(order={self.size} of {self.parent.name})"


def full_subloop(loop):
    return Subloop(loop, range(loop.n))


def trivial_subloop(loop):
    return Subloop(loop, [0])


def coerce_subloop(loop, value):
    """Accept a Subloop of this loop or a bare element collection."""
    if isinstance(value, Subloop):
        if value.parent is not loop:
            raise NotNested("subloop belongs to a different parent loop")
        return value
    return Subloop(loop, value)


# -- closure -----------------------------------------------------------------


def _close(table, base_mask, new_mask):
    """Product-closure of base_mask | new_mask, assuming base_mask is closed."""
    known = base_mask | new_mask
    frontier = np.flatnonzero(new_mask & ~base_mask)
    while frontier.size:
        kidx = np.flatnonzero(known)
        hit = np.zeros(known.shape[0], dtype=bool)
        hit[np.asarray(table[np.ix_(frontier, kidx)], dtype=np.int64).ravel()] = True
        hit[np.asarray(table[np.ix_(kidx, frontier)], dtype=np.int64).ravel()] = True
        hit &= ~known
        known |= hit
        frontier = np.flatnonzero(hit)
    return known


def generate_subloop(loop, indices):
    """Smallest subloop containing the given element indices."""
    seed = np.zeros(loop.n, dtype=bool)
    seed[0] = True
    for i in indices:
        i = int(i)
        if not 0 <= i < loop.n:
            raise ParseError(f"element index {i} out of range 0..{loop.n - 1}")
        seed[i] = True
    base = np.zeros(loop.n, dtype=bool)
    base[0] = True
    return Subloop(loop, np.flatnonzero(_close(loop.table, base, seed)))


def join(a, b):
    if a.parent is not b.parent:
        raise NotNested("subloops of different parents")
    return Subloop(a.parent, np.flatnonzero(_close(a.parent.table, a.mask(), b.mask())))


# -- normality ---------------------------------------------------------------


def _assoc_block(loop, first_idx, second_idx, third_idx):
    """Associator values (a, b, c) over the three index arrays."""
    return loop.associator_table()[np.ix_(first_idx, second_idx, third_idx)]


def is_normal(loop, h, k=None, check_inner=True):
    """True iff every associator (h, y, x) with y, x in K stays inside H.

    That criterion characterises invariance of H under the inner mappings
    of K in a CML; a second route applies the inner-mapping tensor
    L(x, y) restricted to K directly and the two verdicts must agree.
    """
    h = coerce_subloop(loop, h)
    k = full_subloop(loop) if k is None else coerce_subloop(loop, k)
    if not h.elements <= k.elements:
        raise NotNested(f"H (order {h.size}) is not contained in K (order {k.size})")
    hm = np.array(h.members, dtype=np.int64)
    km = np.array(k.members, dtype=np.int64)
    inside = h.mask()
    verdict = bool(inside[_assoc_block(loop, hm, km, km)].all())
    if check_inner:
        images = loop.inner_mapping_table()[np.ix_(km, km, hm)]
        alt = bool(inside[images].all())
        if alt != verdict:
            raise AssertionError("normality routes disagree; table corrupted")
    return verdict


def normality_witness(loop, h, k=None):
    """Least triple (h, y, x) over (H, K, K) whose associator escapes H."""
    h = coerce_subloop(loop, h)
    k = full_subloop(loop) if k is None else coerce_subloop(loop, k)
    hm = np.array(h.members, dtype=np.int64)
    km = np.array(k.members, dtype=np.int64)
    bad = ~h.mask()[_assoc_block(loop, hm, km, km)]
    if not bad.any():
        return None
    i, j, l = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return (int(hm[i]), int(km[j]), int(km[l]))


# -- the subloop lattice -----------------------------------------------------


def cyclic_subloops(loop):
    """Distinct subloops <x>, including the trivial one, sorted."""
    seen = {}
    base = np.zeros(loop.n, dtype=bool)
    base[0] = True
    for x in range(loop.n):
        seed = base.copy()
        seed[x] = True
        mask = _close(loop.table, base, seed)
        seen.setdefault(mask.tobytes(), mask)
    return [Subloop(loop, np.flatnonzero(m)) for m in _sorted_masks(seen.values())]


def _sorted_masks(masks):
    return sorted(masks, key=lambda m: (int(m.sum()), tuple(np.flatnonzero(m))))


def all_subloops(loop, lattice_guard=LATTICE_GUARD_DEFAULT):
    """Every subloop, as the join-closure of the cyclic subloops."""
    if loop.n > lattice_guard:
        raise OrderOverflow("lattice", lattice_guard, loop.n)
    table = loop.table
    atom_masks = []
    found = {}
    base = np.zeros(loop.n, dtype=bool)
    base[0] = True
    found[base.tobytes()] = base
    for x in range(1, loop.n):
        seed = base.copy()
        seed[x] = True
        mask = _close(table, base, seed)
        key = mask.tobytes()
        if key not in found:
            found[key] = mask
            atom_masks.append(mask)
    worklist = list(found.values())
    while worklist:
        current = worklist.pop()
        if current.all():
            continue
        for atom in atom_masks:
            if (atom & ~current).any():
                merged = _close(table, current, atom)
                key = merged.tobytes()
                if key not in found:
                    found[key] = merged
                    worklist.append(merged)
    return [Subloop(loop, np.flatnonzero(m)) for m in _sorted_masks(found.values())]


# -- distinguished subloops --------------------------------------------------


def center(loop):
    """Elements commuting with everything and associating in first position."""
    t = loop.table
    n = loop.n
    commutes = (t == t.T).all(axis=1)
    central = np.zeros(n, dtype=bool)
    for x in range(n):
        if commutes[x]:
            central[x] = bool((t[t[x], :] == t[x, t]).all())
    return Subloop(loop, np.flatnonzero(central))


def associator_subloop(loop):
    """Subloop generated by all associators (a, b, c)."""
    t = loop.table
    ld = loop.ldiv_table()
    values = set()
    block = max(1, (1 << 22) // max(1, loop.n * loop.n))
    for lo in range(0, loop.n, block):
        rows = np.arange(lo, min(loop.n, lo + block))
        a_bc = t[rows][:, t]
        ab_c = t[t[rows], :]
        values.update(int(v) for v in np.unique(ld[a_bc, ab_c]))
    return generate_subloop(loop, values)


def cube_subloop(loop):
    """The set of cubes x^3; in a CML this set is itself a subloop."""
    _require_cml(loop)
    idx = np.arange(loop.n)
    cubes = loop.table[np.asarray(loop.table[idx, idx], dtype=np.int64), idx]
    return Subloop(loop, np.unique(np.asarray(cubes, dtype=np.int64)))


def _require_cml(loop):
    if not loop.diagnostics().is_cml:
        raise NotCML(f"{loop.name} does not satisfy the commutative Moufang law")


@dataclass(frozen=True)
class CentralSeries:
    """Ascending central series Z_0 <= Z_1 <= ...; terms[0] is trivial."""

    terms: Tuple[Subloop, ...]

    @property
    def reaches_top(self):
        return self.terms[-1].is_full

    @property
    def nilpotency_class(self) -> Optional[int]:
        return len(self.terms) - 1 if self.reaches_top else None


def upper_central_series(loop):
    """Iterated centers via quotients: Z_{i+1}/Z_i = Z(L/Z_i)."""
    _require_cml(loop)
    terms = [trivial_subloop(loop)]
    while not terms[-1].is_full:
        q, proj = quotient(loop, terms[-1])
        zq = center(q)
        proj_arr = np.array(proj, dtype=np.int64)
        lifted = Subloop(loop, np.flatnonzero(zq.mask()[proj_arr]))
        if lifted == terms[-1]:
            break
        terms.append(lifted)
    return CentralSeries(terms=tuple(terms))


def maximal_subloops(loop):
    """Maximal proper subloops, via hyperplanes of the abelian quotient.

    Every maximal subloop of a finite CML contains the associator subloop,
    so maximal subloops correspond to maximal subgroups of the abelian
    quotient A = L / L'; those are the index-p subgroups for the primes p
    dividing |A|, found by linear algebra over GF(p).
    """
    _require_cml(loop)
    if loop.n == 1:
        return []
    derived = associator_subloop(loop)
    quot, proj = quotient(loop, derived)
    proj_arr = np.array(proj, dtype=np.int64)
    out = []
    for p in _prime_factors(quot.n):
        powered = Subloop(
            quot, np.unique([quot.power(x, p) for x in range(quot.n)])
        )
        vec, vproj = quotient(quot, powered)
        vproj_arr = np.array(vproj, dtype=np.int64)
        for hyper in _hyperplanes(vec, p):
            in_quot = hyper.mask()[vproj_arr]
            out.append(Subloop(loop, np.flatnonzero(in_quot[proj_arr])))
    uniq = {s.elements: s for s in out}
    return sorted(uniq.values(), key=lambda s: s.members)


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _hyperplanes(vec, p):
    """Index-p subgroups of an elementary abelian p-group given as a loop."""
    basis = []
    span = trivial_subloop(vec)
    for x in range(1, vec.n):
        if x not in span:
            basis.append(x)
            span = join(span, generate_subloop(vec, [x]))
    r = len(basis)
    if r == 0:
        return
    # coordinates of every element in the chosen basis
    coords = {0: (0,) * r}
    elems = [0]
    for k, b in enumerate(basis):
        layer = list(elems)
        for e in layer:
            acc = e
            for c in range(1, p):
                acc = vec.mul(acc, b)
                coord = list(coords[e])
                coord[k] = c
                coords[acc] = tuple(coord)
                elems.append(acc)
    coord_arr = np.zeros((vec.n, r), dtype=np.int64)
    for e, cs in coords.items():
        coord_arr[e] = cs
    # functionals up to scalar: first nonzero weight equals 1
    for lead in range(r):
        tail = r - lead - 1
        for rest in range(p**tail):
            weights = np.zeros(r, dtype=np.int64)
            weights[lead] = 1
            for k in range(tail):
                weights[lead + 1 + k] = (rest // (p ** (tail - 1 - k))) % p
            vals = (coord_arr @ weights) % p
            yield Subloop(vec, np.flatnonzero(vals == 0))


def frattini_subloop(loop):
    """Intersection of all maximal subloops (the whole loop if none exist)."""
    maxima = maximal_subloops(loop)
    if not maxima:
        return full_subloop(loop)
    mask = maxima[0].mask().copy()
    for m in maxima[1:]:
        mask &= m.mask()
    return Subloop(loop, np.flatnonzero(mask))


# -- divisibility and non-generators -----------------------------------------


def is_divisible(loop):
    """True iff x -> x^p is onto for every prime p dividing the exponent."""
    exp = loop.exponent()
    for p in _prime_factors(exp):
        image = {loop.power(x, p) for x in range(loop.n)}
        if len(image) != loop.n:
            return False
    return True


def non_generator_witness(loop, x, trials=200, seed=0, maximals=None):
    """Sampled refutation that x is a non-generator.

    Returns a subset S with <S + x> = L but <S> != L, or None if no
    sampled subset refutes it.  For x outside the Frattini subloop a
    maximal subloop avoiding x is tried first, which is a guaranteed
    witness; random subsets cannot prove the converse, only refute.
    """
    x = int(x)
    if maximals is None:
        maximals = maximal_subloops(loop)
    for m in maximals:
        if x not in m:
            return m.members
    rng = random.Random(seed)
    pool = list(range(1, loop.n))
    for _ in range(trials):
        size = rng.randint(0, min(len(pool), 5))
        s = rng.sample(pool, size)
        with_x = generate_subloop(loop, s + [x])
        if with_x.is_full and not generate_subloop(loop, s).is_full:
            return tuple(sorted(s))
    return None
