"""Exact permutation groups at desk scale.

Groups carry a stabilizer chain built from Schreier's lemma: each level
stores a base point, an orbit transversal, and generators of the next
stabilizer obtained as deduplicated Schreier generators.  That chain is a
base-and-strong-generating-set by construction, so order is the product
of transversal sizes and membership is a sift.  No randomization anywhere;
all orbits and products are processed in sorted order for reproducibility.
"""

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DegreeMismatch, NotNilpotent, NotSubgroup, OrderOverflow

ELEMENT_GUARD_DEFAULT = 10**6
FRATTINI_ORACLE_GUARD = 512


class Permutation:
    """A permutation of {0..n-1}; images[i] is the image of point i."""

    __slots__ = ("images",)

    def __init__(self, images):
        imgs = tuple(int(i) for i in images)
        n = len(imgs)
        if sorted(imgs) != list(range(n)):
            raise DegreeMismatch(f"images {imgs} are not a bijection on 0..{n - 1}")
        self.images = imgs

    @classmethod
    def identity(cls, n):
        p = object.__new__(cls)
        p.images = tuple(range(n))
        return p

    @classmethod
    def _raw(cls, images):
        p = object.__new__(cls)
        p.images = images
        return p

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, point):
        return self.images[point]

    def __mul__(self, other):
        """Composition: (p * q)(i) = p(q(i))."""
        if len(self.images) != len(other.images):
            raise DegreeMismatch(
                f"degree {len(self.images)} vs {len(other.images)}"
            )
        a, b = self.images, other.images
        return Permutation._raw(tuple(a[b[i]] for i in range(len(a))))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images):
            inv[img] = i
        return Permutation._raw(tuple(inv))

    def conjugate_by(self, g):
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self):
        return all(i == img for i, img in enumerate(self.images))

    def order(self):
        n = 1
        for length in self.cycle_lengths():
            n = n * length // gcd(n, length)
        return n

    def cycle_lengths(self):
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            length = 0
            p = start
            while not seen[p]:
                seen[p] = True
                p = self.images[p]
                length += 1
            out.append(length)
        return out

    def serialize(self):
        return list(self.images)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def perm_from_cycles(n, cycles):
    """Build a degree-n permutation from disjoint cycles like [(0, 1, 2)]."""
    images = list(range(n))
    for cyc in cycles:
        for i, pt in enumerate(cyc):
            images[pt] = cyc[(i + 1) % len(cyc)]
    return Permutation(images)


@dataclass
class _ChainLevel:
    base: int
    generators: List[Permutation]
    transversal: Dict[int, Permutation]  # orbit point -> rep (rep(base) = point)


class PermGroup:
    """Immutable permutation group with a stabilizer chain."""

    def __init__(self, degree, generators=()):
        self.degree = int(degree)
        gens = []
        seen = set()
        for g in generators:
            if g.degree != self.degree:
                raise DegreeMismatch(
                    f"generator degree {g.degree}, group degree {self.degree}"
                )
            if not g.is_identity() and g.images not in seen:
                seen.add(g.images)
                gens.append(g)
        self.generators = tuple(gens)
        self.chain = self._build_chain()
        self._elements: Optional[Tuple[Permutation, ...]] = None
        self._element_keys = None
        self._reduced: Optional[Tuple[Permutation, ...]] = None

    # -- chain construction --------------------------------------------------

    def _build_chain(self):
        levels = []
        gens = list(self.generators)
        while gens:
            base = min(
                i for g in gens for i in range(self.degree) if g(i) != i
            )
            transversal = {base: Permutation.identity(self.degree)}
            frontier = [base]
            while frontier:
                nxt = []
                for pt in frontier:
                    for g in gens:
                        img = g(pt)
                        if img not in transversal:
                            transversal[img] = g * transversal[pt]
                            nxt.append(img)
                frontier = sorted(nxt)
            # Schreier generators of the stabilizer, deduplicated
            stab = []
            seen = set()
            for pt in sorted(transversal):
                u = transversal[pt]
                for g in gens:
                    rep = transversal[g(pt)]
                    s = rep.inverse() * (g * u)
                    if not s.is_identity() and s.images not in seen:
                        seen.add(s.images)
                        stab.append(s)
            levels.append(_ChainLevel(base=base, generators=gens, transversal=transversal))
            gens = stab
        return tuple(levels)

    # -- queries -------------------------------------------------------------

    def order(self):
        n = 1
        for level in self.chain:
            n *= len(level.transversal)
        return n

    def sift(self, p):
        """Factor p through the chain; returns the residue (identity iff member)."""
        if p.degree != self.degree:
            raise DegreeMismatch(f"degree {p.degree} vs group degree {self.degree}")
        for level in self.chain:
            img = p(level.base)
            rep = level.transversal.get(img)
            if rep is None:
                return p
            p = rep.inverse() * p
        return p

    def contains(self, p):
        return self.sift(p).is_identity()

    def __contains__(self, p):
        return self.contains(p)

    def enumerate_elements(self, element_guard=ELEMENT_GUARD_DEFAULT):
        if self.order() > element_guard:
            raise OrderOverflow("element", element_guard, self.order())
        if self._elements is None:
            elems = [Permutation.identity(self.degree)]
            for level in reversed(self.chain):
                reps = [level.transversal[pt] for pt in sorted(level.transversal)]
                elems = [rep * e for rep in reps for e in elems]
            self._elements = tuple(elems)
        return list(self._elements)

    def element_keys(self):
        """Frozenset of image tuples, for fast repeated membership."""
        if self._element_keys is None:
            self._element_keys = frozenset(
                p.images for p in self.enumerate_elements()
            )
        return self._element_keys

    def is_subgroup_of(self, other):
        return self.degree == other.degree and all(
            other.contains(g) for g in self.generators
        )

    def serialize(self):
        return {
            "degree": self.degree,
            "order": self.order(),
            "generators": [g.serialize() for g in self.generators],
        }

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def group_from_generators(gens, degree=None):
    if degree is None:
        if not gens:
            raise DegreeMismatch("degree required for an empty generator list")
        degree = gens[0].degree
    return PermGroup(degree, gens)


def reduced_generators(G):
    """A greedy irredundant generating subset (same group, fewer iterations)."""
    if G._reduced is None:
        picked = []
        current = PermGroup(G.degree, ())
        for g in G.generators:
            if not current.contains(g):
                picked.append(g)
                current = PermGroup(G.degree, picked)
        G._reduced = tuple(picked)
    return list(G._reduced)


def group_from_elements(degree, elements):
    """Group from a (closed) element list, with greedy generator reduction."""
    gens = []
    current = PermGroup(degree, ())
    for p in elements:
        if not current.contains(p):
            gens.append(p)
            current = PermGroup(degree, gens)
    return current


def closure_elements(degree, gens, element_guard=ELEMENT_GUARD_DEFAULT):
    """Brute-force closure enumeration, independent of the chain machinery."""
    identity = Permutation.identity(degree)
    found = {identity.images: identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = g * p
                if q.images not in found:
                    if len(found) >= element_guard:
                        raise OrderOverflow("element", element_guard, len(found) + 1)
                    found[q.images] = q
                    nxt.append(q)
        frontier = nxt
    return list(found.values())


# -- distinguished subgroups -------------------------------------------------


def center_of_group(G, element_guard=ELEMENT_GUARD_DEFAULT):
    """Elements commuting with every generator (hence with everything)."""
    gens = reduced_generators(G)
    central = [
        p
        for p in G.enumerate_elements(element_guard)
        if all((p * g).images == (g * p).images for g in gens)
    ]
    return group_from_elements(G.degree, central)


def normal_closure(G, seeds):
    """Least normal subgroup of G containing the seed permutations."""
    conj_gens = reduced_generators(G)
    gens = []
    seen = set()
    for s in seeds:
        if not s.is_identity() and s.images not in seen:
            seen.add(s.images)
            gens.append(s)
    H = PermGroup(G.degree, gens)
    work = list(gens)
    while work:
        h = work.pop()
        for g in conj_gens:
            c = h.conjugate_by(g)
            if not H.contains(c):
                gens.append(c)
                H = PermGroup(G.degree, gens)
                work.append(c)
    return H


def derived_subgroup(G):
    """Normal closure of the commutators of a generating set."""
    gens = reduced_generators(G)
    comms = []
    for a in gens:
        for b in gens:
            comms.append(a.inverse() * b.inverse() * a * b)
    return normal_closure(G, comms)


def upper_central_series_group(G, element_guard=ELEMENT_GUARD_DEFAULT):
    """Ascending chain Z_0 <= Z_1 <= ... over enumerated elements."""
    elements = G.enumerate_elements(element_guard)
    gens = reduced_generators(G)
    terms = [PermGroup(G.degree, ())]
    while True:
        prev_keys = terms[-1].element_keys()
        lifted = [
            p
            for p in elements
            if all(
                (p.inverse() * (g.inverse() * (p * g))).images in prev_keys
                for g in gens
            )
        ]
        nxt = group_from_elements(G.degree, lifted)
        if nxt.order() == terms[-1].order():
            break
        terms.append(nxt)
        if nxt.order() == G.order():
            break
    return terms


def is_nilpotent_group(G, element_guard=ELEMENT_GUARD_DEFAULT):
    series = upper_central_series_group(G, element_guard)
    return series[-1].order() == G.order()


def frattini_subgroup(G, element_guard=ELEMENT_GUARD_DEFAULT):
    """Frattini subgroup of a finite nilpotent group.

    For nilpotent G the maximal subgroups are exactly the index-p
    preimages of hyperplanes mod p, so Phi(G) is the intersection over
    primes p | order(G) of G' * <g^p : g in G>.  (The intersection over
    primes matters as soon as the order is not a prime power.)
    """
    if not is_nilpotent_group(G, element_guard):
        raise NotNilpotent(f"group of order {G.order()} has a stalled center chain")
    order = G.order()
    if order == 1:
        return PermGroup(G.degree, ())
    derived = derived_subgroup(G)
    elements = G.enumerate_elements(element_guard)
    result_keys = None
    for p in _prime_factors(order):
        gens = list(derived.generators)
        seen = {g.images for g in gens}
        for g in elements:
            q = _perm_power(g, p)
            if not q.is_identity() and q.images not in seen:
                seen.add(q.images)
                gens.append(q)
        sub = PermGroup(G.degree, gens)
        keys = sub.element_keys()
        result_keys = keys if result_keys is None else (result_keys & keys)
    ordered = [p for p in elements if p.images in result_keys]
    return group_from_elements(G.degree, ordered)


def _perm_power(p, k):
    acc = Permutation.identity(p.degree)
    for _ in range(k):
        acc = p * acc
    return acc


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


def frattini_subgroup_oracle(G, guard=FRATTINI_ORACLE_GUARD):
    """Intersection of maximal subgroups, by exhaustive subgroup search.

    The group's own Cayley table is a (Latin, associative) loop table, so
    the subloop-lattice machinery enumerates exactly the subgroups.
    """
    order = G.order()
    if order > guard:
        raise OrderOverflow("frattini-oracle", guard, order)
    elements = G.enumerate_elements()
    index = {p.images: i for i, p in enumerate(elements)}
    assert index[Permutation.identity(G.degree).images] == 0
    table = [
        [index[(a * b).images] for b in elements] for a in elements
    ]
    from .loop_core import CayleyLoop
    from .structure import all_subloops

    cayley = CayleyLoop(table, name="cayley")
    subs = all_subloops(cayley, lattice_guard=guard)
    proper = [s for s in subs if not s.is_full]
    maximal = [
        s for s in proper if not any(s.elements < t.elements for t in proper)
    ]
    if not maximal:
        return group_from_elements(G.degree, elements)
    common = set.intersection(*(set(s.members) for s in maximal))
    return group_from_elements(G.degree, [elements[i] for i in sorted(common)])


def normalizer_of_subgroup(G, H, element_guard=ELEMENT_GUARD_DEFAULT):
    """{g in G : g^-1 H g = H} over enumerated elements of G."""
    if not H.is_subgroup_of(G):
        raise NotSubgroup("H is not contained in G (generator sift failed)")
    hkeys = H.element_keys()
    hgens = H.generators
    keep = []
    for g in G.enumerate_elements(element_guard):
        ginv = g.inverse()
        if all(((ginv * h) * g).images in hkeys for h in hgens):
            keep.append(g)
    return group_from_elements(G.degree, keep)


def is_divisible_group(G, element_guard=ELEMENT_GUARD_DEFAULT):
    """Finite specialization: p-power maps are onto only in the trivial group."""
    order = G.order()
    elements = G.enumerate_elements(element_guard)
    exponent = 1
    for p in elements:
        o = p.order()
        exponent = exponent * o // gcd(exponent, o)
    divisible = True
    for p in _prime_factors(exponent):
        image = {_perm_power(g, p).images for g in elements}
        if len(image) != order:
            divisible = False
            break
    assert divisible == (order == 1), "finite divisible group must be trivial"
    return divisible
