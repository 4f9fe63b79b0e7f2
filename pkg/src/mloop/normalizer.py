"""Constructive subloop normalizers via the alternating P/D fixpoint.

Stages are computed literally in the written argument orders:

    P1 = {x in K : (H, H, x) subset H}
    D1 = {x in K : (H, x, P1) subset H}
    P_{i+1} = {x in K : (H, D_i, x) subset H}
    D_{i+1} = {x in K : (H, x, P_{i+1}) subset H}

until the pair (P, D) repeats.  The P-chain descends and the D-chain
ascends; the stabilized D-set is always a subloop in which H is normal
(both asserted).  The two chains need not meet: see normalizer_oracle's
docstring and the prop3/theorem2 checks for where that distinction shows
up on concrete loops.
"""

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import ChainStalled, NotCML, NotNested, OracleDisagreement
from .structure import (
    LATTICE_GUARD_DEFAULT,
    Subloop,
    all_subloops,
    coerce_subloop,
    full_subloop,
    generate_subloop,
    is_normal,
    join,
    trivial_subloop,
)


@dataclass(frozen=True)
class NormalizerTrace:
    p_stages: Tuple[Tuple[int, ...], ...]
    d_stages: Tuple[Tuple[int, ...], ...]
    result: Subloop
    iterations: int

    def serialize(self):
        return {
            "p_stages": [list(s) for s in self.p_stages],
            "d_stages": [list(s) for s in self.d_stages],
            "result": list(self.result.members),
            "iterations": self.iterations,
        }


def _require_cml(loop):
    if not loop.diagnostics().is_cml:
        raise NotCML(f"{loop.name} does not satisfy the commutative Moufang law")


def normalizer(loop, k, h):
    """Run the P/D fixpoint for H inside K; result is the stabilized D-set."""
    _require_cml(loop)
    k = full_subloop(loop) if k is None else coerce_subloop(loop, k)
    h = coerce_subloop(loop, h)
    if not h.elements <= k.elements:
        raise NotNested(f"H (order {h.size}) is not contained in K (order {k.size})")
    assoc = loop.associator_table()
    in_h = h.mask()
    hm = np.array(h.members, dtype=np.int64)
    km = np.array(k.members, dtype=np.int64)

    def p_stage(d_idx):
        # {x in K : (H, D, x) subset H}; first stage uses D = H
        block = assoc[np.ix_(hm, d_idx, km)]
        return km[in_h[block].all(axis=(0, 1))]

    def d_stage(p_idx):
        # {x in K : (H, x, P) subset H}
        block = assoc[np.ix_(hm, km, p_idx)]
        return km[in_h[block].all(axis=(0, 2))]

    p_stages: List[Tuple[int, ...]] = []
    d_stages: List[Tuple[int, ...]] = []
    d_idx = hm
    cap = k.size + 2
    for _ in range(cap):
        p_idx = p_stage(d_idx)
        d_idx = d_stage(p_idx)
        p_stages.append(tuple(int(i) for i in p_idx))
        d_stages.append(tuple(int(i) for i in d_idx))
        if len(p_stages) >= 2 and (
            p_stages[-1] == p_stages[-2] and d_stages[-1] == d_stages[-2]
        ):
            break
    else:
        raise ChainStalled(
            f"P/D alternation exceeded {cap} rounds for H of order {h.size}"
        )
    result = Subloop(loop, d_stages[-1])
    assert is_normal(loop, h, result), "H must be normal in the stabilized D-set"
    return NormalizerTrace(
        p_stages=tuple(p_stages),
        d_stages=tuple(d_stages),
        result=result,
        iterations=len(p_stages),
    )


def maximality_gaps(loop, k, h, trace=None):
    """Elements x in K outside the fixpoint result with H still normal in <H, x>.

    An empty list certifies the maximality contrapositive for this input;
    a nonempty list is a counterexample to reading the fixpoint as "the"
    normalizer.
    """
    k = full_subloop(loop) if k is None else coerce_subloop(loop, k)
    h = coerce_subloop(loop, h)
    if trace is None:
        trace = normalizer(loop, k, h)
    gaps = []
    for x in k.members:
        if x not in trace.result and is_normal(
            loop, h, generate_subloop(loop, list(h.members) + [x])
        ):
            gaps.append(int(x))
    return gaps


def normalizer_oracle(loop, k, h, seeds=(0, 1, 2, 3, 4)):
    """Greedy saturation from H, repeated over seeded addition orders.

    Every run must land on the same subloop; a disagreement (two runs
    saturating at different subloops) is raised rather than averaged,
    since it falsifies the uniqueness this oracle is meant to certify.
    """
    _require_cml(loop)
    k = full_subloop(loop) if k is None else coerce_subloop(loop, k)
    h = coerce_subloop(loop, h)
    if not h.elements <= k.elements:
        raise NotNested(f"H (order {h.size}) is not contained in K (order {k.size})")
    outcome = None
    for seed in seeds:
        rng = random.Random(seed)
        s = h
        changed = True
        while changed:
            changed = False
            candidates = [x for x in k.members if x not in s]
            rng.shuffle(candidates)
            for x in candidates:
                if x in s:
                    continue
                grown = join(s, generate_subloop(loop, [x]))
                if is_normal(loop, h, grown):
                    s = grown
                    changed = True
        if outcome is None:
            outcome = s
        elif s != outcome:
            raise OracleDisagreement(tuple(outcome.members), tuple(s.members))
    return outcome


def normalizer_condition(loop, lattice_guard=LATTICE_GUARD_DEFAULT):
    """Does every proper subloop grow under the fixpoint?  (witness = least failure)"""
    _require_cml(loop)
    for h in all_subloops(loop, lattice_guard=lattice_guard):
        if h.is_full:
            continue
        trace = normalizer(loop, None, h)
        if trace.result.elements == h.elements:
            return False, h
    return True, None


def normalizer_chain(loop, h, max_steps=None):
    """H, N(H), N(N(H)), ... until the whole loop; stalling is an error."""
    h = coerce_subloop(loop, h)
    chain = [h]
    cap = max_steps if max_steps is not None else loop.n + 1
    while not chain[-1].is_full:
        result = normalizer(loop, None, chain[-1]).result
        if result.elements == chain[-1].elements:
            raise ChainStalled(
                f"normalizer chain stalled at order {result.size} "
                f"(subloop {result.serialize()})"
            )
        chain.append(result)
        if len(chain) > cap:
            raise ChainStalled(f"normalizer chain exceeded {cap} terms")
    return chain


@dataclass(frozen=True)
class SubnormalSystem:
    terms: Tuple[Subloop, ...]

    def serialize(self):
        return [list(t.members) for t in self.terms]


def ascending_subnormal_system(loop, h):
    """1, H, N(H), N(N(H)), ..., L with each term normal in its successor."""
    h = coerce_subloop(loop, h)
    chain = normalizer_chain(loop, h)
    terms = [trivial_subloop(loop)]
    for term in chain:
        if term.elements != terms[-1].elements:
            terms.append(term)
    for a, b in zip(terms, terms[1:]):
        assert is_normal(loop, a, b), "subnormal step failed normality"
    return SubnormalSystem(terms=tuple(terms))
