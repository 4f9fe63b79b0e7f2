"""Named verification checks, suite registry, and report assembly.

Each check computes its claim from scratch against the loop in the
context (no frozen constants); the context only caches shared expensive
artifacts (multiplication-group bundle, subloop lattice, fixpoint
results) so a full-suite run stays within desk-scale budgets.  Reports
are deterministic for a fixed loop and seed: checks run in registration
order and all witnesses are built from sorted data.
"""

import random
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import mult_group as mg
from . import perm_group as pg
from . import structure as st
from .errors import OrderOverflow
from .normalizer import NormalizerTrace
from .normalizer import normalizer as _run_fixpoint
from .reporting import CheckResult

ARTIFACT_VERSION = "0.1.0"
PROP3_SAMPLE_COUNT = 200
NON_GENERATOR_TRIALS = 60
GROUP_CHAIN_SAMPLES = 20


class LoopContext:
    """Shared lazily-computed artifacts for one loop."""

    def __init__(self, loop, seed=0, lattice_guard=st.LATTICE_GUARD_DEFAULT):
        self.loop = loop
        self.seed = int(seed)
        self.lattice_guard = lattice_guard
        self._bundle = None
        self._lattice = None
        self._series = None
        self._center = None
        self._derived = None
        self._maximals = None
        self._frattini = None
        self._traces: Dict[Tuple[int, ...], NormalizerTrace] = {}

    @property
    def bundle(self):
        if self._bundle is None:
            self._bundle = mg.multiplication_group(self.loop)
        return self._bundle

    @property
    def lattice(self):
        if self._lattice is None:
            self._lattice = st.all_subloops(self.loop, lattice_guard=self.lattice_guard)
        return self._lattice

    @property
    def series(self):
        if self._series is None:
            self._series = st.upper_central_series(self.loop)
        return self._series

    @property
    def center(self):
        if self._center is None:
            self._center = st.center(self.loop)
        return self._center

    @property
    def derived(self):
        if self._derived is None:
            self._derived = st.associator_subloop(self.loop)
        return self._derived

    @property
    def maximals(self):
        if self._maximals is None:
            self._maximals = st.maximal_subloops(self.loop)
        return self._maximals

    @property
    def frattini(self):
        if self._frattini is None:
            self._frattini = st.frattini_subloop(self.loop)
        return self._frattini

    def fixpoint_result(self, subloop):
        key = subloop.members
        if key not in self._traces:
            self._traces[key] = _run_fixpoint(self.loop, None, subloop)
        return self._traces[key]


# -- identity checks ---------------------------------------------------------


def _first_index(bad):
    """Lexicographically least True index of a boolean array."""
    flat = int(np.argmax(bad))
    return tuple(int(i) for i in np.unravel_index(flat, bad.shape))


def _check_inner_mapping_identity(ctx):
    loop = ctx.loop
    t = loop.table
    assoc = loop.associator_table()
    inner = loop.inner_mapping_table()
    n = loop.n
    z_first = np.transpose(assoc, (2, 1, 0))  # (x, y, z) -> assoc[z, y, x]
    rhs = t[np.arange(n)[None, None, :], z_first]
    bad = inner != rhs
    ok = not bad.any()
    witness = None if ok else {"xyz": list(_first_index(bad))}
    return CheckResult("inner_mapping_identity", "pass" if ok else "fail", witness)


def _check_associator_symmetries(ctx):
    loop = ctx.loop
    assoc = loop.associator_table()
    inv = loop.inverse_array()
    n = loop.n
    idx = np.arange(n)
    cyc = np.transpose(assoc, (1, 2, 0))  # (x,y,z) -> assoc[y,z,x]
    swapped = np.transpose(assoc, (1, 0, 2))  # (x,y,z) -> assoc[y,x,z]
    # (x,y,z) -> assoc[inv(y), x, z]
    inv_first = assoc[inv[None, :, None], idx[:, None, None], idx[None, None, :]]
    laws = [
        ("cyclic", assoc != cyc),
        ("swap_inverts", assoc != inv[swapped]),
        ("inverse_argument", assoc != inv_first),
    ]
    failures = {}
    for label, bad in laws:
        if bad.any():
            failures[label] = list(_first_index(bad))
    ok = not failures
    return CheckResult("associator_symmetries", "pass" if ok else "fail", failures or None)


def _check_product_expansion(ctx):
    loop = ctx.loop
    t = np.asarray(loop.table, dtype=np.int64)
    assoc = np.asarray(loop.associator_table(), dtype=np.int64)
    n = loop.n
    y_col = np.arange(n)[:, None, None]
    violations = 0
    first = None
    for x in range(n):
        a = assoc[x]  # (u, v)
        b = assoc[a[None, :, :], x, y_col]  # (y, u, v)
        c = assoc  # (y, u, v)
        d = assoc[c, y_col, x]
        lhs = assoc[t[x]]  # (y, u, v) = assoc[x*y, u, v]
        rhs = t[t[a[None, :, :], b], t[c, d]]
        bad = lhs != rhs
        if bad.any():
            violations += int(bad.sum())
            if first is None:
                first = (x,) + _first_index(bad)
    ok = violations == 0
    witness = None if ok else {"violations": violations, "first_xyuv": list(first)}
    return CheckResult("product_associator_expansion", "pass" if ok else "fail", witness)


# -- structural bridge checks ------------------------------------------------


def _check_lemma1(ctx):
    return mg.verify_lemma1(ctx.bundle, ctx.derived)


def _check_lemma2(ctx):
    loop = ctx.loop
    central = ctx.center.mask()
    first = None
    for x in range(loop.n):
        if not central[loop.power(x, 3)]:
            first = x
            break
    cubes = st.cube_subloop(loop)
    contained = all(c in ctx.center for c in cubes.members)
    ok = first is None and contained
    witness = None if ok else {"element": first, "cube_order": cubes.size}
    return CheckResult("lemma2_cubes_central", "pass" if ok else "fail", witness)


def _check_lemma4(ctx):
    loop_ok = ctx.derived.elements <= ctx.frattini.elements
    m = ctx.bundle.M
    m_derived = pg.derived_subgroup(m)
    m_frattini = pg.frattini_subgroup(m)
    group_ok = set(m_derived.element_keys()) <= set(m_frattini.element_keys())
    ok = loop_ok and group_ok
    witness = {
        "derived_order": ctx.derived.size,
        "frattini_order": ctx.frattini.size,
        "m_derived_order": m_derived.order(),
        "m_frattini_order": m_frattini.order(),
    }
    if not ok:
        witness["loop_ok"] = loop_ok
        witness["group_ok"] = group_ok
    return CheckResult(
        "lemma4_frattini_containments", "pass" if ok else "fail", witness
    )


def _check_lemma6(ctx):
    loop_side = ctx.frattini.is_full
    m = ctx.bundle.M
    group_side = pg.frattini_subgroup(m).order() == m.order()
    ok = loop_side == group_side
    witness = {"loop_frattini_is_whole": loop_side, "group_frattini_is_whole": group_side}
    return CheckResult(
        "lemma6_frattini_biconditional", "pass" if ok else "fail", witness
    )


def _check_lemma7(ctx):
    return mg.verify_lemma7(ctx.bundle)


def _check_prop1(ctx):
    return mg.verify_prop1(ctx.bundle)


def _check_prop3(ctx):
    loop = ctx.loop
    lattice = ctx.lattice
    pairs = [
        (h.members, k.members)
        for h in lattice
        if not h.is_full
        for k in lattice
        if h.elements <= k.elements
    ]
    rng = random.Random(ctx.seed)
    if len(pairs) > PROP3_SAMPLE_COUNT:
        pairs = rng.sample(pairs, PROP3_SAMPLE_COUNT)
    pairs.sort()
    by_members = {s.members: s for s in lattice}
    checked = 0
    failures = 0
    first = None
    for h_key, k_key in pairs:
        h, k = by_members[h_key], by_members[k_key]
        if not st.is_normal(loop, h, k):
            continue
        checked += 1
        result = ctx.fixpoint_result(h).result
        if not k.elements <= result.elements:
            failures += 1
            if first is None:
                first = {
                    "h": list(h.members),
                    "k_prime": list(k.members),
                    "fixpoint_result": list(result.members),
                }
    ok = failures == 0
    witness = {"pairs_checked": checked, "failures": failures}
    if first is not None:
        witness["first_failure"] = first
    return CheckResult(
        "prop3_normalizer_containments", "pass" if ok else "fail", witness
    )


def _check_prop4(ctx):
    loop = ctx.loop
    cls = ctx.series.nilpotency_class
    loop_max = 0
    for h in ctx.lattice:
        steps = 0
        current = h
        while not current.is_full:
            current = ctx.fixpoint_result(current).result
            steps += 1
        loop_max = max(loop_max, steps)
    m = ctx.bundle.M
    group_bound = max(0, 2 * cls - 1)
    group_max = 0
    sampled = 0
    seen = set()
    for p in m.enumerate_elements():
        if p.is_identity():
            continue
        h = pg.group_from_generators([p])
        key = frozenset(h.element_keys())
        if key in seen:
            continue
        seen.add(key)
        sampled += 1
        steps = 0
        current = h
        while current.order() < m.order():
            current = pg.normalizer_of_subgroup(m, current)
            steps += 1
            if steps > group_bound + 2:
                break
        group_max = max(group_max, steps)
        if sampled >= GROUP_CHAIN_SAMPLES:
            break
    ok = loop_max <= cls and group_max <= group_bound
    witness = {
        "nilpotency_class": cls,
        "loop_chain_max_steps": loop_max,
        "group_chain_max_steps": group_max,
        "group_chains_sampled": sampled,
    }
    return CheckResult("prop4_chain_bounds", "pass" if ok else "fail", witness)


def _check_theorem2(ctx):
    loop = ctx.loop
    sizes = []
    ok = True
    first = None
    for h in ctx.lattice:
        if h.is_full:
            continue
        result = ctx.fixpoint_result(h).result
        sizes.append({"h": h.serialize(), "normalizer_order": result.size})
        if result.elements == h.elements:
            ok = False
            if first is None:
                first = h.serialize()
    witness = {"proper_subloops": len(sizes), "normalizer_sizes": sizes}
    if first is not None:
        witness["self_normalizing"] = first
    return CheckResult(
        "theorem2_normalizer_condition", "pass" if ok else "fail", witness
    )


def _check_frattini(ctx):
    loop = ctx.loop
    proper = [s for s in ctx.lattice if not s.is_full]
    lattice_maximals = [
        s for s in proper if not any(s.elements < t.elements for t in proper)
    ]
    maximals_ok = {s.elements for s in ctx.maximals} == {
        s.elements for s in lattice_maximals
    }
    if lattice_maximals:
        common = frozenset.intersection(*(s.elements for s in lattice_maximals))
    else:
        common = set(range(loop.n))
    frattini_ok = ctx.frattini.elements == common

    non_gen_ok = True
    first_bad = None
    for x in range(loop.n):
        witness_set = st.non_generator_witness(
            loop,
            x,
            trials=NON_GENERATOR_TRIALS,
            seed=ctx.seed,
            maximals=ctx.maximals,
        )
        if (witness_set is None) != (x in ctx.frattini):
            non_gen_ok = False
            first_bad = x
            break

    group_note = "skipped"
    group_ok = True
    m = ctx.bundle.M
    if m.order() <= pg.FRATTINI_ORACLE_GUARD:
        formula = pg.frattini_subgroup(m)
        oracle = pg.frattini_subgroup_oracle(m)
        group_ok = set(formula.element_keys()) == set(oracle.element_keys())
        group_note = formula.order()

    ok = maximals_ok and frattini_ok and non_gen_ok and group_ok
    witness = {
        "frattini_order": ctx.frattini.size,
        "maximal_count": len(ctx.maximals),
        "group_frattini_order": group_note,
    }
    if not ok:
        witness["maximals_ok"] = maximals_ok
        witness["frattini_ok"] = frattini_ok
        witness["non_generator_ok"] = non_gen_ok
        witness["group_ok"] = group_ok
        if first_bad is not None:
            witness["element"] = first_bad
    return CheckResult("frattini_agreement", "pass" if ok else "fail", witness)


def _check_divisible(ctx):
    loop = ctx.loop
    loop_div = st.is_divisible(loop)
    m = ctx.bundle.M
    group_div = pg.is_divisible_group(m)
    loop_ok = loop_div == (loop.n == 1)
    group_ok = group_div == (m.order() == 1)
    ok = loop_ok and group_ok
    witness = {
        "loop_divisible": loop_div,
        "group_divisible": group_div,
        "divisible_part_order": 1,
        "complement_order": m.order(),
    }
    if not ok:
        witness["loop_ok"] = loop_ok
        witness["group_ok"] = group_ok
    return CheckResult("divisible_degeneracy", "pass" if ok else "fail", witness)


# -- registry ----------------------------------------------------------------

CHECK_REGISTRY = (
    ("inner_mapping_identity", "identities", _check_inner_mapping_identity),
    ("associator_symmetries", "identities", _check_associator_symmetries),
    ("product_associator_expansion", "identities", _check_product_expansion),
    ("lemma1_quotient_action", "lemma1", _check_lemma1),
    ("lemma2_cubes_central", "lemma2", _check_lemma2),
    ("lemma4_frattini_containments", "lemma4", _check_lemma4),
    ("lemma6_frattini_biconditional", "lemma6", _check_lemma6),
    ("lemma7_derived_four_way", "lemma7", _check_lemma7),
    ("prop1_center_correspondence", "prop1", _check_prop1),
    ("prop3_normalizer_containments", "prop3", _check_prop3),
    ("prop4_chain_bounds", "prop4", _check_prop4),
    ("theorem2_normalizer_condition", "theorem2", _check_theorem2),
    ("frattini_agreement", "frattini", _check_frattini),
    ("divisible_degeneracy", "divisible", _check_divisible),
)

SUITE_NAMES = (
    "identities",
    "lemma1",
    "lemma2",
    "lemma4",
    "lemma6",
    "lemma7",
    "prop1",
    "prop3",
    "prop4",
    "theorem2",
    "frattini",
    "divisible",
    "all",
)

_LATTICE_SUITES = {"prop3", "prop4", "theorem2", "frattini"}


@dataclass
class VerdictReport:
    artifact_version: str
    loop_name: str
    loop_order: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def all_passed(self):
        return all(c.status == "pass" for c in self.checks)

    def as_dict(self):
        return {
            "artifact_version": self.artifact_version,
            "loop": {"name": self.loop_name, "order": self.loop_order},
            "checks": [c.as_dict() for c in self.checks],
        }


def run_suite(loop, suite, seed=0, lattice_guard=st.LATTICE_GUARD_DEFAULT):
    """Run the named suite (or "all") and assemble the report."""
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITE_NAMES)}")
    selected = [
        entry for entry in CHECK_REGISTRY if suite in ("all", entry[1])
    ]
    needs_lattice = any(entry[1] in _LATTICE_SUITES for entry in selected)
    if needs_lattice and loop.n > lattice_guard:
        raise OrderOverflow("lattice", lattice_guard, loop.n)
    ctx = LoopContext(loop, seed=seed, lattice_guard=lattice_guard)
    report = VerdictReport(
        artifact_version=ARTIFACT_VERSION,
        loop_name=loop.name,
        loop_order=loop.n,
    )
    for name, _, fn in selected:
        start = time.perf_counter()
        result = fn(ctx)
        result.millis = int((time.perf_counter() - start) * 1000)
        assert result.name == name, f"check {name} returned result named {result.name}"
        report.checks.append(result)
    return report
