"""Multiplication groups of commutative loops and the theorem bridges.

The bundle ties a loop to its multiplication group M = <L(x)> and inner
mapping group I = <L(xy)^-1 L(x) L(y)>; construction asserts the
orbit-stabilizer identity order(M) = |L| * order(I), which also certifies
that I is the full stabilizer of the identity point.
"""

from dataclasses import dataclass
from typing import Tuple

from .errors import NotCommutative, NotNormal, NotSubgroup
from .loop_core import CayleyLoop, quotient
from .perm_group import (
    PermGroup,
    Permutation,
    center_of_group,
    derived_subgroup,
    group_from_elements,
    normal_closure,
)
from .reporting import CheckResult
from .structure import (
    Subloop,
    associator_subloop,
    center,
    coerce_subloop,
    is_normal,
    normality_witness,
)


def translation(loop, x):
    """The permutation y -> x*y (row x of the table)."""
    return Permutation(loop.table[int(x)])


@dataclass
class MultGroupBundle:
    loop: CayleyLoop
    M: PermGroup
    I: PermGroup
    translations: Tuple[Permutation, ...]


def multiplication_group(loop):
    if not loop.diagnostics().is_commutative:
        raise NotCommutative(
            f"{loop.name} is not commutative; only L-translations are generated here"
        )
    n = loop.n
    trans = tuple(translation(loop, x) for x in range(n))
    M = PermGroup(n, trans)
    inner = []
    seen = set()
    for x in range(n):
        lx = trans[x]
        for y in range(n):
            g = trans[loop.mul(x, y)].inverse() * (lx * trans[y])
            if not g.is_identity() and g.images not in seen:
                seen.add(g.images)
                inner.append(g)
    I = PermGroup(n, inner)
    assert M.order() == n * I.order(), (
        "inner mapping group is not the full point-0 stabilizer: "
        f"{M.order()} != {n} * {I.order()}"
    )
    return MultGroupBundle(loop=loop, M=M, I=I, translations=trans)


def h_star(bundle, H):
    """{alpha in M : alpha(x) H = x H for all x}, for H normal in the loop."""
    loop = bundle.loop
    H = coerce_subloop(loop, H)
    if not is_normal(loop, H):
        raise NotNormal(normality_witness(loop, H))
    _, proj = quotient(loop, H)
    keep = [
        a
        for a in bundle.M.enumerate_elements()
        if all(proj[im] == proj[i] for i, im in enumerate(a.images))
    ]
    return group_from_elements(loop.n, keep)


def orbit_of_identity(bundle, N):
    """The orbit N(0) as a Subloop; N must sit inside M and act coset-wise."""
    loop = bundle.loop
    if not N.is_subgroup_of(bundle.M):
        raise NotSubgroup("N is not a subgroup of the multiplication group")
    orbit = sorted({a.images[0] for a in N.enumerate_elements()})
    result = Subloop(loop, orbit)
    if not is_normal(loop, result):
        raise NotNormal(normality_witness(loop, result))
    star = h_star(bundle, result)
    star_keys = star.element_keys()
    for g in N.generators:
        if g.images not in star_keys:
            raise NotSubgroup(
                "N does not stabilize the cosets of its identity orbit"
            )
    return result


# -- verification bridges ----------------------------------------------------


def verify_lemma1(bundle, H):
    """Coset action of M factors through M(L/H) with kernel exactly H*."""
    loop = bundle.loop
    H = coerce_subloop(loop, H)
    q, proj = quotient(loop, H)
    qbundle = multiplication_group(q)
    star = h_star(bundle, H)
    m_order = bundle.M.order()
    order_ok = qbundle.M.order() * star.order() == m_order

    induced_keys = set()
    kernel_keys = set()
    blocks_ok = True
    for a in bundle.M.enumerate_elements():
        images = [-1] * q.n
        for i, im in enumerate(a.images):
            c, v = proj[i], proj[im]
            if images[c] == -1:
                images[c] = v
            elif images[c] != v:
                blocks_ok = False
                break
        if not blocks_ok:
            break
        key = tuple(images)
        induced_keys.add(key)
        if key == tuple(range(q.n)):
            kernel_keys.add(a.images)

    onto_ok = blocks_ok and induced_keys == {
        p.images for p in qbundle.M.enumerate_elements()
    }
    kernel_ok = blocks_ok and kernel_keys == set(star.element_keys())
    ok = order_ok and blocks_ok and onto_ok and kernel_ok
    witness = {
        "m_order": m_order,
        "h_star_order": star.order(),
        "quotient_m_order": qbundle.M.order(),
    }
    if not ok:
        witness["order_ok"] = order_ok
        witness["blocks_ok"] = blocks_ok
        witness["onto_ok"] = onto_ok
        witness["kernel_ok"] = kernel_ok
    return CheckResult(
        name="lemma1_quotient_action",
        status="pass" if ok else "fail",
        witness=witness,
    )


def verify_prop1(bundle):
    """Z(M) coincides with the translations by central loop elements."""
    loop = bundle.loop
    zl = center(loop)
    zm = center_of_group(bundle.M)
    image_keys = {bundle.translations[a].images for a in zl.members}
    set_ok = image_keys == set(zm.element_keys())
    hom_ok = all(
        (bundle.translations[a] * bundle.translations[b]).images
        == bundle.translations[loop.mul(a, b)].images
        for a in zl.members
        for b in zl.members
    )
    inj_ok = len({bundle.translations[a].images[0] for a in zl.members}) == zl.size
    ok = set_ok and hom_ok and inj_ok
    witness = {"loop_center_order": zl.size, "group_center_order": zm.order()}
    if not ok:
        witness["set_ok"] = set_ok
        witness["hom_ok"] = hom_ok
        witness["inj_ok"] = inj_ok
    return CheckResult(
        name="prop1_center_correspondence",
        status="pass" if ok else "fail",
        witness=witness,
    )


def verify_lemma7(bundle):
    """Four descriptions of M' must coincide setwise."""
    loop = bundle.loop
    derived = derived_subgroup(bundle.M)
    lprime = associator_subloop(loop)
    joined = PermGroup(
        loop.n,
        list(bundle.I.generators) + [bundle.translations[u] for u in lprime.members],
    )
    star = h_star(bundle, lprime)
    closure = normal_closure(bundle.M, bundle.I.generators)
    keys = [
        set(g.element_keys()) for g in (derived, joined, star, closure)
    ]
    ok = keys[0] == keys[1] == keys[2] == keys[3]
    witness = {
        "derived_order": derived.order(),
        "join_order": joined.order(),
        "h_star_order": star.order(),
        "normal_closure_order": closure.order(),
    }
    return CheckResult(
        name="lemma7_derived_four_way",
        status="pass" if ok else "fail",
        witness=witness,
    )
