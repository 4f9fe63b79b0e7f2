import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mloop.errors import (
    NotASubloop,
    NotCML,
    NotNested,
    OrderOverflow,
    ParseError,
)
from mloop.loop_core import direct_product, gen_abelian, gen_zassenhaus81
from mloop.structure import (
    Subloop,
    all_subloops,
    associator_subloop,
    center,
    coerce_subloop,
    cube_subloop,
    cyclic_subloops,
    frattini_subloop,
    full_subloop,
    generate_subloop,
    is_divisible,
    is_normal,
    join,
    maximal_subloops,
    non_generator_witness,
    normality_witness,
    trivial_subloop,
    upper_central_series,
)


def test_subloop_validation(z81):
    with pytest.raises(NotASubloop, match="empty"):
        Subloop(z81, [])
    with pytest.raises(NotASubloop, match="missing identity"):
        Subloop(z81, [3, 6])
    with pytest.raises(NotASubloop, match=r"not closed: 3 \* 3 = 6 escapes"):
        Subloop(z81, [0, 3])
    with pytest.raises(ParseError):
        Subloop(z81, [0, 99])
    h = Subloop(z81, [0, 3, 6])
    assert h.size == 3 and 3 in h and 4 not in h
    assert h <= full_subloop(z81)
    assert trivial_subloop(z81).is_trivial


def test_coerce_subloop(z81, e27):
    h = Subloop(z81, [0, 1, 2])
    assert coerce_subloop(z81, h) is h
    assert coerce_subloop(z81, [0, 1, 2]) == h
    with pytest.raises(NotNested):
        coerce_subloop(e27, h)


def test_generate_and_join(z81):
    assert generate_subloop(z81, [27]).members == (0, 27, 54)
    nine = generate_subloop(z81, [3, 9])
    assert nine.members == (0, 3, 6, 9, 12, 15, 18, 21, 24)
    assert join(generate_subloop(z81, [3]), generate_subloop(z81, [9])) == nine
    # e1, e2, e3 together force the associator e4, hence the whole loop
    assert join(generate_subloop(z81, [27]), nine).is_full


def test_cyclic_subloops(z81):
    z9 = gen_abelian((9,))
    assert sorted(s.size for s in cyclic_subloops(z9)) == [1, 3, 9]
    # every non-identity element of z81 has order 3
    assert len(cyclic_subloops(z81)) == 41


@pytest.mark.parametrize(
    "moduli,count",
    [
        ((4,), 3),
        ((9,), 3),
        ((2, 2), 5),
        ((2, 3), 4),
        ((3, 3), 6),
        ((3, 3, 3), 28),
    ],
)
def test_abelian_subloop_counts(moduli, count):
    lattice = all_subloops(gen_abelian(moduli))
    assert len(lattice) == count


def test_zassenhaus_lattice(z81_lattice):
    histogram = {}
    for s in z81_lattice:
        histogram[s.size] = histogram.get(s.size, 0) + 1
    assert histogram == {1: 1, 3: 40, 9: 130, 27: 13, 81: 1}
    assert len(z81_lattice) == 185
    sizes = [s.size for s in z81_lattice]
    assert sizes == sorted(sizes)
    assert z81_lattice[0].is_trivial and z81_lattice[-1].is_full


def test_lattice_guard(z81):
    big = direct_product(z81, gen_abelian((3,)))
    with pytest.raises(OrderOverflow, match="243 exceeds limit 128"):
        all_subloops(big)
    assert len(all_subloops(gen_abelian((3,)), lattice_guard=3)) == 2


def test_center_derived_cubes(z81, e27):
    assert center(z81).members == (0, 1, 2)
    assert associator_subloop(z81).members == (0, 1, 2)
    assert cube_subloop(z81).is_trivial
    assert center(e27).is_full
    assert associator_subloop(e27).is_trivial
    assert cube_subloop(e27).is_trivial


def test_cube_subloop_requires_cml(noncml6):
    with pytest.raises(NotCML):
        cube_subloop(noncml6)


def test_upper_central_series(z81, e27):
    series = upper_central_series(z81)
    assert [t.size for t in series.terms] == [1, 3, 81]
    assert series.nilpotency_class == 2
    assert series.reaches_top
    assert upper_central_series(e27).nilpotency_class == 1


def test_maximal_subloops(z81):
    maxima = maximal_subloops(z81)
    assert len(maxima) == 13
    assert all(m.size == 27 for m in maxima)
    assert [m.members for m in maximal_subloops(gen_abelian((6,)))] == [
        (0, 2, 4),
        (0, 3),
    ]
    assert [m.members for m in maximal_subloops(gen_abelian((2, 3)))] == [
        (0, 1, 2),
        (0, 3),
    ]
    assert len(maximal_subloops(gen_abelian((3, 3, 3)))) == 13


def test_maximals_match_lattice(z81, z81_lattice):
    proper = [s for s in z81_lattice if not s.is_full]
    from_lattice = {
        s.members
        for s in proper
        if not any(s.elements < t.elements for t in proper)
    }
    assert from_lattice == {m.members for m in maximal_subloops(z81)}


def test_frattini(z81):
    assert frattini_subloop(z81).members == (0, 1, 2)
    assert frattini_subloop(gen_abelian((4,))).members == (0, 2)
    assert frattini_subloop(gen_abelian((6,))).is_trivial
    assert frattini_subloop(gen_abelian((3, 3, 3))).is_trivial
    assert frattini_subloop(gen_abelian((1,))).is_full


def test_is_normal(z81, e27):
    assert is_normal(z81, center(z81))
    h = generate_subloop(z81, [27])
    assert not is_normal(z81, h)
    assert normality_witness(z81, h) == (27, 3, 9)
    # relative normality: inside the abelian plane <e1, e2> everything is normal
    k = generate_subloop(z81, [27, 9])
    assert k.size == 9
    assert is_normal(z81, h, k)
    # abelian parents have no non-normal subloops at all
    for s in all_subloops(e27):
        assert is_normal(e27, s)


def test_normality_dual_route_flag(z81):
    h = generate_subloop(z81, [3, 9])
    assert is_normal(z81, h, check_inner=False) == is_normal(z81, h)


def test_non_generator_witness(z81):
    maxima = maximal_subloops(z81)
    for x in (0, 1, 2):  # the Frattini subloop
        assert non_generator_witness(z81, x, trials=30, maximals=maxima) is None
    w = non_generator_witness(z81, 27, maximals=maxima)
    assert w is not None
    assert not generate_subloop(z81, w).is_full
    assert generate_subloop(z81, w + (27,)).is_full


def test_is_divisible():
    assert is_divisible(gen_abelian((1,)))
    assert not is_divisible(gen_abelian((3, 3)))
    assert not is_divisible(gen_zassenhaus81())


@given(st.sets(st.integers(min_value=0, max_value=80), max_size=3))
@settings(max_examples=30, deadline=None)
def test_generate_subloop_idempotent(seeds):
    loop = gen_zassenhaus81()
    s = generate_subloop(loop, seeds)
    assert set(seeds) <= s.elements
    assert generate_subloop(loop, s.members) == s
    assert s.size in (1, 3, 9, 27, 81)
