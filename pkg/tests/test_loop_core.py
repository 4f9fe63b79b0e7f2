import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import NONCML6, S3_TABLE
from mloop.errors import (
    BadDimension,
    CrossLoop,
    NoIdentity,
    NotLatinSquare,
    NotNormal,
    OrderOverflow,
    ParseError,
)
from mloop.loop_core import (
    CayleyLoop,
    associator,
    diagnose,
    direct_product,
    gen_abelian,
    gen_zassenhaus81,
    parse_loop,
    quotient,
)
from mloop.structure import center, generate_subloop


def test_zassenhaus_diagnostics(z81):
    d = z81.diagnostics()
    assert d.is_latin and d.has_identity and d.is_commutative
    assert d.is_cml
    assert not d.is_associative
    # first associativity failure in lexicographic scan order
    assert d.first_violation == (3, 9, 27)


def test_abelian_diagnostics():
    d = gen_abelian((3, 3)).diagnostics()
    assert d.is_cml and d.is_associative
    assert d.first_violation is None


def test_noncml_diagnostics(noncml6):
    d = noncml6.diagnostics()
    assert d.is_latin and d.has_identity and d.is_commutative
    assert not d.is_cml and not d.is_associative
    assert d.first_violation == (2, 0, 4)


def test_s3_diagnostics(s3_loop):
    d = s3_loop.diagnostics()
    assert d.is_associative
    assert not d.is_commutative
    assert not d.is_cml
    assert d.first_violation == (1, 2, 0)


def test_diagnose_accepts_raw_tables():
    """Tables the validating constructor rejects can still be inspected."""
    shifted = (np.arange(3)[:, None] + np.arange(3)[None, :] + 1) % 3
    with pytest.raises(NoIdentity):
        CayleyLoop(shifted)
    d = diagnose(shifted)
    assert d.is_latin
    assert not d.has_identity


def test_constructor_rejections():
    with pytest.raises(BadDimension):
        CayleyLoop(np.zeros((2, 3), dtype=np.int64))
    with pytest.raises(ParseError):
        CayleyLoop(np.zeros((2, 2)))  # float dtype
    with pytest.raises(ParseError):
        CayleyLoop(np.array([[0, 1], [1, 7]]))
    with pytest.raises(NotLatinSquare, match="row=1 repeats value 1"):
        CayleyLoop(np.array([[0, 1, 2], [1, 1, 0], [2, 0, 1]]))
    with pytest.raises(NoIdentity):
        CayleyLoop(np.array([[1, 0, 2], [0, 2, 1], [2, 1, 0]]))


def test_mul_inv_ldiv(z81):
    rng = random.Random(7)
    for _ in range(50):
        i, j = rng.randrange(81), rng.randrange(81)
        assert z81.mul(i, z81.ldiv(i, j)) == j
        assert z81.mul(i, z81.inv(i)) == 0
        assert z81.power(i, 3) == 0
        assert z81.element_order(i) in (1, 3)
    assert z81.exponent() == 3


def test_power_negative_and_wraparound():
    z5 = gen_abelian((5,))
    assert z5.power(2, -1) == z5.inv(2) == 3
    assert z5.power(2, 7) == (2 * 7) % 5
    assert z5.exponent() == 5


def test_element_objects(z81):
    e1, e2, e3 = z81.element(27), z81.element(9), z81.element(3)
    assert (e1 * e2).index == z81.mul(27, 9)
    assert e1 * e2 == e2 * e1
    assert (e1 ** 3).index == 0
    assert e1.order() == 3
    # (e1, e2, e3) has associator e4 = element 1
    assert associator(e1, e2, e3).index == 1
    other = gen_abelian((3,))
    with pytest.raises(CrossLoop):
        e1 * other.element(1)
    with pytest.raises(TypeError):
        e1 * 4


def test_assoc_matches_definition_and_tensor(z81):
    tensor = z81.associator_table()
    rng = random.Random(3)
    for _ in range(40):
        a, b, c = (rng.randrange(81) for _ in range(3))
        k = z81.assoc(a, b, c)
        assert z81.mul(z81.mul(a, z81.mul(b, c)), k) == z81.mul(z81.mul(a, b), c)
        assert int(tensor[a, b, c]) == k


def test_inner_mapping_tensor(z81):
    inner = z81.inner_mapping_table()
    rng = random.Random(5)
    for _ in range(40):
        x, y, z = (rng.randrange(81) for _ in range(3))
        assert int(inner[x, y, z]) == z81.ldiv(z81.mul(x, y), z81.mul(x, z81.mul(y, z)))


def test_serialize_roundtrip(z81):
    again = parse_loop(z81.serialize())
    assert again.name == "zassenhaus81"
    assert np.array_equal(again.table, z81.table)


def test_parse_header_beats_fallback_name():
    text = "# name: cyclic3\n3\n0 1 2\n1 2 0\n2 0 1\n"
    assert parse_loop(text, name="file.txt").name == "cyclic3"
    assert parse_loop(text.splitlines()[1] + "\n0 1 2\n1 2 0\n2 0 1\n", name="file.txt").name == "file.txt"


@pytest.mark.parametrize(
    "text,exc,fragment",
    [
        ("", ParseError, "empty input"),
        ("# only a comment\n", ParseError, "empty input"),
        ("two\n0 1\n1 0\n", ParseError, "order is not an integer"),
        ("0\n", BadDimension, "not positive"),
        ("3\n0 1 2\n1 2 0\n", BadDimension, "found 2 table rows"),
        ("2\n0 1\n1 0 0\n", BadDimension, "expected 2 entries"),
        ("2\n0 1\n1 x\n", ParseError, "non-integer token"),
        ("3\n0 1 2\n1 1 0\n2 0 1\n", NotLatinSquare, "repeats value"),
    ],
)
def test_parse_errors(text, exc, fragment):
    with pytest.raises(exc, match=fragment):
        parse_loop(text)


def test_gen_abelian_two_encodings_of_z6():
    flat = gen_abelian((6,))
    split = gen_abelian((2, 3))
    for loop in (flat, split):
        d = loop.diagnostics()
        assert d.is_cml and d.is_associative
        assert loop.exponent() == 6
    assert not np.array_equal(flat.table, split.table)


def test_gen_abelian_guard():
    with pytest.raises(OrderOverflow):
        gen_abelian((40, 40), max_order=1024)


def test_direct_product(z81):
    prod = direct_product(z81, gen_abelian((3,)))
    assert prod.n == 243
    assert prod.name == "zassenhaus81xabelian:3"
    assert prod.diagnostics().is_cml
    with pytest.raises(OrderOverflow):
        direct_product(z81, z81, max_order=1024)


def test_quotient_by_center(z81):
    q, proj = quotient(z81, center(z81))
    assert q.n == 27
    assert q.diagnostics().is_associative
    assert q.exponent() == 3
    assert proj[0] == 0
    for x in range(0, 81, 7):
        for c in center(z81).members:
            assert proj[z81.mul(x, c)] == proj[x]


def test_quotient_requires_normal(z81):
    with pytest.raises(NotNormal):
        quotient(z81, generate_subloop(z81, [27]))


def test_tensor_guard():
    big = gen_abelian((17, 19))
    with pytest.raises(OrderOverflow):
        big.associator_table()
    with pytest.raises(OrderOverflow):
        big.inner_mapping_table()


@given(st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=3))
@settings(max_examples=25, deadline=None)
def test_gen_abelian_always_group(moduli):
    loop = gen_abelian(moduli)
    d = loop.diagnostics()
    assert d.is_cml and d.is_associative
    assert loop.exponent() == math.lcm(*moduli)
