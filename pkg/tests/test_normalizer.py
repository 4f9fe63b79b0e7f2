import pytest

from mloop.errors import ChainStalled, NotCML, NotNested, OracleDisagreement
from mloop.normalizer import (
    ascending_subnormal_system,
    maximality_gaps,
    normalizer,
    normalizer_chain,
    normalizer_condition,
    normalizer_oracle,
)
from mloop.structure import (
    center,
    full_subloop,
    generate_subloop,
    is_normal,
    trivial_subloop,
)


def test_trace_golden_noncentral_order3(z81):
    h = generate_subloop(z81, [27])
    trace = normalizer(z81, None, h)
    assert trace.iterations == 2
    assert [len(p) for p in trace.p_stages] == [81, 81]
    assert [len(d) for d in trace.d_stages] == [9, 9]
    assert trace.result.members == (0, 1, 2, 27, 28, 29, 54, 55, 56)
    assert is_normal(z81, h, trace.result)
    payload = trace.serialize()
    assert set(payload) == {"p_stages", "d_stages", "result", "iterations"}


def test_stage_monotonicity(z81, z81_lattice):
    for h in z81_lattice[::7]:
        trace = normalizer(z81, None, h)
        assert h.elements <= set(trace.d_stages[0])
        p_sets = [set(p) for p in trace.p_stages]
        d_sets = [set(d) for d in trace.d_stages]
        for a, b in zip(p_sets, p_sets[1:]):
            assert b <= a
        for a, b in zip(d_sets, d_sets[1:]):
            assert a <= b
        for p, d in zip(p_sets, d_sets):
            assert d <= p
        assert trace.result.members == trace.d_stages[-1]


def test_trivial_and_central_inputs(z81):
    assert normalizer(z81, None, trivial_subloop(z81)).result.is_full
    assert normalizer(z81, None, generate_subloop(z81, [1])).result.is_full
    assert normalizer(z81, None, center(z81)).result.is_full


def test_relative_to_proper_k(z81):
    k = generate_subloop(z81, [27, 9])
    assert k.size == 9
    trace = normalizer(z81, k, generate_subloop(z81, [27]))
    assert trace.result == k
    assert trace.p_stages[-1] == trace.d_stages[-1]


def test_order9_subloop_converges_cleanly(z81):
    h = generate_subloop(z81, [3, 9])
    assert not is_normal(z81, h)
    trace = normalizer(z81, None, h)
    assert trace.result == generate_subloop(z81, [1, 3, 9])
    assert trace.result.size == 27
    assert trace.p_stages[-1] == trace.d_stages[-1]
    assert normalizer_oracle(z81, None, h) == trace.result
    assert maximality_gaps(z81, None, h, trace=trace) == []


def test_oracle_on_normal_subloop(z81):
    assert normalizer_oracle(z81, None, center(z81)).is_full
    assert normalizer_oracle(z81, None, trivial_subloop(z81)).is_full


def test_chains_and_subnormal_system(z81):
    chain = normalizer_chain(z81, generate_subloop(z81, [3, 9]))
    assert [t.size for t in chain] == [9, 27, 81]
    system = ascending_subnormal_system(z81, generate_subloop(z81, [27]))
    assert [t.size for t in system.terms] == [1, 3, 9, 81]
    assert normalizer_chain(z81, full_subloop(z81)) == [full_subloop(z81)]


def test_chain_step_cap(z81):
    with pytest.raises(ChainStalled, match="exceeded 1"):
        normalizer_chain(z81, generate_subloop(z81, [3, 9]), max_steps=1)


def test_normalizer_condition(z81, e27):
    assert normalizer_condition(z81) == (True, None)
    assert normalizer_condition(e27) == (True, None)


def test_input_validation(z81, noncml6):
    with pytest.raises(NotNested):
        normalizer(z81, generate_subloop(z81, [27]), generate_subloop(z81, [3, 9]))
    with pytest.raises(NotCML):
        normalizer(noncml6, None, [0])


def test_fixpoint_uniqueness_claims_order3_noncentral(z81):
    """Three textbook claims about the fixpoint, checked on H = <27>.

    This test is expected to FAIL: for the 39 non-central order-3
    subloops of the order-81 loop the stabilized P- and D-sets differ,
    greedy saturation is order-dependent, and elements outside the
    result still normalize H.  The failure is the finding, not a bug in
    the fixpoint implementation; see the README's "known divergences".
    """
    h = generate_subloop(z81, [27])
    trace = normalizer(z81, None, h)
    failures = []
    if trace.p_stages[-1] != trace.d_stages[-1]:
        failures.append(
            f"final P has {len(trace.p_stages[-1])} elements, "
            f"final D has {len(trace.d_stages[-1])}"
        )
    try:
        oracle = normalizer_oracle(z81, None, h)
        if oracle != trace.result:
            failures.append(
                f"oracle saturated at order {oracle.size}, "
                f"fixpoint gave order {trace.result.size}"
            )
    except OracleDisagreement as exc:
        failures.append(
            f"oracle is order-dependent: {len(exc.first)} vs {len(exc.second)} elements"
        )
    gaps = maximality_gaps(z81, None, h, trace=trace)
    if gaps:
        failures.append(f"{len(gaps)} elements outside the result still normalize H")
    assert not failures, "; ".join(failures)
