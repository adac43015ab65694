import pytest
from hypothesis import given, settings, strategies as st

from hermitian.config import (
    ConfigParams, DesignTooLarge, IncidenceStructure, InconsistentLevel, build_incidence,
    configuration_params, incidence_to_json, is_symmetric, verify_design,
)
from hermitian.lines import enumerate_lines


def incidence(S, level):
    return build_incidence(S.ctx, S.enumerate_points(level), enumerate_lines(S, level), level)


@pytest.mark.parametrize("p,quad,base", [
    (2, ConfigParams(45, 3, 27, 5), ConfigParams(15, 3, 15, 3)),
    (3, ConfigParams(280, 4, 112, 10), ConfigParams(40, 4, 40, 4)),
])
def test_configurations(surfaces, p, quad, base):
    S = surfaces(p)
    I2, I1 = incidence(S, "quadratic"), incidence(S, "base")
    assert configuration_params(I2) == quad
    assert configuration_params(I1) == base
    assert not is_symmetric(I2)
    assert is_symmetric(I1)
    assert verify_design(I2, 1, S.q + 1)
    assert verify_design(I1, 1, S.q + 1)
    assert not verify_design(I2, 1, S.q)


def test_config_str():
    assert str(ConfigParams(45, 3, 27, 5)) == "(45_3, 27_5)"


def test_base_level_rejects_non_base_objects(S2):
    with pytest.raises(InconsistentLevel):
        build_incidence(S2.ctx, S2.enumerate_points(), enumerate_lines(S2, "base"), "base")


def test_not_a_configuration():
    I = IncidenceStructure((0, 1, 2), ("a", "b"), frozenset({(0, 0), (1, 0), (2, 1)}))
    params = configuration_params(I)
    assert not params
    assert params.point_degrees == {1: 3}
    assert params.block_degrees == {2: 1, 1: 1}
    with pytest.raises(ValueError):
        is_symmetric(I)
    assert not verify_design(I, 1, 1)


def test_fano_plane_is_2_design():
    blocks = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    inc = frozenset((i, j) for j, B in enumerate(blocks) for i in B)
    I = IncidenceStructure(tuple(range(7)), tuple(blocks), inc)
    assert configuration_params(I) == ConfigParams(7, 3, 7, 3)
    assert verify_design(I, 2, 1)
    assert not verify_design(I, 3, 1)
    with pytest.raises(DesignTooLarge):
        verify_design(I, 3, 1, max_subsets=10)
    with pytest.raises(ValueError):
        verify_design(I, 0, 1)


def test_incidence_structure_validation():
    with pytest.raises(ValueError):
        IncidenceStructure((), ("a",), frozenset())
    with pytest.raises(ValueError):
        IncidenceStructure((0,), ("a",), frozenset({(1, 0)}))


def test_incidence_json(S2):
    doc = incidence_to_json(incidence(S2, "base"))
    assert len(doc["points"]) == 15 and len(doc["blocks"]) == 15
    assert len(doc["incidence"]) == 45


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(1, 4), st.data())
def test_regular_bipartite_params(v, k, data):
    # each point i on blocks i, i+1, ..., i+k-1 (mod v): a symmetric configuration
    k = min(k, v)
    inc = frozenset((i, (i + s) % v) for i in range(v) for s in range(k))
    I = IncidenceStructure(tuple(range(v)), tuple(range(v)), inc)
    assert configuration_params(I) == ConfigParams(v, k, v, k)
    assert is_symmetric(I)
    assert verify_design(I, 1, k)
