import itertools
import json

import pytest

from rainbowsub.groups import (CyclicGroup, F2Group, GroupError, NonAbelianGroup, ProductGroup, TableGroup,
                               dihedral_group, parse_elements, parse_group, symmetric_group)


def _axioms(G):
    els = list(G.elements())
    for a, b, c in itertools.product(els, repeat=3):
        assert G.op(G.op(a, b), c) == G.op(a, G.op(b, c))
    for a in els:
        assert G.op(a, G.identity) == a == G.op(G.identity, a)
        assert G.op(a, G.inv(a)) == G.identity


@pytest.mark.parametrize("G", [CyclicGroup(6), F2Group(3), ProductGroup([2, 3]), symmetric_group(3),
                               dihedral_group(4)])
def test_group_axioms_by_enumeration(G):
    _axioms(G)


def test_abelian_flags():
    assert CyclicGroup(5).abelian and F2Group(2).abelian and ProductGroup([3, 4]).abelian
    assert not symmetric_group(3).abelian
    assert not dihedral_group(3).abelian
    assert dihedral_group(2).abelian
    with pytest.raises(NonAbelianGroup):
        symmetric_group(3).require_abelian()


def test_table_validation():
    with pytest.raises(GroupError):
        TableGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        TableGroup([[1, 0], [0, 0]])
    with pytest.raises(GroupError):
        TableGroup([[0] * 513] * 513)
    # Latin square without associativity (order 5 loop)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        TableGroup(loop)


def test_parse_group_specs(tmp_path):
    assert parse_group("Z:15").order == 15
    assert parse_group("F2:4").order == 16
    G = parse_group("prod:Z3xZ4")
    assert G.order == 12 and G.parse_element("1.3") == 7
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"table": symmetric_group(3).table.tolist()}))
    assert parse_group(str(path)).order == 6
    assert parse_group(f"table:{path}").order == 6
    with pytest.raises(GroupError):
        parse_group("Q:8")


def test_parse_elements(tmp_path):
    G = F2Group(4)
    assert parse_elements(G, "e1,e2,e3,e4") == [1, 2, 4, 8]
    assert parse_elements(CyclicGroup(10), "1..3,7") == [1, 2, 3, 7]
    assert parse_elements(CyclicGroup(4), "all") == [0, 1, 2, 3]
    f = tmp_path / "set.txt"
    f.write_text("0\n1\n3\n")
    assert parse_elements(CyclicGroup(8), f"@{f}") == [0, 1, 3]
    with pytest.raises(GroupError):
        parse_elements(F2Group(2), "e3")
