import pytest

from qcdense.finite import FiniteAbelianGroup
from qcdense.qc import is_qc_dense, iter_subsets
from qcdense.search import SearchTooLarge, search_min_dense


def Z(n):
    return FiniteAbelianGroup((n,))


def test_examples():
    assert search_min_dense(Z(2)).subsets == [((1,),)]
    r = search_min_dense(Z(3))
    assert r.size == 1 and r.subsets == [((1,),), ((2,),)]
    assert r.representatives == [((1,),)]
    r = search_min_dense(Z(4))
    assert r.size == 2 and ((1,), (2,)) in r.subsets


def test_matches_brute_force():
    for orders in [(5,), (6,), (8,), (9,), (2, 2), (2, 4), (3, 3)]:
        G = FiniteAbelianGroup(orders)
        r = search_min_dense(G)
        brute = [S for S in iter_subsets(G.elements()) if G.zero not in S and is_qc_dense(G, S)]
        k = min(len(S) for S in brute)
        assert r.size == k
        assert r.subsets == sorted(S for S in brute if len(S) == k)


def test_deterministic():
    assert search_min_dense(Z(9)).subsets == search_min_dense(Z(9)).subsets


def test_cap_and_heuristic():
    G = FiniteAbelianGroup((5, 5))
    with pytest.raises(SearchTooLarge):
        search_min_dense(G)
    r = search_min_dense(G, heuristic=True)
    assert r.heuristic and is_qc_dense(G, r.subsets[0])
