import json
from itertools import product

import numpy as np
import pytest

from qtilt import catalog as ct
from qtilt import quiverrep as qr
from qtilt.errors import CatalogError, NotRepFiniteError


def brute_force_indecomposables_a2():
    """Oracle: enumerate every representation of A2 with dims <= (1,1) over F_2
    and keep one per isomorphism class of the indecomposable ones."""
    q = qr.preset_quiver("A2")
    found = []
    for d1, d2 in product(range(2), repeat=2):
        for entries in product(range(2), repeat=d1 * d2):
            m = np.array(entries, dtype=np.int64).reshape(d2, d1)
            x = qr.rep(q, 2, (d1, d2), [m])
            if x.is_zero():
                continue
            if len(qr.split_indecomposables(x)) != 1:
                continue
            if not any(qr.is_isomorphic(x, y) for y in found):
                found.append(x)
    return found


def test_a2_catalog_matches_brute_force(catalogs):
    cat = catalogs("A2")
    oracle = brute_force_indecomposables_a2()
    assert len(oracle) == 3
    assert sorted(x.dims for x in oracle) == [(0, 1), (1, 0), (1, 1)]
    assert len(cat) == 3
    for x in oracle:
        assert any(qr.is_isomorphic(x, m) for m in cat.indecs)


def test_catalog_counts(catalogs):
    assert len(catalogs("A1")) == 1
    assert len(catalogs("A3")) == 6  # n(n+1)/2 positive roots for A_n
    assert len(catalogs("A4")) == 10
    assert len(catalogs("D4")) == 12


def test_positive_roots():
    assert ct.positive_roots(qr.preset_quiver("A2")) == [(0, 1), (1, 0), (1, 1)]
    assert ct.positive_roots(qr.preset_quiver("A1")) == [(1,)]
    assert len(ct.positive_roots(qr.preset_quiver("A3"))) == 6
    assert len(ct.positive_roots(qr.preset_quiver("D4"))) == 12
    assert len(ct.positive_roots(qr.preset_quiver("E6"))) == 36


def test_dynkin_recognition():
    assert ct.is_dynkin(qr.preset_quiver("D5"))
    kronecker = qr.Quiver(2, ((0, 1), (0, 1)), name="K2")
    assert not ct.is_dynkin(kronecker)
    with pytest.raises(CatalogError):
        ct.positive_roots(kronecker)


def test_non_rep_finite_aborts():
    kronecker = qr.Quiver(2, ((0, 1), (0, 1)), name="K2")
    with pytest.raises(NotRepFiniteError):
        ct.build_catalog(kronecker, 2, max_catalog=12, max_indec_dim=8)


def test_directed_order_and_diagonal(catalogs):
    for name in ("A2", "A3", "D4"):
        cat = catalogs(name)
        n = len(cat)
        for a in range(n):
            assert cat.hom_table[a][a] == 1  # End of each indecomposable is k
            for b in range(a):
                # directed: no nonzero Hom from a later to an earlier entry
                assert cat.hom_table[a][b] == 0


def test_dim_vectors_are_the_positive_roots(catalogs):
    for name in ("A2", "A3", "A4", "D4"):
        cat = catalogs(name)
        roots = set(ct.positive_roots(cat.quiver))
        assert {m.dims for m in cat.indecs} == roots


def test_tables_match_fresh_recomputation(catalogs):
    cat = catalogs("A3")
    for a in range(len(cat)):
        for b in range(len(cat)):
            he = qr.hom_ext(cat.indecs[a], cat.indecs[b])
            assert cat.hom_table[a][b] == he.hom_dim
            assert cat.ext_table[a][b] == he.ext_dim


def test_projective_injective_simple_tagging(catalogs):
    cat = catalogs("A2")
    # A2 = 1 -> 2: P1 = (1,1), P2 = S2; I1 = S1, I2 = P1
    assert cat.projective(0).dims == (1, 1)
    assert cat.projective(1).dims == (0, 1)
    assert cat.injective(0).dims == (1, 0)
    assert cat.injective(1).dims == (1, 1)
    assert cat.simple(0).dims == (1, 0)
    a1 = ct.build_catalog(qr.preset_quiver("A1"), 2)
    assert a1.projective(0).dims == a1.injective(0).dims == a1.simple(0).dims == (1,)


def test_nakayama_correspondence(catalogs):
    cat = catalogs("A2")
    for v in range(2):
        assert cat.nakayama(cat.proj_index[v]) == cat.inj_index[v]
    non_projective = next(i for i in range(len(cat)) if i not in cat.proj_index)
    with pytest.raises(CatalogError):
        cat.nakayama(non_projective)


def test_module_level_serre_pairing(catalogs, contexts):
    """dim Hom(X, Y) = dim Hom(Y, S X) with S computed by the derived layer."""
    from qtilt import heart as H

    for name in ("A2", "A3"):
        cat = catalogs(name)
        _, hctx = contexts(name)
        for a in range(len(cat)):
            sa = H.serre_split(cat, hctx, a)
            for b in range(len(cat)):
                rhs = sum(
                    mult * H.dim_hom_shifted(cat, b, 0, idx, sh)
                    for idx, sh, mult in sa
                )
                assert cat.hom_table[a][b] == rhs


def test_cache_roundtrip(tmp_path, catalogs):
    q = qr.preset_quiver("A3")
    first = ct.load_or_build_catalog(q, 2, cache_dir=tmp_path)
    files = list(tmp_path.glob("catalog-*.json"))
    assert len(files) == 1
    second = ct.load_or_build_catalog(q, 2, cache_dir=tmp_path)
    assert len(second) == len(first)
    assert second.hom_table == first.hom_table
    assert second.ext_table == first.ext_table
    assert second.proj_index == first.proj_index
    for a, b in zip(first.indecs, second.indecs):
        assert a.dims == b.dims
        assert all(np.array_equal(x, y) for x, y in zip(a.maps, b.maps))


def test_cache_rebuilds_on_corruption(tmp_path):
    q = qr.preset_quiver("A2")
    ct.load_or_build_catalog(q, 2, cache_dir=tmp_path)
    f = next(tmp_path.glob("catalog-*.json"))
    f.write_text("{not json")
    rebuilt = ct.load_or_build_catalog(q, 2, cache_dir=tmp_path)
    assert len(rebuilt) == 3
    assert json.loads(f.read_text())["p"] == 2


def test_larger_dynkin_catalogs_certify():
    # D5 and E6 exercise the root-count certificate away from type A
    d5 = ct.build_catalog(qr.preset_quiver("D5"), 2)
    assert len(d5) == 20
    e6 = ct.build_catalog(qr.preset_quiver("E6"), 2)
    assert len(e6) == 36
