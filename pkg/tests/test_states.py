"""State construction: IrOA build, catalog families, composition, I/O."""

import cmath
import math

import numpy as np
import pytest

from luinv import (
    ArgumentError,
    CapacityError,
    CatalogError,
    DuplicateRowError,
    OrthogonalArray,
    ParseError,
    SparseState,
    catalog_state,
    compose,
    from_iroa,
    parse_oa,
    random_local_unitary_apply,
    state_from_dict,
    state_to_dict,
)


def test_sparse_state_drops_exact_zeros():
    s = SparseState(2, 2, {(0, 0): 1.0, (1, 1): 0.0})
    assert s.support() == [(0, 0)]
    assert s.support_size == 1


def test_sparse_state_rejects_norm_off_unit():
    with pytest.raises(ArgumentError):
        SparseState(2, 2, {(0, 0): 0.5})


def test_sparse_state_normalize_flag():
    s = SparseState(2, 2, {(0, 0): 3.0, (1, 1): 4.0}, normalize=True)
    assert abs(s.norm() - 1.0) < 1e-15
    assert abs(s.amplitudes[(0, 0)] - 0.6) < 1e-15


def test_sparse_state_rejects_bad_keys():
    with pytest.raises(ArgumentError):
        SparseState(2, 2, {(0, 0, 0): 1.0})
    with pytest.raises(ArgumentError):
        SparseState(2, 2, {(0, 2): 1.0})
    with pytest.raises(ArgumentError):
        SparseState(2, 2, {})


def test_sparse_state_immutable():
    s = SparseState(2, 2, {(0, 0): 1.0})
    with pytest.raises(AttributeError):
        s.local_dim = 5


def test_dense_round_trip():
    s = SparseState(2, 2, {(0, 1): 0.6, (1, 0): 0.8j})
    t = s.dense()
    assert t.shape == (2, 2)
    assert t[0, 1] == 0.6
    assert t[1, 0] == 0.8j
    assert t[0, 0] == 0


def test_dense_cap():
    s = SparseState(3, 4, {(0, 0, 0): 1.0})
    with pytest.raises(CapacityError):
        s.dense(cap=63)


class TestFromIroa:
    def test_example_oa_uniform(self, example_oa):
        s = from_iroa(example_oa)
        assert s.support_size == 9
        assert all(abs(a - 1 / 3) < 1e-15 for a in s.amplitudes.values())

    def test_phase_marks_single_row(self, example_oa):
        s = from_iroa(example_oa, {(0, 0, 0): math.pi})
        assert abs(s.amplitudes[(0, 0, 0)] + 1 / 3) < 1e-15
        assert abs(s.amplitudes[(1, 2, 0)] - 1 / 3) < 1e-15

    def test_ghz(self, ghz_oa):
        s = from_iroa(ghz_oa)
        assert s.local_dim == 2
        assert abs(s.amplitudes[(0, 0, 0)] - 1 / math.sqrt(2)) < 1e-15

    def test_duplicate_rows_rejected(self):
        oa = OrthogonalArray(rows=((0, 0), (0, 0)), num_parties=2, local_dim=1)
        with pytest.raises(DuplicateRowError):
            from_iroa(oa)

    def test_unknown_phase_key(self, example_oa):
        with pytest.raises(KeyError):
            from_iroa(example_oa, {(0, 0, 1): 0.5})


class TestCatalog:
    def test_psi3d_matches_example_oa(self, example_oa):
        s = catalog_state("psi3d", d=3)
        t = from_iroa(example_oa)
        assert s.amplitudes.keys() == t.amplitudes.keys()
        assert all(
            abs(s.amplitudes[k] - t.amplitudes[k]) < 1e-15 for k in s.amplitudes
        )

    def test_psi3d_theta_on_origin_only(self):
        s = catalog_state("psi3d", d=3, theta=1.0)
        assert abs(s.amplitudes[(0, 0, 0)] - cmath.exp(1j) / 3) < 1e-15
        assert abs(s.amplitudes[(1, 0, 1)] - 1 / 3) < 1e-15

    def test_psi3d_needs_dim(self):
        with pytest.raises(ArgumentError):
            catalog_state("psi3d")
        with pytest.raises(ArgumentError):
            catalog_state("psi3d", d=1)

    def test_ghz_support(self):
        s = catalog_state("ghz")
        assert s.support() == [(0, 0, 0), (1, 1, 1)]
        assert s.local_dim == 2

    def test_ghz_forces_qubits(self):
        with pytest.raises(ArgumentError):
            catalog_state("ghz", d=3)

    def test_ame43_rows(self):
        s = catalog_state("ame43")
        assert s.num_parties == 4
        assert s.support_size == 9
        assert (1, 2, 0, 1) in s.amplitudes
        assert all(abs(a - 1 / 3) < 1e-15 for a in s.amplitudes.values())

    def test_ame52_code_word_zero(self):
        """theta = 0 leaves the first code word: 8 kets, four minus signs."""
        s = catalog_state("ame52")
        assert s.support_size == 8
        scale = 1 / math.sqrt(8)
        assert abs(s.amplitudes[(0, 0, 0, 0, 0)] - scale) < 1e-15
        assert abs(s.amplitudes[(0, 1, 0, 1, 0)] + scale) < 1e-15
        signs = sorted(
            round(a.real * math.sqrt(8)) for a in s.amplitudes.values()
        )
        assert signs == [-1, -1, -1, -1, 1, 1, 1, 1]

    def test_ame52_code_word_one(self):
        """Near theta = pi/2 the second code word dominates: two minus signs.

        cos(pi/2) rounds to 6e-17 rather than zero, so the first code word
        is suppressed but not dropped; only exact zeros leave the support.
        """
        s = catalog_state("ame52", theta=math.pi / 2)
        big = {k: a for k, a in s.amplitudes.items() if abs(a) > 1e-12}
        assert len(big) == 8
        assert (1, 1, 0, 0, 0) in big
        scale = 1 / math.sqrt(8)
        assert abs(big[(0, 1, 0, 0, 1)] + scale) < 1e-15
        assert abs(big[(1, 1, 1, 1, 1)] + scale) < 1e-15
        signs = sorted(round(a.real * math.sqrt(8)) for a in big.values())
        assert signs == [-1, -1, 1, 1, 1, 1, 1, 1]

    def test_ame52_superposition_norm(self):
        s = catalog_state("ame52", theta=0.3)
        assert s.support_size == 16
        assert abs(s.norm() - 1.0) < 1e-12

    def test_psi5d_qubit_case(self):
        """At d=2 the amplitudes reduce to (-1)^(jl) / 2^(3/2)."""
        s = catalog_state("psi5d", d=2)
        assert s.support_size == 8
        scale = 2**-1.5
        for (j, k, a, b, l), amp in s.amplitudes.items():
            assert a == (j + k) % 2
            assert b == (l + k) % 2
            assert abs(amp - ((-1) ** (j * l)) * scale) < 1e-15

    def test_psi5d_support_size(self):
        s = catalog_state("psi5d", d=3)
        assert s.num_parties == 5
        assert s.support_size == 27

    def test_unknown_name(self):
        with pytest.raises(CatalogError):
            catalog_state("bell")


class TestCompose:
    def test_ghz_pair(self):
        g = catalog_state("ghz")
        c = compose(g, g)
        assert c.local_dim == 4
        assert c.support() == [(0, 0, 0), (1, 1, 1), (2, 2, 2), (3, 3, 3)]
        assert abs(c.amplitudes[(1, 1, 1)] - 0.5) < 1e-15

    def test_norm_unit(self):
        a = catalog_state("psi3d", d=2, theta=0.7)
        b = catalog_state("ghz")
        assert abs(compose(a, b).norm() - 1.0) < 1e-12

    def test_flattening_is_row_major(self):
        a = SparseState(2, 2, {(1, 0): 1.0})
        b = SparseState(2, 3, {(2, 1): 1.0})
        c = compose(a, b)
        assert c.support() == [(1 * 3 + 2, 0 * 3 + 1)]

    def test_associative_under_flattening(self):
        a = catalog_state("ghz", theta=0.2)
        b = catalog_state("psi3d", d=2)
        c = catalog_state("psi3d", d=3, theta=1.1)
        left = compose(compose(a, b), c)
        right = compose(a, compose(b, c))
        assert left.local_dim == right.local_dim == 12
        assert left.amplitudes.keys() == right.amplitudes.keys()
        assert all(
            abs(left.amplitudes[k] - right.amplitudes[k]) < 1e-14
            for k in left.amplitudes
        )

    def test_party_count_mismatch(self):
        a = catalog_state("ghz")
        b = catalog_state("ame43")
        with pytest.raises(ArgumentError):
            compose(a, b)


class TestRandomLocalUnitary:
    def test_norm_preserved(self):
        s = catalog_state("psi3d", d=3, theta=0.4)
        t = random_local_unitary_apply(s, seed=11)
        assert abs(np.linalg.norm(t.ravel()) - 1.0) < 1e-12

    def test_seed_determinism(self):
        s = catalog_state("ghz")
        t1 = random_local_unitary_apply(s, seed=5)
        t2 = random_local_unitary_apply(s, seed=5)
        t3 = random_local_unitary_apply(s, seed=6)
        assert np.array_equal(t1, t2)
        assert not np.allclose(t1, t3)


class TestDictForm:
    def test_round_trip(self):
        s = catalog_state("ame52", theta=0.3)
        data = state_to_dict(s)
        t = state_from_dict(data)
        assert t.amplitudes == s.amplitudes
        assert t.num_parties == 5 and t.local_dim == 2

    def test_terms_sorted(self):
        s = catalog_state("ghz")
        data = state_to_dict(s)
        assert [term["idx"] for term in data["terms"]] == [[0, 0, 0], [1, 1, 1]]

    def test_duplicate_idx_rejected(self):
        data = {
            "num_parties": 1,
            "local_dim": 2,
            "terms": [
                {"idx": [0], "re": 1.0, "im": 0.0},
                {"idx": [0], "re": 0.0, "im": 0.0},
            ],
        }
        with pytest.raises(ParseError):
            state_from_dict(data)

    def test_unnormalized_rejected_by_default(self):
        data = {"num_parties": 1, "local_dim": 2, "terms": [{"idx": [0], "re": 2.0}]}
        with pytest.raises(ParseError):
            state_from_dict(data)
        s = state_from_dict(data, allow_unnormalized=True)
        assert abs(s.amplitudes[(0,)] - 1.0) < 1e-15

    def test_missing_fields(self):
        with pytest.raises(ParseError):
            state_from_dict({"num_parties": 2, "terms": []})
        with pytest.raises(ParseError):
            state_from_dict({"num_parties": 2, "local_dim": 2, "terms": []})


def test_from_iroa_spec_fixture_matches_catalog(example_oa):
    """parse -> build -> compare against the catalog AME(3,3) with a phase."""
    s = from_iroa(example_oa, {(0, 0, 0): 2.0})
    t = catalog_state("psi3d", d=3, theta=2.0)
    assert s.amplitudes.keys() == t.amplitudes.keys()
    assert all(abs(s.amplitudes[k] - t.amplitudes[k]) < 1e-15 for k in s.amplitudes)


def test_parse_oa_then_ghz4():
    oa = parse_oa("0 0 0 0\n1 1 1 1")
    s = from_iroa(oa)
    assert s.num_parties == 4
    assert s.local_dim == 2
