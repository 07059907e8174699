import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baitscore.embed import (
    EmbeddingFormatError,
    EmbeddingTable,
    cosine,
    jaccard,
    load_embeddings,
    nbow,
    sentence_vector,
    wmd,
    wmd_lower_bound,
)
from baitscore.transport import solve_transport

from conftest import make_table
from oracles import transport_bruteforce


class TestLoad:
    def test_two_line_file(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("a 1 0\nb 0 1\n")
        table = load_embeddings(path, 2)
        assert len(table) == 2
        assert table.dimension == 2
        np.testing.assert_array_equal(table.get("a"), [1.0, 0.0])

    def test_wrong_arity_names_line(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("a 1 0 0\n")
        with pytest.raises(EmbeddingFormatError, match="line 1"):
            load_embeddings(path, 2)

    def test_duplicate_last_wins(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("a 1 0\na 0 2\n")
        table = load_embeddings(path, 2)
        assert table.duplicate_count == 1
        np.testing.assert_array_equal(table.get("a"), [0.0, 2.0])

    def test_unreadable_fatal(self, tmp_path):
        with pytest.raises(OSError):
            load_embeddings(tmp_path / "missing.txt", 2)

    def test_non_numeric_component(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("a 1 oops\n")
        with pytest.raises(EmbeddingFormatError, match="line 1"):
            load_embeddings(path, 2)


TABLE2 = EmbeddingTable(
    dimension=2,
    entries={
        "a": np.array([0.0, 2.0]),
        "b": np.array([4.0, 0.0]),
        "c": np.array([2.0, 2.0]),
    },
)


class TestSentenceVector:
    def test_single_token_is_its_vector(self):
        np.testing.assert_array_equal(sentence_vector(["a"], TABLE2), [0.0, 2.0])

    def test_per_dimension_median(self):
        np.testing.assert_array_equal(sentence_vector(["a", "b", "c"], TABLE2), [2.0, 2.0])

    def test_all_oov_is_zero(self):
        np.testing.assert_array_equal(sentence_vector(["zz", "qq"], TABLE2), [0.0, 0.0])

    def test_even_count_averages_middles(self):
        np.testing.assert_array_equal(sentence_vector(["a", "b"], TABLE2), [2.0, 1.0])

    @given(st.permutations(["a", "b", "c", "a"]))
    def test_order_free(self, tokens):
        np.testing.assert_array_equal(
            sentence_vector(tokens, TABLE2), sentence_vector(["a", "b", "c", "a"], TABLE2)
        )


class TestCosine:
    def test_self_similarity(self):
        v = np.array([1.0, 2.0, 3.0])
        assert cosine(v, v) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_hand_value(self):
        assert cosine([1.0, 2.0, 2.0], [2.0, 1.0, 2.0]) == pytest.approx(8.0 / 9.0)

    def test_zero_norm_convention(self):
        assert cosine([0.0, 0.0], [1.0, 1.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            cosine([1.0], [1.0, 2.0])

    @given(
        st.lists(st.floats(-10, 10), min_size=3, max_size=3),
        st.lists(st.floats(-10, 10), min_size=3, max_size=3),
    )
    def test_bounded(self, u, v):
        assert -1.0 - 1e-12 <= cosine(u, v) <= 1.0 + 1e-12


class TestJaccard:
    def test_identical(self):
        assert jaccard(["x", "y"], ["y", "x", "x"]) == 1.0

    def test_disjoint(self):
        assert jaccard(["x"], ["y"]) == 0.0

    def test_half(self):
        assert jaccard(["a", "b", "c"], ["b", "c", "d"]) == 0.5

    def test_both_empty(self):
        assert jaccard([], []) == 0.0


class TestNbow:
    def test_frequency_normalization(self):
        doc = nbow(["a", "a", "b"], TABLE2)
        assert doc.tokens == ("a", "b")
        np.testing.assert_allclose(doc.weights, [2 / 3, 1 / 3])

    def test_oov_only_is_empty(self):
        assert nbow(["xqzw"], TABLE2).is_empty

    def test_single_token(self):
        doc = nbow(["a"], TABLE2)
        np.testing.assert_array_equal(doc.weights, [1.0])

    def test_weights_sum_to_one(self):
        doc = nbow(["a", "b", "c", "a", "c", "c"], TABLE2)
        assert doc.weights.sum() == pytest.approx(1.0, abs=1e-9)

    def test_cap_keeps_most_frequent(self):
        doc = nbow(["a", "a", "b", "c"], TABLE2, max_tokens=2)
        assert set(doc.tokens) == {"a", "b"}  # b ties c on count, earlier occurrence wins
        assert doc.weights.sum() == pytest.approx(1.0)


def random_docs(rng, table, max_unique=4):
    words = list(table.entries)
    k_a = rng.integers(1, max_unique + 1)
    k_b = rng.integers(1, max_unique + 1)
    a_tokens = list(rng.choice(words, size=k_a, replace=False))
    b_tokens = list(rng.choice(words, size=k_b, replace=False))
    a_counts = [int(c) for c in rng.integers(1, 4, size=k_a)]
    b_counts = [int(c) for c in rng.integers(1, 4, size=k_b)]
    doc_a = nbow([t for t, c in zip(a_tokens, a_counts) for _ in range(c)], table)
    doc_b = nbow([t for t, c in zip(b_tokens, b_counts) for _ in range(c)], table)
    return doc_a, doc_b


class TestWmd:
    def test_identical_docs_zero(self):
        doc = nbow(["a", "b"], TABLE2)
        assert wmd(doc, doc, TABLE2) == pytest.approx(0.0, abs=1e-9)

    def test_single_token_pair_is_euclidean(self):
        da = nbow(["a"], TABLE2)
        db = nbow(["b"], TABLE2)
        expected = float(np.linalg.norm(TABLE2.get("a") - TABLE2.get("b")))
        assert wmd(da, db, TABLE2) == pytest.approx(expected, abs=1e-12)

    def test_empty_doc_returns_sentinel(self):
        da = nbow(["a"], TABLE2)
        empty = nbow(["zz"], TABLE2)
        assert math.isnan(wmd(da, empty, TABLE2))
        assert wmd(da, empty, TABLE2, empty_value=5.0) == 5.0

    def test_matches_bruteforce_oracle(self):
        table = make_table([f"w{i}" for i in range(12)], dim=5, seed=11)
        rng = np.random.default_rng(0)
        for _ in range(30):
            da, db = random_docs(rng, table)
            got = wmd(da, db, table)
            X = np.stack([table.get(t) for t in da.tokens])
            Y = np.stack([table.get(t) for t in db.tokens])
            C = np.sqrt(((X[:, None, :] - Y[None, :, :]) ** 2).sum(-1))
            want = transport_bruteforce(C, da.weights, db.weights)
            assert got == pytest.approx(want, abs=1e-9)

    def test_symmetry_and_identity(self):
        table = make_table([f"w{i}" for i in range(20)], dim=8, seed=2)
        rng = np.random.default_rng(1)
        for _ in range(100):
            da, db = random_docs(rng, table, max_unique=6)
            assert abs(wmd(da, db, table) - wmd(db, da, table)) < 1e-9
            assert wmd(da, da, table) < 1e-9

    def test_prefilter_matches_plain_solve(self):
        table = make_table([f"w{i}" for i in range(16)], dim=6, seed=5)
        rng = np.random.default_rng(3)
        for _ in range(40):
            da, db = random_docs(rng, table, max_unique=5)
            assert wmd(da, db, table, prefilter=True) == pytest.approx(
                wmd(da, db, table, prefilter=False), abs=1e-9
            )

    def test_plan_feasibility(self):
        table = make_table([f"w{i}" for i in range(10)], dim=4, seed=9)
        rng = np.random.default_rng(4)
        for _ in range(25):
            da, db = random_docs(rng, table)
            X = np.stack([table.get(t) for t in da.tokens])
            Y = np.stack([table.get(t) for t in db.tokens])
            C = np.sqrt(((X[:, None, :] - Y[None, :, :]) ** 2).sum(-1))
            _, plan = solve_transport(C, da.weights, db.weights)
            np.testing.assert_allclose(plan.sum(axis=1), da.weights, atol=1e-9)
            np.testing.assert_allclose(plan.sum(axis=0), db.weights, atol=1e-9)
            assert np.all(plan >= 0)


class TestLowerBound:
    def test_identical_docs_zero(self):
        doc = nbow(["a", "c"], TABLE2)
        assert wmd_lower_bound(doc, doc, TABLE2) == pytest.approx(0.0, abs=1e-12)

    def test_tight_for_single_tokens(self):
        da = nbow(["a"], TABLE2)
        db = nbow(["b"], TABLE2)
        assert wmd_lower_bound(da, db, TABLE2) == pytest.approx(wmd(da, db, TABLE2), abs=1e-12)

    def test_never_exceeds_exact(self):
        table = make_table([f"w{i}" for i in range(18)], dim=7, seed=13)
        rng = np.random.default_rng(8)
        for _ in range(60):
            da, db = random_docs(rng, table, max_unique=5)
            assert wmd_lower_bound(da, db, table) <= wmd(da, db, table) + 1e-9

    def test_empty_doc_sentinel(self):
        da = nbow(["a"], TABLE2)
        empty = nbow(["zz"], TABLE2)
        assert math.isnan(wmd_lower_bound(da, empty, TABLE2))


@settings(deadline=None, max_examples=25)
@given(st.integers(0, 2**31 - 1))
def test_wmd_nonnegative_random(seed):
    table = make_table([f"w{i}" for i in range(8)], dim=3, seed=17)
    rng = np.random.default_rng(seed)
    da, db = random_docs(rng, table)
    assert wmd(da, db, table) >= 0.0
