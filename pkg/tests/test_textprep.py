"""Unit tests for normalization, n-gram extraction, and count matrices."""

import numpy as np
import pytest

from stringcat.errors import ConfigError, VocabularyError
from stringcat import textprep as tp

ANIMALS = ["chicken", "eagle", "giraffe", "horse", "leopard", "lion", "tiger", "turtle"]


def sliding_window_counts(s, n_min, n_max):
    """Independent oracle: enumerate every window of every width."""
    out = {}
    for n in range(n_min, n_max + 1):
        for i in range(len(s) - n + 1):
            g = s[i : i + n]
            out[g] = out.get(g, 0) + 1
    return out


class TestNormalize:
    def test_lowercases(self):
        assert tp.normalize("Senior Architect") == "senior architect"

    def test_empty_identity(self):
        assert tp.normalize("") == ""

    def test_already_lowercase(self):
        assert tp.normalize("tiger") == "tiger"

    def test_no_other_mutation(self):
        assert tp.normalize("  A-B_c  ") == "  a-b_c  "


class TestCharNgrams:
    def test_bigrams_of_tiger(self):
        assert tp.char_ngrams("tiger", 2, 2) == {"ti": 1, "ig": 1, "ge": 1, "er": 1}

    def test_empty_string(self):
        assert tp.char_ngrams("", 2, 4) == {}

    def test_multiplicities(self):
        assert tp.char_ngrams("aaa", 2, 3) == sliding_window_counts("aaa", 2, 3)
        assert tp.char_ngrams("aaa", 2, 3) == {"aa": 2, "aaa": 1}

    def test_matches_window_oracle_on_random_strings(self):
        rng = np.random.default_rng(3)
        letters = list("abcdef चिड़िया")
        for _ in range(50):
            s = "".join(rng.choice(letters, size=rng.integers(4, 15)))
            assert tp.char_ngrams(s, 2, 4) == sliding_window_counts(s, 2, 4)

    def test_short_string_degenerate_token(self):
        assert tp.char_ngrams("a", 2, 4) == {"a": 1}

    def test_unicode_scalar_values_not_bytes(self):
        # two astral code points -> one 2-gram, never byte fragments
        s = "\U0001F98E\U0001F985"
        assert tp.char_ngrams(s, 2, 2) == {s: 1}

    def test_total_count_formula(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            length = int(rng.integers(0, 12))
            s = "".join(rng.choice(list("xyz"), size=length))
            counts = tp.char_ngrams(s, 2, 4)
            if 0 < len(s) < 2:
                assert sum(counts.values()) == 1
            else:
                expected = sum(max(0, len(s) - n + 1) for n in range(2, 5))
                assert sum(counts.values()) == expected

    @pytest.mark.parametrize("n_min,n_max", [(0, 2), (3, 2), (-1, 1)])
    def test_invalid_range(self, n_min, n_max):
        with pytest.raises(ConfigError):
            tp.char_ngrams("tiger", n_min, n_max)


class TestVocabulary:
    def test_single_gram(self):
        vocab = tp.build_vocabulary(["ab"], 2, 2)
        assert len(vocab) == 1 and vocab.column("ab") == 0

    def test_union_of_disjoint_singletons(self):
        assert len(tp.build_vocabulary(["ab", "bc"], 2, 2)) == 2

    def test_animal_vocabulary_size_matches_bruteforce(self):
        grams = set()
        for s in ANIMALS:
            for n in range(2, 5):
                for i in range(len(s) - n + 1):
                    grams.add(s[i : i + n])
        vocab = tp.build_vocabulary(ANIMALS, 2, 4)
        assert len(vocab) == len(grams)
        assert set(vocab.grams) == grams

    def test_membership_order_insensitive(self):
        a = tp.build_vocabulary(ANIMALS, 2, 4)
        b = tp.build_vocabulary(ANIMALS[::-1], 2, 4)
        assert set(a.grams) == set(b.grams)

    def test_normalizes_entries(self):
        a = tp.build_vocabulary(["AB"], 2, 2)
        assert "ab" in a

    def test_empty_corpus_errors(self):
        with pytest.raises(VocabularyError):
            tp.build_vocabulary([], 2, 4)

    def test_all_empty_strings_error(self):
        with pytest.raises(VocabularyError):
            tp.build_vocabulary(["", ""], 2, 4)

    def test_save_load_roundtrip(self, tmp_path):
        vocab = tp.build_vocabulary(ANIMALS, 2, 4)
        vocab.save(tmp_path / "vocab.txt")
        again = tp.Vocabulary.load(tmp_path / "vocab.txt", 2, 4)
        assert again == vocab

    def test_save_rejects_newline_grams(self, tmp_path):
        vocab = tp.Vocabulary(["a\nb"], 1, 4)
        with pytest.raises(VocabularyError):
            vocab.save(tmp_path / "vocab.txt")


class TestCountMatrix:
    def test_single_count(self):
        vocab = tp.Vocabulary(["aa"], 2, 2)
        mat = tp.count_matrix(["aa"], vocab)
        assert mat.toarray().tolist() == [[1.0]]

    def test_sliding_window_count(self):
        vocab = tp.Vocabulary(["aa"], 2, 2)
        assert tp.count_matrix(["aaa"], vocab).toarray().tolist() == [[2.0]]

    def test_out_of_vocabulary_row_stored_empty(self):
        vocab = tp.Vocabulary(["aa"], 2, 2)
        mat = tp.count_matrix(["zz"], vocab)
        assert mat.nnz == 0 and mat.shape == (1, 1)

    def test_rows_match_per_string_counts(self):
        vocab = tp.build_vocabulary(ANIMALS, 2, 4)
        mat = tp.count_matrix(ANIMALS, vocab)
        for i, s in enumerate(ANIMALS):
            row = mat[i].toarray().ravel()
            counts = tp.char_ngrams(s, 2, 4)
            for g, c in counts.items():
                assert row[vocab.column(g)] == c
            assert row.sum() == sum(counts.values())

    def test_persistence_roundtrip(self, tmp_path):
        vocab = tp.build_vocabulary(ANIMALS, 2, 4)
        mat = tp.count_matrix(ANIMALS, vocab)
        tp.save_count_matrix(mat, tmp_path / "counts.txt")
        again = tp.load_count_matrix(tmp_path / "counts.txt")
        assert (mat != again).nnz == 0

    def test_malformed_header_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 4\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            tp.load_count_matrix(path)


class TestHashedCountMatrix:
    def test_single_bucket_collects_everything(self):
        mat = tp.hashed_count_matrix(["tiger"], 1, 2, 2)
        assert mat.toarray().tolist() == [[4.0]]

    def test_deterministic(self):
        a = tp.hashed_count_matrix(ANIMALS, 16, 2, 4)
        b = tp.hashed_count_matrix(ANIMALS, 16, 2, 4)
        assert (a != b).nnz == 0

    def test_mass_conservation_vs_exact(self):
        vocab = tp.build_vocabulary(ANIMALS, 2, 4)
        exact = tp.count_matrix(ANIMALS, vocab)
        hashed = tp.hashed_count_matrix(ANIMALS, 8, 2, 4)
        np.testing.assert_array_equal(
            np.asarray(exact.sum(axis=1)).ravel(), np.asarray(hashed.sum(axis=1)).ravel()
        )

    def test_dim_validation(self):
        with pytest.raises(ConfigError):
            tp.hashed_count_matrix(ANIMALS, 0, 2, 4)
