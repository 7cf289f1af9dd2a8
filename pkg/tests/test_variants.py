import json
import random

import pytest

from conftest import corpus_of
from lexbias.corpus import Corpus, TokenizerConfig, build_vocab_profile
from lexbias.errors import VariantFileError
from lexbias.variants import VariantSet, load_variant_sets, parse_variant_sets, variant_profile


def rel(profile, label):
    return {v: c.relative_frequency for v, c in profile.per_corpus[label].items()}


class TestVariantSet:
    def test_empty(self):
        with pytest.raises(ValueError):
            VariantSet("x", ())

    def test_duplicates(self):
        with pytest.raises(ValueError):
            VariantSet("x", ("a", "a"))

    def test_normalized_collision(self):
        vs = VariantSet("picture", ("Imagen", "imagen"))
        with pytest.raises(ValueError):
            vs.normalized(TokenizerConfig(lowercase=True))

    def test_normalized_multiword(self):
        with pytest.raises(ValueError):
            VariantSet("happen", ("tener lugar",)).normalized()


class TestVariantProfile:
    def test_hand_count(self):
        c = corpus_of("imagen", "imagen", "fotos", label="es")
        p = variant_profile([c], VariantSet("picture", ("imagen", "fotos", "visión")))
        r = rel(p, "es")
        assert r["imagen"] == pytest.approx(2 / 3) and r["fotos"] == pytest.approx(1 / 3)
        assert r["visión"] == 0.0
        assert p.per_corpus["es"]["imagen"].raw_count == 2

    def test_single_variant(self):
        p = variant_profile([corpus_of("a b a", label="x")], VariantSet("s", ("a",)))
        assert rel(p, "x") == {"a": 1.0}

    def test_absent_set_all_zero(self):
        p = variant_profile([corpus_of("a b", label="x")], VariantSet("s", ("q", "r")))
        assert rel(p, "x") == {"q": 0.0, "r": 0.0}
        assert len(list(p.rows())) == 2

    def test_profile_and_corpus_inputs_agree(self):
        c = corpus_of("a b a c", "c c", label="x")
        vs = VariantSet("s", ("a", "c", "z"))
        assert variant_profile([c], vs) == variant_profile([build_vocab_profile(c)], vs)

    def test_adding_corpus_is_independent(self):
        vs = VariantSet("s", ("a", "b"))
        x, y = corpus_of("a a b", label="x"), corpus_of("b", label="y")
        alone = variant_profile([x], vs).per_corpus["x"]
        both = variant_profile([x, y], vs).per_corpus
        assert both["x"] == alone
        assert list(both) == ["x", "y"]

    def test_labels_must_be_unique(self):
        with pytest.raises(ValueError):
            variant_profile([corpus_of("a", label="x"), corpus_of("b", label="x")], VariantSet("s", ("a",)))

    def test_no_corpora(self):
        with pytest.raises(ValueError):
            variant_profile([], VariantSet("s", ("a",)))

    def test_exact_surface_match(self):
        p = variant_profile([corpus_of("Imagen imagen imágenes", label="x")],
                            VariantSet("s", ("imagen", "imágenes")))
        assert p.per_corpus["x"]["imagen"].raw_count == 1

    def test_sum_to_one_random(self):
        rng = random.Random(0)
        for _ in range(50):
            sents = [[f"v{rng.randint(0, 8)}" for _ in range(rng.randint(1, 6))] for _ in range(rng.randint(1, 20))]
            c = Corpus.from_sentences(sents, "x")
            vs = VariantSet("s", tuple(f"v{i}" for i in rng.sample(range(12), rng.randint(1, 5))))
            freqs = rel(variant_profile([c], vs), "x").values()
            total = sum(freqs)
            assert total == pytest.approx(1.0, abs=1e-12) or all(f == 0 for f in freqs)

    def test_renaming_equivariance(self):
        rng = random.Random(1)
        sents = [[f"v{rng.randint(0, 5)}" for _ in range(5)] for _ in range(30)]
        f = lambda w: w.upper() + "_x"
        vs = VariantSet("s", ("v0", "v1", "v2"))
        a = variant_profile([Corpus.from_sentences(sents, "x")], vs)
        b = variant_profile([Corpus.from_sentences([[f(w) for w in s] for s in sents], "x")],
                            VariantSet("s", tuple(map(f, vs.variants))))
        assert [c for *_, c in a.rows()] == [c for *_, c in b.rows()]

    def test_to_dict(self):
        d = variant_profile([corpus_of("a", label="x")], VariantSet("s", ("a",))).to_dict()
        assert d["per_corpus"]["x"]["a"] == {"count": 1, "relative_frequency": 1.0}


class TestVariantFile:
    def test_roundtrip(self, tmp_path):
        p = tmp_path / "v.json"
        p.write_text(json.dumps([{"source_word": "picture", "variants": ["imagen", "foto"]}]))
        assert load_variant_sets(str(p)) == [VariantSet("picture", ("imagen", "foto"))]

    def test_malformed_json_location(self, tmp_path):
        p = tmp_path / "v.json"
        p.write_text('[\n  {"source_word": "x",\n   "variants": ["a",]}\n]')
        with pytest.raises(VariantFileError) as err:
            load_variant_sets(str(p))
        assert err.value.lineno == 3
        assert err.value.colno is not None
        assert ":3:" in str(err.value)

    @pytest.mark.parametrize("data", [{}, [1], [{"variants": "a"}], [{"variants": []}], [{"variants": ["a", "a"]}]])
    def test_bad_structure(self, data):
        with pytest.raises(VariantFileError):
            parse_variant_sets(data)

    def test_shipped_examples_load(self):
        from importlib import resources
        path = resources.files("lexbias") / "data" / "variant_sets_es.json"
        sets = load_variant_sets(str(path))
        assert {vs.source_word for vs in sets} >= {"picture", "happen"}
