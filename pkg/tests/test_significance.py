import random
import string
import warnings

import numpy as np
import pytest

from conftest import random_sentences
from lexbias.corpus import Corpus
from lexbias.errors import DegenerateBootstrapError, EmptyCorpusError, UndefinedMetricError
from lexbias.significance import (BootstrapConfig, LowIterationWarning, bootstrap_compare,
                                  metric_value, sign_test_pvalue)


def disjoint_pair():
    # 26 distinct letters per sentence, each type shared by one sentence pair
    a = Corpus.from_sentences([[f"{ch}{i // 2}" for ch in string.ascii_lowercase]
                               for i in range(500)], "a")
    b = Corpus.from_sentences([["x"]] * 500, "b")
    return a, b


def mixed_corpus(seed=0, n=120):
    rng = random.Random(seed)
    return Corpus.from_sentences(
        [[f"w{rng.randint(0, 60)}" for _ in range(rng.randint(3, 15))] for _ in range(n)])


class TestSignTest:
    def test_zero_observed(self):
        assert sign_test_pvalue([1.0, -1.0], 0.0) == 1.0

    def test_one_sided_mass(self):
        assert sign_test_pvalue([0.5, 0.2, -0.1, 0.3], 0.4) == 0.5
        assert sign_test_pvalue([0.5, 0.2, 0.1, 0.3], 0.4) == 0.0
        assert sign_test_pvalue([-1, -2, 0, 3], -1.0) == 1.0

    def test_zero_delta_counts_against(self):
        assert sign_test_pvalue([0.0, 1.0, 1.0, 1.0], 1.0) == 0.5

    def test_empty(self):
        with pytest.raises(ValueError):
            sign_test_pvalue([], 1.0)


class TestBootstrap:
    def test_identical(self, backend):
        c = mixed_corpus()
        r = bootstrap_compare(c, c, BootstrapConfig(iterations=200, seed=1))
        assert r.observed_delta == 0.0
        assert r.p_value >= 0.95
        assert not r.significant
        assert r.to_dict()["status"] == "not significant"

    @pytest.mark.parametrize("metric", ["ttr", "yules_i", "mtld"])
    def test_disjoint_structure(self, backend, metric):
        a, b = disjoint_pair()
        r = bootstrap_compare(a, b, BootstrapConfig(iterations=200, seed=3, metric=metric))
        assert r.observed_delta > 0
        assert r.p_value <= 0.05
        # every resampled delta carries the observed sign
        assert np.all(r.deltas > 0)

    def test_determinism(self, backend):
        a, b = mixed_corpus(1), mixed_corpus(2)
        cfg = BootstrapConfig(iterations=150, seed=99, metric="mtld")
        r1, r2 = bootstrap_compare(a, b, cfg), bootstrap_compare(a, b, cfg)
        assert r1 == r2
        assert r1.deltas.tobytes() == r2.deltas.tobytes()

    def test_seed_matters(self):
        a, b = mixed_corpus(1), mixed_corpus(2)
        r1 = bootstrap_compare(a, b, BootstrapConfig(iterations=100, seed=1))
        r2 = bootstrap_compare(a, b, BootstrapConfig(iterations=100, seed=2))
        assert r1.deltas.tobytes() != r2.deltas.tobytes()

    def test_backends_agree(self):
        from lexbias import kernels
        if len(kernels.BACKENDS) < 2:
            pytest.skip("compiled backend not built")
        a, b = mixed_corpus(4), mixed_corpus(5)
        results = []
        for name in sorted(kernels.BACKENDS):
            with kernels.use_backend(name):
                results.append([bootstrap_compare(a, b, BootstrapConfig(iterations=120, seed=7, metric=m))
                                for m in ("ttr", "yules_i", "mtld")])
        assert results[0] == results[1]

    def test_resampled_metric_matches_direct(self, backend):
        # the in-kernel resample evaluation must equal building the resampled corpus
        rng = random.Random(12)
        for metric in ("ttr", "yules_i", "mtld"):
            c = Corpus.from_sentences(random_sentences(rng, max_tokens=300))
            from lexbias.significance import _Resampler
            ev = _Resampler(c, BootstrapConfig(metric=metric))
            for _ in range(10):
                order = np.array([rng.randrange(len(c)) for _ in range(len(c))], dtype=np.int64)
                try:
                    direct = metric_value(c.subset(order), metric)
                except UndefinedMetricError:
                    with pytest.raises(UndefinedMetricError):
                        ev(order)
                    continue
                assert ev(order) == pytest.approx(direct, rel=1e-12)

    def test_ci_and_bounds(self):
        r = bootstrap_compare(mixed_corpus(1), mixed_corpus(2), BootstrapConfig(iterations=200))
        assert r.ci_low <= r.ci_high
        assert 0.0 <= r.p_value <= 1.0
        assert r.iterations == 200 and r.degenerate_samples == 0

    def test_low_iteration_warning(self):
        c = mixed_corpus()
        with pytest.warns(LowIterationWarning):
            bootstrap_compare(c, c, BootstrapConfig(iterations=50))

    def test_no_warning_at_100(self):
        c = mixed_corpus()
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            bootstrap_compare(c, c, BootstrapConfig(iterations=100))

    def test_undefined_on_full_corpus(self):
        a = Corpus.from_sentences([["a", "b", "c"]])
        with pytest.raises(UndefinedMetricError):
            bootstrap_compare(a, a, BootstrapConfig(metric="yules_i", iterations=100))

    def _flaky_moments(self, monkeypatch, every):
        import lexbias.significance as sig
        calls = {"n": 0}
        real = sig.yules_i_from_moments

        def flaky(m1, m2):
            calls["n"] += 1
            if calls["n"] % every == 0:
                raise UndefinedMetricError("yules_i", "all_types_singleton")
            return real(m1, m2)
        monkeypatch.setattr(sig, "yules_i_from_moments", flaky)

    def test_degenerate_counted(self, monkeypatch):
        # two evaluations per iteration; every 40th call fails -> 5 of 100 iterations
        self._flaky_moments(monkeypatch, 40)
        c = mixed_corpus()
        r = bootstrap_compare(c, c, BootstrapConfig(metric="yules_i", iterations=100))
        assert r.degenerate_samples == 5
        assert r.deltas.size == 95

    def test_too_many_degenerate(self, monkeypatch):
        self._flaky_moments(monkeypatch, 4)
        c = mixed_corpus()
        with pytest.raises(DegenerateBootstrapError):
            bootstrap_compare(c, c, BootstrapConfig(metric="yules_i", iterations=100))

    def test_empty(self):
        with pytest.raises(EmptyCorpusError):
            bootstrap_compare(Corpus.from_sentences([]), mixed_corpus())

    @pytest.mark.parametrize("kwargs", [{"metric": "bleu"}, {"iterations": 0}, {"seed": -1}])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            BootstrapConfig(**kwargs)


def test_calibration_smoke():
    """Same-distribution pairs should rarely look significant; bootstrap noise makes this a soft check."""
    rng = np.random.default_rng(17)
    base = mixed_corpus(seed=3, n=200)
    hits = 0
    trials = 100
    for t in range(trials):
        perm = rng.permutation(len(base))
        half_a, half_b = base.subset(perm[:100]), base.subset(perm[100:])
        r = bootstrap_compare(half_a, half_b, BootstrapConfig(iterations=100, seed=t))
        hits += r.p_value <= 0.05
    if hits > 0.10 * trials:
        warnings.warn(f"calibration: {hits}/{trials} same-distribution pairs had p <= 0.05")
    assert hits <= 0.5 * trials
