"""Training pipeline: schedules, canonical unit counts, weight files."""

import json
import random

import pytest

from spikeword.simcore import Simulation
from spikeword.trainer import (
    OUTPUT_SPIKE_TIME,
    TRAIN_DURATION,
    CodeWord,
    build_training_network,
    load_weights,
    save_weights,
    train_set,
    train_single,
)


class TestCodeWord:
    def test_range_checked(self):
        with pytest.raises(ValueError):
            CodeWord(1024, 10)
        with pytest.raises(ValueError):
            CodeWord(-1, 10)

    def test_bits(self):
        w = CodeWord(992, 10)
        assert [w.bit(i) for i in range(10)] == [0, 0, 0, 0, 0, 1, 1, 1, 1, 1]


class TestTrainSingle:
    def test_word_992(self):
        w = train_single(CodeWord(992))
        assert w.pop1_units == (0, 0, 0, 0, 0, 1, 1, 1, 1, 1)
        assert w.pop0_units == (1, 1, 1, 1, 1, 0, 0, 0, 0, 0)
        assert w.unit_weight == 0.3671875

    def test_all_zero_word(self):
        w = train_single(CodeWord(0))
        assert w.pop0_units == (1,) * 10
        assert w.pop1_units == (0,) * 10

    def test_all_one_word(self):
        w = train_single(CodeWord(1023))
        assert w.pop1_units == (1,) * 10
        assert w.pop0_units == (0,) * 10

    @pytest.mark.parametrize("value", [0, 5, 341, 992, 1023])
    def test_output_fires_exactly_once_at_32(self, value):
        rec = Simulation(build_training_network(CodeWord(value))).run(
            TRAIN_DURATION
        )
        assert rec.spike_times("output") == (OUTPUT_SPIKE_TIME,)

    def test_raw_updates_have_expected_signs(self):
        word = CodeWord(0b1010101010)
        spec = build_training_network(word)
        rec = Simulation(spec).run(TRAIN_DURATION)
        idx = {p.source: i for i, p in enumerate(spec.projections) if p.plastic}
        for i in range(10):
            b = word.bit(i)
            match_lsb, match_raw = rec.plastic[idx[f"inj{b}"]][i]
            opp_lsb, opp_raw = rec.plastic[idx[f"inj{1 - b}"]][i]
            assert match_raw > 0 and match_lsb > 0
            assert opp_raw < 0 and opp_lsb == 0


class TestTrainSet:
    def test_pair_992_960(self):
        w = train_set([992, 960])
        assert w.pop0_units == (2, 2, 2, 2, 2, 1, 0, 0, 0, 0)
        assert w.pop1_units == (0, 0, 0, 0, 0, 1, 2, 2, 2, 2)
        # displayed weights 0.734 on doubled rows, 0.367 on the split bit
        assert 2 * w.unit_weight == pytest.approx(0.734, abs=5e-4)

    def test_triple_0_1_2(self):
        w = train_set([0, 1, 2])
        assert w.pop0_units == (2, 2, 3, 3, 3, 3, 3, 3, 3, 3)
        assert w.pop1_units == (1, 1, 0, 0, 0, 0, 0, 0, 0, 0)

    def test_singleton_equals_single(self):
        assert train_set([341]) == train_single(CodeWord(341))

    def test_order_independent(self):
        rng = random.Random(99)
        words = [7, 512, 130]
        shuffled = words[:]
        rng.shuffle(shuffled)
        assert train_set(words) == train_set(shuffled)

    def test_column_sums(self):
        rng = random.Random(5)
        for _ in range(5):
            words = rng.sample(range(1024), rng.randint(1, 4))
            w = train_set(words)
            for i in range(10):
                assert w.pop0_units[i] + w.pop1_units[i] == len(words)
                assert w.pop1_units[i] == sum((v >> i) & 1 for v in words)

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            train_set([992, 992])

    def test_mixed_widths_rejected(self):
        with pytest.raises(ValueError):
            train_set([CodeWord(1, 10), CodeWord(1, 8)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            train_set([])


class TestWeightFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "weights.json"
        w = train_set([992, 960])
        save_weights(path, w, factor=2.3268, dropped=())
        loaded, factor, dropped = load_weights(path)
        assert loaded == w
        assert factor == 2.3268
        assert dropped == ()

    def test_field_order_is_fixed(self, tmp_path):
        path = tmp_path / "weights.json"
        save_weights(path, train_set([992]), factor=4.18817)
        doc = json.loads(path.read_text())
        assert list(doc) == [
            "n_bits", "lsb", "unit_lsb", "pop0_units", "pop1_units",
            "trained_codewords", "homeostatic_factor", "dropped_codewords",
        ]
        assert doc["lsb"] == 2.0 ** -11
        assert doc["unit_lsb"] == 752

    def test_corrupt_file_rejected(self, tmp_path):
        path = tmp_path / "weights.json"
        path.write_text("{\"n_bits\": 10}")
        with pytest.raises(ValueError):
            load_weights(path)

    def test_inconsistent_units_rejected(self, tmp_path):
        path = tmp_path / "weights.json"
        save_weights(path, train_set([992]), factor=None)
        doc = json.loads(path.read_text())
        doc["pop0_units"][0] = 7
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError):
            load_weights(path)

    def test_null_factor_round_trip(self, tmp_path):
        path = tmp_path / "weights.json"
        w = train_set([992, 31])
        save_weights(path, w, factor=None, dropped=w.trained_codewords)
        _, factor, dropped = load_weights(path)
        assert factor is None
        assert {d.value for d in dropped} == {31, 992}
