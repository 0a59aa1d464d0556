from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from notematch.analysis import (
    ADJUDICATOR,
    IRRELEVANT,
    RELEVANT,
    IntervalStats,
    LabelError,
    PairLabel,
    Role,
    agreement,
    append_label,
    consensus_labels,
    hit_ratio,
    interval_averages,
    interval_histogram,
    load_labels,
    role_distribution,
    time_interval,
)

from helpers import kappa_reference


def label(pair_id, relevance=RELEVANT, annotator="a1", role=None, at="2022-01-01T00:00:00+00:00"):
    return PairLabel(pair_id=pair_id, annotator=annotator, relevance=relevance,
                     role=role, labeled_at=at)


class TestPairLabel:
    def test_role_on_irrelevant_forbidden(self):
        with pytest.raises(LabelError):
            label("p1", relevance=IRRELEVANT, role=Role.PRAISER)

    def test_exactly_eight_roles(self):
        assert len(Role) == 8
        assert {r.value for r in Role} == {
            "feature_requester", "bug_reporter", "complainer", "praiser",
            "quality_issue_raiser", "dispraiser", "subsequent_feature_requester",
            "questioner",
        }

    def test_record_round_trip(self):
        original = label("p1", role=Role.BUG_REPORTER)
        assert PairLabel.from_record(original.to_record()) == original

    def test_unknown_role_rejected(self):
        with pytest.raises(LabelError):
            PairLabel.from_record({"pair_id": "p", "annotator": "a",
                                   "relevance": RELEVANT, "role": "cheerleader"})


class TestHitRatio:
    def test_zero_relevant(self):
        labels = [label(f"p{i}", IRRELEVANT) for i in range(10)]
        assert hit_ratio(labels) == 0.0

    def test_paper_style_ratio(self):
        labels = [label(f"p{i}") for i in range(29)] + [
            label(f"q{i}", IRRELEVANT) for i in range(18)
        ]
        assert hit_ratio(labels) == pytest.approx(29 / 47, abs=1e-12)

    def test_empty_is_error(self):
        with pytest.raises(LabelError):
            hit_ratio([])

    def test_one_more_relevant_strictly_increases(self):
        base = [label(f"p{i}", IRRELEVANT) for i in range(5)]
        for k in range(5):
            lower = hit_ratio(base + [label(f"r{i}") for i in range(k)])
            higher = hit_ratio(base + [label(f"r{i}") for i in range(k + 1)])
            assert higher > lower


class TestRoleDistribution:
    def test_single_role_is_hundred_percent(self):
        labels = [label(f"p{i}", role=Role.PRAISER) for i in range(7)]
        dist = {row["role"]: row for row in role_distribution(labels)}
        assert dist["praiser"]["percent"] == pytest.approx(100.0)
        assert dist["praiser"]["count"] == 7
        assert dist["questioner"]["count"] == 0

    def test_percentages_sum_to_hundred(self):
        labels = (
            [label(f"a{i}", role=Role.FEATURE_REQUESTER) for i in range(5)]
            + [label(f"b{i}", role=Role.BUG_REPORTER) for i in range(4)]
            + [label(f"c{i}", role=Role.QUESTIONER) for i in range(2)]
            + [label(f"d{i}", IRRELEVANT) for i in range(3)]
        )
        dist = role_distribution(labels)
        assert sum(row["percent"] for row in dist) == pytest.approx(100.0, abs=0.2)

    def test_irrelevant_pairs_do_not_count(self):
        labels = [label("p1", role=Role.PRAISER), label("p2", IRRELEVANT)]
        dist = {row["role"]: row for row in role_distribution(labels)}
        assert dist["praiser"]["percent"] == pytest.approx(100.0)


class TestTimeInterval:
    def test_review_before_note(self):
        assert time_interval(date(2019, 3, 10), date(2019, 3, 1)) == 9

    def test_review_after_note(self):
        assert time_interval(date(2018, 1, 1), date(2019, 1, 1)) == -365

    def test_same_day(self):
        assert time_interval(date(2020, 5, 5), date(2020, 5, 5)) == 0

    @given(st.dates(min_value=date(2000, 1, 1), max_value=date(2030, 1, 1)),
           st.dates(min_value=date(2000, 1, 1), max_value=date(2030, 1, 1)))
    @settings(max_examples=100, deadline=None)
    def test_antisymmetry(self, d1, d2):
        assert time_interval(d1, d2) == -time_interval(d2, d1)


class TestIntervalAverages:
    def test_mixed(self):
        assert interval_averages([-10, -20, 30]) == (15.0, 30.0)

    def test_all_positive(self):
        before, after = interval_averages([5, 10])
        assert before == 0.0
        assert after == 7.5

    def test_zero_contributes_to_neither(self):
        assert interval_averages([0, 0, 0]) == (0.0, 0.0)
        assert interval_averages([0, -4, 4]) == (4.0, 4.0)

    def test_empty(self):
        assert interval_averages([]) == (0.0, 0.0)


class TestIntervalHistogram:
    def test_spec_fixture(self):
        assert interval_histogram([-5, -1, 3], 20) == [(-20, 2), (0, 1)]

    def test_empty(self):
        assert interval_histogram([], 20) == []

    def test_paper_max_lands_in_1380_bin(self):
        hist = dict(interval_histogram([1398], 20))
        assert hist == {1380: 1}

    def test_left_closed_bins(self):
        assert interval_histogram([0, 19, 20], 20) == [(0, 2), (20, 1)]
        assert interval_histogram([-20, -1], 20) == [(-20, 2)]

    def test_interior_empty_bins_emitted(self):
        hist = interval_histogram([0, 45], 20)
        assert hist == [(0, 1), (20, 0), (40, 1)]

    def test_bad_width(self):
        with pytest.raises(ValueError):
            interval_histogram([1], 0)

    @given(st.lists(st.integers(min_value=-2000, max_value=2000), max_size=300),
           st.integers(min_value=1, max_value=60))
    @settings(max_examples=150, deadline=None)
    def test_count_conservation(self, deltas, width):
        hist = interval_histogram(deltas, width)
        assert sum(count for _, count in hist) == len(deltas)

    def test_interval_stats_bundle(self):
        stats = IntervalStats.from_deltas([-10, -20, 30])
        assert (stats.t_before_avg, stats.t_after_avg) == (15.0, 30.0)
        assert sum(c for _, c in stats.histogram) == 3


class TestAgreement:
    def test_identical_sets(self):
        a = [label(f"p{i}", annotator="a") for i in range(6)]
        b = [label(f"p{i}", annotator="b") for i in range(6)]
        result = agreement(a, b)
        assert result["percent_agreement"] == 1.0
        assert result["cohen_kappa"] == 1.0
        assert result["disagreements"] == []

    def test_total_disagreement(self):
        a = [label(f"p{i}", RELEVANT, annotator="a") for i in range(10)]
        b = [label(f"p{i}", IRRELEVANT, annotator="b") for i in range(10)]
        result = agreement(a, b)
        assert result["percent_agreement"] == 0.0
        assert len(result["disagreements"]) == 10

    def test_pinned_kappa_from_contingency_table(self):
        # A: 8 relevant / 2 irrelevant, B: 7 / 3, 9 agreements.
        # The only 2x2 table with those marginals is a=7, b=1, c=0, d=2:
        # p_o = 0.9, p_e = 0.8*0.7 + 0.2*0.3 = 0.62, kappa = 0.28/0.38 = 14/19.
        a_rel = [RELEVANT] * 8 + [IRRELEVANT] * 2
        b_rel = [RELEVANT] * 7 + [IRRELEVANT] + [IRRELEVANT] * 2
        a = [label(f"p{i}", r, annotator="a") for i, r in enumerate(a_rel)]
        b = [label(f"p{i}", r, annotator="b") for i, r in enumerate(b_rel)]
        result = agreement(a, b)
        assert result["percent_agreement"] == pytest.approx(0.9)
        assert result["cohen_kappa"] == pytest.approx(14 / 19, abs=1e-12)
        assert result["cohen_kappa"] == pytest.approx(
            kappa_reference(list(zip(a_rel, b_rel))), abs=1e-12
        )
        assert result["disagreements"] == ["p7"]

    def test_id_set_mismatch_is_error(self):
        with pytest.raises(LabelError):
            agreement([label("p1", annotator="a")], [label("p2", annotator="b")])


class TestConsensus:
    def test_agreement_wins(self):
        labels = [label("p1", annotator="a"), label("p1", annotator="b")]
        consensus, unresolved = consensus_labels(labels)
        assert len(consensus) == 1
        assert consensus[0].relevance == RELEVANT
        assert unresolved == []

    def test_adjudicator_overrides_disagreement(self):
        labels = [
            label("p1", RELEVANT, annotator="a", role=Role.PRAISER),
            label("p1", IRRELEVANT, annotator="b"),
            label("p1", IRRELEVANT, annotator=ADJUDICATOR),
        ]
        consensus, unresolved = consensus_labels(labels)
        assert consensus[0].relevance == IRRELEVANT
        assert unresolved == []

    def test_disagreement_without_adjudicator_unresolved(self):
        labels = [label("p1", RELEVANT, annotator="a"), label("p1", IRRELEVANT, annotator="b")]
        consensus, unresolved = consensus_labels(labels)
        assert consensus == []
        assert unresolved == ["p1"]

    def test_single_coder_counts(self):
        consensus, unresolved = consensus_labels([label("p1", annotator="a")])
        assert len(consensus) == 1
        assert unresolved == []

    def test_role_disagreement_needs_adjudication(self):
        labels = [
            label("p1", annotator="a", role=Role.PRAISER),
            label("p1", annotator="b", role=Role.DISPRAISER),
        ]
        consensus, unresolved = consensus_labels(labels)
        assert unresolved == ["p1"]


class TestLabelFile:
    def test_append_and_load(self, tmp_path):
        path = tmp_path / "labels.jsonl"
        first = label("p1", role=Role.COMPLAINER)
        second = label("p2", IRRELEVANT, annotator="b")
        append_label(path, first)
        append_label(path, second)
        assert load_labels(path) == [first, second]

    def test_partial_trailing_line_ignored(self, tmp_path):
        path = tmp_path / "labels.jsonl"
        append_label(path, label("p1"))
        with open(path, "a", encoding="utf-8") as fh:
            fh.write('{"pair_id": "p2", "annot')  # torn write, no newline
        labels = load_labels(path)
        assert [l.pair_id for l in labels] == ["p1"]

    def test_corruption_mid_file_is_error(self, tmp_path):
        path = tmp_path / "labels.jsonl"
        append_label(path, label("p1"))
        with open(path, "a", encoding="utf-8") as fh:
            fh.write("garbage\n")
        append_label(path, label("p3"))
        with pytest.raises(LabelError):
            load_labels(path)

    def test_missing_file_is_empty(self, tmp_path):
        assert load_labels(tmp_path / "nope.jsonl") == []
