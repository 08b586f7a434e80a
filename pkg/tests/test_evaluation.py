import numpy as np
import pytest
from sklearn.metrics import roc_auc_score

from cyclone_ri.besttrack import Basin
from cyclone_ri.elman import ElmanNetwork, TopologyT, init_weights
from cyclone_ri.elman.network import forward
from cyclone_ri.errors import EvaluationError
from cyclone_ri.evaluation import (
    accuracy,
    aggregate_runs,
    all_negative_accuracy,
    auc,
    classify,
    confusion,
    confusion_from_scores,
    format_confusion_table,
    format_mean_std,
    metric_notes,
    read_confusion,
    read_roc,
    roc,
    roc_from_scores,
    strategy_comparison,
    summarize_runs,
    write_confusion,
    write_roc,
)
from cyclone_ri.extraction import StrategyName
from cyclone_ri.records import ConfusionMatrixT
from cyclone_ri.reference_results import ACCURACIES, BEST_CONFUSIONS, CLASS_COUNTS, published_accuracy

from .helpers import random_windows, zero_network


def pairwise_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l]
    neg = [s for s, l in zip(scores, labels) if not l]
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


def test_classify_tie_counts_as_positive():
    net = zero_network()
    window = [0.1, 0.2, 0.3, 0.4, 0.5]
    assert forward(net, window) == 0.5
    assert classify(net, window, 0.5)


def test_classify_extreme_thresholds(spec_net, rng):
    for window in random_windows(rng, 20):
        assert classify(spec_net, window, 0.0)
        assert not classify(spec_net, window, 1.01)
        assert classify(spec_net, window, 0.5) == (forward(spec_net, window.inputs) >= 0.5)


def test_confusion_counts(spec_net, rng):
    windows = random_windows(rng, 200)
    cm = confusion(spec_net, windows, 0.5)
    assert cm.total == 200
    assert cm.actual_positive == sum(w.label for w in windows)
    expected_tp = sum(w.label and forward(spec_net, w.inputs) >= 0.5 for w in windows)
    assert cm.tp == expected_tp


def test_confusion_rows_fixed_columns_monotone(spec_net, rng):
    windows = random_windows(rng, 300)
    previous = None
    for threshold in np.linspace(0.0, 1.0, 21):
        cm = confusion(spec_net, windows, float(threshold))
        if previous is not None:
            assert cm.actual_positive == previous.actual_positive
            assert cm.actual_negative == previous.actual_negative
            assert cm.predicted_positive <= previous.predicted_positive
        previous = cm


def test_all_negative_predictor(spec_net, rng):
    cm = confusion(spec_net, random_windows(rng, 50), threshold=2.0)
    assert cm.tp == 0 and cm.fp == 0


def test_confusion_rejects_empty_set(spec_net):
    with pytest.raises(EvaluationError):
        confusion(spec_net, [])


@pytest.mark.parametrize(
    "key, expected",
    [
        ((Basin.SOUTH_PACIFIC, StrategyName.I), 99.55),
        ((Basin.SOUTH_INDIAN, StrategyName.I), 98.86),
        ((Basin.SOUTH_PACIFIC, StrategyName.II), 80.06),
        ((Basin.SOUTH_INDIAN, StrategyName.II), 81.90),
    ],
)
def test_published_confusion_accuracy(key, expected):
    assert round(accuracy(BEST_CONFUSIONS[key]), 2) == expected


def test_published_confusion_totals():
    assert BEST_CONFUSIONS[(Basin.SOUTH_PACIFIC, StrategyName.I)].total == 2008
    assert BEST_CONFUSIONS[(Basin.SOUTH_INDIAN, StrategyName.I)].total == 6746
    assert BEST_CONFUSIONS[(Basin.SOUTH_PACIFIC, StrategyName.II)].total == 1876
    assert BEST_CONFUSIONS[(Basin.SOUTH_INDIAN, StrategyName.II)].total == 6369
    sp_two = BEST_CONFUSIONS[(Basin.SOUTH_PACIFIC, StrategyName.II)]
    assert (sp_two.actual_positive, sp_two.actual_negative) == (358, 1518)
    assert (sp_two.predicted_positive, sp_two.predicted_negative) == (116, 1760)
    for train_counts, test_counts in CLASS_COUNTS.values():
        assert train_counts.positive + train_counts.negative == train_counts.total
        assert test_counts.positive + test_counts.negative == test_counts.total


def test_strategy_two_detects_more_in_both_basins():
    for basin in (Basin.SOUTH_PACIFIC, Basin.SOUTH_INDIAN):
        one = BEST_CONFUSIONS[(basin, StrategyName.I)]
        two = BEST_CONFUSIONS[(basin, StrategyName.II)]
        assert two.tp > one.tp
        assert "detects more" in strategy_comparison(one, two)


def test_accuracy_basics():
    assert accuracy(ConfusionMatrixT(tp=5, fn=0, fp=0, tn=5)) == 100.0
    with pytest.raises(EvaluationError):
        accuracy(ConfusionMatrixT(tp=0, fn=0, fp=0, tn=0))


def test_imbalance_baseline():
    test_counts = CLASS_COUNTS[Basin.SOUTH_PACIFIC][1]
    baseline = all_negative_accuracy(test_counts.positive, test_counts.total)
    assert baseline == 100.0 * 2002 / 2009
    assert round(baseline, 2) == 99.65


def test_baseline_reported_in_notes():
    cm = BEST_CONFUSIONS[(Basin.SOUTH_PACIFIC, StrategyName.I)]
    published = ACCURACIES[(Basin.SOUTH_PACIFIC, StrategyName.I)]
    notes = metric_notes(cm, published.mean, published.std)
    assert notes[0].startswith("all-negative baseline")
    assert any("standard deviations above" in n for n in notes)
    assert any("tp = 0" in n for n in notes)


def test_roc_perfect_separator():
    curve = roc_from_scores([0.9, 0.8, 0.7, 0.2, 0.1], [True, True, True, False, False])
    assert any(p.fpr == 0.0 and p.tpr == 1.0 for p in curve.points)
    assert auc(curve) == 1.0


def test_roc_constant_scores():
    curve = roc_from_scores([0.4] * 6, [True, False] * 3)
    assert [(p.fpr, p.tpr) for p in curve.points] == [(0.0, 0.0), (1.0, 1.0), (1.0, 1.0)]
    assert auc(curve) == 0.5


def test_roc_sentinels_and_monotonicity(rng):
    scores = rng.uniform(size=300)
    labels = rng.uniform(size=300) < 0.3
    curve = roc_from_scores(scores, labels)
    assert curve.points[0].threshold == np.inf and curve.points[-1].threshold == -np.inf
    assert len(curve.points) == 302
    for a, b in zip(curve.points, curve.points[1:]):
        assert b.threshold < a.threshold
        assert b.fpr >= a.fpr and b.tpr >= a.tpr


def test_roc_threshold_cap(rng):
    scores = rng.uniform(size=500)
    labels = np.arange(500) % 2 == 0
    full = roc_from_scores(scores, labels)
    capped = roc_from_scores(scores, labels, n_thresholds=20)
    assert len(capped.points) == 22
    # the highest and lowest scores stay in, so the curve still spans (0, 0) to (1, 1)
    assert capped.points[1] == full.points[1]
    assert capped.points[-2] == full.points[-2]
    assert {p.threshold for p in capped.points} <= {p.threshold for p in full.points}


def test_random_scores_auc_near_half(rng):
    labels = np.arange(10_000) % 2 == 0
    assert auc(roc_from_scores(rng.uniform(size=10_000), labels)) == pytest.approx(0.5, abs=0.05)


def test_auc_matches_pairwise_ranking(rng):
    for _ in range(200):
        n = int(rng.integers(2, 51))
        labels = np.zeros(n, dtype=bool)
        labels[rng.choice(n, size=int(rng.integers(1, n)), replace=False)] = True
        # coarse scores so ties occur
        scores = np.round(rng.uniform(size=n), 1)
        area = auc(roc_from_scores(scores, labels))
        assert area == pytest.approx(pairwise_auc(scores, labels), abs=1e-12)
        assert area == pytest.approx(roc_auc_score(labels, scores), abs=1e-12)


def test_roc_names_missing_class():
    with pytest.raises(EvaluationError, match="positive"):
        roc_from_scores([0.1, 0.2], [False, False])
    with pytest.raises(EvaluationError, match="negative"):
        roc_from_scores([0.1, 0.2], [True, True])


def test_roc_from_network(spec_net, rng):
    windows = random_windows(rng, 100)
    curve = roc(spec_net, windows)
    assert 0.0 <= auc(curve) <= 1.0
    cm = confusion(spec_net, windows, 0.5)
    manual = confusion_from_scores([forward(spec_net, w.inputs) for w in windows], [w.label for w in windows])
    assert cm == manual


def test_aggregate_runs():
    flat = aggregate_runs([80.0, 80.0, 80.0])
    assert (flat.mean, flat.std) == (80.0, 0.0)
    pair = aggregate_runs([79.0, 81.0])
    assert pair.mean == 80.0
    assert pair.std == pytest.approx(2**0.5)
    assert pair.best_index == 1
    with pytest.raises(EvaluationError):
        aggregate_runs([80.0])


def test_best_run_ties_go_to_earliest():
    cms = [ConfusionMatrixT(tp=i, fn=0, fp=0, tn=1) for i in range(3)]
    summary = aggregate_runs([90.0, 95.0, 95.0], cms)
    assert summary.best_index == 1
    assert summary.best_confusion == cms[1]


def test_single_run_summary_omits_std():
    summary = summarize_runs([91.5])
    assert summary.std is None
    assert format_mean_std(summary.mean, summary.std) == "91.500"


def test_mean_std_format():
    assert format_mean_std(97.214, 0.013) == "97.214 ± 0.013"


def test_confusion_table_layout():
    table = format_confusion_table(BEST_CONFUSIONS[(Basin.SOUTH_PACIFIC, StrategyName.II)], "SP II")
    lines = table.splitlines()
    assert lines[0] == "SP II"
    assert lines[3].split() == ["Actual", "Positive", "50", "308", "358"]
    assert lines[4].split() == ["Actual", "Negative", "66", "1452", "1518"]
    assert lines[5].split() == ["Total", "116", "1760", "1876"]


def test_confusion_and_roc_files(tmp_path, rng):
    cm = ConfusionMatrixT(tp=3, fn=4, fp=5, tn=6)
    write_confusion(tmp_path / "cm.csv", cm)
    assert (tmp_path / "cm.csv").read_text() == "tp,fn,fp,tn\n3,4,5,6\n"
    assert read_confusion(tmp_path / "cm.csv") == cm

    curve = roc_from_scores(rng.uniform(size=40), np.arange(40) % 3 == 0)
    write_roc(tmp_path / "roc.csv", curve)
    assert (tmp_path / "roc.csv").read_text().splitlines()[0] == "threshold,fpr,tpr"
    assert read_roc(tmp_path / "roc.csv") == curve


def test_published_accuracy_lookup():
    assert published_accuracy(Basin.SOUTH_INDIAN, StrategyName.I) == ACCURACIES[(Basin.SOUTH_INDIAN, StrategyName.I)]
    with pytest.raises(ValueError, match="No published accuracy for other"):
        published_accuracy(Basin.OTHER, StrategyName.I)
