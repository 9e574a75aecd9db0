import json
import random
from fractions import Fraction

import pytest

from mathdef import evaluate as ev
from mathdef.errors import DatasetError
from mathdef.evaluate import ConfusionMatrix


def _preds(mapping):
    return [{"id": k, "label": v, "score": float(v)} for k, v in mapping.items()]


def test_confusion_all_correct():
    gold = {"a": 1, "b": 1, "c": 0, "d": 0}
    cm = ev.confusion(gold, _preds(gold))
    assert (cm.tp, cm.tn, cm.fp, cm.fn) == (2, 2, 0, 0)


def test_confusion_all_flipped():
    gold = {"a": 1, "b": 1, "c": 0, "d": 0}
    flipped = {k: 1 - v for k, v in gold.items()}
    cm = ev.confusion(gold, _preds(flipped))
    assert (cm.tp, cm.tn, cm.fp, cm.fn) == (0, 0, 2, 2)


def test_confusion_contract_errors():
    gold = {"a": 1, "b": 0}
    with pytest.raises(DatasetError):
        ev.confusion(gold, [])  # uncovered gold ids
    with pytest.raises(DatasetError):
        ev.confusion(gold, _preds({"a": 1, "zz": 0}))  # unknown id
    with pytest.raises(DatasetError):
        ev.confusion(gold, [{"id": "a", "label": 1}, {"id": "a", "label": 0},
                            {"id": "b", "label": 0}])  # duplicate


def test_metrics_chicago_validation_shape():
    # counts reconstructed from a 50-example validation slice with 22
    # positive supports; printed two-decimal values must match the table
    report = ev.metrics(ConfusionMatrix(tp=21, fn=1, fp=3, tn=25))
    d = report.per_class["def"]
    n = report.per_class["not_def"]
    assert d.support == 22 and n.support == 28
    assert [ev._round(x, 2) for x in (d.precision, d.recall, d.f1)] == ["0.88", "0.95", "0.91"]
    assert [ev._round(x, 2) for x in (n.precision, n.recall, n.f1)] == ["0.96", "0.89", "0.93"]
    assert ev._round(report.accuracy, 2) == "0.92"


def test_metrics_tac_validation_shape():
    report = ev.metrics(ConfusionMatrix(tp=1, fn=1, fp=0, tn=98))
    d = report.per_class["def"]
    assert d.support == 2
    assert d.precision == pytest.approx(1.00, abs=0.005)
    assert d.recall == pytest.approx(0.50, abs=0.005)
    assert d.f1 == pytest.approx(0.667, abs=0.0005)
    assert report.accuracy == pytest.approx(0.99, abs=0.005)


def test_metrics_degenerate_flags():
    report = ev.metrics(ConfusionMatrix(tp=0, fp=0, fn=5, tn=5))
    d = report.per_class["def"]
    assert d.precision == 0.0 and d.recall == 0.0 and d.f1 == 0.0
    assert "precision" in d.degenerate and "f1" in d.degenerate
    assert report.per_class["not_def"].degenerate == ()


def test_metrics_empty_rejected():
    with pytest.raises(DatasetError):
        ev.metrics(ConfusionMatrix(0, 0, 0, 0))


def test_accuracy_exact_and_supports():
    cm = ConfusionMatrix(tp=3, fp=2, tn=4, fn=1)
    report = ev.metrics(cm)
    assert report.accuracy == (3 + 4) / 10
    assert report.per_class["def"].support == 4
    assert report.per_class["not_def"].support == 6


def test_brute_force_equivalence():
    rng = random.Random(31)
    for _ in range(100):
        n = rng.randint(1, 200)
        gold = {f"i{k}": rng.randint(0, 1) for k in range(n)}
        preds = [{"id": k, "label": rng.randint(0, 1)} for k in gold]
        # independent path: iterate pairs directly
        tp = sum(1 for p in preds if p["label"] == 1 and gold[p["id"]] == 1)
        fp = sum(1 for p in preds if p["label"] == 1 and gold[p["id"]] == 0)
        tn = sum(1 for p in preds if p["label"] == 0 and gold[p["id"]] == 0)
        fn = sum(1 for p in preds if p["label"] == 0 and gold[p["id"]] == 1)
        direct = ev.metrics(ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn))
        via_confusion = ev.metrics(ev.confusion(gold, preds))
        assert direct == via_confusion


def test_permutation_invariance():
    rng = random.Random(5)
    gold = {f"i{k}": rng.randint(0, 1) for k in range(50)}
    preds = [{"id": k, "label": rng.randint(0, 1)} for k in gold]
    shuffled = preds[:]
    rng.shuffle(shuffled)
    assert ev.metrics(ev.confusion(gold, preds)) == ev.metrics(ev.confusion(gold, shuffled))


def test_f1_harmonic_identity_rational():
    rng = random.Random(6)
    for _ in range(50):
        tp, fp, fn, tn = (rng.randint(0, 30) for _ in range(4))
        if tp + fp == 0 or tp + fn == 0 or tp == 0:
            continue
        p = Fraction(tp, tp + fp)
        r = Fraction(tp, tp + fn)
        f1 = 2 * p * r / (p + r)
        assert f1 * (p + r) == 2 * p * r


def test_class_symmetry():
    cm = ConfusionMatrix(tp=7, fp=3, tn=11, fn=2)
    swapped = ConfusionMatrix(tp=11, fp=2, tn=7, fn=3)  # labels flipped everywhere
    a = ev.metrics(cm)
    b = ev.metrics(swapped)
    assert a.accuracy == b.accuracy
    assert a.per_class["def"] == b.per_class["not_def"]
    assert a.per_class["not_def"] == b.per_class["def"]


def test_slice_report():
    gold = {}
    preds = []
    slices = {}
    rng = random.Random(2)
    for i in range(50):
        gold[f"c{i}"] = rng.randint(0, 1)
        slices[f"c{i}"] = "chicago"
    for i in range(100):
        gold[f"t{i}"] = rng.randint(0, 1)
        slices[f"t{i}"] = "tac"
    preds = [{"id": k, "label": rng.randint(0, 1)} for k in gold]
    reports = ev.slice_report(gold, preds, slices)
    assert [r.slice_tag for r in reports] == ["chicago", "tac"]
    supports = [
        r.per_class["def"].support + r.per_class["not_def"].support for r in reports
    ]
    assert supports == [50, 100]


def test_slice_report_single_tag_equals_metrics():
    gold = {"a": 1, "b": 0, "c": 1}
    preds = _preds({"a": 1, "b": 1, "c": 0})
    slices = {k: "only" for k in gold}
    (report,) = ev.slice_report(gold, preds, slices)
    whole = ev.metrics(ev.confusion(gold, preds), slice_tag="only")
    assert report == whole


def test_slice_report_untagged_id():
    with pytest.raises(DatasetError):
        ev.slice_report({"a": 1}, _preds({"a": 1}), {})


def test_render_text_table_two_decimals():
    report = ev.metrics(ConfusionMatrix(tp=21, fn=1, fp=3, tn=25))
    table = ev.render(report, "text_table", decimals=2)
    def_row = next(line for line in table.splitlines() if line.startswith("Def."))
    assert def_row.split() == ["Def.", "0.88", "0.95", "0.91", "22", "0.92"]
    neg_row = next(line for line in table.splitlines() if line.startswith("¬Def."))
    assert neg_row.split() == ["¬Def.", "0.96", "0.89", "0.93", "28"]


def test_render_json_round_trip():
    report = ev.metrics(ConfusionMatrix(tp=5, fn=2, fp=1, tn=9), slice_tag="s")
    payload = json.loads(ev.render(report, "json"))
    assert ev.report_from_dict(payload) == report


def test_render_csv_rows_and_empty():
    report = ev.metrics(ConfusionMatrix(tp=5, fn=2, fp=1, tn=9))
    out = ev.render([report], "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "slice,class,precision,recall,f1,support,accuracy"
    assert len(lines) == 3
    assert ev.render([], "csv").strip().splitlines() == [
        "slice,class,precision,recall,f1,support,accuracy"
    ]


def test_rounding_half_even():
    assert ev._round(0.875, 2) == "0.88"
    assert ev._round(0.885, 2) == "0.88"  # ties to even
    assert ev._round(0.25, 1) == "0.2"
    assert ev._round(0.35, 1) == "0.4"
