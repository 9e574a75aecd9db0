"""Score predictions against gold labels and render metric tables.

Reports carry per-class precision/recall/F1/support (positive class "def",
negative class "not_def") plus accuracy, in the row layout of the usual
validation tables.  Degenerate 0/0 ratios are reported as 0.0 and flagged
rather than raised: slices with two positive examples are a fact of life
in low-density corpora.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Iterable, Mapping

from .errors import DatasetError, SchemaError
from .jsonl import read_jsonl

CLASS_DEF = "def"
CLASS_NOT_DEF = "not_def"

_ROW_LABELS = {CLASS_NOT_DEF: "¬Def.", CLASS_DEF: "Def."}


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            if getattr(self, name) < 0:
                raise DatasetError(f"confusion count {name} is negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: tuple[str, ...] = ()


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_class: dict[str, ClassMetrics]
    confusion: ConfusionMatrix
    macro: dict[str, float]
    slice_tag: str | None = None


def _pred_id_label(item) -> tuple[str, int]:
    if isinstance(item, Mapping):
        return str(item["id"]), int(item["label"])
    return str(item.id), int(item.label)


def confusion(gold: Mapping[str, int], preds: Iterable) -> ConfusionMatrix:
    """Count tp/fp/tn/fn; every gold id must be predicted exactly once."""
    tp = fp = tn = fn = 0
    seen: set[str] = set()
    for item in preds:
        pid, plabel = _pred_id_label(item)
        if pid not in gold:
            raise DatasetError(f"prediction for unknown id {pid!r}")
        if pid in seen:
            raise DatasetError(f"duplicate prediction for id {pid!r}")
        seen.add(pid)
        glabel = gold[pid]
        if glabel == 1:
            tp += plabel == 1
            fn += plabel == 0
        else:
            fp += plabel == 1
            tn += plabel == 0
    uncovered = sorted(set(gold) - seen)
    if uncovered:
        raise DatasetError(f"no prediction for gold ids: {uncovered[:5]}")
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def _class_metrics(tp: int, fp: int, fn: int) -> ClassMetrics:
    degenerate = []
    precision, deg = _ratio(tp, tp + fp)
    if deg:
        degenerate.append("precision")
    recall, deg = _ratio(tp, tp + fn)
    if deg:
        degenerate.append("recall")
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
        degenerate.append("f1")
    return ClassMetrics(
        precision=precision,
        recall=recall,
        f1=f1,
        support=tp + fn,
        degenerate=tuple(degenerate),
    )


def metrics(cm: ConfusionMatrix, slice_tag: str | None = None) -> EvalReport:
    """Per-class and aggregate metrics from a confusion matrix."""
    if cm.total == 0:
        raise DatasetError("cannot compute metrics for an empty confusion matrix")
    pos = _class_metrics(cm.tp, cm.fp, cm.fn)
    neg = _class_metrics(cm.tn, cm.fn, cm.fp)  # roles swap for the negative class
    per_class = {CLASS_DEF: pos, CLASS_NOT_DEF: neg}
    macro = {
        "precision": (pos.precision + neg.precision) / 2,
        "recall": (pos.recall + neg.recall) / 2,
        "f1": (pos.f1 + neg.f1) / 2,
    }
    return EvalReport(
        accuracy=(cm.tp + cm.tn) / cm.total,
        per_class=per_class,
        confusion=cm,
        macro=macro,
        slice_tag=slice_tag,
    )


def slice_report(
    gold: Mapping[str, int],
    preds: Iterable,
    slices: Mapping[str, str],
) -> list[EvalReport]:
    """One report per slice tag, over that slice's ids only."""
    preds = list(preds)
    untagged = sorted(set(gold) - set(slices))
    if untagged:
        raise DatasetError(f"ids without a slice tag: {untagged[:5]}")
    by_tag: dict[str, list] = {}
    for item in preds:
        pid, _ = _pred_id_label(item)
        if pid not in slices:
            raise DatasetError(f"prediction id {pid!r} has no slice tag")
        by_tag.setdefault(slices[pid], []).append(item)
    reports = []
    for tag in sorted(by_tag):
        tag_gold = {gid: lab for gid, lab in gold.items() if slices.get(gid) == tag}
        reports.append(metrics(confusion(tag_gold, by_tag[tag]), slice_tag=tag))
    return reports


# ---------------------------------------------------------------------------
# rendering

def _round(value: float, decimals: int) -> str:
    q = Decimal(1).scaleb(-decimals)
    return str(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_EVEN))


def render(
    report: EvalReport | list[EvalReport],
    format: str = "text_table",
    decimals: int = 3,
) -> str:
    """Render one report or a list of slice reports.

    ``text_table`` mirrors the usual layout (rows ¬Def./Def., columns
    Prec./Rec./F1/Support/Acc., accuracy printed on the Def. row); values
    are rounded half-even at render time only.
    """
    reports = report if isinstance(report, list) else [report]
    if format == "text_table":
        return "\n\n".join(_render_text(r, decimals) for r in reports)
    if format == "json":
        # json carries exact values so it round-trips; rounding is a
        # text/csv display concern only
        payload = [_report_dict(r) for r in reports]
        return json.dumps(payload[0] if not isinstance(report, list) else payload, indent=2)
    if format == "csv":
        return _render_csv(reports, decimals)
    raise DatasetError(f"unknown render format {format!r}")


def _render_text(report: EvalReport, decimals: int) -> str:
    header = ["", "Prec.", "Rec.", "F1", "Support", "Acc."]
    rows = [header]
    for cls in (CLASS_NOT_DEF, CLASS_DEF):
        m = report.per_class[cls]
        acc = _round(report.accuracy, decimals) if cls == CLASS_DEF else ""
        rows.append(
            [
                _ROW_LABELS[cls],
                _round(m.precision, decimals),
                _round(m.recall, decimals),
                _round(m.f1, decimals),
                str(m.support),
                acc,
            ]
        )
    rows.append(
        [
            "macro",
            _round(report.macro["precision"], decimals),
            _round(report.macro["recall"], decimals),
            _round(report.macro["f1"], decimals),
            "",
            "",
        ]
    )
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    lines = []
    if report.slice_tag:
        lines.append(f"slice: {report.slice_tag}")
    for row in rows:
        line = "  ".join(cell.ljust(width) for cell, width in zip(row, widths))
        lines.append(line.rstrip())
    degenerate = sorted(
        f"{cls}.{name}"
        for cls, m in report.per_class.items()
        for name in m.degenerate
    )
    if degenerate:
        lines.append("degenerate (0/0 reported as 0.0): " + ", ".join(degenerate))
    return "\n".join(lines)


def _report_dict(report: EvalReport, decimals: int | None = None) -> dict:
    def num(x: float):
        return float(_round(x, decimals)) if decimals is not None else x

    return {
        "slice": report.slice_tag,
        "accuracy": num(report.accuracy),
        "classes": {
            cls: {
                "precision": num(m.precision),
                "recall": num(m.recall),
                "f1": num(m.f1),
                "support": m.support,
                "degenerate": list(m.degenerate),
            }
            for cls, m in report.per_class.items()
        },
        "macro": {k: num(v) for k, v in report.macro.items()},
        "confusion": {
            "tp": report.confusion.tp,
            "fp": report.confusion.fp,
            "tn": report.confusion.tn,
            "fn": report.confusion.fn,
        },
    }


def report_from_dict(data: dict) -> EvalReport:
    """Inverse of the json rendering, for the `report` CLI subcommand."""
    try:
        cm = ConfusionMatrix(**{k: int(v) for k, v in data["confusion"].items()})
        per_class = {
            cls: ClassMetrics(
                precision=float(c["precision"]),
                recall=float(c["recall"]),
                f1=float(c["f1"]),
                support=int(c["support"]),
                degenerate=tuple(c.get("degenerate", ())),
            )
            for cls, c in data["classes"].items()
        }
        return EvalReport(
            accuracy=float(data["accuracy"]),
            per_class=per_class,
            confusion=cm,
            macro={k: float(v) for k, v in data["macro"].items()},
            slice_tag=data.get("slice"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed report object: {exc}") from exc


def _render_csv(reports: list[EvalReport], decimals: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["slice", "class", "precision", "recall", "f1", "support", "accuracy"])
    for report in reports:
        for cls in (CLASS_NOT_DEF, CLASS_DEF):
            m = report.per_class[cls]
            writer.writerow(
                [
                    report.slice_tag or "",
                    cls,
                    _round(m.precision, decimals),
                    _round(m.recall, decimals),
                    _round(m.f1, decimals),
                    m.support,
                    _round(report.accuracy, decimals),
                ]
            )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# file loading for the CLI

def load_gold(path) -> dict[str, int]:
    gold: dict[str, int] = {}
    for lineno, obj in read_jsonl(path):
        for key in ("id", "label"):
            if key not in obj:
                raise SchemaError(f"{path}:{lineno}: missing key {key!r}")
        if obj["label"] not in (0, 1):
            raise SchemaError(f"{path}:{lineno}: label must be 0 or 1")
        sid = str(obj["id"])
        if sid in gold:
            raise SchemaError(f"{path}:{lineno}: duplicate gold id {sid!r}")
        gold[sid] = int(obj["label"])
    return gold


def load_predictions(path) -> list[dict]:
    preds = []
    for lineno, obj in read_jsonl(path):
        for key in ("id", "label"):
            if key not in obj:
                raise SchemaError(f"{path}:{lineno}: missing key {key!r}")
        if obj["label"] not in (0, 1):
            raise SchemaError(f"{path}:{lineno}: label must be 0 or 1")
        preds.append(obj)
    return preds


def load_slices(path) -> dict[str, str]:
    slices: dict[str, str] = {}
    for lineno, obj in read_jsonl(path):
        for key in ("id", "slice"):
            if key not in obj:
                raise SchemaError(f"{path}:{lineno}: missing key {key!r}")
        slices[str(obj["id"])] = str(obj["slice"])
    return slices
