"""Success rates, Pearson correlation, Cohen's kappa, and report emission.

Rates accumulate as exact rationals and only round at presentation time
(one-decimal percents, three-decimal mean scores), so reports are
byte-stable across runs.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .judge import Judgment


def pearson(xs, ys) -> float:
    """Product-moment correlation of two equal-length numeric sequences."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError(f"need at least 2 paired samples, got {len(xs)}")
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = sum(d * d for d in dx)
    syy = sum(d * d for d in dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance input; correlation undefined")
    return sum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)


def kappa_exact(a, b, classes) -> Fraction:
    """Cohen's kappa as an exact rational from the confusion matrix."""
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        raise ValueError("need at least 1 paired label")
    classes = list(classes)
    idx = {c: i for i, c in enumerate(classes)}
    for label in a + b:
        if label not in idx:
            raise ValueError(f"label {label!r} outside classes {classes}")
    k = len(classes)
    matrix = [[0] * k for _ in range(k)]
    for la, lb in zip(a, b):
        matrix[idx[la]][idx[lb]] += 1
    n = len(a)
    p_o = Fraction(sum(matrix[i][i] for i in range(k)), n)
    row = [sum(matrix[i][j] for j in range(k)) for i in range(k)]
    col = [sum(matrix[i][j] for i in range(k)) for j in range(k)]
    p_e = Fraction(sum(row[i] * col[i] for i in range(k)), n * n)
    if p_e == 1:
        # both raters use a single identical label; observed agreement is 1
        return Fraction(1)
    return (p_o - p_e) / (1 - p_e)


def cohen_kappa(a, b, classes) -> float:
    return float(kappa_exact(a, b, classes))


# -- tables -------------------------------------------------------------------


@dataclass
class GroupStats:
    successes: int
    count: int
    score_total: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.successes, self.count)

    @property
    def mean_score(self) -> Fraction:
        return Fraction(self.score_total, self.count)


def _domain_of(task_id: str) -> str:
    return task_id.split("_", 1)[0]


def success_table(judgments: list[Judgment], group_by: str) -> dict:
    """Group success rates and mean scores, keyed by model, domain, or both."""
    if not judgments:
        raise ValueError("cannot tabulate an empty judgment list")
    if group_by not in ("model", "domain", "model_domain"):
        raise ValueError(f"group_by must be model, domain or model_domain, got {group_by!r}")
    groups: dict = {}
    for j in judgments:
        if group_by == "model":
            key = j.model_name
        elif group_by == "domain":
            key = _domain_of(j.task_id)
        else:
            key = (j.model_name, _domain_of(j.task_id))
        g = groups.get(key)
        if g is None:
            g = groups[key] = GroupStats(0, 0, 0)
        g.count += 1
        g.successes += 1 if j.success else 0
        g.score_total += j.score
    return dict(sorted(groups.items(), key=lambda kv: str(kv[0])))


def rate_percent(rate: Fraction) -> float:
    """Exact rate -> percent rounded half-up to one decimal."""
    scaled = rate * 1000  # tenths of a percent
    rounded = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    return rounded / 10.0


def mean_score_3dp(mean: Fraction) -> float:
    scaled = mean * 1000
    rounded = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    return rounded / 1000.0


# -- agreement report ----------------------------------------------------------


@dataclass
class AgreementReport:
    per_model: dict
    per_domain: dict
    per_model_domain: dict
    pearson_r: float | None
    kappa_binary: float | None
    kappa_5class: float | None
    n: int
    raters: list[str] = field(default_factory=list)


def pair_scores(a: list[Judgment], b: list[Judgment]) -> tuple[list[int], list[int]]:
    """Scores of both rater populations on their shared (task, model) items."""
    amap = {(j.task_id, j.model_name): j for j in a}
    bmap = {(j.task_id, j.model_name): j for j in b}
    keys = sorted(set(amap) & set(bmap))
    return [amap[k].score for k in keys], [bmap[k].score for k in keys]


def build_report(judgments: list[Judgment], human: list[Judgment] | None = None) -> AgreementReport:
    if not judgments:
        raise ValueError("cannot report on an empty judgment list")
    pearson_r = kappa_binary = kappa_5 = None
    n = 0
    raters = sorted({j.rater for j in judgments})
    if human:
        raters += sorted({j.rater for j in human})
        xs, ys = pair_scores(judgments, human)
        n = len(xs)
        if n == 0:
            raise ValueError("no overlapping (task, model) items between rater populations")
        if n >= 2:
            try:
                pearson_r = pearson(xs, ys)
            except ValueError:
                pearson_r = None  # zero-variance pairing; r undefined
        kappa_binary = cohen_kappa(
            [is_s >= 4 for is_s in xs], [is_s >= 4 for is_s in ys], classes=[False, True]
        )
        kappa_5 = cohen_kappa(xs, ys, classes=[1, 2, 3, 4, 5])
    return AgreementReport(
        per_model=success_table(judgments, "model"),
        per_domain=success_table(judgments, "domain"),
        per_model_domain=success_table(judgments, "model_domain"),
        pearson_r=pearson_r,
        kappa_binary=kappa_binary,
        kappa_5class=kappa_5,
        n=n,
        raters=raters,
    )


def report_as_dict(report: AgreementReport) -> dict:
    def table(groups: dict) -> list[dict]:
        rows = []
        for key, g in groups.items():
            name = key if isinstance(key, str) else "/".join(key)
            rows.append(
                {
                    "group": name,
                    "successes": g.successes,
                    "count": g.count,
                    "success_rate_pct": rate_percent(g.rate),
                    "mean_score": mean_score_3dp(g.mean_score),
                }
            )
        return rows

    return {
        "per_model": table(report.per_model),
        "per_domain": table(report.per_domain),
        "per_model_domain": table(report.per_model_domain),
        "agreement": {
            "pearson_r": report.pearson_r,
            "kappa_binary": report.kappa_binary,
            "kappa_5class": report.kappa_5class,
            "paired_n": report.n,
        },
        "raters": report.raters,
    }


def _markdown(doc: dict) -> str:
    out = ["# Evaluation report", ""]
    for title, key in (("Per model", "per_model"), ("Per domain", "per_domain"), ("Per model x domain", "per_model_domain")):
        out += [f"## {title}", "", "| group | successes | count | success rate | mean score |", "|---|---|---|---|---|"]
        for row in doc[key]:
            out.append(
                f"| {row['group']} | {row['successes']} | {row['count']} "
                f"| {row['success_rate_pct']:.1f}% | {row['mean_score']:.3f} |"
            )
        out.append("")
    agg = doc["agreement"]
    out += ["## Rater agreement", ""]
    if agg["paired_n"]:
        r = "n/a (zero variance)" if agg["pearson_r"] is None else f"{agg['pearson_r']:.6f}"
        out += [
            f"- paired items: {agg['paired_n']}",
            f"- Pearson r: {r}",
            f"- Cohen's kappa (binary success): {agg['kappa_binary']:.6f}",
            f"- Cohen's kappa (5-class scores): {agg['kappa_5class']:.6f}",
            "",
        ]
    else:
        out += ["- single rater population; no agreement statistics", ""]
    return "\n".join(out)


def _csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "group", "successes", "count", "success_rate_pct", "mean_score"])
    for key in ("per_model", "per_domain", "per_model_domain"):
        for row in doc[key]:
            w.writerow([key, row["group"], row["successes"], row["count"],
                        f"{row['success_rate_pct']:.1f}", f"{row['mean_score']:.3f}"])
    agg = doc["agreement"]
    w.writerow([])
    w.writerow(["agreement", "pearson_r", "" if agg["pearson_r"] is None else repr(agg["pearson_r"])])
    w.writerow(["agreement", "kappa_binary", "" if agg["kappa_binary"] is None else repr(agg["kappa_binary"])])
    w.writerow(["agreement", "kappa_5class", "" if agg["kappa_5class"] is None else repr(agg["kappa_5class"])])
    w.writerow(["agreement", "paired_n", agg["paired_n"]])
    return buf.getvalue()


def emit_report(report: AgreementReport, out_dir: Path | str, formats=("markdown", "csv", "json")) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = report_as_dict(report)
    written = {}
    for fmt in formats:
        if fmt == "json":
            path = out_dir / "report.json"
            path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        elif fmt == "markdown":
            path = out_dir / "report.md"
            path.write_text(_markdown(doc), encoding="utf-8")
        elif fmt == "csv":
            path = out_dir / "report.csv"
            path.write_text(_csv(doc), encoding="utf-8")
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        written[fmt] = path
    return written
