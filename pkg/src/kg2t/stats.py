"""Judgement analysis: rater filtering, Likert aggregation, winner counting,
correlations, paired t-test, Shapiro-Wilk, Fisher's exact test and the
error-association contingency tables.

Fisher's exact p is two-sided by the probability-mass rule (sum of all
margin-preserving tables whose probability does not exceed the observed
one), computed with exact rational arithmetic; r x c tables are fully
enumerated under a budget.  Shapiro-Wilk follows the standard approximation
for 3 <= n <= 5000.
"""

from __future__ import annotations

import csv
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from scipy.special import ndtri

LIKERT_LABELS = ("very bad", "bad", "neutral", "good", "very good")
_NUMERIC = {label: i + 1 for i, label in enumerate(LIKERT_LABELS)}

POSITIVE, NEUTRAL, NEGATIVE = "positive", "neutral", "negative"

METRICS = ("quality", "naturalness")


class DegenerateSample(ValueError):
    pass


class SampleSizeOutOfRange(ValueError):
    pass


class TableTooLarge(ValueError):
    pass


class EmptyInput(ValueError):
    pass


class JoinMismatch(ValueError):
    pass


def to_numeric(label: str) -> int:
    """very bad -> 1 ... very good -> 5."""
    try:
        return _NUMERIC[label]
    except KeyError:
        raise ValueError(f"unknown Likert label {label!r}") from None


def squash(label: str) -> str:
    """Collapse the 5-point scale to positive / neutral / negative."""
    value = to_numeric(label)
    if value >= 4:
        return POSITIVE
    if value <= 2:
        return NEGATIVE
    return NEUTRAL


@dataclass
class Judgement:
    rater_id: str
    text_id: str
    source: str
    quality: str
    naturalness: str
    is_attention_check: bool = False
    sequence_index: int = 0

    def label(self, metric: str) -> str:
        return self.quality if metric == "quality" else self.naturalness


JUDGEMENT_COLUMNS = (
    "rater_id", "text_id", "source", "quality_label", "naturalness_label",
    "is_attention_check", "sequence_index",
)


def write_judgements_csv(path, judgements) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(JUDGEMENT_COLUMNS)
        for j in judgements:
            writer.writerow([
                j.rater_id, j.text_id, j.source, j.quality, j.naturalness,
                "true" if j.is_attention_check else "false", j.sequence_index,
            ])


def read_judgements_csv(path) -> list[Judgement]:
    judgements = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            judgements.append(Judgement(
                rater_id=row["rater_id"],
                text_id=row["text_id"],
                source=row["source"],
                quality=row["quality_label"],
                naturalness=row["naturalness_label"],
                is_attention_check=row["is_attention_check"].strip().lower() == "true",
                sequence_index=int(row["sequence_index"]),
            ))
    return judgements


@dataclass
class FilterReport:
    failed_check: list[str] = field(default_factory=list)
    constant_tail: list[str] = field(default_factory=list)

    @property
    def excluded(self):
        return sorted(set(self.failed_check) | set(self.constant_tail))


def filter_raters(judgements, checks, exclude_constant_tail=True):
    """Drop judgements from raters who failed an attention check.

    ``checks`` maps attention-check text_ids to the expected
    (quality, naturalness) label pair.  Raters with more than 10 judgements
    whose quality AND naturalness never vary from the 11th judgement on are
    flagged as well (and excluded unless exclude_constant_tail is False);
    a single post-10th judgement is not enough to flag.
    """
    by_rater: dict[str, list[Judgement]] = defaultdict(list)
    for j in judgements:
        by_rater[j.rater_id].append(j)

    report = FilterReport()
    excluded = set()
    for rater, items in by_rater.items():
        for j in items:
            if j.is_attention_check and j.text_id in checks:
                expected_q, expected_n = checks[j.text_id]
                if (j.quality, j.naturalness) != (expected_q, expected_n):
                    report.failed_check.append(rater)
                    excluded.add(rater)
                    break
    for rater, items in by_rater.items():
        ordered = sorted(items, key=lambda j: j.sequence_index)
        tail = [j for j in ordered if j.sequence_index >= 11]
        if len(ordered) > 10 and len(tail) >= 2:
            if len({j.quality for j in tail}) == 1 and len({j.naturalness for j in tail}) == 1:
                report.constant_tail.append(rater)
                if exclude_constant_tail:
                    excluded.add(rater)
    kept = [j for j in judgements if j.rater_id not in excluded]
    return kept, report


def _rated(judgements):
    return [j for j in judgements if not j.is_attention_check]


@dataclass
class SourceSummary:
    n_ratings: int
    avg_quality: float
    avg_naturalness: float
    quality_pct: dict
    naturalness_pct: dict


def aggregate_summary(judgements) -> dict[str, SourceSummary]:
    """Per-source average quality/naturalness and label percentage distributions."""
    rated = _rated(judgements)
    if not rated:
        raise EmptyInput("no judgements to aggregate")
    by_source: dict[str, list[Judgement]] = defaultdict(list)
    for j in rated:
        by_source[j.source].append(j)
    summary = {}
    for source, items in by_source.items():
        n = len(items)
        q_counts = Counter(j.quality for j in items)
        n_counts = Counter(j.naturalness for j in items)
        summary[source] = SourceSummary(
            n_ratings=n,
            avg_quality=sum(to_numeric(j.quality) for j in items) / n,
            avg_naturalness=sum(to_numeric(j.naturalness) for j in items) / n,
            quality_pct={label: 100.0 * q_counts[label] / n for label in LIKERT_LABELS},
            naturalness_pct={label: 100.0 * n_counts[label] / n for label in LIKERT_LABELS},
        )
    return summary


@dataclass
class TextStats:
    source: str
    n: int
    avg: dict  # metric -> mean numeric rating
    negative: dict  # metric -> count of bad/very-bad raters
    squashed: dict  # metric -> Counter of positive/neutral/negative


def per_text_stats(judgements) -> dict[str, TextStats]:
    by_text: dict[str, list[Judgement]] = defaultdict(list)
    for j in _rated(judgements):
        by_text[j.text_id].append(j)
    stats = {}
    for text_id, items in by_text.items():
        avg, negative, squashed = {}, {}, {}
        for metric in METRICS:
            labels = [j.label(metric) for j in items]
            avg[metric] = sum(to_numeric(l) for l in labels) / len(labels)
            negative[metric] = sum(1 for l in labels if to_numeric(l) <= 2)
            squashed[metric] = Counter(squash(l) for l in labels)
        stats[text_id] = TextStats(items[0].source, len(items), avg, negative, squashed)
    return stats


_SNIPPET_RE = re.compile(r"(\d+)$")


def snippet_id(text_id: str) -> str:
    """Snippet key shared by the TT/TML/TH variants of one graph snippet
    (trailing digits of the text id)."""
    match = _SNIPPET_RE.search(text_id)
    return match.group(1).lstrip("0") or "0" if match else text_id


def snippet_averages(text_stats, metric: str) -> dict[str, dict[str, float]]:
    table: dict[str, dict[str, float]] = defaultdict(dict)
    for text_id, stats in text_stats.items():
        table[snippet_id(text_id)][stats.source] = stats.avg[metric]
    return dict(table)


def count_winners(snippet_to_source_avg, tolerance=1e-9) -> Counter:
    """Per-source win counts over snippets with >= 2 sources; ties all score."""
    wins: Counter = Counter()
    for _snippet, avgs in snippet_to_source_avg.items():
        if len(avgs) < 2:
            continue
        best = max(avgs.values())
        for source, value in avgs.items():
            if value >= best - tolerance:
                wins[source] += 1
    return wins


def flag_negative_texts(judgements, threshold: int = 2) -> dict[str, Counter]:
    """Per metric, per source: number of texts rated bad/very bad by at
    least ``threshold`` raters."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    stats = per_text_stats(judgements)
    out = {metric: Counter() for metric in METRICS}
    for text_stats in stats.values():
        for metric in METRICS:
            if text_stats.negative[metric] >= threshold:
                out[metric][text_stats.source] += 1
    return out


def pearson(x, y) -> float:
    """Sample Pearson correlation."""
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need two samples of equal length >= 2")
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sx = math.sqrt(sum(v * v for v in dx))
    sy = math.sqrt(sum(v * v for v in dy))
    if sx == 0 or sy == 0:
        raise DegenerateSample("constant vector")
    return sum(a * b for a, b in zip(dx, dy)) / (sx * sy)


@dataclass
class TestResult:
    statistic: float
    p_value: float
    detail: dict = field(default_factory=dict)


def _betainc(a: float, b: float, x: float) -> float:
    from scipy.special import betainc
    return float(betainc(a, b, x))


_P_FLOOR = 5e-324  # keep p in (0, 1] even when erfc/betainc underflow


def paired_t_test(x, y) -> TestResult:
    """Two-sided paired t-test on the differences x - y (Student t, n-1 df)."""
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need two paired samples of equal length >= 2")
    diffs = [a - b for a, b in zip(x, y)]
    n = len(diffs)
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0:
        raise DegenerateSample("zero-variance differences")
    t = mean / math.sqrt(var / n)
    df = n - 1
    p = _betainc(df / 2.0, 0.5, df / (df + t * t))
    return TestResult(statistic=t, p_value=min(max(p, _P_FLOOR), 1.0), detail={"df": df})


def _sw_poly(coeffs, x):
    # coefficients from constant term upward
    return sum(c * x ** i for i, c in enumerate(coeffs))


def shapiro_wilk(x) -> TestResult:
    """Shapiro-Wilk normality test via the standard approximation (3<=n<=5000)."""
    n = len(x)
    if n < 3 or n > 5000:
        raise SampleSizeOutOfRange(f"sample size {n} outside [3, 5000]")
    y = sorted(float(v) for v in x)
    if y[0] == y[-1]:
        raise DegenerateSample("all values identical")

    m = [float(ndtri((i - 0.375) / (n + 0.25))) for i in range(1, n + 1)]
    ssq = sum(v * v for v in m)
    rsn = 1.0 / math.sqrt(n)
    a = [0.0] * n
    if n == 3:
        a[0], a[2] = -math.sqrt(0.5), math.sqrt(0.5)
    else:
        a_n = m[-1] / math.sqrt(ssq) + _sw_poly(
            [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056], rsn)
        if n <= 5:
            phi = (ssq - 2 * m[-1] ** 2) / (1 - 2 * a_n ** 2)
            for i in range(1, n - 1):
                a[i] = m[i] / math.sqrt(phi)
            a[-1], a[0] = a_n, -a_n
        else:
            a_n1 = m[-2] / math.sqrt(ssq) + _sw_poly(
                [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633], rsn)
            phi = (ssq - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * a_n ** 2 - 2 * a_n1 ** 2)
            for i in range(2, n - 2):
                a[i] = m[i] / math.sqrt(phi)
            a[-1], a[-2], a[0], a[1] = a_n, a_n1, -a_n, -a_n1

    mean = sum(y) / n
    denom = sum((v - mean) ** 2 for v in y)
    w = sum(ai * yi for ai, yi in zip(a, y)) ** 2 / denom
    w = min(w, 1.0)

    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        p = min(max(p, _P_FLOOR), 1.0)
        return TestResult(statistic=w, p_value=p, detail={"n": n})
    if n <= 11:
        gamma = -2.273 + 0.459 * n
        if gamma - math.log(1 - w) <= 0:
            return TestResult(statistic=w, p_value=_P_FLOOR, detail={"n": n})
        lw = -math.log(gamma - math.log(1 - w))
        mu = _sw_poly([0.5440, -0.39978, 0.025054, -0.0006714], n)
        sigma = math.exp(_sw_poly([1.3822, -0.77857, 0.062767, -0.0020322], n))
    else:
        lw = math.log(1 - w)
        ln_n = math.log(n)
        mu = _sw_poly([-1.5861, -0.31082, -0.083751, 0.0038915], ln_n)
        sigma = math.exp(_sw_poly([-0.4803, -0.082676, 0.0030302], ln_n))
    z = (lw - mu) / sigma
    p = 0.5 * math.erfc(z / math.sqrt(2.0))
    return TestResult(statistic=w, p_value=min(max(p, _P_FLOOR), 1.0), detail={"n": n})


@dataclass
class ContingencyTable:
    counts: list[list[int]]
    row_labels: list[str] = field(default_factory=list)
    col_labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.counts) < 2 or any(len(row) < 2 for row in self.counts):
            raise ValueError("contingency table must be at least 2x2")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("counts must be non-negative")
        if not self.row_labels:
            self.row_labels = [f"r{i}" for i in range(len(self.counts))]
        if not self.col_labels:
            self.col_labels = [f"c{j}" for j in range(len(self.counts[0]))]


def _table_counts(table) -> list[list[int]]:
    if isinstance(table, ContingencyTable):
        return table.counts
    return [list(row) for row in table]


def _fisher_2x2(counts) -> Fraction:
    (a, b), (c, d) = counts
    r1, r2 = a + b, c + d
    c1 = a + c
    n = r1 + r2
    denom = comb(n, c1)
    lo, hi = max(0, c1 - r2), min(r1, c1)
    p_obs = Fraction(comb(r1, a) * comb(r2, c1 - a), denom)
    total = Fraction(0)
    for k in range(lo, hi + 1):
        p = Fraction(comb(r1, k) * comb(r2, c1 - k), denom)
        if p <= p_obs:
            total += p
    return total


def _fisher_rxc(counts, max_tables: int) -> Fraction:
    row_sums = [sum(row) for row in counts]
    col_sums = [sum(col) for col in zip(*counts)]
    n = sum(row_sums)
    margin_num = 1
    for s in row_sums:
        margin_num *= factorial(s)
    for s in col_sums:
        margin_num *= factorial(s)
    n_fact = factorial(n)

    def table_prob(cells) -> Fraction:
        denom = n_fact
        for v in cells:
            denom *= factorial(v)
        return Fraction(margin_num, denom)

    p_obs = table_prob([v for row in counts for v in row])

    rows, cols = len(counts), len(counts[0])
    total = Fraction(0)
    seen = 0
    col_rem = list(col_sums)
    cells: list[int] = []

    def fill_row(r: int, j: int, row_rem: int):
        nonlocal total, seen
        if j == cols - 1:
            if row_rem > col_rem[j]:
                return
            cells.append(row_rem)
            col_rem[j] -= row_rem
            if r == rows - 1:
                seen += 1
                if seen > max_tables:
                    raise TableTooLarge(f"more than {max_tables} tables to enumerate")
                p = table_prob(cells)
                if p <= p_obs:
                    total += p
            else:
                fill_row(r + 1, 0, row_sums[r + 1])
            col_rem[j] += row_rem
            cells.pop()
            return
        for v in range(min(row_rem, col_rem[j]) + 1):
            cells.append(v)
            col_rem[j] -= v
            fill_row(r, j + 1, row_rem - v)
            col_rem[j] += v
            cells.pop()

    if rows == 1:
        return Fraction(1)
    fill_row(0, 0, row_sums[0])
    return total


def fisher_exact(table, max_tables: int = 200_000) -> TestResult:
    """Two-sided Fisher's exact test by the probability-mass rule.

    Exact rational arithmetic throughout; r x c tables are fully enumerated
    (TableTooLarge beyond ``max_tables``).  Degenerate margins give p = 1.
    """
    counts = _table_counts(table)
    rows, cols = len(counts), len(counts[0])
    if any(len(row) != cols for row in counts):
        raise ValueError("ragged table")
    if sum(sum(row) for row in counts) == 0:
        raise ValueError("empty table")
    if rows == 2 and cols == 2:
        p = _fisher_2x2(counts)
    else:
        p = _fisher_rxc(counts, max_tables)
    p = min(p, Fraction(1))
    return TestResult(statistic=float(p), p_value=float(p), detail={"shape": (rows, cols)})


def text_verdicts(judgements, metric: str, mode: str = "majority") -> dict[str, str]:
    """Per text: "good" / "bad" by squashed plurality (or mean >= 3.5 with
    mode="mean"); texts with no verdict (neutral/tied) are omitted."""
    verdicts = {}
    for text_id, stats in per_text_stats(judgements).items():
        if mode == "mean":
            verdicts[text_id] = "good" if stats.avg[metric] >= 3.5 else "bad"
            continue
        counts = stats.squashed[metric]
        pos, neg, neu = counts[POSITIVE], counts[NEGATIVE], counts[NEUTRAL]
        if pos > neg and pos > neu:
            verdicts[text_id] = "good"
        elif neg > pos and neg > neu:
            verdicts[text_id] = "bad"
    return verdicts


def association_tables(judgements, faith_rows=None, grammar_rows=None,
                       mode: str = "majority", allow_missing: bool = False):
    """Build the error-association contingency tables of the analysis.

    faith_rows: dicts with text_id, source, category (faithfulness CSV).
    grammar_rows: dicts with text_id, category, verified (verification CSV).
    Returns a list of (name, metric, ContingencyTable).  Raises JoinMismatch
    when error rows reference texts absent from the judgements.
    """
    judged_texts = {j.text_id for j in _rated(judgements)}
    tables = []

    def check_join(rows, label):
        missing = sorted({r["text_id"] for r in rows} - judged_texts)
        if missing and not allow_missing:
            raise JoinMismatch(f"{label} rows reference unjudged texts: {missing[:5]}")

    if faith_rows:
        check_join(faith_rows, "faithfulness")
        by_source: dict[str, list[dict]] = defaultdict(list)
        for row in faith_rows:
            by_source[row["source"]].append(row)
        for metric in METRICS:
            verdicts = text_verdicts(judgements, metric, mode=mode)
            for source, rows in sorted(by_source.items()):
                cells: dict[str, Counter] = defaultdict(Counter)
                for row in rows:
                    verdict = verdicts.get(row["text_id"])
                    if verdict:
                        cells[str(row["category"])][verdict] += 1
                categories = sorted(cells)
                if len(categories) < 2:
                    continue
                tables.append((
                    f"slot-category:{source}", metric,
                    ContingencyTable(
                        [[cells[c]["good"], cells[c]["bad"]] for c in categories],
                        row_labels=[f"category {c}" for c in categories],
                        col_labels=["good", "bad"],
                    ),
                ))

    if grammar_rows:
        check_join(grammar_rows, "grammar")
        verified = [r for r in grammar_rows if str(r.get("verified", "true")).lower() == "true"]
        error_texts: dict[str, set] = defaultdict(set)
        text_categories: dict[str, set] = defaultdict(set)
        source_of = {j.text_id: j.source for j in _rated(judgements)}
        for row in verified:
            text_id = row["text_id"]
            source = source_of.get(text_id)
            if source is None:
                continue
            error_texts[source].add(text_id)
            text_categories[text_id].add(row["category"])
        for metric in METRICS:
            verdicts = text_verdicts(judgements, metric, mode=mode)
            for source in sorted(error_texts):
                with_err = Counter()
                without_err = Counter()
                for text_id, text_source in source_of.items():
                    if text_source != source:
                        continue
                    verdict = verdicts.get(text_id)
                    if not verdict:
                        continue
                    (with_err if text_id in error_texts[source] else without_err)[verdict] += 1
                if not (with_err and without_err):
                    continue
                tables.append((
                    f"has-grammar-error:{source}", metric,
                    ContingencyTable(
                        [[with_err["good"], with_err["bad"]],
                         [without_err["good"], without_err["bad"]]],
                        row_labels=["with errors", "without errors"],
                        col_labels=["good", "bad"],
                    ),
                ))
                cat_cells: dict[str, Counter] = defaultdict(Counter)
                for text_id in error_texts[source]:
                    verdict = verdicts.get(text_id)
                    if not verdict:
                        continue
                    for category in text_categories[text_id]:
                        cat_cells[category][verdict] += 1
                categories = sorted(cat_cells)
                if len(categories) >= 2:
                    tables.append((
                        f"grammar-category:{source}", metric,
                        ContingencyTable(
                            [[cat_cells[c]["good"], cat_cells[c]["bad"]] for c in categories],
                            row_labels=categories,
                            col_labels=["good", "bad"],
                        ),
                    ))
    return tables


def build_report(judgements, checks=None, faith_rows=None, grammar_rows=None,
                 negative_threshold: int = 2, exclude_constant_tail=True) -> dict:
    """Run the full analysis and return a JSON-serializable report."""
    if checks:
        kept, filter_report = filter_raters(judgements, checks, exclude_constant_tail)
    else:
        kept, filter_report = list(judgements), FilterReport()

    if not _rated(kept):
        raise EmptyInput(
            f"no judgements left to analyze ({len(filter_report.excluded)} of "
            f"{len({j.rater_id for j in judgements})} raters excluded)")
    summary = aggregate_summary(kept)
    text_stats = per_text_stats(kept)

    winners = {}
    for metric in METRICS:
        winners[metric] = dict(count_winners(snippet_averages(text_stats, metric)))

    negatives = {m: dict(c) for m, c in flag_negative_texts(kept, negative_threshold).items()}

    correlations = {}
    by_source: dict[str, list[Judgement]] = defaultdict(list)
    for j in _rated(kept):
        by_source[j.source].append(j)
    for source, items in sorted(by_source.items()):
        try:
            correlations[source] = pearson(
                [to_numeric(j.quality) for j in items],
                [to_numeric(j.naturalness) for j in items],
            )
        except (DegenerateSample, ValueError):
            correlations[source] = None

    t_tests = {}
    for metric in METRICS:
        snippets = snippet_averages(text_stats, metric)
        paired = [(avgs["TT"], avgs["TML"]) for avgs in snippets.values()
                  if "TT" in avgs and "TML" in avgs]
        if len(paired) >= 2:
            try:
                result = paired_t_test([p[0] for p in paired], [p[1] for p in paired])
                t_tests[metric] = {"t": result.statistic, "p": result.p_value,
                                   "df": result.detail["df"], "pairs": len(paired)}
            except DegenerateSample:
                t_tests[metric] = None

    normality = {}
    for metric in METRICS:
        for source, items in sorted(by_source.items()):
            values = [stats.avg[metric] for tid, stats in text_stats.items()
                      if stats.source == source]
            key = f"{source}:{metric}"
            try:
                result = shapiro_wilk(values)
                normality[key] = {"W": result.statistic, "p": result.p_value}
            except (SampleSizeOutOfRange, DegenerateSample):
                normality[key] = None

    associations = []
    for name, metric, table in association_tables(kept, faith_rows, grammar_rows):
        result = fisher_exact(table)
        associations.append({
            "table": name, "metric": metric, "counts": table.counts,
            "rows": table.row_labels, "cols": table.col_labels,
            "fisher_p": result.p_value,
        })

    under_three = sorted(tid for tid, s in text_stats.items() if s.n < 3)

    return {
        "raters": {
            "total": len({j.rater_id for j in judgements}),
            "kept": len({j.rater_id for j in kept}),
            "failed_attention_check": sorted(filter_report.failed_check),
            "constant_after_tenth": sorted(filter_report.constant_tail),
        },
        "ratings_per_source": {s: summary[s].n_ratings for s in sorted(summary)},
        "summary": {
            source: {
                "avg_quality": round(row.avg_quality, 4),
                "avg_naturalness": round(row.avg_naturalness, 4),
                "quality_pct": {k: round(v, 1) for k, v in row.quality_pct.items()},
                "naturalness_pct": {k: round(v, 1) for k, v in row.naturalness_pct.items()},
            }
            for source, row in sorted(summary.items())
        },
        "winners": winners,
        "negative_texts": {"threshold": negative_threshold, **negatives},
        "quality_naturalness_correlation": correlations,
        "paired_t_tt_vs_tml": t_tests,
        "shapiro_wilk": normality,
        "error_associations": associations,
        "texts_below_three_judgements": under_three,
        "notes": [
            "Likert-to-numeric conversion treats the scale as equidistant; "
            "averages and t-tests built on it are approximate and to be "
            "read with caution.",
        ],
    }
