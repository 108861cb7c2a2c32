"""Slot-level faithfulness: dropped / hallucinated / repeated counting.

A RealizationTrace says which record slots made it into a text and which
text spans are not grounded in the record.  Traces come either from our own
generators (exact, span-accurate) or are reconstructed from a bare text by
exact value matching, in which case unmatched content spans are only
hallucination *candidates* pending manual confirmation.

Every text lands in one of four categories from (hallucinated>0, dropped>0).
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field

from .records import NAME_KEY, EntityRecord, find_slot_spans, slot_occurrences, SlotOccurrence

SOURCES = ("TT", "TML", "TH")

# properties that are realised implicitly (pronouns, typing) and therefore
# not counted as droppable content
DEFAULT_IGNORE = frozenset({"instance of", "sex or gender"})

CAT_NO_HALL_NO_DROP = 1
CAT_HALL_DROP = 2
CAT_NO_HALL_DROP = 3
CAT_HALL_NO_DROP = 4

CATEGORY_NAMES = {
    CAT_NO_HALL_NO_DROP: "no hallucination, no dropping",
    CAT_HALL_DROP: "hallucination, dropping",
    CAT_NO_HALL_DROP: "no hallucination, dropping",
    CAT_HALL_NO_DROP: "hallucination, no dropping",
}

_STOPWORDS = frozenset(
    """a an the and or but of in on at to for with from by as into over under
    is are was were be been being has have had do does did he she they it him
    her them his their its this that these those who whom which what when
    where while not no nor so than then there here also only both all any
    each after before during between about against né née
    born died dies played plays managed manages married worked works served
    serves studied joined signed won became becomes retired known""".split()
)

_TOKEN_RE = re.compile(r"[^\W_]+(?:[''-][^\W_]+)*", re.UNICODE)


@dataclass
class RealizedSlot:
    occurrence: SlotOccurrence
    span: tuple[int, int] | None = None


@dataclass
class RealizationTrace:
    realized: list[RealizedSlot] = field(default_factory=list)
    hallucinated_spans: list[tuple[tuple[int, int], str]] = field(default_factory=list)
    source: str = "TT"


@dataclass
class SlotErrorReport:
    dropped: int
    hallucinated: int
    repeated: int
    category: int


def _is_content_token(token: str) -> bool:
    if token.lower() in _STOPWORDS:
        return False
    return any(ch.isdigit() for ch in token) or len(token) >= 3


def content_spans(text: str, blocked: list[tuple[int, int]]):
    """Spans of content words outside the blocked regions, adjacent ones merged."""
    spans = []
    for match in _TOKEN_RE.finditer(text):
        start, end = match.span()
        if any(start < be and bs < end for bs, be in blocked):
            continue
        if not _is_content_token(match.group()):
            continue
        if spans and re.fullmatch(r"[\s/,&-]*", text[spans[-1][1]:start]):
            spans[-1] = (spans[-1][0], end)
        else:
            spans.append((start, end))
    return spans


def trace_realization(record: EntityRecord, text: str, internal: RealizationTrace | None = None) -> RealizationTrace:
    """Build (or validate) the realization trace of a text against its record.

    With an internal trace from one of our generators the spans are checked
    and the trace returned as-is.  Without one, the trace is reconstructed:
    exact value matches become realized slots and leftover content spans
    become hallucination candidates tagged "unmatched-content".
    """
    if internal is not None:
        for item in internal.realized:
            if item.span is not None:
                start, end = item.span
                if not (0 <= start <= end <= len(text)):
                    raise ValueError(f"realized span {item.span} outside text")
        for (start, end), _reason in internal.hallucinated_spans:
            if not (0 <= start <= end <= len(text)):
                raise ValueError(f"hallucinated span {(start, end)} outside text")
        return internal

    matched = find_slot_spans(text, record, include_name=True)
    realized = [RealizedSlot(occ, span) for span, occ in matched if occ.property != NAME_KEY]
    blocked = [span for span, _ in matched]
    candidates = content_spans(text, blocked)
    return RealizationTrace(
        realized=realized,
        hallucinated_spans=[(span, "unmatched-content") for span in candidates],
        source="TH",
    )


def count_slot_errors(trace: RealizationTrace, record: EntityRecord, ignore=DEFAULT_IGNORE) -> SlotErrorReport:
    """Count dropped, hallucinated and repeated slots for one (text, record) pair."""
    countable = {
        (occ.property, occ.index)
        for occ in slot_occurrences(record)
        if occ.property not in ignore
    }
    realized_counts: dict[tuple[str, int], int] = {}
    for item in trace.realized:
        key = (item.occurrence.property, item.occurrence.index)
        if key in countable:
            realized_counts[key] = realized_counts.get(key, 0) + 1
    dropped = len(countable) - len(realized_counts)
    hallucinated = len(trace.hallucinated_spans)
    repeated = sum(n - 1 for n in realized_counts.values())
    return SlotErrorReport(
        dropped=dropped,
        hallucinated=hallucinated,
        repeated=repeated,
        category=categorize_slot_errors(hallucinated, dropped),
    )


def categorize_slot_errors(hallucinated: int, dropped: int) -> int:
    """The 4-way slot-error category, a pure function of the two signs."""
    if hallucinated > 0:
        return CAT_HALL_DROP if dropped > 0 else CAT_HALL_NO_DROP
    return CAT_NO_HALL_DROP if dropped > 0 else CAT_NO_HALL_NO_DROP


FAITHFULNESS_COLUMNS = ("text_id", "source", "dropped", "hallucinated", "repeated", "category")


def write_faithfulness_csv(path, rows) -> None:
    """rows: (text_id, source, SlotErrorReport) triples."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(FAITHFULNESS_COLUMNS)
        for text_id, source, report in rows:
            writer.writerow([text_id, source, report.dropped, report.hallucinated,
                             report.repeated, report.category])


def read_faithfulness_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            {"text_id": row["text_id"], "source": row["source"],
             "dropped": int(row["dropped"]), "hallucinated": int(row["hallucinated"]),
             "repeated": int(row["repeated"]), "category": int(row["category"])}
            for row in csv.DictReader(fh)
        ]
