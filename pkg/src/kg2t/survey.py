"""Survey service: serve rating packages to raters, persist judgements.

Protocol rules enforced here rather than in any client: one rating per
(rater, text), at most 20 judgements per text, fewest-judged texts served
first so every text is driven toward the three-judgement floor, and one
attention-check item hidden in every package whose expected answer never
leaves the server.

The store is an append-only JSONL log replayed at startup; all mutations
run under a single lock so the cap and uniqueness checks are atomic.
"""

from __future__ import annotations

import csv
import io
import json
import random
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .stats import LIKERT_LABELS, Judgement

MAX_JUDGEMENTS_PER_TEXT = 20
MIN_JUDGEMENTS_PER_TEXT = 3

ATTENTION_CHECK_TEXT = (
    "Please select {quality} for Quality and {naturalness} for Naturalness. "
    "This is an instruction. It is not text to be evaluated."
)
CHECK_SOURCE = "CHECK"


class SizeMismatch(ValueError):
    pass


class UnknownSession(KeyError):
    pass


class NotServed(PermissionError):
    pass


class DuplicateRating(ValueError):
    pass


class CapExceeded(ValueError):
    pass


@dataclass
class SurveyItem:
    text_id: str
    display_text: str
    source: str
    is_attention_check: bool = False
    expected: tuple[str, str] | None = None

    def payload(self) -> dict:
        # rater-facing view: never exposes check metadata
        return {"text_id": self.text_id, "display_text": self.display_text}


@dataclass
class TextPackage:
    id: str
    items: list[SurveyItem] = field(default_factory=list)


def build_packages(texts, sizes, seed: int = 0) -> list[TextPackage]:
    """Split labeled texts into packages and hide one attention check in each.

    ``texts`` are (text_id, source, display_text) triples; ``sizes`` must sum
    to their number.  Deterministic for a fixed seed; reshuffles (still
    seeded) in the unlikely event a package ends up single-source.
    """
    texts = list(texts)
    if sum(sizes) != len(texts):
        raise SizeMismatch(f"sizes {sizes} sum to {sum(sizes)}, have {len(texts)} texts")
    rng = random.Random(seed)
    for attempt in range(100):
        shuffled = list(texts)
        rng.shuffle(shuffled)
        slices = []
        at = 0
        for size in sizes:
            slices.append(shuffled[at:at + size])
            at += size
        if all(len({source for _, source, _ in chunk}) > 1 for chunk in slices if len(chunk) > 1):
            break
    packages = []
    for index, chunk in enumerate(slices, start=1):
        package = TextPackage(id=f"pkg-{index}")
        package.items = [SurveyItem(text_id, display_text=text, source=source)
                         for text_id, source, text in chunk]
        expected = (rng.choice(LIKERT_LABELS), rng.choice(LIKERT_LABELS))
        check = SurveyItem(
            text_id=f"check-{package.id}",
            display_text=ATTENTION_CHECK_TEXT.format(quality=expected[0], naturalness=expected[1]),
            source=CHECK_SOURCE,
            is_attention_check=True,
            expected=expected,
        )
        package.items.insert(rng.randrange(len(package.items) + 1), check)
        packages.append(package)
    return packages


def packages_to_json(packages: list[TextPackage]) -> dict:
    return {"packages": [
        {"id": p.id, "items": [
            {"text_id": i.text_id, "display_text": i.display_text, "source": i.source,
             "is_attention_check": i.is_attention_check,
             "expected": list(i.expected) if i.expected else None}
            for i in p.items]}
        for p in packages]}


def packages_from_json(data: dict) -> list[TextPackage]:
    packages = []
    for p in data["packages"]:
        items = [SurveyItem(i["text_id"], i["display_text"], i["source"],
                            i.get("is_attention_check", False),
                            tuple(i["expected"]) if i.get("expected") else None)
                 for i in p["items"]]
        packages.append(TextPackage(id=p["id"], items=items))
    return packages


def attention_check_key(packages: list[TextPackage]) -> dict:
    return {i.text_id: i.expected for p in packages for i in p.items if i.is_attention_check}


@dataclass
class SessionState:
    session_id: str
    rater_id: str
    package_id: str
    pending: str | None = None
    completed: bool = False


class SurveyService:
    """Session handling plus the judgement store, shared by HTTP and tests."""

    def __init__(self, packages: list[TextPackage], store_path=None):
        self.packages = {p.id: p for p in packages}
        self.package_order = [p.id for p in packages]
        self.items = {i.text_id: i for p in packages for i in p.items}
        self.store_path = Path(store_path) if store_path else None
        self.lock = threading.Lock()
        self.judgements: list[dict] = []
        self.text_counts: dict[str, int] = {}
        self.rated: set[tuple[str, str]] = set()
        self.rater_sequence: dict[str, int] = {}
        self.sessions: dict[str, SessionState] = {}
        self.rater_session: dict[str, str] = {}
        self._next_package = 0
        if self.store_path and self.store_path.exists():
            self._replay()

    def _replay(self):
        with open(self.store_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    self._apply(json.loads(line))

    def _apply(self, row: dict):
        self.judgements.append(row)
        self.text_counts[row["text_id"]] = self.text_counts.get(row["text_id"], 0) + 1
        self.rated.add((row["rater_id"], row["text_id"]))
        self.rater_sequence[row["rater_id"]] = max(
            self.rater_sequence.get(row["rater_id"], 0), row["sequence_index"])

    def open_session(self, rater_id: str) -> SessionState:
        """Create (or resume) the rater's session; packages round-robin by arrival."""
        if not rater_id:
            raise ValueError("rater_id required")
        with self.lock:
            if rater_id in self.rater_session:
                return self.sessions[self.rater_session[rater_id]]
            package_id = self.package_order[self._next_package % len(self.package_order)]
            self._next_package += 1
            session = SessionState(session_id=uuid.uuid4().hex[:12], rater_id=rater_id,
                                   package_id=package_id)
            self.sessions[session.session_id] = session
            self.rater_session[rater_id] = session.session_id
            return session

    def _session(self, session_id: str) -> SessionState:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    def next_item(self, session_id: str):
        """The rater's next unserved item, fewest judgements first; None when done.

        The pending item is sticky: refreshing resumes at the same text.
        """
        with self.lock:
            session = self._session(session_id)
            if session.pending is not None:
                return self.items[session.pending]
            package = self.packages[session.package_id]
            eligible = [
                (self.text_counts.get(item.text_id, 0), position, item)
                for position, item in enumerate(package.items)
                if (session.rater_id, item.text_id) not in self.rated
                and self.text_counts.get(item.text_id, 0) < MAX_JUDGEMENTS_PER_TEXT
            ]
            if not eligible:
                session.completed = True
                return None
            _, _, item = min(eligible, key=lambda entry: (entry[0], entry[1]))
            session.pending = item.text_id
            return item

    def progress(self, session_id: str) -> dict:
        session = self._session(session_id)
        package = self.packages[session.package_id]
        done = sum(1 for i in package.items if (session.rater_id, i.text_id) in self.rated)
        return {"served": done, "total": len(package.items)}

    def submit_rating(self, session_id: str, text_id: str, quality: str, naturalness: str) -> int:
        """Store one rating; returns the rater's sequence index."""
        if quality not in LIKERT_LABELS or naturalness not in LIKERT_LABELS:
            raise ValueError(f"ratings must be one of {LIKERT_LABELS}")
        with self.lock:
            session = self._session(session_id)
            item = self.items.get(text_id)
            if item is None or text_id not in {i.text_id for i in self.packages[session.package_id].items}:
                raise NotServed(f"text {text_id!r} is not part of this session's package")
            if (session.rater_id, text_id) in self.rated:
                raise DuplicateRating(f"rater {session.rater_id!r} already rated {text_id!r}")
            if session.pending != text_id:
                raise NotServed(f"text {text_id!r} was not served to this session")
            if self.text_counts.get(text_id, 0) >= MAX_JUDGEMENTS_PER_TEXT:
                # another rater filled the cap while this one was reading;
                # un-pin the item so the session can move on
                session.pending = None
                raise CapExceeded(f"text {text_id!r} already has {MAX_JUDGEMENTS_PER_TEXT} judgements")
            sequence = self.rater_sequence.get(session.rater_id, 0) + 1
            row = {
                "rater_id": session.rater_id,
                "text_id": text_id,
                "source": item.source,
                "quality": quality,
                "naturalness": naturalness,
                "is_attention_check": item.is_attention_check,
                "sequence_index": sequence,
            }
            if item.is_attention_check:
                row["check_passed"] = (quality, naturalness) == item.expected
            if self.store_path:
                with open(self.store_path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(row, ensure_ascii=False) + "\n")
                    fh.flush()
            self._apply(row)
            session.pending = None
            return sequence

    def text_progress(self) -> dict:
        with self.lock:
            return {
                text_id: self.text_counts.get(text_id, 0)
                for text_id in sorted(self.items)
            }

    def export_judgements(self) -> str:
        """Full log in the judgement CSV schema (filtering happens at analysis)."""
        with self.lock:
            rows = list(self.judgements)
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(("rater_id", "text_id", "source", "quality_label",
                         "naturalness_label", "is_attention_check", "sequence_index"))
        for row in rows:
            writer.writerow([
                row["rater_id"], row["text_id"], row["source"], row["quality"],
                row["naturalness"], "true" if row["is_attention_check"] else "false",
                row["sequence_index"],
            ])
        return buffer.getvalue()

    def export_as_judgements(self) -> list[Judgement]:
        with self.lock:
            return [Judgement(
                rater_id=row["rater_id"], text_id=row["text_id"], source=row["source"],
                quality=row["quality"], naturalness=row["naturalness"],
                is_attention_check=row["is_attention_check"],
                sequence_index=row["sequence_index"],
            ) for row in self.judgements]
