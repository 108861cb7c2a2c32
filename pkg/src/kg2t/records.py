"""Wikidata-style person records: parse, serialize, split, delexicalize.

A record is stored one per line as a JSON object with a mandatory "Name_ID"
key, an optional "TEXT" key carrying a human reference text, and property
keys mapping to arrays of {"mainsnak": "<value>"} objects.  Property order
and value order are significant and preserved end to end.

Delexicalization treats the person's name as a pseudo-slot with property
"Name_ID" and index 0 so that reference texts can be turned into reusable
templates; ``slot_occurrences`` deliberately excludes it, so faithfulness
counting never charges a generator for the name.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field

NAME_KEY = "Name_ID"
TEXT_KEY = "TEXT"


class MalformedRecord(ValueError):
    """A record line does not have the expected shape."""

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class BadRatios(ValueError):
    pass


@dataclass
class EntityRecord:
    """One person's meaning representation."""

    name_id: str
    properties: dict[str, list[str]] = field(default_factory=dict)


@dataclass(frozen=True)
class SlotOccurrence:
    """One (property, index) position in a record and its value."""

    property: str
    index: int
    value: str


@dataclass
class DatasetSplit:
    train: list[EntityRecord]
    validation: list[EntityRecord]
    test: list[EntityRecord]
    seed: int


def _byte_offset(line: str, char_pos: int) -> int:
    return len(line[:char_pos].encode("utf-8"))


def _key_offset(line: str, key: str) -> int:
    pos = line.find(f'"{key}"')
    return _byte_offset(line, pos) if pos >= 0 else 0


def parse_record(line: str) -> EntityRecord:
    """Parse one serialized record line into an EntityRecord.

    Raises MalformedRecord (with the byte offset of the offending spot) when
    Name_ID is missing, a property value is not an array, or a mainsnak is
    not a string.
    """
    record, _ = parse_pair(line)
    return record


def parse_pair(line: str) -> tuple[EntityRecord, str | None]:
    """Like parse_record but also returns the optional "TEXT" reference."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"invalid JSON: {exc.msg}", _byte_offset(line, exc.pos)) from exc
    if not isinstance(obj, dict):
        raise MalformedRecord("record must be a JSON object", 0)
    if NAME_KEY not in obj:
        raise MalformedRecord(f"missing {NAME_KEY}", 0)
    name = obj[NAME_KEY]
    if not isinstance(name, str) or not name:
        raise MalformedRecord(f"{NAME_KEY} must be a non-empty string", _key_offset(line, NAME_KEY))

    text = obj.get(TEXT_KEY)
    if text is not None and not isinstance(text, str):
        raise MalformedRecord(f"{TEXT_KEY} must be a string", _key_offset(line, TEXT_KEY))

    properties: dict[str, list[str]] = {}
    for key, raw in obj.items():
        if key in (NAME_KEY, TEXT_KEY):
            continue
        if not isinstance(raw, list):
            raise MalformedRecord(f"property {key!r} is not an array", _key_offset(line, key))
        if not raw:
            raise MalformedRecord(f"property {key!r} has no values", _key_offset(line, key))
        values = []
        for item in raw:
            if not isinstance(item, dict) or "mainsnak" not in item:
                raise MalformedRecord(f"property {key!r} has a value without a mainsnak", _key_offset(line, key))
            value = item["mainsnak"]
            if not isinstance(value, str):
                raise MalformedRecord(f"property {key!r} has a non-string value", _key_offset(line, key))
            values.append(value)
        properties[key] = values
    return EntityRecord(name_id=name, properties=properties), text


def serialize_record(record: EntityRecord, text: str | None = None) -> str:
    """Serialize a record to one line; parse_record(serialize_record(r)) == r."""
    obj: dict = {NAME_KEY: record.name_id}
    for prop, values in record.properties.items():
        obj[prop] = [{"mainsnak": v} for v in values]
    if text is not None:
        obj[TEXT_KEY] = text
    return json.dumps(obj, ensure_ascii=False)


def read_records(path) -> list[EntityRecord]:
    with open(path, encoding="utf-8") as fh:
        return [parse_record(line) for line in fh if line.strip()]


def read_pairs(path) -> list[tuple[EntityRecord, str | None]]:
    with open(path, encoding="utf-8") as fh:
        return [parse_pair(line) for line in fh if line.strip()]


def write_records(path, records: list[EntityRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(serialize_record(record) + "\n")


def _largest_remainder_sizes(n: int, ratios) -> list[int]:
    base = [n * r // 100 for r in ratios]
    remainders = [(n * r) % 100 for r in ratios]
    leftover = n - sum(base)
    order = sorted(range(len(ratios)), key=lambda i: (-remainders[i], i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def split_dataset(records: list[EntityRecord], ratios=(60, 30, 10), seed: int = 0) -> DatasetSplit:
    """Partition records into train/validation/test by the given percentages.

    Membership depends only on the set of records and the seed, not on their
    input order: records are put in name order before the seeded shuffle.
    Sizes follow largest-remainder rounding.
    """
    if len(ratios) != 3 or any(r < 0 for r in ratios) or sum(ratios) != 100:
        raise BadRatios(f"ratios must be three non-negative percentages summing to 100, got {ratios!r}")
    if not records:
        raise ValueError("no records to split")
    ordered = sorted(records, key=lambda r: r.name_id)
    rng = random.Random(seed)
    rng.shuffle(ordered)
    n_train, n_val, n_test = _largest_remainder_sizes(len(ordered), ratios)
    return DatasetSplit(
        train=ordered[:n_train],
        validation=ordered[n_train:n_train + n_val],
        test=ordered[n_train + n_val:],
        seed=seed,
    )


def slot_occurrences(record: EntityRecord) -> list[SlotOccurrence]:
    """All (property, index, value) positions, in record order; name_id excluded."""
    return [
        SlotOccurrence(prop, i, value)
        for prop, values in record.properties.items()
        for i, value in enumerate(values)
    ]


def placeholder(occ: SlotOccurrence) -> str:
    return f"[{occ.property}:{occ.index}]"


def find_slot_spans(text: str, record: EntityRecord, include_name: bool = True):
    """Locate every maximal non-overlapping exact occurrence of a slot value.

    Longer values are matched before shorter ones, so "New York Mets" beats
    "New York".  When the same value sits at several (property, index)
    positions, successive matches in surface order take successive positions;
    once positions run out the last one is reused, which is how a repetition
    in the text shows up as a repeated occurrence.

    Returns a list of ((start, end), SlotOccurrence) sorted by start.
    """
    candidates: list[SlotOccurrence] = []
    if include_name:
        candidates.append(SlotOccurrence(NAME_KEY, 0, record.name_id))
    candidates.extend(slot_occurrences(record))

    queues: dict[str, deque[SlotOccurrence]] = {}
    first_seen: dict[str, int] = {}
    for pos, occ in enumerate(candidates):
        if not occ.value:
            continue
        queues.setdefault(occ.value, deque()).append(occ)
        first_seen.setdefault(occ.value, pos)

    claimed: list[tuple[int, int, SlotOccurrence]] = []

    def overlaps(start, end):
        return any(start < e and s < end for s, e, _ in claimed)

    for value in sorted(queues, key=lambda v: (-len(v), first_seen[v])):
        queue = queues[value]
        last = queue[-1]
        start = 0
        while (at := text.find(value, start)) != -1:
            end = at + len(value)
            if overlaps(at, end):
                start = at + 1
                continue
            occ = queue.popleft() if queue else last
            claimed.append((at, end, occ))
            start = end
    claimed.sort(key=lambda item: item[0])
    return [((s, e), occ) for s, e, occ in claimed]


def delexicalize(text: str, record: EntityRecord, include_name: bool = True):
    """Replace slot values in text with [property:index] placeholders.

    Returns (template_text, occurrences) with occurrences in surface order.
    Text sharing no values with the record comes back unchanged.
    """
    spans = find_slot_spans(text, record, include_name=include_name)
    parts = []
    cursor = 0
    occurrences = []
    for (start, end), occ in spans:
        parts.append(text[cursor:start])
        parts.append(placeholder(occ))
        occurrences.append(occ)
        cursor = end
    parts.append(text[cursor:])
    return "".join(parts), occurrences
