"""Data-driven generation: Markov-chain sentence planner + slot transducer.

The planner is an n-gram chain over slot-type tokens (the name counts as
the pseudo-type "Name_ID"); walking it greedily groups a record's slots
into intended sentences, with a dedicated end token closing each group.
The transducer maps an ordered slot-type sequence to the delexicalised
template observed most often for it in training, backing off to the
longest known prefix plus per-type fallback clauses.  Slot values are then
inserted in order and the text cleaned up.

Unlike the template engine, transduced templates carry literal words from
training texts, so generated text can hallucinate and repeat content; the
trace exposes both instead of hiding them.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .faithfulness import RealizationTrace, RealizedSlot, content_spans
from .records import NAME_KEY, EntityRecord, SlotOccurrence, delexicalize
from .templates import PLACEHOLDER_RE, GeneratedText

START_TOKEN = "<s>"
END_TOKEN = "</s>"
OOV_TOKEN = "<unk>"
SPECIAL_TOKENS = (START_TOKEN, END_TOKEN, OOV_TOKEN)

KEY_SEP = "|"


@dataclass
class MarkovPlanner:
    order: int
    counts: dict[tuple[str, ...], Counter] = field(default_factory=dict)

    @property
    def transitions(self) -> dict[tuple[str, ...], list[tuple[str, float]]]:
        """Per-state (token, probability) lists, highest probability first."""
        table = {}
        for state, tokens in self.counts.items():
            total = sum(tokens.values())
            table[state] = sorted(
                ((token, count / total) for token, count in tokens.items()),
                key=lambda item: (-item[1], item[0]),
            )
        return table


@dataclass
class SentencePlan:
    groups: list[list[str]]


@dataclass
class SlotTransducer:
    table: dict[tuple[str, ...], Counter] = field(default_factory=dict)
    fillers: Counter = field(default_factory=Counter)

    def fallback(self, slot_type: str) -> str:
        """Best single-type template, or a canned clause for unseen types."""
        key = (slot_type,)
        if key in self.table:
            return _best_template(self.table[key])
        return f"the {slot_type} is [{slot_type}:0]."


def _best_template(counter: Counter) -> str:
    return min(counter.items(), key=lambda item: (-item[1], item[0]))[0]


def train_planner(sequences, n: int) -> MarkovPlanner:
    """Maximum-likelihood n-gram counts over slot-type sequences.

    States are padded with start tokens; an end token is appended to every
    sequence so each state's outgoing distribution normalizes to 1.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    counts: dict[tuple[str, ...], Counter] = {}
    for sequence in sequences:
        state = (START_TOKEN,) * n
        for token in list(sequence) + [END_TOKEN]:
            counts.setdefault(state, Counter())[token] += 1
            state = (state + (token,))[-n:]
    return MarkovPlanner(order=n, counts=counts)


def _record_tokens(record: EntityRecord) -> list[str]:
    tokens = [NAME_KEY] if record.name_id else []
    for prop, values in record.properties.items():
        tokens.extend([prop] * len(values))
    return tokens


def plan_sentences(planner: MarkovPlanner, record: EntityRecord) -> SentencePlan:
    """Greedily walk the chain to group the record's slot types into sentences.

    At each state the highest-probability admissible token wins (ties go to
    the lexicographically smaller); the end token is admissible once the
    current group is non-empty.  Tokens the walk cannot reach (unseen types,
    dead-end states) form a final group in record order.
    """
    available = Counter(_record_tokens(record))
    if not available:
        raise ValueError(f"record {record.name_id!r} has nothing to plan")
    transitions = planner.transitions
    groups: list[list[str]] = []
    current: list[str] = []
    state = (START_TOKEN,) * planner.order
    while sum(available.values()) > 0:
        pick = None
        for token, _prob in transitions.get(state, []):
            if token == END_TOKEN:
                if current:
                    pick = token
                    break
            elif available[token] > 0:
                pick = token
                break
        if pick is None:
            break
        if pick == END_TOKEN:
            groups.append(current)
            current = []
        else:
            current.append(pick)
            available[pick] -= 1
        state = (state + (pick,))[-planner.order:]
    leftover = []
    for token in _record_tokens(record):
        if available[token] > 0:
            leftover.append(token)
            available[token] -= 1
    if current or leftover:
        groups.append(current + leftover)
    return SentencePlan(groups=groups)


_SENTENCE_SPLIT = ". "


def reference_sentences(record: EntityRecord, text: str) -> list[tuple[list[str], str]]:
    """Delexicalize a reference text and cut it into per-sentence training items.

    Returns (slot-type sequence, template) per sentence; the type sequence
    lists the property of each placeholder in surface order.
    """
    template, _ = delexicalize(text, record)
    parts = template.split(_SENTENCE_SPLIT)
    items = []
    for i, part in enumerate(parts):
        if not part.strip():
            continue
        sentence = part + "." if i < len(parts) - 1 else part
        types = [m.group(1) for m in PLACEHOLDER_RE.finditer(sentence)]
        items.append((types, sentence))
    return items


def train_transducer(pairs) -> SlotTransducer:
    """Count (slot-type sequence -> delexicalised template) over training pairs.

    Sentences without placeholders only feed the no-slot filler pool.
    """
    transducer = SlotTransducer()
    for record, text in pairs:
        for types, sentence in reference_sentences(record, text):
            if types:
                transducer.table.setdefault(tuple(types), Counter())[sentence] += 1
            else:
                transducer.fillers[sentence] += 1
    return transducer


def planner_sequences(pairs) -> list[list[str]]:
    """Per-record token sequences for planner training, end tokens marking
    sentence boundaries (train_planner adds the final one)."""
    sequences = []
    for record, text in pairs:
        tokens: list[str] = []
        for types, _sentence in reference_sentences(record, text):
            tokens.extend(types)
            tokens.append(END_TOKEN)
        if tokens and tokens[-1] == END_TOKEN:
            tokens.pop()
        if tokens:
            sequences.append(tokens)
    return sequences


def transduce(transducer: SlotTransducer, group) -> str:
    """Template for an ordered slot-type group: exact key, else longest
    known prefix plus fallback clauses for the remainder."""
    key = tuple(group)
    if not key:
        raise ValueError("empty group")
    if key in transducer.table:
        return _best_template(transducer.table[key])
    for cut in range(len(key) - 1, 0, -1):
        if key[:cut] in transducer.table:
            head = _best_template(transducer.table[key[:cut]])
            rest = key[cut:]
            return " ".join([head] + [transducer.fallback(t) for t in rest])
    return " ".join(transducer.fallback(t) for t in key)


def _strip_special_tokens(text: str) -> str:
    tokens = [t for t in text.split() if t not in SPECIAL_TOKENS]
    return " ".join(tokens)


def _fix_spacing(text: str) -> str:
    text = re.sub(r"\(\s+", "(", text)
    text = re.sub(r"\s+(?=[),.])", "", text)
    return text


def _capitalize_first(text: str) -> str:
    for i, ch in enumerate(text):
        if ch.isalpha():
            return text[:i] + ch.upper() + text[i + 1:]
    return text


def postprocess(text: str) -> str:
    """Clean generator output: drop special tokens, normalize whitespace
    around parentheses and punctuation, upper-case the first letter.
    Idempotent."""
    return _capitalize_first(_fix_spacing(_strip_special_tokens(text)))


def _fill_group_template(template: str, record: EntityRecord):
    """Substitute placeholders with record values, tracking spans.

    Placeholders name their position ([prop:i] takes the record's i-th value
    of prop, clamped to the last available one), so a template learned from
    text that repeated a value repeats the new record's value too.  Returns
    None if a type is absent from the record entirely.
    """
    template = _fix_spacing(_strip_special_tokens(template))
    parts = []
    realized = []
    inserted_spans = []
    cursor = 0
    length = 0
    for match in PLACEHOLDER_RE.finditer(template):
        prop, stored = match.group(1), match.group(2)
        if prop == NAME_KEY:
            values = [record.name_id]
        else:
            values = record.properties.get(prop)
            if not values:
                return None
        literal = template[cursor:match.start()]
        parts.append(literal)
        length += len(literal)
        wanted = int(stored) if stored not in (None, "*") else 0
        index = min(wanted, len(values) - 1)
        value = values[index]
        span = (length, length + len(value))
        inserted_spans.append(span)
        if prop != NAME_KEY:
            realized.append((prop, index, value, span))
        parts.append(value)
        length += len(value)
        cursor = match.end()
    parts.append(template[cursor:])
    sentence = "".join(parts)
    capped = _capitalize_first(sentence)
    if len(capped) != len(sentence):  # rare unicode case-change length delta
        delta = len(capped) - len(sentence)
        realized = [(p, i, v, (s + delta, e + delta)) for p, i, v, (s, e) in realized]
        inserted_spans = [(s + delta, e + delta) for s, e in inserted_spans]
    return capped, realized, inserted_spans


def generate_datadriven_text(planner: MarkovPlanner, transducer: SlotTransducer, record: EntityRecord) -> GeneratedText:
    """Plan, transduce, lexicalise and post-process one record.

    The trace records every inserted slot occurrence and, as hallucination
    candidates, the literal content spans the templates carried over from
    training text.
    """
    plan = plan_sentences(planner, record)
    sentences = []
    realized: list[RealizedSlot] = []
    literal_spans = []
    offset = 0
    for group in plan.groups:
        template = transduce(transducer, group)
        filled = _fill_group_template(template, record)
        if filled is None:
            continue
        sentence, slots, inserted_spans = filled
        for prop, index, value, (start, end) in slots:
            realized.append(RealizedSlot(SlotOccurrence(prop, index, value), (offset + start, offset + end)))
        for start, end in content_spans(sentence, inserted_spans):
            literal_spans.append(((offset + start, offset + end), "template-literal"))
        sentences.append(sentence)
        offset += len(sentence) + 1
    text = " ".join(sentences)
    return GeneratedText(
        text=text,
        trace=RealizationTrace(realized=realized, hallucinated_spans=literal_spans, source="TML"),
    )


def save_model(model_dir, planner: MarkovPlanner, transducer: SlotTransducer) -> None:
    """Write the two plain-text model tables (tab-separated, integer counts)."""
    model_dir = Path(model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    with open(model_dir / "transitions.tsv", "w", encoding="utf-8") as fh:
        fh.write(f"order\t{planner.order}\n")
        for state in sorted(planner.counts):
            for token, count in sorted(planner.counts[state].items()):
                fh.write("\t".join([*state, token, str(count)]) + "\n")
    with open(model_dir / "transducer.tsv", "w", encoding="utf-8") as fh:
        for key in sorted(transducer.table):
            if any(KEY_SEP in t or "\t" in t for t in key):
                raise ValueError(f"slot type with reserved character in key {key!r}")
            for template, count in sorted(transducer.table[key].items()):
                fh.write(f"T\t{KEY_SEP.join(key)}\t{template}\t{count}\n")
        for template, count in sorted(transducer.fillers.items()):
            fh.write(f"F\t\t{template}\t{count}\n")


def load_model(model_dir) -> tuple[MarkovPlanner, SlotTransducer]:
    model_dir = Path(model_dir)
    with open(model_dir / "transitions.tsv", encoding="utf-8") as fh:
        header = fh.readline().strip().split("\t")
        if header[0] != "order":
            raise ValueError("transitions.tsv missing order header")
        order = int(header[1])
        counts: dict[tuple[str, ...], Counter] = {}
        for line in fh:
            fields = line.rstrip("\n").split("\t")
            if len(fields) != order + 2:
                raise ValueError(f"bad transitions row: {line!r}")
            state, token, count = tuple(fields[:order]), fields[order], int(fields[order + 1])
            counts.setdefault(state, Counter())[token] = count
    planner = MarkovPlanner(order=order, counts=counts)
    transducer = SlotTransducer()
    with open(model_dir / "transducer.tsv", encoding="utf-8") as fh:
        for line in fh:
            kind, key, template, count = line.rstrip("\n").split("\t")
            if kind == "T":
                types = tuple(key.split(KEY_SEP))
                transducer.table.setdefault(types, Counter())[template] = int(count)
            elif kind == "F":
                transducer.fillers[template] = int(count)
            else:
                raise ValueError(f"bad transducer row kind {kind!r}")
    return planner, transducer
