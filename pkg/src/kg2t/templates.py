"""Template-based generation: clusters of SVO underspecified trees.

Each tree has a subject template, a verb lemma and an object template plus
tense/voice annotations; realisation inflects the verb, fills placeholders
from the record and flattens the three nodes into a sentence.  Clusters
group trees sharing a communicative goal and declare the slot signature
they need.  The library lives in a small line-oriented DSL:

    CLUSTER <id> SLOTS <prop>[?|*](, <prop>[?|*])*
    TREE TENSE=<past|present> VOICE=<active|passive> SUBJ="..." VERB="<lemma>" OBJ="..."

Placeholders are [prop] (first value), [prop:<i>] (i-th value) and [prop:*]
(all values joined as an English list).  "Name_ID" may be used without
being declared.  Lines starting with # are comments.

By construction every non-literal span of the output comes from a record
slot, so template texts never hallucinate.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .faithfulness import RealizationTrace, RealizedSlot
from .inflect import TENSES, VOICES, inflect_verb
from .records import NAME_KEY, EntityRecord, SlotOccurrence, delexicalize

REQUIRED = "required"
OPTIONAL = "optional"
LIST = "list"

PRONOUNS = {"male": "He", "female": "She"}
DEFAULT_PRONOUN = "They"
PRONOUN_PROPERTY = "sex or gender"

PLACEHOLDER_RE = re.compile(r"\[([^\[\]:]+?)(?::(\d+|\*))?\]")

_CLUSTER_RE = re.compile(r"^CLUSTER\s+(\S+)\s+SLOTS\s+(.+)$")
_TREE_RE = re.compile(
    r'^TREE\s+TENSE=(\w+)\s+VOICE=(\w+)\s+SUBJ="([^"]*)"\s+VERB="([^"]*)"\s+OBJ="([^"]*)"\s*$'
)


class DslSyntaxError(ValueError):
    def __init__(self, message, line_no):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownPlaceholderProperty(ValueError):
    def __init__(self, prop, cluster_id, line_no):
        super().__init__(f"line {line_no}: placeholder [{prop}] not in SLOTS of cluster {cluster_id}")
        self.property = prop
        self.line_no = line_no


class NoCoverage(LookupError):
    """No cluster's required slots are all present in the record."""


class EmptyPlan(LookupError):
    """Every tree of the selected cluster was unfillable."""


class UnfilledPlaceholder(LookupError):
    pass


@dataclass(frozen=True)
class SvoTree:
    subject_template: str
    verb_lemma: str
    object_template: str
    tense: str
    voice: str


@dataclass
class TemplateCluster:
    id: str
    slot_signature: dict[str, str]  # property -> required | optional | list
    trees: list[SvoTree] = field(default_factory=list)

    def required_slots(self):
        return [p for p, kind in self.slot_signature.items() if kind in (REQUIRED, LIST)]


@dataclass
class TemplateLibrary:
    clusters: list[TemplateCluster] = field(default_factory=list)


@dataclass
class GeneratedText:
    text: str
    trace: RealizationTrace


def tree_placeholders(tree: SvoTree):
    for template in (tree.subject_template, tree.object_template):
        for match in PLACEHOLDER_RE.finditer(template):
            yield match.group(1), match.group(2)


def parse_template_library(source: str) -> TemplateLibrary:
    """Parse the template DSL; validates placeholder properties against SLOTS."""
    library = TemplateLibrary()
    current: TemplateCluster | None = None
    seen_ids = set()
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if match := _CLUSTER_RE.match(line):
            cluster_id, slots_part = match.groups()
            if cluster_id in seen_ids:
                raise DslSyntaxError(f"duplicate cluster id {cluster_id!r}", line_no)
            seen_ids.add(cluster_id)
            signature = {}
            for item in slots_part.split(","):
                item = item.strip()
                if not item:
                    raise DslSyntaxError("empty slot in SLOTS list", line_no)
                kind = REQUIRED
                if item.endswith("?"):
                    kind, item = OPTIONAL, item[:-1].strip()
                elif item.endswith("*"):
                    kind, item = LIST, item[:-1].strip()
                signature[item] = kind
            current = TemplateCluster(id=cluster_id, slot_signature=signature)
            library.clusters.append(current)
        elif line.startswith("TREE"):
            if current is None:
                raise DslSyntaxError("TREE before any CLUSTER", line_no)
            match = _TREE_RE.match(line)
            if match is None:
                raise DslSyntaxError("malformed TREE line", line_no)
            tense, voice, subj, verb, obj = match.groups()
            if tense not in TENSES:
                raise DslSyntaxError(f"unknown tense {tense!r}", line_no)
            if voice not in VOICES:
                raise DslSyntaxError(f"unknown voice {voice!r}", line_no)
            if not verb or " " in verb:
                raise DslSyntaxError("VERB must be a single lemma", line_no)
            tree = SvoTree(subj, verb, obj, tense, voice)
            for prop, _index in tree_placeholders(tree):
                if prop != NAME_KEY and prop not in current.slot_signature:
                    raise UnknownPlaceholderProperty(prop, current.id, line_no)
            current.trees.append(tree)
        else:
            raise DslSyntaxError(f"unrecognized line {line!r}", line_no)
    for cluster in library.clusters:
        if not cluster.trees:
            raise DslSyntaxError(f"cluster {cluster.id!r} has no trees", 0)
    return library


def load_template_library(path) -> TemplateLibrary:
    with open(path, encoding="utf-8") as fh:
        return parse_template_library(fh.read())


_TOKEN_RE = re.compile(r"\[[^\]]+\]|[\w''-]+")


def pair_features(record: EntityRecord, text: str) -> Counter:
    """Term-frequency features of one training pair.

    Tokens of the delexicalized text (placeholders collapsed to their
    property name) plus one count for each record slot type not already
    represented by a placeholder.
    """
    template, _ = delexicalize(text, record)
    counts: Counter = Counter()
    for token in _TOKEN_RE.findall(template):
        if token.startswith("["):
            token = PLACEHOLDER_RE.match(token).group(1)
        counts[token] += 1
    for prop in record.properties:
        if prop not in counts:
            counts[prop] += 1
    return counts


def cosine(a: Counter, b: Counter) -> float:
    dot = sum(count * b[token] for token, count in a.items())
    norm = math.sqrt(sum(c * c for c in a.values())) * math.sqrt(sum(c * c for c in b.values()))
    return dot / norm if norm else 0.0


def cluster_training_pairs(pairs, threshold: float) -> list[list[int]]:
    """Greedy agglomeration of (record, reference text) pairs by cosine similarity.

    Each pair joins the first existing group whose centroid similarity is at
    least the threshold, else starts a new group.  Returns groups of pair
    indices in creation order.
    """
    groups: list[list[int]] = []
    centroids: list[Counter] = []
    sizes: list[int] = []
    for index, (record, text) in enumerate(pairs):
        features = pair_features(record, text)
        for g, centroid in enumerate(centroids):
            mean = Counter({t: c / sizes[g] for t, c in centroid.items()})
            if cosine(features, mean) >= threshold:
                groups[g].append(index)
                centroid.update(features)
                sizes[g] += 1
                break
        else:
            groups.append([index])
            centroids.append(Counter(features))
            sizes.append(1)
    return groups


def coverage_score(cluster: TemplateCluster, record: EntityRecord) -> float:
    present = set(cluster.slot_signature) & set(record.properties)
    missing_required = [p for p in cluster.required_slots() if p not in record.properties]
    return len(present) - 0.5 * len(missing_required)


def select_cluster(record: EntityRecord, library: TemplateLibrary) -> TemplateCluster:
    """Pick the eligible cluster with the best coverage score (ties: library order)."""
    best = None
    best_score = -math.inf
    for cluster in library.clusters:
        if any(p not in record.properties for p in cluster.required_slots()):
            continue
        score = coverage_score(cluster, record)
        if score > best_score:
            best, best_score = cluster, score
    if best is None:
        raise NoCoverage(f"no cluster covers record {record.name_id!r}")
    return best


def _fillable(tree: SvoTree, record: EntityRecord) -> bool:
    for prop, index in tree_placeholders(tree):
        if prop == NAME_KEY:
            continue
        values = record.properties.get(prop)
        if values is None:
            return False
        if index not in (None, "*") and int(index) >= len(values):
            return False
    return True


def record_pronoun(record: EntityRecord) -> str:
    values = record.properties.get(PRONOUN_PROPERTY, [])
    return PRONOUNS.get(values[0].lower(), DEFAULT_PRONOUN) if values else DEFAULT_PRONOUN


def plan_trees(cluster: TemplateCluster, record: EntityRecord) -> list[SvoTree]:
    """Order and prune the cluster's trees for one record.

    Unfillable trees are dropped; the first kept tree realizes the name (its
    own subject template, or a bare [Name_ID] if it had none) and every
    later tree gets a pronoun subject from the "sex or gender" slot.
    """
    kept = [tree for tree in cluster.trees if _fillable(tree, record)]
    if not kept:
        raise EmptyPlan(f"cluster {cluster.id!r} has no fillable tree for {record.name_id!r}")
    pronoun = record_pronoun(record)
    planned = []
    for position, tree in enumerate(kept):
        if position == 0:
            subject = tree.subject_template or f"[{NAME_KEY}]"
        else:
            subject = pronoun
        planned.append(SvoTree(subject, tree.verb_lemma, tree.object_template, tree.tense, tree.voice))
    return planned


def _join_list(values: list[str]) -> str:
    if len(values) == 1:
        return values[0]
    return ", ".join(values[:-1]) + " and " + values[-1]


def fill_template(template: str, record: EntityRecord, base_offset: int = 0):
    """Substitute placeholders, returning (text, realized slots with spans)."""
    parts = []
    realized: list[RealizedSlot] = []
    cursor = 0
    length = 0
    for match in PLACEHOLDER_RE.finditer(template):
        prop, index = match.group(1), match.group(2)
        literal = template[cursor:match.start()]
        parts.append(literal)
        length += len(literal)
        if prop == NAME_KEY:
            values = [record.name_id]
        else:
            values = record.properties.get(prop)
            if values is None:
                raise UnfilledPlaceholder(f"record {record.name_id!r} has no {prop!r}")
        if index == "*":
            chosen = list(enumerate(values))
        else:
            i = int(index) if index is not None else 0
            if i >= len(values):
                raise UnfilledPlaceholder(f"{prop!r} has no value {i} in {record.name_id!r}")
            chosen = [(i, values[i])]
        for k, (value_index, value) in enumerate(chosen):
            if k > 0:
                joiner = " and " if k == len(chosen) - 1 else ", "
                parts.append(joiner)
                length += len(joiner)
            span = (base_offset + length, base_offset + length + len(value))
            if prop != NAME_KEY:
                realized.append(RealizedSlot(SlotOccurrence(prop, value_index, value), span))
            parts.append(value)
            length += len(value)
        cursor = match.end()
    parts.append(template[cursor:])
    return "".join(parts), realized


def realize_tree(tree: SvoTree, record: EntityRecord, base_offset: int = 0):
    """Flatten one tree to a sentence: subject + inflected verb + object + "."."""
    subject, realized = fill_template(tree.subject_template, record, base_offset)
    verb = inflect_verb(tree.verb_lemma, tree.tense, tree.voice)
    offset = base_offset + len(subject) + (1 if subject else 0) + len(verb) + 1
    obj, obj_realized = fill_template(tree.object_template, record, offset)
    sentence = " ".join(part for part in (subject, verb, obj) if part) + "."
    return sentence, realized + obj_realized


def generate_template_text(record: EntityRecord, library: TemplateLibrary) -> GeneratedText:
    """Full template pipeline: select cluster, plan, realize, join sentences."""
    cluster = select_cluster(record, library)
    trees = plan_trees(cluster, record)
    sentences = []
    realized: list[RealizedSlot] = []
    offset = 0
    for tree in trees:
        sentence, slots = realize_tree(tree, record, offset)
        sentences.append(sentence)
        realized.extend(slots)
        offset += len(sentence) + 1
    text = " ".join(sentences)
    return GeneratedText(text=text, trace=RealizationTrace(realized=realized, hallucinated_spans=[], source="TT"))
