"""Grammar checking: external checker client, 9-way error taxonomy, tallies.

The checker is any LanguageTool-compatible HTTP endpoint (form fields
``text`` and ``language``, JSON response with a ``matches`` array).  A
recorded-response mock server ships with the package so the whole pipeline
runs offline.

Classification is a deterministic rule cascade over rule id, message and
the surrounding text.  Matches nothing recognises fall back to Typo and are
exported unverified, to be confirmed or rejected in the verification CSV
(columns: text_id, offset, length, rule_id, category, verified).
"""

from __future__ import annotations

import csv
import json
import re
import threading
from collections import Counter, defaultdict
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from importlib import resources
from urllib.parse import parse_qs

import requests

PROP_ORTHOGRAPHY = "PropOrthography"
DENONYM = "Denonym"
UNNECESSARY_SPACE = "UnnecessarySpace"
WRONG_SLOT_VALUE = "WrongSlotValue"
AGREEMENT = "Agreement"
TYPO = "Typo"
URL_INFO = "URLInfo"
REPETITION = "Repetition"
MISSING_WORD_AFTER = "MissingWordAfter"

CATEGORIES = (
    PROP_ORTHOGRAPHY, DENONYM, UNNECESSARY_SPACE, WRONG_SLOT_VALUE,
    AGREEMENT, TYPO, URL_INFO, REPETITION, MISSING_WORD_AFTER,
)


class ServiceUnavailable(ConnectionError):
    """Checker endpoint could not be reached; retry later or point the CLI
    at the recorded mock."""


class MalformedResponse(ValueError):
    pass


@dataclass
class GrammarMatch:
    text_id: str
    offset: int
    length: int
    rule_id: str
    message: str
    suggested: str | None = None

    def flagged(self, context: str) -> str:
        return context[self.offset:self.offset + self.length]


@dataclass
class VerifiedError:
    match: GrammarMatch
    category: str
    verified: bool = True


def check_text(text: str, endpoint: str, language: str = "en-US",
               text_id: str = "", timeout: float = 10.0) -> list[GrammarMatch]:
    """POST the text to a LanguageTool-compatible endpoint and parse matches."""
    try:
        response = requests.post(endpoint, data={"text": text, "language": language},
                                 timeout=timeout)
    except requests.RequestException as exc:
        raise ServiceUnavailable(f"checker at {endpoint} unreachable: {exc}") from exc
    if response.status_code != 200:
        raise ServiceUnavailable(f"checker at {endpoint} returned HTTP {response.status_code}")
    try:
        payload = response.json()
        matches = payload["matches"]
        out = []
        for m in matches:
            replacements = m.get("replacements", [])
            out.append(GrammarMatch(
                text_id=text_id,
                offset=int(m["offset"]),
                length=int(m["length"]),
                rule_id=str(m["rule"]["id"]),
                message=str(m.get("message", "")),
                suggested=replacements[0]["value"] if replacements else None,
            ))
        return out
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise MalformedResponse(f"unexpected checker response: {exc}") from exc


_COUNTRIES = (
    "United States", "United Kingdom", "Germany", "France", "China",
    "South Africa", "Senegal", "Italy", "Spain", "Japan", "Russia",
    "New Zealand", "Netherlands", "India", "Brazil",
)

_URL_RE = re.compile(r"\bfile\s*:|\.(?:jpg|jpeg|png|gif|svg)\b|https?://", re.IGNORECASE)
_DENONYM_RE = re.compile(r"\b(?:%s)\s+[a-z]{2,}" % "|".join(_COUNTRIES))
_NEE_REPEAT_RE = re.compile(r"\b([\w''. -]{2,}?)\s*\(\s*n[ée]e\s+\1\b", re.IGNORECASE)
_REPEAT_RE = re.compile(r"\b([\w]+(?:\s+[\w]+)?)\s+\1\b", re.IGNORECASE)


def _is_spelling_rule(match: GrammarMatch) -> bool:
    return "MORFOLOGIK" in match.rule_id or "SPELL" in match.rule_id \
        or "spelling" in match.message.lower()


def classify_match(match: GrammarMatch, context: str) -> str:
    """Deterministic cascade mapping one checker match to an error category."""
    category, _confident = classify_with_confidence(match, context)
    return category


def classify_with_confidence(match: GrammarMatch, context: str):
    """(category, confident); unconfident results default to Typo and should
    be exported with verified=false."""
    rule = match.rule_id.upper()
    message = match.message.lower()
    flagged = match.flagged(context)

    if _URL_RE.search(context):
        return URL_INFO, True
    if "REPEAT" in rule or "repeated" in message or _REPEAT_RE.search(context):
        return REPETITION, True
    if "WHITESPACE" in rule or "space" in message:
        return UNNECESSARY_SPACE, True
    if _NEE_REPEAT_RE.search(context):
        return WRONG_SLOT_VALUE, True
    if _DENONYM_RE.search(context):
        return DENONYM, True
    if "A_VS_AN" in rule or "article" in message or "agreement" in message:
        return AGREEMENT, True
    if "UPPERCASE" in rule or "LOWERCASE" in rule or "capital" in message:
        return PROP_ORTHOGRAPHY, True
    if _is_spelling_rule(match) and match.suggested and flagged \
            and match.suggested == flagged[:1].upper() + flagged[1:]:
        return PROP_ORTHOGRAPHY, True
    if "MISSING" in rule or "missing" in message:
        return MISSING_WORD_AFTER, True
    if _is_spelling_rule(match):
        return TYPO, True
    return TYPO, False


def tally_errors(errors: list[VerifiedError], source_of: dict[str, str]):
    """Per-source, per-category (before, after) counts.

    before counts every match; after counts only verified ones.  Sources
    with no matches simply have zero rows.
    """
    tallies: dict[str, dict[str, list[int]]] = defaultdict(
        lambda: {c: [0, 0] for c in CATEGORIES})
    for error in errors:
        source = source_of.get(error.match.text_id, "?")
        row = tallies[source][error.category]
        row[0] += 1
        if error.verified:
            row[1] += 1
    return {source: {cat: tuple(counts) for cat, counts in rows.items()}
            for source, rows in tallies.items()}


VERIFICATION_COLUMNS = ("text_id", "offset", "length", "rule_id", "category", "verified")


def write_verification_csv(path, errors: list[VerifiedError]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(VERIFICATION_COLUMNS)
        for e in errors:
            writer.writerow([e.match.text_id, e.match.offset, e.match.length,
                             e.match.rule_id, e.category,
                             "true" if e.verified else "false"])


def read_verification_csv(path) -> list[VerifiedError]:
    errors = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            match = GrammarMatch(
                text_id=row["text_id"], offset=int(row["offset"]),
                length=int(row["length"]), rule_id=row["rule_id"], message="")
            errors.append(VerifiedError(
                match=match, category=row["category"],
                verified=row["verified"].strip().lower() == "true"))
    return errors


def load_recorded_responses() -> dict:
    data = resources.files("kg2t.data").joinpath("recorded_checker.json").read_text("utf-8")
    return json.loads(data)


class _RecordedHandler(BaseHTTPRequestHandler):
    responses: dict = {}

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        form = parse_qs(self.rfile.read(length).decode("utf-8"))
        text = form.get("text", [""])[0]
        if "@@malformed@@" in text:
            body = b"this is not json"
        else:
            body = json.dumps(self.responses.get(text, {"matches": []})).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


class RecordedCheckerServer:
    """Offline stand-in for the grammar checker, replaying recorded matches."""

    def __init__(self, responses: dict | None = None, port: int = 0):
        handler = type("Handler", (_RecordedHandler,), {
            "responses": responses if responses is not None else load_recorded_responses(),
        })
        self._server = ThreadingHTTPServer(("127.0.0.1", port), handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def endpoint(self) -> str:
        return f"http://127.0.0.1:{self._server.server_address[1]}/v2/check"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._server.shutdown()
        self._server.server_close()
