"""English finite verb groups for the template realiser.

Covers exactly what SVO trees need: a third-person-singular verb group for
(tense, voice).  Passive voice prefixes the auxiliary ("is"/"was") to the
past participle.  Regular inflection is +ed / +d after e / y-to-ied; no
consonant doubling is attempted.  A lexicon entry of None marks a lemma
known to be irregular whose forms we do not have.
"""

from __future__ import annotations

PAST = "past"
PRESENT = "present"
ACTIVE = "active"
PASSIVE = "passive"

TENSES = (PAST, PRESENT)
VOICES = (ACTIVE, PASSIVE)


class UnknownIrregular(KeyError):
    """Lemma flagged irregular but absent from the lexicon."""


# lemma -> (preterite, past participle)
IRREGULAR: dict[str, tuple[str, str] | None] = {
    "be": ("was", "been"),
    "bear": ("bore", "born"),
    "become": ("became", "become"),
    "begin": ("began", "begun"),
    "break": ("broke", "broken"),
    "bring": ("brought", "brought"),
    "build": ("built", "built"),
    "buy": ("bought", "bought"),
    "choose": ("chose", "chosen"),
    "come": ("came", "come"),
    "do": ("did", "done"),
    "draw": ("drew", "drawn"),
    "drive": ("drove", "driven"),
    "fall": ("fell", "fallen"),
    "fight": ("fought", "fought"),
    "find": ("found", "found"),
    "fly": ("flew", "flown"),
    "get": ("got", "got"),
    "give": ("gave", "given"),
    "go": ("went", "gone"),
    "grow": ("grew", "grown"),
    "have": ("had", "had"),
    "hold": ("held", "held"),
    "keep": ("kept", "kept"),
    "know": ("knew", "known"),
    "lead": ("led", "led"),
    "leave": ("left", "left"),
    "lose": ("lost", "lost"),
    "make": ("made", "made"),
    "meet": ("met", "met"),
    "run": ("ran", "run"),
    "say": ("said", "said"),
    "see": ("saw", "seen"),
    "sell": ("sold", "sold"),
    "send": ("sent", "sent"),
    "sing": ("sang", "sung"),
    "sit": ("sat", "sat"),
    "speak": ("spoke", "spoken"),
    "spend": ("spent", "spent"),
    "stand": ("stood", "stood"),
    "take": ("took", "taken"),
    "teach": ("taught", "taught"),
    "tell": ("told", "told"),
    "think": ("thought", "thought"),
    "wear": ("wore", "worn"),
    "win": ("won", "won"),
    "write": ("wrote", "written"),
}

_VOWELS = "aeiou"


def _regular_past(lemma: str) -> str:
    if lemma.endswith("e"):
        return lemma + "d"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
        return lemma[:-1] + "ied"
    return lemma + "ed"


def _present_3sg(lemma: str) -> str:
    if lemma == "be":
        return "is"
    if lemma == "have":
        return "has"
    if lemma.endswith(("s", "x", "z", "ch", "sh")) or lemma in ("do", "go"):
        return lemma + "es"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
        return lemma[:-1] + "ies"
    return lemma + "s"


def _forms(lemma: str, lexicon) -> tuple[str, str]:
    entry = lexicon.get(lemma, "regular")
    if entry is None:
        raise UnknownIrregular(lemma)
    if entry == "regular":
        past = _regular_past(lemma)
        return past, past
    return entry


def inflect_verb(lemma: str, tense: str, voice: str = ACTIVE, lexicon=IRREGULAR) -> str:
    """Return the finite 3rd-person-singular verb group for the lemma.

    inflect_verb("play", "past") -> "played"
    inflect_verb("bear", "past", "passive") -> "was born"
    inflect_verb("die", "present") -> "dies"
    """
    if tense not in TENSES:
        raise ValueError(f"unknown tense {tense!r}")
    if voice not in VOICES:
        raise ValueError(f"unknown voice {voice!r}")
    preterite, participle = _forms(lemma, lexicon)
    if voice == PASSIVE:
        aux = "was" if tense == PAST else "is"
        return f"{aux} {participle}"
    if tense == PAST:
        return preterite
    return _present_3sg(lemma)
