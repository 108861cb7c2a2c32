#!/usr/bin/env python3
"""Regenerate the bundled test fixtures (deterministic, seeded).

Writes, under tests/fixtures/:
  ml_slot_fixture.csv       68 ML texts with labeled slot-error counts
                            (47 / 14 / 7 across the three observed categories)
  ml_slot_judgements.csv    3 ratings per ML text giving the good/bad split
                            [[41,6],[12,2],[6,1]] whose Fisher p is exactly 1
  judgements_synthetic.csv  the 50-rater / 29-passing synthetic survey
  checks_synthetic.json     attention-check answer key for the above
"""

import csv
import json
import random
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

LABELS = ("very bad", "bad", "neutral", "good", "very good")


def write_ml_slot_fixture():
    # category blocks: ML1-47 cat3, ML48-61 cat2, ML62-68 cat1
    rows = []
    rng = random.Random(7)
    bad_ids = {f"ML{i}" for i in [42, 43, 44, 45, 46, 47, 60, 61, 68]}
    for i in range(1, 69):
        text_id = f"ML{i}"
        if i <= 47:
            dropped, hallucinated = rng.randint(1, 3), 0
        elif i <= 61:
            dropped, hallucinated = rng.randint(1, 2), rng.randint(1, 2)
        else:
            dropped, hallucinated = 0, 0
        repeated = 1 if i % 11 == 0 else 0
        category = (2 if dropped else 4) if hallucinated else (3 if dropped else 1)
        rows.append((text_id, "TML", dropped, hallucinated, repeated, category))

    with open(FIXTURES / "ml_slot_fixture.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("text_id", "source", "dropped", "hallucinated", "repeated", "category"))
        writer.writerows(rows)

    with open(FIXTURES / "ml_slot_judgements.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("rater_id", "text_id", "source", "quality_label",
                         "naturalness_label", "is_attention_check", "sequence_index"))
        for r, rater in enumerate(("jr01", "jr02", "jr03")):
            for i in range(1, 69):
                text_id = f"ML{i}"
                if text_id in bad_ids:
                    label = "bad" if (i + r) % 2 == 0 else "very bad"
                else:
                    label = "good" if (i + r) % 2 == 0 else "very good"
                writer.writerow((rater, text_id, "TML", label, label, "false", i))


TABLE1_WEIGHTS = {
    # per-source (quality, naturalness) label weights, loosely Table-1 shaped
    "TT": ((1.0, 7.9, 28.4, 38.9, 22.4), (1.0, 6.0, 27.8, 48.3, 15.8)),
    "TML": ((0.5, 11.2, 32.2, 35.6, 20.5), (1.2, 8.6, 28.0, 51.2, 11.0)),
    "TH": ((0.7, 12.6, 32.9, 39.5, 14.3), (0.7, 10.2, 30.0, 46.2, 12.8)),
}


def synthetic_texts():
    texts = []
    for n in range(1, 69):
        texts.append((f"TT{n}", "TT"))
    for n in range(1, 70):
        texts.append((f"ML{n}", "TML"))
    for n in [*range(1, 67), 69, 70]:
        texts.append((f"H{n}", "TH"))
    return texts


def write_synthetic_judgements():
    rng = random.Random(2024)
    texts = synthetic_texts()
    assert len(texts) == 205

    shuffled = list(texts)
    rng.shuffle(shuffled)
    packages = [shuffled[i::5] for i in range(5)]
    checks = {}
    for k in range(5):
        expected_q, expected_n = rng.choice(LABELS), rng.choice(LABELS)
        checks[f"check-pkg-{k + 1}"] = [expected_q, expected_n]

    passing = {i for i in range(1, 51) if i % 50 < 29 and i <= 29}
    passing = set(range(1, 30))  # raters 1..29 pass, 30..50 fail
    rows = []
    for rater_index in range(1, 51):
        rater = f"rater{rater_index:02d}"
        package_index = (rater_index - 1) % 5
        package = packages[package_index]
        check_id = f"check-pkg-{package_index + 1}"
        expected_q, expected_n = checks[check_id]
        if rater_index in passing:
            todo = list(package)
        else:
            todo = package[: rng.randint(6, 14)]
        rng.shuffle(todo)

        ratings = []
        for text_id, source in todo:
            wq, wn = TABLE1_WEIGHTS[source]
            quality = rng.choices(LABELS, weights=wq)[0]
            if rng.random() < 0.55:
                # naturalness tracks quality about half the time
                shifted = LABELS.index(quality) + rng.choice((-1, 0, 0, 1))
                natural = LABELS[min(max(shifted, 0), 4)]
            else:
                natural = rng.choices(LABELS, weights=wn)[0]
            ratings.append([text_id, source, quality, natural, "false"])

        if rater_index in passing:
            answer_q, answer_n = expected_q, expected_n
        else:
            wrong = LABELS[(LABELS.index(expected_q) + 1) % 5]
            answer_q, answer_n = wrong, expected_n
        at = rng.randrange(len(ratings) + 1)
        ratings.insert(at, [check_id, "CHECK", answer_q, answer_n, "true"])

        # nobody answers identically from the 11th judgement on
        tail = ratings[10:]
        if len(tail) >= 2 and len({r[2] for r in tail}) == 1 and len({r[3] for r in tail}) == 1:
            tail[-1][2] = LABELS[(LABELS.index(tail[-1][2]) + 1) % 5]

        for sequence, row in enumerate(ratings, start=1):
            rows.append([rater, *row[:4], row[4], sequence])

    with open(FIXTURES / "judgements_synthetic.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("rater_id", "text_id", "source", "quality_label",
                         "naturalness_label", "is_attention_check", "sequence_index"))
        writer.writerows(rows)
    with open(FIXTURES / "checks_synthetic.json", "w", encoding="utf-8") as fh:
        json.dump(checks, fh, indent=2)


if __name__ == "__main__":
    FIXTURES.mkdir(parents=True, exist_ok=True)
    write_ml_slot_fixture()
    write_synthetic_judgements()
    print(f"fixtures written to {FIXTURES}")
