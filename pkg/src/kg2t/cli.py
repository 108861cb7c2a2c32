"""kg2t command line: split, train, generate, evaluate, analyze, serve.

Generated-text files are JSONL rows {"text_id", "name_id", "source", "text"}
so evaluation commands can join texts back to their records.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import faithfulness as faith
from . import grammar as gram
from . import markov, records, stats, survey, templates
from .survey_http import SurveyServer


def _read_gen_file(path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def _write_gen_file(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def default_template_path() -> Path:
    return Path(str(resources.files("kg2t.data").joinpath("template_library.kgt")))


def cmd_split(args) -> int:
    pairs = records.read_pairs(args.input)
    texts = {record.name_id: text for record, text in pairs if text is not None}
    recs = [record for record, _ in pairs]
    ratios = tuple(int(r) for r in args.ratios.split(","))
    split = records.split_dataset(recs, ratios=ratios, seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, part in (("train", split.train), ("validation", split.validation), ("test", split.test)):
        with open(out / f"{name}.jsonl", "w", encoding="utf-8") as fh:
            for record in part:
                fh.write(records.serialize_record(record, text=texts.get(record.name_id)) + "\n")
    print(f"split {len(recs)} records -> train {len(split.train)}, "
          f"validation {len(split.validation)}, test {len(split.test)} (seed {args.seed})")
    return 0


def cmd_train(args) -> int:
    pairs = [(r, t) for r, t in records.read_pairs(args.train) if t]
    if not pairs:
        print("no training pairs with TEXT found", file=sys.stderr)
        return 2
    planner = markov.train_planner(markov.planner_sequences(pairs), n=args.order)
    transducer = markov.train_transducer(pairs)
    markov.save_model(args.out, planner, transducer)
    print(f"trained on {len(pairs)} pairs: {len(planner.counts)} planner states, "
          f"{len(transducer.table)} transducer keys -> {args.out}")
    return 0


def cmd_generate(args) -> int:
    recs = records.read_records(args.input)
    rows = []
    skipped = 0
    if args.engine == "template":
        library = templates.load_template_library(args.templates or default_template_path())
        for i, record in enumerate(recs, start=1):
            try:
                result = templates.generate_template_text(record, library)
            except (templates.NoCoverage, templates.EmptyPlan):
                skipped += 1
                continue
            rows.append({"text_id": f"TT{i}", "name_id": record.name_id,
                         "source": "TT", "text": result.text})
    else:
        planner, transducer = markov.load_model(args.model)
        for i, record in enumerate(recs, start=1):
            result = markov.generate_datadriven_text(planner, transducer, record)
            rows.append({"text_id": f"ML{i}", "name_id": record.name_id,
                         "source": "TML", "text": result.text})
    _write_gen_file(args.out, rows)
    note = f", {skipped} records uncovered" if skipped else ""
    print(f"generated {len(rows)} texts ({args.engine}){note} -> {args.out}")
    return 0


def cmd_faithfulness(args) -> int:
    by_name = {r.name_id: r for r in records.read_records(args.kb)}
    ignore = {p.strip() for p in args.ignore.split(",") if p.strip()}
    rows = []
    for gen in _read_gen_file(args.gen):
        record = by_name.get(gen["name_id"])
        if record is None:
            print(f"no record for {gen['name_id']!r}, skipping", file=sys.stderr)
            continue
        trace = faith.trace_realization(record, gen["text"])
        trace.source = gen.get("source", trace.source)
        report = faith.count_slot_errors(trace, record, ignore=ignore)
        rows.append((gen["text_id"], gen.get("source", "TH"), report))
    faith.write_faithfulness_csv(args.out, rows)
    print(f"scored {len(rows)} texts -> {args.out}")
    return 0


def cmd_grammar(args) -> int:
    errors = []
    texts = _read_gen_file(args.gen)
    for gen in texts:
        matches = gram.check_text(gen["text"], args.endpoint, text_id=gen["text_id"])
        for match in matches:
            category, confident = gram.classify_with_confidence(match, gen["text"])
            errors.append(gram.VerifiedError(match=match, category=category, verified=confident))
    gram.write_verification_csv(args.out, errors)
    print(f"checked {len(texts)} texts: {len(errors)} matches -> {args.out} "
          "(review the verified column, then feed to kg2t analyze)")
    return 0


def cmd_analyze(args) -> int:
    judgements = stats.read_judgements_csv(args.judgements)
    checks = None
    if args.checks:
        with open(args.checks, encoding="utf-8") as fh:
            packages = survey.packages_from_json(json.load(fh))
        checks = survey.attention_check_key(packages)
    faith_rows = faith.read_faithfulness_csv(args.faith) if args.faith else None
    grammar_rows = None
    if args.grammar:
        grammar_rows = [
            {"text_id": e.match.text_id, "category": e.category,
             "verified": "true" if e.verified else "false"}
            for e in gram.read_verification_csv(args.grammar)
        ]
    report = stats.build_report(judgements, checks=checks, faith_rows=faith_rows,
                                grammar_rows=grammar_rows,
                                negative_threshold=args.negative_threshold)
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, ensure_ascii=False)
    kept = report["raters"]["kept"]
    total = report["raters"]["total"]
    print(f"analyzed {len(judgements)} judgements from {total} raters ({kept} kept)")
    for source, row in report["summary"].items():
        print(f"  {source}: quality {row['avg_quality']:.2f}, "
              f"naturalness {row['avg_naturalness']:.2f}")
    print(f"report -> {args.report}")
    return 0


def cmd_packages(args) -> int:
    texts = [(r["text_id"], r["source"], r["text"]) for r in _read_gen_file(args.texts)]
    sizes = [int(s) for s in args.sizes.split(",")]
    packages = survey.build_packages(texts, sizes, seed=args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(survey.packages_to_json(packages), fh, indent=2, ensure_ascii=False)
    print(f"built {len(packages)} packages -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    with open(args.packages, encoding="utf-8") as fh:
        packages = survey.packages_from_json(json.load(fh))
    service = survey.SurveyService(packages, store_path=args.store)
    server = SurveyServer(service, port=args.port, ui_dir=args.ui_dir)
    print(f"survey service on {server.base_url} "
          f"({len(packages)} packages, store {args.store or 'in-memory'})",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kg2t", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="split a record file into train/validation/test")
    p.add_argument("--input", required=True)
    p.add_argument("--ratios", default="60,30,10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train the data-driven planner + transducer")
    p.add_argument("--train", required=True, help="records with TEXT references")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--out", required=True, help="model directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="generate texts from records")
    p.add_argument("--engine", choices=("template", "markov"), required=True)
    p.add_argument("--templates", help="template DSL file (default: bundled library)")
    p.add_argument("--model", help="model directory (markov engine)")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("faithfulness", help="count dropped/hallucinated slots per text")
    p.add_argument("--gen", required=True, help="generated-text JSONL")
    p.add_argument("--kb", required=True, help="record file")
    p.add_argument("--ignore", default="instance of,sex or gender")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_faithfulness)

    p = sub.add_parser("grammar", help="run texts through a grammar checker")
    p.add_argument("--gen", required=True)
    p.add_argument("--endpoint", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grammar)

    p = sub.add_parser("analyze", help="full judgement/error analysis report")
    p.add_argument("--judgements", required=True)
    p.add_argument("--faith")
    p.add_argument("--grammar")
    p.add_argument("--checks", help="packages JSON holding attention-check answers")
    p.add_argument("--negative-threshold", type=int, default=2)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("packages", help="bundle labeled texts into survey packages")
    p.add_argument("--texts", required=True, help="generated-text JSONL with sources")
    p.add_argument("--sizes", default="45,45,45,45,30")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_packages)

    p = sub.add_parser("serve", help="run the survey HTTP service")
    p.add_argument("--packages", required=True)
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--store", help="append-only judgement log path")
    p.add_argument("--ui-dir", help="static frontend directory served under /app/")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (records.MalformedRecord, records.BadRatios, templates.DslSyntaxError,
            templates.UnknownPlaceholderProperty, gram.ServiceUnavailable,
            survey.SizeMismatch, stats.JoinMismatch, stats.EmptyInput,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
