import csv
import io

import pytest
import requests

from kg2t.stats import LIKERT_LABELS, aggregate_summary, read_judgements_csv
from kg2t.survey import (
    ATTENTION_CHECK_TEXT, DuplicateRating, NotServed, SizeMismatch,
    SurveyService, UnknownSession, attention_check_key, build_packages,
    packages_from_json, packages_to_json,
)
from kg2t.survey_http import SurveyServer


def make_texts(n, prefix="t"):
    sources = ("TT", "TML", "TH")
    return [(f"{prefix}{i}", sources[i % 3], f"Sentence number {i}.") for i in range(n)]


class TestBuildPackages:
    def test_five_package_shape(self):
        packages = build_packages(make_texts(210), (45, 45, 45, 45, 30), seed=1)
        assert [len(p.items) for p in packages] == [46, 46, 46, 46, 31]
        for package in packages:
            checks = [i for i in package.items if i.is_attention_check]
            assert len(checks) == 1
            assert checks[0].expected is not None
            assert checks[0].expected[0] in LIKERT_LABELS
            sources = {i.source for i in package.items if not i.is_attention_check}
            assert len(sources) > 1

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            build_packages(make_texts(10), (4, 4, 4), seed=0)

    def test_deterministic(self):
        first = build_packages(make_texts(30), (15, 15), seed=7)
        second = build_packages(make_texts(30), (15, 15), seed=7)
        assert packages_to_json(first) == packages_to_json(second)

    def test_check_wording(self):
        package = build_packages(make_texts(6), (6,), seed=0)[0]
        check = next(i for i in package.items if i.is_attention_check)
        q, n = check.expected
        assert check.display_text == ATTENTION_CHECK_TEXT.format(quality=q, naturalness=n)

    def test_json_round_trip(self):
        packages = build_packages(make_texts(12), (6, 6), seed=3)
        again = packages_from_json(packages_to_json(packages))
        assert packages_to_json(again) == packages_to_json(packages)

    def test_attention_check_key(self):
        packages = build_packages(make_texts(12), (6, 6), seed=3)
        key = attention_check_key(packages)
        assert set(key) == {"check-pkg-1", "check-pkg-2"}


@pytest.fixture()
def service(tmp_path):
    packages = build_packages(make_texts(9), (9,), seed=2)
    return SurveyService(packages, store_path=tmp_path / "log.jsonl")


class TestProtocol:
    def test_fresh_session_serves_fewest_judged(self, service):
        session = service.open_session("alice")
        item = service.next_item(session.session_id)
        assert item is not None
        assert service.text_counts.get(item.text_id, 0) == 0

    def test_pending_item_sticky_on_refresh(self, service):
        session = service.open_session("alice")
        first = service.next_item(session.session_id)
        again = service.next_item(session.session_id)
        assert first.text_id == again.text_id

    def test_session_resumes_for_same_rater(self, service):
        first = service.open_session("alice")
        second = service.open_session("alice")
        assert first.session_id == second.session_id

    def test_duplicate_rating_rejected(self, service):
        session = service.open_session("alice")
        item = service.next_item(session.session_id)
        service.submit_rating(session.session_id, item.text_id, "good", "good")
        with pytest.raises(DuplicateRating):
            service.submit_rating(session.session_id, item.text_id, "good", "good")

    def test_not_served_rejected(self, service):
        session = service.open_session("alice")
        service.next_item(session.session_id)
        with pytest.raises(NotServed):
            service.submit_rating(session.session_id, "never-served", "good", "good")

    def test_unknown_session(self, service):
        with pytest.raises(UnknownSession):
            service.next_item("deadbeef")

    def test_bad_label_rejected(self, service):
        session = service.open_session("alice")
        item = service.next_item(session.session_id)
        with pytest.raises(ValueError):
            service.submit_rating(session.session_id, item.text_id, "meh", "good")

    def test_capped_text_never_served(self):
        packages = build_packages(make_texts(2), (2,), seed=0)
        service = SurveyService(packages)
        # 20 raters exhaust one text's cap; rater 21 must never see it
        target = None
        for i in range(20):
            session = service.open_session(f"r{i}")
            item = service.next_item(session.session_id)
            if target is None:
                target = item.text_id
            while item.text_id != target:
                service.submit_rating(session.session_id, item.text_id, "good", "good")
                item = service.next_item(session.session_id)
            service.submit_rating(session.session_id, target, "good", "good")
        assert service.text_counts[target] == 20
        late = service.open_session("late")
        item = service.next_item(late.session_id)
        while item is not None:
            assert item.text_id != target
            service.submit_rating(late.session_id, item.text_id, "good", "good")
            item = service.next_item(late.session_id)

    def test_done_after_all_items(self, service):
        session = service.open_session("alice")
        seen = []
        while (item := service.next_item(session.session_id)) is not None:
            service.submit_rating(session.session_id, item.text_id, "good", "neutral")
            seen.append(item.text_id)
        assert len(seen) == 10  # 9 texts + 1 attention check
        assert service.next_item(session.session_id) is None
        assert service.sessions[session.session_id].completed

    def test_attention_check_scored_but_hidden(self, service):
        session = service.open_session("alice")
        check_rows = []
        while (item := service.next_item(session.session_id)) is not None:
            payload = item.payload()
            assert set(payload) == {"text_id", "display_text"}
            service.submit_rating(session.session_id, item.text_id, "good", "neutral")
        for row in service.judgements:
            if row["is_attention_check"]:
                check_rows.append(row)
        assert len(check_rows) == 1
        assert check_rows[0]["check_passed"] in (True, False)

    def test_sequence_index_gap_free(self, service):
        session = service.open_session("alice")
        while (item := service.next_item(session.session_id)) is not None:
            service.submit_rating(session.session_id, item.text_id, "good", "neutral")
        sequences = [row["sequence_index"] for row in service.judgements]
        assert sequences == list(range(1, len(sequences) + 1))

    def test_store_replay(self, tmp_path):
        packages = build_packages(make_texts(4), (4,), seed=0)
        path = tmp_path / "log.jsonl"
        service = SurveyService(packages, store_path=path)
        session = service.open_session("alice")
        item = service.next_item(session.session_id)
        service.submit_rating(session.session_id, item.text_id, "good", "good")

        reborn = SurveyService(packages, store_path=path)
        assert reborn.text_counts[item.text_id] == 1
        assert ("alice", item.text_id) in reborn.rated
        session2 = reborn.open_session("alice")
        with pytest.raises(DuplicateRating):
            reborn.submit_rating(session2.session_id, item.text_id, "good", "good")


class TestExport:
    def test_empty_store_header_only(self):
        service = SurveyService(build_packages(make_texts(3), (3,), seed=0))
        lines = service.export_judgements().strip().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("rater_id,")

    def test_n_rows(self, service):
        session = service.open_session("bob")
        for _ in range(3):
            item = service.next_item(session.session_id)
            service.submit_rating(session.session_id, item.text_id, "bad", "good")
        rows = list(csv.DictReader(io.StringIO(service.export_judgements())))
        assert len(rows) == 3

    def test_export_analyze_round_trip(self, service, tmp_path):
        session = service.open_session("carol")
        while (item := service.next_item(session.session_id)) is not None:
            service.submit_rating(session.session_id, item.text_id, "good", "neutral")
        path = tmp_path / "export.csv"
        path.write_text(service.export_judgements(), encoding="utf-8")
        from_csv = read_judgements_csv(path)
        direct = service.export_as_judgements()
        assert from_csv == direct
        assert aggregate_summary(from_csv) == aggregate_summary(direct)


class TestHttp:
    def test_full_flow_over_http(self, tmp_path):
        packages = build_packages(make_texts(5), (5,), seed=4)
        service = SurveyService(packages, store_path=tmp_path / "log.jsonl")
        with SurveyServer(service) as server:
            base = server.base_url
            session = requests.post(f"{base}/session", json={"rater_id": "web1"}).json()
            done = 0
            while True:
                nxt = requests.get(f"{base}/session/{session['session_id']}/next").json()
                if nxt["done"]:
                    break
                assert set(nxt["item"]) == {"text_id", "display_text"}
                ok = requests.post(
                    f"{base}/session/{session['session_id']}/rating",
                    json={"text_id": nxt["item"]["text_id"],
                          "quality": "good", "naturalness": "good"}).json()
                assert ok["ok"]
                done += 1
            assert done == 6
            progress = requests.get(f"{base}/admin/progress").json()
            assert sum(progress["texts"].values()) == 6
            export = requests.get(f"{base}/admin/export")
            assert export.headers["Content-Type"].startswith("text/csv")
            assert len(export.text.strip().splitlines()) == 7

    def test_http_error_codes(self, tmp_path):
        packages = build_packages(make_texts(5), (5,), seed=4)
        service = SurveyService(packages)
        with SurveyServer(service) as server:
            base = server.base_url
            assert requests.get(f"{base}/session/abcdef/next").status_code == 404
            session = requests.post(f"{base}/session", json={"rater_id": "w"}).json()
            response = requests.post(
                f"{base}/session/{session['session_id']}/rating",
                json={"text_id": "nope", "quality": "good", "naturalness": "good"})
            assert response.status_code == 403
            assert response.json()["error"] == "NotServed"
