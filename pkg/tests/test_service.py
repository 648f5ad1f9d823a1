import json
import threading

import pytest
from fastapi.testclient import TestClient

from nfrkit import Taxonomy, load_session
from nfrkit.service import Store, create_app
from nfrkit.storage import dir_model_resolver

from dot_checker import check_dot


@pytest.fixture
def data_dir(tmp_path):
    return tmp_path / "data"


@pytest.fixture
def client(data_dir):
    with TestClient(create_app(data_dir)) as c:
        yield c


@pytest.fixture
def pos_source(fixtures_dir):
    return (fixtures_dir / "pos.ucm").read_text(encoding="utf-8")


@pytest.fixture
def full_source(fixtures_dir):
    return (fixtures_dir / "pos-full.ucm").read_text(encoding="utf-8")


def upload(client, source) -> str:
    response = client.post("/models", content=source.encode("utf-8"),
                           headers={"content-type": "text/plain"})
    assert response.status_code == 201, response.text
    return response.json()["model_id"]


def open_session(client, model_id, taxonomy=None) -> str:
    body = {"model_id": model_id}
    if taxonomy is not None:
        body["taxonomy"] = taxonomy
    response = client.post("/sessions", json=body)
    assert response.status_code == 201, response.text
    return response.json()["session_id"]


def put_answer(client, sid, qid, answer, category, actor=None):
    body = {"answer": answer, "category": category}
    if actor is not None:
        body["actor"] = actor
    return client.put(f"/sessions/{sid}/answers/{qid}", json=body)


class TestModels:
    def test_upload_returns_id_and_warnings(self, client, pos_source):
        response = client.post("/models", content=pos_source)
        assert response.status_code == 201
        doc = response.json()
        assert doc["model_id"]
        assert {w["code"] for w in doc["warnings"]} == {"fr-without-nfrq"}

    def test_upload_invalid_returns_422_diagnostics(self, client):
        response = client.post("/models", content='usecase "U"\n')
        assert response.status_code == 422
        diags = response.json()["diagnostics"]
        assert any(d["code"] == "missing-model" for d in diags)

    def test_upload_empty_text(self, client):
        response = client.post("/models", content="")
        assert response.status_code == 422
        assert any(
            "missing model declaration" in d["message"]
            for d in response.json()["diagnostics"]
        )

    def test_get_model_contract(self, client, pos_source):
        model_id = upload(client, pos_source)
        doc = client.get(f"/models/{model_id}").json()
        assert set(doc) == {"source", "actors", "use_cases", "associations", "questions"}
        assert len(doc["use_cases"]) == 20
        assert doc["actors"][0] == "User"
        assert doc["questions"][0] == {
            "id": "NFRQ1",
            "use_case": "Search",
            "text": "How much time it takes to give Search result",
        }
        assert ["User", "Search"] in doc["associations"]

    def test_get_model_source_reparses_to_same_model(self, client, pos_source):
        from nfrkit import parse_model

        model_id = upload(client, pos_source)
        doc = client.get(f"/models/{model_id}").json()
        reparsed = parse_model(doc["source"]).model
        assert reparsed == parse_model(pos_source).model

    def test_unknown_model_404(self, client):
        response = client.get("/models/nope")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown-model"

    def test_model_questions_diagram(self, client, pos_source):
        model_id = upload(client, pos_source)
        response = client.get(f"/models/{model_id}/diagram", params={"view": "questions"})
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/vnd.graphviz")
        graph = check_dot(response.text)
        assert len(graph.nodes) == 40

    def test_model_diagram_rejects_categorized(self, client, pos_source):
        model_id = upload(client, pos_source)
        response = client.get(f"/models/{model_id}/diagram", params={"view": "categorized"})
        assert response.status_code == 400


class TestSessions:
    def test_create_with_default_taxonomy(self, client, pos_source):
        model_id = upload(client, pos_source)
        response = client.post("/sessions", json={"model_id": model_id})
        assert response.status_code == 201
        assert response.json()["taxonomy"] == [
            "Performance",
            "Flexibility",
            "Usability",
            "Modifiability",
            "Privacy",
            "Legal issue",
            "Security",
        ]

    def test_create_with_custom_taxonomy(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id, ["Only"])
        response = put_answer(client, sid, "NFRQ1", "a", "Only")
        assert response.status_code == 200

    def test_create_with_bad_taxonomy_422(self, client, pos_source):
        model_id = upload(client, pos_source)
        response = client.post("/sessions", json={"model_id": model_id, "taxonomy": []})
        assert response.status_code == 422

    def test_create_against_unknown_model_404(self, client):
        response = client.post("/sessions", json={"model_id": "nope"})
        assert response.status_code == 404

    def test_malformed_body_400(self, client):
        response = client.post("/sessions", json={"nope": 1})
        assert response.status_code == 400
        assert response.json()["code"] == "malformed-request"

    def test_pending_order_and_shrink(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        pending = client.get(f"/sessions/{sid}/pending").json()
        assert [q["id"] for q in pending] == [f"NFRQ{i}" for i in range(1, 8)]
        put_answer(client, sid, "NFRQ1", "quick", "Performance")
        pending = client.get(f"/sessions/{sid}/pending").json()
        assert [q["id"] for q in pending][0] == "NFRQ2"


class TestAnswers:
    def test_put_records_then_revises(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        first = put_answer(client, sid, "NFRQ1", "Less than 10 second", "Performance")
        assert first.status_code == 200
        doc = first.json()
        assert doc["question"] == "NFRQ1"
        assert doc["actor"] == "User"
        assert doc["recorded_at"].endswith("Z")

        second = put_answer(client, sid, "NFRQ1", "Less than 5 second", "Performance")
        assert second.status_code == 200
        assert second.json()["answer"] == "Less than 5 second"
        table = client.get(f"/sessions/{sid}/table", params={"format": "json"}).json()
        assert len(table) == 1

    def test_put_unknown_category_422(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        response = put_answer(client, sid, "NFRQ1", "a", "Reliability")
        assert response.status_code == 422
        assert response.json()["code"] == "unknown-category"

    def test_put_unknown_question_404(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        response = put_answer(client, sid, "NFRQ99", "a", "Performance")
        assert response.status_code == 404

    def test_put_blank_answer_422(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        response = put_answer(client, sid, "NFRQ1", "   ", "Performance")
        assert response.status_code == 422
        assert response.json()["code"] == "blank-answer"

    def test_put_unassociated_actor_422(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        response = put_answer(client, sid, "NFRQ1", "a", "Performance", actor="Cashier")
        assert response.status_code == 422

    def test_delete_then_delete_again_404(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        put_answer(client, sid, "NFRQ1", "a", "Performance")
        first = client.delete(f"/sessions/{sid}/answers/NFRQ1")
        assert first.status_code == 204
        second = client.delete(f"/sessions/{sid}/answers/NFRQ1")
        assert second.status_code == 404

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/pending").status_code == 404
        assert put_answer(client, "nope", "NFRQ1", "a", "Performance").status_code == 404


class TestReportsAndDiagrams:
    def _full_session(self, client, fixtures_dir, full_source):
        model_id = upload(client, full_source)
        sid = open_session(client, model_id)
        import csv
        import io

        rows = csv.DictReader(
            io.StringIO((fixtures_dir / "pos-full-answers.csv").read_text())
        )
        for row in rows:
            response = put_answer(
                client, sid, row["question"], row["answer"], row["category"], row["actor"]
            )
            assert response.status_code == 200
        return sid

    def test_checklist_md_byte_equals_golden(self, client, fixtures_dir, full_source):
        sid = self._full_session(client, fixtures_dir, full_source)
        response = client.get(f"/sessions/{sid}/checklist", params={"format": "md"})
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/markdown")
        golden = (fixtures_dir / "table2.golden.md").read_bytes()
        assert response.content == golden

    def test_table_csv_content_type(self, client, fixtures_dir, full_source):
        sid = self._full_session(client, fixtures_dir, full_source)
        response = client.get(f"/sessions/{sid}/table", params={"format": "csv"})
        assert response.headers["content-type"].startswith("text/csv")
        assert response.text.splitlines()[0] == (
            "actor,use_case,question_no,question,answer,category"
        )

    def test_coverage_json(self, client, fixtures_dir, full_source):
        sid = self._full_session(client, fixtures_dir, full_source)
        response = client.get(f"/sessions/{sid}/coverage", params={"format": "json"})
        assert response.headers["content-type"].startswith("application/json")
        assert response.json()["unused_categories"] == []

    def test_bad_format_400(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        response = client.get(f"/sessions/{sid}/table", params={"format": "pdf"})
        assert response.status_code == 400

    def test_session_categorized_diagram(self, client, fixtures_dir, full_source):
        sid = self._full_session(client, fixtures_dir, full_source)
        response = client.get(f"/sessions/{sid}/diagram", params={"view": "categorized"})
        assert response.status_code == 200
        graph = check_dot(response.text)
        assert graph.nodes_with(shape="folder")

    def test_session_questions_diagram(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        response = client.get(f"/sessions/{sid}/diagram", params={"view": "questions"})
        assert response.status_code == 200
        check_dot(response.text)

    def test_suggest_endpoint(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        response = client.get(
            f"/sessions/{sid}/suggest", params={"text": "Less than 10 second"}
        )
        ranked = response.json()
        assert ranked[0] == {"category": "Performance", "score": 1.0}
        assert len(ranked) == 7


class TestPersistenceAndParity:
    def test_cli_can_read_service_session(self, client, data_dir, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        put_answer(client, sid, "NFRQ1", "quick", "Performance")

        session = load_session(
            (data_dir / f"{sid}.json").read_text(), dir_model_resolver(data_dir)
        )
        assert session.answers[0].answer == "quick"

        from click.testing import CliRunner

        from nfrkit.cli import main

        api_bytes = client.get(f"/sessions/{sid}/table", params={"format": "md"}).content
        cli = CliRunner().invoke(
            main,
            ["report", "table", "--session", str(data_dir / f"{sid}.json"), "--format", "md"],
        )
        assert cli.output.encode("utf-8") == api_bytes

    def test_write_ahead_survives_restart(self, data_dir, pos_source):
        with TestClient(create_app(data_dir)) as client:
            model_id = upload(client, pos_source)
            sid = open_session(client, model_id)
            put_answer(client, sid, "NFRQ1", "persisted", "Performance")

        with TestClient(create_app(data_dir)) as reborn:
            table = reborn.get(f"/sessions/{sid}/table", params={"format": "json"}).json()
            assert table[0]["answer"] == "persisted"
            pending = reborn.get(f"/sessions/{sid}/pending").json()
            assert len(pending) == 6

    def test_scan_ignores_broken_files(self, data_dir, pos_source):
        data_dir.mkdir(parents=True)
        (data_dir / "broken.ucm").write_text("not a model")
        (data_dir / "broken.json").write_text("{}")
        with TestClient(create_app(data_dir)) as client:
            upload(client, pos_source)

    def test_default_taxonomy_override(self, data_dir, pos_source):
        app = create_app(data_dir, default_taxonomy=Taxonomy(("Speed",)))
        with TestClient(app) as client:
            model_id = upload(client, pos_source)
            response = client.post("/sessions", json={"model_id": model_id})
            assert response.json()["taxonomy"] == ["Speed"]


class TestConcurrency:
    def test_parallel_puts_all_land(self, client, pos_source):
        model_id = upload(client, pos_source)
        sid = open_session(client, model_id)
        errors = []

        def worker(qid):
            try:
                response = put_answer(client, sid, qid, f"answer {qid}", "Performance")
                assert response.status_code == 200, response.text
            except Exception as exc:  # noqa: BLE001
                errors.append(exc)

        threads = [
            threading.Thread(target=worker, args=(f"NFRQ{i}",)) for i in range(1, 8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        table = client.get(f"/sessions/{sid}/table", params={"format": "json"}).json()
        assert len(table) == 7

    def test_store_serializes_conflicting_writers(self, data_dir, pos_source):
        from nfrkit import parse_model, record_answer, revise_answer

        store = Store(data_dir)
        stored, _ = store.add_model(pos_source)
        session = store.create_session(stored.model_id, None)
        sid = session.session_id

        def upsert(payload):
            def fn(s):
                if s.answer_for("NFRQ1") is None:
                    return record_answer(s, "NFRQ1", payload, "Performance")
                return revise_answer(s, "NFRQ1", payload, "Performance")

            return fn

        payloads = [f"value {i}" for i in range(24)]
        threads = [
            threading.Thread(target=store.mutate_session, args=(sid, upsert(p)))
            for p in payloads
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        final = store.get_session(sid)
        # the final state equals some sequential order: exactly one answer,
        # holding one of the submitted payloads, and disk matches memory
        assert len(final.answers) == 1
        assert final.answers[0].answer in payloads
        on_disk = load_session(
            (data_dir / f"{sid}.json").read_text(), lambda ref: final.model
        )
        assert on_disk == final

    def test_file_visible_before_200(self, data_dir, pos_source):
        # write-ahead: at the moment a 2xx is observable the file must already
        # hold the answer; restart-without-shutdown proves no buffering
        with TestClient(create_app(data_dir)) as client:
            model_id = upload(client, pos_source)
            sid = open_session(client, model_id)
            response = put_answer(client, sid, "NFRQ1", "durable", "Performance")
            assert response.status_code == 200
            raw = json.loads((data_dir / f"{sid}.json").read_text())
            assert raw["answers"][0]["answer"] == "durable"
