import json
import threading

import pytest
import requests

from qamar.expand import ExpansionConfig
from qamar.pipeline import Pipeline
from qamar.query import serialize_boolean
from qamar.search import build_index
from qamar.service import AppState, SessionStore, cli_main, make_server

from .conftest import FIXTURES

LEXDB = str(FIXTURES / "lexdb")
AWN = str(FIXTURES / "awn" / "awn_demo.tsv")
CORPUS = str(FIXTURES / "corpus.tsv")
DB_FLAGS = ["--lexdb", LEXDB, "--awn", AWN]


# --- CLI -----------------------------------------------------------------------


def test_cli_expand_prints_candidate_table(capsys):
    code = cli_main(["expand", "درس", *DB_FLAGS, "--max-senses", "15"])
    out = capsys.readouterr().out
    assert code == 0
    assert "دراسة" in out
    assert "synonym" in out


def test_cli_expand_default_config(capsys):
    code = cli_main(["expand", "درس", *DB_FLAGS])
    out = capsys.readouterr().out
    assert code == 0
    assert "دارس" in out  # first-sense synonym under the default caps


def test_cli_search_no_expand_is_baseline_passthrough(capsys):
    # No lexical database at all: the no-expansion path must not need it.
    code = cli_main([
        "search", "فرس", "--no-expand", "--lexdb", LEXDB, "--corpus", CORPUS, "-k", "5",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "# query: فرس" in out
    assert "d01" in out and "d04" not in out


def test_cli_search_expanded_reaches_lexical_variants(capsys):
    code = cli_main(["search", "فرس", *DB_FLAGS, "--corpus", CORPUS, "-k", "20"])
    out = capsys.readouterr().out
    assert code == 0
    assert "d04" in out  # خيل document, reached through expansion


def test_cli_analyze_empty_input_exits_zero(capsys):
    code = cli_main(["analyze", "", "--lexdb", LEXDB])
    assert code == 0
    assert capsys.readouterr().out == ""


def test_cli_bad_flags_usage_exit_2(capsys):
    assert cli_main(["search", "فرس", "--backend", "carrier-pigeon"]) == 2
    assert "usage" in capsys.readouterr().err


def test_cli_missing_lexdb_is_reported(capsys):
    code = cli_main(["analyze", "درس"])
    assert code == 1
    assert "--lexdb" in capsys.readouterr().err


def test_cli_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("QAMAR_LEXDB", LEXDB)
    monkeypatch.setenv("QAMAR_AWN", AWN)
    code = cli_main(["expand", "فرس"])
    out = capsys.readouterr().out
    assert code == 0
    assert "خيل" in out


def test_cli_index_snapshot_round_trip(tmp_path, capsys):
    snapshot = tmp_path / "index.json"
    assert cli_main(["index", "--corpus", CORPUS, "--index-path", str(snapshot),
                     "--lexdb", LEXDB]) == 0
    assert snapshot.exists()
    assert cli_main(["search", "فرس", "--no-expand", "--lexdb", LEXDB,
                     "--index-path", str(snapshot), "-k", "3"]) == 0
    out = capsys.readouterr().out
    assert "d01" in out


def test_cli_eval_prints_tsv(capsys):
    code = cli_main([
        "eval", "--corpus", CORPUS, "--queries", str(FIXTURES / "queries.tsv"),
        "--qrels", str(FIXTURES / "qrels.tsv"), "-k", "20", *DB_FLAGS,
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("query_id\tvariant")
    assert "ablation_no_synonym" in out


def test_cli_eval_sweep(capsys):
    code = cli_main([
        "eval", "--corpus", CORPUS, "--queries", str(FIXTURES / "queries.tsv"),
        "--qrels", str(FIXTURES / "qrels.tsv"), "-k", "20", *DB_FLAGS,
        "--sweep", "max_senses=1,15",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert len(out.strip().split("\n")) == 3  # header + 2 grid points


def test_cli_expand_json_output(capsys):
    code = cli_main(["expand", "فرس", *DB_FLAGS, "--json"])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out[:out.rindex("}") + 1])
    assert payload["groups"][0]["candidates"]


# --- session store ---------------------------------------------------------------


def test_sessions_expire_after_ttl():
    clock = [0.0]
    store = SessionStore(ttl=10.0, now=lambda: clock[0])
    session = store.create("t", [], [], ExpansionConfig())
    assert store.get(session.id) is not None
    clock[0] = 25.0
    assert store.get(session.id) is None


def test_session_access_refreshes_ttl():
    clock = [0.0]
    store = SessionStore(ttl=10.0, now=lambda: clock[0])
    session = store.create("t", [], [], ExpansionConfig())
    clock[0] = 8.0
    assert store.get(session.id) is not None
    clock[0] = 16.0  # 8 s after the refresh, still alive
    assert store.get(session.id) is not None


# --- HTTP API ---------------------------------------------------------------------


@pytest.fixture(scope="module")
def server_url(lexdb, demo_db, corpus):
    pipeline = Pipeline(lexdb, demo_db)
    state = AppState(pipeline=pipeline, index=build_index(lexdb, corpus))
    server = make_server(state, port=0)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}"
    server.shutdown()
    server.server_close()


@pytest.fixture(scope="module")
def api(server_url):
    class Api:
        def get(self, path):
            return requests.get(server_url + path, timeout=5)

        def post(self, path, payload=None):
            return requests.post(server_url + path, json=payload or {}, timeout=5)

    return Api()


def test_health_reports_database_counts(api):
    body = api.get("/health").json()
    assert body["status"] == "ok"
    assert body["synsets"] == 20
    assert body["lexicon_entries"] == 46
    assert body["documents"] == 20


def test_analyze_endpoint(api):
    body = api.post("/analyze", {"text": "والمدرسة"}).json()
    assert body["tokens"][0]["analyses"][0]["lemma"] == "مدرسة"


def test_analyze_requires_text_field(api):
    response = api.post("/analyze", {"body": "درس"})
    assert response.status_code == 400
    assert response.json()["error"]["field"] == "text"


def test_expand_creates_session_with_preview(api, lexdb, demo_db):
    body = api.post("/expand", {"text": "فرس"}).json()
    assert body["session_id"]
    terms = [c["term"] for c in body["groups"][0]["candidates"]]
    assert terms == ["خيل", "حصان", "حيوان", "مهر"]
    # Single shared pipeline: the HTTP preview equals the library serialization.
    expected = serialize_boolean(Pipeline(lexdb, demo_db).build_expanded("فرس"))
    assert body["preview"] == expected
    assert all(c["selected"] for c in body["groups"][0]["candidates"])
    khayl = body["groups"][0]["candidates"][0]
    assert khayl["gloss"]  # glosses surface for the UI


def test_expand_respects_config_override(api):
    body = api.post("/expand", {"text": "فرس", "config": {"relations_enabled": []}}).json()
    assert body["groups"][0]["candidates"] == []
    assert body["preview"] == "فرس"


def test_select_toggles_update_preview(api):
    session = api.post("/expand", {"text": "فرس"}).json()
    sid = session["session_id"]
    toggled = api.post(f"/sessions/{sid}/select", {
        "toggles": [{"candidate_id": "g0c0", "selected": False}],
    }).json()
    assert toggled["groups"][0]["candidates"][0]["selected"] is False
    assert "خيل" not in toggled["preview"]
    assert toggled["preview"] == "(فرس OR حصان OR حيوان OR مهر)"


def test_select_all_off_then_search_is_baseline(api):
    session = api.post("/expand", {"text": "فرس"}).json()
    sid = session["session_id"]
    cleared = api.post(f"/sessions/{sid}/select", {"group": 0, "selected": False}).json()
    assert cleared["preview"] == "فرس"
    results = api.post(f"/sessions/{sid}/search", {"backend": "local", "k": 20}).json()
    assert [r["doc_id"] for r in results["results"]] == ["d01", "d02", "d03"]
    assert results["query"] == "فرس"


def test_search_uses_current_selection_state(api):
    session = api.post("/expand", {"text": "فرس"}).json()
    sid = session["session_id"]
    results = api.post(f"/sessions/{sid}/search", {"backend": "local", "k": 20}).json()
    assert "d04" in [r["doc_id"] for r in results["results"]]
    api.post(f"/sessions/{sid}/select", {"group": 0, "selected": False})
    baseline = api.post(f"/sessions/{sid}/search", {"backend": "local", "k": 20}).json()
    assert "d04" not in [r["doc_id"] for r in baseline["results"]]


def test_unknown_candidate_toggle_is_400(api):
    sid = api.post("/expand", {"text": "فرس"}).json()["session_id"]
    response = api.post(f"/sessions/{sid}/select", {
        "toggles": [{"candidate_id": "g9c9", "selected": False}],
    })
    assert response.status_code == 400
    assert "g9c9" in response.json()["error"]["message"]


def test_unknown_session_is_404(api):
    assert api.get("/sessions/nope").status_code == 404
    assert api.post("/sessions/nope/search", {"k": 3}).status_code == 404


def test_unknown_endpoint_is_404(api):
    assert api.get("/frobnicate").status_code == 404


def test_malformed_body_is_400(api, server_url):
    response = requests.post(
        server_url + "/analyze", data=b"{not json",
        headers={"Content-Type": "application/json"}, timeout=5,
    )
    assert response.status_code == 400
    assert "JSON" in response.json()["error"]["message"]


def test_bad_k_is_400_with_field(api):
    sid = api.post("/expand", {"text": "فرس"}).json()["session_id"]
    response = api.post(f"/sessions/{sid}/search", {"k": 0})
    assert response.status_code == 400
    assert response.json()["error"]["field"] == "k"


def test_concurrent_sessions_are_isolated(api):
    sid_a = api.post("/expand", {"text": "فرس"}).json()["session_id"]
    sid_b = api.post("/expand", {"text": "فرس"}).json()["session_id"]
    api.post(f"/sessions/{sid_a}/select", {"group": 0, "selected": False})
    state_a = api.get(f"/sessions/{sid_a}").json()
    state_b = api.get(f"/sessions/{sid_b}").json()
    assert all(not c["selected"] for c in state_a["groups"][0]["candidates"])
    assert all(c["selected"] for c in state_b["groups"][0]["candidates"])
    assert state_b["preview"] == "(فرس OR خيل OR حصان OR حيوان OR مهر)"


def test_interleaved_toggles_do_not_leak(api):
    sids = [api.post("/expand", {"text": "درس فرس"}).json()["session_id"] for _ in range(2)]
    errors = []

    def flip(sid, value):
        try:
            for _ in range(10):
                api.post(f"/sessions/{sid}/select", {"group": 1, "selected": value})
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [
        threading.Thread(target=flip, args=(sids[0], False)),
        threading.Thread(target=flip, args=(sids[1], True)),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
    state_0 = api.get(f"/sessions/{sids[0]}").json()
    state_1 = api.get(f"/sessions/{sids[1]}").json()
    assert all(not c["selected"] for c in state_0["groups"][1]["candidates"])
    assert all(c["selected"] for c in state_1["groups"][1]["candidates"])
