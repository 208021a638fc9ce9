from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from guiloc.errors import InputError, UnparseableStepError
from guiloc.reports import (
    BugReport,
    HeuristicClassifier,
    RemoteClassifier,
    classify_sentences,
    load_report,
    parse_s2r,
    render_step,
    segment_sentences,
    segment_with_markers,
)


def test_segment_strips_list_markers():
    assert segment_sentences("Open app. 1. Tap save 2. Crash") == ["Open app.", "Tap save", "Crash"]


def test_segment_bullets_and_newlines():
    body = "Steps:\n- Open the app\n* Tap save\nThen it crashed!"
    assert segment_sentences(body) == ["Steps:", "Open the app", "Tap save", "Then it crashed!"]


def test_segment_keeps_decimal_versions_whole():
    assert segment_sentences("App Version: 1.5.8.") == ["App Version: 1.5.8."]


def test_segment_marks_list_items():
    segs = segment_with_markers("Intro text. 1. Tap save 2. Wait")
    assert [(s.text, s.is_list_item) for s in segs] == [
        ("Intro text.", False),
        ("Tap save", True),
        ("Wait", True),
    ]


def test_segment_preserves_sentence_content():
    body = "The app crashes. 1. Open editor 2. Type hello! Expected a note."
    joined = " ".join(segment_sentences(body))
    stripped = lambda s: re.sub(r"[^A-Za-z!.]+", "", s)
    # everything except the markers themselves survives
    assert stripped(joined) == stripped(body.replace("1. ", "").replace("2. ", ""))


def test_classification_examples():
    tags = dict(
        classify_sentences(
            [
                "The app should save the note",
                "Tap the save button",
                "App Version: 1.5.8.",
                "An error dialog appears instead",
            ]
        )
    )
    assert tags["The app should save the note"] == "EB"
    assert tags["Tap the save button"] == "S2R"
    assert tags["App Version: 1.5.8."] == "OTHER"
    assert tags["An error dialog appears instead"] == "OB"


def test_imperative_wins_over_markers():
    tags = dict(classify_sentences(["Press Save even though it should fail"]))
    assert tags["Press Save even though it should fail"] == "S2R"


def test_expected_beats_observed_on_plain_sentences():
    tags = dict(classify_sentences(["I expected a note but the app crashed"]))
    assert tags["I expected a note but the app crashed"] == "EB"


def test_list_items_default_to_s2r_unless_marked():
    segs = segment_with_markers("1. Go to the editor 2. Crash")
    tags = dict(classify_sentences(segs))
    assert tags["Go to the editor"] == "S2R"
    assert tags["Crash"] == "OB"


class _Responder(BaseHTTPRequestHandler):
    payload: dict = {}
    requests: list = []

    def do_POST(self):
        body = self.rfile.read(int(self.headers["Content-Length"]))
        type(self).requests.append(json.loads(body))
        data = json.dumps(type(self).payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def classifier_server():
    server = HTTPServer(("127.0.0.1", 0), _Responder)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()


def test_remote_classifier_round_trip(classifier_server):
    _Responder.payload = {"version": 1, "tags": ["S2R", "OB"]}
    _Responder.requests = []
    url = f"http://127.0.0.1:{classifier_server.server_port}/classify"
    remote = RemoteClassifier(url, model="tagger-v2")
    tagged = classify_sentences(["Tap save", "It crashed"], classifier=remote)
    assert tagged == [("Tap save", "S2R"), ("It crashed", "OB")]
    sent = _Responder.requests[0]
    assert sent == {"version": 1, "model": "tagger-v2", "sentences": ["Tap save", "It crashed"]}


def test_remote_classifier_bad_response_falls_back(classifier_server, caplog):
    _Responder.payload = {"version": 1, "tags": ["S2R"]}  # wrong length
    url = f"http://127.0.0.1:{classifier_server.server_port}/classify"
    tagged = classify_sentences(
        ["Tap save", "It crashed"], classifier=RemoteClassifier(url)
    )
    assert tagged == [("Tap save", "S2R"), ("It crashed", "OB")]
    assert any("heuristic" in r.message for r in caplog.records)


def test_remote_classifier_unreachable_falls_back(caplog):
    remote = RemoteClassifier("http://127.0.0.1:9/classify", timeout=0.2)
    tagged = classify_sentences(["The app should save"], classifier=remote)
    assert tagged == [("The app should save", "EB")]
    assert any("heuristic" in r.message for r in caplog.records)


SLOT_SUITE = [
    ("Click the save button", ("user", "click", "save button", None, None)),
    ("Click on the save button", ("user", "click", "save button", None, None)),
    ("Tap Save", ("user", "click", "Save", None, None)),
    ("Type 'hello' in the search field", ("user", "type", "'hello'", "in", "search field")),
    ("Enter hello into the search field", ("user", "type", "hello", "into", "search field")),
    ("The user types a name in the login form", ("user", "type", "name", "in", "login form")),
    ("Long-click the note in the list", ("user", "long-click", "note", "in", "list")),
    ("Swipe left on the note card", ("user", "swipe", "left", "on", "note card")),
    ("Press the back button", ("user", "click", "back button", None, None)),
    ("Open the settings screen", ("user", "open", "settings screen", None, None)),
    ("Select a tag from the picker", ("user", "select", "tag", "from", "picker")),
    ("Pinch the map view", ("user", "pinch", "map view", None, None)),
    ("The user clicks save in the toolbar", ("user", "click", "save", "in", "toolbar")),
    ("Input the password at the login prompt", ("user", "type", "password", "at", "login prompt")),
    ("Then tap the sync icon on the main screen", ("user", "click", "sync icon", "on", "main screen")),
]


def test_slot_grammar_suite():
    for sentence, expected in SLOT_SUITE:
        step = parse_s2r(sentence)
        got = (step.subject, step.action, step.object, step.preposition, step.object2)
        assert got == expected, sentence


def test_parse_subject_defaults_to_user():
    assert parse_s2r("Tap save").subject == "user"
    assert parse_s2r("The user taps save").subject == "user"


def test_object2_implies_preposition():
    for sentence, _ in SLOT_SUITE:
        step = parse_s2r(sentence)
        if step.object2 is not None:
            assert step.preposition is not None


def test_unparseable_step_raises():
    with pytest.raises(UnparseableStepError) as info:
        parse_s2r("The app crashed badly")
    assert info.value.sentence == "The app crashed badly"


def test_render_preserves_slot_words_in_order():
    for sentence, _ in SLOT_SUITE:
        step = parse_s2r(sentence)
        rendered = render_step(step)
        for word in (step.object or "").split():
            assert word in rendered
        pieces = [step.subject, step.action, step.object, step.preposition or "", step.object2 or ""]
        cursor = 0
        for piece in pieces:
            for word in piece.split():
                found = rendered.find(word, cursor)
                assert found >= 0
                cursor = found


def test_load_report_schema(tmp_path):
    path = tmp_path / "r1.json"
    path.write_text(
        json.dumps(
            {
                "report_id": "r1",
                "title": "Crash on save",
                "body": "Tap save. The app crashes.",
                "ground_truth": ["ui/Editor.java"],
            }
        )
    )
    report = load_report(path)
    assert report.report_id == "r1"
    assert report.ground_truth == {"ui/Editor.java"}
    assert isinstance(report, BugReport)


def test_load_report_requires_id(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"title": "x"}')
    with pytest.raises(InputError):
        load_report(path)
