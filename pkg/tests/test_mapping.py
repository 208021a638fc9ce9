from __future__ import annotations

import random
from collections import Counter

import pytest

from guiloc.corpus import Preprocessor
from guiloc.errors import ConfigError
from guiloc.mapping import (
    GuiContext,
    extract_gui_terms,
    gui_context,
    match_activity_files,
    match_component_files,
    match_listener_files,
)

from conftest import make_component, make_doc, make_screen, make_trace


def _settings_trace():
    return make_trace(
        "t",
        [
            make_screen(0, "com.app.MainActivity", components=[
                make_component("open_settings", text="Settings", exercised=True, action="click"),
            ]),
            make_screen(1, "com.app.SettingsActivity", window="com.app.SettingsWindow", components=[
                make_component("theme_toggle", text="Dark theme", desc="toggle theme", exercised=True, action="click"),
                make_component("font_size", text="Font size"),
            ]),
            make_screen(2, "com.app.SettingsActivity", components=[
                make_component("theme_toggle", text="Dark theme"),
            ]),
        ],
    )


def _docs():
    return [
        make_doc(0, "ui/MainActivity.java", ["main", "activity", "toolbar"], refs={"open_settings"}),
        make_doc(1, "ui/SettingsActivity.java", ["settings", "activity", "theme", "toggle"], refs={"theme_toggle", "font_size"}),
        make_doc(2, "util/ThemeManager.java", ["theme", "dark", "palette"], refs={"theme_toggle"}),
        make_doc(3, "data/NoteStore.java", ["note", "store", "database"]),
        make_doc(4, "ui/SettingsWindow.java", ["settings", "window"]),
    ]


def test_extract_terms_from_selected_sources():
    trace = _settings_trace()
    terms = extract_gui_terms(trace, 1, sources=("activity",))
    assert terms == Counter({"com": 1, "app": 1, "settings": 1, "activity": 1})


def test_extract_terms_keep_multiplicity_across_screens():
    trace = _settings_trace()
    terms = extract_gui_terms(trace, 3, sources=("component_id",))
    assert terms["theme"] == 2
    assert terms["toggle"] == 2
    assert terms["open"] == 1


def test_extract_terms_window_monotone():
    trace = _settings_trace()
    rng = random.Random(41)
    for _ in range(20):
        small = rng.randint(1, 2)
        large = rng.randint(small, 5)
        t_small = extract_gui_terms(trace, small)
        t_large = extract_gui_terms(trace, large)
        assert set(t_small) <= set(t_large)
        for term, count in t_small.items():
            assert t_large[term] >= count


def test_extract_terms_rejects_unknown_source():
    with pytest.raises(ConfigError):
        extract_gui_terms(_settings_trace(), 3, sources=("activity", "widget"))
    with pytest.raises(ConfigError):
        extract_gui_terms(_settings_trace(), 3, sources=())


def test_activity_match_uses_basenames_case_sensitively():
    trace = _settings_trace()
    docs = _docs()
    assert match_activity_files(trace, 1, docs) == {"ui/SettingsActivity.java"}
    assert match_activity_files(trace, 3, docs) == {
        "ui/MainActivity.java",
        "ui/SettingsActivity.java",
        "ui/SettingsWindow.java",
    }
    lower = [make_doc(9, "ui/settingsactivity.java", ["x"])]
    assert match_activity_files(trace, 1, lower) == set()


def test_listener_match_intersects_exercised_ids():
    trace = _settings_trace()
    docs = _docs()
    # the last screen has no exercised component
    assert match_listener_files(trace, 1, docs) == set()
    assert match_listener_files(trace, 2, docs) == {
        "ui/SettingsActivity.java",
        "util/ThemeManager.java",
    }
    assert match_listener_files(trace, 3, docs) == {
        "ui/MainActivity.java",
        "ui/SettingsActivity.java",
        "util/ThemeManager.java",
    }


def test_component_match_threshold_is_inclusive():
    pre = Preprocessor()
    trace = make_trace(
        "t",
        [
            make_screen(0, "com.app.A", components=[
                make_component("save_button", exercised=True, action="click"),
            ]),
            make_screen(1, "com.app.B"),
        ],
    )
    half = [make_doc(0, "Half.java", ["save", "unrelated"])]
    assert match_component_files(trace, 2, half, pre) == {"Half.java"}
    below = [make_doc(0, "Below.java", ["unrelated", "words"])]
    assert match_component_files(trace, 2, below, pre) == set()


def test_component_match_skips_empty_term_components():
    trace = make_trace(
        "t",
        [
            make_screen(0, "com.app.A", components=[
                make_component("", exercised=True, action="click"),
            ]),
            make_screen(1, "com.app.B"),
        ],
    )
    docs = [make_doc(0, "Any.java", ["whatever"])]
    assert match_component_files(trace, 2, docs) == set()


def test_gui_context_sets_and_window():
    trace = _settings_trace()
    ctx = gui_context(trace, 3, _docs())
    assert ctx.window_used == 3
    assert ctx.boosted == ctx.activity_files | ctx.listener_files
    assert ctx.gui_related == ctx.boosted | ctx.component_files
    assert ctx.boosted <= ctx.gui_related
    assert "ui/SettingsActivity.java" in ctx.boosted


def test_gui_context_random_sets_keep_subset_invariant():
    rng = random.Random(42)
    files = [f"f{i}.java" for i in range(12)]
    for _ in range(100):
        ctx = GuiContext(
            terms=Counter(),
            activity_files={f for f in files if rng.random() < 0.3},
            listener_files={f for f in files if rng.random() < 0.3},
            component_files={f for f in files if rng.random() < 0.3},
            window_used=rng.randint(1, 5),
        )
        assert ctx.boosted <= ctx.gui_related


def test_window_growth_never_shrinks_matches():
    trace = _settings_trace()
    docs = _docs()
    for small, large in ((1, 2), (2, 3), (1, 3), (3, 6)):
        assert match_activity_files(trace, small, docs) <= match_activity_files(trace, large, docs)
        assert match_listener_files(trace, small, docs) <= match_listener_files(trace, large, docs)
        assert match_component_files(trace, small, docs) <= match_component_files(trace, large, docs)
