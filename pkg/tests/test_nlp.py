from __future__ import annotations

from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

from webtestdeps.errors import SchemaError
from webtestdeps.nlp import (
    LEXICON_ENV,
    TAXONOMY_ENV,
    DobjMode,
    Pos,
    PosLexicon,
    RWClass,
    VerbTaxonomy,
    analyze_name,
    classify_verb,
    default_lexicon,
    default_taxonomy,
    group_scores,
    split_identifier,
)

import oracles

TAXONOMY_TEXT = resources.files("webtestdeps").joinpath("data").joinpath("taxonomy.txt").read_text()


@pytest.fixture(scope="module")
def lex():
    return default_lexicon()


@pytest.fixture(scope="module")
def tax():
    return default_taxonomy()


class TestSplit:
    @pytest.mark.parametrize(
        "name, tokens",
        [
            ("searchUserTest", ["search", "User"]),
            ("addCourseEventTest", ["add", "Course", "Event"]),
            ("test_add_user", ["add", "user"]),
            ("TestAddURLEntry2", ["Add", "URL", "Entry"]),
            ("Test", []),
        ],
    )
    def test_split(self, name, tokens):
        assert split_identifier(name) == tokens

    @given(st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,20}", fullmatch=True))
    def test_stop_word_never_survives(self, name):
        assert all(t.lower() != "test" for t in split_identifier(name))


class TestAnalyze:
    def test_search_user(self, lex, tax):
        a = analyze_name("searchUserTest", lex, tax)
        assert a.tokens == ("search", "User")
        assert a.verb == "search"
        assert a.rw_class is RWClass.READ
        assert a.direct_object == "User"

    def test_add_course_event_first_noun(self, lex, tax):
        a = analyze_name("addCourseEventTest", lex, tax, DobjMode.FIRST_NOUN)
        assert a.nouns == {"Course", "Event"}
        assert a.direct_object == "Course"

    def test_add_course_event_default_mode(self, lex, tax):
        a = analyze_name("addCourseEventTest", lex, tax)
        assert a.dobj_mode is DobjMode.LAST_NOUN_OF_LEADING_COMPOUND
        assert a.direct_object == "Event"

    def test_enrol_user(self, lex, tax):
        a = analyze_name("enrolUserTest", lex, tax)
        assert a.verb == "enrol"
        assert a.rw_class is RWClass.WRITE

    def test_no_verb(self, lex, tax):
        a = analyze_name("userProfileTest", lex, tax)
        assert a.verb is None and a.direct_object is None
        assert a.rw_class is RWClass.UNCLASSIFIED

    def test_noun_alternative_after_verb(self, lex, tax):
        # "view" is a verb first, but a noun once a verb has been seen
        a = analyze_name("checkViewTest", lex, tax)
        assert a.verb == "check" and a.direct_object == "View"

    def test_adjective_skipped_for_dobj(self, lex, tax):
        a = analyze_name("addNewCourseTest", lex, tax)
        assert a.direct_object == "Course"
        assert "New" not in a.nouns


class TestClassify:
    @pytest.mark.parametrize("seed, group", [
        ("read", RWClass.READ), ("create", RWClass.WRITE),
        ("update", RWClass.WRITE), ("delete", RWClass.WRITE),
    ])
    def test_seed_verbs_own_group_with_score_one(self, tax, seed, group):
        assert classify_verb(seed, tax) is group
        assert group_scores(seed, tax)[group] == 1.0

    @pytest.mark.parametrize("verb, group", [
        ("add", RWClass.WRITE), ("search", RWClass.READ), ("remove", RWClass.WRITE),
        ("enrol", RWClass.WRITE), ("run", RWClass.UNCLASSIFIED), ("frobnicate", RWClass.UNCLASSIFIED),
    ])
    def test_examples(self, tax, verb, group):
        assert classify_verb(verb, tax) is group

    def test_against_brute_force_oracle(self, tax):
        parents, groups = oracles.parse_tree(TAXONOMY_TEXT)
        for verb in parents:
            assert classify_verb(verb, tax).value == oracles.classify(parents, groups, verb), verb
            for other in ("read", "create", "delete"):
                assert tax.wup(verb, other) == pytest.approx(oracles.wup(parents, verb, other))

    def test_wup_values(self, tax):
        # search: act > transfer-info > search (depth 3); read: depth 3; LCS transfer-info (2)
        assert tax.wup("search", "read") == pytest.approx(2 * 2 / 6)
        assert tax.wup("remove", "delete") == pytest.approx(2 * 3 / 7)
        assert tax.wup("read", "read") == 1.0


class TestResources:
    def test_seed_verbs_forced(self):
        lex = PosLexicon.parse("create NOUN\n")
        assert lex["create"] is Pos.VERB
        assert lex["unknownword"] is Pos.NOUN

    @pytest.mark.parametrize("text", [
        "act\nother\ngroup read act\ngroup write act\n",          # two roots
        "act\nread act\ngroup read read\n",                        # no write group
        "act\nread ghost\ngroup read read\ngroup write read\n",   # undeclared parent
        "act\nread act\nread act\ngroup read read\ngroup write read\n",
        "act\ngroup read missing\ngroup write act\n",
    ])
    def test_bad_taxonomy(self, text):
        with pytest.raises(SchemaError):
            VerbTaxonomy.parse(text)

    def test_bad_lexicon(self):
        with pytest.raises(SchemaError):
            PosLexicon.parse("word PRONOUN\n")

    def test_env_overrides(self, tmp_path, monkeypatch):
        tree = tmp_path / "tax.txt"
        tree.write_text("root\nread root\nwrite root\nlook read\ngroup read read\ngroup write write\n")
        lexicon = tmp_path / "lex.txt"
        lexicon.write_text("look VERB\n")
        monkeypatch.setenv(TAXONOMY_ENV, str(tree))
        monkeypatch.setenv(LEXICON_ENV, str(lexicon))
        tax, lex = VerbTaxonomy.load(), PosLexicon.load()
        a = analyze_name("lookItemTest", lex, tax)
        assert a.verb == "look" and a.rw_class is RWClass.READ
