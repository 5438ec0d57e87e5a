"""Test-name analysis: identifier splitting, lexicon POS tagging, Wu-Palmer
similarity over a verb is-a tree and read/write classification."""

from __future__ import annotations

import enum
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

from .errors import SchemaError

TAXONOMY_ENV = "WEBTESTDEPS_TAXONOMY"
LEXICON_ENV = "WEBTESTDEPS_LEXICON"

STOP_WORDS = frozenset({"test"})
SEED_VERBS = ("create", "read", "update", "delete")
_WORD = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+")


class Pos(str, enum.Enum):
    VERB = "VERB"
    NOUN = "NOUN"
    ADJ = "ADJ"
    ADV = "ADV"


class RWClass(str, enum.Enum):
    READ = "READ"
    WRITE = "WRITE"
    UNCLASSIFIED = "UNCLASSIFIED"


class DobjMode(str, enum.Enum):
    FIRST_NOUN = "first-noun"
    LAST_NOUN_OF_LEADING_COMPOUND = "last-noun-of-leading-compound"


DEFAULT_DOBJ_MODE = DobjMode.LAST_NOUN_OF_LEADING_COMPOUND


def split_identifier(name: str) -> list[str]:
    """Split on case changes, digits and underscores; drop digits and stop words.

    >>> split_identifier("searchUserTest")
    ['search', 'User']
    >>> split_identifier("add_URLEntry2Test")
    ['add', 'URL', 'Entry']
    """
    return [
        tok
        for tok in _WORD.findall(name)
        if not tok.isdigit() and tok.lower() not in STOP_WORDS
    ]


def _data_text(filename: str) -> str:
    return resources.files("webtestdeps").joinpath("data").joinpath(filename).read_text("utf-8")


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


class PosLexicon:
    """Token -> part-of-speech lookup; unknown tokens are nouns."""

    def __init__(self, entries: Mapping[str, tuple[Pos, ...]]):
        self._entries = {tok.lower(): tuple(tags) for tok, tags in entries.items()}
        for verb in SEED_VERBS:
            tags = self._entries.get(verb, ())
            self._entries[verb] = (Pos.VERB, *(t for t in tags if t is not Pos.VERB))

    @classmethod
    def parse(cls, text: str) -> "PosLexicon":
        entries: dict[str, tuple[Pos, ...]] = {}
        for lineno, fields in _content_lines(text):
            if len(fields) < 2:
                raise SchemaError(f"lexicon line {lineno}: expected '<token> <POS>...'")
            try:
                entries[fields[0]] = tuple(Pos(tag.upper()) for tag in fields[1:])
            except ValueError:
                raise SchemaError(f"lexicon line {lineno}: unknown POS in {fields[1:]}") from None
        return cls(entries)

    @classmethod
    def load(cls, path: str | None = None) -> "PosLexicon":
        path = path or os.environ.get(LEXICON_ENV)
        if path:
            with open(path, encoding="utf-8") as fh:
                return cls.parse(fh.read())
        return default_lexicon()

    def tags(self, token: str) -> tuple[Pos, ...]:
        return self._entries.get(token.lower(), (Pos.NOUN,))

    def __getitem__(self, token: str) -> Pos:
        return self.tags(token)[0]

    def tag(self, tokens: Iterable[str]) -> list[Pos]:
        """Tag a token sequence; words that can be nouns are nouns after the verb."""
        out: list[Pos] = []
        verb_seen = False
        for tok in tokens:
            tags = self.tags(tok)
            pos = Pos.NOUN if verb_seen and Pos.NOUN in tags else tags[0]
            verb_seen = verb_seen or pos is Pos.VERB
            out.append(pos)
        return out


class VerbTaxonomy:
    """Single-rooted is-a tree of verbs; the root has depth 1."""

    def __init__(self, parents: Mapping[str, str | None], groups: Mapping[RWClass, Iterable[str]]):
        roots = [v for v, p in parents.items() if p is None]
        if len(roots) != 1:
            raise SchemaError(f"taxonomy must have exactly one root, found {roots}")
        self.root = roots[0]
        self.parents = dict(parents)
        for child, parent in self.parents.items():
            if parent is not None and parent not in self.parents:
                raise SchemaError(f"taxonomy: parent {parent!r} of {child!r} is not declared")
        self._paths: dict[str, tuple[str, ...]] = {}
        for node in self.parents:
            self._path(node)
        self.groups = {cls: frozenset(verbs) for cls, verbs in groups.items()}
        for cls in (RWClass.READ, RWClass.WRITE):
            if not self.groups.get(cls):
                raise SchemaError(f"taxonomy declares no {cls.value.lower()} group")
            missing = self.groups[cls] - set(self.parents)
            if missing:
                raise SchemaError(f"group verbs missing from taxonomy: {sorted(missing)}")

    def _path(self, node: str) -> tuple[str, ...]:
        """Root-to-node path."""
        if node in self._paths:
            return self._paths[node]
        chain = [node]
        seen = {node}
        while (parent := self.parents[chain[-1]]) is not None:
            if parent in seen:
                raise SchemaError(f"taxonomy has a cycle through {parent!r}")
            seen.add(parent)
            chain.append(parent)
        path = tuple(reversed(chain))
        self._paths[node] = path
        return path

    @classmethod
    def parse(cls, text: str) -> "VerbTaxonomy":
        parents: dict[str, str | None] = {}
        groups: dict[RWClass, set[str]] = {RWClass.READ: set(), RWClass.WRITE: set()}
        for lineno, fields in _content_lines(text):
            if fields[0] == "group":
                if len(fields) < 3 or fields[1].lower() not in ("read", "write"):
                    raise SchemaError(f"taxonomy line {lineno}: expected 'group read|write <verb>...'")
                groups[RWClass(fields[1].upper())].update(f.lower() for f in fields[2:])
            elif len(fields) in (1, 2):
                child = fields[0].lower()
                if child in parents:
                    raise SchemaError(f"taxonomy line {lineno}: {child!r} declared twice")
                parents[child] = fields[1].lower() if len(fields) == 2 else None
            else:
                raise SchemaError(f"taxonomy line {lineno}: expected '<verb> [<parent>]'")
        return cls(parents, groups)

    @classmethod
    def load(cls, path: str | None = None) -> "VerbTaxonomy":
        path = path or os.environ.get(TAXONOMY_ENV)
        if path:
            with open(path, encoding="utf-8") as fh:
                return cls.parse(fh.read())
        return default_taxonomy()

    def __contains__(self, verb: object) -> bool:
        return isinstance(verb, str) and verb.lower() in self.parents

    def depth(self, verb: str) -> int:
        return len(self._path(verb.lower()))

    def lcs(self, a: str, b: str) -> str:
        """Deepest common ancestor (a node is its own ancestor)."""
        common = self.root
        for x, y in zip(self._path(a.lower()), self._path(b.lower())):
            if x != y:
                break
            common = x
        return common

    def wup(self, a: str, b: str) -> float:
        return 2 * self.depth(self.lcs(a, b)) / (self.depth(a) + self.depth(b))


@lru_cache(maxsize=None)
def default_taxonomy() -> VerbTaxonomy:
    return VerbTaxonomy.parse(_data_text("taxonomy.txt"))


@lru_cache(maxsize=None)
def default_lexicon() -> PosLexicon:
    return PosLexicon.parse(_data_text("lexicon.txt"))


def group_scores(verb: str, taxonomy: VerbTaxonomy) -> dict[RWClass, float]:
    """Best WUP similarity of ``verb`` to any anchor verb of each group."""
    if verb not in taxonomy:
        return {}
    return {
        cls: max(taxonomy.wup(verb, anchor) for anchor in anchors)
        for cls, anchors in taxonomy.groups.items()
    }


def classify_verb(verb: str, taxonomy: VerbTaxonomy) -> RWClass:
    scores = group_scores(verb, taxonomy)
    if not scores:
        return RWClass.UNCLASSIFIED
    read, write = scores[RWClass.READ], scores[RWClass.WRITE]
    if read == write:
        return RWClass.UNCLASSIFIED
    return RWClass.READ if read > write else RWClass.WRITE


@dataclass(frozen=True)
class NameAnalysis:
    name: str
    tokens: tuple[str, ...]
    tags: tuple[Pos, ...]
    verb: str | None
    direct_object: str | None
    nouns: frozenset[str]
    rw_class: RWClass
    dobj_mode: DobjMode

    def noun_keys(self) -> frozenset[str]:
        return frozenset(n.lower() for n in self.nouns)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tokens": list(self.tokens),
            "verb": self.verb,
            "direct_object": self.direct_object,
            "nouns": sorted(self.nouns),
            "rw_class": self.rw_class.value,
        }


def analyze_name(
    name: str,
    lexicon: PosLexicon,
    taxonomy: VerbTaxonomy,
    dobj_mode: DobjMode | str = DEFAULT_DOBJ_MODE,
) -> NameAnalysis:
    dobj_mode = DobjMode(dobj_mode)
    tokens = split_identifier(name)
    tags = lexicon.tag(tokens)
    verb_at = next((i for i, t in enumerate(tags) if t is Pos.VERB), None)
    verb = tokens[verb_at].lower() if verb_at is not None else None

    dobj = None
    if verb_at is not None:
        start = next(
            (i for i in range(verb_at + 1, len(tokens)) if tags[i] is Pos.NOUN), None
        )
        if start is not None:
            end = start
            if dobj_mode is DobjMode.LAST_NOUN_OF_LEADING_COMPOUND:
                while end + 1 < len(tokens) and tags[end + 1] is Pos.NOUN:
                    end += 1
            dobj = tokens[end]

    return NameAnalysis(
        name=name,
        tokens=tuple(tokens),
        tags=tuple(tags),
        verb=verb,
        direct_object=dobj,
        nouns=frozenset(t for t, p in zip(tokens, tags) if p is Pos.NOUN),
        rw_class=classify_verb(verb, taxonomy) if verb else RWClass.UNCLASSIFIED,
        dobj_mode=dobj_mode,
    )
