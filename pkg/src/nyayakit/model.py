"""Domain types for six-phase Nyaya reasoning traces.

Every enumeration is stored as a snake_case key. Surface forms found in
model output ("Vipratipatti (Conflicting possibilities)") are mapped onto
keys with :func:`normalize_enum_token`. Values outside a canonical set are
kept as :class:`Invalid` so that validators can report them verbatim.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Union

PHASES = ("samshaya", "pramana", "pancha_avayava", "tarka", "hetvabhasa", "nirnaya")

PHASE_TITLES = {
    "samshaya": "Samshaya",
    "pramana": "Pramana",
    "pancha_avayava": "Pancha Avayava",
    "tarka": "Tarka",
    "hetvabhasa": "Hetvabhasa",
    "nirnaya": "Nirnaya",
}

DOUBT_TYPES = (
    "samana_dharma_upapatti",
    "aneka_dharma_upapatti",
    "vipratipatti",
    "upalabdhi_avyavastha",
    "anupalabdhi_avyavastha",
)

PRAMANA_KINDS = ("pratyaksha", "anumana", "upamana", "shabda")

ANUMANA_SUBTYPES = ("purvavat", "sheshavat", "samanyatodrishta")

FALLACY_SETS = {
    "canonical": ("savyabhichara", "viruddha", "prakaranasama", "sadhyasama", "kalaatita"),
    "alternate": ("savyabhichara", "viruddha", "asiddha", "satpratipaksha", "badhita"),
}

# every fallacy name recognised in either naming set, in first-seen order
FALLACY_KINDS = tuple(dict.fromkeys(FALLACY_SETS["canonical"] + FALLACY_SETS["alternate"]))

SYLLOGISM_MEMBERS = ("pratijna", "hetu", "udaharana", "upanaya", "nigamana")

NIRNAYA_STATUSES = ("definitive_knowledge", "hypothesis_requiring_verification")

CONFIDENCE_LEVELS = ("high", "medium", "low")

PROBLEM_TYPES = (
    "constraint_satisfaction",
    "boolean_sat",
    "transitive_reasoning",
    "set_membership",
    "multi_step_deduction",
)

DIFFICULTIES = ("simple", "moderate", "complex")

_PAREN = re.compile(r"\([^()]*\)")
_NON_WORD = re.compile(r"[^a-z0-9]+")


def title_of(key: str) -> str:
    """Spaced title-case surface form of a snake_case key."""
    return " ".join(part.capitalize() for part in key.split("_"))


def normalize_enum_token(surface: str) -> str:
    """Map a raw enumeration surface form to its snake_case key.

    Bold markers, backticks and parenthetical glosses are dropped, accents
    are folded, and the remaining words are lowercased and joined with
    underscores. The function is total and idempotent.

    >>> normalize_enum_token("**Vipratipatti Samshaya** (Conflicting possibilities)")
    'vipratipatti_samshaya'
    """
    text = unicodedata.normalize("NFKD", surface)
    text = "".join(ch for ch in text if not unicodedata.combining(ch))
    previous = None
    while previous != text:
        previous, text = text, _PAREN.sub(" ", text)
    # an unclosed gloss runs to the end of the value
    text = text.split("(", 1)[0]
    text = _NON_WORD.sub(" ", text.lower())
    return "_".join(text.split())


@dataclass(frozen=True)
class Invalid:
    """A value that normalised to a key outside its canonical set."""

    key: str

    def __str__(self) -> str:
        return self.key


DoubtValue = Union[str, Invalid, None]


def parse_doubt_type(surface: str) -> DoubtValue:
    """Canonical doubt key, :class:`Invalid`, or None for an empty value."""
    key = normalize_enum_token(surface)
    if not key:
        return None
    return key if key in DOUBT_TYPES else Invalid(key)


@dataclass(frozen=True)
class SamshayaPhase:
    doubt_type: DoubtValue = None
    justification: str = ""
    notes: str = ""


@dataclass(frozen=True)
class PramanaBlock:
    """Content of one knowledge-source subsection."""

    content: str = ""
    subtypes: tuple[str, ...] = ()

    @property
    def is_none(self) -> bool:
        """True when the block only says there is nothing to report."""
        words = normalize_enum_token(self.content.replace("-", " "))
        return words in ("", "none", "n_a", "na", "not_applicable")


@dataclass(frozen=True)
class PramanaPhase:
    blocks: Mapping[str, PramanaBlock] = field(default_factory=lambda: MappingProxyType({}))
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", MappingProxyType(dict(self.blocks)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PramanaPhase):
            return NotImplemented
        return dict(self.blocks) == dict(other.blocks) and self.notes == other.notes

    def __hash__(self) -> int:
        return hash((tuple(self.blocks.items()), self.notes))


@dataclass(frozen=True)
class Syllogism:
    topic: str = ""
    pratijna: str = ""
    hetu: str = ""
    udaharana: str = ""
    upanaya: str = ""
    nigamana: str = ""
    notes: str = ""

    def member(self, name: str) -> str:
        return getattr(self, name)

    @property
    def missing_members(self) -> tuple[str, ...]:
        return tuple(m for m in SYLLOGISM_MEMBERS if not self.member(m).strip())

    @property
    def complete(self) -> bool:
        return not self.missing_members


@dataclass(frozen=True)
class TarkaPhase:
    form: str = "four_field"
    hypothesis: str = ""
    consequence: str = ""
    analysis: str = ""
    resolution: str = ""
    test: str = ""
    notes: str = ""

    @property
    def field_complete(self) -> bool:
        if self.form == "single_test":
            return bool(self.test.strip())
        return all(
            getattr(self, name).strip()
            for name in ("hypothesis", "consequence", "analysis", "resolution")
        )

    @property
    def premise(self) -> str:
        """The text that puts a counter-hypothesis to the test."""
        return self.test if self.form == "single_test" else self.hypothesis


@dataclass(frozen=True)
class HetvabhasaPhase:
    checks: Mapping[str, str] = field(default_factory=lambda: MappingProxyType({}))
    reasoning: str = ""
    syntax: str = "check_lines"
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "checks", MappingProxyType(dict(self.checks)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HetvabhasaPhase):
            return NotImplemented
        return (
            list(self.checks.items()) == list(other.checks.items())
            and (self.reasoning, self.syntax, self.notes)
            == (other.reasoning, other.syntax, other.notes)
        )

    def __hash__(self) -> int:
        return hash((tuple(self.checks.items()), self.reasoning, self.syntax, self.notes))

    def checked_count(self, fallacy_set: str = "either") -> int:
        """Distinct fallacies of the chosen naming set that were checked."""
        if fallacy_set == "either":
            return max(self.checked_count(name) for name in FALLACY_SETS)
        return sum(1 for kind in FALLACY_SETS[fallacy_set] if kind in self.checks)


@dataclass(frozen=True)
class NirnayaPhase:
    final_answer: str = ""
    justification: str = ""
    status_text: str = ""
    confidence_text: str = ""
    notes: str = ""

    @property
    def status(self) -> str | None:
        key = normalize_enum_token(self.status_text)
        return key if key in NIRNAYA_STATUSES else None

    @property
    def confidence(self) -> str | None:
        words = normalize_enum_token(self.confidence_text).split("_")
        return words[0] if words[0] in CONFIDENCE_LEVELS else None


@dataclass(frozen=True)
class Frontmatter:
    id: str = ""
    problem_type: str = ""
    ground_truth: str = ""
    difficulty: str | None = None
    z3_verifiable: bool | None = None
    negative_example: bool | None = None
    metadata: Mapping[str, object] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self) -> None:
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frontmatter):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key()[:6])

    def _key(self) -> tuple:
        return (
            self.id,
            self.problem_type,
            self.ground_truth,
            self.difficulty,
            self.z3_verifiable,
            self.negative_example,
            dict(self.metadata),
        )


@dataclass(frozen=True)
class NyayaTrace:
    """A parsed six-phase trace. Absent phases are None."""

    samshaya: SamshayaPhase | None = None
    pramana: PramanaPhase | None = None
    pancha_avayava: tuple[Syllogism, ...] | None = None
    tarka: TarkaPhase | None = None
    hetvabhasa: HetvabhasaPhase | None = None
    nirnaya: NirnayaPhase | None = None
    leading_text: str = ""
    pancha_avayava_notes: str = ""

    @property
    def phase_presence(self) -> tuple[bool, ...]:
        return tuple(getattr(self, name) is not None for name in PHASES)

    @property
    def syllogisms(self) -> tuple[Syllogism, ...]:
        return self.pancha_avayava or ()
