"""GBNF grammar emission for constrained decoding, plus a checker.

:func:`emit_grammar` writes a line-oriented grammar for the six-phase
format. :func:`grammar_accepts` reads that GBNF subset back, inlines the
(non-recursive) rules into a regular expression and matches a document
against it.

Free-text lines inside a section may not start with ``#`` or ``**``, so
labelled fields are the only bold lines. That keeps every section to a
single parse and makes the grammar stricter than the validator: anything
the grammar accepts, the validator accepts too.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .model import DOUBT_TYPES, FALLACY_SETS, title_of
from .validator import ValidatorConfig


def _lit(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _ci(word: str) -> str:
    """Case-insensitive spelling of ``word`` as a sequence of classes."""
    return " ".join(f"[{c.upper()}{c.lower()}]" if c.isalpha() else _lit(c) for c in word)


def _field(rule: str, labels: tuple[str, ...], text_rule: str) -> str:
    names = " | ".join(_lit("**" + label) for label in labels)
    return f"{rule} ::= ( {names} ) label-gloss label-close {text_rule}"


def emit_grammar(config: ValidatorConfig = ValidatorConfig()) -> str:
    """GBNF text for traces that pass :func:`validate` under ``config``."""
    doubt_forms = []
    for key in DOUBT_TYPES:
        doubt_forms += [_lit(title_of(key)), _lit(key)]

    if config.universal_rule == "strict":
        # the rule may wrap, as long as it stays inside one sentence
        rule_text = (
            "[ \\t]* ( [^\\n]* [^a-zA-Z0-9_\\n] )? wherever rule-gap ( rule-span rule-gap )? there "
            "( [^a-zA-Z0-9_\\n] [^\\n]* )? \"\\n\""
        )
    else:
        rule_text = (
            "[ \\t]* ( [^\\n]* [^a-zA-Z0-9_\\n] )? wherever "
            "[^a-zA-Z0-9_\\n]* [a-zA-Z0-9_] [^\\n]* \"\\n\""
        )

    sets = ["canonical", "alternate"] if config.fallacy_set == "either" else [config.fallacy_set]
    names = sorted({n for s in sets for n in FALLACY_SETS[s]}, key=lambda n: (len(n), n))

    lines = [
        "# Six-phase Nyaya reasoning trace.",
        "# Phases appear once each, in canonical order. Free-text lines may not",
        "# start with '#' (no stray headers) or '**' (bold is reserved for labels).",
        "",
        "root ::= lead samshaya pramana pancha-avayava tarka hetvabhasa nirnaya",
        "",
    ]
    if config.require_leading_samshaya:
        lines += [
            "lead ::= frontmatter? rule-line* problem-block?",
            'rule-line ::= [ \\t]* "\\n" | "---" [ \\t]* "\\n"',
            'frontmatter ::= "---" [ \\t]* "\\n" fm-line* "---" [ \\t]* "\\n"',
            'fm-line ::= ( [^-\\n] [^\\n]* | "-" [^-\\n] [^\\n]* | "--" [^-\\n] [^\\n]* | "-" | "--" )? "\\n"',
            f'problem-block ::= "#" [ \\t]+ {_ci("problem")} ( [^a-zA-Z0-9_\\n] [^\\n]* )? "\\n" lead-line*',
            'lead-line ::= ( [^#\\n] [^\\n]* | "#" [^#\\n] [^\\n]* | "#" )? "\\n"',
        ]
    else:
        lines.append("lead ::= lead-line*")
        lines.append('lead-line ::= ( [^#\\n] [^\\n]* | "#" [^#\\n] [^\\n]* | "#" )? "\\n"')
    lines += [
        "",
        "# shared line shapes",
        'misc ::= ( [^#*\\n] [^\\n]* | "*" [^*\\n] [^\\n]* | "*" )? "\\n"',
        'blank ::= [ \\t]* "\\n"',
        'content-line ::= [ \\t]* ( [^#*\\n \\t-] [^\\n]* | "-" ( [^-\\n] [^\\n]* )? | "*" [^*\\n] [^\\n]* ) "\\n"',
        'header-gloss ::= [ \\t]* ( "(" [^\\n]* )?',
        'label-gloss ::= ( [ \\t]* "(" [^)\\n]* ")" )?',
        'label-close ::= "**:" | ":**"',
        'text ::= [ \\t]* ( [^ \\t\\n] [^\\n]* "\\n" | "\\n" content-line )',
        'any-text ::= [^\\n]* "\\n"',
        "",
        "# Samshaya",
        'samshaya ::= "## Samshaya" header-gloss "\\n" misc* doubt-field doubt-end justification misc*',
        _field("doubt-field", ("Doubt Type",), '[ \\t]* "**"? doubt-type "**"? doubt-gloss'),
        "doubt-type ::= " + " | ".join(doubt_forms),
        'doubt-gloss ::= [ \\t]* ( "(" [^)\\n]* ")" [ \\t]* )? "\\n" | [ \\t]* "(" [^)\\n]* "\\n" [^)\\n]* ")" [ \\t]* "\\n"',
        "doubt-end ::= ( blank misc* )?",
        _field("justification", ("Justification",), "text"),
        "",
        "# Pramana: all four sources, each with at least one content line",
        'pramana ::= "## Pramana" header-gloss "\\n" misc* pratyaksha anumana upamana shabda',
    ]
    for kind in ("pratyaksha", "anumana", "upamana", "shabda"):
        lines.append(f'{kind} ::= "### {title_of(kind)}" header-gloss "\\n" blank* content-line misc*')
    lines += [
        "",
        "# Pancha Avayava: one or more complete five-member syllogisms",
        'pancha-avayava ::= "## Pancha Avayava" header-gloss "\\n" misc* syllogism+',
        'syllogism ::= "### Syllogism" ( [^a-zA-Z0-9_\\n] [^\\n]* )? "\\n" misc* '
        "pratijna misc* hetu misc* udaharana misc* upanaya misc* nigamana misc*",
        _field("pratijna", ("Pratijna",), "text"),
        _field("hetu", ("Hetu",), "text"),
        _field("udaharana", ("Udaharana",), "universal-rule"),
        f"universal-rule ::= {rule_text}",
        *(
            [
                'rule-gap ::= [^a-zA-Z0-9_.!?\\n] | "\\n" [ \\t]*',
                'rule-span ::= span-start ( [^.!?\\n] | "\\n" [ \\t]* span-start )*',
                "span-start ::= [^#*.!?\\n \\t-]",
            ]
            if config.universal_rule == "strict"
            else []
        ),
        f"wherever ::= {_ci('wherever')}",
        f"there ::= {_ci('there')}",
        _field("upanaya", ("Upanaya",), "text"),
        _field("nigamana", ("Nigamana",), "text"),
        "",
        "# Tarka: four-field form (Analysis required) or a single Test",
        'tarka ::= "## Tarka" header-gloss "\\n" misc* ( four-field | test-field misc* )',
        "four-field ::= ( hypothesis misc* )? ( consequence misc* )? analysis misc* ( resolution misc* )?",
        _field("hypothesis", ("Hypothesis",), "any-text"),
        _field("consequence", ("Consequence",), "any-text"),
        _field("analysis", ("Analysis",), "text"),
        _field("resolution", ("Resolution",), "any-text"),
        _field("test-field", ("Test",), "text"),
        "",
        "# Hetvabhasa: five fallacy checks in set order, as check lines or YAML keys",
        'hetvabhasa ::= "## Hetvabhasa" header-gloss "\\n" misc* fallacy-checks misc*',
        "fallacy-checks ::= " + " | ".join(f"{s}-checks" for s in sets),
    ]
    for s in sets:
        members = " blank* ".join(f"check-{n}" for n in FALLACY_SETS[s])
        lines.append(f"{s}-checks ::= {members}")
    for n in names:
        lines.append(
            f'check-{n} ::= [ \\t]* ( "Check for " | "- " )? ( {_lit(title_of(n))} | {_lit(n)} ) '
            '[ \\t]* ( "(" [^)\\n]* ")" [ \\t]* )? ":" [^\\n]* "\\n"'
        )
    lines += [
        "",
        "# Nirnaya",
        'nirnaya ::= "## Nirnaya" header-gloss "\\n" misc* ( status misc* )? final-answer misc* '
        "justification misc* ( confidence misc* )?",
        _field("status", ("Status",), "any-text"),
        _field("final-answer", ("Final Answer", "Answer"), "text"),
        _field("confidence", ("Confidence",), "any-text"),
        "",
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------- acceptor

class GrammarError(ValueError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<literal>"(?:[^"\\]|\\.)*")
  | (?P<cls>\[(?:[^\]\\]|\\.)*\])
  | (?P<name>[a-zA-Z][a-zA-Z0-9-]*)
  | (?P<op>::=|[()|*+?])
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "]": "]", "[": "[", "-": "-", "^": "^"}


def _unescape(body: str) -> list[tuple[str, bool]]:
    """Characters of a literal or class body, flagged when escaped."""
    out, i = [], 0
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body):
            if body[i + 1] not in _ESCAPES:
                raise GrammarError(f"unsupported escape \\{body[i + 1]}")
            out.append((_ESCAPES[body[i + 1]], True))
            i += 2
        else:
            out.append((body[i], False))
            i += 1
    return out


def _class_regex(token: str) -> str:
    chars = _unescape(token[1:-1])
    negate = bool(chars) and chars[0] == ("^", False)
    if negate:
        chars = chars[1:]
    parts, i = [], 0
    while i < len(chars):
        ch = chars[i][0]
        if i + 2 < len(chars) and chars[i + 1] == ("-", False):
            parts.append(re.escape(ch) + "-" + re.escape(chars[i + 2][0]))
            i += 3
        else:
            parts.append(re.escape(ch))
            i += 1
    return "[" + ("^" if negate else "") + "".join(parts) + "]"


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GrammarError(f"cannot read grammar at offset {pos}: {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.lastgroup not in ("space", "comment"):
            tokens.append((m.lastgroup, m.group()))
    return tokens


def _parse_rules(text: str) -> dict[str, list[tuple[str, str]]]:
    tokens = _tokenize(text)
    rules: dict[str, list[tuple[str, str]]] = {}
    i = 0
    while i < len(tokens):
        if tokens[i][0] != "name" or i + 1 >= len(tokens) or tokens[i + 1] != ("op", "::="):
            raise GrammarError(f"expected a rule definition near {tokens[i][1]!r}")
        name, i = tokens[i][1], i + 2
        start = i
        while i < len(tokens) and not (
            tokens[i][0] == "name" and i + 1 < len(tokens) and tokens[i + 1] == ("op", "::=")
        ):
            i += 1
        if name in rules:
            raise GrammarError(f"rule {name} defined twice")
        rules[name] = tokens[start:i]
    if "root" not in rules:
        raise GrammarError("grammar has no root rule")
    return rules


def _compile(rules: dict[str, list[tuple[str, str]]]) -> str:
    cache: dict[str, str] = {}
    active: set[str] = set()

    def rule(name: str) -> str:
        if name in cache:
            return cache[name]
        if name not in rules:
            raise GrammarError(f"undefined rule {name}")
        if name in active:
            raise GrammarError(f"rule {name} is recursive; only regular grammars are supported")
        active.add(name)
        body, rest = alternation(rules[name], 0)
        if rest != len(rules[name]):
            raise GrammarError(f"unbalanced parentheses in rule {name}")
        active.discard(name)
        cache[name] = body
        return body

    def alternation(tokens, i):
        branches = []
        seq, i = sequence(tokens, i)
        branches.append(seq)
        while i < len(tokens) and tokens[i] == ("op", "|"):
            seq, i = sequence(tokens, i + 1)
            branches.append(seq)
        return ("(?:" + "|".join(branches) + ")" if len(branches) > 1 else branches[0]), i

    def sequence(tokens, i):
        items = []
        while i < len(tokens) and tokens[i] not in (("op", "|"), ("op", ")")):
            kind, value = tokens[i]
            if kind == "literal":
                atom = re.escape("".join(c for c, _ in _unescape(value[1:-1])))
                i += 1
            elif kind == "cls":
                atom = _class_regex(value)
                i += 1
            elif kind == "name":
                atom = "(?:" + rule(value) + ")"
                i += 1
            elif value == "(":
                inner, i = alternation(tokens, i + 1)
                if i >= len(tokens) or tokens[i] != ("op", ")"):
                    raise GrammarError("missing closing parenthesis")
                atom = "(?:" + inner + ")"
                i += 1
            else:
                raise GrammarError(f"unexpected {value!r}")
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "*+?":
                if not atom.startswith("(?:") and len(atom) > 1 and not atom.startswith("["):
                    atom = "(?:" + atom + ")"
                atom += tokens[i][1]
                i += 1
            items.append(atom)
        return "".join(items), i

    return rule("root")


@lru_cache(maxsize=16)
def compile_grammar(grammar: str) -> re.Pattern:
    """Regular expression equivalent to the root rule of ``grammar``."""
    return re.compile(_compile(_parse_rules(grammar)))


def grammar_accepts(grammar: str, text: str) -> bool:
    """Whether the whole of ``text`` derives from the grammar's root."""
    text = text.replace("\r\n", "\n")
    if not text.endswith("\n"):
        text += "\n"
    return compile_grammar(grammar).fullmatch(text) is not None
