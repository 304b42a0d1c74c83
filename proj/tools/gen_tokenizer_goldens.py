#!/usr/bin/env python3
"""Regenerate data/goldens/tokenizer_goldens.jsonl.

The canonical word tokenizer is frozen by this one-time generator: it applies a
simple sentence-boundary rule, then Penn-Treebank-style word tokenization to
each sentence. The C++ tokenizer must reproduce the (text, tokens) pairs this
script emits; the golden file is the contract, this script is its generator.

Run from the repository root:  python3 tools/gen_tokenizer_goldens.py
"""

import json
import re
import sys
from pathlib import Path

# --- Treebank-style word tokenizer -----------------------------------------
# Ordered substitution rules; the final token stream is the whitespace split
# of the rewritten string, so only separation points matter, not spacing.

STARTING_QUOTES = [
    (re.compile("([«“‘„]|[`]+)", re.U), r" \1 "),
    (re.compile(r"^\""), r"``"),
    (re.compile(r"(``)"), r" \1 "),
    (re.compile(r"([ \(\[{<])(\"|\'{2})"), r"\1 `` "),
    (re.compile(r"(?i)(\')(?!re|ve|ll|m|t|s|d|n)(\w)\b", re.U), r"\1 \2"),
]

PUNCTUATION = [
    (re.compile(r'([^\.])(\.)([\]\)}>"\'' "»”’ " r"]*)\s*$"), r"\1 \2 \3 "),
    (re.compile(r"([:,])([^\d])"), r" \1 \2"),
    (re.compile(r"([:,])$"), r" \1 "),
    (re.compile(r"\.{2,}", re.U), r" \g<0> "),
    (re.compile(r"[;@#$%&]"), r" \g<0> "),
    (re.compile(r'([^\.])(\.)([\]\)}>"\']*)\s*$'), r"\1 \2\3 "),
    (re.compile(r"[?!]"), r" \g<0> "),
    (re.compile(r"([^'])' "), r"\1 ' "),
    (re.compile(r"[*]", re.U), r" \g<0> "),
]

PARENS_BRACKETS = (re.compile(r"[\]\[\(\)\{\}\<\>]"), r" \g<0> ")

DOUBLE_DASHES = (re.compile(r"--"), r" -- ")

ENDING_QUOTES = [
    (re.compile("([»”’])", re.U), r" \1 "),
    (re.compile(r"''"), " '' "),
    (re.compile(r'"'), " '' "),
    (re.compile(r"([^' ])('[sS]|'[mM]|'[dD]|') "), r"\1 \2 "),
    (re.compile(r"([^' ])('ll|'LL|'re|'RE|'ve|'VE|n't|N'T) "), r"\1 \2 "),
]

CONTRACTIONS2 = [
    re.compile(p)
    for p in [
        r"(?i)\b(can)(not)\b",
        r"(?i)\b(d)('ye)\b",
        r"(?i)\b(gim)(me)\b",
        r"(?i)\b(gon)(na)\b",
        r"(?i)\b(got)(ta)\b",
        r"(?i)\b(lem)(me)\b",
        r"(?i)\b(more)('n)\b",
        r"(?i)\b(wan)(na)(?=\s)",
    ]
]

CONTRACTIONS3 = [re.compile(p) for p in [r"(?i) ('t)(is)\b", r"(?i) ('t)(was)\b"]]


def treebank_tokenize(text: str) -> list:
    for regexp, substitution in STARTING_QUOTES:
        text = regexp.sub(substitution, text)
    for regexp, substitution in PUNCTUATION:
        text = regexp.sub(substitution, text)
    regexp, substitution = PARENS_BRACKETS
    text = regexp.sub(substitution, text)
    regexp, substitution = DOUBLE_DASHES
    text = regexp.sub(substitution, text)
    text = " " + text + " "
    for regexp, substitution in ENDING_QUOTES:
        text = regexp.sub(substitution, text)
    for regexp in CONTRACTIONS2:
        text = regexp.sub(r" \1 \2 ", text)
    for regexp in CONTRACTIONS3:
        text = regexp.sub(r" \1 \2 ", text)
    return text.split()


# --- Sentence boundary rule -------------------------------------------------
# A boundary falls after a run of [.?!], plus any directly attached closing
# characters, when whitespace follows and the next visible character opens a
# sentence (uppercase Latin or Cyrillic letter, digit, or opening quote or
# bracket). No abbreviation list: "Dr. Smith" splits after "Dr.".

CLOSERS = set('"\')]}»”’')
OPEN_PUNCT = set("\"'(«“‘[{")


def _is_upper_or_digit(ch: str) -> bool:
    if ch.isdigit():
        return True
    if "A" <= ch <= "Z":
        return True
    if "А" <= ch <= "Я" or ch == "Ё":
        return True
    return False


def split_sentences(text: str) -> list:
    sentences = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in ".?!":
            j = i
            while j < n and text[j] in ".?!":
                j += 1
            k = j
            while k < n and text[k] in CLOSERS:
                k += 1
            m = k
            while m < n and text[m].isspace():
                m += 1
            if m > k and m < n and (_is_upper_or_digit(text[m]) or text[m] in OPEN_PUNCT):
                sentences.append(text[start:k])
                start = m
                i = m
                continue
            i = k if k > i else i + 1
        else:
            i += 1
    if start < n:
        sentences.append(text[start:])
    return [s for s in sentences if s.strip()]


def tokenize(text: str) -> list:
    return [tok for sent in split_sentences(text) for tok in treebank_tokenize(sent)]


# --- Golden corpus ----------------------------------------------------------

INPUTS = [
    "",
    "   ",
    "fire engulfed, rapidly destroyed",
    "Трагедия музея",
    "tragedy",
    "fire engulfed",
    "He came. She left.",
    "The fire rapidly destroyed the museum.",
    "Wait... what?",
    "Is this a tragedy?!",
    "don't",
    "I can't believe it isn't true.",
    "They cannot win.",
    "We're gonna need more sources.",
    "the museum's collection",
    "the players' union",
    "It's the editors' decision.",
    "'tis the season",
    "He said \"never again\" twice.",
    "\"Quoted at the start,\" she wrote.",
    "“Hello,” he said.",
    "«Трагедия музея» — сказал он.",
    "He said (quietly).",
    "[1] (see note)",
    "A 50% rise; costs of $3,000 and 1,000 lives.",
    "Meet at 3:30 sharp.",
    "note: this is a test",
    "one -- two --- three",
    "U.S. policy experts disagree.",
    "He lives in the U.S.",
    "Dr. Smith arrived. The panel began.",
    "Это трагедия. Музей разрушен огнём.",
    "Пожар охватил здание, быстро уничтожив коллекцию.",
    "Правда ли это? Нет!",
    "Власти неоднократно жаловались на нехватку финансирования.",
    "incalculable, outraged, cultural tragedy, lobotomy",
    "openly neo-Nazi",
    "so-called \"direct evidence\"",
    "e-mail and state-of-the-art systems",
    "The vote was 52–48.",
    "Причина — халатность.",
    "A, B, and C met at No. 10.",
    "What?! How?! Why...",
    "((nested)) [brackets]",
    "trailing comma,",
    "trailing colon:",
    "5,000,000 people saw 3.14 approximations.",
    "«Где доказательства?» — спросили журналисты.",
    "The so-called ``free press'' responded.",
    "Moscow's mayor's office",
    "Q1: True (conf:70); Q2: False (conf:30); Q3: N/A",
    "Navalny's supporters chanted: \"Freedom!\"",
    "Огонь, охвативший музей, уничтожил 90% экспонатов за 6 часов.",
    "a.m. meetings end at 9 p.m. sharp",
    "#hashtag @mention & more",
    "cost: $5; value: priceless",
]


def main() -> int:
    out_path = Path(__file__).resolve().parent.parent / "data" / "goldens" / "tokenizer_goldens.jsonl"
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", encoding="utf-8") as fh:
        for text in INPUTS:
            rec = {"text": text, "tokens": tokenize(text)}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {len(INPUTS)} golden records to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
