"""Text utilities: sentence spans, word counting, script detection.

All functions here are deterministic and locale-independent; layout and
ingest rely on them for byte-stable output.
"""
from __future__ import annotations

import re
import unicodedata

# Terminal punctuation (Latin + fullwidth) followed by closing quotes/brackets
# and any whitespace; the whitespace is swallowed so sentence spans stay
# contiguous and concatenating spans reproduces the original string exactly.
_SENTENCE_END = re.compile(r'[.!?。！？；;]+[\'"’”」』)\]）]*\s*')

_CJK_RANGES = (
    (0x3040, 0x30FF),   # hiragana, katakana
    (0x3400, 0x4DBF),   # CJK ext A
    (0x4E00, 0x9FFF),   # CJK unified
    (0xF900, 0xFAFF),   # compatibility ideographs
    (0xAC00, 0xD7AF),   # hangul syllables
    (0xFF66, 0xFF9F),   # halfwidth katakana
)

CJK_LANGUAGE_SUBTAGS = frozenset({"zh", "ja", "ko"})


def is_cjk_language(language: str) -> bool:
    """True when the BCP-47 style tag's primary subtag is a CJK language."""
    primary = language.split("-")[0].strip().lower()
    return primary in CJK_LANGUAGE_SUBTAGS


def is_cjk_char(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in _CJK_RANGES)


def grapheme_count(text: str) -> int:
    """Non-whitespace code points after NFC normalization."""
    return sum(1 for ch in unicodedata.normalize("NFC", text) if not ch.isspace())


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Split ``text`` into sentence spans that partition it exactly.

    Spans are (start, end) character offsets; each span includes its terminal
    punctuation and trailing whitespace, so ``text[a:b]`` slices concatenate
    back to ``text``. Text with no terminal punctuation is one sentence.
    """
    if not text:
        return []
    spans: list[tuple[int, int]] = []
    pos = 0
    for match in _SENTENCE_END.finditer(text):
        end = match.end()
        if end <= pos:
            continue
        spans.append((pos, end))
        pos = end
    if pos < len(text):
        if spans and not text[pos:].strip():
            # trailing whitespace belongs to the last sentence
            start, _ = spans[-1]
            spans[-1] = (start, len(text))
        else:
            spans.append((pos, len(text)))
    return spans


def split_sentences(text: str) -> list[str]:
    return [text[a:b] for a, b in sentence_spans(text)]


def _cjk_bigram_token_count(token: str) -> int:
    """Count words in one whitespace token: CJK runs group two graphemes per
    word, any non-CJK run counts as a single word."""
    count = 0
    run = 0
    saw_latin_run = False
    for ch in token:
        if is_cjk_char(ch):
            if saw_latin_run:
                count += 1
                saw_latin_run = False
            run += 1
        else:
            if run:
                count += (run + 1) // 2
                run = 0
            saw_latin_run = True
    if run:
        count += (run + 1) // 2
    if saw_latin_run:
        count += 1
    return count


def _whitespace_word_count(text: str) -> int:
    return len(text.split())


def _cjk_bigram_word_count(text: str) -> int:
    return sum(_cjk_bigram_token_count(tok) for tok in text.split())


#: Registry of phrase tokenizers; the active name is recorded in corpus
#: metadata so phrase-length checks stay reproducible.
WORD_TOKENIZERS = {
    "whitespace": _whitespace_word_count,
    "cjk-bigram": _cjk_bigram_word_count,
}


def default_tokenizer_name(language: str) -> str:
    return "cjk-bigram" if is_cjk_language(language) else "whitespace"


def word_count(text: str, tokenizer: str) -> int:
    try:
        fn = WORD_TOKENIZERS[tokenizer]
    except KeyError:
        raise ValueError(f"unknown word tokenizer: {tokenizer!r}") from None
    return fn(text)
