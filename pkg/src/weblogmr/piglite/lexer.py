from __future__ import annotations

from dataclasses import dataclass
from typing import List

KEYWORDS = frozenset({
    "LOAD", "USING", "AS", "UNION", "FILTER", "BY", "MATCHES", "FOREACH",
    "GENERATE", "GROUP", "STORE", "INTO", "SUM",
})
PUNCTUATION = "(),;:=."
ESCAPES = {"t": "\t", "n": "\n", "\\": "\\", "'": "'"}


class LexError(Exception):
    def __init__(self, line: int, column: int, found: str):
        self.line = line
        self.column = column
        self.found = found
        super().__init__(f"line {line}, column {column}: unexpected {found!r}")


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD, IDENT, STRING, PUNCT
    value: str
    line: int
    column: int

    def __repr__(self):
        return f"{self.kind}({self.value!r})@{self.line}:{self.column}"


def lex(source: str) -> List[Token]:
    """Tokenize a script. Keywords come back upper-cased; ``--`` starts a comment."""
    tokens: List[Token] = []
    i = 0
    line, col = 1, 1
    n = len(source)

    def advance(count: int):
        nonlocal i, line, col
        for ch in source[i:i + count]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += count

    while i < n:
        ch = source[i]
        if ch.isspace():
            advance(1)
        elif source.startswith("--", i):
            end = source.find("\n", i)
            advance((n if end < 0 else end) - i)
        elif ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if word.upper() in KEYWORDS:
                tokens.append(Token("KEYWORD", word.upper(), line, col))
            else:
                tokens.append(Token("IDENT", word, line, col))
            advance(j - i)
        elif ch == "'":
            start_line, start_col = line, col
            chars = []
            j = i + 1
            while True:
                if j >= n or source[j] == "\n":
                    raise LexError(start_line, start_col, "unterminated string")
                c = source[j]
                if c == "'":
                    break
                if c == "\\":
                    if j + 1 >= n or source[j + 1] not in ESCAPES:
                        found = source[j:j + 2]
                        raise LexError(line, col + (j - i), found)
                    chars.append(ESCAPES[source[j + 1]])
                    j += 2
                else:
                    chars.append(c)
                    j += 1
            tokens.append(Token("STRING", "".join(chars), start_line, start_col))
            advance(j + 1 - i)
        elif ch in PUNCTUATION:
            tokens.append(Token("PUNCT", ch, line, col))
            advance(1)
        else:
            raise LexError(line, col, ch)
    return tokens
