"""Deterministic regex lexer for Python-flavored snippets.

Total by design: byte sequences the grammar does not recognize become
single-character ``other`` tokens instead of failing, because extrinsic
corpus snippets are not guaranteed to lex cleanly.
"""

from __future__ import annotations

import enum
import keyword
import re
from dataclasses import dataclass

# Framework names scored as keywords by default: translated-snippet
# similarity hinges on these API tokens, which the base grammar treats as
# plain identifiers.
DEFAULT_EXTRA_KEYWORDS = frozenset(
    {"torch", "jax", "jnp", "numpy", "np", "nn", "grad", "jit", "vmap", "optax"}
)

_PYTHON_KEYWORDS = frozenset(keyword.kwlist)


class TokenClass(enum.Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    LITERAL = "literal"
    OPERATOR = "operator"
    OTHER = "other"


@dataclass(frozen=True)
class Token:
    text: str
    klass: TokenClass


_STRING = r"""
    (?:[rRbBuUfF]{0,2})
    (?:
        '''(?:[^\\]|\\.)*?'''
      | \"\"\"(?:[^\\]|\\.)*?\"\"\"
      | '(?:[^'\\\n]|\\.)*'
      | "(?:[^"\\\n]|\\.)*"
    )
"""
_NUMBER = r"""
    (?:
        0[xX][0-9a-fA-F_]+
      | 0[oO][0-7_]+
      | 0[bB][01_]+
      | (?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[jJ]?
    )
"""
_NAME = r"[A-Za-z_]\w*"
_OPERATOR = r"""
    (?:
        \*\*=|//=|>>=|<<=|!=|>=|<=|==|->|:=
      | \+=|-=|\*=|/=|%=|@=|&=|\|=|\^=
      | \*\*|//|<<|>>
      | [+\-*/%@<>=~^&|()\[\]{},:.;]
    )
"""

_TOKEN_RE = re.compile(
    rf"""
    (?P<comment>\#[^\n]*)
  | (?P<string>{_STRING})
  | (?P<number>{_NUMBER})
  | (?P<name>{_NAME})
  | (?P<operator>{_OPERATOR})
  | (?P<space>\s+)
  | (?P<other>.)
    """,
    re.VERBOSE | re.DOTALL,
)


def keyword_set(extra: frozenset[str] = DEFAULT_EXTRA_KEYWORDS) -> frozenset[str]:
    """Reserved words of the language plus framework extension names."""
    return _PYTHON_KEYWORDS | extra


def tokenize(code: str, keywords: frozenset[str] | None = None) -> list[Token]:
    """Lex code into classified tokens; comments and whitespace are dropped."""
    if keywords is None:
        keywords = keyword_set()
    tokens = []
    for m in _TOKEN_RE.finditer(code):
        kind = m.lastgroup
        text = m.group()
        if kind in ("space", "comment"):
            continue
        if kind == "name":
            klass = TokenClass.KEYWORD if text in keywords else TokenClass.IDENTIFIER
        elif kind in ("string", "number"):
            klass = TokenClass.LITERAL
        elif kind == "operator":
            klass = TokenClass.OPERATOR
        else:
            klass = TokenClass.OTHER
        tokens.append(Token(text=text, klass=klass))
    return tokens
