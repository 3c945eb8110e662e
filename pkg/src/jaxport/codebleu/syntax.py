"""Syntax-subtree match over the language's abstract syntax tree.

Every node roots one subtree, serialized as a nested tuple of node kind
labels (kind plus child signatures, preorder). Leaf text is ignored, so
identifier renames and literal changes do not zero the component. The score
is the fraction of reference subtrees found in the candidate's multiset.
"""

from __future__ import annotations

import ast
from collections import Counter
from typing import Optional


def parse_tree(code: str) -> Optional[ast.AST]:
    """Parse a snippet; None when the grammar rejects it."""
    try:
        return ast.parse(code)
    except (SyntaxError, ValueError):
        return None


def _signature(node: ast.AST, memo: dict[int, tuple]) -> tuple:
    cached = memo.get(id(node))
    if cached is not None:
        return cached
    sig = (
        type(node).__name__,
        tuple(_signature(child, memo) for child in ast.iter_child_nodes(node)),
    )
    memo[id(node)] = sig
    return sig


def subtree_counts(tree: ast.AST) -> Counter:
    """Multiset of subtree signatures, one per node."""
    memo: dict[int, tuple] = {}
    counts: Counter = Counter()
    stack = [tree]
    while stack:
        node = stack.pop()
        counts[_signature(node, memo)] += 1
        stack.extend(ast.iter_child_nodes(node))
    return counts


def syntax_match(candidate: ast.AST, reference: ast.AST) -> float:
    cand_counts = subtree_counts(candidate)
    ref_counts = subtree_counts(reference)
    total = sum(ref_counts.values())
    matched = sum(
        min(count, cand_counts[sig]) for sig, count in ref_counts.items()
    )
    return matched / total
