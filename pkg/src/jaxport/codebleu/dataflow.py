"""Dataflow match: def-use facts with positional variable renaming.

A snippet is summarized as an ordered multiset of facts over a flat
namespace:

- ("def", i, sources): the i-th definition in source order, where sources
  is the sorted tuple of definition indices its right-hand side reads;
- ("use", i): a read of the variable holding definition i, or -1 when the
  name was never defined in the snippet.

Because facts carry definition positions rather than names, consistently
renamed snippets produce identical facts. Scoring is multiset overlap:
matched facts over reference facts. A reference with no facts (or an
unparseable snippet) makes the component absent rather than zero.

The namespace is deliberately flat (no scope tracking): translated snippets
are short scripts, and both sides of a pair are summarized by the same
rules, so the approximation cancels out in the comparison.
"""

from __future__ import annotations

import ast
from collections import Counter
from typing import Optional, Union

Fact = Union[tuple[str, int], tuple[str, int, tuple[int, ...]]]


class _FactCollector(ast.NodeVisitor):
    def __init__(self) -> None:
        self.facts: list[Fact] = []
        self.env: dict[str, int] = {}
        self.next_def = 0

    # -- primitives ------------------------------------------------------

    def _define(self, name: str, sources: list[int]) -> None:
        idx = self.next_def
        self.next_def += 1
        self.facts.append(("def", idx, tuple(sorted(set(sources)))))
        self.env[name] = idx

    def _use(self, name: str) -> int:
        idx = self.env.get(name, -1)
        self.facts.append(("use", idx))
        return idx

    def _loads(self, node: Optional[ast.AST]) -> list[int]:
        """Record uses under node in source order; return the indices read."""
        if node is None:
            return []
        sources = []
        if isinstance(node, ast.Name) and isinstance(node.ctx, ast.Load):
            return [self._use(node.id)]
        if isinstance(node, ast.NamedExpr):
            sources = self._loads(node.value)
            self._bind_target(node.target, sources)
            return sources
        if isinstance(node, (ast.ListComp, ast.SetComp, ast.GeneratorExp, ast.DictComp)):
            for gen in node.generators:
                iter_sources = self._loads(gen.iter)
                self._bind_target(gen.target, iter_sources)
                for cond in gen.ifs:
                    self._loads(cond)
            if isinstance(node, ast.DictComp):
                sources += self._loads(node.key) + self._loads(node.value)
            else:
                sources += self._loads(node.elt)
            return sources
        if isinstance(node, ast.Lambda):
            for arg_name in _arg_names(node.args):
                self._define(arg_name, [])
            self._loads(node.body)
            return []
        for child in ast.iter_child_nodes(node):
            sources += self._loads(child)
        return sources

    def _bind_target(self, target: ast.AST, sources: list[int]) -> None:
        if isinstance(target, ast.Name):
            self._define(target.id, sources)
        elif isinstance(target, (ast.Tuple, ast.List)):
            for elt in target.elts:
                self._bind_target(elt, sources)
        elif isinstance(target, ast.Starred):
            self._bind_target(target.value, sources)
        else:
            # Subscript/attribute stores mutate an existing object: the base
            # and index expressions are reads, no new definition appears.
            self._loads(target)

    # -- statements ------------------------------------------------------

    def visit_Assign(self, node: ast.Assign) -> None:
        sources = self._loads(node.value)
        for target in node.targets:
            self._bind_target(target, sources)

    def visit_AugAssign(self, node: ast.AugAssign) -> None:
        sources = self._loads(node.value)
        if isinstance(node.target, ast.Name):
            sources.append(self._use(node.target.id))
            self._define(node.target.id, sources)
        else:
            self._loads(node.target)

    def visit_AnnAssign(self, node: ast.AnnAssign) -> None:
        self._loads(node.annotation)
        if node.value is not None:
            self._bind_target(node.target, self._loads(node.value))

    def visit_For(self, node: ast.For) -> None:
        sources = self._loads(node.iter)
        self._bind_target(node.target, sources)
        for stmt in node.body + node.orelse:
            self.visit(stmt)

    visit_AsyncFor = visit_For

    def visit_While(self, node: ast.While) -> None:
        self._loads(node.test)
        for stmt in node.body + node.orelse:
            self.visit(stmt)

    def visit_If(self, node: ast.If) -> None:
        self._loads(node.test)
        for stmt in node.body + node.orelse:
            self.visit(stmt)

    def visit_With(self, node: ast.With) -> None:
        for item in node.items:
            sources = self._loads(item.context_expr)
            if item.optional_vars is not None:
                self._bind_target(item.optional_vars, sources)
        for stmt in node.body:
            self.visit(stmt)

    visit_AsyncWith = visit_With

    def visit_FunctionDef(self, node: ast.FunctionDef) -> None:
        for dec in node.decorator_list:
            self._loads(dec)
        for default in node.args.defaults + [
            d for d in node.args.kw_defaults if d is not None
        ]:
            self._loads(default)
        self._define(node.name, [])
        for arg_name in _arg_names(node.args):
            self._define(arg_name, [])
        for stmt in node.body:
            self.visit(stmt)

    visit_AsyncFunctionDef = visit_FunctionDef

    def visit_ClassDef(self, node: ast.ClassDef) -> None:
        for dec in node.decorator_list:
            self._loads(dec)
        sources = []
        for base in node.bases:
            sources += self._loads(base)
        for kw in node.keywords:
            sources += self._loads(kw.value)
        self._define(node.name, sources)
        for stmt in node.body:
            self.visit(stmt)

    def visit_Import(self, node: ast.Import) -> None:
        for alias in node.names:
            self._define(alias.asname or alias.name.split(".")[0], [])

    def visit_ImportFrom(self, node: ast.ImportFrom) -> None:
        for alias in node.names:
            if alias.name != "*":
                self._define(alias.asname or alias.name, [])

    def visit_Delete(self, node: ast.Delete) -> None:
        for target in node.targets:
            if isinstance(target, ast.Name):
                self._use(target.id)
                self.env.pop(target.id, None)
            else:
                self._loads(target)

    def generic_visit(self, node: ast.AST) -> None:
        # Remaining node kinds (Module, Return, Expr, Try, Match, handlers,
        # ...) define nothing themselves: expression children are reads,
        # other children are traversed for the statements they contain.
        for child in ast.iter_child_nodes(node):
            if isinstance(child, ast.expr):
                self._loads(child)
            else:
                self.visit(child)


def _arg_names(args: ast.arguments) -> list[str]:
    all_args = args.posonlyargs + args.args
    if args.vararg:
        all_args = all_args + [args.vararg]
    all_args = all_args + args.kwonlyargs
    if args.kwarg:
        all_args = all_args + [args.kwarg]
    return [a.arg for a in all_args]


def dataflow_facts(tree: ast.AST) -> list[Fact]:
    """Def-use facts of a parsed snippet, in source order."""
    collector = _FactCollector()
    collector.visit(tree)
    return collector.facts


def dataflow_match(candidate_facts: list[Fact], reference_facts: list[Fact]) -> float:
    """Multiset overlap of facts, as a fraction of the reference's facts."""
    if not reference_facts:
        raise ValueError("reference has no dataflow facts; component is absent")
    cand_counts = Counter(candidate_facts)
    ref_counts = Counter(reference_facts)
    matched = sum(
        min(count, cand_counts[fact]) for fact, count in ref_counts.items()
    )
    return matched / len(reference_facts)
