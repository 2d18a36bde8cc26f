"""Builtin example registry and the small expression language used by the
``generic`` expectation.

A predicate is a boolean combination (``and``, ``or``, ``not``) of
comparisons ``lhs != rhs`` or ``lhs = rhs`` between field expressions in
``e1``, ``e2`` built from ``+ - * ^``, integer literals, the generator ``w``
and ``sqrt``.  In characteristic 2 ``sqrt`` is a field automorphism, so it
is defined everywhere.
"""

from __future__ import annotations

import ast
import re
from functools import lru_cache
from importlib import resources

from .gf2k import Field
from .inputfmt import ExampleSpec, parse_input

__all__ = ["BUILTIN_FILES", "builtin_registry", "builtin", "load_example", "Predicate",
           "PredicateError"]

# registry order: the four cases with a nonabelian algebra, then the
# abelian ones
BUILTIN_FILES = (
    "12A1.enr", "AD0.enr", "AD2.enr", "AD3.enr", "3D4.enr", "D4D8.enr", "D4E8.enr",
    "D12.enr", "D4D8-same-fiber.enr", "E12.enr",
)


@lru_cache(maxsize=None)
def _builtin_text(fname: str) -> str:
    return resources.files("enrcov.data").joinpath(fname).read_text(encoding="utf-8")


def builtin_registry() -> list[ExampleSpec]:
    return [parse_input(_builtin_text(f), f.removesuffix(".enr")) for f in BUILTIN_FILES]


def builtin(name: str) -> ExampleSpec:
    for f in BUILTIN_FILES:
        spec = parse_input(_builtin_text(f), f.removesuffix(".enr"))
        if name in (spec.name, f, f.removesuffix(".enr")):
            return spec
    raise KeyError(name)


def load_example(ref: str) -> ExampleSpec:
    """A builtin name or a path to an input file."""
    try:
        return builtin(ref)
    except KeyError:
        pass
    with open(ref, encoding="utf-8") as fh:
        return parse_input(fh.read(), ref)


class PredicateError(ValueError):
    pass


_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow)


class Predicate:
    """A compiled genericity condition."""

    def __init__(self, text: str):
        self.text = text.strip()
        src = re.sub(r"(?<![!=])=(?!=)", "==", self.text.replace("^", "**"))
        try:
            self._tree = ast.parse(src, mode="eval").body
        except SyntaxError as exc:
            raise PredicateError(f"cannot parse predicate {text!r}: {exc.msg}") from None
        self._check(self._tree)

    def _check(self, node) -> None:
        if isinstance(node, ast.BoolOp):
            for v in node.values:
                self._check(v)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
            self._check(node.operand)
        elif isinstance(node, ast.Compare):
            if not all(isinstance(op, (ast.Eq, ast.NotEq)) for op in node.ops):
                raise PredicateError("only = and != comparisons are allowed")
            for v in [node.left, *node.comparators]:
                self._check_expr(v)
        else:
            raise PredicateError(f"expected a comparison, got {ast.dump(node)}")

    def _check_expr(self, node) -> None:
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            self._check_expr(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise PredicateError("exponents must be nonnegative integers")
            else:
                self._check_expr(node.right)
        elif isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1):
                raise PredicateError("the only function is sqrt")
            self._check_expr(node.args[0])
        elif isinstance(node, ast.Name):
            if node.id not in ("e1", "e2", "w"):
                raise PredicateError(f"unknown name {node.id!r}")
        elif not (isinstance(node, ast.Constant) and isinstance(node.value, int)):
            raise PredicateError(f"unsupported expression {ast.dump(node)}")

    def __call__(self, W: Field, e1: int, e2: int) -> bool:
        env = {"e1": e1, "e2": e2, "w": W.gen.value}

        def ev(node) -> int:
            if isinstance(node, ast.BinOp):
                a = ev(node.left)
                if isinstance(node.op, ast.Pow):
                    return W.pow(a, node.right.value)
                b = ev(node.right)
                return W.mul(a, b) if isinstance(node.op, ast.Mult) else a ^ b
            if isinstance(node, ast.Call):
                return W.sqrt(ev(node.args[0]))
            if isinstance(node, ast.Name):
                return env[node.id]
            return node.value & 1

        def truth(node) -> bool:
            if isinstance(node, ast.BoolOp):
                vals = (truth(v) for v in node.values)
                return all(vals) if isinstance(node.op, ast.And) else any(vals)
            if isinstance(node, ast.UnaryOp):
                return not truth(node.operand)
            vals = [ev(node.left)] + [ev(c) for c in node.comparators]
            return all((a == b) == isinstance(op, ast.Eq)
                       for op, a, b in zip(node.ops, vals, vals[1:]))

        return truth(self._tree)

    def __repr__(self) -> str:
        return f"Predicate({self.text!r})"
