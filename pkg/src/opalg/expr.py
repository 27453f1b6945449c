"""Textual operator expressions: tokenizer, recursive-descent parser, printer,
and evaluation down to OperatorSum.

Grammar (whitespace insensitive):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | 'ox' | unicode-tensor) factor)*
    factor := atom ["'"] ["^" int]
    atom   := number | 'i' | name | wordstring | sigma '[' int ']' | '(' expr ')'

A trailing apostrophe is the adjoint.  Both the unicode tensor sign and the
ASCII spelling "ox" are accepted; printing always uses ASCII.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .composite import cnot
from .errors import AlgebraMismatchError, ExprError, UnsupportedInputError
from .pauli import (
    AlgebraSpec,
    OperatorSum,
    PauliWord,
    sigma as sigma_op,
)

TENSOR_CHAR = "⊗"


# -- AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class Scalar:
    value: complex


@dataclass(frozen=True)
class Name:
    text: str


@dataclass(frozen=True)
class SigmaIndex:
    index: int


@dataclass(frozen=True)
class Adjoint:
    operand: "Node"


@dataclass(frozen=True)
class Power:
    operand: "Node"
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: tuple["Node", ...]
    ops: tuple[str, ...]  # '*' or 'ox' between consecutive factors


@dataclass(frozen=True)
class Sum:
    terms: tuple["Node", ...]
    signs: tuple[int, ...]  # +1 or -1 per term


Node = Union[Scalar, Name, SigmaIndex, Adjoint, Power, Product, Sum]


# -- tokenizer --------------------------------------------------------------------

_PUNCT = {"+", "-", "*", "'", "^", "(", ")", "[", "]", TENSOR_CHAR}


@dataclass
class _Token:
    kind: str  # 'num', 'name', 'punct', 'end'
    text: str
    pos: int  # 1-based character position


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        pos = i + 1
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, pos))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(_Token("num", text[i:j], pos))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], pos))
            i = j
            continue
        raise ExprError(f"unexpected character {ch!r}", position=pos)
    tokens.append(_Token("end", "", n + 1))
    return tokens


# -- parser -----------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.idx = 0

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == text:
            return self.advance()
        raise ExprError(f"expected {text!r}", position=tok.pos)

    def parse_expr(self) -> Node:
        signs = []
        terms = []
        if self.peek().kind == "punct" and self.peek().text == "-":
            self.advance()
            signs.append(-1)
        else:
            signs.append(1)
        terms.append(self.parse_term())
        while self.peek().kind == "punct" and self.peek().text in "+-":
            signs.append(1 if self.advance().text == "+" else -1)
            terms.append(self.parse_term())
        if len(terms) == 1 and signs[0] == 1:
            return terms[0]
        return Sum(tuple(terms), tuple(signs))

    def parse_term(self) -> Node:
        factors = [self.parse_factor()]
        ops = []
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "*":
                self.advance()
                ops.append("*")
            elif tok.kind == "punct" and tok.text == TENSOR_CHAR:
                self.advance()
                ops.append("ox")
            elif tok.kind == "name" and tok.text == "ox":
                self.advance()
                ops.append("ox")
            else:
                break
            factors.append(self.parse_factor())
        if len(factors) == 1:
            return factors[0]
        return Product(tuple(factors), tuple(ops))

    def parse_factor(self) -> Node:
        node = self.parse_atom()
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "'":
            self.advance()
            node = Adjoint(node)
            tok = self.peek()
        if tok.kind == "punct" and tok.text == "^":
            self.advance()
            node = Power(node, self.parse_int())
        return node

    def parse_int(self) -> int:
        sign = 1
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "-":
            self.advance()
            sign = -1
            tok = self.peek()
        if tok.kind != "num" or not tok.text.isdigit():
            raise ExprError("expected an integer exponent", position=tok.pos)
        self.advance()
        return sign * int(tok.text)

    def parse_atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Scalar(complex(float(tok.text)))
        if tok.kind == "name":
            if tok.text == "i":
                self.advance()
                return Scalar(1j)
            if tok.text == "sigma":
                self.advance()
                self.expect("[")
                idx_tok = self.peek()
                index = self.parse_int()
                if index not in (1, 2, 3):
                    raise ExprError("sigma index must be 1, 2 or 3",
                                    position=idx_tok.pos)
                self.expect("]")
                return SigmaIndex(index)
            if tok.text == "ox":
                raise ExprError("'ox' is the tensor operator, not an atom",
                                position=tok.pos)
            self.advance()
            return Name(tok.text)
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ExprError(f"expected an atom, found {tok.text or 'end of input'!r}",
                        position=tok.pos)


def parse_expr(text: str) -> Node:
    """Parse an operator expression; syntax errors carry 1-based positions."""
    if not isinstance(text, str):
        raise ExprError("expression must be a string")
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ExprError(f"unexpected trailing input {tail.text!r}",
                        position=tail.pos)
    return node


# -- printer ----------------------------------------------------------------------


def _print_scalar(value: complex) -> str:
    if value == 1j:
        return "i"
    if value.imag == 0.0 and value.real >= 0:
        real = value.real
        if real == int(real):
            return str(int(real))
        return repr(real)
    raise UnsupportedInputError(f"cannot print scalar {value}")


def to_text(node: Node) -> str:
    """Canonical ASCII rendering; parse(to_text(ast)) == ast."""
    if isinstance(node, Scalar):
        return _print_scalar(node.value)
    if isinstance(node, Name):
        return node.text
    if isinstance(node, SigmaIndex):
        return f"sigma[{node.index}]"
    if isinstance(node, Adjoint):
        return _paren_if(node.operand, need_for_postfix=True) + "'"
    if isinstance(node, Power):
        base = node.operand
        if isinstance(base, Adjoint):
            return _paren_if(base.operand, need_for_postfix=True) + f"'^{node.exponent}"
        return _paren_if(base, need_for_postfix=True) + f"^{node.exponent}"
    if isinstance(node, Product):
        parts = [_paren_if(node.factors[0], need_for_product=True)]
        for op, factor in zip(node.ops, node.factors[1:]):
            parts.append(" * " if op == "*" else " ox ")
            parts.append(_paren_if(factor, need_for_product=True))
        return "".join(parts)
    if isinstance(node, Sum):
        parts = []
        for k, (sign, term) in enumerate(zip(node.signs, node.terms)):
            if k == 0:
                parts.append("-" if sign < 0 else "")
            else:
                parts.append(" - " if sign < 0 else " + ")
            parts.append(_paren_if(term, need_for_sum=True))
        return "".join(parts)
    raise UnsupportedInputError(f"unknown node {node!r}")


def _paren_if(node: Node, need_for_sum: bool = False,
              need_for_product: bool = False,
              need_for_postfix: bool = False) -> str:
    text = to_text(node)
    if need_for_postfix and isinstance(node, (Sum, Product, Power, Adjoint)):
        return f"({text})"
    if need_for_product and isinstance(node, Sum):
        return f"({text})"
    if need_for_sum and isinstance(node, Sum):
        return f"({text})"
    return text


# -- evaluation --------------------------------------------------------------------

_WORD_LETTERS = frozenset("IXYZ")


@dataclass
class _Value:
    """Either a scalar or an operator sum during evaluation."""

    scalar: complex | None = None
    operator: OperatorSum | None = None

    @property
    def is_scalar(self) -> bool:
        return self.scalar is not None


def _builtin_operator(name: str, d: int) -> OperatorSum | None:
    if d != 2:
        return None
    from .pauli import QUBIT

    if name == "H":
        return (sigma_op(1) + sigma_op(3)).scale(1 / np.sqrt(2))
    if name == "CNOT":
        return operator_sum_from_dense(cnot(), AlgebraSpec(2, 2))
    if name in ("E00", "E01", "E10", "E11"):
        a, b = int(name[1]), int(name[2])
        mat = np.zeros((2, 2), dtype=complex)
        mat[a, b] = 1.0
        return operator_sum_from_dense(mat, QUBIT)
    return None


def operator_sum_from_dense(mat: np.ndarray, spec: AlgebraSpec) -> OperatorSum:
    """Expand a dense matrix over the word basis (words are trace-orthogonal)."""
    from .pauli import all_words, word_to_dense

    dim = spec.check_dense()
    terms = {}
    for word in all_words(spec):
        coeff = np.trace(word_to_dense(word).conj().T @ mat) / dim
        if abs(coeff) > 1e-14:
            terms[word.key()] = complex(coeff)
    return OperatorSum(spec, terms)


def eval_expr(node: Node, d: int = 2, n: int | None = None) -> OperatorSum:
    """Evaluate an AST to an OperatorSum with local dimension d.

    The site count is inferred from the expression; when ``n`` is given the
    result must match it.  A purely scalar expression becomes a multiple of
    the identity on ``n`` sites (default one).
    """
    value = _eval(node, d)
    if value.is_scalar:
        spec = AlgebraSpec(d, n or 1)
        result = OperatorSum.identity(spec).scale(value.scalar)
    else:
        result = value.operator
        if n is not None and result.spec.n != n:
            raise AlgebraMismatchError(
                f"expression acts on {result.spec.n} sites, expected {n}"
            )
    return result


def _eval(node: Node, d: int) -> _Value:
    if isinstance(node, Scalar):
        return _Value(scalar=node.value)
    if isinstance(node, SigmaIndex):
        if d != 2:
            raise UnsupportedInputError("sigma[i] requires d=2")
        return _Value(operator=sigma_op(node.index))
    if isinstance(node, Name):
        builtin = _builtin_operator(node.text, d)
        if builtin is not None:
            return _Value(operator=builtin)
        if d == 2 and node.text and set(node.text) <= _WORD_LETTERS:
            return _Value(operator=OperatorSum.from_word(
                PauliWord.from_letters(node.text)))
        if d != 2 and node.text in ("I", "X", "Z"):
            spec = AlgebraSpec(d, 1)
            word = PauliWord.single(spec, 0,
                                    x=1 if node.text == "X" else 0,
                                    z=1 if node.text == "Z" else 0)
            return _Value(operator=OperatorSum.from_word(word))
        raise ExprError(f"unknown name {node.text!r}")
    if isinstance(node, Adjoint):
        inner = _eval(node.operand, d)
        if inner.is_scalar:
            return _Value(scalar=inner.scalar.conjugate())
        return _Value(operator=inner.operator.adjoint())
    if isinstance(node, Power):
        inner = _eval(node.operand, d)
        if node.exponent < 0:
            raise UnsupportedInputError("negative powers are not supported")
        if inner.is_scalar:
            return _Value(scalar=inner.scalar**node.exponent)
        return _Value(operator=inner.operator.power(node.exponent))
    if isinstance(node, Product):
        acc = _eval(node.factors[0], d)
        for op, factor in zip(node.ops, node.factors[1:]):
            rhs = _eval(factor, d)
            acc = _combine(acc, rhs, op)
        return acc
    if isinstance(node, Sum):
        acc: _Value | None = None
        for sign, term in zip(node.signs, node.terms):
            val = _eval(term, d)
            if sign < 0:
                val = (_Value(scalar=-val.scalar) if val.is_scalar
                       else _Value(operator=val.operator.scale(-1)))
            acc = val if acc is None else _add(acc, val, d)
        return acc
    raise UnsupportedInputError(f"unknown node {node!r}")


def _add(a: _Value, b: _Value, d: int) -> _Value:
    if a.is_scalar and b.is_scalar:
        return _Value(scalar=a.scalar + b.scalar)
    if a.is_scalar:
        ident = OperatorSum.identity(b.operator.spec)
        return _Value(operator=ident.scale(a.scalar) + b.operator)
    if b.is_scalar:
        ident = OperatorSum.identity(a.operator.spec)
        return _Value(operator=a.operator + ident.scale(b.scalar))
    return _Value(operator=a.operator + b.operator)


def _combine(a: _Value, b: _Value, op: str) -> _Value:
    if a.is_scalar and b.is_scalar:
        return _Value(scalar=a.scalar * b.scalar)
    if a.is_scalar:
        return _Value(operator=b.operator.scale(a.scalar))
    if b.is_scalar:
        return _Value(operator=a.operator.scale(b.scalar))
    if op == "*":
        return _Value(operator=a.operator * b.operator)
    return _Value(operator=a.operator.tensor(b.operator))
