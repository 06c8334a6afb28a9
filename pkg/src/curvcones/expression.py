"""Expression grammar for metric components."""

import logging
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from lark import Lark, Token, Transformer
from lark.exceptions import ParseError as LarkParseError
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from .errors import EvaluationError, ExpressionError

logger = logging.getLogger(__name__)

FUNCTIONS: dict[str, Callable[[float], float]] = {
	"sin": math.sin,
	"cos": math.cos,
	"tan": math.tan,
	"exp": math.exp,
	"log": math.log,
	"sqrt": math.sqrt,
	"sinh": math.sinh,
	"cosh": math.cosh,
	"tanh": math.tanh,
	"abs": abs,
}
CONSTANTS: dict[str, float] = {"pi": math.pi, "e": math.e}
RESERVED_NAMES = frozenset(FUNCTIONS) | frozenset(CONSTANTS)


class ParseError(LarkParseError, ExpressionError):
	"""Syntax error in an expression; ``offset`` is a byte offset into the source text."""

	def __init__(self, message: str, offset: int = 0) -> None:
		"""Initialize the error.

		Args:
			message: Human readable explanation
			offset: Byte offset of the offending input
		"""
		super().__init__(message)
		self.offset = offset


class UnknownIdentifierError(ParseError):
	"""A name that is neither a coordinate, a constant nor a known function."""


class ArityError(ParseError):
	"""A function called with the wrong number of arguments."""


class Expression(Protocol):
	def evaluate(self, env: Mapping[str, float]) -> float: ...

	def to_text(self) -> str: ...

	def variables(self) -> frozenset[str]: ...


def _guard(operation: Callable[[], float], description: str) -> float:
	try:
		value = operation()
	except (ValueError, OverflowError, ZeroDivisionError) as e:
		msg = f"cannot evaluate {description}: {e}"
		raise EvaluationError(msg) from e
	if not math.isfinite(value):
		msg = f"{description} is not finite"
		raise EvaluationError(msg)
	return value


@dataclass(frozen=True)
class Number:
	value: float

	def evaluate(self, env: Mapping[str, float]) -> float:  # noqa: ARG002
		return self.value

	def to_text(self) -> str:
		return repr(self.value)

	def variables(self) -> frozenset[str]:
		return frozenset()


@dataclass(frozen=True)
class Constant:
	name: str

	def evaluate(self, env: Mapping[str, float]) -> float:  # noqa: ARG002
		return CONSTANTS[self.name]

	def to_text(self) -> str:
		return self.name

	def variables(self) -> frozenset[str]:
		return frozenset()


@dataclass(frozen=True)
class Variable:
	name: str
	offset: int = 0

	def evaluate(self, env: Mapping[str, float]) -> float:
		try:
			return float(env[self.name])
		except KeyError as e:
			msg = f"no value bound for {self.name!r}"
			raise EvaluationError(msg) from e

	def to_text(self) -> str:
		return self.name

	def variables(self) -> frozenset[str]:
		return frozenset({self.name})


@dataclass(frozen=True)
class UnaryOp:
	operand: Expression

	def evaluate(self, env: Mapping[str, float]) -> float:
		return -self.operand.evaluate(env)

	def to_text(self) -> str:
		return f"(-{self.operand.to_text()})"

	def variables(self) -> frozenset[str]:
		return self.operand.variables()


_BINARY: dict[str, Callable[[float, float], float]] = {
	"+": lambda a, b: a + b,
	"-": lambda a, b: a - b,
	"*": lambda a, b: a * b,
	"/": lambda a, b: a / b,
	"^": math.pow,
}


@dataclass(frozen=True)
class BinaryOp:
	op: str
	left: Expression
	right: Expression

	def evaluate(self, env: Mapping[str, float]) -> float:
		a, b = self.left.evaluate(env), self.right.evaluate(env)
		return _guard(lambda: _BINARY[self.op](a, b), f"{a!r} {self.op} {b!r}")

	def to_text(self) -> str:
		return f"({self.left.to_text()} {self.op} {self.right.to_text()})"

	def variables(self) -> frozenset[str]:
		return self.left.variables() | self.right.variables()


@dataclass(frozen=True)
class Call:
	function: str
	argument: Expression

	def evaluate(self, env: Mapping[str, float]) -> float:
		x = self.argument.evaluate(env)
		return _guard(lambda: float(FUNCTIONS[self.function](x)), f"{self.function}({x!r})")

	def to_text(self) -> str:
		return f"{self.function}({self.argument.to_text()})"

	def variables(self) -> frozenset[str]:
		return self.argument.variables()


def _byte_offset(text: str, offset: int) -> int:
	return len(text[:offset].encode())


class ExpressionTransformer(Transformer):
	"""Transform an expression parse tree into AST nodes."""

	_instance = None

	@classmethod
	def get_instance(cls) -> "ExpressionTransformer":
		"""Get a singleton instance of the transformer to avoid unnecessary initialization.

		Returns:
			ExpressionTransformer: The singleton instance
		"""
		if cls._instance is None:
			cls._instance = cls()
		return cls._instance

	def number(self, items: list) -> Number:
		token: Token = items[0]
		value = float(token)
		if not math.isfinite(value):
			msg = f"numeric literal {token!s} is out of range"
			raise ParseError(msg, offset=token.start_pos or 0)
		return Number(value)

	def name(self, items: list) -> Constant | Variable:
		token: Token = items[0]
		if token in CONSTANTS:
			return Constant(str(token))
		if token in FUNCTIONS:
			msg = f"function {token!r} used without arguments"
			raise ArityError(msg, offset=token.start_pos or 0)
		return Variable(str(token), offset=token.start_pos or 0)

	def arguments(self, items: list) -> list:
		return list(items)

	def call(self, items: list) -> Call:
		token: Token = items[0]
		arguments = items[1] or []
		if token not in FUNCTIONS:
			msg = f"unknown function {token!r}"
			raise UnknownIdentifierError(msg, offset=token.start_pos or 0)
		if len(arguments) != 1:
			msg = f"{token}() takes exactly one argument, got {len(arguments)}"
			raise ArityError(msg, offset=token.start_pos or 0)
		return Call(str(token), arguments[0])

	def neg(self, items: list) -> UnaryOp:
		return UnaryOp(items[0])

	def add(self, items: list) -> BinaryOp:
		return BinaryOp("+", items[0], items[1])

	def sub(self, items: list) -> BinaryOp:
		return BinaryOp("-", items[0], items[1])

	def mul(self, items: list) -> BinaryOp:
		return BinaryOp("*", items[0], items[1])

	def div(self, items: list) -> BinaryOp:
		return BinaryOp("/", items[0], items[1])

	def pow(self, items: list) -> BinaryOp:
		return BinaryOp("^", items[0], items[1])


class ExpressionParser:
	"""Parser for metric component expressions."""

	_instance = None

	def __init__(self, debug: bool = False) -> None:
		"""Initialize the expression parser.

		Args:
			debug: Whether to enable debug mode for the parser
		"""
		grammar_path = Path(__file__).parent / "expression.lark"
		try:
			self.parser = Lark(
				grammar_path.read_text(),
				parser="lalr",
				start="start",
				debug=debug,
				propagate_positions=True,
			)
		except Exception as e:
			msg = f"Error initializing parser: {e!s}"
			raise LarkParseError(msg) from e

	@classmethod
	def get_instance(cls) -> "ExpressionParser":
		"""Get a singleton instance of the parser to avoid unnecessary initialization.

		Returns:
			ExpressionParser: The singleton instance
		"""
		if cls._instance is None:
			cls._instance = cls()
		return cls._instance

	def parse(self, text: str) -> Expression:
		"""Parse an expression into its AST.

		Raises:
			ParseError: On syntax errors, unknown functions and arity mismatches
		"""
		try:
			tree = self.parser.parse(text)
		except UnexpectedEOF as e:
			msg = f"unexpected end of expression {text!r}"
			raise ParseError(msg, offset=_byte_offset(text, len(text))) from e
		except UnexpectedToken as e:
			if e.token.type == "$END":
				offset = len(text)
				msg = f"unexpected end of expression {text!r}"
			else:
				offset = e.token.start_pos if e.token.start_pos is not None else e.pos_in_stream or 0
				msg = f"unexpected {e.token!s} in {text!r}"
			raise ParseError(msg, offset=_byte_offset(text, offset)) from e
		except UnexpectedCharacters as e:
			msg = f"unexpected character {text[e.pos_in_stream]!r} in {text!r}"
			raise ParseError(msg, offset=_byte_offset(text, e.pos_in_stream)) from e
		except UnexpectedInput as e:
			msg = f"cannot parse {text!r}: {e}"
			raise ParseError(msg, offset=_byte_offset(text, e.pos_in_stream or 0)) from e

		try:
			return ExpressionTransformer.get_instance().transform(tree)
		except VisitError as e:
			if isinstance(e.orig_exc, ParseError):
				error = e.orig_exc
				error.offset = _byte_offset(text, error.offset)
				raise error from None
			raise


def parse_expression(text: str, variables: Iterable[str] | None = None) -> Expression:
	"""Parse ``text``; when ``variables`` is given every free name must be one of them.

	Raises:
		ParseError: On syntax errors
		UnknownIdentifierError: On names outside ``variables`` and unknown functions
		ArityError: On function calls with the wrong number of arguments
	"""
	expression = ExpressionParser.get_instance().parse(text)
	if variables is not None:
		allowed = set(variables)
		unknown = _first_unknown(expression, allowed)
		if unknown is not None:
			msg = f"unknown identifier {unknown.name!r} in {text!r}; coordinates are {sorted(allowed)}"
			raise UnknownIdentifierError(msg, offset=_byte_offset(text, unknown.offset))
	return expression


def _first_unknown(node: Expression, allowed: set[str]) -> Variable | None:
	match node:
		case Variable(name=name) if name not in allowed:
			return node
		case UnaryOp(operand=operand) | Call(argument=operand):
			return _first_unknown(operand, allowed)
		case BinaryOp(left=left, right=right):
			return _first_unknown(left, allowed) or _first_unknown(right, allowed)
	return None
