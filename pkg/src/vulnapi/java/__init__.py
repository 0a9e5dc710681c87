"""Java-subset front end: lexer, parser, canonical renderer."""

from .parser import erase_type, parse_expression, parse_source, parse_statements
from .render import body_digest, expr_text, stmt_key, unparse

__all__ = [
    "body_digest", "erase_type", "expr_text", "parse_expression", "parse_source",
    "parse_statements", "stmt_key", "unparse",
]
