"""Concrete syntax, exchange formats and the command line."""
from .parser import Diagnostic, SourceFile, parse, parse_process, tokenize

__all__ = ["Diagnostic", "SourceFile", "parse", "parse_process", "tokenize"]
