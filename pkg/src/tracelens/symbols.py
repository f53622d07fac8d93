"""Heuristic C symbol scanner and the symbol manifest format.

This is a tag-generator stand-in, not a C parser: it lexes file-scope
declarations, expands struct variables to dot-paths of scalar leaves, and
records every construct it cannot classify in `skipped` instead of failing.
Macros are not expanded; typedef chains resolve one level; unions, pointers,
and arrays with non-literal or large bounds are skipped.

Manifest format (line oriented, UTF-8):

    field <dot.path> <kind>
    function <name> <file>:<line>
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .core import FIELD_KINDS, FieldDecl, FunctionDecl, SymbolTable
from .errors import ManifestParseError, ScanIoError

MAX_ARRAY_EXPANSION = 16

_INT_WORDS = {"int", "short", "long", "char", "signed", "unsigned", "size_t", "ssize_t",
              "ptrdiff_t", "intptr_t", "uintptr_t", "int8_t", "int16_t", "int32_t",
              "int64_t", "uint8_t", "uint16_t", "uint32_t", "uint64_t", "wchar_t"}
_FLOAT_WORDS = {"float", "double"}
_BOOL_WORDS = {"bool", "_Bool"}
_QUALIFIERS = {"static", "const", "volatile", "extern", "register", "inline", "_Noreturn"}

_TOKEN_RE = re.compile(r"[A-Za-z_]\w*|\d+\.?\d*|\.\.\.|->|[{}()\[\];,*=&<>!+\-/%|^~?:.]")


@dataclass
class ScanReport:
    symbols: SymbolTable
    skipped: list[tuple[str, int, str]] = field(default_factory=list)


# type descriptors: ("scalar", kind) | ("struct", key) | ("typedef", name)
_Desc = tuple[str, str]


def _strip_noise(text: str) -> str:
    """Blank out comments, string/char literals, and preprocessor lines,
    preserving the line structure so token line numbers stay correct."""
    out = []
    i, n = 0, len(text)
    mode = "code"  # code | line_comment | block_comment | string | char | pp
    while i < n:
        c = text[i]
        nxt = text[i + 1] if i + 1 < n else ""
        if mode == "code":
            if c == "/" and nxt == "/":
                mode = "line_comment"
                out.append("  ")
                i += 2
                continue
            if c == "/" and nxt == "*":
                mode = "block_comment"
                out.append("  ")
                i += 2
                continue
            if c == '"':
                mode = "string"
                out.append(" ")
                i += 1
                continue
            if c == "'":
                mode = "char"
                out.append(" ")
                i += 1
                continue
            if c == "#" and (not out or out[-1] in ("\n", "")
                             or text[:i].rsplit("\n", 1)[-1].strip() == ""):
                mode = "pp"
                out.append(" ")
                i += 1
                continue
            out.append(c)
        elif mode == "line_comment":
            if c == "\n":
                mode = "code"
                out.append("\n")
            else:
                out.append(" ")
            i += 1
            continue
        elif mode == "block_comment":
            if c == "*" and nxt == "/":
                mode = "code"
                out.append("  ")
                i += 2
                continue
            out.append("\n" if c == "\n" else " ")
            i += 1
            continue
        elif mode in ("string", "char"):
            quote = '"' if mode == "string" else "'"
            if c == "\\":
                out.append("  ")
                i += 2
                continue
            if c == quote:
                mode = "code"
            out.append(" " if c != "\n" else "\n")
            i += 1
            continue
        elif mode == "pp":
            if c == "\n":
                # backslash continuation keeps preprocessor mode
                mode = "pp" if out and text[i - 1] == "\\" else "code"
                out.append("\n")
            else:
                out.append(" ")
            i += 1
            continue
        if mode == "code":
            i += 1
    return "".join(out)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        for m in _TOKEN_RE.finditer(line):
            tokens.append((m.group(0), line_no))
    return tokens


class _Scanner:
    def __init__(self, path: str, tokens: list[tuple[str, int]]):
        self.path = path
        self.toks = tokens
        self.i = 0
        self.structs: dict[str, list[tuple[str, _Desc, Optional[int]]]] = {}
        self.enums: set[str] = set()
        self.typedefs: dict[str, _Desc] = {}
        self.fields: list[FieldDecl] = []
        self.functions: list[FunctionDecl] = []
        self.skipped: list[tuple[str, int, str]] = []
        self._anon = 0

    # --- token helpers ---
    def peek(self, offset: int = 0) -> str:
        j = self.i + offset
        return self.toks[j][0] if j < len(self.toks) else ""

    def line(self) -> int:
        j = min(self.i, len(self.toks) - 1)
        return self.toks[j][1] if self.toks else 0

    def next(self) -> str:
        tok = self.peek()
        self.i += 1
        return tok

    def skip_balanced(self, open_tok: str, close_tok: str):
        depth = 0
        while self.i < len(self.toks):
            tok = self.next()
            if tok == open_tok:
                depth += 1
            elif tok == close_tok:
                depth -= 1
                if depth == 0:
                    return

    def skip_statement(self):
        """Advance past the current statement (to ';' or over a balanced block)."""
        while self.i < len(self.toks):
            tok = self.peek()
            if tok == ";":
                self.i += 1
                return
            if tok == "{":
                self.skip_balanced("{", "}")
                if self.peek() == ";":
                    self.i += 1
                return
            self.i += 1

    def skip_note(self, reason: str, line: Optional[int] = None):
        self.skipped.append((self.path, line if line is not None else self.line(), reason))

    # --- scanning ---
    def scan(self):
        while self.i < len(self.toks):
            tok = self.peek()
            if tok == ";":
                self.i += 1
            elif tok == "typedef":
                self.parse_typedef()
            elif tok in ("struct", "union"):
                self.parse_struct_statement()
            elif tok == "enum":
                self.parse_enum_statement()
            else:
                self.parse_declaration()

    def scalar_kind_from_words(self, words: list[str]) -> Optional[str]:
        if not words:
            return None
        if any(w in _FLOAT_WORDS for w in words):
            return "float"
        if any(w in _BOOL_WORDS for w in words):
            return "bool"
        if all(w in _INT_WORDS for w in words):
            return "int"
        return None

    def parse_base_type(self) -> Optional[_Desc]:
        """Consume a base type; None means unclassifiable (caller skips)."""
        while self.peek() in _QUALIFIERS:
            self.i += 1
        tok = self.peek()
        if tok in ("struct", "union"):
            is_union = tok == "union"
            self.i += 1
            name = None
            if re.match(r"[A-Za-z_]\w*$", self.peek()):
                name = self.next()
            if self.peek() == "{":
                if is_union:
                    self.skip_balanced("{", "}")
                    return None
                key = name or self.fresh_anon()
                self.parse_struct_body(key)
                return ("struct", key)
            if is_union:
                return None
            return ("struct", name) if name else None
        if tok == "enum":
            self.i += 1
            name = None
            if re.match(r"[A-Za-z_]\w*$", self.peek()):
                name = self.next()
            if self.peek() == "{":
                self.skip_balanced("{", "}")
                if name:
                    self.enums.add(name)
            return ("scalar", "enum")
        words = []
        while self.peek() in _INT_WORDS | _FLOAT_WORDS | _BOOL_WORDS | {"void"}:
            words.append(self.next())
        if words:
            if words == ["void"]:
                return ("scalar", "void")
            kind = self.scalar_kind_from_words(words)
            return ("scalar", kind) if kind else None
        if re.match(r"[A-Za-z_]\w*$", tok) and tok in self.typedefs:
            self.i += 1
            return ("typedef", tok)
        return None

    def fresh_anon(self) -> str:
        self._anon += 1
        return f"<anon{self._anon}>"

    def parse_struct_body(self, key: str):
        """Parse `{ member; ... }` into the struct registry."""
        members: list[tuple[str, _Desc, Optional[int]]] = []
        assert self.next() == "{"
        while self.i < len(self.toks) and self.peek() != "}":
            line = self.line()
            desc = self.parse_base_type()
            if desc is None or desc == ("scalar", "void"):
                self.skip_note("unclassifiable struct member", line)
                self.skip_member_statement()
                continue
            # declarators
            while True:
                if self.peek() == "*":
                    self.skip_note("pointer struct member", line)
                    self.skip_member_statement()
                    break
                name = self.next()
                if not re.match(r"[A-Za-z_]\w*$", name):
                    self.skip_note("unparseable struct member", line)
                    self.skip_member_statement()
                    break
                count = self.parse_array_suffix(line)
                if count == -1:
                    self.skip_member_statement()
                    break
                members.append((name, desc, count))
                if self.peek() == ",":
                    self.i += 1
                    continue
                if self.peek() == ";":
                    self.i += 1
                    break
                self.skip_note("unparseable struct member", line)
                self.skip_member_statement()
                break
        if self.peek() == "}":
            self.i += 1
        self.structs[key] = members

    def skip_member_statement(self):
        while self.i < len(self.toks) and self.peek() not in (";", "}"):
            if self.peek() == "{":
                self.skip_balanced("{", "}")
                continue
            self.i += 1
        if self.peek() == ";":
            self.i += 1

    def parse_array_suffix(self, line: int) -> Optional[int]:
        """Return array bound, None for non-array, -1 when the declarator must
        be skipped (non-literal or oversized bound)."""
        if self.peek() != "[":
            return None
        self.i += 1
        bound = self.next()
        if self.peek() != "]" or not bound.isdigit():
            self.skip_note("array with non-literal bound", line)
            while self.i < len(self.toks) and self.peek() != "]":
                self.i += 1
            if self.peek() == "]":
                self.i += 1
            return -1
        self.i += 1
        count = int(bound)
        if count > MAX_ARRAY_EXPANSION:
            self.skip_note(f"array bound {count} > {MAX_ARRAY_EXPANSION}", line)
            return -1
        if self.peek() == "[":
            self.skip_note("multi-dimensional array", line)
            while self.peek() == "[":
                self.i += 1
                while self.i < len(self.toks) and self.peek() != "]":
                    self.i += 1
                if self.peek() == "]":
                    self.i += 1
            return -1
        return count

    def parse_typedef(self):
        line = self.line()
        self.i += 1  # typedef
        tok = self.peek()
        if tok in ("struct", "union", "enum"):
            desc = self.parse_base_type()
        else:
            words = []
            while self.peek() in _INT_WORDS | _FLOAT_WORDS | _BOOL_WORDS:
                words.append(self.next())
            if words:
                kind = self.scalar_kind_from_words(words)
                desc = ("scalar", kind) if kind else None
            elif re.match(r"[A-Za-z_]\w*$", tok):
                self.i += 1
                # alias of another name: one more level of indirection
                desc = ("typedef", tok) if tok in self.typedefs else None
            else:
                desc = None
        alias = self.peek()
        if desc is None or not re.match(r"[A-Za-z_]\w*$", alias) or self.peek(1) != ";":
            self.skip_note("unsupported typedef", line)
            self.skip_statement()
            return
        self.i += 1
        if self.peek() == ";":
            self.i += 1
        self.typedefs[alias] = desc

    def parse_struct_statement(self):
        line = self.line()
        desc = self.parse_base_type()
        if desc is None:
            self.skip_note("unsupported struct/union statement", line)
            self.skip_statement()
            return
        if self.peek() == ";":  # bare definition, no declarators
            self.i += 1
            return
        self.parse_declarators(desc, line)

    def parse_enum_statement(self):
        line = self.line()
        desc = self.parse_base_type()
        if desc is None:
            self.skip_note("unsupported enum statement", line)
            self.skip_statement()
            return
        if self.peek() == ";":
            self.i += 1
            return
        self.parse_declarators(desc, line)

    def parse_declaration(self):
        line = self.line()
        desc = self.parse_base_type()
        if desc is None:
            self.skip_note(f"unclassifiable declaration near {self.peek()!r}", line)
            self.skip_statement()
            return
        self.parse_declarators(desc, line)

    def parse_declarators(self, desc: _Desc, line: int):
        while True:
            if self.peek() == "*":
                self.skip_note("pointer declarator", line)
                self.skip_statement()
                return
            name = self.next()
            if not re.match(r"[A-Za-z_]\w*$", name):
                self.skip_note(f"unparseable declarator near {name!r}", line)
                self.skip_statement()
                return
            if self.peek() == "(":
                self.skip_balanced("(", ")")
                if self.peek() == "{":
                    self.functions.append(FunctionDecl(name, self.path, line))
                    self.skip_balanced("{", "}")
                    if self.peek() == ";":
                        self.i += 1
                elif self.peek() == ";":
                    self.i += 1  # prototype: contributes nothing
                else:
                    self.skip_note("unparseable function-like declaration", line)
                    self.skip_statement()
                return
            if desc == ("scalar", "void"):
                self.skip_note("void variable declarator", line)
                self.skip_statement()
                return
            count = self.parse_array_suffix(line)
            if count == -1:
                self.skip_statement()
                return
            self.flatten(desc, name, count, line, ())
            if self.peek() == "=":
                self.skip_initializer()
            if self.peek() == ",":
                self.i += 1
                continue
            if self.peek() == ";":
                self.i += 1
                return
            self.skip_note("unparseable declaration tail", line)
            self.skip_statement()
            return

    def skip_initializer(self):
        self.i += 1  # '='
        depth = 0
        while self.i < len(self.toks):
            tok = self.peek()
            if tok in ("{", "(", "["):
                depth += 1
            elif tok in ("}", ")", "]"):
                depth -= 1
            elif depth == 0 and tok in (",", ";"):
                return
            self.i += 1

    def flatten(self, desc: _Desc, prefix: str, count: Optional[int], line: int,
                struct_chain: tuple[str, ...]):
        if count is not None:
            for idx in range(count):
                self.flatten(desc, f"{prefix}[{idx}]", None, line, struct_chain)
            return
        tag, name = desc
        if tag == "scalar":
            self.fields.append(FieldDecl(prefix, name))
            return
        if tag == "typedef":
            under = self.typedefs.get(name)
            if under is None:
                self.skip_note(f"unknown type {name!r} for {prefix}", line)
                return
            if under[0] == "typedef":
                self.skip_note(f"typedef chain deeper than one level for {prefix}", line)
                return
            self.flatten(under, prefix, None, line, struct_chain)
            return
        # struct
        if name in struct_chain:
            self.skip_note(f"cyclic composite definition at {prefix}", line)
            return
        members = self.structs.get(name)
        if members is None:
            self.skip_note(f"unknown struct {name!r} for {prefix}", line)
            return
        for (member, mdesc, mcount) in members:
            self.flatten(mdesc, f"{prefix}.{member}", mcount, line,
                         struct_chain + (name,))


def scan_file(path: str) -> _Scanner:
    try:
        with open(path, "r", encoding="utf-8", errors="replace") as handle:
            text = handle.read()
    except OSError as exc:
        raise ScanIoError(f"cannot read {path}: {exc}") from None
    scanner = _Scanner(path, _tokenize(_strip_noise(text)))
    scanner.scan()
    return scanner


def scan_sources(paths: list[str]) -> ScanReport:
    """Scan C sources in the given order; duplicate fields keep the first kind
    seen, and conflicting redeclarations go to skipped."""
    fields: dict[str, FieldDecl] = {}
    functions: list[FunctionDecl] = []
    skipped: list[tuple[str, int, str]] = []
    seen_fn = set()
    for path in paths:
        scanner = scan_file(path)
        skipped.extend(scanner.skipped)
        for decl in scanner.fields:
            prior = fields.get(decl.path)
            if prior is None:
                fields[decl.path] = decl
            elif prior.kind != decl.kind:
                skipped.append((path, 0, f"conflicting redeclaration of {decl.path}"))
        for fn in scanner.functions:
            key = (fn.name, fn.file)
            if key not in seen_fn:
                seen_fn.add(key)
                functions.append(fn)
    table = SymbolTable(fields=tuple(fields.values()), functions=tuple(functions))
    return ScanReport(symbols=table, skipped=skipped)


# --- manifest ------------------------------------------------------------------


def save_manifest(table: SymbolTable, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(manifest_text(table))


def manifest_text(table: SymbolTable) -> str:
    lines = [f"field {f.path} {f.kind}" for f in table.fields]
    lines += [f"function {fn.name} {fn.file}:{fn.line}" for fn in table.functions]
    return "".join(line + "\n" for line in lines)


def load_manifest(path: str) -> SymbolTable:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ScanIoError(f"cannot read {path}: {exc}") from None
    return parse_manifest(text)


def parse_manifest(text: str) -> SymbolTable:
    fields: list[FieldDecl] = []
    functions: list[FunctionDecl] = []
    seen_paths = set()
    seen_fns = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        if parts[0] == "field":
            if len(parts) != 3:
                raise ManifestParseError("field record needs <path> <kind>", line_no)
            path, kind = parts[1], parts[2]
            if kind not in FIELD_KINDS:
                raise ManifestParseError(f"unknown field kind {kind!r}", line_no)
            if path in seen_paths:
                raise ManifestParseError(f"duplicate field path {path!r}", line_no)
            seen_paths.add(path)
            fields.append(FieldDecl(path, kind))
        elif parts[0] == "function":
            if len(parts) != 3 or ":" not in parts[2]:
                raise ManifestParseError("function record needs <name> <file>:<line>",
                                         line_no)
            name = parts[1]
            file_part, _, line_part = parts[2].rpartition(":")
            if not line_part.isdigit():
                raise ManifestParseError("function line must be an integer", line_no)
            key = (name, file_part)
            if key in seen_fns:
                raise ManifestParseError(f"duplicate function {name!r}", line_no)
            seen_fns.add(key)
            functions.append(FunctionDecl(name, file_part, int(line_part)))
        else:
            raise ManifestParseError(f"unknown record type {parts[0]!r}", line_no)
    return SymbolTable(fields=tuple(fields), functions=tuple(functions))
