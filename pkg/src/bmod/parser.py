"""Text to scenario declarations.

``parse`` is total: any byte string yields either a :class:`Scenario` or a
list of error diagnostics with source positions, never an exception. The
parser recovers at statement keywords so several errors in one file are all
reported in a single pass.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import ERROR, Diagnostic, SourceSpan
from .scenario import (
    DIRECTIONS,
    DoorDecl,
    FloorDecl,
    PersonDecl,
    RoomDecl,
    Scenario,
    SignDecl,
)

MAX_DIMENSION = 1024

PARSE_RULES = {
    "PARSE_UNKNOWN_CHAR": "character is not part of the language",
    "PARSE_UNTERMINATED_STRING": "string literal is missing its closing quote",
    "PARSE_BAD_ESCAPE": "unknown escape sequence in a string literal",
    "PARSE_EXPECTED_FLOOR": "top level allows only floor declarations",
    "PARSE_EXPECTED_ITEM": "unexpected token inside a block",
    "PARSE_EXPECTED_NAME": "expected a quoted name",
    "PARSE_EMPTY_NAME": "names must not be empty",
    "PARSE_EXPECTED_INT": "expected an integer",
    "PARSE_EXPECTED_KEYWORD": "expected a specific keyword",
    "PARSE_EXPECTED_COORD": "expected a coordinate like (2,3)",
    "PARSE_EXPECTED_COMMA": "expected a comma between coordinates",
    "PARSE_UNCLOSED_PAREN": "coordinate is missing its closing parenthesis",
    "PARSE_EXPECTED_BRACE": "expected an opening brace",
    "PARSE_UNCLOSED_BRACE": "block is missing its closing brace",
    "PARSE_EXPECTED_DIRECTION": "expected north, south, east or west",
    "PARSE_DIMENSION": f"room dimensions must be between 1 and {MAX_DIMENSION}",
}

ITEM_KEYWORDS = ("wall", "fire", "person", "sign", "door")
SYNC_KEYWORDS = ITEM_KEYWORDS + ("room", "floor")

LBRACE = "lbrace"
RBRACE = "rbrace"
LPAREN = "lparen"
RPAREN = "rparen"
COMMA = "comma"
INT = "int"
STRING = "string"
WORD = "word"
EOF = "eof"

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}
_PUNCT = {"{": LBRACE, "}": RBRACE, "(": LPAREN, ")": RPAREN, ",": COMMA}
# Unicode digit lookalikes (superscripts, other scripts) are not numbers in
# this grammar; letting str.isdigit admit them would send non-ASCII text into
# int() conversion.
_ASCII_DIGITS = "0123456789"


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    span: SourceSpan
    value: object = None


@dataclass
class ParseResult:
    scenario: Scenario | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.scenario is not None


def _tokenize(text: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def span(start: int, start_line: int, start_col: int, end: int) -> SourceSpan:
        return SourceSpan(start=start, end=end, line=start_line, column=start_col)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        start, start_line, start_col = i, line, col
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, span(start, start_line, start_col, i + 1)))
            i += 1
            col += 1
            continue
        if ch in _ASCII_DIGITS:
            while i < n and text[i] in _ASCII_DIGITS:
                i += 1
                col += 1
            lexeme = text[start:i]
            # Clamp absurdly long digit runs: every legal value fits in 4
            # digits (MAX_DIMENSION bounds dimensions and coordinates alike),
            # and converting a multi-kilobyte run would be quadratic work.
            # The clamp is far outside every legal range, so the usual
            # out-of-range errors still fire on whatever consumes it.
            value = int(lexeme) if len(lexeme) <= 9 else 10**9
            tokens.append(Token(INT, lexeme, span(start, start_line, start_col, i), value))
            continue
        if ch == '"':
            i += 1
            col += 1
            parts: list[str] = []
            closed = False
            while i < n:
                c = text[i]
                if c == '"':
                    i += 1
                    col += 1
                    closed = True
                    break
                if c == "\n":
                    break
                if c == "\\":
                    if i + 1 < n and text[i + 1] in _ESCAPES:
                        parts.append(_ESCAPES[text[i + 1]])
                        i += 2
                        col += 2
                    else:
                        bad = text[i + 1] if i + 1 < n else ""
                        diags.append(Diagnostic(
                            severity=ERROR,
                            code="PARSE_BAD_ESCAPE",
                            message=f"unknown escape \\{bad}",
                            location=span(i, line, col, min(i + 2, n)),
                        ))
                        parts.append(bad)
                        i += 2
                        col += 2
                else:
                    parts.append(c)
                    i += 1
                    col += 1
            if not closed:
                diags.append(Diagnostic(
                    severity=ERROR,
                    code="PARSE_UNTERMINATED_STRING",
                    message="string literal is missing its closing quote",
                    location=span(start, start_line, start_col, i),
                ))
            tokens.append(Token(STRING, text[start:i], span(start, start_line, start_col, i), "".join(parts)))
            continue
        if ch.isalpha() or ch == "_":
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            lexeme = text[start:i]
            tokens.append(Token(WORD, lexeme, span(start, start_line, start_col, i), lexeme))
            continue
        # Coalesce a run of the same junk character into one finding; byte
        # spam would otherwise produce one diagnostic per byte.
        while i < n and text[i] == ch:
            i += 1
            col += 1
        count = i - start
        suffix = f" (repeated {count} times)" if count > 1 else ""
        diags.append(Diagnostic(
            severity=ERROR,
            code="PARSE_UNKNOWN_CHAR",
            message=f"unexpected character {ch!r}{suffix}",
            location=span(start, start_line, start_col, i),
        ))
    tokens.append(Token(EOF, "", SourceSpan(start=n, end=n, line=line, column=col)))
    return tokens, diags


class _Parser:
    def __init__(self, tokens: list[Token], diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diags = diagnostics

    # --- token plumbing ---

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at_word(self, *words: str) -> bool:
        return self.cur.kind == WORD and self.cur.text in words

    def error(self, code: str, message: str, span: SourceSpan | None = None) -> None:
        self.diags.append(Diagnostic(
            severity=ERROR,
            code=code,
            message=message,
            location=span if span is not None else self.cur.span,
        ))

    def sync(self, *extra_kinds: str) -> None:
        """Skip to the next statement keyword or block boundary, moving at least one token."""
        stop_kinds = (RBRACE, EOF) + extra_kinds
        if self.cur.kind not in stop_kinds and not self.at_word(*SYNC_KEYWORDS):
            self.advance()
        while self.cur.kind not in stop_kinds and not self.at_word(*SYNC_KEYWORDS):
            self.advance()

    # --- terminals ---

    def expect_name(self, what: str) -> tuple[str, SourceSpan] | None:
        if self.cur.kind != STRING:
            self.error("PARSE_EXPECTED_NAME", f"expected a quoted {what} name, found {describe(self.cur)}")
            return None
        tok = self.advance()
        name = tok.value
        if name == "":
            self.error("PARSE_EMPTY_NAME", f"{what} name must not be empty", tok.span)
        return name, tok.span

    def expect_int(self, what: str) -> int | None:
        if self.cur.kind != INT:
            self.error("PARSE_EXPECTED_INT", f"expected {what}, found {describe(self.cur)}")
            return None
        return self.advance().value

    def expect_keyword(self, word: str) -> bool:
        if self.at_word(word):
            self.advance()
            return True
        self.error("PARSE_EXPECTED_KEYWORD", f"expected '{word}', found {describe(self.cur)}")
        return False

    def expect_coord(self) -> tuple[int, int] | None:
        if self.cur.kind != LPAREN:
            self.error("PARSE_EXPECTED_COORD", f"expected a coordinate like (2,3), found {describe(self.cur)}")
            return None
        open_tok = self.advance()
        x = self.expect_int("a column number")
        if x is None:
            return None
        if self.cur.kind != COMMA:
            self.error("PARSE_EXPECTED_COMMA", f"expected ',' inside coordinate, found {describe(self.cur)}")
            return None
        self.advance()
        y = self.expect_int("a row number")
        if y is None:
            return None
        if self.cur.kind != RPAREN:
            self.error(
                "PARSE_UNCLOSED_PAREN",
                f"coordinate opened at line {open_tok.span.line} is missing ')'",
            )
            return None
        self.advance()
        return x, y

    # --- grammar ---

    def parse_scenario(self) -> Scenario:
        scenario = Scenario()
        while self.cur.kind != EOF:
            if self.at_word("floor"):
                floor = self.parse_floor()
                if floor is not None:
                    scenario.floors.append(floor)
            else:
                self.error("PARSE_EXPECTED_FLOOR", f"expected 'floor', found {describe(self.cur)}")
                self.advance()
                while self.cur.kind != EOF and not self.at_word("floor"):
                    self.advance()
        return scenario

    def parse_floor(self) -> FloorDecl | None:
        start = self.advance()  # 'floor'
        named = self.expect_name("floor")
        if named is None:
            self.sync()
            return None
        name, _ = named
        floor = FloorDecl(name=name, span=start.span)
        if self.cur.kind != LBRACE:
            self.error("PARSE_EXPECTED_BRACE", f"expected '{{' after floor name, found {describe(self.cur)}")
            self.sync()
            return floor
        self.advance()
        while True:
            if self.cur.kind == RBRACE:
                self.advance()
                return floor
            if self.cur.kind == EOF:
                self.error("PARSE_UNCLOSED_BRACE", f"floor \"{name}\" is missing its closing brace")
                return floor
            if self.at_word("room"):
                room = self.parse_room()
                if room is not None:
                    floor.rooms.append(room)
            else:
                self.error("PARSE_EXPECTED_ITEM", f"expected 'room' or '}}', found {describe(self.cur)}")
                self.sync()
                if not self.at_word("room"):
                    # a stray 'floor' or item keyword ends this block
                    return floor

    def parse_room(self) -> RoomDecl | None:
        start = self.advance()  # 'room'
        named = self.expect_name("room")
        if named is None:
            self.sync()
            return None
        name, _ = named
        width = self.expect_int("the room width")
        if width is None or not self.expect_keyword("x"):
            self.sync()
            return None
        height = self.expect_int("the room height")
        if height is None:
            self.sync()
            return None
        for label, value in (("width", width), ("height", height)):
            if not 1 <= value <= MAX_DIMENSION:
                self.error(
                    "PARSE_DIMENSION",
                    f"room {label} {value} is outside 1..{MAX_DIMENSION}",
                    start.span,
                )
        room = RoomDecl(name=name, width=width, height=height, span=start.span)
        if self.cur.kind != LBRACE:
            self.error("PARSE_EXPECTED_BRACE", f"expected '{{' after room size, found {describe(self.cur)}")
            self.sync()
            return room
        self.advance()
        while True:
            if self.cur.kind == RBRACE:
                self.advance()
                return room
            if self.cur.kind == EOF:
                self.error("PARSE_UNCLOSED_BRACE", f"room \"{name}\" is missing its closing brace")
                return room
            if self.at_word(*ITEM_KEYWORDS):
                self.parse_item(room)
            else:
                self.error(
                    "PARSE_EXPECTED_ITEM",
                    f"expected wall, fire, person, sign, door or '}}', found {describe(self.cur)}",
                )
                self.sync()
                if self.at_word("room", "floor"):
                    return room

    def parse_item(self, room: RoomDecl) -> None:
        start = self.cur
        kind = self.advance().text
        if kind in ("wall", "fire"):
            if not self.expect_keyword("at"):
                self.sync()
                return
            coord = self.expect_coord()
            if coord is None:
                self.sync()
                return
            (room.walls if kind == "wall" else room.fires).append(coord)
        elif kind == "person":
            named = self.expect_name("person")
            if named is None or not self.expect_keyword("at"):
                self.sync()
                return
            coord = self.expect_coord()
            if coord is None:
                self.sync()
                return
            room.people.append(PersonDecl(name=named[0], x=coord[0], y=coord[1], span=start.span))
        elif kind == "sign":
            if not self.expect_keyword("at"):
                self.sync()
                return
            coord = self.expect_coord()
            if coord is None or not self.expect_keyword("facing"):
                self.sync()
                return
            if not self.at_word(*DIRECTIONS):
                self.error(
                    "PARSE_EXPECTED_DIRECTION",
                    f"expected north, south, east or west, found {describe(self.cur)}",
                )
                self.sync()
                return
            direction = self.advance().text
            room.signs.append(SignDecl(x=coord[0], y=coord[1], direction=direction, span=start.span))
        elif kind == "door":
            named = self.expect_name("door")
            if named is None or not self.expect_keyword("at"):
                self.sync()
                return
            coord = self.expect_coord()
            if coord is None:
                self.sync()
                return
            door = DoorDecl(name=named[0], x=coord[0], y=coord[1], span=start.span)
            if self.at_word("to"):
                self.advance()
                target = self.expect_name("target room")
                if target is None:
                    self.sync()
                    return
                door.to_room = target[0]
            if self.at_word("locked"):
                self.advance()
                door.locked = True
            if self.at_word("exit"):
                self.advance()
                door.exit = True
            room.doors.append(door)


def describe(tok: Token) -> str:
    if tok.kind == EOF:
        return "end of input"
    if tok.kind == STRING:
        return f"string {tok.value!r}"
    return repr(tok.text)


def parse(text: str) -> ParseResult:
    """Parse scenario text. ``scenario`` is None iff any error was diagnosed."""
    tokens, diags = _tokenize(text)
    parser = _Parser(tokens, diags)
    scenario = parser.parse_scenario()
    if any(d.is_error for d in diags):
        return ParseResult(scenario=None, diagnostics=diags)
    return ParseResult(scenario=scenario, diagnostics=diags)


def parse_bytes(data: bytes) -> ParseResult:
    """Parse raw bytes, decoding as UTF-8 with replacement for invalid sequences."""
    return parse(data.decode("utf-8", errors="replace"))
