"""Chess position model and full six-field FEN parsing/serialization."""
from __future__ import annotations

WHITE = "w"
BLACK = "b"
PIECES = "PNBRQK"
FILES = "abcdefgh"


class FenError(ValueError):
    """Structurally invalid FEN. `kind` distinguishes the failure class."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class Move:
    """A from/to square pair with optional promotion piece (white-case letter)."""

    __slots__ = ("from_sq", "to_sq", "promotion")

    def __init__(self, from_sq: int, to_sq: int, promotion: str | None = None):
        if from_sq == to_sq:
            raise ValueError(f"null move on square {sq_name(from_sq)}")
        if promotion is not None and promotion not in "NBRQ":
            raise ValueError(f"bad promotion piece {promotion!r}")
        self.from_sq = from_sq
        self.to_sq = to_sq
        self.promotion = promotion

    def key(self) -> tuple:
        return (self.from_sq, self.to_sq, self.promotion or "")

    def uci(self) -> str:
        return sq_name(self.from_sq) + sq_name(self.to_sq) + (self.promotion.lower() if self.promotion else "")

    def __eq__(self, other):
        return isinstance(other, Move) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Move({self.uci()})"


def sq_index(name: str) -> int:
    if len(name) != 2 or name[0] not in FILES or name[1] not in "12345678":
        raise ValueError(f"bad square name {name!r}")
    return (int(name[1]) - 1) * 8 + FILES.index(name[0])


def sq_name(sq: int) -> str:
    return FILES[sq % 8] + str(sq // 8 + 1)


class ChessPosition:
    """8x8 board (rank-major, rank 1 first), side to move, castling rights,
    en-passant square, and move counters."""

    __slots__ = ("board", "side", "castling", "ep", "halfmove", "fullmove")

    def __init__(self, board, side=WHITE, castling="", ep=None, halfmove=0, fullmove=1):
        self.board = board  # list of 64 chars, '.' = empty
        self.side = side
        self.castling = castling
        self.ep = ep
        self.halfmove = halfmove
        self.fullmove = fullmove

    def copy(self) -> "ChessPosition":
        return ChessPosition(self.board[:], self.side, self.castling, self.ep, self.halfmove, self.fullmove)

    def piece_at(self, sq: int) -> str | None:
        p = self.board[sq]
        return None if p == "." else p

    def king_square(self, color: str) -> int:
        target = "K" if color == WHITE else "k"
        return self.board.index(target)

    def placement_key(self) -> str:
        """Position identity for uniqueness hashing: placement, side,
        castling, en passant (counters excluded)."""
        return " ".join(self.to_fen().split(" ")[:4])

    def to_fen(self) -> str:
        ranks = []
        for r in range(7, -1, -1):
            run = 0
            row = ""
            for f in range(8):
                p = self.board[r * 8 + f]
                if p == ".":
                    run += 1
                else:
                    if run:
                        row += str(run)
                        run = 0
                    row += p
            if run:
                row += str(run)
            ranks.append(row)
        castling = self.castling if self.castling else "-"
        ep = sq_name(self.ep) if self.ep is not None else "-"
        return f"{'/'.join(ranks)} {self.side} {castling} {ep} {self.halfmove} {self.fullmove}"

    def __repr__(self):
        return f"ChessPosition({self.to_fen()!r})"


def empty_board() -> list[str]:
    return ["."] * 64


def parse_fen(text: str) -> ChessPosition:
    """Parse all six FEN fields, rejecting structural errors with a
    distinct FenError kind per failure class."""
    fields = text.split()
    if len(fields) != 6:
        raise FenError("field_count", f"expected 6 FEN fields, got {len(fields)}")
    placement, side, castling, ep, halfmove, fullmove = fields

    ranks = placement.split("/")
    if len(ranks) != 8:
        raise FenError("rank_count", f"expected 8 ranks, got {len(ranks)}")
    board = empty_board()
    kings = {"K": 0, "k": 0}
    for i, rank_text in enumerate(ranks):
        r = 7 - i
        f = 0
        for ch in rank_text:
            if ch.isdigit():
                if ch == "0":
                    raise FenError("illegal_char", f"bad empty-run digit '0' in rank {r + 1}")
                f += int(ch)  # a run like '9' falls out as rank overflow below
            elif ch.upper() in PIECES:
                if f >= 8:
                    raise FenError("rank_overflow", f"rank {r + 1} overflows 8 files")
                board[r * 8 + f] = ch
                if ch in kings:
                    kings[ch] += 1
                f += 1
            else:
                raise FenError("illegal_char", f"illegal character {ch!r} in placement")
            if f > 8:
                raise FenError("rank_overflow", f"rank {r + 1} overflows 8 files")
        if f != 8:
            raise FenError("rank_underflow", f"rank {r + 1} covers {f} files, expected 8")
    for k, n in kings.items():
        if n > 1:
            raise FenError("king_count", f"{n} {k!r} kings on the board")

    if side not in (WHITE, BLACK):
        raise FenError("bad_side", f"side to move must be 'w' or 'b', got {side!r}")

    if castling != "-":
        if not castling or any(c not in "KQkq" for c in castling) or len(set(castling)) != len(castling):
            raise FenError("bad_castling", f"bad castling field {castling!r}")
    castling_val = "" if castling == "-" else "".join(c for c in "KQkq" if c in castling)

    ep_val = None
    if ep != "-":
        try:
            ep_val = sq_index(ep)
        except ValueError:
            raise FenError("bad_ep", f"bad en-passant square {ep!r}") from None
        if ep_val // 8 not in (2, 5):
            raise FenError("bad_ep", f"en-passant square {ep} not on rank 3 or 6")

    try:
        half = int(halfmove)
        full = int(fullmove)
    except ValueError:
        raise FenError("bad_counter", f"non-integer move counters {halfmove!r}/{fullmove!r}") from None
    if half < 0 or full < 1:
        raise FenError("bad_counter", f"counters out of range: {half}/{full}")

    return ChessPosition(board, side, castling_val, ep_val, half, full)


START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"
