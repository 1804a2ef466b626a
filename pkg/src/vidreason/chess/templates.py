"""Mate-in-1 template enumeration and the five-stage validation pipeline.

Template families deliberately over-enumerate: every raw candidate runs
through validation and only positions with a confirmed mate, a legal
layout, and a novel position hash survive.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .board import WHITE, ChessPosition, FenError, empty_board, parse_fen
from .movegen import mate_in_one, position_errors
from .render import render_board


@dataclass
class StageResult:
    name: str
    passed: bool | None  # None = not reached
    detail: str = ""


@dataclass
class ValidationReport:
    stages: list[StageResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.passed for s in self.stages if s.passed is not None) and not any(
            s.passed is None for s in self.stages
        )

    def failed_stage(self) -> str | None:
        for s in self.stages:
            if s.passed is False:
                return s.name
        return None


STAGES = ("fen", "legality", "mate", "uniqueness", "render")


def validate_position(pos: ChessPosition, seen_hashes: set[str] | None = None) -> ValidationReport:
    """Run the five validation stages in order, stopping at the first failure.

    seen_hashes, when given, is consulted for stage 4 and updated with the
    position's hash on full success.
    """
    report = ValidationReport([StageResult(name, None) for name in STAGES])

    fen = pos.to_fen()
    try:
        parse_fen(fen)
        report.stages[0] = StageResult("fen", True)
    except FenError as e:
        if e.kind == "king_count":
            # structurally fine FEN; king counting is stage 2's business
            report.stages[0] = StageResult("fen", True)
        else:
            report.stages[0] = StageResult("fen", False, f"{e.kind}: {e}")
            return report

    errs = position_errors(pos)
    if errs:
        report.stages[1] = StageResult("legality", False, "; ".join(errs))
        return report
    report.stages[1] = StageResult("legality", True)

    mate = mate_in_one(pos)
    if mate is None:
        report.stages[2] = StageResult("mate", False, "no mate in one")
        return report
    report.stages[2] = StageResult("mate", True, mate.uci())

    key = pos.placement_key()
    if seen_hashes is not None and key in seen_hashes:
        report.stages[3] = StageResult("uniqueness", False, "duplicate position hash")
        return report
    report.stages[3] = StageResult("uniqueness", True)

    canvas = render_board(pos)
    blank = canvas.px.min() == canvas.px.max()
    if canvas.width <= 0 or canvas.height <= 0 or blank:
        report.stages[4] = StageResult("render", False, "blank or degenerate canvas")
        return report
    report.stages[4] = StageResult("render", True)

    if seen_hashes is not None:
        seen_hashes.add(key)
    return report


def _place(squares: dict[int, str], side: str = WHITE) -> ChessPosition:
    board = empty_board()
    for sq, piece in squares.items():
        board[sq] = piece
    return ChessPosition(board, side)


def _sq(f: int, r: int) -> int:
    return r * 8 + f


# -- back-rank family ---------------------------------------------------------


def backrank_candidates() -> list[ChessPosition]:
    """Template product: 8 black-king files x sliding pawn barriers
    (widths 2-4 on rank 7) x {R,Q} attackers on files a-g of rank 1,
    white king fixed on h1."""
    out = []
    windows = []
    for width in (2, 3, 4):
        for lo in range(0, 9 - width):
            windows.append(tuple(range(lo, lo + width)))
    for kf in range(8):
        for window in windows:
            for attacker in "RQ":
                for af in range(7):  # a..g; h1 is the white king's square
                    squares = {_sq(kf, 7): "k", _sq(7, 0): "K", _sq(af, 0): attacker}
                    for pf in window:
                        squares[_sq(pf, 6)] = "p"
                    out.append(_place(squares))
    return out


# -- queen-corner family ------------------------------------------------------

_QC_QUEEN_STARTS = [(0, 6), (1, 6), (2, 6), (3, 6), (4, 6), (0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]
_QC_KING_SUPPORTS = [(6, 5), (5, 5), (5, 6), (7, 5), (6, 4)]
_QC_CORNERS = [(7, 7), (0, 7), (7, 0), (0, 0)]


def queen_corner_candidates() -> list[ChessPosition]:
    """10 queen starts x 4 corner king placements x 5 white king supports,
    defined relative to the h8 corner and mirrored to the others."""
    out = []
    for corner in _QC_CORNERS:
        def t(f: int, r: int) -> int:
            tf = f if corner[0] == 7 else 7 - f
            tr = r if corner[1] == 7 else 7 - r
            return _sq(tf, tr)

        for qf, qr in _QC_QUEEN_STARTS:
            for wf, wr in _QC_KING_SUPPORTS:
                squares = {t(*corner): "k", t(qf, qr): "Q", t(wf, wr): "K"}
                out.append(_place(squares))
    return out


# -- tactical family ----------------------------------------------------------


def tactical_candidates() -> list[ChessPosition]:
    """Hand-authored shells: smothered knight mates, rook-and-king box
    mates, and two-rook ladder mates."""
    out = []
    # smothered: king boxed in by its own rook and pawns, knight hits f7/c7
    for mirror in (False, True):
        def t(f: int, r: int) -> int:
            return _sq(7 - f if mirror else f, r)

        base = {t(7, 7): "k", t(6, 7): "r", t(6, 6): "p", t(7, 6): "p", t(6, 0): "K"}
        for nf, nr in ((6, 4), (7, 5), (4, 4), (3, 5), (3, 7)):
            squares = dict(base)
            squares[t(nf, nr)] = "N"
            out.append(_place(squares))
    # rook box mates: black king on the back rank, white king two ranks below
    for kf in (2, 3, 4, 5):
        for rf in (0, 7):
            squares = {_sq(kf, 7): "k", _sq(kf, 5): "K", _sq(rf, 0): "R"}
            out.append(_place(squares))
    # two-rook ladders: one rook cuts rank 7, the other mates on rank 8
    for kf in (3, 4, 5, 6, 7):
        squares = {
            _sq(kf, 7): "k",
            _sq(kf - 2, 6): "R",
            _sq(kf - 3, 0): "R",
            _sq(kf - 2, 0): "K",
        }
        out.append(_place(squares))
    return out


def _validate_family(candidates, seen_hashes: set[str]) -> list[ChessPosition]:
    return [pos for pos in candidates if validate_position(pos, seen_hashes).ok]


def enumerate_backrank(seen_hashes: set[str] | None = None) -> list[ChessPosition]:
    return _validate_family(backrank_candidates(), set() if seen_hashes is None else seen_hashes)


def enumerate_queen_corner(seen_hashes: set[str] | None = None) -> list[ChessPosition]:
    return _validate_family(queen_corner_candidates(), set() if seen_hashes is None else seen_hashes)


def enumerate_tactical(seen_hashes: set[str] | None = None) -> list[ChessPosition]:
    return _validate_family(tactical_candidates(), set() if seen_hashes is None else seen_hashes)


def enumerate_pool() -> dict[str, list[ChessPosition]]:
    """All template families validated against one shared uniqueness set."""
    seen: set[str] = set()
    return {
        "backrank": enumerate_backrank(seen),
        "queen_corner": enumerate_queen_corner(seen),
        "tactical": enumerate_tactical(seen),
    }
