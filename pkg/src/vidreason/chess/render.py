"""Chess board rendering and task assembly.

Pieces are drawn as outlined letters (K Q R B N P) from the embedded glyph
set; figurine fonts would break bit-exactness.
"""
from __future__ import annotations

from ..raster import ImageCanvas, new_canvas
from ..task import TaskUnit, make_task_id
from .board import BLACK, WHITE, ChessPosition, sq_name
from .movegen import apply_move, mate_in_one

CANVAS_W = CANVAS_H = 480
SQUARE = 56
MARGIN = (CANVAS_W - 8 * SQUARE) // 2
LIGHT = (240, 217, 181)
DARK = (181, 136, 99)
LIGHT_HILITE = (205, 210, 106)  # from/to squares of the played move
DARK_HILITE = (170, 162, 58)
PIECE_HEIGHT = 36

_WHITE_FILL = (252, 252, 252)
_WHITE_EDGE = (30, 30, 30)
_BLACK_FILL = (24, 24, 24)
_BLACK_EDGE = (252, 252, 252)


def render_board(pos: ChessPosition, highlight: tuple[int, ...] = ()) -> ImageCanvas:
    canvas = new_canvas(CANVAS_W, CANVAS_H)
    for rank in range(8):
        for file in range(8):
            x = MARGIN + file * SQUARE
            y = MARGIN + (7 - rank) * SQUARE  # rank 8 at the top
            light = (rank + file) % 2
            if rank * 8 + file in highlight:
                color = LIGHT_HILITE if light else DARK_HILITE
            else:
                color = LIGHT if light else DARK
            canvas.fill_rect(x, y, SQUARE, SQUARE, color)
            piece = pos.board[rank * 8 + file]
            if piece == ".":
                continue
            white = piece.isupper()
            fill = _WHITE_FILL if white else _BLACK_FILL
            edge = _WHITE_EDGE if white else _BLACK_EDGE
            center = (x + SQUARE // 2, y + SQUARE // 2)
            letter = piece.upper()
            for dx, dy in ((-2, 0), (2, 0), (0, -2), (0, 2), (-2, -2), (2, 2), (-2, 2), (2, -2)):
                canvas.draw_text(letter, (center[0] + dx, center[1] + dy), PIECE_HEIGHT, edge)
            canvas.draw_text(letter, center, PIECE_HEIGHT, fill)
    return canvas


PROMPT_TEMPLATE = (
    "{side} to move. Play the single move that delivers checkmate "
    "immediately: move exactly one {side_lower} piece to its mating square "
    "and leave every other piece where it stands."
)


def make_chess_task(pos: ChessPosition, seed: int, index: int = 0) -> TaskUnit:
    mate = mate_in_one(pos)
    if mate is None:
        raise ValueError(f"position has no mate in one: {pos.to_fen()}")
    side = "White" if pos.side == WHITE else "Black"
    return TaskUnit(
        id=make_task_id("chess", seed, index),
        domain="chess",
        first_frame=render_board(pos),
        final_frame=render_board(apply_move(pos, mate), highlight=(mate.from_sq, mate.to_sq)),
        prompt=PROMPT_TEMPLATE.format(side=side, side_lower=side.lower()),
        ground_truth={
            "fen": pos.to_fen(),
            "mate_move": {
                "from": sq_name(mate.from_sq),
                "to": sq_name(mate.to_sq),
                "promotion": mate.promotion,
                "uci": mate.uci(),
            },
            "mated_side": BLACK if pos.side == WHITE else WHITE,
        },
        seed=seed,
    )
