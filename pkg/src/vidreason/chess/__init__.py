"""Self-contained mate-in-1 chess task generator."""
from .board import BLACK, START_FEN, WHITE, ChessPosition, FenError, Move, parse_fen, sq_index, sq_name
from .movegen import (
    apply_move,
    has_legal_move,
    in_check,
    is_checkmate,
    is_stalemate,
    legal_moves,
    mate_in_one,
    perft,
    position_errors,
)
from .render import make_chess_task, render_board
from .templates import (
    ValidationReport,
    backrank_candidates,
    enumerate_backrank,
    enumerate_pool,
    enumerate_queen_corner,
    enumerate_tactical,
    queen_corner_candidates,
    tactical_candidates,
    validate_position,
)

__all__ = [
    "BLACK",
    "START_FEN",
    "WHITE",
    "ChessPosition",
    "FenError",
    "Move",
    "ValidationReport",
    "apply_move",
    "backrank_candidates",
    "enumerate_backrank",
    "enumerate_pool",
    "enumerate_queen_corner",
    "enumerate_tactical",
    "has_legal_move",
    "in_check",
    "is_checkmate",
    "is_stalemate",
    "legal_moves",
    "make_chess_task",
    "mate_in_one",
    "parse_fen",
    "perft",
    "position_errors",
    "queen_corner_candidates",
    "render_board",
    "sq_index",
    "sq_name",
    "tactical_candidates",
    "validate_position",
]
