"""Legal move generation, position legality, perft, and mate-in-1 search."""
from __future__ import annotations

from .board import BLACK, WHITE, ChessPosition, Move, sq_name

# Precomputed geometry ------------------------------------------------------

_KNIGHT: list[list[int]] = [[] for _ in range(64)]
_KING: list[list[int]] = [[] for _ in range(64)]
# rays[sq][dir] = squares outward in one of 8 directions (N, S, E, W, NE, NW, SE, SW)
_RAYS: list[list[list[int]]] = [[] for _ in range(64)]
_ROOK_DIRS = ((0, 1), (0, -1), (1, 0), (-1, 0))
_BISHOP_DIRS = ((1, 1), (-1, 1), (1, -1), (-1, -1))

for _sq in range(64):
    f, r = _sq % 8, _sq // 8
    for df, dr in ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)):
        nf, nr = f + df, r + dr
        if 0 <= nf < 8 and 0 <= nr < 8:
            _KNIGHT[_sq].append(nr * 8 + nf)
    for df in (-1, 0, 1):
        for dr in (-1, 0, 1):
            if df == 0 and dr == 0:
                continue
            nf, nr = f + df, r + dr
            if 0 <= nf < 8 and 0 <= nr < 8:
                _KING[_sq].append(nr * 8 + nf)
    for df, dr in _ROOK_DIRS + _BISHOP_DIRS:
        ray = []
        nf, nr = f + df, r + dr
        while 0 <= nf < 8 and 0 <= nr < 8:
            ray.append(nr * 8 + nf)
            nf += df
            nr += dr
        _RAYS[_sq].append(ray)


def is_attacked(pos: ChessPosition, sq: int, by: str) -> bool:
    board = pos.board
    knight, king, pawn = ("N", "K", "P") if by == WHITE else ("n", "k", "p")
    rook_q = ("R", "Q") if by == WHITE else ("r", "q")
    bishop_q = ("B", "Q") if by == WHITE else ("b", "q")
    for t in _KNIGHT[sq]:
        if board[t] == knight:
            return True
    for t in _KING[sq]:
        if board[t] == king:
            return True
    # pawns: a white pawn on sq-9/sq-7 attacks sq (and mirrored for black)
    f, r = sq % 8, sq // 8
    dr = -1 if by == WHITE else 1
    for df in (-1, 1):
        nf, nr = f + df, r + dr
        if 0 <= nf < 8 and 0 <= nr < 8 and board[nr * 8 + nf] == pawn:
            return True
    for d in range(4):  # rook directions
        for t in _RAYS[sq][d]:
            p = board[t]
            if p != ".":
                if p in rook_q:
                    return True
                break
    for d in range(4, 8):  # bishop directions
        for t in _RAYS[sq][d]:
            p = board[t]
            if p != ".":
                if p in bishop_q:
                    return True
                break
    return False


def in_check(pos: ChessPosition, color: str) -> bool:
    return is_attacked(pos, pos.king_square(color), WHITE if color == BLACK else BLACK)


def position_errors(pos: ChessPosition) -> list[str]:
    """Violations of the position invariants (beyond FEN structure)."""
    errs = []
    wk = pos.board.count("K")
    bk = pos.board.count("k")
    if wk != 1:
        errs.append(f"{wk} white kings")
    if bk != 1:
        errs.append(f"{bk} black kings")
    if wk == 1 and bk == 1:
        ksq = pos.king_square(WHITE)
        if pos.king_square(BLACK) in _KING[ksq]:
            errs.append("kings are adjacent")
        opponent = BLACK if pos.side == WHITE else WHITE
        if in_check(pos, opponent):
            errs.append("side not to move is in check")
    if pos.board.count("P") > 8:
        errs.append("more than 8 white pawns")
    if pos.board.count("p") > 8:
        errs.append("more than 8 black pawns")
    for f in range(8):
        if pos.board[f] in "Pp" or pos.board[56 + f] in "Pp":
            errs.append(f"pawn on rank {'1' if pos.board[f] in 'Pp' else '8'}")
            break
    return errs


def apply_move(pos: ChessPosition, m: Move) -> ChessPosition:
    """Return the successor position; the move must be pseudo-legal."""
    nxt = pos.copy()
    board = nxt.board
    piece = board[m.from_sq]
    white = piece.isupper()
    capture = board[m.to_sq] != "."
    is_pawn = piece in "Pp"

    board[m.from_sq] = "."
    # en passant capture: the captured pawn is beside the target square
    if is_pawn and pos.ep is not None and m.to_sq == pos.ep and not capture:
        board[m.to_sq + (-8 if white else 8)] = "."
        capture = True
    if m.promotion:
        board[m.to_sq] = m.promotion if white else m.promotion.lower()
    else:
        board[m.to_sq] = piece
    # castling: move the rook too
    if piece in "Kk" and abs(m.to_sq % 8 - m.from_sq % 8) == 2:
        rank = m.from_sq - m.from_sq % 8
        if m.to_sq % 8 == 6:  # king side
            board[rank + 5] = board[rank + 7]
            board[rank + 7] = "."
        else:  # queen side
            board[rank + 3] = board[rank]
            board[rank] = "."

    rights = nxt.castling
    if piece == "K":
        rights = rights.replace("K", "").replace("Q", "")
    elif piece == "k":
        rights = rights.replace("k", "").replace("q", "")
    for sq, flag in ((7, "K"), (0, "Q"), (63, "k"), (56, "q")):
        if sq in (m.from_sq, m.to_sq) and flag in rights:
            rights = rights.replace(flag, "")
    nxt.castling = rights

    nxt.ep = None
    if is_pawn and abs(m.to_sq - m.from_sq) == 16:
        nxt.ep = (m.from_sq + m.to_sq) // 2

    nxt.halfmove = 0 if (is_pawn or capture) else pos.halfmove + 1
    if pos.side == BLACK:
        nxt.fullmove = pos.fullmove + 1
    nxt.side = BLACK if pos.side == WHITE else WHITE
    return nxt


def _pseudo_moves(pos: ChessPosition):
    board = pos.board
    white = pos.side == WHITE
    own = str.isupper if white else str.islower
    enemy = str.islower if white else str.isupper
    for sq in range(64):
        piece = board[sq]
        if piece == "." or not own(piece):
            continue
        kind = piece.upper()
        if kind == "P":
            f, r = sq % 8, sq // 8
            step = 8 if white else -8
            start_rank = 1 if white else 6
            promo_rank = 7 if white else 0
            one = sq + step
            if board[one] == ".":
                if one // 8 == promo_rank:
                    for p in "QRBN":
                        yield Move(sq, one, p)
                else:
                    yield Move(sq, one)
                two = sq + 2 * step
                if r == start_rank and board[two] == ".":
                    yield Move(sq, two)
            for df in (-1, 1):
                nf = f + df
                if not 0 <= nf < 8:
                    continue
                t = one - f + nf  # same rank as single push, shifted file
                if board[t] != "." and enemy(board[t]):
                    if t // 8 == promo_rank:
                        for p in "QRBN":
                            yield Move(sq, t, p)
                    else:
                        yield Move(sq, t)
                elif pos.ep is not None and t == pos.ep:
                    yield Move(sq, t)
        elif kind == "N":
            for t in _KNIGHT[sq]:
                if board[t] == "." or enemy(board[t]):
                    yield Move(sq, t)
        elif kind == "K":
            for t in _KING[sq]:
                if board[t] == "." or enemy(board[t]):
                    yield Move(sq, t)
            # castling
            opp = BLACK if white else WHITE
            rank = 0 if white else 56
            kflag, qflag = ("K", "Q") if white else ("k", "q")
            if sq == rank + 4 and not is_attacked(pos, sq, opp):
                if (
                    kflag in pos.castling
                    and board[rank + 5] == "."
                    and board[rank + 6] == "."
                    and not is_attacked(pos, rank + 5, opp)
                ):
                    yield Move(sq, rank + 6)
                if (
                    qflag in pos.castling
                    and board[rank + 3] == "."
                    and board[rank + 2] == "."
                    and board[rank + 1] == "."
                    and not is_attacked(pos, rank + 3, opp)
                ):
                    yield Move(sq, rank + 2)
        else:
            dirs = range(0, 4) if kind == "R" else range(4, 8) if kind == "B" else range(8)
            for d in dirs:
                for t in _RAYS[sq][d]:
                    p = board[t]
                    if p == ".":
                        yield Move(sq, t)
                    else:
                        if enemy(p):
                            yield Move(sq, t)
                        break


def legal_moves(pos: ChessPosition) -> list[Move]:
    mover = pos.side
    out = []
    for m in _pseudo_moves(pos):
        if not in_check(apply_move(pos, m), mover):
            out.append(m)
    return out


def has_legal_move(pos: ChessPosition) -> bool:
    mover = pos.side
    for m in _pseudo_moves(pos):
        if not in_check(apply_move(pos, m), mover):
            return True
    return False


def mate_in_one(pos: ChessPosition) -> Move | None:
    """The lexicographically smallest (from, to) move that checkmates, if any."""
    best = None
    for m in legal_moves(pos):
        child = apply_move(pos, m)
        if not in_check(child, child.side):
            continue
        if has_legal_move(child):
            continue
        if best is None or m.key() < best.key():
            best = m
    return best


def is_checkmate(pos: ChessPosition) -> bool:
    return in_check(pos, pos.side) and not has_legal_move(pos)


def is_stalemate(pos: ChessPosition) -> bool:
    return not in_check(pos, pos.side) and not has_legal_move(pos)


def perft(pos: ChessPosition, depth: int) -> int:
    if depth == 0:
        return 1
    moves = legal_moves(pos)
    if depth == 1:
        return len(moves)
    return sum(perft(apply_move(pos, m), depth - 1) for m in moves)


def describe_move(pos: ChessPosition, m: Move) -> str:
    piece = pos.board[m.from_sq]
    return f"{piece} {sq_name(m.from_sq)}-{sq_name(m.to_sq)}" + (f"={m.promotion}" if m.promotion else "")
