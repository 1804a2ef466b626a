"""Embedded 5x7 bitmap glyphs: digits, uppercase letters, basic punctuation.

No system fonts are ever touched, which keeps rendered text byte-identical
everywhere. Each glyph is 7 rows of 5 cells; 'X' marks a filled cell.
"""
from __future__ import annotations

GLYPH_ROWS = 7
GLYPH_COLS = 5

_DEFS = """
0  .XXX. X...X X..XX X.X.X XX..X X...X .XXX.
1  ..X.. .XX.. ..X.. ..X.. ..X.. ..X.. .XXX.
2  .XXX. X...X ....X ...X. ..X.. .X... XXXXX
3  XXXXX ...X. ..X.. ...X. ....X X...X .XXX.
4  ...X. ..XX. .X.X. X..X. XXXXX ...X. ...X.
5  XXXXX X.... XXXX. ....X ....X X...X .XXX.
6  ..XX. .X... X.... XXXX. X...X X...X .XXX.
7  XXXXX ....X ...X. ..X.. .X... .X... .X...
8  .XXX. X...X X...X .XXX. X...X X...X .XXX.
9  .XXX. X...X X...X .XXXX ....X ...X. .XX..
A  .XXX. X...X X...X XXXXX X...X X...X X...X
B  XXXX. X...X X...X XXXX. X...X X...X XXXX.
C  .XXX. X...X X.... X.... X.... X...X .XXX.
D  XXX.. X..X. X...X X...X X...X X..X. XXX..
E  XXXXX X.... X.... XXXX. X.... X.... XXXXX
F  XXXXX X.... X.... XXXX. X.... X.... X....
G  .XXX. X...X X.... X.XXX X...X X...X .XXXX
H  X...X X...X X...X XXXXX X...X X...X X...X
I  .XXX. ..X.. ..X.. ..X.. ..X.. ..X.. .XXX.
J  ..XXX ...X. ...X. ...X. ...X. X..X. .XX..
K  X...X X..X. X.X.. XX... X.X.. X..X. X...X
L  X.... X.... X.... X.... X.... X.... XXXXX
M  X...X XX.XX X.X.X X.X.X X...X X...X X...X
N  X...X X...X XX..X X.X.X X..XX X...X X...X
O  .XXX. X...X X...X X...X X...X X...X .XXX.
P  XXXX. X...X X...X XXXX. X.... X.... X....
Q  .XXX. X...X X...X X...X X.X.X X..X. .XX.X
R  XXXX. X...X X...X XXXX. X.X.. X..X. X...X
S  .XXXX X.... X.... .XXX. ....X ....X XXXX.
T  XXXXX ..X.. ..X.. ..X.. ..X.. ..X.. ..X..
U  X...X X...X X...X X...X X...X X...X .XXX.
V  X...X X...X X...X X...X X...X .X.X. ..X..
W  X...X X...X X...X X.X.X X.X.X X.X.X .X.X.
X  X...X X...X .X.X. ..X.. .X.X. X...X X...X
Y  X...X X...X X...X .X.X. ..X.. ..X.. ..X..
Z  XXXXX ....X ...X. ..X.. .X... X.... XXXXX
.  ..... ..... ..... ..... ..... .XX.. .XX..
,  ..... ..... ..... ..... .XX.. ..X.. .X...
!  ..X.. ..X.. ..X.. ..X.. ..X.. ..... ..X..
?  .XXX. X...X ....X ...X. ..X.. ..... ..X..
-  ..... ..... ..... XXXXX ..... ..... .....
+  ..... ..X.. ..X.. XXXXX ..X.. ..X.. .....
:  ..... .XX.. .XX.. ..... .XX.. .XX.. .....
(  ...X. ..X.. .X... .X... .X... ..X.. ...X.
)  .X... ..X.. ...X. ...X. ...X. ..X.. .X...
'  ..X.. ..X.. ..... ..... ..... ..... .....
/  ....X ...X. ...X. ..X.. .X... .X... X....
#  .X.X. .X.X. XXXXX .X.X. XXXXX .X.X. .X.X.
"""


def _build() -> dict[str, list[int]]:
    table = {" ": [0] * GLYPH_ROWS}
    for line in _DEFS.strip().splitlines():
        parts = line.split()
        ch, rows = parts[0], parts[1:]
        assert len(rows) == GLYPH_ROWS, ch
        bits = []
        for row in rows:
            assert len(row) == GLYPH_COLS, ch
            v = 0
            for c in row:
                v = (v << 1) | (1 if c == "X" else 0)
            bits.append(v)
        table[ch] = bits
    return table


GLYPHS = _build()


class GlyphError(ValueError):
    """A requested character is outside the embedded glyph set."""


def glyph_bits(ch: str) -> list[int]:
    try:
        return GLYPHS[ch]
    except KeyError:
        raise GlyphError(f"unsupported glyph {ch!r}; embedded set: {''.join(sorted(GLYPHS))}") from None
