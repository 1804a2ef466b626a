"""Independent brute-force oracles used to cross-check the implementations.

Everything here is written in the most literal way available: exhaustive
enumeration, exact rational arithmetic, and tiny-graph brute force. Keeping
these dumb and separate from the library code is the point.
"""
from __future__ import annotations

import itertools
from decimal import Decimal, getcontext
from fractions import Fraction

# -- chess --------------------------------------------------------------------


def oracle_mate_in_one(pos) -> bool:
    """Exhaustive depth-1 search: some legal move leaves the opponent in
    check with an empty legal-move list."""
    from vidreason.chess import apply_move, in_check, legal_moves

    for move in legal_moves(pos):
        child = apply_move(pos, move)
        if in_check(child, child.side) and len(legal_moves(child)) == 0:
            return True
    return False


# -- maze ---------------------------------------------------------------------

_GRID_EDGES = [((r, c), (r, c + 1)) for r in range(3) for c in range(2)] + [
    ((r, c), (r + 1, c)) for r in range(2) for c in range(3)
]


def _is_spanning_tree(edges) -> bool:
    cells = {(r, c) for r in range(3) for c in range(3)}
    if len(edges) != len(cells) - 1:
        return False
    adj = {c: [] for c in cells}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    stack = [(0, 0)]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        stack.extend(adj[cur])
    return len(seen) == len(cells)


def count_spanning_trees_bruteforce() -> int:
    """Spanning trees of the 3x3 grid graph by scanning all C(12,8) subsets."""
    return sum(1 for subset in itertools.combinations(_GRID_EDGES, 8) if _is_spanning_tree(subset))


def count_spanning_trees_kirchhoff() -> int:
    """Matrix-tree theorem with exact integer (Bareiss) determinant."""
    cells = [(r, c) for r in range(3) for c in range(3)]
    idx = {c: i for i, c in enumerate(cells)}
    n = len(cells)
    lap = [[0] * n for _ in range(n)]
    for a, b in _GRID_EDGES:
        i, j = idx[a], idx[b]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    # delete row/column 0, then fraction-free Gaussian elimination
    m = [row[1:] for row in lap[1:]]
    size = n - 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for swap in range(k + 1, size):
                if m[swap][k] != 0:
                    m[k], m[swap] = m[swap], m[k]
                    prev = -prev
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return m[size - 1][size - 1]


def enumerate_simple_paths(passages, start, goal) -> list[list]:
    """All simple start->goal paths in the passage graph (tiny, so DFS)."""
    adj = {}
    for a, b in passages:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    paths = []

    def walk(cur, path):
        if cur == goal:
            paths.append(path[:])
            return
        for nb in adj.get(cur, []):
            if nb not in path:
                path.append(nb)
                walk(nb, path)
                path.pop()

    walk(start, [start])
    return paths


# -- rpm ----------------------------------------------------------------------

_SHAPES = ("triangle", "square", "circle")
_COLORS = ("red", "blue", "green")


def _step_attr(rule: str, value, steps: int):
    if rule == "shape_prog":
        return _SHAPES[(_SHAPES.index(value) + steps) % 3]
    if rule == "number_prog":
        return ((value - 1 + steps) % 3) + 1
    if rule == "rotation_prog":
        return (value + 90 * steps) % 360
    if rule == "color_seq":
        return _COLORS[(_COLORS.index(value) + steps) % 3]
    raise ValueError(rule)


_RULE_FIELD = {
    "shape_prog": "shape",
    "number_prog": "count",
    "rotation_prog": "rotation",
    "color_seq": "color",
}


def rpm_valid_completions(rules, row_first) -> list[tuple]:
    """Scan all 108 attribute tuples for valid third-row completions.

    row_first is the (shape, count, rotation, color) of the row's first
    cell. Governed attributes must sit two progression steps along;
    everything else must equal the first cell's value.
    """
    first = {
        "shape": row_first[0],
        "count": row_first[1],
        "rotation": row_first[2],
        "color": row_first[3],
    }
    want = dict(first)
    for rule in rules:
        field = _RULE_FIELD[rule]
        want[field] = _step_attr(rule, first[field], 2)
    hits = []
    for shape in _SHAPES:
        for count in (1, 2, 3):
            for rotation in (0, 90, 180, 270):
                for color in _COLORS:
                    cand = {"shape": shape, "count": count, "rotation": rotation, "color": color}
                    if cand == want:
                        hits.append((shape, count, rotation, color))
    return hits


# -- rotation -----------------------------------------------------------------


def voxel_checks(cubes, n_cubes: int, max_degree: int) -> dict[str, bool]:
    """Connectivity, count, tri-axial span, degree cap, and half-turn
    congruence, each recomputed from the raw coordinate set."""
    cubes = set(map(tuple, cubes))
    dirs = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]

    seen = set()
    stack = [min(cubes)]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        for d in dirs:
            nb = (cur[0] + d[0], cur[1] + d[1], cur[2] + d[2])
            if nb in cubes and nb not in seen:
                stack.append(nb)

    def canon(cs):
        mins = [min(c[a] for c in cs) for a in range(3)]
        return sorted((c[0] - mins[0], c[1] - mins[1], c[2] - mins[2]) for c in cs)

    degrees = {
        c: sum(((c[0] + d[0], c[1] + d[1], c[2] + d[2]) in cubes) for d in dirs) for c in cubes
    }
    return {
        "count": len(cubes) == n_cubes,
        "connected": len(seen) == len(cubes),
        "span": all(len({c[a] for c in cubes}) >= 2 for a in range(3)),
        "degree": max(degrees.values()) <= max_degree,
        "asymmetric": canon([(-x, -y, z) for x, y, z in cubes]) != canon(list(cubes)),
    }


# -- statistics ---------------------------------------------------------------


def exact_pearson(xs, ys, digits: int = 50) -> Decimal:
    """Pearson r with exact rational moments and a high-precision sqrt."""
    getcontext().prec = digits
    fx = [Fraction(x) for x in xs]
    fy = [Fraction(y) for y in ys]
    n = len(fx)
    mx = sum(fx) / n
    my = sum(fy) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(fx, fy))
    sxx = sum((a - mx) ** 2 for a in fx)
    syy = sum((b - my) ** 2 for b in fy)
    denom_sq = sxx * syy
    num = Decimal(cov.numerator) / Decimal(cov.denominator)
    den = (Decimal(denom_sq.numerator) / Decimal(denom_sq.denominator)).sqrt()
    return num / den


def exact_kappa(a, b, classes) -> Fraction:
    """Cohen's kappa straight from label counts, as a Fraction."""
    n = len(a)
    p_o = Fraction(sum(1 for x, y in zip(a, b) if x == y), n)
    p_e = sum(
        Fraction(sum(1 for x in a if x == c), n) * Fraction(sum(1 for y in b if y == c), n)
        for c in classes
    )
    if p_e == 1:
        return Fraction(1)
    return (p_o - p_e) / (1 - p_e)


# -- sudoku -------------------------------------------------------------------


def latin3_bruteforce_count() -> int:
    count = 0
    for cells in itertools.product((1, 2, 3), repeat=9):
        rows = [cells[0:3], cells[3:6], cells[6:9]]
        ok = all(sorted(r) == [1, 2, 3] for r in rows) and all(
            sorted(rows[i][j] for i in range(3)) == [1, 2, 3] for j in range(3)
        )
        count += ok
    return count
