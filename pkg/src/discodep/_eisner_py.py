"""Pure-Python Eisner decoder; the reference the compiled kernel must match."""
import math

NEG_INF = -math.inf


def eisner(scores, single_root):
    """Best projective tree for an (n+1)x(n+1) score matrix, ``scores[h][d]``.

    Returns ``(heads, total)`` with ``heads[i]`` the head of node ``i+1``.
    Ties go to the smallest split point, so output is deterministic.
    """
    s = [list(map(float, row)) for row in scores]
    N = len(s)
    n = N - 1
    if n < 1:
        return [], 0.0
    lo = 1 if single_root else 0

    # [left, right]: left = head at the right end, right = head at the left end
    c_l = [[NEG_INF] * N for _ in range(N)]
    c_r = [[NEG_INF] * N for _ in range(N)]
    i_l = [[NEG_INF] * N for _ in range(N)]
    i_r = [[NEG_INF] * N for _ in range(N)]
    bc_l = [[0] * N for _ in range(N)]
    bc_r = [[0] * N for _ in range(N)]
    bi = [[0] * N for _ in range(N)]
    for k in range(N):
        c_l[k][k] = c_r[k][k] = 0.0

    for width in range(1, N - lo):
        for a in range(lo, N - width):
            b = a + width
            best, arg = NEG_INF, a
            row_r = c_r[a]
            for r in range(a, b):
                v = row_r[r] + c_l[r + 1][b]
                if v > best:
                    best, arg = v, r
            bi[a][b] = arg
            i_r[a][b] = best + s[a][b]
            i_l[a][b] = best + s[b][a] if a > 0 else NEG_INF

            best, arg = NEG_INF, a
            for r in range(a, b):
                v = c_l[a][r] + i_l[r][b]
                if v > best:
                    best, arg = v, r
            c_l[a][b], bc_l[a][b] = best, arg

            best, arg = NEG_INF, a + 1
            for r in range(a + 1, b + 1):
                v = i_r[a][r] + c_r[r][b]
                if v > best:
                    best, arg = v, r
            c_r[a][b], bc_r[a][b] = best, arg

    heads = [0] * n
    # stack of (kind, a, b); kinds: 0 c_l, 1 c_r, 2 i_l, 3 i_r
    stack = []
    if single_root:
        best, top = NEG_INF, 1
        for r in range(1, N):
            v = s[0][r] + c_l[1][r] + c_r[r][n]
            if v > best:
                best, top = v, r
        total = best
        heads[top - 1] = 0
        stack.append((0, 1, top))
        stack.append((1, top, n))
    else:
        total = c_r[0][n]
        stack.append((1, 0, n))
    while stack:
        kind, a, b = stack.pop()
        if a == b:
            continue
        if kind == 0:
            r = bc_l[a][b]
            stack.append((0, a, r))
            stack.append((2, r, b))
        elif kind == 1:
            r = bc_r[a][b]
            stack.append((3, a, r))
            stack.append((1, r, b))
        else:
            r = bi[a][b]
            if kind == 2:
                heads[a - 1] = b
            else:
                heads[b - 1] = a
            stack.append((1, a, r))
            stack.append((0, r + 1, b))
    return heads, total
