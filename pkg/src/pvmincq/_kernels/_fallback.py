"""Numpy/pure-Python implementations of the two hot kernels.

Mirrors `_speedups` (the compiled extension) operation for operation; the
package selects between them at import time. Keep both in sync.
"""

from __future__ import annotations

from collections import deque

import numpy as np

_BISECT_STEPS = 64
_REJECT_STREAK_RESTART = 20


def project_box_hyperplane(
    z: np.ndarray, m: np.ndarray, u: float, r: float
) -> np.ndarray:
    """Project z onto {x : m.x = r, 0 <= x <= u} (Euclidean).

    Bisects on the hyperplane's Lagrange multiplier theta, where the
    candidate is clip(z - theta*m, 0, u), then solves the final linear
    segment exactly. Assumes the set is nonempty (caller checks that r is
    attainable over the box).
    """
    z = np.asarray(z, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    nonzero = m != 0.0
    if not nonzero.any():
        return np.clip(z, 0.0, u)
    t_zero = z[nonzero] / m[nonzero]
    t_upper = (z[nonzero] - u) / m[nonzero]
    lo = min(t_zero.min(), t_upper.min()) - 1.0
    hi = max(t_zero.max(), t_upper.max()) + 1.0
    # m.clip(z - theta*m) is non-increasing in theta; keep r bracketed
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if m @ np.clip(z - mid * m, 0.0, u) >= r:
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    values = z - mid * m
    active = (values > 0.0) & (values < u) & nonzero
    at_upper = (values >= u) & nonzero
    denom = float(m[active] @ m[active])
    if denom > 0.0:
        theta = (m[active] @ z[active] + u * m[at_upper].sum() - r) / denom
    else:
        theta = mid
    return np.clip(z - theta * m, 0.0, u)


def qp_minimize(
    M: np.ndarray,
    lin: np.ndarray,
    m: np.ndarray,
    u: float,
    r: float,
    step: float,
    tol: float = 1e-8,
    max_iter: int = 50000,
    x0: np.ndarray | None = None,
    check_every: int = 8,
):
    """Minimize x'Mx - lin'x over {m.x = r, 0 <= x <= u}.

    Accelerated projected gradient with a monotone safeguard: the candidate
    from the extrapolated point is accepted only if it does not increase the
    objective, so the objective history is non-increasing. Momentum restarts
    when it opposes progress, and the step backtracks whenever the local
    quadratic model is violated (guards against an underestimated Lipschitz
    constant).

    Stops when the fixed-point displacement ||x - P(x - step*grad f(x))||_inf
    drops to ``tol`` (checked every ``check_every`` iterations) or at
    ``max_iter``. Returns (x, iterations, residual, objective_history) with
    history[k] = f(x_k) including the start point.
    """
    M = np.ascontiguousarray(M, dtype=np.float64)
    lin = np.asarray(lin, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    if x0 is None:
        x0 = np.full(len(lin), 0.5 * u)
    x = project_box_hyperplane(np.asarray(x0, dtype=np.float64), m, u, r)
    Mx = M @ x
    fx = float(x @ Mx - lin @ x)
    y, My = x.copy(), Mx.copy()
    t = 1.0
    s = float(step)
    history = [fx]
    residual = np.inf
    rejections = 0
    iterations = 0
    for k in range(1, max_iter + 1):
        iterations = k
        grad_y = 2.0 * My - lin
        fy = float(y @ My - lin @ y)
        while True:
            z = project_box_hyperplane(y - s * grad_y, m, u, r)
            Mz = M @ z
            fz = float(z @ Mz - lin @ z)
            dz = z - y
            model = fy + float(grad_y @ dz) + 0.5 / s * float(dz @ dz)
            if fz <= model + 1e-12 * max(1.0, abs(fy)) or s <= step * 2.0**-60:
                break
            s *= 0.5
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        if fz <= fx:
            x_new, Mx_new, fx_new = z, Mz, fz
            rejections = 0
        else:
            x_new, Mx_new, fx_new = x, Mx, fx
            rejections += 1
        if float((y - z) @ (x_new - x)) > 0.0 or rejections >= _REJECT_STREAK_RESTART:
            y_next, My_next = x_new.copy(), Mx_new.copy()
            t_next = 1.0
            rejections = 0
        else:
            a = t / t_next
            b = (t - 1.0) / t_next
            y_next = x_new + a * (z - x_new) + b * (x_new - x)
            My_next = Mx_new + a * (Mz - Mx_new) + b * (Mx_new - Mx)
        x, Mx, fx = x_new, Mx_new, fx_new
        y, My, t = y_next, My_next, t_next
        history.append(fx)
        if k % check_every == 0 or k == max_iter:
            Mx = M @ x  # refresh: the running combinations drift slowly
            grad_x = 2.0 * Mx - lin
            moved = project_box_hyperplane(x - s * grad_x, m, u, r)
            residual = float(np.abs(x - moved).max())
            if residual <= tol:
                break
    return x, iterations, residual, np.array(history)


def max_bipartite_matching(
    indptr: np.ndarray, indices: np.ndarray, n_left: int, n_right: int
):
    """Hopcroft-Karp maximum-cardinality matching on a bipartite graph.

    The graph is CSR adjacency from left to right vertices; adjacency lists
    must be sorted so results are deterministic. Returns (pair_left,
    pair_right, size) with -1 marking unmatched vertices.
    """
    INF = np.iinfo(np.int64).max
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    pair_left = np.full(n_left, -1, dtype=np.int64)
    pair_right = np.full(n_right, -1, dtype=np.int64)
    dist = np.empty(n_left, dtype=np.int64)
    ptr = np.empty(n_left, dtype=np.int64)
    stack = np.empty(n_left + 1, dtype=np.int64)
    choice = np.empty(n_left + 1, dtype=np.int64)

    def bfs() -> int:
        queue = deque()
        for left in range(n_left):
            if pair_left[left] == -1:
                dist[left] = 0
                queue.append(left)
            else:
                dist[left] = INF
        reference = INF
        while queue:
            left = queue.popleft()
            if dist[left] >= reference:
                continue
            for e in range(indptr[left], indptr[left + 1]):
                right = indices[e]
                mate = pair_right[right]
                if mate == -1:
                    if reference == INF:
                        reference = dist[left] + 1
                elif dist[mate] == INF:
                    dist[mate] = dist[left] + 1
                    queue.append(mate)
        return reference

    def dfs(root: int, reference: int) -> bool:
        depth = 0
        stack[0] = root
        while depth >= 0:
            left = stack[depth]
            advanced = False
            while ptr[left] < indptr[left + 1]:
                right = indices[ptr[left]]
                ptr[left] += 1
                mate = pair_right[right]
                if mate == -1:
                    if dist[left] + 1 == reference:
                        choice[depth] = right
                        for i in range(depth + 1):
                            pair_left[stack[i]] = choice[i]
                            pair_right[choice[i]] = stack[i]
                        return True
                elif dist[mate] == dist[left] + 1:
                    choice[depth] = right
                    depth += 1
                    stack[depth] = mate
                    advanced = True
                    break
            if not advanced:
                dist[left] = INF
                depth -= 1
        return False

    size = 0
    while True:
        reference = bfs()
        if reference == INF:
            break
        ptr[:] = indptr[:-1]
        for left in range(n_left):
            if pair_left[left] == -1 and dfs(left, reference):
                size += 1
    return pair_left, pair_right, size
