"""Exact solver for the balanced transportation problem.

    minimize    sum_ij T[i,j] * C[i,j]
    subject to  sum_j T[i,j] = supply[i],  sum_i T[i,j] = demand[j],  T >= 0

Transportation simplex. The initial basis comes from the least-cost
(crossing-out) rule, which starts near the optimum for geometric costs and
keeps the pivot count low; duals are computed over the basis spanning tree
(MODI), entering variables by the most negative reduced cost with a switch to
Bland's rule if degenerate pivots drag on. Exact at optimality up to
floating-point arithmetic, which is what the word-distance features need.
"""
from __future__ import annotations

import numpy as np


class TransportError(RuntimeError):
    """Solver failed to terminate (should not happen on valid inputs)."""


def _northwest_corner(supply: np.ndarray, demand: np.ndarray):
    """Fallback initial basis: m+n-1 cells, cost-blind but always a tree."""
    m, n = len(supply), len(demand)
    plan = np.zeros((m, n))
    basis: list[tuple[int, int]] = []
    ra = supply.copy()
    cb = demand.copy()
    i = j = 0
    while True:
        t = min(ra[i], cb[j])
        plan[i, j] = t
        basis.append((i, j))
        ra[i] -= t
        cb[j] -= t
        if i == m - 1 and j == n - 1:
            break
        if ra[i] <= cb[j] and i < m - 1:
            i += 1
        elif j < n - 1:
            j += 1
        else:
            i += 1
    return plan, basis


def _least_cost_start(costs: np.ndarray, supply: np.ndarray, demand: np.ndarray):
    """Initial basis by repeatedly allocating at the cheapest open cell,
    crossing out exactly one exhausted row or column per allocation."""
    m, n = costs.shape
    work = costs.copy()
    plan = np.zeros((m, n))
    basis: list[tuple[int, int]] = []
    ra = supply.copy()
    cb = demand.copy()
    rows_open = m
    cols_open = n
    for _ in range(m + n - 1):
        flat = int(np.argmin(work))
        i, j = divmod(flat, n)
        t = min(ra[i], cb[j])
        plan[i, j] = t
        basis.append((i, j))
        ra[i] -= t
        cb[j] -= t
        if rows_open + cols_open == 2:
            break
        close_row = ra[i] <= cb[j]
        if close_row and rows_open == 1:
            close_row = False
        if not close_row and cols_open == 1:
            close_row = True
        if close_row:
            work[i, :] = np.inf
            rows_open -= 1
        else:
            work[:, j] = np.inf
            cols_open -= 1
    return plan, basis


def _duals_from_tree(adj, costs: np.ndarray, m: int, n: int):
    """Solve u[i] + v[j] = C[i,j] over the basis tree, anchored at u[0] = 0.
    Returns None when the edge set does not span every node."""
    u = np.zeros(m)
    v = np.zeros(n)
    seen = 1
    visited = np.zeros(m + n, dtype=bool)
    visited[0] = True
    stack = [0]
    while stack:
        node = stack.pop()
        for nxt in adj[node]:
            if visited[nxt]:
                continue
            visited[nxt] = True
            seen += 1
            if node < m:
                v[nxt - m] = costs[node, nxt - m] - u[node]
            else:
                u[nxt] = costs[nxt, node - m] - v[node - m]
            stack.append(nxt)
    if seen != m + n:
        return None
    return u, v


def _cycle_path(adj, m: int, enter: tuple[int, int]):
    """Node path from row enter[0] to col enter[1] through the basis tree."""
    start, goal = enter[0], m + enter[1]
    parent = {start: -1}
    stack = [start]
    while stack:
        node = stack.pop()
        if node == goal:
            break
        for nxt in adj[node]:
            if nxt not in parent:
                parent[nxt] = node
                stack.append(nxt)
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def solve_transport(
    costs,
    supply,
    demand,
    tol: float = 1e-12,
    max_iters: int | None = None,
) -> tuple[float, np.ndarray]:
    """Return (optimal cost, optimal plan) for a balanced transportation problem.

    supply and demand must be positive and sum to the same total (within 1e-9;
    demand is rescaled to balance exactly).
    """
    C = np.asarray(costs, dtype=float)
    a = np.asarray(supply, dtype=float).copy()
    b = np.asarray(demand, dtype=float).copy()
    m, n = C.shape
    if a.shape != (m,) or b.shape != (n,):
        raise ValueError("supply/demand shapes do not match the cost matrix")
    if np.any(a <= 0) or np.any(b <= 0):
        raise ValueError("supply and demand entries must be positive")
    if abs(a.sum() - b.sum()) > 1e-9 * max(a.sum(), b.sum()):
        raise ValueError("supply and demand totals differ")
    b *= a.sum() / b.sum()

    # one-row / one-column problems are fully determined by the constraints
    if m == 1:
        plan = b.reshape(1, n).copy()
        return float(np.dot(b, C[0])), plan
    if n == 1:
        plan = a.reshape(m, 1).copy()
        return float(np.dot(a, C[:, 0])), plan

    def build_adjacency(cells):
        adj = [[] for _ in range(m + n)]
        for i, j in cells:
            adj[i].append(m + j)
            adj[m + j].append(i)
        return adj

    plan, basis_list = _least_cost_start(C, a, b)
    adj = build_adjacency(basis_list)
    duals = _duals_from_tree(adj, C, m, n)
    if len(basis_list) != m + n - 1 or duals is None:
        # crossing-out produced a deficient basis on a degenerate instance
        plan, basis_list = _northwest_corner(a, b)
        adj = build_adjacency(basis_list)
        duals = _duals_from_tree(adj, C, m, n)

    in_basis = np.zeros((m, n), dtype=bool)
    for cell in basis_list:
        in_basis[cell] = True

    if max_iters is None:
        max_iters = 2000 + 200 * (m + n)
    bland_after = 500 + 50 * (m + n)

    for it in range(max_iters):
        if duals is None:
            raise TransportError("basis lost tree structure")
        u, v = duals
        reduced = C - u[:, None] - v[None, :]
        reduced[in_basis] = 0.0

        if it < bland_after:
            enter = np.unravel_index(np.argmin(reduced), reduced.shape)
            if reduced[enter] >= -tol:
                break
        else:
            # Bland: first negative cell in row-major order, guarantees termination
            neg = np.argwhere(reduced < -tol)
            if len(neg) == 0:
                break
            enter = tuple(neg[0])
        enter = (int(enter[0]), int(enter[1]))

        path = _cycle_path(adj, m, enter)
        # path nodes alternate row/col; consecutive pairs are basis cells with
        # signs -, +, -, ... (entering cell itself is the sole + at theta)
        cells = []
        for k in range(len(path) - 1):
            x, y = path[k], path[k + 1]
            cell = (x, y - m) if x < m else (y, x - m)
            cells.append((cell, -1 if k % 2 == 0 else +1))

        theta = np.inf
        leaving = None
        for cell, sign in cells:
            if sign < 0 and plan[cell] < theta:
                theta = plan[cell]
                leaving = cell
        plan[enter] += theta
        for cell, sign in cells:
            plan[cell] += sign * theta
            if plan[cell] < 0.0:
                plan[cell] = 0.0
        in_basis[leaving] = False
        in_basis[enter] = True
        li, lj = leaving
        adj[li].remove(m + lj)
        adj[m + lj].remove(li)
        adj[enter[0]].append(m + enter[1])
        adj[m + enter[1]].append(enter[0])
        duals = _duals_from_tree(adj, C, m, n)
    else:
        raise TransportError(f"no convergence after {max_iters} pivots on a {m}x{n} problem")

    return float(np.sum(plan * C)), plan


def relaxed_lower_bound(costs, supply, demand) -> float:
    """max of the two constraint-relaxed transport costs; never exceeds the optimum."""
    C = np.asarray(costs, dtype=float)
    a = np.asarray(supply, dtype=float)
    b = np.asarray(demand, dtype=float)
    row_relaxed = float(np.dot(a, C.min(axis=1)))
    col_relaxed = float(np.dot(b, C.min(axis=0)))
    return max(row_relaxed, col_relaxed)


def greedy_feasible_shortcut(costs, supply, demand) -> float | None:
    """Cost of the nearest-target greedy plan when it happens to be feasible.

    Each supply node ships everything to its cheapest demand node; if the
    resulting column sums match the demand vector the plan attains the
    row-relaxed lower bound and is therefore optimal. Returns None otherwise.
    """
    C = np.asarray(costs, dtype=float)
    a = np.asarray(supply, dtype=float)
    b = np.asarray(demand, dtype=float)
    nearest = np.argmin(C, axis=1)
    col_sums = np.bincount(nearest, weights=a, minlength=len(b))
    if np.allclose(col_sums, b, rtol=0.0, atol=1e-12):
        return float(np.dot(a, C[np.arange(len(a)), nearest]))
    return None
