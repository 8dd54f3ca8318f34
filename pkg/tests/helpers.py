"""Independent reference evaluators shared by the test modules.

Everything here recomputes quantities from first principles (per-string
loops, dense exponentials) so the library's vectorized paths are checked
against genuinely independent oracles.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from gmqaoa import CnfFormula, Graph, ObjectiveTable


def bits_of(index: int, n: int) -> list[int]:
    """Bit i of the string index is the value at site i (site 0 least significant)."""
    return [(index >> i) & 1 for i in range(n)]


def digits_of(index: int, n: int, q: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(index % q)
        index //= q
    return out


def naive_cut_value(graph: Graph, assignment: list[int]) -> int:
    return sum(1 for u, v in graph.edges if assignment[u - 1] != assignment[v - 1])


def naive_coloring_violations(graph: Graph, coloring: list[int]) -> int:
    return sum(1 for u, v in graph.edges if coloring[u - 1] == coloring[v - 1])


def naive_cnf_violations(formula: CnfFormula, assignment: list[int]) -> int:
    violated = 0
    for clause in formula.clauses:
        satisfied = False
        for lit in clause:
            value = assignment[abs(lit) - 1]
            if (lit > 0 and value == 1) or (lit < 0 and value == 0):
                satisfied = True
                break
        if not satisfied:
            violated += 1
    return violated


def brute_force_maxcut_table(graph: Graph) -> ObjectiveTable:
    n = graph.vertex_count
    values = [naive_cut_value(graph, bits_of(x, n)) for x in range(1 << n)]
    return ObjectiveTable(n=n, q=2, values=np.array(values, dtype=float))


def random_graph(rng: np.random.Generator, n: int, edge_prob: float = 0.5) -> Graph:
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < edge_prob:
                edges.append((u, v))
    if not edges:
        edges.append((1, 2))
    return Graph(n, tuple(edges))


def dense_circuit_reference(amplitudes, values, betas, gammas):
    """Apply the layered evolution through dense matrix exponentials."""
    hp = np.diag(np.asarray(values, dtype=complex))
    gm = -np.outer(amplitudes, np.conj(amplitudes))
    state = np.asarray(amplitudes, dtype=complex).copy()
    for beta, gamma in zip(betas, gammas):
        state = scipy.linalg.expm(-1j * gamma * hp) @ state
        state = scipy.linalg.expm(-1j * beta * gm) @ state
    return state


def exact_unit(d: int, i: int, j: int) -> np.ndarray:
    out = np.zeros((d, d))
    out[i, j] = 1.0
    return out
