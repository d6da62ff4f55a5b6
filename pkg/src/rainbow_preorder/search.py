"""Rainbow subgraph search in edge-colored complete graphs.

The main routine places pattern vertices one at a time in a fixed connected
order (maximum degree first, then BFS) and tries host vertices in ascending
label order.  A partial map is abandoned as soon as two image edges share a
color.  The host is complete, so only the color constraint ever prunes.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Optional

import numpy as np

from .coloring import EdgeColoring
from .graphs import Graph, search_order

__all__ = [
    "PatternTooLarge",
    "RainbowMatcher",
    "find_rainbow_embedding",
    "is_rainbow_free",
    "rainbow_embeddings",
    "brute_force_find",
    "validate_embedding",
    "BRUTE_FORCE_MAX_N",
]

BRUTE_FORCE_MAX_N = 8


class PatternTooLarge(ValueError):
    """The pattern has more vertices than the host complete graph."""


class RainbowMatcher:
    """A pattern compiled for repeated searches against many colorings."""

    def __init__(self, h: Graph):
        self.pattern = h
        self.order = search_order(h)
        pos = {v: i for i, v in enumerate(self.order)}
        self.back = [
            tuple(sorted(pos[u] for u in h.neighbors(v) if pos[u] < i))
            for i, v in enumerate(self.order)
        ]
        self.k = h.order

    def _run(self, mat, n: int, visit=None) -> Optional[list[int]]:
        k = self.k
        if k > n:
            raise PatternTooLarge(f"pattern has {k} vertices, host K_{n} has {n}")
        if k == 0:
            return []
        back = self.back
        image = [0] * k
        free = [True] * (n + 1)
        used: set[int] = set()
        hosts = range(1, n + 1)

        def rec(i: int) -> bool:
            if i == k:
                return visit is None or visit(image)
            b = back[i]
            nb = len(b)
            for w in hosts:
                if not free[w]:
                    continue
                row = mat[w]
                if nb == 0:
                    free[w] = False
                    image[i] = w
                    if rec(i + 1):
                        return True
                    free[w] = True
                elif nb == 1:
                    c = row[image[b[0]]]
                    if c in used:
                        continue
                    used.add(c)
                    free[w] = False
                    image[i] = w
                    if rec(i + 1):
                        return True
                    free[w] = True
                    used.discard(c)
                else:
                    cs = [row[image[j]] for j in b]
                    fresh = set(cs)
                    if len(fresh) != nb or not used.isdisjoint(fresh):
                        continue
                    used.update(fresh)
                    free[w] = False
                    image[i] = w
                    if rec(i + 1):
                        return True
                    free[w] = True
                    used.difference_update(fresh)
            return False

        return list(image) if rec(0) else None

    def find_in_matrix(self, mat, n: int) -> Optional[dict[int, int]]:
        image = self._run(mat, n)
        if image is None:
            return None
        return dict(zip(self.order, image))

    def find(self, kc: EdgeColoring) -> Optional[dict[int, int]]:
        return self.find_in_matrix(kc.matrix, kc.n)

    def present(self, kc: EdgeColoring) -> bool:
        """Like :meth:`find` but a too-large pattern simply counts as absent."""
        if self.k > kc.n:
            return False
        return self._run(kc.matrix, kc.n) is not None

    def embeddings(self, kc: EdgeColoring, limit: int) -> list[dict[int, int]]:
        found: list[dict[int, int]] = []

        def visit(image):
            found.append(dict(zip(self.order, image)))
            return len(found) >= limit

        if limit > 0 and self.k <= kc.n:
            self._run(kc.matrix, kc.n, visit)
        return found


@lru_cache(maxsize=512)
def matcher(h: Graph) -> RainbowMatcher:
    return RainbowMatcher(h)


def find_rainbow_embedding(kc: EdgeColoring, h: Graph) -> Optional[dict[int, int]]:
    """Some rainbow copy of ``h`` as a pattern-vertex -> host-vertex map, or None.

    Raises :class:`PatternTooLarge` when ``h`` has more vertices than the host.
    """
    return matcher(h).find(kc)


def is_rainbow_free(kc: EdgeColoring, h: Graph) -> bool:
    return not matcher(h).present(kc)


def rainbow_embeddings(kc: EdgeColoring, h: Graph, limit: int = 100) -> list[dict[int, int]]:
    """Up to ``limit`` rainbow embeddings in search order (automorphic copies included)."""
    return matcher(h).embeddings(kc, limit)


def validate_embedding(kc: EdgeColoring, h: Graph, emb: dict[int, int]) -> bool:
    """Injective, total on ``V(h)``, host labels in range and rainbow on ``E(h)``."""
    if set(emb) != set(h.vertices):
        return False
    images = list(emb.values())
    if len(set(images)) != len(images) or not all(1 <= x <= kc.n for x in images):
        return False
    colors = [kc.color(emb[u], emb[v]) for u, v in h.edges]
    return len(set(colors)) == len(colors)


# ---------------------------------------------------------------------------
# exhaustive oracle


@lru_cache(maxsize=64)
def _injections(n: int, k: int) -> np.ndarray:
    arr = np.array(list(permutations(range(1, n + 1), k)), dtype=np.int16)
    return arr.reshape(-1, k)


@lru_cache(maxsize=16)
def _index_matrix(n: int) -> np.ndarray:
    idx = np.full((n + 1, n + 1), -1, dtype=np.int32)
    e = 0
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            idx[u, v] = idx[v, u] = e
            e += 1
    return idx


def brute_force_find(kc: EdgeColoring, h: Graph) -> Optional[dict[int, int]]:
    """Scan every injective map ``V(h) -> [n]`` and return the first rainbow one.

    Independent of :class:`RainbowMatcher`: vectorised over all
    ``n!/(n-k)!`` maps in lexicographic order.
    """
    n, k = kc.n, h.order
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    if k > n:
        raise PatternTooLarge(f"pattern has {k} vertices, host K_{n} has {n}")
    verts = list(h.vertices)
    if k == 0:
        return {}
    maps = _injections(n, k)
    if h.size == 0:
        return {v: int(x) for v, x in zip(verts, maps[0])}
    pos = {v: i for i, v in enumerate(verts)}
    pa = np.array([pos[u] for u, _ in sorted(h.edges)])
    pb = np.array([pos[v] for _, v in sorted(h.edges)])
    idx = _index_matrix(n)[maps[:, pa], maps[:, pb]]
    cols = np.asarray(kc.colors, dtype=np.int64)[idx]
    cols.sort(axis=1)
    rainbow = np.all(np.diff(cols, axis=1) != 0, axis=1)
    hits = np.flatnonzero(rainbow)
    if hits.size == 0:
        return None
    row = maps[hits[0]]
    return {v: int(x) for v, x in zip(verts, row)}
