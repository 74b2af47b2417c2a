"""Brute-force oracle: enumerate rooted 4-valent planar maps with spins.

A map on n vertices is encoded by permutations of the darts 1..4n: the
vertex rotation is pinned to the canonical permutation with cycles
(1,2,3,4)(5,6,7,8)..., so enumerating maps reduces to enumerating the edge
pairings (fixed-point-free involutions) alpha.  Faces are the cycles of
sigma o alpha (alpha applied first); Euler's relation V - E + F = 2 - 2g
then gives the genus.  Each planar pairing is weighted by its spin sum
(root vertex forced to spin +) and the dart-labelled total is converted to
a rooted-map count through the normalization 4n / (n! 4^n), which is the
orbit size correction for the centralizer of the canonical rotation.

Deliberately independent of the series pipeline: no shared model tables,
just permutations and dictionaries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Tuple

from .errors import EnumerationBound
from .exactalg import ParamPoly

MAX_VERTICES = 4


def canonical_sigma(n: int) -> List[int]:
    """The vertex rotation on darts 1..4n, as a lookup table (index 0 unused)."""
    sigma = [0] * (4 * n + 1)
    for d in range(1, 4 * n + 1):
        sigma[d] = d - 3 if d % 4 == 0 else d + 1
    return sigma


def dart_vertex(d: int) -> int:
    """Vertex owning dart d (vertices numbered from 0)."""
    return (d - 1) // 4


@dataclass(frozen=True)
class DartMap:
    """A rooted map: canonical rotation plus an edge involution on 4n darts.

    ``alpha`` is a tuple of length 4n+1 with alpha[0] = 0 unused; the root
    dart is always 1.
    """

    n: int
    alpha: Tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha) != 4 * self.n + 1:
            raise ValueError("alpha must cover darts 1..4n")
        for d in range(1, 4 * self.n + 1):
            a = self.alpha[d]
            if a == d:
                raise ValueError("alpha must be fixed-point free")
            if not 1 <= a <= 4 * self.n or self.alpha[a] != d:
                raise ValueError("alpha must be an involution on 1..4n")

    def face_count(self) -> int:
        """Number of cycles of sigma o alpha (alpha first)."""
        sigma = canonical_sigma(self.n)
        seen = [False] * (4 * self.n + 1)
        faces = 0
        for start in range(1, 4 * self.n + 1):
            if seen[start]:
                continue
            faces += 1
            d = start
            while not seen[d]:
                seen[d] = True
                d = sigma[self.alpha[d]]
        return faces

    def is_connected(self) -> bool:
        """Transitivity of the group generated by sigma and alpha on darts."""
        sigma = canonical_sigma(self.n)
        seen = [False] * (4 * self.n + 1)
        stack = [1]
        seen[1] = True
        count = 0
        while stack:
            d = stack.pop()
            count += 1
            for nxt in (sigma[d], self.alpha[d]):
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append(nxt)
        return count == 4 * self.n

    def genus(self) -> int:
        """From Euler's relation with V = n, E = 2n (map must be connected)."""
        chi = self.n - 2 * self.n + self.face_count()
        return (2 - chi) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as sorted vertex pairs (self-loops allowed), one per dart pair."""
        out = []
        for d in range(1, 4 * self.n + 1):
            a = self.alpha[d]
            if d < a:
                u, v = dart_vertex(d), dart_vertex(a)
                out.append((u, v) if u <= v else (v, u))
        return out


def genus_check(dart_map: DartMap) -> bool:
    """True iff the map is connected and embeds in the sphere (genus 0)."""
    if not dart_map.is_connected():
        return False
    return dart_map.face_count() == dart_map.n + 2


def _spin_polynomial(edges: Tuple[Tuple[int, int], ...], n: int) -> ParamPoly:
    """Sum over spin assignments with vertex 0 forced to spin +.

    Each assignment contributes nu^(#monochromatic edges) * c^(#plus - #minus).
    """
    terms: Dict[Tuple[int, int], int] = {}
    for mask in range(1 << (n - 1)):
        # bit v-1 of mask = 1 means vertex v carries spin -, vertex 0 is +
        minus = bin(mask).count("1")
        mono = 0
        for u, v in edges:
            su = 0 if u == 0 else (mask >> (u - 1)) & 1
            sv = 0 if v == 0 else (mask >> (v - 1)) & 1
            if su == sv:
                mono += 1
        key = (mono, n - 2 * minus)
        terms[key] = terms.get(key, 0) + 1
    return ParamPoly({k: Fraction(v) for k, v in terms.items()})


@dataclass(frozen=True)
class EnumerationSurvey:
    """Full result of the exhaustive pairing enumeration at size n."""

    n: int
    total_matchings: int
    connected_matchings: int
    planar_matchings: int
    rooted_map_count: int
    partition_polynomial: ParamPoly


@lru_cache(maxsize=8)
def survey(n: int) -> EnumerationSurvey:
    """Enumerate every edge pairing on 4n darts and aggregate the results."""
    if not 1 <= n <= MAX_VERTICES:
        raise EnumerationBound(
            "enumeration is limited to 1 <= n <= %d vertices" % MAX_VERTICES
        )
    sigma = canonical_sigma(n)
    total_darts = 4 * n
    alpha = [0] * (total_darts + 1)
    # Union-find over vertices with per-component open-dart counts and an
    # explicit undo stack (no path compression so undo is exact).
    parent = list(range(n))
    size = [1] * n
    open_darts = [4] * n
    components = [n]

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    stats = {"total": 0, "connected": 0, "planar": 0}
    spin_cache: Dict[Tuple[Tuple[int, int], ...], ParamPoly] = {}
    accum: Dict[Tuple[int, int], Fraction] = {}

    def matchings_on(k: int) -> int:
        """(k-1)!! -- matchings of k points; counts leaves under a pruned node."""
        out = 1
        while k > 1:
            out *= k - 1
            k -= 2
        return out

    def face_count_of(alpha_arr: List[int]) -> int:
        seen = [False] * (total_darts + 1)
        faces = 0
        for start in range(1, total_darts + 1):
            if seen[start]:
                continue
            faces += 1
            d = start
            while not seen[d]:
                seen[d] = True
                d = sigma[alpha_arr[d]]
        return faces

    def handle_leaf():
        stats["total"] += 1
        if components[0] != 1:
            return
        stats["connected"] += 1
        if face_count_of(alpha) != n + 2:
            return
        stats["planar"] += 1
        edge_list = []
        for d in range(1, total_darts + 1):
            a = alpha[d]
            if d < a:
                u, v = dart_vertex(d), dart_vertex(a)
                edge_list.append((u, v) if u <= v else (v, u))
        key = tuple(sorted(edge_list))
        poly = spin_cache.get(key)
        if poly is None:
            poly = _spin_polynomial(key, n)
            spin_cache[key] = poly
        for term_key, coef in poly.terms.items():
            accum[term_key] = accum.get(term_key, Fraction(0)) + coef

    def pair_from(d: int, remaining: int):
        while d <= total_darts and alpha[d]:
            d += 1
        if d > total_darts:
            handle_leaf()
            return
        u = dart_vertex(d)
        for e in range(d + 1, total_darts + 1):
            if alpha[e]:
                continue
            v = dart_vertex(e)
            alpha[d], alpha[e] = e, d
            ru, rv = find(u), find(v)
            undo = None
            if ru != rv:
                if size[ru] < size[rv]:
                    ru, rv = rv, ru
                parent[rv] = ru
                size[ru] += size[rv]
                open_darts[ru] += open_darts[rv]
                components[0] -= 1
                undo = (ru, rv)
            open_darts[ru] -= 2
            closed_early = open_darts[ru] == 0 and remaining > 2
            if closed_early:
                # every completion of this partial pairing is disconnected
                stats["total"] += matchings_on(remaining - 2)
            else:
                pair_from(d + 1, remaining - 2)
            open_darts[ru] += 2
            if undo is not None:
                ru, rv = undo
                parent[rv] = rv
                size[ru] -= size[rv]
                open_darts[ru] -= open_darts[rv]
                components[0] += 1
            alpha[d], alpha[e] = 0, 0

    pair_from(1, total_darts)

    norm = Fraction(4 * n, factorial(n) * 4 ** n)
    poly = ParamPoly({k: v * norm for k, v in accum.items()})
    rooted = Fraction(stats["planar"]) * norm
    if rooted.denominator != 1:
        raise ArithmeticError(
            "planar matching count is not a multiple of the orbit size"
        )
    return EnumerationSurvey(
        n=n,
        total_matchings=stats["total"],
        connected_matchings=stats["connected"],
        planar_matchings=stats["planar"],
        rooted_map_count=int(rooted),
        partition_polynomial=poly,
    )


def bruteforce_Z(n: int) -> ParamPoly:
    """Z_n(nu, c) by exhaustive enumeration (n <= 4)."""
    return survey(n).partition_polynomial


def all_pairings(n: int) -> List[DartMap]:
    """Every fixed-point-free involution on 4n darts as a DartMap (n <= 2).

    Intended for exhaustive structural tests; (4n-1)!! grows too fast beyond
    tiny n for this convenience form.
    """
    if not 1 <= n <= 2:
        raise EnumerationBound("all_pairings is for n <= 2 only")
    total = 4 * n
    out: List[DartMap] = []
    alpha = [0] * (total + 1)

    def rec(d: int):
        while d <= total and alpha[d]:
            d += 1
        if d > total:
            out.append(DartMap(n=n, alpha=tuple(alpha)))
            return
        for e in range(d + 1, total + 1):
            if alpha[e]:
                continue
            alpha[d], alpha[e] = e, d
            rec(d + 1)
            alpha[d], alpha[e] = 0, 0

    rec(1)
    return out
