"""Universal checker for properness (plain and modular) and r-distant sum distinction."""

import logging
from collections import defaultdict
from typing import Callable, List, Optional

from chromasum.core.coloring import EdgeColoring, weighted_degrees
from chromasum.core.graph import Graph, NeighborhoodCache
from chromasum.core.models import Violation, VerifyReport

logger = logging.getLogger(__name__)


def _color_clashes(g: Graph, c: EdgeColoring, key: Callable[[int], int], kind: str) -> List[Violation]:
    """Pairs of edges meeting at a vertex whose keyed colors coincide."""
    clashes = []
    for w in g.vertices():
        groups = defaultdict(list)
        for u in g.neighbors(w):
            groups[key(c[(w, u)])].append(u)
        for value, ends in groups.items():
            for i in range(len(ends)):
                for j in range(i + 1, len(ends)):
                    clashes.append(
                        Violation(
                            kind=kind,
                            u=ends[i],
                            v=ends[j],
                            vertex=w,
                            value=value,
                            detail=f"edges ({w}, {ends[i]}) and ({w}, {ends[j]}) share {kind.replace('_', ' ')} {value}",
                        )
                    )
    return clashes


def verify(
    g: Graph,
    c: EdgeColoring,
    r: int,
    modulus: Optional[int] = None,
    cache: Optional[NeighborhoodCache] = None,
) -> VerifyReport:
    """Check ``c`` on ``g`` and enumerate every violation.

    Args:
        g: The graph.
        c: A total coloring of ``g``.
        r: Distance up to which sums must differ.
        modulus: When given, also check that adjacent colors are distinct modulo it.
        cache: Optional shared r-neighbourhood cache for ``g``.
    """
    if cache is None or cache.r != r or cache.graph is not g:
        cache = NeighborhoodCache(g, r)

    violations = _color_clashes(g, c, lambda color: color, "color")
    proper = not violations

    proper_mod = None
    if modulus is not None:
        mod_violations = _color_clashes(g, c, lambda color: color % modulus, "color_mod")
        proper_mod = (modulus, not mod_violations)
        violations.extend(mod_violations)

    sums = weighted_degrees(g, c)
    sum_conflicts = [
        Violation(kind="sum", u=u, v=v, value=sums[u], detail=f"vertices {u} and {v} both have sum {sums[u]}")
        for u, v in cache.pairs()
        if sums[u] == sums[v]
    ]
    violations.extend(sum_conflicts)

    report = VerifyReport(
        r=r,
        proper=proper,
        proper_mod=proper_mod,
        distinguishing_r=not sum_conflicts,
        violating_pairs=violations,
        max_color=c.max_color,
        min_color=c.min_color,
    )
    logger.debug(f"verify(r={r}): proper={proper} distinguishing={report.distinguishing_r} ({len(violations)} violations)")
    return report
