"""Random planar point sets and lune-based beta-skeleton graphs.

A pair of points (p, q) is joined by an edge of the beta-skeleton when the
lune (intersection of two disks determined by beta) holds no third point of
the set strictly inside it.  Membership tests are plain squared-distance
comparisons in float64 with no epsilon; points exactly on the lune boundary
never block an edge (open-lune policy).

``build_beta_skeleton`` is the production constructor: it prunes candidate
blockers with a uniform spatial grid and certificate tests, falling back to
an exact per-pair scan of the cells overlapping the lune's bounding box.
``brute_force_skeleton`` considers every (i, j, z) triple with no pruning
and serves as the ground-truth oracle; the two must agree exactly.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PointSet",
    "SkeletonConfig",
    "SkeletonGraph",
    "DegreeStats",
    "generate_points",
    "lune_membership",
    "build_beta_skeleton",
    "brute_force_skeleton",
    "degree_stats",
]

# pair blocks are capped so the certificate stages never materialize more
# than ~4M candidate pairs at once, keeping peak memory flat for large n
_PAIR_BLOCK = 4_000_000


@dataclass(frozen=True)
class PointSet:
    """Ordered planar points in the unit square; index is the node id."""

    coords: np.ndarray          # (n, 2) float64
    seed: int | None = None

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64)
        if c.ndim != 2 or c.shape[1] != 2:
            raise ValueError("coords must have shape (n, 2)")
        if c.shape[0] < 1:
            raise ValueError("a point set needs at least one point")
        if len(np.unique(c, axis=0)) != len(c):
            raise ValueError("points must be pairwise distinct")
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class SkeletonConfig:
    beta: float
    inclusion: str = "open"

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.inclusion != "open":
            raise ValueError("only the open-lune inclusion policy is supported")


@dataclass
class SkeletonGraph:
    """Undirected simple graph; edges stored as sorted (i, j) pairs, i < j."""

    n: int
    edges: np.ndarray           # (m, 2) int64, lexicographically sorted
    _edge_set: frozenset = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            if (e[:, 0] >= e[:, 1]).any():
                raise ValueError("edges must satisfy i < j")
            if e.min() < 0 or e.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            order = np.lexsort((e[:, 1], e[:, 0]))
            e = e[order]
            if len(np.unique(e, axis=0)) != len(e):
                raise ValueError("duplicate edges")
        self.edges = e

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n).astype(np.int64)

    def edge_set(self) -> frozenset:
        if self._edge_set is None:
            self._edge_set = frozenset(map(tuple, self.edges.tolist()))
        return self._edge_set

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        a, b = (i, j) if i < j else (j, i)
        return (a, b) in self.edge_set()

    def neighbor_lists(self) -> list:
        nbrs = [[] for _ in range(self.n)]
        for i, j in self.edges.tolist():
            nbrs[i].append(j)
            nbrs[j].append(i)
        return nbrs


@dataclass(frozen=True)
class DegreeStats:
    mean: float
    min: int
    max: int
    histogram: dict


def generate_points(n: int, seed) -> PointSet:
    """Draw n iid uniform points in the unit square, deterministically.

    Duplicate rows are redrawn (astronomically rare, but the graph
    construction requires pairwise-distinct points).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    coords = rng.random((n, 2))
    while True:
        _, first = np.unique(coords, axis=0, return_index=True)
        if len(first) == n:
            break
        dup = np.setdiff1d(np.arange(n), first)
        coords[dup] = rng.random((len(dup), 2))
    return PointSet(coords=coords, seed=seed)


def _lune_disks(px, py, qx, qy, beta):
    """Centers and squared radius of the two disks whose intersection is
    the lune.  Works for both definitional branches; they coincide at
    beta = 1."""
    dx = qx - px
    dy = qy - py
    dsq = dx * dx + dy * dy
    if beta >= 1.0:
        half = 0.5 * beta
        c1 = (px + half * dx, py + half * dy)
        c2 = (qx - half * dx, qy - half * dy)
        rsq = (0.25 * beta * beta) * dsq
    else:
        # disks of radius d/(2 beta) through p and q; centers sit on the
        # perpendicular bisector at offset sqrt(R^2 - (d/2)^2)
        s = math.sqrt(1.0 - beta * beta) / (2.0 * beta)
        mx = 0.5 * (px + qx)
        my = 0.5 * (py + qy)
        c1 = (mx - dy * s, my + dx * s)
        c2 = (mx + dy * s, my - dx * s)
        rsq = dsq / (4.0 * beta * beta)
    return c1, c2, rsq


def lune_membership(p, q, beta: float, x) -> bool:
    """True iff x lies strictly inside the beta-lune of the pair (p, q)."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    if px == qx and py == qy:
        raise ValueError("degenerate pair: p equals q")
    xx, xy = float(x[0]), float(x[1])
    (c1x, c1y), (c2x, c2y), rsq = _lune_disks(px, py, qx, qy, beta)
    in1 = (xx - c1x) ** 2 + (xy - c1y) ** 2 < rsq
    in2 = (xx - c2x) ** 2 + (xy - c2y) ** 2 < rsq
    return bool(in1 and in2)


def _inscribed_coeff(beta: float) -> float:
    """c such that the ball of radius c*d(p,q) centered at the midpoint is
    contained in the lune; used as a blocked-certificate."""
    if beta >= 1.0:
        return 0.5
    ib = 1.0 / beta
    return 0.5 * (ib - math.sqrt(ib * ib - 1.0))


class _Grid:
    """Uniform square-cell grid over the data bounding box, CSR layout."""

    def __init__(self, coords):
        n = len(coords)
        lo = coords.min(axis=0)
        span = coords.max(axis=0) - lo
        m = max(1, math.isqrt(n - 1) + 1)          # ceil(sqrt(n))
        self.m = m
        self.n = n
        self.lo = lo
        self.g = max(float(span.max()) / m, 1e-9)
        cx = np.minimum(((coords[:, 0] - lo[0]) / self.g).astype(np.int64), m - 1)
        cy = np.minimum(((coords[:, 1] - lo[1]) / self.g).astype(np.int64), m - 1)
        cid = cy * m + cx
        self.order = np.argsort(cid, kind="stable")
        self.cell_start = np.searchsorted(cid[self.order], np.arange(m * m + 1))
        self.counts = np.diff(self.cell_start)
        self.cx = cx
        self.cy = cy
        self.cells = [
            self.order[self.cell_start[k]:self.cell_start[k + 1]].tolist()
            for k in range(m * m)
        ]


def _pair_blocks(n, cap):
    """Yield (i_array, j_array) blocks covering all pairs i < j."""
    rows_per_block = max(1, cap // max(n, 1))
    i0 = 0
    while i0 < n - 1:
        i1 = min(n - 1, i0 + rows_per_block)
        ii = []
        jj = []
        for i in range(i0, i1):
            ii.append(np.full(n - 1 - i, i, dtype=np.int64))
            jj.append(np.arange(i + 1, n, dtype=np.int64))
        yield np.concatenate(ii), np.concatenate(jj)
        i0 = i1


def _slow_pair_check(i, j, xs, ys, grid, beta):
    """Exact open-lune emptiness test for one pair: scan every grid cell
    overlapping the lune bounding box, nearest rings around the midpoint
    cell first so blockers are found early."""
    m, g = grid.m, grid.g
    lo0, lo1 = float(grid.lo[0]), float(grid.lo[1])
    (c1x, c1y), (c2x, c2y), rsq = _lune_disks(xs[i], ys[i], xs[j], ys[j], beta)
    rad = math.sqrt(rsq)
    # lune is inside the intersection of the two disk bounding boxes
    bx0 = max(c1x, c2x) - rad
    bx1 = min(c1x, c2x) + rad
    by0 = max(c1y, c2y) - rad
    by1 = min(c1y, c2y) + rad
    gx0 = max(0, int((bx0 - lo0) / g))
    gx1 = min(m - 1, int((bx1 - lo0) / g))
    gy0 = max(0, int((by0 - lo1) / g))
    gy1 = min(m - 1, int((by1 - lo1) / g))
    mgx = min(max(int((0.5 * (xs[i] + xs[j]) - lo0) / g), gx0), gx1)
    mgy = min(max(int((0.5 * (ys[i] + ys[j]) - lo1) / g), gy0), gy1)
    cells = grid.cells
    max_ring = max(mgx - gx0, gx1 - mgx, mgy - gy0, gy1 - mgy, 0)
    for ring in range(max_ring + 1):
        cx0, cx1 = mgx - ring, mgx + ring
        cy0, cy1 = mgy - ring, mgy + ring
        for cyy in range(max(cy0, gy0), min(cy1, gy1) + 1):
            on_y_edge = cyy == cy0 or cyy == cy1
            for cxx in range(max(cx0, gx0), min(cx1, gx1) + 1):
                if not on_y_edge and cxx != cx0 and cxx != cx1:
                    continue
                for z in cells[cyy * m + cxx]:
                    if z == i or z == j:
                        continue
                    zx = xs[z]
                    zy = ys[z]
                    if ((zx - c1x) ** 2 + (zy - c1y) ** 2 < rsq
                            and (zx - c2x) ** 2 + (zy - c2y) ** 2 < rsq):
                        return False
    return True


def build_beta_skeleton(points: PointSet, config: SkeletonConfig) -> SkeletonGraph:
    """Grid-accelerated beta-skeleton; identical output to the oracle.

    Certificate stages only ever prove a pair blocked (a ball inscribed in
    the lune that provably contains a third point); pairs that survive all
    certificates get the exact cell-scan test, so exactness is preserved.
    """
    coords = points.coords
    n = points.n
    beta = config.beta
    if n == 1:
        return SkeletonGraph(n=1, edges=np.empty((0, 2), dtype=np.int64))
    x = coords[:, 0]
    y = coords[:, 1]
    grid = _Grid(coords)
    m, g = grid.m, grid.g
    c_ins = _inscribed_coeff(beta)
    xs = x.tolist()
    ys = y.tolist()
    edges = []

    for iu, ju in _pair_blocks(n, _PAIR_BLOCK):
        midx = 0.5 * (x[iu] + x[ju])
        midy = 0.5 * (y[iu] + y[ju])
        dsq = (x[ju] - x[iu]) ** 2 + (y[ju] - y[iu]) ** 2
        rball = c_ins * np.sqrt(dsq)
        rrball = rball * rball
        mcx = np.minimum(((midx - grid.lo[0]) / g).astype(np.int64), m - 1)
        mcy = np.minimum(((midy - grid.lo[1]) / g).astype(np.int64), m - 1)

        blocked = np.zeros(len(iu), dtype=bool)

        # stage 1: the whole 3x3 cell block around the midpoint cell lies
        # inside the inscribed ball, so any third point in it blocks
        big3 = rball >= (2.0 * math.sqrt(2.0) + 1e-9) * g
        if big3.any():
            cnt9 = np.zeros(len(iu), dtype=np.int64)
            for ox in (-1, 0, 1):
                for oy in (-1, 0, 1):
                    ncx = mcx + ox
                    ncy = mcy + oy
                    ok = (ncx >= 0) & (ncx < m) & (ncy >= 0) & (ncy < m)
                    cid = np.where(ok, ncy * m + ncx, 0)
                    cnt9 += np.where(ok, grid.counts[cid], 0)
            i_in = ((np.abs(grid.cx[iu] - mcx) <= 1)
                    & (np.abs(grid.cy[iu] - mcy) <= 1)).astype(np.int64)
            j_in = ((np.abs(grid.cx[ju] - mcx) <= 1)
                    & (np.abs(grid.cy[ju] - mcy) <= 1)).astype(np.int64)
            blocked |= big3 & (cnt9 - i_in - j_in >= 1)

        # stage 2: the midpoint cell alone lies inside the ball
        big1 = rball >= (math.sqrt(2.0) + 1e-9) * g
        if big1.any():
            cid0 = mcy * m + mcx
            cnt1 = grid.counts[cid0]
            i_in = ((grid.cx[iu] == mcx) & (grid.cy[iu] == mcy)).astype(np.int64)
            j_in = ((grid.cx[ju] == mcx) & (grid.cy[ju] == mcy)).astype(np.int64)
            blocked |= ~blocked & big1 & (cnt1 - i_in - j_in >= 1)

        # stage 3: direct distance screen of up to 3 stored points from
        # each of the 9 cells around the midpoint, against the ball
        rest = np.nonzero(~blocked)[0]
        if len(rest):
            r_i = iu[rest]
            r_j = ju[rest]
            r_mx = midx[rest]
            r_my = midy[rest]
            r_rr = rrball[rest]
            hit = np.zeros(len(rest), dtype=bool)
            for ox in (-1, 0, 1):
                for oy in (-1, 0, 1):
                    ncx = mcx[rest] + ox
                    ncy = mcy[rest] + oy
                    ok = (ncx >= 0) & (ncx < m) & (ncy >= 0) & (ncy < m)
                    cid = np.where(ok, ncy * m + ncx, 0)
                    start = grid.cell_start[cid]
                    count = np.where(ok, grid.counts[cid], 0)
                    for k in range(3):
                        has = count > k
                        if not has.any():
                            break
                        z = grid.order[np.minimum(start + k, grid.n - 1)]
                        inball = ((x[z] - r_mx) ** 2 + (y[z] - r_my) ** 2
                                  < r_rr)
                        # exclude endpoints by index: p and q themselves can
                        # round inside the certificate ball
                        hit |= has & (z != r_i) & (z != r_j) & inball
            blocked[rest[hit]] = True
            rest = rest[~hit]

        for t in rest.tolist():
            i = int(iu[t])
            j = int(ju[t])
            if _slow_pair_check(i, j, xs, ys, grid, beta):
                edges.append((i, j))

    return SkeletonGraph(n=n, edges=np.array(edges, dtype=np.int64).reshape(-1, 2))


def brute_force_skeleton(points: PointSet, config: SkeletonConfig) -> SkeletonGraph:
    """All (i, j, z) triples, no pruning; ground truth for the grid builder.

    The disk membership math here is written independently of the grid
    path so the two constructions cross-check each other.
    """
    coords = points.coords
    n = points.n
    beta = config.beta
    if n == 1:
        return SkeletonGraph(n=1, edges=np.empty((0, 2), dtype=np.int64))
    x = coords[:, 0]
    y = coords[:, 1]
    iu, ju = np.triu_indices(n, 1)
    px, py = x[iu], y[iu]
    qx, qy = x[ju], y[ju]
    dsq = (qx - px) ** 2 + (qy - py) ** 2
    if beta >= 1.0:
        half = 0.5 * beta
        c1x = (1.0 - half) * px + half * qx
        c1y = (1.0 - half) * py + half * qy
        c2x = half * px + (1.0 - half) * qx
        c2y = half * py + (1.0 - half) * qy
        rsq = (0.25 * beta * beta) * dsq
    else:
        s = math.sqrt(1.0 - beta * beta) / (2.0 * beta)
        mx = 0.5 * (px + qx)
        my = 0.5 * (py + qy)
        ox = -(qy - py) * s
        oy = (qx - px) * s
        c1x, c1y = mx + ox, my + oy
        c2x, c2y = mx - ox, my - oy
        rsq = dsq / (4.0 * beta * beta)

    npairs = len(iu)
    blocked = np.zeros(npairs, dtype=bool)
    chunk = max(1, _PAIR_BLOCK // max(n, 1))
    for s0 in range(0, npairs, chunk):
        sl = slice(s0, min(npairs, s0 + chunk))
        d1 = (x[None, :] - c1x[sl, None]) ** 2 + (y[None, :] - c1y[sl, None]) ** 2
        d2 = (x[None, :] - c2x[sl, None]) ** 2 + (y[None, :] - c2y[sl, None]) ** 2
        inside = (d1 < rsq[sl, None]) & (d2 < rsq[sl, None])
        rows = np.arange(sl.stop - sl.start)
        inside[rows, iu[sl]] = False
        inside[rows, ju[sl]] = False
        blocked[sl] = inside.any(axis=1)

    keep = ~blocked
    edges = np.stack([iu[keep], ju[keep]], axis=1)
    return SkeletonGraph(n=n, edges=edges.astype(np.int64))


def degree_stats(graph: SkeletonGraph) -> DegreeStats:
    deg = graph.degrees
    counts = np.bincount(deg)
    hist = {int(k): int(v) for k, v in enumerate(counts) if v}
    return DegreeStats(
        mean=float(deg.mean()),
        min=int(deg.min()),
        max=int(deg.max()),
        histogram=hist,
    )
