"""Exact nearest-neighbor search with a bounding-box k-d tree.

Splits cycle through axes by depth at the median (via argpartition); every
node keeps the tight bounding box of its points, which makes the branch-and-
bound pruning effective even in higher dimensions.  Queries are exact: the
returned index is the argmin of Euclidean distance, ties broken by the
smallest point index.  The tree is immutable after construction, so
concurrent queries are safe.
"""

import numpy as np

from .errors import DataError
from .validation import as_float_matrix


class KdTree:
    def __init__(self, points, leaf_size=16):
        pts = np.ascontiguousarray(as_float_matrix(points, "points"))
        if leaf_size < 1:
            raise DataError("leaf_size must be >= 1")
        self.points = pts
        self.leaf_size = int(leaf_size)
        m = pts.shape[0]
        self._axis = []
        self._thr = []
        self._left = []
        self._right = []
        self._lo = []
        self._hi = []
        self._start = []
        self._end = []
        self._leafbuf = []
        self._build(np.arange(m), 0)
        self.leaf_idx = np.array(self._leafbuf, dtype=np.int64)
        del self._leafbuf

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def _new_node(self, order):
        nid = len(self._axis)
        sub = self.points[order]
        self._lo.append(sub.min(axis=0))
        self._hi.append(sub.max(axis=0))
        self._axis.append(-1)
        self._thr.append(0.0)
        self._left.append(-1)
        self._right.append(-1)
        self._start.append(-1)
        self._end.append(-1)
        return nid

    def _build(self, order, depth):
        nid = self._new_node(order)
        if len(order) <= self.leaf_size:
            self._start[nid] = len(self._leafbuf)
            self._leafbuf.extend(order.tolist())
            self._end[nid] = len(self._leafbuf)
            return nid
        axis = depth % self.dim
        vals = self.points[order, axis]
        mid = len(order) // 2
        part = np.argpartition(vals, mid)
        self._axis[nid] = axis
        self._thr[nid] = float(vals[part[mid]])
        self._left[nid] = self._build(order[part[:mid]], depth + 1)
        self._right[nid] = self._build(order[part[mid:]], depth + 1)
        return nid

    def _box_dist2(self, nid, q):
        off = np.maximum(self._lo[nid] - q, 0.0) + np.maximum(q - self._hi[nid], 0.0)
        return float(np.dot(off, off))

    def query(self, q):
        """Exact nearest neighbor of ``q``: returns ``(index, distance)``."""
        q = np.asarray(q, dtype=np.float64)
        if q.shape != (self.dim,):
            raise DataError("query must have dimension %d, got shape %s" % (self.dim, (q.shape,)))
        best_d2 = np.inf
        best_i = -1
        pts = self.points
        lidx = self.leaf_idx
        stack = [(0, self._box_dist2(0, q))]
        while stack:
            nid, min_d2 = stack.pop()
            if min_d2 > best_d2:
                continue
            axis = self._axis[nid]
            while axis >= 0:
                left, right = self._left[nid], self._right[nid]
                dl = self._box_dist2(left, q)
                dr = self._box_dist2(right, q)
                if dl <= dr:
                    near, d_near, far, d_far = left, dl, right, dr
                else:
                    near, d_near, far, d_far = right, dr, left, dl
                if d_far <= best_d2:
                    stack.append((far, d_far))
                nid = near
                axis = self._axis[nid]
            idx = lidx[self._start[nid] : self._end[nid]]
            diff = pts[idx] - q
            d2 = np.einsum("ij,ij->i", diff, diff)
            d_min = d2.min()
            if d_min < best_d2:
                best_d2 = d_min
                best_i = int(idx[d2 == d_min].min())
            elif d_min == best_d2 and best_i >= 0:
                cand = int(idx[d2 == d_min].min())
                if cand < best_i:
                    best_i = cand
        return best_i, float(np.sqrt(best_d2))

    def query_many(self, queries):
        """Vector of exact nearest neighbors; returns (indices, distances)."""
        qs = as_float_matrix(queries, "queries")
        if qs.shape[1] != self.dim:
            raise DataError("queries must have dimension %d" % self.dim)
        idx = np.empty(qs.shape[0], dtype=np.int64)
        dist = np.empty(qs.shape[0])
        for i in range(qs.shape[0]):
            idx[i], dist[i] = self.query(qs[i])
        return idx, dist


def linear_scan_nn(points, q):
    """Brute-force reference with the same distance and tie rule."""
    pts = np.asarray(points, dtype=np.float64)
    diff = pts - np.asarray(q, dtype=np.float64)
    d2 = np.einsum("ij,ij->i", diff, diff)
    best = d2.min()
    idx = int(np.nonzero(d2 == best)[0].min())
    return idx, float(np.sqrt(best))
