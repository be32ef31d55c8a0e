"""Batched evaluation of the companion condition over many group elements.

Exhaustive surveys touch every element of PSL(2,q) (close to a million
for q = 125), so the per-element work is vectorized with numpy: Moebius
images of all points for a whole batch of matrices at once, orbit
membership via scatter/gather, and per-a-orbit counts via segmented
sums.  Results are bit-identical to the scalar bitset path in
``criteria`` (asserted in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .finite_fields import ExtensionField, PrimeField
from .orbits import OrbitTable
from .projective import CanonicalGenerators, Element


class _PrimeOps:
    def __init__(self, field: PrimeField):
        self.q = field.q
        self.inv = np.zeros(self.q, dtype=np.int64)
        for e in range(1, self.q):
            self.inv[e] = pow(e, self.q - 2, self.q)

    def mul(self, x, y):
        return (x * y) % self.q

    def add(self, x, y):
        return (x + y) % self.q


class _ExtOps:
    def __init__(self, field: ExtensionField):
        self.q = field.q
        self.l = field.l
        self.exp = np.array(field.exp, dtype=np.int64)
        log = np.array(field.log, dtype=np.int64)
        log[0] = 0  # junk slot, masked out in mul
        self.log = log
        self.inv = np.array(field.inv_table, dtype=np.int64)
        self.dig = np.array([field.digits(e) for e in range(self.q)], dtype=np.int64)
        self.pows = np.array([field.l ** i for i in range(field.r)], dtype=np.int64)

    def mul(self, x, y):
        out = self.exp[(self.log[x] + self.log[y]) % (self.q - 1)]
        return np.where((x == 0) | (y == 0), 0, out)

    def add(self, x, y):
        return ((self.dig[x] + self.dig[y]) % self.l) @ self.pows


@dataclass
class Survey:
    """Outcome of a full enumeration of G: exact satisfied count over G - D."""

    total: int             # |G - D| candidates evaluated
    satisfied: int
    first_h: Optional[Element]
    first_tries: int       # candidates evaluated up to and including first_h


class ConditionEngine:
    """Vectorized companion-condition evaluation bound to one (q, p)."""

    def __init__(self, gens: CanonicalGenerators, tab: OrbitTable):
        self.gens = gens
        self.tab = tab
        group = gens.group
        fq = group.fq
        self.q = gens.q
        self.n_points = group.n_points
        self.ops = _PrimeOps(fq) if isinstance(fq, PrimeField) else _ExtOps(fq)

        self.pg_inv = np.array(group.perm_array(group.inverse(gens.g)), dtype=np.int64)
        self.glabel = np.array([1 + tab.g_index[pt] for pt in range(self.n_points)],
                               dtype=np.int8)
        self.in_o0 = np.array([tab.g_index[pt] == 0 for pt in range(self.n_points)],
                              dtype=np.int32)
        order_idx = []
        iblocks = []
        for i, row in enumerate(tab.a_orbits):
            for orbit in row:
                order_idx.extend(orbit)
                iblocks.append(i)
        self.order_idx = np.array(order_idx, dtype=np.int64)
        self.starts = np.arange(0, len(order_idx), gens.p)
        iblocks = np.array(iblocks)
        self.blocks0 = np.flatnonzero(iblocks == 0)
        self.blocks1 = np.flatnonzero(iblocks == 1)

        g = gens.g
        ginv = group.inverse(g)
        targets = {g, ginv}
        if group.d_prime == 2:
            neg = fq.neg
            targets.add(tuple(neg(e) for e in g))
            targets.add(tuple(neg(e) for e in ginv))
        self._dihedral_targets = [np.array(t, dtype=np.int64) for t in targets]
        self._enc = np.arange(self.q, dtype=np.int64)

    # -- vectorized primitives ------------------------------------------

    def mobius_batch(self, mats: np.ndarray) -> np.ndarray:
        """Point-index permutation arrays, one row per matrix."""
        ops = self.ops
        a = mats[:, 0:1]
        b = mats[:, 1:2]
        c = mats[:, 2:3]
        d = mats[:, 3:4]
        e = self._enc[None, :]
        num = ops.add(ops.mul(a, e), b)
        den = ops.add(ops.mul(c, e), d)
        img = ops.mul(num, ops.inv[den])
        perm = np.empty((mats.shape[0], self.n_points), dtype=np.int64)
        perm[:, 1:] = np.where(den == 0, 0, img + 1)
        perm[:, 0] = np.where(c[:, 0] == 0, 0,
                              ops.mul(a[:, 0], ops.inv[c[:, 0]]) + 1)
        return perm

    def in_dihedralizer_batch(self, mats: np.ndarray) -> np.ndarray:
        """Boolean mask: h g h^-1 lands in {g, g^-1} (up to sign)."""
        ops = self.ops
        fq = self.gens.group.fq
        g11, g12, g21, g22 = self.gens.g
        a, b, c, d = (mats[:, i] for i in range(4))
        minus_one = np.full(mats.shape[0], fq.neg(1), dtype=np.int64)
        neg_b = ops.mul(minus_one, b)  # h^-1 = (d, -b, -c, a) for det 1
        neg_c = ops.mul(minus_one, c)
        # t = h * g
        t11 = ops.add(ops.mul(a, g11), ops.mul(b, g21))
        t12 = ops.add(ops.mul(a, g12), ops.mul(b, g22))
        t21 = ops.add(ops.mul(c, g11), ops.mul(d, g21))
        t22 = ops.add(ops.mul(c, g12), ops.mul(d, g22))
        # m = t * h^-1
        m11 = ops.add(ops.mul(t11, d), ops.mul(t12, neg_c))
        m12 = ops.add(ops.mul(t11, neg_b), ops.mul(t12, a))
        m21 = ops.add(ops.mul(t21, d), ops.mul(t22, neg_c))
        m22 = ops.add(ops.mul(t21, neg_b), ops.mul(t22, a))
        out = np.zeros(mats.shape[0], dtype=bool)
        for t in self._dihedral_targets:
            out |= (m11 == t[0]) & (m12 == t[1]) & (m21 == t[2]) & (m22 == t[3])
        return out

    def condition_batch(self, mats: np.ndarray):
        """(lhs != rhs, lhs, rhs) of the companion condition, per row."""
        perm = self.mobius_batch(mats)
        n = mats.shape[0]
        rows = np.arange(n)[:, None]
        lab = np.zeros((n, self.n_points), dtype=np.int8)
        lab[rows, perm] = self.glabel[None, :]
        c1 = np.add.reduceat(self.in_o0[perm][:, self.order_idx], self.starts, axis=1)
        v = lab[rows, self.pg_inv[perm]]
        vo = v[:, self.order_idx]
        c2_0 = np.add.reduceat((vo == 1).astype(np.int32), self.starts, axis=1)
        c2_1 = np.add.reduceat((vo == 2).astype(np.int32), self.starts, axis=1)
        lhs = (c1[:, self.blocks0] * c2_1[:, self.blocks0]).sum(axis=1)
        rhs = (c1[:, self.blocks1] * c2_0[:, self.blocks1]).sum(axis=1)
        return lhs != rhs, lhs, rhs

    # -- enumeration ------------------------------------------------------

    def _half_rows(self):
        group = self.gens.group
        fq = group.fq
        q = self.q
        if group.d_prime == 1:
            units = list(range(1, q))
        else:
            units = [e for e in range(1, q) if e < fq.neg(e)]
        for c in units:
            for d in range(q):
                yield c, d
        for d in units:
            yield 0, d

    def enumerate_batches(self, target_rows: int = 16384):
        """Batches of determinant-1 matrices, each PSL element exactly once.

        Rows are grouped by bottom row (c, d); exactly one of the pair
        {(c, d), (-c, -d)} is used, so {M, -M} is never emitted twice.
        """
        group = self.gens.group
        fq = group.fq
        q = self.q
        chunks = []
        size = 0
        for c, d in self._half_rows():
            if c != 0:
                a = np.arange(q, dtype=np.int64)
                ad = self.ops.mul(a, np.full(q, d, dtype=np.int64))
                b = self.ops.mul(self.ops.add(ad, np.full(q, fq.neg(1), dtype=np.int64)),
                                 np.full(q, fq.inv(c), dtype=np.int64))
            else:
                b = np.arange(q, dtype=np.int64)
                a = np.full(q, fq.inv(d), dtype=np.int64)
            mat = np.stack([a, b, np.full(q, c, dtype=np.int64),
                            np.full(q, d, dtype=np.int64)], axis=1)
            chunks.append(mat)
            size += q
            if size >= target_rows:
                yield np.concatenate(chunks)
                chunks, size = [], 0
        if chunks:
            yield np.concatenate(chunks)

    def survey(self) -> Survey:
        """Evaluate the condition on every element of G outside D."""
        total = satisfied = 0
        first_h = None
        first_tries = 0
        for mats in self.enumerate_batches():
            keep = ~self.in_dihedralizer_batch(mats)
            mats = mats[keep]
            if mats.shape[0] == 0:
                continue
            ok, _, _ = self.condition_batch(mats)
            if first_h is None:
                hits = np.flatnonzero(ok)
                if hits.size:
                    i = int(hits[0])
                    first_h = self.gens.group.normalize(tuple(int(x) for x in mats[i]))
                    first_tries = total + i + 1
            total += mats.shape[0]
            satisfied += int(ok.sum())
        return Survey(total=total, satisfied=satisfied,
                      first_h=first_h, first_tries=first_tries)
