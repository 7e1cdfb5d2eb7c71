"""Degree-1 graded homomorphism search.

The source is a graded Lie algebra generated in degree 1.  A degree-1 map
``g`` (columns = images of the generators in the target's level-1
coordinates) extends to a graded homomorphism iff it respects every
relation among left-normed words.  Columns are chosen one at a time: the
degree-2 relations involving the new generator are linear in its image, so
candidates come from an affine solve, and each partial choice is checked on
the subalgebra generated so far by replaying a precomputed word closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..field import FieldSpec, rref_mod_p
from ..lie import GradedLieAlgebra, LieAlgebra
from .targets import TargetError, lie_tensor


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search budget exceeded after {nodes} nodes")
        self.nodes = nodes


@dataclass
class _Op:
    gen: int  # left factor x_gen
    word: int  # right factor: basis word id
    degree: int
    new_id: Optional[int]  # id if the product is a new basis word
    coeffs: Optional[List[Tuple[int, int]]]  # dependency on basis words otherwise


class WordClosure:
    """Left-normed word bases of the subalgebras generated by x_0..x_m."""

    def __init__(self, G: LieAlgebra, max_degree: int):
        F = G.field
        if not F.is_finite:
            raise TargetError("graded search needs a finite prime field")
        self.p = p = F.modulus
        self.G = G
        w = G.weights
        self.r = sum(1 for x in w if x == 1)
        self.max_degree = max_degree
        P = lie_tensor(G)
        d = G.dim
        self.values: List[np.ndarray] = []
        self.degrees: List[int] = []
        self.ops: List[List[_Op]] = []
        for m in range(self.r):
            ops: List[_Op] = []
            e = np.zeros(d, dtype=np.int64)
            e[m] = 1
            self.values.append(e)
            self.degrees.append(1)
            base_id = len(self.values) - 1
            # products [x_i, B_j] not yet formed: every i <= m with the new
            # generator's word, and x_m with every older word
            queue = [(i, base_id) for i in range(m + 1)] + [(m, j) for j in range(base_id)]
            done = set()
            while queue:
                i, j = queue.pop(0)
                if (i, j) in done:
                    continue
                done.add((i, j))
                deg = 1 + self.degrees[j]
                if deg > max_degree:
                    continue
                v = (self.values[j] @ P[i]) % p
                same = [k for k, dg in enumerate(self.degrees) if dg == deg]
                coeffs = self._express(v, same)
                if coeffs is None:
                    self.values.append(v)
                    self.degrees.append(deg)
                    nid = len(self.values) - 1
                    ops.append(_Op(i, j, deg, nid, None))
                    for i2 in range(m + 1):
                        queue.append((i2, nid))
                else:
                    ops.append(_Op(i, j, deg, None, coeffs))
            self.ops.append(ops)
        # components: basis words per degree
        self.words_by_degree = {}
        for k, dg in enumerate(self.degrees):
            self.words_by_degree.setdefault(dg, []).append(k)

    def _express(self, v: np.ndarray, ids: Sequence[int]) -> Optional[List[Tuple[int, int]]]:
        p = self.p
        if not v.any():
            return []
        if not ids:
            return None
        A = np.stack([self.values[k] for k in ids] + [v], axis=1)  # d x (n+1)
        red, piv = rref_mod_p(A, p)
        n = len(ids)
        if n in piv:
            return None
        sol = [0] * n
        for row, pc in zip(red, piv):
            sol[pc] = int(row[n])
        return [(ids[a], c) for a, c in enumerate(sol) if c]

    def word_expressions(self) -> List[List[Tuple[int, int]]]:
        """Each basis vector of G (of degree <= max_degree) as a combination of basis words."""
        out = []
        d = self.G.dim
        for k in range(d):
            deg = self.G.weights[k]
            if deg > self.max_degree:
                out.append([])
                continue
            e = np.zeros(d, dtype=np.int64)
            e[k] = 1
            c = self._express(e, self.words_by_degree.get(deg, []))
            if c is None:
                raise TargetError("graded source is not generated in degree 1")
            out.append(c)
        return out


class GradedSearch:
    """Enumerate degree-1 maps extending to graded homomorphisms ``G -> T``.

    ``tgt_levels``/``tgt_P`` describe the graded target; its level-1
    coordinates carry the unknown columns.  Products landing above
    ``max_degree`` are discarded on both sides.
    """

    def __init__(
        self,
        G: LieAlgebra,
        tgt_levels: Sequence[int],
        tgt_P: np.ndarray,
        field: FieldSpec,
        max_degree: Optional[int] = None,
        injective: bool = True,
    ):
        self.p = field.modulus
        top = max(G.weights)
        self.D = top if max_degree is None else min(max_degree, top)
        self.closure = WordClosure(G, self.D)
        lv = np.asarray(tgt_levels)
        keep = lv <= self.D
        self.P = np.where(keep[None, None, :], tgt_P, 0) % self.p
        self.levels = lv
        self.lvl1 = [c for c, l in enumerate(tgt_levels) if l == 1]
        self.rT = len(self.lvl1)
        self.r = self.closure.r
        self.injective = injective
        self.comp_dims = {s: sum(1 for x in G.weights if x == s) for s in range(1, self.D + 1)}
        self.nodes = 0
        self.P1 = self.P[self.lvl1][:, self.lvl1, :]
        Gp = lie_tensor(G)
        g1 = [k for k, x in enumerate(G.weights) if x == 1]
        self.src_P = np.where((np.asarray(G.weights) <= self.D)[None, None, :], Gp, 0) % self.p
        self.src_lvl1 = g1
        eye = np.eye(self.r, dtype=np.int64)
        self.src_sig = self._signatures(eye, self.src_P, g1)

    def _signatures(self, ys: np.ndarray, P: np.ndarray, lvl1) -> List[Tuple[int, ...]]:
        """For each y: ranks of (ad y)^k restricted to degree 1, k = 1..D-1."""
        p = self.p
        d = P.shape[0]
        ads = np.einsum("na,abc->nbc", ys, P[lvl1]) % p
        out = []
        for A in ads:
            Z = np.zeros((len(lvl1), d), dtype=np.int64)
            Z[range(len(lvl1)), lvl1] = 1
            sig = []
            for _ in range(1, self.D):
                Z = (Z @ A) % p
                rk = len(rref_mod_p(Z, p)[1]) if Z.any() else 0
                sig.append(rk)
                if rk == 0:
                    sig.extend([0] * (self.D - 1 - len(sig)))
                    break
            out.append(tuple(sig))
        return out

    def signature_histograms(self, limit: int = 50_000):
        """Counts of degree-1 vectors by ad signature, source and target.

        An isomorphism matches the two.  Returns None when enumerating all
        vectors would exceed ``limit``.
        """
        from collections import Counter

        p = self.p
        if p ** max(self.r, self.rT) > limit:
            return None
        out = []
        for n, P, l1 in ((self.r, self.src_P, self.src_lvl1), (self.rT, self.P, self.lvl1)):
            ys = np.array(np.meshgrid(*[np.arange(p)] * n, indexing="ij")).reshape(n, -1).T
            out.append(sorted(Counter(self._signatures(ys, P, l1)).items()))
        return tuple(out)

    # -- helpers ---------------------------------------------------------

    def _embed(self, y) -> np.ndarray:
        v = np.zeros(len(self.levels), dtype=np.int64)
        v[self.lvl1] = y
        return v

    def _br(self, u, v):
        return np.einsum("a,b,abc->c", u, v, self.P) % self.p

    def _column_candidates(self, m: int, cols, F: List[np.ndarray]) -> List[Tuple[int, ...]]:
        """Level-1 vectors y for x_m satisfying every relation in which x_m occurs once.

        Words of the prefix-m closure that contain x_m exactly once have
        images affine in y; relations among such words are linear constraints.
        """
        p = self.p
        dT = len(self.levels)
        rT = self.rT
        # affine forms value = A @ y + b for words linear in y; None = nonlinear
        forms = {}
        base = len(F)
        E = np.zeros((dT, rT), dtype=np.int64)
        E[self.lvl1, range(rT)] = 1
        zero_b = np.zeros(dT, dtype=np.int64)
        forms[base] = (E, zero_b)
        ad = {}  # ad of the fixed generator images, matrices [c, b]
        rows = []
        rhs = []
        for op in self.closure.ops[m]:
            i, j = op.gen, op.word
            if i == m:
                if j >= base:
                    # the word already involves x_m
                    form = None
                else:
                    form = (np.einsum("abc,b->ca", self.P[self.lvl1], F[j]) % p, zero_b)
            else:
                fj = forms.get(j)
                if fj is None:
                    form = None
                else:
                    M = ad.get(i)
                    if M is None:
                        M = ad[i] = np.einsum("a,abc->cb", self._embed(cols[i]), self.P) % p
                    form = ((M @ fj[0]) % p, (M @ fj[1]) % p)
            if op.new_id is not None:
                if form is not None:
                    forms[op.new_id] = form
                continue
            if form is None:
                continue
            A2, b2 = form[0].copy(), form[1].copy()
            ok = True
            for k, c in op.coeffs:
                if k < base:
                    b2 = b2 - c * F[k]
                elif k in forms:
                    A2 = A2 - c * forms[k][0]
                    b2 = b2 - c * forms[k][1]
                else:
                    ok = False
                    break
            if ok:
                rows.append(A2 % p)
                rhs.append((-b2) % p)
        if rows:
            A = np.concatenate(rows, axis=0)
            b = np.concatenate(rhs)
            nz = np.any(A, axis=1) | (b != 0)
            A, b = A[nz], b[nz]
        else:
            A = np.zeros((0, rT), dtype=np.int64)
            b = np.zeros(0, dtype=np.int64)
        if A.shape[0] == 0:
            part = np.zeros(rT, dtype=np.int64)
            kern = np.eye(rT, dtype=np.int64)
        else:
            red, piv = rref_mod_p(np.concatenate([A, b[:, None]], axis=1), p)
            if rT in piv:
                return []
            part = np.zeros(rT, dtype=np.int64)
            for row, pc in zip(red, piv):
                part[pc] = row[rT]
            free = [c for c in range(rT) if c not in piv]
            kern = np.zeros((len(free), rT), dtype=np.int64)
            for n, fc in enumerate(free):
                kern[n, fc] = 1
                for row, pc in zip(red, piv):
                    kern[n, pc] = (-row[fc]) % p
        k = kern.shape[0]
        if k == 0:
            sols = part[None, :]
        else:
            coeffs = np.array(np.meshgrid(*[np.arange(p)] * k, indexing="ij")).reshape(k, -1).T
            sols = (part[None, :] + coeffs @ kern) % p
        # lexicographic order of the vectors
        order = np.lexsort(sols.T[::-1])
        sols = sols[order]
        if self.injective:
            # ranks of (ad y)^k on degree 1 must match those of x_m
            want = self.src_sig[m]
            sigs = self._signatures(sols, self.P, self.lvl1)
            sols = sols[[n for n, sg in enumerate(sigs) if sg == want]]
        return [tuple(int(x) for x in s) for s in sols]

    def _replay(self, m: int, cols: List[Tuple[int, ...]], F: List[np.ndarray]) -> Optional[List[np.ndarray]]:
        F = list(F)
        F.append(self._embed(cols[m]))
        degs = self.closure.degrees
        for op in self.closure.ops[m]:
            u = self._br(self._embed(cols[op.gen]), F[op.word])
            if op.new_id is not None:
                if self.injective:
                    # basis words of one degree must keep independent images
                    same = [F[k] for k in range(len(F)) if degs[k] == op.degree] + [u]
                    if len(rref_mod_p(np.stack(same), self.p)[1]) < len(same):
                        return None
                F.append(u)
            else:
                v = np.zeros_like(u)
                for k, c in op.coeffs:
                    v = v + c * F[k]
                if not np.array_equal(u % self.p, v % self.p):
                    return None
        return F

    def _independent(self, cols: List[Tuple[int, ...]]) -> bool:
        M = np.asarray(cols, dtype=np.int64)
        return len(rref_mod_p(M, self.p)[1]) == len(cols)

    def _images_injective(self, F: List[np.ndarray]) -> bool:
        for s, ids in self.closure.words_by_degree.items():
            M = np.stack([F[k] for k in ids])
            if len(rref_mod_p(M, self.p)[1]) != self.comp_dims.get(s, 0):
                return False
        return True

    # -- enumeration -----------------------------------------------------

    def maps(self, budget: Optional[int] = None) -> Iterator[np.ndarray]:
        """Yield matrices (rT x r), column i = level-1 image of generator i."""
        if self.injective:
            if self.rT != self.r:
                return
            hist = self.signature_histograms()
            if hist is not None and hist[0] != hist[1]:
                return
        ident = self._identity()
        if ident is not None:
            yield ident
        yield from (g for g in self._dfs(0, [], [], budget) if ident is None or not np.array_equal(g, ident))

    def _identity(self) -> Optional[np.ndarray]:
        """The identity on degree 1, when it extends (tried first)."""
        if self.rT != self.r:
            return None
        cols = [tuple(int(i == j) for i in range(self.r)) for j in range(self.r)]
        F: List[np.ndarray] = []
        for m in range(self.r):
            F = self._replay(m, cols, F)
            if F is None:
                return None
        if self.injective and not self._images_injective(F):
            return None
        return np.eye(self.r, dtype=np.int64)

    def _dfs(self, m, cols, F, budget):
        if m == self.r:
            if not self.injective or self._images_injective(F):
                yield np.asarray(cols, dtype=np.int64).T
            return
        for y in self._column_candidates(m, cols, F):
            self.nodes += 1
            if budget is not None and self.nodes > budget:
                raise SearchBudgetExceeded(self.nodes)
            nxt = cols + [y]
            if self.injective and not any(y):
                continue
            if self.injective and not self._independent(nxt):
                continue
            F2 = self._replay(m, nxt, F)
            if F2 is None:
                continue
            yield from self._dfs(m + 1, nxt, F2, budget)

    def full_images(self, g: np.ndarray) -> np.ndarray:
        """Images of every basis vector of G (rows) in target coordinates."""
        cols = [tuple(int(x) for x in g[:, i]) for i in range(self.r)]
        F: List[np.ndarray] = []
        for m in range(self.r):
            F = self._replay(m, cols, F)
            if F is None:
                raise TargetError("degree-1 map does not extend")
        out = []
        for expr in self.closure.word_expressions():
            v = np.zeros(len(self.levels), dtype=np.int64)
            for k, c in expr:
                v = v + c * F[k]
            out.append(v % self.p)
        return np.stack(out)


@dataclass
class GradedIsoResult:
    matrix: np.ndarray  # rows: images of the source basis in target coordinates
    degree_one: np.ndarray
    nodes: int


def graded_iso_search(
    G1: GradedLieAlgebra,
    G2: GradedLieAlgebra,
    field: Optional[FieldSpec] = None,
    find_all: bool = False,
    budget: Optional[int] = None,
):
    """Search for a graded isomorphism gr L -> gr K over a finite field.

    Returns a GradedIsoResult (or a list of them with ``find_all``), or None
    when no isomorphism exists.  Component dimensions are compared first.
    """
    A, B = G1.algebra, G2.algebra
    F = field or A.field
    if not F.is_finite:
        raise TargetError("graded isomorphism search needs a finite prime field")
    A, B = A.over(F), B.over(F)
    if G1.component_dims != G2.component_dims:
        return [] if find_all else None
    S = GradedSearch(A, B.weights, lie_tensor(B), F)
    found = []
    for g in S.maps(budget):
        res = GradedIsoResult(S.full_images(g), g, S.nodes)
        if not find_all:
            return res
        found.append(res)
    return found if find_all else None


def graded_automorphisms(G: GradedLieAlgebra, field: Optional[FieldSpec] = None, budget=None) -> List[np.ndarray]:
    """Degree-1 parts of all graded automorphisms."""
    F = field or G.algebra.field
    A = G.algebra.over(F)
    S = GradedSearch(A, A.weights, lie_tensor(A), F)
    return list(S.maps(budget))
