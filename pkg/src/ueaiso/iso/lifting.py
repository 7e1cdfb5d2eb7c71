"""Filtered isomorphism lifting over GF(p).

A homomorphism from Ω(L)/Ω^t(L) is the same thing as a Lie homomorphism
from L into the target with its commutator bracket, and it is bijective
exactly when its degree-1 part is (dimensions being equal).  We therefore
search for images ``f(x_k)`` of all basis vectors, ``f(x_k)`` in filtration
level ``w_k``, subject to ``[f(x_i), f(x_j)] = sum_k c_ij^k f(x_k)``.

Stage 0 fixes the level-1 part of the generator images (a degree-1 map that
extends to a graded isomorphism).  Every remaining coordinate is an
unknown, and each relation is quadratic in them.  Unknowns that never occur
in a quadratic term are projected out by elimination; the rest form a small
quadratic system solved by alternating row reduction (which exposes linear
consequences, eliminated by substitution) and branching on one variable.
The search is exhaustive: a failed solve proves that no lift exists for
that degree-1 map.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..field import FieldSpec, rref_mod_p
from ..lie import LieAlgebra, graded_algebra
from .graded import GradedSearch, SearchBudgetExceeded
from .targets import FilteredTarget, TargetError, lie_tensor, source_weights

log = logging.getLogger(__name__)


class NodeCounter:
    def __init__(self, budget: Optional[int] = None):
        self.budget = budget
        self.nodes = 0

    def tick(self, n: int = 1):
        self.nodes += n
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(self.nodes)


# ---------------------------------------------------------------------------
# quadratic systems


class QuadraticSystem:
    """Polynomials of degree <= 2 in n variables over GF(p).

    Row e is stored as an upper-triangular (n+1) x (n+1) array ``U[e]`` on
    homogeneous coordinates ``z = (1, x_1, ..., x_n)``: the polynomial is
    ``sum_{a <= b} U[e, a, b] z_a z_b``.
    """

    def __init__(self, U: np.ndarray, p: int):
        self.p = p
        self.U = U % p
        self.n = U.shape[1] - 1
        iu = np.triu_indices(self.n + 1)
        # column order for row reduction: quadratic monomials, linear, constant
        quad = [(a, b) for a, b in zip(*iu) if a >= 1]
        lin = [(0, b) for b in range(1, self.n + 1)]
        self.cols = quad + lin + [(0, 0)]
        self.ca = np.array([c[0] for c in self.cols], dtype=np.int64)
        self.cb = np.array([c[1] for c in self.cols], dtype=np.int64)
        self.nquad = len(quad)

    def flat(self, U: np.ndarray) -> np.ndarray:
        return U[:, self.ca, self.cb]

    def unflat(self, rows: np.ndarray) -> np.ndarray:
        U = np.zeros((rows.shape[0], self.n + 1, self.n + 1), dtype=np.int64)
        U[:, self.ca, self.cb] = rows
        return U

    def substitute(self, U: np.ndarray, S: np.ndarray) -> np.ndarray:
        """Apply ``z = S z'`` and fold back to upper-triangular form."""
        p = self.p
        W = np.einsum("ia,eij,jb->eab", S, U, S) % p
        out = np.triu(W, 1) + np.triu(W.transpose(0, 2, 1), 1)
        di = np.arange(self.n + 1)
        out[:, di, di] = W[:, di, di]
        return out % p

    def solve(self, counter: NodeCounter) -> Optional[np.ndarray]:
        """Return values of x_1..x_n solving every row, or None."""
        return self._search(self.U, [], counter)

    def _search(self, U, records, counter) -> Optional[np.ndarray]:
        p = self.p
        n = self.n
        while True:
            if U.shape[0] == 0:
                return self._back_substitute(records)
            rows = self.flat(U)
            rows = rows[np.any(rows, axis=1)]
            if rows.shape[0] == 0:
                return self._back_substitute(records)
            red, piv = rref_mod_p(rows, p)
            if piv and piv[-1] == len(self.cols) - 1:
                return None
            lin_rows = [r for r, pc in enumerate(piv) if pc >= self.nquad]
            quad_rows = [r for r, pc in enumerate(piv) if pc < self.nquad]
            if not lin_rows:
                U = self.unflat(red[quad_rows])
                break
            S = np.eye(n + 1, dtype=np.int64)
            for r in lin_rows:
                v = int(self.cb[piv[r]])
                expr = (-red[r, self.nquad:]) % p  # coefficients on linear cols then const
                row = np.zeros(n + 1, dtype=np.int64)
                row[1:] = expr[:n]
                row[0] = expr[n]
                row[v] = 0
                S[v] = row
                records.append((v, row))
            U = self.substitute(self.unflat(red[quad_rows]), S) if quad_rows else np.zeros((0, n + 1, n + 1), dtype=np.int64)
        # branch on the variable occurring in most quadratic monomials
        Q = U[:, 1:, 1:] != 0
        occ = Q.sum(axis=(0, 1)) + Q.sum(axis=(0, 2))
        v = int(np.argmax(occ)) + 1
        for val in range(p):
            counter.tick()
            S = np.eye(n + 1, dtype=np.int64)
            row = np.zeros(n + 1, dtype=np.int64)
            row[0] = val
            S[v] = row
            sub = records + [(v, row)]
            res = self._search(self.substitute(U, S), sub, counter)
            if res is not None:
                return res
        return None

    def _back_substitute(self, records) -> np.ndarray:
        z = np.zeros(self.n + 1, dtype=np.int64)
        z[0] = 1
        for v, row in reversed(records):
            z[v] = int(row @ z) % self.p
        return z[1:]


# ---------------------------------------------------------------------------
# the lifting problem


@dataclass
class _Layout:
    coords: List[List[int]]  # per source basis vector: target coords carrying unknowns
    var_of: Dict[Tuple[int, int], int]
    vars: List[Tuple[int, int]]
    is_quad: np.ndarray
    qidx: Dict[int, int]
    lidx: Dict[int, int]


class LiftingProblem:
    """All Lie homomorphisms L -> T with a prescribed degree-1 part."""

    def __init__(self, L: LieAlgebra, T: FilteredTarget):
        if L.field != T.field:
            raise TargetError("source and target must share the field")
        self.L = L
        self.T = T
        self.p = T.p
        self.w = source_weights(L)
        self.r = sum(1 for x in self.w if x == 1)
        lv = np.asarray(T.levels)
        self.lvl1 = T.level_indices(1)
        top = T.top_level
        rhs_set = {k for terms in L.table.values() for k in terms}
        coords = []
        for k in range(L.dim):
            lo = max(self.w[k], 2)
            keep = [c for c in range(T.dim) if lv[c] >= lo and (k in rhs_set or lv[c] + 1 <= top)]
            coords.append(keep)
        vars_ = [(k, c) for k in range(L.dim) for c in coords[k]]
        var_of = {kc: n for n, kc in enumerate(vars_)}
        NZ = np.any(T.P != 0, axis=2)
        is_quad = np.zeros(len(vars_), dtype=bool)
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                if not coords[i] or not coords[j]:
                    continue
                sub = NZ[np.ix_(coords[i], coords[j])]
                for a in np.flatnonzero(sub.any(axis=1)):
                    is_quad[var_of[(i, coords[i][a])]] = True
                for b in np.flatnonzero(sub.any(axis=0)):
                    is_quad[var_of[(j, coords[j][b])]] = True
        qidx = {v: n for n, v in enumerate(np.flatnonzero(is_quad).tolist())}
        lidx = {v: n for n, v in enumerate(np.flatnonzero(~is_quad).tolist())}
        self.layout = _Layout(coords, var_of, vars_, is_quad, qidx, lidx)
        self.eq_coords = [c for c in range(T.dim) if lv[c] >= 2]
        self.pairs = [(i, j) for i in range(L.dim) for j in range(i + 1, L.dim)]

    @property
    def num_unknowns(self) -> int:
        return len(self.layout.vars)

    @property
    def num_quadratic(self) -> int:
        return len(self.layout.qidx)

    def constants(self, g: np.ndarray) -> np.ndarray:
        C = np.zeros((self.L.dim, self.T.dim), dtype=np.int64)
        for k in range(self.r):
            C[k, self.lvl1] = g[:, k]
        return C % self.p

    def build(self, g: np.ndarray):
        """Equations ``Lin @ y + quad(z) = 0`` for the degree-1 map ``g``."""
        p = self.p
        P = self.T.P
        lay = self.layout
        C = self.constants(g)
        E = self.eq_coords
        ne = len(E)
        nq, nl = len(lay.qidx), len(lay.lidx)
        nrows = ne * len(self.pairs)
        U = np.zeros((nrows, nq + 1, nq + 1), dtype=np.int64)
        Lin = np.zeros((nrows, nl), dtype=np.int64)
        for n, (i, j) in enumerate(self.pairs):
            rows = np.arange(n * ne, (n + 1) * ne)
            ci, cj = C[i], C[j]
            Ai, Aj = lay.coords[i], lay.coords[j]
            const = np.einsum("a,b,abe->e", ci, cj, P)[E]
            for k, c in self.L.table.get((i, j), {}).items():
                const = const - c * C[k][E]
            U[rows, 0, 0] += const % p
            # linear terms from f_i's unknowns against f_j's constant part, and vice versa
            if Ai:
                coef = np.einsum("abe,b->ae", P[Ai], cj)[:, E] % p
                self._place_linear(U, Lin, rows, [lay.var_of[(i, a)] for a in Ai], coef)
            if Aj:
                coef = np.einsum("a,abe->be", ci, P[:, Aj, :])[:, E] % p
                self._place_linear(U, Lin, rows, [lay.var_of[(j, b)] for b in Aj], coef)
            # the bracket's right-hand side
            for k, c in self.L.table.get((i, j), {}).items():
                ck = (-c) % p
                ak = set(lay.coords[k])
                vids, cols_e = [], []
                for e_pos, e in enumerate(E):
                    if e in ak:
                        vids.append(lay.var_of[(k, e)])
                        cols_e.append(e_pos)
                if vids:
                    coef = np.zeros((len(vids), ne), dtype=np.int64)
                    coef[np.arange(len(vids)), cols_e] = ck
                    self._place_linear(U, Lin, rows, vids, coef)
            # quadratic terms
            if Ai and Aj:
                qi = [(a_pos, lay.qidx[lay.var_of[(i, a)]]) for a_pos, a in enumerate(Ai) if lay.is_quad[lay.var_of[(i, a)]]]
                qj = [(b_pos, lay.qidx[lay.var_of[(j, b)]]) for b_pos, b in enumerate(Aj) if lay.is_quad[lay.var_of[(j, b)]]]
                if qi and qj:
                    ai = [Ai[a] for a, _ in qi]
                    bj = [Aj[b] for b, _ in qj]
                    block = P[np.ix_(ai, bj, E)] % p  # (|qi|, |qj|, ne)
                    nzs = np.nonzero(block)
                    for a_n, b_n, e_pos in zip(*nzs):
                        u, v = qi[a_n][1] + 1, qj[b_n][1] + 1
                        if u > v:
                            u, v = v, u
                        U[rows[e_pos], u, v] += block[a_n, b_n, e_pos]
        return Lin % p, U % p

    def _place_linear(self, U, Lin, rows, vids, coef):
        lay = self.layout
        for vid, col in zip(vids, coef):
            if not col.any():
                continue
            if lay.is_quad[vid]:
                U[rows, 0, lay.qidx[vid] + 1] += col
            else:
                Lin[rows, lay.lidx[vid]] += col

    def solve(self, g: np.ndarray, counter: Optional[NodeCounter] = None) -> Optional[np.ndarray]:
        """Images of all basis vectors (rows, target coordinates) or None."""
        counter = counter or NodeCounter()
        p = self.p
        Lin, U = self.build(g)
        nl = Lin.shape[1]
        nq = U.shape[1] - 1
        Ufl = U.reshape(U.shape[0], -1)
        keep = np.any(Lin, axis=1) | np.any(Ufl, axis=1)
        Lin, U, Ufl = Lin[keep], U[keep], Ufl[keep]
        if nl:
            red, piv = rref_mod_p(np.concatenate([Lin, Ufl], axis=1), p)
            lin_piv = [(r, pc) for r, pc in enumerate(piv) if pc < nl]
            rest = [r for r, pc in enumerate(piv) if pc >= nl]
            Uq = red[rest, nl:].reshape(len(rest), nq + 1, nq + 1)
        else:
            red, lin_piv = None, []
            Uq = U
        zq = QuadraticSystem(Uq, p).solve(counter)
        if zq is None:
            return None
        z = np.concatenate([[1], zq]).astype(np.int64)
        y = np.zeros(nl, dtype=np.int64)
        for r, pc in lin_piv:
            # y_pc + (other free linear unknowns, set to 0) + quad(z) = 0
            Ur = red[r, nl:].reshape(nq + 1, nq + 1)
            y[pc] = (-(z @ Ur @ z)) % p
        images = self.assemble(g, zq, y)
        if not self.is_hom(images):
            raise AssertionError("internal error: lifted images fail the relations")
        return images

    def assemble(self, g: np.ndarray, zq: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Images from the degree-1 map and values of the quadratic and linear unknowns."""
        images = self.constants(g)
        lay = self.layout
        for vid, (k, c) in enumerate(lay.vars):
            images[k, c] = zq[lay.qidx[vid]] if lay.is_quad[vid] else y[lay.lidx[vid]]
        return images % self.p

    def unknowns(self, images: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Inverse of :meth:`assemble` on the unknown coordinates."""
        lay = self.layout
        zq = np.zeros(len(lay.qidx), dtype=np.int64)
        y = np.zeros(len(lay.lidx), dtype=np.int64)
        for vid, (k, c) in enumerate(lay.vars):
            if lay.is_quad[vid]:
                zq[lay.qidx[vid]] = images[k, c]
            else:
                y[lay.lidx[vid]] = images[k, c]
        return zq, y

    def is_hom(self, images: np.ndarray) -> bool:
        p = self.p
        P = self.T.P
        for i, j in self.pairs:
            lhs = np.einsum("a,b,abe->e", images[i], images[j], P) % p
            rhs = np.zeros(self.T.dim, dtype=np.int64)
            for k, c in self.L.table.get((i, j), {}).items():
                rhs = rhs + c * images[k]
            if not np.array_equal(lhs, rhs % p):
                return False
        return True


# ---------------------------------------------------------------------------
# Stage 0 and double-coset reduction


def is_graded(L: LieAlgebra) -> bool:
    return graded_algebra(L).algebra.table == L.table


def stage0_search(L: LieAlgebra, T: FilteredTarget, max_degree: int) -> GradedSearch:
    """Graded search from gr L into the graded target (gr K when known)."""
    G = graded_algebra(L).algebra
    if T.graded_lie is not None:
        K = T.graded_lie
        return GradedSearch(G, K.weights, lie_tensor(K), T.field, max_degree=max_degree)
    return GradedSearch(G, T.levels, T.graded_P(), T.field, max_degree=max_degree)


_GRADED_CACHE: Dict[tuple, List[np.ndarray]] = {}


def _graded_maps(G: LieAlgebra, tgt_levels, tgt_P, field: FieldSpec, budget, search: Optional[GradedSearch] = None):
    """All graded isomorphisms from G into a graded target, memoised."""
    key = (field.modulus, G.dim, tuple(sorted((k, tuple(sorted(v.items()))) for k, v in G.table.items())),
           tuple(G.weights), (np.asarray(tgt_P, dtype=np.int64) % field.modulus).tobytes())
    hit = _GRADED_CACHE.get(key)
    if hit is None:
        if search is None:
            search = GradedSearch(G, tgt_levels, tgt_P, field)
        hit = list(search.maps(budget))
        _GRADED_CACHE[key] = hit
    return hit


def _key(g: np.ndarray) -> bytes:
    return np.ascontiguousarray(g, dtype=np.int64).tobytes()


def _inv_mod(M: np.ndarray, p: int) -> np.ndarray:
    n = M.shape[0]
    red, piv = rref_mod_p(np.concatenate([M % p, np.eye(n, dtype=np.int64)], axis=1), p)
    return red[:, n:]


def lifting_automorphisms(
    L: LieAlgebra, count: int = 6, tries: int = 40, seed: int = 0, graded_auts: Optional[List[np.ndarray]] = None
) -> List[np.ndarray]:
    """Degree-1 parts of some automorphisms of L (random, seeded).

    Candidates are graded automorphisms of gr L; those that lift to L (a
    Lie-level lifting solve) are kept.
    """
    from .targets import target_from_lie

    if graded_auts is None:
        G = graded_algebra(L).algebra
        S = GradedSearch(G, G.weights, lie_tensor(G), L.field)
        graded_auts = _graded_maps(G, None, S.P, L.field, None, S)
    if is_graded(L):
        pool = graded_auts
        rng = random.Random(seed)
        return [pool[rng.randrange(len(pool))] for _ in range(min(count, len(pool)))]
    T = target_from_lie(L)
    prob = LiftingProblem(L, T)
    rng = random.Random(seed)
    out = []
    for _ in range(tries):
        g = graded_auts[rng.randrange(len(graded_auts))]
        if prob.solve(g) is not None:
            out.append(g)
            if len(out) >= count:
                break
    return out


def double_coset_representatives(
    X: List[np.ndarray], left: List[np.ndarray], right: List[np.ndarray], p: int
) -> List[np.ndarray]:
    """Representatives of ``H_left \\ X / H_right`` (first element of each orbit in X order)."""
    index = {_key(g): n for n, g in enumerate(X)}
    seen = np.zeros(len(X), dtype=bool)
    reps = []
    for n, g in enumerate(X):
        if seen[n]:
            continue
        reps.append(g)
        seen[n] = True
        stack = [g]
        while stack:
            h = stack.pop()
            for a in left:
                m = index.get(_key((a @ h) % p))
                if m is not None and not seen[m]:
                    seen[m] = True
                    stack.append(X[m])
            for b in right:
                m = index.get(_key((h @ b) % p))
                if m is not None and not seen[m]:
                    seen[m] = True
                    stack.append(X[m])
    return reps


# ---------------------------------------------------------------------------
# the search driver


def _target_dim_check(L: LieAlgebra, T: FilteredTarget, t: Optional[int]) -> Optional[str]:
    from ..envelope import pbw_basis

    if T.kind == "lie":
        if L.dim != T.dim:
            return f"dimensions differ: {L.dim} vs {T.dim}"
        return None
    n = len(pbw_basis(L, t))
    if n != T.dim:
        return f"dimensions differ: {n} vs {T.dim}"
    if T.top_level >= t:
        return f"target has filtration level {T.top_level} >= t"
    return None


def _component_dims(levels: Sequence[int], top: int) -> Tuple[int, ...]:
    return tuple(sum(1 for x in levels if x == s) for s in range(1, top + 1))


def stage0_representatives(
    L: LieAlgebra,
    T: FilteredTarget,
    max_degree: int,
    budget: Optional[int] = None,
    seed: int = 0,
) -> Tuple[List[np.ndarray], int, str]:
    """Degree-1 maps whose lifts decide the question, with a node count.

    When L or the target's graded algebra is itself graded every valid
    degree-1 map lies in one orbit, so one representative suffices.
    Otherwise the candidates are reduced by sampled automorphisms on both
    sides.
    """
    S = stage0_search(L, T, max_degree)
    src_graded = is_graded(L)
    tgt_graded = T.kind != "assoc" and T.graded_lie is not None and _graded_source_of(T)
    if src_graded or tgt_graded:
        first = next(S.maps(budget), None)
        return ([] if first is None else [first]), S.nodes, "graded side: single orbit"
    X = _graded_maps(graded_algebra(L).algebra, None, S.P, T.field, budget, S)
    if not X:
        return [], S.nodes, "no graded isomorphism"
    p = T.p
    right = lifting_automorphisms(L, seed=seed)
    left: List[np.ndarray] = []
    src_obj = _lie_of_target(T)
    if src_obj is not None:
        left = lifting_automorphisms(src_obj, seed=seed + 1)
    reps = double_coset_representatives(X, left, right, p)
    return reps, S.nodes, f"{len(X)} graded maps, {len(reps)} orbit representatives"


def _lie_of_target(T: FilteredTarget) -> Optional[LieAlgebra]:
    if T.kind == "lie":
        return T.obj
    if T.kind == "envelope":
        return T.obj.source
    return None


def _graded_source_of(T: FilteredTarget) -> bool:
    K = _lie_of_target(T)
    return K is not None and is_graded(K)


def filtered_iso_search(
    L: LieAlgebra,
    target,
    t: Optional[int] = None,
    budget: Optional[int] = 10**8,
    seed: int = 0,
):
    """Decide whether Ω(L)/Ω^t(L) (or L itself) is isomorphic to the target.

    ``target`` is a Lie algebra (Lie-level search when ``t`` is None, else
    its truncated envelope), a truncated envelope, an associative algebra
    with adapted levels, or a prepared :class:`FilteredTarget`.  Returns an
    :class:`IsoVerdict`; exhausting every orbit representative without a
    lift proves non-isomorphism.
    """
    from ..envelope import truncated_envelope
    from .maps import GeneratorMap, IsoVerdict, Status, check_lie_hom, induced_matrix
    from .targets import as_target

    if isinstance(target, LieAlgebra) and t is not None:
        target = truncated_envelope(target.over(L.field), t)
    T = as_target(target)
    F = T.field
    if L.field != F:
        L = L.over(F)
    if T.kind != "lie" and t is None:
        t = getattr(T.obj, "t", None) or T.top_level + 1
    bad = _target_dim_check(L, T, t)
    if bad:
        return IsoVerdict(Status.NOT_ISOMORPHIC, "invariant:dimension", t, F, witness={"dimension": bad})
    max_degree = T.top_level if T.kind != "lie" else None
    top = max_degree or max(L.weights)
    gL = _component_dims([w for w in source_weights(L) if w <= top], top)
    if T.graded_lie is not None:
        gT = _component_dims([w for w in T.graded_lie.weights if w <= top], top)
    else:
        gT = gL
    if gL != gT:
        return IsoVerdict(Status.NOT_ISOMORPHIC, "invariant:gr-dimensions", t, F,
                          witness={"graded dimensions": f"{gL} vs {gT}"})
    counter = NodeCounter(budget)
    try:
        reps, nodes0, note = stage0_representatives(L, T, max_degree, budget=budget, seed=seed)
        counter.tick(nodes0)
        if not reps:
            return IsoVerdict(Status.NOT_ISOMORPHIC, "exhausted-search", t, F, nodes=counter.nodes,
                              detail="no degree-1 map extends to a graded isomorphism")
        prob = LiftingProblem(L, T)
        for g in reps:
            counter.tick()
            images = prob.solve(g, counter)
            if images is None:
                continue
            m = GeneratorMap(L, T.obj, images.tolist())
            hom = check_lie_hom(m)
            if not hom:
                raise AssertionError("internal error: lift is not a homomorphism")
            detail = note
            if T.kind != "lie":
                ind = induced_matrix(m, t)
                if not ind.bijective:
                    raise AssertionError("internal error: lift is not bijective")
                detail = f"{note}; induced map bijective, rank {ind.rank}"
            return IsoVerdict(Status.ISOMORPHIC, "certificate", t, F, certificate=m,
                              nodes=counter.nodes, detail=detail)
    except SearchBudgetExceeded as exc:
        return IsoVerdict(Status.INCONCLUSIVE, "budget", t, F, nodes=exc.nodes,
                          detail=f"search budget {budget} exceeded")
    return IsoVerdict(Status.NOT_ISOMORPHIC, "exhausted-search", t, F, nodes=counter.nodes,
                      detail=f"{note}; no representative lifts")
