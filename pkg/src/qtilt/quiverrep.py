"""Quivers and their finite-dimensional representations over F_p.

Everything the abelian category mod(kQ) needs at desk scale: morphism and
extension spaces, kernels/images/cokernels, submodule enumeration, trace and
reject, Krull-Schmidt splitting. Representations are immutable after
construction; all operations are pure.

Conventions:
  * vertices are 0-based internally (the text format is 1-based),
  * an arrow a: s -> t carries a matrix of shape (dims[t], dims[s]),
  * morphism blocks act on column vectors, block[v]: source_v -> target_v,
  * flattening of per-vertex blocks is row-major, vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import fieldlin as fl
from .errors import CatalogError, QuiverParseError, SearchSpaceError

MAX_ENDO_ENUM = 14  # bound on p^d enumerations of endomorphism combinations

# ---------------------------------------------------------------------------
# Quiver


@dataclass(frozen=True)
class Quiver:
    """Finite acyclic directed graph; arrows are (source, target) pairs."""

    n_vertices: int
    arrows: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        for s, t in self.arrows:
            if not (0 <= s < self.n_vertices and 0 <= t < self.n_vertices):
                raise QuiverParseError(f"arrow ({s},{t}) out of vertex range")
        if self.topological_order() is None:
            raise QuiverParseError("quiver has an oriented cycle")

    def topological_order(self) -> list[int] | None:
        indeg = [0] * self.n_vertices
        for _, t in self.arrows:
            indeg[t] += 1
        order, frontier = [], sorted(v for v in range(self.n_vertices) if indeg[v] == 0)
        while frontier:
            v = frontier.pop(0)
            order.append(v)
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        frontier.append(t)
            frontier.sort()
        return order if len(order) == self.n_vertices else None

    def arrows_into(self, v: int) -> list[int]:
        return [i for i, (_, t) in enumerate(self.arrows) if t == v]

    def arrows_out_of(self, v: int) -> list[int]:
        return [i for i, (s, _) in enumerate(self.arrows) if s == v]

    def canonical_text(self) -> str:
        lines = [f"vertices {self.n_vertices}"]
        lines += [f"arrow {s + 1} {t + 1}" for s, t in self.arrows]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str, name: str = "") -> "Quiver":
        n = None
        arrows: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "vertices" and len(parts) == 2:
                if n is not None:
                    raise QuiverParseError(f"line {lineno}: duplicate vertices line")
                try:
                    n = int(parts[1])
                except ValueError:
                    raise QuiverParseError(f"line {lineno}: bad vertex count {parts[1]!r}")
                if n <= 0:
                    raise QuiverParseError(f"line {lineno}: vertex count must be positive")
            elif parts[0] == "arrow" and len(parts) == 3:
                if n is None:
                    raise QuiverParseError(f"line {lineno}: arrow before vertices line")
                try:
                    s, t = int(parts[1]), int(parts[2])
                except ValueError:
                    raise QuiverParseError(f"line {lineno}: bad arrow endpoints")
                if not (1 <= s <= n and 1 <= t <= n):
                    raise QuiverParseError(f"line {lineno}: arrow endpoint out of range 1..{n}")
                arrows.append((s - 1, t - 1))
            else:
                raise QuiverParseError(f"line {lineno}: unrecognized declaration {line!r}")
        if n is None:
            raise QuiverParseError("missing 'vertices <n>' line")
        return Quiver(n, tuple(arrows), name=name)


def preset_quiver(name: str) -> Quiver:
    """Built-in Dynkin quivers (linear A_n; D_n/E_6 with the fork at vertex 3)."""
    key = name.upper()
    if key.startswith("A") and key[1:].isdigit():
        n = int(key[1:])
        if n >= 1:
            return Quiver(n, tuple((i, i + 1) for i in range(n - 1)), name=key)
    if key.startswith("D") and key[1:].isdigit():
        n = int(key[1:])
        if n >= 4:
            arrows = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, n - 1)]
            return Quiver(n, tuple(arrows), name=key)
    if key == "E6":
        arrows = [(0, 1), (1, 2), (2, 3), (3, 4), (5, 2)]
        return Quiver(6, tuple(arrows), name=key)
    raise QuiverParseError(f"unknown quiver preset {name!r}")


# ---------------------------------------------------------------------------
# Representations


@dataclass(frozen=True, eq=False)
class Rep:
    """A representation: one F_p-space per vertex, one matrix per arrow."""

    quiver: Quiver
    p: int
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.dims) != self.quiver.n_vertices:
            raise ValueError("dimension vector length mismatch")
        if len(self.maps) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for a, (s, t) in enumerate(self.quiver.arrows):
            if self.maps[a].shape != (self.dims[t], self.dims[s]):
                raise ValueError(
                    f"arrow {a}: matrix shape {self.maps[a].shape} != "
                    f"({self.dims[t]}, {self.dims[s]})"
                )

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim() == 0


def zero_rep(q: Quiver, p: int) -> Rep:
    dims = tuple(0 for _ in range(q.n_vertices))
    maps = tuple(fl.zeros(0, 0) for _ in q.arrows)
    return Rep(q, p, dims, maps)


def simple_rep(q: Quiver, p: int, v: int) -> Rep:
    dims = tuple(1 if i == v else 0 for i in range(q.n_vertices))
    maps = tuple(fl.zeros(dims[t], dims[s]) for s, t in q.arrows)
    return Rep(q, p, dims, maps)


def rep(q: Quiver, p: int, dims, maps) -> Rep:
    dims = tuple(int(d) for d in dims)
    mats = tuple(fl.as_mat(m, p) if np.asarray(m).size else fl.zeros(dims[t], dims[s])
                 for m, (s, t) in zip(maps, q.arrows))
    return Rep(q, p, dims, mats)


def direct_sum_reps(reps: list[Rep]) -> tuple[Rep, list["RepMorphism"], list["RepMorphism"]]:
    """Direct sum with the canonical inclusions and projections."""
    if not reps:
        raise ValueError("empty direct sum needs an explicit quiver; use zero_rep")
    q, p = reps[0].quiver, reps[0].p
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(q.n_vertices))
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        m = fl.zeros(dims[t], dims[s])
        ro = co = 0
        for r in reps:
            m[ro : ro + r.dims[t], co : co + r.dims[s]] = r.maps[a]
            ro += r.dims[t]
            co += r.dims[s]
        maps.append(m)
    total = Rep(q, p, dims, tuple(maps))
    incls, projs = [], []
    offs = [0] * q.n_vertices
    for r in reps:
        iblocks, pblocks = [], []
        for v in range(q.n_vertices):
            inc = fl.zeros(dims[v], r.dims[v])
            inc[offs[v] : offs[v] + r.dims[v], :] = fl.eye(r.dims[v])
            iblocks.append(inc)
            pblocks.append(inc.T.copy())
        incls.append(RepMorphism(r, total, tuple(iblocks)))
        projs.append(RepMorphism(total, r, tuple(pblocks)))
        for v in range(q.n_vertices):
            offs[v] += r.dims[v]
    return total, incls, projs


@dataclass(frozen=True, eq=False)
class RepMorphism:
    """Vertex-wise linear maps intertwining the arrow matrices."""

    source: Rep
    target: Rep
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        p = self.source.p
        for v in range(self.source.quiver.n_vertices):
            if self.blocks[v].shape != (self.target.dims[v], self.source.dims[v]):
                raise ValueError(f"block {v} has wrong shape")
        for a, (s, t) in enumerate(self.source.quiver.arrows):
            lhs = (self.target.maps[a] @ self.blocks[s]) % p
            rhs = (self.blocks[t] @ self.source.maps[a]) % p
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"blocks do not intertwine arrow {a}")

    def is_zero(self) -> bool:
        return all(not b.any() for b in self.blocks)

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """self after other (other first)."""
        p = self.source.p
        blocks = tuple((a @ b) % p for a, b in zip(self.blocks, other.blocks))
        return RepMorphism(other.source, self.target, blocks)

    def add(self, other: "RepMorphism") -> "RepMorphism":
        p = self.source.p
        blocks = tuple((a + b) % p for a, b in zip(self.blocks, other.blocks))
        return RepMorphism(self.source, self.target, blocks)

    def scale(self, c: int) -> "RepMorphism":
        p = self.source.p
        return RepMorphism(self.source, self.target,
                           tuple((c * b) % p for b in self.blocks))

    def is_invertible(self) -> bool:
        if self.source.dims != self.target.dims:
            return False
        return all(fl.rank(b, self.source.p) == b.shape[0] for b in self.blocks)


def identity_morphism(x: Rep) -> RepMorphism:
    return RepMorphism(x, x, tuple(fl.eye(d) for d in x.dims))


def zero_morphism(x: Rep, y: Rep) -> RepMorphism:
    return RepMorphism(x, y, tuple(fl.zeros(dy, dx) for dx, dy in zip(x.dims, y.dims)))


# ---------------------------------------------------------------------------
# Hom and Ext via the single intertwining map
#
# For hereditary path algebras, both Hom(M,N) and Ext^1(M,N) fall out of
#   delta: (+)_v Hom_k(M_v, N_v) -> (+)_a Hom_k(M_{s(a)}, N_{t(a)}),
#   (f_v) |-> (N_a f_{s(a)} - f_{t(a)} M_a),
# as kernel and cokernel. Cocycles are arbitrary tuples in the target space;
# two cocycles give equal Ext classes iff they differ by an image element.


@dataclass(frozen=True, eq=False)
class HomExt:
    source: Rep
    target: Rep
    hom_basis: tuple[RepMorphism, ...]
    ext_dim: int
    coboundary_basis: np.ndarray  # (cocycle space dim) x (rank of delta)
    cocycle_dim: int

    @property
    def hom_dim(self) -> int:
        return len(self.hom_basis)


def _vertex_offsets(m: Rep, n: Rep) -> tuple[list[int], int]:
    offs, pos = [], 0
    for v in range(m.quiver.n_vertices):
        offs.append(pos)
        pos += n.dims[v] * m.dims[v]
    return offs, pos


def _arrow_offsets(m: Rep, n: Rep) -> tuple[list[int], int]:
    offs, pos = [], 0
    for s, t in m.quiver.arrows:
        offs.append(pos)
        pos += n.dims[t] * m.dims[s]
    return offs, pos


def _delta_matrix(m: Rep, n: Rep) -> np.ndarray:
    p = m.p
    voffs, vdim = _vertex_offsets(m, n)
    aoffs, adim = _arrow_offsets(m, n)
    d = fl.zeros(adim, vdim)
    for a, (s, t) in enumerate(m.quiver.arrows):
        rows = slice(aoffs[a], aoffs[a] + n.dims[t] * m.dims[s])
        if n.dims[t] * m.dims[s] == 0:
            continue
        if n.dims[s] * m.dims[s]:
            d[rows, voffs[s] : voffs[s] + n.dims[s] * m.dims[s]] += np.kron(
                n.maps[a], fl.eye(m.dims[s])
            )
        if n.dims[t] * m.dims[t]:
            d[rows, voffs[t] : voffs[t] + n.dims[t] * m.dims[t]] -= np.kron(
                fl.eye(n.dims[t]), m.maps[a].T
            )
    return d % p


def _unvec_vertex_blocks(m: Rep, n: Rep, vec: np.ndarray) -> tuple[np.ndarray, ...]:
    voffs, _ = _vertex_offsets(m, n)
    blocks = []
    for v in range(m.quiver.n_vertices):
        size = n.dims[v] * m.dims[v]
        blocks.append(vec[voffs[v] : voffs[v] + size].reshape(n.dims[v], m.dims[v]))
    return tuple(blocks)


def hom_ext(m: Rep, n: Rep) -> HomExt:
    """Basis of Hom(M,N), dim Ext^1(M,N) and the coboundary subspace."""
    if m.quiver is not n.quiver and m.quiver != n.quiver:
        raise ValueError("representations live over different quivers")
    if m.p != n.p:
        raise ValueError("representations live over different fields")
    p = m.p
    d = _delta_matrix(m, n)
    ker = fl.nullspace(d, p)
    basis = tuple(
        RepMorphism(m, n, _unvec_vertex_blocks(m, n, ker[:, k] % p))
        for k in range(ker.shape[1])
    )
    cob = fl.column_space(d, p)
    return HomExt(m, n, basis, d.shape[0] - cob.shape[1], cob, d.shape[0])


def hom_dim(m: Rep, n: Rep) -> int:
    d = _delta_matrix(m, n)
    return d.shape[1] - fl.rank(d, m.p)


def ext_dim(m: Rep, n: Rep) -> int:
    d = _delta_matrix(m, n)
    return d.shape[0] - fl.rank(d, m.p)


def euler_form(q: Quiver, d, e) -> int:
    """<d, e> = sum_v d_v e_v - sum_a d_{s(a)} e_{t(a)}."""
    if len(d) != q.n_vertices or len(e) != q.n_vertices:
        raise ValueError("dimension vector length mismatch")
    total = sum(int(dv) * int(ev) for dv, ev in zip(d, e))
    total -= sum(int(d[s]) * int(e[t]) for s, t in q.arrows)
    return total


# ---------------------------------------------------------------------------
# Extension cocycles and middle terms


@dataclass(frozen=True, eq=False)
class ExtCocycle:
    """A raw 1-cocycle M ~> N: one matrix of shape (N_{t(a)}, M_{s(a)}) per arrow."""

    source: Rep  # M
    target: Rep  # N
    comps: tuple[np.ndarray, ...]

    def __post_init__(self):
        for a, (s, t) in enumerate(self.source.quiver.arrows):
            if self.comps[a].shape != (self.target.dims[t], self.source.dims[s]):
                raise ValueError(f"cocycle component {a} has wrong shape")

    def vec(self) -> np.ndarray:
        parts = [c.reshape(-1) for c in self.comps]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def is_coboundary(self, he: HomExt) -> bool:
        v = self.vec().reshape(-1, 1)
        if not v.any():
            return True
        return fl.solve(he.coboundary_basis, v, self.source.p) is not None


def cocycle_from_vec(m: Rep, n: Rep, vec: np.ndarray) -> ExtCocycle:
    aoffs, _ = _arrow_offsets(m, n)
    comps = []
    for a, (s, t) in enumerate(m.quiver.arrows):
        size = n.dims[t] * m.dims[s]
        comps.append(vec[aoffs[a] : aoffs[a] + size].reshape(n.dims[t], m.dims[s]) % m.p)
    return ExtCocycle(m, n, tuple(comps))


def zero_cocycle(m: Rep, n: Rep) -> ExtCocycle:
    comps = tuple(fl.zeros(n.dims[t], m.dims[s]) for s, t in m.quiver.arrows)
    return ExtCocycle(m, n, comps)


def ext_class_reps(he: HomExt) -> list[ExtCocycle]:
    """Cocycles whose classes form a basis of Ext^1(source, target)."""
    full = fl.eye(he.cocycle_dim)
    reps = fl.quotient_reps(full, he.coboundary_basis, he.source.p)
    return [cocycle_from_vec(he.source, he.target, reps[:, k]) for k in range(reps.shape[1])]


def middle_term(eps: ExtCocycle) -> tuple[Rep, RepMorphism, RepMorphism]:
    """The extension 0 -> N -> E -> M -> 0 realizing the cocycle."""
    m, n, p = eps.source, eps.target, eps.source.p
    q = m.quiver
    dims = tuple(n.dims[v] + m.dims[v] for v in range(q.n_vertices))
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        blk = fl.zeros(dims[t], dims[s])
        blk[: n.dims[t], : n.dims[s]] = n.maps[a]
        blk[: n.dims[t], n.dims[s] :] = eps.comps[a]
        blk[n.dims[t] :, n.dims[s] :] = m.maps[a]
        maps.append(blk % p)
    e = Rep(q, p, dims, tuple(maps))
    incl_blocks, proj_blocks = [], []
    for v in range(q.n_vertices):
        inc = fl.zeros(dims[v], n.dims[v])
        inc[: n.dims[v], :] = fl.eye(n.dims[v])
        incl_blocks.append(inc)
        prj = fl.zeros(m.dims[v], dims[v])
        prj[:, n.dims[v] :] = fl.eye(m.dims[v])
        proj_blocks.append(prj)
    return e, RepMorphism(n, e, tuple(incl_blocks)), RepMorphism(e, m, tuple(proj_blocks))


def yoneda_push(g: RepMorphism, eps: ExtCocycle) -> ExtCocycle:
    """Push the class M ~> N forward along g: N -> N'."""
    if g.source.dims != eps.target.dims:
        raise ValueError("g must start at the cocycle target")
    p = eps.source.p
    comps = tuple(
        (g.blocks[t] @ eps.comps[a]) % p
        for a, (s, t) in enumerate(eps.source.quiver.arrows)
    )
    return ExtCocycle(eps.source, g.target, comps)


def yoneda_pull(eps: ExtCocycle, f: RepMorphism) -> ExtCocycle:
    """Pull the class M ~> N back along f: M' -> M."""
    if f.target.dims != eps.source.dims:
        raise ValueError("f must end at the cocycle source")
    p = eps.source.p
    comps = tuple(
        (eps.comps[a] @ f.blocks[s]) % p
        for a, (s, t) in enumerate(eps.source.quiver.arrows)
    )
    return ExtCocycle(f.source, eps.target, comps)


# ---------------------------------------------------------------------------
# Kernels, images, cokernels


def kernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    """(K, incl) with 0 -> K -> source exact at every vertex."""
    x, p, q = f.source, f.source.p, f.source.quiver
    bases = [fl.nullspace(f.blocks[v], p) for v in range(q.n_vertices)]
    dims = tuple(b.shape[1] for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        img = (x.maps[a] @ bases[s]) % p
        sol = fl.solve(bases[t], img, p)
        if sol is None:
            raise RuntimeError("kernel spaces are not arrow-stable (bug)")
        maps.append(sol)
    k = Rep(q, p, dims, tuple(maps))
    return k, RepMorphism(k, x, tuple(bases))


def image(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    """(I, incl) with I the image subrepresentation of the target."""
    y, p, q = f.target, f.source.p, f.source.quiver
    bases = [fl.column_space(f.blocks[v], p) for v in range(q.n_vertices)]
    dims = tuple(b.shape[1] for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        img = (y.maps[a] @ bases[s]) % p
        sol = fl.solve(bases[t], img, p)
        if sol is None:
            raise RuntimeError("image spaces are not arrow-stable (bug)")
        maps.append(sol)
    i = Rep(q, p, dims, tuple(maps))
    return i, RepMorphism(i, y, tuple(bases))


def cokernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    """(Q, proj) with source -> target -> Q -> 0 exact at every vertex."""
    y, p, q = f.target, f.source.p, f.source.quiver
    im_bases = [fl.column_space(f.blocks[v], p) for v in range(q.n_vertices)]
    reps = [fl.quotient_reps(fl.eye(y.dims[v]), im_bases[v], p) for v in range(q.n_vertices)]
    projs = []
    for v in range(q.n_vertices):
        full = np.hstack([im_bases[v], reps[v]])
        inv = fl.solve(full, fl.eye(y.dims[v]), p)
        if inv is None:
            raise RuntimeError("quotient coordinates are inconsistent (bug)")
        projs.append(inv[im_bases[v].shape[1] :, :])
    dims = tuple(r.shape[1] for r in reps)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        maps.append((projs[t] @ y.maps[a] @ reps[s]) % p)
    c = Rep(q, p, dims, tuple(maps))
    return c, RepMorphism(y, c, tuple(projs))


def subrep_from_bases(x: Rep, bases: list[np.ndarray]) -> tuple[Rep, RepMorphism]:
    """The subrepresentation spanned by per-vertex bases, with its inclusion.

    The spaces must be arrow-stable; raises otherwise.
    """
    p, q = x.p, x.quiver
    dims = tuple(b.shape[1] for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        sol = fl.solve(bases[t], (x.maps[a] @ bases[s]) % p, p)
        if sol is None:
            raise ValueError("subspaces are not closed under the arrow maps")
        maps.append(sol)
    sub = Rep(q, p, dims, tuple(maps))
    return sub, RepMorphism(sub, x, tuple(b % p for b in bases))


# ---------------------------------------------------------------------------
# Submodule enumeration, trace and reject


def submodules(x: Rep, max_total_dim: int = 8) -> list[tuple[Rep, RepMorphism]]:
    """All subrepresentations of x, as (sub, inclusion) pairs.

    DFS over vertex subspaces in topological order; at each vertex only the
    subspaces containing the forced image of the earlier choices are
    enumerated. Deterministic order.
    """
    p, q = x.p, x.quiver
    if x.total_dim() > max_total_dim:
        raise SearchSpaceError(
            f"submodule enumeration bound exceeded: total dim {x.total_dim()} > {max_total_dim}"
        )
    order = q.topological_order()
    assert order is not None
    results: list[tuple[Rep, RepMorphism]] = []
    chosen: dict[int, np.ndarray] = {}

    def choices_at(v: int):
        forced_cols = [fl.zeros(x.dims[v], 0)]
        for a in q.arrows_into(v):
            s = q.arrows[a][0]
            forced_cols.append((x.maps[a] @ chosen[s]) % p)
        forced = fl.column_space(np.hstack(forced_cols), p)
        comp = fl.quotient_reps(fl.eye(x.dims[v]), forced, p)
        for small in fl.all_subspaces(comp.shape[1], p):
            lifted = (comp @ small) % p
            yield fl.column_space(np.hstack([forced, lifted]), p)

    def dfs(pos: int):
        if pos == len(order):
            bases = [chosen[v] for v in range(q.n_vertices)]
            results.append(subrep_from_bases(x, bases))
            return
        v = order[pos]
        for cand in choices_at(v):
            chosen[v] = cand
            dfs(pos + 1)
        del chosen[v]

    dfs(0)
    return results


def trace(gens: list[Rep], x: Rep) -> tuple[Rep, RepMorphism]:
    """Sum of images of all morphisms from the generators into x."""
    p, q = x.p, x.quiver
    cols = [[fl.zeros(x.dims[v], 0)] for v in range(q.n_vertices)]
    for g in gens:
        for f in hom_ext(g, x).hom_basis:
            for v in range(q.n_vertices):
                cols[v].append(f.blocks[v])
    bases = [fl.column_space(np.hstack(c), p) for c in cols]
    return subrep_from_bases(x, bases)


def reject(cogens: list[Rep], x: Rep) -> tuple[Rep, RepMorphism]:
    """Intersection of kernels of all morphisms from x into the cogenerators."""
    p, q = x.p, x.quiver
    rows = [[fl.zeros(0, x.dims[v])] for v in range(q.n_vertices)]
    for g in cogens:
        for f in hom_ext(x, g).hom_basis:
            for v in range(q.n_vertices):
                rows[v].append(f.blocks[v])
    bases = [fl.nullspace(np.vstack(r), p) for r in rows]
    return subrep_from_bases(x, bases)


# ---------------------------------------------------------------------------
# Krull-Schmidt splitting (Fitting decomposition over the endomorphism algebra)


def _power_blocks(blocks: tuple[np.ndarray, ...], n: int, p: int) -> list[np.ndarray]:
    out = []
    for b in blocks:
        acc = fl.eye(b.shape[0])
        base, e = b.copy(), n
        while e:
            if e & 1:
                acc = (acc @ base) % p
            base = (base @ base) % p
            e >>= 1
        out.append(acc)
    return out


def _endo_combinations(basis: tuple[RepMorphism, ...], p: int):
    """All nonzero linear combinations of the endomorphism basis, basis first."""
    d = len(basis)
    for f in basis:
        yield f
    if d > MAX_ENDO_ENUM:
        raise SearchSpaceError(
            f"endomorphism enumeration bound exceeded: p^{d} combinations"
        )
    for coeffs in product(range(p), repeat=d):
        if sum(c != 0 for c in coeffs) <= 1:
            continue  # zero and scalar multiples of single basis vectors seen above
        f = basis[0].scale(coeffs[0])
        for c, g in zip(coeffs[1:], basis[1:]):
            f = f.add(g.scale(c))
        yield f


def split_indecomposables(x: Rep) -> list[Rep]:
    """Indecomposable direct summands of x (with multiplicity).

    Searches End(x) for a non-nilpotent non-invertible element; its Fitting
    decomposition splits x. If no linear combination of the endomorphism
    basis splits, End(x) is local and x is indecomposable.
    """
    if x.is_zero():
        return []
    p, n = x.p, x.total_dim()
    basis = hom_ext(x, x).hom_basis
    if len(basis) == 1:
        return [x]
    for f in _endo_combinations(basis, p):
        fitted = _power_blocks(f.blocks, n, p)
        kdim = sum(b.shape[1] - fl.rank(b, p) for b in fitted)
        if 0 < kdim < n:
            fn = RepMorphism(x, x, tuple(fitted))
            k, _ = kernel(fn)
            i, _ = image(fn)
            return split_indecomposables(k) + split_indecomposables(i)
    return [x]


def is_isomorphic(x: Rep, y: Rep) -> bool:
    """Whether two representations are isomorphic (dims equal + invertible hom)."""
    if x.dims != y.dims:
        return False
    if x.is_zero():
        return True
    basis = hom_ext(x, y).hom_basis
    if not basis:
        return False
    if len(basis) > MAX_ENDO_ENUM:
        raise SearchSpaceError("isomorphism search bound exceeded")
    p = x.p
    for coeffs in product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        f = basis[0].scale(coeffs[0])
        for c, g in zip(coeffs[1:], basis[1:]):
            f = f.add(g.scale(c))
        if f.is_invertible():
            return True
    return False


# ---------------------------------------------------------------------------
# Decomposition against a complete catalog (Hom counting)


def decompose(x: Rep, cat) -> dict[int, int]:
    """Multiplicities of catalog indecomposables in x.

    Solves sum_a m_a dimHom(M_a, M_b) = dimHom(x, M_b); the catalog order is
    directed, so the system is unitriangular and has a unique integer
    solution. Raises CatalogError if the solution is not a valid
    decomposition (incomplete catalog).
    """
    h = [hom_dim(x, m) for m in cat.indecs]
    size = len(cat.indecs)
    mult = [0] * size
    for b in range(size):
        acc = h[b]
        for a in range(b):
            acc -= mult[a] * cat.hom_table[a][b]
        mult[b] = acc
    if any(m < 0 for m in mult):
        raise CatalogError("negative multiplicity: catalog incomplete or disordered")
    for v in range(x.quiver.n_vertices):
        if sum(mult[a] * cat.indecs[a].dims[v] for a in range(size)) != x.dims[v]:
            raise CatalogError("dimension mismatch: catalog incomplete")
    return {a: m for a, m in enumerate(mult) if m}
