"""Complete catalog of indecomposables for a representation-finite quiver.

Enumeration is an extension sweep: start from the simple representations,
close under "indecomposable summand of a middle term of an extension between
two known indecomposables". For Dynkin quivers completeness is certified by
the positive-root count; other quivers abort once a bound is hit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import fieldlin as fl
from . import quiverrep as qr
from .errors import CatalogError, NotRepFiniteError
from .quiverrep import Quiver, Rep

CATALOG_FORMAT = 1
DEFAULT_MAX_CATALOG = 48
DEFAULT_MAX_INDEC_DIM = 24

Path_ = tuple[int, ...]  # a path, as the tuple of its arrow indices, source first


# ---------------------------------------------------------------------------
# Paths and the projective / injective representations


def paths_from_vertex(q: Quiver, i: int) -> list[Path_]:
    """Paths starting at vertex i, ordered by (length, arrow indices)."""
    out: list[Path_] = [()]
    frontier: list[tuple[Path_, int]] = [((), i)]
    while frontier:
        nxt: list[tuple[Path_, int]] = []
        for path, v in frontier:
            for a in q.arrows_out_of(v):
                extended = path + (a,)
                out.append(extended)
                nxt.append((extended, q.arrows[a][1]))
        nxt.sort()
        frontier = nxt
    out.sort(key=lambda pth: (len(pth), pth))
    return out


def path_target(q: Quiver, i: int, path: Path_) -> int:
    v = i
    for a in path:
        s, t = q.arrows[a]
        if s != v:
            raise ValueError("path is not composable")
        v = t
    return v


def projective_rep(q: Quiver, p: int, i: int) -> tuple[Rep, list[list[Path_]]]:
    """P_i with its path basis: basis of (P_i)_j = paths i -> j."""
    paths = paths_from_vertex(q, i)
    by_vertex: list[list[Path_]] = [[] for _ in range(q.n_vertices)]
    for pth in paths:
        by_vertex[path_target(q, i, pth)].append(pth)
    dims = tuple(len(b) for b in by_vertex)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        m = fl.zeros(dims[t], dims[s])
        for col, pth in enumerate(by_vertex[s]):
            row = by_vertex[t].index(pth + (a,))
            m[row, col] = 1
        maps.append(m)
    return Rep(q, p, dims, tuple(maps)), by_vertex


def injective_rep(q: Quiver, p: int, i: int) -> tuple[Rep, list[list[Path_]]]:
    """I_i with its dual path basis: basis of (I_i)_j = paths j -> i.

    The arrow map for a: j -> j' sends the class of a path starting with a to
    the class of its tail, and every other path to zero.
    """
    by_vertex: list[list[Path_]] = [[] for _ in range(q.n_vertices)]
    for j in range(q.n_vertices):
        for pth in paths_from_vertex(q, j):
            if path_target(q, j, pth) == i:
                by_vertex[j].append(pth)
    dims = tuple(len(b) for b in by_vertex)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        m = fl.zeros(dims[t], dims[s])
        for col, pth in enumerate(by_vertex[s]):
            if pth and pth[0] == a:
                row = by_vertex[t].index(pth[1:])
                m[row, col] = 1
        maps.append(m)
    return Rep(q, p, dims, tuple(maps)), by_vertex


# ---------------------------------------------------------------------------
# Dynkin recognition and positive roots


def symmetric_cartan(q: Quiver) -> np.ndarray:
    c = 2 * np.eye(q.n_vertices, dtype=np.int64)
    for s, t in q.arrows:
        if s == t:
            raise CatalogError("loops never occur on acyclic quivers")
        c[s, t] -= 1
        c[t, s] -= 1
    return c


def _is_positive_definite(c: np.ndarray) -> bool:
    """Exact Sylvester criterion with Fraction arithmetic."""
    n = c.shape[0]
    m = [[Fraction(int(c[i, j])) for j in range(n)] for i in range(n)]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            factor = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= factor * m[k][j]
    return True


def is_dynkin(q: Quiver) -> bool:
    """Whether the underlying graph is a disjoint union of A/D/E diagrams."""
    return _is_positive_definite(symmetric_cartan(q))


def positive_roots(q: Quiver) -> list[tuple[int, ...]]:
    """Positive roots of the underlying diagram via reflection closure."""
    if not is_dynkin(q):
        raise CatalogError("positive roots are only computed for Dynkin quivers")
    c = symmetric_cartan(q)
    n = q.n_vertices
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = set(simple)
    while frontier:
        new = set()
        for v in frontier:
            for i in range(n):
                pairing = sum(int(c[i, j]) * v[j] for j in range(n))
                w = tuple(v[j] - (pairing if j == i else 0) for j in range(n))
                if w not in roots and all(x >= 0 for x in w) and any(x > 0 for x in w):
                    new.add(w)
        roots |= new
        frontier = new
    return sorted(roots)


# ---------------------------------------------------------------------------
# The catalog


@dataclass(eq=False)
class IndecCatalog:
    quiver: Quiver
    p: int
    indecs: list[Rep]
    hom_table: list[list[int]]
    ext_table: list[list[int]]
    proj_index: list[int]
    inj_index: list[int]
    simple_index: list[int]

    def __post_init__(self):
        self._hom_ext_cache: dict[tuple[int, int], qr.HomExt] = {}
        self._proj_models: dict[int, tuple[Rep, list[list[Path_]]]] = {}
        self._inj_models: dict[int, tuple[Rep, list[list[Path_]]]] = {}

    def __len__(self) -> int:
        return len(self.indecs)

    def nakayama(self, idx: int) -> int:
        """Catalog index of I_i for the catalog index of P_i."""
        if idx not in self.proj_index:
            raise CatalogError(f"catalog index {idx} is not a projective")
        return self.inj_index[self.proj_index.index(idx)]

    def hom_ext(self, a: int, b: int) -> qr.HomExt:
        key = (a, b)
        if key not in self._hom_ext_cache:
            self._hom_ext_cache[key] = qr.hom_ext(self.indecs[a], self.indecs[b])
        return self._hom_ext_cache[key]

    def projective(self, i: int) -> Rep:
        return self.indecs[self.proj_index[i]]

    def injective(self, i: int) -> Rep:
        return self.indecs[self.inj_index[i]]

    def simple(self, i: int) -> Rep:
        return self.indecs[self.simple_index[i]]

    def proj_model(self, i: int) -> Rep:
        """P_i in its path basis (the model used by complexes)."""
        if i not in self._proj_models:
            self._proj_models[i] = projective_rep(self.quiver, self.p, i)
        return self._proj_models[i][0]

    def proj_paths(self, i: int) -> list[list[Path_]]:
        self.proj_model(i)
        return self._proj_models[i][1]

    def inj_model(self, i: int) -> Rep:
        """I_i in its dual path basis."""
        if i not in self._inj_models:
            self._inj_models[i] = injective_rep(self.quiver, self.p, i)
        return self._inj_models[i][0]

    def inj_paths(self, i: int) -> list[list[Path_]]:
        self.inj_model(i)
        return self._inj_models[i][1]

    def dim_vectors(self) -> list[tuple[int, ...]]:
        return [m.dims for m in self.indecs]


def _directed_order(indecs: list[Rep], hom: dict[tuple[int, int], int]) -> list[int]:
    """Topological order of the nonzero-Hom relation, ties by dim vector."""
    n = len(indecs)
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a != b and hom[(a, b)]:
                succ[a].append(b)
                indeg[b] += 1
    frontier = sorted((indecs[v].dims, v) for v in range(n) if indeg[v] == 0)
    order = []
    while frontier:
        _, v = frontier.pop(0)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                frontier.append((indecs[w].dims, w))
        frontier.sort()
    if len(order) != n:
        raise CatalogError("nonzero-Hom relation has a cycle; algebra not directed")
    return order


def build_catalog(
    q: Quiver,
    p: int = fl.DEFAULT_PRIME,
    max_catalog: int = DEFAULT_MAX_CATALOG,
    max_indec_dim: int = DEFAULT_MAX_INDEC_DIM,
) -> IndecCatalog:
    """Enumerate all indecomposables by the extension sweep."""
    fl.check_prime(p)
    dynkin = is_dynkin(q)
    known: list[Rep] = [qr.simple_rep(q, p, v) for v in range(q.n_vertices)]

    def register(candidate: Rep) -> bool:
        for m in known:
            if qr.is_isomorphic(candidate, m):
                return False
        known.append(candidate)
        if len(known) > max_catalog or candidate.total_dim() > max_indec_dim:
            raise NotRepFiniteError(
                f"not representation-finite within bounds "
                f"(catalog > {max_catalog} or an indecomposable larger than {max_indec_dim})"
            )
        return True

    changed = True
    while changed:
        changed = False
        size = len(known)
        for a in range(size):
            for b in range(size):
                he = qr.hom_ext(known[a], known[b])
                if he.ext_dim == 0:
                    continue
                reps = qr.ext_class_reps(he)
                for coeffs in _nonzero_tuples(p, he.ext_dim):
                    vec = sum(
                        c * rep.vec() for c, rep in zip(coeffs, reps)
                    ) % p
                    eps = qr.cocycle_from_vec(known[a], known[b], np.asarray(vec))
                    middle, _, _ = qr.middle_term(eps)
                    for summand in qr.split_indecomposables(middle):
                        if register(summand):
                            changed = True

    if dynkin:
        expected = len(positive_roots(q))
        if len(known) != expected:
            raise CatalogError(
                f"extension sweep found {len(known)} indecomposables, "
                f"root count says {expected}"
            )

    hom: dict[tuple[int, int], int] = {}
    for a in range(len(known)):
        for b in range(len(known)):
            hom[(a, b)] = qr.hom_dim(known[a], known[b])
    order = _directed_order(known, hom)
    indecs = [known[i] for i in order]

    size = len(indecs)
    hom_table = [[0] * size for _ in range(size)]
    ext_table = [[0] * size for _ in range(size)]
    for a in range(size):
        for b in range(size):
            he = qr.hom_ext(indecs[a], indecs[b])
            hom_table[a][b] = he.hom_dim
            ext_table[a][b] = he.ext_dim

    def locate(target: Rep) -> int:
        for i, m in enumerate(indecs):
            if qr.is_isomorphic(target, m):
                return i
        raise CatalogError("a projective/injective/simple is missing from the catalog")

    proj_index = [locate(projective_rep(q, p, v)[0]) for v in range(q.n_vertices)]
    inj_index = [locate(injective_rep(q, p, v)[0]) for v in range(q.n_vertices)]
    simple_index = [locate(qr.simple_rep(q, p, v)) for v in range(q.n_vertices)]

    return IndecCatalog(q, p, indecs, hom_table, ext_table, proj_index, inj_index, simple_index)


def _nonzero_tuples(p: int, d: int):
    from itertools import product

    for coeffs in product(range(p), repeat=d):
        if any(coeffs):
            yield coeffs


# ---------------------------------------------------------------------------
# Cache


def quiver_cache_key(q: Quiver, p: int) -> str:
    digest = hashlib.sha256(
        f"{CATALOG_FORMAT}|{p}|{q.canonical_text()}".encode()
    ).hexdigest()
    return digest[:20]


def catalog_to_json(cat: IndecCatalog) -> dict:
    return {
        "format": CATALOG_FORMAT,
        "quiver": cat.quiver.canonical_text(),
        "quiver_name": cat.quiver.name,
        "p": cat.p,
        "indecs": [
            {"dims": list(m.dims), "maps": [mm.tolist() for mm in m.maps]}
            for m in cat.indecs
        ],
        "hom_table": cat.hom_table,
        "ext_table": cat.ext_table,
        "proj_index": cat.proj_index,
        "inj_index": cat.inj_index,
        "simple_index": cat.simple_index,
    }


def catalog_from_json(data: dict) -> IndecCatalog:
    if data.get("format") != CATALOG_FORMAT:
        raise CatalogError("cache format mismatch")
    q = Quiver.from_text(data["quiver"], name=data.get("quiver_name", ""))
    p = data["p"]
    indecs = [
        Rep(
            q,
            p,
            tuple(entry["dims"]),
            tuple(
                fl.as_mat(mm, p) if np.asarray(mm).size else
                fl.zeros(entry["dims"][t], entry["dims"][s])
                for mm, (s, t) in zip(entry["maps"], q.arrows)
            ),
        )
        for entry in data["indecs"]
    ]
    return IndecCatalog(
        q,
        p,
        indecs,
        data["hom_table"],
        data["ext_table"],
        data["proj_index"],
        data["inj_index"],
        data["simple_index"],
    )


def load_or_build_catalog(
    q: Quiver,
    p: int = fl.DEFAULT_PRIME,
    cache_dir: str | Path | None = None,
    max_catalog: int = DEFAULT_MAX_CATALOG,
    max_indec_dim: int = DEFAULT_MAX_INDEC_DIM,
) -> IndecCatalog:
    if cache_dir is None:
        return build_catalog(q, p, max_catalog, max_indec_dim)
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"catalog-{quiver_cache_key(q, p)}.json"
    if path.exists():
        try:
            data = json.loads(path.read_text())
            if data.get("quiver") == q.canonical_text() and data.get("p") == p:
                return catalog_from_json(data)
        except (json.JSONDecodeError, KeyError, CatalogError):
            pass  # stale or corrupt cache: rebuild below
    cat = build_catalog(q, p, max_catalog, max_indec_dim)
    path.write_text(json.dumps(catalog_to_json(cat), sort_keys=True))
    return cat
