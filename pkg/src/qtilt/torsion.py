"""Torsion classes on the module category of a representation-finite quiver.

A candidate torsion class is a bitmask over catalog indices; the class it
denotes is the additive closure of the marked indecomposables. Validity is
checked through two closure conditions:

  * Gen-fixpoint: an indecomposable is generated by the marked modules iff
    it is marked (closure under quotients, additively),
  * extension closure: for marked X, Y and every Ext^1 class, all
    indecomposable summands of the middle term are marked.

Pairwise closure over indecomposable ends implies the full extension
axiom: an extension of modules in the additive closure splits into
extensions with indecomposable ends by induction on composition length
(pull back along a summand inclusion, push out along a projection), and
every class of the pair is enumerated, not just a basis, because the
isomorphism type of a middle term is not linear in the cocycle. The sweep
context precomputes everything that does not depend on the mask, so the
2^n subset filter is cheap bit logic plus small rank tests.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import fieldlin as fl
from . import quiverrep as qr
from .catalog import IndecCatalog
from .errors import MathCheckError, SearchSpaceError

DEFAULT_MAX_IND_FOR_SWEEP = 16


def mask_indices(mask: int) -> list[int]:
    out, i = [], 0
    while mask >> i:
        if mask >> i & 1:
            out.append(i)
        i += 1
    return out


def indices_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class TorsionContext:
    """Mask-independent precomputations for one catalog."""

    def __init__(self, cat: IndecCatalog):
        self.cat = cat
        self.n = len(cat)
        self.p = cat.p
        # per (generator g, module x): per-vertex image matrices of trace({M_g}, M_x)
        self._trace_blocks: dict[tuple[int, int], list[np.ndarray]] = {}
        # per (module x, cogenerator g): per-vertex stacked morphism blocks x -> M_g
        self._cohom_blocks: dict[tuple[int, int], list[np.ndarray]] = {}
        self._ext_summands: dict[tuple[int, int], list[dict[int, int]]] = {}
        self._ext_req: dict[tuple[int, int], int] = {}
        self._gen_memo: dict[tuple[int, int], bool] = {}
        self._embed_memo: dict[tuple[int, int], bool] = {}
        self._submodule_profiles: dict[int, list] = {}

    # -- primitive caches ---------------------------------------------------

    def trace_blocks(self, g: int, x: int) -> list[np.ndarray]:
        key = (g, x)
        if key not in self._trace_blocks:
            xr = self.cat.indecs[x]
            cols = [[fl.zeros(xr.dims[v], 0)] for v in range(xr.quiver.n_vertices)]
            for f in self.cat.hom_ext(g, x).hom_basis:
                for v in range(xr.quiver.n_vertices):
                    cols[v].append(f.blocks[v])
            self._trace_blocks[key] = [np.hstack(c) for c in cols]
        return self._trace_blocks[key]

    def cohom_blocks(self, x: int, g: int) -> list[np.ndarray]:
        key = (x, g)
        if key not in self._cohom_blocks:
            xr = self.cat.indecs[x]
            rows = [[fl.zeros(0, xr.dims[v])] for v in range(xr.quiver.n_vertices)]
            for f in self.cat.hom_ext(x, g).hom_basis:
                for v in range(xr.quiver.n_vertices):
                    rows[v].append(f.blocks[v])
            self._cohom_blocks[key] = [np.vstack(r) for r in rows]
        return self._cohom_blocks[key]

    def ext_summands(self, a: int, b: int) -> list[dict[int, int]]:
        """Summand multisets of middle terms, one per nonzero Ext class."""
        key = (a, b)
        if key not in self._ext_summands:
            he = self.cat.hom_ext(a, b)
            out: list[dict[int, int]] = []
            if he.ext_dim:
                reps = qr.ext_class_reps(he)
                from itertools import product

                for coeffs in product(range(self.p), repeat=he.ext_dim):
                    if not any(coeffs):
                        continue
                    vec = sum(c * r.vec() for c, r in zip(coeffs, reps)) % self.p
                    eps = qr.cocycle_from_vec(
                        self.cat.indecs[a], self.cat.indecs[b], np.asarray(vec)
                    )
                    middle, _, _ = qr.middle_term(eps)
                    out.append(qr.decompose(middle, self.cat))
            self._ext_summands[key] = out
        return self._ext_summands[key]

    def submodule_profiles(self, x: int, max_subdim: int = 8) -> list:
        """Per submodule K of catalog module x: (dec(K), dec(x/K), K summand list)."""
        if x not in self._submodule_profiles:
            xr = self.cat.indecs[x]
            profiles = []
            for sub, incl in qr.submodules(xr, max_total_dim=max_subdim):
                quot, _ = qr.cokernel(incl)
                kdec = qr.decompose(sub, self.cat)
                qdec = qr.decompose(quot, self.cat)
                ksummands = sorted(i for i, m in kdec.items() for _ in range(m))
                profiles.append((kdec, qdec, ksummands))
            self._submodule_profiles[x] = profiles
        return self._submodule_profiles[x]

    def ext_requirement(self, a: int, b: int) -> int:
        """Union mask of all summands over all nonzero classes of Ext^1(a, b)."""
        key = (a, b)
        if key not in self._ext_req:
            req = 0
            for dec in self.ext_summands(a, b):
                req |= indices_mask(dec.keys())
            self._ext_req[key] = req
        return self._ext_req[key]

    # -- membership tests ---------------------------------------------------

    def generated_by(self, x: int, mask: int) -> bool:
        """Whether the catalog module x lies in Gen(add of the marked modules)."""
        key = (x, mask)
        if key in self._gen_memo:
            return self._gen_memo[key]
        xr = self.cat.indecs[x]
        result = True
        for v in range(xr.quiver.n_vertices):
            if xr.dims[v] == 0:
                continue
            stack = [self.trace_blocks(g, x)[v] for g in mask_indices(mask)]
            joined = np.hstack([fl.zeros(xr.dims[v], 0)] + stack)
            if fl.rank(joined, self.p) < xr.dims[v]:
                result = False
                break
        self._gen_memo[key] = result
        return result

    def embeds_in(self, x: int, mask: int) -> bool:
        """Whether catalog module x embeds into a finite sum of marked modules."""
        key = (x, mask)
        if key in self._embed_memo:
            return self._embed_memo[key]
        xr = self.cat.indecs[x]
        result = True
        for v in range(xr.quiver.n_vertices):
            if xr.dims[v] == 0:
                continue
            stack = [self.cohom_blocks(x, g)[v] for g in mask_indices(mask)]
            joined = np.vstack([fl.zeros(0, xr.dims[v])] + stack)
            if fl.rank(joined, self.p) < xr.dims[v]:
                result = False
                break
        self._embed_memo[key] = result
        return result

    # -- torsion-class predicates --------------------------------------------
    #
    # ``world`` restricts every quantifier to a sub-world of catalog indices
    # (used by the perpendicular-category reduction); the default is the full
    # catalog.

    def full_world(self) -> int:
        return (1 << self.n) - 1

    def is_torsion_class(self, mask: int, world: int | None = None) -> bool:
        world = self.full_world() if world is None else world
        if mask & ~world:
            raise ValueError("mask leaves the ambient world")
        for x in mask_indices(world & ~mask):
            if self.generated_by(x, mask):
                return False
        marked = mask_indices(mask)
        for a in marked:
            for b in marked:
                if self.ext_requirement(a, b) & ~mask:
                    return False
        return True

    def enumerate_torsion_classes(
        self,
        world: int | None = None,
        max_ind: int = DEFAULT_MAX_IND_FOR_SWEEP,
        jobs: int = 1,
    ) -> list[int]:
        world = self.full_world() if world is None else world
        wbits = mask_indices(world)
        if len(wbits) > max_ind:
            raise SearchSpaceError(
                f"torsion-class sweep bound exceeded: {len(wbits)} indecomposables > {max_ind}"
            )
        candidates = []
        for sub in range(1 << len(wbits)):
            mask = 0
            for k, b in enumerate(wbits):
                if sub >> k & 1:
                    mask |= 1 << b
            candidates.append(mask)
        candidates.sort()
        if jobs <= 1:
            flags = [self.is_torsion_class(m, world) for m in candidates]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                flags = list(pool.map(lambda m: self.is_torsion_class(m, world), candidates))
        return [m for m, ok in zip(candidates, flags) if ok]

    def torsion_free(self, mask: int, world: int | None = None, validate: bool = True) -> int:
        """The complement class {Y : Hom(T, Y) = 0}, with the pair axioms checked."""
        world = self.full_world() if world is None else world
        marked = mask_indices(mask)
        fmask = 0
        for y in mask_indices(world):
            if all(self.cat.hom_table[t][y] == 0 for t in marked):
                fmask |= 1 << y
        if validate:
            self._check_canonical_sequences(mask, fmask, world)
        return fmask

    def _check_canonical_sequences(self, tmask: int, fmask: int, world: int):
        gens = [self.cat.indecs[g] for g in mask_indices(tmask)]
        for x in mask_indices(world):
            xr = self.cat.indecs[x]
            tx, incl = qr.trace(gens, xr) if gens else (qr.zero_rep(xr.quiver, xr.p), None)
            if gens:
                quot, _ = qr.cokernel(incl)
            else:
                quot = xr
            tdec = qr.decompose(tx, self.cat)
            fdec = qr.decompose(quot, self.cat)
            if indices_mask(tdec.keys()) & ~tmask or indices_mask(fdec.keys()) & ~fmask:
                raise MathCheckError(
                    f"canonical sequence of catalog module {x} leaves the torsion pair"
                )

    def ext_projectives(self, mask: int) -> int:
        out = 0
        marked = mask_indices(mask)
        for e in marked:
            if all(self.cat.ext_table[e][t] == 0 for t in marked):
                out |= 1 << e
        return out

    def is_finitely_generated(self, mask: int) -> bool:
        ep = self.ext_projectives(mask)
        return all(self.generated_by(x, ep) for x in mask_indices(mask))

    def serre_closed(self, mask: int) -> bool:
        for i in range(self.cat.quiver.n_vertices):
            if mask >> self.cat.proj_index[i] & 1 and not mask >> self.cat.inj_index[i] & 1:
                return False
        return True
